use crate::error::{Error, Result};
use crate::geometry::{raw_bounds, TriMesh};
use crate::interp::BoxNd;
use crate::scalar::Real;

/// One node of a cluster tree. Its index set is `order[start..end]` of the
/// owning tree.
#[derive(Debug, Clone)]
pub struct Cluster<T> {
    pub start: usize,
    pub end: usize,
    pub bbox: BoxNd<T>,
    pub level: usize,
    pub sons: Vec<usize>,
    pub father: Option<usize>,
}

impl<T> Cluster<T> {
    pub fn size(&self) -> usize {
        self.end - self.start
    }

    pub fn is_leaf(&self) -> bool {
        self.sons.is_empty()
    }
}

/// Cluster tree stored as an arena; node 0 is the root, and nodes are in
/// breadth-first order so fathers precede their sons.
#[derive(Debug, Clone)]
pub struct ClusterTree<T> {
    clusters: Vec<Cluster<T>>,
    order: Vec<usize>,
}

/// Per-index geometry the splitting needs: a representative point and the
/// bounds of the support.
#[derive(Debug, Clone)]
pub struct Support<T> {
    pub centroid: [T; 3],
    pub lo: [T; 3],
    pub hi: [T; 3],
}

impl<T: Real> ClusterTree<T> {
    /// Geometric bisection over the triangles of `mesh`.
    pub fn from_mesh(mesh: &TriMesh<T>, leaf_size: usize) -> Result<Self> {
        if mesh.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let supports = (0..mesh.len())
            .map(|i| {
                let (lo, hi) = raw_bounds(mesh, &[i])?;
                Ok(Support {
                    centroid: mesh.centroids()[i],
                    lo,
                    hi,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_supports(&supports, leaf_size)
    }

    pub fn from_supports(supports: &[Support<T>], leaf_size: usize) -> Result<Self> {
        if supports.is_empty() {
            return Err(Error::EmptyMesh);
        }
        if leaf_size == 0 {
            return Err(Error::Config("leaf size must be >= 1".into()));
        }
        let mut order: Vec<usize> = (0..supports.len()).collect();
        let mut clusters = vec![Cluster {
            start: 0,
            end: supports.len(),
            bbox: hull(supports, &order)?,
            level: 0,
            sons: Vec::new(),
            father: None,
        }];
        let mut next = 0;
        while next < clusters.len() {
            let id = next;
            next += 1;
            let (start, end) = (clusters[id].start, clusters[id].end);
            if end - start <= leaf_size {
                continue;
            }
            let mid = split(supports, &mut order[start..end], &clusters[id].bbox) + start;
            let level = clusters[id].level + 1;
            for (s, e) in [(start, mid), (mid, end)] {
                let son = clusters.len();
                clusters.push(Cluster {
                    start: s,
                    end: e,
                    bbox: hull(supports, &order[s..e])?,
                    level,
                    sons: Vec::new(),
                    father: Some(id),
                });
                clusters[id].sons.push(son);
            }
        }
        Ok(Self { clusters, order })
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn cluster(&self, id: usize) -> &Cluster<T> {
        &self.clusters[id]
    }

    pub fn clusters(&self) -> &[Cluster<T>] {
        &self.clusters
    }

    /// Permutation: position `p` in cluster order holds DOF `order[p]`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn indices(&self, id: usize) -> &[usize] {
        let c = &self.clusters[id];
        &self.order[c.start..c.end]
    }

    pub fn depth(&self) -> usize {
        self.clusters.iter().map(|c| c.level).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.clusters[i].is_leaf())
    }

    /// `delta_l`: the largest bounding-box diameter on each level.
    pub fn level_diameters(&self) -> Vec<T> {
        let mut d = vec![T::zero(); self.depth() + 1];
        for c in &self.clusters {
            d[c.level] = d[c.level].max(c.bbox.diameter());
        }
        d
    }
}

fn hull<T: Real>(supports: &[Support<T>], idx: &[usize]) -> Result<BoxNd<T>> {
    if idx.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut lo = vec![T::infinity(); 3];
    let mut hi = vec![T::neg_infinity(); 3];
    for &i in idx {
        for d in 0..3 {
            lo[d] = lo[d].min(supports[i].lo[d]);
            hi[d] = hi[d].max(supports[i].hi[d]);
        }
    }
    BoxNd::hull_inflated(lo, hi)
}

/// Reorders `idx` so the first part lies in the lower half; returns the
/// split position, which is always strictly inside `1..idx.len()`.
fn split<T: Real>(supports: &[Support<T>], idx: &mut [usize], bbox: &BoxNd<T>) -> usize {
    let axis = (0..3)
        .max_by(|&a, &b| bbox.extent(a).partial_cmp(&bbox.extent(b)).unwrap())
        .unwrap_or(0);
    let mid = bbox.interval(axis).midpoint();
    idx.sort_by(|&a, &b| {
        supports[a].centroid[axis]
            .partial_cmp(&supports[b].centroid[axis])
            .unwrap()
            .then(a.cmp(&b))
    });
    let lower = idx
        .iter()
        .take_while(|&&i| supports[i].centroid[axis] < mid)
        .count();
    if lower == 0 || lower == idx.len() {
        // all centroids on one side: fall back to the median
        idx.len() / 2
    } else {
        lower
    }
}
