//! Directional cluster bases: leaf matrices and transfer matrices.

use std::collections::BTreeSet;

use ndarray::Array2;
use num_complex::Complex;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::interp::{tensor_lagrange_values, BoxNd, InterpolationRule, MultiIndexSet};
use crate::scalar::{cis, Real};
use crate::tree::{BlockStatus, BlockTree, ClusterTree, DirectionFamily};

use super::galerkin::GalerkinQuadrature;

/// Basis data for one `(cluster, direction)` pair.
#[derive(Debug, Clone)]
pub struct Slot<T> {
    pub cluster: usize,
    /// Pool id in the direction family.
    pub direction: usize,
    /// `V_{tc}`, `|t| x K`, rows in cluster order (leaves only).
    pub leaf: Option<Array2<Complex<T>>>,
    /// `(son slot, E_{t'c})` for inner clusters.
    pub transfers: Vec<(usize, Array2<Complex<T>>)>,
}

/// Nested directional cluster basis, used for rows and columns alike.
#[derive(Debug, Clone)]
pub struct ClusterBasis<T> {
    rank: usize,
    slots: Vec<Slot<T>>,
    /// Sorted `(direction, slot)` per cluster.
    lookup: Vec<Vec<(usize, usize)>>,
}

/// Directions each cluster needs: those of its admissible blocks and the
/// son-mapped directions of its father.
pub fn cluster_directions<T: Real>(
    tree: &ClusterTree<T>,
    dirs: &DirectionFamily<T>,
    blocks: &BlockTree,
) -> Vec<BTreeSet<usize>> {
    let mut sets = vec![BTreeSet::new(); tree.len()];
    for &b in blocks.admissible() {
        let blk = blocks.block(b);
        if let BlockStatus::Admissible { direction } = blk.status {
            sets[blk.row].insert(direction);
            sets[blk.col].insert(direction);
        }
    }
    // fathers precede sons in the arena
    for t in 0..tree.len() {
        let c = tree.cluster(t);
        let mapped: Vec<usize> = sets[t].iter().map(|&d| dirs.son(c.level, d)).collect();
        for &s in &c.sons {
            sets[s].extend(mapped.iter().copied());
        }
    }
    sets
}

/// `V_{tc}(i, nu) = int phi_i(x) exp(i kappa <x, c>) L_{tau,nu}(x) dx`.
pub fn leaf_matrix<T: Real>(
    indices: &[usize],
    bbox: &BoxNd<T>,
    c: &Direction<T>,
    quad: &GalerkinQuadrature<T>,
    rule: &InterpolationRule<T>,
    kappa: T,
) -> Array2<Complex<T>> {
    let k = MultiIndexSet::new(rule.degree(), 3).len();
    let mut v = Array2::from_elem((indices.len(), k), Complex::new(T::zero(), T::zero()));
    let mut l = Vec::with_capacity(k);
    for (r, &i) in indices.iter().enumerate() {
        for (x, &w) in quad.nodes(i).iter().zip(quad.node_weights(i)) {
            tensor_lagrange_values(bbox, rule, x, &mut l);
            let phase = cis(kappa * c.dot(x)) * w;
            for (nu, &lv) in l.iter().enumerate() {
                v[[r, nu]] = v[[r, nu]] + phase * lv;
            }
        }
    }
    v
}

/// `E(nu', nu) = exp(i kappa <xi_{son,nu'}, c - c'>) L_{father,nu}(xi_{son,nu'})`,
/// built as a Kronecker product of one-dimensional factors.
pub fn transfer_matrix<T: Real>(
    son: &BoxNd<T>,
    father: &BoxNd<T>,
    c: &Direction<T>,
    c_son: &Direction<T>,
    rule: &InterpolationRule<T>,
    kappa: T,
) -> Array2<Complex<T>> {
    let q = rule.len();
    let dim = son.dim();
    let mut factors = Vec::with_capacity(dim);
    let mut lv = vec![T::zero(); q];
    for d in 0..dim {
        let shift = c.components()[d] - c_son.components()[d];
        let mut e = vec![Complex::new(T::zero(), T::zero()); q * q];
        for a in 0..q {
            let xi = son.interval(d).map_real(rule.points()[a]);
            rule.eval_all(father.interval(d).inverse_map_real(xi), &mut lv);
            let phase = cis(kappa * xi * shift);
            for b in 0..q {
                e[a * q + b] = phase * lv[b];
            }
        }
        factors.push(e);
    }
    let set = MultiIndexSet::new(rule.degree(), dim);
    let k = set.len();
    let idx: Vec<Vec<usize>> = (0..k).map(|f| set.unflatten(f)).collect();
    Array2::from_shape_fn((k, k), |(r, c)| {
        let (nr, nc) = (&idx[r], &idx[c]);
        (0..dim).fold(Complex::new(T::one(), T::zero()), |acc, d| {
            acc * factors[d][nr[d] * q + nc[d]]
        })
    })
}

impl<T: Real> ClusterBasis<T> {
    pub fn build(
        tree: &ClusterTree<T>,
        dirs: &DirectionFamily<T>,
        blocks: &BlockTree,
        quad: &GalerkinQuadrature<T>,
        rule: &InterpolationRule<T>,
        kappa: T,
    ) -> Result<Self> {
        let sets = cluster_directions(tree, dirs, blocks);
        let mut slots = Vec::new();
        let mut lookup = vec![Vec::new(); tree.len()];
        for (t, set) in sets.iter().enumerate() {
            for &d in set {
                lookup[t].push((d, slots.len()));
                slots.push(Slot {
                    cluster: t,
                    direction: d,
                    leaf: None,
                    transfers: Vec::new(),
                });
            }
        }
        let mut out = Self {
            rank: MultiIndexSet::new(rule.degree(), 3).len(),
            slots,
            lookup,
        };
        use rayon::prelude::*;
        let filled: Vec<Slot<T>> = out
            .slots
            .par_iter()
            .map(|s| out.fill(s, tree, dirs, quad, rule, kappa))
            .collect::<Result<_>>()?;
        out.slots = filled;
        Ok(out)
    }

    fn fill(
        &self,
        s: &Slot<T>,
        tree: &ClusterTree<T>,
        dirs: &DirectionFamily<T>,
        quad: &GalerkinQuadrature<T>,
        rule: &InterpolationRule<T>,
        kappa: T,
    ) -> Result<Slot<T>> {
        let c = tree.cluster(s.cluster);
        let dir = dirs.direction(s.direction);
        let mut slot = s.clone();
        if c.is_leaf() {
            slot.leaf = Some(leaf_matrix(
                tree.indices(s.cluster),
                &c.bbox,
                dir,
                quad,
                rule,
                kappa,
            ));
        } else {
            let son_dir = dirs.son(c.level, s.direction);
            for &son in &c.sons {
                let target = self.slot(son, son_dir).ok_or_else(|| {
                    Error::Inconsistent(format!("son {son} lacks direction {son_dir}"))
                })?;
                let e = transfer_matrix(
                    &tree.cluster(son).bbox,
                    &c.bbox,
                    dir,
                    dirs.direction(son_dir),
                    rule,
                    kappa,
                );
                slot.transfers.push((target, e));
            }
        }
        Ok(slot)
    }

    /// `K = (m + 1)^3`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn slots(&self) -> &[Slot<T>] {
        &self.slots
    }

    pub fn slot(&self, cluster: usize, direction: usize) -> Option<usize> {
        let l = &self.lookup[cluster];
        l.binary_search_by_key(&direction, |&(d, _)| d)
            .ok()
            .map(|i| l[i].1)
    }

    /// Slots of one cluster.
    pub fn cluster_slots(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.lookup[cluster].iter().map(|&(_, s)| s)
    }

    /// Explicit `V_{tc}` for any cluster, expanding transfer matrices.
    pub fn expand(&self, slot: usize) -> Array2<Complex<T>> {
        let s = &self.slots[slot];
        if let Some(v) = &s.leaf {
            return v.clone();
        }
        let parts: Vec<Array2<Complex<T>>> = s
            .transfers
            .iter()
            .map(|(son, e)| self.expand(*son).dot(e))
            .collect();
        let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
        ndarray::concatenate(ndarray::Axis(0), &views).expect("matching widths")
    }

    /// Stored complex scalars (leaf and transfer matrices).
    pub fn storage(&self) -> usize {
        self.slots
            .iter()
            .map(|s| {
                s.leaf.as_ref().map_or(0, |v| v.len())
                    + s.transfers.iter().map(|(_, e)| e.len()).sum::<usize>()
            })
            .sum()
    }
}
