//! The directional H^2-matrix and its three-phase matrix-vector product.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::TriMesh;
use crate::interp::{grid_points_flat, InterpolationRule};
use crate::kernels::Kernel;
use crate::scalar::Real;
use crate::tree::{Admissibility, BlockStatus, BlockTree, ClusterTree, DirectionFamily};

use super::basis::ClusterBasis;
use super::galerkin::GalerkinQuadrature;

/// Whether coupling matrices are kept in memory or recomputed when needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingStorage {
    #[default]
    Stored,
    OnDemand,
}

/// Everything needed to set up an approximation on a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dh2Config<T> {
    /// Interpolation degree per axis.
    pub m: usize,
    pub eta1: T,
    pub eta2: T,
    pub leaf_size: usize,
    pub coupling: CouplingStorage,
}

/// `(row slot, col slot, coupling)`.
type FarBlock<T> = (usize, usize, Option<Array2<Complex<T>>>);

#[derive(Debug, Clone)]
pub struct Dh2Matrix<T, K> {
    tree: ClusterTree<T>,
    dirs: DirectionFamily<T>,
    blocks: BlockTree,
    kernel: K,
    rule: InterpolationRule<T>,
    basis: ClusterBasis<T>,
    /// Per admissible leaf (same order as `blocks.admissible()`):
    /// `(row slot, col slot, coupling)`.
    farfield: Vec<FarBlock<T>>,
    /// Per inadmissible leaf, same order as `blocks.inadmissible()`.
    nearfield: Vec<Array2<Complex<T>>>,
}

type C<T> = Complex<T>;

fn zero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// `S(nu, mu) = k_c(xi_{tau,nu}, xi_{sigma,mu})`.
pub fn coupling_matrix<T: Real, K: Kernel<T>>(
    kernel: &K,
    tau: &crate::interp::BoxNd<T>,
    sigma: &crate::interp::BoxNd<T>,
    c: &crate::direction::Direction<T>,
    rule: &InterpolationRule<T>,
) -> Array2<C<T>> {
    let n = tau.dim();
    let gx = grid_points_flat(tau, rule);
    let gy = grid_points_flat(sigma, rule);
    let k = gx.len() / n;
    let mut s = Array2::from_elem((k, gy.len() / n), zero());
    for (r, x) in gx.chunks_exact(n).enumerate() {
        for (col, y) in gy.chunks_exact(n).enumerate() {
            s[[r, col]] = kernel.eval_modified(x, y, c);
        }
    }
    s
}

impl<T: Real, K: Kernel<T> + Clone> Dh2Matrix<T, K> {
    /// Cluster tree, directions, block tree and all matrices from scratch.
    pub fn build(
        mesh: &TriMesh<T>,
        kernel: K,
        quad: &GalerkinQuadrature<T>,
        cfg: &Dh2Config<T>,
    ) -> Result<Self> {
        let tree = ClusterTree::from_mesh(mesh, cfg.leaf_size)?;
        let kappa = kernel.wavenumber();
        let dirs = DirectionFamily::build(kappa, cfg.eta1, &tree.level_diameters())?;
        let params = Admissibility {
            kappa,
            eta1: cfg.eta1,
            eta2: cfg.eta2,
        };
        let blocks = BlockTree::build(&tree, &dirs, &params)?;
        Self::assemble(
            mesh,
            tree,
            dirs,
            blocks,
            kernel,
            InterpolationRule::chebyshev(cfg.m),
            quad,
            cfg.coupling,
        )
    }

    /// Fills bases, couplings and nearfield for a given partition.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        mesh: &TriMesh<T>,
        tree: ClusterTree<T>,
        dirs: DirectionFamily<T>,
        blocks: BlockTree,
        kernel: K,
        rule: InterpolationRule<T>,
        quad: &GalerkinQuadrature<T>,
        coupling: CouplingStorage,
    ) -> Result<Self> {
        if tree.cluster(0).size() != mesh.len() {
            return Err(Error::Inconsistent("tree does not match mesh".into()));
        }
        if kernel.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: kernel.dim(),
            });
        }
        let kappa = kernel.wavenumber();
        let basis = ClusterBasis::build(&tree, &dirs, &blocks, quad, &rule, kappa)?;
        let farfield = blocks
            .admissible()
            .par_iter()
            .map(|&b| {
                let blk = blocks.block(b);
                let BlockStatus::Admissible { direction } = blk.status else {
                    unreachable!("admissible list holds admissible blocks")
                };
                let rs = basis.slot(blk.row, direction).expect("row slot");
                let cs = basis.slot(blk.col, direction).expect("col slot");
                let s = (coupling == CouplingStorage::Stored).then(|| {
                    coupling_matrix(
                        &kernel,
                        &tree.cluster(blk.row).bbox,
                        &tree.cluster(blk.col).bbox,
                        dirs.direction(direction),
                        &rule,
                    )
                });
                (rs, cs, s)
            })
            .collect();
        let nearfield = blocks
            .inadmissible()
            .par_iter()
            .map(|&b| {
                let blk = blocks.block(b);
                quad.block(mesh, &kernel, tree.indices(blk.row), tree.indices(blk.col))
            })
            .collect();
        Ok(Self {
            tree,
            dirs,
            blocks,
            kernel,
            rule,
            basis,
            farfield,
            nearfield,
        })
    }

    pub fn len(&self) -> usize {
        self.tree.cluster(0).size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tree(&self) -> &ClusterTree<T> {
        &self.tree
    }

    pub fn directions(&self) -> &DirectionFamily<T> {
        &self.dirs
    }

    pub fn blocks(&self) -> &BlockTree {
        &self.blocks
    }

    pub fn basis(&self) -> &ClusterBasis<T> {
        &self.basis
    }

    pub fn rule(&self) -> &InterpolationRule<T> {
        &self.rule
    }

    /// Direction of the `k`-th admissible leaf.
    pub fn block_direction(&self, k: usize) -> usize {
        self.basis.slots()[self.farfield[k].0].direction
    }

    /// Coupling matrix of the `k`-th admissible leaf.
    pub fn coupling(&self, k: usize) -> Array2<C<T>> {
        if let Some(s) = &self.farfield[k].2 {
            return s.clone();
        }
        let blk = self.blocks.block(self.blocks.admissible()[k]);
        coupling_matrix(
            &self.kernel,
            &self.tree.cluster(blk.row).bbox,
            &self.tree.cluster(blk.col).bbox,
            self.dirs.direction(self.block_direction(k)),
            &self.rule,
        )
    }

    /// Nearfield block of the `k`-th inadmissible leaf.
    pub fn nearfield(&self, k: usize) -> &Array2<C<T>> {
        &self.nearfield[k]
    }

    /// Stored complex scalars: bases, transfers, couplings and nearfield.
    pub fn storage(&self) -> usize {
        self.basis.storage()
            + self
                .farfield
                .iter()
                .map(|(_, _, s)| s.as_ref().map_or(0, |s| s.len()))
                .sum::<usize>()
            + self.nearfield.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Dense version of leaf block `b` (a block-tree id), rows and columns in
    /// cluster order, i.e. `tree.indices(row) x tree.indices(col)`.
    pub fn materialize_block(&self, b: usize) -> Result<Array2<C<T>>> {
        if b >= self.blocks.len() {
            return Err(Error::UnknownBlock(b));
        }
        match self.blocks.block(b).status {
            BlockStatus::Subdivided => Err(Error::UnknownBlock(b)),
            BlockStatus::Inadmissible => {
                let k = self
                    .blocks
                    .inadmissible()
                    .binary_search(&b)
                    .expect("listed");
                Ok(self.nearfield[k].clone())
            }
            BlockStatus::Admissible { .. } => {
                let k = self.blocks.admissible().binary_search(&b).expect("listed");
                let (rs, cs, _) = &self.farfield[k];
                let vt = self.basis.expand(*rs);
                let vs = self.basis.expand(*cs);
                Ok(low_rank_product(
                    vt.view(),
                    self.coupling(k).view(),
                    vs.view(),
                ))
            }
        }
    }

    /// `y = A x` (or `A^H x`) through the forward, coupling and backward
    /// phases plus the nearfield.
    fn apply_impl(&self, x: &[C<T>], y: &mut [C<T>], adjoint: bool) -> Result<()> {
        let n = self.len();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if x.len() != n { x.len() } else { y.len() },
            });
        }
        y.iter_mut().for_each(|v| *v = zero());
        let k = self.basis.rank();
        let slots = self.basis.slots();
        let mut xhat: Vec<Array1<C<T>>> = vec![Array1::from_elem(k, zero()); slots.len()];
        let mut yhat: Vec<Array1<C<T>>> = vec![Array1::from_elem(k, zero()); slots.len()];

        // forward: sons have larger ids than their fathers
        for t in (0..self.tree.len()).rev() {
            for sl in self.basis.cluster_slots(t) {
                let slot = &slots[sl];
                let acc = if let Some(v) = &slot.leaf {
                    let xt: Array1<C<T>> =
                        self.tree.indices(t).iter().map(|&i| x[i].conj()).collect();
                    v.t().dot(&xt).mapv(|z| z.conj())
                } else {
                    let mut acc = Array1::from_elem(k, zero());
                    for (son, e) in &slot.transfers {
                        let xs = xhat[*son].mapv(|z| z.conj());
                        acc = acc + e.t().dot(&xs).mapv(|z| z.conj());
                    }
                    acc
                };
                xhat[sl] = acc;
            }
        }

        for (idx, (rs, cs, _)) in self.farfield.iter().enumerate() {
            let s = self.coupling(idx);
            if adjoint {
                let xr = xhat[*rs].mapv(|z| z.conj());
                let v = s.t().dot(&xr).mapv(|z| z.conj());
                yhat[*cs] = &yhat[*cs] + &v;
            } else {
                let v = s.dot(&xhat[*cs]);
                yhat[*rs] = &yhat[*rs] + &v;
            }
        }

        // backward
        for t in 0..self.tree.len() {
            for sl in self.basis.cluster_slots(t) {
                let slot = &slots[sl];
                if let Some(v) = &slot.leaf {
                    let out = v.dot(&yhat[sl]);
                    for (&i, z) in self.tree.indices(t).iter().zip(out.iter()) {
                        y[i] = y[i] + *z;
                    }
                } else {
                    let yh = yhat[sl].clone();
                    for (son, e) in &slot.transfers {
                        let v = e.dot(&yh);
                        yhat[*son] = &yhat[*son] + &v;
                    }
                }
            }
        }

        for (idx, &b) in self.blocks.inadmissible().iter().enumerate() {
            let blk = self.blocks.block(b);
            let (rows, cols) = (self.tree.indices(blk.row), self.tree.indices(blk.col));
            let g = &self.nearfield[idx];
            if adjoint {
                for (r, &i) in rows.iter().enumerate() {
                    for (c, &j) in cols.iter().enumerate() {
                        y[j] = y[j] + g[[r, c]].conj() * x[i];
                    }
                }
            } else {
                for (r, &i) in rows.iter().enumerate() {
                    let mut acc = zero();
                    for (c, &j) in cols.iter().enumerate() {
                        acc = acc + g[[r, c]] * x[j];
                    }
                    y[i] = y[i] + acc;
                }
            }
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        let mut y = vec![zero(); self.len()];
        self.apply_impl(x, &mut y, false)?;
        Ok(y)
    }

    pub fn matvec_adjoint(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        let mut y = vec![zero(); self.len()];
        self.apply_impl(x, &mut y, true)?;
        Ok(y)
    }

    /// Overwrites `g` with `g - A` block by block: nearfield blocks are
    /// subtracted as stored, farfield blocks are expanded on the fly.
    /// Basis expansions are cached per slot while this runs.
    pub fn subtract_from(&self, g: &mut Array2<C<T>>) -> Result<()> {
        let n = self.len();
        if g.dim() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.nrows(),
            });
        }
        let mut cache: Vec<Option<Array2<C<T>>>> = vec![None; self.basis.slots().len()];
        // children first so expansions can reuse their sons
        for t in (0..self.tree.len()).rev() {
            for sl in self.basis.cluster_slots(t) {
                let slot = &self.basis.slots()[sl];
                let v = if let Some(v) = &slot.leaf {
                    v.clone()
                } else {
                    let parts: Vec<Array2<C<T>>> = slot
                        .transfers
                        .iter()
                        .map(|(son, e)| cache[*son].as_ref().expect("son expanded").dot(e))
                        .collect();
                    let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
                    ndarray::concatenate(ndarray::Axis(0), &views).expect("matching widths")
                };
                cache[sl] = Some(v);
            }
        }
        let products: Vec<(usize, Array2<C<T>>)> = (0..self.farfield.len())
            .into_par_iter()
            .map(|k| {
                let (rs, cs, _) = &self.farfield[k];
                let vt = cache[*rs].as_ref().expect("cached");
                let vs = cache[*cs].as_ref().expect("cached");
                (
                    k,
                    low_rank_product(vt.view(), self.coupling(k).view(), vs.view()),
                )
            })
            .collect();
        for (k, p) in products {
            let blk = self.blocks.block(self.blocks.admissible()[k]);
            scatter_sub(
                g,
                self.tree.indices(blk.row),
                self.tree.indices(blk.col),
                &p,
            );
        }
        for (k, &b) in self.blocks.inadmissible().iter().enumerate() {
            let blk = self.blocks.block(b);
            scatter_sub(
                g,
                self.tree.indices(blk.row),
                self.tree.indices(blk.col),
                &self.nearfield[k],
            );
        }
        Ok(())
    }
}

fn scatter_sub<T: Real>(g: &mut Array2<C<T>>, rows: &[usize], cols: &[usize], b: &Array2<C<T>>) {
    for (r, &i) in rows.iter().enumerate() {
        let mut row = g.row_mut(i);
        let src = b.slice(s![r, ..]);
        for (c, &j) in cols.iter().enumerate() {
            row[j] = row[j] - src[c];
        }
    }
}

/// `V_t S V_s^H`.
pub fn low_rank_product<T: Real>(
    vt: ArrayView2<C<T>>,
    s: ArrayView2<C<T>>,
    vs: ArrayView2<C<T>>,
) -> Array2<C<T>> {
    let vsh = vs.t().mapv(|z| z.conj());
    if vt.nrows() <= vs.nrows() {
        vt.dot(&s).dot(&vsh)
    } else {
        vt.dot(&s.dot(&vsh))
    }
}

/// Dense `y = A x` for a matrix in DOF ordering.
pub fn dense_matvec<T: Real>(a: &Array2<C<T>>, x: &[C<T>]) -> Vec<C<T>> {
    a.dot(&ArrayView1::from(x)).to_vec()
}
