use dh2::dh2::{
    assemble_dense, coupling_matrix, dense_matvec, spectral_norm, CouplingStorage, DenseOperator,
    Dh2Config, Dh2Matrix, GalerkinQuadrature,
};
use dh2::direction::Direction;
use dh2::geometry::sphere_mesh;
use dh2::interp::{BlockInterpolant, BoxNd, InterpolationRule};
use dh2::kernels::{HelmholtzKernel, Kernel, KernelKind};
use dh2::tree::BlockStatus;
use dh2::{Dh2, Mesh};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Small sphere with directional admissible blocks.
fn directional_case(m: usize) -> (Mesh, GalerkinQuadrature<f64>, Dh2) {
    let mesh = sphere_mesh(8).unwrap();
    let quad = GalerkinQuadrature::standard(&mesh).unwrap();
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 3.0).unwrap();
    let cfg = Dh2Config {
        m,
        eta1: 1.0,
        eta2: 2.0,
        leaf_size: 16,
        coupling: CouplingStorage::Stored,
    };
    let a = Dh2Matrix::build(&mesh, kernel, &quad, &cfg).unwrap();
    (mesh, quad, a)
}

/// `sum_b materialize(b) x`, scattered through the cluster orderings.
fn blockwise_product(a: &Dh2, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
    for b in a.blocks().leaves() {
        let blk = a.blocks().block(b);
        let d = a.materialize_block(b).unwrap();
        let rows = a.tree().indices(blk.row);
        let cols = a.tree().indices(blk.col);
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                y[i] += d[[r, c]] * x[j];
            }
        }
    }
    y
}

#[test]
fn matvec_matches_materialized_blocks() {
    let (_, _, a) = directional_case(2);
    let directional = a
        .blocks()
        .admissible()
        .iter()
        .filter(|&&b| match a.blocks().block(b).status {
            BlockStatus::Admissible { direction } => !a.directions().direction(direction).is_zero(),
            _ => false,
        })
        .count();
    assert!(directional > 0);
    for seed in 0..3 {
        let x = random(a.len(), seed);
        let y = a.matvec(&x).unwrap();
        let z = blockwise_product(&a, &x);
        assert!(diff(&y, &z) <= 1e-12 * norm(&z));
    }
}

#[test]
fn zero_and_linearity() {
    let (_, _, a) = directional_case(2);
    let n = a.len();
    let zero = vec![Complex64::new(0.0, 0.0); n];
    assert!(a
        .matvec(&zero)
        .unwrap()
        .iter()
        .all(|z| *z == Complex64::new(0.0, 0.0)));
    let x1 = random(n, 1);
    let x2 = random(n, 2);
    let alpha = Complex64::new(0.3, -1.7);
    let lhs: Vec<_> = x1.iter().zip(&x2).map(|(a, b)| alpha * a + b).collect();
    let y = a.matvec(&lhs).unwrap();
    let y1 = a.matvec(&x1).unwrap();
    let y2 = a.matvec(&x2).unwrap();
    let rhs: Vec<_> = y1.iter().zip(&y2).map(|(a, b)| alpha * a + b).collect();
    assert!(diff(&y, &rhs) <= 1e-12 * norm(&rhs));
    assert!(a.matvec(&x1[1..]).is_err());
}

#[test]
fn adjoint_is_consistent() {
    let (_, _, a) = directional_case(2);
    let x = random(a.len(), 5);
    let y = random(a.len(), 6);
    let ax = a.matvec(&x).unwrap();
    let ahy = a.matvec_adjoint(&y).unwrap();
    let lhs: Complex64 = ax.iter().zip(&y).map(|(u, v)| v.conj() * u).sum();
    let rhs: Complex64 = x.iter().zip(&ahy).map(|(u, v)| v.conj() * u).sum();
    assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
}

#[test]
fn nearfield_is_bit_identical_to_dense() {
    let (mesh, quad, a) = directional_case(2);
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 3.0).unwrap();
    let g = assemble_dense(&mesh, &kernel, &quad, false).unwrap();
    for (k, &b) in a.blocks().inadmissible().iter().enumerate() {
        let blk = a.blocks().block(b);
        let near = a.nearfield(k);
        for (r, &i) in a.tree().indices(blk.row).iter().enumerate() {
            for (c, &j) in a.tree().indices(blk.col).iter().enumerate() {
                assert_eq!(near[[r, c]], g[[i, j]], "block {b} entry ({i}, {j})");
            }
        }
        assert_eq!(a.materialize_block(b).unwrap(), *near);
    }
}

#[test]
fn only_nearfield_reproduces_dense_matvec() {
    let mesh = sphere_mesh(6).unwrap();
    let quad = GalerkinQuadrature::standard(&mesh).unwrap();
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 2.0).unwrap();
    let cfg = Dh2Config {
        m: 2,
        eta1: 10.0,
        eta2: 0.0,
        leaf_size: 16,
        coupling: CouplingStorage::Stored,
    };
    let a = Dh2Matrix::build(&mesh, kernel, &quad, &cfg).unwrap();
    assert!(a.blocks().admissible().is_empty());
    let g = assemble_dense(&mesh, &kernel, &quad, false).unwrap();
    let x = random(a.len(), 9);
    let y = a.matvec(&x).unwrap();
    let z = dense_matvec(&g, &x);
    assert!(diff(&y, &z) <= 1e-12 * norm(&z));
}

#[test]
fn admissible_leaf_block_matches_direct_quadrature() {
    let (mesh, quad, a) = directional_case(2);
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 3.0).unwrap();
    // an admissible block between two leaf clusters with a non-zero direction
    let (k, b) = a
        .blocks()
        .admissible()
        .iter()
        .enumerate()
        .find(|(k, &b)| {
            let blk = a.blocks().block(b);
            a.tree().cluster(blk.row).is_leaf()
                && a.tree().cluster(blk.col).is_leaf()
                && !a.directions().direction(a.block_direction(*k)).is_zero()
        })
        .expect("directional leaf block");
    let blk = a.blocks().block(*b);
    let c = a.directions().direction(a.block_direction(k)).clone();
    let approx = BlockInterpolant::new(
        |x: &[f64], y: &[f64]| kernel.eval(x, y),
        a.tree().cluster(blk.row).bbox.clone(),
        a.tree().cluster(blk.col).bbox.clone(),
        a.rule().clone(),
        c,
        3.0,
    )
    .unwrap();
    let m = a.materialize_block(*b).unwrap();
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for (r, &i) in a.tree().indices(blk.row).iter().enumerate() {
        for (s, &j) in a.tree().indices(blk.col).iter().enumerate() {
            let mut v = Complex64::new(0.0, 0.0);
            for (x, wx) in quad.nodes(i).iter().zip(quad.node_weights(i)) {
                for (y, wy) in quad.nodes(j).iter().zip(quad.node_weights(j)) {
                    v += approx.eval(x, y) * (wx * wy);
                }
            }
            scale = scale.max(v.norm());
            worst = worst.max((v - m[[r, s]]).norm());
        }
    }
    assert!(worst <= 1e-10 * scale, "{worst} vs {scale}");
    let _ = mesh;
}

#[test]
fn coupling_swap_symmetry_and_moduli() {
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 7.0).unwrap();
    let rule = InterpolationRule::chebyshev(2);
    let tau = BoxNd::new(vec![0.0, 0.0, 0.0], vec![0.5, 0.4, 0.3]).unwrap();
    let sigma = BoxNd::new(vec![2.0, 0.1, 0.0], vec![2.4, 0.6, 0.5]).unwrap();
    let c = Direction::new(&[-1.0, -0.1, 0.0]);
    let s = coupling_matrix(&kernel, &tau, &sigma, &c, &rule);
    let swapped = coupling_matrix(&kernel, &sigma, &tau, &c.negated(), &rule);
    let zero = coupling_matrix(&kernel, &tau, &sigma, &Direction::zero(3), &rule);
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            assert!((s[[i, j]] - swapped[[j, i]]).norm() <= 1e-15 * s[[i, j]].norm());
            assert!(
                (s[[i, j]].norm() - zero[[i, j]].norm() as f64).abs()
                    <= 1e-14 * zero[[i, j]].norm()
            );
        }
    }
    let laplace = HelmholtzKernel::new(KernelKind::Helmholtz3d, 0.0).unwrap();
    let l = coupling_matrix(&laplace, &tau, &sigma, &Direction::zero(3), &rule);
    assert!(l.iter().all(|z| z.im == 0.0 && z.re > 0.0));
}

#[test]
fn laplace_approximation_is_accurate() {
    let mesh = sphere_mesh(8).unwrap();
    let quad = GalerkinQuadrature::standard(&mesh).unwrap();
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 0.0).unwrap();
    let g = assemble_dense(&mesh, &kernel, &quad, false).unwrap();
    let cfg = Dh2Config {
        m: 3,
        eta1: 10.0,
        eta2: 1.0,
        leaf_size: 16,
        coupling: CouplingStorage::OnDemand,
    };
    let a = Dh2Matrix::build(&mesh, kernel, &quad, &cfg).unwrap();
    assert!(!a.blocks().admissible().is_empty());
    let mut d: Array2<Complex64> = g.clone();
    a.subtract_from(&mut d).unwrap();
    let err = spectral_norm(&DenseOperator::new(&d), 20, 1).unwrap();
    let gn = spectral_norm(&DenseOperator::new(&g), 20, 1).unwrap();
    assert!(err <= 1e-4 * gn, "{err} vs {gn}");
}

#[test]
fn stored_and_on_demand_agree() {
    let (mesh, quad, a) = directional_case(2);
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, 3.0).unwrap();
    let cfg = Dh2Config {
        m: 2,
        eta1: 1.0,
        eta2: 2.0,
        leaf_size: 16,
        coupling: CouplingStorage::OnDemand,
    };
    let b = Dh2Matrix::build(&mesh, kernel, &quad, &cfg).unwrap();
    let x = random(a.len(), 3);
    assert_eq!(a.matvec(&x).unwrap(), b.matvec(&x).unwrap());
    assert!(b.storage() < a.storage());
}

#[test]
fn farfield_storage_below_dense_at_benchmark_size() {
    use dh2::dh2::ClusterBasis;
    use dh2::tree::{Admissibility, BlockTree, ClusterTree, DirectionFamily};
    let mesh = sphere_mesh(24).unwrap();
    let n = mesh.len();
    let quad = GalerkinQuadrature::standard(&mesh).unwrap();
    for (m, leaf) in [(2, 32), (3, 48), (4, 64)] {
        let tree = ClusterTree::from_mesh(&mesh, leaf).unwrap();
        let dirs = DirectionFamily::build(6.0, 10.0, &tree.level_diameters()).unwrap();
        let p = Admissibility {
            kappa: 6.0,
            eta1: 10.0,
            eta2: 1.0,
        };
        let blocks = BlockTree::build(&tree, &dirs, &p).unwrap();
        let rule = InterpolationRule::chebyshev(m);
        let basis = ClusterBasis::build(&tree, &dirs, &blocks, &quad, &rule, 6.0).unwrap();
        let coupling = blocks.admissible().len() * basis.rank() * basis.rank();
        assert!(basis.storage() + coupling < n * n, "m={m}");
    }
}
