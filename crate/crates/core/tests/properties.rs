use dh2::analysis::halton;
use dh2::bench::format_sci;
use dh2::direction::Direction;
use dh2::interp::{BoxNd, InterpolationRule};
use dh2::tree::{is_admissible, Admissibility, ClusterTree, Support};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64]
}

proptest! {
    #[test]
    fn lagrange_partition_of_unity(m in 0usize..15, t in -1.0..1.0f64) {
        let rule = InterpolationRule::<f64>::chebyshev(m);
        let mut v = vec![0.0; m + 1];
        rule.eval_all(t, &mut v);
        let s: f64 = v.iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-11);
    }

    #[test]
    fn cluster_tree_partitions(points in prop::collection::vec(point(), 1..300), leaf in 1usize..40) {
        let supports: Vec<Support<f64>> = points
            .iter()
            .map(|&p| Support { centroid: p, lo: p, hi: p })
            .collect();
        let tree = ClusterTree::from_supports(&supports, leaf).unwrap();
        let mut seen = vec![false; points.len()];
        for l in tree.leaves() {
            prop_assert!(tree.indices(l).len() <= leaf || tree.cluster(l).size() == 1
                || tree.indices(l).iter().all(|&i| points[i] == points[tree.indices(l)[0]]));
            for &i in tree.indices(l) {
                prop_assert!(!seen[i]);
                seen[i] = true;
                prop_assert!(tree.cluster(l).bbox.contains(&points[i]));
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn admissibility_is_swap_symmetric(
        a in point(), b in point(), ea in 0.1..2.0f64, eb in 0.1..2.0f64,
        c in point(), kappa in 0.0..20.0f64, eta2 in 0.5..3.0f64,
    ) {
        let tau = BoxNd::new(a.to_vec(), a.iter().map(|x| x + ea).collect()).unwrap();
        let sigma = BoxNd::new(b.to_vec(), b.iter().map(|x| x + eb).collect()).unwrap();
        let dir = Direction::new(&c);
        let p = Admissibility { kappa, eta1: 5.0, eta2 };
        prop_assert_eq!(
            is_admissible(&tau, &sigma, &dir, &p),
            is_admissible(&sigma, &tau, &dir.negated(), &p)
        );
    }

    #[test]
    fn halton_in_unit_cube(i in 0usize..100000, d in 1usize..12) {
        prop_assert!(halton(i, d).iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn sci_format_keeps_four_digits(x in 1e-99..1e99f64) {
        let s = format_sci(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-4);
        prop_assert_eq!(s.split_once('e').unwrap().1.len(), 3);
    }
}
