mod common;

use proptest::prelude::*;
use qtda::persistence::{compute_persistence, compute_persistence_with, persistence_pairs};
use qtda::rips::{
    betti, betti_at, boundary_matrix, build_rips, default_b0_grid, default_b1_grid, laplacian, undominated_vertices,
    Backend, CLASSICAL_TOL,
};
use qtda::betti_from_barcode;

fn cloud(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 3..=max_n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn boundary_of_boundary_is_zero(pts in cloud(15), eps in 0.1f64..0.8) {
        let c = build_rips(&common::euclidean(&pts), eps, 3).unwrap();
        for k in 1..3 {
            let prod = boundary_matrix(&c, k).unwrap().compose(&boundary_matrix(&c, k + 1).unwrap()).unwrap();
            prop_assert!(prod.iter().flatten().all(|&v| v == 0));
        }
    }

    #[test]
    fn laplacians_are_symmetric_psd(pts in cloud(12), eps in 0.1f64..0.7, k in 0usize..3) {
        let c = build_rips(&common::euclidean(&pts), eps, 3).unwrap();
        let lap = laplacian(&c, k).unwrap();
        let m = lap.matrix();
        prop_assert_eq!(m, &m.transpose());
        prop_assert!(lap.eigenvalues().iter().all(|&v| v >= -1e-10));
    }

    #[test]
    fn euler_poincare(pts in cloud(10), eps in 0.1f64..1.5) {
        // max_dim n-1 covers every possible simplex
        let top = pts.len() - 1;
        let c = build_rips(&common::euclidean(&pts), eps, top).unwrap();
        let mut chi_cells = 0i64;
        let mut chi_betti = 0i64;
        for k in 0..=top {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi_cells += sign * c.count(k) as i64;
            chi_betti += sign * betti(&c, k, &Backend::Classical, CLASSICAL_TOL).unwrap() as i64;
        }
        prop_assert_eq!(chi_cells, chi_betti);
    }

    #[test]
    fn pair_count_conservation(pts in cloud(14), eps in 0.1f64..1.0) {
        let c = build_rips(&common::euclidean(&pts), eps, 2).unwrap();
        let pairs = persistence_pairs(&c, true);
        let finite = pairs.iter().filter(|p| !p.is_infinite()).count();
        // every pair has one creator; finite pairs also have one destroyer
        prop_assert_eq!(pairs.len() + finite, c.total_count());
        for k in 0..=2 {
            let creators = pairs.iter().filter(|p| p.dimension == k).count();
            let destroyers = pairs.iter().filter(|p| p.dimension + 1 == k && !p.is_infinite()).count();
            prop_assert_eq!(creators + destroyers, c.count(k));
        }
    }

    #[test]
    fn barcode_is_deterministic(pts in cloud(12)) {
        let d = common::euclidean(&pts);
        let a = compute_persistence(&d, 1, 1.0).unwrap().to_json().unwrap();
        let b = compute_persistence(&d, 1, 1.0).unwrap().to_json().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn infinite_h0_bars_count_components(pts in cloud(20), max_eps in 0.05f64..1.0) {
        let d = common::euclidean(&pts);
        let b = compute_persistence_with(&d, 0, max_eps, true).unwrap();
        let infinite = b.dimension(0).filter(|p| p.is_infinite()).count();
        prop_assert_eq!(infinite, common::union_find_components(&d, max_eps));
    }

    #[test]
    fn domination_preserves_betti(pts in cloud(25), eps in 0.1f64..0.6) {
        let d = common::euclidean(&pts);
        let keep = undominated_vertices(&d, eps);
        let full = build_rips(&d, eps, 2).unwrap();
        let reduced = build_rips(&d.submatrix(&keep), eps, 2).unwrap();
        for k in 0..2 {
            prop_assert_eq!(
                betti(&full, k, &Backend::Classical, CLASSICAL_TOL).unwrap(),
                betti(&reduced, k, &Backend::Classical, CLASSICAL_TOL).unwrap()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Laplacian kernels against two independent oracles on both sweep grids.
    #[test]
    fn laplacian_betti_matches_oracles(pts in cloud(30)) {
        let d = common::euclidean(&pts);
        let barcode = compute_persistence(&d, 1, 1.0).unwrap();
        let grids = [default_b0_grid(), default_b1_grid()];
        for eps in grids.iter().flatten().copied() {
            let b0 = betti_at(&d, eps, 0, &Backend::Classical, CLASSICAL_TOL).unwrap();
            prop_assert_eq!(b0, common::union_find_components(&d, eps), "eps {}", eps);
            prop_assert_eq!(b0, betti_from_barcode(&barcode, 0, eps).unwrap(), "eps {}", eps);
            let b1 = betti_at(&d, eps, 1, &Backend::Classical, CLASSICAL_TOL).unwrap();
            prop_assert_eq!(b1, betti_from_barcode(&barcode, 1, eps).unwrap(), "eps {}", eps);
        }
    }
}
