use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qtda::vqd::{pauli_decompose, spectrum_of_matrix, zero_count, VqdConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn hermitian(d: usize) -> impl Strategy<Value = DMatrix<C64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), d * d).prop_map(move |v| {
        let a = DMatrix::from_iterator(d, d, v.into_iter().map(|(re, im)| C64::new(re, im)));
        (&a + a.adjoint()).map(|z| z * 0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn decomposition_round_trip_and_padding(m in (2usize..=16).prop_flat_map(hermitian)) {
        let d = m.nrows();
        let h = pauli_decompose(&m).unwrap();
        let dim = h.dim();
        prop_assert_eq!(dim, d.next_power_of_two());
        let rebuilt = h.to_dense();
        let shift = h.shift().unwrap_or(0.0);
        for r in 0..dim {
            for c in 0..dim {
                let want = if r < d && c < d {
                    m[(r, c)]
                } else if r == c {
                    C64::new(shift, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                prop_assert!((rebuilt[(r, c)] - want).norm() < 1e-9);
            }
        }

        let mut expected: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
        expected.extend(std::iter::repeat_n(shift, dim - d));
        let got = sorted(rebuilt.symmetric_eigenvalues().iter().copied().collect());
        for (a, b) in got.iter().zip(sorted(expected)) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

/// `Q diag(λ) Qᵀ` with a Haar-like orthogonal `Q` and each `λ` either 0 or
/// drawn from `[0.2, 3]`.
fn random_psd(d: usize, rng: &mut ChaCha20Rng) -> (DMatrix<f64>, Vec<f64>) {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = g.qr().q();
    let lambda: Vec<f64> = (0..d).map(|_| if rng.random_bool(0.35) { 0.0 } else { rng.random_range(0.2..3.0) }).collect();
    let m = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda.clone())) * q.transpose();
    (m.map(|v| if v.abs() < 1e-14 { 0.0 } else { v }), lambda)
}

#[test]
fn vqd_matches_classical_on_random_psd() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for case in 0..12 {
        let d = 2 + case % 7;
        let (m, _) = random_psd(d, &mut rng);
        let m = (&m + m.transpose()) * 0.5;
        let r = spectrum_of_matrix(&m, &VqdConfig::with_seed(case as u64)).unwrap();
        let h = qtda::vqd::pauli_decompose_real(&m).unwrap();
        let classical = sorted(h.to_dense().symmetric_eigenvalues().iter().copied().collect());
        let got = r.eigenvalues();
        let worst = got.iter().zip(&classical).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let zeros = classical[..d].iter().filter(|v| v.abs() < 1e-2).count();
        assert!(worst < 1e-2, "case {case}: {got:?} vs {classical:?}");
        assert_eq!(zero_count(&r, 1e-2), zeros);
        assert!(r.max_overlap() < 1e-3);
    }
}
