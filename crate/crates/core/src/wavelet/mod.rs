//! Compactly supported orthonormal wavelets evaluated at arbitrary points.

mod cascade;
mod eval;
mod filters;

pub use cascade::{cascade_oracle, integer_values, CascadeTable};
pub use eval::{
    eval_periodized_phi, eval_periodized_psi, eval_phi, eval_psi, EvalPrecision, Evaluator,
};
pub use filters::{available_filters, load_filter, WaveletFilter};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::trapezoid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym10() -> WaveletFilter {
        load_filter("sym10").unwrap()
    }

    #[test]
    fn haar_scaling_function_is_indicator() {
        let haar = load_filter("haar").unwrap();
        let p = EvalPrecision::default();
        assert!((eval_phi(&haar, 0.3, p) - 1.0).abs() < 1e-12);
        assert!((eval_phi(&haar, 0.0, p) - 1.0).abs() < 1e-12);
        assert_eq!(eval_phi(&haar, 1.0, p), 0.0);
        assert_eq!(eval_phi(&haar, -0.2, p), 0.0);
    }

    #[test]
    fn haar_wavelet_signs() {
        let haar = load_filter("haar").unwrap();
        let p = EvalPrecision::default();
        assert!((eval_psi(&haar, 0.25, p) - 1.0).abs() < 1e-12);
        assert!((eval_psi(&haar, 0.75, p) + 1.0).abs() < 1e-12);
        assert_eq!(eval_psi(&haar, 1.5, p), 0.0);
    }

    #[test]
    fn sym10_outside_support_is_zero() {
        let f = sym10();
        let p = EvalPrecision::default();
        assert_eq!(eval_phi(&f, -1.0, p), 0.0);
        assert_eq!(eval_phi(&f, 19.0, p), 0.0);
        assert_eq!(eval_psi(&f, 25.0, p), 0.0);
    }

    #[test]
    fn sym10_phi_matches_cascade_at_dyadic_point() {
        let f = sym10();
        let table = cascade_oracle(&f, 12).unwrap();
        let expected = table.at(7.25).unwrap();
        let got = eval_phi(&f, 7.25, EvalPrecision::default());
        assert!((got - expected).abs() < 1e-6, "{got} vs {expected}");
    }

    #[test]
    fn sym10_psi_matches_cascade_two_scale_relation() {
        // psi(x) = sqrt(2) sum_k g_k phi(2x - k), with phi taken from the cascade table
        let f = sym10();
        let table = cascade_oracle(&f, 8).unwrap();
        let p = EvalPrecision::default();
        for &x in &[0.5, 3.125, 8.75, 9.0, 12.375, 17.5] {
            let oracle: f64 = f
                .highpass()
                .iter()
                .enumerate()
                .map(|(k, g)| std::f64::consts::SQRT_2 * g * table.at(2.0 * x - k as f64).unwrap_or(0.0))
                .sum();
            let got = eval_psi(&f, x, p);
            assert!((got - oracle).abs() < 1e-6, "x = {x}: {got} vs {oracle}");
        }
    }

    #[test]
    fn sym10_psi_integrates_to_zero() {
        let ev = Evaluator::new(&sym10(), EvalPrecision::default());
        let integral = trapezoid(|x| ev.psi(x), 0.0, 19.0, 1 << 14);
        assert!(integral.abs() < 1e-5, "{integral}");
    }

    #[test]
    fn vanishing_moments_sym10() {
        let ev = Evaluator::new(&sym10(), EvalPrecision::default());
        let n = 1usize << 14;
        let step = 19.0 / n as f64;
        let psi: Vec<f64> = (0..=n).map(|i| ev.psi(i as f64 * step)).collect();
        for r in 0..=4 {
            let vals: Vec<f64> = psi.iter().enumerate().map(|(i, p)| (i as f64 * step).powi(r) * p).collect();
            let moment = crate::numeric::trapezoid_values(&vals, step);
            assert!(moment.abs() < 1e-4, "moment {r}: {moment}");
        }
    }

    #[test]
    fn haar_periodized_level_zero_is_constant() {
        let haar = load_filter("haar").unwrap();
        let p = EvalPrecision::default();
        for &y in &[0.0, 0.25, 0.5, 0.99, 1.0] {
            assert!((eval_periodized_phi(&haar, 0, 0, y, p).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((eval_periodized_psi(&haar, 0, 0, 0.25, p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodized_rejects_bad_translation() {
        let p = EvalPrecision::default();
        assert!(eval_periodized_phi(&sym10(), 3, 8, 0.5, p).is_err());
        assert!(eval_periodized_psi(&sym10(), 3, -1, 0.5, p).is_err());
        assert!(eval_periodized_phi(&sym10(), 3, 1, 1.5, p).is_err());
    }

    #[test]
    fn sym10_level3_partition_of_unity() {
        let f = sym10();
        let p = EvalPrecision::default();
        for &y in &[0.1, 0.37, 0.9] {
            let total: f64 =
                (0..8).map(|k| 2f64.powf(-1.5) * eval_periodized_phi(&f, 3, k, y, p).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-8, "y = {y}: {total}");
        }
    }

    #[test]
    fn periodized_matches_brute_force_lattice_sum() {
        let f = sym10();
        let p = EvalPrecision::default();
        let ev = Evaluator::new(&f, p);
        let brute_phi: f64 = (-3..=3).map(|l| 4.0 * ev.phi(16.0 * (0.5 - l as f64) - 5.0)).sum();
        let brute_psi: f64 = (-3..=3).map(|l| 4.0 * ev.psi(16.0 * (0.9 - l as f64))).sum();
        assert!((eval_periodized_phi(&f, 4, 5, 0.5, p).unwrap() - brute_phi).abs() < 1e-13);
        assert!((eval_periodized_psi(&f, 4, 0, 0.9, p).unwrap() - brute_psi).abs() < 1e-13);

        let mut all = vec![0.0; 16];
        ev.periodized_phi_all(4, 0.5, &mut all);
        assert!((all[5] - brute_phi).abs() < 1e-12);
        ev.periodized_psi_all(4, 0.9, &mut all);
        assert!((all[0] - brute_psi).abs() < 1e-12);
    }

    #[test]
    fn batched_periodization_matches_single_point_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = EvalPrecision::default();
        for name in ["haar", "db2", "sym4", "sym10"] {
            let f = load_filter(name).unwrap();
            let ev = Evaluator::new(&f, p);
            for j in 0..6u32 {
                let y: f64 = rng.random();
                let mut phis = vec![0.0; 1 << j];
                let mut psis = vec![0.0; 1 << j];
                ev.periodized_phi_all(j, y, &mut phis);
                ev.periodized_psi_all(j, y, &mut psis);
                for k in 0..(1i64 << j) {
                    let a = eval_periodized_phi(&f, j, k, y, p).unwrap();
                    let b = eval_periodized_psi(&f, j, k, y, p).unwrap();
                    assert!((phis[k as usize] - a).abs() < 1e-11, "{name} j={j} k={k}");
                    assert!((psis[k as usize] - b).abs() < 1e-11, "{name} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn periodized_phi_orthogonal_to_psi() {
        let ev = Evaluator::new(&sym10(), EvalPrecision::default());
        let inner = trapezoid(
            |y| {
                let mut phis = [0.0; 8];
                let mut psis = [0.0; 8];
                ev.periodized_phi_all(3, y, &mut phis);
                ev.periodized_psi_all(3, y, &mut psis);
                phis[1] * psis[2]
            },
            0.0,
            1.0,
            1 << 14,
        );
        assert!(inner.abs() < 1e-5, "{inner}");
    }

    #[test]
    fn partition_of_unity_all_filters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ys: Vec<f64> = (0..100).map(|_| rng.random()).collect();
        for name in available_filters() {
            let ev = Evaluator::new(&load_filter(name).unwrap(), EvalPrecision::default());
            for j in 0..=6u32 {
                let mut out = vec![0.0; 1 << j];
                let scale = 2f64.powf(-(j as f64) / 2.0);
                for &y in &ys {
                    ev.periodized_phi_all(j, y, &mut out);
                    let total: f64 = out.iter().sum::<f64>() * scale;
                    assert!((total - 1.0).abs() < 1e-7, "{name} j={j} y={y}: {total}");
                }
            }
        }
    }

    #[test]
    fn level4_gram_matrix_is_identity() {
        let ev = Evaluator::new(&sym10(), EvalPrecision::default());
        let n = 1usize << 14;
        let mut rows = vec![vec![0.0; 16]; n + 1];
        for (i, row) in rows.iter_mut().enumerate() {
            ev.periodized_phi_all(4, i as f64 / n as f64, row);
        }
        let step = 1.0 / n as f64;
        for a in 0..16 {
            for b in 0..16 {
                let vals: Vec<f64> = rows.iter().map(|r| r[a] * r[b]).collect();
                let g = crate::numeric::trapezoid_values(&vals, step);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((g - expected).abs() < 5e-4, "G[{a}][{b}] = {g}");
            }
        }
    }

    #[test]
    fn cascade_haar_is_indicator() {
        let table = cascade_oracle(&load_filter("haar").unwrap(), 3).unwrap();
        for (x, v) in table.points() {
            if x < 1.0 {
                assert!((v - 1.0).abs() < 1e-12, "x = {x}");
            } else {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn cascade_sym10_has_unit_mass() {
        let table = cascade_oracle(&sym10(), 10).unwrap();
        let mass: f64 = table.values().iter().sum::<f64>() * table.step();
        assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    }

    #[test]
    fn cascade_rejects_zero_levels() {
        assert!(cascade_oracle(&sym10(), 0).is_err());
    }

    #[test]
    fn precision_20_vs_40_digits() {
        let f = sym10();
        let coarse = Evaluator::new(&f, EvalPrecision::new(20).unwrap());
        let fine = Evaluator::new(&f, EvalPrecision::new(40).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let x: f64 = rng.random::<f64>() * 19.0;
            assert!((coarse.phi(x) - fine.phi(x)).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn zero_digit_precision_is_rejected() {
        assert!(EvalPrecision::new(0).is_err());
    }
}
