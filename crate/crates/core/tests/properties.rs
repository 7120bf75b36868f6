use proptest::prelude::*;
use wiener_core::harness::{basis_image, bohr_lift_single_prime, l2_from_table, HarnessConfig};
use wiener_core::norms::{hardy_upper_bound, hardy_upper_bound_from, NormRow, NormTable};
use wiener_core::quadrature::QuadConfig;
use wiener_core::series::{coeffs_from_boundary, series_derivative, series_mul};
use wiener_core::symbols::build_thm1_symbol;
use wiener_core::{
    BoundarySampling, Complex64 as C, DiskPoint, Quarter, SeriesConfig, TruncatedSeries,
};

fn decaying(len: std::ops::Range<usize>, c0: f64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len).prop_map(move |v| {
        let coeffs: Vec<C> = v
            .iter()
            .enumerate()
            .map(|(k, &(re, im))| {
                if k == 0 {
                    C::new(c0 + 0.5 * re, 0.5 * im)
                } else {
                    C::new(re, im) / ((k * k) as f64)
                }
            })
            .collect();
        TruncatedSeries::new(coeffs).unwrap()
    })
}

fn max_diff(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_log_round_trip(s in decaying(2..700, 2.0)) {
        let cfg = SeriesConfig::default();
        let back = cfg.exp(&cfg.log(&s).unwrap()).unwrap();
        prop_assert!(max_diff(&back, &s) <= 1e-10 * s.max_abs());
    }

    #[test]
    fn sqrt_squares_back(s in decaying(2..700, 2.0)) {
        let cfg = SeriesConfig::default();
        let r = cfg.sqrt(&s).unwrap();
        prop_assert!(max_diff(&cfg.mul(&r, &r), &s) <= 1e-10 * s.max_abs());
    }

    #[test]
    fn product_is_commutative_and_associative(
        a in decaying(1..600, 0.0),
        b in decaying(1..600, 0.0),
        c in decaying(1..600, 0.0),
    ) {
        let ab = series_mul(&a, &b);
        prop_assert!(max_diff(&ab, &series_mul(&b, &a)) <= 1e-12);
        let left = series_mul(&ab, &c);
        let right = series_mul(&a, &series_mul(&b, &c));
        prop_assert_eq!(left.order(), right.order());
        prop_assert!(max_diff(&left, &right) <= 1e-11);
    }

    #[test]
    fn boundary_sampling_obeys_parseval(s in decaying(1..65, 1.0)) {
        let m = s.order();
        let cfg = BoundarySampling::new(m, 1.0);
        let k = cfg.sample_count().unwrap();
        let energy: f64 = (0..k)
            .map(|j| s.eval(C::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64)).norm_sqr())
            .sum::<f64>()
            / k as f64;
        let coeff_energy: f64 = s.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((energy - coeff_energy).abs() <= 1e-12 * coeff_energy.max(1.0));
        let recovered = coeffs_from_boundary(|p| s.eval(p.z()), &cfg).unwrap();
        prop_assert!(max_diff(&recovered, &s) <= 1e-12);
    }

    #[test]
    fn single_prime_lift_preserves_norm(s in decaying(1..41, 1.0), base in 2u64..4) {
        let d = bohr_lift_single_prime(&s, base).unwrap();
        let lifted: f64 = d.values().map(|c| c.norm()).sum();
        prop_assert!((lifted - s.l1_norm()).abs() <= 1e-14 * s.l1_norm().max(1.0));
        prop_assert!(d.keys().all(|n| n.is_power_of_two() || base != 2));
    }

    #[test]
    fn partial_sums_are_monotone(s in decaying(1..300, 0.0)) {
        let sums = s.abs_partial_sums();
        prop_assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(*sums.last().unwrap(), s.l1_norm());
    }

    #[test]
    fn polynomial_norm_below_certificate(s in decaying(1..40, 0.0)) {
        let d = series_derivative(&s);
        let b = hardy_upper_bound_from(
            s.coeffs()[0],
            |p: &DiskPoint| d.eval(p.z()),
            &[],
            &QuadConfig::default(),
        )
        .unwrap();
        prop_assert!(s.l1_norm() <= b.value + 1e-9);
    }

    #[test]
    fn l2_total_ignores_row_order(
        rows in prop::collection::vec(1e-3..1.0f64, 8..40).prop_shuffle()
    ) {
        let table = |order: &[usize]| NormTable {
            rows: order
                .iter()
                .map(|&i| NormRow {
                    n: i as u64 + 2,
                    aplus_truncated: rows[i],
                    aplus_certified: rows[i],
                    arclength_measured: 0.0,
                    arclength_predicted: None,
                    rel_err: None,
                })
                .collect(),
        };
        let forward: Vec<usize> = (0..rows.len()).collect();
        let backward: Vec<usize> = forward.iter().rev().copied().collect();
        let a = l2_from_table(&table(&forward)).unwrap();
        let b = l2_from_table(&table(&backward)).unwrap();
        prop_assert!((a.total - b.total).abs() <= 1e-12 * a.total);
        prop_assert_eq!(a.n_max, b.n_max);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn basis_images_respect_hardy_bounds(n in 2u64..65) {
        let h = build_thm1_symbol().unwrap();
        let bi = basis_image(&h, n, 1023, &HarnessConfig::default()).unwrap();
        let cert = hardy_upper_bound(&h, n, &QuadConfig::default()).unwrap();
        prop_assert!(bi.aplus.truncated_norm <= cert.value + 1e-6);
        let per_coeff = cert.arclength / std::f64::consts::TAU;
        for (k, a) in bi.series.coeffs().iter().enumerate() {
            prop_assert!(k as f64 * a.norm() <= per_coeff + 1e-8, "n={} k={}", n, k);
        }
    }
}

#[test]
fn quarter_indices_cycle() {
    for k in 0..8 {
        assert_eq!(Quarter::from_index(k).index(), k % 4);
    }
}
