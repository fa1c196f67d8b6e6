use ldgm_core::bounds::optimize::golden_section_max;
use ldgm_core::bounds::{
    big_f, binary_entropy, entropy_deficit, exponent_g, induced_weight, lambda_star,
    ldpc_enumerator, rate_upper_bound, u_func,
};
use proptest::prelude::*;

/// `max_u G(u; lambda)` over `[0, D]` in nats. `G` is concave in `u` with
/// stationary point `u / (1 - u) = M_Y / M_W`.
fn sup_over_overlap(lambda: f64, d: f64, delta: f64) -> f64 {
    let my = (1.0 - delta) * lambda.exp() + delta;
    let mw = (1.0 - delta) + delta * lambda.exp();
    let u = (my / (my + mw)).clamp(0.0, d);
    exponent_g(u, lambda, d, delta).unwrap()
}

/// `min_{lambda <= 0} max_u G` in bits, the other order of optimization.
fn minmax_exponent(d: f64, delta: f64) -> f64 {
    let neg = golden_section_max(|l| Ok(-sup_over_overlap(l, d, delta)), -40.0, 0.0, 1e-12).unwrap();
    (-neg.value / std::f64::consts::LN_2).min(0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_symmetric(t in 0.0f64..=1.0) {
        let a = binary_entropy(t).unwrap();
        let b = binary_entropy(1.0 - t).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn induced_weight_grows_with_degree(w in 0.001f64..0.499, c in 1u32..12) {
        let lo = induced_weight(w, c).unwrap();
        let hi = induced_weight(w, c + 1).unwrap();
        prop_assert!(hi >= lo);
        // Strict while (1 - 2w)^c is still resolvable next to 1/2.
        if (1.0 - 2.0 * w).powi(c as i32) > 1e-12 {
            prop_assert!(hi > lo);
        }
        prop_assert!(hi <= 0.5);
    }

    #[test]
    fn exponent_nonpositive_and_decreasing_in_delta(d in 0.01f64..0.5, a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f_lo = big_f(d, lo).unwrap();
        let f_hi = big_f(d, hi).unwrap();
        prop_assert!(f_lo <= 0.0 && f_hi <= 0.0);
        prop_assert!(f_hi <= f_lo + 1e-9, "F({d}, {hi}) = {f_hi} > F({d}, {lo}) = {f_lo}");
    }

    #[test]
    fn exponent_g_is_convex_in_tilt_and_concave_in_overlap(
        d in 0.05f64..0.5, delta in 0.01f64..0.5, s in 0.05f64..0.95, lambda in -6.0f64..-0.1,
    ) {
        let u = s * d;
        let step = 1e-3;
        let g = |u: f64, l: f64| exponent_g(u, l, d, delta).unwrap();
        let dl = g(u, lambda + step) - 2.0 * g(u, lambda) + g(u, lambda - step);
        prop_assert!(dl >= -1e-9, "second difference in lambda {dl}");
        let h = step * d.min(u).min(d - u).max(1e-6);
        let du = g(u + h, lambda) - 2.0 * g(u, lambda) + g(u - h, lambda);
        prop_assert!(du <= 1e-12, "second difference in u {du}");
    }

    #[test]
    fn optimal_tilt_is_nonpositive(d in 0.01f64..0.5, delta in 0.0f64..0.5, s in 0.0f64..=1.0) {
        let (lambda, rho) = lambda_star(delta, d, s * d).unwrap();
        prop_assert!(lambda <= 0.0);
        prop_assert!(rho > 0.0);
    }

    #[test]
    fn min_max_interchange(d in 0.02f64..0.5, delta in 0.01f64..0.5) {
        let maxmin = big_f(d, delta).unwrap();
        let minmax = minmax_exponent(d, delta);
        prop_assert!((maxmin - minmax).abs() < 1e-8, "D={d} delta={delta}: {maxmin} vs {minmax}");
    }

    #[test]
    fn enumerator_bounded_by_entropy_and_peaks_at_half(w in 0.001f64..0.999) {
        for &(dv, dc) in &[(2u32, 4u32), (3, 6), (4, 8)] {
            let a = ldpc_enumerator(w, dv, dc).unwrap();
            let top = ldpc_enumerator(0.5, dv, dc).unwrap();
            prop_assert!(a <= binary_entropy(w).unwrap() + 1e-12);
            prop_assert!(a <= top + 1e-12);
            prop_assert!((top - (1.0 - f64::from(dv) / f64::from(dc))).abs() < 1e-10);
        }
    }

    #[test]
    fn u_starts_at_shannon_rate(d in 0.0f64..=0.5, c in 2u32..8) {
        prop_assert_eq!(u_func(0.0, d, c).unwrap(), entropy_deficit(d));
    }
}

#[test]
fn bound_never_below_shannon() {
    for &c in &[2, 3, 4, 5, 6] {
        for i in 0..=10 {
            let d = 0.05 * f64::from(i);
            let b = rate_upper_bound(d, c).unwrap();
            assert!(b.gap >= 0.0, "c={c} D={d}: {b:?}");
            assert!((0.0..=d).contains(&b.argmax_u));
        }
    }
}
