//! Property tests for the analytic kernels, boundary geometry, and the
//! statistics layer.

use bbm_core::analytic::quadrature::integrate;
use bbm_core::analytic::{q_strip, v_strip, v_strip_images, v_strip_spectral};
use bbm_core::engine::bridge_hit_probability;
use bbm_core::stats::{ks_distance, WeightedSample};
use bbm_core::types::{boundary_at, BoundarySpec};
use bbm_core::SQRT_2;
use proptest::prelude::*;

// Numerical slack for inequalities checked through quadrature and truncated
// series: the oracles themselves are only this accurate.
const QUAD_SLACK: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn curved_boundary_decreasing_and_concave(
        x_ref in 1.0_f64..20.0,
        fa in 0.05_f64..0.95,
        fb in 0.05_f64..0.95,
    ) {
        let spec = BoundarySpec::Curved { x_ref, alpha: 0.0, time_shift: 0.0 };
        let t_alpha = spec.curved_scale().unwrap();
        let (s1, s2) = if fa < fb { (fa * t_alpha, fb * t_alpha) } else { (fb * t_alpha, fa * t_alpha) };
        prop_assume!(s2 - s1 > 1e-9 * t_alpha);
        let b1 = boundary_at(&spec, s1).unwrap();
        let b2 = boundary_at(&spec, s2).unwrap();
        prop_assert!(b2 < b1, "boundary must strictly decrease: {b1} -> {b2}");
        // concavity: the chord midpoint lies below the curve
        let mid = boundary_at(&spec, 0.5 * (s1 + s2)).unwrap();
        prop_assert!(mid >= 0.5 * (b1 + b2) - 1e-12);
        // hits zero at the end of the window
        let end = boundary_at(&spec, t_alpha).unwrap();
        prop_assert!(end.abs() < 1e-9);
    }

    #[test]
    fn kernel_tilt_symmetry(
        l in 0.5_f64..8.0,
        fs in 0.02_f64..3.0,
        fx in 0.05_f64..0.95,
        fy in 0.05_f64..0.95,
    ) {
        let s = fs * l * l;
        let (x, y) = (fx * l, fy * l);
        let a = q_strip(s, x, y, l, 1e-12).unwrap();
        let b = q_strip(s, y, x, l, 1e-12).unwrap();
        // q_s(x,y) = e^{2 sqrt2 (x-y)} q_s(y,x)
        let tilted = (2.0 * SQRT_2 * (x - y)).exp() * b;
        let scale = a.abs().max(tilted.abs()).max(1e-300);
        prop_assert!(((a - tilted) / scale).abs() < 1e-10, "{a} vs {tilted}");
    }

    #[test]
    fn kernel_representations_agree(
        l in 0.5_f64..6.0,
        fs in 5e-4_f64..5e-3,
        fx in 0.2_f64..0.8,
        delta in -0.05_f64..0.05,
    ) {
        // Near-diagonal points where both the spectral series and the image
        // sum are far from underflow.
        let s = fs * l * l;
        let x = fx * l;
        let y = (x + delta * l).clamp(0.05 * l, 0.95 * l);
        let a = v_strip_spectral(s, x, y, l, 1e-13);
        let b = v_strip_images(s, x, y, l, 1e-13);
        let scale = a.abs().max(b.abs()).max(1e-12);
        prop_assert!(((a - b) / scale).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn expected_count_bound_q4(
        l in 0.5_f64..6.0,
        fs in 1e-3_f64..3.0,
        fx in 0.05_f64..0.95,
    ) {
        // int_0^L q_s(x,y) dy <= e^s
        let s = fs * l * l;
        let x = fx * l;
        let total = integrate(
            |y| q_strip(s, x, y.clamp(1e-9 * l, l * (1.0 - 1e-9)), l, 1e-11).unwrap(),
            0.0,
            l,
            1e-10,
        )
        .unwrap();
        prop_assert!(total <= s.exp() * (1.0 + QUAD_SLACK) + 1e-12, "{total} vs e^s {}", s.exp());
    }

    #[test]
    fn tilted_mass_bound_q6(
        l in 0.5_f64..6.0,
        fs in 1e-3_f64..3.0,
        fx in 0.05_f64..0.95,
    ) {
        // int_0^L e^{sqrt2 y} q_s(x,y) dy <= e^{sqrt2 x} min{1, (L-x)/sqrt(s)}
        let s = fs * l * l;
        let x = fx * l;
        let lhs = integrate(
            |y| {
                let yc = y.clamp(1e-9 * l, l * (1.0 - 1e-9));
                (SQRT_2 * yc).exp() * q_strip(s, x, yc, l, 1e-11).unwrap()
            },
            0.0,
            l,
            1e-10,
        )
        .unwrap();
        let rhs = (SQRT_2 * x).exp() * 1.0_f64.min((l - x) / s.sqrt());
        prop_assert!(lhs <= rhs * (1.0 + QUAD_SLACK) + 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn bridge_probability_is_a_probability(
        a0 in -5.0_f64..5.0,
        a1 in -5.0_f64..5.0,
        lvl0 in -5.0_f64..5.0,
        lvl1 in -5.0_f64..5.0,
        h in 1e-6_f64..10.0,
    ) {
        let p = bridge_hit_probability(a0, a1, lvl0, lvl1, h);
        prop_assert!((0.0..=1.0).contains(&p));
        // shrinking h cannot increase the crossing odds
        let p_small = bridge_hit_probability(a0, a1, lvl0, lvl1, h * 0.5);
        prop_assert!(p_small <= p + 1e-15);
        // reflecting particle and boundary through zero changes nothing
        let q = bridge_hit_probability(-a0, -a1, -lvl0, -lvl1, h);
        prop_assert!((p - q).abs() < 1e-15);
    }

    #[test]
    fn ks_distance_reorder_invariant(
        raw in proptest::collection::vec((0.0_f64..4.0, 0.01_f64..2.0), 1..40),
        seed in 0u64..1000,
    ) {
        let mut fwd = WeightedSample::new();
        for &(x, w) in &raw {
            fwd.push(x, w);
        }
        // deterministic shuffle driven by `seed`
        let mut shuffled = raw.clone();
        let n = shuffled.len();
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let mut rev = WeightedSample::new();
        for &(x, w) in &shuffled {
            rev.push(x, w);
        }
        let cdf = |x: f64| (x / 4.0).clamp(0.0, 1.0);
        let da = ks_distance(&fwd, cdf);
        let db = ks_distance(&rev, cdf);
        prop_assert!((da - db).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&da));
    }

    #[test]
    fn snapshot_functional_inequalities(
        positions in proptest::collection::vec(0.01_f64..6.0, 1..60),
        l in 0.5_f64..6.0,
    ) {
        let y = bbm_core::stats::y_functional(&positions);
        let z = bbm_core::stats::z_functional(&positions, l);
        let m = bbm_core::stats::m_functional(&positions);
        let x1 = positions.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert!(z <= y + 1e-12 * y);
        prop_assert!(m <= x1 * y * (1.0 + 1e-12));
        prop_assert!(y >= positions.len() as f64);
    }
}

#[test]
fn chapman_kolmogorov_small_cases() {
    // int_0^L v_u(x,z) v_{s-u}(z,y) dz = v_s(x,y)
    for &(l, s, u, x, y) in &[
        (2.0, 0.8, 0.3, 0.7, 1.2),
        (2.0, 0.8, 0.5, 1.3, 0.4),
        (1.0, 0.2, 0.05, 0.45, 0.8),
        (4.0, 6.0, 2.0, 1.0, 3.0),
    ] {
        let direct = v_strip(s, x, y, l, 1e-12);
        let composed = integrate(
            |z| {
                let zc = z.clamp(1e-10 * l, l * (1.0 - 1e-10));
                v_strip(u, x, zc, l, 1e-12) * v_strip(s - u, zc, y, l, 1e-12)
            },
            0.0,
            l,
            1e-9,
        )
        .unwrap();
        assert!(
            (direct - composed).abs() <= 1e-6 * direct.abs().max(1e-6),
            "CK failed at (l={l}, s={s}, u={u}, x={x}, y={y}): {direct} vs {composed}"
        );
    }
}

#[test]
fn eigenfunction_mean_exactness() {
    // First-moment quadrature with the sine eigenfunction must reproduce the
    // exact Z law; this couples the kernel, the quadrature, and the law.
    use bbm_core::analytic::{expected_z_strip, first_moment_functional};
    for &(x, l, s) in &[(1.0, 2.0, 0.5), (1.5, 3.0, 4.5), (0.4, 1.0, 0.3)] {
        let got = first_moment_functional(
            |y: f64| (SQRT_2 * y).exp() * (core::f64::consts::PI * y / l).sin(),
            x,
            l,
            s,
            1e-10,
        )
        .unwrap();
        let z0 = (SQRT_2 * x).exp() * (core::f64::consts::PI * x / l).sin();
        let want = expected_z_strip(s, l, z0);
        assert!(
            (got - want).abs() < 1e-8 * want.abs(),
            "(x={x}, l={l}, s={s}): {got} vs {want}"
        );
    }
}
