//! Strip kernels: the branching density `q_s(x, y)` for particles killed at
//! `0` and `L`, its leading-mode approximation `p_s`, and the exact mean laws
//! for the functionals `Z(s)` and `Y(s)`.
//!
//! `q_s(x,y) = e^{sqrt(2)(x-y)} v_s(x,y)` where `v_s` is the Dirichlet heat
//! kernel of standard Brownian motion on `(0, L)`. Two representations of
//! `v_s` are kept: the sine eigenfunction series (fast for large `s/L^2`) and
//! the method-of-images sum (fast and stable for small `s/L^2`).

use core::f64::consts::PI;

use super::AnalyticError;
use crate::constants::SQRT_2;
use crate::math::{exp, sin, sqrt};

/// `s/L^2` below which [`v_strip`] switches from the spectral series to the
/// image sum.
pub const SPECTRAL_IMAGE_CROSSOVER: f64 = 1e-3;

fn check_strip_domain(s: f64, x: f64, y: f64, l: f64) -> Result<(), AnalyticError> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(AnalyticError::Domain {
            what: "strip width must be finite and > 0",
        });
    }
    if !(s > 0.0) {
        return Err(AnalyticError::Domain {
            what: "time must be > 0",
        });
    }
    if !(x > 0.0 && x < l && y > 0.0 && y < l) {
        return Err(AnalyticError::Domain {
            what: "positions must lie strictly inside (0, L)",
        });
    }
    Ok(())
}

/// Leading-mode density
/// `p_s(x,y) = (2/L) e^{-pi^2 s/2L^2} e^{sqrt2 x} sin(pi x/L) e^{-sqrt2 y} sin(pi y/L)`.
pub fn p_strip(s: f64, x: f64, y: f64, l: f64) -> Result<f64, AnalyticError> {
    check_strip_domain(s, x, y, l)?;
    Ok(2.0 / l
        * exp(-PI * PI * s / (2.0 * l * l))
        * exp(SQRT_2 * x)
        * sin(PI * x / l)
        * exp(-SQRT_2 * y)
        * sin(PI * y / l))
}

/// Uniform bound on the relative correction `|D_s(x,y)|` in
/// `q_s = p_s (1 + D_s)`: the series `sum_{n>=2} n^2 e^{-pi^2(n^2-1)s/2L^2}`.
///
/// Errors out when `s/L^2` is so small that more than `10^6` terms would be
/// needed; evaluate the kernel directly in that regime.
pub fn d_bound(s: f64, l: f64) -> Result<f64, AnalyticError> {
    if !(s > 0.0 && l > 0.0) {
        return Err(AnalyticError::Domain {
            what: "d_bound requires s > 0 and L > 0",
        });
    }
    let rate = PI * PI * s / (2.0 * l * l);
    let mut sum = 0.0;
    let mut n: u64 = 2;
    loop {
        let nf = n as f64;
        let term = nf * nf * exp(-rate * (nf * nf - 1.0));
        sum += term;
        if term <= 1e-18 * sum {
            return Ok(sum);
        }
        n += 1;
        if n > 1_000_000 {
            return Err(AnalyticError::SeriesOverflow { terms: 1_000_000 });
        }
    }
}

/// Dirichlet heat kernel via the sine eigenfunction series.
pub fn v_strip_spectral(s: f64, x: f64, y: f64, l: f64, tol: f64) -> f64 {
    let rate = PI * PI * s / (2.0 * l * l);
    let mut sum = 0.0;
    let mut n: u64 = 1;
    loop {
        let nf = n as f64;
        let envelope = exp(-rate * nf * nf);
        sum += envelope * sin(nf * PI * x / l) * sin(nf * PI * y / l);
        // The envelope dominates the tail term-by-term and the decay is
        // super-geometric, so one small envelope ends the sum.
        if n >= 4 && envelope < 0.25 * tol * crate::math::abs(sum).max(1e-300) {
            break;
        }
        if envelope == 0.0 || n > 200_000 {
            break;
        }
        n += 1;
    }
    2.0 / l * sum
}

/// Dirichlet heat kernel via the method of images.
pub fn v_strip_images(s: f64, x: f64, y: f64, l: f64, _tol: f64) -> f64 {
    // Gaussians underflow past |d| > sqrt(1500 s); take every image within
    // that radius.
    let radius = sqrt(1500.0 * s);
    let k_max = ((radius + l) / (2.0 * l)) as i64 + 1;
    let inv_2s = 1.0 / (2.0 * s);
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let shift = 2.0 * k as f64 * l;
        let d_direct = x - y - shift;
        let d_mirror = x + y - shift;
        sum += exp(-d_direct * d_direct * inv_2s) - exp(-d_mirror * d_mirror * inv_2s);
    }
    sum / sqrt(2.0 * PI * s)
}

/// Dirichlet heat kernel, picking the representation by `s/L^2`.
pub fn v_strip(s: f64, x: f64, y: f64, l: f64, tol: f64) -> f64 {
    if s / (l * l) < SPECTRAL_IMAGE_CROSSOVER {
        v_strip_images(s, x, y, l, tol)
    } else {
        v_strip_spectral(s, x, y, l, tol)
    }
}

/// Expected particle density `q_s(x,y) = e^{sqrt2 (x-y)} v_s(x,y)` of the
/// strip-killed branching Brownian motion started from one particle at `x`.
pub fn q_strip(s: f64, x: f64, y: f64, l: f64, tol: f64) -> Result<f64, AnalyticError> {
    check_strip_domain(s, x, y, l)?;
    if !(tol > 0.0) {
        return Err(AnalyticError::Domain {
            what: "tolerance must be > 0",
        });
    }
    Ok(exp(SQRT_2 * (x - y)) * v_strip(s, x, y, l, tol))
}

/// Exact strip mean law `E[Z(s)] = e^{-pi^2 s/2L^2} Z(0)`.
pub fn expected_z_strip(s: f64, l: f64, z0: f64) -> f64 {
    exp(-PI * PI * s / (2.0 * l * l)) * z0
}

/// Two-sided envelope for `E[Y(s)] = (4/pi) e^{-pi^2 s/2L^2} Z(0) (1 + D(s))`
/// with `|D(s)|` bounded by [`d_bound`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YExpectation {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
}

pub fn expected_y_strip(s: f64, l: f64, z0: f64) -> Result<YExpectation, AnalyticError> {
    let d = d_bound(s, l)?;
    let center = 4.0 / PI * exp(-PI * PI * s / (2.0 * l * l)) * z0;
    Ok(YExpectation {
        lo: center * (1.0 - d),
        hi: center * (1.0 + d),
        center,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn p_strip_midpoint_value() {
        // (2/3) e^{-pi^2/4}; the e^{sqrt2 x} and e^{-sqrt2 y} factors cancel
        // at x = y. mpmath: 0.056536648314075852.
        let p = p_strip(4.5, 1.5, 1.5, 3.0).unwrap();
        assert!((p - 0.056536648314075852).abs() < 1e-15);
    }

    #[test]
    fn p_strip_vanishes_at_wall() {
        let p = p_strip(1.0, 1.5, 3.0 - 1e-13, 3.0).unwrap();
        assert!(p.abs() < 1e-10);
    }

    #[test]
    fn p_strip_tilt_symmetry() {
        // p_s(x,y) e^{2 sqrt2 (y - x)} = p_s(y,x): the sine factors are
        // symmetric, only the exponential tilt flips.
        let (s, x, y, l) = (0.8, 0.6, 2.1, 3.0);
        let lhs = p_strip(s, x, y, l).unwrap() * exp(2.0 * SQRT_2 * (y - x));
        let rhs = p_strip(s, y, x, l).unwrap();
        assert!((lhs - rhs).abs() < TOL * rhs.abs());
    }

    #[test]
    fn p_strip_rejects_outside_domain() {
        assert!(p_strip(1.0, -0.5, 1.0, 3.0).is_err());
        assert!(p_strip(1.0, 1.0, 3.5, 3.0).is_err());
        assert!(p_strip(0.0, 1.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn d_bound_at_s_equals_l_squared() {
        // mpmath: sum_{n>=2} n^2 e^{-pi^2 (n^2-1)/2} = 1.487948487942437e-6.
        let d = d_bound(9.0, 3.0).unwrap();
        assert!((d - 1.487948487942437e-6).abs() < 1e-18);
    }

    #[test]
    fn d_bound_monotone_and_vanishing() {
        let d1 = d_bound(1.0, 3.0).unwrap();
        let d2 = d_bound(2.0, 3.0).unwrap();
        let d3 = d_bound(200.0, 3.0).unwrap();
        assert!(d1 > d2 && d2 > d3);
        assert!(d3 < 1e-100);
    }

    #[test]
    fn d_bound_small_time_advises_direct_kernel() {
        assert!(matches!(
            d_bound(1e-12, 3.0),
            Err(AnalyticError::SeriesOverflow { .. })
        ));
    }

    #[test]
    fn first_series_term_is_p_strip() {
        // With tol so loose the series stops early... instead check directly:
        // 1-term spectral sum equals p up to the tilt factors.
        let (s, x, y, l) = (2.0, 1.0, 2.0, 3.0);
        let one_term =
            2.0 / l * exp(-PI * PI * s / (2.0 * l * l)) * sin(PI * x / l) * sin(PI * y / l);
        let p = p_strip(s, x, y, l).unwrap();
        assert!((exp(SQRT_2 * (x - y)) * one_term - p).abs() < TOL * p.abs());
    }

    #[test]
    fn q_strip_consistent_with_p_and_d_bound() {
        // s = L^2: |q/p - 1| <= d_bound = 1.488e-6.
        let (s, l) = (9.0, 3.0);
        let q = q_strip(s, 1.5, 1.5, l, 1e-12).unwrap();
        let p = p_strip(s, 1.5, 1.5, l).unwrap();
        let d = d_bound(s, l).unwrap();
        assert!((q / p - 1.0).abs() <= d + 1e-12);
    }

    #[test]
    fn kernel_reference_values() {
        // mpmath, 40 digits.
        let v = v_strip_spectral(0.5, 0.7, 1.1, 2.0, 1e-14);
        assert!((v - 0.45421503972499357).abs() < 1e-13, "{v}");
        let q = q_strip(1.0, 1.0, 0.5, 2.0, 1e-14).unwrap();
        assert!((q - 0.41760507748731741).abs() < 1e-13, "{q}");
        let vi = v_strip_images(0.002, 0.7, 0.75, 2.0, 1e-14);
        assert!((vi - 4.7748641153355657).abs() < 1e-12, "{vi}");
    }

    #[test]
    fn representations_agree_in_overlap() {
        for &(s, x, y, l) in &[
            (0.004, 0.7, 0.75, 2.0),
            (0.02, 1.0, 1.1, 2.0),
            (0.5, 0.7, 1.1, 2.0),
        ] {
            let a = v_strip_spectral(s, x, y, l, 1e-13);
            let b = v_strip_images(s, x, y, l, 1e-13);
            assert!((a - b).abs() < 1e-10 * b.abs().max(1e-12), "{a} {b}");
        }
    }

    #[test]
    fn expected_z_strip_values() {
        let z0 = exp(SQRT_2 * 1.5);
        assert!((z0 - 8.3421447164767961).abs() < 1e-13);
        assert_eq!(expected_z_strip(0.0, 3.0, z0), z0);
        let ez = expected_z_strip(4.5, 3.0, z0);
        assert!((ez - 0.70745535303086194).abs() < 1e-13);
        // linear in Z(0)
        assert!((expected_z_strip(4.5, 3.0, 2.0 * z0) - 2.0 * ez).abs() < 1e-14);
    }

    #[test]
    fn expected_y_strip_envelope() {
        // s = L^2, Z0 = 1: center (4/pi) e^{-pi^2/2} = 0.0091569902897607558.
        let y = expected_y_strip(9.0, 3.0, 1.0).unwrap();
        assert!((y.center - 0.0091569902897607558).abs() < 1e-16);
        assert!(y.lo <= y.center && y.center <= y.hi);
        let width = y.hi - y.lo;
        assert!((width - 2.0 * 1.487948487942437e-6 * y.center).abs() < 1e-18);
        // width shrinks as s/L^2 grows
        let y2 = expected_y_strip(36.0, 3.0, 1.0).unwrap();
        assert!((y2.hi - y2.lo) / y2.center < width / y.center);
    }
}
