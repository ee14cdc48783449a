//! First and second moments of additive functionals `sum_i f(X_i(s))` of the
//! strip-killed process, by quadrature against the kernel `q_s`.

use super::kernels::q_strip;
use super::quadrature::{gauss_legendre, integrate};
use super::AnalyticError;

/// Kernel evaluations inside the moment integrals run at this fraction of the
/// requested quadrature tolerance.
const KERNEL_TOL_FACTOR: f64 = 1e-2;

/// `E[sum_i f(X_i(s))] = int_0^L f(y) q_s(x, y) dy` for one particle started
/// at `x`, killed at `0` and `L`.
pub fn first_moment_functional<F>(
    f: F,
    x: f64,
    l: f64,
    s: f64,
    tol: f64,
) -> Result<f64, AnalyticError>
where
    F: Fn(f64) -> f64,
{
    check(x, l, s, tol)?;
    let ktol = tol * KERNEL_TOL_FACTOR;
    integrate(
        |y| f(y) * q_strip(s, x, clamp_interior(y, l), l, ktol).unwrap(),
        0.0,
        l,
        tol,
    )
    .map_err(|e| AnalyticError::QuadratureFailure {
        estimate: e.estimate,
        error: e.error,
    })
}

/// `E[(sum_i f(X_i(s)))^2]`, the many-to-two formula:
/// `int f^2 q_s + 2 int_0^s int_0^L q_u(x,z) (int f(y) q_{s-u}(z,y) dy)^2 dz du`.
///
/// The outer time integral uses a 64-node Gauss-Legendre grid; the space
/// integrals are adaptive.
pub fn second_moment_functional<F>(
    f: F,
    x: f64,
    l: f64,
    s: f64,
    tol: f64,
) -> Result<f64, AnalyticError>
where
    F: Fn(f64) -> f64 + Copy,
{
    check(x, l, s, tol)?;
    let ktol = tol * KERNEL_TOL_FACTOR;
    let diagonal = integrate(
        |y| {
            let fy = f(y);
            fy * fy * q_strip(s, x, clamp_interior(y, l), l, ktol).unwrap()
        },
        0.0,
        l,
        tol,
    )
    .map_err(|e| AnalyticError::QuadratureFailure {
        estimate: e.estimate,
        error: e.error,
    })?;

    let inner_mean = |z: f64, rem: f64| -> Result<f64, AnalyticError> {
        if rem <= 0.0 {
            return Ok(f(z));
        }
        integrate(
            |y| f(y) * q_strip(rem, z, clamp_interior(y, l), l, ktol).unwrap(),
            0.0,
            l,
            tol,
        )
        .map_err(|e| AnalyticError::QuadratureFailure {
            estimate: e.estimate,
            error: e.error,
        })
    };

    let mut pair = 0.0;
    for (u, w) in gauss_legendre(64, 0.0, s) {
        let rem = s - u;
        let spatial = integrate(
            |z| {
                let zc = clamp_interior(z, l);
                let m = inner_mean(zc, rem).unwrap_or(0.0);
                q_strip(u, x, zc, l, ktol).unwrap() * m * m
            },
            0.0,
            l,
            tol,
        )
        .map_err(|e| AnalyticError::QuadratureFailure {
            estimate: e.estimate,
            error: e.error,
        })?;
        pair += w * spatial;
    }
    Ok(diagonal + 2.0 * pair)
}

fn check(x: f64, l: f64, s: f64, tol: f64) -> Result<(), AnalyticError> {
    if !(l > 0.0 && x > 0.0 && x < l) {
        return Err(AnalyticError::Domain {
            what: "moment functionals require 0 < x < L",
        });
    }
    if !(s > 0.0) {
        return Err(AnalyticError::Domain {
            what: "moment functionals require s > 0",
        });
    }
    if !(tol > 0.0) {
        return Err(AnalyticError::Domain {
            what: "tolerance must be > 0",
        });
    }
    Ok(())
}

// Quadrature nodes can land exactly on the interval ends where q is undefined.
fn clamp_interior(y: f64, l: f64) -> f64 {
    let eps = 1e-12 * l;
    y.max(eps).min(l - eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::kernels::{d_bound, expected_z_strip, p_strip};
    use crate::constants::SQRT_2;
    use crate::math::{exp, sin};
    use core::f64::consts::PI;

    #[test]
    fn zero_function_gives_zero() {
        let m1 = first_moment_functional(|_| 0.0, 1.0, 2.0, 1.0, 1e-9).unwrap();
        assert_eq!(m1, 0.0);
        let m2 = second_moment_functional(|_| 0.0, 1.0, 2.0, 1.0, 1e-7).unwrap();
        assert_eq!(m2, 0.0);
    }

    #[test]
    fn eigenfunction_reproduces_exact_z_law() {
        // f(y) = e^{sqrt2 y} sin(pi y / L) makes the sum equal Z(s), whose
        // mean is exactly e^{-pi^2 s/2L^2} Z(0).
        let (x, l, s) = (1.2, 3.0, 2.0);
        let m1 = first_moment_functional(
            |y| exp(SQRT_2 * y) * sin(PI * y / l),
            x,
            l,
            s,
            1e-10,
        )
        .unwrap();
        let z0 = exp(SQRT_2 * x) * sin(PI * x / l);
        let expected = expected_z_strip(s, l, z0);
        assert!((m1 - expected).abs() < 1e-8 * expected, "{m1} vs {expected}");
    }

    #[test]
    fn constant_function_matches_leading_mode_at_large_s() {
        // f = 1, s large: E[N(s)] ~ int p_s(x,y) dy within d_bound relative.
        let (x, l, s) = (1.5, 3.0, 6.0);
        let m1 = first_moment_functional(|_| 1.0, x, l, s, 1e-10).unwrap();
        let p_int = integrate(|y| p_strip(s, x, y.clamp(1e-9, l - 1e-9), l).unwrap(), 0.0, l, 1e-11)
            .unwrap();
        let d = d_bound(s, l).unwrap();
        assert!((m1 - p_int).abs() <= p_int * (d + 1e-8));
    }

    #[test]
    fn indicator_moments_match_reference() {
        // f = 1_{[L/4, L/2]}, L = 2, x = 1, s = 1. scipy (independent route):
        // m1 = 0.186862939723352, m2 = 0.3084132959024932.
        let f = |y: f64| if (0.5..=1.0).contains(&y) { 1.0 } else { 0.0 };
        let m1 = first_moment_functional(f, 1.0, 2.0, 1.0, 1e-9).unwrap();
        assert!((m1 - 0.186862939723352).abs() < 2e-8, "{m1}");
        let m2 = second_moment_functional(f, 1.0, 2.0, 1.0, 1e-7).unwrap();
        assert!(
            (m2 - 0.3084132959024932).abs() < 5e-5 * 0.3084132959024932,
            "{m2}"
        );
        // Var = m2 - m1^2 must be nonnegative.
        assert!(m2 - m1 * m1 >= 0.0);
    }
}
