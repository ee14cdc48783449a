//! Globally adaptive Gauss-Kronrod quadrature (10-21 pair).

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::math::abs;

// QUADPACK 10-21 nodes and weights, positive half of [-1, 1].
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Absolute floor below which interval errors are not chased further.
pub const ABS_FLOOR: f64 = 1e-14;

const MAX_SEGMENTS: usize = 20_000;

/// Quadrature failed to converge; carries the best estimate reached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureFailure {
    pub estimate: f64,
    pub error: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = half * XGK[i];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let value = kronrod * half;
    let err = abs((kronrod - gauss) * half);
    (value, err)
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol` (with the
/// absolute floor [`ABS_FLOOR`]), bisecting the worst segment first.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64, QuadratureFailure> {
    integrate_segmented(f, &[a, b], rel_tol)
}

/// Like [`integrate`], but starting from a user-supplied partition. Useful
/// when the integrand has known kinks or spikes.
pub fn integrate_segmented<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<f64, QuadratureFailure> {
    debug_assert!(breakpoints.len() >= 2);
    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        let (v, e) = gk21(&f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    while total_err > rel_tol.max(1e-15) * abs(total) && total_err > ABS_FLOOR {
        if heap.len() >= MAX_SEGMENTS {
            return Err(QuadratureFailure {
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in f64; accept what we have.
            heap.push(worst);
            break;
        }
        let (lv, le) = gk21(&f, worst.a, mid);
        let (rv, re) = gk21(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    Ok(total)
}

/// Gauss-Legendre nodes and weights on `[a, b]`, computed by Newton iteration
/// on the Legendre polynomial.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> alloc::vec::Vec<(f64, f64)> {
    use crate::math::cos;
    use core::f64::consts::PI;
    let mut out = alloc::vec::Vec::with_capacity(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if abs(dz) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        out.push((mid - half * z, half * w));
        if i != n - 1 - i {
            out.push((mid + half * z, half * w));
        }
    }
    out.sort_by(|l, r| l.0.total_cmp(&r.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sin};

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12).unwrap();
        // antiderivative x^4/4 - x^2 + x
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| sin(10.0 * x) * exp(-x), 0.0, 5.0, 1e-12).unwrap();
        // int sin(kx) e^{-x} = k/(1+k^2) - e^{-5}(cos(50) + 10 sin(50))... evaluate:
        let k: f64 = 10.0;
        let exact = (k - exp(-5.0) * (libm::sin(50.0) + k * libm::cos(50.0))) / (1.0 + k * k);
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn discontinuous_indicator_converges() {
        let v = integrate(|x| if (0.3..0.7).contains(&x) { 1.0 } else { 0.0 }, 0.0, 1.0, 1e-9)
            .unwrap();
        assert!((v - 0.4).abs() < 1e-8, "{v}");
    }

    #[test]
    fn gauss_legendre_integrates_high_degree() {
        let nodes = gauss_legendre(64, 0.0, 2.0);
        let v: f64 = nodes.iter().map(|&(x, w)| w * exp(-x * x)).sum();
        let reference = integrate(|x| exp(-x * x), 0.0, 2.0, 1e-13).unwrap();
        assert!((v - reference).abs() < 1e-12);
        assert_eq!(nodes.len(), 64);
    }
}
