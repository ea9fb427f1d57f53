//! Fresnel integrals C(x) and S(x).
//!
//! ```text
//! C(x) = ∫₀ˣ cos(π t²/2) dt        S(x) = ∫₀ˣ sin(π t²/2) dt
//! ```
//!
//! Power series for |x| ≤ 1.8. Beyond that the auxiliary (tail) function
//! `F(x) = (1+j)/2 − T(x)·exp(jπx²/2)` is used, with `T` evaluated by the
//! continued fraction of the complementary error function (modified Lentz).

use std::f64::consts::PI;

use crate::Complex64;

const SERIES_LIMIT: f64 = 1.8;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 200;

/// Returns `(C(x), S(x))`.
pub fn fresnel(x: f64) -> (f64, f64) {
    let f = fresnel_complex(x);
    (f.re, f.im)
}

pub fn fresnel_c(x: f64) -> f64 {
    fresnel_complex(x).re
}

pub fn fresnel_s(x: f64) -> f64 {
    fresnel_complex(x).im
}

/// `C(x) + j S(x)`.
pub fn fresnel_complex(x: f64) -> Complex64 {
    if x.is_nan() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let ax = x.abs();
    let f = if ax <= SERIES_LIMIT {
        series(ax)
    } else if ax.is_infinite() {
        Complex64::new(0.5, 0.5)
    } else {
        Complex64::new(0.5, 0.5) - tail(ax) * phase(ax)
    };
    if x < 0.0 {
        -f
    } else {
        f
    }
}

/// `|F(c + h) − F(c − h)|`, the magnitude of `∫ exp(jπt²/2) dt` over a
/// window of half width `h ≥ 0` centred at `c`.
///
/// When the whole window sits in one tail only the tails are differenced, with
/// the relative phase `π((c+h)² − (c−h)²)/2 = 2πch` formed directly.
pub fn window_magnitude(center: f64, half_width: f64) -> f64 {
    let c = center.abs();
    let h = half_width.abs();
    let lo = c - h;
    let hi = c + h;
    if lo > SERIES_LIMIT && hi.is_finite() {
        let dphi = 2.0 * PI * c * h;
        let rot = Complex64::new(dphi.cos(), dphi.sin());
        (tail(lo) - tail(hi) * rot).norm()
    } else {
        (fresnel_complex(hi) - fresnel_complex(lo)).norm()
    }
}

fn phase(ax: f64) -> Complex64 {
    let p = 0.5 * PI * ax * ax;
    Complex64::new(p.cos(), p.sin())
}

// Σ_k (jπx²/2)^k / k! · x / (2k+1)
fn series(ax: f64) -> Complex64 {
    let t = 0.5 * PI * ax * ax;
    let jt = Complex64::new(0.0, t);
    let mut u = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(ax, 0.0);
    for k in 1..MAX_ITER {
        u = u * jt / k as f64;
        let term = u * (ax / (2 * k + 1) as f64);
        sum += term;
        if term.norm() < EPS * sum.norm() {
            break;
        }
    }
    sum
}

// Tail function T(x) for x > 0 such that F(x) = (1+j)/2 − T(x)·exp(jπx²/2).
fn tail(ax: f64) -> Complex64 {
    let pix2 = PI * ax * ax;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n: i64 = -1;
    for _ in 2..MAX_ITER {
        n += 2;
        let a = -((n * (n + 1)) as f64);
        b += 4.0;
        d = (d * a + b).inv();
        cc = b + cc.inv() * a;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    h * Complex64::new(ax, -ax) * Complex64::new(0.5, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_oddness() {
        assert_eq!(fresnel(0.0), (0.0, 0.0));
        for &x in &[0.3, 1.0, 1.8, 1.81, 3.7, 25.0] {
            let (c, s) = fresnel(x);
            let (cn, sn) = fresnel(-x);
            assert_eq!(c, -cn);
            assert_eq!(s, -sn);
        }
    }

    #[test]
    fn tabulated_values() {
        let (c, s) = fresnel(1.0);
        assert!((c - 0.779_893_400_376_822_8).abs() < 1e-12, "C(1) = {c}");
        assert!((s - 0.438_259_147_390_354_8).abs() < 1e-12, "S(1) = {s}");
        let (c, s) = fresnel(2.0);
        assert!((c - 0.488_253_406_075_340_8).abs() < 1e-12);
        assert!((s - 0.343_415_678_363_698_2).abs() < 1e-12);
    }

    #[test]
    fn branches_agree_at_switch() {
        let below = series(SERIES_LIMIT);
        let above = Complex64::new(0.5, 0.5) - tail(SERIES_LIMIT) * phase(SERIES_LIMIT);
        assert!((below - above).norm() < 1e-13);
    }

    #[test]
    fn limits_at_infinity() {
        let (c, s) = fresnel(1e6);
        assert!((c - 0.5).abs() < 1e-6 && (s - 0.5).abs() < 1e-6);
        assert_eq!(fresnel(f64::INFINITY), (0.5, 0.5));
    }

    #[test]
    fn window_matches_direct_difference() {
        for &(c, h) in &[(0.0, 0.5), (0.7, 0.4), (3.0, 0.5), (10.0, 2.0), (-4.0, 1.0), (1.0, 3.0)] {
            let direct = (fresnel_complex(c + h) - fresnel_complex(c - h)).norm();
            assert!((window_magnitude(c, h) - direct).abs() < 1e-12, "c={c} h={h}");
        }
    }

    #[test]
    fn narrow_window_far_out_is_width() {
        // integrand has unit modulus; a window much narrower than 1/(c) integrates to ~2h
        let h = 1e-9;
        let m = window_magnitude(1e4, h);
        assert!((m / (2.0 * h) - 1.0).abs() < 1e-3, "{m}");
    }
}
