#![allow(dead_code)]

use nfsec_core::channel::{correlation_exact, los_channel, ArrayGeometry, PolarPosition};
use nfsec_core::rng::{seeded, SimRng};
use nfsec_core::{CorrelationValue, LinkPair};
use rand::Rng;

pub const NOISE: f64 = 1e-11;
pub const POWER: f64 = 1.0;

pub fn thz(n: usize) -> ArrayGeometry {
    ArrayGeometry::new(n, 100e9).unwrap()
}

pub fn rng(seed: u64) -> SimRng {
    seeded(seed)
}

pub fn near_field_position(geom: &ArrayGeometry, rng: &mut SimRng, theta_max: f64) -> PolarPosition {
    let theta = rng.random_range(-theta_max..=theta_max);
    let r = rng.random_range(geom.fresnel_distance()..geom.rayleigh_distance());
    PolarPosition::new(theta, r).unwrap()
}

/// LoS link between two positions with the default power and noise.
pub fn geometric_link(geom: &ArrayGeometry, bob: &PolarPosition, eve: &PolarPosition) -> LinkPair {
    let rho = correlation_exact(geom, bob, eve).value().max(1e-300);
    LinkPair::new(
        los_channel(geom, bob).scalar_gain,
        los_channel(geom, eve).scalar_gain,
        CorrelationValue::new(rho).unwrap(),
        NOISE,
        POWER,
    )
    .unwrap()
}

/// Link with log-uniform gains (normalised SNR in `[1e2, 1e8]`) and `ρ ∈ [0.05, 0.99]`.
pub fn random_link(rng: &mut SimRng) -> LinkPair {
    let snr = |rng: &mut SimRng| 10f64.powf(rng.random_range(2.0..8.0));
    let g_b = snr(rng) * NOISE;
    let g_e = snr(rng) * NOISE;
    let rho = rng.random_range(0.05..0.99);
    LinkPair::new(g_b, g_e, CorrelationValue::new(rho).unwrap(), NOISE, POWER).unwrap()
}

/// `(argmax, max)` of `f` on `{0, h, 2h, …, P}` with `h = P/steps`.
pub fn grid_argmax(p: f64, steps: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let h = p / steps as f64;
    (0..=steps).map(|i| i as f64 * h).map(|x| (x, f(x))).fold((0.0, f64::NEG_INFINITY), |a, v| {
        if v.1 > a.1 {
            v
        } else {
            a
        }
    })
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}
