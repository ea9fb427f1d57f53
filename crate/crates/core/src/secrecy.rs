//! Closed-form secrecy analysis for one legitimate user and one eavesdropper
//! served by MRT beamforming with eavesdropper-aligned artificial noise.
//!
//! With `w = √P_B·h_B/‖h_B‖` and `z = √P_E·h_E/‖h_E‖` the secrecy rate is a
//! function of the scalar gains `g_B`, `g_E`, the steering correlation `ρ`,
//! the shared noise power `σ²` and the split `(P_B, P_E)` only:
//!
//! ```text
//! R = log₂(1 + P_B g_B/(P_E g_B ρ² + σ²)) − log₂(1 + P_B g_E ρ²/(P_E g_E + σ²))
//! ```
//!
//! Rates here are unclamped; `[·]⁺` is applied only in [`SecrecyDiagnosis`].

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::CorrelationValue;
use crate::{Error, Result};

/// Correlations at or above this are treated as identical steering vectors.
pub const DEGENERATE_RHO: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkPair {
    pub g_b: f64,
    pub g_e: f64,
    pub rho: f64,
    pub noise_power: f64,
    pub total_power: f64,
}

impl LinkPair {
    pub fn new(g_b: f64, g_e: f64, rho: CorrelationValue, noise_power: f64, total_power: f64) -> Result<Self> {
        for (name, v) in [("g_b", g_b), ("g_e", g_e), ("noise_power", noise_power), ("total_power", total_power)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        let rho = rho.value();
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter(format!("correlation {rho} must be positive")));
        }
        Ok(Self { g_b, g_e, rho, noise_power, total_power })
    }

    /// Gains divided by the noise power; every closed form below is
    /// homogeneous in `(g_B, g_E, σ²)` so this changes no power value.
    fn normalized(&self) -> (f64, f64, f64) {
        (self.g_b / self.noise_power, self.g_e / self.noise_power, self.rho)
    }

    /// `g_B − g_E ρ²`.
    pub fn secure_margin(&self) -> f64 {
        self.g_b - self.g_e * self.rho * self.rho
    }

    fn is_degenerate(&self) -> bool {
        self.rho >= DEGENERATE_RHO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub p_b: f64,
    pub p_e: f64,
}

impl PowerSplit {
    pub fn new(p_b: f64, p_e: f64) -> Self {
        Self { p_b, p_e }
    }

    /// Full-power split with `p_e` to the AN.
    pub fn full(link: &LinkPair, p_e: f64) -> Self {
        Self { p_b: link.total_power - p_e, p_e }
    }

    pub fn validate(&self, link: &LinkPair) -> Result<()> {
        let used = self.p_b + self.p_e;
        if self.p_b < 0.0 || self.p_e < 0.0 {
            return Err(Error::InvalidParameter(format!("negative power split {self:?}")));
        }
        if used > link.total_power * (1.0 + 1e-12) {
            return Err(Error::PowerBudget { used, budget: link.total_power });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SecrecyCase {
    /// Insecure and no AN power level restores security.
    InsecureUnrecoverable,
    /// Insecure without AN, regained with at least `P_E,min`.
    Case1Regainable,
    /// Secure, and the rate rises then falls in `P_E`.
    Case2InteriorMax,
    /// Rate falls monotonically in `P_E`; no AN needed.
    Case3Monotone,
}

impl SecrecyCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::InsecureUnrecoverable => "INSECURE_UNRECOVERABLE",
            Self::Case1Regainable => "CASE1_REGAINABLE",
            Self::Case2InteriorMax => "CASE2_INTERIOR_MAX",
            Self::Case3Monotone => "CASE3_MONOTONE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyDiagnosis {
    pub secure_without_an: bool,
    pub recoverable_with_an: bool,
    pub p_e_min: Option<f64>,
    pub case_label: SecrecyCase,
    pub optimal_split: PowerSplit,
    /// `[R]⁺` at `optimal_split`.
    pub max_secrecy_rate: f64,
}

/// `(A, B, C)` with `R = log₂((A+B)/(A+C))`.
pub fn rate_coefficients(link: &LinkPair, split: PowerSplit) -> (f64, f64, f64) {
    let (gb, ge, rho) = (link.g_b, link.g_e, link.rho);
    let s2 = link.noise_power;
    let r2 = rho * rho;
    let (pb, pe) = (split.p_b, split.p_e);
    let a = pe * pe * gb * ge * r2 + pe * gb * r2 * s2 + pe * ge * s2 + s2 * s2;
    let b = pb * pe * gb * ge + pb * gb * s2;
    let c = pb * pe * gb * ge * r2 * r2 + pb * ge * r2 * s2;
    (a, b, c)
}

/// Unclamped secrecy rate (bits/s/Hz) of the MRT + aligned-AN scheme.
pub fn secrecy_rate_mrt(link: &LinkPair, split: PowerSplit) -> f64 {
    let (gb, ge, rho) = link.normalized();
    let r2 = rho * rho;
    let sinr_b = split.p_b * gb / (split.p_e * gb * r2 + 1.0);
    let sinr_e = split.p_b * ge * r2 / (split.p_e * ge + 1.0);
    (sinr_b.ln_1p() - sinr_e.ln_1p()) / LN_2
}

/// Rate without AN, `log₂(1 + p_b(g_B − g_E ρ²)/(p_b g_E ρ² + σ²))`.
pub fn secrecy_rate_no_an(link: &LinkPair, p_b: f64) -> f64 {
    let (gb, ge, rho) = link.normalized();
    let r2 = rho * rho;
    (p_b * (gb - ge * r2) / (p_b * ge * r2 + 1.0)).ln_1p() / LN_2
}

/// `g_B − g_E ρ² ≥ 0`.
pub fn secure_without_an(link: &LinkPair) -> bool {
    link.secure_margin() >= 0.0
}

/// `g_B − g_E ρ² ≥ −P g_B g_E (1−ρ⁴)/σ²`.
pub fn recoverable_with_an(link: &LinkPair) -> bool {
    let (gb, ge, rho) = link.normalized();
    let r4 = rho.powi(4);
    gb - ge * rho * rho >= -link.total_power * gb * ge * (1.0 - r4)
}

/// Coefficients `(a, b, c)` of `ξ(P_E) = B̃ − C̃ = a P_E² + b P_E + c` on the
/// full-power line, in noise-normalised units.
pub fn xi_coefficients(link: &LinkPair) -> (f64, f64, f64) {
    let (gb, ge, rho) = link.normalized();
    let p = link.total_power;
    let q = gb * ge * (1.0 - rho.powi(4));
    let m = gb - ge * rho * rho;
    (-q, p * q - m, p * m)
}

/// The two zeros of `ξ`, `((g_Eρ² − g_B)σ²/(g_B g_E(1−ρ⁴)), P)`, from the
/// square-form discriminant `Δ = [P g_B g_E (1−ρ⁴) + (g_B − g_E ρ²)σ²]²`.
pub fn xi_zeros(link: &LinkPair) -> Option<(f64, f64)> {
    let (a, b, _) = xi_coefficients(link);
    if a == 0.0 {
        return None;
    }
    let (gb, ge, rho) = link.normalized();
    let sqrt_disc = (link.total_power * gb * ge * (1.0 - rho.powi(4)) + (gb - ge * rho * rho)).abs();
    let r1 = (-b + sqrt_disc) / (2.0 * a);
    let r2 = (-b - sqrt_disc) / (2.0 * a);
    Some((r1.min(r2), r1.max(r2)))
}

/// Minimum AN power that restores a non-negative secrecy rate.
///
/// `Some(0.0)` for links already secure, `None` when unrecoverable or when the
/// steering vectors coincide (`ρ → 1`, the closed form divides by `1 − ρ⁴`).
pub fn min_an_power(link: &LinkPair) -> Option<f64> {
    if secure_without_an(link) {
        return Some(0.0);
    }
    if link.is_degenerate() || !recoverable_with_an(link) {
        return None;
    }
    let (gb, ge, rho) = link.normalized();
    let p = (ge * rho * rho - gb) / (gb * ge * (1.0 - rho.powi(4)));
    Some(p.min(link.total_power))
}

/// `(Υ₁, Υ₂, Υ₃)` of the derivative numerator `f(P_E) = Υ₁P_E² + Υ₂P_E + Υ₃`,
/// noise-normalised (`σ² = 1`).
pub fn upsilon(link: &LinkPair) -> (f64, f64, f64) {
    let (gb, ge, rho) = link.normalized();
    let p = link.total_power;
    let r2 = rho * rho;
    let r4 = r2 * r2;
    let u1 = p * gb * gb * ge * ge * r2 * (r4 - 1.0) + gb * gb * ge * r4 * (r2 - 1.0) + gb * ge * ge * (r2 - 1.0);
    let u2 = 2.0 * p * gb * ge * (gb + ge) * (r2 - 1.0) * r2 + 2.0 * gb * ge * (r4 - 1.0);
    let u3 = p * p * gb * ge * (ge - gb * r2) * r2 + p * (ge * ge - gb * gb) * r2 + (ge * r2 - gb);
    (u1, u2, u3)
}

/// Whether AN improves on the no-AN rate at the margin:
/// `g_B − g_Eρ² < [P²g_Bg_E(g_E − g_Bρ²)ρ² + P(g_E² − g_B²)ρ²σ²]/σ⁴`.
pub fn interior_max_condition(link: &LinkPair) -> bool {
    let (gb, ge, rho) = link.normalized();
    let p = link.total_power;
    let r2 = rho * rho;
    let rhs = p * p * gb * ge * (ge - gb * r2) * r2 + p * (ge * ge - gb * gb) * r2;
    gb - ge * r2 < rhs
}

/// Rate-maximising full-power split.
pub fn optimal_power_split(link: &LinkPair) -> PowerSplit {
    let p = link.total_power;
    if link.is_degenerate() {
        return PowerSplit::full(link, maximize_numerically(link));
    }
    if !interior_max_condition(link) {
        return PowerSplit::new(p, 0.0);
    }
    let (u1, u2, u3) = upsilon(link);
    if u1 == 0.0 {
        return PowerSplit::full(link, maximize_numerically(link));
    }
    // −Υ₂/(2Υ₁) − sqrt(Υ₂² − 4Υ₁Υ₃)/(2Υ₁), rationalised: Υ₂ < 0 makes the
    // denominator a sum of positive terms.
    let disc = (u2 * u2 - 4.0 * u1 * u3).max(0.0);
    let pe = 2.0 * u3 / (-u2 + disc.sqrt());
    PowerSplit::full(link, pe.clamp(0.0, p))
}

/// Golden-section refinement after a coarse scan of `P_E ∈ [0, P]`.
fn maximize_numerically(link: &LinkPair) -> f64 {
    let p = link.total_power;
    let f = |pe: f64| secrecy_rate_mrt(link, PowerSplit::full(link, pe));
    const COARSE: usize = 2000;
    let step = p / COARSE as f64;
    let best = (0..=COARSE)
        .map(|i| i as f64 * step)
        .map(|x| (x, f(x)))
        .fold((0.0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
    let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(p));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    let x = 0.5 * (a + b);
    if f(x) >= best.1 {
        x
    } else {
        best.0
    }
}

pub fn diagnose(link: &LinkPair) -> SecrecyDiagnosis {
    let secure = secure_without_an(link);
    let recoverable = secure || recoverable_with_an(link);
    let p_e_min = min_an_power(link);
    let case_label = if !recoverable {
        SecrecyCase::InsecureUnrecoverable
    } else if !secure {
        SecrecyCase::Case1Regainable
    } else if interior_max_condition(link) {
        SecrecyCase::Case2InteriorMax
    } else {
        SecrecyCase::Case3Monotone
    };
    let optimal_split = optimal_power_split(link);
    let max_secrecy_rate = secrecy_rate_mrt(link, optimal_split).max(0.0);
    SecrecyDiagnosis {
        secure_without_an: secure,
        recoverable_with_an: recoverable,
        p_e_min,
        case_label,
        optimal_split,
        max_secrecy_rate,
    }
}
