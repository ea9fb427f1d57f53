//! Spherical-wavefront channel model of a uniform linear XL-array.
//!
//! The array lies on the y-axis centred at the origin; element `n` (1-based)
//! sits at `(0, δ_n·d)` with `δ_n = (2n − N − 1)/2`. Users are described in
//! polar form by their spatial angle `θ = cos φ` and range `r` from the array
//! centre.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::fresnel;
use crate::rng;
use crate::{CVector, Complex64, Error, Result, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    num_antennas: usize,
    carrier_freq: f64,
    wavelength: f64,
    spacing: f64,
}

impl ArrayGeometry {
    /// Half-wavelength spaced ULA.
    pub fn new(num_antennas: usize, carrier_freq: f64) -> Result<Self> {
        if !(carrier_freq > 0.0 && carrier_freq.is_finite()) {
            return Err(Error::InvalidGeometry(format!("carrier frequency {carrier_freq} Hz")));
        }
        let wavelength = SPEED_OF_LIGHT / carrier_freq;
        Self::with_spacing(num_antennas, carrier_freq, wavelength / 2.0)
    }

    pub fn with_spacing(num_antennas: usize, carrier_freq: f64, spacing: f64) -> Result<Self> {
        if num_antennas < 2 {
            return Err(Error::InvalidGeometry(format!("need at least 2 antennas, got {num_antennas}")));
        }
        if !(carrier_freq > 0.0 && carrier_freq.is_finite()) {
            return Err(Error::InvalidGeometry(format!("carrier frequency {carrier_freq} Hz")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGeometry(format!("element spacing {spacing} m")));
        }
        Ok(Self {
            num_antennas,
            carrier_freq,
            wavelength: SPEED_OF_LIGHT / carrier_freq,
            spacing,
        })
    }

    pub fn num_antennas(&self) -> usize {
        self.num_antennas
    }

    pub fn carrier_freq(&self) -> f64 {
        self.carrier_freq
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Aperture `D = N·d`.
    pub fn aperture(&self) -> f64 {
        self.num_antennas as f64 * self.spacing
    }

    /// `0.62·sqrt(D³/λ)`.
    pub fn fresnel_distance(&self) -> f64 {
        0.62 * (self.aperture().powi(3) / self.wavelength).sqrt()
    }

    /// `2D²/λ`.
    pub fn rayleigh_distance(&self) -> f64 {
        2.0 * self.aperture().powi(2) / self.wavelength
    }

    /// Element offset `δ_n = (2n − N − 1)/2` for a 1-based index.
    pub fn delta(&self, n: usize) -> f64 {
        (2.0 * n as f64 - self.num_antennas as f64 - 1.0) / 2.0
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.num_antennas {
            Err(Error::AntennaIndex { index: n, num_antennas: self.num_antennas })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPosition {
    spatial_angle: f64,
    range: f64,
}

impl PolarPosition {
    pub fn new(spatial_angle: f64, range: f64) -> Result<Self> {
        if !(spatial_angle.abs() <= 1.0) {
            return Err(Error::InvalidPosition(format!("spatial angle {spatial_angle} outside [-1, 1]")));
        }
        if !(range > 0.0) || range.is_nan() {
            return Err(Error::InvalidPosition(format!("range {range} m must be positive")));
        }
        Ok(Self { spatial_angle, range })
    }

    pub fn spatial_angle(&self) -> f64 {
        self.spatial_angle
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    /// Cartesian `(x, y) = (r·sqrt(1−θ²), r·θ)`.
    pub fn cartesian(&self) -> (f64, f64) {
        let s = (1.0 - self.spatial_angle * self.spatial_angle).max(0.0).sqrt();
        (self.range * s, self.range * self.spatial_angle)
    }

    /// Effective curvature `(1 − θ²)/r`; positions sharing it lie on one distance ring.
    pub fn curvature(&self) -> f64 {
        (1.0 - self.spatial_angle * self.spatial_angle) / self.range
    }
}

/// Steering-vector correlation `|b_iᴴ b_j|`, in `(0, 1]` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CorrelationValue(f64);

impl CorrelationValue {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho <= 1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("correlation {rho} outside (0, 1]")));
        }
        Ok(Self(rho.min(1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearFieldChannel {
    pub vector: CVector,
    /// `N·|h_c|²` of the LoS centre-of-array gain.
    pub scalar_gain: f64,
    pub position: PolarPosition,
    pub nlos_components: Vec<(Complex64, PolarPosition)>,
}

impl NearFieldChannel {
    pub fn is_los_only(&self) -> bool {
        self.nlos_components.is_empty()
    }

    /// `‖h‖²`; equals `scalar_gain` for LoS-only channels.
    pub fn power(&self) -> f64 {
        self.vector.norm_squared()
    }
}

/// Distance between antenna `n` (1-based) and `pos`.
pub fn element_distance(geom: &ArrayGeometry, pos: &PolarPosition, n: usize) -> Result<f64> {
    geom.check_index(n)?;
    Ok(element_distance_unchecked(geom, pos, geom.delta(n)))
}

fn element_distance_unchecked(geom: &ArrayGeometry, pos: &PolarPosition, delta: f64) -> f64 {
    let r = pos.range;
    let off = delta * geom.spacing;
    (r * r - 2.0 * r * pos.spatial_angle * off + off * off).sqrt()
}

/// Unit-norm near-field steering vector, entry `n` = `exp(−j2π(r⁽ⁿ⁾ − r)/λ)/√N`.
pub fn steering_vector(geom: &ArrayGeometry, pos: &PolarPosition) -> CVector {
    let n = geom.num_antennas;
    let scale = 1.0 / (n as f64).sqrt();
    let k = 2.0 * PI / geom.wavelength;
    CVector::from_iterator(
        n,
        (1..=n).map(|i| {
            let dr = element_distance_unchecked(geom, pos, geom.delta(i)) - pos.range;
            Complex64::from_polar(scale, -k * dr)
        }),
    )
}

/// Complex LoS gain from the array centre, `λ/(4πr)·exp(−j2πr/λ)`.
pub fn center_gain(geom: &ArrayGeometry, pos: &PolarPosition) -> Complex64 {
    let lam = geom.wavelength;
    Complex64::from_polar(lam / (4.0 * PI * pos.range), -2.0 * PI * pos.range / lam)
}

/// `h = √N·h_c·b(θ, r)`.
pub fn los_channel(geom: &ArrayGeometry, pos: &PolarPosition) -> NearFieldChannel {
    let hc = center_gain(geom, pos);
    let n = geom.num_antennas as f64;
    let b = steering_vector(geom, pos);
    NearFieldChannel {
        vector: b * (hc * n.sqrt()),
        scalar_gain: n * hc.norm_sqr(),
        position: *pos,
        nlos_components: Vec::new(),
    }
}

/// LoS plus `L` scattered paths, `√(N/L)·Σ h_ℓ b(θ_ℓ, r_ℓ)`.
///
/// Scatterers are uniform in `θ ∈ [−1, 1]` and `r ∈ [r_Fre, r_Ray]`; path gains
/// are `CN(0, η²)` with `η = κ·|h_c|`, `κ = 10^(κ_dB/20)`. Draw order per path:
/// angle, range, real part, imaginary part.
pub fn multipath_channel(
    geom: &ArrayGeometry,
    pos: &PolarPosition,
    num_paths: usize,
    kappa_db: f64,
    seed: u64,
) -> Result<NearFieldChannel> {
    let mut ch = los_channel(geom, pos);
    if num_paths == 0 {
        return Ok(ch);
    }
    let kappa = 10f64.powf(kappa_db / 20.0);
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa {kappa_db} dB")));
    }
    let eta = kappa * center_gain(geom, pos).norm();
    let (r_lo, r_hi) = (geom.fresnel_distance(), geom.rayleigh_distance());
    let mut rng = rng::seeded(seed);
    let amp = (geom.num_antennas as f64 / num_paths as f64).sqrt();
    // CN(0, η²): each quadrature has variance η²/2
    let sd = eta / 2f64.sqrt();
    for _ in 0..num_paths {
        let theta: f64 = rng.random_range(-1.0..=1.0);
        let range: f64 = rng.random_range(r_lo..=r_hi);
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let gain = Complex64::new(re * sd, im * sd);
        let p = PolarPosition::new(theta, range)?;
        ch.vector += steering_vector(geom, &p) * (gain * amp);
        ch.nlos_components.push((gain, p));
    }
    Ok(ch)
}

/// `|b(θ_i, r_i)ᴴ b(θ_j, r_j)|`.
pub fn correlation_exact(geom: &ArrayGeometry, a: &PolarPosition, b: &PolarPosition) -> CorrelationValue {
    let va = steering_vector(geom, a);
    let vb = steering_vector(geom, b);
    CorrelationValue(va.dotc(&vb).norm().min(1.0))
}

/// Normalised correlation of two arbitrary channel vectors, `|h_aᴴ h_b|/(‖h_a‖‖h_b‖)`.
pub fn vector_correlation(a: &CVector, b: &CVector) -> Result<CorrelationValue> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroChannel);
    }
    Ok(CorrelationValue((a.dotc(b).norm() / (na * nb)).min(1.0)))
}

/// Fresnel-integral parameters `(β₁, β₂)` of a position pair, or `None` when
/// both lie on the same distance ring (`β₂ = 0`).
///
/// For half-wavelength spacing these are `β₁ = (θ_j−θ_i)/sqrt(d·Δ)` and
/// `β₂ = (N/2)·sqrt(d·Δ)` with `Δ = |(1−θ_i²)/r_i − (1−θ_j²)/r_j|`; the general
/// form keeps `λ` and `d` separate.
pub fn fresnel_parameters(geom: &ArrayGeometry, a: &PolarPosition, b: &PolarPosition) -> Option<(f64, f64)> {
    let delta = (a.curvature() - b.curvature()).abs();
    if delta == 0.0 {
        return None;
    }
    let s = (2.0 * delta / geom.wavelength).sqrt();
    let beta2 = geom.num_antennas as f64 * geom.spacing / 2.0 * s;
    let beta1 = (b.spatial_angle - a.spatial_angle) * 2.0 / (geom.wavelength * s);
    if !(beta1.is_finite() && beta2 > 0.0) {
        return None;
    }
    Some((beta1, beta2))
}

/// Fresnel-integral approximation `G(β₁, β₂) = |C̃ + jS̃|/(2β₂)` of the correlation.
/// Falls back to [`correlation_exact`] on a shared distance ring.
pub fn correlation_fresnel(geom: &ArrayGeometry, a: &PolarPosition, b: &PolarPosition) -> CorrelationValue {
    match fresnel_parameters(geom, a, b) {
        Some((beta1, beta2)) => CorrelationValue(fresnel_gain(beta1, beta2).min(1.0)),
        None => correlation_exact(geom, a, b),
    }
}

/// `|[C(β₁+β₂) − C(β₁−β₂)] + j[S(β₁+β₂) − S(β₁−β₂)]| / (2β₂)`.
pub fn fresnel_gain(beta1: f64, beta2: f64) -> f64 {
    if beta2 == 0.0 {
        return 1.0;
    }
    fresnel::window_magnitude(beta1, beta2) / (2.0 * beta2.abs())
}
