//! Problem parameters and the fiber arithmetic of the axisymmetric reduction.
//!
//! Decomposing into spherical harmonics on `S^{d-2}` splits the operator into
//! two-dimensional fiber operators on the meridian half-plane `(r, z)`, one per
//! harmonic degree `l`, each repeated `c(d, l)` times. Everything a fiber
//! discretization needs (the angular eigenvalue, the flat-metric potential
//! coefficient and the threshold) is computed here, together with the exact
//! coordinate maps between the meridian, rotated and reference frames.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A conical hypersurface `x_d = cot(θ) ρ(x)` in `R^d` carrying a δ-interaction
/// of strength `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeConfig {
    pub d: u32,
    pub theta: f64,
    pub alpha: f64,
}

impl ConeConfig {
    pub fn new(d: u32, theta: f64, alpha: f64) -> Result<Self> {
        validate_dimension(d)?;
        validate_theta(theta)?;
        validate_alpha(alpha)?;
        Ok(Self { d, theta, alpha })
    }

    pub fn threshold(&self) -> f64 {
        -0.25 * self.alpha * self.alpha
    }

    pub fn fiber(&self, l: u32) -> FiberCoefficients {
        FiberCoefficients::new(self, l)
    }
}

pub(crate) fn validate_dimension(d: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::param("d", format!("dimension must satisfy d >= 3, got {d}")));
    }
    Ok(())
}

pub(crate) fn validate_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::param(
            "theta",
            format!("aperture must lie in (0, pi/2), got {theta}"),
        ));
    }
    Ok(())
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(
            "alpha",
            format!("coupling must be positive and finite, got {alpha}"),
        ));
    }
    Ok(())
}

/// Coefficients of the `l`-th fiber form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberCoefficients {
    pub l: u32,
    pub angular_ev: f64,
    /// Flat-metric potential coefficient. Stored as `-1/4` for `(3, 0)`, where
    /// the flat form is not available (see [`gamma`]).
    pub gamma: f64,
    pub multiplicity: u64,
    pub threshold: f64,
}

impl FiberCoefficients {
    pub fn new(cfg: &ConeConfig, l: u32) -> Self {
        Self {
            l,
            angular_ev: angular_ev_unchecked(cfg.d, l),
            gamma: gamma_unchecked(cfg.d, l),
            multiplicity: multiplicity_unchecked(cfg.d, l),
            threshold: cfg.threshold(),
        }
    }
}

/// Eigenvalue `l(l+d-3)` of the Laplace–Beltrami operator on `S^{d-2}`.
pub fn angular_eigenvalue(d: u32, l: u32) -> Result<f64> {
    validate_dimension(d)?;
    Ok(angular_ev_unchecked(d, l))
}

fn angular_ev_unchecked(d: u32, l: u32) -> f64 {
    let l = l as f64;
    l * (l + d as f64 - 3.0)
}

/// Binomial coefficient with `C(n, k) = 0` whenever `n < k`, negative `n`
/// included.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dimension `c(d, l)` of the degree-`l` spherical harmonics on `S^{d-2}`.
pub fn multiplicity(d: u32, l: u32) -> Result<u64> {
    validate_dimension(d)?;
    Ok(multiplicity_unchecked(d, l))
}

fn multiplicity_unchecked(d: u32, l: u32) -> u64 {
    let (d, l) = (d as i64, l as i64);
    binomial(d + l - 2, d - 2) - binomial(d + l - 4, d - 2)
}

/// Potential coefficient `γ(d,l) = l(l+d-3) + (d-2)(d-4)/4` of the flat-metric
/// fiber form.
///
/// The pair `(3, 0)` is rejected: there `γ = -1/4` is Hardy-critical and the
/// unitary transform to the flat metric does not preserve the form domain.
pub fn gamma(d: u32, l: u32) -> Result<f64> {
    validate_dimension(d)?;
    if d == 3 && l == 0 {
        return Err(Error::ExcludedFiber { d, l });
    }
    Ok(gamma_unchecked(d, l))
}

fn gamma_unchecked(d: u32, l: u32) -> f64 {
    let df = d as f64;
    angular_ev_unchecked(d, l) + 0.25 * (df - 2.0) * (df - 4.0)
}

/// Bottom `-α²/4` of the essential spectrum.
pub fn threshold(alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    Ok(-0.25 * alpha * alpha)
}

/// Leading coefficient `cot(θ)/(4π)` of the eigenvalue counting function in
/// `|ln E|`.
pub fn predicted_slope(theta: f64) -> Result<f64> {
    validate_theta(theta)?;
    Ok(1.0 / (theta.tan() * 4.0 * PI))
}

/// The same coefficient written through the one-dimensional inverse-square
/// law, `(1/2π) sqrt(c - 1/4)` with `c = 1/(4 sin²θ)`.
pub fn inverse_square_slope(c: f64) -> f64 {
    if c <= 0.25 {
        0.0
    } else {
        (c - 0.25).sqrt() / (2.0 * PI)
    }
}

/// Strength `c = 1/(4 sin²θ)` of the inverse-square potential seen along the ray.
pub fn ray_potential_strength(theta: f64) -> f64 {
    let s = theta.sin();
    0.25 / (s * s)
}

/// Coordinate frames used by the discretizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordKind {
    /// Meridian half-plane `(r, z)`, `r > 0`.
    MeridianRz,
    /// Rotated frame `(s, t)` in which the meridian ray is `{t = 0, s > 0}`.
    RotatedSt,
    /// Rotated frame stretched along the ray to the fixed domain `Ω_{π/4}`.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMap {
    pub kind: CoordKind,
    pub theta: f64,
}

impl CoordinateMap {
    pub fn new(kind: CoordKind, theta: f64) -> Result<Self> {
        validate_theta(theta)?;
        Ok(Self { kind, theta })
    }

    /// Maps a meridian point into this frame.
    pub fn from_meridian(&self, p: (f64, f64)) -> (f64, f64) {
        match self.kind {
            CoordKind::MeridianRz => p,
            CoordKind::RotatedSt => to_rotated(p, self.theta),
            CoordKind::Reference => to_reference(to_rotated(p, self.theta), self.theta),
        }
    }

    /// Maps a point of this frame back to the meridian half-plane.
    pub fn to_meridian(&self, p: (f64, f64)) -> (f64, f64) {
        match self.kind {
            CoordKind::MeridianRz => p,
            CoordKind::RotatedSt => to_meridian(p, self.theta),
            CoordKind::Reference => to_meridian(from_reference(p, self.theta), self.theta),
        }
    }

    /// Distance to the axis, `r`, of a point given in this frame.
    pub fn axis_distance(&self, p: (f64, f64)) -> f64 {
        self.to_meridian(p).0
    }
}

/// `(r, z) ↦ (s, t) = (z cosθ + r sinθ, -z sinθ + r cosθ)`.
pub fn to_rotated((r, z): (f64, f64), theta: f64) -> (f64, f64) {
    let (sn, cs) = theta.sin_cos();
    (z * cs + r * sn, -z * sn + r * cs)
}

/// Inverse of [`to_rotated`].
pub fn to_meridian((s, t): (f64, f64), theta: f64) -> (f64, f64) {
    let (sn, cs) = theta.sin_cos();
    (s * sn + t * cs, s * cs - t * sn)
}

/// `(s, t) ↦ (s tanθ, t)`, taking `Ω_θ` onto `Ω_{π/4}`.
pub fn to_reference((s, t): (f64, f64), theta: f64) -> (f64, f64) {
    (s * theta.tan(), t)
}

pub fn from_reference((s, t): (f64, f64), theta: f64) -> (f64, f64) {
    (s / theta.tan(), t)
}
