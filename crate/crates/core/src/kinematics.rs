//! Spinon dispersion of the isotropic chain and the two-spinon band.
//!
//! Energies are in units where a single spinon of rapidity `β` carries
//! `e(β) = π / cosh β`; its momentum `p(β) ∈ (-π, 0)` satisfies
//! `cot p = sinh β`. Two spinons with total energy `w` and total momentum
//! transfer `k = -p(β1) - p(β2)` fill the band `π|sin k| ≤ w ≤ 2π sin(k/2)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Real spinon spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rapidity(f64);

impl Rapidity {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() {
            Ok(Self(beta))
        } else {
            Err(Error::Domain(format!("rapidity must be finite, got {beta}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Energy and momentum transfer `(w, k)` with `k` in the zone `[0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicPoint {
    pub w: f64,
    pub k: f64,
}

impl KinematicPoint {
    pub fn new(w: f64, k: f64) -> Result<Self> {
        if !k.is_finite() || !(0.0..=TAU).contains(&k) {
            return Err(Error::OutOfZone(k));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Domain(format!("energy transfer must be finite and non-negative, got {w}")));
        }
        Ok(Self { w, k })
    }
}

/// Lower (des Cloizeaux–Pearson) and upper edges of the two-spinon band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandWindow {
    pub lower: f64,
    pub upper: f64,
}

impl BandWindow {
    /// Open-interval membership; both edges are excluded.
    pub fn contains(&self, w: f64) -> bool {
        self.lower < w && w < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Unordered rapidity pair, stored with `beta1 <= beta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinonPair {
    beta1: Rapidity,
    beta2: Rapidity,
}

impl SpinonPair {
    pub fn new(a: Rapidity, b: Rapidity) -> Self {
        if a.0 <= b.0 {
            Self { beta1: a, beta2: b }
        } else {
            Self { beta1: b, beta2: a }
        }
    }

    pub fn beta1(&self) -> Rapidity {
        self.beta1
    }

    pub fn beta2(&self) -> Rapidity {
        self.beta2
    }

    /// `β2 - β1 >= 0`, the argument of the two-spinon amplitude.
    pub fn separation(&self) -> f64 {
        self.beta2.0 - self.beta1.0
    }

    pub fn energy(&self) -> f64 {
        spinon_energy(self.beta1) + spinon_energy(self.beta2)
    }

    /// Total momentum transfer `-p(β1) - p(β2)`.
    pub fn momentum(&self) -> f64 {
        -spinon_momentum(self.beta1) - spinon_momentum(self.beta2)
    }
}

/// `e(β) = π / cosh β`.
pub fn spinon_energy(beta: Rapidity) -> f64 {
    PI / beta.0.cosh()
}

/// `p(β) ∈ (-π, 0)` with `cot p = sinh β`, i.e. `-π/2 - gd(β)`.
pub fn spinon_momentum(beta: Rapidity) -> f64 {
    -FRAC_PI_2 - beta.0.sinh().atan()
}

/// Band edges at momentum `k ∈ [0, 2π]`.
pub fn band_boundaries(k: f64) -> Result<BandWindow> {
    if !k.is_finite() || !(0.0..=TAU).contains(&k) {
        return Err(Error::OutOfZone(k));
    }
    let lower = PI * k.sin().abs();
    let upper = 2.0 * PI * (0.5 * k).sin();
    // sin(k/2) >= |sin k| / 2 holds exactly; rounding near the zone edges can
    // flip the order by an ulp
    Ok(BandWindow {
        lower: lower.min(upper),
        upper,
    })
}

/// `asinh` through `sign(x) ln(|x| + sqrt(x² + 1))`, safe for large `|x|`.
pub(crate) fn asinh_log(x: f64) -> f64 {
    let ax = x.abs();
    let mag = if ax > 1e150 {
        ax.ln() + std::f64::consts::LN_2
    } else {
        (ax + (ax * ax + 1.0).sqrt()).ln()
    };
    mag.copysign(x)
}

/// Rapidities `(β̄1, β̄2)` with `e(β̄1) + e(β̄2) = w` and `-p(β̄1) - p(β̄2) = k`.
///
/// Writing `p1,2 = -k/2 ± D`, the energy constraint becomes
/// `w = 2π sin(k/2) cos D`, and `p1, p2 ∈ (-π, 0)` restricts
/// `D ∈ (0, min(k/2, π - k/2))`, which is exactly the open band.
pub fn invert_kinematics(pt: KinematicPoint) -> Result<SpinonPair> {
    let KinematicPoint { w, k } = pt;
    if k == 0.0 || k == TAU {
        return Err(Error::DegenerateWindow(k));
    }
    let band = band_boundaries(k)?;
    if !band.contains(w) {
        return Err(Error::OutsideBand { w, k });
    }
    let d = (w / band.upper).acos();
    let p1 = -0.5 * k + d;
    let p2 = -0.5 * k - d;
    if !(p1 < 0.0 && p2 > -PI && d > 0.0) {
        // within rounding of an edge
        return Err(Error::OutsideBand { w, k });
    }
    pair_from_momenta(p1, p2)
}

/// The pair with spinon momenta `p1, p2 ∈ (-π, 0)`.
pub fn pair_from_momenta(p1: f64, p2: f64) -> Result<SpinonPair> {
    for p in [p1, p2] {
        if !(p < 0.0 && p > -PI) {
            return Err(Error::Domain(format!("spinon momentum {p} outside (-pi, 0)")));
        }
    }
    let beta = |p: f64| Rapidity::new(asinh_log(p.cos() / p.sin()));
    Ok(SpinonPair::new(beta(p1)?, beta(p2)?))
}
