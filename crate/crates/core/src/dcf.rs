//! Two-spinon dynamical structure factor
//!
//! ```text
//! S₂⁺⁻(w, k) = C |A-(β̄1 - β̄2)|² Θ(w_u - w) Θ(w - w_l) / sqrt(w_u² - w²)
//! ```
//!
//! with `C` from [`formfactor::prefactor_constant`], `(β̄1, β̄2)` from
//! [`kinematics::invert_kinematics`] and `w_l`, `w_u` the band edges. Values
//! are reported without any per-site or `2π` renormalization; the Cartesian
//! components are `S^xx = S^yy = S^zz = 4 S⁺⁻`.
//!
//! Edges are excluded: `S = 0` at `w = w_l` and `w = w_u` exactly.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formfactor::{self, QuadratureSpec};
use crate::kinematics::{band_boundaries, invert_kinematics, pair_from_momenta, KinematicPoint, SpinonPair};
use crate::quadrature::{self, Tolerance};

/// `S^xx = S^yy = S^zz` over `S⁺⁻`.
pub const COMPONENT_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcfValue {
    pub s_pm: f64,
    pub in_band: bool,
    /// Rapidity pair, present exactly when `in_band`.
    pub pair: Option<SpinonPair>,
}

impl DcfValue {
    fn outside() -> Self {
        Self {
            s_pm: 0.0,
            in_band: false,
            pair: None,
        }
    }
}

/// `S₂⁺⁻(w, k)`.
pub fn s2_pm(pt: KinematicPoint, spec: &QuadratureSpec) -> Result<DcfValue> {
    let band = band_boundaries(pt.k)?;
    if !band.contains(pt.w) {
        return Ok(DcfValue::outside());
    }
    let pair = match invert_kinematics(pt) {
        Ok(p) => p,
        Err(Error::OutsideBand { .. } | Error::DegenerateWindow(_)) => return Ok(DcfValue::outside()),
        Err(e) => return Err(e),
    };
    let c = formfactor::prefactor_constant(spec)?;
    let amp = formfactor::abs_a_minus_real(pair.separation(), spec)?;
    let root = ((band.upper - pt.w) * (band.upper + pt.w)).sqrt();
    Ok(DcfValue {
        s_pm: c * amp / root,
        in_band: true,
        pair: Some(pair),
    })
}

/// `(S^xx, S^yy, S^zz)`, each exactly `4 S⁺⁻`.
pub fn s2_components(pt: KinematicPoint, spec: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    let s = COMPONENT_FACTOR * s2_pm(pt, spec)?.s_pm;
    Ok((s, s, s))
}

/// Rectangular `(k, w)` grid; both axes include their endpoints.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub k_min: f64,
    pub k_max: f64,
    pub n_k: usize,
    pub w_min: f64,
    pub w_max: f64,
    pub n_w: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_k < 2 || self.n_w < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid counts must be at least 2, got n_k = {}, n_w = {}",
                self.n_k, self.n_w
            )));
        }
        let finite = [self.k_min, self.k_max, self.w_min, self.w_max].iter().all(|x| x.is_finite());
        if !finite || !(self.k_min < self.k_max) || !(self.w_min < self.w_max) {
            return Err(Error::InvalidConfig("grid ranges must be finite and increasing".into()));
        }
        if self.k_min < 0.0 || self.k_max > TAU {
            return Err(Error::InvalidConfig(format!(
                "k range [{}, {}] leaves the zone [0, 2π]",
                self.k_min, self.k_max
            )));
        }
        if self.w_min < 0.0 {
            return Err(Error::InvalidConfig("w_min must be non-negative".into()));
        }
        Ok(())
    }

    pub fn k_values(&self) -> Vec<f64> {
        linspace(self.k_min, self.k_max, self.n_k)
    }

    pub fn w_values(&self) -> Vec<f64> {
        linspace(self.w_min, self.w_max, self.n_w)
    }
}

/// `n` evenly spaced points with both ends hit exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * (i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub k: f64,
    pub w: f64,
    /// NaN when the point failed.
    pub s_pm: f64,
    pub s_xx: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub k: f64,
    pub w: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// k-major: all `w` for the first `k`, then the next `k`.
    pub rows: Vec<GridRow>,
    pub failures: Vec<PointFailure>,
}

/// Evaluate the grid. `workers = None` uses the global rayon pool; the output
/// does not depend on the worker count.
pub fn evaluate_grid(grid: &GridSpec, spec: &QuadratureSpec, workers: Option<usize>) -> Result<GridResult> {
    grid.validate()?;
    spec.validate()?;
    // warm the shared constant once so its failure is reported up front
    formfactor::prefactor_constant(spec)?;
    let ks = grid.k_values();
    let ws = grid.w_values();
    let points: Vec<(f64, f64)> = ks.iter().flat_map(|&k| ws.iter().map(move |&w| (k, w))).collect();
    let eval = || -> Vec<std::result::Result<GridRow, PointFailure>> {
        points
            .par_iter()
            .map(|&(k, w)| {
                KinematicPoint::new(w, k)
                    .and_then(|pt| s2_pm(pt, spec))
                    .map(|v| GridRow {
                        k,
                        w,
                        s_pm: v.s_pm,
                        s_xx: COMPONENT_FACTOR * v.s_pm,
                    })
                    .map_err(|e| PointFailure {
                        k,
                        w,
                        message: e.to_string(),
                    })
            })
            .collect()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?
            .install(eval),
        None => eval(),
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => {
                rows.push(GridRow {
                    k: f.k,
                    w: f.w,
                    s_pm: f64::NAN,
                    s_xx: f64::NAN,
                });
                failures.push(f);
            }
        }
    }
    Ok(GridResult { rows, failures })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleReport {
    pub k: f64,
    /// `∫ S₂⁺⁻(w, k) dw` over the band.
    pub fixed_k_weight: f64,
    pub abserr: f64,
    /// `(1/2π) ∫_0^{2π} dk` of the fixed-k weight, when requested.
    pub total_weight: Option<f64>,
    pub spec: QuadratureSpec,
}

/// Outer tolerance for integrals over `w`: the integrand carries the
/// relative noise of the inner amplitude quadrature, so the outer target is
/// `OUTER_TOLERANCE_FACTOR` times looser.
pub const OUTER_TOLERANCE_FACTOR: f64 = 1e3;

fn band_tolerance(spec: &QuadratureSpec) -> Tolerance {
    Tolerance::new(spec.abs_tol, OUTER_TOLERANCE_FACTOR * spec.rel_tol, spec.max_subdivisions)
}

fn band_integral(k: f64, spec: &QuadratureSpec, tol: &Tolerance) -> Result<quadrature::Estimate> {
    band_boundaries(k)?;
    let c = formfactor::prefactor_constant(spec)?;
    // With p1,2 = -k/2 ± D and w = w_u cos D, dw / sqrt(w_u² - w²) = dD, so
    // the weight is C ∫ |A₋|² dD over D ∈ (0, D_max). |A₋|² grows like
    // (D_max - D)^(-1/2) at the lower edge; D = D_max (1 - t²) removes it.
    // the weight is even under k -> 2π - k
    let k = if k > PI { TAU - k } else { k };
    let d_max = 0.5 * k;
    let failure = std::cell::Cell::new(None::<Error>);
    let f = |t: f64| -> f64 {
        let near = d_max * t * t;
        let amp = pair_from_momenta(-near, near - k).and_then(|pair| formfactor::abs_a_minus_real(pair.separation(), spec));
        match amp {
            Ok(a) => c * a * 2.0 * d_max * t,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let est = quadrature::integrate(f, 0.0, 1.0, tol);
    match failure.take() {
        Some(e) => Err(e),
        None => est,
    }
}

/// `∫_{w_l}^{w_u} S₂⁺⁻(w, k) dw`.
///
/// At `k = π` the lower edge is `w = 0`, where `S` grows like
/// `sqrt(ln(1/w)) / w`; the weight is infinite and
/// [`Error::DivergentWeight`] is returned.
pub fn fixed_k_weight(k: f64, spec: &QuadratureSpec) -> Result<SumRuleReport> {
    spec.validate()?;
    if !k.is_finite() || !(0.0..=TAU).contains(&k) {
        return Err(Error::OutOfZone(k));
    }
    if k == 0.0 || k == TAU {
        return Err(Error::DegenerateWindow(k));
    }
    if (k - PI).abs() <= 4.0 * f64::EPSILON * PI {
        // S ~ sqrt(ln(1/w)) / w as w -> 0 at k = π
        return Err(Error::DivergentWeight(k));
    }
    formfactor::prefactor_constant(spec)?;
    let est = band_integral(k, spec, &band_tolerance(spec))?;
    Ok(SumRuleReport {
        k,
        fixed_k_weight: est.value,
        abserr: est.abserr,
        total_weight: None,
        spec: *spec,
    })
}

/// Zone average `(1/2π) ∫_0^{2π} W(k) dk = (1/π) ∫_0^π W(k) dk` of the
/// fixed-k weight, the outer integral run to `outer_rel`.
pub fn zone_weight(spec: &QuadratureSpec, outer_rel: f64) -> Result<quadrature::Estimate> {
    spec.validate()?;
    if !(outer_rel > 0.0) {
        return Err(Error::InvalidConfig("outer tolerance must be positive".into()));
    }
    formfactor::prefactor_constant(spec)?;
    let inner = band_tolerance(spec);
    let failure = std::cell::Cell::new(None::<Error>);
    let f = |k: f64| match band_integral(k, spec, &inner) {
        Ok(e) => e.value,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let outer = Tolerance::new(spec.abs_tol, outer_rel, spec.max_subdivisions);
    let est = quadrature::integrate(f, 0.0, PI, &outer);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let est = est?;
    Ok(quadrature::Estimate {
        value: est.value / PI,
        abserr: est.abserr / PI,
        subdivisions: est.subdivisions,
    })
}

/// `S₂⁺⁻(w_l (1 + η), k) sqrt(w - w_l)` for each `η`.
pub fn lower_edge_scan(k: f64, etas: &[f64], spec: &QuadratureSpec) -> Result<Vec<(f64, f64)>> {
    let band = band_boundaries(k)?;
    etas.iter()
        .map(|&eta| {
            let w = band.lower * (1.0 + eta);
            let v = s2_pm(KinematicPoint::new(w, k)?, spec)?;
            Ok((eta, v.s_pm * (w - band.lower).sqrt()))
        })
        .collect()
}

/// `S₂⁺⁻(w_u (1 - 10^{-m}), k)` for each `m`.
pub fn upper_edge_scan(k: f64, exponents: &[i32], spec: &QuadratureSpec) -> Result<Vec<(i32, f64)>> {
    let band = band_boundaries(k)?;
    exponents
        .iter()
        .map(|&m| {
            let w = band.upper * (1.0 - 10f64.powi(-m));
            Ok((m, s2_pm(KinematicPoint::new(w, k)?, spec)?.s_pm))
        })
        .collect()
}
