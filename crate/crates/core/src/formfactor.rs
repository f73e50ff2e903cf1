//! Squared two-spinon amplitude `|A±(β)|²` for complex `β = γ + iδ`.
//!
//! ```text
//! |A±(β)|² = exp(-I±(γ, δ)),
//! I±(γ, δ) = ∫_0^∞ dx [cosh(2x(1 - δ/π)) cos(2xγ/π) - 1] e^{∓x} / (x sinh 2x cosh x)
//! ```
//!
//! For `A+`, and for `A-` with `δ > 0`, the integrand decays exponentially.
//! For `A-` at `δ = 0` it behaves like `2 cos(2xγ/π) / x` at large `x` and the
//! integral only converges conditionally. Every `A-` evaluation therefore
//! splits the range at `X = split_point`:
//!
//! ```text
//! I- = ∫_0^X f  +  2 Re E1((b + ic) X)  +  ∫_X^∞ r,      b = 2δ/π, c = 2γ/π
//! ```
//!
//! where `2 e^{-bx} cos(cx) / x` has been peeled off the tail in closed form
//! (at `δ = 0` the middle term is `-2 Ci(cX)`) and the remainder `r` decays
//! like `e^{-2x}`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::{Lazy, OnceCell};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Estimate, Tolerance};
use crate::special;

/// Which amplitude: `A+` (weight `e^{-x}`) or `A-` (weight `e^{+x}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// Complex amplitude argument `β = γ + iδ`, `0 ≤ δ < π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactorArg {
    pub gamma: f64,
    pub delta: f64,
    pub branch: Branch,
}

impl FormFactorArg {
    pub fn new(gamma: f64, delta: f64, branch: Branch) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("γ must be finite, got {gamma}")));
        }
        if !(0.0..PI).contains(&delta) {
            return Err(Error::Domain(format!("δ must lie in [0, π), got {delta}")));
        }
        Ok(Self { gamma, delta, branch })
    }
}

/// Tolerances for every quadrature behind the amplitude and the structure
/// factor. `rel_tol`/`abs_tol` apply to each integral in the usual
/// `max(abs, rel * |I|)` sense; since `|A|² = exp(-I)`, an absolute error `ε`
/// in the exponent is a relative error `ε` in the amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub split_point: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            split_point: 30.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if !(self.split_point >= 1.0 && self.split_point.is_finite()) {
            return Err(Error::InvalidConfig(format!("split_point must be >= 1, got {}", self.split_point)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.abs_tol, self.rel_tol, self.max_subdivisions)
    }

    fn cache_key(&self) -> [u64; 4] {
        [
            self.rel_tol.to_bits(),
            self.abs_tol.to_bits(),
            self.split_point.to_bits(),
            self.max_subdivisions as u64,
        ]
    }
}

/// Below this `|γ|` the `A-(γ)` exponent at `δ = 0` is treated as divergent.
pub const GAMMA_ZERO_THRESHOLD: f64 = 1e-12;

/// Integrand parameters: `a = 1 - δ/π`, `c = 2γ/π`, `s = +1` for `A+`, `-1` for `A-`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Integrand {
    pub a: f64,
    pub c: f64,
    pub s: f64,
    series_cutoff: f64,
}

impl Integrand {
    pub(crate) fn new(arg: &FormFactorArg) -> Self {
        let a = 1.0 - arg.delta / PI;
        let c = 2.0 * arg.gamma.abs() / PI;
        let s = match arg.branch {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        };
        // fourth-order terms scale like (x max(1, a, c))^4
        let series_cutoff = 1e-4 / a.max(c).max(1.0);
        Self { a, c, s, series_cutoff }
    }

    /// Taylor expansion about `x = 0` through `x³`.
    pub(crate) fn series(&self, x: f64) -> f64 {
        let (a2, c2) = (self.a * self.a, self.c * self.c);
        let c0 = a2 - 0.25 * c2;
        let c1 = -self.s * c0;
        let c2_ = (16.0 * a2 * a2 - 24.0 * a2 * c2 - 32.0 * a2 + c2 * c2 + 8.0 * c2) / 48.0;
        let c3 = -self.s * (16.0 * a2 * a2 - 24.0 * a2 * c2 - 48.0 * a2 + c2 * c2 + 12.0 * c2) / 48.0;
        c0 + x * (c1 + x * (c2_ + x * c3))
    }

    /// Cancellation-free form for moderate `x`:
    /// `cosh(2ax)cos(cx) - 1 = 2 sinh²(ax) cos(cx) - 2 sin²(cx/2)`.
    pub(crate) fn direct(&self, x: f64) -> f64 {
        let sh = (self.a * x).sinh();
        let sn = (0.5 * self.c * x).sin();
        let num = 2.0 * sh * sh * (self.c * x).cos() - 2.0 * sn * sn;
        num * (-self.s * x).exp() / (x * (2.0 * x).sinh() * x.cosh())
    }

    /// Overflow-free form for large `x`, written with `u = e^{-2x}`, `v = e^{-4ax}`.
    fn asymptotic(&self, x: f64) -> f64 {
        let u = (-2.0 * x).exp();
        let v = (-4.0 * self.a * x).exp();
        let main = 2.0 * (-(3.0 - 2.0 * self.a + self.s) * x).exp() * (1.0 + v) * (self.c * x).cos();
        let rest = 4.0 * (-(3.0 + self.s) * x).exp();
        (main - rest) / (x * (1.0 - u * u) * (1.0 + u))
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        if x < self.series_cutoff {
            self.series(x)
        } else if x < 2.0 {
            self.direct(x)
        } else {
            self.asymptotic(x)
        }
    }

    /// Tail remainder of the `A-` integrand once `2 e^{-bx} cos(cx) / x` is removed.
    fn minus_remainder(&self, x: f64) -> f64 {
        let b = 2.0 * (1.0 - self.a);
        let u = (-2.0 * x).exp();
        let v = (-4.0 * self.a * x).exp();
        let osc = 2.0 * (-b * x).exp() * (self.c * x).cos() * (v - u + u * u + u * u * u);
        (osc - 4.0 * u) / (x * (1.0 + u) * (1.0 - u * u))
    }
}

/// Absolute floor of the exponent pieces, as a fraction of `rel_tol`.
///
/// An absolute error `ε` in the exponent is a relative error `ε` in `|A|²`,
/// so the floor keeps the amplitude within `1e-3 rel_tol` while sparing
/// pieces that nearly cancel from chasing an absolute target below roundoff.
pub const EXPONENT_FLOOR: f64 = 1e-3;

fn exponent_tolerance(spec: &QuadratureSpec) -> Tolerance {
    Tolerance::new(
        spec.abs_tol.max(EXPONENT_FLOOR * spec.rel_tol),
        spec.rel_tol,
        spec.max_subdivisions,
    )
}

/// The exponent `I±(γ, δ)` with its quadrature error estimate.
///
/// Fails with a domain error for the divergent case (`A-`, `δ = 0`,
/// `|γ| < GAMMA_ZERO_THRESHOLD`).
pub fn exponent(arg: &FormFactorArg, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    let f = Integrand::new(arg);
    let tol = exponent_tolerance(spec);
    let x_split = spec.split_point;

    let head = quadrature::integrate(|x| f.eval(x), 0.0, x_split, &tol)?;
    match arg.branch {
        Branch::Plus => {
            let tail = quadrature::integrate_to_infinity(|x| f.eval(x), x_split, &tol)?;
            Ok(combine(&[head, tail]))
        }
        Branch::Minus => {
            let b = 2.0 * arg.delta / PI;
            if b == 0.0 && arg.gamma.abs() < GAMMA_ZERO_THRESHOLD {
                return Err(Error::Domain("A-(0) exponent diverges".into()));
            }
            let z = Complex64::new(b * x_split, f.c * x_split);
            let closed = Estimate::exact(2.0 * special::exp_integral_e1(z).re);
            let rest = quadrature::integrate_to_infinity(|x| f.minus_remainder(x), x_split, &tol)?;
            Ok(combine(&[head, closed, rest]))
        }
    }
}

fn combine(parts: &[Estimate]) -> Estimate {
    Estimate {
        value: parts.iter().map(|p| p.value).sum(),
        abserr: parts.iter().map(|p| p.abserr).sum(),
        subdivisions: parts.iter().map(|p| p.subdivisions).sum(),
    }
}

/// `|A±(γ + iδ)|²`. Even in `γ` bit-for-bit; `|A-(0)|² = 0` exactly.
pub fn abs_a_squared(arg: &FormFactorArg, spec: &QuadratureSpec) -> Result<f64> {
    let arg = FormFactorArg::new(arg.gamma.abs(), arg.delta, arg.branch)?;
    if arg.branch == Branch::Minus && arg.delta == 0.0 && arg.gamma < GAMMA_ZERO_THRESHOLD {
        spec.validate()?;
        return Ok(0.0);
    }
    Ok((-exponent(&arg, spec)?.value).exp())
}

/// `|A-(γ)|²` on the real axis, the factor entering the structure factor.
pub fn abs_a_minus_real(gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    abs_a_squared(&FormFactorArg::new(gamma, 0.0, Branch::Minus)?, spec)
}

/// `|A+(iπ/2)|² |A-(iπ/2)|²` from the single merged integral
/// `exp(-∫_0^∞ 2(cosh x - 1) / (x sinh 2x) dx)`.
pub fn half_pi_product_combined(spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let tol = spec.tolerance();
    let g = |x: f64| {
        if x < 1e-4 {
            // (x² + x⁴/12) / (2x² (1 + 2x²/3)) = 1/2 - 7x²/24 + O(x⁴)
            0.5 - 7.0 / 24.0 * x * x
        } else if x < 2.0 {
            let sh = (0.5 * x).sinh();
            4.0 * sh * sh / (x * (2.0 * x).sinh())
        } else {
            // 2(cosh x - 1)/sinh 2x in powers of e^{-x}
            let e = (-x).exp();
            2.0 * e * (1.0 - e) * (1.0 - e) / (x * (1.0 - e.powi(4)))
        }
    };
    let head = quadrature::integrate(g, 0.0, spec.split_point, &tol)?;
    let tail = quadrature::integrate_to_infinity(g, spec.split_point, &tol)?;
    Ok((-(head.value + tail.value)).exp())
}

/// `Γ(3/4)² / Γ(1/4)²`.
pub fn gamma_ratio_squared() -> f64 {
    let r = special::gamma(0.75) / special::gamma(0.25);
    r * r
}

type PrefactorCell = Arc<OnceCell<f64>>;

static PREFACTOR_CACHE: Lazy<Mutex<HashMap<[u64; 4], PrefactorCell>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn compute_prefactor(spec: &QuadratureSpec) -> Result<f64> {
    let half = std::f64::consts::FRAC_PI_2;
    let plus = abs_a_squared(&FormFactorArg::new(0.0, half, Branch::Plus)?, spec)?;
    let minus = abs_a_squared(&FormFactorArg::new(0.0, half, Branch::Minus)?, spec)?;
    Ok(PI * PI * gamma_ratio_squared() / (4.0 * plus * minus))
}

/// Overall constant `π² Γ(3/4)² / (4 Γ(1/4)² |A-(iπ/2)|² |A+(iπ/2)|²)`.
///
/// Memoised per tolerance set; concurrent first callers block on a single
/// computation.
pub fn prefactor_constant(spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let cell = {
        let mut cache = PREFACTOR_CACHE.lock().unwrap_or_else(|e| e.into_inner());
        cache.entry(spec.cache_key()).or_default().clone()
    };
    cell.get_or_try_init(|| compute_prefactor(spec)).copied()
}
