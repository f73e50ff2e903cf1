//! Spinon dispersion of the anisotropic (XXZ) chain in the massive
//! antiferromagnetic regime `Δ = (q + 1/q)/2 < -1`, `-1 < q < 0`.
//!
//! The translation eigenvalue of one spinon is a ratio of theta functions,
//!
//! ```text
//! τ(ξ) = ξ^{-1} θ_{q⁴}(q ξ²) / θ_{q⁴}(q ξ^{-2}),    ξ = i e^{iα},
//! ```
//!
//! and energy and momentum are Jacobi elliptic functions of `u = 2Kα/π` with
//! nome `-q = exp(-π K'/K)`:
//!
//! ```text
//! e(α) = (2K/π) sinh(π K'/K) dn(u),    p(α) = am(u) - π/2.
//! ```
//!
//! With `q = -e^{-ε}` and `α = -εβ/π`, both tend to the isotropic
//! `π / cosh β` and `p(β)` as `ε -> 0⁺`; [`isotropic_limit_check`] measures
//! that convergence.

pub mod elliptic;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{spinon_energy, spinon_momentum, Rapidity};

/// Multiplier taking the XXZ energy to the isotropic `π / cosh β` units as
/// `ε -> 0`. Fixed by the limit study: Richardson extrapolation in `ε²` of
/// `e(α = 0)` over `ε ∈ {0.2, 0.1, 0.05}` lands on `π` to better than 1e-6,
/// so no rescaling is applied (`e(0) = π sinh(ε)/ε` up to `O(e^{-π²/ε})`).
pub const ISOTROPIC_ENERGY_SCALE: f64 = 1.0;

/// `arg τ(α) + p(α)` modulo 2π: the theta-function ratio equals
/// `-exp(-i p(α))`, i.e. `τ(i) = -i` while `p(0) = -π/2`.
pub const TAU_PHASE_OFFSET: f64 = PI;

/// Immutable anisotropy data produced by [`solve_nome`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anisotropy {
    /// `q ∈ (-1, 0)`.
    pub q: f64,
    /// `q = -e^{-ε}`.
    pub epsilon: f64,
    /// Elliptic parameter `m` and its complement `m1 = 1 - m`.
    pub m: f64,
    pub m1: f64,
    pub k: f64,
    pub k_prime: f64,
}

impl Anisotropy {
    /// `Δ = (q + 1/q) / 2`.
    pub fn delta(&self) -> f64 {
        0.5 * (self.q + 1.0 / self.q)
    }

    /// `exp(-π K'/K)`, equal to `-q` after solving.
    pub fn nome(&self) -> f64 {
        (-PI * self.k_prime / self.k).exp()
    }
}

/// Real spectral angle `α`, with `ξ = i e^{iα}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub alpha: f64,
}

impl SpectralParam {
    pub fn xi(&self) -> Complex64 {
        Complex64::i() * Complex64::from_polar(1.0, self.alpha)
    }
}

const POCHHAMMER_MAX_TERMS: usize = 50_000_000;

/// `(y; x)_∞ = ∏_{n≥0} (1 - y xⁿ)` for `|x| < 1`.
pub fn q_pochhammer(y: Complex64, x: Complex64) -> Result<Complex64> {
    let ax = x.norm();
    if !(ax < 1.0) {
        return Err(Error::Domain(format!("q-Pochhammer needs |x| < 1, got {ax}")));
    }
    let cutoff = 1e-17 * (1.0 - ax);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut term = y;
    for _ in 0..POCHHAMMER_MAX_TERMS {
        if term.norm() < cutoff {
            return Ok(prod);
        }
        prod *= 1.0 - term;
        term *= x;
    }
    Err(Error::ConvergenceFailure(format!("q-Pochhammer product with |x| = {ax}")))
}

/// `θ_x(y) = (x; x)_∞ (y; x)_∞ (x/y; x)_∞`.
pub fn theta(x: Complex64, y: Complex64) -> Result<Complex64> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("theta function needs y != 0".into()));
    }
    Ok(q_pochhammer(x, x)? * q_pochhammer(y, x)? * q_pochhammer(x / y, x)?)
}

/// One-spinon translation eigenvalue `τ(ξ)`; unimodular for real `α`.
pub fn tau(xi: SpectralParam, aniso: &Anisotropy) -> Result<Complex64> {
    let z = xi.xi();
    let q = Complex64::new(aniso.q, 0.0);
    let nome4 = q.powi(4);
    let num = theta(nome4, q * z * z)?;
    let den = theta(nome4, q / (z * z))?;
    Ok(num / (den * z))
}

fn elliptic_argument(alpha: f64, aniso: &Anisotropy) -> f64 {
    2.0 * aniso.k * alpha / PI
}

/// `e(α) = (2K/π) sinh(π K'/K) dn(2Kα/π)`.
pub fn xxz_energy(alpha: f64, aniso: &Anisotropy) -> f64 {
    let u = elliptic_argument(alpha, aniso);
    let dn = elliptic::am_dn(u, aniso.m, aniso.m1).dn;
    2.0 * aniso.k / PI * (PI * aniso.k_prime / aniso.k).sinh() * dn
}

/// `p(α) = am(2Kα/π) - π/2`.
pub fn xxz_momentum(alpha: f64, aniso: &Anisotropy) -> f64 {
    let u = elliptic_argument(alpha, aniso);
    elliptic::am_dn(u, aniso.m, aniso.m1).am - FRAC_PI_2
}

/// Energy from the logarithmic derivative `((1 - q²)/2q) ξ d/dξ log τ(ξ)`,
/// by a central difference in `α` with step `h` (`ξ d/dξ = -i d/dα`).
pub fn xxz_energy_from_tau(alpha: f64, aniso: &Anisotropy, h: f64) -> Result<f64> {
    let fwd = tau(SpectralParam { alpha: alpha + h }, aniso)?;
    let bwd = tau(SpectralParam { alpha: alpha - h }, aniso)?;
    let dlog = (fwd / bwd).ln() / (2.0 * h);
    let xi_dxi = dlog * -Complex64::i();
    let q = aniso.q;
    Ok((1.0 - q * q) / (2.0 * q) * xi_dxi.re)
}

/// `π K'(x) / K(x)` for parameter `x`; strictly decreasing on (0, 1).
fn period_ratio(x: f64) -> f64 {
    PI * elliptic::complete_k(x) / elliptic::complete_k(1.0 - x)
}

const NOME_MAX_BISECTIONS: usize = 400;
/// `π K'/K` beyond which `1 - m ≈ 16 e^{-πK'/K}` is below 1e-280.
const HYPERBOLIC_TARGET: f64 = 647.0;

/// Elliptic data for `q ∈ (-1, 0)`: finds `m` with `exp(-π K'(m)/K(m)) = -q`.
///
/// The bisection always runs on the smaller of `m`, `1 - m` (for nomes above
/// `e^{-π}` it solves the dual equation `π K'/K = π²/ε` for `1 - m`), so the
/// isotropic end is resolved through `m1` without cancellation.
pub fn solve_nome(q: f64) -> Result<Anisotropy> {
    if !(q > -1.0 && q < 0.0) {
        return Err(Error::Domain(format!("q must lie in the interval (-1, 0), got {q}")));
    }
    let epsilon = -(-q).ln();
    let dual = epsilon < PI;
    let target = if dual { PI * PI / epsilon } else { epsilon };
    // period_ratio(x) ≈ ln(16/x) for small x
    if target > HYPERBOLIC_TARGET {
        // 1 - m below 1e-280: every O(1 - m) correction is far under an ulp
        let aniso = Anisotropy {
            q,
            epsilon,
            m: 1.0,
            m1: 0.0,
            k: PI * FRAC_PI_2 / epsilon,
            k_prime: FRAC_PI_2,
        };
        return Ok(aniso);
    }
    let mut lo = 16.0f64.ln() - target - 2.0;
    let mut hi = 0.5f64.ln();
    let mut converged = false;
    for _ in 0..NOME_MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if period_ratio(mid.exp()) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!("nome bisection for q = {q}")));
    }
    let x = (0.5 * (lo + hi)).exp();
    let (m, m1) = if dual { (1.0 - x, x) } else { (x, 1.0 - x) };
    let aniso = Anisotropy {
        q,
        epsilon,
        m,
        m1,
        k: elliptic::complete_k(m1),
        k_prime: elliptic::complete_k(m),
    };
    let err = (aniso.nome() + q).abs();
    if err > 1e-12 {
        return Err(Error::ConvergenceFailure(format!("nome residual {err:e} for q = {q}")));
    }
    Ok(aniso)
}

/// One `(ε, β)` sample of the isotropic-limit study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSample {
    pub epsilon: f64,
    pub beta: f64,
    /// Rescaled XXZ energy at `α = -εβ/π`.
    pub energy: f64,
    pub energy_target: f64,
    pub momentum: f64,
    pub momentum_target: f64,
}

impl LimitSample {
    pub fn energy_error(&self) -> f64 {
        (self.energy - self.energy_target).abs()
    }

    pub fn momentum_error(&self) -> f64 {
        (self.momentum - self.momentum_target).abs()
    }
}

/// Convergence summary at one rapidity.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSeries {
    pub beta: f64,
    pub samples: Vec<LimitSample>,
    /// `ln(err_i / err_{i+1}) / ln(ε_i / ε_{i+1})` for consecutive pairs.
    pub observed_orders: Vec<f64>,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub series: Vec<LimitSeries>,
    /// Richardson extrapolation (in `ε²`) of `e(β = 0) / π` from the two
    /// smallest `ε`.
    pub extrapolated_scale: f64,
}

/// Evaluate the XXZ dispersion at `q = -e^{-ε}`, `α = -εβ/π` for each `ε`
/// (strictly decreasing, positive) and compare with `π / cosh β`, `p(β)`.
pub fn isotropic_limit_check(epsilons: &[f64], betas: &[f64]) -> Result<LimitReport> {
    if epsilons.len() < 2 {
        return Err(Error::InvalidConfig("need at least two ε values".into()));
    }
    if epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidConfig("ε values must be positive and strictly decreasing".into()));
    }
    let anisos = epsilons
        .iter()
        .map(|e| solve_nome(-(-e).exp()))
        .collect::<Result<Vec<_>>>()?;

    let mut series = Vec::with_capacity(betas.len());
    for &beta in betas {
        let rap = Rapidity::new(beta)?;
        let samples: Vec<LimitSample> = anisos
            .iter()
            .map(|a| {
                let alpha = -a.epsilon * beta / PI;
                LimitSample {
                    epsilon: a.epsilon,
                    beta,
                    energy: xxz_energy(alpha, a) / ISOTROPIC_ENERGY_SCALE,
                    energy_target: spinon_energy(rap),
                    momentum: xxz_momentum(alpha, a),
                    momentum_target: spinon_momentum(rap),
                }
            })
            .collect();
        let observed_orders = samples
            .windows(2)
            .map(|w| (w[0].energy_error() / w[1].energy_error()).ln() / (w[0].epsilon / w[1].epsilon).ln())
            .collect();
        let monotone = samples.windows(2).all(|w| w[1].energy_error() < w[0].energy_error());
        series.push(LimitSeries {
            beta,
            samples,
            observed_orders,
            monotone,
        });
    }

    let n = anisos.len();
    let (e1, e2) = (anisos[n - 2].epsilon, anisos[n - 1].epsilon);
    let (v1, v2) = (xxz_energy(0.0, &anisos[n - 2]), xxz_energy(0.0, &anisos[n - 1]));
    let extrapolated = (v2 * e1 * e1 - v1 * e2 * e2) / (e1 * e1 - e2 * e2);

    Ok(LimitReport {
        series,
        extrapolated_scale: extrapolated / PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pochhammer_trivial_cases() {
        assert_eq!(q_pochhammer(c(0.0), c(0.7)).unwrap(), c(1.0));
        let y = Complex64::new(0.3, -0.2);
        assert_eq!(q_pochhammer(y, c(0.0)).unwrap(), c(1.0) - y);
        assert!(q_pochhammer(c(0.1), c(1.0)).is_err());
        assert!(q_pochhammer(c(0.1), Complex64::new(0.0, -1.2)).is_err());
    }

    #[test]
    fn pochhammer_golden() {
        // (1/2; 1/2)_∞, mpmath qp(0.5, 0.5)
        let v = q_pochhammer(c(0.5), c(0.5)).unwrap();
        assert!((v.re - 0.288_788_095_086_602_421_3).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn theta_golden_and_symmetry() {
        let x = c(0.1);
        let v = theta(x, c(0.3)).unwrap();
        assert!((v.re - THETA_01_03).abs() < 1e-15);
        assert_eq!(theta(x, c(1.0)).unwrap(), c(0.0));
        let y = Complex64::new(0.4, 0.9);
        let a = theta(x, y).unwrap();
        let b = theta(x, x / y).unwrap();
        assert!((a - b).norm() < 1e-15 * a.norm());
        assert!(theta(x, c(0.0)).is_err());
    }

    // θ_{0.1}(0.3), mpmath
    #[allow(clippy::excessive_precision)]
    const THETA_01_03: f64 = 0.386_713_761_185_765_234_56;

    #[test]
    fn solve_nome_round_trip() {
        for q in [-0.1, -0.5, -0.9, -0.999, -(-0.05f64).exp()] {
            let a = solve_nome(q).unwrap();
            assert!((a.nome() + q).abs() < 1e-12, "q = {q}");
            assert!(a.m > 0.0 && a.m <= 1.0 && a.m1 >= 0.0);
            assert!(a.delta() < -1.0);
        }
    }

    #[test]
    fn solve_nome_limits() {
        let self_dual = solve_nome(-(-PI).exp()).unwrap();
        assert!((self_dual.m - 0.5).abs() < 1e-12);
        assert!((self_dual.k - self_dual.k_prime).abs() < 1e-12);
        assert!(solve_nome(-1e-6).unwrap().m < 1e-4);
        assert!(solve_nome(-0.999).unwrap().m1 < 1e-100);
        // ε = 1e-3 puts 1 - m near e^{-9870}
        let a = solve_nome(-(-1e-3f64).exp()).unwrap();
        assert_eq!(a.m1, 0.0);
        assert!((a.nome() - (-1e-3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn solve_nome_rejects_outside_interval() {
        for q in [0.5, 0.0, -1.0, -1.5, f64::NAN] {
            let e = solve_nome(q).unwrap_err();
            assert!(e.to_string().contains("(-1, 0)"), "{e}");
        }
    }

    #[test]
    fn tau_is_unimodular() {
        let a = solve_nome(-0.5).unwrap();
        for j in 1..=30 {
            let t = tau(SpectralParam { alpha: 0.1 * j as f64 }, &a).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-10);
        }
    }

    fn wrap(x: f64) -> f64 {
        let y = x.rem_euclid(2.0 * PI);
        if y > PI {
            y - 2.0 * PI
        } else {
            y
        }
    }

    #[test]
    fn tau_phase_tracks_momentum() {
        let a = solve_nome(-0.5).unwrap();
        for alpha in [0.0, 0.4, 1.3, 2.9] {
            let t = tau(SpectralParam { alpha }, &a).unwrap();
            let d = wrap(t.arg() + xxz_momentum(alpha, &a) - TAU_PHASE_OFFSET);
            assert!(d.abs() < 1e-8, "α = {alpha}: {d}");
        }
        let t0 = tau(SpectralParam { alpha: 0.0 }, &a).unwrap();
        assert!((t0 - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn energy_expressions_agree() {
        for q in [-0.3, -0.6, -0.8] {
            let a = solve_nome(q).unwrap();
            for alpha in [0.0, 0.25, 0.7, 1.5, 2.2] {
                let lhs = xxz_energy(alpha, &a);
                let rhs = xxz_energy_from_tau(alpha, &a, 1e-5).unwrap();
                assert!((lhs - rhs).abs() < 1e-8 * lhs.max(1.0), "q = {q}, α = {alpha}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn energy_and_momentum_fixed_points() {
        let a = solve_nome(-0.6).unwrap();
        let top = 2.0 * a.k / PI * (PI * a.k_prime / a.k).sinh();
        assert!((xxz_energy(0.0, &a) - top).abs() < 1e-14 * top);
        assert_eq!(xxz_momentum(0.0, &a), -FRAC_PI_2);
        // 2Kα/π = K at α = π/2: band minimum and p = 0
        let bottom = xxz_energy(FRAC_PI_2, &a);
        assert!((bottom - top * a.m1.sqrt()).abs() < 1e-12 * top);
        assert!(xxz_momentum(FRAC_PI_2, &a).abs() < 1e-12);
        for alpha in [0.1, 0.8, 1.2] {
            assert!(xxz_energy(alpha, &a) >= bottom - 1e-14);
            assert!((xxz_energy(alpha + PI, &a) - xxz_energy(alpha, &a)).abs() < 1e-11);
        }
    }

    #[test]
    fn momentum_derivative_matches_energy() {
        let a = solve_nome(-0.6).unwrap();
        let h = 1e-5;
        let scale = (PI * a.k_prime / a.k).sinh();
        for alpha in [0.1, 0.6, 1.4] {
            let dp = (xxz_momentum(alpha + h, &a) - xxz_momentum(alpha - h, &a)) / (2.0 * h);
            assert!((dp * scale - xxz_energy(alpha, &a)).abs() < 1e-8);
        }
    }

    #[test]
    fn limit_check_validates_input() {
        assert!(isotropic_limit_check(&[0.1], &[0.0]).is_err());
        assert!(isotropic_limit_check(&[0.1, 0.2], &[0.0]).is_err());
        assert!(isotropic_limit_check(&[0.2, -0.1], &[0.0]).is_err());
    }

    #[test]
    fn limit_at_symmetric_point() {
        let r = isotropic_limit_check(&[0.5, 0.2, 0.1, 0.05], &[0.0, 1.0]).unwrap();
        let s0 = &r.series[0];
        for s in &s0.samples {
            assert_eq!(s.momentum, -FRAC_PI_2);
            // e(0) = π sinh(ε)/ε up to exponentially small terms
            let want = PI * s.epsilon.sinh() / s.epsilon;
            assert!((s.energy - want).abs() < 1e-7, "ε = {}", s.epsilon);
        }
        assert!(s0.monotone);
        assert!(r.series[1].monotone);
        assert!((r.extrapolated_scale - 1.0).abs() < 1e-6);
    }
}
