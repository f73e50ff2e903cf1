//! Special functions: exponential integral `E1(z)` for complex argument, the
//! cosine integral, and Γ for positive reals.

use num_complex::Complex64;

/// Euler–Mascheroni constant.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Γ(x) for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0, "gamma: argument must be positive, got {x}");
    statrs::function::gamma::gamma(x)
}

/// Exponential integral `E1(z) = ∫_z^∞ e^{-t}/t dt` on the closed right half
/// plane (principal branch), `z ≠ 0`.
///
/// Power series for `|z| ≤ 2`, modified-Lentz continued fraction otherwise.
pub fn exp_integral_e1(z: Complex64) -> Complex64 {
    assert!(z.re >= 0.0 && z != Complex64::new(0.0, 0.0), "E1: need Re z >= 0, z != 0");
    if z.norm() <= 2.0 {
        e1_series(z)
    } else {
        e1_continued_fraction(z)
    }
}

fn e1_series(z: Complex64) -> Complex64 {
    // E1(z) = -γ - ln z - Σ_{n≥1} (-z)^n / (n n!)
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..200 {
        term *= -z / n as f64;
        let add = term / n as f64;
        sum += add;
        if add.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

fn e1_continued_fraction(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = one / (d * an + b);
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - one).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// Cosine integral `Ci(x) = -∫_x^∞ cos t / t dt` for `x > 0`.
pub fn cos_integral(x: f64) -> f64 {
    assert!(x > 0.0, "Ci: argument must be positive, got {x}");
    -exp_integral_e1(Complex64::new(0.0, x)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // mpmath references, see tests/oracles/golden.py
    #[allow(clippy::excessive_precision)]
    const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_311_9;
    #[allow(clippy::excessive_precision)]
    const GAMMA_THREE_QUARTERS: f64 = 1.225_416_702_465_177_645_1;

    #[test]
    fn gamma_at_quarters() {
        assert!((gamma(0.25) / GAMMA_QUARTER - 1.0).abs() < 1e-14);
        assert!((gamma(0.75) / GAMMA_THREE_QUARTERS - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_integer_and_half_integer() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gamma_reflection_at_quarter() {
        let lhs = gamma(0.25) * gamma(0.75);
        assert!((lhs - PI * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cosine_integral_values() {
        let cases = [
            (0.1, -1.727_868_386_657_296_7),
            (1.0, 0.337_403_922_900_968_13),
            (5.0, -0.190_029_749_656_643_88),
            (30.0, -0.033_032_417_282_071_144),
            (100.0, -0.005_148_825_142_610_492_1),
        ];
        for (x, want) in cases {
            let got = cos_integral(x);
            assert!((got - want).abs() < 1e-14 * want.abs().max(1.0), "Ci({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn e1_complex_values() {
        let cases = [
            (Complex64::new(0.5, 0.5), Complex64::new(0.257_866_457_137_983_80, -0.396_690_435_455_815_21)),
            (Complex64::new(0.01, 60.0), Complex64::new(0.004_762_707_912_094_959_1, 0.015_791_340_802_903_428)),
            (Complex64::new(3.0, 4.0), Complex64::new(0.000_863_953_958_979_585_11, 0.008_786_208_377_197_442_0)),
        ];
        for (z, want) in cases {
            let got = exp_integral_e1(z);
            assert!((got - want).norm() < 1e-13 * want.norm(), "E1({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn e1_real_axis_matches_known_value() {
        // E1(1) = 0.21938393439552027368
        let v = exp_integral_e1(Complex64::new(1.0, 0.0));
        assert!((v.re - 0.219_383_934_395_520_27).abs() < 1e-15);
        assert!(v.im.abs() < 1e-16);
    }
}
