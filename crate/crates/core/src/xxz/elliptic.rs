//! Complete elliptic integral `K` and the Jacobi amplitude / delta amplitude
//! through the arithmetic–geometric mean.
//!
//! Every routine takes the parameter `m` together with its complement
//! `m1 = 1 - m`, so that values of `m` within an ulp of 1 (the isotropic end
//! of the XXZ chain) keep full precision in `m1`.

use std::f64::consts::FRAC_PI_2;

const AGM_MAX_STEPS: usize = 64;
/// Stop once `a` and `b` agree to a few ulps; rounding can keep them one
/// ulp apart forever.
const AGM_TOL: f64 = 4.0 * f64::EPSILON;

/// `AGM(a, b)` for positive arguments.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K(m) = π / (2 AGM(1, sqrt(m1)))`, with `m1 = 1 - m` supplied directly.
pub fn complete_k(m1: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, m1.sqrt())
}

/// Jacobi amplitude and `dn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmDn {
    pub am: f64,
    pub dn: f64,
}

/// `am(u | m)` and `dn(u | m)` by the descending AGM (Landen) scheme.
///
/// The amplitude follows the continuous branch with `am(0) = 0`. At `m1 = 0`
/// the hyperbolic limits `gd(u)` and `sech(u)` are returned.
pub fn am_dn(u: f64, m: f64, m1: f64) -> AmDn {
    if m == 0.0 {
        return AmDn { am: u, dn: 1.0 };
    }
    if m1 == 0.0 {
        return AmDn {
            am: u.sinh().atan(),
            dn: 1.0 / u.cosh(),
        };
    }
    let mut a = [0.0; AGM_MAX_STEPS + 1];
    let mut c = [0.0; AGM_MAX_STEPS + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = m1.sqrt();
    let mut n = 0;
    while c[n].abs() > AGM_TOL * a[n] && n < AGM_MAX_STEPS {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let cos = phi.cos();
    // 1 - m sin²φ without cancellation near m = 1
    let dn = (m1 + m * cos * cos).sqrt();
    AmDn { am: phi, dn }
}
