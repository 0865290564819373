//! Closed-form limit constants derived from the fractional-Laplacian
//! eigenvalue `λ_α`.
//!
//! With `γ = α/(1+α)`:
//!
//! - `A  = (1+α) (2^α λ)^{1/(1+α)} α^{-γ}` - Laplace-transform rate of the
//!   clock range, and the small-deviation rate of `sup|Z|` up to the
//!   `(π²/8)^γ` factor;
//! - `A¹ = (1+α) λ^{1/(1+α)} α^{-γ}` - same for the folded process;
//! - `C  = (π²/8)^γ A`, `C¹ = (π²/8)^γ A¹` - small-deviation constants;
//! - `D  = C^{(1+α)/2α}`, `D¹ = C¹^{(1+α)/2α}` - Chung-type liminf
//!   constants for `sup|Z|` and `sup|Z¹|`.
//!
//! `A/A¹ = 2^γ` exactly. Under this crate's clock normalization the
//! `alpha = 2` value is `D₂ = 2^{1/4} (3π²/8)^{3/4}`, the classical
//! iterated-Brownian-motion constant times the clock-speed factor `2^{1/4}`.

use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantsTable {
    pub alpha: f64,
    pub lambda: f64,
    pub a: f64,
    pub a1: f64,
    pub c: f64,
    pub c1: f64,
    pub d: f64,
    pub d1: f64,
}

/// Evaluate every limit constant from `(alpha, lambda)`.
pub fn build_table(alpha: f64, lambda: f64) -> Result<ConstantsTable> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let gamma = alpha / (1.0 + alpha);
    let de_bruijn = |rate: f64| (1.0 + alpha) * rate.powf(1.0 / (1.0 + alpha)) * alpha.powf(-gamma);
    let a = de_bruijn(2f64.powf(alpha) * lambda);
    let a1 = de_bruijn(lambda);
    let pref = (PI * PI / 8.0).powf(gamma);
    let c = pref * a;
    let c1 = pref * a1;
    let chung_exp = (1.0 + alpha) / (2.0 * alpha);
    Ok(ConstantsTable {
        alpha,
        lambda,
        a,
        a1,
        c,
        c1,
        d: c.powf(chung_exp),
        d1: c1.powf(chung_exp),
    })
}

impl ConstantsTable {
    /// Relative residuals of the defining identities, in table order:
    /// `C = (π²/8)^γ A`, `D = C^{(1+α)/2α}`, `C¹ = (π²/8)^γ A¹`,
    /// `D¹ = C¹^{(1+α)/2α}`, `A/A¹ = 2^γ`.
    pub fn identity_residuals(&self) -> [f64; 5] {
        let gamma = self.alpha / (1.0 + self.alpha);
        let pref = (PI * PI / 8.0).powf(gamma);
        let chung_exp = (1.0 + self.alpha) / (2.0 * self.alpha);
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        [
            rel(self.c, pref * self.a),
            rel(self.d, self.c.powf(chung_exp)),
            rel(self.c1, pref * self.a1),
            rel(self.d1, self.c1.powf(chung_exp)),
            rel(self.a / self.a1, 2f64.powf(gamma)),
        ]
    }
}

impl fmt::Display for ConstantsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha   = {:>18.12}", self.alpha)?;
        writeln!(f, "lambda  = {:>18.12}", self.lambda)?;
        writeln!(f, "A       = {:>18.12}", self.a)?;
        writeln!(f, "A1      = {:>18.12}", self.a1)?;
        writeln!(f, "C       = {:>18.12}", self.c)?;
        writeln!(f, "C1      = {:>18.12}", self.c1)?;
        writeln!(f, "D       = {:>18.12}", self.d)?;
        write!(f, "D1      = {:>18.12}", self.d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn brownian_clock_constants() {
        let t = build_table(2.0, PI * PI / 4.0).unwrap();
        // D2 = (3 pi^2)^{3/4} / 4, equivalently 2^{1/4} (3 pi^2 / 8)^{3/4}.
        let d2 = (3.0 * PI * PI).powf(0.75) / 4.0;
        assert_relative_eq!(t.d, d2, max_relative = 1e-12);
        let ibm_form = 2f64.powf(0.25) * (3.0 * PI * PI / 8.0).powf(0.75);
        assert_relative_eq!(t.d, ibm_form, max_relative = 1e-12);
        assert_relative_eq!(t.a, 4.053_852, max_relative = 1e-6);
    }

    #[test]
    fn cauchy_clock_collapses_c_and_d() {
        // At alpha = 1 the Chung exponent is 1, so C = D = pi sqrt(lambda).
        let lambda = 1.16;
        let t = build_table(1.0, lambda).unwrap();
        assert_relative_eq!(t.c, t.d, max_relative = 1e-12);
        assert_relative_eq!(t.c, PI * lambda.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(build_table(1.0, 0.0).is_err());
        assert!(build_table(1.0, -2.0).is_err());
    }

    #[test]
    fn de_bruijn_shape_matches_the_tauberian_form() {
        // A equals (p+1) B^{1/(p+1)} p^{-p/(p+1)} with p = alpha, B = 2^alpha lambda.
        for (alpha, lambda) in [(0.7, 0.9), (1.3, 1.4), (2.0, PI * PI / 4.0)] {
            let t = build_table(alpha, lambda).unwrap();
            let p = alpha;
            let b = 2f64.powf(alpha) * lambda;
            let shape = (p + 1.0) * b.powf(1.0 / (p + 1.0)) * p.powf(-p / (p + 1.0));
            assert_relative_eq!(t.a, shape, max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn identities_hold_everywhere(alpha in 0.05f64..2.0, lambda in 0.01f64..50.0) {
            let t = build_table(alpha, lambda).unwrap();
            for r in t.identity_residuals() {
                prop_assert!(r < 1e-12, "residual {r}");
            }
            prop_assert!(t.a > 0.0 && t.a1 > 0.0 && t.c > 0.0 && t.c1 > 0.0 && t.d > 0.0 && t.d1 > 0.0);
        }
    }
}
