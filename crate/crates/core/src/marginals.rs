//! Heavy-tailed marginal distributions.
//!
//! The [`Marginal`] trait is the contract the expansions rely on; the
//! Pareto (Lomax) family is the one shipped implementation.

use crate::error::{domain, Result};
use crate::quad::{integrate, Tolerance};

const MEAN_TOL: Tolerance = Tolerance::new(1e-13, 1e-12);

/// A continuous distribution on `[0, ∞)` with a regularly varying tail.
pub trait Marginal: Send + Sync {
    /// Index `α` of regular variation of the survival function.
    fn tail_index(&self) -> f64;

    fn survival(&self, x: f64) -> Result<f64>;

    /// Left-continuous inverse of the distribution function on `[0, 1)`.
    fn quantile(&self, q: f64) -> Result<f64>;

    fn density(&self, x: f64) -> Result<f64>;

    /// `∫₀ᵗ x dF(x)`.
    fn truncated_mean(&self, t: f64) -> Result<f64> {
        truncated_mean_by_quadrature(self, t)
    }

    /// Second-order regular variation parameters, when known in closed form.
    fn second_order(&self) -> Option<SecondOrderTail> {
        None
    }
}

/// `∫₀ᵗ x dF(x)` by adaptive quadrature in the variable `u = ln(1 + x)`.
pub fn truncated_mean_by_quadrature<M: Marginal + ?Sized>(m: &M, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("t", t, "t > 0"));
    }
    let r = integrate(
        |u| {
            let x = u.exp_m1();
            x * (x + 1.0) * m.density(x).unwrap_or(f64::NAN)
        },
        0.0,
        t.ln_1p(),
        MEAN_TOL,
    )?;
    Ok(r.value)
}

/// `∫₀ᵗ x dF̃(x)` where `F̃ = 1 − F̄^a`, integrated against the density
/// `a·F̄^{a−1}·f`.
pub fn powered_tail_truncated_mean<M: Marginal + ?Sized>(m: &M, t: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(domain("a", a, "0 < a <= 1"));
    }
    if !(t > 0.0) {
        return Err(domain("t", t, "t > 0"));
    }
    if a == 1.0 {
        return m.truncated_mean(t);
    }
    let r = integrate(
        |u| {
            let x = u.exp_m1();
            let sf = m.survival(x).unwrap_or(f64::NAN);
            let f = m.density(x).unwrap_or(f64::NAN);
            x * (x + 1.0) * a * sf.powf(a - 1.0) * f
        },
        0.0,
        t.ln_1p(),
        MEAN_TOL,
    )?;
    Ok(r.value)
}

/// Pareto (Lomax) law `F(x) = 1 − (scale/(x+scale))^α` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoMarginal {
    alpha: f64,
    scale: f64,
}

/// Parameters of `F̄(x) = c·x^{−α}(1 + b·x^{ρ}(1 + o(1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderTail {
    pub alpha: f64,
    pub rho: f64,
    pub c_scale: f64,
    pub b_coeff: f64,
}

impl SecondOrderTail {
    /// The asymptotic form `c·x^{−α}(1 + b·x^ρ)` with the `o(1)` set to 0.
    pub fn approx_survival(&self, x: f64) -> f64 {
        self.c_scale * x.powf(-self.alpha) * (1.0 + self.b_coeff * x.powf(self.rho))
    }
}

impl ParetoMarginal {
    pub fn new(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("alpha", alpha, "alpha > 0"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(domain("scale", scale, "scale > 0"));
        }
        Ok(Self { alpha, scale })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn second_order_params(&self) -> SecondOrderTail {
        SecondOrderTail {
            alpha: self.alpha,
            rho: -1.0,
            c_scale: self.scale.powf(self.alpha),
            b_coeff: -self.alpha * self.scale,
        }
    }

    /// Quantile expressed through the tail probability `p = 1 − q`, which
    /// keeps full precision for `p` far below machine epsilon.
    pub fn tail_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(domain("p", p, "0 < p <= 1"));
        }
        Ok(self.scale * (-p.ln() / self.alpha).exp_m1())
    }

    fn closed_form_truncated_mean(&self, t: f64) -> f64 {
        let (a, s) = (self.alpha, self.scale);
        let log_r = (t / s).ln_1p();
        let c = 1.0 - a;
        a * s * (c * log_r).exp_m1() / c + s * (-a * log_r).exp_m1()
    }
}

impl Marginal for ParetoMarginal {
    fn tail_index(&self) -> f64 {
        self.alpha
    }

    fn second_order(&self) -> Option<SecondOrderTail> {
        Some(self.second_order_params())
    }

    fn survival(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain("x", x, "x >= 0"));
        }
        Ok((-self.alpha * (x / self.scale).ln_1p()).exp())
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(domain("q", q, "0 <= q < 1"));
        }
        Ok(self.scale * (-(-q).ln_1p() / self.alpha).exp_m1())
    }

    fn density(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain("x", x, "x >= 0"));
        }
        let z = 1.0 + x / self.scale;
        Ok(self.alpha / self.scale * z.powf(-self.alpha - 1.0))
    }

    fn truncated_mean(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain("t", t, "t > 0"));
        }
        if self.alpha == 1.0 {
            truncated_mean_by_quadrature(self, t)
        } else {
            Ok(self.closed_form_truncated_mean(t))
        }
    }
}
