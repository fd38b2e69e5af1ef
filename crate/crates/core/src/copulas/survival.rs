use std::fmt;
use std::sync::Arc;

use super::BivariateFn;
use crate::error::{domain, Error, Result};

const AXIOM_TOL: f64 = 1e-12;
const GRID: usize = 10;

/// `Ĉ` together with its partial derivative `Ĉ_v` in the second argument.
#[derive(Clone)]
pub struct SurvivalCopula {
    name: String,
    chat: BivariateFn,
    chat_v: BivariateFn,
}

impl fmt::Debug for SurvivalCopula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurvivalCopula")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl SurvivalCopula {
    /// Wrap closed forms without validation.
    pub fn from_parts(name: impl Into<String>, chat: BivariateFn, chat_v: BivariateFn) -> Self {
        Self {
            name: name.into(),
            chat,
            chat_v,
        }
    }

    pub fn independence() -> Self {
        Self::from_parts("independence", Arc::new(|u, v| u * v), Arc::new(|u, _| u))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chat(&self, u: f64, v: f64) -> f64 {
        (self.chat)(u, v)
    }

    pub fn chat_v(&self, u: f64, v: f64) -> f64 {
        (self.chat_v)(u, v)
    }

    /// Check margins, range and 2-increasingness on a uniform grid.
    pub fn validate(&self) -> Result<()> {
        let pts: Vec<f64> = (0..=GRID).map(|i| i as f64 / GRID as f64).collect();
        for &x in &pts {
            let checks = [
                (self.chat(x, 0.0), 0.0, "C(u,0) = 0"),
                (self.chat(0.0, x), 0.0, "C(0,v) = 0"),
                (self.chat(x, 1.0), x, "C(u,1) = u"),
                (self.chat(1.0, x), x, "C(1,v) = v"),
            ];
            for (got, want, what) in checks {
                if !((got - want).abs() <= AXIOM_TOL) {
                    return Err(Error::InvalidCopula(format!("{what} fails at {x}: {got}")));
                }
            }
        }
        for w in pts.windows(2) {
            for z in pts.windows(2) {
                let (u1, u2, v1, v2) = (w[0], w[1], z[0], z[1]);
                let vol = self.chat(u2, v2) - self.chat(u1, v2) - self.chat(u2, v1)
                    + self.chat(u1, v1);
                if !(vol >= -AXIOM_TOL) {
                    return Err(Error::InvalidCopula(format!(
                        "negative volume {vol} on [{u1},{u2}]x[{v1},{v2}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// First derivative in `v` by central differences with one Richardson
/// step, falling back to one-sided differences near the edges of `[0, 1]`.
pub(crate) fn partial_v<F: Fn(f64, f64) -> f64>(f: &F, u: f64, v: f64) -> f64 {
    let h = 1e-6 * v.abs().max(1.0);
    if v - h >= 0.0 && v + h <= 1.0 {
        let d = |h: f64| (f(u, v + h) - f(u, v - h)) / (2.0 * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    } else if v + h <= 1.0 {
        let d = |h: f64| (f(u, v + h) - f(u, v)) / h;
        2.0 * d(0.5 * h) - d(h)
    } else {
        let d = |h: f64| (f(u, v) - f(u, v - h)) / h;
        2.0 * d(0.5 * h) - d(h)
    }
}

/// `Ĉ(u,v) = u + v − 1 + C(1−u, 1−v)`.
///
/// `c_v` is the partial derivative of `c` in its second argument. When it is
/// absent, `Ĉ_v` falls back to finite differences.
pub fn survival_from_copula(
    c: BivariateFn,
    c_v: Option<BivariateFn>,
) -> Result<SurvivalCopula> {
    let base = c.clone();
    let chat: BivariateFn = Arc::new(move |u, v| {
        u + v - 1.0 + base(1.0 - u, 1.0 - v)
    });
    let chat_v: BivariateFn = match c_v {
        Some(cv) => Arc::new(move |u, v| 1.0 - cv(1.0 - u, 1.0 - v)),
        None => {
            let chat = chat.clone();
            Arc::new(move |u, v| partial_v(&|a, b| chat(a, b), u, v))
        }
    };
    let sc = SurvivalCopula::from_parts("derived", chat, chat_v);
    sc.validate()?;
    Ok(sc)
}

/// The Gumbel–Barnett copula `uv·exp(−σ ln u ln v)`, `0 < σ ≤ 1`.
pub fn gumbel_barnett(sigma: f64) -> Result<SurvivalCopula> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(domain("sigma", sigma, "0 < sigma <= 1"));
    }
    let chat = move |u: f64, v: f64| {
        if u <= 0.0 || v <= 0.0 {
            0.0
        } else {
            u * v * (-sigma * u.ln() * v.ln()).exp()
        }
    };
    let chat_v = move |u: f64, v: f64| {
        if u <= 0.0 {
            0.0
        } else if v <= 0.0 {
            // exp(−σ ln u ln v)·(1 − σ ln u) with v → 0; ln u ≤ 0 so the
            // exponent → −∞ unless u = 1.
            if u == 1.0 {
                1.0
            } else {
                0.0
            }
        } else {
            u * (-sigma * u.ln() * v.ln()).exp() * (1.0 - sigma * u.ln())
        }
    };
    let sc = SurvivalCopula::from_parts(
        format!("gumbel-barnett(sigma={sigma})"),
        Arc::new(chat),
        Arc::new(chat_v),
    );
    sc.validate()?;
    Ok(sc)
}
