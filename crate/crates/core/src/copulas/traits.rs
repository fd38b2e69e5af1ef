use std::fmt;
use std::sync::Arc;

use super::pickands::EvFamily;
use super::{BivariateFn, Copula, UnivariateFn};
use crate::error::{Error, Result};

/// Which closed form a set of traits came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraitsKind {
    Independence,
    /// `τ(u,v) = (uv)^{a}` with `a = A1(1,1)`.
    ExtremeValue { a1_11: f64 },
    Comonotone,
    /// Supplied by the caller; no closed form is assumed.
    User,
}

/// `Ĉ(ut,vt) ~ t^κ ℓ(t) τ(u,v)` as `t → 0`.
#[derive(Clone)]
pub struct TailOrderTraits {
    pub kappa: f64,
    pub ell: UnivariateFn,
    pub tau: BivariateFn,
    pub tau_v: BivariateFn,
    pub kind: TraitsKind,
}

impl fmt::Debug for TailOrderTraits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailOrderTraits")
            .field("kappa", &self.kappa)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl TailOrderTraits {
    pub fn user(kappa: f64, ell: UnivariateFn, tau: BivariateFn, tau_v: BivariateFn) -> Self {
        Self {
            kappa,
            ell,
            tau,
            tau_v,
            kind: TraitsKind::User,
        }
    }

    pub fn tau(&self, u: f64, v: f64) -> f64 {
        (self.tau)(u, v)
    }

    pub fn tau_v(&self, u: f64, v: f64) -> f64 {
        (self.tau_v)(u, v)
    }

    pub fn ell(&self, t: f64) -> f64 {
        (self.ell)(t)
    }
}

/// `Ĉ_v(tu, v) ~ t^θ h(t) φ(u,v)` as `t → 0`.
#[derive(Clone)]
pub struct PartialLimitTraits {
    pub theta_exp: f64,
    pub h: UnivariateFn,
    pub varphi: BivariateFn,
    pub beta: f64,
    /// `φ ≡ 0`.
    pub degenerate: bool,
}

impl fmt::Debug for PartialLimitTraits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialLimitTraits")
            .field("theta_exp", &self.theta_exp)
            .field("beta", &self.beta)
            .field("degenerate", &self.degenerate)
            .finish_non_exhaustive()
    }
}

impl PartialLimitTraits {
    pub fn varphi(&self, u: f64, v: f64) -> f64 {
        (self.varphi)(u, v)
    }

    pub fn h(&self, t: f64) -> f64 {
        (self.h)(t)
    }
}

fn one() -> UnivariateFn {
    Arc::new(|_| 1.0)
}

pub fn tail_order_traits(copula: &Copula) -> Result<TailOrderTraits> {
    match copula {
        Copula::Independence => Ok(TailOrderTraits {
            kappa: 2.0,
            ell: one(),
            tau: Arc::new(|u, v| u * v),
            tau_v: Arc::new(|u, _| u),
            kind: TraitsKind::Independence,
        }),
        Copula::ExtremeValue(p) if p.family() == EvFamily::Comonotone => Ok(TailOrderTraits {
            kappa: 1.0,
            ell: one(),
            tau: Arc::new(|u: f64, v: f64| u.min(v)),
            tau_v: Arc::new(|u, v| {
                if v < u {
                    1.0
                } else if v > u {
                    0.0
                } else {
                    0.5
                }
            }),
            kind: TraitsKind::Comonotone,
        }),
        Copula::ExtremeValue(p) => {
            let a = p.a1(1.0, 1.0);
            Ok(TailOrderTraits {
                kappa: p.a(1.0, 1.0),
                ell: one(),
                tau: Arc::new(move |u: f64, v: f64| (u * v).powf(a)),
                tau_v: Arc::new(move |u: f64, v: f64| {
                    if u <= 0.0 {
                        0.0
                    } else {
                        a * u.powf(a) * v.powf(a - 1.0)
                    }
                }),
                kind: TraitsKind::ExtremeValue { a1_11: a },
            })
        }
        Copula::GumbelBarnett { .. } => Err(Error::Unsupported(format!(
            "{} has no tail order",
            copula.name()
        ))),
    }
}

pub fn partial_limit_traits(copula: &Copula) -> Result<PartialLimitTraits> {
    match copula {
        Copula::Independence => Ok(PartialLimitTraits {
            theta_exp: 1.0,
            h: one(),
            varphi: Arc::new(|u, _| u),
            beta: 0.0,
            degenerate: false,
        }),
        Copula::ExtremeValue(p) => {
            let a = p.a2_at_1_0();
            let degenerate = a == 0.0;
            let varphi: BivariateFn = if degenerate {
                Arc::new(|_, _| 0.0)
            } else {
                Arc::new(move |u: f64, v: f64| a * u * v.powf(a - 1.0))
            };
            Ok(PartialLimitTraits {
                theta_exp: 1.0,
                h: one(),
                varphi,
                beta: 1.0 - a,
                degenerate,
            })
        }
        Copula::GumbelBarnett { .. } => Err(Error::Unsupported(format!(
            "{} has no partial limit",
            copula.name()
        ))),
    }
}
