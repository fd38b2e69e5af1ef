use std::fmt;

use super::cases::CaseLabel;
use super::integrals::partial_integral;
use crate::copulas::{PartialLimitTraits, UnivariateFn};
use crate::error::{domain, Result};
use crate::marginals::{powered_tail_truncated_mean, Marginal};

/// Shape of one second-order term of `Pr(X+Y > t)`.
#[derive(Clone, Debug)]
pub enum TermKind {
    /// `F̄(t)^γ`.
    Power { exponent: f64 },
    /// `t⁻¹ μ_F̃(t) F̄(t)` with `F̃ = 1 − F̄^a`.
    TruncatedMean { a: f64 },
    /// `Δ(t) F̄(t)^θ`, with `Δ(t)` by quadrature against the partial limit.
    PartialIntegral { traits: PartialLimitTraits },
}

/// `coeff × kind × slowly(F̄(t))`.
#[derive(Clone)]
pub struct Term {
    pub coeff: f64,
    pub kind: TermKind,
    /// Slowly varying factor evaluated at `F̄(t)`; `None` means 1.
    pub slowly: Option<UnivariateFn>,
    pub name: String,
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Term")
            .field("name", &self.name)
            .field("coeff", &self.coeff)
            .field("kind", &self.kind)
            .field("slowly", &self.slowly.is_some())
            .finish()
    }
}

impl Term {
    pub fn power(name: impl Into<String>, coeff: f64, exponent: f64) -> Self {
        Self {
            coeff,
            kind: TermKind::Power { exponent },
            slowly: None,
            name: name.into(),
        }
    }

    pub fn truncated_mean(name: impl Into<String>, coeff: f64, a: f64) -> Self {
        Self {
            coeff,
            kind: TermKind::TruncatedMean { a },
            slowly: None,
            name: name.into(),
        }
    }

    pub fn with_slowly(mut self, l: UnivariateFn) -> Self {
        self.slowly = Some(l);
        self
    }

    pub fn value<M: Marginal + ?Sized>(&self, m: &M, t: f64) -> Result<f64> {
        if self.coeff == 0.0 {
            return Ok(0.0);
        }
        let sf = m.survival(t)?;
        let shape = match &self.kind {
            TermKind::Power { exponent } => sf.powf(*exponent),
            TermKind::TruncatedMean { a } => powered_tail_truncated_mean(m, t, *a)? / t * sf,
            TermKind::PartialIntegral { traits } => {
                partial_integral(traits, m, t)? * sf.powf(traits.theta_exp)
            }
        };
        let l = self.slowly.as_ref().map_or(1.0, |l| l(sf));
        Ok(self.coeff * shape * l)
    }
}

/// An alternative second-order form reported next to the main expansion.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub expansion: Expansion,
}

/// `Pr(X+Y > t) ≈ 2F̄(t) + Σ terms`.
#[derive(Clone, Debug, Default)]
pub struct Expansion {
    pub terms: Vec<Term>,
    pub label: Option<CaseLabel>,
    pub diagnostics: Vec<String>,
    pub candidates: Vec<Candidate>,
}

impl Expansion {
    pub fn new(terms: Vec<Term>) -> Self {
        Self {
            terms,
            ..Self::default()
        }
    }

    pub fn first_order<M: Marginal + ?Sized>(m: &M, t: f64) -> Result<f64> {
        Ok(2.0 * m.survival(t)?)
    }

    /// Sum of the second-order terms only.
    pub fn correction<M: Marginal + ?Sized>(&self, m: &M, t: f64) -> Result<f64> {
        self.terms.iter().map(|term| term.value(m, t)).sum()
    }

    pub fn value<M: Marginal + ?Sized>(&self, m: &M, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain("t", t, "t > 0"));
        }
        Ok(Self::first_order(m, t)? + self.correction(m, t)?)
    }

    pub fn candidate(&self, name: &str) -> Option<&Expansion> {
        self.candidates
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.expansion)
    }
}

/// An expansion together with its value at one point.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub expansion: Expansion,
    pub value: f64,
}
