//! Second-order expansions of `VaR_q(X + Y)`.
//!
//! A tail term `c F̄(t)^γ` shifts the quantile by the relative amount
//! `c 2^{−γ} (1−q)^{γ−1}/α`; the truncated-mean term adds
//! `2^{−1/α} μ(x_q)/x_q`; the second-order regular variation of `F̄` adds
//! `B(2^{ρ/α} − 1) x_q^ρ/α`, where `x_q = VaR_q(X)`.

use super::cases::{CaseLabel, Region};
use super::expansion::{Expansion, Term, TermKind};
use super::integrals::partial_integral;
use super::tailprob::{ev_expansion, independence_expansion};
use crate::copulas::PickandsEV;
use crate::error::{domain, Error, Result};
use crate::marginals::{powered_tail_truncated_mean, Marginal, SecondOrderTail};

/// What to do when `ρ` sits exactly on the threshold between two regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Both terms are of the same order; add them.
    #[default]
    Combine,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRegime {
    /// The copula term dominates the marginal's second-order term.
    Copula,
    /// The marginal's second-order term dominates.
    Marginal,
    /// Same order; both included.
    Boundary,
}

#[derive(Clone, Debug)]
pub struct VarExpansion {
    pub value: f64,
    /// `2^{1/α} VaR_q(X)`.
    pub leading: f64,
    pub regime: VarRegime,
    pub label: Option<CaseLabel>,
    pub diagnostics: Vec<String>,
    /// Values from the alternative tail expansions, with the marginal term.
    pub candidates: Vec<(String, f64)>,
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.5 && q < 1.0 {
        Ok(())
    } else {
        Err(domain("q", q, "0.5 < q < 1"))
    }
}

fn second_order<M: Marginal + ?Sized>(m: &M) -> Result<SecondOrderTail> {
    m.second_order().ok_or_else(|| {
        Error::Unsupported("VaR expansion needs second-order regular variation of the marginal".into())
    })
}

/// Relative correction to `2^{1/α} x_q` from one tail term.
fn term_correction<M: Marginal + ?Sized>(term: &Term, m: &M, q: f64, xq: f64) -> Result<f64> {
    let alpha = m.tail_index();
    let p = 1.0 - q;
    let l = term.slowly.as_ref().map_or(1.0, |l| l(0.5 * p));
    let c = term.coeff;
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(l * match &term.kind {
        TermKind::Power { exponent } => c * 2f64.powf(-exponent) * p.powf(exponent - 1.0) / alpha,
        TermKind::TruncatedMean { a } => {
            c / (2.0 * alpha) * 2f64.powf(-1.0 / alpha) * powered_tail_truncated_mean(m, xq, *a)?
                / xq
        }
        TermKind::PartialIntegral { traits } => {
            let z0 = 2f64.powf(1.0 / alpha) * xq;
            c / (2.0 * alpha)
                * partial_integral(traits, m, z0)?
                * (0.5 * p).powf(traits.theta_exp - 1.0)
        }
    })
}

fn marginal_correction(so: &SecondOrderTail, xq: f64) -> f64 {
    so.b_coeff * (2f64.powf(so.rho / so.alpha) - 1.0) * xq.powf(so.rho) / so.alpha
}

/// `2^{1/α} x_q (1 + Σ corrections)`, optionally with the marginal term.
pub fn var_from_terms<M: Marginal + ?Sized>(
    m: &M,
    q: f64,
    terms: &[Term],
    with_marginal: bool,
) -> Result<f64> {
    check_q(q)?;
    let xq = m.quantile(q)?;
    let mut rel = 0.0;
    for term in terms {
        rel += term_correction(term, m, q, xq)?;
    }
    if with_marginal {
        rel += marginal_correction(&second_order(m)?, xq);
    }
    Ok(2f64.powf(1.0 / m.tail_index()) * xq * (1.0 + rel))
}

/// Choose between the copula terms and the marginal term by comparing
/// `ρ` with `threshold`.
fn assemble<M: Marginal + ?Sized>(
    m: &M,
    q: f64,
    expansion: &Expansion,
    threshold: f64,
    policy: BoundaryPolicy,
) -> Result<VarExpansion> {
    check_q(q)?;
    let so = second_order(m)?;
    let regime = if so.rho < threshold {
        VarRegime::Copula
    } else if so.rho > threshold {
        VarRegime::Marginal
    } else {
        match policy {
            BoundaryPolicy::Combine => VarRegime::Boundary,
            BoundaryPolicy::Reject => {
                return Err(Error::CaseBoundary(format!(
                    "rho = {} equals the threshold {threshold} (alpha = {})",
                    so.rho,
                    m.tail_index()
                )))
            }
        }
    };
    let copula_terms: &[Term] = match regime {
        VarRegime::Marginal => &[],
        _ => &expansion.terms,
    };
    let value = var_from_terms(m, q, copula_terms, regime != VarRegime::Copula)?;
    let mut diagnostics = expansion.diagnostics.clone();
    if regime == VarRegime::Boundary {
        diagnostics.push(format!(
            "rho = {} on the threshold; copula and marginal terms combined",
            so.rho
        ));
    }
    let candidates = expansion
        .candidates
        .iter()
        .map(|c| Ok((c.name.clone(), var_from_terms(m, q, &c.expansion.terms, true)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VarExpansion {
        value,
        leading: 2f64.powf(1.0 / m.tail_index()) * m.quantile(q)?,
        regime,
        label: expansion.label.clone(),
        diagnostics,
        candidates,
    })
}

/// Independent risks. The copula term is `F̄²` (threshold `ρ = −α`) for
/// `α < 1` and the truncated mean (threshold `ρ = −1`) otherwise.
pub fn var_expansion_independence<M: Marginal + ?Sized>(
    m: &M,
    q: f64,
    policy: BoundaryPolicy,
) -> Result<VarExpansion> {
    let alpha = m.tail_index();
    let threshold = if alpha < 1.0 { -alpha } else { -1.0 };
    assemble(m, q, &independence_expansion(m)?, threshold, policy)
}

/// Extreme-value survival copula. The threshold on `ρ` is
/// `−α(A(1,1) − 1)`, `−α A₂(1,0)` or `−1` by region.
pub fn var_expansion_ev<M: Marginal + ?Sized>(
    m: &M,
    p: &PickandsEV,
    q: f64,
    policy: BoundaryPolicy,
) -> Result<VarExpansion> {
    let alpha = m.tail_index();
    let expansion = ev_expansion(m, p)?;
    let label = expansion.label.as_ref().expect("ev expansions carry a label");
    let threshold = match label.region {
        Region::AllThree => -alpha * (label.a11 - 1.0),
        Region::C1NotBoth => -alpha * label.a2_10,
        Region::NotC1 => -1.0,
    };
    assemble(m, q, &expansion, threshold, policy)
}

/// Solve `expansion(t) = 1 − q` for `t` by bisection, as a cross-check of
/// the direct VaR formulas.
pub fn var_by_inversion<M: Marginal + ?Sized>(expansion: &Expansion, m: &M, q: f64) -> Result<f64> {
    check_q(q)?;
    let target = 1.0 - q;
    let xq = m.quantile(q)?;
    let (mut lo, mut hi) = (xq, 2f64.powf(1.0 / m.tail_index()) * xq);
    while expansion.value(m, hi)? > target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Divergent("no root of the tail expansion".into()));
        }
    }
    while expansion.value(m, lo)? < target {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if expansion.value(m, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::gumbel_pickands;
    use crate::marginals::ParetoMarginal;

    #[test]
    fn alpha_two_boundary() {
        let m = ParetoMarginal::new(2.0, 1.0).unwrap();
        assert!(matches!(
            var_expansion_independence(&m, 0.999, BoundaryPolicy::Reject),
            Err(Error::CaseBoundary(_))
        ));
        let v = var_expansion_independence(&m, 0.999, BoundaryPolicy::Combine).unwrap();
        assert_eq!(v.regime, VarRegime::Boundary);
        let xq = m.quantile(0.999).unwrap();
        let mu = m.truncated_mean(xq).unwrap();
        let marginal = -2.0 * (2f64.powf(-0.5) - 1.0) / xq / 2.0;
        let want = 2f64.sqrt() * xq * (1.0 + mu / (2f64.sqrt() * xq) + marginal);
        assert!((v.value - want).abs() < 1e-12 * want);
    }

    #[test]
    fn alpha_point_eight_copula_regime() {
        let m = ParetoMarginal::new(0.8, 1.0).unwrap();
        let v = var_expansion_independence(&m, 0.999, BoundaryPolicy::Reject).unwrap();
        assert_eq!(v.regime, VarRegime::Copula);
        let i = super::super::integral_i(0.8, 0.8).unwrap();
        let xq = m.quantile(0.999).unwrap();
        let want = 2f64.powf(1.25)
            * xq
            * (1.0 + (i + 2f64.powf(0.6) - 2f64.powf(0.8)) / 1.6 * 1e-3);
        assert!((v.value - want).abs() < 1e-12 * want);
    }

    #[test]
    fn gumbel_one_reduces() {
        let g = gumbel_pickands(1.0).unwrap();
        for alpha in [0.8, 2.0] {
            let m = ParetoMarginal::new(alpha, 1.0).unwrap();
            for q in [0.99, 0.995, 0.999, 0.9995, 0.9999] {
                let a = var_expansion_ev(&m, &g, q, BoundaryPolicy::Combine).unwrap().value;
                let b = var_expansion_independence(&m, q, BoundaryPolicy::Combine)
                    .unwrap()
                    .value;
                assert!(((a - b) / b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn inversion_agrees_to_second_order() {
        let m = ParetoMarginal::new(0.8, 1.0).unwrap();
        let e = independence_expansion(&m).unwrap();
        let q = 0.9999;
        let direct = var_expansion_independence(&m, q, BoundaryPolicy::Combine).unwrap();
        let inv = var_by_inversion(&e, &m, q).unwrap();
        // they differ by third-order terms only
        let second = direct.value - direct.leading;
        assert!((inv - direct.value).abs() < 0.1 * second.abs() + 1e-3 * direct.value);
    }

    #[test]
    fn gumbel_ten_degenerate_value_is_leading() {
        let g = gumbel_pickands(10.0).unwrap();
        let m = ParetoMarginal::new(2.0, 1.0).unwrap();
        let v = var_expansion_ev(&m, &g, 0.999, BoundaryPolicy::Reject).unwrap();
        assert_eq!(v.regime, VarRegime::Copula);
        assert_eq!(v.value, v.leading);
        assert_eq!(v.candidates.len(), 3);
    }
}
