//! Second-order expansions of `Pr(X + Y > t)`.

use super::cases::{classify_case, Region};
use super::expansion::{Candidate, Evaluated, Expansion, Term, TermKind};
use super::integrals::{eta_delta, eta_limit, integral_i, EtaLimit};
use crate::copulas::{
    partial_limit_traits, tail_order_traits, Copula, PartialLimitTraits, PickandsEV,
    TailOrderTraits,
};
use crate::error::{domain, Error, Result};
use crate::marginals::Marginal;

fn check_t<M: Marginal + ?Sized>(m: &M, t: f64) -> Result<()> {
    let median = m.quantile(0.5)?;
    if t > median {
        Ok(())
    } else {
        Err(domain("t", t, "t above the marginal median"))
    }
}

/// `2^{2a} − 2^{a+1}`, the part of the coefficient coming from `τ`.
fn tau_part(a: f64) -> f64 {
    2f64.powf(2.0 * a) - 2f64.powf(a + 1.0)
}

/// Independent risks: `(2I(α,α) + 2^{2α} − 2^{α+1}) F̄²` for `α < 1`,
/// `2α t⁻¹ μ_F(t) F̄` otherwise.
pub fn independence_expansion<M: Marginal + ?Sized>(m: &M) -> Result<Expansion> {
    let alpha = m.tail_index();
    let term = if alpha < 1.0 {
        Term::power(
            "zeta",
            2.0 * integral_i(alpha, alpha)? + tau_part(alpha),
            2.0,
        )
    } else {
        Term::truncated_mean("mu", 2.0 * alpha, 1.0)
    };
    Ok(Expansion::new(vec![term]))
}

pub fn tailprob_expansion_independence<M: Marginal + ?Sized>(m: &M, t: f64) -> Result<Evaluated> {
    check_t(m, t)?;
    let expansion = independence_expansion(m)?;
    let value = expansion.value(m, t)?;
    Ok(Evaluated { expansion, value })
}

/// Extreme-value survival copula, dispatched on the `(α, A)` region.
///
/// When `A₂(1,0) = 0` and `A(1,1) ≠ 1` the stated second-order term is
/// identically zero. The expansion then carries the diagnostic and two
/// alternatives: `delta2`, the `τ`-part `Δ₂ F̄^{A(1,1)}` alone, and
/// `general`, the generic route chosen automatically.
pub fn ev_expansion<M: Marginal + ?Sized>(m: &M, p: &PickandsEV) -> Result<Expansion> {
    let alpha = m.tail_index();
    let label = classify_case(alpha, p)?;
    let a1 = label.a1_11;
    let ind_coeff = tau_part(alpha * a1);
    let mut diagnostics = label.warnings.clone();
    let mut candidates = Vec::new();
    let terms = match label.region {
        Region::AllThree => {
            let zeta1 = 2.0 * integral_i(alpha * a1, alpha * a1)? + ind_coeff;
            vec![Term::power("zeta1", zeta1, label.a11)]
        }
        Region::C1NotBoth => {
            let zeta2 = 2.0 * integral_i(alpha, alpha * label.a2_10)?;
            let mut terms = vec![Term::power("zeta2", zeta2, label.a2_10 + 1.0)];
            if label.indicator {
                terms.push(Term::power("indicator", ind_coeff, label.a11));
            }
            if zeta2 == 0.0 && !label.indicator {
                diagnostics.push(
                    "second-order term vanishes as stated (A2(1,0)=0, indicator false); \
                     see candidates delta2, general"
                        .into(),
                );
                let copula = Copula::ExtremeValue(p.clone());
                let tot = tail_order_traits(&copula)?;
                let plt = partial_limit_traits(&copula)?;
                candidates.push(Candidate {
                    name: "stated".into(),
                    expansion: Expansion::new(terms.clone()),
                });
                candidates.push(Candidate {
                    name: "delta2".into(),
                    expansion: Expansion::new(vec![Term::power(
                        "delta2",
                        tau_part(alpha * a1),
                        label.a11,
                    )]),
                });
                candidates.push(Candidate {
                    name: "general".into(),
                    expansion: general_expansion(m, &tot, Some(&plt), GeneralBranch::Auto)?,
                });
            }
            terms
        }
        Region::NotC1 => {
            let terms = vec![Term::truncated_mean("mu", 2.0 * alpha, label.a2_10)];
            if label.indicator {
                // always of lower order than the truncated-mean term here
                diagnostics.push(format!(
                    "indicator term {ind_coeff:.6e}*F(t)^{} omitted; see candidate with-indicator",
                    label.a11
                ));
                let mut with = terms.clone();
                with.push(Term::power("indicator", ind_coeff, label.a11));
                candidates.push(Candidate {
                    name: "with-indicator".into(),
                    expansion: Expansion::new(with),
                });
            }
            terms
        }
    };
    Ok(Expansion {
        terms,
        label: Some(label),
        diagnostics,
        candidates,
    })
}

pub fn tailprob_expansion_ev<M: Marginal + ?Sized>(
    m: &M,
    p: &PickandsEV,
    t: f64,
) -> Result<Evaluated> {
    check_t(m, t)?;
    let expansion = ev_expansion(m, p)?;
    let value = expansion.value(m, t)?;
    Ok(Evaluated { expansion, value })
}

/// Which set of hypotheses the generic expansion relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GeneralBranch {
    /// Pick from the finiteness of `η`, `D(δ,t) ≠ 0` and `α(1−β) < 1`.
    #[default]
    Auto,
    /// `2F̄ + Δ₁ F̄^κ ℓ(F̄)` with `Δ₁ = 2η + τ(2^α,2^α) − 2τ(1,2^α)`.
    FiniteEta,
    /// `2F̄ + Δ₂ F̄^κ ℓ(F̄) + 2Δ(t) F̄^θ h(F̄)` with `Δ₂ = τ(2^α,2^α) − 2τ(1,2^α)`.
    PartialLimit,
}

fn resolve_branch(
    tot: &TailOrderTraits,
    plt: Option<&PartialLimitTraits>,
    alpha: f64,
    eta: EtaLimit,
) -> Result<GeneralBranch> {
    let d_nonzero = eta_delta(tot, alpha, 0.1)? != 0.0;
    let beta_ok = plt.is_none_or(|p| alpha * (1.0 - p.beta) < 1.0);
    if eta.is_finite() && d_nonzero && beta_ok {
        Ok(GeneralBranch::FiniteEta)
    } else if plt.is_some() {
        Ok(GeneralBranch::PartialLimit)
    } else {
        Err(Error::Inconclusive(
            "eta is infinite or D(delta,t) vanishes, and no partial-limit traits were \
             given; choose a branch explicitly"
                .into(),
        ))
    }
}

/// The generic expansion from tail-order (and partial-limit) traits.
pub fn general_expansion<M: Marginal + ?Sized>(
    m: &M,
    tot: &TailOrderTraits,
    plt: Option<&PartialLimitTraits>,
    branch: GeneralBranch,
) -> Result<Expansion> {
    let alpha = m.tail_index();
    let eta = eta_limit(tot, alpha)?;
    let branch = match branch {
        GeneralBranch::Auto => resolve_branch(tot, plt, alpha, eta)?,
        b => b,
    };
    let pa = 2f64.powf(alpha);
    let delta2 = tot.tau(pa, pa) - 2.0 * tot.tau(1.0, pa);
    let mut diagnostics = Vec::new();
    let terms = match branch {
        GeneralBranch::FiniteEta => {
            let EtaLimit::Finite(eta) = eta else {
                return Err(Error::Divergent("eta is infinite".into()));
            };
            diagnostics.push(format!("finite-eta branch, eta = {eta:.12e}"));
            vec![Term::power("delta1", 2.0 * eta + delta2, tot.kappa).with_slowly(tot.ell.clone())]
        }
        GeneralBranch::PartialLimit => {
            let Some(plt) = plt else {
                return Err(Error::Inconclusive(
                    "partial-limit branch needs partial-limit traits".into(),
                ));
            };
            diagnostics.push("partial-limit branch".into());
            vec![
                Term::power("delta2", delta2, tot.kappa).with_slowly(tot.ell.clone()),
                Term {
                    coeff: 2.0,
                    kind: TermKind::PartialIntegral {
                        traits: plt.clone(),
                    },
                    slowly: Some(plt.h.clone()),
                    name: "partial".into(),
                },
            ]
        }
        GeneralBranch::Auto => unreachable!("resolved above"),
    };
    Ok(Expansion {
        terms,
        label: None,
        diagnostics,
        candidates: Vec::new(),
    })
}

pub fn tailprob_expansion_general<M: Marginal + ?Sized>(
    m: &M,
    tot: &TailOrderTraits,
    plt: Option<&PartialLimitTraits>,
    branch: GeneralBranch,
    t: f64,
) -> Result<Evaluated> {
    check_t(m, t)?;
    let expansion = general_expansion(m, tot, plt, branch)?;
    let value = expansion.value(m, t)?;
    Ok(Evaluated { expansion, value })
}
