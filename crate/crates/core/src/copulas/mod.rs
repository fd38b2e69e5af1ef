//! Survival copulas, the extreme-value (Pickands) family and the
//! tail-order data the expansions consume.

mod checker;
mod pickands;
mod survival;
mod traits;

use std::sync::Arc;

pub use checker::{
    check_assumptions, check_tail_order_trial, AssumptionReport, CheckGrid, CheckResult,
    Verdict, DEFAULT_TOLERANCE,
};
pub use pickands::{gumbel_pickands, EvFamily, PickandsEV};
pub use survival::{gumbel_barnett, survival_from_copula, SurvivalCopula};
pub use traits::{
    partial_limit_traits, tail_order_traits, PartialLimitTraits, TailOrderTraits, TraitsKind,
};

use crate::error::Result;

/// A function of two arguments shared across threads.
pub type BivariateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// A function of one argument, e.g. a slowly varying factor.
pub type UnivariateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The dependence structures this crate knows how to handle.
#[derive(Clone, Debug)]
pub enum Copula {
    Independence,
    ExtremeValue(PickandsEV),
    /// `uv·exp(−σ ln u ln v)`: a valid copula with no tail order.
    GumbelBarnett { sigma: f64 },
}

impl Copula {
    pub fn gumbel(phi: f64) -> Result<Self> {
        Ok(Copula::ExtremeValue(gumbel_pickands(phi)?))
    }

    pub fn comonotone() -> Self {
        Copula::ExtremeValue(PickandsEV::comonotone())
    }

    /// The Pickands representation, if the copula is of extreme-value type.
    /// Independence is returned as `A(u,v) = u + v`.
    pub fn pickands(&self) -> Option<PickandsEV> {
        match self {
            Copula::Independence => Some(PickandsEV::independence()),
            Copula::ExtremeValue(p) => Some(p.clone()),
            Copula::GumbelBarnett { .. } => None,
        }
    }

    /// Run every applicable assumption check.
    pub fn check(&self, grid: &CheckGrid, exec: crate::exec::Execution) -> Result<AssumptionReport> {
        let tot = tail_order_traits(self).ok();
        let plt = partial_limit_traits(self).ok();
        check_assumptions(
            &self.survival_copula(),
            tot.as_ref(),
            plt.as_ref(),
            self.pickands().as_ref(),
            grid,
            exec,
        )
    }

    pub fn survival_copula(&self) -> SurvivalCopula {
        match self {
            Copula::Independence => SurvivalCopula::independence(),
            Copula::ExtremeValue(p) => p.survival_copula(),
            Copula::GumbelBarnett { sigma } => {
                gumbel_barnett(*sigma).expect("sigma validated on construction")
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Copula::Independence => "independence".into(),
            Copula::ExtremeValue(p) => p.family().to_string(),
            Copula::GumbelBarnett { sigma } => format!("gumbel-barnett(sigma={sigma})"),
        }
    }
}
