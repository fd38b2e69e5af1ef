//! Second-order asymptotics of `Pr(X + Y > t)` and of `VaR_q(X + Y)`.

mod cases;
mod expansion;
mod integrals;
mod tailprob;
mod var;

pub use cases::{classify_case, CaseLabel, Region};
pub use expansion::{Candidate, Evaluated, Expansion, Term, TermKind};
pub use integrals::{d_delta, eta_delta, eta_limit, integral_i, partial_integral, EtaLimit};
pub use tailprob::{
    ev_expansion, general_expansion, independence_expansion, tailprob_expansion_ev,
    tailprob_expansion_general, tailprob_expansion_independence, GeneralBranch,
};
pub use var::{
    var_by_inversion, var_expansion_ev, var_expansion_independence, var_from_terms,
    BoundaryPolicy, VarExpansion, VarRegime,
};
