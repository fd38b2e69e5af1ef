use std::fmt;

use crate::copulas::PickandsEV;
use crate::error::{domain, Result};

const BOUNDARY_EPS: f64 = 1e-8;

/// The three disjoint regions of `(α, A)` for the extreme-value expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `C₁ ∩ C₂ ∩ C₃`
    AllThree,
    /// `C₁ \ (C₂ ∩ C₃)`
    C1NotBoth,
    /// `C₁ᶜ`
    NotC1,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::AllThree => "C1∩C2∩C3",
            Region::C1NotBoth => "C1\\(C2∩C3)",
            Region::NotC1 => "C1ᶜ",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseLabel {
    pub region: Region,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    /// `A(1,1) = A₂(1,0) + 1`.
    pub indicator: bool,
    /// `A(1,1)`, `A₁(1,1)`, `A₂(1,0)` as used for the classification.
    pub a11: f64,
    pub a1_11: f64,
    pub a2_10: f64,
    pub warnings: Vec<String>,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.region)?;
        if self.indicator {
            f.write_str(" [A(1,1)=A2(1,0)+1]")?;
        }
        Ok(())
    }
}

/// `C₁: α < 1/A₂(1,0)`, `C₂: α < 1/A₁(1,1)`, `C₃: A(1,1) < A₂(1,0) + 1`.
pub fn classify_case(alpha: f64, p: &PickandsEV) -> Result<CaseLabel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    let a11 = p.a(1.0, 1.0);
    let a1_11 = p.a1(1.0, 1.0);
    let a2_10 = p.a2_at_1_0();
    let mut warnings = Vec::new();
    let mut near = |what: &str, lhs: f64, rhs: f64| {
        if rhs.is_finite() && (lhs - rhs).abs() <= BOUNDARY_EPS && lhs != rhs {
            warnings.push(format!("{what} within {BOUNDARY_EPS:e} of its boundary"));
        }
    };
    // α < 1/a written as α·a < 1 so that a = 0 gives +∞ without dividing
    let c1 = alpha * a2_10 < 1.0;
    let c2 = alpha * a1_11 < 1.0;
    let c3 = a11 < a2_10 + 1.0;
    near("C1", alpha * a2_10, 1.0);
    near("C2", alpha * a1_11, 1.0);
    near("C3", a11, a2_10 + 1.0);
    let region = if !c1 {
        Region::NotC1
    } else if c2 && c3 {
        Region::AllThree
    } else {
        Region::C1NotBoth
    };
    Ok(CaseLabel {
        region,
        c1,
        c2,
        c3,
        indicator: a11 == a2_10 + 1.0,
        a11,
        a1_11,
        a2_10,
        warnings,
    })
}
