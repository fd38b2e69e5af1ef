use std::fmt;
use std::sync::Arc;

use super::survival::SurvivalCopula;
use super::BivariateFn;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvFamily {
    Gumbel { phi: f64 },
    Independence,
    Comonotone,
    Custom,
}

impl fmt::Display for EvFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvFamily::Gumbel { phi } => write!(f, "gumbel(phi={phi})"),
            EvFamily::Independence => f.write_str("independence"),
            EvFamily::Comonotone => f.write_str("comonotone"),
            EvFamily::Custom => f.write_str("pickands(custom)"),
        }
    }
}

/// A stable tail dependence function `A` on `[0,∞)²`, homogeneous of
/// order one, with its first partial derivatives.
#[derive(Clone)]
pub struct PickandsEV {
    family: EvFamily,
    a: BivariateFn,
    a1: BivariateFn,
    a2: BivariateFn,
}

impl fmt::Debug for PickandsEV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PickandsEV")
            .field("family", &self.family)
            .finish_non_exhaustive()
    }
}

/// Gumbel: `A(u,v) = (u^φ + v^φ)^{1/φ}`, `φ ≥ 1`.
pub fn gumbel_pickands(phi: f64) -> Result<PickandsEV> {
    if !(phi >= 1.0 && phi.is_finite()) {
        return Err(domain("phi", phi, "finite phi >= 1"));
    }
    // factor out the larger argument so that huge φ does not overflow
    let a = move |u: f64, v: f64| {
        let m = u.max(v);
        if m <= 0.0 {
            return 0.0;
        }
        let r = u.min(v) / m;
        m * (1.0 + r.powf(phi)).powf(1.0 / phi)
    };
    let partial = move |x: f64, u: f64, v: f64| {
        let s = a(u, v);
        if s <= 0.0 {
            // homogeneous of order zero: use the diagonal value
            return 0.5f64.powf(1.0 - 1.0 / phi);
        }
        (x / s).powf(phi - 1.0)
    };
    Ok(PickandsEV {
        family: EvFamily::Gumbel { phi },
        a: Arc::new(a),
        a1: Arc::new(move |u, v| partial(u, u, v)),
        a2: Arc::new(move |u, v| partial(v, u, v)),
    })
}

impl PickandsEV {
    /// A user-supplied Pickands function with its partials.
    pub fn custom(a: BivariateFn, a1: BivariateFn, a2: BivariateFn) -> Self {
        Self {
            family: EvFamily::Custom,
            a,
            a1,
            a2,
        }
    }

    /// `A(u,v) = u + v`.
    pub fn independence() -> Self {
        Self {
            family: EvFamily::Independence,
            a: Arc::new(|u, v| u + v),
            a1: Arc::new(|_, _| 1.0),
            a2: Arc::new(|_, _| 1.0),
        }
    }

    /// `A(u,v) = max(u,v)`: the comonotone (upper Fréchet) copula.
    pub fn comonotone() -> Self {
        let step = |x: f64, y: f64| {
            if x > y {
                1.0
            } else if x < y {
                0.0
            } else {
                0.5
            }
        };
        Self {
            family: EvFamily::Comonotone,
            a: Arc::new(|u: f64, v: f64| u.max(v)),
            a1: Arc::new(step),
            a2: Arc::new(move |u, v| step(v, u)),
        }
    }

    pub fn family(&self) -> EvFamily {
        self.family
    }

    pub fn a(&self, u: f64, v: f64) -> f64 {
        (self.a)(u, v)
    }

    pub fn a1(&self, u: f64, v: f64) -> f64 {
        (self.a1)(u, v)
    }

    pub fn a2(&self, u: f64, v: f64) -> f64 {
        (self.a2)(u, v)
    }

    /// `A2(1, 0)`, the exponent of the partial limit.
    ///
    /// Closed form for the shipped families. For custom functions the limit
    /// `v → 0` is taken numerically: values below `1e-8`, or a sequence
    /// decaying like a power of `v`, are read as zero.
    pub fn a2_at_1_0(&self) -> f64 {
        match self.family {
            EvFamily::Gumbel { phi } => {
                if phi == 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            EvFamily::Independence => 1.0,
            EvFamily::Comonotone => 0.0,
            EvFamily::Custom => {
                let vals: Vec<f64> = (2..=16)
                    .map(|k| self.a2(1.0, 10f64.powi(-k)))
                    .collect();
                let last = *vals.last().unwrap();
                if last.abs() < 1e-8 {
                    return 0.0;
                }
                let n = vals.len();
                let decays = vals[n - 4..].iter().all(|&x| x > 0.0)
                    && vals[n - 4..].windows(2).all(|w| {
                        let slope = (w[0] / w[1]).log10();
                        slope > 0.05
                    });
                if decays {
                    0.0
                } else {
                    last
                }
            }
        }
    }

    /// `Ĉ(u,v) = exp(−A(−ln u, −ln v))` on `[0,1]²`, zero on the axes.
    pub fn chat(&self, u: f64, v: f64) -> Result<f64> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        Ok(self.chat_unchecked(u, v))
    }

    /// `Ĉ_v(u,v) = Ĉ(u,v)·A2(−ln u, −ln v)/v`.
    pub fn chat_v(&self, u: f64, v: f64) -> Result<f64> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        Ok(self.chat_v_unchecked(u, v))
    }

    fn chat_unchecked(&self, u: f64, v: f64) -> f64 {
        if u <= 0.0 || v <= 0.0 {
            return 0.0;
        }
        (-self.a(-u.ln(), -v.ln())).exp()
    }

    fn chat_v_unchecked(&self, u: f64, v: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let v = v.max(f64::MIN_POSITIVE);
        let (x, y) = (-u.ln(), -v.ln());
        // Ĉ/v = exp(−A(x,y) + y), kept in logs for tiny v
        let d = (y - self.a(x, y)).exp() * self.a2(x, y);
        d.clamp(0.0, 1.0)
    }

    pub fn survival_copula(&self) -> SurvivalCopula {
        let (p, q) = (self.clone(), self.clone());
        SurvivalCopula::from_parts(
            self.family.to_string(),
            Arc::new(move |u, v| p.chat_unchecked(u, v)),
            Arc::new(move |u, v| q.chat_v_unchecked(u, v)),
        )
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(name, x, "0 <= x <= 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::survival::partial_v;
    use proptest::prelude::*;

    #[test]
    fn gumbel_examples() {
        let g = gumbel_pickands(1.0).unwrap();
        assert!((g.a(1.0, 1.0) - 2.0).abs() < 1e-15);
        assert!((g.chat(0.5, 0.5).unwrap() - 0.25).abs() < 1e-15);
        let g = gumbel_pickands(10.0).unwrap();
        assert!((g.a(1.0, 1.0) - 2f64.powf(0.1)).abs() < 1e-15);
        assert!((g.a1(1.0, 1.0) - 2f64.powf(-0.9)).abs() < 1e-15);
        assert!(g.a2(1.0, 1e-300) < 1e-300);
        assert_eq!(g.a2_at_1_0(), 0.0);
        assert_eq!(gumbel_pickands(1.0).unwrap().a2_at_1_0(), 1.0);
        assert!(gumbel_pickands(0.5).is_err());
        assert!(gumbel_pickands(f64::NAN).is_err());
    }

    #[test]
    fn huge_phi_tends_to_max() {
        let g = gumbel_pickands(1e6).unwrap();
        assert!((g.a(1.0, 1.0) - 1.0).abs() < 1e-5);
        assert!((g.a(3.0, 1.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chat_domain() {
        let g = gumbel_pickands(2.0).unwrap();
        assert!(g.chat(1.5, 0.5).is_err());
        assert!(g.chat_v(0.5, -0.1).is_err());
        assert_eq!(g.chat(0.0, 0.5).unwrap(), 0.0);
        assert!((g.chat(1.0, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((g.chat_v(1.0, 0.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chat_v_matches_difference_quotient_at_phi_10() {
        let g = gumbel_pickands(10.0).unwrap();
        let (u, v, h) = (0.01, 0.01, 1e-7);
        let fd = (g.chat(u, v + h).unwrap() - g.chat(u, v - h).unwrap()) / (2.0 * h);
        let d = g.chat_v(u, v).unwrap();
        assert!((fd - d).abs() / d < 1e-5);
    }

    #[test]
    fn custom_a2_limit_detection() {
        let g = gumbel_pickands(3.0).unwrap();
        let (a, a1, a2) = (g.a.clone(), g.a1.clone(), g.a2.clone());
        let c = PickandsEV::custom(a, a1, a2);
        assert_eq!(c.a2_at_1_0(), 0.0);
        // logistic-type mixture with a non-zero limit: A = θ(u+v) + (1−θ)max
        let th = 0.4;
        let c = PickandsEV::custom(
            Arc::new(move |u: f64, v: f64| th * (u + v) + (1.0 - th) * u.max(v)),
            Arc::new(move |u, v| th + (1.0 - th) * if u > v { 1.0 } else { 0.0 }),
            Arc::new(move |u, v| th + (1.0 - th) * if v > u { 1.0 } else { 0.0 }),
        );
        assert!((c.a2_at_1_0() - 0.4).abs() < 1e-12);
        // slow power decay v^0.2 is still zero in the limit
        let c = PickandsEV::custom(
            Arc::new(|u: f64, v: f64| u.max(v)),
            Arc::new(|_, _| 1.0),
            Arc::new(|u: f64, v: f64| (v / u).powf(0.2)),
        );
        assert_eq!(c.a2_at_1_0(), 0.0);
    }

    fn arb_phi() -> impl Strategy<Value = f64> {
        prop_oneof![Just(1.0), Just(10.0), 1.0f64..20.0]
    }

    proptest! {
        #[test]
        fn homogeneity(phi in arb_phi(), u in 0.01f64..10.0, v in 0.01f64..10.0, s in 0.01f64..100.0) {
            let g = gumbel_pickands(phi).unwrap();
            let lhs = g.a(s * u, s * v);
            prop_assert!((lhs - s * g.a(u, v)).abs() <= 1e-12 * lhs);
            prop_assert!((g.a1(s * u, s * v) - g.a1(u, v)).abs() <= 1e-12);
            prop_assert!((g.a2(s * u, s * v) - g.a2(u, v)).abs() <= 1e-12);
        }

        #[test]
        fn euler_identity(phi in arb_phi(), u in 0.01f64..10.0, v in 0.01f64..10.0) {
            let g = gumbel_pickands(phi).unwrap();
            let a = g.a(u, v);
            prop_assert!((u * g.a1(u, v) + v * g.a2(u, v) - a).abs() <= 1e-12 * a);
        }

        #[test]
        fn pickands_bounds(phi in arb_phi(), u in 0.0f64..10.0, v in 0.0f64..10.0) {
            let a = gumbel_pickands(phi).unwrap().a(u, v);
            prop_assert!(a >= u.max(v) * (1.0 - 1e-15) && a <= (u + v) * (1.0 + 1e-15));
        }

        #[test]
        fn chat_v_against_finite_difference(phi in arb_phi(), u in 1e-3f64..0.999, v in 1e-3f64..0.999) {
            let g = gumbel_pickands(phi).unwrap();
            let d = g.chat_v(u, v).unwrap();
            let fd = partial_v(&|a, b| g.chat(a, b).unwrap(), u, v);
            prop_assert!((d - fd).abs() <= 1e-6 * d + 1e-8, "d={} fd={}", d, fd);
        }
    }
}
