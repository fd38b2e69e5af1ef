//! The singular integrals behind the second-order coefficients.

use crate::copulas::{PartialLimitTraits, TailOrderTraits, TraitsKind};
use crate::error::{domain, Error, Result};
use crate::marginals::Marginal;
use crate::quad::{integrate, Tolerance};

const I_TOL: Tolerance = Tolerance::new(1e-13, 1e-13);
const STALL_RATIO: f64 = 0.95;
const ETA_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);

/// `((1−y)^{−α} − 1)/y`, continuous at `y = 0` with value `α`.
fn excess_ratio(alpha: f64, y: f64) -> f64 {
    if y == 0.0 {
        alpha
    } else {
        (-alpha * (-y).ln_1p()).exp_m1() / y
    }
}

/// `I(α,β) = β∫₀^{1/2} ((1−y)^{−α} − 1) y^{−β−1} dy`.
///
/// Computed after `y = z^{1/(1−β)}`, which turns the integrand into the
/// bounded `excess_ratio(α, y)/(1−β)`.
pub fn integral_i(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    if !(beta >= 0.0) {
        return Err(domain("beta", beta, "beta >= 0"));
    }
    if beta >= 1.0 {
        return Err(Error::Divergent(format!(
            "I(alpha, beta) needs beta < 1, got {beta}"
        )));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let e = 1.0 - beta;
    let upper = 0.5f64.powf(e);
    let r = integrate(
        |z: f64| excess_ratio(alpha, z.powf(1.0 / e)) / e,
        0.0,
        upper,
        I_TOL,
    )?;
    Ok(beta * r.value)
}

/// `τ_v((1−y)^{−α}, y^{−α}) − τ_v(1, y^{−α})`, without cancellation for
/// the closed-form kinds.
fn tau_v_increment(tot: &TailOrderTraits, alpha: f64, y: f64) -> f64 {
    let v = y.powf(-alpha);
    match tot.kind {
        TraitsKind::Independence => (-alpha * (-y).ln_1p()).exp_m1(),
        TraitsKind::ExtremeValue { a1_11: a } => {
            a * v.powf(a - 1.0) * (-alpha * a * (-y).ln_1p()).exp_m1()
        }
        TraitsKind::Comonotone => 0.0,
        TraitsKind::User => tot.tau_v((-alpha * (-y).ln_1p()).exp(), v) - tot.tau_v(1.0, v),
    }
}

/// `η(δ) = α∫_δ^{1/2} [τ_v((1−y)^{−α}, y^{−α}) − τ_v(1, y^{−α})] y^{−α−1} dy`,
/// integrated in `s = ln y`.
pub fn eta_delta(tot: &TailOrderTraits, alpha: f64, delta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(domain("delta", delta, "0 < delta < 1/2"));
    }
    let r = integrate(
        |s: f64| {
            let y = s.exp();
            tau_v_increment(tot, alpha, y) * y.powf(-alpha)
        },
        delta.ln(),
        0.5f64.ln(),
        ETA_TOL,
    )?;
    Ok(alpha * r.value)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaLimit {
    Finite(f64),
    Infinite,
}

impl EtaLimit {
    pub fn is_finite(&self) -> bool {
        matches!(self, EtaLimit::Finite(_))
    }
}

/// `η = lim_{δ↓0} η(δ)`.
///
/// Closed forms for the shipped families. For user traits the limit is
/// extrapolated from `δ = 10⁻², …, 10⁻⁶`; the integral is declared
/// divergent when it more than doubles across a decade or when its
/// increments shrink by less than 5% per decade.
pub fn eta_limit(tot: &TailOrderTraits, alpha: f64) -> Result<EtaLimit> {
    match tot.kind {
        TraitsKind::Independence => closed_eta(alpha),
        TraitsKind::ExtremeValue { a1_11 } => closed_eta(alpha * a1_11),
        // τ_v vanishes on the whole range y < 1/2
        TraitsKind::Comonotone => Ok(EtaLimit::Finite(0.0)),
        TraitsKind::User => {
            let etas = (2..=6)
                .map(|k| eta_delta(tot, alpha, 10f64.powi(-k)))
                .collect::<Result<Vec<_>>>()?;
            Ok(extrapolate_eta(&etas))
        }
    }
}

fn closed_eta(a: f64) -> Result<EtaLimit> {
    if a < 1.0 {
        Ok(EtaLimit::Finite(integral_i(a, a)?))
    } else {
        Ok(EtaLimit::Infinite)
    }
}

fn extrapolate_eta(etas: &[f64]) -> EtaLimit {
    let doubles = etas
        .windows(2)
        .any(|w| w[0] > 0.0 && w[1] > 2.0 * w[0]);
    let incs: Vec<f64> = etas.windows(2).map(|w| w[1] - w[0]).collect();
    let stalls = incs
        .windows(2)
        .any(|w| w[0] != 0.0 && w[1] / w[0] >= STALL_RATIO);
    if doubles || stalls || etas.iter().any(|e| !e.is_finite()) {
        return EtaLimit::Infinite;
    }
    let n = etas.len();
    let (d1, d2) = (incs[n - 3], incs[n - 2]);
    let last = etas[n - 1];
    if d2 == d1 {
        EtaLimit::Finite(last)
    } else {
        EtaLimit::Finite(last - d2 * d2 / (d2 - d1))
    }
}

/// `D(δ,t) = ∫_δ^{1/2} [τ_v((1−y)^{−α}, y^{−α}) − τ_v(1, y^{−α})] dF(ty)`.
pub fn d_delta<M: Marginal + ?Sized>(
    tot: &TailOrderTraits,
    m: &M,
    delta: f64,
    t: f64,
) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(domain("delta", delta, "0 < delta < 1/2"));
    }
    if !(t > 0.0) {
        return Err(domain("t", t, "t > 0"));
    }
    let alpha = m.tail_index();
    let r = integrate(
        |y: f64| tau_v_increment(tot, alpha, y) * t * m.density(t * y).unwrap_or(f64::NAN),
        delta,
        0.5,
        ETA_TOL,
    )?;
    Ok(r.value)
}

/// `Δ(t) = ∫₀^{1/2} ((1−y)^{−αθ} − 1) φ(1, F̄(ty)) dF(ty)`, integrated in
/// `u = ln(1 + ty)`.
pub fn partial_integral<M: Marginal + ?Sized>(
    plt: &PartialLimitTraits,
    m: &M,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("t", t, "t > 0"));
    }
    if plt.degenerate {
        return Ok(0.0);
    }
    let at = m.tail_index() * plt.theta_exp;
    let r = integrate(
        |u: f64| {
            let x = u.exp_m1();
            let y = x / t;
            let sf = m.survival(x).unwrap_or(f64::NAN);
            let f = m.density(x).unwrap_or(f64::NAN);
            (-at * (-y).ln_1p()).exp_m1() * plt.varphi(1.0, sf) * f * (1.0 + x)
        },
        0.0,
        (0.5 * t).ln_1p(),
        ETA_TOL,
    )?;
    Ok(r.value)
}
