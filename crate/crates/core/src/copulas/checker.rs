//! Numerical checks of the tail-order, ratio-bound and partial-limit
//! assumptions along a decreasing sequence of `t`.

use std::fmt;

use super::pickands::PickandsEV;
use super::survival::SurvivalCopula;
use super::traits::{PartialLimitTraits, TailOrderTraits};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const DEFAULT_TOLERANCE: f64 = 1e-3;

const RATIO_U: [f64; 3] = [0.01, 0.05, 0.1];
const RATIO_V: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
const EVCOND_X: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
const TAYLOR_STEP: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckGrid {
    /// Values used for both `u` and `v` where the check scales both.
    pub points: Vec<f64>,
    /// Strictly decreasing towards zero.
    pub t_seq: Vec<f64>,
    pub tolerance: f64,
}

impl Default for CheckGrid {
    fn default() -> Self {
        Self {
            points: vec![0.5, 1.0, 2.0, 4.0],
            t_seq: (1..=7).map(|k| 10f64.powi(-k)).collect(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl CheckGrid {
    fn validate(&self) -> Result<()> {
        if self.t_seq.len() < 3 {
            return Err(Error::Config("t-sequence needs at least three values".into()));
        }
        if !self.t_seq.iter().all(|&t| t > 0.0 && t < 1.0)
            || !self.t_seq.windows(2).all(|w| w[1] < w[0])
        {
            return Err(Error::Config(
                "t-sequence must be strictly decreasing inside (0, 1)".into(),
            ));
        }
        if self.points.is_empty() || !self.points.iter().all(|&p| p > 0.0 && p.is_finite()) {
            return Err(Error::Config("grid points must be positive".into()));
        }
        if self.points.iter().fold(0.0f64, |m, &p| m.max(p)) * self.t_seq[0] > 1.0 {
            return Err(Error::Config("largest grid point times t exceeds 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "n/a",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    /// `(t, deviation)` with the deviation maximised over the grid.
    pub sequence: Vec<(f64, f64)>,
    pub detail: String,
    pub fitted_c: Option<f64>,
}

impl CheckResult {
    fn not_applicable(name: &str, why: &str) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::NotApplicable,
            sequence: Vec::new(),
            detail: why.into(),
            fitted_c: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionReport {
    pub checks: Vec<CheckResult>,
    pub grid: CheckGrid,
}

impl AssumptionReport {
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

/// Pass iff the final deviation is below `tol` and the deviations do not
/// grow over the last three steps.
fn judge(devs: &[f64], tol: f64) -> Verdict {
    if devs.iter().any(|d| !d.is_finite()) {
        return Verdict::Fail;
    }
    let n = devs.len();
    let tail = &devs[n.saturating_sub(3)..];
    let shrinking = tail.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    if devs[n - 1] < tol && shrinking {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn rel_dev(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Elementwise maximum of per-point sequences.
fn max_over(rows: Vec<Vec<f64>>) -> Vec<f64> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n)
        .map(|k| rows.iter().map(|r| r[k]).fold(0.0f64, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) }))
        .collect()
}

/// Relative growth of a statistic between consecutive `t`; zero when it
/// shrinks.
fn growth(stats: &[f64]) -> Vec<f64> {
    stats
        .windows(2)
        .map(|w| ((w[1] - w[0]) / w[0].abs().max(1.0)).max(0.0))
        .collect()
}

fn pairs(points: &[f64]) -> Vec<(f64, f64)> {
    points
        .iter()
        .flat_map(|&u| points.iter().map(move |&v| (u, v)))
        .collect()
}

fn check_tail_order(
    sc: &SurvivalCopula,
    tot: &TailOrderTraits,
    grid: &CheckGrid,
    exec: Execution,
) -> CheckResult {
    let rows = exec.map_slice(&pairs(&grid.points), |&(u, v)| {
        let want = tot.tau(u, v);
        grid.t_seq
            .iter()
            .map(|&t| {
                let r = sc.chat(u * t, v * t) / (t.powf(tot.kappa) * tot.ell(t));
                rel_dev(r, want)
            })
            .collect()
    });
    let devs = max_over(rows);
    CheckResult {
        name: "A2".into(),
        verdict: judge(&devs, grid.tolerance),
        sequence: grid.t_seq.iter().copied().zip(devs).collect(),
        detail: format!(
            "C(ut,vt)/(t^k l(t)) against tau(u,v), k = {}",
            tot.kappa
        ),
        fitted_c: None,
    }
}

/// Tail-order check for a trial `κ` with no limit function: the ratio
/// `Ĉ(ut,vt)/t^κ` must settle, measured by its relative change per step.
pub fn check_tail_order_trial(
    sc: &SurvivalCopula,
    kappa: f64,
    grid: &CheckGrid,
) -> Result<CheckResult> {
    grid.validate()?;
    let rows: Vec<Vec<f64>> = pairs(&grid.points)
        .into_iter()
        .map(|(u, v)| {
            let r: Vec<f64> = grid
                .t_seq
                .iter()
                .map(|&t| sc.chat(u * t, v * t) / t.powf(kappa))
                .collect();
            r.windows(2)
                .map(|w| {
                    if w[1] == 0.0 {
                        f64::INFINITY
                    } else {
                        ((w[1] - w[0]) / w[1]).abs()
                    }
                })
                .collect()
        })
        .collect();
    let devs = max_over(rows);
    Ok(CheckResult {
        name: "A2".into(),
        verdict: judge(&devs, grid.tolerance),
        sequence: grid.t_seq[1..].iter().copied().zip(devs).collect(),
        detail: format!("relative change of C(ut,vt)/t^k per step, trial k = {kappa}"),
        fitted_c: None,
    })
}

fn check_ratio_bound(sc: &SurvivalCopula, grid: &CheckGrid, exec: Execution) -> CheckResult {
    // b_t = max (ratio − 1)/u over the (u, v) grid
    let stats: Vec<(f64, Vec<(f64, f64)>)> = exec.map_slice(&grid.t_seq, |&t| {
        let mut b = f64::NEG_INFINITY;
        let mut logs = Vec::new();
        for &v in &RATIO_V {
            let base = sc.chat_v(t, v);
            for &u in &RATIO_U {
                let ratio = sc.chat_v(t * (1.0 + u), v) / base;
                b = b.max((ratio - 1.0) / u);
                logs.push(((1.0 + u).ln(), ratio.ln()));
            }
        }
        (b, logs)
    });
    let b: Vec<f64> = stats.iter().map(|s| s.0).collect();
    // least-squares c through the origin on ln ratio = c ln(1+u), smallest t
    let logs = &stats.last().unwrap().1;
    let (sxy, sxx) = logs
        .iter()
        .fold((0.0, 0.0), |(sxy, sxx), &(x, y)| (sxy + x * y, sxx + x * x));
    let c = sxy / sxx;
    let devs = growth(&b);
    let verdict = if b.iter().any(|x| !x.is_finite()) || !c.is_finite() {
        Verdict::Inconclusive
    } else {
        judge(&devs, grid.tolerance)
    };
    CheckResult {
        name: "A3".into(),
        verdict,
        sequence: grid.t_seq[1..].iter().copied().zip(devs).collect(),
        detail: format!(
            "growth of max (C_v(t(1+u),v)/C_v(t,v) - 1)/u; final bound {:.6}",
            b.last().unwrap()
        ),
        fitted_c: Some(c),
    }
}

fn check_partial_limit(
    sc: &SurvivalCopula,
    plt: &PartialLimitTraits,
    grid: &CheckGrid,
    exec: Execution,
) -> CheckResult {
    let pts: Vec<(f64, f64)> = grid
        .points
        .iter()
        .flat_map(|&u| RATIO_V.iter().map(move |&v| (u, v)))
        .collect();
    let rows = exec.map_slice(&pts, |&(u, v)| {
        let want = plt.varphi(u, v);
        grid.t_seq
            .iter()
            .map(|&t| {
                let r = sc.chat_v(u * t, v) / (t.powf(plt.theta_exp) * plt.h(t));
                rel_dev(r, want)
            })
            .collect()
    });
    let devs = max_over(rows);
    CheckResult {
        name: "A4".into(),
        verdict: judge(&devs, grid.tolerance),
        sequence: grid.t_seq.iter().copied().zip(devs).collect(),
        detail: format!(
            "C_v(ut,v)/(t^theta h(t)) against varphi(u,v){}",
            if plt.degenerate {
                " (varphi = 0, absolute deviation)"
            } else {
                ""
            }
        ),
        fitted_c: None,
    }
}

fn check_evcond(p: &PickandsEV, grid: &CheckGrid, exec: Execution) -> CheckResult {
    let stats: Vec<f64> = exec.map_slice(&grid.t_seq, |&t| {
        let mut c = 0.0f64;
        for &x in &EVCOND_X {
            let den = p.a2(1.0, x);
            if den == 0.0 {
                continue;
            }
            for &u in &RATIO_U {
                let y = x / (1.0 + (1.0 + u).ln() / t.ln());
                c = c.max((p.a2(1.0, y) / den).ln() / (1.0 + u).ln());
            }
        }
        c
    });
    let devs = growth(&stats);
    let sup = stats.iter().fold(0.0f64, |m, &x| m.max(x));
    CheckResult {
        name: "evcond".into(),
        verdict: if sup.is_finite() {
            judge(&devs, grid.tolerance)
        } else {
            Verdict::Inconclusive
        },
        sequence: grid.t_seq[1..].iter().copied().zip(devs).collect(),
        detail: "growth of max log(A2 ratio)/log(1+u)".into(),
        fitted_c: Some(sup),
    }
}

/// `Ĉ_vu(0, v)` by forward differences with one Richardson step; `None`
/// when the two extrapolations disagree beyond `tol`.
fn cross_derivative_at_zero(sc: &SurvivalCopula, v: f64, tol: f64) -> Option<f64> {
    let base = sc.chat_v(0.0, v);
    let d = |h: f64| (sc.chat_v(h, v) - base) / h;
    let (d1, d2, d4) = (d(TAYLOR_STEP), d(TAYLOR_STEP / 2.0), d(TAYLOR_STEP / 4.0));
    let (r1, r2) = (2.0 * d2 - d1, 2.0 * d4 - d2);
    let scale = r2.abs().max(f64::MIN_POSITIVE);
    ((r1 - r2).abs() <= tol * scale || (r1 - r2).abs() < 1e-12).then_some(r2)
}

fn check_taylor_limit(sc: &SurvivalCopula, grid: &CheckGrid, exec: Execution) -> CheckResult {
    let derivs: Vec<Option<f64>> =
        exec.map_slice(&RATIO_V, |&v| cross_derivative_at_zero(sc, v, grid.tolerance));
    if derivs.iter().any(Option::is_none) {
        return CheckResult {
            name: "taylor-limit".into(),
            verdict: Verdict::Inconclusive,
            sequence: Vec::new(),
            detail: "finite differences for C_vu(0,v) unstable".into(),
            fitted_c: None,
        };
    }
    let pts: Vec<(f64, f64, f64)> = grid
        .points
        .iter()
        .flat_map(|&u| {
            RATIO_V
                .iter()
                .zip(&derivs)
                .map(move |(&v, d)| (u, v, d.unwrap()))
        })
        .collect();
    let rows = exec.map_slice(&pts, |&(u, v, d)| {
        grid.t_seq
            .iter()
            .map(|&t| rel_dev(sc.chat_v(u * t, v) / t, u * d))
            .collect()
    });
    let devs = max_over(rows);
    CheckResult {
        name: "taylor-limit".into(),
        verdict: judge(&devs, grid.tolerance),
        sequence: grid.t_seq.iter().copied().zip(devs).collect(),
        detail: "C_v(ut,v)/t against u C_vu(0,v)".into(),
        fitted_c: None,
    }
}

/// Run the checks that the supplied traits make meaningful. Missing traits
/// give `NotApplicable` entries rather than errors.
pub fn check_assumptions(
    sc: &SurvivalCopula,
    tot: Option<&TailOrderTraits>,
    plt: Option<&PartialLimitTraits>,
    ev: Option<&PickandsEV>,
    grid: &CheckGrid,
    exec: Execution,
) -> Result<AssumptionReport> {
    grid.validate()?;
    let checks = vec![
        match tot {
            Some(tot) => check_tail_order(sc, tot, grid, exec),
            None => CheckResult::not_applicable("A2", "no tail-order traits"),
        },
        check_ratio_bound(sc, grid, exec),
        match plt {
            Some(plt) => check_partial_limit(sc, plt, grid, exec),
            None => CheckResult::not_applicable("A4", "no partial-limit traits"),
        },
        match ev {
            Some(p) => check_evcond(p, grid, exec),
            None => CheckResult::not_applicable("evcond", "not an extreme-value copula"),
        },
        check_taylor_limit(sc, grid, exec),
    ];
    Ok(AssumptionReport {
        checks,
        grid: grid.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::{gumbel_barnett, tail_order_traits, Copula};

    #[test]
    fn independence_passes_exactly() {
        let r = Copula::Independence
            .check(&CheckGrid::default(), Execution::Sequential)
            .unwrap();
        for c in &r.checks {
            assert_eq!(c.verdict, Verdict::Pass, "{}: {:?}", c.name, c.sequence);
            assert!(c.sequence.iter().all(|&(_, d)| d < 1e-12), "{}", c.name);
        }
    }

    #[test]
    fn wrong_kappa_fails() {
        let g = Copula::gumbel(10.0).unwrap();
        let mut tot = tail_order_traits(&g).unwrap();
        tot.kappa = 2.0;
        let r = check_tail_order(
            &g.survival_copula(),
            &tot,
            &CheckGrid::default(),
            Execution::Sequential,
        );
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn barnett_has_no_tail_order() {
        let sc = gumbel_barnett(0.5).unwrap();
        for k in 0..=10 {
            let kappa = 1.0 + 0.1 * k as f64;
            let r = check_tail_order_trial(&sc, kappa, &CheckGrid::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Fail, "kappa = {kappa}");
        }
        let ind = crate::copulas::SurvivalCopula::independence();
        let r = check_tail_order_trial(&ind, 2.0, &CheckGrid::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn rejects_bad_sequences() {
        let grid = CheckGrid {
            t_seq: vec![1e-2, 1e-1, 1e-3],
            ..CheckGrid::default()
        };
        assert!(matches!(
            Copula::Independence.check(&grid, Execution::Sequential),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Copula::gumbel(10.0).unwrap();
        let a = g.check(&CheckGrid::default(), Execution::Sequential).unwrap();
        let b = g.check(&CheckGrid::default(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
