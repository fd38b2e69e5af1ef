//! Expansion-versus-simulation tables and the assumption checker.

use std::fs;
use std::path::{Path, PathBuf};

use tailsum_core::asymptotics::{
    ev_expansion, general_expansion, independence_expansion, var_by_inversion,
    var_expansion_ev, var_expansion_independence, BoundaryPolicy, Expansion, GeneralBranch,
    VarExpansion, VarRegime,
};
use tailsum_core::copulas::{
    check_tail_order_trial, partial_limit_traits, tail_order_traits, AssumptionReport,
    CheckGrid, CheckResult, Copula, EvFamily, Verdict,
};
use tailsum_core::exec::Execution;
use tailsum_core::marginals::{Marginal, ParetoMarginal};
use tailsum_core::montecarlo::{tailprob_sweep, var_sweep, SimulationConfig};

use crate::config::{Settings, DEFAULT_Q_GRID};
use crate::error::{CliError, Result};
use crate::output::{self, Plot};

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    /// `t` for tail probabilities, `q` for VaR.
    pub abscissa: f64,
    pub first_order: f64,
    pub expansion: f64,
    pub mc: Option<(f64, f64)>,
    pub case_label: Option<String>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    TailProb,
    Var,
}

/// `count` thresholds, increasing, with `F̄(t)` log-spaced on `[tail_min, tail_max]`.
pub fn default_t_grid(
    m: &ParetoMarginal,
    tail_min: f64,
    tail_max: f64,
    count: usize,
) -> Result<Vec<f64>> {
    let (a, b) = (tail_max.ln(), tail_min.ln());
    (0..count)
        .map(|k| {
            let p = (a + (b - a) * k as f64 / (count - 1) as f64).exp();
            Ok(m.tail_quantile(p)?)
        })
        .collect()
}

fn is_comonotone(c: &Copula) -> bool {
    matches!(c, Copula::ExtremeValue(p) if p.family() == EvFamily::Comonotone)
}

/// The tail-probability expansion appropriate to the copula.
pub fn tail_expansion(m: &ParetoMarginal, c: &Copula) -> Result<Expansion> {
    Ok(match c {
        Copula::Independence => independence_expansion(m)?,
        c if is_comonotone(c) => {
            let tot = tail_order_traits(c)?;
            let plt = partial_limit_traits(c).ok();
            general_expansion(m, &tot, plt.as_ref(), GeneralBranch::Auto)?
        }
        Copula::ExtremeValue(p) => ev_expansion(m, p)?,
        Copula::GumbelBarnett { .. } => {
            return Err(CliError::Config(
                "gumbel-barnett has no tail order; only the check mode accepts it".into(),
            ))
        }
    })
}

pub fn var_expansion(
    m: &ParetoMarginal,
    c: &Copula,
    q: f64,
    policy: BoundaryPolicy,
) -> Result<VarExpansion> {
    Ok(match c {
        Copula::Independence => var_expansion_independence(m, q, policy)?,
        c if is_comonotone(c) => {
            let e = tail_expansion(m, c)?;
            let mut diagnostics = e.diagnostics.clone();
            diagnostics.push("solved by inverting the tail expansion".into());
            VarExpansion {
                value: var_by_inversion(&e, m, q)?,
                leading: 2f64.powf(1.0 / m.tail_index()) * m.quantile(q)?,
                regime: VarRegime::Copula,
                label: None,
                diagnostics,
                candidates: Vec::new(),
            }
        }
        Copula::ExtremeValue(p) => var_expansion_ev(m, p, q, policy)?,
        Copula::GumbelBarnett { .. } => {
            return Err(CliError::Config(
                "gumbel-barnett has no tail order; only the check mode accepts it".into(),
            ))
        }
    })
}

fn simulation(s: &Settings, m: ParetoMarginal, c: &Copula) -> Result<Option<SimulationConfig>> {
    Ok(s.mc_params()?
        .map(|(n, seed)| SimulationConfig::new(n, seed, c.clone(), m).with_exec(Execution::Parallel)))
}

pub fn run_tailprob(s: &Settings) -> Result<Vec<ResultRow>> {
    let m = s.marginal()?;
    let c = s.copula()?;
    let ts = match &s.t_grid {
        Some(t) => t.clone(),
        None => default_t_grid(&m, s.tail_min, s.tail_max, s.count)?,
    };
    let e = tail_expansion(&m, &c)?;
    let mc = match simulation(s, m, &c)? {
        Some(cfg) => Some(tailprob_sweep(&cfg, &ts)?),
        None => None,
    };
    ts.iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut diagnostics = e.diagnostics.clone();
            if let Some(label) = &e.label {
                diagnostics.extend(label.warnings.iter().cloned());
            }
            for cand in &e.candidates {
                diagnostics.push(format!("candidate {}={:.16e}", cand.name, cand.expansion.value(&m, t)?));
            }
            Ok(ResultRow {
                abscissa: t,
                first_order: Expansion::first_order(&m, t)?,
                expansion: e.value(&m, t)?,
                mc: mc.as_ref().map(|v| (v[i].point, v[i].stderr)),
                case_label: e.label.as_ref().map(ToString::to_string),
                diagnostics,
            })
        })
        .collect()
}

pub fn run_var(s: &Settings) -> Result<Vec<ResultRow>> {
    let m = s.marginal()?;
    let c = s.copula()?;
    if !s.q_grid.iter().all(|&q| q > 0.5 && q < 1.0) {
        return Err(CliError::Config("grid.q must lie in (0.5, 1)".into()));
    }
    let rows = s
        .q_grid
        .iter()
        .map(|&q| var_expansion(&m, &c, q, s.boundary))
        .collect::<Result<Vec<_>>>()?;
    let mc = match simulation(s, m, &c)? {
        Some(cfg) => Some(var_sweep(&cfg, &s.q_grid)?),
        None => None,
    };
    Ok(rows
        .into_iter()
        .zip(&s.q_grid)
        .enumerate()
        .map(|(i, (v, &q))| {
            let mut diagnostics = vec![format!("regime {:?}", v.regime).to_lowercase()];
            diagnostics.extend(v.diagnostics);
            if let Some(label) = &v.label {
                diagnostics.extend(label.warnings.iter().cloned());
            }
            for (name, value) in &v.candidates {
                diagnostics.push(format!("candidate {name}={value:.16e}"));
            }
            if let Some((lo, hi)) = mc.as_ref().and_then(|e| e[i].interval) {
                diagnostics.push(format!("mc bracket [{lo:.16e}, {hi:.16e}]"));
            }
            ResultRow {
                abscissa: q,
                first_order: v.leading,
                expansion: v.value,
                mc: mc.as_ref().map(|e| (e[i].point, e[i].stderr)),
                case_label: v.label.as_ref().map(ToString::to_string),
                diagnostics,
            }
        })
        .collect())
}

pub const TRIAL_KAPPAS: [f64; 11] = [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0];

/// Assumption checks, plus trial tail orders when the copula has none.
pub fn run_check(s: &Settings) -> Result<AssumptionReport> {
    let c = s.copula()?;
    let grid = CheckGrid {
        tolerance: s.tolerance,
        ..CheckGrid::default()
    };
    let mut report = c.check(&grid, Execution::Parallel)?;
    if tail_order_traits(&c).is_err() {
        let sc = c.survival_copula();
        let trials = TRIAL_KAPPAS
            .iter()
            .map(|&k| {
                let mut r = check_tail_order_trial(&sc, k, &grid)?;
                r.name = format!("A2[kappa={k:.1}]");
                Ok(r)
            })
            .collect::<Result<Vec<CheckResult>>>()?;
        report.checks.extend(trials);
    }
    Ok(report)
}

pub fn report_failed(report: &AssumptionReport) -> bool {
    report.checks.iter().any(|c| c.verdict == Verdict::Fail)
}

/// Figure number for the published parameter sets.
pub fn figure_stem(phi: f64) -> String {
    if phi == 1.0 {
        "figure1".into()
    } else if phi == 10.0 {
        "figure2".into()
    } else {
        format!("figure-phi{phi}")
    }
}

pub const FIGURE_ALPHAS: [f64; 2] = [0.8, 2.0];

/// The 2×2 panel grid for one `φ`. Returns the files written.
pub fn reproduce_figures(s: &Settings, phi: f64, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let stem = figure_stem(phi);
    let mut written = Vec::new();
    let panels = FIGURE_ALPHAS
        .iter()
        .flat_map(|&a| [(a, Mode::TailProb), (a, Mode::Var)]);
    for ((alpha, mode), letter) in panels.zip(['a', 'b', 'c', 'd']) {
        let mut ps = s.clone();
        ps.alpha = Some(alpha);
        ps.phi = Some(phi);
        ps.family = crate::config::Family::Gumbel;
        ps.t_grid = None;
        ps.q_grid = DEFAULT_Q_GRID.to_vec();
        let rows = match mode {
            Mode::TailProb => run_tailprob(&ps)?,
            Mode::Var => run_var(&ps)?,
        };
        let base = out_dir.join(format!("{stem}-{letter}"));
        let csv = base.with_extension("csv");
        let svg = base.with_extension("svg");
        output::write_rows_csv(&csv, &rows)?;
        let title = format!("Gumbel copula, phi = {phi}, alpha = {alpha}");
        output::write_svg(&svg, &Plot::for_mode(mode, &title), &rows)?;
        written.push(csv);
        written.push(svg);
    }
    Ok(written)
}
