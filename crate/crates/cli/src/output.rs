//! CSV tables and hand-written SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use tailsum_core::copulas::{AssumptionReport, Verdict};

use crate::error::{CliError, Result};
use crate::experiment::{Mode, ResultRow};

pub const HEADER: [&str; 7] = [
    "abscissa",
    "first_order",
    "expansion",
    "mc_point",
    "mc_stderr",
    "case_label",
    "diagnostics",
];

pub const CHECK_HEADER: [&str; 6] = ["check", "t", "deviation", "verdict", "fitted_c", "warning"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &str, e: csv::Error) -> CliError {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    };
    CliError::Io {
        path: path.into(),
        source,
    }
}

pub fn rows_to_csv<W: Write>(w: W, rows: &[ResultRow]) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for r in rows {
        let (point, se) = r
            .mc
            .map_or((String::new(), String::new()), |(p, s)| (num(p), num(s)));
        out.write_record([
            num(r.abscissa),
            num(r.first_order),
            num(r.expansion),
            point,
            se,
            r.case_label.clone().unwrap_or_default(),
            r.diagnostics.join("; "),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_rows_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    rows_to_csv(io::BufWriter::new(f), rows).map_err(|e| csv_error(&path.display().to_string(), e))
}

pub fn check_to_csv<W: Write>(w: W, report: &AssumptionReport) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CHECK_HEADER)?;
    for c in &report.checks {
        let fitted = c.fitted_c.map(num).unwrap_or_default();
        let warning = if c.verdict == Verdict::Inconclusive { "1" } else { "0" };
        let verdict = c.verdict.to_string();
        if c.sequence.is_empty() {
            out.write_record([c.name.as_str(), "", "", &verdict, &fitted, warning])?;
        }
        for &(t, d) in &c.sequence {
            out.write_record([c.name.clone(), num(t), num(d), verdict.clone(), fitted.clone(), warning.into()])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_check_csv(path: &Path, report: &AssumptionReport) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    check_to_csv(io::BufWriter::new(f), report)
        .map_err(|e| csv_error(&path.display().to_string(), e))
}

pub fn check_to_text(report: &AssumptionReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let last = c
            .sequence
            .last()
            .map(|(t, d)| format!("deviation {d:.3e} at t={t:.0e}"))
            .unwrap_or_default();
        let fitted = c.fitted_c.map(|f| format!(" fitted c={f:.3}")).unwrap_or_default();
        let _ = writeln!(s, "{:<14} {:<13} {}{}  {}", c.name, c.verdict.to_string(), last, fitted, c.detail);
    }
    s
}

/// Axis titles for a panel. Both axes are logarithmic.
#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// VaR panels are plotted against the return period `1/(1−q)`.
    pub return_period: bool,
}

impl Plot {
    pub fn for_mode(mode: Mode, title: &str) -> Self {
        match mode {
            Mode::TailProb => Self {
                title: title.into(),
                x_label: "t".into(),
                y_label: "Pr(X+Y>t)".into(),
                return_period: false,
            },
            Mode::Var => Self {
                title: title.into(),
                x_label: "1/(1-q)".into(),
                y_label: "VaR_q(X+Y)".into(),
                return_period: true,
            },
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

struct LogAxis {
    lo: f64,
    hi: f64,
}

impl LogAxis {
    fn fit(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| *v > 0.0 && v.is_finite()) {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-9 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        let pad = 0.05 * (hi - lo);
        Self { lo: lo - pad, hi: hi + pad }
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mults: &[f64] = if self.hi - self.lo < 2.0 { &[1.0, 2.0, 5.0] } else { &[1.0] };
        for e in self.lo.floor() as i32..=self.hi.ceil() as i32 {
            for &m in mults {
                let v = m * 10f64.powi(e);
                let l = v.log10();
                if l >= self.lo && l <= self.hi {
                    out.push(v);
                }
            }
        }
        out
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(svg: &mut String, pts: &[(f64, f64)], style: &str) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(svg, r#"<polyline fill="none" {style} points="{}"/>"#, coords.join(" "));
}

pub fn render_svg(plot: &Plot, rows: &[ResultRow]) -> String {
    let x_of = |r: &ResultRow| {
        if plot.return_period {
            1.0 / (1.0 - r.abscissa)
        } else {
            r.abscissa
        }
    };
    let xa = LogAxis::fit(rows.iter().map(x_of));
    let ya = LogAxis::fit(rows.iter().flat_map(|r| {
        [r.first_order, r.expansion, r.mc.map_or(f64::NAN, |m| m.0)]
    }));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |v: f64| LEFT + xa.frac(v) * pw;
    let py = |v: f64| TOP + (1.0 - ya.frac(v)) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(&plot.title));
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for v in xa.ticks() {
        let x = px(v);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{v:.0e}</text>"#, TOP + ph + 16.0);
    }
    for v in ya.ticks() {
        let y = py(v);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.0e}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 16.0, esc(&plot.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        TOP + ph / 2.0,
        esc(&plot.y_label)
    );
    let series = |f: &dyn Fn(&ResultRow) -> Option<f64>| -> Vec<(f64, f64)> {
        rows.iter()
            .filter_map(|r| f(r).filter(|v| *v > 0.0).map(|v| (px(x_of(r)), py(v))))
            .collect()
    };
    polyline(&mut s, &series(&|r| Some(r.first_order)), r##"stroke="#888" stroke-dasharray="4 3""##);
    polyline(&mut s, &series(&|r| Some(r.expansion)), r##"stroke="#1f4e9c" stroke-width="1.5""##);
    let mc = series(&|r| r.mc.map(|m| m.0));
    polyline(&mut s, &mc, r##"stroke="#c0392b" stroke-width="1""##);
    for (x, y) in &mc {
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="#c0392b"/>"##);
    }
    let legend = [
        ("first order", r##"stroke="#888" stroke-dasharray="4 3""##),
        ("expansion", r##"stroke="#1f4e9c" stroke-width="1.5""##),
        ("simulation", r##"stroke="#c0392b""##),
    ];
    for (i, (name, style)) in legend.iter().enumerate() {
        let y = TOP + 16.0 + 16.0 * i as f64;
        let x = LEFT + pw - 130.0;
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" {style}/>"#, x + 24.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{name}</text>"#, x + 30.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(path: &Path, plot: &Plot, rows: &[ResultRow]) -> Result<()> {
    fs::write(path, render_svg(plot, rows)).map_err(|e| CliError::io(path, e))
}
