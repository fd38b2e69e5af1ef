use std::io::{self, Write};

use super::sampler::SimulationConfig;
use crate::error::{domain, Error, Result};

const BRACKET_Z: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct MCEstimate {
    pub point: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: Option<u64>,
    /// Distribution-free bracket, for order statistics.
    pub interval: Option<(f64, f64)>,
}

impl MCEstimate {
    fn proportion(hits: usize, n: usize, seed: Option<u64>) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            point: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            n,
            seed,
            interval: None,
        }
    }
}

/// `(1/n) Σ 1{Xᵢ + Yᵢ > t}` with the binomial standard error.
pub fn empirical_tailprob(pairs: &[(f64, f64)], t: f64) -> Result<MCEstimate> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let hits = pairs.iter().filter(|(x, y)| x + y > t).count();
    Ok(MCEstimate::proportion(hits, pairs.len(), None))
}

/// Exceedance frequencies for every `t`, streamed chunk by chunk without
/// materialising the sample.
pub fn tailprob_sweep(cfg: &SimulationConfig, ts: &[f64]) -> Result<Vec<MCEstimate>> {
    if ts.iter().any(|t| t.is_nan()) {
        return Err(Error::Config("NaN threshold".into()));
    }
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| ts[i]).collect();
    let per_chunk = cfg.map_chunks(|chunk| {
        // hits[j] counts sums exceeding sorted[j]; filled as a difference array
        let mut diff = vec![0usize; sorted.len() + 1];
        for (x, y) in chunk {
            let z = x + y;
            diff[sorted.partition_point(|&t| t < z)] += 1;
        }
        diff
    })?;
    let mut total = vec![0usize; sorted.len() + 1];
    for d in per_chunk {
        for (a, b) in total.iter_mut().zip(d) {
            *a += b;
        }
    }
    // sums with partition index k exceed sorted[..k]
    let mut hits = vec![0usize; sorted.len()];
    let mut acc = 0;
    for j in (0..sorted.len()).rev() {
        acc += total[j + 1];
        hits[j] = acc;
    }
    let mut out = vec![MCEstimate::proportion(0, 1, None); ts.len()];
    for (j, &i) in order.iter().enumerate() {
        out[i] = MCEstimate::proportion(hits[j], cfg.n, Some(cfg.seed));
    }
    Ok(out)
}

/// `Z_{⌊nq⌋,n}` by selection, with the order statistics at
/// `⌊nq⌋ ∓ 3√(nq(1−q))` as a bracket. Reorders `z`.
pub fn empirical_var(z: &mut [f64], q: f64) -> Result<MCEstimate> {
    let n = z.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("q", q, "0 < q < 1"));
    }
    let k = (n as f64 * q).floor() as usize;
    if k < 1 || k > n {
        return Err(Error::OrderStatistic { index: k, n });
    }
    let half = BRACKET_Z * (n as f64 * q * (1.0 - q)).sqrt();
    let k_lo = ((k as f64 - half).floor() as usize).max(1);
    let k_hi = ((k as f64 + half).ceil() as usize).min(n);
    let (left, mid, right) = z.select_nth_unstable_by(k - 1, f64::total_cmp);
    let point = *mid;
    let lo = if k_lo < k {
        *left.select_nth_unstable_by(k_lo - 1, f64::total_cmp).1
    } else {
        point
    };
    let hi = if k_hi > k {
        *right.select_nth_unstable_by(k_hi - k - 1, f64::total_cmp).1
    } else {
        point
    };
    Ok(MCEstimate {
        point,
        stderr: (hi - lo) / (2.0 * BRACKET_Z),
        n,
        seed: None,
        interval: Some((lo, hi)),
    })
}

/// `empirical_var` at several levels on one sample of sums.
pub fn var_sweep(cfg: &SimulationConfig, qs: &[f64]) -> Result<Vec<MCEstimate>> {
    let mut z = super::sample_sums(cfg)?;
    qs.iter()
        .map(|&q| {
            let mut e = empirical_var(&mut z, q)?;
            e.seed = Some(cfg.seed);
            Ok(e)
        })
        .collect()
}

/// Header `x,y`, one pair per line, 17 significant digits.
pub fn write_pairs_csv<W: Write>(mut w: W, pairs: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "x,y")?;
    for (x, y) in pairs {
        writeln!(w, "{x:.16e},{y:.16e}")?;
    }
    w.flush()
}
