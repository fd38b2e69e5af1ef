use std::f64::consts::PI;

use rand::RngCore;

use super::rng::{chunk_rng, exp1, open01};
use crate::copulas::{Copula, EvFamily};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::marginals::ParetoMarginal;

pub const DEFAULT_CHUNK: usize = 1 << 16;

#[derive(Clone, Debug)]
enum Dependence {
    Independent,
    /// Stable index `a = 1/φ`, `a < 1`.
    Gumbel { a: f64 },
    Comonotone,
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub n: usize,
    pub seed: u64,
    pub copula: Copula,
    pub marginal: ParetoMarginal,
    /// Samples per deterministic work unit.
    pub chunk: usize,
    pub exec: Execution,
}

impl SimulationConfig {
    pub fn new(n: usize, seed: u64, copula: Copula, marginal: ParetoMarginal) -> Self {
        Self {
            n,
            seed,
            copula,
            marginal,
            chunk: DEFAULT_CHUNK,
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    fn dependence(&self) -> Result<Dependence> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.chunk == 0 {
            return Err(Error::Config("chunk must be at least 1".into()));
        }
        match &self.copula {
            Copula::Independence => Ok(Dependence::Independent),
            Copula::ExtremeValue(p) => match p.family() {
                EvFamily::Independence => Ok(Dependence::Independent),
                EvFamily::Gumbel { phi: 1.0 } => Ok(Dependence::Independent),
                EvFamily::Gumbel { phi } => Ok(Dependence::Gumbel { a: 1.0 / phi }),
                EvFamily::Comonotone => Ok(Dependence::Comonotone),
                EvFamily::Custom => Err(Error::Unsupported(
                    "no sampler for a custom Pickands function".into(),
                )),
            },
            c @ Copula::GumbelBarnett { .. } => {
                Err(Error::Unsupported(format!("no sampler for {}", c.name())))
            }
        }
    }

    pub(crate) fn chunks(&self) -> usize {
        self.n.div_ceil(self.chunk)
    }

    /// Run `f` on every chunk of pairs and return the results in chunk order.
    pub(crate) fn map_chunks<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[(f64, f64)]) -> T + Sync + Send,
    {
        let dep = self.dependence()?;
        let s = self.marginal.scale();
        let alpha = self.marginal.alpha();
        Ok(self.exec.map_indexed(self.chunks(), |k| {
            let len = self.chunk.min(self.n - k * self.chunk);
            let mut rng = chunk_rng(self.seed, k as u64);
            let buf: Vec<(f64, f64)> = (0..len)
                .map(|_| draw(&dep, &mut rng, s, alpha))
                .collect();
            f(&buf)
        }))
    }
}

/// Log of a positive `a`-stable variate with Laplace transform
/// `exp(−s^a)`, by the sine-ratio representation.
fn log_positive_stable<R: RngCore>(rng: &mut R, a: f64) -> f64 {
    let theta = PI * open01(rng);
    let e = exp1(rng);
    (a * theta).sin().ln() - (theta.sin().ln()) / a
        + (1.0 - a) / a * (((1.0 - a) * theta).sin().ln() - e.ln())
}

/// `X = F←(1 − U)` written through `−ln U` to keep the far tail exact.
fn tail_draw(s: f64, alpha: f64, neg_log_u: f64) -> f64 {
    s * (neg_log_u / alpha).exp_m1()
}

fn draw<R: RngCore>(dep: &Dependence, rng: &mut R, s: f64, alpha: f64) -> (f64, f64) {
    match *dep {
        Dependence::Independent => (
            tail_draw(s, alpha, exp1(rng)),
            tail_draw(s, alpha, exp1(rng)),
        ),
        Dependence::Gumbel { a } => {
            let ls = log_positive_stable(rng, a);
            // −ln U = (E/S)^a
            let mut w = || (a * (exp1(rng).ln() - ls)).exp();
            let (w1, w2) = (w(), w());
            (tail_draw(s, alpha, w1), tail_draw(s, alpha, w2))
        }
        Dependence::Comonotone => {
            let x = tail_draw(s, alpha, exp1(rng));
            (x, x)
        }
    }
}

/// All `n` pairs, materialised in chunk order.
pub fn sample_pairs(cfg: &SimulationConfig) -> Result<Vec<(f64, f64)>> {
    Ok(cfg.map_chunks(|c| c.to_vec())?.concat())
}

/// All `n` sums `X + Y`, in chunk order.
pub fn sample_sums(cfg: &SimulationConfig) -> Result<Vec<f64>> {
    Ok(cfg
        .map_chunks(|c| c.iter().map(|(x, y)| x + y).collect::<Vec<_>>())?
        .concat())
}
