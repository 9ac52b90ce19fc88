//! Seeded Monte Carlo audits of the weak laws and the VC-theorem for thickets.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{mix, uniform_deviation, ProbSpace, TestTree};
use crate::combin::binomial_prefix_sum;
use crate::dims::{thicket_dimension, thicket_shatter, RankValue};
use crate::rational::{self, Rational};
use crate::setsystem::{Bits, SetSystem};
use crate::{Error, Result};

/// Guard for floating point bound comparisons.
const GUARD: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub epsilon: Rational,
    pub trials: u64,
    pub seed: u64,
    /// Sample i.i.d. tuples instead of test trees.
    pub tuple: bool,
}

impl ExperimentConfig {
    fn check(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::input("need n >= 1 and trials >= 1"));
        }
        if !self.epsilon.is_positive() {
            return Err(Error::input("epsilon must be positive"));
        }
        Ok(())
    }

    fn tree<'a>(&self, space: &'a ProbSpace, trial: u64) -> TestTree<'a> {
        let seed = mix(self.seed ^ mix(trial));
        if self.tuple {
            TestTree::tuple(space, self.n, seed).expect("n checked")
        } else {
            TestTree::new(space, self.n, seed).expect("n checked")
        }
    }
}

/// One CSV row per trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub n: usize,
    pub epsilon: String,
    pub deviation: String,
    pub exceeded: bool,
}

/// Where `ρ̂(n)` came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoEstimate {
    pub value: u128,
    /// True for the exact shatter function, false for the polynomial bound.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: &'static str,
    pub sampler: &'static str,
    pub n: usize,
    pub epsilon: String,
    pub trials: u64,
    pub seed: u64,
    pub exceedances: u64,
    /// `exceedances / trials`, exact.
    pub empirical: String,
    pub empirical_value: f64,
    pub bound: f64,
    pub bound_vacuous: bool,
    /// Three binomial standard errors of the empirical rate.
    pub slack: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoEstimate>,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

/// `1 / (4 n ε²)`.
pub fn weak_law_bound(n: usize, epsilon: &Rational) -> f64 {
    let denom = Rational::from_integer((4 * n).into()) * epsilon * epsilon;
    rational::to_f64(&denom.recip())
}

/// `ρ_F(n)` exactly for small inputs, else `sum_{i<=k} C(n, i)` with `k`
/// the thicket dimension.
pub fn rho_estimate(f: &SetSystem, n: usize) -> RhoEstimate {
    if f.universe() <= 12 && n <= 12 {
        return RhoEstimate {
            value: thicket_shatter(f, n),
            exact: true,
        };
    }
    let value = match thicket_dimension(f) {
        RankValue::NegInfinity => 0,
        RankValue::Finite(k) => binomial_prefix_sum(n as u64, k as i64),
    };
    RhoEstimate { value, exact: false }
}

/// Counts trials with `|test(x̄, S) - μ(S)| >= ε`.
pub fn run_weak_law(space: &ProbSpace, s: Bits, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.check()?;
    space.check_subset(s)?;
    let mu = space.measure(s);
    let rows: Vec<TrialRow> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let dev = (cfg.tree(space, trial).estimate(s) - &mu).abs();
            row(cfg, trial, &dev, dev >= cfg.epsilon)
        })
        .collect();
    let bound = weak_law_bound(cfg.n, &cfg.epsilon);
    let mut report = summarize("weak_law", cfg, rows, bound);
    report.measure = Some(rational::format(&mu));
    Ok(report)
}

/// Counts trials with `sup_{S ∈ F} |test(x̄, S) - μ(S)| > ε` against
/// `min(1, 8 ρ̂(n) exp(-n ε² / 32))`.
pub fn run_vc_theorem(space: &ProbSpace, f: &SetSystem, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.check()?;
    if f.universe() != space.len() {
        return Err(Error::input(format!(
            "family lives on {} points, space has {}",
            f.universe(),
            space.len()
        )));
    }
    let rows: Vec<TrialRow> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let dev = uniform_deviation(&cfg.tree(space, trial), f, space).expect("universe checked");
            row(cfg, trial, &dev, dev > cfg.epsilon)
        })
        .collect();
    let rho = rho_estimate(f, cfg.n);
    let eps = rational::to_f64(&cfg.epsilon);
    let bound = 8.0 * rho.value as f64 * (-(cfg.n as f64) * eps * eps / 32.0).exp();
    let mut report = summarize("vc_theorem", cfg, rows, bound);
    report.rho = Some(rho);
    Ok(report)
}

fn row(cfg: &ExperimentConfig, trial: u64, dev: &Rational, exceeded: bool) -> TrialRow {
    TrialRow {
        trial,
        n: cfg.n,
        epsilon: rational::format(&cfg.epsilon),
        deviation: rational::format(dev),
        exceeded,
    }
}

fn summarize(experiment: &'static str, cfg: &ExperimentConfig, rows: Vec<TrialRow>, raw_bound: f64) -> ExperimentReport {
    let exceedances = rows.iter().filter(|r| r.exceeded).count() as u64;
    let empirical = rational::from_ratio(exceedances as i64, cfg.trials as i64);
    let p = rational::to_f64(&empirical);
    let slack = 3.0 * (p * (1.0 - p) / cfg.trials as f64).sqrt();
    let bound = raw_bound.min(1.0);
    ExperimentReport {
        experiment,
        sampler: if cfg.tuple { "tuple" } else { "test_tree" },
        n: cfg.n,
        epsilon: rational::format(&cfg.epsilon),
        trials: cfg.trials,
        seed: cfg.seed,
        exceedances,
        empirical: if empirical.is_zero() {
            "0".into()
        } else {
            rational::format(&empirical)
        },
        empirical_value: p,
        bound,
        bound_vacuous: raw_bound >= 1.0,
        slack,
        pass: p <= bound + slack + GUARD,
        measure: None,
        rho: None,
        rows,
    }
}
