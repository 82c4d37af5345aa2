//! Randomized comparison of the iterated solver against the exact oracle.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generate::{generate_with, GenParams};
use crate::ipcsf::ipcsf_solve;
use crate::oracle::{exact_solve, verify_solution, Violation, MAX_ORACLE_EDGES, MAX_ORACLE_PAIRS};
use crate::scalar::Scalar;
use crate::{Instance, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioTestConfig {
    pub trials: usize,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_pairs: usize,
    pub max_cost: u64,
    pub max_penalty: u64,
    pub seed: u64,
}

impl Default for RatioTestConfig {
    fn default() -> Self {
        RatioTestConfig {
            trials: 1000,
            max_nodes: 8,
            max_edges: 12,
            max_pairs: 6,
            max_cost: 10,
            max_penalty: 10,
            seed: 0,
        }
    }
}

/// The instance for trial `index`: its own stream of the master seed, so the
/// result does not depend on which thread runs it.
pub fn trial_instance(cfg: &RatioTestConfig, index: usize) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let nodes = rng.gen_range(2..=cfg.max_nodes);
    let slots = nodes * (nodes - 1) / 2;
    let edges = rng.gen_range(0..=cfg.max_edges.min(slots));
    let pairs = rng.gen_range(1..=cfg.max_pairs.min(slots).max(1));
    generate_with(
        &mut rng,
        &GenParams {
            nodes,
            edges,
            pairs,
            max_cost: cfg.max_cost,
            max_penalty: cfg.max_penalty,
        },
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialReport {
    pub index: usize,
    pub nodes: usize,
    pub cost: Rat,
    pub optimum: Rat,
    /// `cost / optimum`, 1 when both are zero.
    pub ratio: Rat,
    pub bound: Rat,
    pub violations: Vec<Violation>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.ratio <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub trials: Vec<TrialReport>,
}

impl RatioReport {
    pub fn failures(&self) -> impl Iterator<Item = &TrialReport> {
        self.trials.iter().filter(|t| !t.passed())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Highest ratio, earliest trial on ties.
    pub fn worst(&self) -> Option<&TrialReport> {
        self.trials
            .iter()
            .fold(None, |acc: Option<&TrialReport>, t| match acc {
                Some(w) if w.ratio >= t.ratio => Some(w),
                _ => Some(t),
            })
    }
}

impl fmt::Display for RatioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.failures() {
            write!(
                f,
                "FAIL trial {} n={} cost {} optimum {} ratio {} bound {}",
                t.index, t.nodes, t.cost, t.optimum, t.ratio, t.bound
            )?;
            for v in &t.violations {
                write!(f, "; {v}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "trials {} failures {}",
            self.trials.len(),
            self.failures().count()
        )?;
        match self.worst() {
            Some(w) => writeln!(
                f,
                " worst-ratio {} (trial {}, n={}, cost {}, optimum {})",
                w.ratio, w.index, w.nodes, w.cost, w.optimum
            ),
            None => writeln!(f, " worst-ratio -"),
        }
    }
}

fn run_trial(cfg: &RatioTestConfig, index: usize) -> Result<TrialReport> {
    let inst = trial_instance(cfg, index)?;
    let n = inst.n();
    let (sol, _) = ipcsf_solve(&inst)?;
    let opt = exact_solve(&inst)?;
    let mut violations = verify_solution(&inst, &sol);
    let ratio = if opt.cost.is_zero() {
        if !sol.cost.is_zero() {
            violations.push(Violation::CostMismatch {
                claimed: sol.cost.to_string(),
                actual: "0 (optimum)".into(),
            });
        }
        Rat::from_usize(1)
    } else {
        sol.cost.clone() / &opt.cost
    };
    Ok(TrialReport {
        index,
        nodes: n,
        cost: sol.cost,
        optimum: opt.cost,
        ratio,
        bound: Rat::from_usize(2) - Rat::from_fraction(1, n as i64),
        violations,
    })
}

/// Runs the trials in parallel; the report lists them by index.
pub fn run_ratio_test(cfg: &RatioTestConfig) -> Result<RatioReport> {
    if cfg.max_nodes < 2 {
        return Err(Error::Argument("max nodes must be at least 2".into()));
    }
    let max_simple = cfg.max_nodes * (cfg.max_nodes - 1) / 2;
    let (edges, pairs) = (cfg.max_edges.min(max_simple), cfg.max_pairs.min(max_simple));
    if edges > MAX_ORACLE_EDGES || pairs > MAX_ORACLE_PAIRS {
        return Err(Error::OracleLimit {
            edges,
            pairs,
            max_edges: MAX_ORACLE_EDGES,
            max_pairs: MAX_ORACLE_PAIRS,
        });
    }
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport { trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize, max_nodes: usize) -> RatioTestConfig {
        RatioTestConfig {
            trials,
            max_nodes,
            seed: 42,
            ..RatioTestConfig::default()
        }
    }

    #[test]
    fn zero_trials() {
        let report = run_ratio_test(&cfg(0, 8)).unwrap();
        assert!(report.passed());
        assert!(report.worst().is_none());
        assert_eq!(report.to_string(), "trials 0 failures 0 worst-ratio -\n");
    }

    #[test]
    fn two_vertex_family_is_optimal() {
        let report = run_ratio_test(&cfg(200, 2)).unwrap();
        assert!(report.passed());
        assert_eq!(report.worst().unwrap().ratio, Rat::from_usize(1));
    }

    #[test]
    fn small_campaign_within_bound() {
        let report = run_ratio_test(&cfg(100, 6)).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.worst().unwrap().ratio <= Rat::from_fraction(11, 6));
    }

    #[test]
    fn guard_and_arguments() {
        let big = RatioTestConfig {
            max_edges: 30,
            ..cfg(1, 10)
        };
        assert!(matches!(
            run_ratio_test(&big),
            Err(Error::OracleLimit { .. })
        ));
        assert!(matches!(
            run_ratio_test(&cfg(1, 1)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn trials_are_independent_of_scheduling() {
        let c = cfg(5, 8);
        let a: Vec<Instance> = (0..5).map(|i| trial_instance(&c, i).unwrap()).collect();
        let b: Vec<Instance> = (0..5)
            .rev()
            .map(|i| trial_instance(&c, i).unwrap())
            .collect();
        assert!(a.iter().eq(b.iter().rev()));
        assert_ne!(a[0], a[1]);
    }
}
