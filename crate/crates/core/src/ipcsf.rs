//! Iterated solver: rerun the base solver with the penalties of the pairs it
//! gave up on set to zero, and keep the cheapest solution found on the way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{Pair, PcsfInstance};
use crate::pcsf3::{pcsf3_solve_with, Pcsf3Output, SolverOptions};
use crate::scalar::Scalar;
use crate::solution::Solution;
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// This level's own base-solver solution.
    Current,
    /// The solution returned from the deeper levels.
    Deeper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord<T = Rat> {
    pub depth: usize,
    /// Pairs penalized by the base solver at this level.
    pub q1: BTreeSet<Pair>,
    /// Penalized set of the deeper candidate, including zeroed pairs.
    pub q2: Option<BTreeSet<Pair>>,
    pub cost1: T,
    pub cost2: Option<T>,
    pub chosen: Branch,
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &BTreeSet<Pair>) -> fmt::Result {
    let parts: Vec<String> = pairs
        .iter()
        .map(|p| format!("{}-{}", p.lo() + 1, p.hi() + 1))
        .collect();
    write!(f, "[{}]", parts.join(" "))
}

impl<T: Scalar> fmt::Display for IterationRecord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} q1 ", self.depth)?;
        write_pairs(f, &self.q1)?;
        write!(f, " cost1 {}", self.cost1)?;
        match &self.cost2 {
            Some(c) => write!(f, " cost2 {c}")?,
            None => write!(f, " cost2 -")?,
        }
        let chosen = match self.chosen {
            Branch::Current => 1,
            Branch::Deeper => 2,
        };
        write!(f, " chosen {chosen}")
    }
}

#[derive(Clone, Debug)]
pub struct IpcsfOutput<T = Rat> {
    pub solution: Solution<T>,
    /// Ascending by depth.
    pub records: Vec<IterationRecord<T>>,
    /// Base-solver runs, one per depth, on the progressively reduced instances.
    pub levels: Vec<Pcsf3Output<T>>,
}

/// Same graph, with the penalties of `q1` dropped.
pub fn reduce_instance<T: Scalar>(
    inst: &PcsfInstance<T>,
    q1: &BTreeSet<Pair>,
) -> Result<PcsfInstance<T>> {
    if let Some(p) = q1.iter().find(|p| !inst.penalties().contains_key(p)) {
        return Err(Error::UnknownPair(*p));
    }
    let kept: BTreeMap<Pair, T> = inst
        .penalties()
        .iter()
        .filter(|(p, _)| !q1.contains(p))
        .map(|(p, v)| (*p, v.clone()))
        .collect();
    Ok(inst.with_penalties(kept))
}

pub fn ipcsf_solve<T: Scalar>(
    inst: &PcsfInstance<T>,
) -> Result<(Solution<T>, Vec<IterationRecord<T>>)> {
    let out = ipcsf_solve_with(inst, &SolverOptions::default())?;
    Ok((out.solution, out.records))
}

pub fn ipcsf_solve_with<T: Scalar>(
    inst: &PcsfInstance<T>,
    opts: &SolverOptions,
) -> Result<IpcsfOutput<T>> {
    let max_depth = inst.penalties().len();
    let mut levels: Vec<Pcsf3Output<T>> = Vec::new();
    let mut current = inst.clone();
    loop {
        let out = pcsf3_solve_with(&current, opts)?;
        let q1 = out.solution.penalized.clone();
        levels.push(out);
        if q1.is_empty() {
            break;
        }
        if levels.len() > max_depth {
            return Err(Error::Internal(format!(
                "recursion deeper than {max_depth} levels"
            )));
        }
        current = reduce_instance(&current, &q1)?;
    }

    // Candidates are compared under the original penalties, carrying every
    // pair zeroed above them as penalized.
    let mut zeroed: Vec<BTreeSet<Pair>> = Vec::with_capacity(levels.len());
    let mut acc = BTreeSet::new();
    for level in &levels {
        zeroed.push(acc.clone());
        acc.extend(level.solution.penalized.iter().copied());
    }
    let lift = |d: usize| -> Result<Solution<T>> {
        let sol = &levels[d].solution;
        let penalized = sol.penalized.iter().chain(&zeroed[d]).copied();
        Solution::new(inst, sol.forest.iter().copied(), penalized)
    };

    let last = levels.len() - 1;
    let mut best = lift(last)?;
    let mut records = vec![IterationRecord {
        depth: last,
        q1: levels[last].solution.penalized.clone(),
        q2: None,
        cost1: best.cost.clone(),
        cost2: None,
        chosen: Branch::Current,
    }];
    for d in (0..last).rev() {
        let candidate = lift(d)?;
        if !candidate.penalized.is_subset(&best.penalized) {
            return Err(Error::Internal(format!(
                "penalized set at depth {d} not contained in deeper one"
            )));
        }
        let record = IterationRecord {
            depth: d,
            q1: levels[d].solution.penalized.clone(),
            q2: Some(best.penalized.clone()),
            cost1: candidate.cost.clone(),
            cost2: Some(best.cost.clone()),
            chosen: if candidate.cost <= best.cost {
                Branch::Current
            } else {
                Branch::Deeper
            },
        };
        if record.chosen == Branch::Current {
            best = candidate;
        }
        records.push(record);
    }
    records.reverse();
    Ok(IpcsfOutput {
        solution: best,
        records,
        levels,
    })
}
