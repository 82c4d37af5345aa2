//! The moat-growing base solver.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::coloring::{
    assert_coloring_valid, find_delta_e_with, find_delta_p, reduce_tight_pairs, tight_moats,
    DynamicColoring,
};
use crate::error::{Error, Result};
use crate::instance::{Pair, PcsfInstance};
use crate::moat::MoatFamily;
use crate::scalar::{Extended, Scalar};
use crate::solution::Solution;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent<T = Rat> {
    /// Every listed moat grew by `delta`.
    Grow {
        delta: T,
        active: Vec<usize>,
    },
    EdgeBought {
        edge: usize,
        u: usize,
        v: usize,
    },
    Merge {
        a: usize,
        b: usize,
        merged: usize,
    },
    Deactivate(usize),
}

/// Event log of one solver run, starting from `n` active singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTrace<T = Rat> {
    pub n: usize,
    pub events: Vec<TraceEvent<T>>,
}

impl<T: Scalar> GrowthTrace<T> {
    pub fn new(n: usize) -> Self {
        GrowthTrace {
            n,
            events: Vec::new(),
        }
    }

    /// Rebuilds the moat family by applying the events in order.
    pub fn replay(&self) -> Result<MoatFamily<T>> {
        let mut fam = MoatFamily::new(self.n);
        for ev in &self.events {
            match ev {
                TraceEvent::Grow { delta, active } => {
                    if fam.active_ids() != *active {
                        return Err(Error::Internal(format!(
                            "trace grows {active:?} but active moats are {:?}",
                            fam.active_ids()
                        )));
                    }
                    fam.grow(delta);
                }
                TraceEvent::EdgeBought { .. } => {}
                TraceEvent::Merge { a, b, merged } => {
                    let id = fam.merge(*a, *b)?;
                    if id != *merged {
                        return Err(Error::Internal(format!(
                            "merge produced {id}, trace says {merged}"
                        )));
                    }
                }
                TraceEvent::Deactivate(id) => fam.deactivate(*id)?,
            }
        }
        Ok(fam)
    }

    pub fn bought_edges(&self) -> Vec<usize> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::EdgeBought { edge, .. } => Some(*edge),
                _ => None,
            })
            .collect()
    }
}

/// One event per line. Moat ids are 0-based, vertices 1-based.
impl<T: Scalar> fmt::Display for GrowthTrace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "singletons {}", self.n)?;
        for ev in &self.events {
            match ev {
                TraceEvent::Grow { delta, active } => {
                    write!(f, "grow {delta}")?;
                    for id in active {
                        write!(f, " {id}")?;
                    }
                    writeln!(f)?;
                }
                TraceEvent::EdgeBought { edge, u, v } => {
                    writeln!(f, "buy {edge} {} {}", u + 1, v + 1)?
                }
                TraceEvent::Merge { a, b, merged } => writeln!(f, "merge {a} {b} {merged}")?,
                TraceEvent::Deactivate(id) => writeln!(f, "deactivate {id}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Re-check coloring validity right after every growth step.
    pub assert_validity: bool,
    /// Keep the tightness verdict of every moat after every iteration.
    pub record_tightness: bool,
}

impl Default for SolverOptions {
    /// Validity checks are on in debug builds and when `PCSF_ASSERT=1`.
    fn default() -> Self {
        SolverOptions {
            assert_validity: cfg!(debug_assertions)
                || std::env::var("PCSF_ASSERT").is_ok_and(|v| v == "1"),
            record_tightness: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Pcsf3Output<T = Rat> {
    pub solution: Solution<T>,
    pub family: MoatFamily<T>,
    pub coloring: DynamicColoring<T>,
    pub trace: GrowthTrace<T>,
    /// Edges bought during growth, before pruning.
    pub grown_forest: Vec<usize>,
    pub iterations: usize,
    pub validity_checks: usize,
    /// Per iteration, the tightness of every moat existing at that point.
    pub tightness_log: Vec<Vec<bool>>,
}

pub fn pcsf3_solve<T: Scalar>(inst: &PcsfInstance<T>) -> Result<Pcsf3Output<T>> {
    pcsf3_solve_with(inst, &SolverOptions::default())
}

pub fn pcsf3_solve_with<T: Scalar>(
    inst: &PcsfInstance<T>,
    opts: &SolverOptions,
) -> Result<Pcsf3Output<T>> {
    let n = inst.n();
    let mut fam = MoatFamily::new(n);
    let mut trace = GrowthTrace::new(n);
    let mut colored = vec![T::zero(); inst.edges().len()];
    let mut grown_forest = Vec::new();
    let mut tightness_log = Vec::new();
    let mut iterations = 0;
    let mut validity_checks = 0;

    while fam.has_active() {
        iterations += 1;
        if iterations > 2 * n {
            return Err(Error::Internal(format!(
                "more than {} growth iterations",
                2 * n
            )));
        }
        let delta = match find_delta_e_with(inst, &fam, &colored)
            .min(Extended::Finite(find_delta_p(inst, &fam)?))
        {
            Extended::Finite(d) => d,
            Extended::Infinity => unreachable!("penalty bound is finite"),
        };

        for (e, edge) in inst.edges().iter().enumerate() {
            let (su, sv) = (fam.component_of(edge.u), fam.component_of(edge.v));
            if su == sv {
                continue;
            }
            let t = fam.moats()[su].active as usize + fam.moats()[sv].active as usize;
            colored[e] += delta.clone() * T::from_usize(t);
        }
        trace.events.push(TraceEvent::Grow {
            delta: delta.clone(),
            active: fam.active_ids(),
        });
        fam.grow(&delta);
        if opts.assert_validity {
            assert_coloring_valid(inst, &fam)?;
            validity_checks += 1;
        }

        let mut progressed = false;
        for (e, edge) in inst.edges().iter().enumerate() {
            if fam.same_component(edge.u, edge.v) || colored[e] != edge.cost {
                continue;
            }
            let (a, b) = (fam.component_of(edge.u), fam.component_of(edge.v));
            let merged = fam.merge(a, b)?;
            grown_forest.push(e);
            trace.events.push(TraceEvent::EdgeBought {
                edge: e,
                u: edge.u,
                v: edge.v,
            });
            trace.events.push(TraceEvent::Merge { a, b, merged });
            progressed = true;
        }

        let tight = tight_moats(inst, &fam)?;
        for id in fam.active_ids() {
            if tight[id] {
                fam.deactivate(id)?;
                trace.events.push(TraceEvent::Deactivate(id));
                progressed = true;
            }
        }
        if opts.record_tightness {
            tightness_log.push(tight);
        }
        if !progressed {
            return Err(Error::Internal(
                "growth step neither merged nor deactivated".into(),
            ));
        }
    }

    let (q, coloring) = reduce_tight_pairs(inst, &fam)?;
    let connect: Vec<Pair> = inst.pairs().filter(|p| !q.contains(p)).collect();
    let forest = prune_forest(inst, &grown_forest, connect)?;
    let solution = Solution::new(inst, forest, q)?;
    Ok(Pcsf3Output {
        solution,
        family: fam,
        coloring,
        trace,
        grown_forest,
        iterations,
        validity_checks,
        tightness_log,
    })
}

/// Union of the tree paths joining each pair inside `forest`.
pub fn prune_forest<T: Scalar>(
    inst: &PcsfInstance<T>,
    forest: &[usize],
    pairs: impl IntoIterator<Item = Pair>,
) -> Result<Vec<usize>> {
    let n = inst.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in forest {
        let edge = inst.edge(e)?;
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
    }
    let mut keep = BTreeSet::new();
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    for p in pairs {
        let (s, t) = (p.lo(), p.hi());
        via.iter_mut().for_each(|x| *x = None);
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return Err(Error::Internal(format!(
                "pair {p} is not connected by the grown forest"
            )));
        }
        let mut x = t;
        while let Some((prev, e)) = via[x] {
            keep.insert(e);
            x = prev;
        }
    }
    Ok(keep.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Instance, Rat};

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_fraction(n, d)
    }

    fn pair(a: usize, b: usize) -> Pair {
        Pair::new(a, b).unwrap()
    }

    #[test]
    fn prune_examples() {
        let path: Instance = PcsfInstance::builder(3)
            .edge(0, 1, r(1, 1))
            .edge(1, 2, r(1, 1))
            .build()
            .unwrap();
        assert_eq!(prune_forest(&path, &[0, 1], [pair(0, 1)]).unwrap(), vec![0]);
        assert!(prune_forest(&path, &[0, 1], []).unwrap().is_empty());

        let star: Instance = PcsfInstance::builder(4)
            .edge(0, 1, r(1, 1))
            .edge(0, 2, r(1, 1))
            .edge(0, 3, r(1, 1))
            .build()
            .unwrap();
        assert_eq!(
            prune_forest(&star, &[0, 1, 2], [pair(1, 2)]).unwrap(),
            vec![0, 1]
        );
        assert!(matches!(
            prune_forest(&star, &[0], [pair(1, 2)]),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn edge_cheaper_than_penalty() {
        let inst: Instance = PcsfInstance::builder(2)
            .edge(0, 1, r(10, 1))
            .pair(0, 1, r(100, 1))
            .build()
            .unwrap();
        let out = pcsf3_solve(&inst).unwrap();
        assert_eq!(out.solution.forest, vec![0]);
        assert!(out.solution.penalized.is_empty());
        assert_eq!(out.solution.cost, r(10, 1));
        assert_eq!(out.family.get(0).unwrap().duration, r(5, 1));
        assert_eq!(out.trace.replay().unwrap().moats(), out.family.moats());
    }

    #[test]
    fn penalty_cheaper_than_edge() {
        let inst: Instance = PcsfInstance::builder(2)
            .edge(0, 1, r(10, 1))
            .pair(0, 1, r(4, 1))
            .build()
            .unwrap();
        let out = pcsf3_solve(&inst).unwrap();
        assert!(out.solution.forest.is_empty());
        assert_eq!(out.solution.penalized, BTreeSet::from([pair(0, 1)]));
        assert_eq!(out.solution.cost, r(4, 1));
        assert!(out.grown_forest.is_empty());
    }

    #[test]
    fn middle_vertex_is_tight_from_the_start() {
        let inst: Instance = PcsfInstance::builder(3)
            .edge(0, 1, r(1, 1))
            .edge(1, 2, r(1, 1))
            .pair(0, 2, r(3, 2))
            .build()
            .unwrap();
        let out = pcsf3_solve(&inst).unwrap();
        assert_eq!(out.solution.penalized, BTreeSet::from([pair(0, 2)]));
        assert!(out.solution.forest.is_empty());
        assert_eq!(out.solution.cost, r(3, 2));
        assert_eq!(out.iterations, 2);
        assert_eq!(
            out.trace.events[..2],
            [
                TraceEvent::Grow {
                    delta: r(0, 1),
                    active: vec![0, 1, 2]
                },
                TraceEvent::Deactivate(1)
            ]
        );
        assert_eq!(out.family.get(0).unwrap().duration, r(3, 4));
    }

    #[test]
    fn trace_text() {
        let inst: Instance = PcsfInstance::builder(2)
            .edge(0, 1, r(10, 1))
            .pair(0, 1, r(100, 1))
            .build()
            .unwrap();
        let text = pcsf3_solve(&inst).unwrap().trace.to_string();
        assert_eq!(
            text,
            "singletons 2\ngrow 5 0 1\nbuy 0 1 2\nmerge 0 1 2\ndeactivate 2\n"
        );
    }

    #[test]
    fn no_vertices() {
        let inst: Instance = PcsfInstance::builder(0).build().unwrap();
        let out = pcsf3_solve(&inst).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.solution.cost, r(0, 1));
    }
}
