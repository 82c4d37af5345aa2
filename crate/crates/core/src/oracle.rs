//! Brute-force exact solver, solution checker, and the per-pair cost split
//! between the base solver's coloring and an optimal solution.

use std::fmt;

use crate::coloring::DynamicColoring;
use crate::error::{Error, Result};
use crate::instance::{Pair, PcsfInstance};
use crate::moat::{MoatFamily, UnionFind};
use crate::scalar::Scalar;
use crate::solution::Solution;
use crate::Rat;

pub const MAX_ORACLE_EDGES: usize = 22;
pub const MAX_ORACLE_PAIRS: usize = 16;

struct Search<'a, T> {
    inst: &'a PcsfInstance<T>,
    chosen: Vec<usize>,
    best: Option<(T, Vec<usize>)>,
}

impl<T: Scalar> Search<'_, T> {
    fn leaf(&mut self, uf: &UnionFind, edge_cost: &T) {
        let mut cost = edge_cost.clone();
        for (p, pen) in self.inst.penalties() {
            if uf.find(p.lo()) != uf.find(p.hi()) {
                cost += pen;
            }
        }
        let better = match &self.best {
            None => true,
            Some((c, f)) => cost < *c || (cost == *c && self.chosen < *f),
        };
        if better {
            self.best = Some((cost, self.chosen.clone()));
        }
    }

    fn dfs(&mut self, next: usize, uf: &UnionFind, edge_cost: &T) {
        if let Some((c, _)) = &self.best {
            if edge_cost > c {
                return;
            }
        }
        if next == self.inst.edges().len() {
            self.leaf(uf, edge_cost);
            return;
        }
        let edge = &self.inst.edges()[next];
        if uf.find(edge.u) != uf.find(edge.v) {
            let mut with = uf.clone();
            with.union(edge.u, edge.v);
            self.chosen.push(next);
            self.dfs(next + 1, &with, &(edge_cost.clone() + &edge.cost));
            self.chosen.pop();
        }
        self.dfs(next + 1, uf, edge_cost);
    }
}

/// Minimum-cost solution by enumerating acyclic edge subsets. Among optimal
/// forests the lexicographically smallest edge-index list wins.
pub fn exact_solve<T: Scalar>(inst: &PcsfInstance<T>) -> Result<Solution<T>> {
    let (edges, pairs) = (inst.edges().len(), inst.penalties().len());
    if edges > MAX_ORACLE_EDGES || pairs > MAX_ORACLE_PAIRS {
        return Err(Error::OracleLimit {
            edges,
            pairs,
            max_edges: MAX_ORACLE_EDGES,
            max_pairs: MAX_ORACLE_PAIRS,
        });
    }
    let mut search = Search {
        inst,
        chosen: Vec::new(),
        best: None,
    };
    search.dfs(0, &UnionFind::new(inst.n()), &T::zero());
    let (_, forest) = search.best.expect("the empty forest is always a candidate");
    let mut uf = UnionFind::new(inst.n());
    for &e in &forest {
        uf.union(inst.edges()[e].u, inst.edges()[e].v);
    }
    let unserved: Vec<Pair> = inst
        .pairs()
        .filter(|p| uf.find(p.lo()) != uf.find(p.hi()))
        .collect();
    Solution::new(inst, forest, unserved)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingEdge(usize),
    UnknownPair(Pair),
    Cycle(usize),
    Unserved(Pair),
    CostMismatch { claimed: String, actual: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEdge(e) => write!(f, "edge index {e} does not exist"),
            Violation::UnknownPair(p) => write!(f, "penalized pair {p} has no positive penalty"),
            Violation::Cycle(e) => write!(f, "edge {e} closes a cycle"),
            Violation::Unserved(p) => write!(f, "pair {p} is neither connected nor penalized"),
            Violation::CostMismatch { claimed, actual } => {
                write!(f, "claimed cost {claimed} but solution costs {actual}")
            }
        }
    }
}

/// Every way `sol` fails to be a feasible solution of `inst` with the stated
/// cost. Empty means valid.
pub fn verify_solution<T: Scalar>(inst: &PcsfInstance<T>, sol: &Solution<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut uf = UnionFind::new(inst.n());
    let mut actual = T::zero();
    for &e in &sol.forest {
        match inst.edges().get(e) {
            None => out.push(Violation::DanglingEdge(e)),
            Some(edge) => {
                actual += &edge.cost;
                if uf.union(edge.u, edge.v).is_none() {
                    out.push(Violation::Cycle(e));
                }
            }
        }
    }
    for p in &sol.penalized {
        match inst.penalties().get(p) {
            Some(v) => actual += v,
            None => out.push(Violation::UnknownPair(*p)),
        }
    }
    for p in inst.pairs() {
        if !sol.penalized.contains(&p) && uf.find(p.lo()) != uf.find(p.hi()) {
            out.push(Violation::Unserved(p));
        }
    }
    if actual != sol.cost {
        out.push(Violation::CostMismatch {
            claimed: sol.cost.to_string(),
            actual: actual.to_string(),
        });
    }
    out
}

/// Coloring mass split by how each pair is treated by an optimal solution
/// (first letter: connected or paid) and by the base solver (second letter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics<T = Rat> {
    pub cc: T,
    pub cp: T,
    pub pc: T,
    pub pp: T,
    /// Part of `cp` assigned by moats crossing exactly one optimal edge.
    pub cp1: T,
    /// Part of `cp` assigned by moats crossing several optimal edges.
    pub cp2: T,
    pub lower_bound: T,
    /// Base-solver cost over optimal cost; 1 when both are zero.
    pub ratio: T,
}

/// `alg` is the base solver's solution; its penalized set decides the second
/// letter of each pair's class.
pub fn compute_diagnostics<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    coloring: &DynamicColoring<T>,
    alg: &Solution<T>,
    opt: &Solution<T>,
) -> Result<Diagnostics<T>> {
    let q1 = &alg.penalized;
    let mut uf = UnionFind::new(inst.n());
    for &e in &opt.forest {
        let edge = inst.edge(e)?;
        uf.union(edge.u, edge.v);
    }
    let opt_degree: Vec<usize> = family
        .moats()
        .iter()
        .map(|m| {
            opt.forest
                .iter()
                .filter(|&&e| m.members.cuts(inst.edges()[e].u, inst.edges()[e].v))
                .count()
        })
        .collect();

    let zero = T::zero;
    let (mut cc, mut cp, mut pc, mut pp, mut cp1, mut cp2) =
        (zero(), zero(), zero(), zero(), zero(), zero());
    for p in inst.pairs() {
        let y = coloring.y_ij(p);
        let connected = uf.find(p.lo()) == uf.find(p.hi());
        match (connected, q1.contains(&p)) {
            (true, false) => cc += &y,
            (true, true) => {
                cp += &y;
                for m in family.moats() {
                    let part = coloring.y_sij(m.id, p);
                    if opt_degree[m.id] == 1 {
                        cp1 += &part;
                    } else {
                        cp2 += &part;
                    }
                }
            }
            (false, false) => pc += &y,
            (false, true) => pp += &y,
        }
    }
    let lower_bound = cc.clone() + &cp + &cp2 + &pc + &pp;
    let ratio = if opt.cost.is_zero() {
        if alg.cost.is_zero() {
            T::one()
        } else {
            return Err(Error::Precondition(
                "positive cost against a zero optimum".into(),
            ));
        }
    } else {
        alg.cost.clone() / &opt.cost
    };
    Ok(Diagnostics {
        cc,
        cp,
        pc,
        pp,
        cp1,
        cp2,
        lower_bound,
        ratio,
    })
}
