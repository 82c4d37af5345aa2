//! Problem instances, vertex sets and the cut predicates over them.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};
use crate::Rat;

pub type Vertex = usize;

/// An unordered vertex pair, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    lo: Vertex,
    hi: Vertex,
}

impl Pair {
    pub(crate) const MIN: Pair = Pair { lo: 0, hi: 0 };
    pub(crate) const MAX: Pair = Pair {
        lo: usize::MAX,
        hi: usize::MAX,
    };

    /// Normalizes the endpoint order. Returns `None` when `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Pair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Pair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<T = Rat> {
    pub u: Vertex,
    pub v: Vertex,
    pub cost: T,
}

impl<T> Edge<T> {
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

/// A subset of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn singleton(n: usize, v: Vertex) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        s.0.insert_range(..);
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.union_with(&other.0);
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.ones()
    }

    /// True iff exactly one endpoint of `(i, j)` lies in the set.
    pub fn cuts(&self, i: Vertex, j: Vertex) -> bool {
        self.contains(i) != self.contains(j)
    }

    pub fn cuts_pair(&self, p: Pair) -> bool {
        self.cuts(p.lo, p.hi)
    }
}

/// True iff `s` contains exactly one of `i`, `j`.
pub fn cuts_pair(s: &VertexSet, i: Vertex, j: Vertex) -> bool {
    debug_assert!(i != j);
    s.cuts(i, j)
}

/// Edge indices with exactly one endpoint in `s`.
pub fn cutting_edges<T: Scalar>(s: &VertexSet, inst: &PcsfInstance<T>) -> Vec<usize> {
    inst.edges
        .iter()
        .enumerate()
        .filter(|(_, e)| s.cuts(e.u, e.v))
        .map(|(idx, _)| idx)
        .collect()
}

/// An undirected graph with nonnegative edge costs and a sparse penalty map
/// over unordered vertex pairs. Absent pairs have penalty zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcsfInstance<T = Rat> {
    n: usize,
    edges: Vec<Edge<T>>,
    penalties: BTreeMap<Pair, T>,
}

impl<T: Scalar> PcsfInstance<T> {
    pub fn builder(n: usize) -> InstanceBuilder<T> {
        InstanceBuilder {
            n,
            edges: Vec::new(),
            pairs: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Result<&Edge<T>> {
        self.edges.get(idx).ok_or(Error::DanglingEdge(idx))
    }

    /// Positive-penalty pairs in lexicographic order.
    pub fn penalties(&self) -> &BTreeMap<Pair, T> {
        &self.penalties
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.penalties.keys().copied()
    }

    pub fn penalty(&self, p: Pair) -> T {
        self.penalties.get(&p).cloned().unwrap_or_else(T::zero)
    }

    pub fn total_penalty(&self) -> T {
        sum(self.penalties.values())
    }

    /// `π(Q)`; pairs absent from the map contribute zero.
    pub fn penalty_of<'a>(&self, pairs: impl IntoIterator<Item = &'a Pair>) -> T {
        let mut total = T::zero();
        for p in pairs {
            if let Some(v) = self.penalties.get(p) {
                total += v;
            }
        }
        total
    }

    pub fn find_edge(&self, a: Vertex, b: Vertex) -> Option<usize> {
        let key = Pair::new(a, b)?;
        self.edges
            .iter()
            .position(|e| Pair::new(e.u, e.v) == Some(key))
    }

    /// Same graph, new penalty map. Zero entries are dropped.
    pub fn with_penalties(&self, penalties: BTreeMap<Pair, T>) -> Self {
        PcsfInstance {
            n: self.n,
            edges: self.edges.clone(),
            penalties: penalties
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

pub struct InstanceBuilder<T> {
    n: usize,
    edges: Vec<(Vertex, Vertex, T)>,
    pairs: Vec<(Vertex, Vertex, T)>,
}

impl<T: Scalar> InstanceBuilder<T> {
    pub fn edge(mut self, u: Vertex, v: Vertex, cost: T) -> Self {
        self.edges.push((u, v, cost));
        self
    }

    pub fn pair(mut self, i: Vertex, j: Vertex, penalty: T) -> Self {
        self.pairs.push((i, j, penalty));
        self
    }

    /// Validates and normalizes. Parallel edges collapse to the cheapest one,
    /// which keeps the position of the first edge between those endpoints.
    pub fn build(self) -> Result<PcsfInstance<T>> {
        let n = self.n;
        let check = |v: Vertex| {
            if v < n {
                Ok(())
            } else {
                Err(Error::VertexOutOfRange { vertex: v, n })
            }
        };

        let mut edges: Vec<Edge<T>> = Vec::with_capacity(self.edges.len());
        let mut slot: BTreeMap<Pair, usize> = BTreeMap::new();
        for (u, v, cost) in self.edges {
            check(u)?;
            check(v)?;
            let key = Pair::new(u, v).ok_or(Error::SelfLoop(u))?;
            if cost.is_negative() {
                return Err(Error::Negative(cost.to_string()));
            }
            match slot.get(&key) {
                Some(&idx) => {
                    if cost < edges[idx].cost {
                        edges[idx].cost = cost;
                    }
                }
                None => {
                    slot.insert(key, edges.len());
                    edges.push(Edge { u, v, cost });
                }
            }
        }

        let mut seen = std::collections::BTreeSet::new();
        let mut penalties = BTreeMap::new();
        for (i, j, penalty) in self.pairs {
            check(i)?;
            check(j)?;
            let key = Pair::new(i, j).ok_or(Error::DegeneratePair(i))?;
            if penalty.is_negative() {
                return Err(Error::Negative(penalty.to_string()));
            }
            if !seen.insert(key) {
                return Err(Error::DuplicatePair(key));
            }
            if !penalty.is_zero() {
                penalties.insert(key, penalty);
            }
        }

        Ok(PcsfInstance {
            n,
            edges,
            penalties,
        })
    }
}
