//! Exact maximum flow with the inclusion-minimal minimum cut.
//!
//! Dinic's blocking-flow algorithm over an exact scalar. Capacities may be
//! `Infinity`; a source-sink path made only of infinite arcs is reported as
//! unbounded rather than approximated.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::VertexSet;
use crate::scalar::{Extended, Scalar};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc<T = Rat> {
    pub from: usize,
    pub to: usize,
    pub capacity: Extended<T>,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork<T = Rat> {
    nodes: usize,
    arcs: Vec<Arc<T>>,
    source: usize,
    sink: usize,
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes && source != sink);
        FlowNetwork {
            nodes,
            arcs: Vec::new(),
            source,
            sink,
        }
    }

    /// Appends an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Extended<T>) -> usize {
        assert!(from < self.nodes && to < self.nodes);
        debug_assert!(!matches!(&capacity, Extended::Finite(c) if c.is_negative()));
        self.arcs.push(Arc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn set_capacity(&mut self, arc: usize, capacity: Extended<T>) {
        self.arcs[arc].capacity = capacity;
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlowResult<T = Rat> {
    pub value: T,
    /// Nodes reachable from the source in the residual graph.
    pub source_side: VertexSet,
    pub arc_flows: Vec<T>,
}

impl<T: Scalar> MaxFlowResult<T> {
    /// Nodes from which the sink is reachable in the residual graph.
    pub fn reaches_sink(&self, net: &FlowNetwork<T>) -> Vec<bool> {
        let mut reach = vec![false; net.nodes];
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); net.nodes];
        for (idx, a) in net.arcs.iter().enumerate() {
            // residual u->v exists for forward slack or backward flow
            let flow = &self.arc_flows[idx];
            if a.capacity > Extended::Finite(flow.clone()) {
                into[a.to].push(a.from);
            }
            if flow.is_positive() {
                into[a.from].push(a.to);
            }
        }
        let mut queue = VecDeque::from([net.sink]);
        reach[net.sink] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &into[v] {
                if !reach[u] {
                    reach[u] = true;
                    queue.push_back(u);
                }
            }
        }
        reach
    }

    /// Total capacity of arcs leaving `source_side`.
    pub fn cut_capacity(&self, net: &FlowNetwork<T>) -> Extended<T> {
        cut_capacity(net, &self.source_side)
    }
}

pub fn cut_capacity<T: Scalar>(net: &FlowNetwork<T>, side: &VertexSet) -> Extended<T> {
    let mut total = T::zero();
    for a in &net.arcs {
        if side.contains(a.from) && !side.contains(a.to) {
            match &a.capacity {
                Extended::Finite(c) => total += c,
                Extended::Infinity => return Extended::Infinity,
            }
        }
    }
    Extended::Finite(total)
}

struct Residual<'a, T> {
    net: &'a FlowNetwork<T>,
    /// outgoing residual half-edges per node: (arc index, forward?)
    adj: Vec<Vec<(usize, bool)>>,
    flow: Vec<T>,
    level: Vec<usize>,
    next: Vec<usize>,
}

const UNSEEN: usize = usize::MAX;

impl<'a, T: Scalar> Residual<'a, T> {
    fn new(net: &'a FlowNetwork<T>) -> Self {
        let mut adj = vec![Vec::new(); net.nodes];
        for (idx, a) in net.arcs.iter().enumerate() {
            if a.from == a.to {
                continue;
            }
            adj[a.from].push((idx, true));
            adj[a.to].push((idx, false));
        }
        Residual {
            net,
            adj,
            flow: vec![T::zero(); net.arcs.len()],
            level: vec![UNSEEN; net.nodes],
            next: vec![0; net.nodes],
        }
    }

    fn slack(&self, arc: usize, forward: bool) -> Extended<T> {
        if forward {
            self.net.arcs[arc].capacity.minus(&self.flow[arc])
        } else {
            Extended::Finite(self.flow[arc].clone())
        }
    }

    fn head(&self, arc: usize, forward: bool) -> usize {
        let a = &self.net.arcs[arc];
        if forward {
            a.to
        } else {
            a.from
        }
    }

    fn bfs_levels(&mut self) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNSEEN);
        let s = self.net.source;
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for i in 0..self.adj[u].len() {
                let (arc, fwd) = self.adj[u][i];
                let v = self.head(arc, fwd);
                if self.level[v] == UNSEEN && self.slack(arc, fwd).is_positive() {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[self.net.sink] != UNSEEN
    }

    /// Pushes one augmenting path along the level graph. Returns zero when
    /// `u` is blocked.
    fn augment(&mut self, u: usize, limit: Extended<T>) -> Result<T> {
        if u == self.net.sink {
            return match limit {
                Extended::Finite(v) => Ok(v),
                Extended::Infinity => Err(Error::UnboundedFlow),
            };
        }
        while self.next[u] < self.adj[u].len() {
            let (arc, fwd) = self.adj[u][self.next[u]];
            let v = self.head(arc, fwd);
            if self.level[v] == self.level[u] + 1 {
                let slack = self.slack(arc, fwd);
                if slack.is_positive() {
                    let pushed = self.augment(v, limit.clone().min(slack))?;
                    if pushed.is_positive() {
                        if fwd {
                            self.flow[arc] += &pushed;
                        } else {
                            self.flow[arc] -= &pushed;
                        }
                        return Ok(pushed);
                    }
                }
            }
            self.next[u] += 1;
        }
        Ok(T::zero())
    }

    fn source_side(&self) -> VertexSet {
        let s = self.net.source;
        let mut seen = VertexSet::singleton(self.net.nodes, s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(arc, fwd) in &self.adj[u] {
                let v = self.head(arc, fwd);
                if !seen.contains(v) && self.slack(arc, fwd).is_positive() {
                    seen.insert(v);
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Maximum flow value, per-arc flows, and the minimal min-cut source side.
pub fn max_flow<T: Scalar>(net: &FlowNetwork<T>) -> Result<MaxFlowResult<T>> {
    let mut res = Residual::new(net);
    let mut value = T::zero();
    while res.bfs_levels() {
        res.next.iter_mut().for_each(|x| *x = 0);
        loop {
            let pushed = res.augment(net.source, Extended::Infinity)?;
            if pushed.is_zero() {
                break;
            }
            value += &pushed;
        }
    }
    let source_side = res.source_side();
    Ok(MaxFlowResult {
        value,
        source_side,
        arc_flows: res.flow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExtRat, Rat};
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn fin(v: i64) -> ExtRat {
        ExtRat::Finite(Rat::from_fraction(v, 1))
    }

    fn r(v: i64) -> Rat {
        Rat::from_fraction(v, 1)
    }

    #[test]
    fn single_path() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, fin(1));
        net.add_arc(1, 2, fin(1));
        let res = max_flow(&net).unwrap();
        assert_eq!(res.value, r(1));
        assert_eq!(res.source_side, VertexSet::singleton(3, 0));
    }

    #[test]
    fn two_paths_unique_flow() {
        // s=0, a=1, b=2, t=3
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, fin(3));
        net.add_arc(0, 2, fin(3));
        net.add_arc(1, 3, fin(2));
        net.add_arc(2, 3, fin(5));
        let res = max_flow(&net).unwrap();
        assert_eq!(res.value, r(5));
        assert_eq!(res.arc_flows, vec![r(2), r(3), r(2), r(3)]);
    }

    #[test]
    fn empty_network() {
        let net: FlowNetwork<Rat> = FlowNetwork::new(2, 0, 1);
        let res = max_flow(&net).unwrap();
        assert_eq!(res.value, r(0));
        assert_eq!(res.source_side, VertexSet::singleton(2, 0));
    }

    #[test]
    fn unbounded_path_is_an_error() {
        let mut net: FlowNetwork<Rat> = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, ExtRat::Infinity);
        net.add_arc(1, 2, ExtRat::Infinity);
        assert_eq!(max_flow(&net).unwrap_err(), Error::UnboundedFlow);
    }

    #[test]
    fn infinite_middle_arcs() {
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, ExtRat::Finite(Rat::from_fraction(7, 3)));
        net.add_arc(1, 2, ExtRat::Infinity);
        net.add_arc(2, 3, fin(2));
        let res = max_flow(&net).unwrap();
        assert_eq!(res.value, r(2));
        assert_eq!(res.source_side, VertexSet::from_vertices(4, [0, 1, 2]));
        assert_eq!(res.reaches_sink(&net), vec![false, false, false, true]);
    }

    /// Random network with the fixed layered shape used by the solver plus a
    /// few extra arcs.
    fn arb_network() -> impl Strategy<Value = FlowNetwork<Rat>> {
        (3usize..7).prop_flat_map(|nodes| {
            let arc = (
                0..nodes,
                0..nodes,
                prop_oneof![(0i64..6, 1i64..4).prop_map(Some), Just(None)],
            );
            proptest::collection::vec(arc, 0..14).prop_map(move |arcs| {
                let mut net = FlowNetwork::new(nodes, 0, nodes - 1);
                for (u, v, cap) in arcs {
                    if u == v || v == 0 || u == nodes - 1 {
                        continue;
                    }
                    // keep source and sink arcs finite so the flow is bounded
                    let cap = match cap {
                        Some((a, b)) => ExtRat::Finite(Rat::from_fraction(a, b)),
                        None if u != 0 && v != nodes - 1 => ExtRat::Infinity,
                        None => ExtRat::Finite(Rat::from_fraction(1, 1)),
                    };
                    net.add_arc(u, v, cap);
                }
                net
            })
        })
    }

    proptest! {
        #[test]
        fn duality_and_minimal_cut(net in arb_network()) {
            let res = max_flow(&net).unwrap();
            let n = net.nodes();
            // capacity and conservation
            let mut balance = vec![Rat::from_usize(0); n];
            for (a, f) in net.arcs().iter().zip(&res.arc_flows) {
                prop_assert!(!f.is_negative());
                prop_assert!(a.capacity >= ExtRat::Finite(f.clone()));
                balance[a.from] -= f;
                balance[a.to] += f;
            }
            for (v, b) in balance.iter().enumerate() {
                if v == net.source() {
                    prop_assert_eq!(b.clone(), -res.value.clone());
                } else if v == net.sink() {
                    prop_assert_eq!(b.clone(), res.value.clone());
                } else {
                    prop_assert!(b.is_zero());
                }
            }
            prop_assert_eq!(res.cut_capacity(&net), ExtRat::Finite(res.value.clone()));
            // brute force over every s-t cut: none is cheaper, and every
            // minimum cut's source side contains the reported one
            let inner: Vec<usize> = (0..n).filter(|&v| v != net.source() && v != net.sink()).collect();
            for mask in 0u32..(1 << inner.len()) {
                let mut side = VertexSet::singleton(n, net.source());
                for (bit, &v) in inner.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        side.insert(v);
                    }
                }
                let cap = cut_capacity(&net, &side);
                prop_assert!(cap >= ExtRat::Finite(res.value.clone()));
                if cap == ExtRat::Finite(res.value.clone()) {
                    prop_assert!(res.source_side.is_subset(&side));
                }
            }
            // determinism
            prop_assert_eq!(max_flow(&net).unwrap(), res);
        }
    }
}
