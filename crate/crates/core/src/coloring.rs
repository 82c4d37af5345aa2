//! Static and dynamic coloring.
//!
//! A static coloring is the vector of moat durations `y_S`. It is *valid* when
//! those durations can be distributed over the pairs each moat cuts without
//! any pair receiving more than its penalty. Validity, the largest safe growth
//! step, moat tightness and the dynamic coloring itself are all read off a
//! max-flow in the set/pair network:
//!
//! ```text
//! source --y_S--> moat S --inf--> pair (i,j) --pi_ij--> sink    (S cuts (i,j))
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::flow::{max_flow, FlowNetwork, MaxFlowResult};
use crate::instance::{Pair, PcsfInstance};
use crate::moat::MoatFamily;
use crate::scalar::{Extended, Scalar};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoatNode {
    pub moat: usize,
    pub node: usize,
    pub source_arc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairNode {
    pub pair: Pair,
    pub node: usize,
    pub sink_arc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutArc {
    pub moat: usize,
    pub pair: Pair,
    pub arc: usize,
}

/// The set/pair flow network plus the maps from moats and pairs to nodes.
///
/// Node 0 is the source, then one node per included moat (ascending id), one
/// per positive-penalty pair (lexicographic), and the sink last. Arcs are
/// ordered source arcs, moat-to-pair arcs, sink arcs.
#[derive(Clone, Debug)]
pub struct SetPairNetwork<T = Rat> {
    pub network: FlowNetwork<T>,
    pub moat_nodes: Vec<MoatNode>,
    pub pair_nodes: Vec<PairNode>,
    pub cut_arcs: Vec<CutArc>,
}

impl<T: Scalar> SetPairNetwork<T> {
    pub fn moat_node(&self, moat: usize) -> Option<&MoatNode> {
        self.moat_nodes.iter().find(|m| m.moat == moat)
    }

    /// Human-readable description of a source side, for diagnostics.
    fn describe_side(&self, res: &MaxFlowResult<T>) -> String {
        let moats: Vec<String> = self
            .moat_nodes
            .iter()
            .filter(|m| res.source_side.contains(m.node))
            .map(|m| format!("S{}", m.moat))
            .collect();
        let pairs: Vec<String> = self
            .pair_nodes
            .iter()
            .filter(|p| res.source_side.contains(p.node))
            .map(|p| p.pair.to_string())
            .collect();
        format!(
            "{{source; moats [{}]; pairs [{}]}}",
            moats.join(" "),
            pairs.join(" ")
        )
    }
}

/// Moats that get a node: positive duration or currently active.
fn network_moats<T: Scalar>(family: &MoatFamily<T>, extra: Option<usize>) -> Vec<usize> {
    family
        .moats()
        .iter()
        .filter(|m| m.active || m.duration.is_positive() || Some(m.id) == extra)
        .map(|m| m.id)
        .collect()
}

fn build_with<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    extra: Option<usize>,
) -> SetPairNetwork<T> {
    let moats = network_moats(family, extra);
    let pairs: Vec<(Pair, &T)> = inst.penalties().iter().map(|(p, v)| (*p, v)).collect();
    let source = 0;
    let sink = 1 + moats.len() + pairs.len();
    let mut network = FlowNetwork::new(sink + 1, source, sink);

    let mut moat_nodes = Vec::with_capacity(moats.len());
    for (k, &id) in moats.iter().enumerate() {
        let node = 1 + k;
        let y = family.moats()[id].duration.clone();
        let source_arc = network.add_arc(source, node, Extended::Finite(y));
        moat_nodes.push(MoatNode {
            moat: id,
            node,
            source_arc,
        });
    }
    let pair_base = 1 + moats.len();
    let mut cut_arcs = Vec::new();
    for m in &moat_nodes {
        let members = &family.moats()[m.moat].members;
        for (k, (p, _)) in pairs.iter().enumerate() {
            if members.cuts_pair(*p) {
                let arc = network.add_arc(m.node, pair_base + k, Extended::Infinity);
                cut_arcs.push(CutArc {
                    moat: m.moat,
                    pair: *p,
                    arc,
                });
            }
        }
    }
    let mut pair_nodes = Vec::with_capacity(pairs.len());
    for (k, (p, pen)) in pairs.iter().enumerate() {
        let node = pair_base + k;
        let sink_arc = network.add_arc(node, sink, Extended::Finite((*pen).clone()));
        pair_nodes.push(PairNode {
            pair: *p,
            node,
            sink_arc,
        });
    }
    SetPairNetwork {
        network,
        moat_nodes,
        pair_nodes,
        cut_arcs,
    }
}

pub fn build_set_pair_graph<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
) -> SetPairNetwork<T> {
    build_with(inst, family, None)
}

/// `Σ_{S: e ∈ δ(S)} y_S`, the colored length of edge `e`.
pub fn edge_coloring<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    e: usize,
) -> Result<T> {
    let edge = inst.edge(e)?;
    let mut total = T::zero();
    for m in family.moats() {
        if m.members.cuts(edge.u, edge.v) {
            total += &m.duration;
        }
    }
    Ok(total)
}

/// Largest uniform growth of the active moats that overfills no edge, given
/// the colored length of each edge.
pub fn find_delta_e_with<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    colored: &[T],
) -> Extended<T> {
    let mut best = Extended::Infinity;
    for (e, edge) in inst.edges().iter().enumerate() {
        let (su, sv) = (family.component_of(edge.u), family.component_of(edge.v));
        if su == sv {
            continue;
        }
        let t = family.moats()[su].active as usize + family.moats()[sv].active as usize;
        if t == 0 {
            continue;
        }
        let remaining = (edge.cost.clone() - &colored[e]) / T::from_usize(t);
        best = best.min(Extended::Finite(remaining));
    }
    best
}

pub fn find_delta_e<T: Scalar>(inst: &PcsfInstance<T>, family: &MoatFamily<T>) -> Extended<T> {
    let colored: Vec<T> = (0..inst.edges().len())
        .map(|e| edge_coloring(inst, family, e).expect("edge index in range"))
        .collect();
    find_delta_e_with(inst, family, &colored)
}

/// Largest `Δ` such that growing every active moat by `Δ` keeps the static
/// coloring valid.
///
/// Starts from the sink-cut upper bound and repeatedly lowers it using the
/// number `k` of active moats on the source side of the minimal min-cut.
/// `k` strictly decreases, so at most `|active|` corrections happen.
pub fn find_delta_p<T: Scalar>(inst: &PcsfInstance<T>, family: &MoatFamily<T>) -> Result<T> {
    let active: Vec<usize> = family.active_ids();
    if active.is_empty() {
        return Err(Error::Precondition(
            "find_delta_p needs an active moat".into(),
        ));
    }
    let mut spn = build_set_pair_graph(inst, family);
    let total_y = family.total_duration();
    let count = T::from_usize(active.len());
    let mut delta = (inst.total_penalty() - &total_y) / &count;
    let active_nodes: Vec<MoatNode> = spn
        .moat_nodes
        .iter()
        .filter(|m| family.moats()[m.moat].active)
        .cloned()
        .collect();

    let mut prev_k = active.len() + 1;
    loop {
        for m in &active_nodes {
            let cap = family.moats()[m.moat].duration.clone() + &delta;
            spn.network
                .set_capacity(m.source_arc, Extended::Finite(cap));
        }
        let res = max_flow(&spn.network)?;
        let target = count.clone() * &delta + &total_y;
        if res.value == target {
            if delta.is_negative() {
                return Err(Error::Internal(format!("negative growth bound {delta}")));
            }
            return Ok(delta);
        }
        let k = active_nodes
            .iter()
            .filter(|m| res.source_side.contains(m.node))
            .count();
        if k == 0 || k >= prev_k {
            // only possible when the coloring was invalid to begin with
            return Err(Error::InvalidColoring {
                flow: res.value.to_string(),
                total: target.to_string(),
                cut: spn.describe_side(&res),
            });
        }
        delta -= (target - &res.value) / T::from_usize(k);
        prev_k = k;
    }
}

/// Literal tightness test: raise the moat's source capacity by one and see
/// whether any more flow gets through.
pub fn check_set_is_tight<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    moat: usize,
) -> Result<bool> {
    let m = family.get(moat)?;
    let mut spn = build_with(inst, family, Some(moat));
    let node = spn
        .moat_node(moat)
        .ok_or_else(|| Error::Internal(format!("moat {moat} missing from network")))?
        .clone();
    spn.network.set_capacity(
        node.source_arc,
        Extended::Finite(m.duration.clone() + T::one()),
    );
    let res = max_flow(&spn.network)?;
    Ok(res.value <= family.total_duration())
}

/// Tightness verdict for every moat in the family from a single max-flow.
///
/// With a maximum flow in hand, raising one source capacity admits more flow
/// iff that moat reaches the sink in the residual graph, i.e. iff some pair it
/// cuts does. Also fails if the coloring is currently invalid.
pub fn tight_moats<T: Scalar>(inst: &PcsfInstance<T>, family: &MoatFamily<T>) -> Result<Vec<bool>> {
    let spn = build_set_pair_graph(inst, family);
    let res = max_flow(&spn.network)?;
    let total = family.total_duration();
    if res.value != total {
        return Err(Error::InvalidColoring {
            flow: res.value.to_string(),
            total: total.to_string(),
            cut: spn.describe_side(&res),
        });
    }
    let reach = res.reaches_sink(&spn.network);
    let open_pairs: Vec<Pair> = spn
        .pair_nodes
        .iter()
        .filter(|p| reach[p.node])
        .map(|p| p.pair)
        .collect();
    Ok(family
        .moats()
        .iter()
        .map(|m| !open_pairs.iter().any(|&p| m.members.cuts_pair(p)))
        .collect())
}

/// An assignment of moat durations to the pairs they cut.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DynamicColoring<T = Rat> {
    /// `y_Sij`, positive entries only.
    assignment: BTreeMap<(usize, Pair), T>,
    /// `y_ij` for every positive-penalty pair.
    pair_total: BTreeMap<Pair, T>,
}

impl<T: Scalar> DynamicColoring<T> {
    /// Builds a coloring from explicit `y_Sij` entries; pair totals are
    /// derived. Every positive-penalty pair of `inst` gets a total.
    pub fn from_assignment(
        inst: &PcsfInstance<T>,
        entries: impl IntoIterator<Item = (usize, Pair, T)>,
    ) -> Self {
        let mut c = DynamicColoring {
            assignment: BTreeMap::new(),
            pair_total: inst.pairs().map(|p| (p, T::zero())).collect(),
        };
        for (moat, pair, y) in entries {
            if y.is_zero() {
                continue;
            }
            *c.pair_total.entry(pair).or_insert_with(T::zero) += &y;
            *c.assignment.entry((moat, pair)).or_insert_with(T::zero) += &y;
        }
        c
    }

    pub fn assignment(&self) -> &BTreeMap<(usize, Pair), T> {
        &self.assignment
    }

    pub fn pair_totals(&self) -> &BTreeMap<Pair, T> {
        &self.pair_total
    }

    pub fn y_sij(&self, moat: usize, pair: Pair) -> T {
        self.assignment
            .get(&(moat, pair))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn y_ij(&self, pair: Pair) -> T {
        self.pair_total.get(&pair).cloned().unwrap_or_else(T::zero)
    }

    pub fn moat_total(&self, moat: usize) -> T {
        let mut total = T::zero();
        for ((_, _), y) in self.assignment.range((moat, Pair::MIN)..=(moat, Pair::MAX)) {
            total += y;
        }
        total
    }

    pub fn is_tight(&self, inst: &PcsfInstance<T>, pair: Pair) -> bool {
        self.y_ij(pair) == inst.penalty(pair)
    }

    /// Positive-penalty pairs whose total equals their penalty.
    pub fn tight_pairs(&self, inst: &PcsfInstance<T>) -> BTreeSet<Pair> {
        inst.penalties()
            .iter()
            .filter(|(p, pen)| &self.y_ij(**p) == *pen)
            .map(|(p, _)| *p)
            .collect()
    }

    fn shift(&mut self, moat: usize, from: Pair, to: Pair, amount: &T) {
        let src = self
            .assignment
            .get_mut(&(moat, from))
            .expect("positive entry");
        *src -= amount;
        if src.is_zero() {
            self.assignment.remove(&(moat, from));
        }
        *self.assignment.entry((moat, to)).or_insert_with(T::zero) += amount;
        *self.pair_total.get_mut(&from).expect("pair total") -= amount;
        *self.pair_total.get_mut(&to).expect("pair total") += amount;
    }

    /// Checks the defining constraints against the static coloring: entries
    /// only on cut pairs, per-moat conservation, pair totals within penalty.
    pub fn validate(&self, inst: &PcsfInstance<T>, family: &MoatFamily<T>) -> Result<()> {
        let mut totals: BTreeMap<Pair, T> = BTreeMap::new();
        for (&(moat, pair), y) in &self.assignment {
            let m = family.get(moat)?;
            if !m.members.cuts_pair(pair) {
                return Err(Error::Internal(format!(
                    "moat {moat} assigned to uncut pair {pair}"
                )));
            }
            if !y.is_positive() {
                return Err(Error::Internal(format!(
                    "non-positive entry for ({moat}, {pair})"
                )));
            }
            *totals.entry(pair).or_insert_with(T::zero) += y;
        }
        for m in family.moats() {
            if self.moat_total(m.id) != m.duration {
                return Err(Error::Internal(format!(
                    "moat {} distributes {} of {}",
                    m.id,
                    self.moat_total(m.id),
                    m.duration
                )));
            }
        }
        for p in inst.pairs() {
            let total = totals.remove(&p).unwrap_or_else(T::zero);
            if total != self.y_ij(p) {
                return Err(Error::Internal(format!("pair {p} total mismatch")));
            }
            if total > inst.penalty(p) {
                return Err(Error::Internal(format!("pair {p} exceeds its penalty")));
            }
        }
        if let Some((p, _)) = totals.into_iter().next() {
            return Err(Error::UnknownPair(p));
        }
        Ok(())
    }

    /// First `(tight pair, moat, non-tight pair)` with positive assignment
    /// from the moat to the tight pair while the moat also cuts the non-tight
    /// one. Scans tight pairs lexicographically, moats by id, then candidate
    /// pairs lexicographically.
    pub fn find_reducible(
        &self,
        inst: &PcsfInstance<T>,
        family: &MoatFamily<T>,
    ) -> Option<(Pair, usize, Pair)> {
        let slack: Vec<Pair> = inst
            .penalties()
            .iter()
            .filter(|(p, pen)| &self.y_ij(**p) < *pen)
            .map(|(p, _)| *p)
            .collect();
        if slack.is_empty() {
            return None;
        }
        for tight in self.tight_pairs(inst) {
            for m in family.moats() {
                if !self.y_sij(m.id, tight).is_positive() {
                    continue;
                }
                if let Some(&other) = slack.iter().find(|&&p| m.members.cuts_pair(p)) {
                    return Some((tight, m.id, other));
                }
            }
        }
        None
    }

    pub fn is_minimal(&self, inst: &PcsfInstance<T>, family: &MoatFamily<T>) -> bool {
        self.find_reducible(inst, family).is_none()
    }
}

/// Reads the dynamic coloring off a max-flow of the set/pair network, or
/// reports the coloring invalid when the flow falls short of `Σ y_S`.
pub fn extract_dynamic_coloring<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
) -> Result<DynamicColoring<T>> {
    let spn = build_set_pair_graph(inst, family);
    let res = max_flow(&spn.network)?;
    let total = family.total_duration();
    if res.value != total {
        return Err(Error::InvalidColoring {
            flow: res.value.to_string(),
            total: total.to_string(),
            cut: spn.describe_side(&res),
        });
    }
    let coloring = DynamicColoring {
        assignment: spn
            .cut_arcs
            .iter()
            .filter(|c| res.arc_flows[c.arc].is_positive())
            .map(|c| ((c.moat, c.pair), res.arc_flows[c.arc].clone()))
            .collect(),
        pair_total: spn
            .pair_nodes
            .iter()
            .map(|p| (p.pair, res.arc_flows[p.sink_arc].clone()))
            .collect(),
    };
    Ok(coloring)
}

/// Fails with the offending cut when the static coloring is invalid.
pub fn assert_coloring_valid<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
) -> Result<()> {
    extract_dynamic_coloring(inst, family).map(|_| ())
}

/// Shifts assignment away from tight pairs until the coloring is minimal.
/// Each shift moves half of `min(y_Sij, π_i'j' − y_i'j')`, so the tight pair
/// becomes non-tight and the receiving pair stays non-tight.
///
/// Returns the remaining tight pairs, the minimal coloring and the number of
/// shifts performed.
pub fn minimize_coloring<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
    mut coloring: DynamicColoring<T>,
) -> Result<(BTreeSet<Pair>, DynamicColoring<T>, usize)> {
    let initial_tight = coloring.tight_pairs(inst).len();
    let two = T::from_usize(2);
    let mut shifts = 0;
    while let Some((tight, moat, other)) = coloring.find_reducible(inst, family) {
        let give = coloring.y_sij(moat, tight);
        let room = inst.penalty(other) - coloring.y_ij(other);
        let eps = give.min(room) / &two;
        coloring.shift(moat, tight, other, &eps);
        shifts += 1;
        if shifts > initial_tight {
            return Err(Error::Internal(
                "tight pair count failed to decrease".into(),
            ));
        }
    }
    Ok((coloring.tight_pairs(inst), coloring, shifts))
}

/// Final dynamic coloring of a finished run, minimized, and the set `Q` of
/// pairs that stay tight.
pub fn reduce_tight_pairs<T: Scalar>(
    inst: &PcsfInstance<T>,
    family: &MoatFamily<T>,
) -> Result<(BTreeSet<Pair>, DynamicColoring<T>)> {
    let coloring = extract_dynamic_coloring(inst, family)?;
    let (q, coloring, _) = minimize_coloring(inst, family, coloring)?;
    Ok((q, coloring))
}
