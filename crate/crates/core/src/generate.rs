//! Seeded random instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::PcsfInstance;
use crate::{Instance, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub nodes: usize,
    pub edges: usize,
    pub pairs: usize,
    pub max_cost: u64,
    pub max_penalty: u64,
}

/// The `k`-th unordered vertex pair in lexicographic order.
fn unrank_pair(n: usize, mut k: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - u - 1;
        if k < row {
            return (u, u + 1 + k);
        }
        k -= row;
    }
    unreachable!("pair rank out of range")
}

/// Simple graph with `edges` distinct edges and `pairs` distinct pairs, costs
/// uniform in `[0, max_cost]` and penalties uniform in `[1, max_penalty]`.
pub fn generate_with<R: Rng>(rng: &mut R, p: &GenParams) -> Result<Instance> {
    let slots = p.nodes * p.nodes.saturating_sub(1) / 2;
    if p.edges > slots || p.pairs > slots {
        return Err(Error::Argument(format!(
            "{} vertices allow at most {slots} edges and pairs",
            p.nodes
        )));
    }
    if p.pairs > 0 && p.max_penalty == 0 {
        return Err(Error::Argument("max penalty must be at least 1".into()));
    }
    let mut builder = PcsfInstance::builder(p.nodes);
    let mut edge_ranks = sample(rng, slots, p.edges).into_vec();
    edge_ranks.sort_unstable();
    for k in edge_ranks {
        let (u, v) = unrank_pair(p.nodes, k);
        let cost = rng.gen_range(0..=p.max_cost);
        builder = builder.edge(u, v, Rat::from_integer(cost.into()));
    }
    let mut pair_ranks = sample(rng, slots, p.pairs).into_vec();
    pair_ranks.sort_unstable();
    for k in pair_ranks {
        let (i, j) = unrank_pair(p.nodes, k);
        let penalty = rng.gen_range(1..=p.max_penalty);
        builder = builder.pair(i, j, Rat::from_integer(penalty.into()));
    }
    builder.build()
}

pub fn generate_instance(p: &GenParams, seed: u64) -> Result<Instance> {
    generate_with(&mut ChaCha8Rng::seed_from_u64(seed), p)
}

/// Connected variant: a random spanning tree first, then extra random edges.
pub fn generate_connected_with<R: Rng>(rng: &mut R, p: &GenParams) -> Result<Instance> {
    let slots = p.nodes * p.nodes.saturating_sub(1) / 2;
    if p.nodes == 0 || p.edges + 1 < p.nodes || p.edges > slots || p.pairs > slots {
        return Err(Error::Argument(format!(
            "cannot place {} edges and {} pairs connectedly on {} vertices",
            p.edges, p.pairs, p.nodes
        )));
    }
    let mut chosen = std::collections::BTreeSet::new();
    for v in 1..p.nodes {
        let u = rng.gen_range(0..v);
        chosen.insert((u, v));
    }
    while chosen.len() < p.edges {
        let (u, v) = unrank_pair(p.nodes, rng.gen_range(0..slots));
        chosen.insert((u, v));
    }
    let mut builder = PcsfInstance::builder(p.nodes);
    for (u, v) in chosen {
        builder = builder.edge(
            u,
            v,
            Rat::from_integer(rng.gen_range(0..=p.max_cost).into()),
        );
    }
    let mut pair_ranks = sample(rng, slots, p.pairs).into_vec();
    pair_ranks.sort_unstable();
    for k in pair_ranks {
        let (i, j) = unrank_pair(p.nodes, k);
        builder = builder.pair(
            i,
            j,
            Rat::from_integer(rng.gen_range(1..=p.max_penalty).into()),
        );
    }
    builder.build()
}
