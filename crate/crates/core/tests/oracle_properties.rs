use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcsf_core::generate::{generate_instance, GenParams};
use pcsf_core::moat::UnionFind;
use pcsf_core::oracle::{exact_solve, verify_solution};
use pcsf_core::{Instance, Rat};

fn params(nodes: usize, edges: usize, pairs: usize) -> GenParams {
    GenParams {
        nodes,
        edges,
        pairs,
        max_cost: 10,
        max_penalty: 10,
    }
}

/// Cost of buying exactly the edges in `mask` and paying for every pair left
/// disconnected.
fn mask_cost(inst: &Instance, mask: u32) -> Rat {
    let mut uf = UnionFind::new(inst.n());
    let mut cost = Rat::zero();
    for (e, edge) in inst.edges().iter().enumerate() {
        if mask >> e & 1 == 1 {
            uf.union(edge.u, edge.v);
            cost += &edge.cost;
        }
    }
    for (p, pen) in inst.penalties() {
        if uf.find(p.lo()) != uf.find(p.hi()) {
            cost += pen;
        }
    }
    cost
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn matches_plain_subset_minimum(nodes in 2usize..=6, seed in any::<u64>(), e in 0usize..=10, k in 1usize..=5) {
        let slots = nodes * (nodes - 1) / 2;
        let inst = generate_instance(&params(nodes, e.min(slots), k.min(slots)), seed).unwrap();
        let best = (0..1u32 << inst.edges().len()).map(|m| mask_cost(&inst, m)).min().unwrap();
        let sol = exact_solve(&inst).unwrap();
        prop_assert_eq!(sol.cost.clone(), best);
        prop_assert!(verify_solution(&inst, &sol).is_empty());
    }
}

#[test]
fn no_random_feasible_solution_beats_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..20u64 {
        let nodes = rng.gen_range(3..=6);
        let slots = nodes * (nodes - 1) / 2;
        let inst = generate_instance(&params(nodes, slots.min(10), slots.min(4)), trial).unwrap();
        let opt = exact_solve(&inst).unwrap();
        for _ in 0..10_000 {
            let mask = rng.gen_range(0..1u32 << inst.edges().len());
            assert!(
                opt.cost <= mask_cost(&inst, mask),
                "trial {trial} mask {mask:b}"
            );
        }
    }
}
