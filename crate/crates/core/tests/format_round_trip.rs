use proptest::prelude::*;

use pcsf_core::format::{parse_instance, parse_solution, serialize_instance, serialize_solution};
use pcsf_core::generate::{generate_instance, GenParams};
use pcsf_core::ipcsf::ipcsf_solve;

proptest! {
    #[test]
    fn generated_instances_round_trip(nodes in 2usize..=12, seed in any::<u64>(), e in 0usize..=30, k in 0usize..=10) {
        let slots = nodes * (nodes - 1) / 2;
        let p = GenParams { nodes, edges: e.min(slots), pairs: k.min(slots), max_cost: 1000, max_penalty: 1000 };
        let inst = generate_instance(&p, seed).unwrap();
        let text = serialize_instance(&inst).unwrap();
        prop_assert_eq!(parse_instance(&text).unwrap(), inst.clone());

        let (sol, _) = ipcsf_solve(&inst).unwrap();
        let back = parse_solution(&serialize_solution(&inst, &sol), &inst).unwrap();
        prop_assert_eq!(back, sol);
    }
}
