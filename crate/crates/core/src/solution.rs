use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{Pair, PcsfInstance};
use crate::scalar::Scalar;
use crate::Rat;

/// A penalized pair set `Q` together with a forest given by edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<T = Rat> {
    pub penalized: BTreeSet<Pair>,
    pub forest: Vec<usize>,
    pub cost: T,
}

impl<T: Scalar> Solution<T> {
    /// Builds a solution and computes its cost against `inst`.
    pub fn new(
        inst: &PcsfInstance<T>,
        forest: impl IntoIterator<Item = usize>,
        penalized: impl IntoIterator<Item = Pair>,
    ) -> Result<Self> {
        let mut forest: Vec<usize> = forest.into_iter().collect();
        forest.sort_unstable();
        forest.dedup();
        let mut sol = Solution {
            penalized: penalized.into_iter().collect(),
            forest,
            cost: T::zero(),
        };
        sol.cost = solution_cost(&sol, inst)?;
        Ok(sol)
    }

    pub fn forest_cost(&self, inst: &PcsfInstance<T>) -> Result<T> {
        let mut total = T::zero();
        for &e in &self.forest {
            total += &inst.edge(e)?.cost;
        }
        Ok(total)
    }
}

/// `c(F') + π(Q)`, computed exactly.
pub fn solution_cost<T: Scalar>(sol: &Solution<T>, inst: &PcsfInstance<T>) -> Result<T> {
    let mut total = sol.forest_cost(inst)?;
    for p in &sol.penalized {
        match inst.penalties().get(p) {
            Some(v) => total += v,
            None => return Err(Error::UnknownPair(*p)),
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Instance, Rat};

    fn inst() -> Instance {
        PcsfInstance::builder(2)
            .edge(0, 1, Rat::from_usize(10))
            .pair(0, 1, Rat::from_usize(4))
            .build()
            .unwrap()
    }

    #[test]
    fn cost_examples() {
        let inst = inst();
        let pair = Pair::new(0, 1).unwrap();
        assert_eq!(
            Solution::new(&inst, [], []).unwrap().cost,
            Rat::from_usize(0)
        );
        assert_eq!(
            Solution::new(&inst, [0], []).unwrap().cost,
            Rat::from_usize(10)
        );
        assert_eq!(
            Solution::new(&inst, [], [pair]).unwrap().cost,
            Rat::from_usize(4)
        );
    }

    #[test]
    fn dangling_references() {
        let inst = inst();
        assert_eq!(
            Solution::new(&inst, [3], []).unwrap_err(),
            Error::DanglingEdge(3)
        );
        let stray = Pair::new(0, 1).unwrap();
        let empty: Instance = PcsfInstance::builder(2).build().unwrap();
        assert_eq!(
            Solution::new(&empty, [], [stray]).unwrap_err(),
            Error::UnknownPair(stray)
        );
    }
}
