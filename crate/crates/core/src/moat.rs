//! The laminar moat family grown by the solver, with union-find components.

use crate::error::{Error, Result};
use crate::instance::{Vertex, VertexSet};
use crate::scalar::{sum, Scalar};
use crate::Rat;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn find_mut(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns the surviving root, or `None` if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        Some(ra)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moat<T = Rat> {
    pub id: usize,
    pub members: VertexSet,
    /// Time this moat spent coloring its cutting edges (`y_S`).
    pub duration: T,
    pub active: bool,
}

/// Every set that has ever been a component of the grown forest.
///
/// Moats are append-only with dense ids. A moat is active only while it
/// equals a current component and has not been deactivated.
#[derive(Clone, Debug)]
pub struct MoatFamily<T = Rat> {
    n: usize,
    moats: Vec<Moat<T>>,
    components: UnionFind,
    /// union-find root -> id of the moat equal to that component
    root_moat: Vec<usize>,
}

impl<T: Scalar> MoatFamily<T> {
    /// All singletons, active, with zero duration.
    pub fn new(n: usize) -> Self {
        let moats = (0..n)
            .map(|v| Moat {
                id: v,
                members: VertexSet::singleton(n, v),
                duration: T::zero(),
                active: true,
            })
            .collect();
        MoatFamily {
            n,
            moats,
            components: UnionFind::new(n),
            root_moat: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn moats(&self) -> &[Moat<T>] {
        &self.moats
    }

    pub fn len(&self) -> usize {
        self.moats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moats.is_empty()
    }

    pub fn get(&self, id: usize) -> Result<&Moat<T>> {
        self.moats.get(id).ok_or(Error::UnknownMoat(id))
    }

    /// Id of the moat equal to the component containing `v`.
    pub fn component_of(&self, v: Vertex) -> usize {
        self.root_moat[self.components.find(v)]
    }

    pub fn same_component(&self, a: Vertex, b: Vertex) -> bool {
        self.components.find(a) == self.components.find(b)
    }

    /// Moat ids of the current components, ascending.
    pub fn component_moats(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.n)
            .filter(|&v| self.components.find(v) == v)
            .map(|v| self.root_moat[v])
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn active_ids(&self) -> Vec<usize> {
        self.moats
            .iter()
            .filter(|m| m.active)
            .map(|m| m.id)
            .collect()
    }

    pub fn active_count(&self) -> usize {
        self.moats.iter().filter(|m| m.active).count()
    }

    pub fn has_active(&self) -> bool {
        self.moats.iter().any(|m| m.active)
    }

    pub fn total_duration(&self) -> T {
        sum(self.moats.iter().map(|m| &m.duration))
    }

    /// Adds `delta` to the duration of every active moat.
    pub fn grow(&mut self, delta: &T) {
        for m in self.moats.iter_mut().filter(|m| m.active) {
            m.duration += delta;
        }
    }

    pub fn deactivate(&mut self, id: usize) -> Result<()> {
        let m = self.moats.get_mut(id).ok_or(Error::UnknownMoat(id))?;
        m.active = false;
        Ok(())
    }

    /// Merges the components whose moats are `a` and `b` into a new active
    /// moat and returns its id. Both inputs stop being active.
    pub fn merge(&mut self, a: usize, b: usize) -> Result<usize> {
        let va = self.get(a)?.members.iter().next();
        let vb = self.get(b)?.members.iter().next();
        let (va, vb) = match (va, vb) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::Internal("empty moat".into())),
        };
        if self.component_of(va) != a || self.component_of(vb) != b {
            return Err(Error::Precondition(format!(
                "moats {a} and {b} must both be current components"
            )));
        }
        let root = self.components.union(va, vb).ok_or_else(|| {
            Error::Precondition(format!("moats {a} and {b} are the same component"))
        })?;
        let id = self.moats.len();
        let members = self.moats[a].members.union(&self.moats[b].members);
        self.moats[a].active = false;
        self.moats[b].active = false;
        self.moats.push(Moat {
            id,
            members,
            duration: T::zero(),
            active: true,
        });
        self.root_moat[root] = id;
        Ok(id)
    }

    /// Direct mutable access for tests that hand-corrupt or hand-build state.
    pub fn set_duration(&mut self, id: usize, duration: T) -> Result<()> {
        let m = self.moats.get_mut(id).ok_or(Error::UnknownMoat(id))?;
        m.duration = duration;
        Ok(())
    }

    /// Any two member sets are disjoint or nested.
    pub fn is_laminar(&self) -> bool {
        self.moats.iter().enumerate().all(|(i, a)| {
            self.moats[i + 1..].iter().all(|b| {
                a.members.is_disjoint(&b.members)
                    || a.members.is_subset(&b.members)
                    || b.members.is_subset(&a.members)
            })
        })
    }
}
