use std::sync::Arc;

use super::FiniteGroup;
use crate::{Error, Result};

/// A subgroup K ⊆ G with its left cosets gK.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<usize>>,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, members: &[usize]) -> Result<Self> {
        let n = parent.order();
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        if members.iter().any(|&m| m >= n) {
            return Err(Error::InvalidSubgroup("element out of range".into()));
        }
        let mut position = vec![None; n];
        for (i, &m) in members.iter().enumerate() {
            position[m] = Some(i);
        }
        for &a in &members {
            if position[parent.inv(a)].is_none() {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {}", parent.label(a))));
            }
            for &b in &members {
                if position[parent.mul(a, b)].is_none() {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed: {}*{}",
                        parent.label(a),
                        parent.label(b)
                    )));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; n];
        let mut cosets = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = members.iter().map(|&k| parent.mul(g, k)).collect();
            c.sort_unstable();
            for &x in &c {
                coset_of[x] = cosets.len();
            }
            cosets.push(c);
        }
        Ok(Subgroup { parent, members, position, cosets, coset_of })
    }

    pub fn generated(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        let members = parent.closure(gens);
        Self::new(parent, &members)
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        Self::new(parent, &[0]).expect("trivial subgroup")
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let all: Vec<usize> = parent.elements().collect();
        Self::new(parent, &all).expect("whole group")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position[g].is_some()
    }

    /// Position of a parent element inside the sorted member list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position[g]
    }

    /// Parent element at a member position.
    pub fn element(&self, pos: usize) -> usize {
        self.members[pos]
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        g.elements().all(|x| self.members.iter().all(|&k| self.contains(g.conj(x, k))))
    }

    /// The subgroup as a group in its own right, indices = member positions.
    pub fn as_group(&self) -> FiniteGroup {
        let g = &self.parent;
        let table = self
            .members
            .iter()
            .map(|&a| self.members.iter().map(|&b| self.position[g.mul(a, b)].unwrap()).collect())
            .collect();
        let labels = self.members.iter().map(|&a| g.label(a).to_string()).collect();
        let sub = FiniteGroup::from_cayley(table, Some(labels)).expect("subgroup table is a group");
        match self.catalog_name() {
            Some(n) => sub.with_name(n),
            None => sub,
        }
    }

    /// A catalog name when the subgroup is recognisably cyclic or trivial, so
    /// pinned irrep bases can be reused.
    fn catalog_name(&self) -> Option<String> {
        let n = self.order();
        if n == self.parent.order() {
            return self.parent.name().map(str::to_string);
        }
        None
    }

    /// Intersection with another subgroup of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let m: Vec<usize> = self.members.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::new(self.parent.clone(), &m).expect("intersection of subgroups")
    }
}
