//! Laminar set families and their Hasse trees.

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("Hasse diagram is not a tree: set {set} has {parents} minimal supersets")]
    MultipleParents { set: usize, parents: usize },
    #[error("Hasse diagram is not a tree: {0} maximal sets")]
    MultipleRoots(usize),
    #[error("sibling sets {0} and {1} overlap")]
    SiblingOverlap(usize, usize),
    #[error("the ground set is not a member")]
    MissingGround,
}

/// Distinct member sets over a ground set `0..n` with their Hasse tree.
///
/// Sets are ordered by decreasing size (ties by smallest element), so the root is set 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    ground: usize,
    sets: Vec<FixedBitSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

/// Distinct sets ordered by decreasing size, ties broken by member lists.
pub fn canonical_order(sets: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let mut keyed: Vec<(usize, Vec<usize>, &FixedBitSet)> =
        sets.iter().map(|s| (s.count_ones(..), s.ones().collect(), s)).collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    keyed.into_iter().map(|k| k.2.clone()).collect()
}

/// First pair (in canonical order) of sets that overlap without being nested.
pub fn laminar_violation(sets: &[FixedBitSet]) -> Option<(FixedBitSet, FixedBitSet)> {
    let ordered = canonical_order(sets);
    for j in 0..ordered.len() {
        for i in 0..j {
            let (big, small) = (&ordered[i], &ordered[j]);
            if !small.is_subset(big) && !small.is_disjoint(big) {
                return Some((big.clone(), small.clone()));
            }
        }
    }
    None
}

impl Hierarchy {
    /// Hasse diagram of the inclusion order by transitive reduction, then tree checks.
    pub fn from_sets(ground: usize, sets: &[FixedBitSet]) -> Result<Self, HierarchyError> {
        let sets = canonical_order(sets);
        let k = sets.len();
        // strict inclusion table: sup[i] holds j with sets[i] ⊊ sets[j]
        let mut sup = vec![FixedBitSet::with_capacity(k); k];
        let mut sub = vec![FixedBitSet::with_capacity(k); k];
        for i in 0..k {
            for j in 0..k {
                if i != j && sets[i].is_subset(&sets[j]) {
                    sup[i].insert(j);
                    sub[j].insert(i);
                }
            }
        }
        let mut parent = vec![None; k];
        let mut roots = 0;
        for i in 0..k {
            let minimal: Vec<usize> = sup[i]
                .ones()
                .filter(|&j| sup[i].is_disjoint(&sub[j]))
                .collect();
            match minimal.len() {
                0 => roots += 1,
                1 => parent[i] = Some(minimal[0]),
                m => return Err(HierarchyError::MultipleParents { set: i, parents: m }),
            }
        }
        if roots != 1 {
            return Err(HierarchyError::MultipleRoots(roots));
        }
        let mut children = vec![Vec::new(); k];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(i);
            }
        }
        for kids in &children {
            for (a, &x) in kids.iter().enumerate() {
                for &y in &kids[a + 1..] {
                    if !sets[x].is_disjoint(&sets[y]) {
                        return Err(HierarchyError::SiblingOverlap(x, y));
                    }
                }
            }
        }
        if sets[0].count_ones(..) != ground {
            return Err(HierarchyError::MissingGround);
        }
        Ok(Hierarchy {
            ground,
            sets,
            parent,
            children,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &FixedBitSet {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn position(&self, set: &FixedBitSet) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }

    /// Smallest member containing `x`.
    pub fn smallest_containing(&self, x: usize) -> Option<usize> {
        (0..self.sets.len()).rev().find(|&i| self.sets[i].contains(x))
    }
}
