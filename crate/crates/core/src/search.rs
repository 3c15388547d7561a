//! Enumeration of critical (minimal uncolorable) ray subsets.
//!
//! Uncolorability is upward closed: adding rays to an uncolorable subset
//! never restores colorability. The census therefore walks the subset
//! lattice top-down from the full set, expanding only uncolorable subsets;
//! a subset is critical exactly when all of its one-ray-removed children
//! are colorable. Colorability verdicts are memoized per subset bitmask and
//! the walk may be parallelized; the result is a pure function of the
//! input, so the census is identical for any worker count.

use std::collections::{BTreeMap, BTreeSet};

use dashmap::DashMap;
use rayon::prelude::*;

use crate::coloring::{colorable, ConstraintSystem, Mode};
use crate::ray::RaySet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("ray set has {0} rays; subset censuses support at most 64")]
    TooManyRays(usize),
}

/// A minimal uncolorable subset, as sorted ids into the parent set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalSet {
    ids: Vec<usize>,
}

impl CriticalSet {
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn size(&self) -> usize {
        self.ids.len()
    }
}

/// Complete census of the critical subsets of a parent set within a size
/// range, in deterministic order: by size, then lexicographic ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub parent_fingerprint: String,
    pub mode: Mode,
    pub size_min: usize,
    pub size_max: usize,
    sets: Vec<CriticalSet>,
}

impl Census {
    pub fn sets(&self) -> &[CriticalSet] {
        &self.sets
    }

    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.sets {
            *counts.entry(s.size()).or_insert(0) += 1;
        }
        counts
    }

    pub fn count_of(&self, size: usize) -> usize {
        self.sets.iter().filter(|s| s.size() == size).count()
    }
}

/// Memoized colorability of induced subsystems of one parent, keyed by
/// subset bitmask. Induced means: parent bases fully contained in the
/// subset (a basis is a clique, so re-enumerating inside the subset finds
/// the same tetrads), plus — with pair semantics — the orthogonal pairs
/// inside the subset.
pub struct SubsetColorability {
    n: usize,
    constraints: Vec<Vec<usize>>,
    constraint_masks: Vec<u64>,
    pairs: Vec<(usize, usize)>,
    mode: Mode,
    memo: DashMap<u64, bool>,
}

impl SubsetColorability {
    pub fn new(parent: &RaySet, mode: Mode) -> Result<Self, SearchError> {
        let n = parent.len();
        if n > 64 {
            return Err(SearchError::TooManyRays(n));
        }
        let full = ConstraintSystem::build(parent, mode);
        let constraints: Vec<Vec<usize>> = full.constraints().to_vec();
        let constraint_masks = constraints
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &id| m | 1 << id))
            .collect();
        Ok(SubsetColorability {
            n,
            constraints,
            constraint_masks,
            pairs: full.pairs().to_vec(),
            mode,
            memo: DashMap::new(),
        })
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    /// Memoized verdict for the induced subsystem of `mask`.
    pub fn colorable(&self, mask: u64) -> bool {
        if let Some(hit) = self.memo.get(&mask) {
            return *hit;
        }
        let verdict = self.colorable_uncached(mask);
        self.memo.insert(mask, verdict);
        verdict
    }

    /// Same verdict computed from scratch, bypassing the memo table.
    pub fn colorable_uncached(&self, mask: u64) -> bool {
        colorable(&self.induced(mask)).is_colorable()
    }

    /// The induced constraint system of a subset bitmask.
    pub fn induced(&self, mask: u64) -> ConstraintSystem {
        let universe: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
        let constraints: Vec<Vec<usize>> = self
            .constraints
            .iter()
            .zip(&self.constraint_masks)
            .filter(|&(_, &cm)| cm & mask == cm)
            .map(|(c, _)| c.clone())
            .collect();
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .copied()
            .collect();
        ConstraintSystem::from_parts(universe, constraints, pairs, self.mode)
            .expect("subset ids are valid")
    }
}

/// True iff the induced subsystem of `ids` is uncolorable while every
/// one-ray-removed subsystem is colorable.
pub fn is_critical(parent: &RaySet, ids: &[usize], mode: Mode) -> bool {
    let full = ConstraintSystem::build(parent, mode);
    let induced = full.restrict(ids);
    if colorable(&induced).is_colorable() {
        return false;
    }
    let mut ids: Vec<usize> = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    (0..ids.len()).all(|k| {
        let mut reduced = ids.clone();
        reduced.remove(k);
        colorable(&full.restrict(&reduced)).is_colorable()
    })
}

/// Enumerates every critical subset of `parent` with size in
/// `size_min..=size_max` under the given semantics.
pub fn enumerate_critical(
    parent: &RaySet,
    mode: Mode,
    size_min: usize,
    size_max: usize,
) -> Result<Census, SearchError> {
    let oracle = SubsetColorability::new(parent, mode)?;
    let n = oracle.universe_size();
    let mut sets: Vec<CriticalSet> = Vec::new();
    let full = oracle.full_mask();
    let mut level: Vec<u64> = if n > 0 && !oracle.colorable(full) {
        vec![full]
    } else {
        Vec::new()
    };
    let mut level_size = n;
    while !level.is_empty() {
        let results: Vec<(u64, bool, Vec<u64>)> = level
            .par_iter()
            .map(|&subset| {
                let mut uncolorable_children = Vec::new();
                for i in 0..n {
                    if subset >> i & 1 == 1 {
                        let child = subset & !(1 << i);
                        if !oracle.colorable(child) {
                            uncolorable_children.push(child);
                        }
                    }
                }
                let critical = uncolorable_children.is_empty();
                (subset, critical, uncolorable_children)
            })
            .collect();
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for (subset, critical, children) in results {
            if critical && size_min <= level_size && level_size <= size_max {
                sets.push(CriticalSet {
                    ids: (0..n).filter(|&i| subset >> i & 1 == 1).collect(),
                });
            }
            next.extend(children);
        }
        if level_size == 0 || level_size - 1 < size_min {
            break;
        }
        level = next.into_iter().collect();
        level_size -= 1;
    }
    sets.sort_by(|a, b| (a.size(), a.ids()).cmp(&(b.size(), b.ids())));
    sets.dedup();
    Ok(Census {
        parent_fingerprint: parent.fingerprint(),
        mode,
        size_min,
        size_max,
        sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::{Ray, RaySet};

    fn basis_set() -> RaySet {
        RaySet::from_rays(
            [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]]
                .iter()
                .map(|v| Ray::from_ints(v).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn single_basis_is_not_critical() {
        let s = basis_set();
        assert!(!is_critical(&s, &[0, 1, 2, 3], Mode::BasesOnly));
    }

    #[test]
    fn colorable_parent_yields_empty_census() {
        let census = enumerate_critical(&basis_set(), Mode::BasesOnly, 1, 4).unwrap();
        assert!(census.sets().is_empty());
        assert!(census.counts().is_empty());
    }

    #[test]
    fn too_many_rays_is_rejected() {
        let rays: Vec<Ray> = (1..=65)
            .map(|k| Ray::from_ints(&[1, k, k * k, 0]).unwrap())
            .collect();
        let s = RaySet::from_rays(rays).unwrap();
        assert_eq!(
            SubsetColorability::new(&s, Mode::BasesOnly).err(),
            Some(SearchError::TooManyRays(65))
        );
    }
}
