//! Noncontextual {0,1} assignments over orthogonality constraints.
//!
//! A constraint system demands exactly one 1 inside every complete basis
//! (sum-one constraints) and, optionally, at most one 1 inside every
//! orthogonal pair. Colorability is decided by exhaustive backtracking with
//! unit propagation; uncolorability can often be certified independently by
//! a parity argument over GF(2).

use std::collections::BTreeMap;
use std::fmt;

use crate::ray::RaySet;

/// Which constraints a system carries: complete bases only, or bases plus
/// pairwise exclusivity for every orthogonal pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    BasesOnly,
    BasesAndPairs,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::BasesOnly => write!(f, "bases"),
            Mode::BasesAndPairs => write!(f, "bases+pairs"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("unknown ray id {id}")]
    UnknownRayId { id: usize },
}

/// A partial map ray id -> {0,1}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<usize, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Self {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, id: usize, value: bool) {
        self.values.insert(id, value);
    }

    pub fn get(&self, id: usize) -> Option<bool> {
        self.values.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ascending by id.
    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter().filter(|&(_, v)| v).map(|(k, _)| k).collect()
    }

    pub fn zeros(&self) -> Vec<usize> {
        self.iter().filter(|&(_, v)| !v).map(|(k, _)| k).collect()
    }

    /// True if `other` extends this assignment without changing any value.
    pub fn is_extended_by(&self, other: &Assignment) -> bool {
        self.iter().all(|(id, v)| other.get(id) == Some(v))
    }
}

/// Hypergraph of sum-one constraints plus optional exclusivity pairs over a
/// universe of ray ids. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    universe: Vec<usize>,
    constraints: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
    mode: Mode,
    id_bound: usize,
    constraints_of: Vec<Vec<usize>>,
    pairs_of: Vec<Vec<usize>>,
}

impl ConstraintSystem {
    /// Sum-one constraints from the enumerated bases of `set`; in
    /// [`Mode::BasesAndPairs`] every orthogonal pair also becomes exclusive.
    pub fn build(set: &RaySet, mode: Mode) -> Self {
        let constraints: Vec<Vec<usize>> = set
            .enumerate_bases()
            .into_iter()
            .map(|b| b.ids().to_vec())
            .collect();
        let pairs = match mode {
            Mode::BasesOnly => Vec::new(),
            Mode::BasesAndPairs => set.orthogonality_graph().edges(),
        };
        Self::from_parts((0..set.len()).collect(), constraints, pairs, mode)
            .expect("ids from the set itself")
    }

    /// Assembles a system from explicit parts. Constraint member lists and
    /// the constraint list itself are sorted and deduplicated.
    pub fn from_parts(
        universe: Vec<usize>,
        constraints: Vec<Vec<usize>>,
        pairs: Vec<(usize, usize)>,
        mode: Mode,
    ) -> Result<Self, ColoringError> {
        let mut universe = universe;
        universe.sort_unstable();
        universe.dedup();
        let member = |id: usize| universe.binary_search(&id).is_ok();
        let mut constraints: Vec<Vec<usize>> = constraints
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        constraints.sort();
        constraints.dedup();
        for c in &constraints {
            for &id in c {
                if !member(id) {
                    return Err(ColoringError::UnknownRayId { id });
                }
            }
        }
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        for &(a, b) in &pairs {
            for id in [a, b] {
                if !member(id) {
                    return Err(ColoringError::UnknownRayId { id });
                }
            }
        }
        let id_bound = universe.last().map(|&m| m + 1).unwrap_or(0);
        let mut constraints_of = vec![Vec::new(); id_bound];
        for (ci, c) in constraints.iter().enumerate() {
            for &id in c {
                constraints_of[id].push(ci);
            }
        }
        let mut pairs_of = vec![Vec::new(); id_bound];
        for (pi, &(a, b)) in pairs.iter().enumerate() {
            pairs_of[a].push(pi);
            pairs_of[b].push(pi);
        }
        Ok(ConstraintSystem {
            universe,
            constraints,
            pairs,
            mode,
            id_bound,
            constraints_of,
            pairs_of,
        })
    }

    /// The induced system on a subset: constraints fully contained in
    /// `keep`, pairs with both endpoints in `keep`.
    pub fn restrict(&self, keep: &[usize]) -> ConstraintSystem {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let inside = |id: usize| keep.binary_search(&id).is_ok();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| c.iter().all(|&id| inside(id)))
            .cloned()
            .collect();
        let pairs = self
            .pairs
            .iter()
            .filter(|&&(a, b)| inside(a) && inside(b))
            .copied()
            .collect();
        Self::from_parts(keep, constraints, pairs, self.mode).expect("ids filtered")
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn constraints(&self) -> &[Vec<usize>] {
        &self.constraints
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Independent validator: `a` is total on the universe, every sum-one
    /// constraint holds exactly one 1 and no exclusivity pair holds two.
    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        if self.universe.iter().any(|&id| a.get(id).is_none()) {
            return false;
        }
        for c in &self.constraints {
            let ones = c.iter().filter(|&&id| a.get(id) == Some(true)).count();
            if ones != 1 {
                return false;
            }
        }
        self.pairs
            .iter()
            .all(|&(x, y)| !(a.get(x) == Some(true) && a.get(y) == Some(true)))
    }

    fn check_assignment_ids(&self, a: &Assignment) -> Result<(), ColoringError> {
        for (id, _) in a.iter() {
            if self.universe.binary_search(&id).is_err() {
                return Err(ColoringError::UnknownRayId { id });
            }
        }
        Ok(())
    }
}

/// Why a value was forced during propagation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// Index into the sum-one constraint list.
    Constraint(usize),
    /// The exclusivity pair whose other member is 1.
    Pair(usize, usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Seed {
        id: usize,
        value: bool,
    },
    Forced {
        id: usize,
        value: bool,
        reason: Reason,
    },
}

/// The rule violation that ended propagation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Clash {
    PairBothOne {
        a: usize,
        b: usize,
    },
    TwoOnesInConstraint {
        constraint: usize,
        a: usize,
        b: usize,
    },
    AllZeroConstraint {
        constraint: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ContradictionReport {
    pub trace: Vec<TraceEvent>,
    pub clash: Clash,
}

#[derive(Clone, Debug)]
pub enum PropagationOutcome {
    Fixpoint(Assignment),
    Contradiction(ContradictionReport),
}

/// Dense working state shared by propagation and search.
struct Engine<'a> {
    cs: &'a ConstraintSystem,
    values: Vec<Option<bool>>,
}

enum Why {
    Seed,
    Constraint(usize),
    Pair(usize, usize),
}

impl<'a> Engine<'a> {
    fn new(cs: &'a ConstraintSystem) -> Self {
        Engine {
            cs,
            values: vec![None; cs.id_bound],
        }
    }

    fn get(&self, id: usize) -> Option<bool> {
        self.values[id]
    }

    /// Sets a value, records the event, then checks every pair and
    /// constraint touching the id for an immediate violation. Pairs are
    /// checked first so a two-ones clash surfaces as the offending
    /// orthogonal pair.
    fn set(
        &mut self,
        id: usize,
        value: bool,
        why: Why,
        trace: Option<&mut Vec<TraceEvent>>,
    ) -> Option<Clash> {
        debug_assert!(self.values[id].is_none());
        self.values[id] = Some(value);
        if let Some(trace) = trace {
            trace.push(match why {
                Why::Seed => TraceEvent::Seed { id, value },
                Why::Constraint(ci) => TraceEvent::Forced {
                    id,
                    value,
                    reason: Reason::Constraint(ci),
                },
                Why::Pair(a, b) => TraceEvent::Forced {
                    id,
                    value,
                    reason: Reason::Pair(a, b),
                },
            });
        }
        if value {
            for &pi in &self.cs.pairs_of[id] {
                let (a, b) = self.cs.pairs[pi];
                let other = if a == id { b } else { a };
                if self.get(other) == Some(true) {
                    return Some(Clash::PairBothOne {
                        a: a.min(b),
                        b: a.max(b),
                    });
                }
            }
            for &ci in &self.cs.constraints_of[id] {
                let ones: Vec<usize> = self.cs.constraints[ci]
                    .iter()
                    .copied()
                    .filter(|&m| self.get(m) == Some(true))
                    .collect();
                if ones.len() >= 2 {
                    return Some(Clash::TwoOnesInConstraint {
                        constraint: ci,
                        a: ones[0],
                        b: ones[1],
                    });
                }
            }
        } else {
            for &ci in &self.cs.constraints_of[id] {
                if self.cs.constraints[ci]
                    .iter()
                    .all(|&m| self.get(m) == Some(false))
                {
                    return Some(Clash::AllZeroConstraint { constraint: ci });
                }
            }
        }
        None
    }

    /// Runs the forcing rules to their least fixpoint. Each pass scans the
    /// sum-one constraints in index order, then the pairs:
    /// (i) a constraint with a 1 forces its other members to 0;
    /// (ii) a constraint whose members are all 0 but one forces that one to 1;
    /// (iii) a pair with a 1 forces the other member to 0.
    fn saturate(&mut self, mut trace: Option<&mut Vec<TraceEvent>>) -> Option<Clash> {
        loop {
            let mut changed = false;
            for ci in 0..self.cs.constraints.len() {
                let members = &self.cs.constraints[ci];
                let mut ones = 0usize;
                let mut unassigned = Vec::new();
                for &m in members {
                    match self.get(m) {
                        Some(true) => ones += 1,
                        Some(false) => {}
                        None => unassigned.push(m),
                    }
                }
                if ones >= 2 {
                    let hit: Vec<usize> = members
                        .iter()
                        .copied()
                        .filter(|&m| self.get(m) == Some(true))
                        .collect();
                    return Some(Clash::TwoOnesInConstraint {
                        constraint: ci,
                        a: hit[0],
                        b: hit[1],
                    });
                }
                if ones == 1 {
                    for m in unassigned {
                        if let Some(clash) =
                            self.set(m, false, Why::Constraint(ci), trace.as_deref_mut())
                        {
                            return Some(clash);
                        }
                        changed = true;
                    }
                } else if unassigned.is_empty() {
                    return Some(Clash::AllZeroConstraint { constraint: ci });
                } else if unassigned.len() == 1 {
                    if let Some(clash) = self.set(
                        unassigned[0],
                        true,
                        Why::Constraint(ci),
                        trace.as_deref_mut(),
                    ) {
                        return Some(clash);
                    }
                    changed = true;
                }
            }
            for pi in 0..self.cs.pairs.len() {
                let (a, b) = self.cs.pairs[pi];
                let forced = match (self.get(a), self.get(b)) {
                    (Some(true), Some(true)) => {
                        return Some(Clash::PairBothOne { a, b });
                    }
                    (Some(true), None) => Some(b),
                    (None, Some(true)) => Some(a),
                    _ => None,
                };
                if let Some(target) = forced {
                    if let Some(clash) =
                        self.set(target, false, Why::Pair(a, b), trace.as_deref_mut())
                    {
                        return Some(clash);
                    }
                    changed = true;
                }
            }
            if !changed {
                return None;
            }
        }
    }

    fn assignment(&self) -> Assignment {
        Assignment::from_pairs(
            self.cs
                .universe
                .iter()
                .filter_map(|&id| self.values[id].map(|v| (id, v))),
        )
    }
}

/// Least fixpoint of the forcing rules from a seed assignment, or a
/// contradiction report carrying the full derivation trace.
pub fn propagate(
    cs: &ConstraintSystem,
    seed: &Assignment,
) -> Result<PropagationOutcome, ColoringError> {
    cs.check_assignment_ids(seed)?;
    let mut engine = Engine::new(cs);
    let mut trace = Vec::new();
    for (id, value) in seed.iter() {
        if let Some(clash) = engine.set(id, value, Why::Seed, Some(&mut trace)) {
            return Ok(PropagationOutcome::Contradiction(ContradictionReport {
                trace,
                clash,
            }));
        }
    }
    match engine.saturate(Some(&mut trace)) {
        Some(clash) => Ok(PropagationOutcome::Contradiction(ContradictionReport {
            trace,
            clash,
        })),
        None => Ok(PropagationOutcome::Fixpoint(engine.assignment())),
    }
}

#[derive(Clone, Debug)]
pub enum ColorOutcome {
    Colorable(Assignment),
    Uncolorable,
}

impl ColorOutcome {
    pub fn is_colorable(&self) -> bool {
        matches!(self, ColorOutcome::Colorable(_))
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            ColorOutcome::Colorable(w) => Some(w),
            ColorOutcome::Uncolorable => None,
        }
    }
}

/// Exhaustive backtracking with propagation. Deterministic: branches on the
/// lowest unassigned id, value 1 first, so the witness is reproducible.
pub fn colorable(cs: &ConstraintSystem) -> ColorOutcome {
    let mut engine = Engine::new(cs);
    if engine.saturate(None).is_some() {
        return ColorOutcome::Uncolorable;
    }
    match search(cs, &engine.values) {
        Some(values) => {
            let witness =
                Assignment::from_pairs(cs.universe.iter().map(|&id| (id, values[id].unwrap())));
            debug_assert!(cs.is_satisfied_by(&witness));
            ColorOutcome::Colorable(witness)
        }
        None => ColorOutcome::Uncolorable,
    }
}

fn search(cs: &ConstraintSystem, values: &[Option<bool>]) -> Option<Vec<Option<bool>>> {
    let branch = cs.universe.iter().copied().find(|&id| values[id].is_none());
    let Some(id) = branch else {
        let total = Assignment::from_pairs(cs.universe.iter().map(|&id| (id, values[id].unwrap())));
        return cs.is_satisfied_by(&total).then(|| values.to_vec());
    };
    for value in [true, false] {
        let mut engine = Engine {
            cs,
            values: values.to_vec(),
        };
        if engine.set(id, value, Why::Seed, None).is_none() && engine.saturate(None).is_none() {
            if let Some(found) = search(cs, &engine.values) {
                return Some(found);
            }
        }
    }
    None
}

/// An odd-sized selection of sum-one constraints covering every ray an even
/// number of times: summing the selected constraints then gives even = odd,
/// so no assignment can satisfy them all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCertificate {
    constraint_indices: Vec<usize>,
}

impl ParityCertificate {
    pub fn constraint_indices(&self) -> &[usize] {
        &self.constraint_indices
    }

    pub fn len(&self) -> usize {
        self.constraint_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraint_indices.is_empty()
    }

    /// How many selected constraints cover each ray (only rays covered at
    /// least once appear).
    pub fn coverage(&self, cs: &ConstraintSystem) -> BTreeMap<usize, usize> {
        let mut cover = BTreeMap::new();
        for &ci in &self.constraint_indices {
            for &id in &cs.constraints()[ci] {
                *cover.entry(id).or_insert(0) += 1;
            }
        }
        cover
    }

    /// Re-checks the defining conditions: odd selection, even coverage.
    pub fn verify(&self, cs: &ConstraintSystem) -> bool {
        if self.constraint_indices.len().is_multiple_of(2) {
            return false;
        }
        if self
            .constraint_indices
            .iter()
            .any(|&ci| ci >= cs.constraints().len())
        {
            return false;
        }
        self.coverage(cs).values().all(|&c| c % 2 == 0)
    }
}

/// Solves for a parity certificate over GF(2): one unknown per sum-one
/// constraint, one even-coverage equation per covered ray, plus the
/// odd-selection equation. Deterministic Gaussian elimination; free
/// variables are fixed to 0.
pub fn parity_certificate(cs: &ConstraintSystem) -> Option<ParityCertificate> {
    let m = cs.constraints().len();
    if m == 0 {
        return None;
    }
    let words = m.div_ceil(64);
    // One row per ray that occurs in some constraint, rhs 0.
    let mut rows: Vec<(Vec<u64>, bool)> = Vec::new();
    for &id in cs.universe() {
        let members = &cs.constraints_of[id];
        if members.is_empty() {
            continue;
        }
        let mut row = vec![0u64; words];
        for &ci in members {
            row[ci / 64] ^= 1 << (ci % 64);
        }
        rows.push((row, false));
    }
    // Odd-selection row: sum of all unknowns is 1.
    let mut parity_row = vec![0u64; words];
    for ci in 0..m {
        parity_row[ci / 64] ^= 1 << (ci % 64);
    }
    rows.push((parity_row, true));

    let bit = |row: &[u64], col: usize| row[col / 64] >> (col % 64) & 1 == 1;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; m];
    let mut rank = 0;
    for (col, pivot_slot) in pivot_of_col.iter_mut().enumerate() {
        let Some(found) = (rank..rows.len()).find(|&r| bit(&rows[r].0, col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (pivot_row, pivot_rhs) = rows[rank].clone();
        for (r, (row, rhs)) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
                *rhs ^= pivot_rhs;
            }
        }
        *pivot_slot = Some(rank);
        rank += 1;
    }
    // Inconsistent iff a zero row demands 1.
    for (row, rhs) in &rows {
        if *rhs && row.iter().all(|&w| w == 0) {
            return None;
        }
    }
    let mut selected = Vec::new();
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            if rows[*r].1 {
                selected.push(col);
            }
        }
    }
    let certificate = ParityCertificate {
        constraint_indices: selected,
    };
    debug_assert!(certificate.verify(cs));
    Some(certificate)
}
