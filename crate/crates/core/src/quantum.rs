//! Exact Born-rule layer for two-qubit rays.
//!
//! States are unnormalized rays; every probability is the exact rational
//! <u,psi>^2 / (<u,u><psi,psi>), so the usual sqrt(2), sqrt(3)
//! normalizations cancel and no irrational arithmetic is needed. On top of
//! that sit joint eigenvector checks for sigma_x/sigma_z products,
//! preselection/postselection value forcing, state-specific reduction of a
//! constraint system, and the translation of a pre/post pair into local
//! conditional probabilities.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::coloring::{
    propagate, Assignment, ConstraintSystem, ContradictionReport, Mode, PropagationOutcome,
};
use crate::ray::{in_span, Basis, Factorization, Int, Ray, RayError, RaySet, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantumError {
    #[error(transparent)]
    Ray(#[from] RayError),
    #[error("postselection impossible: the two states are orthogonal")]
    ImpossiblePostselection,
    #[error("state does not factorize into single-particle states")]
    NotFactorizable,
    #[error("conditioning event has probability zero")]
    ConditionHasZeroProbability,
    #[error("events must address distinct particles")]
    SameParticle,
}

/// A ray reused as an unnormalized pure state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    ray: Ray,
}

impl State {
    pub fn new(ray: Ray) -> Self {
        State { ray }
    }

    pub fn ray(&self) -> &Ray {
        &self.ray
    }
}

impl From<Ray> for State {
    fn from(ray: Ray) -> Self {
        State::new(ray)
    }
}

/// Exact Born probability of the rank-1 projector onto `u` in `state`.
pub fn born(state: &State, u: &Ray) -> Result<Scalar, QuantumError> {
    let overlap = state.ray.inner(u)?;
    Ok(Scalar::new(
        &overlap * &overlap,
        u.norm_sq() * state.ray.norm_sq(),
    ))
}

/// One factor of a two-qubit product observable.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Pauli {
    Identity,
    X,
    Z,
}

impl Pauli {
    fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Pauli::Identity => [[1, 0], [0, 1]],
            Pauli::X => [[0, 1], [1, 0]],
            Pauli::Z => [[1, 0], [0, -1]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pauli::Identity => write!(f, "I"),
            Pauli::X => write!(f, "X"),
            Pauli::Z => write!(f, "Z"),
        }
    }
}

/// A tensor product of single-qubit observables, as an integer 4x4 matrix
/// in the fixed |++>, |+->, |-+>, |--> basis order.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ProductObservable {
    pub first: Pauli,
    pub second: Pauli,
}

impl ProductObservable {
    pub fn new(first: Pauli, second: Pauli) -> Self {
        ProductObservable { first, second }
    }

    pub fn matrix(&self) -> [[i64; 4]; 4] {
        let a = self.first.matrix();
        let b = self.second.matrix();
        let mut out = [[0i64; 4]; 4];
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        out[i1 * 2 + i2][j1 * 2 + j2] = a[i1][j1] * b[i2][j2];
                    }
                }
            }
        }
        out
    }

    /// The four non-trivial x/z products.
    pub fn xz_products() -> [ProductObservable; 4] {
        [
            ProductObservable::new(Pauli::Z, Pauli::Z),
            ProductObservable::new(Pauli::Z, Pauli::X),
            ProductObservable::new(Pauli::X, Pauli::Z),
            ProductObservable::new(Pauli::X, Pauli::X),
        ]
    }
}

impl fmt::Display for ProductObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x){}", self.first, self.second)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EigenOutcome {
    Eigenvalue(i8),
    NotEigen,
}

/// Applies the integer matrix exactly: returns the eigenvalue iff
/// M u = lambda u with lambda in {+1, -1}.
pub fn eigen_check(u: &Ray, obs: ProductObservable) -> Result<EigenOutcome, QuantumError> {
    if u.dim() != 4 {
        return Err(RayError::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        }
        .into());
    }
    let m = obs.matrix();
    let image: Vec<Int> = (0..4)
        .map(|r| {
            (0..4)
                .map(|c| Int::from(m[r][c]) * &u.components()[c])
                .sum()
        })
        .collect();
    for lambda in [1i8, -1] {
        if (0..4).all(|i| {
            let scaled = if lambda == 1 {
                u.components()[i].clone()
            } else {
                -&u.components()[i]
            };
            image[i] == scaled
        }) {
            return Ok(EigenOutcome::Eigenvalue(lambda));
        }
    }
    Ok(EigenOutcome::NotEigen)
}

/// Values forced by preparation and optional postselection: 1 on rays
/// parallel to either state, 0 on rays orthogonal to either.
pub fn forced_values(
    set: &RaySet,
    pre: &State,
    post: Option<&State>,
) -> Result<Assignment, QuantumError> {
    if let Some(post) = post {
        if pre.ray.inner(&post.ray)?.is_zero() {
            return Err(QuantumError::ImpossiblePostselection);
        }
    }
    let mut out = Assignment::new();
    let states: Vec<&State> = std::iter::once(pre).chain(post).collect();
    for (id, ray) in set.iter().enumerate() {
        for s in &states {
            if ray == &s.ray {
                out.set(id, true);
            } else if ray.inner(&s.ray)?.is_zero() {
                out.set(id, false);
            }
        }
    }
    Ok(out)
}

/// One surviving constraint of a state-specific reduction: the members of a
/// parent basis that were not discarded, and whether the discarded state is
/// in their span (which is what justifies keeping the sum-one reading).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedConstraint {
    pub members: Vec<usize>,
    pub span_ok: bool,
}

/// Result of reducing a constraint system by a prepared state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    /// Id of the state's ray inside the parent set, when present.
    pub state_id: Option<usize>,
    /// Discarded ids: the state's ray and every ray orthogonal to it.
    pub removed: Vec<usize>,
    /// Surviving ids, ascending.
    pub kept: Vec<usize>,
    /// Indices (into the input basis list) of bases containing the state's ray.
    pub dropped_bases: Vec<usize>,
    /// Surviving constraints in input basis order.
    pub constraints: Vec<ReducedConstraint>,
}

impl ReducedSystem {
    pub fn all_spans_ok(&self) -> bool {
        self.constraints.iter().all(|c| c.span_ok)
    }

    /// Constraint system over the kept rays. Span-checked constraints keep
    /// their sum-one reading; flagged ones are demoted to pairwise
    /// exclusivity among their members, never silently treated as sum-one.
    pub fn to_constraint_system(&self) -> ConstraintSystem {
        let mut sum_one = Vec::new();
        let mut pairs = Vec::new();
        for c in &self.constraints {
            if c.span_ok {
                sum_one.push(c.members.clone());
            } else {
                for (k, &a) in c.members.iter().enumerate() {
                    for &b in &c.members[k + 1..] {
                        pairs.push((a, b));
                    }
                }
            }
        }
        let mode = if pairs.is_empty() {
            Mode::BasesOnly
        } else {
            Mode::BasesAndPairs
        };
        ConstraintSystem::from_parts(self.kept.clone(), sum_one, pairs, mode)
            .expect("kept ids cover all members")
    }
}

/// Removes the state's ray and everything orthogonal to it, drops bases
/// containing the state's ray, and emits each remaining basis as a
/// constraint over its surviving members together with the span check that
/// justifies its sum-one reading.
pub fn state_reduce(
    set: &RaySet,
    bases: &[Basis],
    state: &State,
) -> Result<ReducedSystem, QuantumError> {
    let state_id = set.id_of(&state.ray);
    let mut removed = Vec::new();
    for (id, ray) in set.iter().enumerate() {
        if ray == &state.ray || ray.inner(&state.ray)?.is_zero() {
            removed.push(id);
        }
    }
    let kept: Vec<usize> = (0..set.len()).filter(|id| !removed.contains(id)).collect();
    let mut dropped_bases = Vec::new();
    let mut constraints = Vec::new();
    for (bi, basis) in bases.iter().enumerate() {
        if state_id.is_some_and(|sid| basis.contains(sid)) {
            dropped_bases.push(bi);
            continue;
        }
        let members: Vec<usize> = basis
            .ids()
            .iter()
            .copied()
            .filter(|id| !removed.contains(id))
            .collect();
        let span_ok = in_span(&state.ray, members.iter().map(|&id| set.ray(id)))?;
        constraints.push(ReducedConstraint { members, span_ok });
    }
    Ok(ReducedSystem {
        state_id,
        removed,
        kept,
        dropped_bases,
        constraints,
    })
}

/// Outcome of seeding a bases-and-pairs system with pre/post forced values
/// and propagating.
#[derive(Clone, Debug)]
pub enum HardyOutcome {
    Contradiction(ContradictionReport),
    NoContradiction(Assignment),
}

impl HardyOutcome {
    pub fn is_contradiction(&self) -> bool {
        matches!(self, HardyOutcome::Contradiction(_))
    }
}

/// Builds the bases-and-pairs system of `set`, seeds it with the values
/// forced by `pre` (and `post`, when given), and runs propagation. The
/// contradiction report carries the full forcing trace.
pub fn hardy_run(
    set: &RaySet,
    pre: &State,
    post: Option<&State>,
) -> Result<HardyOutcome, QuantumError> {
    let cs = ConstraintSystem::build(set, Mode::BasesAndPairs);
    let seed = forced_values(set, pre, post)?;
    match propagate(&cs, &seed).expect("forced ids come from the set") {
        PropagationOutcome::Contradiction(report) => Ok(HardyOutcome::Contradiction(report)),
        PropagationOutcome::Fixpoint(a) => Ok(HardyOutcome::NoContradiction(a)),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Particle {
    One,
    Two,
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Particle::One => write!(f, "1"),
            Particle::Two => write!(f, "2"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A single-particle spin outcome, e.g. "sigma_x of particle 2 came out +1".
/// Its projector is rank 2 on the pair space.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LocalEvent {
    pub particle: Particle,
    pub axis: Axis,
    pub outcome: Sign,
}

impl LocalEvent {
    pub fn new(particle: Particle, axis: Axis, outcome: Sign) -> Self {
        LocalEvent {
            particle,
            axis,
            outcome,
        }
    }

    /// The qubit eigenvector: z maps to (1,0)/(0,1), x to (1,1)/(1,-1).
    pub fn eigenvector(&self) -> Ray {
        let v: [i64; 2] = match (self.axis, self.outcome) {
            (Axis::Z, Sign::Plus) => [1, 0],
            (Axis::Z, Sign::Minus) => [0, 1],
            (Axis::X, Sign::Plus) => [1, 1],
            (Axis::X, Sign::Minus) => [1, -1],
        };
        Ray::from_ints(&v).expect("nonzero")
    }
}

impl fmt::Display for LocalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = match self.axis {
            Axis::X => "x",
            Axis::Z => "z",
        };
        let sign = match self.outcome {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        };
        write!(f, "{axis}{}={sign}", self.particle)
    }
}

impl FromStr for LocalEvent {
    type Err = String;

    /// Accepts the display form: `x2=+1`, `z1=-1` (the `+` is optional).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || format!("bad event {s:?}; expected e.g. x2=+1 or z1=-1");
        let (lhs, rhs) = s.split_once('=').ok_or_else(err)?;
        let axis = match lhs.as_bytes().first() {
            Some(b'x') | Some(b'X') => Axis::X,
            Some(b'z') | Some(b'Z') => Axis::Z,
            _ => return Err(err()),
        };
        let particle = match &lhs[1..] {
            "1" => Particle::One,
            "2" => Particle::Two,
            _ => return Err(err()),
        };
        let outcome = match rhs {
            "+1" | "1" => Sign::Plus,
            "-1" => Sign::Minus,
            _ => return Err(err()),
        };
        Ok(LocalEvent::new(particle, axis, outcome))
    }
}

/// Rank-1 product ray of two events on distinct particles.
fn joint_ray(a: &LocalEvent, b: &LocalEvent) -> Result<Ray, QuantumError> {
    if a.particle == b.particle {
        return Err(QuantumError::SameParticle);
    }
    let (p1, p2) = match a.particle {
        Particle::One => (a, b),
        Particle::Two => (b, a),
    };
    Ok(p1.eigenvector().tensor(&p2.eigenvector())?)
}

/// Exact probability of the joint outcome of two local events.
pub fn joint_probability(
    state: &State,
    a: &LocalEvent,
    b: &LocalEvent,
) -> Result<Scalar, QuantumError> {
    born(state, &joint_ray(a, b)?)
}

/// Exact probability of a single local event: its rank-2 projector is
/// summed over the z eigenpair (1,0), (0,1) on the free particle slot.
pub fn event_probability(state: &State, event: &LocalEvent) -> Result<Scalar, QuantumError> {
    let eigen = event.eigenvector();
    let mut total = Scalar::zero();
    for free in [[1i64, 0], [0, 1]] {
        let other = Ray::from_ints(&free).expect("nonzero");
        let product = match event.particle {
            Particle::One => eigen.tensor(&other)?,
            Particle::Two => other.tensor(&eigen)?,
        };
        total += born(state, &product)?;
    }
    Ok(total)
}

/// P(a | given) = P(a and given) / P(given), both exact.
pub fn conditional_probability(
    state: &State,
    a: &LocalEvent,
    given: &LocalEvent,
) -> Result<Scalar, QuantumError> {
    if a.particle == given.particle {
        return Err(QuantumError::SameParticle);
    }
    let denominator = event_probability(state, given)?;
    if denominator.is_zero() {
        return Err(QuantumError::ConditionHasZeroProbability);
    }
    Ok(joint_probability(state, a, given)? / denominator)
}

/// A local value forced by the pre/post argument, e.g. "ray (1,1) on
/// particle 1 is valued 1".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedLocal {
    pub particle: Particle,
    pub ray: Ray,
    pub value: bool,
}

/// The four exact probabilities that translate a pre/post pair into local
/// terms, plus the forced local values that the noncontextual reading
/// assigns along the way. The nonlocality pattern holds when the two
/// conditionals are 1, the joint z-minus probability is 0, and the
/// postselection probability is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardyRecord {
    /// P(z1 = -1 | x2 = +1)
    pub cond_z1_given_x2: Scalar,
    /// P(z2 = -1 | x1 = +1)
    pub cond_z2_given_x1: Scalar,
    /// P(z1 = -1, z2 = -1)
    pub joint_z_minus: Scalar,
    /// P(x1 = +1, x2 = +1)
    pub joint_x_plus: Scalar,
    pub forced: Vec<ForcedLocal>,
}

impl HardyRecord {
    pub fn is_nonlocality_pattern(&self) -> bool {
        self.cond_z1_given_x2.is_one()
            && self.cond_z2_given_x1.is_one()
            && self.joint_z_minus.is_zero()
            && self.joint_x_plus.is_positive()
    }
}

/// Computes the four record probabilities for `pre`, with the forced local
/// values derived from the factors of `post`: the postselected factors are
/// valued 1 on their particles, and whenever `pre` is orthogonal to
/// (1,0) (x) factor on the opposite slot, the z chain on that particle
/// forces (1,0) to 0 and (0,1) to 1.
pub fn nonlocality_report(pre: &State, post: &State) -> Result<HardyRecord, QuantumError> {
    let Factorization::Product { first, second } = post.ray().factorize()? else {
        return Err(QuantumError::NotFactorizable);
    };
    if pre.ray.inner(&post.ray)?.is_zero() {
        return Err(QuantumError::ImpossiblePostselection);
    }
    let z1_minus = LocalEvent::new(Particle::One, Axis::Z, Sign::Minus);
    let z2_minus = LocalEvent::new(Particle::Two, Axis::Z, Sign::Minus);
    let x1_plus = LocalEvent::new(Particle::One, Axis::X, Sign::Plus);
    let x2_plus = LocalEvent::new(Particle::Two, Axis::X, Sign::Plus);

    let mut forced = vec![
        ForcedLocal {
            particle: Particle::One,
            ray: first.clone(),
            value: true,
        },
        ForcedLocal {
            particle: Particle::Two,
            ray: second.clone(),
            value: true,
        },
    ];
    let z_plus = Ray::from_ints(&[1, 0]).expect("nonzero");
    let z_minus = Ray::from_ints(&[0, 1]).expect("nonzero");
    // Particle 1 chain: when pre is orthogonal to (1,0)(x)second, the
    // product value is 0 while v(second) = 1, so v(1,0) = 0 and the
    // one-particle basis rule forces v(0,1) = 1.
    if pre.ray.inner(&z_plus.tensor(&second)?)?.is_zero() {
        forced.push(ForcedLocal {
            particle: Particle::One,
            ray: z_plus.clone(),
            value: false,
        });
        forced.push(ForcedLocal {
            particle: Particle::One,
            ray: z_minus.clone(),
            value: true,
        });
    }
    if pre.ray.inner(&first.tensor(&z_plus)?)?.is_zero() {
        forced.push(ForcedLocal {
            particle: Particle::Two,
            ray: z_plus,
            value: false,
        });
        forced.push(ForcedLocal {
            particle: Particle::Two,
            ray: z_minus,
            value: true,
        });
    }
    Ok(HardyRecord {
        cond_z1_given_x2: conditional_probability(pre, &z1_minus, &x2_plus)?,
        cond_z2_given_x1: conditional_probability(pre, &z2_minus, &x1_plus)?,
        joint_z_minus: joint_probability(pre, &z1_minus, &z2_minus)?,
        joint_x_plus: joint_probability(pre, &x1_plus, &x2_plus)?,
        forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(v: &[i64]) -> Ray {
        Ray::from_ints(v).unwrap()
    }

    fn rational(n: i64, d: i64) -> Scalar {
        Scalar::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn born_examples() {
        let eta = State::new(ray(&[1, -1, -1, 0]));
        assert!(born(&eta, &ray(&[0, 0, 0, 1])).unwrap().is_zero());
        assert_eq!(born(&eta, &ray(&[1, 1, 1, 1])).unwrap(), rational(1, 12));
        let singlet = State::new(ray(&[0, 1, -1, 0]));
        assert!(born(&singlet, &ray(&[0, 1, -1, 0])).unwrap().is_one());
    }

    #[test]
    fn born_rejects_dimension_mismatch() {
        let s = State::new(ray(&[1, 0]));
        assert!(born(&s, &ray(&[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn eigen_examples() {
        let u = ray(&[1, -1, 1, 1]);
        assert_eq!(
            eigen_check(&u, ProductObservable::new(Pauli::Z, Pauli::X)).unwrap(),
            EigenOutcome::Eigenvalue(-1)
        );
        assert_eq!(
            eigen_check(&u, ProductObservable::new(Pauli::X, Pauli::Z)).unwrap(),
            EigenOutcome::Eigenvalue(1)
        );
        assert_eq!(
            eigen_check(
                &ray(&[0, 1, -1, 0]),
                ProductObservable::new(Pauli::Z, Pauli::Z)
            )
            .unwrap(),
            EigenOutcome::Eigenvalue(-1)
        );
        assert_eq!(
            eigen_check(
                &ray(&[1, 1, 0, 0]),
                ProductObservable::new(Pauli::X, Pauli::X)
            )
            .unwrap(),
            EigenOutcome::NotEigen
        );
    }

    #[test]
    fn forced_values_reject_orthogonal_postselection() {
        let set = RaySet::from_rays(vec![ray(&[1, 0, 0, 0])]).unwrap();
        let pre = State::new(ray(&[1, 0, 0, 0]));
        let post = State::new(ray(&[0, 1, 0, 0]));
        assert_eq!(
            forced_values(&set, &pre, Some(&post)),
            Err(QuantumError::ImpossiblePostselection)
        );
    }

    #[test]
    fn local_event_round_trips_text() {
        for s in ["x1=+1", "x2=-1", "z1=-1", "z2=+1"] {
            let e: LocalEvent = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!("y1=+1".parse::<LocalEvent>().is_err());
        assert!("x3=+1".parse::<LocalEvent>().is_err());
        assert!("x1=2".parse::<LocalEvent>().is_err());
    }

    #[test]
    fn conditional_examples() {
        let eta = State::new(ray(&[1, -1, -1, 0]));
        let z1m = LocalEvent::new(Particle::One, Axis::Z, Sign::Minus);
        let x2p = LocalEvent::new(Particle::Two, Axis::X, Sign::Plus);
        assert_eq!(event_probability(&eta, &x2p).unwrap(), rational(1, 6));
        assert!(conditional_probability(&eta, &z1m, &x2p).unwrap().is_one());
        let z2m = LocalEvent::new(Particle::Two, Axis::Z, Sign::Minus);
        let x1p = LocalEvent::new(Particle::One, Axis::X, Sign::Plus);
        assert!(conditional_probability(&eta, &z2m, &x1p).unwrap().is_one());
    }

    #[test]
    fn conditional_rejects_zero_probability_condition() {
        let plus_plus = State::new(ray(&[1, 0, 0, 0]));
        let z1m = LocalEvent::new(Particle::One, Axis::Z, Sign::Minus);
        let z2m = LocalEvent::new(Particle::Two, Axis::Z, Sign::Minus);
        assert_eq!(
            conditional_probability(&plus_plus, &z1m, &z2m),
            Err(QuantumError::ConditionHasZeroProbability)
        );
    }

    #[test]
    fn conditional_rejects_same_particle() {
        let eta = State::new(ray(&[1, -1, -1, 0]));
        let a = LocalEvent::new(Particle::One, Axis::Z, Sign::Minus);
        let b = LocalEvent::new(Particle::One, Axis::X, Sign::Plus);
        assert_eq!(
            conditional_probability(&eta, &a, &b),
            Err(QuantumError::SameParticle)
        );
    }

    #[test]
    fn report_rejects_entangled_postselection() {
        let eta = State::new(ray(&[1, -1, -1, 0]));
        let singlet = State::new(ray(&[0, 1, -1, 0]));
        assert_eq!(
            nonlocality_report(&eta, &singlet),
            Err(QuantumError::NotFactorizable)
        );
    }

    #[test]
    fn report_rejects_orthogonal_postselection() {
        let pre = State::new(ray(&[1, 0, 0, 0]));
        let post = State::new(ray(&[0, 0, 0, 1]));
        assert_eq!(
            nonlocality_report(&pre, &post),
            Err(QuantumError::ImpossiblePostselection)
        );
    }
}
