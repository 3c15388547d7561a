//! Exact projective linear algebra over the rationals.
//!
//! A [`Ray`] is the projective class of a nonzero rational vector, stored in
//! a canonical form that makes equality a plain component comparison:
//! coprime integer components with the first nonzero one positive. Every
//! operation in this module is exact; there is no floating point anywhere.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use sha2::{Digest, Sha256};

/// Arbitrary-precision integer used for canonical ray components.
pub type Int = BigInt;
/// Arbitrary-precision rational; always stored reduced with positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RayError {
    #[error("zero vector has no projective direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate ray at position {index}")]
    DuplicateRay { index: usize },
    #[error("invalid signed permutation")]
    InvalidPermutation,
}

/// A projective direction in rational d-space, canonicalized.
///
/// Canonical form: coprime integer components, first nonzero component
/// positive. Two rays are equal iff their canonical components are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    components: Vec<Int>,
}

impl Ray {
    /// Canonicalizes a rational vector into its unique projective representative.
    pub fn new(raw: &[Scalar]) -> Result<Self, RayError> {
        let mut lcm = Int::one();
        for c in raw {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<Int> = raw.iter().map(|c| (c * &lcm).to_integer()).collect();
        Self::from_components(ints)
    }

    /// Canonicalizes an integer vector.
    pub fn from_components(raw: Vec<Int>) -> Result<Self, RayError> {
        let mut gcd = Int::zero();
        for c in &raw {
            gcd = gcd.gcd(c);
        }
        if gcd.is_zero() {
            return Err(RayError::ZeroVector);
        }
        let mut components: Vec<Int> = raw.into_iter().map(|c| c / &gcd).collect();
        if let Some(first) = components.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                for c in &mut components {
                    *c = -std::mem::take(c);
                }
            }
        }
        Ok(Ray { components })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(raw: &[i64]) -> Result<Self, RayError> {
        Self::from_components(raw.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Int] {
        &self.components
    }

    /// Exact Euclidean inner product of the canonical components.
    pub fn inner(&self, other: &Ray) -> Result<Int, RayError> {
        if self.dim() != other.dim() {
            return Err(RayError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn is_orthogonal_to(&self, other: &Ray) -> Result<bool, RayError> {
        Ok(self.inner(other)?.is_zero())
    }

    /// Squared Euclidean norm of the canonical components.
    pub fn norm_sq(&self) -> Int {
        self.components.iter().map(|c| c * c).sum()
    }

    /// Kronecker product of two qubit rays, in the basis order
    /// |++>, |+->, |-+>, |--> with |+> = (1,0) the sigma_z = +1 eigenstate.
    pub fn tensor(&self, other: &Ray) -> Result<Ray, RayError> {
        for r in [self, other] {
            if r.dim() != 2 {
                return Err(RayError::DimensionMismatch {
                    expected: 2,
                    found: r.dim(),
                });
            }
        }
        let a = &self.components;
        let b = &other.components;
        Ray::from_components(vec![
            &a[0] * &b[0],
            &a[0] * &b[1],
            &a[1] * &b[0],
            &a[1] * &b[1],
        ])
    }

    /// Rank-1 test on the 2x2 reshape: a 4-dim ray factorizes as a tensor
    /// product of two qubit rays iff u0*u3 - u1*u2 = 0.
    pub fn factorize(&self) -> Result<Factorization, RayError> {
        if self.dim() != 4 {
            return Err(RayError::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            });
        }
        let u = &self.components;
        if &u[0] * &u[3] != &u[1] * &u[2] {
            return Ok(Factorization::Entangled);
        }
        // Reshape rows (u0,u1),(u2,u3): rows are proportional, so any nonzero
        // row is the second factor and any nonzero column the first.
        let second = if !u[0].is_zero() || !u[1].is_zero() {
            Ray::from_components(vec![u[0].clone(), u[1].clone()])?
        } else {
            Ray::from_components(vec![u[2].clone(), u[3].clone()])?
        };
        let first = if !u[0].is_zero() || !u[2].is_zero() {
            Ray::from_components(vec![u[0].clone(), u[2].clone()])?
        } else {
            Ray::from_components(vec![u[1].clone(), u[3].clone()])?
        };
        debug_assert_eq!(first.tensor(&second).unwrap(), *self);
        Ok(Factorization::Product { first, second })
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray{self}")
    }
}

/// Outcome of the 2x2 rank test on a 4-dim ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    Product { first: Ray, second: Ray },
    Entangled,
}

impl Factorization {
    pub fn is_entangled(&self) -> bool {
        matches!(self, Factorization::Entangled)
    }
}

/// An ordered set of distinct canonical rays sharing one dimension.
/// The id of a ray is its index in the list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RaySet {
    dim: usize,
    rays: Vec<Ray>,
    index: HashMap<Ray, usize>,
}

impl RaySet {
    pub fn empty(dim: usize) -> Self {
        RaySet {
            dim,
            rays: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Builds a set from already-canonical rays; rejects duplicates and
    /// mixed dimensions.
    pub fn from_rays(rays: impl IntoIterator<Item = Ray>) -> Result<Self, RayError> {
        let rays: Vec<Ray> = rays.into_iter().collect();
        let dim = rays.first().map(Ray::dim).unwrap_or(0);
        let mut index = HashMap::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(RayError::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if index.insert(r.clone(), i).is_some() {
                return Err(RayError::DuplicateRay { index: i });
            }
        }
        Ok(RaySet { dim, rays, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, id: usize) -> &Ray {
        &self.rays[id]
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ray> {
        self.rays.iter()
    }

    pub fn id_of(&self, ray: &Ray) -> Option<usize> {
        self.index.get(ray).copied()
    }

    pub fn contains(&self, ray: &Ray) -> bool {
        self.index.contains_key(ray)
    }

    /// One ray per line, components space-separated; the parseable text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rays {
            let line: Vec<String> = r.components().iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical text form; identifies the set and its id order.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }

    pub fn orthogonality_graph(&self) -> OrthogonalityGraph {
        let n = self.len();
        let mut adjacent = vec![vec![false; n]; n];
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if self.rays[i]
                    .is_orthogonal_to(&self.rays[j])
                    .expect("same dim")
                {
                    adjacent[i][j] = true;
                    adjacent[j][i] = true;
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        OrthogonalityGraph {
            n,
            adjacent,
            neighbors,
        }
    }

    /// All complete orthogonal bases: dim-cliques of the orthogonality graph,
    /// each exactly once, in ascending lexicographic id order.
    pub fn enumerate_bases(&self) -> Vec<Basis> {
        let graph = self.orthogonality_graph();
        let mut out = Vec::new();
        if self.dim < 2 || self.len() < self.dim {
            return out;
        }
        let mut stack = Vec::with_capacity(self.dim);
        self.extend_clique(&graph, &mut stack, 0, &mut out);
        out
    }

    fn extend_clique(
        &self,
        graph: &OrthogonalityGraph,
        stack: &mut Vec<usize>,
        from: usize,
        out: &mut Vec<Basis>,
    ) {
        if stack.len() == self.dim {
            out.push(Basis::new(stack.clone()));
            return;
        }
        for v in from..self.len() {
            if stack.iter().all(|&u| graph.adjacent(u, v)) {
                stack.push(v);
                self.extend_clique(graph, stack, v + 1, out);
                stack.pop();
            }
        }
    }
}

/// Adjacency structure of the pairwise-orthogonality relation of a [`RaySet`].
#[derive(Clone, Debug)]
pub struct OrthogonalityGraph {
    n: usize,
    adjacent: Vec<Vec<bool>>,
    neighbors: Vec<Vec<usize>>,
}

impl OrthogonalityGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacent[i][j]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Edges (i, j) with i < j, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &j in &self.neighbors[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// A set of exactly `dim` mutually orthogonal ray ids; the projectors of
/// its members sum to the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Basis {
    ids: Vec<usize>,
}

impl Basis {
    /// Orthogonality is the caller's responsibility; see [`Basis::verify`].
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Basis { ids }
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// Checks membership count and mutual orthogonality against a ray set.
    pub fn verify(&self, set: &RaySet) -> bool {
        if self.ids.len() != set.dim() {
            return false;
        }
        if self.ids.iter().any(|&id| id >= set.len()) {
            return false;
        }
        for (k, &i) in self.ids.iter().enumerate() {
            for &j in &self.ids[k + 1..] {
                if !set.ray(i).is_orthogonal_to(set.ray(j)).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }
}

/// True iff `target` is a rational linear combination of `generators`,
/// decided by exact Gaussian elimination.
pub fn in_span<'a>(
    target: &Ray,
    generators: impl IntoIterator<Item = &'a Ray>,
) -> Result<bool, RayError> {
    let dim = target.dim();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in generators {
        if g.dim() != dim {
            return Err(RayError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        rows.push(
            g.components()
                .iter()
                .map(|c| Scalar::from(c.clone()))
                .collect(),
        );
    }
    let mut residual: Vec<Scalar> = target
        .components()
        .iter()
        .map(|c| Scalar::from(c.clone()))
        .collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let pivot = rows[pivot_row][col].clone();
        for c in &mut rows[pivot_row] {
            *c = &*c / &pivot;
        }
        let pivot_vals = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_vals) {
                    let delta = p * &factor;
                    *cell = &*cell - delta;
                }
            }
        }
        if !residual[col].is_zero() {
            let factor = residual[col].clone();
            for (res, p) in residual.iter_mut().zip(&pivot_vals) {
                let delta = p * &factor;
                *res = &*res - delta;
            }
        }
        pivot_row += 1;
    }
    Ok(residual.iter().all(Scalar::is_zero))
}

/// A coordinate permutation combined with per-coordinate sign flips; maps
/// rays to rays and preserves inner-product-zero relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    /// `perm[i]` is where coordinate `i` goes; `signs[i]` multiplies it.
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, RayError> {
        let n = perm.len();
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(RayError::InvalidPermutation);
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(RayError::InvalidPermutation);
            }
            seen[p] = true;
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(dim: usize) -> Self {
        SignedPermutation {
            perm: (0..dim).collect(),
            signs: vec![1; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply_ray(&self, ray: &Ray) -> Result<Ray, RayError> {
        if ray.dim() != self.dim() {
            return Err(RayError::DimensionMismatch {
                expected: self.dim(),
                found: ray.dim(),
            });
        }
        let mut out = vec![Int::zero(); self.dim()];
        for (i, c) in ray.components().iter().enumerate() {
            out[self.perm[i]] = if self.signs[i] == 1 { c.clone() } else { -c };
        }
        Ray::from_components(out)
    }

    /// Applies the map ray-by-ray, preserving id order.
    pub fn apply_set(&self, set: &RaySet) -> Result<RaySet, RayError> {
        let rays: Result<Vec<Ray>, RayError> = set.iter().map(|r| self.apply_ray(r)).collect();
        RaySet::from_rays(rays?)
    }

    /// The full hyperoctahedral group of the given dimension: all
    /// dim! * 2^dim signed permutations (384 for dim 4). Intended for
    /// small dimensions.
    pub fn all(dim: usize) -> Vec<SignedPermutation> {
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..dim).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        let mut out = Vec::with_capacity(perms.len() << dim);
        for perm in perms {
            for bits in 0..1u32 << dim {
                let signs: Vec<i8> = (0..dim)
                    .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                out.push(SignedPermutation {
                    perm: perm.clone(),
                    signs,
                });
            }
        }
        out
    }
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}
