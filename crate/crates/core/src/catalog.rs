//! Built-in ray sets and named states, verified at load.
//!
//! The 18-ray set ships with its nine declared tetrads; the 24-ray and
//! 16-ray families are generated from their tesseract geometry rather than
//! hard-coded, then deduplicated projectively.

use crate::quantum::State;
use crate::ray::{Basis, Ray, RaySet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog key {0:?} (expected one of {1})")]
    UnknownKey(String, &'static str),
}

/// A named, provenance-checked ray set.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub rays: RaySet,
    pub declared_bases: Option<Vec<Basis>>,
    pub notes: &'static str,
}

pub const RAY_SET_KEYS: [&str; 3] = ["ceg18", "peres24", "hardy16"];
pub const STATE_KEYS: [&str; 3] = ["singlet", "hardy", "phi-xx"];

/// The nine tetrads whose eighteen distinct rays admit no noncontextual
/// assignment: the sum over each tetrad must be 1, yet every ray sits in
/// exactly two tetrads, so the total of nine ones would have to be even.
const CEG18_TETRADS: [[[i64; 4]; 4]; 9] = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
    [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
    [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
    [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
    [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
    [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
    [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
    [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
];

fn push_unique(rays: &mut Vec<Ray>, ray: Ray) {
    if !rays.contains(&ray) {
        rays.push(ray);
    }
}

/// The 18-ray set with its 9 declared tetrads, rays in first-appearance
/// order.
pub fn ceg18() -> CatalogEntry {
    let mut rays: Vec<Ray> = Vec::with_capacity(18);
    for tetrad in &CEG18_TETRADS {
        for v in tetrad {
            push_unique(&mut rays, Ray::from_ints(v).expect("nonzero"));
        }
    }
    let set = RaySet::from_rays(rays).expect("deduplicated");
    assert_eq!(set.len(), 18, "tetrad data must yield 18 distinct rays");
    let declared: Vec<Basis> = CEG18_TETRADS
        .iter()
        .map(|tetrad| {
            Basis::new(
                tetrad
                    .iter()
                    .map(|v| {
                        set.id_of(&Ray::from_ints(v).expect("nonzero"))
                            .expect("tetrad member is in the set")
                    })
                    .collect(),
            )
        })
        .collect();
    for basis in &declared {
        assert!(basis.verify(&set), "declared tetrad must be orthogonal");
    }
    CatalogEntry {
        key: "ceg18",
        rays: set,
        declared_bases: Some(declared),
        notes: "18 rays in dimension 4 forming 9 orthogonal tetrads, each ray in exactly two",
    }
}

/// The 24 tesseract directions, generated from the geometry: 4 cube-face
/// axes, 12 square-center diagonals (two nonzero +-1 components), 8 vertex
/// diagonals (four +-1 components), deduplicated projectively.
pub fn peres24() -> CatalogEntry {
    let mut rays: Vec<Ray> = Vec::with_capacity(24);
    for i in 0..4 {
        let mut v = [0i64; 4];
        v[i] = 1;
        push_unique(&mut rays, Ray::from_ints(&v).expect("nonzero"));
    }
    let axes = rays.len();
    for i in 0..4 {
        for j in i + 1..4 {
            for si in [1i64, -1] {
                for sj in [1i64, -1] {
                    let mut v = [0i64; 4];
                    v[i] = si;
                    v[j] = sj;
                    push_unique(&mut rays, Ray::from_ints(&v).expect("nonzero"));
                }
            }
        }
    }
    let squares = rays.len() - axes;
    for s1 in [1i64, -1] {
        for s2 in [1i64, -1] {
            for s3 in [1i64, -1] {
                push_unique(
                    &mut rays,
                    Ray::from_ints(&[1, s1, s2, s3]).expect("nonzero"),
                );
            }
        }
    }
    let vertices = rays.len() - axes - squares;
    assert_eq!(
        (axes, squares, vertices),
        (4, 12, 8),
        "tesseract family sizes"
    );
    let set = RaySet::from_rays(rays).expect("deduplicated");
    let ceg = ceg18();
    assert!(
        ceg.rays.iter().all(|r| set.contains(r)),
        "the 18-ray set must be contained"
    );
    CatalogEntry {
        key: "peres24",
        rays: set,
        declared_bases: None,
        notes: "24 tesseract directions: 4 cube-face axes, 12 square centers, 8 vertex diagonals",
    }
}

/// The 16 tesseract edge-center directions: exactly one zero component and
/// three +-1 components, deduplicated projectively. All entangled and
/// disjoint from the 24-ray set.
pub fn hardy_rays() -> CatalogEntry {
    let mut rays: Vec<Ray> = Vec::with_capacity(16);
    for zero_at in 0..4 {
        for s0 in [1i64, -1] {
            for s1 in [1i64, -1] {
                for s2 in [1i64, -1] {
                    let mut v = [s0, s1, s2, 0];
                    v[zero_at..4].rotate_right(1);
                    push_unique(&mut rays, Ray::from_ints(&v).expect("nonzero"));
                }
            }
        }
    }
    let set = RaySet::from_rays(rays).expect("deduplicated");
    assert_eq!(set.len(), 16, "edge-center family size");
    assert!(set.contains(&Ray::from_ints(&[1, -1, -1, 0]).expect("nonzero")));
    let peres = peres24();
    for r in set.iter() {
        let u = r.components();
        assert!(
            &u[0] * &u[3] != &u[1] * &u[2],
            "edge-center rays are entangled"
        );
        assert!(!peres.rays.contains(r), "edge centers avoid the 24-ray set");
    }
    CatalogEntry {
        key: "hardy16",
        rays: set,
        declared_bases: None,
        notes: "16 tesseract edge-center directions; entangled two-qubit states",
    }
}

/// Looks up a built-in ray set by key.
pub fn ray_set(key: &str) -> Result<CatalogEntry, CatalogError> {
    match key {
        "ceg18" => Ok(ceg18()),
        "peres24" => Ok(peres24()),
        "hardy16" => Ok(hardy_rays()),
        other => Err(CatalogError::UnknownKey(
            other.to_string(),
            "ceg18, peres24, hardy16",
        )),
    }
}

/// Looks up a named state by key.
pub fn state(key: &str) -> Result<State, CatalogError> {
    let components: [i64; 4] = match key {
        "singlet" => [0, 1, -1, 0],
        "hardy" => [1, -1, -1, 0],
        "phi-xx" => [1, 1, 1, 1],
        other => {
            return Err(CatalogError::UnknownKey(
                other.to_string(),
                "singlet, hardy, phi-xx",
            ))
        }
    };
    Ok(State::new(Ray::from_ints(&components).expect("nonzero")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceg18_shape() {
        let entry = ceg18();
        assert_eq!(entry.rays.len(), 18);
        assert_eq!(entry.declared_bases.as_ref().unwrap().len(), 9);
    }

    #[test]
    fn peres24_contains_ceg18() {
        let peres = peres24();
        assert_eq!(peres.rays.len(), 24);
        assert!(ceg18().rays.iter().all(|r| peres.rays.contains(r)));
    }

    #[test]
    fn hardy16_shape() {
        assert_eq!(hardy_rays().rays.len(), 16);
    }

    #[test]
    fn states_resolve() {
        assert_eq!(
            state("singlet").unwrap().ray(),
            &Ray::from_ints(&[0, 1, -1, 0]).unwrap()
        );
        assert_eq!(
            state("hardy").unwrap().ray(),
            &Ray::from_ints(&[1, -1, -1, 0]).unwrap()
        );
        assert_eq!(
            state("phi-xx").unwrap().ray(),
            &Ray::from_ints(&[1, 1, 1, 1]).unwrap()
        );
        assert!(state("bell").is_err());
        assert!(ray_set("nope").is_err());
    }
}
