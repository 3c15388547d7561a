//! Property tests for the projective layer: canonical form, inner products,
//! symmetry transport, tensor/factorize round trips, basis enumeration.

use bks_core::{catalog, Basis, Factorization, Int, Ray, RaySet, Scalar, SignedPermutation};
use num::{One, Zero};
use proptest::prelude::*;

fn nonzero_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, dim).prop_filter("not all zero", |v| v.iter().any(|&c| c != 0))
}

fn scalar(n: i64, d: i64) -> Scalar {
    Scalar::new(Int::from(n), Int::from(d))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(v in nonzero_vec(4)) {
        let r = Ray::from_ints(&v).unwrap();
        let again = Ray::from_components(r.components().to_vec()).unwrap();
        prop_assert_eq!(&again, &r);
    }

    #[test]
    fn canonicalize_is_scale_invariant(
        v in nonzero_vec(4),
        num in (-9i64..=9).prop_filter("nonzero", |&n| n != 0),
        den in 1i64..=9,
    ) {
        let lambda = scalar(num, den);
        let scaled: Vec<Scalar> = v.iter().map(|&c| scalar(c, 1) * &lambda).collect();
        prop_assert_eq!(Ray::new(&scaled).unwrap(), Ray::from_ints(&v).unwrap());
    }

    #[test]
    fn canonical_form_invariants(v in nonzero_vec(4)) {
        let r = Ray::from_ints(&v).unwrap();
        let mut gcd = Int::zero();
        for c in r.components() {
            gcd = num::Integer::gcd(&gcd, c);
        }
        prop_assert_eq!(gcd, Int::one());
        let first = r.components().iter().find(|c| !c.is_zero()).unwrap();
        prop_assert!(first > &Int::zero());
    }

    #[test]
    fn inner_is_symmetric(a in nonzero_vec(4), b in nonzero_vec(4)) {
        let a = Ray::from_ints(&a).unwrap();
        let b = Ray::from_ints(&b).unwrap();
        prop_assert_eq!(a.inner(&b).unwrap(), b.inner(&a).unwrap());
    }

    #[test]
    fn symmetry_preserves_orthogonality(
        a in nonzero_vec(4),
        b in nonzero_vec(4),
        which in 0usize..384,
    ) {
        let a = Ray::from_ints(&a).unwrap();
        let b = Ray::from_ints(&b).unwrap();
        let g = &SignedPermutation::all(4)[which];
        let before = a.is_orthogonal_to(&b).unwrap();
        let after = g.apply_ray(&a).unwrap().is_orthogonal_to(&g.apply_ray(&b).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn factorize_inverts_tensor(a in nonzero_vec(2), b in nonzero_vec(2)) {
        let a = Ray::from_ints(&a).unwrap();
        let b = Ray::from_ints(&b).unwrap();
        let product = a.tensor(&b).unwrap();
        match product.factorize().unwrap() {
            Factorization::Product { first, second } => {
                prop_assert_eq!(first, a);
                prop_assert_eq!(second, b);
            }
            Factorization::Entangled => prop_assert!(false, "tensor products factorize"),
        }
    }

    #[test]
    fn factorization_reproduces_the_ray(v in nonzero_vec(4)) {
        let r = Ray::from_ints(&v).unwrap();
        if let Factorization::Product { first, second } = r.factorize().unwrap() {
            prop_assert_eq!(first.tensor(&second).unwrap(), r);
        }
    }
}

#[test]
fn enumerate_bases_ignores_input_order() {
    let ceg = catalog::ceg18().rays;
    let mut reversed: Vec<Ray> = ceg.iter().cloned().collect();
    reversed.reverse();
    let shuffled = RaySet::from_rays(reversed).unwrap();
    let as_rays = |set: &RaySet, bases: Vec<Basis>| -> Vec<Vec<Ray>> {
        let mut out: Vec<Vec<Ray>> = bases
            .into_iter()
            .map(|b| {
                let mut rays: Vec<Ray> = b.ids().iter().map(|&id| set.ray(id).clone()).collect();
                rays.sort();
                rays
            })
            .collect();
        out.sort();
        out
    };
    assert_eq!(
        as_rays(&ceg, ceg.enumerate_bases()),
        as_rays(&shuffled, shuffled.enumerate_bases())
    );
}

#[test]
fn basis_projectors_sum_to_identity() {
    // For u with integer components, the projector is u u^T / <u,u>; over a
    // complete basis the sum must be the exact identity matrix.
    for entry in [catalog::ceg18(), catalog::peres24()] {
        let set = &entry.rays;
        let bases = set.enumerate_bases();
        assert!(!bases.is_empty());
        for basis in bases {
            let mut sum = vec![vec![Scalar::zero(); 4]; 4];
            for &id in basis.ids() {
                let u = set.ray(id);
                let norm = u.norm_sq();
                for (row, ci) in sum.iter_mut().zip(u.components()) {
                    for (cell, cj) in row.iter_mut().zip(u.components()) {
                        *cell = &*cell + Scalar::new(ci * cj, norm.clone());
                    }
                }
            }
            for (i, row) in sum.iter().enumerate() {
                for (j, value) in row.iter().enumerate() {
                    let expected = if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    };
                    assert_eq!(value, &expected, "projector sum entry ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn identity_symmetry_fixes_ceg18() {
    let ceg = catalog::ceg18().rays;
    let id = SignedPermutation::identity(4);
    assert_eq!(id.apply_set(&ceg).unwrap(), ceg);
}

#[test]
fn some_symmetry_reaches_every_hardy_ray() {
    // Brute force over the 384 signed permutations: each of the 16
    // edge-center rays is the image of (1,-1,-1,0).
    let eta = Ray::from_ints(&[1, -1, -1, 0]).unwrap();
    let group = SignedPermutation::all(4);
    for target in catalog::hardy_rays().rays.iter() {
        assert!(
            group.iter().any(|g| &g.apply_ray(&eta).unwrap() == target),
            "no signed permutation reaches {target}"
        );
    }
}
