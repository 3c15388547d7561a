//! Frozen expected values for the quantum layer: Born probabilities,
//! forced values, the singlet reduction, the pre/post contradiction trace,
//! and the local-probability record.

use bks_core::{
    born, catalog, colorable, eigen_check, forced_values, hardy_run, nonlocality_report,
    parity_certificate, state_reduce, Clash, EigenOutcome, Factorization, HardyOutcome, Int,
    Particle, Pauli, ProductObservable, Ray, Reason, Scalar, State, TraceEvent,
};
use num::{One, Zero};

fn ray(v: &[i64]) -> Ray {
    Ray::from_ints(v).unwrap()
}

fn rational(n: i64, d: i64) -> Scalar {
    Scalar::new(Int::from(n), Int::from(d))
}

#[test]
fn born_completeness_over_every_basis() {
    let states = [
        catalog::state("singlet").unwrap(),
        catalog::state("hardy").unwrap(),
        catalog::state("phi-xx").unwrap(),
        State::new(ray(&[1, 2, 4, 8])),
    ];
    for entry in [catalog::ceg18(), catalog::peres24()] {
        for basis in entry.rays.enumerate_bases() {
            for state in &states {
                let total: Scalar = basis
                    .ids()
                    .iter()
                    .map(|&id| born(state, entry.rays.ray(id)).unwrap())
                    .sum();
                assert!(total.is_one(), "basis probabilities must sum to 1");
            }
        }
    }
}

#[test]
fn ceg18_splits_into_12_factorizable_and_6_entangled() {
    let ceg = catalog::ceg18().rays;
    let entangled: Vec<&Ray> = ceg
        .iter()
        .filter(|r| r.factorize().unwrap().is_entangled())
        .collect();
    assert_eq!(ceg.len() - entangled.len(), 12);
    assert_eq!(entangled.len(), 6);

    // Each entangled ray is a joint eigenvector of at least two of the four
    // x/z product observables.
    for r in &entangled {
        let hits = ProductObservable::xz_products()
            .iter()
            .filter(|&&obs| matches!(eigen_check(r, obs).unwrap(), EigenOutcome::Eigenvalue(_)))
            .count();
        assert!(hits >= 2, "{r} should be a joint eigenvector");
    }

    // Each factorizable ray splits into factors that are single-particle
    // sigma_z or sigma_x eigenvectors.
    let is_local_eigenvector = |f: &Ray| -> bool {
        let c = f.components();
        let z = c[1].is_zero() || c[0].is_zero();
        let x = c[0] == c[1] || c[0] == -&c[1];
        z || x
    };
    for r in ceg.iter() {
        if let Factorization::Product { first, second } = r.factorize().unwrap() {
            assert!(
                is_local_eigenvector(&first),
                "{first} not a z/x eigenvector"
            );
            assert!(
                is_local_eigenvector(&second),
                "{second} not a z/x eigenvector"
            );
        }
    }
}

#[test]
fn forced_values_for_each_named_state() {
    let ceg = catalog::ceg18().rays;
    let eta = catalog::state("hardy").unwrap();
    let phi = catalog::state("phi-xx").unwrap();
    let singlet = catalog::state("singlet").unwrap();

    // Preparation alone: zeros exactly on the rays orthogonal to eta.
    let pre_only = forced_values(&ceg, &eta, None).unwrap();
    assert_eq!(pre_only.ones(), Vec::<usize>::new());
    assert_eq!(pre_only.zeros(), vec![0, 2, 5, 14]);
    for expect_zero in [[0, 0, 0, 1], [1, 1, 0, 0], [1, 0, 1, 0]] {
        let id = ceg.id_of(&ray(&expect_zero)).unwrap();
        assert_eq!(pre_only.get(id), Some(false));
    }

    // With postselection on phi: one forced 1 and ten zeros.
    let both = forced_values(&ceg, &eta, Some(&phi)).unwrap();
    assert_eq!(both.ones(), vec![ceg.id_of(&ray(&[1, 1, 1, 1])).unwrap()]);
    assert_eq!(both.zeros(), vec![0, 2, 3, 5, 6, 7, 8, 11, 13, 14]);
    for expect_zero in [[1, -1, 0, 0], [1, 0, -1, 0]] {
        let id = ceg.id_of(&ray(&expect_zero)).unwrap();
        assert_eq!(both.get(id), Some(false));
    }

    // Singlet preparation: forced 1 on itself, zeros on its seven
    // orthogonal companions.
    let s = forced_values(&ceg, &singlet, None).unwrap();
    assert_eq!(s.ones(), vec![ceg.id_of(&ray(&[0, 1, -1, 0])).unwrap()]);
    assert_eq!(s.zeros(), vec![0, 8, 10, 12, 13, 16, 17]);
}

#[test]
fn singlet_reduction_matches_the_seven_constraint_system() {
    let entry = catalog::ceg18();
    let bases = entry.rays.enumerate_bases();
    let singlet = catalog::state("singlet").unwrap();
    let reduced = state_reduce(&entry.rays, &bases, &singlet).unwrap();

    assert_eq!(reduced.state_id, Some(14));
    assert_eq!(reduced.removed, vec![0, 8, 10, 12, 13, 14, 16, 17]);
    assert_eq!(reduced.kept, vec![1, 2, 3, 4, 5, 6, 7, 9, 11, 15]);
    assert_eq!(reduced.dropped_bases, vec![7, 8]);

    let members: Vec<Vec<usize>> = reduced
        .constraints
        .iter()
        .map(|c| c.members.clone())
        .collect();
    assert_eq!(
        members,
        vec![
            vec![1, 2, 3],
            vec![4, 5, 6],
            vec![1, 4],
            vec![2, 7, 9],
            vec![3, 9, 15],
            vec![5, 11, 15],
            vec![6, 7, 11],
        ]
    );
    assert!(reduced.all_spans_ok(), "all seven span checks pass");

    // Every kept ray appears in exactly two surviving constraints.
    for &id in &reduced.kept {
        let coverage = reduced
            .constraints
            .iter()
            .filter(|c| c.members.contains(&id))
            .count();
        assert_eq!(coverage, 2);
    }

    // The reduced system is uncolorable with the all-seven certificate.
    let cs = reduced.to_constraint_system();
    assert!(cs.pairs().is_empty());
    assert!(!colorable(&cs).is_colorable());
    let cert = parity_certificate(&cs).expect("parity proof exists");
    assert_eq!(cert.constraint_indices(), (0..7).collect::<Vec<_>>());
    let coverage = cert.coverage(&cs);
    assert_eq!(coverage.len(), 10);
    assert!(coverage.values().all(|&c| c == 2));
}

#[test]
fn reduction_by_a_generic_ray_removes_nothing() {
    let entry = catalog::ceg18();
    let bases = entry.rays.enumerate_bases();
    let generic = State::new(ray(&[1, 2, 4, 8]));
    let reduced = state_reduce(&entry.rays, &bases, &generic).unwrap();
    assert_eq!(reduced.state_id, None);
    assert!(reduced.removed.is_empty());
    assert_eq!(reduced.kept.len(), 18);
    assert!(reduced.dropped_bases.is_empty());
    assert_eq!(reduced.constraints.len(), 9);
    // Full tetrads span the whole space, so every span check passes.
    assert!(reduced.all_spans_ok());
    assert!(reduced.constraints.iter().all(|c| c.members.len() == 4));
}

#[test]
fn hardy_contradiction_trace_matches_the_two_forcing_steps() {
    let ceg = catalog::ceg18().rays;
    let eta = catalog::state("hardy").unwrap();
    let phi = catalog::state("phi-xx").unwrap();
    let outcome = hardy_run(&ceg, &eta, Some(&phi)).unwrap();
    let HardyOutcome::Contradiction(report) = outcome else {
        panic!("pre/post seeding must clash");
    };

    let keep = ray(&[0, 0, 1, 0]);
    let other = ray(&[0, 1, 0, 0]);
    let keep_id = ceg.id_of(&keep).unwrap();
    let other_id = ceg.id_of(&other).unwrap();

    // Forced 1 on (0,0,1,0) by the first tetrad, forced 1 on (0,1,0,0) by
    // the second, then the two clash as an orthogonal pair.
    assert!(report.trace.contains(&TraceEvent::Forced {
        id: keep_id,
        value: true,
        reason: Reason::Constraint(0),
    }));
    assert!(report.trace.contains(&TraceEvent::Forced {
        id: other_id,
        value: true,
        reason: Reason::Constraint(1),
    }));
    assert_eq!(
        report.clash,
        Clash::PairBothOne {
            a: keep_id.min(other_id),
            b: keep_id.max(other_id)
        }
    );
    // The reasons point at the first two tetrads of the constraint order.
    let cs = bks_core::ConstraintSystem::build(&ceg, bks_core::Mode::BasesAndPairs);
    assert_eq!(cs.constraints()[0], vec![0, 1, 2, 3]);
    assert_eq!(cs.constraints()[1], vec![0, 4, 5, 6]);
}

#[test]
fn singlet_preparation_alone_does_not_propagate_to_a_clash() {
    let ceg = catalog::ceg18().rays;
    let singlet = catalog::state("singlet").unwrap();
    match hardy_run(&ceg, &singlet, None).unwrap() {
        HardyOutcome::NoContradiction(fixpoint) => {
            assert_eq!(fixpoint.len(), 8, "seeds only; nothing else is forced");
        }
        HardyOutcome::Contradiction(_) => panic!("propagation alone cannot clash here"),
    }
}

#[test]
fn every_transported_hardy_ray_reaches_a_contradiction() {
    let ceg = catalog::ceg18().rays;
    let eta = catalog::state("hardy").unwrap();
    let phi = catalog::state("phi-xx").unwrap();
    let group = bks_core::SignedPermutation::all(4);
    for target in catalog::hardy_rays().rays.iter() {
        let g = group
            .iter()
            .find(|g| &g.apply_ray(eta.ray()).unwrap() == target)
            .expect("transport exists");
        let transported = g.apply_set(&ceg).unwrap();
        let pre = State::new(target.clone());
        let post = State::new(g.apply_ray(phi.ray()).unwrap());
        let outcome = hardy_run(&transported, &pre, Some(&post)).unwrap();
        assert!(
            outcome.is_contradiction(),
            "transport to {target} must clash"
        );
    }
}

#[test]
fn hardy_run_implies_seeded_system_uncolorable() {
    // Propagation soundness: the clash means no total coloring extends the
    // forced values.
    let ceg = catalog::ceg18().rays;
    let eta = catalog::state("hardy").unwrap();
    let phi = catalog::state("phi-xx").unwrap();
    let cs = bks_core::ConstraintSystem::build(&ceg, bks_core::Mode::BasesAndPairs);
    let seed = forced_values(&ceg, &eta, Some(&phi)).unwrap();
    assert!(hardy_run(&ceg, &eta, Some(&phi))
        .unwrap()
        .is_contradiction());
    // Brute check: no assignment of the remaining rays satisfies the system.
    let free: Vec<usize> = (0..18).filter(|id| seed.get(*id).is_none()).collect();
    assert_eq!(free.len(), 7);
    for bits in 0u32..1 << free.len() {
        let mut a = seed.clone();
        for (k, &id) in free.iter().enumerate() {
            a.set(id, bits >> k & 1 == 1);
        }
        assert!(!cs.is_satisfied_by(&a));
    }
}

#[test]
fn nonlocality_record_for_the_hardy_state() {
    let eta = catalog::state("hardy").unwrap();
    let phi = catalog::state("phi-xx").unwrap();
    let record = nonlocality_report(&eta, &phi).unwrap();
    assert!(record.cond_z1_given_x2.is_one());
    assert!(record.cond_z2_given_x1.is_one());
    assert!(record.joint_z_minus.is_zero());
    assert_eq!(record.joint_x_plus, rational(1, 12));
    assert!(record.is_nonlocality_pattern());

    // Input sanity for the zero entry: eta is orthogonal to (0,0,0,1).
    assert!(born(&eta, &ray(&[0, 0, 0, 1])).unwrap().is_zero());

    let expected = [
        (Particle::One, ray(&[1, 1]), true),
        (Particle::Two, ray(&[1, 1]), true),
        (Particle::One, ray(&[1, 0]), false),
        (Particle::One, ray(&[0, 1]), true),
        (Particle::Two, ray(&[1, 0]), false),
        (Particle::Two, ray(&[0, 1]), true),
    ];
    assert_eq!(record.forced.len(), expected.len());
    for (got, (particle, r, value)) in record.forced.iter().zip(expected) {
        assert_eq!(got.particle, particle);
        assert_eq!(got.ray, r);
        assert_eq!(got.value, value);
    }
}

#[test]
fn nonlocality_record_degenerates_on_a_product_state() {
    let phi = catalog::state("phi-xx").unwrap();
    let record = nonlocality_report(&phi, &phi).unwrap();
    assert_eq!(record.cond_z1_given_x2, rational(1, 2));
    assert_eq!(record.cond_z2_given_x1, rational(1, 2));
    assert_eq!(record.joint_z_minus, rational(1, 4));
    assert!(record.joint_x_plus.is_one());
    assert!(!record.is_nonlocality_pattern());
    // Only the two postselection values survive; the z chains do not apply.
    assert_eq!(record.forced.len(), 2);
}

#[test]
fn eigen_matrix_orientation() {
    // The matrix acts on components grouped as (first particle) blocks.
    let zz = ProductObservable::new(Pauli::Z, Pauli::Z).matrix();
    let expected = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]];
    assert_eq!(zz, expected);
    let zx = ProductObservable::new(Pauli::Z, Pauli::X).matrix();
    assert_eq!(zx[0], [0, 1, 0, 0]);
    assert_eq!(zx[2], [0, 0, 0, -1]);
}

#[test]
fn state_reduce_agrees_with_full_set_restriction() {
    // Coloring the reduced system matches restricting the full-set verdict
    // by the forced zeros: both are uncolorable.
    let entry = catalog::ceg18();
    let singlet = catalog::state("singlet").unwrap();
    let reduced = state_reduce(&entry.rays, &entry.rays.enumerate_bases(), &singlet).unwrap();
    let cs = reduced.to_constraint_system();
    assert!(!colorable(&cs).is_colorable());

    // Independent route: seed the full bases-only system with the forced
    // values and search by brute force over the kept rays.
    let full = bks_core::ConstraintSystem::build(&entry.rays, bks_core::Mode::BasesOnly);
    let seed = forced_values(&entry.rays, &singlet, None).unwrap();
    let free: Vec<usize> = reduced.kept.clone();
    let mut satisfiable = false;
    for bits in 0u32..1 << free.len() {
        let mut a = seed.clone();
        for (k, &id) in free.iter().enumerate() {
            a.set(id, bits >> k & 1 == 1);
        }
        if full.is_satisfied_by(&a) {
            satisfiable = true;
            break;
        }
    }
    assert!(!satisfiable);
}
