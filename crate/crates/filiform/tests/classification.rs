//! Property suite for the orbit classification: partition totality,
//! invariance along orbits, representative self-consistency, witness
//! validity, and the isomorphism decision.

use std::collections::BTreeSet;

use filiform::classify::{
    classify, delta, isomorphic, member_with_invariants, representative,
    representative_family, subset5, subset6, zero_test_for,
};
use filiform::families::{build_tleib5, build_tleib6, TLeib5Params, TLeib6Params};
use filiform::sample::{
    random_degenerate_member, random_subset_member, random_tleib, rng_from_seed,
    small_scalar,
};
use filiform::scalar::{Scalar, ZeroTest};
use filiform::transform::{random_adapted, transform_params_oracle, TEMPLATE_TOL};
use filiform::{OrbitLabel, TLeibParams};
use rand::Rng;

const TOL: f64 = ZeroTest::DEFAULT_TOL;

fn positive_small_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(1i64..=9), rng.gen_range(1i64..=9))
}

/// Family parameters that make the representative family a canonicalisation
/// fixed point: slots consumed by principal even/cube roots get positive
/// rationals, free slots get arbitrary small scalars.
fn fixed_point_lambdas(label: OrbitLabel, rng: &mut impl Rng) -> Vec<Scalar> {
    match (label.dim, label.index) {
        (5, 1) | (6, 11) => vec![small_scalar(rng)],
        (6, 1) | (6, 7) => vec![small_scalar(rng), positive_small_scalar(rng)],
        (6, 2) | (6, 8) => vec![positive_small_scalar(rng)],
        _ => unreachable!(),
    }
}

#[test]
fn subsets_partition_the_parameter_space() {
    for dim in [5usize, 6] {
        let mut rng = rng_from_seed(101 + dim as u64);
        let mut seen = BTreeSet::new();
        for _ in 0..2000 {
            let p = random_tleib(dim, &mut rng);
            // Totality: classification never fails and yields a label of the
            // right dimension.
            let c = classify(&p, TOL);
            assert_eq!(usize::from(c.label.dim), dim);
            seen.insert(c.label);
        }
        let expected: BTreeSet<OrbitLabel> = OrbitLabel::all()
            .into_iter()
            .filter(|l| usize::from(l.dim) == dim)
            .collect();
        assert_eq!(seen, expected, "zero-inflated sampling must hit every label");
    }
}

#[test]
fn subset_samplers_land_in_their_subset() {
    let mut rng = rng_from_seed(103);
    for label in OrbitLabel::all() {
        for _ in 0..50 {
            let p = random_subset_member(label, &mut rng);
            assert_eq!(classify(&p, TOL).label, label);
        }
    }
}

#[test]
fn invariants_are_constant_along_orbits() {
    let mut rng = rng_from_seed(107);
    for label in OrbitLabel::all().into_iter().filter(OrbitLabel::is_parametric) {
        for k in 0..50u64 {
            let p = random_subset_member(label, &mut rng);
            let t = random_adapted(p.dim(), &p, 5000 + k).unwrap();
            let q = transform_params_oracle(&p, &t).unwrap();
            let cp = classify(&p, TOL);
            let cq = classify(&q, TOL);
            assert_eq!(cp.label, label);
            assert_eq!(cq.label, label);
            assert_eq!(cp.invariants, cq.invariants, "label {label}, k {k}");
        }
    }
}

#[test]
fn canonical_forms_are_constant_along_orbits() {
    let mut rng = rng_from_seed(109);
    for label in OrbitLabel::all() {
        for k in 0..10u64 {
            let p = random_subset_member(label, &mut rng);
            let t = random_adapted(p.dim(), &p, 9000 + k).unwrap();
            let q = transform_params_oracle(&p, &t).unwrap();
            let canon_p = classify(&p, TOL).canonical.unwrap();
            let canon_q = classify(&q, TOL).canonical.unwrap();
            assert!(
                canon_p.residual(&canon_q) <= TEMPLATE_TOL,
                "label {label}, k {k}: {canon_p:?} vs {canon_q:?}"
            );
        }
    }
}

#[test]
fn representatives_are_canonical_fixed_points() {
    let mut rng = rng_from_seed(113);
    for label in OrbitLabel::all() {
        if let Some(rep) = representative(label) {
            let c = classify(&rep, TOL);
            assert_eq!(c.label, label);
            assert_eq!(c.canonical.as_ref().unwrap().coords(), rep.coords());
            continue;
        }
        // Parametric families: fixed points when the root-bearing lambda is
        // its own principal root.
        for _ in 0..20 {
            let lambdas = fixed_point_lambdas(label, &mut rng);
            let rep = representative_family(label, &lambdas).unwrap();
            let c = classify(&rep, TOL);
            assert_eq!(c.label, label);
            assert_eq!(
                c.canonical.as_ref().unwrap().coords(),
                rep.coords(),
                "label {label}, lambdas {lambdas:?}"
            );
        }
    }
}

#[test]
fn witnesses_carry_points_onto_their_canonical_forms() {
    let mut rng = rng_from_seed(127);
    for label in OrbitLabel::all() {
        for _ in 0..10 {
            let p = random_subset_member(label, &mut rng);
            let c = classify(&p, TOL);
            let witness = c.witness.as_ref().unwrap();
            let canon = c.canonical.as_ref().unwrap();
            let image = transform_params_oracle(&p, witness).unwrap();
            if witness.mode() == filiform::ScalarMode::Exact {
                assert_eq!(&image, canon, "label {label}");
            } else {
                assert!(
                    image.residual(canon) <= TEMPLATE_TOL,
                    "label {label}: residual {}",
                    image.residual(canon)
                );
            }
        }
    }
}

#[test]
fn approx_mode_classification_matches_exact_labels() {
    let mut rng = rng_from_seed(131);
    for label in OrbitLabel::all() {
        for _ in 0..10 {
            let p = random_subset_member(label, &mut rng);
            let c = classify(&p.to_approx(), TOL);
            assert_eq!(c.label, label);
            // Witnesses still carry the point onto the canonical tuple,
            // within the residual tolerance.
            if let (Some(witness), Some(canon)) = (&c.witness, &c.canonical) {
                let image = transform_params_oracle(&p.to_approx(), witness).unwrap();
                assert!(image.residual(canon) <= TEMPLATE_TOL, "label {label}");
            }
        }
    }
}

#[test]
fn isomorphism_is_an_equivalence_on_orbit_samples() {
    let mut rng = rng_from_seed(137);
    for label in [
        OrbitLabel::new(5, 1).unwrap(),
        OrbitLabel::new(5, 6).unwrap(),
        OrbitLabel::new(6, 2).unwrap(),
        OrbitLabel::new(6, 9).unwrap(),
        OrbitLabel::new(6, 11).unwrap(),
    ] {
        let m = random_subset_member(label, &mut rng);
        let t1 = random_adapted(m.dim(), &m, 301).unwrap();
        let q1 = transform_params_oracle(&m, &t1).unwrap();
        let t2 = random_adapted(q1.dim(), &q1, 303).unwrap();
        let q2 = transform_params_oracle(&q1, &t2).unwrap();

        // Reflexive, symmetric, transitive.
        assert!(isomorphic(&m, &m, TOL).unwrap().isomorphic);
        assert!(isomorphic(&m, &q1, TOL).unwrap().isomorphic);
        assert!(isomorphic(&q1, &m, TOL).unwrap().isomorphic);
        assert!(isomorphic(&q1, &q2, TOL).unwrap().isomorphic);
        assert!(isomorphic(&m, &q2, TOL).unwrap().isomorphic);

        // The composed witness is a checkable certificate.
        let cert = isomorphic(&m, &q2, TOL).unwrap();
        let w = cert.witness.as_ref().unwrap();
        let image = transform_params_oracle(&m, w).unwrap();
        assert!(
            image.residual(&q2) <= TEMPLATE_TOL,
            "label {label}: residual {}",
            image.residual(&q2)
        );
    }
}

#[test]
fn different_invariants_block_isomorphism_within_a_subset() {
    let a = TLeibParams::Five(TLeib5Params::from_ints(1, 0, 1, 1));
    let b = TLeibParams::Five(TLeib5Params::from_ints(2, 0, 1, 1));
    let cert = isomorphic(&a, &b, TOL).unwrap();
    assert_eq!(cert.label_a, cert.label_b);
    assert!(!cert.isomorphic);
    assert!(cert.witness.is_none());
}

#[test]
fn cross_label_pairs_are_never_isomorphic() {
    let mut rng = rng_from_seed(139);
    let labels = OrbitLabel::all();
    for (i, &la) in labels.iter().enumerate() {
        for &lb in &labels[i + 1..] {
            if la.dim != lb.dim {
                continue;
            }
            let a = random_subset_member(la, &mut rng);
            let b = random_subset_member(lb, &mut rng);
            assert!(!isomorphic(&a, &b, TOL).unwrap().isomorphic, "{la} vs {lb}");
        }
    }
}

#[test]
fn degenerate_strata_are_flagged_and_transform_invariant() {
    let mut rng = rng_from_seed(149);
    for (index, expected_invariants) in [(1u8, 2usize), (2, 1)] {
        let label = OrbitLabel::new(6, index).unwrap();
        for k in 0..25u64 {
            let p = random_degenerate_member(label, &mut rng);
            let c = classify(&p, TOL);
            assert_eq!(c.label, label);
            assert!(c.degenerate);
            assert!(c.degenerate_reason.is_some());
            assert!(c.canonical.is_none() && c.witness.is_none());
            assert_eq!(c.invariants.len(), expected_invariants);
            assert_eq!(c.invariants[0].value, None, "affected invariant absent");

            // The stratum is preserved by the group action and the flag
            // follows it.
            let t = random_adapted(6, &p, 7000 + k).unwrap();
            let q = transform_params_oracle(&p, &t).unwrap();
            let cq = classify(&q, TOL);
            assert!(cq.degenerate, "stratum must be transform-invariant");
            assert_eq!(cq.invariants, c.invariants);

            // Flag mismatch blocks isomorphism against the representative
            // family even when the subset label matches; that verdict is
            // definitive (the stratum is an orbit invariant).
            let off = random_subset_member(label, &mut rng);
            let cert = isomorphic(&p, &off, TOL).unwrap();
            assert!(!cert.isomorphic && !cert.undecided);

            // Two members of the same stratum cannot be separated by the
            // surviving invariants, and no canonical form exists there, so
            // the decision is refused rather than guessed.
            let cert = isomorphic(&p, &q, TOL).unwrap();
            assert!(cert.undecided && !cert.isomorphic);
            assert!(cert.witness.is_none());
        }
    }
}

#[test]
fn prescribed_invariants_are_achieved_exactly() {
    let mut rng = rng_from_seed(151);
    for label in OrbitLabel::all().into_iter().filter(OrbitLabel::is_parametric) {
        for _ in 0..25 {
            let targets: Vec<Scalar> = (0..label.invariant_count())
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        Scalar::zero()
                    } else {
                        small_scalar(&mut rng)
                    }
                })
                .collect();
            let p = member_with_invariants(label, &targets).unwrap();
            let c = classify(&p, TOL);
            assert_eq!(c.label, label);
            assert!(!c.degenerate);
            let values: Vec<Scalar> = c
                .invariants
                .iter()
                .map(|i| i.value.clone().unwrap())
                .collect();
            assert_eq!(values, targets, "label {label}");
        }
    }
}

#[test]
fn parametric_api_rejects_bad_requests() {
    let single = OrbitLabel::new(5, 2).unwrap();
    assert!(member_with_invariants(single, &[]).is_err());
    assert!(representative_family(single, &[]).is_err());
    let two = OrbitLabel::new(6, 1).unwrap();
    assert!(member_with_invariants(two, &[Scalar::one()]).is_err());
    assert!(representative(two).is_none());
}

#[test]
fn dim6_table_truncates_to_the_dim5_pattern() {
    // With b13 = b23 = 0, the dim-6 table restricted to e0..e4 reproduces the
    // dim-5 table, with the three top-grade parameter slots shifted from e4
    // to e5.
    let mut rng = rng_from_seed(157);
    for _ in 0..25 {
        let p5 = TLeib5Params::new(
            small_scalar(&mut rng),
            small_scalar(&mut rng),
            small_scalar(&mut rng),
            small_scalar(&mut rng),
        );
        let p6 = TLeib6Params::new(
            p5.b00.clone(),
            p5.b01.clone(),
            p5.b11.clone(),
            p5.b12.clone(),
            Scalar::zero(),
            Scalar::zero(),
        );
        let t5 = build_tleib5(&p5);
        let t6 = build_tleib6(&p6);
        let shifted = [(0usize, 0usize), (0, 1), (1, 1)];
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    if k == 4 && shifted.contains(&(i, j)) {
                        assert_eq!(t6.get(i, j, 5), t5.get(i, j, 4), "({i},{j}) top slot");
                        assert!(t6.get(i, j, 4).is_exactly_zero());
                    } else {
                        assert_eq!(t6.get(i, j, k), t5.get(i, j, k), "({i},{j},{k})");
                    }
                }
            }
        }
    }
}

#[test]
fn builders_are_injective_on_sampled_tuples() {
    let mut rng = rng_from_seed(163);
    for dim in [5usize, 6] {
        for _ in 0..50 {
            let a = random_tleib(dim, &mut rng);
            let b = random_tleib(dim, &mut rng);
            if a == b {
                continue;
            }
            let ta = a.build();
            let tb = b.build();
            let differs = (0..dim).any(|i| {
                (0..dim).any(|j| (0..dim).any(|k| ta.get(i, j, k) != tb.get(i, j, k)))
            });
            assert!(differs, "distinct tuples must give distinct tables");
        }
    }
}

#[test]
fn delta_and_subsets_follow_the_listed_conditions() {
    let four = Scalar::from_int(4);
    let p = TLeib5Params::from_ints(1, 0, 1, 0);
    assert_eq!(delta(&p.b00, &p.b01, &p.b11), four);
    let zt = zero_test_for(&TLeibParams::Five(p.clone()), TOL);
    assert_eq!(subset5(&p, &zt), OrbitLabel::new(5, 2).unwrap());

    let q = TLeib5Params::from_ints(1, 2, 1, 0);
    assert!(delta(&q.b00, &q.b01, &q.b11).is_exactly_zero());
    let zt = zero_test_for(&TLeibParams::Five(q.clone()), TOL);
    assert_eq!(subset5(&q, &zt), OrbitLabel::new(5, 3).unwrap());

    let r = TLeib6Params::from_ints(0, 1, 0, 0, 1, 0);
    let zt = zero_test_for(&TLeibParams::Six(r.clone()), TOL);
    assert_eq!(subset6(&r, &zt), OrbitLabel::new(6, 14).unwrap());
}
