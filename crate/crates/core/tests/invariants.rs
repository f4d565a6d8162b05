//! Invariant batteries at their stated sample sizes, and the negative
//! controls for the recognition predicates.

use std::collections::BTreeSet;

use boselab_core::forms::random_conic;
use boselab_core::harness::{
    check_2regulus, check_conic_extension, check_curve_planes, check_field_axioms,
    check_gamma_correspondence, check_incidence, check_segre_system, check_t_planes,
    plane_order_control, quadric_order_control, random_disjoint_planes,
};
use boselab_core::projgeom::random_subspace;
use boselab_core::{
    conic_to_quadrics, BoseFrame, Error, FieldElem, FieldTower, HomogeneousForm, Level, Rng,
    Subspace, VarietyHandle, DEFAULT_CAP,
};

fn tower(q: u32) -> FieldTower {
    FieldTower::for_order(q).unwrap()
}

#[test]
fn field_axioms_on_thousand_triples() {
    for q in [2, 3] {
        let r = check_field_axioms(&tower(q), &mut Rng::new(11), 1000);
        assert!(r.pass, "{:?}", r.witness);
    }
}

#[test]
fn frobenius_fixed_points_are_the_base_field() {
    for q in [2, 3] {
        let t = tower(q);
        let f = t.field(Level::Cubic);
        for x in f.elements() {
            let fixed = f.frob(x, 1) == x;
            let descends = t
                .try_descend(FieldElem::new(Level::Cubic, x), Level::Base)
                .is_ok();
            assert_eq!(fixed, descends, "q={q} x={x}");
        }
    }
}

/// a₀ = −τ^q·τ^{q²} and a₁ = τ^q + τ^{q²} for every cubic modulus the tower
/// accepts, with the conjugates computed by repeated multiplication.
#[test]
fn frame_constants_for_every_accepted_modulus() {
    for q in [2u32, 3, 4] {
        let mut accepted = 0;
        for code in 0..q.pow(3) {
            let ts = [code % q, (code / q) % q, code / (q * q)];
            let (p, e) = boselab_core::fields::split_prime_power(q).unwrap();
            let Ok(t) = FieldTower::new(p, e, ts) else {
                continue;
            };
            accepted += 1;
            let f = t.field(Level::Cubic);
            let tau = t.tau().raw();
            let tq = f.pow(tau, q as u64);
            let tqq = f.pow(tq, q as u64);
            let [a0, a1, a2] = BoseFrame::new(t.clone()).constants();
            assert_eq!(a0, f.neg(f.mul(tq, tqq)), "q={q} ts={ts:?}");
            assert_eq!(a1, f.add(tq, tqq), "q={q} ts={ts:?}");
            assert_eq!(a2, f.neg(1));
        }
        assert!(accepted > 0);
    }
}

#[test]
fn gamma_correspondence_exhaustive_and_sampled() {
    let r = check_gamma_correspondence(&BoseFrame::new(tower(2)), &mut Rng::new(3), 0).unwrap();
    assert!(r.pass);
    assert_eq!(r.counters["points"], 73);
    let r = check_gamma_correspondence(&BoseFrame::new(tower(3)), &mut Rng::new(3), 200).unwrap();
    assert!(r.pass);
    assert_eq!(r.counters["points"], 200);
}

#[test]
fn incidence_on_hundred_triples() {
    let r = check_incidence(&BoseFrame::new(tower(2)), &mut Rng::new(5), 100).unwrap();
    assert!(r.pass, "{:?}", r.witness);
    assert!(r.counters["lines"] > 0);
}

#[test]
fn bose_lines_are_distinct_and_carry_nine_planes() {
    let frame = BoseFrame::new(tower(2));
    let t = frame.tower();
    // Lines of PG(2,8) as kernels of the 73 dual points.
    let mut images = BTreeSet::new();
    for dual in frame.plane_points(Level::Cubic) {
        let line = Subspace::new(t, Level::Cubic, 2, vec![dual.coords().to_vec()])
            .unwrap()
            .equations(t);
        let line = Subspace::new(t, Level::Cubic, 2, line).unwrap();
        let five = frame.bose_line(&line).unwrap();
        assert_eq!(five.dim(), 5);
        let inside = frame
            .spread()
            .iter()
            .filter(|s| five.contains(t, s))
            .count();
        assert_eq!(inside, 9);
        images.insert(five);
    }
    assert_eq!(images.len(), 73);
}

#[test]
fn curve_equivalence_on_ten_curves() {
    let r =
        check_curve_planes(&BoseFrame::new(tower(2)), &mut Rng::new(7), 10, DEFAULT_CAP).unwrap();
    assert!(r.pass, "{:?}", r.witness);
}

/// 10⁴ random points and 30 T-planes over the curve, plus 200 T-planes
/// through triples of curve points.
#[test]
fn conjugate_forms_cut_out_the_extension() {
    let frame = BoseFrame::new(tower(2));
    let r = check_conic_extension(&frame, &mut Rng::new(9), 10_000, 400).unwrap();
    assert!(r.pass, "{:?}", r.witness);
    assert_eq!(r.counters["t_planes"], 400);
}

#[test]
fn t_planes_meet_in_the_four_allowed_ways() {
    let r = check_t_planes(&BoseFrame::new(tower(2)), &mut Rng::new(13), 200).unwrap();
    assert!(r.pass, "{:?}", r.witness);
    let kinds: u64 = ["equal", "disjoint", "t_point", "t_line"]
        .iter()
        .map(|k| r.counters.get(*k).copied().unwrap_or(0))
        .sum();
    assert_eq!(kinds, 200);
}

#[test]
fn the_standard_conic_has_sixty_three_points() {
    let t = tower(2);
    let c = HomogeneousForm::parse(&t, Level::Cubic, 3, "x*z:1, y^2:-1").unwrap();
    let v =
        VarietyHandle::new(Level::Base, 8, conic_to_quadrics(&t, &c).unwrap().to_vec()).unwrap();
    assert_eq!(
        v.points(&t, &Subspace::whole(Level::Base, 8), DEFAULT_CAP)
            .unwrap()
            .len(),
        63
    );
    let d = HomogeneousForm::parse(&t, Level::Cubic, 3, "x^2:1").unwrap();
    assert_eq!(conic_to_quadrics(&t, &d), Err(Error::DegenerateConic));
}

/// Points of V ∩ S counted in PG(8,3) and, after pulling the forms back,
/// in PG(5,3).
#[test]
fn restriction_matches_direct_count() {
    let t = tower(3);
    let mut rng = Rng::new(17);
    let conic = random_conic(&t, Level::Cubic, &mut rng);
    let v = VarietyHandle::new(
        Level::Base,
        8,
        conic_to_quadrics(&t, &conic).unwrap().to_vec(),
    )
    .unwrap();
    for _ in 0..50 {
        let s = random_subspace(&t, Level::Base, 8, 5, &mut rng);
        let direct = v.points(&t, &s, DEFAULT_CAP).unwrap().len();
        let (restricted, _) = v.restrict_to_subspace(&t, &s).unwrap();
        let pulled = restricted
            .points(&t, &Subspace::whole(Level::Base, 5), DEFAULT_CAP)
            .unwrap()
            .len();
        assert_eq!(direct, pulled);
    }
}

#[test]
fn regulus_predicate_rejects_planes_outside_a_five_space() {
    let t = tower(2);
    let frame = BoseFrame::new(t.clone());
    let spread = frame.spread();
    let r = check_2regulus(&t, &spread[..5]).unwrap();
    assert!(!r.pass);
    assert!(r.witness.is_some());
    assert_eq!(
        check_2regulus(&t, &spread[..2]).unwrap_err(),
        Error::TooFewPlanes { needed: 3, got: 2 }
    );
}

/// Three disjoint planes of a 5-space always lie in a regulus, so the
/// predicate needs a fourth plane to have something to reject.
#[test]
fn regulus_negative_controls() {
    let t = tower(3);
    let mut rng = Rng::new(19);
    let mut three_rejected = 0;
    let mut four_rejected = 0;
    for _ in 0..20 {
        let planes = random_disjoint_planes(&t, &mut rng, 4);
        if !check_2regulus(&t, &planes[..3]).unwrap().pass {
            three_rejected += 1;
        }
        if !check_2regulus(&t, &planes).unwrap().pass {
            four_rejected += 1;
        }
    }
    assert_eq!(three_rejected, 0);
    assert!(four_rejected > 0);
}

#[test]
fn segre_predicate_negatives() {
    let frame = BoseFrame::new(tower(2));
    let t = frame.tower();
    let spread = frame.spread();
    let r = check_segre_system(t, spread).unwrap();
    assert!(!r.pass);
    assert_eq!(spread.len(), 73);
    assert_eq!(
        check_segre_system(t, &spread[..3]).unwrap_err(),
        Error::DegeneratePlanes
    );
}

#[test]
fn order_controls() {
    let t = tower(3);
    let plane = plane_order_control(&t, &mut Rng::new(23), 200, DEFAULT_CAP).unwrap();
    assert_eq!(plane.modal_hits, 1);
    assert_eq!(plane.histogram["0"], 0);
    let quadric = quadric_order_control(&tower(5), &mut Rng::new(29), 500, DEFAULT_CAP).unwrap();
    assert_eq!(quadric.max_hits, 2);
    assert!(quadric.max_attained > 0);
    assert!(quadric.degenerate > 0 || quadric.nondegenerate == 500);
}
