//! Algebraic invariants checked on generated inputs.

use boselab_core::forms::random_form;
use boselab_core::projgeom::{random_point, random_subspace};
use boselab_core::substructures::{
    random_collinear_triple, random_quadrangle, subline_through, subplane_through, Conjugacy,
};
use boselab_core::{expand_form, span, FieldElem, FieldTower, Level, Rng, Subspace, DEFAULT_CAP};
use proptest::prelude::*;

fn tower(q: u32) -> FieldTower {
    FieldTower::for_order(q).expect("supported order")
}

fn order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9])
}

fn level() -> impl Strategy<Value = Level> {
    prop::sample::select(vec![Level::Base, Level::Cubic, Level::Sextic])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(q in order(), level in level(), seed: u64) {
        let t = tower(q);
        let f = t.field(level);
        let mut rng = Rng::new(seed);
        let (a, b, c) = (rng.below(f.size()), rng.below(f.size()), rng.below(f.size()));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism(q in order(), level in level(), seed: u64) {
        let t = tower(q);
        let f = t.field(level);
        let mut rng = Rng::new(seed);
        let (a, b) = (rng.below(f.size()), rng.below(f.size()));
        prop_assert_eq!(f.frob(f.add(a, b), 1), f.add(f.frob(a, 1), f.frob(b, 1)));
        prop_assert_eq!(f.frob(f.mul(a, b), 1), f.mul(f.frob(a, 1), f.frob(b, 1)));
        prop_assert_eq!(f.frob(a, 1), f.pow(a, q as u64));
        prop_assert_eq!(f.frob(a, level.degree()), a);
    }

    #[test]
    fn embedding_preserves_arithmetic(q in order(), seed: u64) {
        let t = tower(q);
        let (c, s) = (t.field(Level::Cubic), t.field(Level::Sextic));
        let mut rng = Rng::new(seed);
        let (a, b) = (rng.below(c.size()), rng.below(c.size()));
        let up = |x: u32| t.embed(FieldElem::new(Level::Cubic, x), Level::Sextic).unwrap().raw();
        prop_assert_eq!(up(c.mul(a, b)), s.mul(up(a), up(b)));
        prop_assert_eq!(up(c.add(a, b)), s.add(up(a), up(b)));
        let back = t.try_descend(FieldElem::new(Level::Sextic, up(a)), Level::Cubic).unwrap();
        prop_assert_eq!(back.raw(), a);
    }

    #[test]
    fn element_text_round_trips(q in order(), level in level(), seed: u64) {
        let t = tower(q);
        let x = FieldElem::new(level, Rng::new(seed).below(t.order(level)));
        prop_assert_eq!(t.parse_elem(&t.format_elem(x), level).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dimension_formula(q in prop::sample::select(vec![2u32, 3]), n in 2usize..7, seed: u64) {
        let t = tower(q);
        let mut rng = Rng::new(seed);
        let du = rng.below(n as u32 + 1) as isize;
        let dw = rng.below(n as u32 + 1) as isize;
        let u = random_subspace(&t, Level::Base, n, du, &mut rng);
        let w = random_subspace(&t, Level::Base, n, dw, &mut rng);
        let joined = span(&t, &[&u, &w]).unwrap();
        let met = u.meet(&t, &w).unwrap();
        prop_assert_eq!(joined.dim() + met.dim(), u.dim() + w.dim());
        prop_assert_eq!(u.meet_dim(&t, &w), met.dim());
        prop_assert!(joined.contains(&t, &u) && joined.contains(&t, &w));
        prop_assert!(u.contains(&t, &met) && w.contains(&t, &met));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_counts_and_membership(q in order(), d in 0isize..3, seed: u64) {
        let t = tower(q);
        let mut rng = Rng::new(seed);
        let s = random_subspace(&t, Level::Base, 4, d, &mut rng);
        let pts = s.enumerate_points(&t, DEFAULT_CAP).unwrap();
        let f = q as u128;
        prop_assert_eq!(pts.len() as u128, (f.pow(d as u32 + 1) - 1) / (f - 1));
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for p in &pts {
            prop_assert!(s.contains_point(&t, p));
            prop_assert_eq!(s.join_point(&t, p).unwrap().dim(), s.dim());
        }
    }

    #[test]
    fn rational_points_are_closed(q in prop::sample::select(vec![2u32, 3, 4]), seed: u64) {
        let t = tower(q);
        let mut rng = Rng::new(seed);
        let x = random_point(&t, Level::Cubic, 8, &mut rng);
        let s = Subspace::from_points(&t, &[x.clone(), x.frobenius(&t, 1), x.frobenius(&t, 2)]).unwrap();
        let r = s.rational_points(&t, Level::Base);
        let again = r.embed(Level::Cubic).meet(&t, &s).unwrap().rational_points(&t, Level::Base);
        prop_assert_eq!(&again, &r);
        prop_assert!(s.contains(&t, &r.embed(Level::Cubic)));
        prop_assert_eq!(r.dim(), s.dim());
    }

    #[test]
    fn expansion_is_linear(q in prop::sample::select(vec![2u32, 3, 4]), deg in 1u32..4, seed: u64) {
        let t = tower(q);
        let mut rng = Rng::new(seed);
        let a = random_form(&t, Level::Cubic, 3, deg, &mut rng);
        let b = random_form(&t, Level::Cubic, 3, deg, &mut rng);
        let sum = a.add(&t, &b).unwrap();
        prop_assume!(!sum.is_zero() && !a.is_zero() && !b.is_zero());
        let (ea, eb, es) = (expand_form(&t, &a).unwrap(), expand_form(&t, &b).unwrap(), expand_form(&t, &sum).unwrap());
        for k in 0..3 {
            prop_assert_eq!(&es.parts[k], &ea.parts[k].add(&t, &eb.parts[k]).unwrap());
        }
        prop_assert_eq!(&es.recombine(&t), &es.g);
    }

    #[test]
    fn conjugacy_maps_have_order_three(q in prop::sample::select(vec![2u32, 3, 4]), seed: u64) {
        let t = tower(q);
        let mut rng = Rng::new(seed);
        let quad = random_quadrangle(&t, &mut rng);
        let sub = subplane_through(&t, &quad).unwrap();
        let [a, b, c] = random_collinear_triple(&t, &mut rng);
        let line = subline_through(&t, &a, &b, &c).unwrap();
        let x = random_point(&t, Level::Cubic, 2, &mut rng);
        prop_assert_eq!(&sub.apply_power(&t, &x, 3).unwrap(), &x);
        for p in sub.points() {
            prop_assert_eq!(&sub.apply(&t, p).unwrap(), p);
        }
        for p in line.points() {
            prop_assert_eq!(&line.apply(&t, p).unwrap(), p);
        }
        let y = line.line.enumerate_points(&t, DEFAULT_CAP).unwrap()[rng.below(q.pow(3) + 1) as usize].clone();
        prop_assert_eq!(&line.apply_power(&t, &y, 3).unwrap(), &y);
    }
}
