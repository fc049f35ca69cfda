mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::divides_z_sqrt2;
use triadeform::ring::{RingDescriptor, RingElem};
use triadeform::units::{fundamental_unit, pell_brute_force, unit_group};
use triadeform::Error;

fn ring(s: &str) -> RingDescriptor {
    RingDescriptor::parse(s).unwrap()
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

const RINGS: [&str; 8] = ["Z", "Q", "Z/2", "Z/12", "Z/7", "Z[sqrt(2)]", "Z[sqrt(-5)]", "Z[i]"];

fn elem(r: &RingDescriptor, p: i64, q: i64) -> RingElem {
    match r {
        RingDescriptor::Integers | RingDescriptor::IntegersMod(_) => r.from_int(p),
        RingDescriptor::Rationals => RingElem::rat(p, q.abs() + 1),
        _ => RingElem::quad(p, q),
    }
}

#[test]
fn parsing() {
    assert_eq!(ring("Z/7"), RingDescriptor::IntegersMod(big(7)));
    assert_eq!(ring("Z[sqrt(2)]"), RingDescriptor::QuadraticOrder(big(2)));
    assert!(matches!(RingDescriptor::parse("Z/1"), Err(Error::InvalidParameter(_))));
    assert!(RingDescriptor::parse("Z[sqrt(4)]").is_err());
    assert!(RingDescriptor::parse("Z[sqrt(1)]").is_err());
}

#[test]
fn unit_tests() {
    assert!(!ring("Z").is_unit(&RingElem::int(2)));
    assert!(ring("Z[sqrt(2)]").is_unit(&RingElem::quad(1, 1)));
    assert!(!ring("Z/6").is_unit(&RingElem::int(4)));
    assert!(ring("Z/6").is_unit(&RingElem::int(5)));
}

#[test]
fn divisibility_examples() {
    let o = ring("Z[sqrt(2)]");
    let lambda = RingElem::quad(3, 2);
    let one = o.one();
    let l = |k| o.sub(&o.pow_u(&lambda, k), &one);
    assert!(o.divides(&l(2), &l(6)).unwrap());
    assert!(!o.divides(&l(2), &l(1)).unwrap());
    let z = ring("Z");
    for b in [-7, 0, 13] {
        assert!(z.divides(&RingElem::int(1), &RingElem::int(b)).unwrap());
    }
    assert!(matches!(z.divides(&RingElem::int(0), &RingElem::int(3)), Err(Error::DivisionByZeroDivisor)));
}

#[test]
fn associate_examples() {
    assert!(ring("Z").associates(&RingElem::int(3), &RingElem::int(-3)));
    assert!(ring("Z[sqrt(2)]").associates(&RingElem::quad(1, 0), &RingElem::quad(1, 1)));
    assert!(!ring("Z").associates(&RingElem::int(2), &RingElem::int(3)));
}

#[test]
fn unit_groups() {
    let z = unit_group(&ring("Z"));
    assert_eq!(z.torsion_order, big(2));
    assert_eq!(z.torsion_generator(), Some(RingElem::int(-1)));
    assert!(z.free_basis.is_empty());

    let z2 = unit_group(&ring("Z[sqrt(2)]"));
    assert_eq!(z2.torsion_order, big(2));
    assert_eq!(z2.free_basis, vec![RingElem::quad(1, 1)]);

    let z7 = unit_group(&ring("Z/7"));
    assert_eq!(z7.torsion_order, big(6));
    assert_eq!(z7.torsion_generator(), Some(RingElem::int(3)));

    // (Z/8)^× is not cyclic
    assert_eq!(unit_group(&ring("Z/8")).torsion.len(), 2);
}

#[test]
fn fundamental_units_match_pell_search() {
    for (d, expected) in [(2, RingElem::quad(1, 1)), (3, RingElem::quad(2, 1)), (5, RingElem::quad(2, 1)), (7, RingElem::quad(8, 3))] {
        let d = big(d);
        let brute = pell_brute_force(&d, 10_000).unwrap();
        assert_eq!(brute, expected, "d = {d}");
        assert_eq!(fundamental_unit(&d).unwrap(), brute, "d = {d}");
    }
    // a large first solution: 1520 + 273√31
    assert_eq!(fundamental_unit(&big(31)).unwrap(), RingElem::quad(1520, 273));
}

#[test]
fn decompositions() {
    let z2 = unit_group(&ring("Z[sqrt(2)]"));
    let u = z2.decompose(&RingElem::quad(3, 2)).unwrap();
    assert_eq!(u.torsion_exps, vec![big(0)]);
    assert_eq!(u.free_exps.into_iter().collect::<Vec<_>>(), vec![(big(0), big(2))]);

    let z = unit_group(&ring("Z"));
    let u = z.decompose(&RingElem::int(-1)).unwrap();
    assert_eq!(u.torsion_exps, vec![big(1)]);
    assert!(u.free_exps.is_empty());

    let q = unit_group(&ring("Q"));
    let u = q.decompose(&RingElem::rat(-4, 9)).unwrap();
    assert_eq!(u.torsion_exps, vec![big(1)]);
    assert_eq!(u.free_exps.into_iter().collect::<Vec<_>>(), vec![(big(2), big(2)), (big(3), big(-2))]);

    assert!(matches!(z.decompose(&RingElem::int(2)), Err(Error::NotAUnit(_))));
}

#[test]
fn square_units() {
    let z2 = unit_group(&ring("Z[sqrt(2)]"));
    assert!(z2.is_square_unit(&RingElem::quad(3, 2)).unwrap());
    assert!(!z2.is_square_unit(&RingElem::quad(1, 1)).unwrap());
    assert!(!z2.is_square_unit(&RingElem::quad(-3, -2)).unwrap());
    assert!(unit_group(&ring("Z")).is_square_unit(&RingElem::int(1)).unwrap());
}

#[test]
fn power_subgroups() {
    let (k, basis) = unit_group(&ring("Z[sqrt(2)]")).torsion_free_power_subgroup().unwrap();
    assert_eq!((k, basis), (big(2), vec![RingElem::quad(3, 2)]));
    let (k, basis) = unit_group(&ring("Z[sqrt(3)]")).torsion_free_power_subgroup().unwrap();
    assert_eq!((k, basis), (big(2), vec![RingElem::quad(7, 4)]));
    assert!(matches!(unit_group(&ring("Z[i]")).torsion_free_power_subgroup(), Err(Error::NoFreePart)));
}

#[test]
fn formatting_round_trips() {
    for s in RINGS {
        let r = ring(s);
        for (p, q) in [(0, 0), (1, 0), (-3, 2), (5, -7)] {
            let x = elem(&r, p, q);
            let text = r.format_elem(&x);
            assert_eq!(r.parse_elem(&text).unwrap(), x, "{s}: {text}");
            assert_eq!(r.elem_from_json(&r.elem_to_json(&x)).unwrap(), x);
        }
    }
}

proptest! {
    #[test]
    fn ring_axioms(k in 0..RINGS.len(), v in prop::array::uniform6(-30i64..30)) {
        let r = ring(RINGS[k]);
        let (a, b, c) = (elem(&r, v[0], v[1]), elem(&r, v[2], v[3]), elem(&r, v[4], v[5]));
        prop_assert!(r.contains(&a) && r.contains(&r.mul(&a, &b)) && r.contains(&r.add(&a, &b)));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
        prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
        match r.inv(&a) {
            Some(i) => {
                prop_assert!(r.is_unit(&a));
                prop_assert!(r.is_one(&r.mul(&a, &i)));
            }
            None => prop_assert!(!r.is_unit(&a)),
        }
    }

    #[test]
    fn decompose_recompose(k in 0..6usize, seed in any::<u64>()) {
        use rand::SeedableRng;
        let r = ring(["Z", "Q", "Z/35", "Z[sqrt(2)]", "Z[sqrt(7)]", "Z[i]"][k]);
        let u = unit_group(&r);
        let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = u.random_unit(&mut g, 4);
        prop_assert!(r.is_unit(&x));
        let d = u.decompose(&x).unwrap();
        prop_assert_eq!(u.recompose(&d).unwrap(), x.clone());
        let y = u.random_unit(&mut g, 4);
        let prod = u.decompose(&r.mul(&x, &y)).unwrap();
        prop_assert_eq!(prod, u.mul_elems(&d, &u.decompose(&y).unwrap()));
        prop_assert!(u.is_square_unit(&r.mul(&x, &x)).unwrap());
    }

    #[test]
    fn divisibility_matches_linear_algebra(a in prop::array::uniform2(-15i64..15), b in prop::array::uniform2(-60i64..60)) {
        prop_assume!(a != [0, 0]);
        let o = ring("Z[sqrt(2)]");
        let (x, y) = (RingElem::quad(a[0], a[1]), RingElem::quad(b[0], b[1]));
        let oracle = divides_z_sqrt2((&big(a[0]), &big(a[1])), (&big(b[0]), &big(b[1])));
        prop_assert_eq!(o.divides(&x, &y).unwrap(), oracle);
        prop_assert!(o.divides(&x, &o.mul(&x, &y)).unwrap());
    }

    #[test]
    fn associates_through_units(p in -20i64..20, q in -20i64..20, e in -4i64..5, sign in any::<bool>()) {
        let o = ring("Z[sqrt(2)]");
        let eps = if e >= 0 { o.pow_u(&RingElem::quad(1, 1), e as u64) } else { o.pow_u(&RingElem::quad(-1, 1), (-e) as u64) };
        let unit = if sign { o.neg(&eps) } else { eps };
        let a = RingElem::quad(p, q);
        prop_assert!(o.associates(&a, &o.mul(&a, &unit)));
        let square = unit_group(&o).is_square_unit(&unit).unwrap();
        prop_assert_eq!(square, !sign && e % 2 == 0);
    }
}
