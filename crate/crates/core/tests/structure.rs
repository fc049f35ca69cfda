mod common;

use common::*;
use triadeform::cocycle::{AbElem, AbGroup, SymCocycle2};
use triadeform::finite::{self, Enumerated};
use triadeform::ring::{RingDescriptor, RingElem};
use triadeform::structure::*;
use triadeform::tri::{DeformationSpec, DeformedElem};
use triadeform::Error;

fn spec(r: &str, n: usize) -> DeformationSpec {
    DeformationSpec::untwisted(RingDescriptor::parse(r).unwrap(), n).unwrap()
}

fn t3z3() -> (DeformationSpec, Enumerated<DeformedElem>) {
    let s = spec("Z/3", 3);
    let en = finite_group(&s).unwrap();
    (s, en)
}

fn idx(en: &Enumerated<DeformedElem>, x: &DeformedElem) -> u32 {
    en.index_of(x).unwrap()
}

#[test]
fn center() {
    let (s, en) = t3z3();
    let c = description_subgroup(&en, &center_description(&s)).unwrap();
    assert_eq!(c.order(), 2);
    assert_eq!(c.elements, en.group.center().elements);
    assert!(c.contains(idx(&en, &s.identity())));
    assert!(c.contains(idx(&en, &s.scalar(&RingElem::int(2)).unwrap())));
    // brute-force centraliser of every element
    let g = &en.group;
    let brute: Vec<u32> = g.elements().filter(|&x| g.elements().all(|y| g.mul(x, y) == g.mul(y, x))).collect();
    assert_eq!(brute, c.elements);
}

#[test]
fn central_involutions() {
    for (r, exists) in [("Z/3", true), ("Z/5", true), ("Z", true), ("Q", true), ("Z[sqrt(2)]", true), ("Z/2", false), ("Z/8", false), ("Z/15", false)] {
        let s = spec(r, 3);
        let inv = unique_central_involution(&s);
        assert_eq!(inv.is_some(), exists, "{r}");
        if let Some(x) = inv {
            assert_eq!(s.multiply(&x, &x).unwrap(), s.identity());
            assert_eq!(x, s.scalar(&s.ring.from_int(-1)).unwrap());
        }
    }
}

#[test]
fn derived() {
    let (s, en) = t3z3();
    let d = derived_description(&s);
    let a = s.diag_gen(1, &RingElem::int(2)).unwrap();
    let b = s.diag_gen(2, &RingElem::int(2)).unwrap();
    assert!(d.contains(&s.commutator(&a, &b).unwrap()).unwrap());
    let sub = description_subgroup(&en, &d).unwrap();
    assert_eq!(sub.elements, en.group.derived_subgroup().elements);

    let z = spec("Z", 3);
    let dz = derived_description(&z);
    let t = |i, j, b: i64| z.transvection(i, j, &RingElem::int(b)).unwrap();
    assert!(!dz.contains(&t(1, 2, 1)).unwrap());
    assert!(dz.contains(&t(1, 2, 2)).unwrap());
    assert!(dz.contains(&t(1, 3, 1)).unwrap());
    assert!(matches!(dz.contains(&spec("Q", 3).identity()), Err(Error::SpecMismatch)));
}

#[test]
fn widths() {
    let (_, en) = t3z3();
    assert!(commutator_width_check(&en.group, 3).passed);
    let t2 = finite_group(&spec("Z/3", 2)).unwrap();
    let w = commutator_width_check(&t2.group, 1);
    assert!(w.passed && w.derived_order == 3);
    let trivial = commutator_width_check(&finite::cyclic(5), 0);
    assert!(trivial.passed && trivial.derived_order == 1);
    assert!(!commutator_width_check(&finite::symmetric3(), 0).passed);
}

#[test]
fn fitting() {
    let (s, en) = t3z3();
    let f = fitting_description(&s);
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        assert!(f.contains(&s.transvection(i, j, &RingElem::int(1)).unwrap()).unwrap());
    }
    let d = s.diag_gen(1, &RingElem::int(2)).unwrap();
    assert!(!f.contains(&d).unwrap());
    let ncl = en.group.normal_closure(&[idx(&en, &d)]);
    assert_eq!(en.group.nilpotency_class(&ncl), None);

    let fit = brute_force_fitting(&en.group, 2).unwrap();
    assert!(fit.passed());
    assert_eq!(fit.subgroup.order(), 54);
    assert_eq!(fit.subgroup.elements, description_subgroup(&en, &f).unwrap().elements);

    let ab = brute_force_fitting(&finite::cyclic_product(2, 6), 1).unwrap();
    assert_eq!(ab.subgroup.order(), 12);
    let t2 = finite_group(&spec("Z/3", 2)).unwrap();
    let fit2 = brute_force_fitting(&t2.group, 2).unwrap();
    assert_eq!(fit2.subgroup.order(), 6);
}

#[test]
fn lower_central_series() {
    let (s, en) = t3z3();
    let g = &en.group;
    let ts: Vec<u32> = [(1, 2), (2, 3)].iter().map(|&(i, j)| idx(&en, &s.transvection(i, j, &RingElem::int(1)).unwrap())).collect();
    let ut = g.closure(&ts);
    let orders: Vec<usize> = g.lower_central_series(&ut).iter().map(|h| h.order()).collect();
    assert_eq!(orders, vec![27, 3, 1]);
    assert_eq!(g.nilpotency_class(&ut), Some(2));

    let c12 = finite::cyclic(12);
    assert_eq!(c12.lower_central_series(&c12.whole()).iter().map(|h| h.order()).collect::<Vec<_>>(), vec![12, 1]);
    let series = g.lower_central_series(&g.whole());
    assert!(series.last().unwrap().order() > 1);
    assert_eq!(g.nilpotency_class(&g.whole()), None);
}

#[test]
fn normal_closures() {
    let (s, en) = t3z3();
    let g = &en.group;
    let z = idx(&en, &s.scalar(&RingElem::int(2)).unwrap());
    assert_eq!(g.normal_closure(&[z]).elements, g.closure(&[z]).elements);
    let t13 = idx(&en, &s.transvection(1, 3, &RingElem::int(1)).unwrap());
    assert_eq!(g.normal_closure(&[t13]).order(), 3);
}

#[test]
fn unipotent_pm() {
    let s = spec("Z", 3);
    let u = unipotent_pm_description(&s);
    assert!(u.contains(&s.transvection(1, 2, &RingElem::int(1)).unwrap()).unwrap());
    assert!(u.contains(&s.scalar(&RingElem::int(-1)).unwrap()).unwrap());
    assert!(!u.contains(&s.diag_gen(1, &RingElem::int(-1)).unwrap()).unwrap());
}

#[test]
fn tori() {
    let s = spec("Q", 3);
    let q = |a| RingElem::rat(a, 1);
    let x = s.multiply(&s.diag_gen(1, &q(5)).unwrap(), &s.scalar(&q(3)).unwrap()).unwrap();
    assert_eq!(torus_membership(&s, 1, &x).unwrap(), Some(q(5)));
    for i in 1..=3 {
        assert_eq!(torus_membership(&s, i, &s.scalar(&q(-2)).unwrap()).unwrap(), Some(q(1)));
    }
    let y = s.multiply(&s.diag_gen(1, &q(5)).unwrap(), &s.diag_gen(2, &q(7)).unwrap()).unwrap();
    assert!((1..=3).all(|i| torus_membership(&s, i, &y).unwrap().is_none()));
    let desc = torus_description(&s, 1).unwrap();
    assert!(desc.contains(&x).unwrap() && !desc.contains(&y).unwrap());
}

#[test]
fn torsion_splitting() {
    assert!(torsion_split_check(&spec("Z", 3), 1).unwrap());
    let r = RingDescriptor::parse("Z[sqrt(2)]").unwrap();
    let u = AbGroup::units_of(&r);
    let with = |t: RingElem| {
        let f = SymCocycle2::carry(u.clone(), u.clone(), vec![AbElem::Unit(t)]).unwrap();
        DeformationSpec::new(r.clone(), 3, vec![f, SymCocycle2::trivial(u.clone(), u.clone())]).unwrap()
    };
    let bad = with(RingElem::quad(1, 1));
    let good = with(RingElem::quad(3, 2));
    assert!(!torsion_split_check(&bad, 1).unwrap());
    assert!(torsion_split_check(&good, 1).unwrap());
    assert!(torsion_split_check(&bad, 2).unwrap());
    // Δ_3 carries f₁f₂ through the product identity
    assert!(!torsion_split_check(&bad, 3).unwrap());
}

#[test]
fn delta_decomposition() {
    let s = spec("Q", 3);
    let q = |a| RingElem::rat(a, 1);
    let x = s.multiply(&s.diag_gen(1, &q(-4)).unwrap(), &s.scalar(&q(-9)).unwrap()).unwrap();
    let f = delta_factor(&s, 1, &x).unwrap().unwrap();
    assert_eq!(f.torus_sign, s.diag_gen(1, &q(-1)).unwrap());
    assert_eq!(f.central_sign, s.scalar(&q(-1)).unwrap());
    assert_eq!(f.positive, s.multiply(&s.diag_gen(1, &q(4)).unwrap(), &s.scalar(&q(9)).unwrap()).unwrap());
    let id = delta_factor(&s, 1, &s.identity()).unwrap().unwrap();
    assert_eq!((id.torus_sign, id.central_sign, id.positive), (s.identity(), s.identity(), s.identity()));
    let two = delta_factor(&s, 1, &s.diag_gen(1, &q(2)).unwrap()).unwrap().unwrap();
    assert_eq!(two.positive, s.diag_gen(1, &q(2)).unwrap());
    assert_eq!(two.torus_sign, s.identity());

    let mut g = rng(12);
    let samples: Vec<DeformedElem> = (0..100)
        .map(|_| {
            use rand::Rng;
            let a = q(g.gen_range(1..30) * if g.gen_bool(0.5) { 1 } else { -1 });
            let b = q(g.gen_range(1..30) * if g.gen_bool(0.5) { 1 } else { -1 });
            s.multiply(&s.diag_gen(2, &a).unwrap(), &s.scalar(&b).unwrap()).unwrap()
        })
        .collect();
    assert_eq!(delta_square_decomposition(&s, 2, &samples).unwrap().failures, 0);
    assert!(delta_factor(&spec("Z", 3), 1, &spec("Z", 3).identity()).is_err());
}

/// Subgroup machinery against the brute-force oracles on every small model.
#[test]
fn subgroup_operations_match_oracles() {
    for g in small_models() {
        let whole = vec![true; g.order()];
        let lcs: Vec<usize> = g.lower_central_series(&g.whole()).iter().map(|h| h.order()).collect();
        assert_eq!(lcs, brute_lcs(&g, &whole), "{}", g.name);
        assert_eq!(g.nilpotency_class(&g.whole()).filter(|&c| c > 0), brute_class(&g, &whole).filter(|&c| c > 0), "{}", g.name);
        for x in g.elements() {
            let ncl = g.normal_closure(&[x]);
            assert_eq!(ncl.elements, members(&brute_normal_closure(&g, &[x])), "{} ncl({x})", g.name);
        }
        let comms: Vec<u32> = g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
        assert_eq!(g.derived_subgroup().elements, members(&brute_closure(&g, &comms)), "{}", g.name);
        assert_eq!(g.is_abelian(), comms.iter().all(|&c| c == 0), "{}", g.name);
        let classes = g.conjugacy_classes();
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), g.order());
        for class in &classes {
            assert!(class.iter().all(|&y| g.elements().any(|t| g.conj(class[0], t) == y)));
        }
    }
}
