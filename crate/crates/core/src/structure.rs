//! Structural subgroups of `T_n(R, f̄)`: symbolic membership tests and their
//! brute-force counterparts on finite instances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cocycle::is_cot;
use crate::error::{Error, Result};
use crate::finite::{Enumerated, FiniteGroup, Subgroup};
use crate::ring::{RingDescriptor, RingElem};
use crate::tri::{group_order, upper_index, DeformationSpec, DeformedElem, ENUMERATION_LIMIT};

/// The ideal of `R` generated by `{1 − α : α ∈ R^×}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitIdeal {
    Zero,
    Whole,
    /// `kR` for `R = Z` or `Z/m`.
    Multiples(BigInt),
    /// Z-lattice with basis `p + q√d`, `r√d` in `Z[√d]`.
    Lattice { p: BigInt, q: BigInt, r: BigInt },
}

impl UnitIdeal {
    pub fn of(ring: &RingDescriptor) -> Self {
        let units = crate::units::unit_group(ring);
        match ring {
            RingDescriptor::Rationals => UnitIdeal::Whole,
            RingDescriptor::Integers => UnitIdeal::Multiples(BigInt::from(2)),
            RingDescriptor::IntegersMod(m) => {
                let mut g = m.clone();
                for t in &units.torsion {
                    if let RingElem::Int(x) = &t.generator {
                        g = g.gcd(&(BigInt::one() - x));
                    }
                }
                if g.is_one() {
                    UnitIdeal::Whole
                } else if &g == m {
                    UnitIdeal::Zero
                } else {
                    UnitIdeal::Multiples(g)
                }
            }
            RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers => {
                let d = ring.discriminant_d().expect("quadratic");
                let mut rows = Vec::new();
                let gens = units.torsion.iter().map(|t| t.generator.clone()).chain(units.free_basis.iter().cloned());
                for g in gens {
                    if let RingElem::Quad(a, b) = ring.sub(&ring.one(), &g) {
                        rows.push((&d * &b, a.clone()));
                        rows.push((a, b));
                    }
                }
                let (p, q, r) = hnf2(&rows);
                if p.is_one() && r.is_one() {
                    UnitIdeal::Whole
                } else {
                    UnitIdeal::Lattice { p, q, r }
                }
            }
        }
    }

    pub fn contains(&self, x: &RingElem) -> bool {
        match (self, x) {
            (UnitIdeal::Whole, _) => true,
            (UnitIdeal::Zero, RingElem::Int(v)) => v.is_zero(),
            (UnitIdeal::Zero, RingElem::Quad(a, b)) => a.is_zero() && b.is_zero(),
            (UnitIdeal::Zero, RingElem::Rat(v)) => v.is_zero(),
            (UnitIdeal::Multiples(k), RingElem::Int(v)) => v.is_multiple_of(k),
            (UnitIdeal::Lattice { p, q, r }, RingElem::Quad(a, b)) => {
                let (k, rem) = if p.is_zero() { (BigInt::zero(), a.clone()) } else { a.div_rem(p) };
                if !rem.is_zero() {
                    return false;
                }
                let y = b - k * q;
                if r.is_zero() {
                    y.is_zero()
                } else {
                    y.is_multiple_of(r)
                }
            }
            _ => false,
        }
    }

    pub fn describe(&self, ring: &RingDescriptor) -> String {
        match self {
            UnitIdeal::Zero => "0".into(),
            UnitIdeal::Whole => ring.to_string(),
            UnitIdeal::Multiples(k) => format!("{k}{ring}"),
            UnitIdeal::Lattice { p, q, r } => {
                let d = ring.discriminant_d().unwrap_or_default();
                let rd = if d == BigInt::from(-1) { "i".to_string() } else { format!("sqrt({d})") };
                format!("Z({p}+{q}*{rd}) + Z({r}*{rd})")
            }
        }
    }
}

/// Lattice in Z² (coordinates of `x + y√d`) spanned by `rows`, as `(p, q), (0, r)`
/// with `p, r ≥ 0` and `0 ≤ q < r` when `r > 0`.
fn hnf2(rows: &[(BigInt, BigInt)]) -> (BigInt, BigInt, BigInt) {
    let mut cur = (BigInt::zero(), BigInt::zero());
    let mut r = BigInt::zero();
    for (a, b) in rows {
        let e = cur.0.extended_gcd(a);
        let g = e.gcd.clone();
        if g.is_zero() {
            r = r.gcd(&cur.1).gcd(b);
            cur.1 = BigInt::zero();
            continue;
        }
        let merged = (g.clone(), &e.x * &cur.1 + &e.y * b);
        let other = (a / &g) * &cur.1 - (&cur.0 / &g) * b;
        r = r.gcd(&other);
        cur = merged;
    }
    if cur.0.is_negative() {
        cur = (-cur.0, -cur.1);
    }
    if cur.0.is_zero() {
        r = r.gcd(&cur.1);
        cur.1 = BigInt::zero();
    }
    if !r.is_zero() {
        cur.1 = cur.1.mod_floor(&r);
    }
    (cur.0, cur.1, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SubgroupKind {
    Center,
    Derived,
    Fitting,
    Torus(usize),
    UnipotentPlusMinus,
}

/// A subgroup given by a membership predicate on normal forms.
#[derive(Clone, Debug)]
pub struct SubgroupDescription {
    pub kind: SubgroupKind,
    pub generator_family: String,
    spec: DeformationSpec,
    ideal: Option<UnitIdeal>,
}

impl SubgroupDescription {
    pub fn contains(&self, g: &DeformedElem) -> Result<bool> {
        let s = &self.spec;
        if !s.contains(g) {
            return Err(Error::SpecMismatch);
        }
        let r = &s.ring;
        let xbar_trivial = g.xbar.iter().all(|x| r.is_one(x));
        Ok(match self.kind {
            SubgroupKind::Center => xbar_trivial && s.is_diagonal(g),
            SubgroupKind::Fitting => xbar_trivial,
            SubgroupKind::Derived => {
                let ideal = self.ideal.as_ref().expect("derived carries its ideal");
                xbar_trivial
                    && r.is_one(&g.z)
                    && (0..s.n - 1).all(|i| ideal.contains(&g.upper[upper_index(s.n, i, i + 1)]))
            }
            SubgroupKind::Torus(i) => s.is_diagonal(g) && torus_membership(s, i, g)?.is_some(),
            SubgroupKind::UnipotentPlusMinus => {
                let derived = derived_description(s);
                let fitting = fitting_description(s);
                let sq = s.multiply(g, g)?;
                fitting.contains(g)? && (derived.contains(g)? || derived.contains(&sq)?)
            }
        })
    }
}

pub fn center_description(spec: &DeformationSpec) -> SubgroupDescription {
    SubgroupDescription {
        kind: SubgroupKind::Center,
        generator_family: "diag(z), z a unit".into(),
        spec: spec.clone(),
        ideal: None,
    }
}

pub fn derived_description(spec: &DeformationSpec) -> SubgroupDescription {
    let ideal = UnitIdeal::of(&spec.ring);
    SubgroupDescription {
        kind: SubgroupKind::Derived,
        generator_family: format!(
            "t_(i,i+1)(b) with b in {}, t_(k,l)(b) with l-k >= 2",
            ideal.describe(&spec.ring)
        ),
        spec: spec.clone(),
        ideal: Some(ideal),
    }
}

pub fn fitting_description(spec: &DeformationSpec) -> SubgroupDescription {
    SubgroupDescription {
        kind: SubgroupKind::Fitting,
        generator_family: "UT_n(R) * Z(G)".into(),
        spec: spec.clone(),
        ideal: None,
    }
}

pub fn unipotent_pm_description(spec: &DeformationSpec) -> SubgroupDescription {
    SubgroupDescription {
        kind: SubgroupKind::UnipotentPlusMinus,
        generator_family: "x in Fitt and (x in G' or x^2 in G')".into(),
        spec: spec.clone(),
        ideal: None,
    }
}

pub fn torus_description(spec: &DeformationSpec, i: usize) -> Result<SubgroupDescription> {
    if !(1..=spec.n).contains(&i) {
        return Err(Error::IndexError(format!("torus {i} needs 1 <= i <= {}", spec.n)));
    }
    Ok(SubgroupDescription {
        kind: SubgroupKind::Torus(i),
        generator_family: format!("d_{i}(a) * Z(G)"),
        spec: spec.clone(),
        ideal: None,
    })
}

/// The unique `α` with `x ∈ d_i(α)·Z(G)`, or `None` when `x ∉ Δ_i`.
pub fn torus_membership(spec: &DeformationSpec, i: usize, x: &DeformedElem) -> Result<Option<RingElem>> {
    if !(1..=spec.n).contains(&i) {
        return Err(Error::IndexError(format!("torus {i} needs 1 <= i <= {}", spec.n)));
    }
    if !spec.contains(x) {
        return Err(Error::SpecMismatch);
    }
    if !spec.is_diagonal(x) {
        return Err(Error::NotDiagonal);
    }
    let r = &spec.ring;
    if i < spec.n {
        let ok = x.xbar.iter().enumerate().all(|(j, v)| j == i - 1 || r.is_one(v));
        return Ok(ok.then(|| x.xbar[i - 1].clone()));
    }
    let first = &x.xbar[0];
    let ok = x.xbar.iter().all(|v| v == first);
    Ok(ok.then(|| r.inv(first).expect("unit")))
}

/// `−I_n` when it is the only non-trivial central involution.
pub fn unique_central_involution(spec: &DeformationSpec) -> Option<DeformedElem> {
    let r = &spec.ring;
    let candidates: Vec<RingElem> = match spec.units.elements() {
        Some(us) => us,
        None => crate::tri::torsion_elements(&spec.units),
    };
    let roots: Vec<RingElem> = candidates
        .into_iter()
        .filter(|u| !r.is_one(u) && r.is_one(&r.mul(u, u)))
        .collect();
    match roots.as_slice() {
        [u] if *u == r.neg(&r.one()) => spec.scalar(u).ok(),
        _ => None,
    }
}

/// Whether the lift of the torsion of `R^×` into `Δ_i` splits over the centre,
/// decided by whether `f_i` is coboundarious on torsion. For `i = n` the cocycle
/// is `(f₁⋯f_{n−1})⁻¹`.
pub fn torsion_split_check(spec: &DeformationSpec, i: usize) -> Result<bool> {
    if !(1..=spec.n).contains(&i) {
        return Err(Error::IndexError(format!("torus {i} needs 1 <= i <= {}", spec.n)));
    }
    if i < spec.n {
        return is_cot(&spec.cocycles[i - 1]);
    }
    let mut f = spec.cocycles[0].clone();
    for g in &spec.cocycles[1..] {
        f = f.product(g)?;
    }
    is_cot(&f.inverse()?)
}

/// Enumerates a finite deformed group with its standard generators.
pub fn finite_group(spec: &DeformationSpec) -> Result<Enumerated<DeformedElem>> {
    let expected = group_order(spec)
        .filter(|&o| o <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{spec} has more than {ENUMERATION_LIMIT} elements")))?
        as usize;
    let gens = spec.standard_generators()?;
    let en = FiniteGroup::generate(
        &spec.to_string(),
        spec.identity(),
        &gens,
        |a, b| spec.multiply(a, b),
        |a| spec.inverse(a),
        |a| spec.format_elem(a),
        ENUMERATION_LIMIT as usize,
    )?;
    if en.group.order() != expected {
        return Err(Error::InvalidParameter(format!(
            "generators span {} of {expected} elements",
            en.group.order()
        )));
    }
    Ok(en)
}

/// Members of `desc` inside an enumerated group.
pub fn description_subgroup(en: &Enumerated<DeformedElem>, desc: &SubgroupDescription) -> Result<Subgroup> {
    let mut members = Vec::new();
    for (k, e) in en.elements.iter().enumerate() {
        if desc.contains(e)? {
            members.push(k as u32);
        }
    }
    let gens = en.group.small_generating_set(&Subgroup::from_members(&en.group, members.clone(), members.clone()));
    Ok(Subgroup::from_members(&en.group, members, gens))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub derived_order: usize,
    pub bound: usize,
    /// Least `k` with every element of `G′` a product of `k` commutators.
    pub width: Option<usize>,
    pub passed: bool,
}

/// Breadth-first products of commutators against the brute-force `G′`.
pub fn commutator_width_check(g: &FiniteGroup, bound: usize) -> WidthReport {
    let derived = g.derived_subgroup();
    let n = g.order();
    let mut is_comm = vec![false; n];
    for a in g.elements() {
        for b in g.elements() {
            is_comm[g.commutator(a, b) as usize] = true;
        }
    }
    let comms: Vec<u32> = (0..n as u32).filter(|&c| is_comm[c as usize]).collect();
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut frontier = vec![0u32];
    let mut count = 1;
    let mut width = (count == derived.order()).then_some(0);
    let mut k = 0;
    while width.is_none() && k < bound.max(1) * 4 && !frontier.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for &c in &comms {
                let y = g.mul(x, c);
                if !reached[y as usize] {
                    reached[y as usize] = true;
                    next.push(y);
                    count += 1;
                }
            }
        }
        frontier = next;
        if count == derived.order() {
            width = Some(k);
        }
    }
    WidthReport {
        derived_order: derived.order(),
        bound,
        width,
        passed: width.is_some_and(|w| w <= bound),
    }
}

#[derive(Clone, Debug)]
pub struct FittingReport {
    pub subgroup: Subgroup,
    pub class_bound: usize,
    pub class: Option<usize>,
    pub normal: bool,
    /// Every conjugacy class outside the result generates, together with it,
    /// a non-nilpotent normal subgroup.
    pub maximal: bool,
}

impl FittingReport {
    pub fn passed(&self) -> bool {
        self.normal && self.maximal && self.class.is_some_and(|c| c <= self.class_bound)
    }
}

/// `⟨g : ⟨g⟩^G nilpotent of class ≤ c⟩`, checked post hoc.
pub fn brute_force_fitting(g: &FiniteGroup, class_bound: usize) -> Result<FittingReport> {
    if g.order() as u64 > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{} has order {}", g.name, g.order())));
    }
    let classes = g.conjugacy_classes();
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for class in &classes {
        let rep = class[0];
        let ncl = g.normal_closure(&[rep]);
        match g.nilpotency_class(&ncl) {
            Some(c) if c <= class_bound => accepted.push(rep),
            _ => rejected.push(rep),
        }
    }
    let fitt = g.normal_closure(&accepted);
    let class = g.nilpotency_class(&fitt);
    let normal = g.is_normal(&fitt);
    let maximal = rejected.iter().filter(|&&x| !fitt.contains(x)).all(|&x| {
        let mut gens = fitt.generators.clone();
        gens.push(x);
        let bigger = g.normal_closure(&gens);
        g.nilpotency_class(&bigger).is_none()
    });
    Ok(FittingReport { subgroup: fitt, class_bound, class, normal, maximal })
}

#[derive(Clone, Debug)]
pub struct DeltaFactorization {
    pub torus_sign: DeformedElem,
    pub central_sign: DeformedElem,
    pub positive: DeformedElem,
}

/// Splits `x ∈ Δ_i` over `Q` as `d_i(±1)·diag(±1)·p` with `p` having positive
/// torus and central coordinates. `None` when the split is not unique.
pub fn delta_factor(spec: &DeformationSpec, i: usize, x: &DeformedElem) -> Result<Option<DeltaFactorization>> {
    if spec.ring != RingDescriptor::Rationals {
        return Err(Error::InvalidParameter("the sign/positive split is modelled over Q only".into()));
    }
    if torus_membership(spec, i, x)?.is_none() {
        return Ok(None);
    }
    let r = &spec.ring;
    let signs = [r.one(), r.neg(&r.one())];
    let mut found = Vec::new();
    for s in &signs {
        for t in &signs {
            let a1 = spec.diag_gen(i, s)?;
            let a2 = spec.scalar(t)?;
            let rest = spec.multiply(&spec.inverse(&spec.multiply(&a1, &a2)?)?, x)?;
            let alpha = torus_membership(spec, i, &rest)?.expect("Δ_i is a subgroup");
            let centre = spec.multiply(&rest, &spec.inverse(&spec.diag_gen(i, &alpha)?)?)?;
            if r.real_sign(&alpha) == Some(1) && r.real_sign(&centre.z) == Some(1) {
                found.push(DeltaFactorization { torus_sign: a1, central_sign: a2, positive: rest });
            }
        }
    }
    Ok(if found.len() == 1 { found.pop() } else { None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub samples: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

/// `Δ_i = A₁ × A₂ × Δ_i⁺` on the sampled elements: unique sign split, the sign
/// parts are involutions (or trivial), and the factors multiply back to `x`.
pub fn delta_square_decomposition(spec: &DeformationSpec, i: usize, samples: &[DeformedElem]) -> Result<DeltaReport> {
    let mut report = DeltaReport { samples: 0, failures: 0, witness: None };
    for x in samples {
        report.samples += 1;
        let ok = match delta_factor(spec, i, x)? {
            None => false,
            Some(fac) => {
                let back = spec.mul_all(&[fac.torus_sign.clone(), fac.central_sign.clone(), fac.positive.clone()])?;
                let invol = |a: &DeformedElem| spec.multiply(a, a).map(|s| s == spec.identity());
                back == *x && invol(&fac.torus_sign)? && invol(&fac.central_sign)?
            }
        };
        if !ok {
            report.failures += 1;
            report.witness.get_or_insert_with(|| spec.format_elem(x));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(ring: &str, n: usize) -> DeformationSpec {
        DeformationSpec::untwisted(RingDescriptor::parse(ring).unwrap(), n).unwrap()
    }

    #[test]
    fn unit_ideals() {
        let z = UnitIdeal::of(&RingDescriptor::Integers);
        assert!(z.contains(&RingElem::int(4)) && !z.contains(&RingElem::int(3)));
        assert_eq!(UnitIdeal::of(&RingDescriptor::parse("Z/2").unwrap()), UnitIdeal::Zero);
        assert_eq!(UnitIdeal::of(&RingDescriptor::parse("Z/3").unwrap()), UnitIdeal::Whole);
        assert_eq!(UnitIdeal::of(&RingDescriptor::parse("Z/8").unwrap()), UnitIdeal::Multiples(2.into()));
        let gi = UnitIdeal::of(&RingDescriptor::GaussianIntegers);
        assert!(gi.contains(&RingElem::quad(1, -1)) && gi.contains(&RingElem::quad(2, 0)));
        assert!(!gi.contains(&RingElem::quad(1, 0)));
        let z2 = UnitIdeal::of(&RingDescriptor::parse("Z[sqrt(2)]").unwrap());
        // 1 - (1+√2) = -√2 generates; √2 | 2
        assert!(z2.contains(&RingElem::quad(0, 1)) && z2.contains(&RingElem::quad(2, 0)));
        assert!(!z2.contains(&RingElem::quad(1, 0)));
    }

    #[test]
    fn derived_over_z() {
        let s = spec("Z", 3);
        let d = derived_description(&s);
        let t = |i, j, b: i64| s.transvection(i, j, &RingElem::int(b)).unwrap();
        assert!(!d.contains(&t(1, 2, 1)).unwrap());
        assert!(d.contains(&t(1, 2, 2)).unwrap());
        assert!(d.contains(&t(1, 3, 1)).unwrap());
        let u = unipotent_pm_description(&s);
        assert!(u.contains(&t(1, 2, 1)).unwrap());
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
            assert_eq!(torus_membership(&s, i, &s.scalar(&q(7)).unwrap()).unwrap(), Some(q(1)));
        }
        let y = s.multiply(&s.diag_gen(1, &q(5)).unwrap(), &s.diag_gen(2, &q(7)).unwrap()).unwrap();
        assert!((1..=3).all(|i| torus_membership(&s, i, &y).unwrap().is_none()));
        let dn = s.diag_gen(3, &q(4)).unwrap();
        assert_eq!(torus_membership(&s, 3, &dn).unwrap(), Some(q(4)));
        assert!(matches!(torus_membership(&s, 1, &s.transvection(1, 2, &q(1)).unwrap()), Err(Error::NotDiagonal)));
    }

    #[test]
    fn delta_split_over_q() {
        let s = spec("Q", 3);
        let q = |a| RingElem::rat(a, 1);
        let x = s.multiply(&s.diag_gen(1, &q(-4)).unwrap(), &s.scalar(&q(-9)).unwrap()).unwrap();
        let f = delta_factor(&s, 1, &x).unwrap().unwrap();
        assert_eq!(f.torus_sign, s.diag_gen(1, &q(-1)).unwrap());
        assert_eq!(f.central_sign, s.scalar(&q(-1)).unwrap());
        assert_eq!(f.positive, s.multiply(&s.diag_gen(1, &q(4)).unwrap(), &s.scalar(&q(9)).unwrap()).unwrap());
        let r = delta_square_decomposition(&s, 1, &[x, s.identity(), s.diag_gen(1, &q(2)).unwrap()]).unwrap();
        assert_eq!(r.failures, 0);
    }

    #[test]
    fn involutions() {
        assert!(unique_central_involution(&spec("Z/3", 3)).is_some());
        assert!(unique_central_involution(&spec("Z/2", 3)).is_none());
        assert!(unique_central_involution(&spec("Z/8", 3)).is_none());
        assert!(unique_central_involution(&spec("Z", 3)).is_some());
        assert!(unique_central_involution(&spec("Q", 3)).is_some());
    }

    #[test]
    fn small_instances() {
        let en = finite_group(&spec("Z/3", 3)).unwrap();
        let g = &en.group;
        assert_eq!(g.order(), 216);
        assert_eq!(g.center().order(), 2);
        assert_eq!(g.derived_subgroup().order(), 27);
        assert!(commutator_width_check(g, 3).passed);
        let fit = brute_force_fitting(g, 2).unwrap();
        assert!(fit.passed());
        assert_eq!(fit.subgroup.order(), 54);
        let desc = description_subgroup(&en, &fitting_description(&spec("Z/3", 3))).unwrap();
        assert_eq!(desc.elements, fit.subgroup.elements);
    }
}
