//! Unit groups `R^×` as a finite part (a product of cyclic factors) times a free part.
//!
//! For `Q^×` the free part is indexed lazily by primes; everywhere else the
//! structure is complete and decompositions are unique.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{exact_sqrt, factorize, mult_order, solve_linear_congruence, totient};
use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisMode {
    Complete,
    LazyPrimeBasis,
}

/// A cyclic factor `⟨generator⟩ ≅ Z/order` of the torsion subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionFactor {
    pub generator: RingElem,
    pub order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitGroupStruct {
    pub ring: RingDescriptor,
    /// Cyclic factors of the torsion subgroup. A single factor whenever the
    /// torsion subgroup is cyclic; empty when it is trivial.
    pub torsion: Vec<TorsionFactor>,
    pub torsion_order: BigInt,
    /// Fundamental units. Empty for `Q`, whose basis is the primes.
    pub free_basis: Vec<RingElem>,
    pub basis_mode: BasisMode,
}

/// Exponent coordinates of a unit. `free_exps` is keyed by basis index, or by
/// the prime itself in lazy mode; zero exponents are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitElem {
    pub torsion_exps: Vec<BigInt>,
    pub free_exps: BTreeMap<BigInt, BigInt>,
}

impl UnitElem {
    /// The single torsion exponent when the torsion part is cyclic.
    pub fn torsion_exp(&self) -> BigInt {
        self.torsion_exps.first().cloned().unwrap_or_default()
    }
}

/// The least unit `a + b√d > 1` with `a, b > 0` and `a² − d b² = ±1`, i.e. the
/// fundamental unit of the order `Z[√d]`.
///
/// The first convergent `p/q` of the continued fraction of `√d` with
/// `p² − d q² = ±1` is that unit.
pub fn fundamental_unit(d: &BigInt) -> Result<RingElem> {
    if *d <= BigInt::one() || !crate::arith::is_squarefree(d) {
        return Err(Error::InvalidParameter(format!("{d} is not a squarefree integer > 1")));
    }
    let a0 = num_integer::Roots::sqrt(d);
    // √d = a0 + (√d − a0); iterate (m, den, a) as in the standard algorithm
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        let norm = &p * &p - d * &q * &q;
        if norm.abs().is_one() {
            return Ok(RingElem::Quad(p, q));
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Natural log of `|n|` for arbitrarily large integers.
fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(|a| + |b|√d)`, computed without overflowing `f64`.
fn ln_sum(a: &BigInt, b: &BigInt, d: &BigInt) -> f64 {
    let la = if a.is_zero() { f64::NEG_INFINITY } else { ln_big(a) };
    let lb = if b.is_zero() { f64::NEG_INFINITY } else { ln_big(b) + 0.5 * ln_big(d) };
    let hi = la.max(lb);
    let lo = la.min(lb);
    hi + (lo - hi).exp().ln_1p()
}

fn smallest_generator(m: &BigInt, order: &BigInt) -> BigInt {
    let mut g = BigInt::one();
    loop {
        g += 1;
        if g.gcd(m).is_one() && mult_order(&g, m) == *order {
            return g;
        }
    }
}

/// `(Z/m)^×` is cyclic iff `m ∈ {2, 4, p^k, 2p^k}` for an odd prime `p`.
fn is_cyclic_modulus(m: &BigInt) -> bool {
    let f = factorize(m);
    match f.as_slice() {
        [(p, k)] => p != &BigInt::from(2) || *k <= 2,
        [(two, 1), (p, _)] => *two == BigInt::from(2) && p.is_odd(),
        _ => false,
    }
}

/// CRT lift: the residue mod `m` that is `r` mod `pk` and `1` mod `m / pk`.
fn crt_lift(r: &BigInt, pk: &BigInt, m: &BigInt) -> BigInt {
    let other = m / pk;
    if other.is_one() {
        return r.mod_floor(m);
    }
    // x = 1 + other·t with 1 + other·t ≡ r (mod pk)
    let t = solve_linear_congruence(&other, &(r - 1), pk).expect("coprime moduli");
    (BigInt::one() + other * t).mod_floor(m)
}

fn discrete_log(g: &BigInt, x: &BigInt, modulus: &BigInt, order: &BigInt) -> Option<BigInt> {
    let x = x.mod_floor(modulus);
    let mut acc = BigInt::one().mod_floor(modulus);
    let mut k = BigInt::zero();
    while &k < order {
        if acc == x {
            return Some(k);
        }
        acc = (acc * g).mod_floor(modulus);
        k += 1;
    }
    None
}

/// The unit group of `r`, with generators pinned to the smallest canonical choice.
pub fn unit_group(r: &RingDescriptor) -> UnitGroupStruct {
    let two = BigInt::from(2);
    let minus_one = r.from_int(-1);
    let mut torsion = Vec::new();
    let mut free_basis = Vec::new();
    let mut mode = BasisMode::Complete;
    match r {
        RingDescriptor::Integers => torsion.push(TorsionFactor { generator: minus_one, order: two }),
        RingDescriptor::Rationals => {
            torsion.push(TorsionFactor { generator: minus_one, order: two });
            mode = BasisMode::LazyPrimeBasis;
        }
        RingDescriptor::GaussianIntegers => torsion.push(TorsionFactor {
            generator: RingElem::quad(0, 1),
            order: BigInt::from(4),
        }),
        RingDescriptor::QuadraticOrder(d) => {
            if *d == BigInt::from(-1) {
                torsion.push(TorsionFactor { generator: RingElem::quad(0, 1), order: BigInt::from(4) });
            } else {
                torsion.push(TorsionFactor { generator: minus_one, order: two });
            }
            if d.is_positive() {
                free_basis.push(fundamental_unit(d).expect("validated descriptor"));
            }
        }
        RingDescriptor::IntegersMod(m) => {
            let phi = totient(m);
            if phi.is_one() {
                // trivial group
            } else if is_cyclic_modulus(m) {
                torsion.push(TorsionFactor {
                    generator: RingElem::Int(smallest_generator(m, &phi)),
                    order: phi,
                });
            } else {
                for (p, k) in factorize(m) {
                    let pk = p.pow(k);
                    if p == two {
                        if k >= 2 {
                            torsion.push(TorsionFactor {
                                generator: RingElem::Int(crt_lift(&BigInt::from(-1), &pk, m)),
                                order: two.clone(),
                            });
                        }
                        if k >= 3 {
                            torsion.push(TorsionFactor {
                                generator: RingElem::Int(crt_lift(&BigInt::from(5), &pk, m)),
                                order: two.pow(k - 2),
                            });
                        }
                    } else {
                        let order = totient(&pk);
                        let g = smallest_generator(&pk, &order);
                        torsion.push(TorsionFactor { generator: RingElem::Int(crt_lift(&g, &pk, m)), order });
                    }
                }
            }
        }
    }
    let torsion_order = torsion.iter().fold(BigInt::one(), |acc, f| acc * &f.order);
    UnitGroupStruct { ring: r.clone(), torsion, torsion_order, free_basis, basis_mode: mode }
}

impl UnitGroupStruct {
    /// Generator of the torsion subgroup when it is cyclic (`1` when trivial).
    pub fn torsion_generator(&self) -> Option<RingElem> {
        match self.torsion.as_slice() {
            [] => Some(self.ring.one()),
            [f] => Some(f.generator.clone()),
            _ => None,
        }
    }

    pub fn free_rank(&self) -> Option<usize> {
        match self.basis_mode {
            BasisMode::Complete => Some(self.free_basis.len()),
            BasisMode::LazyPrimeBasis => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == Some(0)
    }

    pub fn identity(&self) -> UnitElem {
        UnitElem { torsion_exps: vec![BigInt::zero(); self.torsion.len()], free_exps: BTreeMap::new() }
    }

    pub fn decompose(&self, x: &RingElem) -> Result<UnitElem> {
        let r = &self.ring;
        if !r.contains(x) || !r.is_unit(x) {
            return Err(Error::NotAUnit(r.format_elem(x)));
        }
        let mut out = self.identity();
        match (r, x) {
            (RingDescriptor::Rationals, RingElem::Rat(q)) => {
                if q.is_negative() {
                    out.torsion_exps[0] = BigInt::one();
                }
                for (p, e) in factorize(q.numer()) {
                    out.free_exps.insert(p, BigInt::from(e));
                }
                for (p, e) in factorize(q.denom()) {
                    out.free_exps.insert(p, -BigInt::from(e));
                }
            }
            (RingDescriptor::IntegersMod(m), RingElem::Int(v)) => {
                if let [f] = self.torsion.as_slice() {
                    let RingElem::Int(g) = &f.generator else { unreachable!() };
                    out.torsion_exps[0] = discrete_log(g, v, m, &f.order).expect("generator");
                } else {
                    let mut idx = 0;
                    for (p, k) in factorize(m) {
                        let pk = p.pow(k);
                        let local = v.mod_floor(&pk);
                        if p == BigInt::from(2) {
                            if k < 2 {
                                continue;
                            }
                            let neg = local.mod_floor(&BigInt::from(4)) == BigInt::from(3);
                            out.torsion_exps[idx] = if neg { BigInt::one() } else { BigInt::zero() };
                            idx += 1;
                            if k >= 3 {
                                let pos = if neg { (&pk - &local).mod_floor(&pk) } else { local };
                                let ord = &self.torsion[idx].order;
                                out.torsion_exps[idx] =
                                    discrete_log(&BigInt::from(5), &pos, &pk, ord).expect("5 generates");
                                idx += 1;
                            }
                        } else {
                            let RingElem::Int(g) = &self.torsion[idx].generator else { unreachable!() };
                            let ord = &self.torsion[idx].order;
                            out.torsion_exps[idx] =
                                discrete_log(&g.mod_floor(&pk), &local, &pk, ord).expect("primitive root");
                            idx += 1;
                        }
                    }
                }
            }
            (_, RingElem::Int(v)) => {
                out.torsion_exps[0] = if v.is_negative() { BigInt::one() } else { BigInt::zero() };
            }
            (_, RingElem::Quad(a, b)) => {
                if let Some(eps) = self.free_basis.first() {
                    let d = r.discriminant_d().expect("quadratic");
                    let RingElem::Quad(ea, eb) = eps else { unreachable!() };
                    let ln_eps = ln_sum(ea, eb, &d);
                    let big = ln_sum(a, b, &d);
                    // |x| = |a| + |b|√d when a, b agree in sign, else its reciprocal
                    let ln_x = if a.sign() == b.sign() || a.is_zero() || b.is_zero() { big } else { -big };
                    let guess = (ln_x / ln_eps).round() as i64;
                    let mut found = None;
                    'search: for e in [guess, guess - 1, guess + 1] {
                        let p = r.pow(eps, &BigInt::from(e))?;
                        for (s, sign) in [(0, r.one()), (1, r.from_int(-1))] {
                            if r.mul(&p, &sign) == *x {
                                found = Some((e, s));
                                break 'search;
                            }
                        }
                    }
                    let (e, s) = found.expect("unit of a real quadratic order");
                    out.torsion_exps[0] = BigInt::from(s);
                    if e != 0 {
                        out.free_exps.insert(BigInt::zero(), BigInt::from(e));
                    }
                } else {
                    let f = &self.torsion[0];
                    let mut acc = r.one();
                    let mut k = BigInt::zero();
                    while acc != *x {
                        acc = r.mul(&acc, &f.generator);
                        k += 1;
                        if k > f.order {
                            return Err(Error::NotAUnit(r.format_elem(x)));
                        }
                    }
                    out.torsion_exps[0] = k;
                }
            }
            _ => return Err(Error::NotAUnit(r.format_elem(x))),
        }
        Ok(out)
    }

    pub fn recompose(&self, u: &UnitElem) -> Result<RingElem> {
        let r = &self.ring;
        let mut acc = r.one();
        for (f, e) in self.torsion.iter().zip(&u.torsion_exps) {
            acc = r.mul(&acc, &r.pow(&f.generator, &e.mod_floor(&f.order))?);
        }
        for (key, e) in &u.free_exps {
            let base = match self.basis_mode {
                BasisMode::Complete => {
                    let i = key.to_usize().filter(|&i| i < self.free_basis.len()).ok_or_else(|| {
                        Error::IndexError(format!("no basis element {key}"))
                    })?;
                    self.free_basis[i].clone()
                }
                BasisMode::LazyPrimeBasis => RingElem::Rat(BigRational::from_integer(key.clone())),
            };
            acc = r.mul(&acc, &r.pow(&base, e)?);
        }
        Ok(acc)
    }

    /// Canonical form: torsion exponents reduced, zero free exponents dropped.
    pub fn normalize(&self, mut u: UnitElem) -> UnitElem {
        for (e, f) in u.torsion_exps.iter_mut().zip(&self.torsion) {
            *e = e.mod_floor(&f.order);
        }
        u.free_exps.retain(|_, e| !e.is_zero());
        u
    }

    pub fn mul_elems(&self, a: &UnitElem, b: &UnitElem) -> UnitElem {
        let mut out = a.clone();
        for (x, y) in out.torsion_exps.iter_mut().zip(&b.torsion_exps) {
            *x += y;
        }
        for (k, e) in &b.free_exps {
            *out.free_exps.entry(k.clone()).or_default() += e;
        }
        self.normalize(out)
    }

    pub fn pow_elem(&self, a: &UnitElem, k: &BigInt) -> UnitElem {
        let mut out = a.clone();
        for x in out.torsion_exps.iter_mut() {
            *x *= k;
        }
        for e in out.free_exps.values_mut() {
            *e *= k;
        }
        self.normalize(out)
    }

    /// Some `y` with `y^m = x`, when one exists.
    pub fn nth_root(&self, x: &RingElem, m: &BigInt) -> Result<Option<RingElem>> {
        if !m.is_positive() {
            return Err(Error::InvalidParameter(format!("root index {m} must be positive")));
        }
        let u = self.decompose(x)?;
        let mut root = self.identity();
        for (i, (e, f)) in u.torsion_exps.iter().zip(&self.torsion).enumerate() {
            match solve_linear_congruence(m, e, &f.order) {
                Some(y) => root.torsion_exps[i] = y,
                None => return Ok(None),
            }
        }
        for (k, e) in &u.free_exps {
            if !e.is_multiple_of(m) {
                return Ok(None);
            }
            root.free_exps.insert(k.clone(), e / m);
        }
        Ok(Some(self.recompose(&root)?))
    }

    pub fn is_square_unit(&self, x: &RingElem) -> Result<bool> {
        Ok(self.nth_root(x, &BigInt::from(2))?.is_some())
    }

    /// `k` = torsion order and the basis of the torsion-free subgroup `(R^×)^k`.
    pub fn torsion_free_power_subgroup(&self) -> Result<(BigInt, Vec<RingElem>)> {
        if self.free_basis.is_empty() {
            return Err(Error::NoFreePart);
        }
        let k = self.torsion_order.clone();
        let basis = self
            .free_basis
            .iter()
            .map(|b| self.ring.pow(b, &k))
            .collect::<Result<Vec<_>>>()?;
        Ok((k, basis))
    }

    /// Whether `x` lies in `(R^×)^k` for the `k` of
    /// [`torsion_free_power_subgroup`](Self::torsion_free_power_subgroup).
    pub fn in_power_subgroup(&self, x: &RingElem) -> Result<bool> {
        let k = self.torsion_order.clone();
        match self.decompose(x) {
            Ok(u) => Ok(u.torsion_exps.iter().all(|e| e.is_zero())
                && u.free_exps.values().all(|e| e.is_multiple_of(&k))),
            Err(Error::NotAUnit(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// A random unit with free exponents in `[-bound, bound]` (primes up to 13 for `Q`).
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> RingElem {
        let mut u = self.identity();
        for (e, f) in u.torsion_exps.iter_mut().zip(&self.torsion) {
            let ord = f.order.to_u64().unwrap_or(u64::MAX);
            *e = BigInt::from(rng.gen_range(0..ord));
        }
        match self.basis_mode {
            BasisMode::Complete => {
                for i in 0..self.free_basis.len() {
                    u.free_exps.insert(BigInt::from(i), BigInt::from(rng.gen_range(-bound..=bound)));
                }
            }
            BasisMode::LazyPrimeBasis => {
                for p in [2, 3, 5, 7, 11, 13] {
                    if rng.gen_bool(0.4) {
                        u.free_exps.insert(BigInt::from(p), BigInt::from(rng.gen_range(-bound..=bound)));
                    }
                }
            }
        }
        let u = self.normalize(u);
        self.recompose(&u).expect("valid coordinates")
    }

    /// All units of a finite unit group, in coordinate order.
    pub fn elements(&self) -> Option<Vec<RingElem>> {
        if !self.is_finite() {
            return None;
        }
        let orders: Vec<u64> = self.torsion.iter().map(|f| f.order.to_u64()).collect::<Option<_>>()?;
        let mut out = Vec::new();
        let mut idx = vec![0u64; orders.len()];
        loop {
            let u = UnitElem {
                torsion_exps: idx.iter().map(|&e| BigInt::from(e)).collect(),
                free_exps: BTreeMap::new(),
            };
            out.push(self.recompose(&u).ok()?);
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return Some(out);
                }
                idx[pos] += 1;
                if idx[pos] < orders[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Brute-force fundamental unit: least `b ≥ 1` with `d b² ± 1` a square.
pub fn pell_brute_force(d: &BigInt, max_b: u64) -> Option<RingElem> {
    for b in 1..=max_b {
        let db2 = d * BigInt::from(b) * BigInt::from(b);
        for t in [&db2 - 1, &db2 + 1] {
            if let Some(a) = exact_sqrt(&t) {
                if a.is_positive() {
                    return Some(RingElem::Quad(a, BigInt::from(b)));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn fundamental_units_pinned() {
        let expect = [(2, (1, 1)), (3, (2, 1)), (5, (2, 1)), (6, (5, 2)), (7, (8, 3)), (10, (3, 1))];
        for (d, (x, y)) in expect {
            assert_eq!(fundamental_unit(&b(d)).unwrap(), RingElem::quad(x, y), "d = {d}");
        }
        assert_eq!(fundamental_unit(&b(13)).unwrap(), RingElem::quad(18, 5));
        assert!(fundamental_unit(&b(4)).is_err());
        assert!(fundamental_unit(&b(1)).is_err());
    }

    #[test]
    fn small_unit_groups() {
        let z = unit_group(&RingDescriptor::Integers);
        assert_eq!(z.torsion_order, b(2));
        assert_eq!(z.torsion_generator(), Some(RingElem::int(-1)));
        assert!(z.free_basis.is_empty());
        let z7 = unit_group(&RingDescriptor::parse("Z/7").unwrap());
        assert_eq!(z7.torsion_generator(), Some(RingElem::int(3)));
        assert_eq!(z7.torsion_order, b(6));
        let f5 = unit_group(&RingDescriptor::parse("Z/5").unwrap());
        assert_eq!(f5.torsion_generator(), Some(RingElem::int(2)));
        let z8 = unit_group(&RingDescriptor::parse("Z/8").unwrap());
        assert_eq!(z8.torsion.len(), 2);
        assert_eq!(z8.torsion_order, b(4));
        let z2 = unit_group(&RingDescriptor::parse("Z/2").unwrap());
        assert!(z2.torsion.is_empty());
        assert_eq!(z2.elements().unwrap(), vec![RingElem::int(1)]);
    }

    #[test]
    fn decompositions() {
        let u = unit_group(&RingDescriptor::parse("Z[sqrt(2)]").unwrap());
        let d = u.decompose(&RingElem::quad(3, 2)).unwrap();
        assert_eq!(d.torsion_exp(), b(0));
        assert_eq!(d.free_exps, BTreeMap::from([(b(0), b(2))]));
        let d = u.decompose(&RingElem::quad(1, -1)).unwrap();
        assert_eq!(d.torsion_exp(), b(1));
        assert_eq!(d.free_exps, BTreeMap::from([(b(0), b(-1))]));
        assert!(matches!(u.decompose(&RingElem::quad(2, 0)), Err(Error::NotAUnit(_))));

        let q = unit_group(&RingDescriptor::Rationals);
        let d = q.decompose(&RingElem::rat(-4, 9)).unwrap();
        assert_eq!(d.torsion_exp(), b(1));
        assert_eq!(d.free_exps, BTreeMap::from([(b(2), b(2)), (b(3), b(-2))]));

        let z = unit_group(&RingDescriptor::Integers);
        assert_eq!(z.decompose(&RingElem::int(-1)).unwrap().torsion_exp(), b(1));

        let z24 = unit_group(&RingDescriptor::parse("Z/24").unwrap());
        assert_eq!(z24.torsion_order, b(8));
        for v in z24.elements().unwrap() {
            let e = z24.decompose(&v).unwrap();
            assert_eq!(z24.recompose(&e).unwrap(), v);
        }
        assert_eq!(z24.elements().unwrap().len(), 8);
    }

    #[test]
    fn squares_and_power_subgroup() {
        let u = unit_group(&RingDescriptor::parse("Z[sqrt(2)]").unwrap());
        assert!(u.is_square_unit(&RingElem::quad(3, 2)).unwrap());
        assert!(!u.is_square_unit(&RingElem::quad(1, 1)).unwrap());
        assert!(!u.is_square_unit(&RingElem::quad(-1, 0)).unwrap());
        let (k, basis) = u.torsion_free_power_subgroup().unwrap();
        assert_eq!(k, b(2));
        assert_eq!(basis, vec![RingElem::quad(3, 2)]);
        let u3 = unit_group(&RingDescriptor::parse("Z[sqrt(3)]").unwrap());
        assert_eq!(u3.torsion_free_power_subgroup().unwrap().1, vec![RingElem::quad(7, 4)]);
        let gi = unit_group(&RingDescriptor::GaussianIntegers);
        assert_eq!(gi.torsion_free_power_subgroup(), Err(Error::NoFreePart));
        assert!(gi.is_square_unit(&RingElem::quad(-1, 0)).unwrap());
        assert!(!gi.is_square_unit(&RingElem::quad(0, 1)).unwrap());
        let q = unit_group(&RingDescriptor::Rationals);
        assert_eq!(q.nth_root(&RingElem::rat(4, 1), &b(2)).unwrap(), Some(RingElem::rat(2, 1)));
        assert_eq!(q.nth_root(&RingElem::rat(2, 1), &b(2)).unwrap(), None);
    }

    #[test]
    fn large_exponent_decomposes() {
        let r = RingDescriptor::parse("Z[sqrt(7)]").unwrap();
        let u = unit_group(&r);
        let x = r.mul(&r.pow(&u.free_basis[0], &b(-137)).unwrap(), &r.from_int(-1));
        let d = u.decompose(&x).unwrap();
        assert_eq!(d.free_exps[&b(0)], b(-137));
        assert_eq!(d.torsion_exp(), b(1));
    }
}
