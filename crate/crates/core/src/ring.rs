//! Exact coefficient rings: `Z`, `Q`, `Z/m`, `Z[√d]` and `Z[i]`.
//!
//! A [`RingDescriptor`] carries the arithmetic; a [`RingElem`] is plain data whose
//! meaning depends on the descriptor it is used with. Elements are always kept in
//! canonical form (reduced fractions with positive denominator, residues in
//! `[0, m)`), so structural equality is ring equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::{exact_sqrt, is_squarefree, mod_inverse};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Rationals,
    IntegersMod(BigInt),
    /// `Z[√d]` for squarefree `d ∉ {0, 1}`. Never the maximal order.
    QuadraticOrder(BigInt),
    GaussianIntegers,
}

/// An element of some ring. `Int` is used for `Z` and for residues of `Z/m`;
/// `Quad(a, b)` means `a + b√d` (or `a + bi`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElem {
    Int(BigInt),
    Rat(BigRational),
    Quad(BigInt, BigInt),
}

impl RingElem {
    pub fn int(n: impl Into<BigInt>) -> Self {
        RingElem::Int(n.into())
    }

    pub fn quad(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RingElem::Quad(a.into(), b.into())
    }

    pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        RingElem::Rat(BigRational::new(num.into(), den.into()))
    }
}

impl RingDescriptor {
    /// Parse `Z | Q | Z/<m> | Z[sqrt(<d>)] | Z[i]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        match s {
            "Z" => return Ok(RingDescriptor::Integers),
            "Q" => return Ok(RingDescriptor::Rationals),
            "Z[i]" => return Ok(RingDescriptor::GaussianIntegers),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Z/") {
            if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) {
                return Err(parse_err(2, format!("expected a natural number in `{s}`")));
            }
            let m: BigInt = rest.parse().map_err(|_| parse_err(2, "bad modulus"))?;
            return Self::integers_mod(m);
        }
        if let Some(rest) = s.strip_prefix("Z[sqrt(") {
            let inner = rest
                .strip_suffix(")]")
                .ok_or_else(|| parse_err(s.len(), "expected `)]`"))?;
            let digits = inner.strip_prefix('-').unwrap_or(inner);
            if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(parse_err(7, format!("expected an integer in `{s}`")));
            }
            let d: BigInt = inner.parse().map_err(|_| parse_err(7, "bad integer"))?;
            return Self::quadratic(d);
        }
        Err(parse_err(0, format!("unrecognised ring `{s}`")))
    }

    pub fn integers_mod(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidParameter(format!("modulus {m} < 2")));
        }
        Ok(RingDescriptor::IntegersMod(m))
    }

    pub fn quadratic(d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d.is_zero() || d.is_one() || !is_squarefree(&d) {
            return Err(Error::InvalidParameter(format!(
                "{d} is not a squarefree integer outside {{0, 1}}"
            )));
        }
        Ok(RingDescriptor::QuadraticOrder(d))
    }

    /// The `d` of `Z[√d]`; `-1` for the Gaussian integers.
    pub fn discriminant_d(&self) -> Option<BigInt> {
        match self {
            RingDescriptor::QuadraticOrder(d) => Some(d.clone()),
            RingDescriptor::GaussianIntegers => Some(BigInt::from(-1)),
            _ => None,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.discriminant_d().is_some()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingDescriptor::IntegersMod(_))
    }

    pub fn cardinality(&self) -> Option<BigInt> {
        match self {
            RingDescriptor::IntegersMod(m) => Some(m.clone()),
            _ => None,
        }
    }

    /// All elements of a finite ring, in residue order.
    pub fn elements(&self) -> Option<Vec<RingElem>> {
        match self {
            RingDescriptor::IntegersMod(m) => {
                let mut out = Vec::new();
                let mut k = BigInt::zero();
                while &k < m {
                    out.push(RingElem::Int(k.clone()));
                    k += 1;
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn is_char_zero(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_integral_domain(&self) -> bool {
        match self {
            RingDescriptor::IntegersMod(m) => {
                matches!(crate::arith::factorize(m).as_slice(), [(_, 1)])
            }
            _ => true,
        }
    }

    pub fn zero(&self) -> RingElem {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> RingElem {
        let n = n.into();
        match self {
            RingDescriptor::Integers => RingElem::Int(n),
            RingDescriptor::IntegersMod(m) => RingElem::Int(n.mod_floor(m)),
            RingDescriptor::Rationals => RingElem::Rat(BigRational::from_integer(n)),
            RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers => {
                RingElem::Quad(n, BigInt::zero())
            }
        }
    }

    /// Whether `x` is a well-formed, canonical element of this ring.
    pub fn contains(&self, x: &RingElem) -> bool {
        match (self, x) {
            (RingDescriptor::Integers, RingElem::Int(_)) => true,
            (RingDescriptor::IntegersMod(m), RingElem::Int(r)) => !r.is_negative() && r < m,
            (RingDescriptor::Rationals, RingElem::Rat(q)) => q.denom().is_positive(),
            (RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers, RingElem::Quad(..)) => {
                true
            }
            _ => false,
        }
    }

    fn check(&self, x: &RingElem) {
        debug_assert!(self.contains(x), "{x:?} is not an element of {self}");
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.check(x);
        self.check(y);
        match (self, x, y) {
            (RingDescriptor::IntegersMod(m), RingElem::Int(a), RingElem::Int(b)) => {
                RingElem::Int((a + b).mod_floor(m))
            }
            (_, RingElem::Int(a), RingElem::Int(b)) => RingElem::Int(a + b),
            (_, RingElem::Rat(a), RingElem::Rat(b)) => RingElem::Rat(a + b),
            (_, RingElem::Quad(a1, b1), RingElem::Quad(a2, b2)) => RingElem::Quad(a1 + a2, b1 + b2),
            _ => panic!("mismatched ring elements {x:?}, {y:?}"),
        }
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        self.check(x);
        match (self, x) {
            (RingDescriptor::IntegersMod(m), RingElem::Int(a)) => RingElem::Int((-a).mod_floor(m)),
            (_, RingElem::Int(a)) => RingElem::Int(-a),
            (_, RingElem::Rat(a)) => RingElem::Rat(-a),
            (_, RingElem::Quad(a, b)) => RingElem::Quad(-a, -b),
        }
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        self.check(x);
        self.check(y);
        match (self, x, y) {
            (RingDescriptor::IntegersMod(m), RingElem::Int(a), RingElem::Int(b)) => {
                RingElem::Int((a * b).mod_floor(m))
            }
            (_, RingElem::Int(a), RingElem::Int(b)) => RingElem::Int(a * b),
            (_, RingElem::Rat(a), RingElem::Rat(b)) => RingElem::Rat(a * b),
            (_, RingElem::Quad(a1, b1), RingElem::Quad(a2, b2)) => {
                let d = self.discriminant_d().expect("quadratic ring");
                RingElem::Quad(a1 * a2 + d * b1 * b2, a1 * b2 + a2 * b1)
            }
            _ => panic!("mismatched ring elements {x:?}, {y:?}"),
        }
    }

    /// `x^k` for `k ≥ 0`; negative `k` requires `x` to be a unit.
    pub fn pow(&self, x: &RingElem, k: &BigInt) -> Result<RingElem> {
        let (mut base, mut k) = if k.is_negative() {
            (self.inv(x).ok_or_else(|| Error::NotAUnit(self.format_elem(x)))?, -k)
        } else {
            (x.clone(), k.clone())
        };
        let mut acc = self.one();
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if !k.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    pub fn pow_u(&self, x: &RingElem, k: u64) -> RingElem {
        self.pow(x, &BigInt::from(k)).expect("non-negative exponent")
    }

    pub fn is_zero(&self, x: &RingElem) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &RingElem) -> bool {
        *x == self.one()
    }

    /// `a² - d b²` for quadratic elements.
    pub fn norm(&self, x: &RingElem) -> Option<BigInt> {
        match x {
            RingElem::Quad(a, b) => Some(a * a - self.discriminant_d()? * b * b),
            _ => None,
        }
    }

    pub fn conj(&self, x: &RingElem) -> RingElem {
        match x {
            RingElem::Quad(a, b) => RingElem::Quad(a.clone(), -b),
            other => other.clone(),
        }
    }

    /// Multiplicative inverse, if `x` is a unit.
    pub fn inv(&self, x: &RingElem) -> Option<RingElem> {
        self.check(x);
        match (self, x) {
            (RingDescriptor::Integers, RingElem::Int(a)) => {
                (a.abs().is_one()).then(|| RingElem::Int(a.clone()))
            }
            (RingDescriptor::IntegersMod(m), RingElem::Int(a)) => {
                mod_inverse(a, m).map(RingElem::Int)
            }
            (RingDescriptor::Rationals, RingElem::Rat(q)) => (!q.is_zero()).then(|| RingElem::Rat(q.recip())),
            (_, RingElem::Quad(a, b)) => {
                let n = self.norm(x)?;
                if n.is_one() {
                    Some(RingElem::Quad(a.clone(), -b))
                } else if (-&n).is_one() {
                    Some(RingElem::Quad(-a, b.clone()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_unit(&self, x: &RingElem) -> bool {
        self.inv(x).is_some()
    }

    /// Whether `a | b`, i.e. `b = a·c` for some `c` in the ring.
    ///
    /// In `Z[√d]` the quotient is found by Cramer's rule on the integer system
    /// `[[a₁, d·a₂], [a₂, a₁]]·(x, y) = (b₁, b₂)` and accepted only if integral.
    pub fn divides(&self, a: &RingElem, b: &RingElem) -> Result<bool> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZeroDivisor);
        }
        Ok(self.exact_quotient(a, b)?.is_some())
    }

    /// The `c` with `b = a·c`, when it exists (unique in domains; some witness in `Z/m`).
    pub fn exact_quotient(&self, a: &RingElem, b: &RingElem) -> Result<Option<RingElem>> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZeroDivisor);
        }
        Ok(match (self, a, b) {
            (RingDescriptor::Integers, RingElem::Int(a), RingElem::Int(b)) => {
                b.is_multiple_of(a).then(|| RingElem::Int(b / a))
            }
            (RingDescriptor::Rationals, RingElem::Rat(a), RingElem::Rat(b)) => Some(RingElem::Rat(b / a)),
            (RingDescriptor::IntegersMod(m), RingElem::Int(a), RingElem::Int(b)) => {
                crate::arith::solve_linear_congruence(a, b, m).map(RingElem::Int)
            }
            (_, RingElem::Quad(a1, a2), RingElem::Quad(b1, b2)) => {
                let d = self.discriminant_d().expect("quadratic ring");
                let det = a1 * a1 - &d * a2 * a2;
                let x_num = b1 * a1 - &d * a2 * b2;
                let y_num = a1 * b2 - a2 * b1;
                if x_num.is_multiple_of(&det) && y_num.is_multiple_of(&det) {
                    Some(RingElem::Quad(x_num / &det, y_num / &det))
                } else {
                    None
                }
            }
            _ => return Err(Error::InvalidParameter("mismatched ring elements".into())),
        })
    }

    /// `a = γ·b` for a unit `γ`, decided by divisibility in both directions.
    pub fn associates(&self, a: &RingElem, b: &RingElem) -> bool {
        match (self.is_zero(a), self.is_zero(b)) {
            (true, true) => true,
            (true, false) | (false, true) => false,
            (false, false) => {
                self.divides(a, b).unwrap_or(false) && self.divides(b, a).unwrap_or(false)
            }
        }
    }

    /// Sign of `a + b√d` as a real number (`d > 0`), or of an integer/rational.
    pub fn real_sign(&self, x: &RingElem) -> Option<i8> {
        use crate::arith::sign_of;
        match x {
            RingElem::Int(a) if !self.is_finite() => Some(sign_of(a)),
            RingElem::Rat(q) => Some(sign_of(q.numer())),
            RingElem::Quad(a, b) => {
                let d = self.discriminant_d()?;
                if !d.is_positive() {
                    return None;
                }
                let (sa, sb) = (sign_of(a), sign_of(b));
                if sb == 0 {
                    return Some(sa);
                }
                if sa == 0 || sa == sb {
                    return Some(if sa == 0 { sb } else { sa });
                }
                let lhs = a * a;
                let rhs = d * b * b;
                Some(if lhs > rhs { sa } else { sb })
            }
            _ => None,
        }
    }

    /// A random element; integer coordinates are drawn from `[-bound, bound]`.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> RingElem {
        match self {
            RingDescriptor::Integers => RingElem::int(rng.gen_range(-bound..=bound)),
            RingDescriptor::IntegersMod(m) => {
                let r: u64 = rng.gen();
                RingElem::Int(BigInt::from(r).mod_floor(m))
            }
            RingDescriptor::Rationals => {
                let num = rng.gen_range(-bound..=bound);
                let den = rng.gen_range(1..=bound.max(1));
                RingElem::rat(num, den)
            }
            RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers => RingElem::quad(
                rng.gen_range(-bound..=bound),
                rng.gen_range(-bound..=bound),
            ),
        }
    }

    /// Human-readable form: `7`, `-4/9`, `1+1*sqrt(2)`, `2-3*i`.
    pub fn format_elem(&self, x: &RingElem) -> String {
        match x {
            RingElem::Int(a) => a.to_string(),
            RingElem::Rat(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            RingElem::Quad(a, b) => {
                let unit = match self {
                    RingDescriptor::GaussianIntegers => "i".to_string(),
                    _ => format!("sqrt({})", self.discriminant_d().unwrap_or_default()),
                };
                if b.is_zero() {
                    a.to_string()
                } else if b.is_negative() {
                    format!("{}-{}*{}", a, -b, unit)
                } else {
                    format!("{}+{}*{}", a, b, unit)
                }
            }
        }
    }

    /// Inverse of [`format_elem`](Self::format_elem); also accepts `b*sqrt(d)`,
    /// `sqrt(d)`, `i` and `a+i` shorthands.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| parse_err(0, format!("{msg}: `{text}`"));
        let int = |t: &str| -> Result<BigInt> { t.parse::<BigInt>().map_err(|_| bad("expected an integer")) };
        match self {
            RingDescriptor::Integers => Ok(RingElem::Int(int(&s)?)),
            RingDescriptor::IntegersMod(_) => Ok(self.from_int(int(&s)?)),
            RingDescriptor::Rationals => match s.split_once('/') {
                Some((n, d)) => {
                    let d = int(d)?;
                    if d.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    Ok(RingElem::Rat(BigRational::new(int(n)?, d)))
                }
                None => Ok(RingElem::Rat(BigRational::from_integer(int(&s)?))),
            },
            RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers => {
                let unit = match self {
                    RingDescriptor::GaussianIntegers => "i".to_string(),
                    _ => format!("sqrt({})", self.discriminant_d().unwrap_or_default()),
                };
                let Some(body) = s.strip_suffix(unit.as_str()) else {
                    return Ok(RingElem::Quad(int(&s)?, BigInt::zero()));
                };
                let body = body.strip_suffix('*').unwrap_or(body);
                // split `a±b` at the last sign that is not the leading one
                let split = body
                    .char_indices()
                    .rev()
                    .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
                    .map(|(i, _)| i);
                let (a, b) = match split {
                    Some(i) => (&body[..i], &body[i..]),
                    None => ("0", body),
                };
                let b = match b {
                    "" | "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    other => int(other.strip_prefix('+').unwrap_or(other))?,
                };
                Ok(RingElem::Quad(int(a)?, b))
            }
        }
    }

    /// JSON form: integers as decimal strings, fractions as `{"num","den"}`,
    /// quadratic elements as `{"a","b","d"}`.
    pub fn elem_to_json(&self, x: &RingElem) -> Value {
        match x {
            RingElem::Int(a) => Value::String(a.to_string()),
            RingElem::Rat(q) => json!({"num": q.numer().to_string(), "den": q.denom().to_string()}),
            RingElem::Quad(a, b) => json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "d": self.discriminant_d().unwrap_or_default().to_string(),
            }),
        }
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<RingElem> {
        let bad = || parse_err(0, format!("bad element JSON for {self}: {v}"));
        let num = |v: &Value| -> Result<BigInt> {
            match v {
                Value::String(s) => s.parse().map_err(|_| bad()),
                Value::Number(n) => n.to_string().parse().map_err(|_| bad()),
                _ => Err(bad()),
            }
        };
        let x = match (self, v) {
            (RingDescriptor::Rationals, Value::Object(o)) => {
                let den = num(o.get("den").ok_or_else(bad)?)?;
                if den.is_zero() {
                    return Err(bad());
                }
                RingElem::Rat(BigRational::new(num(o.get("num").ok_or_else(bad)?)?, den))
            }
            (RingDescriptor::QuadraticOrder(_) | RingDescriptor::GaussianIntegers, Value::Object(o)) => {
                if let Some(d) = o.get("d") {
                    if Some(num(d)?) != self.discriminant_d() {
                        return Err(bad());
                    }
                }
                RingElem::Quad(num(o.get("a").ok_or_else(bad)?)?, num(o.get("b").ok_or_else(bad)?)?)
            }
            (_, Value::String(s)) => self.parse_elem(s)?,
            (_, Value::Number(_)) => self.from_int(num(v)?),
            _ => return Err(bad()),
        };
        Ok(x)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDescriptor::QuadraticOrder(d) => write!(f, "Z[sqrt({d})]"),
            RingDescriptor::GaussianIntegers => write!(f, "Z[i]"),
        }
    }
}

impl std::str::FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RingDescriptor::parse(s)
    }
}

/// Whether `n` is a perfect square in `Z`; used by the Pell brute-force oracles.
pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> RingDescriptor {
        RingDescriptor::parse("Z[sqrt(2)]").unwrap()
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(
            RingDescriptor::parse("Z/7").unwrap(),
            RingDescriptor::IntegersMod(7.into())
        );
        assert_eq!(z2(), RingDescriptor::QuadraticOrder(2.into()));
        assert_eq!(RingDescriptor::parse("Z[i]").unwrap(), RingDescriptor::GaussianIntegers);
        assert_eq!(
            RingDescriptor::parse("Z[sqrt(-5)]").unwrap(),
            RingDescriptor::QuadraticOrder((-5).into())
        );
        assert!(matches!(
            RingDescriptor::parse("Z/1"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            RingDescriptor::parse("Z[sqrt(4)]"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            RingDescriptor::parse("Z[sqrt(1)]"),
            Err(Error::InvalidParameter(_))
        ));
        for bad in ["", "R", "Z/", "Z/x", "Z[sqrt(2)", "Z[sqrt()]", "Z/-3"] {
            assert!(matches!(RingDescriptor::parse(bad), Err(Error::Parse { .. })), "{bad}");
        }
        for spec in ["Z", "Q", "Z/12", "Z[sqrt(-3)]", "Z[i]"] {
            assert_eq!(RingDescriptor::parse(spec).unwrap().to_string(), spec);
        }
    }

    #[test]
    fn unit_checks() {
        let z = RingDescriptor::Integers;
        assert!(!z.is_unit(&RingElem::int(2)));
        assert!(z.is_unit(&RingElem::int(-1)));
        assert!(z2().is_unit(&RingElem::quad(1, 1)));
        assert_eq!(z2().norm(&RingElem::quad(1, 1)), Some(BigInt::from(-1)));
        let z6 = RingDescriptor::parse("Z/6").unwrap();
        assert!(!z6.is_unit(&RingElem::int(4)));
        assert!(z6.is_unit(&RingElem::int(5)));
        let q = RingDescriptor::Rationals;
        assert!(q.is_unit(&RingElem::rat(-4, 9)));
        assert!(!q.is_unit(&q.zero()));
    }

    #[test]
    fn divisibility() {
        let r = z2();
        let lam = RingElem::quad(3, 2);
        let one = r.one();
        let l2m1 = r.sub(&r.pow_u(&lam, 2), &one);
        let l6m1 = r.sub(&r.pow_u(&lam, 6), &one);
        let lm1 = r.sub(&lam, &one);
        assert!(r.divides(&l2m1, &l6m1).unwrap());
        assert!(!r.divides(&l2m1, &lm1).unwrap());
        assert_eq!(r.divides(&r.zero(), &lam), Err(Error::DivisionByZeroDivisor));
        let z = RingDescriptor::Integers;
        assert!(z.divides(&RingElem::int(1), &RingElem::int(-123)).unwrap());
        assert!(z.associates(&RingElem::int(3), &RingElem::int(-3)));
        assert!(!z.associates(&RingElem::int(2), &RingElem::int(3)));
        assert!(r.associates(&one, &RingElem::quad(1, 1)));
        let z6 = RingDescriptor::parse("Z/6").unwrap();
        assert!(z6.divides(&RingElem::int(2), &RingElem::int(4)).unwrap());
        assert!(!z6.divides(&RingElem::int(2), &RingElem::int(3)).unwrap());
    }

    #[test]
    fn element_text_and_json() {
        let r = z2();
        for x in [RingElem::quad(1, 1), RingElem::quad(3, -2), RingElem::quad(0, 5), RingElem::quad(-7, 0)] {
            let s = r.format_elem(&x);
            assert_eq!(r.parse_elem(&s).unwrap(), x, "{s}");
            assert_eq!(r.elem_from_json(&r.elem_to_json(&x)).unwrap(), x);
        }
        assert_eq!(r.format_elem(&RingElem::quad(1, 1)), "1+1*sqrt(2)");
        assert_eq!(r.parse_elem("sqrt(2)").unwrap(), RingElem::quad(0, 1));
        assert_eq!(r.parse_elem("3 - sqrt(2)").unwrap(), RingElem::quad(3, -1));
        let g = RingDescriptor::GaussianIntegers;
        assert_eq!(g.parse_elem("-i").unwrap(), RingElem::quad(0, -1));
        assert_eq!(g.parse_elem("2+3*i").unwrap(), RingElem::quad(2, 3));
        let q = RingDescriptor::Rationals;
        assert_eq!(q.parse_elem("-4/9").unwrap(), RingElem::rat(-4, 9));
        assert_eq!(q.elem_to_json(&RingElem::rat(2, -4)), json!({"num": "-1", "den": "2"}));
        let z7 = RingDescriptor::parse("Z/7").unwrap();
        assert_eq!(z7.parse_elem("-1").unwrap(), RingElem::int(6));
        assert_eq!(z7.elem_to_json(&RingElem::int(3)), json!("3"));
    }

    #[test]
    fn real_sign_of_quadratic() {
        let r = z2();
        assert_eq!(r.real_sign(&RingElem::quad(1, -1)), Some(-1));
        assert_eq!(r.real_sign(&RingElem::quad(-1, 1)), Some(1));
        assert_eq!(r.real_sign(&RingElem::quad(3, -2)), Some(1));
        assert_eq!(r.real_sign(&RingElem::quad(0, 0)), Some(0));
        assert_eq!(RingDescriptor::GaussianIntegers.real_sign(&RingElem::quad(1, 1)), None);
    }
}
