//! Symmetric 2-cocycles `f : B × B → A` between abelian groups, their extensions,
//! and the coboundary / CoT decisions.
//!
//! Conventions: `f` is a coboundary when `f(x, y) = ψ(xy)·ψ(x)⁻¹·ψ(y)⁻¹` for some
//! `ψ : B → A` with `ψ(1) = 1`. The extension `E(f)` is `B × A` with
//! `(b₁, a₁)(b₂, a₂) = (b₁b₂, a₁a₂·f(b₁, b₂))`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{AbHom, CyclicProduct, Matrix};
use crate::arith::solve_linear_congruence;
use crate::error::{parse_err, Error, Result};
use crate::ring::{RingDescriptor, RingElem};
use crate::units::{unit_group, BasisMode, UnitGroupStruct, UnitElem};

/// An abelian group a cocycle can live on: an explicit product of cyclic groups,
/// or the unit group of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AbGroup {
    Fg(CyclicProduct),
    Units(UnitGroupStruct),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbElem {
    Vector(Vec<BigInt>),
    Unit(RingElem),
}

impl AbElem {
    pub fn unit(&self) -> Option<&RingElem> {
        match self {
            AbElem::Unit(u) => Some(u),
            AbElem::Vector(_) => None,
        }
    }
}

/// Exponents of an element against the torsion generators and the free basis
/// (free keys are basis indices, or primes for `Q^×`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coords {
    pub torsion: Vec<BigInt>,
    pub free: BTreeMap<BigInt, BigInt>,
}

impl AbGroup {
    /// `Z/4 x Z`, `1`, or `units(<ring>)`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if let Some(inner) = s.strip_prefix("units(").and_then(|r| r.strip_suffix(')')) {
            return Ok(AbGroup::Units(unit_group(&RingDescriptor::parse(inner)?)));
        }
        Ok(AbGroup::Fg(CyclicProduct::parse(s)?))
    }

    pub fn units_of(r: &RingDescriptor) -> Self {
        AbGroup::Units(unit_group(r))
    }

    pub fn cyclic(m: u64) -> Self {
        AbGroup::Fg(CyclicProduct::cyclic(m))
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        match self {
            AbGroup::Fg(p) => p.orders.clone(),
            AbGroup::Units(u) => u.torsion.iter().map(|f| f.order.clone()).collect(),
        }
    }

    pub fn torsion_generator(&self, k: usize) -> AbElem {
        match self {
            AbGroup::Fg(p) => {
                let mut v = p.zero();
                v[k] = BigInt::one();
                AbElem::Vector(v)
            }
            AbGroup::Units(u) => AbElem::Unit(u.torsion[k].generator.clone()),
        }
    }

    /// `None` for the lazily indexed `Q^×`.
    pub fn free_rank(&self) -> Option<usize> {
        match self {
            AbGroup::Fg(p) => Some(p.free_rank),
            AbGroup::Units(u) => u.free_rank(),
        }
    }

    pub fn free_generator(&self, key: &BigInt) -> Result<AbElem> {
        match self {
            AbGroup::Fg(p) => {
                let i = key.to_usize().filter(|&i| i < p.free_rank).ok_or_else(|| {
                    Error::IndexError(format!("no free generator {key}"))
                })?;
                let mut v = p.zero();
                v[p.orders.len() + i] = BigInt::one();
                Ok(AbElem::Vector(v))
            }
            AbGroup::Units(u) => {
                let mut e = u.identity();
                e.free_exps.insert(key.clone(), BigInt::one());
                Ok(AbElem::Unit(u.recompose(&e)?))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == Some(0)
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_orders().iter().product())
    }

    pub fn identity(&self) -> AbElem {
        match self {
            AbGroup::Fg(p) => AbElem::Vector(p.zero()),
            AbGroup::Units(u) => AbElem::Unit(u.ring.one()),
        }
    }

    pub fn is_identity(&self, x: &AbElem) -> bool {
        *x == self.identity()
    }

    pub fn contains(&self, x: &AbElem) -> bool {
        match (self, x) {
            (AbGroup::Fg(p), AbElem::Vector(v)) => p.contains(v),
            (AbGroup::Units(u), AbElem::Unit(r)) => u.ring.contains(r) && u.ring.is_unit(r),
            _ => false,
        }
    }

    pub fn op(&self, a: &AbElem, b: &AbElem) -> AbElem {
        match (self, a, b) {
            (AbGroup::Fg(p), AbElem::Vector(x), AbElem::Vector(y)) => AbElem::Vector(p.add(x, y)),
            (AbGroup::Units(u), AbElem::Unit(x), AbElem::Unit(y)) => AbElem::Unit(u.ring.mul(x, y)),
            _ => panic!("element kinds do not match group {self}"),
        }
    }

    pub fn inv(&self, a: &AbElem) -> AbElem {
        match (self, a) {
            (AbGroup::Fg(p), AbElem::Vector(x)) => AbElem::Vector(p.neg(x)),
            (AbGroup::Units(u), AbElem::Unit(x)) => {
                AbElem::Unit(u.ring.inv(x).expect("unit group elements are invertible"))
            }
            _ => panic!("element kind does not match group {self}"),
        }
    }

    pub fn pow(&self, a: &AbElem, k: &BigInt) -> AbElem {
        match (self, a) {
            (AbGroup::Fg(p), AbElem::Vector(x)) => AbElem::Vector(p.scale(x, k)),
            (AbGroup::Units(u), AbElem::Unit(x)) => {
                AbElem::Unit(u.ring.pow(x, k).expect("unit group elements are invertible"))
            }
            _ => panic!("element kind does not match group {self}"),
        }
    }

    pub fn coords(&self, x: &AbElem) -> Result<Coords> {
        match (self, x) {
            (AbGroup::Fg(p), AbElem::Vector(v)) => {
                if v.len() != p.dims() {
                    return Err(Error::InvalidParameter(format!("element of wrong length for {p}")));
                }
                let k = p.orders.len();
                let torsion = p.reduce(v[..k].to_vec());
                let free = v[k..]
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(i, e)| (BigInt::from(i), e.clone()))
                    .collect();
                Ok(Coords { torsion, free })
            }
            (AbGroup::Units(u), AbElem::Unit(r)) => {
                let d = u.decompose(r)?;
                Ok(Coords { torsion: d.torsion_exps, free: d.free_exps })
            }
            _ => Err(Error::InvalidParameter(format!("element kind does not match group {self}"))),
        }
    }

    pub fn from_coords(&self, c: &Coords) -> Result<AbElem> {
        match self {
            AbGroup::Fg(p) => {
                let mut v = c.torsion.clone();
                let mut free = vec![BigInt::zero(); p.free_rank];
                for (k, e) in &c.free {
                    let i = k.to_usize().filter(|&i| i < p.free_rank).ok_or_else(|| {
                        Error::IndexError(format!("no free generator {k}"))
                    })?;
                    free[i] = e.clone();
                }
                v.extend(free);
                Ok(AbElem::Vector(p.reduce(v)))
            }
            AbGroup::Units(u) => {
                let e = UnitElem { torsion_exps: c.torsion.clone(), free_exps: c.free.clone() };
                Ok(AbElem::Unit(u.recompose(&u.normalize(e))?))
            }
        }
    }

    /// Torsion orders plus free rank, the coordinate shape used by [`GroupMap`].
    /// For `Q^×` only the torsion part is representable.
    pub fn shape(&self) -> CyclicProduct {
        CyclicProduct { orders: self.torsion_orders(), free_rank: self.free_rank().unwrap_or(0) }
    }

    pub fn coordinate_vector(&self, x: &AbElem) -> Result<Vec<BigInt>> {
        let c = self.coords(x)?;
        let Some(r) = self.free_rank() else {
            if c.free.is_empty() {
                return Ok(c.torsion);
            }
            return Err(Error::UnsupportedCodomain(format!(
                "{self} has no finite coordinate vector"
            )));
        };
        let mut v = c.torsion;
        let mut free = vec![BigInt::zero(); r];
        for (k, e) in c.free {
            free[k.to_usize().expect("basis index")] = e;
        }
        v.extend(free);
        Ok(v)
    }

    pub fn from_vector(&self, v: &[BigInt]) -> Result<AbElem> {
        let k = self.torsion_orders().len();
        let free = v[k..]
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| (BigInt::from(i), e.clone()))
            .collect();
        self.from_coords(&Coords { torsion: v[..k].to_vec(), free })
    }

    /// All elements of a finite group, in coordinate order.
    pub fn elements(&self) -> Option<Vec<AbElem>> {
        match self {
            AbGroup::Fg(p) => Some(p.elements()?.into_iter().map(AbElem::Vector).collect()),
            AbGroup::Units(u) => Some(u.elements()?.into_iter().map(AbElem::Unit).collect()),
        }
    }

    /// Some `y` with `y^m = x`, if one exists (least torsion exponents).
    pub fn nth_root(&self, x: &AbElem, m: &BigInt) -> Result<Option<AbElem>> {
        let c = self.coords(x)?;
        let mut root = Coords { torsion: Vec::new(), free: BTreeMap::new() };
        for (e, n) in c.torsion.iter().zip(self.torsion_orders()) {
            match solve_linear_congruence(m, e, &n) {
                Some(y) => root.torsion.push(y),
                None => return Ok(None),
            }
        }
        for (k, e) in c.free {
            if !e.is_multiple_of(m) {
                return Ok(None);
            }
            root.free.insert(k, e / m);
        }
        Ok(Some(self.from_coords(&root)?))
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> AbElem {
        match self {
            AbGroup::Fg(p) => {
                let mut v = Vec::with_capacity(p.dims());
                for m in &p.orders {
                    let r: u64 = rng.gen();
                    v.push(BigInt::from(r).mod_floor(m));
                }
                for _ in 0..p.free_rank {
                    v.push(BigInt::from(rng.gen_range(-bound..=bound)));
                }
                AbElem::Vector(v)
            }
            AbGroup::Units(u) => AbElem::Unit(u.random_unit(rng, bound)),
        }
    }

    pub fn format_elem(&self, x: &AbElem) -> String {
        match (self, x) {
            (_, AbElem::Vector(v)) if v.len() == 1 => v[0].to_string(),
            (_, AbElem::Vector(v)) => {
                format!("({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
            }
            (AbGroup::Units(u), AbElem::Unit(r)) => u.ring.format_elem(r),
            (AbGroup::Fg(_), AbElem::Unit(r)) => format!("{r:?}"),
        }
    }

    pub fn elem_to_json(&self, x: &AbElem) -> Value {
        match (self, x) {
            (_, AbElem::Vector(v)) => Value::Array(v.iter().map(|e| Value::String(e.to_string())).collect()),
            (AbGroup::Units(u), AbElem::Unit(r)) => u.ring.elem_to_json(r),
            (AbGroup::Fg(_), AbElem::Unit(_)) => Value::Null,
        }
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<AbElem> {
        let x = match self {
            AbGroup::Fg(p) => {
                let num = |v: &Value| -> Result<BigInt> {
                    match v {
                        Value::String(s) => s.trim().parse().map_err(|_| parse_err(0, format!("bad integer `{s}`"))),
                        Value::Number(n) => n.to_string().parse().map_err(|_| parse_err(0, "bad integer")),
                        _ => Err(parse_err(0, format!("expected an integer, got {v}"))),
                    }
                };
                let raw = match v {
                    Value::Array(items) => items.iter().map(num).collect::<Result<Vec<_>>>()?,
                    other => vec![num(other)?],
                };
                if raw.len() != p.dims() {
                    return Err(parse_err(0, format!("expected {} coordinates for {p}", p.dims())));
                }
                AbElem::Vector(p.reduce(raw))
            }
            AbGroup::Units(u) => {
                let r = u.ring.elem_from_json(v)?;
                if !u.ring.is_unit(&r) {
                    return Err(Error::NotAUnit(u.ring.format_elem(&r)));
                }
                AbElem::Unit(r)
            }
        };
        Ok(x)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbGroup::Fg(p) => write!(f, "{p}"),
            AbGroup::Units(u) => write!(f, "units({})", u.ring),
        }
    }
}

/// A homomorphism between [`AbGroup`]s acting on coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub source: AbGroup,
    pub target: AbGroup,
    pub hom: AbHom,
}

impl GroupMap {
    pub fn new(source: AbGroup, target: AbGroup, matrix: Matrix) -> Result<Self> {
        if source.free_rank().is_none() {
            return Err(Error::UnsupportedCodomain(format!(
                "maps out of {source} need a finite free basis"
            )));
        }
        let hom = AbHom::new(source.shape(), target.shape(), matrix)?;
        Ok(GroupMap { source, target, hom })
    }

    pub fn identity(g: &AbGroup) -> Result<Self> {
        let n = g.shape().dims();
        GroupMap::new(g.clone(), g.clone(), crate::abelian::identity_matrix(n))
    }

    pub fn inversion(g: &AbGroup) -> Result<Self> {
        let h = AbHom::inversion(&g.shape());
        GroupMap::new(g.clone(), g.clone(), h.matrix)
    }

    pub fn apply(&self, x: &AbElem) -> Result<AbElem> {
        let v = self.source.coordinate_vector(x)?;
        self.target.from_vector(&self.hom.apply(&v))
    }

    pub fn is_bijective(&self) -> bool {
        self.target.free_rank().is_some() && self.hom.is_bijective()
    }

    pub fn inverse(&self) -> Result<GroupMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let inv = self.hom.inverse()?;
        Ok(GroupMap { source: self.target.clone(), target: self.source.clone(), hom: inv })
    }

    pub fn to_json(&self) -> Value {
        json!(self.hom.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }

    pub fn from_json(source: &AbGroup, target: &AbGroup, v: &Value) -> Result<Self> {
        let m = v.get("matrix").unwrap_or(v);
        let bad = || parse_err(0, format!("bad matrix JSON: {m}"));
        let rows = m.as_array().ok_or_else(bad)?;
        let mut matrix = Vec::new();
        for r in rows {
            let mut row = Vec::new();
            for x in r.as_array().ok_or_else(bad)? {
                row.push(match x {
                    Value::String(s) => s.parse::<BigInt>().map_err(|_| bad())?,
                    Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                });
            }
            matrix.push(row);
        }
        GroupMap::new(source.clone(), target.clone(), matrix)
    }
}

/// A normalized map `ψ : B → A`, used as a coboundary witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CochainMap {
    Trivial,
    /// Explicit values on a finite domain; `elements` is sorted.
    Table { elements: Vec<AbElem>, values: Vec<AbElem> },
    /// `ψ(b)` is the `A`-part of `s(b)`, where `s : B → E(f)` is the homomorphic
    /// section sending the k-th torsion generator to `(g_k, lifts[k])` and each
    /// free generator to `(e, 1)`.
    Section { cocycle: Box<SymCocycle2>, lifts: Vec<AbElem> },
    Hom(GroupMap),
    Product(Vec<CochainMap>),
    Inverse(Box<CochainMap>),
    /// `post ∘ inner ∘ pre`.
    Compose { pre: Option<GroupMap>, inner: Box<CochainMap>, post: Option<GroupMap> },
}

impl CochainMap {
    pub fn table(dom: &AbGroup, pairs: Vec<(AbElem, AbElem)>) -> Result<Self> {
        let all = dom
            .elements()
            .ok_or_else(|| Error::TooLarge(format!("{dom} is infinite")))?;
        let mut map: BTreeMap<AbElem, AbElem> = pairs.into_iter().collect();
        let mut elements = Vec::with_capacity(all.len());
        let mut values = Vec::with_capacity(all.len());
        let mut sorted = all;
        sorted.sort();
        for x in sorted {
            let v = map.remove(&x);
            elements.push(x);
            values.push(v);
        }
        if let Some((x, _)) = map.into_iter().next() {
            return Err(Error::InvalidParameter(format!("{} is not in {dom}", dom.format_elem(&x))));
        }
        let values = values.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::InvalidParameter("cochain table must list every element".into())
        })?;
        Ok(CochainMap::Table { elements, values })
    }

    pub fn eval(&self, dom: &AbGroup, cod: &AbGroup, x: &AbElem) -> Result<AbElem> {
        match self {
            CochainMap::Trivial => Ok(cod.identity()),
            CochainMap::Table { elements, values } => {
                let i = elements
                    .binary_search(x)
                    .map_err(|_| Error::InvalidParameter(format!("{} not in table", dom.format_elem(x))))?;
                Ok(values[i].clone())
            }
            CochainMap::Section { cocycle, lifts } => {
                let ext = ExtensionGroup::new(cocycle.as_ref().clone());
                let c = dom.coords(x)?;
                let mut acc = ext.identity();
                for (k, (t, lift)) in c.torsion.iter().zip(lifts).enumerate() {
                    let g = (dom.torsion_generator(k), lift.clone());
                    acc = ext.mul(&acc, &ext.pow(&g, t)?)?;
                }
                for (key, e) in &c.free {
                    let g = (dom.free_generator(key)?, cod.identity());
                    acc = ext.mul(&acc, &ext.pow(&g, e)?)?;
                }
                Ok(acc.1)
            }
            CochainMap::Hom(m) => m.apply(x),
            CochainMap::Product(parts) => {
                let mut acc = cod.identity();
                for p in parts {
                    acc = cod.op(&acc, &p.eval(dom, cod, x)?);
                }
                Ok(acc)
            }
            CochainMap::Inverse(inner) => Ok(cod.inv(&inner.eval(dom, cod, x)?)),
            CochainMap::Compose { pre, inner, post } => {
                let (mid_dom, y) = match pre {
                    Some(m) => (&m.target, m.apply(x)?),
                    None => (dom, x.clone()),
                };
                let mid_cod = post.as_ref().map_or(cod, |m| &m.source);
                let v = inner.eval(mid_dom, mid_cod, &y)?;
                match post {
                    Some(m) => m.apply(&v),
                    None => Ok(v),
                }
            }
        }
    }

    /// JSON form; finite domains are written out as a value table.
    pub fn to_json(&self, dom: &AbGroup, cod: &AbGroup) -> Value {
        if let Some(elems) = dom.elements() {
            if elems.len() <= 256 {
                let mut entries = Vec::new();
                let mut trivial = true;
                for x in &elems {
                    let Ok(v) = self.eval(dom, cod, x) else { break };
                    trivial &= cod.is_identity(&v);
                    entries.push(json!({"x": dom.elem_to_json(x), "value": cod.elem_to_json(&v)}));
                }
                if entries.len() == elems.len() {
                    if trivial {
                        return json!({"type": "trivial"});
                    }
                    return json!({"type": "table", "entries": entries});
                }
            }
        }
        match self {
            CochainMap::Trivial => json!({"type": "trivial"}),
            CochainMap::Table { elements, values } => json!({
                "type": "table",
                "entries": elements.iter().zip(values).map(|(x, v)| json!({
                    "x": dom.elem_to_json(x), "value": cod.elem_to_json(v)
                })).collect::<Vec<_>>(),
            }),
            CochainMap::Section { cocycle, lifts } => json!({
                "type": "section",
                "cocycle": cocycle.to_json(),
                "lifts": lifts.iter().map(|l| cod.elem_to_json(l)).collect::<Vec<_>>(),
            }),
            CochainMap::Hom(m) => json!({"type": "hom", "matrix": m.to_json()}),
            CochainMap::Product(parts) => json!({
                "type": "product",
                "factors": parts.iter().map(|p| p.to_json(dom, cod)).collect::<Vec<_>>(),
            }),
            CochainMap::Inverse(inner) => json!({"type": "inverse", "of": inner.to_json(dom, cod)}),
            CochainMap::Compose { pre, inner, post } => {
                let mid_dom = pre.as_ref().map_or(dom, |m| &m.target);
                let mid_cod = post.as_ref().map_or(cod, |m| &m.source);
                json!({
                    "type": "compose",
                    "pre": pre.as_ref().map(|m| json!({"target": m.target.to_string(), "matrix": m.to_json()})),
                    "inner": inner.to_json(mid_dom, mid_cod),
                    "post": post.as_ref().map(|m| json!({"source": m.source.to_string(), "matrix": m.to_json()})),
                })
            }
        }
    }

    pub fn from_json(dom: &AbGroup, cod: &AbGroup, v: &Value) -> Result<Self> {
        let ty = v.get("type").and_then(Value::as_str).unwrap_or("");
        let field = |name: &str| v.get(name).ok_or_else(|| parse_err(0, format!("missing `{name}` in cochain")));
        Ok(match ty {
            "trivial" => CochainMap::Trivial,
            "table" => {
                let mut pairs = Vec::new();
                for e in field("entries")?.as_array().ok_or_else(|| parse_err(0, "entries must be a list"))? {
                    let x = dom.elem_from_json(e.get("x").ok_or_else(|| parse_err(0, "entry without x"))?)?;
                    let y = cod.elem_from_json(e.get("value").ok_or_else(|| parse_err(0, "entry without value"))?)?;
                    pairs.push((x, y));
                }
                CochainMap::table(dom, pairs)?
            }
            "section" => {
                let cocycle = SymCocycle2::from_json(field("cocycle")?)?;
                let lifts = field("lifts")?
                    .as_array()
                    .ok_or_else(|| parse_err(0, "lifts must be a list"))?
                    .iter()
                    .map(|l| cod.elem_from_json(l))
                    .collect::<Result<Vec<_>>>()?;
                CochainMap::Section { cocycle: Box::new(cocycle), lifts }
            }
            "hom" => CochainMap::Hom(GroupMap::from_json(dom, cod, field("matrix")?)?),
            "product" => CochainMap::Product(
                field("factors")?
                    .as_array()
                    .ok_or_else(|| parse_err(0, "factors must be a list"))?
                    .iter()
                    .map(|f| CochainMap::from_json(dom, cod, f))
                    .collect::<Result<_>>()?,
            ),
            "inverse" => CochainMap::Inverse(Box::new(CochainMap::from_json(dom, cod, field("of")?)?)),
            "compose" => {
                let pre = match v.get("pre") {
                    Some(p) if !p.is_null() => {
                        let target = AbGroup::parse(p.get("target").and_then(Value::as_str).unwrap_or(""))?;
                        Some(GroupMap::from_json(dom, &target, p)?)
                    }
                    _ => None,
                };
                let post = match v.get("post") {
                    Some(p) if !p.is_null() => {
                        let source = AbGroup::parse(p.get("source").and_then(Value::as_str).unwrap_or(""))?;
                        Some(GroupMap::from_json(&source, cod, p)?)
                    }
                    _ => None,
                };
                let mid_dom = pre.as_ref().map_or(dom, |m| &m.target).clone();
                let mid_cod = post.as_ref().map_or(cod, |m| &m.source).clone();
                let inner = CochainMap::from_json(&mid_dom, &mid_cod, field("inner")?)?;
                CochainMap::Compose { pre, inner: Box::new(inner), post }
            }
            other => return Err(parse_err(0, format!("unknown cochain type `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Trivial,
    /// One target per torsion factor: `f(g^i, g^j) = c^⌊(i+j)/m⌋` on each factor,
    /// multiplied across factors.
    Carry { targets: Vec<AbElem> },
    /// Values on a finite domain, row-major over the sorted element list.
    Table { elements: Vec<AbElem>, values: Vec<AbElem> },
    Coboundary(CochainMap),
    Product(Vec<SymCocycle2>),
    Inverse(Box<SymCocycle2>),
    /// `f(x, y) = inner(map x, map y)`.
    Pullback { map: GroupMap, inner: Box<SymCocycle2> },
    /// `f(x, y) = map(inner(x, y))`.
    Pushforward { map: GroupMap, inner: Box<SymCocycle2> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymCocycle2 {
    pub domain: AbGroup,
    pub codomain: AbGroup,
    pub backend: Backend,
}

pub const TABLE_LIMIT: usize = 256;

impl SymCocycle2 {
    pub fn trivial(domain: AbGroup, codomain: AbGroup) -> Self {
        SymCocycle2 { domain, codomain, backend: Backend::Trivial }
    }

    pub fn carry(domain: AbGroup, codomain: AbGroup, targets: Vec<AbElem>) -> Result<Self> {
        let k = domain.torsion_orders().len();
        if targets.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{domain} has {k} torsion factors but {} carry targets were given",
                targets.len()
            )));
        }
        if let Some(t) = targets.iter().find(|t| !codomain.contains(t)) {
            return Err(Error::InvalidParameter(format!("carry target {t:?} is not in {codomain}")));
        }
        Ok(SymCocycle2 { domain, codomain, backend: Backend::Carry { targets } })
    }

    /// `f(x, y)` given for listed pairs; unlisted pairs are the identity. No
    /// symmetrisation is applied.
    pub fn table(domain: AbGroup, codomain: AbGroup, entries: Vec<(AbElem, AbElem, AbElem)>) -> Result<Self> {
        let mut elements = domain
            .elements()
            .filter(|e| e.len() <= TABLE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("tables need |B| <= {TABLE_LIMIT}")))?;
        elements.sort();
        let n = elements.len();
        let mut values = vec![codomain.identity(); n * n];
        for (x, y, v) in entries {
            let i = elements.binary_search(&x).map_err(|_| Error::InvalidParameter("entry outside B".into()))?;
            let j = elements.binary_search(&y).map_err(|_| Error::InvalidParameter("entry outside B".into()))?;
            if !codomain.contains(&v) {
                return Err(Error::InvalidParameter("table value outside A".into()));
            }
            values[i * n + j] = v;
        }
        Ok(SymCocycle2 { domain, codomain, backend: Backend::Table { elements, values } })
    }

    /// Materialise any cocycle on a finite domain as a table.
    pub fn to_table(&self) -> Result<Self> {
        let elements = self
            .domain
            .elements()
            .filter(|e| e.len() <= TABLE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("tables need |B| <= {TABLE_LIMIT}")))?;
        let mut entries = Vec::new();
        for x in &elements {
            for y in &elements {
                entries.push((x.clone(), y.clone(), self.eval(x, y)?));
            }
        }
        SymCocycle2::table(self.domain.clone(), self.codomain.clone(), entries)
    }

    pub fn coboundary_of(domain: AbGroup, codomain: AbGroup, psi: CochainMap) -> Self {
        SymCocycle2 { domain, codomain, backend: Backend::Coboundary(psi) }
    }

    pub fn pullback(map: GroupMap, inner: SymCocycle2) -> Result<Self> {
        if map.target != inner.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(SymCocycle2 {
            domain: map.source.clone(),
            codomain: inner.codomain.clone(),
            backend: Backend::Pullback { map, inner: Box::new(inner) },
        })
    }

    pub fn pushforward(map: GroupMap, inner: SymCocycle2) -> Result<Self> {
        if map.source != inner.codomain {
            return Err(Error::DomainMismatch);
        }
        Ok(SymCocycle2 {
            domain: inner.domain.clone(),
            codomain: map.target.clone(),
            backend: Backend::Pushforward { map, inner: Box::new(inner) },
        })
    }

    pub fn eval(&self, x: &AbElem, y: &AbElem) -> Result<AbElem> {
        let (b, a) = (&self.domain, &self.codomain);
        match &self.backend {
            Backend::Trivial => Ok(a.identity()),
            Backend::Carry { targets } => {
                let cx = b.coords(x)?;
                let cy = b.coords(y)?;
                let mut acc = a.identity();
                for (k, n) in b.torsion_orders().iter().enumerate() {
                    if &cx.torsion[k] + &cy.torsion[k] >= *n {
                        acc = a.op(&acc, &targets[k]);
                    }
                }
                Ok(acc)
            }
            Backend::Table { elements, values } => {
                let pos = |e: &AbElem| {
                    elements
                        .binary_search(e)
                        .map_err(|_| Error::InvalidParameter(format!("{} not in {b}", b.format_elem(e))))
                };
                Ok(values[pos(x)? * elements.len() + pos(y)?].clone())
            }
            Backend::Coboundary(psi) => {
                let xy = b.op(x, y);
                let v = a.op(
                    &psi.eval(b, a, &xy)?,
                    &a.inv(&a.op(&psi.eval(b, a, x)?, &psi.eval(b, a, y)?)),
                );
                Ok(v)
            }
            Backend::Product(parts) => {
                let mut acc = a.identity();
                for p in parts {
                    acc = a.op(&acc, &p.eval(x, y)?);
                }
                Ok(acc)
            }
            Backend::Inverse(inner) => Ok(a.inv(&inner.eval(x, y)?)),
            Backend::Pullback { map, inner } => inner.eval(&map.apply(x)?, &map.apply(y)?),
            Backend::Pushforward { map, inner } => map.apply(&inner.eval(x, y)?),
        }
    }

    /// Pointwise product; re-verified on a sample.
    pub fn product(&self, other: &SymCocycle2) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::DomainMismatch);
        }
        let f = SymCocycle2 {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            backend: Backend::Product(vec![self.clone(), other.clone()]),
        };
        f.ensure_verified()?;
        Ok(f)
    }

    pub fn inverse(&self) -> Result<Self> {
        let f = SymCocycle2 {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            backend: Backend::Inverse(Box::new(self.clone())),
        };
        f.ensure_verified()?;
        Ok(f)
    }

    fn ensure_verified(&self) -> Result<()> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let r = verify_cocycle(self, 64, &mut rng)?;
        match r.counterexample {
            None => Ok(()),
            Some(w) => Err(Error::NotACocycle(w.to_string())),
        }
    }

    /// The restriction to the torsion subgroup `T × T`, with `T` written as the
    /// product of the torsion factors of `B`.
    pub fn torsion_restriction(&self) -> Result<Self> {
        let orders = self.domain.torsion_orders();
        let t = AbGroup::Fg(CyclicProduct { orders: orders.clone(), free_rank: 0 });
        let dims = self.domain.shape().dims();
        let matrix = (0..dims)
            .map(|j| (0..orders.len()).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let incl = GroupMap::new(t, self.domain.clone(), matrix)?;
        SymCocycle2::pullback(incl, self.clone())
    }

    pub fn to_json(&self) -> Value {
        let (b, a) = (&self.domain, &self.codomain);
        let backend = match &self.backend {
            Backend::Trivial => json!({"type": "trivial"}),
            Backend::Carry { targets } => json!({
                "type": "carry",
                "targets": targets.iter().map(|t| a.elem_to_json(t)).collect::<Vec<_>>(),
            }),
            Backend::Table { elements, values } => {
                let n = elements.len();
                let mut entries = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let v = &values[i * n + j];
                        if !a.is_identity(v) {
                            entries.push(json!([b.elem_to_json(&elements[i]), b.elem_to_json(&elements[j]), a.elem_to_json(v)]));
                        }
                    }
                }
                json!({"type": "table", "entries": entries})
            }
            Backend::Coboundary(psi) => json!({"type": "coboundary", "psi": psi.to_json(b, a)}),
            Backend::Product(parts) => json!({
                "type": "product",
                "factors": parts.iter().map(SymCocycle2::to_json).collect::<Vec<_>>(),
            }),
            Backend::Inverse(inner) => json!({"type": "inverse", "of": inner.to_json()}),
            Backend::Pullback { map, inner } => json!({"type": "pullback", "map": map.to_json(), "inner": inner.to_json()}),
            Backend::Pushforward { map, inner } => {
                json!({"type": "pushforward", "map": map.to_json(), "inner": inner.to_json()})
            }
        };
        json!({"domain": b.to_string(), "codomain": a.to_string(), "backend": backend})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let text = |name: &str| {
            v.get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err(0, format!("cocycle needs a `{name}` string")))
        };
        let b = AbGroup::parse(text("domain")?)?;
        let a = AbGroup::parse(text("codomain")?)?;
        let backend = v.get("backend").ok_or_else(|| parse_err(0, "cocycle needs a `backend`"))?;
        let ty = backend.get("type").and_then(Value::as_str).unwrap_or("");
        let field = |name: &str| {
            backend.get(name).ok_or_else(|| parse_err(0, format!("{ty} backend needs `{name}`")))
        };
        let list = |name: &str| -> Result<Vec<Value>> {
            field(name)?
                .as_array()
                .cloned()
                .ok_or_else(|| parse_err(0, format!("`{name}` must be a list")))
        };
        match ty {
            "trivial" => Ok(SymCocycle2::trivial(b, a)),
            "carry" => {
                let targets = list("targets")?.iter().map(|t| a.elem_from_json(t)).collect::<Result<_>>()?;
                SymCocycle2::carry(b, a, targets)
            }
            "table" => {
                let mut entries = Vec::new();
                for e in list("entries")? {
                    let (x, y, val) = match &e {
                        Value::Array(t) if t.len() == 3 => (t[0].clone(), t[1].clone(), t[2].clone()),
                        Value::Object(o) => (
                            o.get("x").cloned().unwrap_or(Value::Null),
                            o.get("y").cloned().unwrap_or(Value::Null),
                            o.get("value").cloned().unwrap_or(Value::Null),
                        ),
                        _ => return Err(parse_err(0, "table entries are [x, y, value]")),
                    };
                    entries.push((b.elem_from_json(&x)?, b.elem_from_json(&y)?, a.elem_from_json(&val)?));
                }
                SymCocycle2::table(b, a, entries)
            }
            "coboundary" => {
                let psi = CochainMap::from_json(&b, &a, field("psi")?)?;
                Ok(SymCocycle2::coboundary_of(b, a, psi))
            }
            "product" => {
                let parts = list("factors")?.iter().map(SymCocycle2::from_json).collect::<Result<Vec<_>>>()?;
                if parts.iter().any(|p| p.domain != b || p.codomain != a) {
                    return Err(Error::DomainMismatch);
                }
                Ok(SymCocycle2 { domain: b, codomain: a, backend: Backend::Product(parts) })
            }
            "inverse" => {
                let inner = SymCocycle2::from_json(field("of")?)?;
                if inner.domain != b || inner.codomain != a {
                    return Err(Error::DomainMismatch);
                }
                Ok(SymCocycle2 { domain: b, codomain: a, backend: Backend::Inverse(Box::new(inner)) })
            }
            "pullback" => {
                let inner = SymCocycle2::from_json(field("inner")?)?;
                let map = GroupMap::from_json(&b, &inner.domain, field("map")?)?;
                let f = SymCocycle2::pullback(map, inner)?;
                if f.codomain != a {
                    return Err(Error::DomainMismatch);
                }
                Ok(f)
            }
            "pushforward" => {
                let inner = SymCocycle2::from_json(field("inner")?)?;
                let map = GroupMap::from_json(&inner.codomain, &a, field("map")?)?;
                let f = SymCocycle2::pushforward(map, inner)?;
                if f.domain != b {
                    return Err(Error::DomainMismatch);
                }
                Ok(f)
            }
            other => Err(parse_err(0, format!("unknown backend type `{other}`"))),
        }
    }
}

/// A failed identity with its witnesses, already formatted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleWitness {
    pub identity: String,
    pub elements: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for CocycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}): {} != {}", self.identity, self.elements.join(", "), self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub normalized: bool,
    pub symmetric: bool,
    pub cocycle_identity: bool,
    pub exhaustive: bool,
    pub triples_checked: u64,
    pub counterexample: Option<CocycleWitness>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.normalized && self.symmetric && self.cocycle_identity
    }
}

pub const EXHAUSTIVE_LIMIT: usize = 64;

/// Checks `f(1, x) = f(x, 1) = 1`, `f(x, y) = f(y, x)` and
/// `f(xy, z)f(x, y) = f(x, yz)f(y, z)`; exhaustively when `|B| ≤ 64`.
pub fn verify_cocycle<R: Rng + ?Sized>(f: &SymCocycle2, trials: u64, rng: &mut R) -> Result<CocycleReport> {
    let (b, a) = (&f.domain, &f.codomain);
    let mut report = CocycleReport {
        normalized: true,
        symmetric: true,
        cocycle_identity: true,
        exhaustive: false,
        triples_checked: 0,
        counterexample: None,
    };
    let fmt_b = |x: &AbElem| b.format_elem(x);
    let fmt_a = |x: &AbElem| a.format_elem(x);
    let record = |report: &mut CocycleReport, which: &str, elems: &[&AbElem], lhs: &AbElem, rhs: &AbElem| {
        match which {
            "normalized" => report.normalized = false,
            "symmetric" => report.symmetric = false,
            _ => report.cocycle_identity = false,
        }
        if report.counterexample.is_none() {
            report.counterexample = Some(CocycleWitness {
                identity: which.to_string(),
                elements: elems.iter().map(|e| fmt_b(e)).collect(),
                lhs: fmt_a(lhs),
                rhs: fmt_a(rhs),
            });
        }
    };
    let check = |report: &mut CocycleReport, x: &AbElem, y: &AbElem, z: &AbElem| -> Result<()> {
        let one = b.identity();
        let ida = a.identity();
        let f1x = f.eval(&one, x)?;
        if f1x != ida {
            record(report, "normalized", &[&one, x], &f1x, &ida);
        }
        let fx1 = f.eval(x, &one)?;
        if fx1 != ida {
            record(report, "normalized", &[x, &one], &fx1, &ida);
        }
        let fxy = f.eval(x, y)?;
        let fyx = f.eval(y, x)?;
        if fxy != fyx {
            record(report, "symmetric", &[x, y], &fxy, &fyx);
        }
        let lhs = a.op(&f.eval(&b.op(x, y), z)?, &fxy);
        let rhs = a.op(&f.eval(x, &b.op(y, z))?, &f.eval(y, z)?);
        if lhs != rhs {
            record(report, "cocycle", &[x, y, z], &lhs, &rhs);
        }
        report.triples_checked += 1;
        Ok(())
    };
    match b.elements().filter(|e| e.len() <= EXHAUSTIVE_LIMIT) {
        Some(elems) => {
            report.exhaustive = true;
            for x in &elems {
                for y in &elems {
                    for z in &elems {
                        check(&mut report, x, y, z)?;
                    }
                }
            }
        }
        None => {
            for _ in 0..trials.max(1) {
                let x = b.random_elem(rng, 6);
                let y = b.random_elem(rng, 6);
                let z = b.random_elem(rng, 6);
                check(&mut report, &x, &y, &z)?;
            }
        }
    }
    Ok(report)
}

/// The abelian extension `E(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionGroup {
    pub cocycle: SymCocycle2,
}

pub type ExtElem = (AbElem, AbElem);

impl ExtensionGroup {
    pub fn new(cocycle: SymCocycle2) -> Self {
        ExtensionGroup { cocycle }
    }

    pub fn identity(&self) -> ExtElem {
        (self.cocycle.domain.identity(), self.cocycle.codomain.identity())
    }

    pub fn mul(&self, x: &ExtElem, y: &ExtElem) -> Result<ExtElem> {
        let (b, a) = (&self.cocycle.domain, &self.cocycle.codomain);
        let f = self.cocycle.eval(&x.0, &y.0)?;
        Ok((b.op(&x.0, &y.0), a.op(&a.op(&x.1, &y.1), &f)))
    }

    /// `(b, a)⁻¹ = (b⁻¹, a⁻¹·f(b, b⁻¹)⁻¹)`.
    pub fn inv(&self, x: &ExtElem) -> Result<ExtElem> {
        let (b, a) = (&self.cocycle.domain, &self.cocycle.codomain);
        let bi = b.inv(&x.0);
        let f = self.cocycle.eval(&x.0, &bi)?;
        Ok((bi, a.inv(&a.op(&x.1, &f))))
    }

    pub fn pow(&self, x: &ExtElem, k: &BigInt) -> Result<ExtElem> {
        let mut base = if k.is_negative() { self.inv(x)? } else { x.clone() };
        let mut k = k.abs();
        let mut acc = self.identity();
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if !k.is_zero() {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Order of an element by repeated multiplication, up to `limit`.
    pub fn element_order(&self, x: &ExtElem, limit: u64) -> Result<Option<u64>> {
        let id = self.identity();
        let mut acc = x.clone();
        for k in 1..=limit {
            if acc == id {
                return Ok(Some(k));
            }
            acc = self.mul(&acc, x)?;
        }
        Ok(None)
    }

    pub fn elements(&self) -> Option<Vec<ExtElem>> {
        let bs = self.cocycle.domain.elements()?;
        let as_ = self.cocycle.codomain.elements()?;
        Some(bs.iter().flat_map(|b| as_.iter().map(move |a| (b.clone(), a.clone()))).collect())
    }

    pub fn format_elem(&self, x: &ExtElem) -> String {
        format!(
            "({}, {})",
            self.cocycle.domain.format_elem(&x.0),
            self.cocycle.codomain.format_elem(&x.1)
        )
    }
}

pub fn build_extension(f: &SymCocycle2) -> ExtensionGroup {
    ExtensionGroup::new(f.clone())
}

/// A splitting map `ψ` with `f = δψ`, or `None`.
///
/// For each torsion generator `g` of order `n`, `(g, 1)ⁿ = (1, c)` in `E(f)`; the
/// extension splits iff every `c⁻¹` is an `n`-th power `uⁿ`, and then
/// `g ↦ (g, u)` (with free generators lifted trivially) is a homomorphic section.
pub fn is_coboundary(f: &SymCocycle2) -> Result<Option<CochainMap>> {
    match &f.backend {
        Backend::Trivial => return Ok(Some(CochainMap::Trivial)),
        Backend::Coboundary(psi) => return Ok(Some(psi.clone())),
        Backend::Carry { targets } if targets.iter().all(|t| f.codomain.is_identity(t)) => {
            return Ok(Some(CochainMap::Trivial))
        }
        _ => {}
    }
    let (b, a) = (&f.domain, &f.codomain);
    if b.elements().is_some_and(|e| e.len() <= TABLE_LIMIT) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let report = verify_cocycle(f, 1, &mut rng)?;
        if let Some(w) = report.counterexample {
            return Err(Error::NotACocycle(w.to_string()));
        }
    }
    let ext = ExtensionGroup::new(f.clone());
    let mut lifts = Vec::new();
    for (k, n) in b.torsion_orders().iter().enumerate() {
        let g = (b.torsion_generator(k), a.identity());
        let (one, c) = ext.pow(&g, n)?;
        debug_assert!(b.is_identity(&one));
        match a.nth_root(&a.inv(&c), n)? {
            Some(u) => lifts.push(u),
            None => return Ok(None),
        }
    }
    Ok(Some(CochainMap::Section { cocycle: Box::new(f.clone()), lifts }))
}

/// Coboundarious on torsion: the restriction of `f` to the torsion subgroup splits.
pub fn is_cot(f: &SymCocycle2) -> Result<bool> {
    Ok(is_coboundary(&f.torsion_restriction()?)?.is_some())
}

/// `g′ = ψ ∘ g ∘ (η⁻¹ × η⁻¹)`, the cocycle on `B′ × B′ → A′` making
/// `(η, ψ) : E(g) → E(g′)`, `(b, a) ↦ (η b, ψ a)` an isomorphism.
/// Coboundaries stay coboundaries with witness `ψ ∘ φ ∘ η⁻¹`.
pub fn transport_cocycle(g: &SymCocycle2, psi: &GroupMap, eta: &GroupMap) -> Result<SymCocycle2> {
    if psi.source != g.codomain || eta.source != g.domain {
        return Err(Error::DomainMismatch);
    }
    if !psi.is_bijective() || !eta.is_bijective() {
        return Err(Error::NotBijective);
    }
    let eta_inv = eta.inverse()?;
    if let Backend::Coboundary(phi) = &g.backend {
        let witness = CochainMap::Compose {
            pre: Some(eta_inv),
            inner: Box::new(phi.clone()),
            post: Some(psi.clone()),
        };
        return Ok(SymCocycle2::coboundary_of(eta.target.clone(), psi.target.clone(), witness));
    }
    SymCocycle2::pushforward(psi.clone(), SymCocycle2::pullback(eta_inv, g.clone())?)
}

/// Checks `f = δψ` on every pair of a finite domain, or on `trials` random pairs.
pub fn check_witness<R: Rng + ?Sized>(
    f: &SymCocycle2,
    psi: &CochainMap,
    trials: u64,
    rng: &mut R,
) -> Result<bool> {
    let (b, a) = (&f.domain, &f.codomain);
    if !a.is_identity(&psi.eval(b, a, &b.identity())?) {
        return Ok(false);
    }
    let delta = SymCocycle2::coboundary_of(b.clone(), a.clone(), psi.clone());
    let pairs: Vec<(AbElem, AbElem)> = match b.elements().filter(|e| e.len() <= TABLE_LIMIT) {
        Some(e) => e.iter().flat_map(|x| e.iter().map(move |y| (x.clone(), y.clone()))).collect(),
        None => (0..trials).map(|_| (b.random_elem(rng, 8), b.random_elem(rng, 8))).collect(),
    };
    for (x, y) in pairs {
        if f.eval(&x, &y)? != delta.eval(&x, &y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ext` of two finitely generated groups given as [`AbGroup`]s.
pub fn ext_of(b: &AbGroup, a: &AbGroup) -> Result<crate::abelian::FgAbelian> {
    let fg = |g: &AbGroup| -> Result<crate::abelian::FgAbelian> {
        match g {
            AbGroup::Units(u) if u.basis_mode == BasisMode::LazyPrimeBasis => Err(Error::UnsupportedCodomain(
                format!("{g} is not finitely generated"),
            )),
            _ => Ok(g.shape().canonical()),
        }
    };
    Ok(crate::abelian::ext_group(&fg(b)?, &fg(a)?))
}
