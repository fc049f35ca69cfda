//! Triangular groups `T_n(R)` and their abelian deformations `T_n(R, f̄)`.
//!
//! A deformed element is stored in normal form `(x̄, z, U)`: the diagonal class
//! `x̄ = (x₁, …, x_{n−1})` (with `x_n = 1` implicit), a central coordinate `z`, and
//! the strict upper part `U`. In the untwisted case this is the matrix
//! `diag(x₁z, …, x_{n−1}z, z)·(I + U)`.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cocycle::{is_coboundary, AbElem, AbGroup, Backend, CochainMap, SymCocycle2};
use crate::error::{parse_err, Error, Result};
use crate::ring::{RingDescriptor, RingElem};
use crate::units::{unit_group, UnitGroupStruct};

/// Position of `(i, j)`, `i < j`, 0-based, in the row-major strict upper list.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn upper_len(n: usize) -> usize {
    n * (n - 1) / 2
}

/// An invertible upper triangular matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriMatrix {
    pub n: usize,
    pub rows: Vec<Vec<RingElem>>,
}

impl TriMatrix {
    pub fn identity(r: &RingDescriptor, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect())
            .collect();
        TriMatrix { n, rows }
    }

    pub fn from_rows(r: &RingDescriptor, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 || rows.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square with n >= 2".into()));
        }
        for i in 0..n {
            if !r.is_unit(&rows[i][i]) {
                return Err(Error::NotAUnit(r.format_elem(&rows[i][i])));
            }
            if (0..i).any(|j| !r.is_zero(&rows[i][j])) {
                return Err(Error::InvalidParameter("matrix is not upper triangular".into()));
            }
        }
        Ok(TriMatrix { n, rows })
    }

    pub fn mul(&self, r: &RingDescriptor, other: &TriMatrix) -> TriMatrix {
        let n = self.n;
        let mut rows = vec![vec![r.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = r.zero();
                for k in i..=j {
                    acc = r.add(&acc, &r.mul(&self.rows[i][k], &other.rows[k][j]));
                }
                rows[i][j] = acc;
            }
        }
        TriMatrix { n, rows }
    }

    /// Back substitution against the identity.
    pub fn inverse(&self, r: &RingDescriptor) -> TriMatrix {
        let n = self.n;
        let mut inv = vec![vec![r.zero(); n]; n];
        for i in (0..n).rev() {
            let dii = r.inv(&self.rows[i][i]).expect("diagonal entries are units");
            inv[i][i] = dii.clone();
            for j in i + 1..n {
                let mut acc = r.zero();
                for k in i + 1..=j {
                    acc = r.add(&acc, &r.mul(&self.rows[i][k], &inv[k][j]));
                }
                inv[i][j] = r.neg(&r.mul(&dii, &acc));
            }
        }
        TriMatrix { n, rows: inv }
    }

    pub fn format(&self, r: &RingDescriptor) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|x| r.format_elem(x)).collect::<Vec<_>>().join(", "))
            .collect();
        format!("[[{}]]", rows.join("], ["))
    }

    pub fn to_json(&self, r: &RingDescriptor) -> Value {
        json!(self
            .rows
            .iter()
            .map(|row| row.iter().map(|x| r.elem_to_json(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// Normal form `(x̄, z, U)` of an element of `T_n(R, f̄)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeformedElem {
    pub xbar: Vec<RingElem>,
    pub z: RingElem,
    /// Strict upper entries, row-major; see [`upper_index`].
    pub upper: Vec<RingElem>,
}

/// The ring, the size `n` and the cocycles `f₁, …, f_{n−1}` on `R^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationSpec {
    pub ring: RingDescriptor,
    pub n: usize,
    pub cocycles: Vec<SymCocycle2>,
    pub units: UnitGroupStruct,
}

impl DeformationSpec {
    /// Each `f_i` must be a cocycle on `R^×` (verified). `n = 2` is accepted only
    /// for the untwisted group.
    pub fn new(ring: RingDescriptor, n: usize, cocycles: Vec<SymCocycle2>) -> Result<Self> {
        let spec = Self::new_unchecked(ring, n, cocycles)?;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for f in &spec.cocycles {
            let r = crate::cocycle::verify_cocycle(f, 100, &mut rng)?;
            if let Some(w) = r.counterexample {
                return Err(Error::NotACocycle(w.to_string()));
            }
        }
        if n == 2 && !spec.is_untwisted() {
            return Err(Error::InvalidParameter("twisted deformations need n >= 3".into()));
        }
        Ok(spec)
    }

    /// Like [`new`](Self::new) without verifying the cocycle identities, for
    /// mutation tests.
    pub fn new_unchecked(ring: RingDescriptor, n: usize, cocycles: Vec<SymCocycle2>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n = {n} < 2")));
        }
        if cocycles.len() != n - 1 {
            return Err(Error::InvalidParameter(format!("expected {} cocycles, got {}", n - 1, cocycles.len())));
        }
        let units = unit_group(&ring);
        let u = AbGroup::Units(units.clone());
        if cocycles.iter().any(|f| f.domain != u || f.codomain != u) {
            return Err(Error::DomainMismatch);
        }
        Ok(DeformationSpec { ring, n, cocycles, units })
    }

    pub fn untwisted(ring: RingDescriptor, n: usize) -> Result<Self> {
        let u = AbGroup::units_of(&ring);
        let cocycles = vec![SymCocycle2::trivial(u.clone(), u); n - 1];
        Self::new(ring, n, cocycles)
    }

    pub fn unit_group(&self) -> AbGroup {
        AbGroup::Units(self.units.clone())
    }

    pub fn is_untwisted(&self) -> bool {
        self.cocycles.iter().all(|f| matches!(f.backend, Backend::Trivial))
            || self.cocycles.iter().all(|f| match f.to_table() {
                Ok(t) => match &t.backend {
                    Backend::Table { values, .. } => values.iter().all(|v| f.codomain.is_identity(v)),
                    _ => false,
                },
                Err(_) => false,
            })
    }

    /// `f_i(α, β)` for 0-based `i`.
    pub fn f(&self, i: usize, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        let v = self.cocycles[i].eval(&AbElem::Unit(a.clone()), &AbElem::Unit(b.clone()))?;
        match v {
            AbElem::Unit(u) => Ok(u),
            AbElem::Vector(_) => Err(Error::DomainMismatch),
        }
    }

    /// `(f₁⋯f_{n−1})(α, β)`.
    pub fn f_total(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        let r = &self.ring;
        let mut acc = r.one();
        for i in 0..self.n - 1 {
            acc = r.mul(&acc, &self.f(i, a, b)?);
        }
        Ok(acc)
    }

    fn check_unit(&self, a: &RingElem) -> Result<()> {
        if self.ring.contains(a) && self.ring.is_unit(a) {
            Ok(())
        } else {
            Err(Error::NotAUnit(self.ring.format_elem(a)))
        }
    }

    pub fn contains(&self, g: &DeformedElem) -> bool {
        let r = &self.ring;
        g.xbar.len() == self.n - 1
            && g.upper.len() == upper_len(self.n)
            && g.xbar.iter().chain([&g.z]).all(|x| r.contains(x) && r.is_unit(x))
            && g.upper.iter().all(|x| r.contains(x))
    }

    pub fn identity(&self) -> DeformedElem {
        let r = &self.ring;
        DeformedElem { xbar: vec![r.one(); self.n - 1], z: r.one(), upper: vec![r.zero(); upper_len(self.n)] }
    }

    /// `t_ij(β)` with 1-based `i < j`.
    pub fn transvection(&self, i: usize, j: usize, beta: &RingElem) -> Result<DeformedElem> {
        if !(1 <= i && i < j && j <= self.n) {
            return Err(Error::IndexError(format!("t_{{{i},{j}}} needs 1 <= i < j <= {}", self.n)));
        }
        if !self.ring.contains(beta) {
            return Err(Error::InvalidParameter(format!("{beta:?} is not in {}", self.ring)));
        }
        let mut g = self.identity();
        g.upper[upper_index(self.n, i - 1, j - 1)] = beta.clone();
        Ok(g)
    }

    /// `d_i(α)`, 1-based. For `i = n` the central coordinate is chosen so that
    /// `d₁(α)⋯d_n(α) = diag(α)`.
    pub fn diag_gen(&self, i: usize, alpha: &RingElem) -> Result<DeformedElem> {
        if !(1 <= i && i <= self.n) {
            return Err(Error::IndexError(format!("d_{i} needs 1 <= i <= {}", self.n)));
        }
        self.check_unit(alpha)?;
        let r = &self.ring;
        let mut g = self.identity();
        if i < self.n {
            g.xbar[i - 1] = alpha.clone();
            return Ok(g);
        }
        let ainv = r.inv(alpha).expect("unit");
        let mut z = alpha.clone();
        for k in 0..self.n - 1 {
            let c = self.f(k, alpha, &ainv)?;
            z = r.mul(&z, &r.inv(&c).expect("cocycle values are units"));
            g.xbar[k] = ainv.clone();
        }
        g.z = z;
        Ok(g)
    }

    /// The scalar `diag(α)`: `(1̄, α, 0)`.
    pub fn scalar(&self, alpha: &RingElem) -> Result<DeformedElem> {
        self.check_unit(alpha)?;
        let mut g = self.identity();
        g.z = alpha.clone();
        Ok(g)
    }

    pub fn is_diagonal(&self, g: &DeformedElem) -> bool {
        g.upper.iter().all(|x| self.ring.is_zero(x))
    }

    /// `(I + A)(I + B) − I` for strict upper parts.
    fn uni_mul(&self, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
        let r = &self.ring;
        let n = self.n;
        let mut out = Vec::with_capacity(a.len());
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = r.add(&a[upper_index(n, i, j)], &b[upper_index(n, i, j)]);
                for k in i + 1..j {
                    acc = r.add(&acc, &r.mul(&a[upper_index(n, i, k)], &b[upper_index(n, k, j)]));
                }
                out.push(acc);
            }
        }
        out
    }

    /// `U ↦ U'` with `I + U' = (I + U)⁻¹`.
    fn uni_inv(&self, a: &[RingElem]) -> Vec<RingElem> {
        let r = &self.ring;
        let n = self.n;
        let mut inv = vec![r.zero(); a.len()];
        for i in (0..n).rev() {
            for j in i + 1..n {
                let mut acc = a[upper_index(n, i, j)].clone();
                for k in i + 1..j {
                    acc = r.add(&acc, &r.mul(&a[upper_index(n, i, k)], &inv[upper_index(n, k, j)]));
                }
                inv[upper_index(n, i, j)] = r.neg(&acc);
            }
        }
        inv
    }

    pub fn multiply(&self, g: &DeformedElem, h: &DeformedElem) -> Result<DeformedElem> {
        if !self.contains(g) || !self.contains(h) {
            return Err(Error::SpecMismatch);
        }
        let r = &self.ring;
        let n = self.n;
        let mut xbar = Vec::with_capacity(n - 1);
        let mut z = r.mul(&g.z, &h.z);
        for i in 0..n - 1 {
            xbar.push(r.mul(&g.xbar[i], &h.xbar[i]));
            z = r.mul(&z, &self.f(i, &g.xbar[i], &h.xbar[i])?);
        }
        // conjugate U₁ by the diagonal class of h: entry (i, j) scales by x_i⁻¹ x_j
        let x = |k: usize| if k < n - 1 { h.xbar[k].clone() } else { r.one() };
        let xinv: Vec<RingElem> = (0..n).map(|k| r.inv(&x(k)).expect("unit")).collect();
        let mut conj = Vec::with_capacity(g.upper.len());
        for i in 0..n {
            for j in i + 1..n {
                let e = &g.upper[upper_index(n, i, j)];
                conj.push(r.mul(&r.mul(&xinv[i], &x(j)), e));
            }
        }
        let upper = self.uni_mul(&conj, &h.upper);
        Ok(DeformedElem { xbar, z, upper })
    }

    pub fn inverse(&self, g: &DeformedElem) -> Result<DeformedElem> {
        if !self.contains(g) {
            return Err(Error::SpecMismatch);
        }
        let r = &self.ring;
        let mut unip = self.identity();
        unip.upper = self.uni_inv(&g.upper);
        let mut diag = self.identity();
        let mut z = r.inv(&g.z).expect("unit");
        for i in 0..self.n - 1 {
            let xi = &g.xbar[i];
            let xinv = r.inv(xi).expect("unit");
            z = r.mul(&z, &r.inv(&self.f(i, xi, &xinv)?).expect("unit"));
            diag.xbar[i] = xinv;
        }
        diag.z = z;
        self.multiply(&unip, &diag)
    }

    pub fn mul_all(&self, items: &[DeformedElem]) -> Result<DeformedElem> {
        let mut acc = self.identity();
        for g in items {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    /// `[x, y] = x⁻¹y⁻¹xy`.
    pub fn commutator(&self, x: &DeformedElem, y: &DeformedElem) -> Result<DeformedElem> {
        self.mul_all(&[self.inverse(x)?, self.inverse(y)?, x.clone(), y.clone()])
    }

    /// `x^y = y⁻¹xy`.
    pub fn conjugate(&self, x: &DeformedElem, y: &DeformedElem) -> Result<DeformedElem> {
        self.mul_all(&[self.inverse(y)?, x.clone(), y.clone()])
    }

    pub fn pow(&self, g: &DeformedElem, k: u64) -> Result<DeformedElem> {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    /// `diag(x₁z, …, x_{n−1}z, z)·(I + U)`; a group isomorphism only when untwisted.
    pub fn to_matrix(&self, g: &DeformedElem) -> TriMatrix {
        self.to_matrix_with_center(g, &g.z)
    }

    fn to_matrix_with_center(&self, g: &DeformedElem, z: &RingElem) -> TriMatrix {
        let r = &self.ring;
        let n = self.n;
        let d: Vec<RingElem> =
            (0..n).map(|i| if i < n - 1 { r.mul(&g.xbar[i], z) } else { z.clone() }).collect();
        let mut m = TriMatrix::identity(r, n);
        for i in 0..n {
            m.rows[i][i] = d[i].clone();
            for j in i + 1..n {
                m.rows[i][j] = r.mul(&d[i], &g.upper[upper_index(n, i, j)]);
            }
        }
        m
    }

    pub fn from_matrix(&self, m: &TriMatrix) -> Result<DeformedElem> {
        self.from_matrix_with_center(m).map(|(g, _)| g)
    }

    fn from_matrix_with_center(&self, m: &TriMatrix) -> Result<(DeformedElem, RingElem)> {
        let r = &self.ring;
        let n = self.n;
        if m.n != n {
            return Err(Error::SpecMismatch);
        }
        let z = m.rows[n - 1][n - 1].clone();
        let zinv = r.inv(&z).ok_or_else(|| Error::NotAUnit(r.format_elem(&z)))?;
        let mut g = self.identity();
        for i in 0..n - 1 {
            g.xbar[i] = r.mul(&m.rows[i][i], &zinv);
        }
        g.z = z.clone();
        for i in 0..n {
            let dinv = r.inv(&m.rows[i][i]).ok_or_else(|| Error::NotAUnit(r.format_elem(&m.rows[i][i])))?;
            for j in i + 1..n {
                g.upper[upper_index(n, i, j)] = r.mul(&dinv, &m.rows[i][j]);
            }
        }
        Ok((g, z))
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> DeformedElem {
        let mut g = self.identity();
        for x in g.xbar.iter_mut() {
            *x = self.units.random_unit(rng, 2);
        }
        g.z = self.units.random_unit(rng, 2);
        for e in g.upper.iter_mut() {
            *e = self.ring.random_elem(rng, bound);
        }
        g
    }

    /// Generators of the whole group when `R` is additively generated by `1`
    /// (`Z`, `Z/m`): `d_i` and scalars of each torsion generator, and `t_ij(1)`.
    pub fn standard_generators(&self) -> Result<Vec<DeformedElem>> {
        let mut gens = Vec::new();
        for f in &self.units.torsion {
            for i in 1..self.n {
                gens.push(self.diag_gen(i, &f.generator)?);
            }
            gens.push(self.scalar(&f.generator)?);
        }
        for b in &self.units.free_basis {
            for i in 1..self.n {
                gens.push(self.diag_gen(i, b)?);
            }
            gens.push(self.scalar(b)?);
        }
        for i in 1..self.n {
            for j in i + 1..=self.n {
                gens.push(self.transvection(i, j, &self.ring.one())?);
            }
        }
        Ok(gens)
    }

    pub fn format_elem(&self, g: &DeformedElem) -> String {
        let r = &self.ring;
        let xbar: Vec<String> = g.xbar.iter().map(|x| r.format_elem(x)).collect();
        let mut ups = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let e = &g.upper[upper_index(self.n, i, j)];
                if !r.is_zero(e) {
                    ups.push(format!("{},{}: {}", i + 1, j + 1, r.format_elem(e)));
                }
            }
        }
        format!("(x=[{}], z={}, U={{{}}})", xbar.join(", "), r.format_elem(&g.z), ups.join("; "))
    }

    pub fn elem_to_json(&self, g: &DeformedElem) -> Value {
        let r = &self.ring;
        let mut upper = Map::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let e = &g.upper[upper_index(self.n, i, j)];
                if !r.is_zero(e) {
                    upper.insert(format!("{},{}", i + 1, j + 1), r.elem_to_json(e));
                }
            }
        }
        json!({
            "xbar": g.xbar.iter().map(|x| r.elem_to_json(x)).collect::<Vec<_>>(),
            "z": r.elem_to_json(&g.z),
            "upper": upper,
        })
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<DeformedElem> {
        let r = &self.ring;
        let mut g = self.identity();
        if let Some(xs) = v.get("xbar") {
            let xs = xs.as_array().ok_or_else(|| parse_err(0, "xbar must be a list"))?;
            if xs.len() != self.n - 1 {
                return Err(parse_err(0, format!("xbar needs {} entries", self.n - 1)));
            }
            for (k, x) in xs.iter().enumerate() {
                g.xbar[k] = r.elem_from_json(x)?;
            }
        }
        if let Some(z) = v.get("z") {
            g.z = r.elem_from_json(z)?;
        }
        if let Some(up) = v.get("upper") {
            let up = up.as_object().ok_or_else(|| parse_err(0, "upper must be an object"))?;
            for (key, val) in up {
                let (i, j) = key
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| parse_err(0, format!("bad upper key `{key}`")))?;
                if !(1 <= i && i < j && j <= self.n) {
                    return Err(Error::IndexError(format!("entry ({i},{j}) outside the strict upper part")));
                }
                g.upper[upper_index(self.n, i - 1, j - 1)] = r.elem_from_json(val)?;
            }
        }
        if !self.contains(&g) {
            return Err(Error::NotAUnit("diagonal class entries must be units".into()));
        }
        Ok(g)
    }

    /// `{"ring", "n", "cocycles"}`; cocycles may omit `domain`/`codomain`
    /// (defaulting to `units(ring)`), and a missing list means untwisted.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ring = RingDescriptor::parse(
            v.get("ring").and_then(Value::as_str).ok_or_else(|| parse_err(0, "spec needs a `ring`"))?,
        )?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(0, "spec needs an integer `n`"))? as usize;
        let units = format!("units({ring})");
        let cocycles = match v.get("cocycles") {
            None | Some(Value::Null) => return Self::untwisted(ring, n),
            Some(Value::Array(items)) => items
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    if let Some(o) = c.as_object_mut() {
                        o.entry("domain").or_insert_with(|| Value::String(units.clone()));
                        o.entry("codomain").or_insert_with(|| Value::String(units.clone()));
                    }
                    SymCocycle2::from_json(&c)
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(parse_err(0, "`cocycles` must be a list")),
        };
        Self::new(ring, n, cocycles)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "n": self.n,
            "cocycles": self.cocycles.iter().map(SymCocycle2::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for DeformationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_untwisted() {
            write!(f, "T_{}({})", self.n, self.ring)
        } else {
            write!(f, "T_{}({}, f)", self.n, self.ring)
        }
    }
}

/// Outcome of one relation family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFamily {
    pub family: u8,
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub group: String,
    pub exhaustive: bool,
    pub families: Vec<RelationFamily>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.failures == 0)
    }

    pub fn checked(&self) -> u64 {
        self.families.iter().map(|f| f.checked).sum()
    }
}

const FAMILY_NAMES: [&str; 5] = [
    "t_ij(a) t_ij(b) = t_ij(a+b)",
    "[t_ij(a), t_kl(b)] commutator formula",
    "d_i(a) d_i(b) = d_i(ab) diag(f_i(a,b))",
    "[d_i(a), d_j(b)] = 1",
    "d_k(a)^-1 t_ij(b) d_k(a) conjugation formula",
];

/// Whether the finite ring is small enough to run every relation instance.
fn exhaustive_ring(spec: &DeformationSpec) -> Option<(Vec<RingElem>, Vec<RingElem>)> {
    let card = spec.ring.cardinality()?;
    if card > BigInt::from(7) || spec.n > 4 {
        return None;
    }
    Some((spec.ring.elements()?, spec.units.elements()?))
}

/// Samples (or exhausts) the five relation families under `multiply`.
pub fn check_presentation<R: Rng + ?Sized>(spec: &DeformationSpec, trials: u64, rng: &mut R) -> Result<PresentationReport> {
    check_presentation_against(spec, spec, trials, rng)
}

/// Relations instantiated with the cocycles of `reference`, evaluated in the
/// group `spec`. A spec with a corrupted cocycle fails family 3 against the
/// intended one.
pub fn check_presentation_against<R: Rng + ?Sized>(
    reference: &DeformationSpec,
    spec: &DeformationSpec,
    trials: u64,
    rng: &mut R,
) -> Result<PresentationReport> {
    if reference.ring != spec.ring || reference.n != spec.n {
        return Err(Error::SpecMismatch);
    }
    let r = &spec.ring;
    let n = spec.n;
    let mut families: Vec<RelationFamily> = FAMILY_NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| RelationFamily { family: k as u8 + 1, name, checked: 0, failures: 0, witness: None })
        .collect();
    let record = |fam: &mut RelationFamily, ok: bool, what: String| {
        fam.checked += 1;
        if !ok {
            fam.failures += 1;
            if fam.witness.is_none() {
                fam.witness = Some(what);
            }
        }
    };
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();

    let exhaustive = exhaustive_ring(spec);
    let (ring_samples, unit_samples): (Vec<RingElem>, Vec<RingElem>) = match &exhaustive {
        Some((re, ue)) => (re.clone(), ue.clone()),
        None => (
            (0..trials).map(|_| r.random_elem(rng, 20)).collect(),
            (0..trials).map(|_| spec.units.random_unit(rng, 3)).collect(),
        ),
    };
    let sample_pairs = |xs: &[RingElem], rng: &mut R| -> Vec<(RingElem, RingElem)> {
        if exhaustive.is_some() {
            xs.iter().flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone()))).collect()
        } else {
            (0..trials as usize)
                .map(|k| (xs[k % xs.len()].clone(), xs[rng.gen_range(0..xs.len())].clone()))
                .collect()
        }
    };

    // 1: additivity
    let ring_pairs = sample_pairs(&ring_samples, rng);
    for (idx, (a, b)) in ring_pairs.iter().enumerate() {
        let list: Vec<(usize, usize)> =
            if exhaustive.is_some() { pairs.clone() } else { vec![pairs[idx % pairs.len()]] };
        for (i, j) in list {
            let lhs = spec.multiply(&spec.transvection(i, j, a)?, &spec.transvection(i, j, b)?)?;
            let rhs = spec.transvection(i, j, &r.add(a, b))?;
            record(&mut families[0], lhs == rhs, format!("i={i} j={j} a={} b={}", r.format_elem(a), r.format_elem(b)));
        }
    }

    // 2: commutators of transvections
    for (idx, (a, b)) in ring_pairs.iter().enumerate() {
        let quads: Vec<((usize, usize), (usize, usize))> = if exhaustive.is_some() {
            pairs.iter().flat_map(|p| pairs.iter().map(move |q| (*p, *q))).collect()
        } else {
            vec![(pairs[idx % pairs.len()], pairs[rng.gen_range(0..pairs.len())])]
        };
        for ((i, j), (k, l)) in quads {
            let lhs = spec.commutator(&spec.transvection(i, j, a)?, &spec.transvection(k, l, b)?)?;
            let ab = r.mul(a, b);
            let rhs = if j == k {
                spec.transvection(i, l, &ab)?
            } else if i == l {
                spec.transvection(k, j, &r.neg(&ab))?
            } else {
                spec.identity()
            };
            record(
                &mut families[1],
                lhs == rhs,
                format!("(i,j)=({i},{j}) (k,l)=({k},{l}) a={} b={}", r.format_elem(a), r.format_elem(b)),
            );
        }
    }

    // 3 and 4: diagonal relations
    let unit_pairs = sample_pairs(&unit_samples, rng);
    for (idx, (a, b)) in unit_pairs.iter().enumerate() {
        let is: Vec<usize> = if exhaustive.is_some() { (1..n).collect() } else { vec![1 + idx % (n - 1)] };
        for i in is {
            let lhs = spec.multiply(&spec.diag_gen(i, a)?, &spec.diag_gen(i, b)?)?;
            let c = reference.f(i - 1, a, b)?;
            let rhs = spec.multiply(&spec.diag_gen(i, &r.mul(a, b))?, &spec.scalar(&c)?)?;
            record(&mut families[2], lhs == rhs, format!("i={i} a={} b={}", r.format_elem(a), r.format_elem(b)));
        }
        let ijs: Vec<(usize, usize)> = if exhaustive.is_some() {
            (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect()
        } else {
            vec![(1 + idx % n, 1 + rng.gen_range(0..n))]
        };
        for (i, j) in ijs {
            let lhs = spec.commutator(&spec.diag_gen(i, a)?, &spec.diag_gen(j, b)?)?;
            record(
                &mut families[3],
                lhs == spec.identity(),
                format!("i={i} j={j} a={} b={}", r.format_elem(a), r.format_elem(b)),
            );
        }
    }

    // 5: diagonal action on transvections
    let mixed: Vec<(RingElem, RingElem)> = if exhaustive.is_some() {
        unit_samples
            .iter()
            .flat_map(|a| ring_samples.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    } else {
        (0..trials as usize)
            .map(|k| (unit_samples[k % unit_samples.len()].clone(), ring_samples[rng.gen_range(0..ring_samples.len())].clone()))
            .collect()
    };
    for (idx, (a, b)) in mixed.iter().enumerate() {
        let cases: Vec<(usize, (usize, usize))> = if exhaustive.is_some() {
            (1..=n).flat_map(|k| pairs.iter().map(move |p| (k, *p))).collect()
        } else {
            vec![(1 + idx % n, pairs[rng.gen_range(0..pairs.len())])]
        };
        for (k, (i, j)) in cases {
            let d = spec.diag_gen(k, a)?;
            let lhs = spec.conjugate(&spec.transvection(i, j, b)?, &d)?;
            let ainv = r.inv(a).expect("unit");
            let coeff = if k == i {
                r.mul(&ainv, b)
            } else if k == j {
                r.mul(a, b)
            } else {
                b.clone()
            };
            let rhs = spec.transvection(i, j, &coeff)?;
            record(
                &mut families[4],
                lhs == rhs,
                format!("k={k} (i,j)=({i},{j}) a={} b={}", r.format_elem(a), r.format_elem(b)),
            );
        }
    }

    Ok(PresentationReport { group: spec.to_string(), exhaustive: exhaustive.is_some(), families })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FnIdentityReport {
    pub pairs_checked: u64,
    pub failures: u64,
    pub exhaustive: bool,
    pub witness: Option<String>,
}

impl FnIdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `d_n(α)d_n(β)·d_n(αβ)⁻¹ = diag((f₁⋯f_{n−1})(α, β))⁻¹`.
///
/// Pairs: every pair of a finite unit group; otherwise every torsion pair plus
/// `trials` random pairs.
pub fn fn_identity_check<R: Rng + ?Sized>(spec: &DeformationSpec, trials: u64, rng: &mut R) -> Result<FnIdentityReport> {
    let r = &spec.ring;
    let n = spec.n;
    let (mut pairs, exhaustive) = match spec.units.elements() {
        Some(us) => (us.iter().flat_map(|a| us.iter().map(move |b| (a.clone(), b.clone()))).collect::<Vec<_>>(), true),
        None => {
            let tors = torsion_elements(&spec.units);
            (tors.iter().flat_map(|a| tors.iter().map(move |b| (a.clone(), b.clone()))).collect(), false)
        }
    };
    if !exhaustive {
        for _ in 0..trials {
            pairs.push((spec.units.random_unit(rng, 3), spec.units.random_unit(rng, 3)));
        }
    }
    let mut report = FnIdentityReport { pairs_checked: 0, failures: 0, exhaustive, witness: None };
    for (a, b) in pairs {
        let lhs = spec.mul_all(&[
            spec.diag_gen(n, &a)?,
            spec.diag_gen(n, &b)?,
            spec.inverse(&spec.diag_gen(n, &r.mul(&a, &b))?)?,
        ])?;
        let f = spec.f_total(&a, &b)?;
        let rhs = spec.scalar(&r.inv(&f).expect("unit"))?;
        report.pairs_checked += 1;
        if lhs != rhs {
            report.failures += 1;
            if report.witness.is_none() {
                report.witness = Some(format!(
                    "a={} b={}: {} != {}",
                    r.format_elem(&a),
                    r.format_elem(&b),
                    spec.format_elem(&lhs),
                    spec.format_elem(&rhs)
                ));
            }
        }
    }
    Ok(report)
}

/// All elements of the torsion subgroup of a unit group.
pub fn torsion_elements(u: &UnitGroupStruct) -> Vec<RingElem> {
    let mut tors = UnitGroupStruct { free_basis: vec![], ..u.clone() };
    tors.basis_mode = crate::units::BasisMode::Complete;
    tors.elements().unwrap_or_default()
}

/// The isomorphism `T_n(R, f̄) → T_n(R)` built from coboundary witnesses
/// `f_i = δψ_i`: `(x̄, z, U) ↦ diag(x₁z′, …, x_{n−1}z′, z′)(I + U)` with
/// `z′ = z·∏ψ_i(x_i)⁻¹`.
#[derive(Clone, Debug)]
pub struct SplitIsomorphism {
    pub spec: DeformationSpec,
    pub witnesses: Vec<CochainMap>,
}

pub fn split_isomorphism(spec: &DeformationSpec) -> Result<SplitIsomorphism> {
    let mut witnesses = Vec::new();
    for (i, f) in spec.cocycles.iter().enumerate() {
        match is_coboundary(f)? {
            Some(psi) => witnesses.push(psi),
            None => return Err(Error::MissingWitness(i + 1)),
        }
    }
    Ok(SplitIsomorphism { spec: spec.clone(), witnesses })
}

impl SplitIsomorphism {
    fn psi_product(&self, xbar: &[RingElem]) -> Result<RingElem> {
        let r = &self.spec.ring;
        let u = self.spec.unit_group();
        let mut acc = r.one();
        for (i, psi) in self.witnesses.iter().enumerate() {
            let v = psi.eval(&u, &u, &AbElem::Unit(xbar[i].clone()))?;
            acc = r.mul(&acc, v.unit().ok_or(Error::DomainMismatch)?);
        }
        Ok(acc)
    }

    pub fn forward(&self, g: &DeformedElem) -> Result<TriMatrix> {
        let r = &self.spec.ring;
        let p = self.psi_product(&g.xbar)?;
        let z = r.mul(&g.z, &r.inv(&p).expect("unit"));
        Ok(self.spec.to_matrix_with_center(g, &z))
    }

    pub fn backward(&self, m: &TriMatrix) -> Result<DeformedElem> {
        let r = &self.spec.ring;
        let (mut g, z) = self.spec.from_matrix_with_center(m)?;
        g.z = r.mul(&z, &self.psi_product(&g.xbar)?);
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub pairs_checked: u64,
    pub homomorphism_failures: u64,
    pub inverse_failures: u64,
    pub identity_preserved: bool,
    pub witness: Option<String>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.homomorphism_failures == 0 && self.inverse_failures == 0 && self.identity_preserved
    }
}

/// `φ(gh) = φ(g)φ(h)` and `φ⁻¹(φ(g)) = g` on the given pairs.
pub fn verify_split(iso: &SplitIsomorphism, pairs: &[(DeformedElem, DeformedElem)]) -> Result<SplitReport> {
    let spec = &iso.spec;
    let r = &spec.ring;
    let id = spec.identity();
    let mut report = SplitReport {
        pairs_checked: 0,
        homomorphism_failures: 0,
        inverse_failures: 0,
        identity_preserved: iso.forward(&id)? == TriMatrix::identity(r, spec.n),
        witness: None,
    };
    for (g, h) in pairs {
        let gh = spec.multiply(g, h)?;
        let lhs = iso.forward(&gh)?;
        let rhs = iso.forward(g)?.mul(r, &iso.forward(h)?);
        report.pairs_checked += 1;
        if lhs != rhs {
            report.homomorphism_failures += 1;
            report.witness.get_or_insert_with(|| format!("g={} h={}", spec.format_elem(g), spec.format_elem(h)));
        }
        for x in [g, h] {
            if iso.backward(&iso.forward(x)?)? != *x {
                report.inverse_failures += 1;
                report.witness.get_or_insert_with(|| format!("inverse fails at {}", spec.format_elem(x)));
            }
        }
    }
    Ok(report)
}

pub const ENUMERATION_LIMIT: u64 = 10_000;

/// `|R^×|^n · |R|^{n(n−1)/2}`, `None` when infinite or past `u64`.
pub fn group_order(spec: &DeformationSpec) -> Option<u64> {
    let u = spec.units.elements()?.len() as u64;
    let r = u64::try_from(spec.ring.cardinality()?).ok()?;
    u.checked_pow(spec.n as u32)?.checked_mul(r.checked_pow(upper_len(spec.n) as u32)?)
}

/// Every element of a finite `T_n(R, f̄)`, in coordinate order.
pub fn enumerate_group(spec: &DeformationSpec) -> Result<Vec<DeformedElem>> {
    let units = spec
        .units
        .elements()
        .ok_or_else(|| Error::TooLarge(format!("{} is infinite", spec)))?;
    let ring = spec.ring.elements().ok_or_else(|| Error::TooLarge(format!("{} is infinite", spec)))?;
    let n = spec.n;
    let m = upper_len(n);
    let order = (units.len() as u64).checked_pow(n as u32).and_then(|u| u.checked_mul((ring.len() as u64).checked_pow(m as u32)?));
    if order.map_or(true, |o| o > ENUMERATION_LIMIT) {
        return Err(Error::TooLarge(format!("{spec} has more than {ENUMERATION_LIMIT} elements")));
    }
    let mut out = Vec::with_capacity(order.unwrap_or(0) as usize);
    let diag_count = units.len().pow(n as u32);
    let up_count = ring.len().pow(m as u32);
    for dk in 0..diag_count {
        let mut k = dk;
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push(units[k % units.len()].clone());
            k /= units.len();
        }
        for uk in 0..up_count {
            let mut k = uk;
            let mut upper = Vec::with_capacity(m);
            for _ in 0..m {
                upper.push(ring[k % ring.len()].clone());
                k /= ring.len();
            }
            out.push(DeformedElem { xbar: coords[..n - 1].to_vec(), z: coords[n - 1].clone(), upper });
        }
    }
    Ok(out)
}
