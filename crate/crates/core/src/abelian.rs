//! Finitely generated abelian groups, Smith normal form, `Ext`, homomorphisms
//! and the pure-subgroup test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{parse_err, Error, Result};

pub type Matrix = Vec<Vec<BigInt>>;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative, each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .collect()
    }
}

pub fn identity_matrix(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn smith_normal_form(m: &Matrix) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity_matrix(rows);
    let mut v = identity_matrix(cols);

    let swap_rows = |d: &mut Matrix, u: &mut Matrix, a: usize, b: usize| {
        d.swap(a, b);
        u.swap(a, b);
    };
    let swap_cols = |d: &mut Matrix, v: &mut Matrix, a: usize, b: usize| {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };
    // row_a -= q·row_b
    let row_op = |d: &mut Matrix, u: &mut Matrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..d[a].len() {
            let t = &d[b][j] * q;
            d[a][j] -= t;
        }
        for j in 0..u[a].len() {
            let t = &u[b][j] * q;
            u[a][j] -= t;
        }
    };
    let col_op = |d: &mut Matrix, v: &mut Matrix, a: usize, b: usize, q: &BigInt| {
        for row in d.iter_mut() {
            let t = &row[b] * q;
            row[a] -= t;
        }
        for row in v.iter_mut() {
            let t = &row[b] * q;
            row[a] -= t;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_op(&mut d, &mut u, i, t, &q);
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_op(&mut d, &mut v, j, t, &q);
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => row_op(&mut d, &mut u, t, i, &-BigInt::one()),
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Snf { u, d, v }
}

/// A finitely generated abelian group in invariant-factor form
/// `Z/d₁ × … × Z/d_k × Z^r` with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelian {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FgAbelian {
    pub fn trivial() -> Self {
        FgAbelian { invariant_factors: vec![], free_rank: 0 }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian { invariant_factors: vec![], free_rank: rank }
    }

    /// Canonical form of `⊕ Z/mᵢ ⊕ Z^r` for arbitrary orders (`mᵢ = 1` is allowed and dropped).
    pub fn from_cyclic(orders: &[BigInt], free_rank: usize) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|m| !m.is_positive()) {
            return Err(Error::InvalidParameter(format!("cyclic order {bad} must be positive")));
        }
        let k = orders.len();
        let diag: Matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { orders[i].clone() } else { BigInt::zero() }).collect())
            .collect();
        let invariant_factors =
            smith_normal_form(&diag).diagonal().into_iter().filter(|d| !d.is_one()).collect();
        Ok(FgAbelian { invariant_factors, free_rank })
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn as_product(&self) -> CyclicProduct {
        CyclicProduct { orders: self.invariant_factors.clone(), free_rank: self.free_rank }
    }

    /// Parse `Z/4 x Z/6 x Z^2`, `Z`, or `1` (trivial).
    pub fn parse(text: &str) -> Result<Self> {
        let p = CyclicProduct::parse(text)?;
        FgAbelian::from_cyclic(&p.orders, p.free_rank)
    }
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_product().fmt(f)
    }
}

/// `Ext(B, A)` assembled from `Ext(Z/m, Z/n) = Z/gcd(m, n)`, `Ext(Z/m, Z) = Z/m`
/// and `Ext(Z, −) = 0`.
pub fn ext_group(b: &FgAbelian, a: &FgAbelian) -> FgAbelian {
    let mut orders = Vec::new();
    for m in &b.invariant_factors {
        for n in &a.invariant_factors {
            orders.push(m.gcd(n));
        }
        for _ in 0..a.free_rank {
            orders.push(m.clone());
        }
    }
    FgAbelian::from_cyclic(&orders, 0).expect("positive orders")
}

/// A product of cyclic groups `Z/m₁ × … × Z/m_k × Z^r` in the order written, with
/// the standard generators. Unlike [`FgAbelian`] no divisibility chain is imposed,
/// so coordinates follow the presentation the user chose.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicProduct {
    pub orders: Vec<BigInt>,
    pub free_rank: usize,
}

impl CyclicProduct {
    pub fn new(orders: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|m| **m < BigInt::from(2)) {
            return Err(Error::InvalidParameter(format!("cyclic factor order {bad} < 2")));
        }
        Ok(CyclicProduct { orders, free_rank })
    }

    pub fn cyclic(m: u64) -> Self {
        CyclicProduct::new(vec![BigInt::from(m)], 0).expect("m >= 2")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if s == "1" || s == "0" || s.eq_ignore_ascii_case("trivial") {
            return Ok(CyclicProduct { orders: vec![], free_rank: 0 });
        }
        let mut orders = Vec::new();
        let mut free_rank = 0;
        let mut pos = 0;
        for part in s.split(['x', '×']) {
            let p = part.trim();
            if p == "Z" {
                free_rank += 1;
            } else if let Some(r) = p.strip_prefix("Z^") {
                free_rank += r.parse::<usize>().map_err(|_| parse_err(pos, "bad rank"))?;
            } else if let Some(m) = p.strip_prefix("Z/") {
                let m: BigInt = m.parse().map_err(|_| parse_err(pos, format!("bad modulus `{m}`")))?;
                orders.push(m);
            } else {
                return Err(parse_err(pos, format!("unrecognised factor `{p}`")));
            }
            pos += part.len() + 1;
        }
        CyclicProduct::new(orders, free_rank)
    }

    pub fn dims(&self) -> usize {
        self.orders.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.orders.iter().product())
    }

    pub fn canonical(&self) -> FgAbelian {
        FgAbelian::from_cyclic(&self.orders, self.free_rank).expect("valid orders")
    }

    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (x, m) in v.iter_mut().zip(&self.orders) {
            *x = x.mod_floor(m);
        }
        v
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dims()]
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        self.reduce(a.iter().map(|x| x * k).collect())
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.dims()
            && v.iter().zip(&self.orders).all(|(x, m)| !x.is_negative() && x < m)
    }

    /// All elements of a finite product, first coordinate fastest.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let orders: Vec<u64> = self.orders.iter().map(|m| m.to_u64()).collect::<Option<_>>()?;
        let total: u64 = orders.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        for mut k in 0..total {
            let mut v = Vec::with_capacity(orders.len());
            for m in &orders {
                v.push(BigInt::from(k % m));
                k /= m;
            }
            out.push(v);
        }
        Some(out)
    }
}

impl fmt::Display for CyclicProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.orders.iter().map(|m| format!("Z/{m}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A homomorphism between cyclic products given by the images of the standard
/// generators (the columns of `matrix`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub source: CyclicProduct,
    pub target: CyclicProduct,
    pub matrix: Matrix,
}

impl AbHom {
    /// Checks shape and that each torsion generator of order `m` maps to an element
    /// killed by `m`.
    pub fn new(source: CyclicProduct, target: CyclicProduct, matrix: Matrix) -> Result<Self> {
        if matrix.len() != target.dims() || matrix.iter().any(|r| r.len() != source.dims()) {
            return Err(Error::InvalidParameter(format!(
                "matrix must be {}x{}",
                target.dims(),
                source.dims()
            )));
        }
        for (i, m) in source.orders.iter().enumerate() {
            for (j, row) in matrix.iter().enumerate() {
                let image = &row[i] * m;
                let ok = match target.orders.get(j) {
                    Some(e) => image.is_multiple_of(e),
                    None => image.is_zero(),
                };
                if !ok {
                    return Err(Error::InvalidParameter(format!(
                        "generator {i} of order {m} does not map to an element of order dividing {m}"
                    )));
                }
            }
        }
        let matrix = matrix
            .into_iter()
            .enumerate()
            .map(|(j, row)| match target.orders.get(j) {
                Some(e) => row.into_iter().map(|x| x.mod_floor(e)).collect(),
                None => row,
            })
            .collect();
        Ok(AbHom { source, target, matrix })
    }

    pub fn identity(g: &CyclicProduct) -> Self {
        AbHom { source: g.clone(), target: g.clone(), matrix: identity_matrix(g.dims()) }
    }

    /// `x ↦ x^{-1}`.
    pub fn inversion(g: &CyclicProduct) -> Self {
        let mut m = identity_matrix(g.dims());
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = -BigInt::one();
        }
        AbHom::new(g.clone(), g.clone(), m).expect("inversion is a homomorphism")
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(mat_vec(&self.matrix, x))
    }

    pub fn compose(&self, after: &AbHom) -> Result<AbHom> {
        if self.target != after.source {
            return Err(Error::DomainMismatch);
        }
        AbHom::new(self.source.clone(), after.target.clone(), mat_mul(&after.matrix, &self.matrix))
    }

    /// `[M | D]` where `D` spans the relations of the target.
    fn with_relations(&self) -> Matrix {
        let k = self.target.orders.len();
        self.matrix
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let mut r = row.clone();
                for (i, e) in self.target.orders.iter().enumerate() {
                    r.push(if i == j { e.clone() } else { BigInt::zero() });
                }
                r.truncate(self.source.dims() + k);
                r
            })
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        let t = self.target.dims();
        if t == 0 {
            return true;
        }
        let n = self.with_relations();
        let diag = smith_normal_form(&n).diagonal();
        diag.len() == t && diag.iter().all(|d| d.is_one())
    }

    /// Finitely generated abelian groups are Hopfian, so a surjection between
    /// isomorphic groups is bijective.
    pub fn is_bijective(&self) -> bool {
        self.is_surjective() && self.source.canonical() == self.target.canonical()
    }

    /// Preimage of `y` under a surjective map (any one).
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.with_relations();
        let snf = smith_normal_form(&n);
        let diag = snf.diagonal();
        let uy = mat_vec(&snf.u, y);
        let mut w = vec![BigInt::zero(); n.first().map_or(0, Vec::len)];
        for (i, c) in uy.iter().enumerate() {
            match diag.get(i) {
                Some(d) if !d.is_zero() => {
                    if !c.is_multiple_of(d) {
                        return None;
                    }
                    w[i] = c / d;
                }
                _ => {
                    if !c.is_zero() {
                        return None;
                    }
                }
            }
        }
        let x = mat_vec(&snf.v, &w);
        Some(self.source.reduce(x[..self.source.dims()].to_vec()))
    }

    pub fn inverse(&self) -> Result<AbHom> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let t = self.target.dims();
        let mut cols = Vec::with_capacity(t);
        for j in 0..t {
            let mut e = vec![BigInt::zero(); t];
            e[j] = BigInt::one();
            cols.push(self.preimage(&e).ok_or(Error::NotBijective)?);
        }
        let s = self.source.dims();
        let matrix = (0..s).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        AbHom::new(self.target.clone(), self.source.clone(), matrix)
    }
}

/// Whether `nA = nB ∩ A` for every `n ≤ bound`, where `A` embeds in `B` via `emb`.
///
/// Equivalent to injectivity of `A/nA → B/nB`, which is checked on coset representatives.
pub fn is_pure_subgroup(emb: &AbHom, bound: u64) -> Result<bool> {
    if emb.source.dims() > 0 && emb.source.dims() as u32 * (bound as f64).log2().ceil() as u32 > 40 {
        return Err(Error::TooLarge("too many coset representatives".into()));
    }
    for n in 2..=bound {
        let nb = BigInt::from(n);
        let ranges: Vec<u64> = (0..emb.source.dims())
            .map(|i| match emb.source.orders.get(i) {
                Some(m) => m.gcd(&nb).to_u64().unwrap_or(n),
                None => n,
            })
            .collect();
        let total: u64 = ranges.iter().product();
        for mut k in 1..total {
            let mut c = Vec::with_capacity(ranges.len());
            for r in &ranges {
                c.push(BigInt::from(k % r));
                k /= r;
            }
            let image = mat_vec(&emb.matrix, &c);
            let in_nb = image.iter().enumerate().all(|(j, y)| {
                let m = match emb.target.orders.get(j) {
                    Some(e) => e.gcd(&nb),
                    None => nb.clone(),
                };
                y.is_multiple_of(&m)
            });
            if in_nb {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.d, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(mat_mul(&mat_mul(&s.u, &m(&[&[2, 0], &[0, 3]])), &s.v), s.d);
        assert_eq!(smith_normal_form(&identity_matrix(3)).d, identity_matrix(3));
        assert_eq!(smith_normal_form(&m(&[&[0]])).d, m(&[&[0]]));
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![b(2), b(6), b(12)]);
        assert_eq!(mat_mul(&mat_mul(&s.u, &a), &s.v), s.d);
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
    }

    #[test]
    fn ext_examples() {
        let z4 = FgAbelian::parse("Z/4").unwrap();
        let z6 = FgAbelian::parse("Z/6").unwrap();
        assert_eq!(ext_group(&z4, &z6), FgAbelian::parse("Z/2").unwrap());
        assert!(ext_group(&FgAbelian::free(3), &FgAbelian::parse("Z/9").unwrap()).is_trivial());
        let g = FgAbelian::parse("Z/2 x Z").unwrap();
        assert_eq!(ext_group(&g, &g), FgAbelian::parse("Z/2 x Z/2").unwrap());
        assert_eq!(FgAbelian::parse("Z/4 x Z/6").unwrap().invariant_factors, vec![b(2), b(12)]);
        assert_eq!(FgAbelian::parse("Z/2 x Z/3").unwrap().to_string(), "Z/6");
    }

    #[test]
    fn homomorphisms() {
        let z4 = CyclicProduct::cyclic(4);
        let inv = AbHom::inversion(&z4);
        assert!(inv.is_bijective());
        assert_eq!(inv.inverse().unwrap(), inv);
        let double = AbHom::new(z4.clone(), z4.clone(), m(&[&[2]])).unwrap();
        assert!(!double.is_surjective());
        assert_eq!(double.inverse(), Err(Error::NotBijective));
        assert!(AbHom::new(CyclicProduct::cyclic(2), z4.clone(), m(&[&[1]])).is_err());
        // Z/2 x Z/3 -> Z/6, (a, b) -> 3a + 2b
        let src = CyclicProduct::parse("Z/2 x Z/3").unwrap();
        let h = AbHom::new(src.clone(), CyclicProduct::cyclic(6), m(&[&[3, 2]])).unwrap();
        assert!(h.is_bijective());
        let hi = h.inverse().unwrap();
        for x in src.elements().unwrap() {
            assert_eq!(hi.apply(&h.apply(&x)), x);
        }
        let z2 = CyclicProduct::parse("Z^2").unwrap();
        let shear = AbHom::new(z2.clone(), z2.clone(), m(&[&[1, 5], &[0, 1]])).unwrap();
        assert_eq!(shear.inverse().unwrap().matrix, m(&[&[1, -5], &[0, 1]]));
    }

    #[test]
    fn purity() {
        let emb = AbHom::new(CyclicProduct::cyclic(2), CyclicProduct::cyclic(4), m(&[&[2]])).unwrap();
        assert!(!is_pure_subgroup(&emb, 2).unwrap());
        assert!(is_pure_subgroup(&AbHom::identity(&CyclicProduct::cyclic(4)), 20).unwrap());
        // 2Z x 0 inside 2Z x Z, both coordinatised by their own bases
        let z1 = CyclicProduct::parse("Z").unwrap();
        let z2 = CyclicProduct::parse("Z^2").unwrap();
        let e = AbHom::new(z1.clone(), z2.clone(), m(&[&[1], &[0]])).unwrap();
        assert!(is_pure_subgroup(&e, 20).unwrap());
        let e = AbHom::new(z1, z2, m(&[&[2], &[0]])).unwrap();
        assert!(!is_pure_subgroup(&e, 20).unwrap());
    }
}
