//! Independent oracles shared by the integration tests. None of these call into
//! the algorithms they check; they work on plain integers and element lists.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triadeform::cocycle::{AbElem, AbGroup};
use triadeform::finite::{self, perm_group, FiniteGroup};
use triadeform::structure::finite_group;
use triadeform::tri::DeformationSpec;
use triadeform::ring::{RingDescriptor, RingElem};
use triadeform::tri::TriMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z/o₁ × … × Z/o_k` with elements numbered in mixed radix, first coordinate
/// fastest.
#[derive(Clone, Debug)]
pub struct SmallAb {
    pub orders: Vec<usize>,
}

impl SmallAb {
    pub fn new(orders: &[usize]) -> Self {
        SmallAb { orders: orders.to_vec() }
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn coords(&self, mut x: usize) -> Vec<usize> {
        self.orders
            .iter()
            .map(|&o| {
                let c = x % o;
                x /= o;
                c
            })
            .collect()
    }

    pub fn index(&self, c: &[usize]) -> usize {
        let mut x = 0;
        for (k, &o) in self.orders.iter().enumerate().rev() {
            x = x * o + c[k] % o;
        }
        x
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.coords(x), self.coords(y));
        self.index(&a.iter().zip(&b).map(|(p, q)| p + q).collect::<Vec<_>>())
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.coords(x);
        self.index(&a.iter().zip(&self.orders).map(|(p, o)| (o - p) % o).collect::<Vec<_>>())
    }

    pub fn group(&self) -> AbGroup {
        AbGroup::parse(&self.text()).unwrap()
    }

    pub fn text(&self) -> String {
        if self.orders.is_empty() {
            "1".into()
        } else {
            self.orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join(" x ")
        }
    }

    pub fn elem(&self, x: usize) -> AbElem {
        AbElem::Vector(self.coords(x).into_iter().map(BigInt::from).collect())
    }

    pub fn from_elem(&self, e: &AbElem) -> usize {
        match e {
            AbElem::Vector(v) => self.index(&v.iter().map(|c| usize::try_from(c).unwrap()).collect::<Vec<_>>()),
            AbElem::Unit(_) => panic!("not a vector"),
        }
    }
}

/// Every abelian group of order at most `max` as a product of cyclic groups
/// (one presentation per isomorphism type, plus none for order 1).
pub fn small_abelian(max: usize) -> Vec<SmallAb> {
    let all: Vec<Vec<usize>> = vec![
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
    ];
    all.into_iter()
        .map(|o| SmallAb { orders: o })
        .filter(|g| g.size() <= max)
        .collect()
}

/// The carry cocycle: adds `targets[k]` whenever coordinate `k` overflows.
pub fn carry_table(b: &SmallAb, a: &SmallAb, targets: &[usize]) -> Vec<Vec<usize>> {
    let n = b.size();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (cx, cy) = (b.coords(x), b.coords(y));
                    (0..b.orders.len())
                        .filter(|&k| cx[k] + cy[k] >= b.orders[k])
                        .fold(0, |acc, k| a.add(acc, targets[k]))
                })
                .collect()
        })
        .collect()
}

pub fn add_tables(a: &SmallAb, f: &[Vec<usize>], g: &[Vec<usize>]) -> Vec<Vec<usize>> {
    f.iter().zip(g).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| a.add(x, y)).collect()).collect()
}

/// `δψ(x, y) = ψ(x+y) − ψ(x) − ψ(y)` as a table.
pub fn coboundary_table(b: &SmallAb, a: &SmallAb, psi: &[usize]) -> Vec<Vec<usize>> {
    let n = b.size();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.add(a.add(psi[b.add(x, y)], a.neg(psi[x])), a.neg(psi[y])))
                .collect()
        })
        .collect()
}

/// Searches `ψ` with `ψ(0) = 0` and `δψ = f` by backtracking over `ψ(1), ψ(2), …`.
pub fn coboundary_search(b: &SmallAb, a: &SmallAb, f: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = b.size();
    let mut psi = vec![usize::MAX; n];
    psi[0] = 0;
    fn consistent(b: &SmallAb, a: &SmallAb, f: &[Vec<usize>], psi: &[usize], upto: usize) -> bool {
        for x in 0..=upto {
            for y in 0..=upto {
                let s = b.add(x, y);
                if s <= upto {
                    let v = a.add(a.add(psi[s], a.neg(psi[x])), a.neg(psi[y]));
                    if v != f[x][y] {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(b: &SmallAb, a: &SmallAb, f: &[Vec<usize>], psi: &mut Vec<usize>, k: usize) -> bool {
        if k == psi.len() {
            return true;
        }
        for v in 0..a.size() {
            psi[k] = v;
            if consistent(b, a, f, psi, k) && go(b, a, f, psi, k + 1) {
                return true;
            }
        }
        psi[k] = usize::MAX;
        false
    }
    if !consistent(b, a, f, &psi, 0) {
        return None;
    }
    go(b, a, f, &mut psi, 1).then_some(psi)
}

/// Number of normalised symmetric 2-cocycles `B × B → A`, by backtracking over
/// the values `f(x, y)`, `0 < x ≤ y`.
pub fn count_symmetric_cocycles(b: &SmallAb, a: &SmallAb) -> u64 {
    let n = b.size();
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let pid = |x: usize, y: usize| -> Option<usize> {
        if x == 0 || y == 0 {
            return None;
        }
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        pairs.iter().position(|&p| p == (x, y))
    };
    // triples grouped by the last pair they need
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); pairs.len()];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let needed = [pid(x, y), pid(b.add(x, y), z), pid(y, z), pid(x, b.add(y, z))];
                if let Some(last) = needed.iter().flatten().max() {
                    checks[*last].push((x, y, z));
                }
            }
        }
    }
    let mut vals = vec![0usize; pairs.len()];
    fn get(vals: &[usize], pid: &dyn Fn(usize, usize) -> Option<usize>, x: usize, y: usize) -> usize {
        pid(x, y).map_or(0, |i| vals[i])
    }
    fn go(
        b: &SmallAb,
        a: &SmallAb,
        pid: &dyn Fn(usize, usize) -> Option<usize>,
        checks: &[Vec<(usize, usize, usize)>],
        vals: &mut Vec<usize>,
        k: usize,
    ) -> u64 {
        if k == vals.len() {
            return 1;
        }
        let mut total = 0;
        for v in 0..a.size() {
            vals[k] = v;
            let ok = checks[k].iter().all(|&(x, y, z)| {
                let lhs = a.add(get(vals, pid, x, y), get(vals, pid, b.add(x, y), z));
                let rhs = a.add(get(vals, pid, y, z), get(vals, pid, x, b.add(y, z)));
                lhs == rhs
            });
            if ok {
                total += go(b, a, pid, checks, vals, k + 1);
            }
        }
        total
    }
    if pairs.is_empty() {
        return 1;
    }
    go(b, a, &pid, &checks, &mut vals, 0)
}

/// `|B²(B, A)|` by enumerating every normalised cochain.
pub fn count_coboundaries(b: &SmallAb, a: &SmallAb) -> u64 {
    let n = b.size();
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut psi = vec![0usize; n];
    loop {
        seen.insert(coboundary_table(b, a, &psi));
        let mut k = 1;
        loop {
            if k >= n {
                return seen.len() as u64;
            }
            psi[k] += 1;
            if psi[k] < a.size() {
                break;
            }
            psi[k] = 0;
            k += 1;
        }
    }
}

/// Dense product of triangular matrices, entry by entry.
pub fn matrix_product(r: &RingDescriptor, a: &TriMatrix, b: &TriMatrix) -> Vec<Vec<RingElem>> {
    let n = a.n;
    let mut out = vec![vec![r.zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                *cell = r.add(cell, &r.mul(&a.rows[i][k], &b.rows[k][j]));
            }
        }
    }
    out
}

/// Whether `x + y√2` is divisible by `a₀ + a₁√2` in `Z[√2]`: solves the 2×2
/// linear system for the quotient over Q and checks integrality.
pub fn divides_z_sqrt2(a: (&BigInt, &BigInt), b: (&BigInt, &BigInt)) -> bool {
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    // rows: [a0, 2a1 | b0], [a1, a0 | b1]
    let mut m = [
        [q(a.0), q(a.1) * BigRational::from_integer(2.into()), q(b.0)],
        [q(a.1), q(a.0), q(b.1)],
    ];
    if m[0][0].is_zero() && m[1][0].is_zero() {
        // a = 0
        return b.0.is_zero() && b.1.is_zero();
    }
    if m[0][0].is_zero() {
        m.swap(0, 1);
    }
    let factor = m[1][0].clone() / m[0][0].clone();
    for c in 0..3 {
        let v = m[0][c].clone() * factor.clone();
        m[1][c] -= v;
    }
    let y = m[1][2].clone() / m[1][1].clone();
    let x = (m[0][2].clone() - m[0][1].clone() * y.clone()) / m[0][0].clone();
    x.is_integer() && y.is_integer()
}

/// `⟨S⟩` as a membership mask, closing under products of all found elements.
pub fn brute_closure(g: &FiniteGroup, set: &[u32]) -> Vec<bool> {
    let n = g.order();
    let mut mask = vec![false; n];
    mask[0] = true;
    let mut members = vec![0u32];
    for &s in set {
        if !mask[s as usize] {
            mask[s as usize] = true;
            members.push(s);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = members.clone();
        for &x in &snapshot {
            for &y in &snapshot {
                let z = g.mul(x, y);
                if !mask[z as usize] {
                    mask[z as usize] = true;
                    members.push(z);
                    changed = true;
                }
            }
        }
    }
    mask
}

pub fn members(mask: &[bool]) -> Vec<u32> {
    (0..mask.len() as u32).filter(|&i| mask[i as usize]).collect()
}

/// `⟨g^y : y ∈ G⟩` over every element `y`.
pub fn brute_normal_closure(g: &FiniteGroup, xs: &[u32]) -> Vec<bool> {
    let conjugates: Vec<u32> = xs.iter().flat_map(|&x| g.elements().map(move |y| (x, y))).map(|(x, y)| g.conj(x, y)).collect();
    brute_closure(g, &conjugates)
}

/// `H = γ₁ ⊇ γ₂ = [γ₁, H] ⊇ …` from all pairs of elements, until it stabilises.
pub fn brute_lcs(g: &FiniteGroup, h: &[bool]) -> Vec<usize> {
    let hs = members(h);
    let mut cur = h.to_vec();
    let mut orders = vec![hs.len()];
    loop {
        let cs: Vec<u32> = members(&cur)
            .into_iter()
            .flat_map(|a| hs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .collect();
        let next = brute_closure(g, &cs);
        let k = next.iter().filter(|&&b| b).count();
        if k == *orders.last().unwrap() {
            return orders;
        }
        orders.push(k);
        cur = next;
        if k == 1 {
            return orders;
        }
    }
}

/// Class of the nilpotent subgroup `h`, or `None`.
pub fn brute_class(g: &FiniteGroup, h: &[bool]) -> Option<usize> {
    let orders = brute_lcs(g, h);
    (*orders.last().unwrap() == 1).then(|| orders.len() - 1)
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn is_one(x: &BigInt) -> bool {
    x.is_one()
}

/// Finite groups of order at most 20 used as FO models.
pub fn small_models() -> Vec<FiniteGroup> {
    let tri = |ring: &str, n: usize| {
        let spec = DeformationSpec::untwisted(RingDescriptor::parse(ring).unwrap(), n).unwrap();
        let mut g = finite_group(&spec).unwrap().group;
        g.name = format!("T{n}({ring})");
        g
    };
    let mut out: Vec<FiniteGroup> = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 20].into_iter().map(finite::cyclic).collect();
    out.extend([
        finite::klein_four(),
        finite::symmetric3(),
        finite::dihedral(4),
        finite::quaternion8(),
        finite::alternating4(),
        finite::dihedral(5),
        finite::dihedral(6),
        finite::dihedral(7),
        finite::dihedral(8),
        finite::dihedral(9),
        finite::dihedral(10),
        finite::cyclic_product(2, 4),
        finite::cyclic_product(3, 3),
        finite::cyclic_product(2, 6),
        finite::cyclic_product(4, 4),
        finite::cyclic_product(2, 10),
        perm_group("C2^3", 6, &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]]),
        perm_group("C2xD8", 6, &[vec![1, 2, 3, 0, 4, 5], vec![0, 3, 2, 1, 4, 5], vec![0, 1, 2, 3, 5, 4]]),
        perm_group("C3xS3", 6, &[vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 5, 3], vec![0, 1, 2, 4, 3, 5]]),
        perm_group("C3:C4", 7, &[vec![1, 2, 0, 3, 4, 5, 6], vec![0, 2, 1, 4, 5, 6, 3]]),
        perm_group("F20", 5, &[vec![1, 2, 3, 4, 0], vec![0, 2, 4, 1, 3]]),
        tri("Z/2", 2),
        tri("Z/3", 2),
        tri("Z/4", 2),
        tri("Z/2", 3),
    ]);
    out
}
