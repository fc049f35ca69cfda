//! Integer helpers shared by the ring and unit-group code.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Factor `|n|` into primes by trial division, ascending. `0` and `±1` give an empty list.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero() && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Euler's totient.
pub fn totient(m: &BigInt) -> BigInt {
    let mut phi = m.abs();
    for (p, _) in factorize(m) {
        phi = phi / &p * (&p - 1u32);
    }
    phi
}

/// Multiplicative order of `a` modulo `m` (assumes `gcd(a, m) = 1`).
pub fn mult_order(a: &BigInt, m: &BigInt) -> BigInt {
    let phi = totient(m);
    let mut ord = phi.clone();
    for (q, _) in factorize(&phi) {
        while (&ord % &q).is_zero() && a.modpow(&(&ord / &q), m).is_one() {
            ord /= &q;
        }
    }
    ord
}

/// Solve `k·y ≡ e (mod n)` for the least `y ≥ 0`, if solvable.
pub fn solve_linear_congruence(k: &BigInt, e: &BigInt, n: &BigInt) -> Option<BigInt> {
    if n.is_one() {
        return Some(BigInt::zero());
    }
    let g = k.gcd(n);
    if !e.mod_floor(&g).is_zero() {
        return None;
    }
    let n2 = n / &g;
    let k2 = (k / &g).mod_floor(&n2);
    let e2 = (e / &g).mod_floor(&n2);
    if n2.is_one() {
        return Some(BigInt::zero());
    }
    let inv = mod_inverse(&k2, &n2)?;
    Some((e2 * inv).mod_floor(&n2))
}

pub fn sign_of(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
