//! The divisibility predicate `Ψ(α, β, δ, a)` over a real quadratic order.
//!
//! `B` is the torsion-free subgroup `(O^×)^k` with `k` the torsion order. The
//! exponent `s` and the unit `λ` are explicit parameters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElem};
use crate::units::unit_group;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjunct {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub value: bool,
    pub conjuncts: Vec<Conjunct>,
}

#[derive(Clone, Debug)]
pub struct PsiInput {
    pub s: u32,
    pub lambda: RingElem,
    pub alpha: RingElem,
    pub beta: RingElem,
    pub delta: RingElem,
    pub a: RingElem,
}

/// `d | x`, where a zero divisor `d = 0` divides only `0`.
fn divides_or_zero(o: &RingDescriptor, d: &RingElem, x: &RingElem) -> Result<bool> {
    if o.is_zero(d) {
        return Ok(o.is_zero(x));
    }
    o.divides(d, x)
}

/// Evaluates every conjunct of
/// `α,β,δ ∈ B ∧ α ≠ 1 ∧ δ ≠ 1 ∧ ⋀_{i≤s} (αλ^i − 1 | δ − 1) ∧ (1 + (β−1)α | a)`.
pub fn eval_psi(o: &RingDescriptor, input: &PsiInput) -> Result<PsiReport> {
    let d = match o {
        RingDescriptor::QuadraticOrder(d) => d,
        _ => return Err(Error::InvalidParameter(format!("{o} is not a real quadratic order"))),
    };
    if *d < 2.into() {
        return Err(Error::InvalidParameter(format!("{o} is not a real quadratic order")));
    }
    if input.s == 0 {
        return Err(Error::InvalidParameter("s must be positive".into()));
    }
    let units = unit_group(o);
    let PsiInput { s, lambda, alpha, beta, delta, a } = input;
    for x in [lambda, alpha, beta, delta, a] {
        if !o.contains(x) {
            return Err(Error::InvalidParameter(format!("{} is not in {o}", o.format_elem(x))));
        }
    }
    if !o.is_unit(lambda) || !units.decompose(lambda)?.free_exps.values().any(|e| *e != 0.into()) {
        return Err(Error::InvalidParameter(format!("λ = {} is not a non-torsion unit", o.format_elem(lambda))));
    }
    for (name, x) in [("α", alpha), ("β", beta), ("δ", delta)] {
        if !o.is_unit(x) || !units.in_power_subgroup(x)? {
            return Err(Error::NotInSubgroupB(format!("{name} = {}", o.format_elem(x))));
        }
    }

    let one = o.one();
    let mut conjuncts = vec![
        Conjunct { name: "α, β, δ ∈ B".into(), holds: true },
        Conjunct { name: "α ≠ 1".into(), holds: *alpha != one },
        Conjunct { name: "δ ≠ 1".into(), holds: *delta != one },
    ];
    let dm1 = o.sub(delta, &one);
    let mut lam_i = lambda.clone();
    for i in 1..=*s {
        let m = o.sub(&o.mul(alpha, &lam_i), &one);
        conjuncts.push(Conjunct { name: format!("αλ^{i} − 1 | δ − 1"), holds: divides_or_zero(o, &m, &dm1)? });
        lam_i = o.mul(&lam_i, lambda);
    }
    let m = o.add(&one, &o.mul(&o.sub(beta, &one), alpha));
    conjuncts.push(Conjunct { name: "1 + (β − 1)α | a".into(), holds: divides_or_zero(o, &m, a)? });
    Ok(PsiReport { value: conjuncts.iter().all(|c| c.holds), conjuncts })
}
