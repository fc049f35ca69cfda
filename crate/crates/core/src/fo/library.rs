//! Formulas of the group language used by the structural arguments.
//!
//! Variable names: free arguments are `x1, …` (or `x`, `g`), bound ones `y1, …`,
//! `g1, …`, `u1, …`, `v1, …`, so no generated formula shadows a binder.

use super::{Formula, Term};
use crate::error::{Error, Result};

/// Largest conjunction the generators will build.
pub const CONJUNCT_LIMIT: u64 = 1_000_000;

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn tuples(base: usize, len: usize) -> Result<Vec<Vec<usize>>> {
    let count = (base as u64).checked_pow(len as u32).filter(|&c| c <= CONJUNCT_LIMIT);
    let count = count.ok_or(Error::CombinatorialBlowup((base as u64).saturating_pow(len as u32)))?;
    let mut out = Vec::with_capacity(count as usize);
    let mut t = vec![0usize; len];
    loop {
        out.push(t.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < base {
                break;
            }
            t[pos] = 0;
        }
    }
}

/// `Φ_c(x₁, …, x_n)`: every left-normed commutator of length `c` in the letters
/// `x_i^{±1}` is trivial. For `c = 1` the commutators are the letters.
pub fn phi_c(vars: &[String], c: usize) -> Result<Formula> {
    if c == 0 || vars.is_empty() {
        return Err(Error::InvalidParameter("phi_c needs c >= 1 and at least one variable".into()));
    }
    let letters: Vec<Term> = vars
        .iter()
        .flat_map(|v| [Term::var(v), Term::inv(Term::var(v))])
        .collect();
    let words = tuples(letters.len(), c)?;
    let atoms = words
        .into_iter()
        .map(|t| {
            let items: Vec<Term> = t.into_iter().map(|i| letters[i].clone()).collect();
            let w = if items.len() == 1 { items[0].clone() } else { Term::LeftNormed(items) };
            Formula::is_one(w)
        })
        .collect();
    Ok(Formula::and(atoms))
}

/// `Φ_{=c} = Φ_{c+1} ∧ ¬Φ_c`: the generated subgroup has class exactly `c`.
pub fn phi_eq_c(vars: &[String], c: usize) -> Result<Formula> {
    Ok(Formula::And(vec![phi_c(vars, c + 1)?, Formula::not(phi_c(vars, c)?)]))
}

/// `Φ_{=c}(g, g₁, …, g_n)`: `g` lies in a nilpotent subgroup of class `c`
/// together with the `g_i`.
pub fn max_nilpotent_membership(c: usize, n_gens: usize) -> Result<Formula> {
    let mut vars = vec!["g".to_string()];
    vars.extend(names("g", n_gens));
    phi_eq_c(&vars, c)
}

/// `Φ_{ncl,c}(x₁, …, x_n) = ∀y₁…∀y_{c+1} ⋀ [x_{i₁}^{y₁}, …, x_{i_{c+1}}^{y_{c+1}}] = 1`.
pub fn ncl(args: &[Term], c: usize, bound_prefix: &str) -> Result<Formula> {
    if args.is_empty() {
        return Err(Error::InvalidParameter("ncl needs an argument".into()));
    }
    let ys = names(bound_prefix, c + 1);
    let atoms = tuples(args.len(), c + 1)?
        .into_iter()
        .map(|t| {
            let items: Vec<Term> = t
                .iter()
                .zip(&ys)
                .map(|(&i, y)| Term::conj(args[i].clone(), Term::var(y)))
                .collect();
            let w = if items.len() == 1 { items[0].clone() } else { Term::LeftNormed(items) };
            Formula::is_one(w)
        })
        .collect();
    Ok(Formula::forall_all(&ys, Formula::and(atoms)))
}

/// `Φ_{ncl,c}(x)`.
pub fn phi_ncl(c: usize) -> Result<Formula> {
    ncl(&[Term::var("x")], c, "y")
}

/// `Fitt_{c,k} = ∀g (Φ_{ncl,c+k}(g) → Φ_{ncl,c}(g))`.
pub fn fitt_ck(c: usize, k: usize) -> Result<Formula> {
    let g = [Term::var("g")];
    let body = Formula::implies(ncl(&g, c + k, "u")?, ncl(&g, c, "v")?);
    Ok(Formula::Forall("g".into(), Box::new(body)))
}

/// `Φ_c^* = ∀g₁…∀g_c (⋀ Φ_{ncl,c}(g_i) → Φ_{ncl,c}(g₁, …, g_c))`.
pub fn phi_c_star(c: usize) -> Result<Formula> {
    if c == 0 {
        return Err(Error::InvalidParameter("phi_c_star needs c >= 1".into()));
    }
    let gs = names("g", c);
    let singles = gs
        .iter()
        .enumerate()
        .map(|(i, g)| ncl(&[Term::var(g)], c, &format!("u{}_", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<Term> = gs.iter().map(|g| Term::var(g)).collect();
    let body = Formula::implies(Formula::and(singles), ncl(&all, c, "v")?);
    Ok(Formula::forall_all(&gs, body))
}

/// `Φ_{G′}(x) = ∃x₁…x_M ∃y₁…y_M (x = [x₁,y₁]⋯[x_M,y_M])`.
pub fn phi_gprime(m: usize) -> Result<Formula> {
    if m == 0 {
        return Err(Error::InvalidParameter("phi_gprime needs M >= 1".into()));
    }
    let xs = names("x", m);
    let ys = names("y", m);
    let prod = Term::product(
        xs.iter()
            .zip(&ys)
            .map(|(a, b)| Term::LeftNormed(vec![Term::var(a), Term::var(b)]))
            .collect(),
    );
    let body = Formula::eq(Term::var("x"), prod);
    Ok(Formula::exists_all(&xs, Formula::exists_all(&ys, body)))
}

/// `x ∈ Fitt ∧ (x ∈ G′ ∨ (x ∉ G′ ∧ x² ∈ G′))`, over registered sets `Fitt`, `G'`.
pub fn phi_gu_pm() -> Formula {
    let x = Term::var("x");
    let g = |t: Term| Formula::in_set("G'", t);
    Formula::And(vec![
        Formula::in_set("Fitt", x.clone()),
        Formula::Or(vec![
            g(x.clone()),
            Formula::And(vec![Formula::not(g(x.clone())), g(Term::mul(x.clone(), x))]),
        ]),
    ])
}

/// `Φ_D(x, d̄) = ⋀ [x, d_i] = 1` over the named constants.
pub fn phi_d(d_names: &[&str]) -> Formula {
    Formula::and(
        d_names
            .iter()
            .map(|d| Formula::is_one(Term::LeftNormed(vec![Term::var("x"), Term::constant(d)])))
            .collect(),
    )
}

/// Name of the registered set `±T_{i,i+1}`.
pub fn pm_t_name(i: usize) -> String {
    format!("pmT{i}")
}

/// `Φ_{iN} = ∀x ∈ ±T_{i,i+1} ∀y ∃z ∈ G′ (x^y = xz ∨ x^y = x⁻¹z)`.
pub fn phi_in(i: usize) -> Formula {
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    let conj = Term::conj(x.clone(), y);
    let inner = Formula::And(vec![
        Formula::in_set("G'", z.clone()),
        Formula::Or(vec![
            Formula::eq(conj.clone(), Term::mul(x.clone(), z.clone())),
            Formula::eq(conj, Term::mul(Term::inv(x.clone()), z)),
        ]),
    ]);
    let body = Formula::Forall("y".into(), Box::new(Formula::Exists("z".into(), Box::new(inner))));
    Formula::Forall("x".into(), Box::new(Formula::implies(Formula::in_set(&pm_t_name(i), x), body)))
}
