//! First-order logic over the language of groups.
//!
//! Terms and formulas keep their sugar (`[a, b, c]`, `a^b`) in the tree; the
//! evaluators interpret sugar directly and [`Term::expand`] rewrites it into
//! products and inverses.

use std::collections::BTreeSet;
use std::fmt;

pub mod eval;
pub mod library;
pub mod parser;

pub use eval::{defining_set, eval, semantic_eval, Evaluator, Model, Outcome, DEFAULT_BUDGET};
pub use parser::parse_formula;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    One,
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
    /// `[a, b] = a⁻¹b⁻¹ab`.
    Comm(Box<Term>, Box<Term>),
    /// `a^b = b⁻¹ab`.
    Conj(Box<Term>, Box<Term>),
    /// `[a₁, …, a_k]`, left-normed; a single entry is itself.
    LeftNormed(Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(name.to_string())
    }

    pub fn mul(a: Term, b: Term) -> Self {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Self {
        Term::Inv(Box::new(a))
    }

    pub fn comm(a: Term, b: Term) -> Self {
        Term::Comm(Box::new(a), Box::new(b))
    }

    pub fn conj(a: Term, b: Term) -> Self {
        Term::Conj(Box::new(a), Box::new(b))
    }

    /// Left-associated product; the empty product is `1`.
    pub fn product(items: Vec<Term>) -> Self {
        items.into_iter().reduce(Term::mul).unwrap_or(Term::One)
    }

    /// Rewrites sugar into `Mul` and `Inv`.
    pub fn expand(&self) -> Term {
        match self {
            Term::Var(_) | Term::Const(_) | Term::One => self.clone(),
            Term::Mul(a, b) => Term::mul(a.expand(), b.expand()),
            Term::Inv(a) => Term::inv(a.expand()),
            Term::Comm(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Term::product(vec![Term::inv(a.clone()), Term::inv(b.clone()), a, b])
            }
            Term::Conj(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Term::product(vec![Term::inv(b.clone()), a, b])
            }
            Term::LeftNormed(items) => {
                let mut it = items.iter();
                match it.next() {
                    None => Term::One,
                    Some(first) => it.fold(first.expand(), |acc, x| {
                        Term::comm(acc, x.clone()).expand()
                    }),
                }
            }
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::One => {}
            Term::Mul(a, b) | Term::Comm(a, b) | Term::Conj(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Inv(a) => a.vars(out),
            Term::LeftNormed(items) => items.iter().for_each(|t| t.vars(out)),
        }
    }

    fn is_primary(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_) | Term::One | Term::Comm(..) | Term::LeftNormed(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let postfix = |t: &Term, f: &mut fmt::Formatter<'_>| {
            if matches!(t, Term::Mul(..)) {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "${c}"),
            Term::One => write!(f, "1"),
            Term::Mul(a, b) => {
                write!(f, "{a} * ")?;
                postfix(b, f)
            }
            Term::Inv(a) => {
                postfix(a, f)?;
                write!(f, "^-1")
            }
            Term::Conj(a, b) => {
                postfix(a, f)?;
                if b.is_primary() {
                    write!(f, "^{b}")
                } else {
                    write!(f, "^({b})")
                }
            }
            Term::Comm(a, b) => write!(f, "[{a}, {b}]"),
            Term::LeftNormed(items) => {
                let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// Membership in a set registered with the model.
    InSet(String, Term),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn is_one(t: Term) -> Self {
        Formula::Eq(t, Term::One)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn in_set(name: &str, t: Term) -> Self {
        Formula::InSet(name.to_string(), t)
    }

    /// A single conjunct stays unwrapped.
    pub fn and(mut items: Vec<Formula>) -> Self {
        if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Formula::And(items)
        }
    }

    pub fn or(mut items: Vec<Formula>) -> Self {
        if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Formula::Or(items)
        }
    }

    pub fn forall_all(vars: &[String], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }

    pub fn exists_all(vars: &[String], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::Exists(v.clone(), Box::new(acc)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |t: &Term, bound: &Vec<String>| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Eq(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::InSet(_, t) => add(t, bound),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(items) | Formula::Or(items) => items.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of `=` and membership atoms in the tree.
    pub fn atom_count(&self) -> u64 {
        match self {
            Formula::Eq(..) | Formula::InSet(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.atom_count(),
            Formula::And(items) | Formula::Or(items) => items.iter().map(Formula::atom_count).sum(),
            Formula::Implies(a, b) => a.atom_count() + b.atom_count(),
        }
    }

    /// Names of the registered sets the formula refers to.
    pub fn set_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::InSet(name, _) = f {
                out.insert(name.clone());
            }
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.walk(visit),
            Formula::And(items) | Formula::Or(items) => items.iter().for_each(|f| f.walk(visit)),
            Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Formula::Eq(..) | Formula::InSet(..) => {}
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Implies(..) | Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Or(_) => 1,
            Formula::And(_) => 2,
            Formula::Not(_) | Formula::Eq(..) | Formula::InSet(..) => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::InSet(name, t) => write!(f, "@{name}({t})"),
            Formula::Not(a) => {
                write!(f, "!")?;
                a.write_at(f, 3)
            }
            Formula::And(items) | Formula::Or(items) => {
                let (sep, lvl) = if matches!(self, Formula::And(_)) { (" & ", 3) } else { (" | ", 2) };
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{sep}")?;
                    }
                    item.write_at(f, lvl)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " -> ")?;
                b.write_at(f, 0)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(self, Formula::Forall(..)) { "A" } else { "E" };
                write!(f, "{q} {v}. ")?;
                body.write_at(f, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
