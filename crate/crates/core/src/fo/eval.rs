//! Tarskian evaluation over a finite group by quantifier expansion, and a
//! semantic evaluator that replaces recognised quantifier blocks by group
//! computations.
//!
//! The semantic shortcuts:
//! - `∀y₁…∀y_k ⋀ [a_{i₁}^{y₁}, …, a_{i_k}^{y_k}] = 1` over all index tuples
//!   holds iff the normal closure of the `a_i` is nilpotent of class `< k`;
//! - `∃x₁…x_M ∃y₁…y_M (t = [x₁,y₁]⋯[x_M,y_M])` holds iff `t` is a product of
//!   `M` commutators, read from a memoised table.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use super::{Formula, Term};
use crate::error::{Error, Result};
use crate::finite::FiniteGroup;

/// Default quantifier budget, in evaluated atoms per call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A finite group with named constants and registered definable sets.
#[derive(Debug)]
pub struct Model {
    pub group: FiniteGroup,
    pub constants: BTreeMap<String, u32>,
    sets: BTreeMap<String, Vec<bool>>,
    ncl_cache: RefCell<HashMap<Vec<u32>, Option<usize>>>,
    width_cache: RefCell<Vec<Vec<bool>>>,
}

impl Model {
    pub fn new(group: FiniteGroup) -> Self {
        Model {
            group,
            constants: BTreeMap::new(),
            sets: BTreeMap::new(),
            ncl_cache: RefCell::new(HashMap::new()),
            width_cache: RefCell::new(Vec::new()),
        }
    }

    pub fn with_constant(mut self, name: &str, elem: u32) -> Result<Self> {
        if elem as usize >= self.group.order() {
            return Err(Error::InvalidParameter(format!("constant `{name}` is not in the carrier")));
        }
        self.constants.insert(name.to_string(), elem);
        Ok(self)
    }

    pub fn register_set(&mut self, name: &str, members: &[u32]) -> Result<()> {
        let mut mask = vec![false; self.group.order()];
        for &m in members {
            *mask
                .get_mut(m as usize)
                .ok_or_else(|| Error::InvalidParameter(format!("set `{name}` has a member outside the carrier")))? = true;
        }
        self.sets.insert(name.to_string(), mask);
        Ok(())
    }

    pub fn set(&self, name: &str) -> Option<&[bool]> {
        self.sets.get(name).map(Vec::as_slice)
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Class of the normal closure of `xs`, memoised.
    fn ncl_class(&self, xs: &[u32]) -> Option<usize> {
        let mut key = xs.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(v) = self.ncl_cache.borrow().get(&key) {
            return *v;
        }
        let n = self.group.normal_closure(&key);
        let c = self.group.nilpotency_class(&n);
        self.ncl_cache.borrow_mut().insert(key, c);
        c
    }

    /// Membership mask of the products of `m` commutators.
    fn width_set(&self, m: usize) -> Vec<bool> {
        let mut cache = self.width_cache.borrow_mut();
        let g = &self.group;
        let n = g.order();
        if cache.is_empty() {
            let mut one = vec![false; n];
            one[0] = true;
            cache.push(one);
        }
        if cache.len() <= m {
            let mut comms = vec![false; n];
            for a in g.elements() {
                for b in g.elements() {
                    comms[g.commutator(a, b) as usize] = true;
                }
            }
            let comms: Vec<u32> = (0..n as u32).filter(|&c| comms[c as usize]).collect();
            while cache.len() <= m {
                let prev = cache.last().expect("non-empty");
                let mut next = vec![false; n];
                for x in (0..n as u32).filter(|&x| prev[x as usize]) {
                    for &c in &comms {
                        next[g.mul(x, c) as usize] = true;
                    }
                }
                cache.push(next);
            }
        }
        cache[m].clone()
    }
}

#[derive(Clone, Debug)]
enum CTerm {
    Slot(usize),
    Elem(u32),
    Mul(Box<CTerm>, Box<CTerm>),
    Inv(Box<CTerm>),
    Comm(Box<CTerm>, Box<CTerm>),
    Conj(Box<CTerm>, Box<CTerm>),
    LeftNormed(Vec<CTerm>),
}

#[derive(Clone, Debug)]
enum CForm {
    Eq(CTerm, CTerm),
    In(String, CTerm),
    Not(Box<CForm>),
    And(Vec<CForm>),
    Or(Vec<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Forall(usize, Box<CForm>),
    Exists(usize, Box<CForm>),
    /// Normal closure of `terms` nilpotent of class `< k`.
    Ncl(Vec<CTerm>, usize),
    /// `target` is a product of `m` commutators.
    Width(CTerm, usize),
}

/// Evaluation settings: the atom budget and whether to use the shortcuts.
#[derive(Clone, Copy, Debug)]
pub struct Evaluator {
    pub budget: u64,
    pub semantic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub value: bool,
    pub atoms: u64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator { budget: DEFAULT_BUDGET, semantic: false }
    }
}

struct Compiler<'a> {
    model: &'a Model,
    scope: Vec<String>,
    semantic: bool,
}

impl Compiler<'_> {
    fn slot(&self, v: &str) -> Result<usize> {
        self.scope
            .iter()
            .rposition(|s| s == v)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn term(&self, t: &Term) -> Result<CTerm> {
        Ok(match t {
            Term::Var(v) => CTerm::Slot(self.slot(v)?),
            Term::Const(c) => CTerm::Elem(
                *self
                    .model
                    .constants
                    .get(c)
                    .ok_or_else(|| Error::UnboundVariable(format!("${c}")))?,
            ),
            Term::One => CTerm::Elem(0),
            Term::Mul(a, b) => CTerm::Mul(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::Inv(a) => CTerm::Inv(Box::new(self.term(a)?)),
            Term::Comm(a, b) => CTerm::Comm(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::Conj(a, b) => CTerm::Conj(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::LeftNormed(items) => CTerm::LeftNormed(items.iter().map(|x| self.term(x)).collect::<Result<_>>()?),
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<CForm> {
        if self.semantic {
            if let Some(c) = self.try_ncl(f)? {
                return Ok(c);
            }
            if let Some(c) = self.try_width(f)? {
                return Ok(c);
            }
        }
        Ok(match f {
            Formula::Eq(a, b) => CForm::Eq(self.term(a)?, self.term(b)?),
            Formula::InSet(name, t) => {
                if self.model.set(name).is_none() {
                    return Err(Error::UnregisteredDefinableSet(name.clone()));
                }
                CForm::In(name.clone(), self.term(t)?)
            }
            Formula::Not(a) => CForm::Not(Box::new(self.formula(a)?)),
            Formula::And(items) => CForm::And(items.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Formula::Or(items) => CForm::Or(items.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => CForm::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                self.scope.push(v.clone());
                let slot = self.scope.len() - 1;
                let inner = self.formula(body);
                self.scope.pop();
                let inner = Box::new(inner?);
                if matches!(f, Formula::Forall(..)) {
                    CForm::Forall(slot, inner)
                } else {
                    CForm::Exists(slot, inner)
                }
            }
        })
    }

    fn try_ncl(&mut self, f: &Formula) -> Result<Option<CForm>> {
        let mut ys = Vec::new();
        let mut body = f;
        while let Formula::Forall(v, inner) = body {
            ys.push(v.clone());
            body = inner;
        }
        if ys.is_empty() {
            return Ok(None);
        }
        let atoms: Vec<&Formula> = match body {
            Formula::And(items) => items.iter().collect(),
            other => vec![other],
        };
        let k = ys.len();
        let mut bases: Vec<Term> = Vec::new();
        let mut tuples = std::collections::BTreeSet::new();
        for atom in atoms {
            let word = match atom {
                Formula::Eq(w, Term::One) | Formula::Eq(Term::One, w) => w,
                _ => return Ok(None),
            };
            let entries: Vec<&Term> = match word {
                Term::LeftNormed(items) => items.iter().collect(),
                Term::Comm(a, b) => vec![a, b],
                t @ Term::Conj(..) if k == 1 => vec![t],
                _ => return Ok(None),
            };
            if entries.len() != k {
                return Ok(None);
            }
            let mut tuple = Vec::with_capacity(k);
            for (j, e) in entries.iter().enumerate() {
                let (base, conj) = match e {
                    Term::Conj(a, b) => (a.as_ref(), b.as_ref()),
                    _ => return Ok(None),
                };
                if *conj != Term::Var(ys[j].clone()) {
                    return Ok(None);
                }
                let mut vs = std::collections::BTreeSet::new();
                base.vars(&mut vs);
                if ys.iter().any(|y| vs.contains(y)) {
                    return Ok(None);
                }
                let idx = match bases.iter().position(|b| b == base) {
                    Some(i) => i,
                    None => {
                        bases.push(base.clone());
                        bases.len() - 1
                    }
                };
                tuple.push(idx);
            }
            tuples.insert(tuple);
        }
        let full = (bases.len() as u64).checked_pow(k as u32);
        if full != Some(tuples.len() as u64) {
            return Ok(None);
        }
        let terms = bases.iter().map(|b| self.term(b)).collect::<Result<Vec<_>>>()?;
        Ok(Some(CForm::Ncl(terms, k)))
    }

    fn try_width(&mut self, f: &Formula) -> Result<Option<CForm>> {
        let mut vars = Vec::new();
        let mut body = f;
        while let Formula::Exists(v, inner) = body {
            vars.push(v.clone());
            body = inner;
        }
        if vars.is_empty() || vars.len() % 2 != 0 {
            return Ok(None);
        }
        let (a, b) = match body {
            Formula::Eq(a, b) => (a, b),
            _ => return Ok(None),
        };
        let mut seen = Vec::new();
        let uses_bound = |t: &Term| {
            let mut vs = std::collections::BTreeSet::new();
            t.vars(&mut vs);
            vars.iter().any(|v| vs.contains(v))
        };
        for (target, prod) in [(a, b), (b, a)] {
            if uses_bound(target) {
                continue;
            }
            let mut factors = Vec::new();
            flatten_product(prod, &mut factors);
            if factors.len() * 2 != vars.len() {
                continue;
            }
            seen.clear();
            let ok = factors.iter().all(|c| {
                let (u, v) = match c {
                    Term::Comm(u, v) => (u.as_ref(), v.as_ref()),
                    Term::LeftNormed(items) if items.len() == 2 => (&items[0], &items[1]),
                    _ => return false,
                };
                match (u, v) {
                    (Term::Var(u), Term::Var(v)) if vars.contains(u) && vars.contains(v) && u != v => {
                        let fresh = !seen.contains(u) && !seen.contains(v);
                        seen.push(u.clone());
                        seen.push(v.clone());
                        fresh
                    }
                    _ => false,
                }
            });
            if ok {
                return Ok(Some(CForm::Width(self.term(target)?, factors.len())));
            }
        }
        Ok(None)
    }
}

fn flatten_product<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    match t {
        Term::Mul(a, b) => {
            flatten_product(a, out);
            flatten_product(b, out);
        }
        other => out.push(other),
    }
}

struct Run<'a> {
    model: &'a Model,
    env: Vec<u32>,
    atoms: u64,
    budget: u64,
}

impl Run<'_> {
    fn term(&self, t: &CTerm) -> u32 {
        let g = &self.model.group;
        match t {
            CTerm::Slot(s) => self.env[*s],
            CTerm::Elem(e) => *e,
            CTerm::Mul(a, b) => g.mul(self.term(a), self.term(b)),
            CTerm::Inv(a) => g.inv(self.term(a)),
            CTerm::Comm(a, b) => g.commutator(self.term(a), self.term(b)),
            CTerm::Conj(a, b) => g.conj(self.term(a), self.term(b)),
            CTerm::LeftNormed(items) => {
                let xs: Vec<u32> = items.iter().map(|x| self.term(x)).collect();
                g.left_normed(&xs)
            }
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.atoms += 1;
        if self.atoms > self.budget {
            Err(Error::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn eval(&mut self, f: &CForm) -> Result<bool> {
        Ok(match f {
            CForm::Eq(a, b) => {
                self.tick()?;
                self.term(a) == self.term(b)
            }
            CForm::In(name, t) => {
                self.tick()?;
                let x = self.term(t);
                self.model.set(name).expect("checked at compile time")[x as usize]
            }
            CForm::Not(a) => !self.eval(a)?,
            CForm::And(items) => {
                for x in items {
                    if !self.eval(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            CForm::Or(items) => {
                for x in items {
                    if self.eval(x)? {
                        return Ok(true);
                    }
                }
                false
            }
            CForm::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            CForm::Forall(slot, body) | CForm::Exists(slot, body) => {
                let want = matches!(f, CForm::Exists(..));
                if self.env.len() <= *slot {
                    self.env.resize(*slot + 1, 0);
                }
                for x in 0..self.model.order() as u32 {
                    self.env[*slot] = x;
                    if self.eval(body)? == want {
                        return Ok(want);
                    }
                }
                !want
            }
            CForm::Ncl(terms, k) => {
                self.tick()?;
                let xs: Vec<u32> = terms.iter().map(|t| self.term(t)).collect();
                self.model.ncl_class(&xs).is_some_and(|c| c < *k)
            }
            CForm::Width(target, m) => {
                self.tick()?;
                let x = self.term(target);
                self.model.width_set(*m)[x as usize]
            }
        })
    }
}

impl Evaluator {
    pub fn naive() -> Self {
        Evaluator::default()
    }

    pub fn semantic() -> Self {
        Evaluator { semantic: true, ..Evaluator::default() }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Evaluator { budget, ..self }
    }

    fn compile(&self, model: &Model, f: &Formula, free: &[String]) -> Result<CForm> {
        let mut c = Compiler { model, scope: free.to_vec(), semantic: self.semantic };
        c.formula(f)
    }

    /// Truth value under `assignment`, which must bind every free variable.
    pub fn eval(&self, model: &Model, f: &Formula, assignment: &BTreeMap<String, u32>) -> Result<Outcome> {
        let free: Vec<String> = assignment.keys().cloned().collect();
        let compiled = self.compile(model, f, &free)?;
        let env: Vec<u32> = assignment.values().copied().collect();
        if env.iter().any(|&e| e as usize >= model.order()) {
            return Err(Error::InvalidParameter("assignment outside the carrier".into()));
        }
        let mut run = Run { model, env, atoms: 0, budget: self.budget };
        let value = run.eval(&compiled)?;
        Ok(Outcome { value, atoms: run.atoms })
    }

    /// Elements `x` with `M ⊨ f(x)`; `var` is the single free variable.
    pub fn defining_set(&self, model: &Model, f: &Formula, var: &str) -> Result<(Vec<u32>, u64)> {
        let compiled = self.compile(model, f, &[var.to_string()])?;
        let mut out = Vec::new();
        let mut atoms = 0;
        for x in 0..model.order() as u32 {
            let mut run = Run { model, env: vec![x], atoms: 0, budget: self.budget };
            if run.eval(&compiled)? {
                out.push(x);
            }
            atoms += run.atoms;
        }
        Ok((out, atoms))
    }
}

/// Naive evaluation with the default budget.
pub fn eval(model: &Model, f: &Formula, assignment: &BTreeMap<String, u32>) -> Result<bool> {
    Evaluator::naive().eval(model, f, assignment).map(|o| o.value)
}

/// Evaluation with the semantic shortcuts.
pub fn semantic_eval(model: &Model, f: &Formula, assignment: &BTreeMap<String, u32>) -> Result<bool> {
    Evaluator::semantic().eval(model, f, assignment).map(|o| o.value)
}

/// Defining set of a one-variable formula, naive or semantic.
pub fn defining_set(model: &Model, f: &Formula, var: &str, semantic: bool) -> Result<Vec<u32>> {
    let ev = if semantic { Evaluator::semantic() } else { Evaluator::naive() };
    ev.defining_set(model, f, var).map(|(s, _)| s)
}
