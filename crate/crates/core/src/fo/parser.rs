//! Recursive-descent parser for the formula DSL.
//!
//! ```text
//! phi   := imp
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "!" unary | ("A" | "E") var "." phi | "(" phi ")" | atom
//! atom  := "@" name "(" term ")" | term "=" term
//! term  := post ("*" post)*
//! post  := prim ("^" ("-1" | prim))*
//! prim  := "1" | var | "$" name | "[" term ("," term)* "]" | "(" term ")"
//! ```

use super::{Formula, Term};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    One,
    MinusOne,
    Sym(&'static str),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        if text[i..].starts_with("->") {
            out.push((start, Tok::Sym("->")));
            i += 2;
            continue;
        }
        if text[i..].starts_with("-1") {
            out.push((start, Tok::MinusOne));
            i += 2;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if &text[start..i] != "1" {
                return Err(parse_err(start, format!("unexpected number `{}`", &text[start..i])));
            }
            out.push((start, Tok::One));
            continue;
        }
        let sym = match c {
            '=' => "=",
            '!' => "!",
            '&' => "&",
            '|' => "|",
            '.' => ".",
            '@' => "@",
            '$' => "$",
            '(' => "(",
            ')' => ")",
            '[' => "[",
            ']' => "]",
            ',' => ",",
            '*' => "*",
            '^' => "^",
            _ => return Err(parse_err(start, format!("unexpected character `{c}`"))),
        };
        out.push((start, Tok::Sym(sym)));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::One => "`1`".into(),
            Tok::MinusOne => "`-1`".into(),
            Tok::Sym(s) => format!("`{s}`"),
        };
        parse_err(self.offset(), format!("{}, found {found}", msg.into()))
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.is_sym("->") {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.is_sym("|") {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(Formula::or(items))
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.is_sym("&") {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.is_sym("!") {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(q) = self.peek().clone() {
            if q == "A" || q == "E" {
                self.bump();
                let at = self.offset();
                let var = match self.bump() {
                    Tok::Ident(v) if v != "A" && v != "E" => v,
                    _ => return Err(parse_err(at, "expected a variable after the quantifier")),
                };
                if self.bound.contains(&var) {
                    return Err(parse_err(at, format!("variable `{var}` shadows an enclosing binder")));
                }
                self.expect(".")?;
                self.bound.push(var.clone());
                let body = self.formula();
                self.bound.pop();
                let body = Box::new(body?);
                return Ok(if q == "A" { Formula::Forall(var, body) } else { Formula::Exists(var, body) });
            }
        }
        if self.is_sym("(") {
            let save = self.pos;
            self.bump();
            if let Ok(f) = self.formula() {
                if self.is_sym(")") {
                    self.bump();
                    if !self.is_sym("=") && !self.is_sym("*") && !self.is_sym("^") {
                        return Ok(f);
                    }
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.is_sym("@") {
            self.bump();
            let name = match self.bump() {
                Tok::Ident(n) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected a set name after `@`"));
                }
            };
            self.expect("(")?;
            let t = self.term()?;
            self.expect(")")?;
            return Ok(Formula::InSet(name, t));
        }
        let lhs = self.term()?;
        self.expect("=")?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.postfix()?;
        while self.is_sym("*") {
            self.bump();
            t = Term::mul(t, self.postfix()?);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.primary()?;
        while self.is_sym("^") {
            self.bump();
            if *self.peek() == Tok::MinusOne {
                self.bump();
                t = Term::inv(t);
            } else {
                t = Term::conj(t, self.primary()?);
            }
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::Ident(v) if v != "A" && v != "E" => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Sym("$") => {
                self.bump();
                match self.bump() {
                    Tok::Ident(c) => Ok(Term::Const(c)),
                    _ => {
                        self.pos -= 1;
                        Err(self.error("expected a constant name after `$`"))
                    }
                }
            }
            Tok::Sym("[") => {
                self.bump();
                let mut items = vec![self.term()?];
                while self.is_sym(",") {
                    self.bump();
                    items.push(self.term()?);
                }
                self.expect("]")?;
                Ok(Term::LeftNormed(items))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// Parses one formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0, bound: Vec::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("expected end of input"));
    }
    Ok(f)
}

/// Parses a term on its own.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser { toks: lex(text)?, pos: 0, bound: Vec::new() };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return Err(p.error("expected end of input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ncl_formula() {
        let f = parse_formula("A y1. A y2. A y3. [x^y1, x^y2, x^y3] = 1").unwrap();
        let conj = |y: &str| Term::conj(Term::var("x"), Term::var(y));
        let body = Formula::is_one(Term::LeftNormed(vec![conj("y1"), conj("y2"), conj("y3")]));
        let expected = Formula::forall_all(&["y1".into(), "y2".into(), "y3".into()], body);
        assert_eq!(f, expected);
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("A y x = 1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("x = ").is_err());
        assert!(parse_formula("A x. A x. x = 1").is_err());
        assert!(parse_formula("x = 2").is_err());
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a = 1 & b = 1 | c = 1 -> d = 1").unwrap();
        assert_eq!(f.to_string(), "a = 1 & b = 1 | c = 1 -> d = 1");
        assert!(matches!(f, Formula::Implies(..)));
        let g = parse_formula("(x * y)^-1 = y^-1 * x^-1").unwrap();
        assert_eq!(g.to_string(), "(x * y)^-1 = y^-1 * x^-1");
        let h = parse_formula("(x) = 1 & !(E z. x = z * z)").unwrap();
        assert_eq!(h.to_string(), "x = 1 & !(E z. x = z * z)");
    }
}
