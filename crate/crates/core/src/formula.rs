//! Formulas of the language L(∈, V^(Q)): AST, ASCII parser, printer,
//! desugaring of derived connectives, and the Δ0 test.
//!
//! Concrete syntax:
//!
//! ```text
//! !f   f & g   f | g   f -> g   f <-> g   s = t   s in t
//! A x in t . f    E x in t . f    A x . f    E x . f
//! ```
//!
//! Precedence from tightest: `!`, `&`, `|`, `->` (right-associative), `<->`.
//! A quantifier body extends as far to the right as possible.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A variable bound by an enclosing quantifier, or a named constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Member(Term, Term),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAllIn(String, Term, Box<Formula>),
    ForAll(String, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ExistsIn(String, Term, Box<Formula>),
    Exists(String, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

use Formula::*;

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn forall_in(var: &str, bound: Term, body: Formula) -> Formula {
        ForAllIn(var.to_string(), bound, Box::new(body))
    }

    pub fn exists_in(var: &str, bound: Term, body: Formula) -> Formula {
        ExistsIn(var.to_string(), bound, Box::new(body))
    }

    /// True iff the formula uses only `¬ ∧ → ∀∈ ∀` and atoms.
    pub fn is_primitive(&self) -> bool {
        match self {
            Member(..) | Equal(..) => true,
            Not(f) | ForAllIn(_, _, f) | ForAll(_, f) => f.is_primitive(),
            And(a, b) | Implies(a, b) => a.is_primitive() && b.is_primitive(),
            Or(..) | ExistsIn(..) | Exists(..) | Iff(..) => false,
        }
    }

    /// No unbounded quantifier `∀x` or `∃x` anywhere.
    pub fn is_delta0(&self) -> bool {
        self.first_unbounded().is_none()
    }

    /// Variable of the first unbounded quantifier found, if any.
    pub fn first_unbounded(&self) -> Option<&str> {
        match self {
            Member(..) | Equal(..) => None,
            ForAll(x, _) | Exists(x, _) => Some(x),
            Not(f) | ForAllIn(_, _, f) | ExistsIn(_, _, f) => f.first_unbounded(),
            And(a, b) | Implies(a, b) | Or(a, b) | Iff(a, b) => {
                a.first_unbounded().or_else(|| b.first_unbounded())
            }
        }
    }

    /// Names used as constants, i.e. the names a binding must supply.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        };
        match self {
            Member(a, b) | Equal(a, b) => {
                term(a);
                term(b);
            }
            ForAllIn(_, t, f) | ExistsIn(_, t, f) => {
                term(t);
                f.collect_constants(out);
            }
            Not(f) | ForAll(_, f) | Exists(_, f) => f.collect_constants(out),
            And(a, b) | Implies(a, b) | Or(a, b) | Iff(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
        }
    }

    /// Checks that every constant is in `known` and every variable is bound.
    pub fn check_bindings(&self, known: &dyn Fn(&str) -> bool) -> Result<()> {
        self.check_scoped(known, &mut Vec::new())
    }

    fn check_scoped<'a>(
        &'a self,
        known: &dyn Fn(&str) -> bool,
        scope: &mut Vec<&'a str>,
    ) -> Result<()> {
        let term = |t: &Term, scope: &[&str]| match t {
            Term::Var(v) if !scope.contains(&v.as_str()) => Err(Error::UnboundVariable(v.clone())),
            Term::Const(c) if !known(c) => Err(Error::UnknownConstant(c.clone())),
            _ => Ok(()),
        };
        match self {
            Member(a, b) | Equal(a, b) => {
                term(a, scope)?;
                term(b, scope)
            }
            ForAllIn(x, t, f) | ExistsIn(x, t, f) => {
                term(t, scope)?;
                scope.push(x);
                let r = f.check_scoped(known, scope);
                scope.pop();
                r
            }
            ForAll(x, f) | Exists(x, f) => {
                scope.push(x);
                let r = f.check_scoped(known, scope);
                scope.pop();
                r
            }
            Not(f) => f.check_scoped(known, scope),
            And(a, b) | Implies(a, b) | Or(a, b) | Iff(a, b) => {
                a.check_scoped(known, scope)?;
                b.check_scoped(known, scope)
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Member(..) | Equal(..) => 1,
            Not(f) | ForAllIn(_, _, f) | ForAll(_, f) | ExistsIn(_, _, f) | Exists(_, f) => {
                1 + f.size()
            }
            And(a, b) | Implies(a, b) | Or(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Rewrites derived connectives into the primitive core:
/// `φ∨ψ = ¬(¬φ ∧ ¬ψ)`, `∃x∈y φ = ¬∀x∈y ¬φ`, `∃x φ = ¬∀x ¬φ`, and
/// `φ↔ψ = (φ→ψ) ∧ (ψ→φ)`.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Member(..) | Equal(..) => f.clone(),
        Not(g) => Formula::not(desugar(g)),
        And(a, b) => Formula::and(desugar(a), desugar(b)),
        Implies(a, b) => Formula::implies(desugar(a), desugar(b)),
        ForAllIn(x, t, g) => ForAllIn(x.clone(), t.clone(), Box::new(desugar(g))),
        ForAll(x, g) => ForAll(x.clone(), Box::new(desugar(g))),
        Or(a, b) => Formula::not(Formula::and(
            Formula::not(desugar(a)),
            Formula::not(desugar(b)),
        )),
        ExistsIn(x, t, g) => Formula::not(ForAllIn(
            x.clone(),
            t.clone(),
            Box::new(Formula::not(desugar(g))),
        )),
        Exists(x, g) => Formula::not(ForAll(x.clone(), Box::new(Formula::not(desugar(g))))),
        Iff(a, b) => {
            let (a, b) = (desugar(a), desugar(b));
            Formula::and(
                Formula::implies(a.clone(), b.clone()),
                Formula::implies(b, a),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Eq,
    In,
    ForAllKw,
    ExistsKw,
    Dot,
    LParen,
    RParen,
    End,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == ':' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '=' => Tok::Eq,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if bytes.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '<' if bytes.get(i + 1) == Some(&'-') && bytes.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::DoubleArrow
            }
            c if is_ident_char(c) => {
                while i + 1 < bytes.len() && is_ident_char(bytes[i + 1]) {
                    i += 1;
                }
                let word: String = bytes[start..=i].iter().collect();
                match word.as_str() {
                    "in" => Tok::In,
                    "A" => Tok::ForAllKw,
                    "E" => Tok::ExistsKw,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((bytes.len(), Tok::End));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        Ok(if self.scope.contains(&name) {
            Term::Var(name)
        } else {
            Term::Const(name)
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::ForAllKw | Tok::ExistsKw => self.quantifier(),
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(_) => self.atom(),
            _ => self.fail("expected formula"),
        }
    }

    fn quantifier(&mut self) -> Result<Formula> {
        let universal = self.bump() == Tok::ForAllKw;
        let var = self.ident()?;
        let bound = if *self.peek() == Tok::In {
            self.bump();
            Some(self.term()?)
        } else {
            None
        };
        self.expect(Tok::Dot, "`.` after quantifier binder")?;
        self.scope.push(var.clone());
        let body = self.iff();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(match (universal, bound) {
            (true, Some(t)) => ForAllIn(var, t, body),
            (false, Some(t)) => ExistsIn(var, t, body),
            (true, None) => ForAll(var, body),
            (false, None) => Exists(var, body),
        })
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.bump() {
            Tok::In => Ok(Member(lhs, self.term()?)),
            Tok::Eq => Ok(Equal(lhs, self.term()?)),
            _ => {
                self.at -= 1;
                self.fail("expected `in` or `=`")
            }
        }
    }
}

/// Parses a formula. Identifiers bound by an enclosing quantifier become
/// variables; every other identifier is a constant, resolved at bind time.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        scope: Vec::new(),
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Printer

const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn write_prec(f: &Formula, min: u8, quant_ok: bool, out: &mut String) {
    let binary =
        |op: &str, prec: u8, a: &Formula, b: &Formula, left: u8, right: u8, out: &mut String| {
            let paren = prec < min;
            if paren {
                out.push('(');
            }
            write_prec(a, left, false, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write_prec(b, right, false, out);
            if paren {
                out.push(')');
            }
        };
    match f {
        Member(a, b) => {
            out.push_str(&format!("{} in {}", a.name(), b.name()));
        }
        Equal(a, b) => {
            out.push_str(&format!("{} = {}", a.name(), b.name()));
        }
        Not(g) => {
            out.push('!');
            write_prec(g, PREC_UNARY, false, out);
        }
        And(a, b) => binary("&", PREC_AND, a, b, PREC_AND, PREC_AND + 1, out),
        Or(a, b) => binary("|", PREC_OR, a, b, PREC_OR, PREC_OR + 1, out),
        Implies(a, b) => binary("->", PREC_IMP, a, b, PREC_IMP + 1, PREC_IMP, out),
        Iff(a, b) => binary("<->", PREC_IFF, a, b, PREC_IFF, PREC_IFF + 1, out),
        ForAllIn(..) | ExistsIn(..) | ForAll(..) | Exists(..) => {
            if !quant_ok {
                out.push('(');
            }
            let (kw, var, bound, body) = match f {
                ForAllIn(x, t, g) => ("A", x, Some(t), g),
                ExistsIn(x, t, g) => ("E", x, Some(t), g),
                ForAll(x, g) => ("A", x, None, g),
                Exists(x, g) => ("E", x, None, g),
                _ => unreachable!(),
            };
            out.push_str(kw);
            out.push(' ');
            out.push_str(var);
            if let Some(t) = bound {
                out.push_str(" in ");
                out.push_str(t.name());
            }
            out.push_str(" . ");
            write_prec(body, 0, true, out);
            if !quant_ok {
                out.push(')');
            }
        }
    }
}

/// Canonical concrete syntax; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_prec(f, 0, true, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::Const(n.into())
    }

    fn v(n: &str) -> Term {
        Term::Var(n.into())
    }

    #[test]
    fn parses_negated_bounded_forall() {
        let f = parse("!(A x in u . !(x in v))").unwrap();
        assert_eq!(
            f,
            Formula::not(Formula::forall_in(
                "x",
                c("u"),
                Formula::not(Member(v("x"), c("v")))
            ))
        );
    }

    #[test]
    fn parses_equality_and_bounded_exists() {
        assert_eq!(parse("u = u").unwrap(), Equal(c("u"), c("u")));
        assert_eq!(
            parse("E x in u . x = x").unwrap(),
            Formula::exists_in("x", c("u"), Equal(v("x"), v("x")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a in b & b in c | c in d -> d in e -> e in f").unwrap();
        let ab = Member(c("a"), c("b"));
        let bc = Member(c("b"), c("c"));
        let cd = Member(c("c"), c("d"));
        let de = Member(c("d"), c("e"));
        let ef = Member(c("e"), c("f"));
        assert_eq!(
            f,
            Formula::implies(
                Formula::or(Formula::and(ab, bc), cd),
                Formula::implies(de, ef)
            )
        );
        let g = parse("!a in b & c = d <-> c = d").unwrap();
        assert!(matches!(g, Iff(..)));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse("A x in u . x in v & x = x").unwrap();
        match f {
            ForAllIn(_, _, body) => assert!(matches!(*body, And(..))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shadowing_and_constants() {
        let f = parse("A x in u . E u in x . u in x").unwrap();
        assert_eq!(
            f,
            Formula::forall_in(
                "x",
                c("u"),
                Formula::exists_in("u", v("x"), Member(v("u"), v("x")))
            )
        );
        assert_eq!(
            f.constants().into_iter().collect::<Vec<_>>(),
            vec!["u".to_string()]
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse("u in"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("u v"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("A x u . x = x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(u = v"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse("u # v"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn binding_checks() {
        let f = parse("A x in u . x in w").unwrap();
        assert!(f.check_bindings(&|n| n == "u" || n == "w").is_ok());
        assert_eq!(
            f.check_bindings(&|n| n == "u"),
            Err(Error::UnknownConstant("w".into()))
        );
        let loose = Member(v("y"), c("u"));
        assert_eq!(
            loose.check_bindings(&|_| true),
            Err(Error::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn delta0_classification() {
        assert!(parse("A x in u . x in v").unwrap().is_delta0());
        assert!(!parse("A x . x = x").unwrap().is_delta0());
        assert!(!parse("u = u & E y . y in u").unwrap().is_delta0());
    }

    #[test]
    fn desugar_examples() {
        let a = parse("a in b").unwrap();
        let b = parse("b = c").unwrap();
        assert_eq!(
            desugar(&Formula::or(a.clone(), b.clone())),
            Formula::not(Formula::and(
                Formula::not(a.clone()),
                Formula::not(b.clone())
            ))
        );
        assert_eq!(
            desugar(&Formula::exists_in("x", c("u"), a.clone())),
            Formula::not(Formula::forall_in("x", c("u"), Formula::not(a.clone())))
        );
        let prim = parse("!(a in b) & (A x in u . x = x) -> a = b").unwrap();
        assert_eq!(desugar(&prim), prim);
        let iff = desugar(&Formula::iff(a.clone(), b.clone()));
        assert_eq!(
            iff,
            Formula::and(
                Formula::implies(a.clone(), b.clone()),
                Formula::implies(b, a)
            )
        );
    }

    #[test]
    fn desugar_preserves_delta0_and_is_primitive() {
        for s in [
            "E x in u . x = x | u in u",
            "u = v <-> v = u",
            "E x . x in u",
        ] {
            let f = parse(s).unwrap();
            let d = desugar(&f);
            assert!(d.is_primitive());
            assert_eq!(d.is_delta0(), f.is_delta0());
            assert_eq!(desugar(&d), d);
        }
    }

    #[test]
    fn printer_roundtrips_canonical_strings() {
        for s in [
            "!(A x in u . !x in v)",
            "u = u",
            "a in b & (b in c | c in d)",
            "(a in b -> b in c) -> c in d",
            "a in b -> b in c -> c in d",
            "(A x in u . x in v) & (A x in v . x in u)",
            "E x in u . E y in x . y = x <-> u = u",
            "u = v <-> (v = u <-> u = u)",
            "u = v <-> v = u <-> u = u",
            "!!u in v",
            "A x . E y . x in y",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(print(&f), s);
            assert_eq!(parse(&print(&f)).unwrap(), f);
        }
    }
}
