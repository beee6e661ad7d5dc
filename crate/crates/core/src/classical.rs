//! Two-valued Tarskian semantics over hereditarily finite sets.

use std::collections::HashMap;

use crate::env::parse_check_name;
use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::universe::HFSet;

/// Evaluates `f` in `⟨HF, ∈⟩`. Constants resolve through `bindings`, then
/// `check:n` as the ordinal `n`. Unbounded quantifiers range over `domain`.
pub fn eval_classical(
    f: &Formula,
    bindings: &HashMap<String, HFSet>,
    domain: &[HFSet],
) -> Result<bool> {
    let mut scope = Vec::new();
    Classical { bindings, domain }.eval(f, &mut scope)
}

struct Classical<'a> {
    bindings: &'a HashMap<String, HFSet>,
    domain: &'a [HFSet],
}

impl Classical<'_> {
    fn resolve(&self, t: &Term, scope: &[(String, HFSet)]) -> Result<HFSet> {
        match t {
            Term::Var(x) => scope
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::UnboundVariable(x.clone())),
            Term::Const(c) => self
                .bindings
                .get(c)
                .cloned()
                .or_else(|| parse_check_name(c).map(HFSet::ordinal))
                .ok_or_else(|| Error::UnknownConstant(c.clone())),
        }
    }

    fn eval(&self, f: &Formula, scope: &mut Vec<(String, HFSet)>) -> Result<bool> {
        Ok(match f {
            Formula::Member(a, b) => {
                let (a, b) = (self.resolve(a, scope)?, self.resolve(b, scope)?);
                b.contains(&a)
            }
            Formula::Equal(a, b) => self.resolve(a, scope)? == self.resolve(b, scope)?,
            Formula::Not(g) => !self.eval(g, scope)?,
            Formula::And(a, b) => self.eval(a, scope)? && self.eval(b, scope)?,
            Formula::Or(a, b) => self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Implies(a, b) => !self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Iff(a, b) => self.eval(a, scope)? == self.eval(b, scope)?,
            Formula::ForAllIn(x, t, body) => {
                let bound = self.resolve(t, scope)?;
                self.all(x, bound.elements(), body, scope, true)?
            }
            Formula::ExistsIn(x, t, body) => {
                let bound = self.resolve(t, scope)?;
                !self.all(x, bound.elements(), body, scope, false)?
            }
            Formula::ForAll(x, body) => self.all(x, self.domain.iter(), body, scope, true)?,
            Formula::Exists(x, body) => !self.all(x, self.domain.iter(), body, scope, false)?,
        })
    }

    /// Whether every element gives `body` the value `want`.
    fn all<'s>(
        &self,
        x: &str,
        elements: impl Iterator<Item = &'s HFSet>,
        body: &Formula,
        scope: &mut Vec<(String, HFSet)>,
        want: bool,
    ) -> Result<bool> {
        for e in elements {
            scope.push((x.to_string(), e.clone()));
            let r = self.eval(body, scope);
            scope.pop();
            if r? != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn holds(s: &str) -> bool {
        let domain: Vec<HFSet> = (0..16).map(HFSet::from_ackermann).collect();
        eval_classical(&parse(s).unwrap(), &HashMap::new(), &domain).unwrap()
    }

    #[test]
    fn ordinal_facts() {
        assert!(holds("check:0 in check:1"));
        assert!(!holds("check:1 = check:2"));
        assert!(holds("A x in check:2 . x in check:2"));
        assert!(holds("E x in check:3 . x = check:2"));
        assert!(!holds("E x in check:0 . x = x"));
        assert!(holds("A x in check:3 . !(x in x)"));
    }

    #[test]
    fn unbounded_quantifiers_use_domain() {
        assert!(holds("E x . A y in x . y in check:0 -> y = y"));
        assert!(holds("A x . !(x in check:0)"));
        assert!(!holds("A x . x in check:4"));
    }

    #[test]
    fn bindings_take_precedence() {
        let mut b = HashMap::new();
        b.insert("check:1".to_string(), HFSet::ordinal(2));
        let f = parse("check:1 = check:2").unwrap();
        assert!(eval_classical(&f, &b, &[]).unwrap());
        let g = parse("w in w").unwrap();
        assert_eq!(
            eval_classical(&g, &b, &[]),
            Err(Error::UnknownConstant("w".into()))
        );
    }
}
