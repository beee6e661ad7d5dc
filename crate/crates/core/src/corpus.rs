//! The corpus of classically provable Δ0 formulas.
//!
//! One entry per line: `name ::= formula ::= constants ::= proof sketch`.
//! Blank lines and lines starting with `#` are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::formula::{parse, Formula};

pub const BUILTIN_CORPUS: &str = include_str!("../data/provable_delta0.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    pub source: String,
    pub constants: Vec<String>,
    pub sketch: String,
}

impl CorpusEntry {
    /// Equality-axiom instances: the entries expected to drop below 1 on
    /// noncommuting universes.
    pub fn is_equality_axiom(&self) -> bool {
        self.name.starts_with("eq_subst") || self.name == "eq_trans"
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::InvalidUniverse(format!("corpus line {}: {msg}", lineno + 1));
        let fields: Vec<&str> = line.split("::=").map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad("expected four `::=`-separated fields"));
        }
        let formula = parse(fields[1]).map_err(|e| bad(&e.to_string()))?;
        if !formula.is_delta0() {
            return Err(bad("formula is not Delta0"));
        }
        let constants: Vec<String> = fields[2]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        formula
            .check_bindings(&|n| {
                constants.iter().any(|c| c == n) || crate::env::parse_check_name(n).is_some()
            })
            .map_err(|e| bad(&e.to_string()))?;
        out.push(CorpusEntry {
            name: fields[0].to_string(),
            formula,
            source: fields[1].to_string(),
            constants,
            sketch: fields[3].to_string(),
        });
    }
    Ok(out)
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN_CORPUS).expect("shipped corpus parses")
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidUniverse(format!("{}: {e}", path.display())))?;
    parse_corpus(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_corpus_is_large_enough() {
        let c = builtin_corpus();
        assert!(c.len() >= 12);
        assert!(c.iter().any(CorpusEntry::is_equality_axiom));
        let mut names: Vec<&str> = c.iter().map(|e| e.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_corpus("a ::= u = u ::= u").is_err());
        assert!(parse_corpus("a ::= A x . x = x ::= ::= no").is_err());
        assert!(parse_corpus("a ::= u = v ::= u ::= v unbound").is_err());
        assert_eq!(parse_corpus("# only a comment\n\n").unwrap(), vec![]);
    }
}
