//! Named projections and quantum sets, and the JSON universe file they load
//! from and save to.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "projections": { "P": {"span": [["1","0"]]}, "Q": {"span": [["1","1"]]} },
//!   "qsets": { "u": [["check:0", "P"]], "v": [["check:0", "Q"]] },
//!   "formulas": { "exists_side": "E x in u . !!x in v" }
//! }
//! ```
//!
//! Quantum sets must be listed in dependency order: an entry key is either
//! an earlier qset name or `check:n`. Entry values name a projection, or are
//! one of the keywords `full` / `zero`. The constants `check:0` … `check:4`
//! are always available.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Projection;
use crate::linalg::parse_rational;
use crate::universe::{QSet, QUniverse};

/// Largest `n` accepted in a `check:n` reference.
pub const MAX_CHECK_ORDINAL: usize = 16;

/// Built-in check constants that need no declaration.
pub const BUILTIN_CHECKS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProjectionSpec {
    /// `"full"` or `"zero"`.
    Keyword(String),
    Span {
        span: Vec<Vec<String>>,
    },
}

impl ProjectionSpec {
    pub fn from_projection(p: &Projection) -> Self {
        if p.is_one() {
            ProjectionSpec::Keyword("full".into())
        } else {
            ProjectionSpec::Span {
                span: p.basis_strings(),
            }
        }
    }

    pub fn to_projection(&self, dim: usize) -> Result<Projection> {
        match self {
            ProjectionSpec::Keyword(k) if k == "full" => Ok(Projection::one(dim)),
            ProjectionSpec::Keyword(k) if k == "zero" => Ok(Projection::zero(dim)),
            ProjectionSpec::Keyword(k) => Err(Error::InvalidUniverse(format!(
                "unknown projection keyword `{k}`"
            ))),
            ProjectionSpec::Span { span } => {
                let vectors = span
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|s| parse_rational(s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Projection::from_span(vectors, dim)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseFile {
    pub dimension: usize,
    #[serde(default)]
    pub projections: IndexMap<String, ProjectionSpec>,
    #[serde(default)]
    pub qsets: IndexMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub formulas: IndexMap<String, String>,
}

impl UniverseFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidUniverse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("universe files always serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidUniverse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Parses `check:n`.
pub fn parse_check_name(name: &str) -> Option<usize> {
    name.strip_prefix("check:")?.parse().ok()
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !matches!(name, "A" | "E" | "in" | "full" | "zero")
        && !name.starts_with("check:")
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// The constants of L(∈, V^(Q)) for one ambient space.
#[derive(Clone)]
pub struct Environment {
    universe: Arc<QUniverse>,
    projections: IndexMap<String, Projection>,
    qsets: IndexMap<String, QSet>,
    formulas: IndexMap<String, String>,
}

impl Environment {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(Self::with_universe(Arc::new(QUniverse::new(dim)?)))
    }

    pub fn with_universe(universe: Arc<QUniverse>) -> Self {
        Environment {
            universe,
            projections: IndexMap::new(),
            qsets: IndexMap::new(),
            formulas: IndexMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.universe.dim()
    }

    pub fn universe(&self) -> &Arc<QUniverse> {
        &self.universe
    }

    pub fn projections(&self) -> &IndexMap<String, Projection> {
        &self.projections
    }

    pub fn qsets(&self) -> &IndexMap<String, QSet> {
        &self.qsets
    }

    pub fn formulas(&self) -> &IndexMap<String, String> {
        &self.formulas
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::InvalidUniverse(format!("invalid name `{name}`")));
        }
        if self.projections.contains_key(name) || self.qsets.contains_key(name) {
            return Err(Error::InvalidUniverse(format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    pub fn add_projection(&mut self, name: &str, p: Projection) -> Result<()> {
        self.check_fresh(name)?;
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), p.dim()));
        }
        let p = self.universe.logic().intern(p);
        self.projections.insert(name.to_string(), p);
        Ok(())
    }

    pub fn add_qset(&mut self, name: &str, u: QSet) -> Result<()> {
        self.check_fresh(name)?;
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), u.dim()));
        }
        self.qsets.insert(name.to_string(), u);
        Ok(())
    }

    pub fn add_formula(&mut self, name: &str, text: &str) {
        self.formulas.insert(name.to_string(), text.to_string());
    }

    /// Resolves a projection reference: a declared name, `full`, or `zero`.
    pub fn projection(&self, name: &str) -> Option<Projection> {
        match name {
            "full" => Some(self.universe.logic().one()),
            "zero" => Some(self.universe.logic().zero()),
            _ => self.projections.get(name).cloned(),
        }
    }

    /// Resolves a quantum-set constant: a declared name or `check:n`.
    pub fn qset(&self, name: &str) -> Option<QSet> {
        if let Some(u) = self.qsets.get(name) {
            return Some(u.clone());
        }
        let n = parse_check_name(name)?;
        (n <= MAX_CHECK_ORDINAL).then(|| self.universe.check_ordinal(n))
    }

    /// Name of a declared projection equal to `p`, if any.
    pub fn name_of_projection(&self, p: &Projection) -> Option<&str> {
        self.projections
            .iter()
            .find(|(_, q)| *q == p)
            .map(|(n, _)| n.as_str())
    }

    pub fn from_file(file: &UniverseFile) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidUniverse(msg);
        let dim = file.dimension;
        if dim == 0 || dim > crate::MAX_DIMENSION {
            return Err(invalid(format!(
                "dimension must be between 1 and {}, got {dim}",
                crate::MAX_DIMENSION
            )));
        }
        let mut env = Environment::new(dim)?;
        for (name, spec) in &file.projections {
            let p = spec
                .to_projection(dim)
                .map_err(|e| invalid(format!("projection `{name}`: {e}")))?;
            env.add_projection(name, p)?;
        }
        for (name, entries) in &file.qsets {
            let mut resolved = Vec::with_capacity(entries.len());
            for (key, value) in entries {
                let k = match parse_check_name(key) {
                    Some(n) if n <= MAX_CHECK_ORDINAL => env.universe.check_ordinal(n),
                    Some(_) => {
                        return Err(invalid(format!(
                            "qset `{name}`: check ordinal `{key}` too large"
                        )))
                    }
                    None => env.qsets.get(key).cloned().ok_or_else(|| {
                        invalid(format!("qset `{name}`: key `{key}` is not an earlier qset"))
                    })?,
                };
                let v = env.projection(value).ok_or_else(|| {
                    invalid(format!("qset `{name}`: unknown projection `{value}`"))
                })?;
                resolved.push((k, v));
            }
            let u = env
                .universe
                .make_qset(resolved)
                .map_err(|e| invalid(format!("qset `{name}`: {e}")))?;
            env.add_qset(name, u)?;
        }
        for (name, text) in &file.formulas {
            crate::formula::parse(text).map_err(|e| invalid(format!("formula `{name}`: {e}")))?;
            env.add_formula(name, text);
        }
        Ok(env)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_file(&UniverseFile::read(path)?)
    }

    /// Serializes the environment. Unnamed nodes reachable from named qsets
    /// get fresh `_n` names; unnamed projections get fresh `_pn` names.
    pub fn to_file(&self) -> UniverseFile {
        Serializer::new(self).run()
    }
}

struct Serializer<'a> {
    env: &'a Environment,
    projections: IndexMap<String, ProjectionSpec>,
    proj_names: HashMap<Projection, String>,
    node_names: HashMap<u64, String>,
    check_ids: HashMap<u64, usize>,
    counter: usize,
}

impl<'a> Serializer<'a> {
    fn new(env: &'a Environment) -> Self {
        let mut projections = IndexMap::new();
        let mut proj_names = HashMap::new();
        for (n, p) in &env.projections {
            projections.insert(n.clone(), ProjectionSpec::from_projection(p));
            proj_names.entry(p.clone()).or_insert_with(|| n.clone());
        }
        let mut check_ids = HashMap::new();
        for n in (0..=MAX_CHECK_ORDINAL).rev() {
            check_ids.insert(env.universe.check_ordinal(n).id(), n);
        }
        let mut node_names = HashMap::new();
        for (n, u) in &env.qsets {
            node_names.entry(u.id()).or_insert_with(|| n.clone());
        }
        Serializer {
            env,
            projections,
            proj_names,
            node_names,
            check_ids,
            counter: 0,
        }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let cand = format!("{prefix}{}", self.counter);
            if !self.env.qsets.contains_key(&cand) && !self.env.projections.contains_key(&cand) {
                return cand;
            }
        }
    }

    fn key_name(&self, k: &QSet) -> String {
        match self.check_ids.get(&k.id()) {
            Some(n) => format!("check:{n}"),
            None => self.node_names[&k.id()].clone(),
        }
    }

    fn value_name(&mut self, p: &Projection) -> String {
        if p.is_one() {
            return "full".into();
        }
        if p.is_zero() {
            return "zero".into();
        }
        if let Some(n) = self.proj_names.get(p) {
            return n.clone();
        }
        let n = self.fresh("_p");
        self.projections
            .insert(n.clone(), ProjectionSpec::from_projection(p));
        self.proj_names.insert(p.clone(), n.clone());
        n
    }

    fn render(&mut self, u: &QSet) -> Vec<(String, String)> {
        u.entries()
            .iter()
            .map(|(k, v)| (self.key_name(k), self.value_name(v)))
            .collect()
    }

    fn run(mut self) -> UniverseFile {
        // Every non-check node reachable from a named qset needs a definition.
        let mut pending: Vec<QSet> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack: Vec<QSet> = self.env.qsets.values().cloned().collect();
        while let Some(u) = stack.pop() {
            if !seen.insert(u.id()) {
                continue;
            }
            for k in u.domain() {
                if !self.check_ids.contains_key(&k.id()) {
                    stack.push(k.clone());
                }
            }
            pending.push(u);
        }
        pending.sort_by_key(|u| (u.rank(), u.id()));

        let mut qsets: IndexMap<String, Vec<(String, String)>> = IndexMap::new();
        for u in &pending {
            let name = match self.node_names.get(&u.id()) {
                Some(n) => n.clone(),
                None => {
                    let n = self.fresh("_");
                    self.node_names.insert(u.id(), n.clone());
                    n
                }
            };
            let entries = self.render(u);
            qsets.insert(name, entries);
        }
        // Further names bound to an already emitted node.
        for (name, u) in &self.env.qsets {
            if !qsets.contains_key(name) {
                let entries = self.render(u);
                qsets.insert(name.clone(), entries);
            }
        }
        UniverseFile {
            dimension: self.env.dim(),
            projections: self.projections,
            qsets,
            formulas: self.env.formulas.clone(),
        }
    }
}

/// The dimension-2 universe used by the De Morgan counterexample:
/// `P = span{(1,0)}`, `Q = span{(1,1)}`, `u = {<0̌, P>}`, `v = {<0̌, Q>}`.
pub fn counterexample_environment() -> Environment {
    let file = UniverseFile::from_json(COUNTEREXAMPLE_JSON).expect("built-in universe parses");
    Environment::from_file(&file).expect("built-in universe is valid")
}

pub const COUNTEREXAMPLE_JSON: &str = r#"{
  "dimension": 2,
  "projections": {
    "P": {"span": [["1", "0"]]},
    "Q": {"span": [["1", "1"]]}
  },
  "qsets": {
    "u": [["check:0", "P"]],
    "v": [["check:0", "Q"]]
  },
  "formulas": {
    "exists_not_phi": "E x in u . !!x in v",
    "not_forall_phi": "!(A x in u . !x in v)"
  }
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_counterexample() {
        let env = counterexample_environment();
        assert_eq!(env.dim(), 2);
        let u = env.qset("u").unwrap();
        assert_eq!(u.rank(), 1);
        assert_eq!(
            u.value(&env.qset("check:0").unwrap()),
            env.projection("P").as_ref()
        );
        assert_eq!(env.formulas().len(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            r#"{"dimension": 9}"#,
            r#"{"dimension": 2, "projections": {"P": {"span": [["1"]]}}}"#,
            r#"{"dimension": 2, "projections": {"P": "half"}}"#,
            r#"{"dimension": 2, "qsets": {"u": [["w", "full"]]}}"#,
            r#"{"dimension": 2, "qsets": {"u": [["check:0", "P"]]}}"#,
            r#"{"dimension": 2, "qsets": {"u": [["check:0", "full"], ["check:0", "zero"]]}}"#,
            r#"{"dimension": 2, "projections": {"u": "full"}, "qsets": {"u": []}}"#,
            r#"{"dimension": 2, "formulas": {"f": "u in"}}"#,
            r#"{"dimension": 2, "qsets": {"check:9": []}}"#,
            r#"not json"#,
        ];
        for c in cases {
            let r = UniverseFile::from_json(c).and_then(|f| Environment::from_file(&f));
            assert!(
                matches!(
                    r,
                    Err(Error::InvalidUniverse(_)) | Err(Error::DimensionTooLarge(_))
                ),
                "{c}"
            );
        }
    }

    #[test]
    fn zero_and_full_serialize_as_specified() {
        assert_eq!(
            serde_json::to_string(&ProjectionSpec::from_projection(&Projection::zero(2))).unwrap(),
            r#"{"span":[]}"#
        );
        assert_eq!(
            serde_json::to_string(&ProjectionSpec::from_projection(&Projection::one(2))).unwrap(),
            r#""full""#
        );
    }

    #[test]
    fn serializer_names_anonymous_nodes() {
        let mut env = counterexample_environment();
        let p = env.projection("Q").unwrap();
        let u = env.qset("u").unwrap();
        let r = env.universe().restrict(&u, &p).unwrap();
        env.add_qset("r", r.clone()).unwrap();
        let file = env.to_file();
        let back =
            Environment::from_file(&UniverseFile::from_json(&file.to_json()).unwrap()).unwrap();
        let r2 = back.qset("r").unwrap();
        assert_eq!(r2.rank(), r.rank());
        assert_eq!(r2.entries().len(), r.entries().len());
        assert!(file.qsets.keys().any(|k| k.starts_with('_')));
    }
}
