//! Quantum sets: finite-rank elements of the Q-valued universe.
//!
//! A [`QSet`] is a finite map from strictly lower-rank quantum sets to
//! projections. Nodes are hash-consed by a [`QUniverse`], so two quantum sets
//! with identical entry maps are the same node and compare equal by id.
//! Extensional equality (`⟦u = v⟧ = 1`) never merges nodes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use crate::commutator::commutator_finite;
use crate::error::{Error, Result};
use crate::lattice::{LogicContext, Projection};

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

pub type Support = BTreeSet<Projection>;

struct Node {
    id: u64,
    dim: usize,
    entries: Vec<(QSet, Projection)>,
    rank: usize,
    support: Arc<Support>,
}

/// An element of V^(Q), interned as a DAG node.
#[derive(Clone)]
pub struct QSet(Arc<Node>);

impl PartialEq for QSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for QSet {}

impl Hash for QSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for QSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl QSet {
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Entries `(x, u(x))`, sorted by the id of `x`.
    pub fn entries(&self) -> &[(QSet, Projection)] {
        &self.0.entries
    }

    pub fn domain(&self) -> impl Iterator<Item = &QSet> {
        self.0.entries.iter().map(|(k, _)| k)
    }

    /// `u(x)` for `x ∈ dom(u)`.
    pub fn value(&self, key: &QSet) -> Option<&Projection> {
        self.0
            .entries
            .binary_search_by_key(&key.id(), |(k, _)| k.id())
            .ok()
            .map(|i| &self.0.entries[i].1)
    }

    /// Least `α` with `u ∈ V_{α+1}`: 0 for the empty set, otherwise one more
    /// than the largest key rank.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// `L(u)`: every projection occurring hereditarily in `u`, plus 0.
    pub fn support(&self) -> &Support {
        &self.0.support
    }

    pub fn is_empty(&self) -> bool {
        self.0.entries.is_empty()
    }

    /// Number of distinct nodes reachable from `self`, including itself.
    pub fn node_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(n) = stack.pop() {
            if seen.insert(n.id()) {
                stack.extend(n.domain().cloned());
            }
        }
        seen.len()
    }
}

impl fmt::Debug for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Nested `{<key, value>, ...}` form.
impl fmt::Display for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "<{k}, {v}>")?;
        }
        f.write_str("}")
    }
}

/// A hereditarily finite pure set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HFSet(BTreeSet<HFSet>);

impl HFSet {
    pub fn empty() -> Self {
        HFSet::default()
    }

    pub fn from_elements(elements: impl IntoIterator<Item = HFSet>) -> Self {
        HFSet(elements.into_iter().collect())
    }

    /// The von Neumann ordinal `n = {0, …, n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut cur = HFSet::empty();
        for _ in 0..n {
            let mut next = cur.0.clone();
            next.insert(cur);
            cur = HFSet(next);
        }
        cur
    }

    /// Ackermann decoding: `x ∈ set(n)` iff bit `code(x)` of `n` is set.
    pub fn from_ackermann(code: u64) -> Self {
        HFSet(
            (0..64)
                .filter(|b| code & (1u64 << b) != 0)
                .map(HFSet::from_ackermann)
                .collect(),
        )
    }

    /// Inverse of [`HFSet::from_ackermann`]; `None` if the code overflows.
    pub fn ackermann(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, x| {
            let b = x.ackermann()?;
            if b >= 64 {
                None
            } else {
                Some(acc | (1u64 << b))
            }
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = &HFSet> {
        self.0.iter()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Set-theoretic rank: 0 for ∅, else `sup (rank(x) + 1)`.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

type InternKey = Vec<(u64, Projection)>;

/// Interning table for quantum sets over one ambient dimension.
pub struct QUniverse {
    logic: LogicContext,
    table: RwLock<HashMap<InternKey, QSet>>,
    ordinals: RwLock<Vec<QSet>>,
}

impl QUniverse {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(QUniverse {
            logic: LogicContext::new(dim)?,
            table: RwLock::new(HashMap::new()),
            ordinals: RwLock::new(Vec::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.logic.dim()
    }

    pub fn logic(&self) -> &LogicContext {
        &self.logic
    }

    /// Number of interned nodes.
    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Builds (or finds) the quantum set with the given entries.
    ///
    /// Zero-valued entries are legal. Duplicate keys and projections of the
    /// wrong dimension are rejected.
    pub fn make_qset(&self, entries: Vec<(QSet, Projection)>) -> Result<QSet> {
        let dim = self.dim();
        for (k, v) in &entries {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch(dim, v.dim()));
            }
            if k.dim() != dim {
                return Err(Error::DimensionMismatch(dim, k.dim()));
            }
        }
        let mut entries: Vec<(QSet, Projection)> = entries
            .into_iter()
            .map(|(k, v)| (k, self.logic.intern(v)))
            .collect();
        entries.sort_by_key(|(k, _)| k.id());
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateKey);
        }
        Ok(self.intern_sorted(entries))
    }

    fn intern_sorted(&self, entries: Vec<(QSet, Projection)>) -> QSet {
        let key: InternKey = entries.iter().map(|(k, v)| (k.id(), v.clone())).collect();
        if let Some(q) = self.table.read().unwrap().get(&key) {
            return q.clone();
        }
        let mut table = self.table.write().unwrap();
        if let Some(q) = table.get(&key) {
            return q.clone();
        }
        let rank = entries.iter().map(|(k, _)| k.rank() + 1).max().unwrap_or(0);
        let mut support: Support = BTreeSet::new();
        support.insert(self.logic.zero());
        for (k, v) in &entries {
            support.extend(k.support().iter().cloned());
            support.insert(v.clone());
        }
        let node = QSet(Arc::new(Node {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            dim: self.dim(),
            entries,
            rank,
            support: Arc::new(support),
        }));
        table.insert(key, node.clone());
        node
    }

    pub fn empty_set(&self) -> QSet {
        self.intern_sorted(Vec::new())
    }

    /// `v̌ = {ǔ | u ∈ v} × {1}`.
    pub fn check_embed(&self, v: &HFSet) -> QSet {
        let one = self.logic.one();
        let mut entries: Vec<(QSet, Projection)> = v
            .elements()
            .map(|x| (self.check_embed(x), one.clone()))
            .collect();
        entries.sort_by_key(|(k, _)| k.id());
        self.intern_sorted(entries)
    }

    /// Check of the von Neumann ordinal `n`.
    ///
    /// Built as `n+1 = n ∪ {n}` and cached; the tree form of `n` has `2^n`
    /// nodes, so going through [`HFSet::ordinal`] would be exponential.
    pub fn check_ordinal(&self, n: usize) -> QSet {
        if let Some(u) = self.ordinals.read().unwrap().get(n) {
            return u.clone();
        }
        let mut ordinals = self.ordinals.write().unwrap();
        if ordinals.is_empty() {
            ordinals.push(self.empty_set());
        }
        let one = self.logic.one();
        while ordinals.len() <= n {
            let entries = ordinals.iter().map(|k| (k.clone(), one.clone())).collect();
            ordinals.push(
                self.make_qset(entries)
                    .expect("ordinal entries are distinct"),
            );
        }
        ordinals[n].clone()
    }

    /// `u|_p = {⟨x|_p, u(x) ∧ p⟩ | x ∈ dom(u)} ∪ {⟨u, 0⟩}`.
    ///
    /// If some `x|_p` coincides with `u` itself as a node, the two entries
    /// are merged by join (the tag entry has value 0, so the other value is
    /// kept).
    pub fn restrict(&self, u: &QSet, p: &Projection) -> Result<QSet> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), p.dim()));
        }
        let p = self.logic.intern(p.clone());
        let mut memo = HashMap::new();
        Ok(self.restrict_memo(u, &p, &mut memo))
    }

    fn restrict_memo(&self, u: &QSet, p: &Projection, memo: &mut HashMap<u64, QSet>) -> QSet {
        if let Some(r) = memo.get(&u.id()) {
            return r.clone();
        }
        let mut map: HashMap<QSet, Projection> = HashMap::new();
        for (x, v) in u.entries() {
            let key = self.restrict_memo(x, p, memo);
            let val = self.logic.intern(v.meet(p));
            let merged = match map.remove(&key) {
                Some(prev) => self.logic.intern(prev.join(&val)),
                None => val,
            };
            map.insert(key, merged);
        }
        map.entry(u.clone()).or_insert_with(|| self.logic.zero());
        let mut entries: Vec<(QSet, Projection)> = map.into_iter().collect();
        entries.sort_by_key(|(k, _)| k.id());
        let r = self.intern_sorted(entries);
        memo.insert(u.id(), r.clone());
        r
    }
}

/// `L(u1, …, un)`: union of the supports.
pub fn support_many(sets: &[QSet]) -> Support {
    let mut out = BTreeSet::new();
    for u in sets {
        out.extend(u.support().iter().cloned());
    }
    out
}

/// `⌣(u1, …, un) = com(L(u1, …, un))`.
pub fn qset_commutator(sets: &[QSet], dim: usize) -> Result<Projection> {
    let support: Vec<Projection> = support_many(sets).into_iter().collect();
    if support.is_empty() {
        return Ok(Projection::one(dim));
    }
    commutator_finite(&support)
}
