//! Finite posets, chains of their order complex, and monotone maps.
//!
//! A [`Poset`] stores the full (reflexive-transitive) order relation as one
//! 64-bit mask per element, which caps the carrier at 64 elements and makes
//! closure, intervals and spread tests cheap bit arithmetic. Elements are
//! identified by their position in the input list; every enumeration in this
//! crate is ordered by those indices, so matrices built downstream are
//! reproducible across runs.

use std::fmt;
use std::sync::Arc;

use crate::rng::SplitMix64;

/// Hard cap on the number of elements; the relation is stored in u64 masks.
pub const ELEMENT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    /// Antisymmetry violated: two distinct elements below each other.
    #[error("cycle: {0} \u{2264} {1} and {1} \u{2264} {0} with {0} \u{2260} {1}")]
    Cycle(String, String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(String, String),
    #[error("poset has {0} elements, cap is {1}")]
    TooLarge(usize, usize),
    #[error("map does not assign a value to {0}")]
    MissingValue(String),
    #[error("map is not monotone: {0} \u{2264} {1} but images are not ordered")]
    NotMonotone(String, String),
    #[error("posets do not match")]
    PosetMismatch,
}

/// Index of an element within its poset's carrier list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub usize);

impl ElemId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of elements of a poset, stored as a bitmask over element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ElemSet(u64);

impl ElemSet {
    pub fn empty() -> Self {
        ElemSet(0)
    }

    pub fn singleton(a: ElemId) -> Self {
        ElemSet(1u64 << a.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, a: ElemId) -> bool {
        self.0 >> a.0 & 1 == 1
    }

    pub fn insert(&mut self, a: ElemId) {
        self.0 |= 1u64 << a.0;
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn minus(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Iterates members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = ElemId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(ElemId(i))
            }
        })
    }
}

impl FromIterator<ElemId> for ElemSet {
    fn from_iter<I: IntoIterator<Item = ElemId>>(iter: I) -> Self {
        let mut s = ElemSet::empty();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

/// A finite partially ordered set with named elements.
///
/// The relation is stored closed: `up[i]` is the mask of all `j` with
/// `e_i <= e_j` (including `i` itself), and `down` is its transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    up: Vec<u64>,
    down: Vec<u64>,
    covers: Vec<(ElemId, ElemId)>,
}

impl Poset {
    /// Builds a poset from a generating set of relations, taking the
    /// reflexive-transitive closure and rejecting cycles.
    pub fn from_relations(elements: &[&str], pairs: &[(&str, &str)]) -> Result<Poset, PosetError> {
        let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let index_pairs = pairs
            .iter()
            .map(|(a, b)| {
                let ia = names
                    .iter()
                    .position(|n| n == a)
                    .ok_or_else(|| PosetError::UnknownElement(a.to_string()))?;
                let ib = names
                    .iter()
                    .position(|n| n == b)
                    .ok_or_else(|| PosetError::UnknownElement(b.to_string()))?;
                Ok((ia, ib))
            })
            .collect::<Result<Vec<_>, PosetError>>()?;
        Poset::from_index_relations(names, &index_pairs)
    }

    /// Same as [`Poset::from_relations`] but with elements referenced by index.
    pub fn from_index_relations(
        names: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Poset, PosetError> {
        let n = names.len();
        if n > ELEMENT_CAP {
            return Err(PosetError::TooLarge(n, ELEMENT_CAP));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let mut up = vec![0u64; n];
        for (i, row) in up.iter_mut().enumerate() {
            *row |= 1 << i;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::UnknownElement(format!("#{}", a.max(b))));
            }
            up[a] |= 1 << b;
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k];
            for row in up.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(PosetError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }
        let mut down = vec![0u64; n];
        for (i, &row) in up.iter().enumerate() {
            let mut bits = row;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                down[j] |= 1 << i;
            }
        }
        let mut covers = Vec::new();
        for (a, &up_a) in up.iter().enumerate() {
            for (b, &down_b) in down.iter().enumerate() {
                if a != b && up_a >> b & 1 == 1 {
                    let between = up_a & down_b & !(1 << a) & !(1 << b);
                    if between == 0 {
                        covers.push((ElemId(a), ElemId(b)));
                    }
                }
            }
        }
        covers.sort();
        Ok(Poset {
            names,
            up,
            down,
            covers,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.len()).map(ElemId)
    }

    pub fn all(&self) -> ElemSet {
        if self.is_empty() {
            ElemSet::empty()
        } else {
            ElemSet::from_bits(u64::MAX >> (64 - self.len()))
        }
    }

    pub fn name(&self, a: ElemId) -> &str {
        &self.names[a.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<ElemId> {
        self.names.iter().position(|n| n == name).map(ElemId)
    }

    pub fn require(&self, name: &str) -> Result<ElemId, PosetError> {
        self.element(name)
            .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.up[a.0] >> b.0 & 1 == 1
    }

    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq(a, b)
    }

    /// All `b` with `a <= b`, including `a`.
    pub fn up_set(&self, a: ElemId) -> ElemSet {
        ElemSet::from_bits(self.up[a.0])
    }

    /// All `b` with `b <= a`, including `a`.
    pub fn down_set(&self, a: ElemId) -> ElemSet {
        ElemSet::from_bits(self.down[a.0])
    }

    pub fn strict_up(&self, a: ElemId) -> ElemSet {
        ElemSet::from_bits(self.up[a.0] & !(1 << a.0))
    }

    pub fn strict_down(&self, a: ElemId) -> ElemSet {
        ElemSet::from_bits(self.down[a.0] & !(1 << a.0))
    }

    /// Covering pairs `(a, b)` with `a` covered by `b`, sorted by index.
    pub fn covers(&self) -> &[(ElemId, ElemId)] {
        &self.covers
    }

    pub fn lower_covers(&self, b: ElemId) -> Vec<ElemId> {
        self.covers
            .iter()
            .filter(|&&(_, y)| y == b)
            .map(|&(x, _)| x)
            .collect()
    }

    pub fn upper_covers(&self, a: ElemId) -> Vec<ElemId> {
        self.covers
            .iter()
            .filter(|&&(x, _)| x == a)
            .map(|&(_, y)| y)
            .collect()
    }

    /// The interval `[a, c] = {b : a <= b <= c}`.
    pub fn interval(&self, a: ElemId, c: ElemId) -> Result<ElemSet, PosetError> {
        if !self.leq(a, c) {
            return Err(PosetError::NotComparable(
                self.name(a).to_string(),
                self.name(c).to_string(),
            ));
        }
        Ok(self.up_set(a).intersect(self.down_set(c)))
    }

    /// True iff `z` is a spread: closed under betweenness for its own
    /// comparable pairs. Every interval and every singleton qualifies.
    pub fn is_spread(&self, z: ElemSet) -> bool {
        for a in z.iter() {
            for c in z.intersect(self.up_set(a)).iter() {
                let between = self.up_set(a).intersect(self.down_set(c));
                if !between.is_subset_of(z) {
                    return false;
                }
            }
        }
        true
    }

    /// Indices sorted so that smaller elements come first; ties break by index.
    pub fn topo_order(&self) -> Vec<ElemId> {
        let mut order: Vec<ElemId> = self.elements().collect();
        order.sort_by_key(|&a| (self.down_set(a).len(), a.0));
        order
    }

    /// Dimension of the longest chain (number of strict steps).
    pub fn max_chain_dim(&self) -> usize {
        let mut height = vec![0usize; self.len()];
        for &a in &self.topo_order() {
            for b in self.strict_down(a).iter() {
                height[a.0] = height[a.0].max(height[b.0] + 1);
            }
        }
        height.into_iter().max().unwrap_or(0)
    }

    /// All chains of dimension `d` whose minimum is `a`, in lexicographic
    /// order by element indices.
    pub fn chains_with_min(&self, a: ElemId, d: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut cur = vec![a];
        self.extend_chains(&mut cur, d, &mut out);
        out
    }

    fn extend_chains(&self, cur: &mut Vec<ElemId>, d: usize, out: &mut Vec<Chain>) {
        if cur.len() == d + 1 {
            out.push(Chain {
                vertices: cur.clone(),
            });
            return;
        }
        let last = *cur.last().unwrap();
        for b in self.strict_up(last).iter() {
            cur.push(b);
            self.extend_chains(cur, d, out);
            cur.pop();
        }
    }

    /// Union of [`Poset::chains_with_min`] over `a` in `z`, ascending.
    pub fn chains_with_min_in(&self, z: ElemSet, d: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        for a in z.iter() {
            out.extend(self.chains_with_min(a, d));
        }
        out
    }

    /// All chains of dimension `d` whose maximum is `a`, sorted
    /// lexicographically by element indices.
    pub fn chains_with_max(&self, a: ElemId, d: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut cur = vec![a];
        self.extend_chains_down(&mut cur, d, &mut out);
        for chain in &mut out {
            chain.vertices.reverse();
        }
        out.sort_by(|x, y| x.vertices.cmp(&y.vertices));
        out
    }

    fn extend_chains_down(&self, cur: &mut Vec<ElemId>, d: usize, out: &mut Vec<Chain>) {
        if cur.len() == d + 1 {
            out.push(Chain {
                vertices: cur.clone(),
            });
            return;
        }
        let last = *cur.last().unwrap();
        for b in self.strict_down(last).iter() {
            cur.push(b);
            self.extend_chains_down(cur, d, out);
            cur.pop();
        }
    }

    pub fn chain_label(&self, chain: &Chain) -> String {
        chain
            .vertices
            .iter()
            .map(|&v| self.name(v))
            .collect::<Vec<_>>()
            .join("<")
    }

    // -- stock shapes used by tests and the self-test catalog --

    pub fn chain(n: usize) -> Arc<Poset> {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Arc::new(Poset::from_index_relations(names, &pairs).unwrap())
    }

    pub fn antichain(n: usize) -> Arc<Poset> {
        let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        Arc::new(Poset::from_index_relations(names, &[]).unwrap())
    }

    /// `bot < x, y < top` with `x`, `y` incomparable.
    pub fn diamond() -> Arc<Poset> {
        Arc::new(
            Poset::from_relations(
                &["bot", "x", "y", "top"],
                &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
            )
            .unwrap(),
        )
    }

    /// Boolean lattice on two atoms: subsets of {1,2} by inclusion.
    pub fn boolean2() -> Arc<Poset> {
        Arc::new(
            Poset::from_relations(
                &["e", "s1", "s2", "s12"],
                &[("e", "s1"), ("e", "s2"), ("s1", "s12"), ("s2", "s12")],
            )
            .unwrap(),
        )
    }

    /// Four-element fence: v0 < v1 > v2 < v3.
    pub fn zigzag4() -> Arc<Poset> {
        Arc::new(
            Poset::from_relations(
                &["v0", "v1", "v2", "v3"],
                &[("v0", "v1"), ("v2", "v1"), ("v2", "v3")],
            )
            .unwrap(),
        )
    }
}

/// True when the two handles denote the same poset, structurally if needed.
pub fn same_poset(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A strictly increasing sequence of poset elements; a simplex of the order
/// complex. `dimension = vertices.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    vertices: Vec<ElemId>,
}

impl Chain {
    /// Validates strict ascent in `poset` order.
    pub fn new(poset: &Poset, vertices: Vec<ElemId>) -> Result<Chain, PosetError> {
        assert!(!vertices.is_empty(), "a chain has at least one vertex");
        for w in vertices.windows(2) {
            if !poset.lt(w[0], w[1]) {
                return Err(PosetError::NotComparable(
                    poset.name(w[0]).to_string(),
                    poset.name(w[1]).to_string(),
                ));
            }
        }
        Ok(Chain { vertices })
    }

    pub fn vertices(&self) -> &[ElemId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn min(&self) -> ElemId {
        self.vertices[0]
    }

    pub fn max(&self) -> ElemId {
        *self.vertices.last().unwrap()
    }

    /// All codimension-1 faces with the sign `(-1)^i` of the deleted index.
    pub fn facets(&self) -> Vec<(Chain, i64)> {
        if self.dim() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut vertices = self.vertices.clone();
                vertices.remove(i);
                (Chain { vertices }, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }
}

/// Codimension-1 faces of `tau` that keep `a` as their minimum, paired with
/// the sign of the deleted index. Vertex 0 (which is `a`) is never deleted.
pub fn facets_with_min(tau: &Chain, a: ElemId) -> Vec<(Chain, i64)> {
    assert_eq!(tau.min(), a, "facets_with_min requires min tau = a");
    assert!(tau.dim() >= 1);
    (1..tau.vertices.len())
        .map(|i| {
            let mut vertices = tau.vertices.clone();
            vertices.remove(i);
            (Chain { vertices }, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Codimension-1 faces of `tau` that keep `a` as their maximum: the last
/// vertex is never deleted.
pub fn facets_with_max(tau: &Chain, a: ElemId) -> Vec<(Chain, i64)> {
    assert_eq!(tau.max(), a, "facets_with_max requires max tau = a");
    assert!(tau.dim() >= 1);
    (0..tau.vertices.len() - 1)
        .map(|i| {
            let mut vertices = tau.vertices.clone();
            vertices.remove(i);
            (Chain { vertices }, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// A monotone function between two posets, total on the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<Poset>,
    target: Arc<Poset>,
    values: Vec<ElemId>,
}

impl MonotoneMap {
    pub fn new(
        source: Arc<Poset>,
        target: Arc<Poset>,
        values: Vec<ElemId>,
    ) -> Result<MonotoneMap, PosetError> {
        if values.len() != source.len() {
            let at = values.len().min(source.len().saturating_sub(1));
            let missing = source.name(ElemId(at));
            return Err(PosetError::MissingValue(missing.to_string()));
        }
        if let Some((a, b)) = monotonicity_violation(&values, &source, &target) {
            return Err(PosetError::NotMonotone(
                source.name(a).to_string(),
                source.name(b).to_string(),
            ));
        }
        Ok(MonotoneMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(poset: &Arc<Poset>) -> MonotoneMap {
        MonotoneMap {
            source: Arc::clone(poset),
            target: Arc::clone(poset),
            values: poset.elements().collect(),
        }
    }

    pub fn source(&self) -> &Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Poset> {
        &self.target
    }

    pub fn apply(&self, a: ElemId) -> ElemId {
        self.values[a.0]
    }

    pub fn values(&self) -> &[ElemId] {
        &self.values
    }

    /// Elements of the source that map to `x`.
    pub fn fiber(&self, x: ElemId) -> ElemSet {
        self.source
            .elements()
            .filter(|&a| self.values[a.0] == x)
            .collect()
    }

    /// Composition `other` after `self` (apply `self` first).
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap, PosetError> {
        if !same_poset(&self.target, &other.source) {
            return Err(PosetError::PosetMismatch);
        }
        let values = self.values.iter().map(|&v| other.apply(v)).collect();
        MonotoneMap::new(Arc::clone(&self.source), Arc::clone(&other.target), values)
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .elements()
            .map(|a| {
                format!(
                    "{}\u{21a6}{}",
                    self.source.name(a),
                    self.target.name(self.apply(a))
                )
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn monotonicity_violation(
    values: &[ElemId],
    source: &Poset,
    target: &Poset,
) -> Option<(ElemId, ElemId)> {
    for a in source.elements() {
        for b in source.elements() {
            if source.leq(a, b) && !target.leq(values[a.0], values[b.0]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// True iff the assignment `values` is monotone from `source` to `target`.
pub fn is_monotone(values: &[ElemId], source: &Poset, target: &Poset) -> bool {
    values.len() == source.len() && monotonicity_violation(values, source, target).is_none()
}

/// All monotone maps from `p` to `q`, in lexicographic order of their value
/// vectors. Enumeration assigns values in index order and prunes prefixes
/// that already violate monotonicity.
pub fn enumerate_monotone_maps(p: &Arc<Poset>, q: &Arc<Poset>) -> Vec<MonotoneMap> {
    if p.is_empty() {
        return vec![MonotoneMap {
            source: Arc::clone(p),
            target: Arc::clone(q),
            values: Vec::new(),
        }];
    }
    if q.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut values: Vec<ElemId> = Vec::with_capacity(p.len());
    extend_monotone(p, q, &mut values, &mut out);
    out
}

fn extend_monotone(
    p: &Arc<Poset>,
    q: &Arc<Poset>,
    values: &mut Vec<ElemId>,
    out: &mut Vec<MonotoneMap>,
) {
    if values.len() == p.len() {
        out.push(MonotoneMap {
            source: Arc::clone(p),
            target: Arc::clone(q),
            values: values.clone(),
        });
        return;
    }
    let i = ElemId(values.len());
    'candidates: for y in q.elements() {
        for (j, &fj) in values.iter().enumerate() {
            let ej = ElemId(j);
            if p.leq(ej, i) && !q.leq(fj, y) {
                continue 'candidates;
            }
            if p.leq(i, ej) && !q.leq(y, fj) {
                continue 'candidates;
            }
        }
        values.push(y);
        extend_monotone(p, q, values, out);
        values.pop();
    }
}

/// A random monotone map, by rejection with a constant-map fallback.
pub fn random_monotone_map(p: &Arc<Poset>, q: &Arc<Poset>, rng: &mut SplitMix64) -> MonotoneMap {
    assert!(!q.is_empty(), "target poset must be nonempty");
    for _ in 0..200 {
        let values: Vec<ElemId> = (0..p.len())
            .map(|_| ElemId(rng.below(q.len() as u64) as usize))
            .collect();
        if is_monotone(&values, p, q) {
            return MonotoneMap {
                source: Arc::clone(p),
                target: Arc::clone(q),
                values,
            };
        }
    }
    let y = ElemId(rng.below(q.len() as u64) as usize);
    MonotoneMap {
        source: Arc::clone(p),
        target: Arc::clone(q),
        values: vec![y; p.len()],
    }
}

/// A random poset with at most `max_n` elements: edges are drawn between
/// index-ordered pairs, so the result is acyclic by construction, then closed.
pub fn random_poset(max_n: usize, rng: &mut SplitMix64) -> Arc<Poset> {
    let n = 1 + rng.below(max_n as u64) as usize;
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let density = 10 + rng.below(45); // percent
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.chance(density, 100) {
                pairs.push((i, j));
            }
        }
    }
    Arc::new(Poset::from_index_relations(names, &pairs).unwrap())
}

/// A random spread of `p`, drawn as (up-set of A) intersect (down-set of B)
/// for random subsets A, B; every spread arises this way.
pub fn random_spread(p: &Arc<Poset>, rng: &mut SplitMix64) -> ElemSet {
    let mut up = ElemSet::empty();
    let mut down = ElemSet::empty();
    for a in p.elements() {
        if rng.chance(1, 2) {
            up = up.union(p.up_set(a));
        }
        if rng.chance(1, 2) {
            down = down.union(p.down_set(a));
        }
    }
    up.intersect(down)
}
