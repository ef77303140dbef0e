//! Interaction graphs of abstract polymer systems and the cluster graphs
//! induced by polymer sequences.
//!
//! Incompatibility is the edge relation. Every polymer is incompatible with
//! itself, but that relation is never stored: the predicates special-case
//! `u == v` instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense polymer index in `0..n_polymers`.
pub type PolymerId = usize;

/// Fixed-capacity bitset over polymer indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1u64 << (i % 64)) != 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// A finite polymer system: `n` polymers and a symmetric incompatibility
/// relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    adj: Vec<Bits>,
    labels: BTreeMap<PolymerId, String>,
}

impl InteractionGraph {
    /// Builds a graph from incompatible pairs. Duplicate pairs are merged;
    /// explicit self pairs are rejected.
    pub fn new(n_polymers: usize, incompat_pairs: &[(PolymerId, PolymerId)]) -> Result<Self> {
        let mut adj = vec![Bits::new(n_polymers); n_polymers];
        for &(u, v) in incompat_pairs {
            for x in [u, v] {
                if x >= n_polymers {
                    return Err(Error::IndexOutOfRange {
                        index: x,
                        n: n_polymers,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(InteractionGraph {
            n: n_polymers,
            adj,
            labels: BTreeMap::new(),
        })
    }

    /// `n` polymers subject only to self-exclusion.
    pub fn self_excluding(n: usize) -> Self {
        Self::new(n, &[]).expect("no edges")
    }

    /// Every pair of the `n` polymers incompatible.
    pub fn complete(n: usize) -> Self {
        let pairs: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(n, &pairs).expect("valid complete graph")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &pairs).expect("valid path")
    }

    pub fn with_labels(mut self, labels: BTreeMap<PolymerId, String>) -> Result<Self> {
        if let Some(&bad) = labels.keys().find(|&&k| k >= self.n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                n: self.n,
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn labels(&self) -> &BTreeMap<PolymerId, String> {
        &self.labels
    }

    pub fn n_polymers(&self) -> usize {
        self.n
    }

    pub fn check(&self, v: PolymerId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: v,
                n: self.n,
            })
        }
    }

    /// Incompatibility including the implicit self relation.
    #[inline]
    pub fn incompatible(&self, u: PolymerId, v: PolymerId) -> bool {
        u == v || self.adj[u].contains(v)
    }

    /// False iff `u == v` or `{u, v}` is a stored incompatibility.
    pub fn are_compatible(&self, u: PolymerId, v: PolymerId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(!self.incompatible(u, v))
    }

    pub fn adjacency(&self, v: PolymerId) -> &Bits {
        &self.adj[v]
    }

    pub fn degree(&self, v: PolymerId) -> usize {
        self.adj[v].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Stored edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(PolymerId, PolymerId)> {
        (0..self.n)
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// `N*(v)`: `v` together with every polymer incompatible with it, sorted.
    pub fn closed_neighborhood(&self, v: PolymerId) -> Result<Vec<PolymerId>> {
        self.check(v)?;
        let mut out: Vec<_> = self.adj[v].iter().collect();
        let pos = out.partition_point(|&u| u < v);
        out.insert(pos, v);
        Ok(out)
    }

    /// `N(v) = N*(v) \ {v}`, sorted.
    pub fn open_neighborhood(&self, v: PolymerId) -> Result<Vec<PolymerId>> {
        self.check(v)?;
        Ok(self.adj[v].iter().collect())
    }

    /// Restriction to `subset`, relabelled densely in the order given.
    pub fn induced_subgraph(&self, subset: &[PolymerId]) -> Result<InteractionGraph> {
        for &v in subset {
            self.check(v)?;
        }
        let mut pairs = Vec::new();
        for (i, &u) in subset.iter().enumerate() {
            for (j, &v) in subset.iter().enumerate().skip(i + 1) {
                if u == v {
                    return Err(Error::SelfLoop(u));
                }
                if self.adj[u].contains(v) {
                    pairs.push((i, j));
                }
            }
        }
        InteractionGraph::new(subset.len(), &pairs)
    }

    /// Cluster graph on `0..seq.len()`: `{i, j}` is an edge iff the
    /// polymers at those positions are incompatible (so repeats are linked).
    pub fn cluster_graph(&self, seq: &[PolymerId]) -> Result<ClusterGraph> {
        if seq.is_empty() {
            return Err(Error::EmptySequence);
        }
        for &v in seq {
            self.check(v)?;
        }
        if seq.len() > ClusterGraph::MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "cluster",
                size: seq.len(),
                cap: ClusterGraph::MAX_VERTICES,
            });
        }
        let mut edges = Vec::new();
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if self.incompatible(seq[i], seq[j]) {
                    edges.push((i, j));
                }
            }
        }
        ClusterGraph::new(seq.len(), &edges)
    }

    // ----- I/O -----

    /// Parses the text format: a header `n <count>` followed by one `u v`
    /// line per incompatible pair. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    message: format!("{s:?}: {e}"),
                })
            };
            match (n, toks.as_slice()) {
                (None, ["n", count]) => n = Some(parse(count)?),
                (None, _) => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: "expected header `n <count>`".into(),
                    })
                }
                (Some(_), [u, v]) => pairs.push((parse(u)?, parse(v)?)),
                (Some(_), _) => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: "expected `u v`".into(),
                    })
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            message: "missing header `n <count>`".into(),
        })?;
        InteractionGraph::new(n, &pairs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph serializes")
    }

    /// Accepts either format, sniffing for a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

/// JSON form: `{"n": int, "edges": [[u, v], ...], "labels": {"0": "a", ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphDoc {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl From<&InteractionGraph> for GraphDoc {
    fn from(g: &InteractionGraph) -> Self {
        GraphDoc {
            n: g.n,
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: g
                .labels
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }
}

impl TryFrom<GraphDoc> for InteractionGraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        let pairs: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut labels = BTreeMap::new();
        for (k, v) in doc.labels {
            let idx = k
                .parse::<usize>()
                .map_err(|e| Error::Json(format!("label key {k:?}: {e}")))?;
            labels.insert(idx, v);
        }
        InteractionGraph::new(doc.n, &pairs)?.with_labels(labels)
    }
}

/// Simple undirected graph on at most 64 vertices, stored as adjacency
/// masks. Vertex 0 is the root when the graph comes from a pinned sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterGraph {
    n: usize,
    adj: Vec<u64>,
}

impl ClusterGraph {
    pub const MAX_VERTICES: usize = 64;

    pub fn new(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_vertices > Self::MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "cluster graph",
                size: n_vertices,
                cap: Self::MAX_VERTICES,
            });
        }
        let mut adj = vec![0u64; n_vertices];
        for &(i, j) in edges {
            for x in [i, j] {
                if x >= n_vertices {
                    return Err(Error::IndexOutOfRange {
                        index: x,
                        n: n_vertices,
                    });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(ClusterGraph { n: n_vertices, adj })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(n, &edges).expect("valid complete graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i] & (1 << j) != 0
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let mut m = self.adj[i] & !((2u64 << i) - 1);
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                m &= m - 1;
                out.push((i, j));
            }
        }
        out
    }

    pub fn n_edges(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// A single vertex counts as connected; the empty graph does not.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let full = full_mask(self.n);
        reach_from(0, full, |v| self.adj[v]) == full
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Vertices reachable from `start` inside `within`, neighbor masks given by `nb`.
#[inline]
pub(crate) fn reach_from(start: usize, within: u64, nb: impl Fn(usize) -> u64) -> u64 {
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = nb(v) & within & !seen;
        seen |= new;
        frontier |= new;
    }
    seen
}
