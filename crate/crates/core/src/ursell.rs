//! Truncated (Ursell) functions, the Penrose partition scheme, and truncated
//! series built from them.
//!
//! Two independent routes compute the connected-spanning-subgraph signed sum:
//! [`css_signed_sum`] enumerates edge subsets directly, while
//! [`connected_signed_sum`] uses a vertex-subset recursion that never looks at
//! individual subgraphs. The Penrose tree count is a third route.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{full_mask, reach_from, ClusterGraph, InteractionGraph, PolymerId};

/// Largest edge count for brute-force subgraph enumeration.
pub const DEFAULT_EDGE_CAP: usize = 24;
/// Largest vertex count for labeled-tree enumeration.
pub const DEFAULT_TREE_VERTEX_CAP: usize = 8;
/// Largest cluster handled by the vertex-subset recursion.
pub const MAX_SERIES_VERTICES: usize = 16;

/// Rooted labeled tree on `0..n`, rooted at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootedLabeledTree {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl RootedLabeledTree {
    /// `parent[0]` must be `None`; every other entry must lead back to 0.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || parent[0].is_some() {
            return Err(Error::NotSpanningTree);
        }
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        for start in 1..n {
            let mut path = vec![];
            let mut v = start;
            while depth[v] == usize::MAX {
                if path.len() > n {
                    return Err(Error::NotSpanningTree);
                }
                path.push(v);
                v = match parent[v] {
                    Some(p) if p < n => p,
                    _ => return Err(Error::NotSpanningTree),
                };
            }
            let mut d = depth[v];
            for &u in path.iter().rev() {
                d += 1;
                depth[u] = d;
            }
        }
        Ok(RootedLabeledTree { parent, depth })
    }

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![]; n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        Self::from_parents(parent).expect("edges form a tree")
    }

    pub fn n_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Tree distance to the root.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Children of `v` in increasing label order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.n_vertices())
            .filter(|&u| self.parent[u] == Some(v))
            .collect()
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p.min(v), p.max(v))))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn as_cluster_graph(&self) -> ClusterGraph {
        ClusterGraph::new(self.n_vertices(), &self.edges()).expect("tree fits")
    }
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`) into a tree.
fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

fn generate_labeled_trees(n: usize) -> Vec<RootedLabeledTree> {
    match n {
        0 => vec![],
        1 => vec![RootedLabeledTree::from_parents(vec![None]).unwrap()],
        _ => {
            let len = n - 2;
            let total = n.pow(len as u32);
            let mut out = Vec::with_capacity(total);
            let mut seq = vec![0usize; len];
            for mut code in 0..total {
                for s in seq.iter_mut() {
                    *s = code % n;
                    code /= n;
                }
                out.push(RootedLabeledTree::from_edges(n, &prufer_decode(n, &seq)));
            }
            out
        }
    }
}

/// Every labeled tree on `0..n` rooted at 0, via Prüfer sequences. Results
/// for small `n` are cached.
pub fn labeled_rooted_trees(n: usize) -> std::borrow::Cow<'static, [RootedLabeledTree]> {
    static CACHE: [OnceLock<Vec<RootedLabeledTree>>; DEFAULT_TREE_VERTEX_CAP + 1] =
        [const { OnceLock::new() }; DEFAULT_TREE_VERTEX_CAP + 1];
    if n <= DEFAULT_TREE_VERTEX_CAP {
        std::borrow::Cow::Borrowed(CACHE[n].get_or_init(|| generate_labeled_trees(n)))
    } else {
        std::borrow::Cow::Owned(generate_labeled_trees(n))
    }
}

fn is_subgraph(tree: &RootedLabeledTree, cg: &ClusterGraph) -> bool {
    tree.n_vertices() == cg.n_vertices() && tree.edges().iter().all(|&(i, j)| cg.has_edge(i, j))
}

pub fn enumerate_rooted_spanning_trees(cg: &ClusterGraph) -> Result<Vec<RootedLabeledTree>> {
    enumerate_rooted_spanning_trees_capped(cg, DEFAULT_TREE_VERTEX_CAP)
}

pub fn enumerate_rooted_spanning_trees_capped(
    cg: &ClusterGraph,
    cap: usize,
) -> Result<Vec<RootedLabeledTree>> {
    let n = cg.n_vertices();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "cluster for tree enumeration",
            size: n,
            cap,
        });
    }
    if !cg.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(labeled_rooted_trees(n)
        .iter()
        .filter(|t| is_subgraph(t, cg))
        .cloned()
        .collect())
}

/// Penrose closure `R(τ)`: adds every edge of `cg` outside `τ` that joins
/// two vertices of the same generation, or joins `j` to a vertex `i` one
/// generation closer to the root whose label is smaller than that of `j`'s
/// parent.
pub fn penrose_closure(tree: &RootedLabeledTree, cg: &ClusterGraph) -> Result<ClusterGraph> {
    if !is_subgraph(tree, cg) {
        return Err(Error::NotSpanningTree);
    }
    let mut edges = tree.edges();
    for (i, j) in cg.edges() {
        if tree.parent(i) == Some(j) || tree.parent(j) == Some(i) {
            continue;
        }
        if penrose_adds(tree, i, j) {
            edges.push((i, j));
        }
    }
    ClusterGraph::new(cg.n_vertices(), &edges)
}

fn penrose_adds(tree: &RootedLabeledTree, a: usize, b: usize) -> bool {
    let (da, db) = (tree.depth(a), tree.depth(b));
    if da == db {
        return true;
    }
    let (near, far) = if da + 1 == db {
        (a, b)
    } else if db + 1 == da {
        (b, a)
    } else {
        return false;
    };
    near < tree.parent(far).expect("non-root vertex has a parent")
}

fn is_penrose_tree(tree: &RootedLabeledTree, cg: &ClusterGraph) -> bool {
    let parent_edge = |i: usize, j: usize| tree.parent(i) == Some(j) || tree.parent(j) == Some(i);
    cg.edges()
        .into_iter()
        .all(|(i, j)| parent_edge(i, j) || !penrose_adds(tree, i, j))
}

/// Number of trees fixed by the Penrose closure.
pub fn penrose_tree_count(cg: &ClusterGraph) -> Result<u64> {
    penrose_tree_count_capped(cg, DEFAULT_TREE_VERTEX_CAP)
}

pub fn penrose_tree_count_capped(cg: &ClusterGraph, cap: usize) -> Result<u64> {
    let trees = enumerate_rooted_spanning_trees_capped(cg, cap)?;
    Ok(trees.iter().filter(|t| is_penrose_tree(t, cg)).count() as u64)
}

fn check_edge_cap(cg: &ClusterGraph, cap: usize) -> Result<Vec<(usize, usize)>> {
    let edges = cg.edges();
    let cap = cap.min(40);
    if edges.len() > cap {
        return Err(Error::CapExceeded {
            what: "edge set",
            size: edges.len(),
            cap,
        });
    }
    Ok(edges)
}

fn subset_connected(n: usize, edges: &[(usize, usize)], mask: u64) -> bool {
    let mut adj = [0u64; 64];
    let mut m = mask;
    while m != 0 {
        let k = m.trailing_zeros() as usize;
        m &= m - 1;
        let (i, j) = edges[k];
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let full = full_mask(n);
    reach_from(0, full, |v| adj[v]) == full
}

/// `Σ (-1)^{|E(G)|}` over connected spanning subgraphs `G` of `cg`, by
/// enumerating all edge subsets. Disconnected graphs are an error.
pub fn css_signed_sum(cg: &ClusterGraph) -> Result<i64> {
    css_signed_sum_capped(cg, DEFAULT_EDGE_CAP)
}

pub fn css_signed_sum_capped(cg: &ClusterGraph, edge_cap: usize) -> Result<i64> {
    if !cg.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = check_edge_cap(cg, edge_cap)?;
    let n = cg.n_vertices();
    let mut total = 0i64;
    for mask in 0..(1u64 << edges.len()) {
        if subset_connected(n, &edges, mask) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(total)
}

/// The same signed sum by recursion over vertex subsets containing vertex 0.
///
/// Summing `(-1)^{|E|}` over all spanning subgraphs of `G[S]` gives 1 if `S`
/// is independent and 0 otherwise. Splitting by the component of the lowest
/// vertex, `c(S) = [S independent] - Σ c(S∖U)` over nonempty independent
/// `U ⊆ S∖{0}`. Runs in `O(3^n)` and handles clusters far beyond the
/// brute-force edge cap. Returns 0 for disconnected graphs.
pub fn connected_signed_sum(cg: &ClusterGraph) -> Result<i64> {
    let n = cg.n_vertices();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if n > MAX_SERIES_VERTICES {
        return Err(Error::CapExceeded {
            what: "cluster",
            size: n,
            cap: MAX_SERIES_VERTICES,
        });
    }
    let adj: Vec<u64> = (0..n).map(|v| cg.neighbors(v)).collect();
    let independent = |s: u64| {
        let mut m = s;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if adj[v] & s != 0 {
                return false;
            }
        }
        true
    };
    // Index states by the mask of vertices 1..n; vertex 0 is always present.
    let rest = n - 1;
    let mut c = vec![0i64; 1 << rest];
    for r in 0..(1u64 << rest) {
        let s = (r << 1) | 1;
        let mut val = if independent(s) { 1 } else { 0 };
        // Proper nonempty submasks u of r.
        let mut u = r;
        while u != 0 {
            if independent(u << 1) {
                val -= c[(r & !u) as usize];
            }
            u = (u - 1) & r;
        }
        c[r as usize] = val;
    }
    Ok(c[(1usize << rest) - 1])
}

/// `φ^T(γ0, …, γn)` as a signed integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrsellValue(pub i64);

/// Truncated function of a polymer sequence, by brute-force edge subsets.
/// One polymer gives 1; a disconnected cluster gives 0.
pub fn ursell_coefficient(g: &InteractionGraph, seq: &[PolymerId]) -> Result<UrsellValue> {
    ursell_coefficient_capped(g, seq, DEFAULT_EDGE_CAP)
}

pub fn ursell_coefficient_capped(
    g: &InteractionGraph,
    seq: &[PolymerId],
    edge_cap: usize,
) -> Result<UrsellValue> {
    let cg = g.cluster_graph(seq)?;
    if seq.len() == 1 {
        return Ok(UrsellValue(1));
    }
    if !cg.is_connected() {
        return Ok(UrsellValue(0));
    }
    css_signed_sum_capped(&cg, edge_cap).map(UrsellValue)
}

/// Outcome of checking the Penrose intervals against the family of
/// connected spanning subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub ok: bool,
    /// Number of connected spanning subgraphs.
    pub n_css: u64,
    /// Number of spanning trees (intervals).
    pub n_trees: u64,
    /// Sum of interval sizes.
    pub covered: u64,
    pub violations: Vec<String>,
}

/// Checks that the intervals `[τ, R(τ)]` are disjoint and cover every
/// connected spanning subgraph.
pub fn verify_partition_scheme(cg: &ClusterGraph) -> Result<PartitionReport> {
    verify_partition_scheme_capped(cg, DEFAULT_EDGE_CAP, DEFAULT_TREE_VERTEX_CAP)
}

pub fn verify_partition_scheme_capped(
    cg: &ClusterGraph,
    edge_cap: usize,
    tree_cap: usize,
) -> Result<PartitionReport> {
    const MAX_VIOLATIONS: usize = 10;
    let edges = check_edge_cap(cg, edge_cap)?;
    let trees = enumerate_rooted_spanning_trees_capped(cg, tree_cap)?;
    let n = cg.n_vertices();
    let index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let to_mask = |es: &[(usize, usize)]| es.iter().fold(0u64, |m, e| m | (1 << index[e]));

    let mut hits: HashMap<u64, u32> = HashMap::new();
    let mut violations = Vec::new();
    let mut covered = 0u64;
    for tree in &trees {
        let closure = penrose_closure(tree, cg)?;
        let lo = to_mask(&tree.edges());
        let hi = to_mask(&closure.edges());
        if lo & !hi != 0 {
            violations.push(format!("closure of {:?} drops tree edges", tree.edges()));
        }
        // Every superset of a spanning tree is connected, so the interval is
        // all masks between lo and hi.
        let free = hi & !lo;
        let mut sub = free;
        loop {
            covered += 1;
            let g = lo | sub;
            let h = hits.entry(g).or_insert(0);
            *h += 1;
            if *h == 2 && violations.len() < MAX_VIOLATIONS {
                violations.push(format!("subgraph mask {g:#x} lies in two intervals"));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    let mut n_css = 0u64;
    for mask in 0..(1u64 << edges.len()) {
        if subset_connected(n, &edges, mask) {
            n_css += 1;
            if !hits.contains_key(&mask) && violations.len() < MAX_VIOLATIONS {
                violations.push(format!("subgraph mask {mask:#x} is not covered"));
            }
        }
    }
    let ok = violations.is_empty() && covered == n_css;
    Ok(PartitionReport {
        ok,
        n_css,
        n_trees: trees.len() as u64,
        covered,
        violations,
    })
}

/// Calls `f(counts, n)` for every count vector over `k` slots summing to `n`.
pub(crate) fn for_each_composition(k: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pos: usize, left: usize, counts: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, f);
        }
    }
    if k == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut counts = vec![0; k];
    rec(0, n, &mut counts, f);
}

/// `Σ_{ordered (γ1..γn) ∈ support^n} φ^T(prefix, γ1..γn) Π w_γi / n!`, computed
/// per multiset since `φ^T` is symmetric in its arguments.
fn series_order(
    g: &InteractionGraph,
    prefix: &[PolymerId],
    support: &[PolymerId],
    w: &[f64],
    n: usize,
    signed: bool,
) -> Result<f64> {
    let mut total = 0.0;
    let mut err = None;
    for_each_composition(support.len(), n, &mut |counts| {
        if err.is_some() {
            return;
        }
        let mut seq = prefix.to_vec();
        let mut weight = 1.0;
        for (&p, &c) in support.iter().zip(counts) {
            for k in 1..=c {
                seq.push(p);
                weight *= w[p] / k as f64;
            }
        }
        if weight == 0.0 {
            return;
        }
        let value = g
            .cluster_graph(&seq)
            .and_then(|cg| connected_signed_sum(&cg));
        match value {
            Ok(v) => {
                total += weight
                    * if signed {
                        v as f64
                    } else {
                        v.unsigned_abs() as f64
                    }
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Partial sum of the pinned series `Π_{γ0}(ρ)` through order `n_max`,
/// over all polymers of `g`.
pub fn pi_truncated(
    g: &InteractionGraph,
    gamma0: PolymerId,
    rho: &[f64],
    n_max: usize,
) -> Result<f64> {
    crate::gas::check_nonneg(rho)?;
    g.check(gamma0)?;
    if rho.len() != g.n_polymers() {
        return Err(Error::LengthMismatch {
            expected: g.n_polymers(),
            got: rho.len(),
        });
    }
    if n_max + 1 > MAX_SERIES_VERTICES {
        return Err(Error::CapExceeded {
            what: "series order",
            size: n_max,
            cap: MAX_SERIES_VERTICES - 1,
        });
    }
    let support: Vec<PolymerId> = (0..g.n_polymers()).filter(|&p| rho[p] > 0.0).collect();
    let mut total = 1.0;
    for n in 1..=n_max {
        total += series_order(g, &[gamma0], &support, rho, n, false)?;
    }
    Ok(total)
}

/// Partial sum of the Mayer series of `log Ξ_Λ(z)` through order `n_max`.
pub fn mayer_log_truncated(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    z: &[f64],
    n_max: usize,
) -> Result<f64> {
    if z.len() != g.n_polymers() {
        return Err(Error::LengthMismatch {
            expected: g.n_polymers(),
            got: z.len(),
        });
    }
    if n_max > MAX_SERIES_VERTICES {
        return Err(Error::CapExceeded {
            what: "series order",
            size: n_max,
            cap: MAX_SERIES_VERTICES,
        });
    }
    let mut support: Vec<PolymerId> = lambda.to_vec();
    support.sort_unstable();
    support.dedup();
    for &p in &support {
        g.check(p)?;
    }
    support.retain(|&p| z[p] != 0.0);
    let mut total = 0.0;
    for n in 1..=n_max {
        total += series_order(g, &[], &support, z, n, true)?;
    }
    Ok(total)
}
