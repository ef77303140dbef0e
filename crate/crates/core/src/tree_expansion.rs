//! Tree representations of the criteria maps.
//!
//! Each criterion kind is described by vertex functions `c_n(γ0; γ1..γn)`
//! with values in `{0, 1}`, and
//! `φ_{γ0}(μ) = Σ_n (1/n!) Σ_{γ1..γn} c_n(γ0; γ1..γn) Π μ_{γi}`.
//! Iterating `T_ρ` then expands as a sum over rooted trees whose vertices
//! carry polymers, with `ρ` on inner generations and `μ` on the last one.
//! Everything here is computed from the vertex functions alone, so it checks
//! the closed forms in [`crate::criteria`] and the Ursell bounds in
//! [`crate::ursell`] independently.

use std::collections::BTreeMap;

use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::gas::check_nonneg;
use crate::graph::{InteractionGraph, PolymerId};
use crate::ursell::{for_each_composition, labeled_rooted_trees, DEFAULT_TREE_VERTEX_CAP};

/// Largest number of non-root vertices accepted by [`tree_bound_sum`].
pub const TREE_BOUND_CAP: usize = 6;

/// Default branching cut-off for the Kotecký–Preiss kind, where polymers
/// may repeat without limit.
pub const DEFAULT_KP_S_MAX: usize = 12;

/// `c_n(γ0; γ1..γn)`.
///
/// * Fernández–Procacci: every `γi ≁ γ0`, and the `γi` pairwise compatible.
/// * Dobrushin: every `γi ≁ γ0`, and the `γi` pairwise distinct.
/// * improved Dobrushin: Dobrushin, and `γi ≠ γ0` once `n ≥ 2`.
/// * Kotecký–Preiss: every `γi ≁ γ0`.
///
/// `c_0 = 1` for every kind.
pub fn vertex_function(
    kind: CriterionKind,
    g: &InteractionGraph,
    gamma0: PolymerId,
    others: &[PolymerId],
) -> Result<bool> {
    g.check(gamma0)?;
    for &p in others {
        g.check(p)?;
    }
    Ok(vertex_function_unchecked(kind, g, gamma0, others))
}

fn vertex_function_unchecked(
    kind: CriterionKind,
    g: &InteractionGraph,
    gamma0: PolymerId,
    others: &[PolymerId],
) -> bool {
    if !others.iter().all(|&p| g.incompatible(gamma0, p)) {
        return false;
    }
    let pairs_ok = |ok: &dyn Fn(PolymerId, PolymerId) -> bool| {
        others
            .iter()
            .enumerate()
            .all(|(i, &a)| others[i + 1..].iter().all(|&b| ok(a, b)))
    };
    match kind {
        CriterionKind::KoteckyPreiss => true,
        CriterionKind::Dobrushin => pairs_ok(&|a, b| a != b),
        CriterionKind::ImprovedDobrushin => {
            pairs_ok(&|a, b| a != b) && (others.len() < 2 || !others.contains(&gamma0))
        }
        CriterionKind::FernandezProcacci => pairs_ok(&|a, b| !g.incompatible(a, b)),
    }
}

/// `Σ_τ Π_v c_{s_v}(γ_v; children of v)` over labeled trees `τ` on the
/// positions of `seq` rooted at position 0. It bounds `|φ^T(seq)|` for every
/// kind.
pub fn tree_bound_sum(kind: CriterionKind, g: &InteractionGraph, seq: &[PolymerId]) -> Result<u64> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq.len() > TREE_BOUND_CAP + 1 {
        return Err(Error::CapExceeded {
            what: "tree-bound sequence",
            size: seq.len() - 1,
            cap: TREE_BOUND_CAP,
        });
    }
    for &p in seq {
        g.check(p)?;
    }
    let mut total = 0u64;
    let mut kids = Vec::with_capacity(seq.len());
    for tree in labeled_rooted_trees(seq.len()).iter() {
        let ok = (0..seq.len()).all(|v| {
            kids.clear();
            kids.extend(tree.children(v).into_iter().map(|c| seq[c]));
            vertex_function_unchecked(kind, g, seq[v], &kids)
        });
        total += ok as u64;
    }
    Ok(total)
}

/// `(n+1)^{n-1}`, the number of labeled trees on `n` non-root vertices plus
/// a root.
pub fn labeled_rooted_tree_count(n: usize) -> Result<u64> {
    if n > DEFAULT_TREE_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "labeled tree count",
            size: n,
            cap: DEFAULT_TREE_VERTEX_CAP,
        });
    }
    Ok(match n {
        0 => 1,
        _ => (n as u64 + 1).pow(n as u32 - 1),
    })
}

/// An ordered rooted tree: swapping two subtrees gives a different tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarRootedTree {
    pub children: Vec<PlanarRootedTree>,
}

impl PlanarRootedTree {
    pub fn leaf() -> Self {
        PlanarRootedTree { children: vec![] }
    }

    pub fn new(children: Vec<PlanarRootedTree>) -> Self {
        PlanarRootedTree { children }
    }

    pub fn n_vertices(&self) -> usize {
        1 + self.children.iter().map(Self::n_vertices).sum::<usize>()
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Branching factor of every vertex, keyed by its path `(0, i1, .., il)`
    /// with `ij` counted from 1.
    pub fn branching(&self) -> BTreeMap<Vec<usize>, usize> {
        fn walk(
            t: &PlanarRootedTree,
            path: &mut Vec<usize>,
            out: &mut BTreeMap<Vec<usize>, usize>,
        ) {
            out.insert(path.clone(), t.children.len());
            for (i, c) in t.children.iter().enumerate() {
                path.push(i + 1);
                walk(c, path, out);
                path.pop();
            }
        }
        let mut out = BTreeMap::new();
        walk(self, &mut vec![0], &mut out);
        out
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `β_t = |V_t|! / Π_v s_v!`, with `V_t` the non-root vertices. It counts
/// the labelings of `t` by `1..|V_t|`, divided by the orderings of each
/// sibling group.
pub fn planar_multiplicity(t: &PlanarRootedTree) -> u64 {
    let denom: u64 = t.branching().values().map(|&s| factorial(s)).product();
    factorial(t.n_vertices() - 1) / denom
}

/// Every planar rooted tree with `n` non-root vertices (Catalan many).
pub fn planar_trees(n: usize) -> Result<Vec<PlanarRootedTree>> {
    if n > DEFAULT_TREE_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "planar tree enumeration",
            size: n,
            cap: DEFAULT_TREE_VERTEX_CAP,
        });
    }
    Ok(forests(n).into_iter().map(PlanarRootedTree::new).collect())
}

/// Ordered forests with `n` vertices in total.
fn forests(n: usize) -> Vec<Vec<PlanarRootedTree>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    // First tree takes `k` vertices: a root over a forest of `k - 1`.
    for k in 1..=n {
        for first in forests(k - 1) {
            for rest in forests(n - k) {
                let mut f = Vec::with_capacity(rest.len() + 1);
                f.push(PlanarRootedTree::new(first.clone()));
                f.extend(rest);
                out.push(f);
            }
        }
    }
    out
}

/// Branching cut-off and truncation tolerance for [`iterate_via_trees`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeIterConfig {
    /// Largest branching factor enumerated. `None` picks the size of each
    /// closed neighborhood for the kinds that forbid repeats, beyond which
    /// every term vanishes, and [`DEFAULT_KP_S_MAX`] for Kotecký–Preiss.
    pub s_max: Option<usize>,
    /// Largest accepted bound on the dropped tail, relative to the value.
    pub tail_tol: f64,
}

impl Default for TreeIterConfig {
    fn default() -> Self {
        TreeIterConfig {
            s_max: None,
            tail_tol: 1e-14,
        }
    }
}

/// `φ_{γ0}(x)` summed from vertex functions, grouped by multiset. Returns
/// the value and a bound on the tail beyond `s_max`.
fn phi_from_vertex_functions(
    kind: CriterionKind,
    g: &InteractionGraph,
    gamma0: PolymerId,
    x: &[f64],
    config: &TreeIterConfig,
) -> (f64, f64) {
    let support: Vec<PolymerId> = std::iter::once(gamma0)
        .chain(g.adjacency(gamma0).iter())
        .filter(|&p| x[p] > 0.0)
        .collect();
    let repeats = kind == CriterionKind::KoteckyPreiss;
    let s_max = config.s_max.unwrap_or(if repeats {
        DEFAULT_KP_S_MAX
    } else {
        support.len()
    });
    let mut value = 0.0;
    let mut seq = Vec::new();
    for n in 0..=s_max {
        for_each_composition(support.len(), n, &mut |counts| {
            seq.clear();
            let mut w = 1.0;
            for (&p, &c) in support.iter().zip(counts) {
                for k in 1..=c {
                    seq.push(p);
                    w *= x[p] / k as f64;
                }
            }
            if vertex_function_unchecked(kind, g, gamma0, &seq) {
                value += w;
            }
        });
    }
    // Each term is dominated by its Kotecký–Preiss counterpart, whose
    // orders sum to S^n / n!.
    let tail = if !repeats && s_max >= support.len() {
        0.0
    } else {
        let s: f64 = support.iter().map(|&p| x[p]).sum();
        let mut term = 1.0;
        for k in 1..=s_max + 1 {
            term *= s / k as f64;
        }
        term * s.exp()
    };
    (value, tail)
}

/// `E_d(·, x)` for `d = 1..=depth`: `E_1 = φ(x)` and
/// `E_d = φ(ρ ⊙ E_{d-1})`. Errors if any truncation tail is too large.
fn generations(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    x: &[f64],
    depth: usize,
    config: &TreeIterConfig,
) -> Result<Vec<Vec<f64>>> {
    let n = g.n_polymers();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(depth);
    let mut input = x.to_vec();
    for _ in 0..depth {
        let mut e = vec![0.0; n];
        for (gamma, slot) in e.iter_mut().enumerate() {
            let (v, tail) = phi_from_vertex_functions(kind, g, gamma, &input, config);
            if tail > config.tail_tol * v {
                return Err(Error::Truncated {
                    s_max: config.s_max.unwrap_or(DEFAULT_KP_S_MAX),
                    tail,
                });
            }
            *slot = v;
        }
        input = rho.iter().zip(&e).map(|(r, v)| r * v).collect();
        out.push(e);
    }
    Ok(out)
}

fn check_inputs(g: &InteractionGraph, v: &[f64]) -> Result<()> {
    if v.len() != g.n_polymers() {
        return Err(Error::LengthMismatch {
            expected: g.n_polymers(),
            got: v.len(),
        });
    }
    check_nonneg(v)
}

/// `T_ρ^k(μ)` as a sum over rooted trees of depth at most `k`: the trees of
/// depth below `k` carry `ρ` on every vertex, the rest carry `μ` on
/// generation `k`. Computed one generation at a time. `k = 0` returns `μ`.
pub fn iterate_via_trees(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    k: usize,
    mu: &[f64],
    config: &TreeIterConfig,
) -> Result<Vec<f64>> {
    check_inputs(g, rho)?;
    check_inputs(g, mu)?;
    if k == 0 {
        return Ok(mu.to_vec());
    }
    let e = generations(kind, g, rho, mu, k, config)?;
    Ok(rho.iter().zip(&e[k - 1]).map(|(r, v)| r * v).collect())
}

/// `R^{(l)}(ρ)`: the trees of depth exactly `l`, all vertices weighted by
/// `ρ`. `R^{(0)} = 1`.
pub fn remainder(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    l: usize,
    config: &TreeIterConfig,
) -> Result<Vec<f64>> {
    check_inputs(g, rho)?;
    let n = g.n_polymers();
    if l == 0 {
        return Ok(vec![1.0; n]);
    }
    let e = generations(kind, g, rho, rho, l, config)?;
    let prev = if l >= 2 {
        e[l - 2].clone()
    } else {
        vec![1.0; n]
    };
    Ok(e[l - 1].iter().zip(&prev).map(|(a, b)| a - b).collect())
}

/// `R^{(k)}(ρ, μ)` for `k ≥ 1`: the trees of depth exactly `k`, weighted by
/// `μ` on generation `k` and `ρ` elsewhere, so that
/// `T^k(μ) = ρ [Σ_{l<k} R^{(l)}(ρ) + R^{(k)}(ρ, μ)]`.
pub fn remainder_with_leaves(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    mu: &[f64],
    k: usize,
    config: &TreeIterConfig,
) -> Result<Vec<f64>> {
    check_inputs(g, rho)?;
    check_inputs(g, mu)?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "leaf-weighted remainder needs depth k ≥ 1".into(),
        ));
    }
    let top = generations(kind, g, rho, mu, k, config)?;
    let prev = if k >= 2 {
        generations(kind, g, rho, rho, k - 1, config)?
            .pop()
            .expect("k - 1 ≥ 1")
    } else {
        vec![1.0; g.n_polymers()]
    };
    Ok(top[k - 1].iter().zip(&prev).map(|(a, b)| a - b).collect())
}
