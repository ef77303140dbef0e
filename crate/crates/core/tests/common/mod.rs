//! Reference implementations that share no code with the library: plain
//! subset enumeration, union-find connectivity and ordered-tuple sums.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// An incompatibility graph as an adjacency matrix.
#[derive(Clone, Debug)]
pub struct Adj {
    pub n: usize,
    pub m: Vec<Vec<bool>>,
}

impl Adj {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in edges {
            m[a][b] = true;
            m[b][a] = true;
        }
        Adj { n, m }
    }

    /// Includes self-incompatibility.
    pub fn incompatible(&self, a: usize, b: usize) -> bool {
        a == b || self.m[a][b]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.m[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn has_triangle_through(&self, v: usize) -> bool {
        let nb: Vec<usize> = (0..self.n).filter(|&u| u != v && self.m[v][u]).collect();
        nb.iter()
            .any(|&a| nb.iter().any(|&b| a < b && self.m[a][b]))
    }
}

pub fn graph_of(adj: &Adj) -> polygas::InteractionGraph {
    polygas::InteractionGraph::new(adj.n, &adj.edges()).unwrap()
}

pub fn all_edge_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}

pub fn random_adj(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Adj {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Adj::new(n, &edges)
}

/// `Σ_{S ⊆ Λ independent} Π_{γ∈S} z_γ` by plain subset enumeration.
pub fn xi<T>(adj: &Adj, lambda: &[usize], z: &[T]) -> T
where
    T: Clone + Zero + One + std::ops::Mul<Output = T>,
{
    let mut total = T::zero();
    'subsets: for mask in 0..1u64 << lambda.len() {
        let members: Vec<usize> = (0..lambda.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| lambda[i])
            .collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if adj.incompatible(a, b) {
                    continue 'subsets;
                }
            }
        }
        let mut w = T::one();
        for &a in &members {
            w = w * z[a].clone();
        }
        total = total + w;
    }
    total
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("representable")
}

/// `Ξ_{Λ∖N*(γ0)}(-ρ) / Ξ_Λ(-ρ)` over all polymers, in exact arithmetic.
/// `None` when `Ξ_Λ(-ρ) ≤ 0`.
pub fn pi_volume_exact(adj: &Adj, gamma0: usize, rho: &[f64]) -> Option<BigRational> {
    let neg: Vec<BigRational> = rho.iter().map(|&r| -rational(r)).collect();
    let all: Vec<usize> = (0..adj.n).collect();
    let rest: Vec<usize> = all
        .iter()
        .copied()
        .filter(|&v| !adj.incompatible(v, gamma0))
        .collect();
    let full = xi(adj, &all, &neg);
    if full <= BigRational::zero() {
        return None;
    }
    Some(xi(adj, &rest, &neg) / full)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Whether the edges selected by `mask` connect all `n` vertices.
pub fn spans_connected(n: usize, edges: &[(usize, usize)], mask: u64) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parts = n;
    for (k, &(a, b)) in edges.iter().enumerate() {
        if mask >> k & 1 == 1 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                parts -= 1;
            }
        }
    }
    parts <= 1
}

/// Edges `{i, j}` of the cluster graph of `seq`.
pub fn cluster_edges(adj: &Adj, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if adj.incompatible(seq[i], seq[j]) {
                e.push((i, j));
            }
        }
    }
    e
}

/// `Σ_{connected spanning G} (-1)^{|E(G)|}` over edge subsets; 0 when the
/// graph itself is disconnected.
pub fn signed_css(n: usize, edges: &[(usize, usize)]) -> i64 {
    assert!(edges.len() <= 20, "oracle limited to 20 edges");
    let mut total = 0i64;
    for mask in 0..1u64 << edges.len() {
        if spans_connected(n, edges, mask) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    total
}

pub fn ursell(adj: &Adj, seq: &[usize]) -> i64 {
    signed_css(seq.len(), &cluster_edges(adj, seq))
}

/// Calls `f` on every sequence over `0..n` of length `len`.
pub fn for_each_tuple(n: usize, len: usize, f: &mut impl FnMut(&[usize])) {
    let mut seq = vec![0usize; len];
    for mut code in 0..n.pow(len as u32) {
        for s in seq.iter_mut() {
            *s = code % n;
            code /= n;
        }
        f(&seq);
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Σ_{n ≤ n_max} (1/n!) Σ_{(γ1..γn) ∈ Λ^n} φ^T(γ1..γn) Π z` over ordered tuples.
pub fn mayer_ordered(adj: &Adj, lambda: &[usize], z: &[f64], n_max: usize) -> f64 {
    let mut total = 0.0;
    for n in 1..=n_max {
        let mut s = 0.0;
        for_each_tuple(lambda.len(), n, &mut |idx| {
            let seq: Vec<usize> = idx.iter().map(|&i| lambda[i]).collect();
            let w: f64 = seq.iter().map(|&p| z[p]).product();
            if w != 0.0 {
                s += ursell(adj, &seq) as f64 * w;
            }
        });
        total += s / factorial(n);
    }
    total
}

/// `1 + Σ_{n ≤ n_max} (1/n!) Σ_{(γ1..γn)} |φ^T(γ0, γ1..γn)| Π ρ`.
pub fn pi_ordered(adj: &Adj, gamma0: usize, rho: &[f64], n_max: usize) -> f64 {
    let mut total = 1.0;
    for n in 1..=n_max {
        let mut s = 0.0;
        for_each_tuple(adj.n, n, &mut |tail| {
            let w: f64 = tail.iter().map(|&p| rho[p]).product();
            if w != 0.0 {
                let mut seq = vec![gamma0];
                seq.extend_from_slice(tail);
                s += ursell(adj, &seq).unsigned_abs() as f64 * w;
            }
        });
        total += s / factorial(n);
    }
    total
}

/// `Ξ_{N*(γ0)}(μ)` from plain enumeration.
pub fn phi_fp(adj: &Adj, gamma0: usize, mu: &[f64]) -> f64 {
    let nb: Vec<usize> = (0..adj.n)
        .filter(|&v| adj.incompatible(v, gamma0))
        .collect();
    xi(adj, &nb, mu)
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
