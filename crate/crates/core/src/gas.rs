//! Exact finite-volume quantities of a polymer gas.
//!
//! Partition functions are sums over compatible (independent) subsets of the
//! volume, evaluated by a branching recursion on bitmasks that splits off
//! connected components as it goes. Any commutative semiring-like weight type
//! works, so the same routine gives `f64` values, exact big integers or
//! rationals, and independence polynomials.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{full_mask, reach_from, InteractionGraph, PolymerId};

/// Largest volume enumerated unless a caller raises the cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;
/// Hard ceiling imposed by the 64-bit masks.
pub const MAX_ENUMERATION_CAP: usize = 64;

/// Values the partition-function recursion can accumulate.
pub trait Weight: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Weight for T {}

/// A volume `Λ` re-indexed densely, with local adjacency masks, ready for
/// repeated evaluation at different activities.
#[derive(Clone, Debug)]
pub struct PreparedVolume {
    members: Vec<PolymerId>,
    adj: Vec<u64>,
}

impl PreparedVolume {
    pub fn new(g: &InteractionGraph, lambda: &[PolymerId], cap: usize) -> Result<Self> {
        let mut members = lambda.to_vec();
        members.sort_unstable();
        members.dedup();
        for &v in &members {
            g.check(v)?;
        }
        let cap = cap.min(MAX_ENUMERATION_CAP);
        if members.len() > cap {
            return Err(Error::CapExceeded {
                what: "volume",
                size: members.len(),
                cap,
            });
        }
        let adj = members
            .iter()
            .map(|&u| {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| v != u && g.incompatible(u, v))
                    .fold(0u64, |m, (j, _)| m | (1 << j))
            })
            .collect();
        Ok(PreparedVolume { members, adj })
    }

    pub fn members(&self) -> &[PolymerId] {
        &self.members
    }

    /// `Ξ_Λ(z)`; `z` is indexed by global polymer id.
    pub fn eval<T: Weight>(&self, z: &[T]) -> T {
        let local: Vec<T> = self.members.iter().map(|&v| z[v].clone()).collect();
        xi_rec(full_mask(self.members.len()), &self.adj, &local)
    }
}

fn xi_rec<T: Weight>(cand: u64, adj: &[u64], z: &[T]) -> T {
    if cand == 0 {
        return T::one();
    }
    let v = cand.trailing_zeros() as usize;
    let comp = reach_from(v, cand, |u| adj[u]);
    if comp != cand {
        return xi_rec(comp, adj, z) * xi_rec(cand & !comp, adj, z);
    }
    let rest = cand & !(1 << v);
    if adj[v] & rest == 0 {
        return (T::one() + z[v].clone()) * xi_rec(rest, adj, z);
    }
    xi_rec(rest, adj, z) + z[v].clone() * xi_rec(rest & !adj[v], adj, z)
}

fn check_len<T>(g: &InteractionGraph, z: &[T]) -> Result<()> {
    if z.len() == g.n_polymers() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: g.n_polymers(),
            got: z.len(),
        })
    }
}

fn check_finite(z: &[f64]) -> Result<()> {
    match z.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: z[index],
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_nonneg(z: &[f64]) -> Result<()> {
    check_finite(z)?;
    match z.iter().position(|&x| x < 0.0) {
        Some(index) => Err(Error::Negative {
            index,
            value: z[index],
        }),
        None => Ok(()),
    }
}

/// All polymers of `g`, the largest available volume.
pub fn all_polymers(g: &InteractionGraph) -> Vec<PolymerId> {
    (0..g.n_polymers()).collect()
}

/// `Ξ_Λ(z)` for any weight type. `z` is indexed by polymer id.
pub fn partition_function_with<T: Weight>(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    z: &[T],
    cap: usize,
) -> Result<T> {
    check_len(g, z)?;
    Ok(PreparedVolume::new(g, lambda, cap)?.eval(z))
}

/// `Ξ_Λ(z) = Σ_{S ⊆ Λ compatible} Π_{γ∈S} z_γ`, with `Ξ_∅ = 1`.
pub fn partition_function(g: &InteractionGraph, lambda: &[PolymerId], z: &[f64]) -> Result<f64> {
    partition_function_capped(g, lambda, z, DEFAULT_ENUMERATION_CAP)
}

pub fn partition_function_capped(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    z: &[f64],
    cap: usize,
) -> Result<f64> {
    check_finite(z)?;
    partition_function_with(g, lambda, z, cap)
}

/// Coefficient `k` counts the `k`-element compatible subsets of a volume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependencePolynomial {
    pub coefficients: Vec<u64>,
}

impl IndependencePolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(|&c| c as f64).collect()
    }
}

/// Integer polynomial used as a weight in the recursion.
#[derive(Clone, Debug, PartialEq)]
struct IntPoly(Vec<u64>);

impl Zero for IntPoly {
    fn zero() -> Self {
        IntPoly(vec![])
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl One for IntPoly {
    fn one() -> Self {
        IntPoly(vec![1])
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        let (mut long, short) = if self.0.len() >= rhs.0.len() {
            (self.0, rhs.0)
        } else {
            (rhs.0, self.0)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        IntPoly(long)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return IntPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out)
    }
}

pub fn independence_polynomial(
    g: &InteractionGraph,
    lambda: &[PolymerId],
) -> Result<IndependencePolynomial> {
    independence_polynomial_capped(g, lambda, DEFAULT_ENUMERATION_CAP)
}

pub fn independence_polynomial_capped(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    cap: usize,
) -> Result<IndependencePolynomial> {
    let x = vec![IntPoly(vec![0, 1]); g.n_polymers()];
    let mut coefficients = partition_function_with(g, lambda, &x, cap)?.0;
    while coefficients.len() > 1 && coefficients.last() == Some(&0) {
        coefficients.pop();
    }
    Ok(IndependencePolynomial { coefficients })
}

/// `Ξ_{N*(γ0)}(μ)`, the partition function of the closed neighborhood.
pub fn neighborhood_xi(g: &InteractionGraph, gamma0: PolymerId, mu: &[f64]) -> Result<f64> {
    check_nonneg(mu)?;
    let nb = g.closed_neighborhood(gamma0)?;
    partition_function(g, &nb, mu)
}

fn volume_without(lambda: &[PolymerId], removed: &[PolymerId]) -> Vec<PolymerId> {
    lambda
        .iter()
        .copied()
        .filter(|v| !removed.contains(v))
        .collect()
}

fn require_member(lambda: &[PolymerId], gamma0: PolymerId) -> Result<()> {
    if lambda.contains(&gamma0) {
        Ok(())
    } else {
        Err(Error::NotInVolume(gamma0))
    }
}

/// `log(Ξ_Λ(z) / Ξ_{Λ∖{γ0}}(z))`. Errors when the ratio is not positive.
pub fn pinned_log_ratio(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    gamma0: PolymerId,
    z: &[f64],
) -> Result<f64> {
    require_member(lambda, gamma0)?;
    let full = partition_function(g, lambda, z)?;
    let rest = partition_function(g, &volume_without(lambda, &[gamma0]), z)?;
    if full == 0.0 || rest == 0.0 || (full > 0.0) != (rest > 0.0) {
        return Err(Error::OutsideRegion {
            value: if full == 0.0 { full } else { rest },
        });
    }
    Ok((full / rest).ln())
}

/// `∂/∂z_{γ0} log Ξ_Λ (z) = Ξ_{Λ∖N*(γ0)}(z) / Ξ_Λ(z)`.
pub fn pinned_derivative(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    gamma0: PolymerId,
    z: &[f64],
) -> Result<f64> {
    require_member(lambda, gamma0)?;
    let full = partition_function(g, lambda, z)?;
    if full == 0.0 {
        return Err(Error::OutsideRegion { value: full });
    }
    let nb = g.closed_neighborhood(gamma0)?;
    let outside = partition_function(g, &volume_without(lambda, &nb), z)?;
    Ok(outside / full)
}

/// Finite-volume pinned series `Π^Λ_{γ0}(ρ)`, evaluated as the pinned
/// derivative at `z = -ρ`.
///
/// Requires `Ξ_Λ(-ρ) > 0`. Only the sign at `-ρ` itself is checked, not the
/// whole segment `[-ρ, 0]`; a volume whose partition function dips below
/// zero and recovers would pass that test.
pub fn pi_volume(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    gamma0: PolymerId,
    rho: &[f64],
) -> Result<f64> {
    check_nonneg(rho)?;
    require_member(lambda, gamma0)?;
    let neg: Vec<f64> = rho.iter().map(|r| -r).collect();
    let full = partition_function(g, lambda, &neg)?;
    if full <= 0.0 {
        return Err(Error::OutsideRegion { value: full });
    }
    let nb = g.closed_neighborhood(gamma0)?;
    let outside = partition_function(g, &volume_without(lambda, &nb), &neg)?;
    Ok(outside / full)
}

/// Probability of the configuration `S` in the grand-canonical measure.
pub fn configuration_weight(
    g: &InteractionGraph,
    lambda: &[PolymerId],
    z: &[f64],
    subset: &[PolymerId],
) -> Result<f64> {
    check_nonneg(z)?;
    for &v in subset {
        require_member(lambda, v)?;
    }
    let xi = partition_function(g, lambda, z)?;
    if xi <= 0.0 {
        return Err(Error::OutsideRegion { value: xi });
    }
    for (i, &u) in subset.iter().enumerate() {
        if subset[i + 1..].iter().any(|&v| g.incompatible(u, v)) {
            return Ok(0.0);
        }
    }
    Ok(subset.iter().map(|&v| z[v]).product::<f64>() / xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn partition_function_examples() {
        let k2 = InteractionGraph::complete(2);
        assert_eq!(partition_function(&k2, &[], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(partition_function(&k2, &[0, 1], &[1.0, 1.0]).unwrap(), 3.0);
        let free = InteractionGraph::self_excluding(2);
        assert_eq!(
            partition_function(&free, &[0, 1], &[1.0, 1.0]).unwrap(),
            4.0
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = InteractionGraph::self_excluding(31);
        let z = vec![0.1; 31];
        assert!(matches!(
            partition_function(&g, &all_polymers(&g), &z),
            Err(Error::CapExceeded {
                size: 31,
                cap: 30,
                ..
            })
        ));
        let v = partition_function_capped(&g, &all_polymers(&g), &z, 31).unwrap();
        assert!(close(v, 1.1f64.powi(31), 1e-12));
    }

    #[test]
    fn independence_polynomials() {
        let one = InteractionGraph::self_excluding(1);
        assert_eq!(
            independence_polynomial(&one, &[0]).unwrap().coefficients,
            vec![1, 1]
        );
        let k2 = InteractionGraph::complete(2);
        assert_eq!(
            independence_polynomial(&k2, &[0, 1]).unwrap().coefficients,
            vec![1, 2]
        );
        let p = InteractionGraph::path(3);
        assert_eq!(
            independence_polynomial(&p, &[0, 1, 2])
                .unwrap()
                .coefficients,
            vec![1, 3, 1]
        );
        assert_eq!(
            independence_polynomial(&p, &[]).unwrap().coefficients,
            vec![1]
        );
    }

    #[test]
    fn neighborhood_partition_functions() {
        let one = InteractionGraph::self_excluding(1);
        assert_eq!(neighborhood_xi(&one, 0, &[0.5]).unwrap(), 1.5);
        let k2 = InteractionGraph::complete(2);
        assert!(close(
            neighborhood_xi(&k2, 0, &[0.3, 0.3]).unwrap(),
            1.6,
            1e-15
        ));
        let p = InteractionGraph::path(3);
        let m = 0.4;
        assert!(close(
            neighborhood_xi(&p, 1, &[m, m, m]).unwrap(),
            1.0 + 3.0 * m + m * m,
            1e-15
        ));
        assert!(neighborhood_xi(&p, 1, &[m, -m, m]).is_err());
    }

    #[test]
    fn pinned_quantities() {
        let one = InteractionGraph::self_excluding(1);
        assert!(close(
            pinned_log_ratio(&one, &[0], 0, &[1.0]).unwrap(),
            2f64.ln(),
            1e-15
        ));
        assert_eq!(pinned_log_ratio(&one, &[0], 0, &[0.0]).unwrap(), 0.0);
        assert!(matches!(
            pinned_log_ratio(&one, &[0], 0, &[-1.0]),
            Err(Error::OutsideRegion { .. })
        ));

        assert_eq!(pinned_derivative(&one, &[0], 0, &[1.0]).unwrap(), 0.5);
        assert_eq!(pinned_derivative(&one, &[0], 0, &[0.0]).unwrap(), 1.0);
        let k2 = InteractionGraph::complete(2);
        assert!(close(
            pinned_derivative(&k2, &[0, 1], 0, &[1.0, 1.0]).unwrap(),
            1.0 / 3.0,
            1e-15
        ));
        assert!(pinned_derivative(&k2, &[1], 0, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn pi_volume_self_exclusion() {
        let one = InteractionGraph::self_excluding(1);
        assert_eq!(pi_volume(&one, &[0], 0, &[0.5]).unwrap(), 2.0);
        assert_eq!(pi_volume(&one, &[0], 0, &[0.0]).unwrap(), 1.0);
        assert!(matches!(
            pi_volume(&one, &[0], 0, &[1.0]),
            Err(Error::OutsideRegion { .. })
        ));
    }

    #[test]
    fn configuration_weights() {
        let k2 = InteractionGraph::complete(2);
        let z = [1.0, 1.0];
        assert!(close(
            configuration_weight(&k2, &[0, 1], &z, &[]).unwrap(),
            1.0 / 3.0,
            1e-15
        ));
        assert_eq!(
            configuration_weight(&k2, &[0, 1], &z, &[0, 1]).unwrap(),
            0.0
        );
        assert!(close(
            configuration_weight(&k2, &[0, 1], &z, &[0]).unwrap(),
            1.0 / 3.0,
            1e-15
        ));
    }
}
