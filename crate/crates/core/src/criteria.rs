//! Convergence conditions of the form `ρ_γ φ_γ(μ) ≤ μ_γ` and the monotone
//! maps `T_ρ(μ) = ρ φ(μ)` they define.
//!
//! Four choices of `φ` are supported, from weakest to sharpest:
//!
//! | kind | `φ_{γ0}(μ)` |
//! |------|-------------|
//! | Kotecký–Preiss | `exp(Σ_{γ≁γ0} μ_γ)` |
//! | Dobrushin | `Π_{γ≁γ0} (1 + μ_γ)` |
//! | improved Dobrushin | `μ_{γ0} + Π_{γ≁γ0, γ≠γ0} (1 + μ_γ)` |
//! | Fernández–Procacci | `Ξ_{N*(γ0)}(μ)` |
//!
//! Sums and products over `γ ≁ γ0` include `γ0` itself.
//!
//! Iterating `T_ρ` from `ρ` gives a nondecreasing sequence. It converges to
//! the least fixed point `ρ*` whenever any certificate `μ` with
//! `T_ρ(μ) ≤ μ` exists, and `ρ*` bounds `ρ Π(ρ)` from above. Without a
//! certificate the iterates grow without bound, which is the only failure
//! mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{check_nonneg, PreparedVolume, DEFAULT_ENUMERATION_CAP};
use crate::graph::{InteractionGraph, PolymerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionKind {
    KoteckyPreiss,
    Dobrushin,
    ImprovedDobrushin,
    FernandezProcacci,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 4] = [
        CriterionKind::KoteckyPreiss,
        CriterionKind::Dobrushin,
        CriterionKind::ImprovedDobrushin,
        CriterionKind::FernandezProcacci,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            CriterionKind::KoteckyPreiss => "kp",
            CriterionKind::Dobrushin => "dob",
            CriterionKind::ImprovedDobrushin => "impdob",
            CriterionKind::FernandezProcacci => "fp",
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kp" | "kotecky-preiss" => Ok(CriterionKind::KoteckyPreiss),
            "dob" | "dobrushin" => Ok(CriterionKind::Dobrushin),
            "impdob" | "improved-dobrushin" => Ok(CriterionKind::ImprovedDobrushin),
            "fp" | "fernandez-procacci" => Ok(CriterionKind::FernandezProcacci),
            other => Err(Error::InvalidModel(format!("unknown criterion {other:?}"))),
        }
    }
}

/// Stopping rules for [`Criterion::fixed_point`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointConfig {
    /// Relative sup-norm tolerance on `T(μ) - μ`.
    pub tol: f64,
    pub max_iter: usize,
    /// Any coordinate above this marks divergence.
    pub cap: f64,
    /// Keep every iterate in the result.
    pub record_chain: bool,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        FixedPointConfig {
            tol: 1e-12,
            max_iter: 100_000,
            cap: 1e12,
            record_chain: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub rho_star: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
    /// Coordinate that crossed the divergence cap.
    pub offending: Option<PolymerId>,
    /// Sup-norm of the last step.
    pub last_increment: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<f64>>>,
}

/// A criterion bound to a graph, with neighborhoods precomputed.
#[derive(Clone, Debug)]
pub struct Criterion<'g> {
    kind: CriterionKind,
    graph: &'g InteractionGraph,
    open: Vec<Vec<PolymerId>>,
    volumes: Vec<PreparedVolume>,
}

impl<'g> Criterion<'g> {
    pub fn new(kind: CriterionKind, graph: &'g InteractionGraph) -> Result<Self> {
        Self::with_cap(kind, graph, DEFAULT_ENUMERATION_CAP)
    }

    /// `cap` bounds closed-neighborhood sizes for the partition-function kind.
    pub fn with_cap(kind: CriterionKind, graph: &'g InteractionGraph, cap: usize) -> Result<Self> {
        let n = graph.n_polymers();
        let open = (0..n)
            .map(|v| graph.open_neighborhood(v))
            .collect::<Result<Vec<_>>>()?;
        let volumes = if kind == CriterionKind::FernandezProcacci {
            (0..n)
                .map(|v| PreparedVolume::new(graph, &graph.closed_neighborhood(v)?, cap))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(Criterion {
            kind,
            graph,
            open,
            volumes,
        })
    }

    pub fn kind(&self) -> CriterionKind {
        self.kind
    }

    pub fn graph(&self) -> &InteractionGraph {
        self.graph
    }

    fn check_vec(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.graph.n_polymers() {
            return Err(Error::LengthMismatch {
                expected: self.graph.n_polymers(),
                got: v.len(),
            });
        }
        check_nonneg(v)
    }

    fn phi_unchecked(&self, gamma0: PolymerId, mu: &[f64]) -> f64 {
        let others = &self.open[gamma0];
        match self.kind {
            CriterionKind::KoteckyPreiss => {
                (mu[gamma0] + others.iter().map(|&g| mu[g]).sum::<f64>()).exp()
            }
            CriterionKind::Dobrushin => {
                (1.0 + mu[gamma0]) * others.iter().map(|&g| 1.0 + mu[g]).product::<f64>()
            }
            CriterionKind::ImprovedDobrushin => {
                mu[gamma0] + others.iter().map(|&g| 1.0 + mu[g]).product::<f64>()
            }
            CriterionKind::FernandezProcacci => self.volumes[gamma0].eval(mu),
        }
    }

    pub fn phi(&self, gamma0: PolymerId, mu: &[f64]) -> Result<f64> {
        self.graph.check(gamma0)?;
        self.check_vec(mu)?;
        Ok(self.phi_unchecked(gamma0, mu))
    }

    fn t_map_unchecked(&self, rho: &[f64], mu: &[f64]) -> Vec<f64> {
        (0..rho.len())
            .map(|g| {
                if rho[g] == 0.0 {
                    0.0
                } else {
                    rho[g] * self.phi_unchecked(g, mu)
                }
            })
            .collect()
    }

    /// `T_ρ(μ)_γ = ρ_γ φ_γ(μ)`.
    pub fn t_map(&self, rho: &[f64], mu: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(rho)?;
        self.check_vec(mu)?;
        Ok(self.t_map_unchecked(rho, mu))
    }

    /// `T_ρ(μ) ≤ μ` componentwise.
    pub fn condition_holds(&self, rho: &[f64], mu: &[f64]) -> Result<bool> {
        let t = self.t_map(rho, mu)?;
        Ok(t.iter().zip(mu).all(|(a, b)| a <= b))
    }

    /// Iterates `T_ρ` from `ρ` until the relative sup-norm step drops below
    /// `tol` (converged), a coordinate exceeds `cap` (diverged), or
    /// `max_iter` steps pass. On convergence `rho_star` is the last iterate
    /// whose image was within tolerance.
    pub fn fixed_point(&self, rho: &[f64], config: &FixedPointConfig) -> Result<FixedPointResult> {
        self.check_vec(rho)?;
        let mut mu = rho.to_vec();
        let mut chain = config.record_chain.then(|| vec![mu.clone()]);
        let mut last_increment = f64::INFINITY;
        for it in 1..=config.max_iter {
            let next = self.t_map_unchecked(rho, &mu);
            if let Some(bad) = next
                .iter()
                .position(|x| !(x.is_finite() && *x <= config.cap))
            {
                return Ok(FixedPointResult {
                    rho_star: next,
                    iterations: it,
                    converged: false,
                    diverged: true,
                    offending: Some(bad),
                    last_increment,
                    chain,
                });
            }
            let scale = 1.0 + sup_norm(&mu);
            last_increment = next
                .iter()
                .zip(&mu)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if last_increment <= config.tol * scale {
                return Ok(FixedPointResult {
                    rho_star: mu,
                    iterations: it,
                    converged: true,
                    diverged: false,
                    offending: None,
                    last_increment,
                    chain,
                });
            }
            if let Some(c) = chain.as_mut() {
                c.push(next.clone());
            }
            mu = next;
        }
        Ok(FixedPointResult {
            rho_star: mu,
            iterations: config.max_iter,
            converged: false,
            diverged: false,
            offending: None,
            last_increment,
            chain,
        })
    }

    /// `[T(μ), T²(μ), …, T^n(μ)]` for a certificate `μ`. The chain is
    /// nonincreasing and stays above `ρ*`.
    pub fn bound_chain(&self, rho: &[f64], mu: &[f64], n_steps: usize) -> Result<Vec<Vec<f64>>> {
        if !self.condition_holds(rho, mu)? {
            return Err(Error::ConditionFails);
        }
        let mut out = Vec::with_capacity(n_steps);
        let mut cur = mu.to_vec();
        for _ in 0..n_steps {
            cur = self.t_map_unchecked(rho, &cur);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Whether the geometric interpolation of two valid `(ρ, μ)` pairs
    /// satisfies the condition again. Errors if either input pair fails.
    pub fn geometric_interpolation_check(
        &self,
        first: (&[f64], &[f64]),
        second: (&[f64], &[f64]),
        lambda: f64,
    ) -> Result<bool> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidPhi(format!(
                "interpolation weight {lambda} outside [0, 1]"
            )));
        }
        if !self.condition_holds(first.0, first.1)? || !self.condition_holds(second.0, second.1)? {
            return Err(Error::ConditionFails);
        }
        let rho = geometric_mean(first.0, second.0, lambda);
        let mu = geometric_mean(first.1, second.1, lambda);
        self.condition_holds(&rho, &mu)
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `a^λ b^{1-λ}` componentwise; the endpoints return the inputs exactly.
pub fn geometric_mean(a: &[f64], b: &[f64], lambda: f64) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if lambda == 1.0 {
                x
            } else if lambda == 0.0 {
                y
            } else {
                x.powf(lambda) * y.powf(1.0 - lambda)
            }
        })
        .collect()
}

pub fn phi(
    kind: CriterionKind,
    g: &InteractionGraph,
    gamma0: PolymerId,
    mu: &[f64],
) -> Result<f64> {
    Criterion::new(kind, g)?.phi(gamma0, mu)
}

pub fn t_map(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    mu: &[f64],
) -> Result<Vec<f64>> {
    Criterion::new(kind, g)?.t_map(rho, mu)
}

pub fn condition_holds(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    mu: &[f64],
) -> Result<bool> {
    Criterion::new(kind, g)?.condition_holds(rho, mu)
}

pub fn fixed_point(
    kind: CriterionKind,
    g: &InteractionGraph,
    rho: &[f64],
    config: &FixedPointConfig,
) -> Result<FixedPointResult> {
    Criterion::new(kind, g)?.fixed_point(rho, config)
}

/// Kotecký–Preiss in exponent form: `Σ_{γ≁γ0} ρ_γ e^{a_γ} ≤ a_{γ0}` for all `γ0`.
pub fn kp_exponent_form(g: &InteractionGraph, rho: &[f64], a: &[f64]) -> Result<bool> {
    check_nonneg(rho)?;
    check_nonneg(a)?;
    Ok((0..g.n_polymers()).all(|g0| {
        let s: f64 = g
            .closed_neighborhood(g0)
            .expect("valid")
            .iter()
            .map(|&x| rho[x] * a[x].exp())
            .sum();
        s <= a[g0]
    }))
}

/// Dobrushin in exponent form: `ρ_{γ0} ≤ (e^{α_{γ0}} - 1) exp(-Σ_{γ≁γ0} α_γ)`.
pub fn dobrushin_exponent_form(g: &InteractionGraph, rho: &[f64], alpha: &[f64]) -> Result<bool> {
    check_nonneg(rho)?;
    check_nonneg(alpha)?;
    Ok((0..g.n_polymers()).all(|g0| {
        let s: f64 = g
            .closed_neighborhood(g0)
            .expect("valid")
            .iter()
            .map(|&x| alpha[x])
            .sum();
        rho[g0] <= alpha[g0].exp_m1() * (-s).exp()
    }))
}

/// A homogeneous `φ(μ)` of one variable, with `φ(0) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "form")]
pub enum UnivariatePhi {
    /// `Σ c_k μ^k`, coefficients in increasing degree.
    Polynomial { coefficients: Vec<f64> },
    /// `exp(rate μ)`.
    Exponential { rate: f64 },
    /// `(1 + μ)^power`.
    OnePlusPower { power: u32 },
    /// `μ + (1 + μ)^delta`.
    ImprovedDobrushin { delta: u32 },
}

impl UnivariatePhi {
    /// The homogeneous form of a criterion on a graph of maximum degree
    /// `Δ`. `None` for the partition-function kind, which depends on more
    /// than the degree.
    pub fn bounded_degree(kind: CriterionKind, delta: u32) -> Option<Self> {
        match kind {
            CriterionKind::KoteckyPreiss => Some(UnivariatePhi::Exponential {
                rate: delta as f64 + 1.0,
            }),
            CriterionKind::Dobrushin => Some(UnivariatePhi::OnePlusPower { power: delta + 1 }),
            CriterionKind::ImprovedDobrushin => Some(UnivariatePhi::ImprovedDobrushin { delta }),
            CriterionKind::FernandezProcacci => None,
        }
    }

    pub fn eval(&self, mu: f64) -> f64 {
        match self {
            UnivariatePhi::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * mu + c)
            }
            UnivariatePhi::Exponential { rate } => (rate * mu).exp(),
            UnivariatePhi::OnePlusPower { power } => (1.0 + mu).powi(*power as i32),
            UnivariatePhi::ImprovedDobrushin { delta } => mu + (1.0 + mu).powi(*delta as i32),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            UnivariatePhi::Polynomial { coefficients } => {
                if coefficients.first() != Some(&1.0) {
                    return Err(Error::InvalidPhi("constant term must be 1".into()));
                }
                if coefficients.iter().any(|c| !c.is_finite() || *c < 0.0) {
                    return Err(Error::InvalidPhi(
                        "coefficients must be finite and nonnegative (monotone φ)".into(),
                    ));
                }
                Ok(())
            }
            UnivariatePhi::Exponential { rate } if !(rate.is_finite() && *rate >= 0.0) => Err(
                Error::InvalidPhi("exponential rate must be nonnegative".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Least fixed point of `μ ↦ ρ φ(μ)` by iteration from `ρ`.
    pub fn fixed_point(&self, rho: f64, config: &FixedPointConfig) -> (Option<f64>, usize) {
        let mut mu = rho;
        for it in 1..=config.max_iter {
            let next = rho * self.eval(mu);
            if !(next.is_finite() && next <= config.cap) {
                return (None, it);
            }
            if (next - mu).abs() <= config.tol * (1.0 + mu.abs()) {
                return (Some(mu), it);
            }
            mu = next;
        }
        (None, config.max_iter)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    /// `sup_{μ>0} μ / φ(μ)`.
    pub radius: f64,
    /// False when the supremum is only approached as `μ → ∞`.
    pub attained: bool,
    pub maximizer: Option<f64>,
    /// Independent golden-section estimate of the same supremum.
    pub numeric: f64,
}

/// `sup_{μ>0} μ / φ(μ)`, the largest homogeneous activity the condition
/// certifies.
pub fn homogeneous_radius(phi: &UnivariatePhi) -> Result<RadiusReport> {
    phi.validate()?;
    let (radius, attained, maximizer) = match phi {
        UnivariatePhi::Polynomial { coefficients } => {
            let mut c = coefficients.clone();
            while c.len() > 1 && c.last() == Some(&0.0) {
                c.pop();
            }
            match c.len() {
                1 => (f64::INFINITY, false, None),
                2 => (1.0 / c[1], false, None),
                _ => {
                    // Interior maximizer: φ(μ) - μ φ'(μ) = 1 - Σ_k (k-1) c_k μ^k = 0.
                    let g = |m: f64| {
                        1.0 - c
                            .iter()
                            .enumerate()
                            .skip(2)
                            .map(|(k, &ck)| (k as f64 - 1.0) * ck * m.powi(k as i32))
                            .sum::<f64>()
                    };
                    let m = bisect_decreasing(g);
                    (m / phi.eval(m), true, Some(m))
                }
            }
        }
        UnivariatePhi::Exponential { rate } => {
            if *rate == 0.0 {
                (f64::INFINITY, false, None)
            } else {
                (1.0 / (rate * std::f64::consts::E), true, Some(1.0 / rate))
            }
        }
        UnivariatePhi::OnePlusPower { power } => match power {
            0 => (f64::INFINITY, false, None),
            1 => (1.0, false, None),
            &k => {
                let m = 1.0 / (k as f64 - 1.0);
                (m / phi.eval(m), true, Some(m))
            }
        },
        UnivariatePhi::ImprovedDobrushin { delta } => match delta {
            0 => (1.0, false, None),
            1 => (0.5, false, None),
            &d => {
                let m = 1.0 / (d as f64 - 1.0);
                (m / phi.eval(m), true, Some(m))
            }
        },
    };
    let numeric = maximize_ratio(|m| phi.eval(m)).1;
    Ok(RadiusReport {
        radius,
        attained,
        maximizer,
        numeric,
    })
}

/// Root of a decreasing function with `g(0) > 0`, by doubling then bisection.
fn bisect_decreasing(g: impl Fn(f64) -> f64) -> f64 {
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization of `μ / φ(μ)` on `[0, μ_hi]`, doubling `μ_hi`
/// until the ratio turns down. Returns `(argmax, max)`; for ratios that keep
/// increasing the search stops at `μ = 1e12`.
pub fn maximize_ratio(phi: impl Fn(f64) -> f64) -> (f64, f64) {
    let ratio = |m: f64| m / phi(m);
    let mut hi = 1.0;
    while hi < 1e12 && ratio(2.0 * hi) > ratio(hi) {
        hi *= 2.0;
    }
    let mut a = 0.0;
    let mut b = 2.0 * hi;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (ratio(c), ratio(d));
    for _ in 0..300 {
        if (b - a).abs() <= 1e-15 * (1.0 + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ratio(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, ratio(m))
}

/// Radius closed forms for graphs of maximum degree `Δ`.
pub fn closed_form_radius(kind: CriterionKind, delta: u32) -> Option<f64> {
    let d = delta as f64;
    match kind {
        CriterionKind::KoteckyPreiss => Some(1.0 / ((d + 1.0) * std::f64::consts::E)),
        CriterionKind::Dobrushin => Some(if delta == 0 {
            1.0
        } else {
            (d / (d + 1.0)).powi(delta as i32) / (d + 1.0)
        }),
        CriterionKind::ImprovedDobrushin => Some(if delta <= 1 {
            1.0 / (d + 1.0)
        } else {
            1.0 / (1.0 + d * (d / (d - 1.0)).powi(delta as i32 - 1))
        }),
        CriterionKind::FernandezProcacci => None,
    }
}

/// `(Δ-1)^{Δ-1} / Δ^Δ`, the exact radius for the `(Δ-1)`-regular tree.
pub fn scott_sokal_reference(delta: u32) -> Result<f64> {
    if delta < 2 {
        return Err(Error::InvalidModel(format!("Δ = {delta}; need Δ ≥ 2")));
    }
    let d = delta as f64;
    Ok(((d - 1.0) / d).powi(delta as i32 - 1) / d)
}
