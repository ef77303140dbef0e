use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use polygas::criteria::{Criterion, CriterionKind, FixedPointConfig};
use polygas::models::ModelDescriptor;
use polygas::tree_expansion::{iterate_via_trees, tree_bound_sum, TreeIterConfig};
use polygas::ursell::{
    css_signed_sum, penrose_tree_count, ursell_coefficient, verify_partition_scheme,
};
use polygas::{ClusterGraph, Error, InteractionGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Penrose,
    Signs,
    PartitionScheme,
    Chain,
    Logconvex,
    TreeEquivalence,
    TreeBound,
}

#[derive(clap::Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest cluster size for exhaustive sweeps.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Number of random systems for randomized sweeps.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Model for the chain suite.
    #[arg(long, default_value = "domino:5x5")]
    model: ModelDescriptor,
    /// Homogeneous activity for the chain suite.
    #[arg(long, default_value_t = 0.05)]
    rho: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

struct Sweep {
    checked: u64,
    counterexample: Option<String>,
}

impl Sweep {
    fn new() -> Self {
        Sweep {
            checked: 0,
            counterexample: None,
        }
    }

    /// Records a check; returns false once a counterexample is known.
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
        self.counterexample.is_none()
    }
}

/// Every graph on `n` labeled vertices, as edge lists.
fn all_graphs(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    })
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> InteractionGraph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.2..0.8);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    InteractionGraph::new(n, &edges).expect("random edges are valid")
}

/// Calls `f` on every sequence over `0..n` of length `1..=max_len`.
fn for_each_sequence(n: usize, max_len: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    for len in 1..=max_len {
        let total = n.pow(len as u32);
        let mut seq = vec![0; len];
        for mut code in 0..total {
            for s in seq.iter_mut() {
                *s = code % n;
                code /= n;
            }
            if !f(&seq) {
                return;
            }
        }
    }
}

fn penrose(max_v: usize, sweep: &mut Sweep) -> Result<(), Error> {
    for n in 1..=max_v {
        for edges in all_graphs(n) {
            let cg = ClusterGraph::new(n, &edges)?;
            if !cg.is_connected() {
                continue;
            }
            let css = css_signed_sum(&cg)?;
            let count = penrose_tree_count(&cg)? as i64;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            if !sweep.check(css == sign * count, || {
                format!("n={n} edges={edges:?}: css={css}, penrose={count}")
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn partition_scheme(max_v: usize, sweep: &mut Sweep) -> Result<(), Error> {
    for n in 1..=max_v {
        for edges in all_graphs(n) {
            let cg = ClusterGraph::new(n, &edges)?;
            if !cg.is_connected() {
                continue;
            }
            let r = verify_partition_scheme(&cg)?;
            if !sweep.check(r.ok, || {
                format!("n={n} edges={edges:?}: {:?}", r.violations)
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn signs(max_len: usize, sweep: &mut Sweep) -> Result<(), Error> {
    for n in 1..=4 {
        for edges in all_graphs(n) {
            let g = InteractionGraph::new(n, &edges)?;
            let mut err = None;
            for_each_sequence(n, max_len, &mut |seq| {
                let connected = match g.cluster_graph(seq) {
                    Ok(cg) => cg.is_connected(),
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                };
                let phi = match ursell_coefficient(&g, seq) {
                    Ok(v) => v.0,
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                };
                let sign = if seq.len() % 2 == 1 { 1 } else { -1 };
                let ok = if connected { phi * sign >= 1 } else { phi == 0 };
                sweep.check(ok, || format!("edges={edges:?} seq={seq:?}: phiT={phi}"))
            });
            if let Some(e) = err {
                return Err(e);
            }
            if sweep.counterexample.is_some() {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn chain(
    model: ModelDescriptor,
    rho: f64,
    config: &FixedPointConfig,
    sweep: &mut Sweep,
) -> Result<(), Error> {
    let inst = model
        .instance()?
        .ok_or_else(|| Error::InvalidModel(format!("{model} has no concrete graph")))?;
    let c = Criterion::new(CriterionKind::FernandezProcacci, &inst.graph)?;
    let rho_v = vec![rho; inst.graph.n_polymers()];
    let star = c.fixed_point(&rho_v, config)?;
    if !sweep.check(star.converged, || {
        format!("fixed point at ρ={rho} did not converge")
    }) {
        return Ok(());
    }
    // A certificate strictly above ρ*: the fixed point for a slightly larger activity.
    let bigger: Vec<f64> = rho_v.iter().map(|r| r * (1.0 + 1e-3)).collect();
    let cert = c.fixed_point(&bigger, config)?;
    if !sweep.check(cert.converged, || format!("no certificate above ρ={rho}")) {
        return Ok(());
    }
    let steps = c.bound_chain(&rho_v, &cert.rho_star, 50)?;
    let mut prev = cert.rho_star.clone();
    for (k, cur) in steps.iter().enumerate() {
        let monotone = cur.iter().zip(&prev).all(|(a, b)| a <= b);
        let above = cur.iter().zip(&star.rho_star).all(|(a, s)| *a >= s - 1e-9);
        if !sweep.check(monotone && above, || {
            format!("bound chain fails at step {}", k + 1)
        }) {
            return Ok(());
        }
        prev = cur.clone();
    }
    Ok(())
}

/// A random pair `(ρ, μ)` with `T_ρ(μ) ≤ μ`.
fn random_valid_pair(c: &Criterion, rng: &mut ChaCha8Rng) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let n = c.graph().n_polymers();
    let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.5)).collect();
    let mut rho = Vec::with_capacity(n);
    for g in 0..n {
        let u = rng.gen_range(0.0..0.999);
        rho.push(u * mu[g] / c.phi(g, &mu)?);
    }
    Ok((rho, mu))
}

fn logconvex(trials: usize, seed: u64, sweep: &mut Sweep) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let g = random_graph(&mut rng, 6);
        let kind = CriterionKind::ALL[rng.gen_range(0..4)];
        let c = Criterion::new(kind, &g)?;
        let (r1, m1) = random_valid_pair(&c, &mut rng)?;
        let (r2, m2) = random_valid_pair(&c, &mut rng)?;
        for lambda in [0.25, 0.5, 0.75] {
            let ok = c.geometric_interpolation_check((&r1, &m1), (&r2, &m2), lambda)?;
            if !sweep.check(ok, || format!("trial {trial}, {kind}, λ={lambda}")) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn tree_equivalence(trials: usize, seed: u64, sweep: &mut Sweep) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = TreeIterConfig {
        s_max: Some(40),
        tail_tol: 1e-14,
    };
    for trial in 0..trials {
        let g = random_graph(&mut rng, 4);
        let n = g.n_polymers();
        let rho: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.2)).collect();
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.3)).collect();
        for kind in CriterionKind::ALL {
            let c = Criterion::new(kind, &g)?;
            let mut cur = mu.clone();
            for k in 1..=3 {
                cur = c.t_map(&rho, &cur)?;
                let via = iterate_via_trees(kind, &g, &rho, k, &mu, &cfg)?;
                let ok = via
                    .iter()
                    .zip(&cur)
                    .all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs());
                if !sweep.check(ok, || {
                    format!("trial {trial}, {kind}, k={k}: {via:?} vs {cur:?}")
                }) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn tree_bound(max_len: usize, trials: usize, seed: u64, sweep: &mut Sweep) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let g = random_graph(&mut rng, 5);
        let mut err = None;
        for_each_sequence(g.n_polymers(), max_len, &mut |seq| {
            let phi = match ursell_coefficient(&g, seq) {
                Ok(v) => v.0.unsigned_abs(),
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            };
            CriterionKind::ALL
                .iter()
                .all(|&kind| match tree_bound_sum(kind, &g, seq) {
                    Ok(bound) => sweep.check(phi <= bound, || {
                        format!("trial {trial}, {kind}, seq={seq:?}: |phiT|={phi} > {bound}")
                    }),
                    Err(e) => {
                        err = Some(e);
                        false
                    }
                })
        });
        if let Some(e) = err {
            return Err(e);
        }
        if sweep.counterexample.is_some() {
            return Ok(());
        }
    }
    Ok(())
}

pub fn run(args: &VerifyArgs, seed: u64, config: &FixedPointConfig) -> Result<VerifyReport, Error> {
    let mut sweep = Sweep::new();
    match args.suite {
        Suite::Penrose => penrose(args.max_vertices.unwrap_or(5), &mut sweep)?,
        Suite::PartitionScheme => partition_scheme(args.max_vertices.unwrap_or(5), &mut sweep)?,
        Suite::Signs => signs(args.max_vertices.unwrap_or(5), &mut sweep)?,
        Suite::Chain => chain(args.model, args.rho, config, &mut sweep)?,
        Suite::Logconvex => logconvex(args.trials, seed, &mut sweep)?,
        Suite::TreeEquivalence => tree_equivalence(args.trials, seed, &mut sweep)?,
        Suite::TreeBound => tree_bound(
            args.max_vertices.unwrap_or(4),
            args.trials,
            seed,
            &mut sweep,
        )?,
    }
    Ok(VerifyReport {
        suite: args.suite,
        passed: sweep.counterexample.is_none(),
        checked: sweep.checked,
        counterexample: sweep.counterexample,
    })
}
