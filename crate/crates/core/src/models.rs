//! Builtin polymer systems: subset polymers with overlap incompatibility,
//! dominoes in a window of `Z²`, triangular-lattice patches, complete graphs,
//! regular trees and bare bounded-degree forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::criteria::{homogeneous_radius, CriterionKind, RadiusReport, UnivariatePhi};
use crate::error::{Error, Result};
use crate::gas::{check_nonneg, independence_polynomial, IndependencePolynomial};
use crate::graph::{InteractionGraph, PolymerId};

/// A ground-set element. JSON accepts `[x, y]` cells, integers and strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Site {
    Cell([i64; 2]),
    Index(u64),
    Name(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FamilyDoc {
    sites: Vec<Site>,
    polymers: Vec<Vec<Site>>,
}

/// Polymers are finite subsets of a ground set; two polymers are
/// incompatible when they overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetPolymerFamily {
    sites: Vec<Site>,
    /// Sorted site indices of each polymer.
    polymers: Vec<Vec<usize>>,
}

impl SubsetPolymerFamily {
    pub fn new(sites: Vec<Site>, polymers: Vec<Vec<Site>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(sites.len());
        for (i, s) in sites.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate site {s:?}")));
            }
        }
        let polymers = polymers
            .into_iter()
            .enumerate()
            .map(|(p, cells)| {
                if cells.is_empty() {
                    return Err(Error::InvalidModel(format!("polymer {p} is empty")));
                }
                let mut ids = cells
                    .iter()
                    .map(|c| {
                        index.get(c).copied().ok_or_else(|| {
                            Error::InvalidModel(format!("polymer {p} uses unknown site {c:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ids.sort_unstable();
                ids.dedup();
                Ok(ids)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubsetPolymerFamily { sites, polymers })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FamilyDoc = serde_json::from_str(text)?;
        Self::new(doc.sites, doc.polymers)
    }

    pub fn to_json(&self) -> String {
        let doc = FamilyDoc {
            sites: self.sites.clone(),
            polymers: (0..self.polymers.len()).map(|p| self.polymer(p)).collect(),
        };
        serde_json::to_string(&doc).expect("family serializes")
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn n_polymers(&self) -> usize {
        self.polymers.len()
    }

    pub fn polymer(&self, p: PolymerId) -> Vec<Site> {
        self.polymers[p]
            .iter()
            .map(|&i| self.sites[i].clone())
            .collect()
    }

    /// `|γ|`.
    pub fn size(&self, p: PolymerId) -> usize {
        self.polymers[p].len()
    }

    /// Polymers containing each site, indexed like [`Self::sites`].
    fn polymers_at_sites(&self) -> Vec<Vec<PolymerId>> {
        let mut at = vec![Vec::new(); self.sites.len()];
        for (p, cells) in self.polymers.iter().enumerate() {
            for &c in cells {
                at[c].push(p);
            }
        }
        at
    }

    /// Per-polymer sums `Σ_{γ∋x} w_γ`, maximized over `x ∈ γ0` (or over
    /// every site when `global`).
    fn site_sup(&self, w: &[f64], global: bool) -> Vec<f64> {
        let sums: Vec<f64> = self
            .polymers_at_sites()
            .iter()
            .map(|ps| ps.iter().map(|&p| w[p]).sum())
            .collect();
        let all = sums.iter().copied().fold(0.0, f64::max);
        self.polymers
            .iter()
            .map(|cells| {
                if global {
                    all
                } else {
                    cells.iter().map(|&c| sums[c]).fold(0.0, f64::max)
                }
            })
            .collect()
    }
}

/// The overlap graph of a family.
pub fn build_family_graph(f: &SubsetPolymerFamily) -> InteractionGraph {
    let mut edges = Vec::new();
    for ps in f.polymers_at_sites() {
        for (i, &a) in ps.iter().enumerate() {
            for &b in &ps[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    InteractionGraph::new(f.n_polymers(), &edges).expect("overlap edges are valid")
}

/// All horizontal and vertical dominoes inside a `width × height` window
/// of cells `[x, y]`.
pub fn domino_family(width: usize, height: usize) -> Result<SubsetPolymerFamily> {
    if width * height < 2 {
        return Err(Error::InvalidModel(format!(
            "a {width}x{height} window holds no domino"
        )));
    }
    let cell = |x: usize, y: usize| Site::Cell([x as i64, y as i64]);
    let sites = (0..height)
        .flat_map(|y| (0..width).map(move |x| cell(x, y)))
        .collect();
    let mut polymers = Vec::with_capacity((width - 1) * height + width * (height - 1));
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                polymers.push(vec![cell(x, y), cell(x + 1, y)]);
            }
            if y + 1 < height {
                polymers.push(vec![cell(x, y), cell(x, y + 1)]);
            }
        }
    }
    SubsetPolymerFamily::new(sites, polymers)
}

/// The polymer whose cells' centroid lies closest to the centroid of the
/// window, provided it is at least two polymer diameters away from the
/// window edge. Needs `Cell` sites.
pub fn interior_polymer(f: &SubsetPolymerFamily) -> Result<PolymerId> {
    let coords = f
        .sites
        .iter()
        .map(|s| match s {
            Site::Cell([x, y]) => Ok([*x as f64, *y as f64]),
            other => Err(Error::InvalidModel(format!(
                "site {other:?} has no coordinates"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    if f.polymers.is_empty() {
        return Err(Error::InvalidModel("family has no polymers".into()));
    }
    // Cells are unit squares centered on their coordinates.
    let lo = [0, 1].map(|k| coords.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min) - 0.5);
    let hi = [0, 1].map(|k| {
        coords
            .iter()
            .map(|c| c[k])
            .fold(f64::NEG_INFINITY, f64::max)
            + 0.5
    });
    let center = [0, 1].map(|k| 0.5 * (lo[k] + hi[k]));
    let centroid = |cells: &[usize]| {
        [0, 1].map(|k| cells.iter().map(|&c| coords[c][k]).sum::<f64>() / cells.len() as f64)
    };
    let span = |cells: &[usize]| {
        [0, 1]
            .map(|k| {
                let v = cells.iter().map(|&c| coords[c][k]);
                v.clone().fold(f64::NEG_INFINITY, f64::max) - v.fold(f64::INFINITY, f64::min)
            })
            .into_iter()
            .fold(0.0, f64::max)
    };
    let diameter = f
        .polymers
        .iter()
        .map(|p| span(p))
        .fold(0.0, f64::max)
        .max(1.0);
    let mut best: Option<(f64, PolymerId)> = None;
    for (p, cells) in f.polymers.iter().enumerate() {
        let c = centroid(cells);
        let d = (c[0] - center[0]).hypot(c[1] - center[1]);
        if best.is_none_or(|(bd, _)| d < bd - 1e-12) {
            best = Some((d, p));
        }
    }
    let (_, p) = best.expect("nonempty");
    let c = centroid(&f.polymers[p]);
    let clearance = (0..2)
        .map(|k| (c[k] - lo[k]).min(hi[k] - c[k]))
        .fold(f64::INFINITY, f64::min);
    if clearance < 2.0 * diameter {
        return Err(Error::InvalidModel(format!(
            "window too small: central polymer is {clearance} from the edge, need {}",
            2.0 * diameter
        )));
    }
    Ok(p)
}

/// The polynomial `Ξ_{N*(γ0)}` at homogeneous activity.
pub fn neighborhood_polynomial(
    g: &InteractionGraph,
    gamma0: PolymerId,
) -> Result<IndependencePolynomial> {
    independence_polynomial(g, &g.closed_neighborhood(gamma0)?)
}

/// Sites of a hexagonal patch of the triangular lattice with the given
/// radius, in axial coordinates, with the graph of lattice adjacency.
#[derive(Clone, Debug)]
pub struct LatticePatch {
    pub coords: Vec<[i64; 2]>,
    pub graph: InteractionGraph,
}

const TRIANGULAR_STEPS: [[i64; 2]; 6] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]];

pub fn triangular_patch(radius: usize) -> Result<LatticePatch> {
    if radius == 0 {
        return Err(Error::InvalidModel(
            "triangular patch radius must be ≥ 1".into(),
        ));
    }
    let r = radius as i64;
    let coords: Vec<[i64; 2]> = (-r..=r)
        .flat_map(|q| (-r..=r).map(move |s| [q, s]))
        .filter(|&[q, s]| (q + s).abs() <= r)
        .collect();
    let index: HashMap<[i64; 2], usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, &[q, s]) in coords.iter().enumerate() {
        for [dq, ds] in TRIANGULAR_STEPS {
            if let Some(&j) = index.get(&[q + dq, s + ds]) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = InteractionGraph::new(coords.len(), &edges)?;
    Ok(LatticePatch { coords, graph })
}

impl LatticePatch {
    /// Index of the site at the origin.
    pub fn center(&self) -> PolymerId {
        self.coords
            .iter()
            .position(|&c| c == [0, 0])
            .expect("origin is in the patch")
    }
}

/// The commonly quoted triangular-lattice polynomial `1 + 7μ + 8μ² + 2μ³`.
/// Direct enumeration of the closed neighborhood of a site gives
/// `1 + 7μ + 9μ² + 2μ³` instead.
pub const REFERENCE_TRIANGULAR_POLYNOMIAL: [f64; 4] = [1.0, 7.0, 8.0, 2.0];

/// `φ(μ)` of a criterion on a graph of maximum degree `Δ`.
pub fn bounded_degree_phi(kind: CriterionKind, delta: u32, mu: f64) -> Result<f64> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "μ = {mu} must be finite and ≥ 0"
        )));
    }
    UnivariatePhi::bounded_degree(kind, delta)
        .map(|p| p.eval(mu))
        .ok_or_else(|| {
            Error::InvalidModel(
                "the partition-function criterion needs the graph, not just Δ".into(),
            )
        })
}

/// Outcome of the site-supremum condition on a subset family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GruberKunzReport {
    pub holds: bool,
    /// Polymer with the smallest margin.
    pub worst_polymer: Option<PolymerId>,
    /// `min_{γ0} [e^{a(γ0)/|γ0|} - 1 - sup_{x} Σ_{γ∋x} ρ_γ e^{a(γ)}]`.
    pub margin: f64,
    /// `e^{a(γ0)}`, an upper bound on the pinned series, when the
    /// condition holds.
    pub pi_bounds: Option<Vec<f64>>,
}

/// `a(γ) = a |γ|`.
pub fn proportional_exponents(f: &SubsetPolymerFamily, a: f64) -> Vec<f64> {
    (0..f.n_polymers()).map(|p| a * f.size(p) as f64).collect()
}

/// Checks `sup_{x∈γ0} Σ_{γ∋x} ρ_γ e^{a(γ)} ≤ e^{a(γ0)/|γ0|} - 1` for every
/// polymer `γ0`. With `global_sup` the supremum runs over all sites.
pub fn gruber_kunz_condition(
    f: &SubsetPolymerFamily,
    rho: &[f64],
    a: &[f64],
    global_sup: bool,
) -> Result<GruberKunzReport> {
    for v in [rho, a] {
        if v.len() != f.n_polymers() {
            return Err(Error::LengthMismatch {
                expected: f.n_polymers(),
                got: v.len(),
            });
        }
        check_nonneg(v)?;
    }
    let w: Vec<f64> = rho.iter().zip(a).map(|(r, x)| r * x.exp()).collect();
    let sup = f.site_sup(&w, global_sup);
    let mut margin = f64::INFINITY;
    let mut worst_polymer = None;
    for p in 0..f.n_polymers() {
        let m = (a[p] / f.size(p) as f64).exp_m1() - sup[p];
        if m < margin {
            margin = m;
            worst_polymer = Some(p);
        }
    }
    let holds = margin >= 0.0;
    Ok(GruberKunzReport {
        holds,
        worst_polymer,
        margin,
        pi_bounds: holds.then(|| a.iter().map(|x| x.exp()).collect()),
    })
}

/// Verdicts of the three classical conditions with `a(γ) = a |γ|`, each
/// as a supremum over all sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetVerdicts {
    pub kotecky_preiss: bool,
    pub dobrushin: bool,
    pub gruber_kunz: bool,
}

pub fn subset_criteria_table3(
    f: &SubsetPolymerFamily,
    rho: &[f64],
    a: f64,
) -> Result<SubsetVerdicts> {
    if rho.len() != f.n_polymers() {
        return Err(Error::LengthMismatch {
            expected: f.n_polymers(),
            got: rho.len(),
        });
    }
    check_nonneg(rho)?;
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "a = {a} must be finite and ≥ 0"
        )));
    }
    let w: Vec<f64> = (0..f.n_polymers())
        .map(|p| rho[p] * (a * f.size(p) as f64).exp())
        .collect();
    let at = f.polymers_at_sites();
    let sum = at
        .iter()
        .map(|ps| ps.iter().map(|&p| w[p]).sum::<f64>())
        .fold(0.0, f64::max);
    let prod = at
        .iter()
        .map(|ps| ps.iter().map(|&p| 1.0 + w[p]).product::<f64>())
        .fold(1.0, f64::max);
    Ok(SubsetVerdicts {
        kotecky_preiss: sum <= a,
        dobrushin: prod <= a.exp(),
        gruber_kunz: sum <= a.exp_m1(),
    })
}

/// A named builtin system, as accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelDescriptor {
    /// Only the maximum degree `Δ` is known. `degree:Δ`.
    BoundedDegree(u32),
    /// A tree whose inner vertices have degree `Δ`. `tree:Δ`.
    RegularTree(u32),
    /// `K_n`. `complete:n` or `Kn`.
    CompleteGraph(usize),
    /// `n` polymers, each only incompatible with itself. `selfx:n`.
    SelfExclusion(usize),
    /// Dominoes in a window. `domino:WxH`.
    DominoWindow(usize, usize),
    /// Triangular-lattice patch. `tri:rR`.
    TriangularPatch(usize),
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelDescriptor::BoundedDegree(d) => write!(f, "degree:{d}"),
            ModelDescriptor::RegularTree(d) => write!(f, "tree:{d}"),
            ModelDescriptor::CompleteGraph(n) => write!(f, "complete:{n}"),
            ModelDescriptor::SelfExclusion(n) => write!(f, "selfx:{n}"),
            ModelDescriptor::DominoWindow(w, h) => write!(f, "domino:{w}x{h}"),
            ModelDescriptor::TriangularPatch(r) => write!(f, "tri:r{r}"),
        }
    }
}

impl FromStr for ModelDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidModel(format!("cannot parse model descriptor {s:?}"));
        if let Some(n) = s
            .trim()
            .strip_prefix('K')
            .and_then(|t| t.parse::<usize>().ok())
        {
            return if n == 0 {
                Err(bad())
            } else {
                Ok(ModelDescriptor::CompleteGraph(n))
            };
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let positive = |v: usize| if v == 0 { Err(bad()) } else { Ok(v) };
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match name.trim() {
            "degree" => Ok(ModelDescriptor::BoundedDegree(num(arg)? as u32)),
            "tree" => Ok(ModelDescriptor::RegularTree(positive(num(arg)?)? as u32)),
            "complete" => Ok(ModelDescriptor::CompleteGraph(positive(num(arg)?)?)),
            "selfx" => Ok(ModelDescriptor::SelfExclusion(positive(num(arg)?)?)),
            "domino" => {
                let (w, h) = arg.split_once(['x', 'X']).ok_or_else(bad)?;
                Ok(ModelDescriptor::DominoWindow(
                    positive(num(w)?)?,
                    positive(num(h)?)?,
                ))
            }
            "tri" => {
                let r = arg.trim().strip_prefix('r').unwrap_or(arg);
                Ok(ModelDescriptor::TriangularPatch(positive(num(r)?)?))
            }
            _ => Err(bad()),
        }
    }
}

/// A concrete graph with the polymer used for homogeneous statements.
#[derive(Clone, Debug)]
pub struct ModelInstance {
    pub graph: InteractionGraph,
    pub focus: PolymerId,
}

/// A tree of depth 2 around vertex 0 whose root and first generation have
/// degree `Δ`.
fn regular_tree(delta: u32) -> InteractionGraph {
    let d = delta as usize;
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..d {
        let child = next;
        next += 1;
        edges.push((0, child));
        for _ in 1..d {
            edges.push((child, next));
            next += 1;
        }
    }
    InteractionGraph::new(next, &edges).expect("tree edges are valid")
}

impl ModelDescriptor {
    /// The concrete graph, or `None` for [`ModelDescriptor::BoundedDegree`].
    pub fn instance(&self) -> Result<Option<ModelInstance>> {
        let inst = match *self {
            ModelDescriptor::BoundedDegree(_) => return Ok(None),
            ModelDescriptor::RegularTree(d) => ModelInstance {
                graph: regular_tree(d),
                focus: 0,
            },
            ModelDescriptor::CompleteGraph(n) => ModelInstance {
                graph: InteractionGraph::complete(n),
                focus: 0,
            },
            ModelDescriptor::SelfExclusion(n) => ModelInstance {
                graph: InteractionGraph::self_excluding(n),
                focus: 0,
            },
            ModelDescriptor::DominoWindow(w, h) => {
                let f = domino_family(w, h)?;
                let focus = interior_polymer(&f)?;
                ModelInstance {
                    graph: build_family_graph(&f),
                    focus,
                }
            }
            ModelDescriptor::TriangularPatch(r) => {
                let p = triangular_patch(r)?;
                let focus = p.center();
                ModelInstance {
                    graph: p.graph,
                    focus,
                }
            }
        };
        Ok(Some(inst))
    }

    /// The homogeneous `φ` of `kind` at the focus polymer.
    pub fn homogeneous_phi(&self, kind: CriterionKind) -> Result<UnivariatePhi> {
        let Some(inst) = self.instance()? else {
            let ModelDescriptor::BoundedDegree(d) = *self else {
                unreachable!("only bounded-degree models lack a graph")
            };
            return UnivariatePhi::bounded_degree(kind, d).ok_or_else(|| {
                Error::InvalidModel(format!("{self} does not determine the {kind} criterion"))
            });
        };
        let degree = inst.graph.degree(inst.focus) as u32;
        Ok(match kind {
            CriterionKind::FernandezProcacci => UnivariatePhi::Polynomial {
                coefficients: neighborhood_polynomial(&inst.graph, inst.focus)?.as_f64(),
            },
            other => UnivariatePhi::bounded_degree(other, degree).expect("degree-only kind"),
        })
    }

    pub fn radius(&self, kind: CriterionKind) -> Result<RadiusReport> {
        homogeneous_radius(&self.homogeneous_phi(kind)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(v: &[[i64; 2]]) -> Vec<Site> {
        v.iter().map(|&c| Site::Cell(c)).collect()
    }

    #[test]
    fn overlap_graph() {
        let sites = cells(&[[0, 0], [1, 0], [2, 0], [5, 5]]);
        let f = SubsetPolymerFamily::new(
            sites,
            vec![
                cells(&[[0, 0], [1, 0]]),
                cells(&[[1, 0], [2, 0]]),
                cells(&[[5, 5]]),
            ],
        )
        .unwrap();
        let g = build_family_graph(&f);
        assert!(g.incompatible(0, 1));
        assert!(!g.incompatible(0, 2));
        assert!(SubsetPolymerFamily::new(cells(&[[0, 0]]), vec![vec![]]).is_err());
        assert!(SubsetPolymerFamily::new(cells(&[[0, 0]]), vec![cells(&[[1, 1]])]).is_err());
    }

    #[test]
    fn family_json() {
        let text = r#"{"sites": [[0,0], 3, "x"], "polymers": [[[0,0], 3], ["x"]]}"#;
        let f = SubsetPolymerFamily::from_json(text).unwrap();
        assert_eq!(f.sites()[1], Site::Index(3));
        assert_eq!(f.sites()[2], Site::Name("x".into()));
        assert_eq!(SubsetPolymerFamily::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn domino_counts() {
        assert_eq!(domino_family(2, 1).unwrap().n_polymers(), 1);
        assert_eq!(domino_family(2, 2).unwrap().n_polymers(), 4);
        assert_eq!(domino_family(5, 5).unwrap().n_polymers(), 40);
        assert!(domino_family(1, 1).is_err());
    }

    #[test]
    fn interior_domino_polynomial() {
        for (w, h) in [(5, 5), (6, 5), (7, 8)] {
            let f = domino_family(w, h).unwrap();
            let p = interior_polymer(&f).unwrap();
            let poly = neighborhood_polynomial(&build_family_graph(&f), p).unwrap();
            assert_eq!(poly.coefficients, vec![1, 7, 9], "{w}x{h}");
        }
        assert!(interior_polymer(&domino_family(3, 3).unwrap()).is_err());
    }

    #[test]
    fn triangular() {
        let p = triangular_patch(1).unwrap();
        assert_eq!(p.coords.len(), 7);
        assert_eq!(p.graph.degree(p.center()), 6);
        let p2 = triangular_patch(2).unwrap();
        assert_eq!(p2.coords.len(), 19);
        let poly = neighborhood_polynomial(&p2.graph, p2.center()).unwrap();
        assert_eq!(poly.coefficients, vec![1, 7, 9, 2]);
        let a = p2.coords.iter().position(|&c| c == [2, 0]).unwrap();
        let b = p2.coords.iter().position(|&c| c == [0, 0]).unwrap();
        assert!(!p2.graph.incompatible(a, b));
    }

    #[test]
    fn bounded_degree_values() {
        let v = bounded_degree_phi(CriterionKind::ImprovedDobrushin, 6, 0.2).unwrap();
        assert!((v - (0.2 + 1.2f64.powi(6))).abs() < 1e-15);
        let v = bounded_degree_phi(CriterionKind::Dobrushin, 6, 1.0 / 6.0).unwrap();
        assert!((v - (7.0f64 / 6.0).powi(7)).abs() < 1e-14);
        assert!(bounded_degree_phi(CriterionKind::FernandezProcacci, 6, 0.2).is_err());
    }

    #[test]
    fn gruber_kunz_single_site() {
        let f = SubsetPolymerFamily::new(vec![Site::Index(0)], vec![vec![Site::Index(0)]]).unwrap();
        let a = [2f64.ln()];
        assert!(gruber_kunz_condition(&f, &[0.5], &a, false).unwrap().holds);
        assert!(!gruber_kunz_condition(&f, &[0.51], &a, false).unwrap().holds);
        let r = gruber_kunz_condition(&f, &[0.0], &a, false).unwrap();
        assert!((r.margin - 1.0).abs() < 1e-15);
        assert_eq!(r.pi_bounds, Some(vec![2.0]));
    }

    #[test]
    fn table3_zero_activity() {
        let f = domino_family(4, 4).unwrap();
        let v = subset_criteria_table3(&f, &vec![0.0; f.n_polymers()], 0.1).unwrap();
        assert!(v.kotecky_preiss && v.dobrushin && v.gruber_kunz);
    }

    #[test]
    fn descriptors() {
        for s in [
            "degree:6",
            "tree:3",
            "complete:7",
            "selfx:1",
            "domino:5x5",
            "tri:r2",
        ] {
            let m: ModelDescriptor = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert_eq!(
            "K2".parse::<ModelDescriptor>().unwrap(),
            ModelDescriptor::CompleteGraph(2)
        );
        for s in ["degree", "complete:0", "K0", "domino:5", "blob:1", "tri:rx"] {
            assert!(s.parse::<ModelDescriptor>().is_err(), "{s}");
        }
    }

    #[test]
    fn model_radii() {
        let r =
            |s: &str, k: CriterionKind| s.parse::<ModelDescriptor>().unwrap().radius(k).unwrap();
        assert!(
            (r("domino:5x5", CriterionKind::FernandezProcacci).radius - 1.0 / 13.0).abs() < 1e-12
        );
        let k7 = r("complete:7", CriterionKind::FernandezProcacci);
        assert_eq!(k7.radius, 1.0 / 7.0);
        assert!(!k7.attained);
        let tree = r("tree:6", CriterionKind::FernandezProcacci);
        let imp = r("degree:6", CriterionKind::ImprovedDobrushin);
        assert!((tree.radius - imp.radius).abs() < 1e-12);
        assert!("degree:6"
            .parse::<ModelDescriptor>()
            .unwrap()
            .radius(CriterionKind::FernandezProcacci)
            .is_err());
    }
}
