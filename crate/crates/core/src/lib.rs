//! Exact computations for abstract polymer gases: partition functions,
//! Ursell coefficients and their tree-graph identities, and the
//! Kotecký–Preiss, Dobrushin, improved Dobrushin and Fernández–Procacci
//! convergence conditions.
//!
//! ```
//! use polygas::{criteria::CriterionKind, InteractionGraph};
//!
//! let g = InteractionGraph::complete(3);
//! let xi = polygas::gas::partition_function(&g, &[0, 1, 2], &[0.1; 3]).unwrap();
//! assert!((xi - 1.3).abs() < 1e-15);
//!
//! let c = polygas::criteria::Criterion::new(CriterionKind::FernandezProcacci, &g).unwrap();
//! assert!(c.condition_holds(&[0.1; 3], &[0.2; 3]).unwrap());
//! ```

pub mod criteria;
pub mod error;
pub mod gas;
pub mod graph;
pub mod models;
pub mod tree_expansion;
pub mod ursell;

pub use criteria::{Criterion, CriterionKind, FixedPointConfig, FixedPointResult, UnivariatePhi};
pub use error::{Error, Result};
pub use graph::{ClusterGraph, InteractionGraph, PolymerId};
