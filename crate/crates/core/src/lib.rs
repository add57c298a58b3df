//! Shortest-path-length histograms, SIR outbreak traces, and continuous
//! model fits for networks.
//!
//! The pipeline: build or load a graph ([`graph`]), aggregate exact BFS
//! distance histograms ([`paths`]) or simulate discrete-time SIR cascades
//! ([`epidemics`]), then fit Gamma / Weibull / LogNormal / generalized
//! Gamma models to the binned counts by multinomial maximum likelihood and
//! score them with the Hellinger distance ([`fit`]). The [`dist`] module
//! holds the families themselves along with their discretization,
//! special-case reductions, time-scale transforms, and the discrete
//! maximum-entropy mass function they arise from.
//!
//! Everything randomized is seeded (PCG-64) and deterministic; derived
//! seeds for replicate ensembles come from [`seed::derive_seed`].

pub mod dist;
pub mod epidemics;
pub mod fit;
pub mod graph;
pub mod paths;
pub mod seed;

pub use dist::{ModelFamily, ModelParams};
pub use epidemics::{CausalGraph, OutbreakTrace, SirParams};
pub use fit::{FitResult, FamilyFits};
pub use graph::generate::{GraphModel, GraphModelSpec};
pub use graph::Graph;
pub use paths::DistanceHistogram;
