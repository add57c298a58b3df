//! Serialized document shapes for output files and sidecars.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use netdist::dist::ModelFamily;
use netdist::fit::FitResult;
use netdist::graph::generate::GraphModelSpec;

#[derive(Serialize)]
pub struct GenerateMeta {
    pub spec: GraphModelSpec,
    pub master_seed: u64,
    pub replicate: usize,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Serialize)]
pub struct SampleMeta {
    pub count: usize,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct HistogramMeta {
    pub input: String,
    pub n: usize,
    /// Edge lists are always read as undirected graphs.
    pub symmetrized: bool,
    pub lcc_requested: bool,
    pub lcc_applied: bool,
    pub sources: usize,
    pub sample: Option<SampleMeta>,
    pub diameter: usize,
    pub mean: f64,
    pub reachable_pairs: u64,
    pub group: Option<String>,
}

#[derive(Serialize)]
pub struct SimulateMeta {
    pub input: String,
    pub infect: f64,
    pub recover: f64,
    pub master_seed: u64,
    pub replicates: usize,
    pub source: Option<usize>,
    pub lcc: bool,
    pub sources_used: Vec<usize>,
    pub derived_seeds: Vec<u64>,
    pub final_sizes: Vec<u64>,
}

#[derive(Serialize)]
pub struct DagMeta {
    pub input: String,
    pub directed: bool,
    pub n: usize,
    pub source: usize,
    pub replicate: usize,
    pub master_seed: u64,
}

#[derive(Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub mean: f64,
    pub total: f64,
    pub k_max: usize,
    pub nonzero_bins: usize,
}

/// One fitted family: either the result or the per-family failure.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum FitEntry {
    Fit(Box<FitResult>),
    Error { error: String },
}

/// The fit subcommand's output document; `embed` and `report` read it back.
#[derive(Serialize, Deserialize)]
pub struct FitsDocument {
    pub input: String,
    pub name: String,
    pub empirical: EmpiricalStats,
    pub fits: BTreeMap<String, FitEntry>,
    pub best: Option<String>,
}

impl FitsDocument {
    pub fn fit(&self, family: ModelFamily) -> Option<&FitResult> {
        match self.fits.get(family.as_str()) {
            Some(FitEntry::Fit(r)) => Some(r),
            _ => None,
        }
    }

    pub fn gen_gamma_fit(&self) -> Option<&FitResult> {
        self.fit(ModelFamily::GenGamma)
    }
}
