//! JSON documents emitted by the CLI. Field order is serialization order.
//! Any change to names or meaning bumps [`SCHEMA`].

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylEntry {
    pub m: i64,
    pub re: f64,
    pub im: f64,
    /// `|S_m| / n`.
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramDoc {
    pub bins: usize,
    pub counts: Vec<u64>,
    pub chi_square: f64,
}

/// Primitive vectors (both signs, so twice the number of samples) against
/// `6 T² / (π area)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountDoc {
    pub count: u64,
    pub predicted: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub schema: u32,
    /// Samples, one per ±-class.
    pub n: usize,
    pub discrepancy_sk: f64,
    pub discrepancy_rho: f64,
    pub weyl: Vec<WeylEntry>,
    pub histogram: HistogramDoc,
    pub count_prediction: CountDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylDoc {
    pub schema: u32,
    pub n: usize,
    pub weyl: Vec<WeylEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCountEntry {
    pub epsilon: f64,
    pub count: u64,
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCountDoc {
    pub schema: u32,
    /// `3/π`, the limit of `ε N(ε)` for ±-classes.
    pub limit: f64,
    pub rows: Vec<OrbitCountEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplacianDoc {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub rel_err: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub schema: u32,
    pub m: i64,
    pub s: [f64; 2],
    pub trunc: f64,
    pub value: [f64; 2],
    pub tail_bound: f64,
    /// `2 ζ(s) β(s) / ζ(2s)`; only for z = i, m = 0 and real s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laplacian_check: Option<LaplacianDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub c: i64,
    pub d: i64,
    pub a: i64,
    pub b: i64,
    pub norm_sq: f64,
    pub sk: f64,
    pub rho: f64,
    pub im: f64,
}
