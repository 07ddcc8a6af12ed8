//! Result objects returned by the linking and self-linking engines.

use serde::Serialize;

use crate::linking::Crossing;

/// The viewpoint actually used for the reported crossings, with its seed
/// provenance (which trial and resampling attempt produced it).
#[derive(Debug, Clone, Serialize)]
pub struct ViewpointInfo {
    pub lift: [f64; 4],
    pub trial: u32,
    pub attempt: u32,
}

/// Outcome of a linking-number run.
///
/// `d` is the signed count of lines through the viewpoint meeting both
/// sides, weighted by the component weight products; the linking number is
/// `d / 2`. In multi-trial runs every viewpoint must produce the same `d`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub d: i64,
    /// `d / 2` as a float; exact for half-integers.
    pub lk: f64,
    pub crossings: Vec<Crossing>,
    pub viewpoint: ViewpointInfo,
    pub viewpoints_tried: u32,
    pub per_viewpoint_d: Vec<i64>,
}

/// Outcome of a self-linking run on a null-homologous knot.
///
/// `sl` counts each unordered geometric crossing once, keeping only those
/// whose associated loop is nontrivial in homology; `d = 2 * sl` reflects
/// that the underlying configuration space contains both orderings of every
/// crossing and the sign is order-invariant.
#[derive(Debug, Clone, Serialize)]
pub struct SelfLinkReport {
    pub sl: i64,
    pub d: i64,
    pub included: Vec<Crossing>,
    pub excluded: Vec<Crossing>,
    pub viewpoint: ViewpointInfo,
    pub viewpoints_tried: u32,
    pub per_viewpoint_sl: Vec<i64>,
}
