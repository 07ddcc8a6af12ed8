//! Linking numbers of piecewise-linear curves in real projective 3-space.
//!
//! The linking number of two disjoint oriented closed curves in RP³ is
//! computed as a signed count of lines: through a generic point v, count
//! every line meeting both curves, each with the writhe sign of the
//! corresponding crossing in the projection from v. The count d is
//! independent of the viewpoint and equals twice the linking number. The
//! same enumeration restricted to one null-homologous knot, filtered by the
//! homology class of the associated loop, yields its self-linking number.
//!
//! Every result can be cross-checked against an independent oracle that
//! lifts the curves to the double cover S³ and counts classical diagram
//! crossings there; see [`cover`].
//!
//! ```
//! use rp3link::{linking_number, random_disjoint_pair, PairSpec, RunConfig};
//!
//! let cfg = RunConfig::with_seed(7);
//! let (a, b) = random_disjoint_pair(7, &PairSpec::default(), &cfg.tol).unwrap();
//! let report = linking_number(&a, &b, &cfg).unwrap();
//! assert_eq!(report.d as f64, 2.0 * report.lk);
//! ```

pub mod config;
pub mod cover;
pub mod curves;
pub mod error;
pub mod linking;
pub mod projgeom;
pub mod report;
pub mod samples;
pub mod selflink;

pub use config::{RunConfig, Tolerances};
pub use cover::{lk_s3, oracle_lk_rp3, oracle_selflink, preimage, CoverCurve, OracleParams, OracleReport};
pub use curves::{
    find_curve, min_separation, parse_curves, random_curve, random_disjoint_pair, transform,
    write_curves, Closure, CurveTransform, Edge, LiftedCurve, PairSpec,
};
pub use error::{Error, Result};
pub use linking::{
    crossing_sign, degree_through_viewpoint, edge_pair_crossings, is_generic, linking_number,
    linking_number_sides, Crossing, PairCrossings, PairId, PairSolution, Viewpoint,
    ViewpointOutcome, Violation,
};
pub use projgeom::{chart_at, decompose_on_line, det4, normalize, Chart3, Lift4};
pub use report::{DegreeReport, SelfLinkReport, ViewpointInfo};
pub use selflink::{loop_class, self_linking};
