//! Self-linking number of a null-homologous knot in RP³.
//!
//! The same crossing enumeration runs with both sides equal to the knot,
//! over unordered edge pairs. A crossing (x, v, y) is counted only when the
//! loop made of a knot half from x to y and the line arc between them that
//! avoids v is homologically nontrivial. With x and y lifted into the same
//! closed component upstairs and `v = alpha x + beta y`, the avoided arc
//! lifts from y back to -x exactly when alpha and beta have the same sign,
//! so the loop class is 1 iff `alpha * beta > 0`.

use crate::config::RunConfig;
use crate::curves::{Closure, LiftedCurve};
use crate::error::{Error, Result};
use crate::linking::{
    scan_self, trial_rng, viewpoint_for, ComponentGeom, Crossing, ScanOutcome, Viewpoint,
};
use crate::report::{SelfLinkReport, ViewpointInfo};

/// Homology class (0 or 1) of the loop associated with a self-crossing.
/// Errors when a coefficient is too small to classify reliably.
pub fn loop_class(crossing: &Crossing, margin: f64) -> Result<u8> {
    let (alpha, beta) = (crossing.alpha, crossing.beta);
    if alpha.abs() < margin || beta.abs() < margin {
        return Err(Error::AmbiguousClass { alpha, beta });
    }
    Ok(if alpha * beta > 0.0 { 1 } else { 0 })
}

/// Self-linking number of a null-homologous knot: the signed count of
/// loop-class-1 crossings through a generic viewpoint, with viewpoint
/// independence checked over `cfg.trials` trials.
pub fn self_linking(k: &LiftedCurve, cfg: &RunConfig) -> Result<SelfLinkReport> {
    cfg.validate()?;
    if k.closure() == Closure::Minus {
        return Err(Error::NotNullHomologous {
            curve: k.name().to_string(),
        });
    }
    let tol = &cfg.tol;
    let edges = k.validate(tol)?;
    let comp = ComponentGeom {
        name: k.name().to_string(),
        weight: k.weight(),
        edges,
    };

    let mut per_viewpoint_sl = Vec::with_capacity(cfg.trials as usize);
    let mut kept: Option<(ViewpointInfo, Vec<Crossing>)> = None;
    let mut tried = 0u32;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let mut accepted = false;
        let mut last_violation = None;
        for attempt in 0..cfg.max_resamples {
            let lift = viewpoint_for(cfg, &mut rng, trial, attempt)?;
            tried += 1;
            let vp = Viewpoint::at(lift, trial, attempt);
            match scan_self(&vp, &comp, tol) {
                ScanOutcome::Rejected(v) => {
                    last_violation = Some(v);
                    continue;
                }
                ScanOutcome::Generic { value, crossings } => {
                    per_viewpoint_sl.push(value);
                    if kept.is_none() {
                        kept = Some((
                            ViewpointInfo {
                                lift: *vp.lift.coords(),
                                trial,
                                attempt,
                            },
                            crossings,
                        ));
                    }
                    accepted = true;
                    break;
                }
            }
        }
        if !accepted {
            return Err(Error::TooManyDegenerateViewpoints {
                attempts: tried,
                last: format!("{last_violation:?}"),
            });
        }
    }
    let sl = per_viewpoint_sl[0];
    if per_viewpoint_sl.iter().any(|&v| v != sl) {
        return Err(Error::TrialsDisagree {
            values: per_viewpoint_sl,
        });
    }
    let (viewpoint, crossings) = kept.expect("at least one trial");
    let (included, excluded): (Vec<Crossing>, Vec<Crossing>) = crossings
        .into_iter()
        .partition(|c| c.alpha * c.beta > 0.0);
    Ok(SelfLinkReport {
        sl,
        d: 2 * sl,
        included,
        excluded,
        viewpoint,
        viewpoints_tried: tried,
        per_viewpoint_sl,
    })
}
