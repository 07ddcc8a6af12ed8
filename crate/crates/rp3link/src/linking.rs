//! The linking engine: enumerate every line through a generic viewpoint that
//! meets both curves, sign each crossing, and sum.
//!
//! A line through the viewpoint v meeting curve edges at X(s) and Y(u)
//! corresponds to the chart projections of X(s) and Y(u) being parallel,
//! i.e. the 3-vector cross product of the projections vanishing. Each
//! component of that cross product is bilinear in (s, u); eliminating u
//! between the two best-conditioned components leaves a quadratic in s, so
//! an edge pair contributes at most two crossings. The crossing sign is the
//! sign of `det4(X, A, Y, B)` with lift-consistent edge tangents A and B,
//! which evaluates the standard orientation on the local frame of the
//! line-counting map. Any near-degeneracy rejects the whole viewpoint; a
//! fresh viewpoint is sampled instead of repairing individual crossings.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Tolerances};
use crate::curves::{min_separation, point_curve_angle, Edge, LiftedCurve};
use crate::error::{Error, Result};
use crate::projgeom::{
    chart_at, cross3, decompose_on_line, det4, norm3, norm4, scale4, Chart3, Lift4, Vec3, Vec4,
};
use crate::report::{DegreeReport, ViewpointInfo};

/// A screened candidate for the regular value of the line-counting map.
#[derive(Debug, Clone)]
pub struct Viewpoint {
    pub lift: Lift4,
    pub chart: Chart3,
    pub trial: u32,
    pub attempt: u32,
}

impl Viewpoint {
    pub fn at(lift: Lift4, trial: u32, attempt: u32) -> Viewpoint {
        Viewpoint {
            chart: chart_at(&lift),
            lift,
            trial,
            attempt,
        }
    }
}

/// One line through the viewpoint meeting both curves: the preimage data of
/// the regular value, with diagnostics.
///
/// `alpha` and `beta` satisfy `v = alpha * x + beta * y` for the recorded
/// lifts; `tau` is the sign-normalized beta fraction in (0, 1), the position
/// of v between x and y along the line.
#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub component_a: String,
    pub edge_a: usize,
    pub s: f64,
    pub component_b: String,
    pub edge_b: usize,
    pub u: f64,
    pub x: [f64; 4],
    pub y: [f64; 4],
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub sign: i8,
    pub residual: f64,
}

/// Identifies the edge pair a violation came from.
#[derive(Debug, Clone)]
pub struct PairId {
    pub component_a: String,
    pub edge_a: usize,
    pub component_b: String,
    pub edge_b: usize,
}

/// A reason to reject a viewpoint and resample. Viewpoint independence of
/// the degree makes resampling always sound.
#[derive(Debug, Clone)]
pub enum Violation {
    /// Viewpoint within the disjointness margin of a curve.
    CurveProximity { component: String, angle: f64 },
    /// The bilinear system for an edge pair is rank-deficient (viewpoint
    /// coplanar with the edges); solutions would form a continuum.
    DegeneratePair { pair: PairId },
    /// A crossing parameter within the parameter tolerance of an edge
    /// endpoint.
    VertexParameter { pair: PairId, s: f64, u: f64 },
    /// Quadratic discriminant too close to zero: the line grazes a curve.
    Tangency { pair: PairId, discriminant: f64 },
    /// Collinearity residual in the band between clean acceptance and clean
    /// rejection.
    AmbiguousResidual { pair: PairId, residual: f64 },
    /// |det4| below the sign margin at a crossing.
    SignMargin { pair: PairId, det: f64 },
    /// Two crossings lie on the same line through the viewpoint (a triple
    /// point of the projection).
    CoincidentLines { first: PairId, second: PairId, sine: f64 },
    /// Self-linking only: a loop-class coefficient too close to zero.
    AmbiguousLoopClass { pair: PairId, alpha: f64, beta: f64 },
}

/// Raw solution of the collinearity system for one edge pair.
#[derive(Debug, Clone)]
pub struct PairSolution {
    pub s: f64,
    pub u: f64,
    /// Normalized collinearity residual of the full system at (s, u).
    pub residual: f64,
    pub(crate) x: Lift4,
    pub(crate) y: Lift4,
}

/// Solutions of one edge pair plus the normalized discriminant of the
/// eliminating quadratic (when the quadratic term is relevant).
#[derive(Debug, Clone)]
pub struct PairCrossings {
    pub solutions: Vec<PairSolution>,
    pub discriminant: Option<f64>,
}

/// Exact shared-lift corner of an adjacent edge pair (self-linking); the
/// corner solution is an artifact of the sharing, not a crossing, and is
/// divided out of the resultant exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Corner {
    None,
    /// e1.end == e2.start: artifact at (s, u) = (1, 0).
    EndStart,
    /// e1.start == e2.end: artifact at (s, u) = (0, 1).
    StartEnd,
}

struct PairDegenerate;

/// Guard for the tangency screen: a double root matters only when the
/// quadratic term is a genuine part of the normalized resultant.
const QUADRATIC_RELEVANCE: f64 = 1e-5;

fn solve_pair_raw(
    chart: &Chart3,
    e1: &Edge,
    e2: &Edge,
    corner: Corner,
    tol: &Tolerances,
) -> std::result::Result<PairCrossings, PairDegenerate> {
    let p0 = chart.project(e1.start.coords());
    let p1 = chart.project(e1.end.coords());
    let q0 = chart.project(e2.start.coords());
    let q1 = chart.project(e2.end.coords());
    let dp = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
    let dq = [q1[0] - q0[0], q1[1] - q0[1], q1[2] - q0[2]];

    // Cross product of the projected points, bilinear in (s, u):
    // c(s, u) = ca + s*cb + u*cc + s*u*cd.
    let ca = cross3(&p0, &q0);
    let mut cb = cross3(&dp, &q0);
    let mut cc = cross3(&p0, &dq);
    let cd = cross3(&dp, &dq);
    // Shared-lift corners make one coefficient exactly the negation of ca:
    // p1 == q0 gives cb = p1 x q0 - ca = -ca, and q1 == p0 gives cc = -ca.
    match corner {
        Corner::None => {}
        Corner::EndStart => cb = [-ca[0], -ca[1], -ca[2]],
        Corner::StartEnd => cc = [-ca[0], -ca[1], -ca[2]],
    }

    let mag = |k: usize| -> f64 {
        ca[k].abs()
            .max(cb[k].abs())
            .max(cc[k].abs())
            .max(cd[k].abs())
    };
    let mags = [mag(0), mag(1), mag(2)];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| mags[b].partial_cmp(&mags[a]).unwrap());
    let (k1, k2) = (order[0], order[1]);
    if mags[k1] < tol.residual || mags[k2] < tol.residual {
        // The system collapses to at most one independent equation.
        return Err(PairDegenerate);
    }

    let scale = mags[k1] * mags[k2];
    let band = tol.ambiguity_band * tol.residual;

    // Resultant of the k1 and k2 components after eliminating u.
    let mut discriminant = None;
    let roots: Vec<f64> = match corner {
        Corner::None => {
            let a = cb[k1] * cd[k2] - cb[k2] * cd[k1];
            let b = ca[k1] * cd[k2] + cb[k1] * cc[k2] - ca[k2] * cd[k1] - cb[k2] * cc[k1];
            let c = ca[k1] * cc[k2] - ca[k2] * cc[k1];
            let m = a.abs().max(b.abs()).max(c.abs());
            if m < band * scale {
                return Err(PairDegenerate);
            }
            let (a, b, c) = (a / m, b / m, c / m);
            let disc = b * b - 4.0 * a * c;
            if a.abs() > QUADRATIC_RELEVANCE {
                discriminant = Some(disc);
                if disc.abs() < tol.disc {
                    // Reported through the discriminant channel; the caller
                    // turns it into a tangency violation.
                    return Ok(PairCrossings {
                        solutions: Vec::new(),
                        discriminant,
                    });
                }
            }
            if disc < 0.0 {
                Vec::new()
            } else {
                let sq = disc.sqrt();
                let qq = -0.5 * (b + b.signum() * sq);
                let mut rs = Vec::with_capacity(2);
                if a.abs() > 0.0 {
                    rs.push(qq / a);
                }
                if qq.abs() > 0.0 {
                    rs.push(c / qq);
                }
                rs
            }
        }
        Corner::EndStart => {
            // R(s) = (1 - s) * (l0 + s * l1); the artifact factor is exact.
            let l0 = ca[k1] * cc[k2] - ca[k2] * cc[k1];
            let l1 = ca[k1] * cd[k2] - ca[k2] * cd[k1];
            linear_root(l0, l1, band * scale)?
        }
        Corner::StartEnd => {
            // R(s) = s * (l0 + s * l1).
            let l0 = ca[k1] * cd[k2] - ca[k2] * cd[k1] + ca[k1] * cb[k2] - ca[k2] * cb[k1];
            let l1 = cb[k1] * cd[k2] - cb[k2] * cd[k1];
            linear_root(l0, l1, band * scale)?
        }
    };

    let pad = tol.param;
    let mut solutions = Vec::new();
    for s in roots {
        if !s.is_finite() || !(-pad..=1.0 + pad).contains(&s) {
            continue;
        }
        // Solve the best-conditioned component for u at this s.
        let f = [
            cc[0] + s * cd[0],
            cc[1] + s * cd[1],
            cc[2] + s * cd[2],
        ];
        let e = [
            ca[0] + s * cb[0],
            ca[1] + s * cb[1],
            ca[2] + s * cb[2],
        ];
        let mut j = 0;
        for k in 1..3 {
            if f[k].abs() > f[j].abs() {
                j = k;
            }
        }
        let fmax = f[j].abs();
        let emax = e[0].abs().max(e[1].abs()).max(e[2].abs());
        if fmax < tol.residual * mags[k1] {
            if emax < tol.residual * mags[k1] {
                // u is unconstrained along this s: a continuum of solutions.
                return Err(PairDegenerate);
            }
            continue;
        }
        let u = -e[j] / f[j];
        if !u.is_finite() || !(-pad..=1.0 + pad).contains(&u) {
            continue;
        }
        // Full-system residual at the normalized points; roots of the
        // two-component elimination that fail the remaining component by a
        // clear margin are not solutions at all.
        let x = Edge::point_at(e1, s.clamp(0.0, 1.0));
        let y = Edge::point_at(e2, u.clamp(0.0, 1.0));
        let px = chart.project(x.coords());
        let py = chart.project(y.coords());
        let denom = norm3(&px) * norm3(&py);
        if denom <= 0.0 {
            return Err(PairDegenerate);
        }
        let residual = norm3(&cross3(&px, &py)) / denom;
        if residual > band {
            continue;
        }
        solutions.push(PairSolution {
            s,
            u,
            residual,
            x,
            y,
        });
    }
    Ok(PairCrossings {
        solutions,
        discriminant,
    })
}

fn linear_root(l0: f64, l1: f64, degenerate_below: f64) -> std::result::Result<Vec<f64>, PairDegenerate> {
    if l0.abs().max(l1.abs()) < degenerate_below {
        return Err(PairDegenerate);
    }
    if l1.abs() <= f64::EPSILON * l0.abs() {
        return Ok(Vec::new());
    }
    Ok(vec![-l0 / l1])
}

/// All collinear parameter pairs of one edge pair through the viewpoint.
/// Solutions within the parameter tolerance outside [0, 1] are included so
/// the genericity screens can see them.
pub fn edge_pair_crossings(
    vp: &Viewpoint,
    e1: &Edge,
    e2: &Edge,
    tol: &Tolerances,
) -> Result<PairCrossings> {
    solve_pair_raw(&vp.chart, e1, e2, Corner::None, tol).map_err(|_| Error::DegeneratePair {
        edge_a: e1.index,
        edge_b: e2.index,
    })
}

/// `det4(x, a, y, b)` with unit-normalized tangents; the sign is the local
/// writhe of the crossing. Flipping the lift pair (x, a) or (y, b) flips two
/// columns, so any lift-consistent pair gives the same value.
pub(crate) fn normalized_crossing_det(x: &Lift4, a: &Vec4, y: &Lift4, b: &Vec4) -> f64 {
    let an = scale4(a, 1.0 / norm4(a));
    let bn = scale4(b, 1.0 / norm4(b));
    det4(x.coords(), &an, y.coords(), &bn)
}

/// Crossing sign ±1, requiring the orientation determinant to clear the
/// sign margin.
pub fn crossing_sign(x: &Lift4, a: &Vec4, y: &Lift4, b: &Vec4, sign_margin: f64) -> Result<i8> {
    let det = normalized_crossing_det(x, a, y, b);
    if det.abs() < sign_margin {
        return Err(Error::SignMarginViolation { det });
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}

// ---------------------------------------------------------------------------
// Viewpoint scans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct ComponentGeom {
    pub name: String,
    pub weight: i64,
    pub edges: Vec<Edge>,
}

pub(crate) fn prepare_side(curves: &[LiftedCurve], tol: &Tolerances) -> Result<Vec<ComponentGeom>> {
    curves
        .iter()
        .map(|c| {
            let edges = c.validate(tol)?;
            Ok(ComponentGeom {
                name: c.name().to_string(),
                weight: c.weight(),
                edges,
            })
        })
        .collect()
}

/// Every curve across the two sides must be pairwise disjoint (weighted
/// cycles have disjoint supports).
pub(crate) fn check_disjointness(
    side_a: &[LiftedCurve],
    side_b: &[LiftedCurve],
    tol: &Tolerances,
) -> Result<()> {
    let all: Vec<&LiftedCurve> = side_a.iter().chain(side_b.iter()).collect();
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let sep = min_separation(all[i], all[j], tol)?;
            if sep <= tol.separation {
                return Err(Error::CurvesNotDisjoint {
                    a: all[i].name().to_string(),
                    b: all[j].name().to_string(),
                    separation: sep,
                    margin: tol.separation,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct PairTask {
    comp_a: usize,
    edge_a: usize,
    comp_b: usize,
    edge_b: usize,
    corner: Corner,
}

fn inter_tasks(side_a: &[ComponentGeom], side_b: &[ComponentGeom]) -> Vec<PairTask> {
    let mut tasks = Vec::new();
    for (ai, ca) in side_a.iter().enumerate() {
        for (bi, cb) in side_b.iter().enumerate() {
            for i in 0..ca.edges.len() {
                for j in 0..cb.edges.len() {
                    tasks.push(PairTask {
                        comp_a: ai,
                        edge_a: i,
                        comp_b: bi,
                        edge_b: j,
                        corner: Corner::None,
                    });
                }
            }
        }
    }
    tasks
}

fn self_tasks(comp: &ComponentGeom) -> Vec<PairTask> {
    let n = comp.edges.len();
    let mut tasks = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let corner = if j == i + 1 {
                Corner::EndStart
            } else if i == 0 && j == n - 1 {
                Corner::StartEnd
            } else {
                Corner::None
            };
            tasks.push(PairTask {
                comp_a: 0,
                edge_a: i,
                comp_b: 0,
                edge_b: j,
                corner,
            });
        }
    }
    tasks
}

#[allow(clippy::too_many_arguments)]
fn process_task(
    vp: &Viewpoint,
    ca: &ComponentGeom,
    cb: &ComponentGeom,
    task: &PairTask,
    self_mode: bool,
    tol: &Tolerances,
) -> std::result::Result<Vec<Crossing>, Violation> {
    let e1 = &ca.edges[task.edge_a];
    let e2 = &cb.edges[task.edge_b];
    let pid = || PairId {
        component_a: ca.name.clone(),
        edge_a: task.edge_a,
        component_b: cb.name.clone(),
        edge_b: task.edge_b,
    };
    let scan = solve_pair_raw(&vp.chart, e1, e2, task.corner, tol)
        .map_err(|_| Violation::DegeneratePair { pair: pid() })?;
    if let Some(disc) = scan.discriminant {
        if disc.abs() < tol.disc {
            return Err(Violation::Tangency {
                pair: pid(),
                discriminant: disc,
            });
        }
    }
    let mut out = Vec::new();
    for sol in &scan.solutions {
        if sol.residual >= tol.residual {
            if sol.residual <= tol.ambiguity_band * tol.residual {
                return Err(Violation::AmbiguousResidual {
                    pair: pid(),
                    residual: sol.residual,
                });
            }
            continue; // spurious root of the two-of-three elimination
        }
        let near_endpoint =
            |t: f64| t.abs() <= tol.param || (t - 1.0).abs() <= tol.param || !(0.0..=1.0).contains(&t);
        if near_endpoint(sol.s) || near_endpoint(sol.u) {
            return Err(Violation::VertexParameter {
                pair: pid(),
                s: sol.s,
                u: sol.u,
            });
        }
        let (alpha, beta, _) = decompose_on_line(
            &vp.lift,
            &sol.x,
            &sol.y,
            tol.ambiguity_band * tol.residual,
            tol.degeneracy,
        )
        .map_err(|_| Violation::AmbiguousResidual {
            pair: pid(),
            residual: sol.residual,
        })?;
        if self_mode && (alpha.abs() < tol.param || beta.abs() < tol.param) {
            return Err(Violation::AmbiguousLoopClass {
                pair: pid(),
                alpha,
                beta,
            });
        }
        let tangent_a = e1.tangent();
        let tangent_b = e2.tangent();
        let det = normalized_crossing_det(&sol.x, &tangent_a, &sol.y, &tangent_b);
        if det.abs() < tol.sign_margin {
            return Err(Violation::SignMargin {
                pair: pid(),
                det,
            });
        }
        out.push(Crossing {
            component_a: ca.name.clone(),
            edge_a: task.edge_a,
            s: sol.s,
            component_b: cb.name.clone(),
            edge_b: task.edge_b,
            u: sol.u,
            x: *sol.x.coords(),
            y: *sol.y.coords(),
            alpha,
            beta,
            tau: beta.abs() / (alpha.abs() + beta.abs()),
            sign: if det > 0.0 { 1 } else { -1 },
            residual: sol.residual,
        });
    }
    Ok(out)
}

fn coincident_lines(vp: &Viewpoint, crossings: &[Crossing], tol: &Tolerances) -> Option<Violation> {
    let dirs: Vec<Vec3> = crossings
        .iter()
        .map(|c| {
            let p = vp.chart.project(&c.x);
            let n = norm3(&p);
            [p[0] / n, p[1] / n, p[2] / n]
        })
        .collect();
    for i in 0..crossings.len() {
        for j in (i + 1)..crossings.len() {
            let sine = norm3(&cross3(&dirs[i], &dirs[j]));
            if sine < tol.param {
                let pid = |c: &Crossing| PairId {
                    component_a: c.component_a.clone(),
                    edge_a: c.edge_a,
                    component_b: c.component_b.clone(),
                    edge_b: c.edge_b,
                };
                return Some(Violation::CoincidentLines {
                    first: pid(&crossings[i]),
                    second: pid(&crossings[j]),
                    sine,
                });
            }
        }
    }
    None
}

pub(crate) enum ScanOutcome {
    /// `value` is the weighted degree for linking scans and the self-linking
    /// count for self scans.
    Generic { value: i64, crossings: Vec<Crossing> },
    Rejected(Violation),
}

pub(crate) fn scan_linking(
    vp: &Viewpoint,
    side_a: &[ComponentGeom],
    side_b: &[ComponentGeom],
    tol: &Tolerances,
) -> ScanOutcome {
    for comp in side_a.iter().chain(side_b.iter()) {
        let angle = point_curve_angle(&vp.lift, &comp.edges);
        if angle <= tol.separation {
            return ScanOutcome::Rejected(Violation::CurveProximity {
                component: comp.name.clone(),
                angle,
            });
        }
    }
    let tasks = inter_tasks(side_a, side_b);
    let results: Vec<std::result::Result<Vec<Crossing>, Violation>> = tasks
        .par_iter()
        .map(|t| process_task(vp, &side_a[t.comp_a], &side_b[t.comp_b], t, false, tol))
        .collect();
    let mut crossings = Vec::new();
    let mut value = 0i64;
    for (task, res) in tasks.iter().zip(results) {
        match res {
            Err(v) => return ScanOutcome::Rejected(v),
            Ok(list) => {
                let w = side_a[task.comp_a].weight * side_b[task.comp_b].weight;
                for c in list {
                    value += w * c.sign as i64;
                    crossings.push(c);
                }
            }
        }
    }
    if let Some(v) = coincident_lines(vp, &crossings, tol) {
        return ScanOutcome::Rejected(v);
    }
    ScanOutcome::Generic { value, crossings }
}

pub(crate) fn scan_self(vp: &Viewpoint, comp: &ComponentGeom, tol: &Tolerances) -> ScanOutcome {
    let angle = point_curve_angle(&vp.lift, &comp.edges);
    if angle <= tol.separation {
        return ScanOutcome::Rejected(Violation::CurveProximity {
            component: comp.name.clone(),
            angle,
        });
    }
    let tasks = self_tasks(comp);
    let results: Vec<std::result::Result<Vec<Crossing>, Violation>> = tasks
        .par_iter()
        .map(|t| process_task(vp, comp, comp, t, true, tol))
        .collect();
    let mut crossings = Vec::new();
    let mut value = 0i64;
    for res in results {
        match res {
            Err(v) => return ScanOutcome::Rejected(v),
            Ok(list) => {
                for c in list {
                    // Count only crossings whose associated loop is
                    // homologically nontrivial: same-sign coefficients.
                    if c.alpha * c.beta > 0.0 {
                        value += c.sign as i64;
                    }
                    crossings.push(c);
                }
            }
        }
    }
    if let Some(v) = coincident_lines(vp, &crossings, tol) {
        return ScanOutcome::Rejected(v);
    }
    ScanOutcome::Generic { value, crossings }
}

// ---------------------------------------------------------------------------
// Public single-viewpoint API
// ---------------------------------------------------------------------------

/// Result of evaluating one explicit viewpoint.
#[derive(Debug)]
pub enum ViewpointOutcome {
    Generic { d: i64, crossings: Vec<Crossing> },
    Rejected { violations: Vec<Violation> },
}

fn scan_diagnostic(
    vp: &Viewpoint,
    side_a: &[ComponentGeom],
    side_b: &[ComponentGeom],
    tol: &Tolerances,
) -> (i64, Vec<Crossing>, Vec<Violation>) {
    let mut violations = Vec::new();
    for comp in side_a.iter().chain(side_b.iter()) {
        let angle = point_curve_angle(&vp.lift, &comp.edges);
        if angle <= tol.separation {
            violations.push(Violation::CurveProximity {
                component: comp.name.clone(),
                angle,
            });
        }
    }
    let tasks = inter_tasks(side_a, side_b);
    let mut crossings = Vec::new();
    let mut d = 0i64;
    for task in &tasks {
        match process_task(
            vp,
            &side_a[task.comp_a],
            &side_b[task.comp_b],
            task,
            false,
            tol,
        ) {
            Err(v) => violations.push(v),
            Ok(list) => {
                let w = side_a[task.comp_a].weight * side_b[task.comp_b].weight;
                for c in list {
                    d += w * c.sign as i64;
                    crossings.push(c);
                }
            }
        }
    }
    if let Some(v) = coincident_lines(vp, &crossings, tol) {
        violations.push(v);
    }
    (d, crossings, violations)
}

/// Runs every genericity screen for an explicit viewpoint and reports all
/// violations; an empty list means the viewpoint is usable.
pub fn is_generic(
    side_a: &[LiftedCurve],
    side_b: &[LiftedCurve],
    vp: &Viewpoint,
    tol: &Tolerances,
) -> Result<Vec<Violation>> {
    let ca = prepare_side(side_a, tol)?;
    let cb = prepare_side(side_b, tol)?;
    check_disjointness(side_a, side_b, tol)?;
    let (_, _, violations) = scan_diagnostic(vp, &ca, &cb, tol);
    Ok(violations)
}

/// Single-trial degree through one explicit viewpoint.
pub fn degree_through_viewpoint(
    side_a: &[LiftedCurve],
    side_b: &[LiftedCurve],
    vp: &Viewpoint,
    tol: &Tolerances,
) -> Result<ViewpointOutcome> {
    let ca = prepare_side(side_a, tol)?;
    let cb = prepare_side(side_b, tol)?;
    check_disjointness(side_a, side_b, tol)?;
    let (d, crossings, violations) = scan_diagnostic(vp, &ca, &cb, tol);
    if violations.is_empty() {
        Ok(ViewpointOutcome::Generic { d, crossings })
    } else {
        Ok(ViewpointOutcome::Rejected { violations })
    }
}

// ---------------------------------------------------------------------------
// Multi-trial driver
// ---------------------------------------------------------------------------

pub(crate) fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

pub(crate) fn sample_viewpoint_lift(rng: &mut ChaCha8Rng) -> Lift4 {
    loop {
        let mut v: Vec4 = [0.0; 4];
        for c in v.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        if let Ok(lift) = Lift4::normalize(v, 1e-3) {
            return lift;
        }
    }
}

/// The viewpoint for (trial, attempt): preview viewpoints are consumed by
/// the first attempts of trial 0, everything else is sampled from the
/// trial's own stream.
pub(crate) fn viewpoint_for(
    cfg: &RunConfig,
    rng: &mut ChaCha8Rng,
    trial: u32,
    attempt: u32,
) -> Result<Lift4> {
    if trial == 0 && (attempt as usize) < cfg.preview_viewpoints.len() {
        return Lift4::normalize(cfg.preview_viewpoints[attempt as usize], cfg.tol.degeneracy)
            .map_err(|_| Error::BadConfig {
                message: "preview viewpoint is a zero vector".into(),
            });
    }
    Ok(sample_viewpoint_lift(rng))
}

/// Linking of two weighted multi-component cycles: the degree sums the
/// weighted crossing signs over all cross pairs of components.
pub fn linking_number_sides(
    side_a: &[LiftedCurve],
    side_b: &[LiftedCurve],
    cfg: &RunConfig,
) -> Result<DegreeReport> {
    cfg.validate()?;
    let tol = &cfg.tol;
    let ca = prepare_side(side_a, tol)?;
    let cb = prepare_side(side_b, tol)?;
    check_disjointness(side_a, side_b, tol)?;

    let mut per_viewpoint_d = Vec::with_capacity(cfg.trials as usize);
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
            match scan_linking(&vp, &ca, &cb, tol) {
                ScanOutcome::Rejected(v) => {
                    last_violation = Some(v);
                    continue;
                }
                ScanOutcome::Generic { value, crossings } => {
                    per_viewpoint_d.push(value);
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
    let d = per_viewpoint_d[0];
    if per_viewpoint_d.iter().any(|&v| v != d) {
        return Err(Error::TrialsDisagree {
            values: per_viewpoint_d,
        });
    }
    let (viewpoint, crossings) = kept.expect("at least one trial");
    Ok(DegreeReport {
        d,
        lk: d as f64 / 2.0,
        crossings,
        viewpoint,
        viewpoints_tried: tried,
        per_viewpoint_d,
    })
}

/// Linking number of two disjoint oriented curves: the signed count of
/// lines through a generic point meeting both, halved.
pub fn linking_number(c1: &LiftedCurve, c2: &LiftedCurve, cfg: &RunConfig) -> Result<DegreeReport> {
    linking_number_sides(std::slice::from_ref(c1), std::slice::from_ref(c2), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Closure;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn lift(v: Vec4) -> Lift4 {
        Lift4::normalize(v, 1e-7).unwrap()
    }

    fn edge(p: Vec4, q: Vec4) -> Edge {
        Edge {
            index: 0,
            start: lift(p),
            end: lift(q),
        }
    }

    #[test]
    fn hand_solved_pair_crossing() {
        // v = (1,1,1,1)/2 sits on the line through the midpoints of the
        // e1-e2 and e3-e4 edges: the unique solution is (s, u) = (1/2, 1/2).
        let vp = Viewpoint::at(lift([1.0, 1.0, 1.0, 1.0]), 0, 0);
        let e1 = edge([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
        let e2 = edge([0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]);
        let found = edge_pair_crossings(&vp, &e1, &e2, &tol()).unwrap();
        assert_eq!(found.solutions.len(), 1);
        let sol = &found.solutions[0];
        assert!((sol.s - 0.5).abs() < 1e-12, "s = {}", sol.s);
        assert!((sol.u - 0.5).abs() < 1e-12, "u = {}", sol.u);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn distant_edges_have_no_crossing() {
        let vp = Viewpoint::at(lift([0.0, 0.0, 0.0, 1.0]), 0, 0);
        let e1 = edge([1.0, 0.0, 0.0, 0.0], [1.0, 0.2, 0.0, 0.0]);
        let e2 = edge([1.0, 0.0, 0.2, 0.0], [1.0, 0.1, 0.2, 0.0]);
        let found = edge_pair_crossings(&vp, &e1, &e2, &tol()).unwrap();
        assert!(found.solutions.is_empty());
    }

    #[test]
    fn coplanar_viewpoint_is_degenerate() {
        // Both edges and the viewpoint inside span(e1, e2, e3).
        let e1 = edge([1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0]);
        let e2 = edge([0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 1.0, 0.0]);
        let vp = Viewpoint::at(lift([1.0, -1.0, 1.0, 0.0]), 0, 0);
        assert!(matches!(
            edge_pair_crossings(&vp, &e1, &e2, &tol()),
            Err(Error::DegeneratePair { .. })
        ));
    }

    #[test]
    fn crossing_sign_basis_cases() {
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0, 0.0];
        let e3v = [0.0, 0.0, 1.0, 0.0];
        let e4v = [0.0, 0.0, 0.0, 1.0];
        let margin = 1e-9;
        assert_eq!(
            crossing_sign(&lift(e1), &e2, &lift(e3v), &e4v, margin).unwrap(),
            1
        );
        // Flipping one lift pair flips two determinant columns.
        let neg = |v: Vec4| [-v[0], -v[1], -v[2], -v[3]];
        assert_eq!(
            crossing_sign(&lift(neg(e1)), &neg(e2), &lift(e3v), &e4v, margin).unwrap(),
            1
        );
        assert_eq!(
            crossing_sign(&lift(e1), &e2, &lift(e4v), &e3v, margin).unwrap(),
            -1
        );
        // Swapping the two pairs is an even column permutation.
        assert_eq!(
            crossing_sign(&lift(e3v), &e4v, &lift(e1), &e2, margin).unwrap(),
            1
        );
    }

    #[test]
    fn sign_margin_is_enforced() {
        let x = lift([1.0, 0.0, 0.0, 0.0]);
        let a = [0.0, 1.0, 0.0, 0.0];
        // y, b nearly in span(x, a): tiny determinant.
        let y = lift([1.0, 1e-12, 1e-12, 0.0]);
        let b = [0.0, 1.0, 0.0, 1e-12];
        assert!(matches!(
            crossing_sign(&x, &a, &y, &b, 1e-9),
            Err(Error::SignMarginViolation { .. })
        ));
    }

    #[test]
    fn crafted_vertex_viewpoint_is_rejected() {
        // A viewpoint on the line through a vertex of each curve.
        let ca = crate::curves::random_curve("A", 11, 16, 0, 1.0, &tol()).unwrap();
        let cb = crate::curves::random_curve("B", 12, 16, 0, 1.0, &tol()).unwrap();
        let x = ca.vertices()[0];
        let y = cb.vertices()[0];
        let mid = lift([
            x.coords()[0] + y.coords()[0],
            x.coords()[1] + y.coords()[1],
            x.coords()[2] + y.coords()[2],
            x.coords()[3] + y.coords()[3],
        ]);
        let vp = Viewpoint::at(mid, 0, 0);
        let viols = is_generic(
            std::slice::from_ref(&ca),
            std::slice::from_ref(&cb),
            &vp,
            &tol(),
        )
        .unwrap();
        assert!(!viols.is_empty());
        assert!(viols
            .iter()
            .any(|v| matches!(v, Violation::VertexParameter { .. })));
    }

    #[test]
    fn viewpoint_on_curve_is_rejected() {
        let c = crate::curves::random_curve("A", 3, 16, 0, 1.0, &tol()).unwrap();
        let edges = c.validate(&tol()).unwrap();
        let on_curve = edges[2].point_at(0.37);
        let vp = Viewpoint::at(on_curve, 0, 0);
        let other = crate::curves::random_curve("B", 4, 16, 0, 1.0, &tol()).unwrap();
        let viols = is_generic(
            std::slice::from_ref(&c),
            std::slice::from_ref(&other),
            &vp,
            &tol(),
        )
        .unwrap();
        assert!(viols
            .iter()
            .any(|v| matches!(v, Violation::CurveProximity { .. })));
    }

    #[test]
    fn split_affine_circles_have_zero_linking() {
        let mk = |name: &str, cx: f64, plane_xy: bool| {
            let verts: Vec<Vec4> = (0..16)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                    let (a, b) = (0.4 * t.cos(), 0.4 * t.sin());
                    if plane_xy {
                        [cx + a, b, 0.0, 1.0]
                    } else {
                        [cx + a, 0.0, b, 1.0]
                    }
                })
                .collect();
            LiftedCurve::new(name, &verts, Closure::Plus, 1, &tol()).unwrap()
        };
        let c1 = mk("A", -2.0, true);
        let c2 = mk("B", 2.0, false);
        let report = linking_number(&c1, &c2, &RunConfig::with_seed(5)).unwrap();
        assert_eq!(report.d, 0);
        assert_eq!(report.lk, 0.0);
    }
}
