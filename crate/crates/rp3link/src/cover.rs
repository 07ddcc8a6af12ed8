//! Independent ground truth through the double cover S³ → RP³.
//!
//! Curves lift to the sphere, where the classical linking number is
//! computed combinatorially: stereographic projection from a random pole
//! into ℝ³, a random plane projection, and a signed count of inter-curve
//! diagram crossings (half the sum, with the over-strand decided by depth).
//! Every result must be reproduced by three independent randomizations.
//!
//! This module shares only the projective kernel with the main engine; it
//! never touches the edge-pair solver or the crossing-sign determinant, so
//! agreement between the two paths is evidence rather than tautology.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::curves::LiftedCurve;
use crate::error::{Error, Result};
use crate::projgeom::{
    angle_from_cos, arc_between, arc_cos_between, arc_cos_to_point, complement_frame, dot4,
    lerp4, norm4, scale4, Lift4, Vec3, Vec4,
};

/// A closed polyline on S³: one sheet of a curve's preimage under the
/// covering map. The last edge returns to the first vertex.
#[derive(Debug, Clone, Serialize)]
pub struct CoverCurve {
    pub vertices: Vec<Vec4>,
    /// Name of the RP³ curve this sheet covers.
    pub source: String,
    pub sheet: u8,
}

/// Randomization knobs for the diagram computation.
#[derive(Debug, Clone)]
pub struct OracleParams {
    /// Poles closer than this angle to either curve are rejected.
    pub pole_margin: f64,
    /// Edges are subdivided to at most this angle before projection.
    pub max_edge_angle: f64,
    /// Independent randomizations that must agree.
    pub agreement_rounds: u32,
    /// Pole/direction draws per round before giving up.
    pub max_attempts: u32,
    /// Parameter and depth band treated as a degenerate diagram.
    pub diagram_tol: f64,
    /// Relative threshold for near-parallel projected segments.
    pub parallel_tol: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            pole_margin: 0.1,
            max_edge_angle: 0.1,
            agreement_rounds: 3,
            max_attempts: 64,
            diagram_tol: 1e-9,
            parallel_tol: 1e-12,
        }
    }
}

/// Lifts a curve to the sphere. A null-homologous curve has two sheets, the
/// propagated lift chain and its global negation; a generator-class curve
/// has a single sheet of doubled length.
pub fn preimage(c: &LiftedCurve, tol: &Tolerances) -> Result<Vec<CoverCurve>> {
    let edges = c.edge_list(tol)?;
    let chain: Vec<Vec4> = edges.iter().map(|e| *e.start.coords()).collect();
    let negated: Vec<Vec4> = chain.iter().map(|v| [-v[0], -v[1], -v[2], -v[3]]).collect();
    let curves = match c.homology_class() {
        0 => vec![
            CoverCurve {
                vertices: chain,
                source: c.name().to_string(),
                sheet: 0,
            },
            CoverCurve {
                vertices: negated,
                source: c.name().to_string(),
                sheet: 1,
            },
        ],
        _ => {
            let mut doubled = chain;
            doubled.extend(negated);
            vec![CoverCurve {
                vertices: doubled,
                source: c.name().to_string(),
                sheet: 0,
            }]
        }
    };
    Ok(curves)
}

fn closed_edges(vertices: &[Vec4]) -> impl Iterator<Item = (&Vec4, &Vec4)> {
    let n = vertices.len();
    (0..n).map(move |i| (&vertices[i], &vertices[(i + 1) % n]))
}

/// Subdivides every edge so no arc exceeds `max_angle`.
fn subdivide(vertices: &[Vec4], max_angle: f64) -> Vec<Vec4> {
    let mut out = Vec::with_capacity(vertices.len() * 2);
    for (p, q) in closed_edges(vertices) {
        let cosang = dot4(p, q) / (norm4(p) * norm4(q));
        let angle = angle_from_cos(cosang);
        let pieces = (angle / max_angle).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let t = k as f64 / pieces as f64;
            let v = lerp4(p, q, t);
            out.push(scale4(&v, 1.0 / norm4(&v)));
        }
    }
    out
}

/// Minimum spherical (unfolded) distance between two closed polylines.
fn spherical_separation(a: &[Vec4], b: &[Vec4]) -> f64 {
    let arcs_a: Vec<_> = closed_edges(a)
        .map(|(p, q)| arc_between(&Lift4::normalize(*p, 1e-12).unwrap(), &Lift4::normalize(*q, 1e-12).unwrap()))
        .collect();
    let arcs_b: Vec<_> = closed_edges(b)
        .map(|(p, q)| arc_between(&Lift4::normalize(*p, 1e-12).unwrap(), &Lift4::normalize(*q, 1e-12).unwrap()))
        .collect();
    let mut best: f64 = -1.0;
    for aa in &arcs_a {
        for bb in &arcs_b {
            best = best.max(arc_cos_between(aa, bb, false));
        }
    }
    angle_from_cos(best)
}

struct NeedResample;

fn cross2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Counts signed inter-curve crossings of one projected diagram. `proj1`
/// and `proj2` hold (plane-x, plane-y, depth) per vertex; the viewer looks
/// down from positive depth.
fn diagram_sum(
    proj1: &[Vec3],
    proj2: &[Vec3],
    params: &OracleParams,
) -> std::result::Result<i64, NeedResample> {
    let n1 = proj1.len();
    let n2 = proj2.len();
    let edge = |list: &[Vec3], i: usize, n: usize| -> ([f64; 3], [f64; 3]) {
        (list[i], list[(i + 1) % n])
    };
    let sums: Vec<std::result::Result<i64, NeedResample>> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let (a0, a1) = edge(proj1, i, n1);
            let ra = (a1[0] - a0[0], a1[1] - a0[1]);
            let la = (ra.0 * ra.0 + ra.1 * ra.1).sqrt();
            let mut acc = 0i64;
            for j in 0..n2 {
                let (b0, b1) = edge(proj2, j, n2);
                let rb = (b1[0] - b0[0], b1[1] - b0[1]);
                let lb = (rb.0 * rb.0 + rb.1 * rb.1).sqrt();
                let scale = la.max(lb).max(1e-300);
                let denom = cross2(ra, rb);
                let offset = (b0[0] - a0[0], b0[1] - a0[1]);
                if denom.abs() < params.parallel_tol * la * lb {
                    // Parallel in the plane: degenerate only if the lines
                    // nearly coincide and the spans overlap.
                    let dist = cross2(offset, ra).abs() / la.max(1e-300);
                    if dist < params.diagram_tol * scale {
                        return Err(NeedResample);
                    }
                    continue;
                }
                let t = cross2(offset, rb) / denom;
                let v = cross2(offset, ra) / denom;
                let band = params.diagram_tol;
                if (t.abs() < band || (t - 1.0).abs() < band)
                    && (-band..=1.0 + band).contains(&v)
                {
                    return Err(NeedResample);
                }
                if (v.abs() < band || (v - 1.0).abs() < band)
                    && (-band..=1.0 + band).contains(&t)
                {
                    return Err(NeedResample);
                }
                if !(0.0..1.0).contains(&t) || !(0.0..1.0).contains(&v) {
                    continue;
                }
                let za = a0[2] + t * (a1[2] - a0[2]);
                let zb = b0[2] + v * (b1[2] - b0[2]);
                if (za - zb).abs() < params.diagram_tol * (1.0 + za.abs() + zb.abs()) {
                    return Err(NeedResample);
                }
                // Crossing sign: orientation of (tangent-over, tangent-under)
                // in the plane, the over strand having larger depth.
                let s = if za > zb {
                    cross2(ra, rb)
                } else {
                    cross2(rb, ra)
                };
                acc += if s > 0.0 { 1 } else { -1 };
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0i64;
    for s in sums {
        total += s?;
    }
    Ok(total)
}

/// Classical linking number of two disjoint closed polylines on S³, by
/// signed crossing counts in a random stereographic diagram, stable over
/// `agreement_rounds` independent randomizations.
pub fn lk_s3(k1: &CoverCurve, k2: &CoverCurve, seed: u64, params: &OracleParams) -> Result<i64> {
    let sep = spherical_separation(&k1.vertices, &k2.vertices);
    if sep <= 0.0 {
        return Err(Error::CurvesNotDisjoint {
            a: format!("{}[{}]", k1.source, k1.sheet),
            b: format!("{}[{}]", k2.source, k2.sheet),
            separation: sep,
            margin: 0.0,
        });
    }
    // Keep chord sagittas well below the curve separation so the projected
    // straight-edge diagram is isotopic to the true curves.
    let max_angle = params.max_edge_angle.min((sep / 2.0).sqrt());
    let v1 = subdivide(&k1.vertices, max_angle);
    let v2 = subdivide(&k2.vertices, max_angle);

    let arcs: Vec<_> = closed_edges(&k1.vertices)
        .chain(closed_edges(&k2.vertices))
        .map(|(p, q)| {
            arc_between(
                &Lift4::normalize(*p, 1e-12).unwrap(),
                &Lift4::normalize(*q, 1e-12).unwrap(),
            )
        })
        .collect();

    let mut values = Vec::with_capacity(params.agreement_rounds as usize);
    let mut total_attempts = 0u32;
    for round in 0..params.agreement_rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0x1000 + round as u64);
        let mut found = None;
        for _ in 0..params.max_attempts {
            total_attempts += 1;
            let pole = sample_unit(&mut rng);
            let pole_lift = Lift4::normalize(pole, 1e-6).unwrap();
            let clear = arcs.iter().all(|a| {
                angle_from_cos(arc_cos_to_point(a, pole_lift.coords(), false))
                    >= params.pole_margin
            });
            if !clear {
                continue;
            }
            // Frame with det4(pole, f1, f2, f3) < 0: stereographic projection
            // then carries the det4-positive orientation of S³ onto
            // right-handed ℝ³.
            let frame = complement_frame(&pole_lift, -1.0);
            let dirs = match random_rotation(&mut rng) {
                Some(d) => d,
                None => continue,
            };
            let project = |verts: &[Vec4]| -> Vec<Vec3> {
                verts
                    .iter()
                    .map(|q| {
                        let w = frame.project(q);
                        let denom = 1.0 - dot4(q, pole_lift.coords());
                        let p = [w[0] / denom, w[1] / denom, w[2] / denom];
                        [
                            p[0] * dirs[0][0] + p[1] * dirs[0][1] + p[2] * dirs[0][2],
                            p[0] * dirs[1][0] + p[1] * dirs[1][1] + p[2] * dirs[1][2],
                            p[0] * dirs[2][0] + p[1] * dirs[2][1] + p[2] * dirs[2][2],
                        ]
                    })
                    .collect()
            };
            let p1 = project(&v1);
            let p2 = project(&v2);
            match diagram_sum(&p1, &p2, params) {
                Err(NeedResample) => continue,
                Ok(sum) => {
                    if sum % 2 != 0 {
                        continue;
                    }
                    found = Some(sum / 2);
                    break;
                }
            }
        }
        match found {
            Some(v) => values.push(v),
            None => {
                return Err(Error::DegenerateProjection {
                    attempts: total_attempts,
                })
            }
        }
    }
    if values.iter().any(|&v| v != values[0]) {
        return Err(Error::DegenerateProjection {
            attempts: total_attempts,
        });
    }
    Ok(values[0])
}

fn sample_unit(rng: &mut ChaCha8Rng) -> Vec4 {
    loop {
        let mut v = [0.0; 4];
        for c in v.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        let n = norm4(&v);
        if n > 1e-3 {
            return scale4(&v, 1.0 / n);
        }
    }
}

/// Random right-handed orthonormal triple in ℝ³.
fn random_rotation(rng: &mut ChaCha8Rng) -> Option<[Vec3; 3]> {
    let mut m = [[0.0f64; 3]; 3];
    for row in m.iter_mut() {
        for c in row.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
    }
    // Gram-Schmidt.
    let norm = |v: &Vec3| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let n0 = norm(&m[0]);
    if n0 < 1e-6 {
        return None;
    }
    let d0 = [m[0][0] / n0, m[0][1] / n0, m[0][2] / n0];
    let dot = m[1][0] * d0[0] + m[1][1] * d0[1] + m[1][2] * d0[2];
    let mut d1 = [m[1][0] - dot * d0[0], m[1][1] - dot * d0[1], m[1][2] - dot * d0[2]];
    let n1 = norm(&d1);
    if n1 < 1e-6 {
        return None;
    }
    d1 = [d1[0] / n1, d1[1] / n1, d1[2] / n1];
    // d2 = d0 x d1 closes a right-handed frame.
    let d2 = [
        d0[1] * d1[2] - d0[2] * d1[1],
        d0[2] * d1[0] - d0[0] * d1[2],
        d0[0] * d1[1] - d0[1] * d1[0],
    ];
    Some([d0, d1, d2])
}

/// One sheet-pair value entering the projective linking sum.
#[derive(Debug, Clone, Serialize)]
pub struct OraclePairValue {
    pub component_a: String,
    pub sheet_a: u8,
    pub component_b: String,
    pub sheet_b: u8,
    pub lk_s3: i64,
}

/// Oracle result: `lk` is the half-integer projective linking number and
/// `d` its doubled (integer) value, the weighted sum of sheet-pair linking
/// numbers upstairs.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub lk: f64,
    pub d: i64,
    pub pairs: Vec<OraclePairValue>,
}

/// Linking number in RP³ through the cover: half the weighted sum of the
/// classical linking numbers of all preimage sheet pairs.
pub fn oracle_lk_rp3(
    side_a: &[LiftedCurve],
    side_b: &[LiftedCurve],
    seed: u64,
    params: &OracleParams,
    tol: &Tolerances,
) -> Result<OracleReport> {
    for c in side_a.iter().chain(side_b.iter()) {
        c.validate(tol)?;
    }
    crate::linking::check_disjointness(side_a, side_b, tol)?;
    let mut pairs = Vec::new();
    let mut d = 0i64;
    let mut counter = 0u64;
    for ca in side_a {
        let pre_a = preimage(ca, tol)?;
        for cb in side_b {
            let pre_b = preimage(cb, tol)?;
            for sa in &pre_a {
                for sb in &pre_b {
                    counter += 1;
                    let sub = crate::curves::subseed(seed, 0xc0fe_0000 + counter);
                    let value = lk_s3(sa, sb, sub, params)?;
                    d += ca.weight() * cb.weight() * value;
                    pairs.push(OraclePairValue {
                        component_a: ca.name().to_string(),
                        sheet_a: sa.sheet,
                        component_b: cb.name().to_string(),
                        sheet_b: sb.sheet,
                        lk_s3: value,
                    });
                }
            }
        }
    }
    Ok(OracleReport {
        lk: d as f64 / 2.0,
        d,
        pairs,
    })
}

/// Self-linking through the cover: the classical linking number of the two
/// preimage sheets of a null-homologous knot.
pub fn oracle_selflink(
    k: &LiftedCurve,
    seed: u64,
    params: &OracleParams,
    tol: &Tolerances,
) -> Result<i64> {
    if k.homology_class() != 0 {
        return Err(Error::NotNullHomologous {
            curve: k.name().to_string(),
        });
    }
    k.validate(tol)?;
    let sheets = preimage(k, tol)?;
    lk_s3(&sheets[0], &sheets[1], seed, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Closure;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn great_circle(plane: [usize; 2], n: usize, name: &str) -> LiftedCurve {
        let verts: Vec<Vec4> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let mut v = [0.0; 4];
                v[plane[0]] = t.cos();
                v[plane[1]] = t.sin();
                v
            })
            .collect();
        LiftedCurve::new(name, &verts, Closure::Plus, 1, &tol()).unwrap()
    }

    #[test]
    fn preimage_component_counts() {
        let c0 = great_circle([0, 1], 12, "A");
        let sheets = preimage(&c0, &tol()).unwrap();
        assert_eq!(sheets.len(), 2);
        assert_eq!(sheets[0].vertices.len(), 12);
        for (u, v) in sheets[0].vertices.iter().zip(&sheets[1].vertices) {
            for i in 0..4 {
                assert_eq!(u[i], -v[i]);
            }
        }

        let verts: Vec<Vec4> = (0..8)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 8.0;
                [t.cos(), t.sin(), 0.0, 0.0]
            })
            .collect();
        let c1 = LiftedCurve::new("L", &verts, Closure::Minus, 1, &tol()).unwrap();
        let sheets = preimage(&c1, &tol()).unwrap();
        assert_eq!(sheets.len(), 1);
        assert_eq!(sheets[0].vertices.len(), 16);
    }

    #[test]
    fn orthogonal_great_circles_link_once() {
        let a = great_circle([0, 1], 24, "A");
        let b = great_circle([2, 3], 24, "B");
        let pa = preimage(&a, &tol()).unwrap();
        let pb = preimage(&b, &tol()).unwrap();
        let v = lk_s3(&pa[0], &pb[0], 9, &OracleParams::default()).unwrap();
        assert_eq!(v.abs(), 1, "lk = {v}");
    }

    #[test]
    fn split_circles_do_not_link() {
        let mk = |name: &str, cx: f64| {
            let verts: Vec<Vec4> = (0..12)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 12.0;
                    [cx + 0.3 * t.cos(), 0.3 * t.sin(), 0.0, 1.0]
                })
                .collect();
            LiftedCurve::new(name, &verts, Closure::Plus, 1, &tol()).unwrap()
        };
        let a = mk("A", -2.0);
        let b = mk("B", 2.0);
        let report = oracle_lk_rp3(
            std::slice::from_ref(&a),
            std::slice::from_ref(&b),
            11,
            &OracleParams::default(),
            &tol(),
        )
        .unwrap();
        assert_eq!(report.d, 0);
        assert_eq!(report.lk, 0.0);
    }

    #[test]
    fn reversing_one_circle_negates_lk() {
        let a = great_circle([0, 1], 24, "A");
        let b = great_circle([2, 3], 24, "B");
        let rb = crate::curves::transform(&b, crate::curves::CurveTransform::Reverse, &tol())
            .unwrap();
        let pa = preimage(&a, &tol()).unwrap();
        let pb = preimage(&b, &tol()).unwrap();
        let prb = preimage(&rb, &tol()).unwrap();
        let v1 = lk_s3(&pa[0], &pb[0], 13, &OracleParams::default()).unwrap();
        let v2 = lk_s3(&pa[0], &prb[0], 13, &OracleParams::default()).unwrap();
        assert_eq!(v1, -v2);
    }

    #[test]
    fn affine_unknot_oracle_selflink_is_zero() {
        let verts: Vec<Vec4> = (0..16)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                [0.3 * t.cos(), 0.3 * t.sin(), 0.0, 1.0]
            })
            .collect();
        let k = LiftedCurve::new("K", &verts, Closure::Plus, 1, &tol()).unwrap();
        let v = oracle_selflink(&k, 17, &OracleParams::default(), &tol()).unwrap();
        assert_eq!(v, 0);
    }
}
