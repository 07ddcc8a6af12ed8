//! Oriented piecewise-linear curves in RP³.
//!
//! A curve is stored as a polyline of unit lifts on S³ together with a
//! closure sign σ: the wrap edge runs from the last vertex to σ times the
//! first. σ = +1 means the lift closes in S³ (the curve is null-homologous),
//! σ = -1 means it closes at the antipode (the curve generates H₁ = ℤ/2).
//!
//! Stored lift signs are free: edge extraction propagates signs along the
//! polyline, flipping a lift whenever the dot with its predecessor is
//! negative, so every edge spans at most a quarter turn. The declared σ
//! must agree with the propagated chain; validation rejects it otherwise.

mod io;
mod random;

pub use io::{find_curve, parse_curves, write_curves};
pub(crate) use random::subseed;
pub use random::{random_curve, random_disjoint_pair, PairSpec};

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::projgeom::{
    self, angle_from_cos, arc_between, arc_cos_between, arc_cos_to_point, lerp4, norm4, sub4,
    Lift4, Vec4,
};

/// Closure sign of a lifted polyline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closure {
    /// σ = +1: the lift closes in S³; homology class 0.
    Plus,
    /// σ = -1: the lift ends at the antipode of its start; homology class 1.
    Minus,
}

impl Closure {
    pub fn sign(self) -> f64 {
        match self {
            Closure::Plus => 1.0,
            Closure::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Option<Closure> {
        match s {
            1 => Some(Closure::Plus),
            -1 => Some(Closure::Minus),
            _ => None,
        }
    }
}

/// An oriented closed PL curve in RP³ with a weight coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct LiftedCurve {
    name: String,
    vertices: Vec<Lift4>,
    closure: Closure,
    weight: i64,
}

/// One directed edge of a curve with lift-consistent endpoints:
/// `start` and `end` are unit lifts with positive dot, and the projective
/// segment is the image of `(1-s) start + s end` for `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub index: usize,
    pub start: Lift4,
    pub end: Lift4,
}

impl Edge {
    /// Unit lift of the point at parameter `s` in `[0, 1]`.
    pub fn point_at(&self, s: f64) -> Lift4 {
        let v = lerp4(self.start.coords(), self.end.coords(), s);
        // Interior combinations of minor-arc endpoints stay well away from
        // zero: |v|^2 >= (1 + <P,Q>) / 2.
        let n = norm4(&v);
        Lift4::from_unit(projgeom::scale4(&v, 1.0 / n))
    }

    /// Constant tangent lift direction `end - start`. Flipping both edge
    /// lifts flips the tangent together with the point lift.
    pub fn tangent(&self) -> Vec4 {
        sub4(self.end.coords(), self.start.coords())
    }
}

impl LiftedCurve {
    /// Builds a curve from raw ℝ⁴ vertices, normalizing each to the unit
    /// sphere.
    pub fn new(
        name: impl Into<String>,
        raw_vertices: &[Vec4],
        closure: Closure,
        weight: i64,
        tol: &Tolerances,
    ) -> Result<LiftedCurve> {
        let lifts = raw_vertices
            .iter()
            .map(|v| Lift4::normalize(*v, tol.degeneracy))
            .collect::<Result<Vec<_>>>()?;
        Self::from_lifts(name, lifts, closure, weight)
    }

    pub fn from_lifts(
        name: impl Into<String>,
        vertices: Vec<Lift4>,
        closure: Closure,
        weight: i64,
    ) -> Result<LiftedCurve> {
        let name = name.into();
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices {
                curve: name,
                count: vertices.len(),
            });
        }
        Ok(LiftedCurve {
            name,
            vertices,
            closure,
            weight,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Lift4] {
        &self.vertices
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn with_weight(&self, weight: i64) -> LiftedCurve {
        LiftedCurve {
            weight,
            ..self.clone()
        }
    }

    pub fn with_name(&self, name: impl Into<String>) -> LiftedCurve {
        LiftedCurve {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Homology class in H₁(RP³) = ℤ/2: 0 for σ = +1, 1 for σ = -1.
    pub fn homology_class(&self) -> u8 {
        match self.closure {
            Closure::Plus => 0,
            Closure::Minus => 1,
        }
    }

    /// Extracts the edge list, flipping lift signs along the polyline so
    /// that every edge spans at most a quarter turn. The wrap edge ends at
    /// σ times the first vertex. Fails on consecutive lifts that are
    /// projectively equal or antipodal within the degeneracy margin, and on
    /// a closure sign that contradicts the propagated chain.
    pub fn edge_list(&self, tol: &Tolerances) -> Result<Vec<Edge>> {
        let n = self.vertices.len();
        let mut chain: Vec<Lift4> = Vec::with_capacity(n);
        chain.push(self.vertices[0]);
        for j in 1..n {
            let prev = chain[j - 1];
            let raw = self.vertices[j];
            let d = prev.dot(&raw);
            if d.abs() > 1.0 - tol.degeneracy {
                return Err(Error::DegenerateEdge {
                    curve: self.name.clone(),
                    index: j - 1,
                });
            }
            chain.push(if d < 0.0 { raw.flipped() } else { raw });
        }
        let wrap_end = match self.closure {
            Closure::Plus => chain[0],
            Closure::Minus => chain[0].flipped(),
        };
        let d = chain[n - 1].dot(&wrap_end);
        if d.abs() > 1.0 - tol.degeneracy {
            return Err(Error::DegenerateEdge {
                curve: self.name.clone(),
                index: n - 1,
            });
        }
        if d < 0.0 {
            return Err(Error::ClosureMismatch {
                curve: self.name.clone(),
            });
        }
        let mut edges: Vec<Edge> = (0..n - 1)
            .map(|i| Edge {
                index: i,
                start: chain[i],
                end: chain[i + 1],
            })
            .collect();
        edges.push(Edge {
            index: n - 1,
            start: chain[n - 1],
            end: wrap_end,
        });
        Ok(edges)
    }

    /// Full validation: edge extraction plus embeddedness. Non-adjacent
    /// edges must be separated by more than the separation tolerance, and
    /// the curve must not fold back onto itself at a vertex.
    pub fn validate(&self, tol: &Tolerances) -> Result<Vec<Edge>> {
        let edges = self.edge_list(tol)?;
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Shared-vertex pairs may only meet at the vertex; a
                    // fold-back retraces the previous edge.
                    let (incoming, outgoing) = if j == i + 1 {
                        (&edges[i], &edges[j])
                    } else {
                        (&edges[j], &edges[i])
                    };
                    let t_in = sub4(incoming.end.coords(), incoming.start.coords());
                    let t_out = sub4(outgoing.end.coords(), outgoing.start.coords());
                    let cosangle =
                        projgeom::dot4(&t_in, &t_out) / (norm4(&t_in) * norm4(&t_out));
                    if cosangle < -1.0 + tol.degeneracy {
                        return Err(Error::SelfIntersection {
                            curve: self.name.clone(),
                            edge_a: i,
                            edge_b: j,
                        });
                    }
                } else if projective_segment_angle(&edges[i], &edges[j]) <= tol.separation {
                    return Err(Error::SelfIntersection {
                        curve: self.name.clone(),
                        edge_a: i,
                        edge_b: j,
                    });
                }
            }
        }
        Ok(edges)
    }

    /// Unit lift of the point at parameter `s` on edge `i`.
    /// Panics if `i` is out of bounds.
    pub fn point_at(&self, i: usize, s: f64, tol: &Tolerances) -> Result<Lift4> {
        let edges = self.edge_list(tol)?;
        Ok(edges[i].point_at(s))
    }

    /// Tangent lift direction of edge `i`. Panics if `i` is out of bounds.
    pub fn tangent_at(&self, i: usize, tol: &Tolerances) -> Result<Vec4> {
        let edges = self.edge_list(tol)?;
        Ok(edges[i].tangent())
    }
}

/// Image-preserving curve rewrites used by the invariance tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveTransform {
    /// Reverse the orientation.
    Reverse,
    /// Start the vertex list `k` positions later.
    RotateStart(usize),
    /// Split edge `i` at its midpoint.
    Refine(usize),
    /// Replace every lift by its antipode.
    FlipAllLifts,
    /// Replace lift `i` by its antipode; edge extraction absorbs the flip.
    FlipOneLift(usize),
}

/// Applies an image-preserving rewrite. The result has the same projective
/// image as the input (reversed orientation for `Reverse`) and the same
/// closure sign.
pub fn transform(curve: &LiftedCurve, op: CurveTransform, tol: &Tolerances) -> Result<LiftedCurve> {
    let mut vertices = curve.vertices.to_vec();
    match op {
        CurveTransform::Reverse => {
            vertices.reverse();
        }
        CurveTransform::RotateStart(k) => {
            let n = vertices.len();
            vertices.rotate_left(k % n);
        }
        CurveTransform::Refine(i) => {
            let edges = curve.edge_list(tol)?;
            let e = &edges[i];
            let mid = e.point_at(0.5);
            vertices.insert(i + 1, mid);
        }
        CurveTransform::FlipAllLifts => {
            for v in vertices.iter_mut() {
                *v = v.flipped();
            }
        }
        CurveTransform::FlipOneLift(i) => {
            let n = vertices.len();
            vertices[i % n] = vertices[i % n].flipped();
        }
    }
    LiftedCurve::from_lifts(curve.name.clone(), vertices, curve.closure, curve.weight)
}

/// Projective angular distance between two edges (exact arc-to-arc distance
/// folded over the antipodal identification).
pub(crate) fn projective_segment_angle(e1: &Edge, e2: &Edge) -> f64 {
    let a = arc_between(&e1.start, &e1.end);
    let b = arc_between(&e2.start, &e2.end);
    angle_from_cos(arc_cos_between(&a, &b, true))
}

/// Projective angular distance from a point to the nearest edge of a list.
pub(crate) fn point_curve_angle(v: &Lift4, edges: &[Edge]) -> f64 {
    let mut best_cos: f64 = -1.0;
    for e in edges {
        let arc = arc_between(&e.start, &e.end);
        best_cos = best_cos.max(arc_cos_to_point(&arc, v.coords(), true));
    }
    angle_from_cos(best_cos)
}

/// Minimum projective distance between two curves, as an angle on RP³.
/// Zero for overlapping curves; used to enforce disjointness margins.
pub fn min_separation(c1: &LiftedCurve, c2: &LiftedCurve, tol: &Tolerances) -> Result<f64> {
    let e1 = c1.edge_list(tol)?;
    let e2 = c2.edge_list(tol)?;
    let mut best = f64::INFINITY;
    for a in &e1 {
        for b in &e2 {
            let d = projective_segment_angle(a, b);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}
