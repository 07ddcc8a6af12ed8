//! Homogeneous-coordinate kernel for RP³.
//!
//! Points of RP³ are represented by unit lifts on S³ ⊂ ℝ⁴; `v` and `-v` name
//! the same projective point. Every function here is either invariant under
//! negating a lift or documents the sign convention it requires. The
//! orientation convention for the whole crate: a tangent frame (f₁, f₂, f₃)
//! at a lift `p` is positive iff `det4(p, f₁, f₂, f₃) > 0`. This is
//! antipodally invariant (four sign flips), so it descends to RP³.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];
pub type Vec3 = [f64; 3];

#[inline]
pub fn dot4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
pub fn norm4(a: &Vec4) -> f64 {
    dot4(a, a).sqrt()
}

#[inline]
pub fn add4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[inline]
pub fn sub4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[inline]
pub fn scale4(a: &Vec4, t: f64) -> Vec4 {
    [a[0] * t, a[1] * t, a[2] * t, a[3] * t]
}

#[inline]
pub fn neg4(a: &Vec4) -> Vec4 {
    [-a[0], -a[1], -a[2], -a[3]]
}

/// `(1 - t) * a + t * b`
#[inline]
pub fn lerp4(a: &Vec4, b: &Vec4, t: f64) -> Vec4 {
    add4(&scale4(a, 1.0 - t), &scale4(b, t))
}

#[inline]
pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Determinant of the 4×4 matrix with columns `(a, b, c, d)`, expanded in
/// complementary 2×2 minors. Its sign evaluates the standard orientation of
/// RP³ on a frame; see the module docs.
pub fn det4(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    let ab01 = a[0] * b[1] - a[1] * b[0];
    let ab02 = a[0] * b[2] - a[2] * b[0];
    let ab03 = a[0] * b[3] - a[3] * b[0];
    let ab12 = a[1] * b[2] - a[2] * b[1];
    let ab13 = a[1] * b[3] - a[3] * b[1];
    let ab23 = a[2] * b[3] - a[3] * b[2];

    let cd01 = c[0] * d[1] - c[1] * d[0];
    let cd02 = c[0] * d[2] - c[2] * d[0];
    let cd03 = c[0] * d[3] - c[3] * d[0];
    let cd12 = c[1] * d[2] - c[2] * d[1];
    let cd13 = c[1] * d[3] - c[3] * d[1];
    let cd23 = c[2] * d[3] - c[3] * d[2];

    ab01 * cd23 - ab02 * cd13 + ab03 * cd12 + ab12 * cd03 - ab13 * cd02 + ab23 * cd01
}

/// A unit lift of a projective point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lift4([f64; 4]);

impl Lift4 {
    /// Normalizes `v` to the unit sphere. `margin` is the degeneracy
    /// threshold below which the vector is treated as zero. Idempotent:
    /// vectors already unit within 1e-12 are kept verbatim, so reloading a
    /// written file reproduces the same lifts bit for bit.
    pub fn normalize(v: Vec4, margin: f64) -> Result<Lift4> {
        let n = norm4(&v);
        if !(n > margin) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        if (n - 1.0).abs() <= 1e-12 {
            return Ok(Lift4(v));
        }
        Ok(Lift4(scale4(&v, 1.0 / n)))
    }

    /// Wraps a vector already known to be unit (edge midpoints and similar
    /// interior combinations). Debug-checked only.
    pub(crate) fn from_unit(v: Vec4) -> Lift4 {
        debug_assert!((norm4(&v) - 1.0).abs() < 1e-9);
        Lift4(v)
    }

    #[inline]
    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    /// The antipodal lift of the same projective point.
    #[inline]
    pub fn flipped(&self) -> Lift4 {
        Lift4(neg4(&self.0))
    }

    #[inline]
    pub fn dot(&self, other: &Lift4) -> f64 {
        dot4(&self.0, &other.0)
    }
}

/// See [`Lift4::normalize`].
pub fn normalize(v: Vec4, margin: f64) -> Result<Lift4> {
    Lift4::normalize(v, margin)
}

/// An orthonormal basis of the orthogonal complement of an anchor lift `v`,
/// oriented so that `det4(v, b₁, b₂, b₃) > 0`.
///
/// Projecting a lift `x` onto the basis gives homogeneous coordinates of the
/// line through `v` and `x`, viewed in the RP² of lines through the anchor.
/// The projection of `±v` itself is the zero vector.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Chart3 {
    basis: [Vec4; 3],
}

impl Chart3 {
    #[inline]
    pub fn project(&self, x: &Vec4) -> Vec3 {
        [
            dot4(&self.basis[0], x),
            dot4(&self.basis[1], x),
            dot4(&self.basis[2], x),
        ]
    }

    pub fn basis(&self) -> &[Vec4; 3] {
        &self.basis
    }
}

/// Orthonormal complement basis of `v` with `det4(v, b₁, b₂, b₃)` of the
/// requested sign (+1 or -1).
pub(crate) fn complement_frame(v: &Lift4, orientation: f64) -> Chart3 {
    let vc = v.coords();
    // Use the three axes least aligned with v as Gram-Schmidt seeds.
    let mut kmax = 0;
    for i in 1..4 {
        if vc[i].abs() > vc[kmax].abs() {
            kmax = i;
        }
    }
    let mut basis = [[0.0; 4]; 3];
    let mut j = 0;
    for axis in 0..4 {
        if axis == kmax {
            continue;
        }
        let mut b = [0.0; 4];
        b[axis] = 1.0;
        b = sub4(&b, &scale4(vc, dot4(&b, vc)));
        for prev in basis.iter().take(j) {
            b = sub4(&b, &scale4(prev, dot4(&b, prev)));
        }
        let n = norm4(&b);
        basis[j] = scale4(&b, 1.0 / n);
        j += 1;
    }
    let det = det4(vc, &basis[0], &basis[1], &basis[2]);
    if det * orientation < 0.0 {
        basis[2] = neg4(&basis[2]);
    }
    Chart3 { basis }
}

/// The positively oriented chart at `v`: `det4(v, b₁, b₂, b₃) > 0`.
pub fn chart_at(v: &Lift4) -> Chart3 {
    complement_frame(v, 1.0)
}

/// Writes `v = alpha * x + beta * y` for a point on the projective line
/// through `x` and `y`. Returns `(alpha, beta, residual)` where the residual
/// is `|v - alpha x - beta y|`.
///
/// Sign convention: the coefficients refer to the given lifts, so negating
/// `v` negates both, and negating `x` negates `alpha` only.
pub fn decompose_on_line(
    v: &Lift4,
    x: &Lift4,
    y: &Lift4,
    residual_tol: f64,
    span_margin: f64,
) -> Result<(f64, f64, f64)> {
    // Normal equations of the 4x2 least-squares problem; x and y are unit.
    let c = x.dot(y);
    let det = 1.0 - c * c;
    if det < span_margin {
        return Err(Error::DegenerateSpan);
    }
    let vx = dot4(v.coords(), x.coords());
    let vy = dot4(v.coords(), y.coords());
    let alpha = (vx - c * vy) / det;
    let beta = (vy - c * vx) / det;
    let recombined = add4(&scale4(x.coords(), alpha), &scale4(y.coords(), beta));
    let residual = norm4(&sub4(v.coords(), &recombined));
    if residual > residual_tol {
        return Err(Error::NotOnLine { residual });
    }
    Ok((alpha, beta, residual))
}

// ---------------------------------------------------------------------------
// Great-circle arc distances
// ---------------------------------------------------------------------------
//
// An edge of a validated curve is a minor arc of a great circle of S³. All
// separation and proximity tests below work with the exact arcs, not the ℝ⁴
// chords: chords of intersecting arcs generically miss each other in four
// dimensions, so chord distances cannot witness projective intersections.

/// Minor arc `t ↦ cos(t)·u + sin(t)·v`, `t ∈ [0, theta]`, with `(u, v)`
/// orthonormal.
#[derive(Debug, Clone, Copy)]
pub struct Arc {
    u: Vec4,
    v: Vec4,
    theta: f64,
}

pub fn arc_between(p: &Lift4, q: &Lift4) -> Arc {
    let c = p.dot(q);
    let rest = sub4(q.coords(), &scale4(p.coords(), c));
    let n = norm4(&rest);
    Arc {
        u: *p.coords(),
        v: scale4(&rest, 1.0 / n),
        theta: c.clamp(-1.0, 1.0).acos(),
    }
}

/// True iff `[lo, hi]` contains a multiple of `period`.
fn contains_multiple(lo: f64, hi: f64, period: f64) -> bool {
    (lo / period).ceil() * period <= hi
}

/// Maximum of `cos(g)` (or `|cos(g)|` when folding) over `g ∈ [lo, hi]`.
fn interval_max_cos(lo: f64, hi: f64, fold: bool) -> f64 {
    if fold {
        if contains_multiple(lo, hi, std::f64::consts::PI) {
            1.0
        } else {
            lo.cos().abs().max(hi.cos().abs())
        }
    } else if contains_multiple(lo, hi, 2.0 * std::f64::consts::PI) {
        1.0
    } else {
        lo.cos().max(hi.cos())
    }
}

/// True iff `x` is congruent mod `period` to a value in `[0, limit]`.
fn in_interval_mod(x: f64, period: f64, limit: f64) -> bool {
    let r = x - period * (x / period).floor();
    r <= limit
}

/// Maximum of `<x, point(t)>` over the arc (|·| when folding). The folded
/// version is the cosine of the projective distance from `[x]` to the arc.
pub fn arc_cos_to_point(arc: &Arc, x: &Vec4, fold: bool) -> f64 {
    let a = dot4(x, &arc.u);
    let b = dot4(x, &arc.v);
    let amp = (a * a + b * b).sqrt();
    let peak = b.atan2(a);
    let period = if fold {
        std::f64::consts::PI
    } else {
        2.0 * std::f64::consts::PI
    };
    if in_interval_mod(peak, period, arc.theta) {
        return amp;
    }
    let h0 = a;
    let h1 = a * arc.theta.cos() + b * arc.theta.sin();
    if fold {
        h0.abs().max(h1.abs())
    } else {
        h0.max(h1)
    }
}

/// Maximum of `<a(t), b(s)>` over both arcs (|·| when folding), computed in
/// closed form from the SVD of the 2×2 Gram block between the arc planes.
pub fn arc_cos_between(a: &Arc, b: &Arc, fold: bool) -> f64 {
    let m00 = dot4(&a.u, &b.u);
    let m01 = dot4(&a.u, &b.v);
    let m10 = dot4(&a.v, &b.u);
    let m11 = dot4(&a.v, &b.v);

    let e = 0.5 * (m00 + m11);
    let f = 0.5 * (m00 - m11);
    let g = 0.5 * (m10 + m01);
    let h = 0.5 * (m10 - m01);
    let q = (e * e + h * h).sqrt();
    let r = (f * f + g * g).sqrt();
    let s1 = q + r;

    // Boundary of the parameter rectangle: four point-to-arc problems.
    let p1 = Lift4(a.u);
    let q1 = Lift4(add4(
        &scale4(&a.u, a.theta.cos()),
        &scale4(&a.v, a.theta.sin()),
    ));
    let p2 = Lift4(b.u);
    let q2 = Lift4(add4(
        &scale4(&b.u, b.theta.cos()),
        &scale4(&b.v, b.theta.sin()),
    ));
    let mut best = arc_cos_to_point(b, p1.coords(), fold)
        .max(arc_cos_to_point(b, q1.coords(), fold))
        .max(arc_cos_to_point(a, p2.coords(), fold))
        .max(arc_cos_to_point(a, q2.coords(), fold));

    // Near-isoclinic planes: <a(t), b(s)> depends on one angle only, and the
    // boundary maxima above are not exhaustive. Handle the two circular
    // cases exactly (with the tiny residual amplitude folded in as slack).
    let iso = 1e-9 * s1.max(1.0);
    if r <= iso || q <= iso {
        let (amp, slack, lo, hi) = if r <= iso {
            // h ≈ q cos(t - s - atan2(h, e))
            let delta = h.atan2(e);
            (q, r, -b.theta - delta, a.theta - delta)
        } else {
            // h ≈ r cos(t + s - atan2(g, f))
            let delta = g.atan2(f);
            (r, q, -delta, a.theta + b.theta - delta)
        };
        let inner = (amp * interval_max_cos(lo, hi, fold) + slack).min(1.0);
        return best.max(inner);
    }

    // Interior candidates: |h| attains a local interior maximum only at the
    // aligned pair (t, s) = (theta_u, theta_v) and its π-shifts.
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta_u = 0.5 * (a1 + a2);
    let theta_v = 0.5 * (a1 - a2);
    let pi = std::f64::consts::PI;
    let aligned = if fold {
        in_interval_mod(theta_u, pi, a.theta) && in_interval_mod(theta_v, pi, b.theta)
    } else {
        (in_interval_mod(theta_u, 2.0 * pi, a.theta)
            && in_interval_mod(theta_v, 2.0 * pi, b.theta))
            || (in_interval_mod(theta_u + pi, 2.0 * pi, a.theta)
                && in_interval_mod(theta_v + pi, 2.0 * pi, b.theta))
    };
    if aligned {
        best = best.max(s1.min(1.0));
    }
    best
}

/// Converts a cosine to an angle, clamped into `[0, π]`.
pub fn angle_from_cos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: Vec4 = [1.0, 0.0, 0.0, 0.0];
    const E2: Vec4 = [0.0, 1.0, 0.0, 0.0];
    const E3: Vec4 = [0.0, 0.0, 1.0, 0.0];
    const E4: Vec4 = [0.0, 0.0, 0.0, 1.0];

    fn lift(v: Vec4) -> Lift4 {
        Lift4::normalize(v, 1e-7).unwrap()
    }

    #[test]
    fn normalize_scales_to_unit() {
        let l = lift([2.0, 0.0, 0.0, 0.0]);
        assert_eq!(l.coords(), &[1.0, 0.0, 0.0, 0.0]);

        let l = lift([1.0, 1.0, 1.0, 1.0]);
        for c in l.coords() {
            assert!((c - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(matches!(
            Lift4::normalize([0.0; 4], 1e-7),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            Lift4::normalize([1e-9, 0.0, 0.0, 0.0], 1e-7),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn det4_basis_cases() {
        assert_eq!(det4(&E1, &E2, &E3, &E4), 1.0);
        assert_eq!(det4(&E2, &E1, &E3, &E4), -1.0);
        assert_eq!(det4(&E1, &E1, &E3, &E4), 0.0);
    }

    #[test]
    fn chart_orientation_is_positive() {
        for v in [
            lift(E1),
            lift(E4),
            lift([0.3, -0.7, 0.2, 0.1]),
            lift([-1.0, 2.0, -3.0, 4.0]),
        ] {
            let chart = chart_at(&v);
            let b = chart.basis();
            let det = det4(v.coords(), &b[0], &b[1], &b[2]);
            assert!(det > 0.99, "det = {det}");
            for i in 0..3 {
                assert!(dot4(&b[i], v.coords()).abs() < 1e-12);
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot4(&b[i], &b[j]) - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn chart_projects_anchor_to_zero() {
        let v = lift([0.3, -0.7, 0.2, 0.1]);
        let chart = chart_at(&v);
        let p = chart.project(v.coords());
        assert!(norm3(&p) < 1e-12);
        let q = chart.project(v.flipped().coords());
        assert!(norm3(&q) < 1e-12);
    }

    #[test]
    fn decompose_symmetric_combination() {
        let v = lift([1.0, 1.0, 0.0, 0.0]);
        let (a, b, r) = decompose_on_line(&v, &lift(E1), &lift(E2), 1e-9, 1e-9).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((a - inv_sqrt2).abs() < 1e-14);
        assert!((b - inv_sqrt2).abs() < 1e-14);
        assert!(r < 1e-14);
    }

    #[test]
    fn decompose_endpoint_case() {
        let (a, b, _) = decompose_on_line(&lift(E1), &lift(E1), &lift(E2), 1e-9, 1e-9).unwrap();
        assert!((a - 1.0).abs() < 1e-14);
        assert!(b.abs() < 1e-14);
    }

    #[test]
    fn decompose_rejects_off_line_point() {
        assert!(matches!(
            decompose_on_line(&lift(E3), &lift(E1), &lift(E2), 1e-9, 1e-9),
            Err(Error::NotOnLine { .. })
        ));
    }

    #[test]
    fn decompose_rejects_parallel_span() {
        assert!(matches!(
            decompose_on_line(&lift(E1), &lift(E2), &lift(E2), 1e-9, 1e-9),
            Err(Error::DegenerateSpan)
        ));
    }

    #[test]
    fn arc_distance_orthogonal_planes() {
        let a = arc_between(&lift(E1), &lift(E2));
        let b = arc_between(&lift(E3), &lift(E4));
        let c = arc_cos_between(&a, &b, true);
        assert!(c.abs() < 1e-12);
        assert!((angle_from_cos(c) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn arc_distance_same_arc_is_zero() {
        let a = arc_between(&lift([1.0, 0.2, -0.3, 0.4]), &lift([0.5, 1.0, 0.0, -0.2]));
        let c = arc_cos_between(&a, &a, true);
        assert!(c > 1.0 - 1e-12);
    }

    #[test]
    fn arc_distance_disjoint_arcs_on_one_circle() {
        // Two arcs of the span(e1, e2) circle separated by a 0.2 rad gap on
        // both sides: projective distance is exactly 0.2.
        let p = |t: f64| lift([t.cos(), t.sin(), 0.0, 0.0]);
        let a = arc_between(&p(0.0), &p(1.0));
        let b = arc_between(&p(1.2), &p(std::f64::consts::PI - 0.2));
        let c = arc_cos_between(&a, &b, true);
        assert!((angle_from_cos(c) - 0.2).abs() < 1e-9);
    }

    #[test]
    fn arc_distance_crossing_arcs_is_zero() {
        // Two arcs through a common projective point, one entering via the
        // antipodal lift.
        let x = lift([0.6, -0.2, 0.7, 0.1]);
        let a = arc_between(&lift([1.0, 0.0, 0.1, 0.0]), &x);
        let b = arc_between(&x.flipped(), &lift([0.0, 1.0, 0.0, 0.3]));
        let c = arc_cos_between(&a, &b, true);
        assert!(c > 1.0 - 1e-12, "cos = {c}");
        // Unfolded, the arcs meet only through the antipode.
        let c = arc_cos_between(&a, &b, false);
        assert!(c < 1.0 - 1e-3);
    }

    #[test]
    fn arc_point_distance_basics() {
        let a = arc_between(&lift(E1), &lift(E2));
        // Point on the arc.
        let c = arc_cos_to_point(&a, lift([1.0, 1.0, 0.0, 0.0]).coords(), true);
        assert!(c > 1.0 - 1e-12);
        // Antipode of a point on the arc, folded.
        let c = arc_cos_to_point(&a, lift([-1.0, -1.0, 0.0, 0.0]).coords(), true);
        assert!(c > 1.0 - 1e-12);
        // Orthogonal point.
        let c = arc_cos_to_point(&a, &E3, true);
        assert!(c.abs() < 1e-12);
        // Beyond the endpoint: distance to e1 is 0.3.
        let x = lift([(-0.3_f64).cos(), (-0.3_f64).sin(), 0.0, 0.0]);
        let c = arc_cos_to_point(&a, x.coords(), true);
        assert!((angle_from_cos(c) - 0.3).abs() < 1e-12);
    }
}
