//! Canonical example instances: polygonal projective lines, the affine Hopf
//! link, a split pair, and line-wrapping knots with nonzero self-linking.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Tolerances;
use crate::curves::{Closure, LiftedCurve};
use crate::error::Result;
use crate::projgeom::{dot4, norm4, scale4, sub4, Vec4};

/// Two disjoint polygonal projective lines: `A` on the span(e1, e2) circle,
/// `B` on span(e3, e4), each a half great circle closed with σ = -1 and
/// oriented by increasing angle. Their linking number is ±1/2.
pub fn projective_line_pair(edges: usize, tol: &Tolerances) -> Result<(LiftedCurve, LiftedCurve)> {
    let half_circle = |plane: [usize; 2]| -> Vec<Vec4> {
        (0..edges)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / edges as f64;
                let mut v = [0.0; 4];
                v[plane[0]] = t.cos();
                v[plane[1]] = t.sin();
                v
            })
            .collect()
    };
    let a = LiftedCurve::new("A", &half_circle([0, 1]), Closure::Minus, 1, tol)?;
    let b = LiftedCurve::new("B", &half_circle([2, 3]), Closure::Minus, 1, tol)?;
    Ok((a, b))
}

fn affine_circle(
    name: &str,
    center: [f64; 3],
    axis_u: [f64; 3],
    axis_v: [f64; 3],
    radius: f64,
    edges: usize,
    tol: &Tolerances,
) -> Result<LiftedCurve> {
    let verts: Vec<Vec4> = (0..edges)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / edges as f64;
            let (c, s) = (t.cos(), t.sin());
            [
                center[0] + radius * (c * axis_u[0] + s * axis_v[0]),
                center[1] + radius * (c * axis_u[1] + s * axis_v[1]),
                center[2] + radius * (c * axis_u[2] + s * axis_v[2]),
                1.0,
            ]
        })
        .collect();
    LiftedCurve::new(name, &verts, Closure::Plus, 1, tol)
}

/// The Hopf link embedded in the affine chart w = 1: `A` is the unit circle
/// in the xy-plane, `B` the unit circle in the xz-plane centered at
/// (1, 0, 0). Classically |lk| = 1.
pub fn affine_hopf_pair(edges: usize, tol: &Tolerances) -> Result<(LiftedCurve, LiftedCurve)> {
    let a = affine_circle(
        "A",
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        1.0,
        edges,
        tol,
    )?;
    let b = affine_circle(
        "B",
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
        1.0,
        edges,
        tol,
    )?;
    Ok((a, b))
}

/// A split pair: two small affine circles in far-apart balls; lk = 0.
pub fn split_pair(edges: usize, tol: &Tolerances) -> Result<(LiftedCurve, LiftedCurve)> {
    let a = affine_circle(
        "A",
        [-2.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        0.4,
        edges,
        tol,
    )?;
    let b = affine_circle(
        "B",
        [2.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
        0.4,
        edges,
        tol,
    )?;
    Ok((a, b))
}

/// A null-homologous knot wrapping twice around a projective line, kept
/// embedded by an even harmonic in the complementary plane, in a seeded
/// random position. Its self-linking number is nonzero (±harmonic for the
/// axis-aligned representative).
pub fn wrapped_knot(
    seed: u64,
    edges: usize,
    harmonic: u32,
    eps: f64,
    tol: &Tolerances,
) -> Result<LiftedCurve> {
    assert!(harmonic >= 2 && harmonic % 2 == 0, "harmonic must be even");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Seeded random orthonormal frame of R^4.
    let mut frame = [[0.0f64; 4]; 4];
    for row in frame.iter_mut() {
        for c in row.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
    }
    for i in 0..4 {
        for j in 0..i {
            let d = dot4(&frame[i], &frame[j]);
            frame[i] = sub4(&frame[i], &scale4(&frame[j], d));
        }
        let n = norm4(&frame[i]);
        frame[i] = scale4(&frame[i], 1.0 / n);
    }
    let verts: Vec<Vec4> = (0..edges)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / edges as f64;
            let (c1, s1) = (t.cos(), t.sin());
            let (c2, s2) = ((harmonic as f64 * t).cos(), (harmonic as f64 * t).sin());
            let mut v = [0.0; 4];
            for i in 0..4 {
                v[i] = c1 * frame[0][i] + s1 * frame[1][i] + eps * (c2 * frame[2][i] + s2 * frame[3][i]);
            }
            v
        })
        .collect();
    LiftedCurve::new("K", &verts, Closure::Plus, 1, tol)
}
