//! Seeded random curves: smooth trigonometric loops on S³, polygonalized
//! and retried until they validate with a healthy embedding margin.
//!
//! The closure condition is encoded in the harmonic frequencies. Integer
//! frequencies give loops that close in S³ (σ = +1); half-integer
//! frequencies satisfy γ(t + 2π) = -γ(t) and close at the antipode (σ = -1).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Tolerances;
use crate::curves::{min_separation, Closure, LiftedCurve};
use crate::error::{Error, Result};
use crate::projgeom::{add4, norm4, scale4, Vec4};

const MAX_ATTEMPTS: u32 = 64;

/// Cheap splittable sub-seed derivation (splitmix64 finalizer).
pub(crate) fn subseed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn sample_vec4(rng: &mut ChaCha8Rng, std: f64) -> Vec4 {
    let mut v = [0.0; 4];
    for c in v.iter_mut() {
        let g: f64 = rng.sample(StandardNormal);
        *c = g * std;
    }
    v
}

/// Deterministic random closed PL curve on RP³ in the requested homology
/// class. `scale` steers how much energy the higher harmonics carry;
/// generation retries with fresh coefficients until the polygonalized curve
/// validates with a comfortable margin.
pub fn random_curve(
    name: &str,
    seed: u64,
    n_edges: usize,
    class: u8,
    scale: f64,
    tol: &Tolerances,
) -> Result<LiftedCurve> {
    assert!(n_edges >= 8, "random curves need at least 8 edges");
    assert!(class <= 1, "homology class must be 0 or 1");
    let closure = if class == 0 {
        Closure::Plus
    } else {
        Closure::Minus
    };
    // Wiggle less when the polygon is coarse.
    let damp = (n_edges as f64 / 24.0).min(1.0);
    // Embedding quality margin for generated data; validation itself only
    // requires tol.separation.
    let quality = Tolerances {
        separation: 0.02_f64.min(1.2 / n_edges as f64).max(tol.separation),
        ..tol.clone()
    };

    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0x6375_7276 + attempt as u64));
        // (frequency, coefficient std) pairs; class 1 uses half-integers.
        // For class 0, the balance between the constant term and the first
        // harmonic decides whether the loop stays affine-like or wraps a
        // projective line; drawing it randomly diversifies the corpus.
        let harmonics: Vec<(f64, f64)> = if class == 0 {
            let wrap: f64 = rng.gen_range(0.4..2.2);
            vec![
                (0.0, 1.0),
                (1.0, wrap),
                (2.0, 0.35 * scale * damp),
                (3.0, 0.12 * scale * damp),
            ]
        } else {
            vec![
                (0.5, 1.0),
                (1.5, 0.30 * scale * damp),
                (2.5, 0.10 * scale * damp),
            ]
        };
        let coeffs: Vec<(f64, Vec4, Vec4)> = harmonics
            .iter()
            .map(|&(freq, std)| (freq, sample_vec4(&mut rng, std), sample_vec4(&mut rng, std)))
            .collect();

        let mut verts: Vec<Vec4> = Vec::with_capacity(n_edges);
        let mut ok = true;
        for i in 0..n_edges {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n_edges as f64;
            let mut p = [0.0; 4];
            for (freq, a, b) in &coeffs {
                let phase = freq * t;
                p = add4(&p, &add4(&scale4(a, phase.cos()), &scale4(b, phase.sin())));
            }
            if norm4(&p) < 0.2 {
                ok = false;
                break;
            }
            verts.push(p);
        }
        if !ok {
            continue;
        }
        let curve = LiftedCurve::new(name, &verts, closure, 1, tol)?;
        if curve.validate(&quality).is_ok() {
            return Ok(curve);
        }
    }
    Err(Error::GenerationFailure {
        attempts: MAX_ATTEMPTS,
    })
}

/// Parameters for [`random_disjoint_pair`].
#[derive(Debug, Clone)]
pub struct PairSpec {
    pub n_edges_a: usize,
    pub n_edges_b: usize,
    pub class_a: u8,
    pub class_b: u8,
    pub scale: f64,
    /// Required projective separation between the two curves.
    pub margin: f64,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            n_edges_a: 24,
            n_edges_b: 24,
            class_a: 0,
            class_b: 0,
            scale: 1.0,
            margin: 0.05,
        }
    }
}

/// Deterministic disjoint pair of random curves named "A" and "B".
pub fn random_disjoint_pair(
    seed: u64,
    spec: &PairSpec,
    tol: &Tolerances,
) -> Result<(LiftedCurve, LiftedCurve)> {
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let a = random_curve(
            "A",
            subseed(seed, 2 * attempt),
            spec.n_edges_a,
            spec.class_a,
            spec.scale,
            tol,
        )?;
        let b = random_curve(
            "B",
            subseed(seed, 2 * attempt + 1),
            spec.n_edges_b,
            spec.class_b,
            spec.scale,
            tol,
        )?;
        if min_separation(&a, &b, tol)? >= spec.margin {
            return Ok((a, b));
        }
    }
    Err(Error::GenerationFailure {
        attempts: MAX_ATTEMPTS,
    })
}
