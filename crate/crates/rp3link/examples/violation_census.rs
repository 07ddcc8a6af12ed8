use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rp3link::*;

fn main() {
    let tol = Tolerances::default();
    let mut counts: std::collections::BTreeMap<&'static str, usize> = Default::default();
    let mut total = 0usize;
    let mut rejected = 0usize;
    for i in 0..50usize {
        let spec = PairSpec {
            n_edges_a: 16 + (i * 7) % 49,
            n_edges_b: 16 + (i * 11) % 49,
            class_a: (i % 2) as u8,
            class_b: ((i / 2) % 2) as u8,
            scale: 1.0,
            margin: 0.05,
        };
        let (a, b) = random_disjoint_pair(10_000 + i as u64, &spec, &tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4_000 + i as u64);
        for _ in 0..10 {
            let mut v = [0.0f64; 4];
            for c in v.iter_mut() { *c = rng.sample(StandardNormal); }
            let lift = normalize(v, 1e-6).unwrap();
            let vp = Viewpoint::at(lift, 0, 0);
            total += 1;
            let viols = is_generic(std::slice::from_ref(&a), std::slice::from_ref(&b), &vp, &tol).unwrap();
            if !viols.is_empty() {
                rejected += 1;
                for v in &viols {
                    let k = match v {
                        Violation::CurveProximity { .. } => "proximity",
                        Violation::DegeneratePair { .. } => "degenerate_pair",
                        Violation::VertexParameter { .. } => "vertex",
                        Violation::Tangency { .. } => "tangency",
                        Violation::AmbiguousResidual { .. } => "ambiguous_residual",
                        Violation::SignMargin { .. } => "sign_margin",
                        Violation::CoincidentLines { .. } => "coincident_lines",
                        Violation::AmbiguousLoopClass { .. } => "loop_class",
                    };
                    *counts.entry(k).or_default() += 1;
                }
            }
        }
    }
    println!("total {total}, rejected {rejected}");
    for (k, n) in counts { println!("  {k}: {n}"); }
}
