//! Shared corpus for the acceptance suite: seeded random disjoint pairs
//! with mixed homology classes and sizes between 16 and 64 edges.

use rp3link::{random_disjoint_pair, LiftedCurve, PairSpec, Tolerances};

pub fn corpus_spec(i: usize) -> PairSpec {
    PairSpec {
        n_edges_a: 16 + (i * 7) % 49,
        n_edges_b: 16 + (i * 11) % 49,
        class_a: (i % 2) as u8,
        class_b: ((i / 2) % 2) as u8,
        scale: 1.0,
        margin: 0.05,
    }
}

pub fn corpus_pair(i: usize) -> (LiftedCurve, LiftedCurve) {
    let tol = Tolerances::default();
    random_disjoint_pair(10_000 + i as u64, &corpus_spec(i), &tol)
        .expect("corpus generation must succeed")
}
