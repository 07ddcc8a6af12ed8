//! Acceptance suite: one test per release criterion, each printing a PASS
//! line. Run with `cargo test -p rp3link --test acceptance -- --nocapture`.

mod common;

use common::{corpus_pair, corpus_spec};
use rp3link::{
    is_generic, linking_number, oracle_lk_rp3, oracle_selflink, random_curve, samples,
    self_linking, transform, CurveTransform, LiftedCurve, OracleParams, RunConfig, Tolerances,
    Viewpoint, Violation,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn params() -> OracleParams {
    OracleParams::default()
}

fn oracle_d(a: &LiftedCurve, b: &LiftedCurve, seed: u64) -> i64 {
    oracle_lk_rp3(
        std::slice::from_ref(a),
        std::slice::from_ref(b),
        seed,
        &params(),
        &tol(),
    )
    .unwrap()
    .d
}

/// Criterion 1: the two-projective-lines instance has |lk| = 1/2, |d| = 1,
/// agrees with the oracle, and yields the same d over 100 random viewpoints.
/// The signed value d = +1 for the generated orientations is the frozen
/// convention constant, pinned once against the oracle.
#[test]
fn acceptance_1_projective_lines_instance() {
    let (a, b) = samples::projective_line_pair(16, &tol()).unwrap();
    let cfg = RunConfig {
        seed: 42,
        trials: 100,
        ..RunConfig::default()
    };
    let report = linking_number(&a, &b, &cfg).unwrap();
    assert_eq!(report.per_viewpoint_d.len(), 100);
    assert!(report.per_viewpoint_d.iter().all(|&d| d == report.d));
    assert_eq!(report.d.abs(), 1);
    assert_eq!(report.lk.abs(), 0.5);
    assert_eq!(report.d, 1, "frozen convention constant");
    let od = oracle_d(&a, &b, 42);
    assert_eq!(report.d, od, "method and oracle must agree exactly");
    println!("acceptance 1 (projective lines, 100 viewpoints, oracle agree): PASS");
}

/// Criterion 2: 50 seeded random disjoint pairs with mixed classes and
/// 16..64 edges; d is identical across 10 viewpoints and equals the summed
/// preimage linking numbers from the oracle exactly.
#[test]
fn acceptance_2_randomized_oracle_equivalence() {
    let mut tried_total = 0u64;
    let mut trials_total = 0u64;
    for i in 0..50 {
        let (a, b) = corpus_pair(i);
        let cfg = RunConfig {
            seed: 4_000 + i as u64,
            trials: 10,
            ..RunConfig::default()
        };
        let report = linking_number(&a, &b, &cfg).unwrap();
        assert_eq!(report.per_viewpoint_d.len(), 10, "instance {i}");
        assert!(
            report.per_viewpoint_d.iter().all(|&d| d == report.d),
            "instance {i}: viewpoint dependence"
        );
        let od = oracle_d(&a, &b, 20_000 + i as u64);
        assert_eq!(report.d, od, "instance {i}: oracle disagreement");
        tried_total += report.viewpoints_tried as u64;
        trials_total += 10;
    }
    // Random viewpoints on validated well-separated curves are accepted
    // with overwhelming probability.
    assert!(
        tried_total <= trials_total + trials_total / 20,
        "viewpoint acceptance rate too low: {tried_total} tried for {trials_total} trials"
    );
    println!("acceptance 2 (50 random pairs, 10 viewpoints each, oracle equal): PASS");
}

/// Criterion 3: on the same corpus, d mod 2 equals the product of the
/// Z/2 homology classes.
#[test]
fn acceptance_3_parity_law() {
    for i in 0..50 {
        let (a, b) = corpus_pair(i);
        let cfg = RunConfig {
            seed: 4_100 + i as u64,
            trials: 3,
            ..RunConfig::default()
        };
        let report = linking_number(&a, &b, &cfg).unwrap();
        let expected = (a.homology_class() * b.homology_class()) as i64;
        assert_eq!(
            report.d.rem_euclid(2),
            expected,
            "instance {i}: parity violated (classes {}, {})",
            a.homology_class(),
            b.homology_class()
        );
    }
    println!("acceptance 3 (parity law on 50 instances): PASS");
}

/// Criterion 4: the affine Hopf link gives |lk| = 1 (|d| = 2) and the split
/// affine pair gives 0, both matching a hand-countable planar diagram. The
/// signed d = +2 is frozen: the right-handed affine count gives -1 and the
/// chart at w = 1 carries the opposite orientation.
#[test]
fn acceptance_4_classical_instances() {
    let cfg = RunConfig {
        seed: 9,
        trials: 10,
        ..RunConfig::default()
    };
    let (a, b) = samples::affine_hopf_pair(24, &tol()).unwrap();
    let report = linking_number(&a, &b, &cfg).unwrap();
    assert_eq!(report.d.abs(), 2);
    assert_eq!(report.lk.abs(), 1.0);
    assert_eq!(report.d, 2, "frozen convention constant");
    assert_eq!(report.d, oracle_d(&a, &b, 77));

    let (sa, sb) = samples::split_pair(12, &tol()).unwrap();
    let split = linking_number(&sa, &sb, &cfg).unwrap();
    assert_eq!(split.d, 0);
    assert_eq!(split.lk, 0.0);
    assert_eq!(oracle_d(&sa, &sb, 78), 0);
    println!("acceptance 4 (affine Hopf |d| = 2, split pair d = 0): PASS");
}

/// Criterion 5: d is symmetric in the two sides, negates when one side is
/// reversed, and is restored when both are, on 20 corpus instances.
#[test]
fn acceptance_5_symmetry_and_orientation() {
    for i in 0..20 {
        let (a, b) = corpus_pair(i);
        let cfg = RunConfig {
            seed: 4_200 + i as u64,
            trials: 3,
            ..RunConfig::default()
        };
        let base = linking_number(&a, &b, &cfg).unwrap().d;
        let swapped = linking_number(&b, &a, &cfg).unwrap().d;
        assert_eq!(base, swapped, "instance {i}: symmetry");
        let ra = transform(&a, CurveTransform::Reverse, &tol()).unwrap();
        let rev_one = linking_number(&ra, &b, &cfg).unwrap().d;
        assert_eq!(rev_one, -base, "instance {i}: one reversal");
        let rb = transform(&b, CurveTransform::Reverse, &tol()).unwrap();
        let rev_both = linking_number(&ra, &rb, &cfg).unwrap().d;
        assert_eq!(rev_both, base, "instance {i}: double reversal");
    }
    println!("acceptance 5 (symmetry and orientation on 20 instances): PASS");
}

/// Criterion 6: refine, rotate_start, flip_all_lifts, and flip_one_lift
/// leave d unchanged on 20 instances.
#[test]
fn acceptance_6_representation_invariance() {
    for i in 0..20 {
        let (a, b) = corpus_pair(i);
        let cfg = RunConfig {
            seed: 4_300 + i as u64,
            trials: 3,
            ..RunConfig::default()
        };
        let base = linking_number(&a, &b, &cfg).unwrap().d;
        let n = a.vertices().len();
        let ops = [
            CurveTransform::Refine(i % n),
            CurveTransform::RotateStart(1 + i % (n - 1)),
            CurveTransform::FlipAllLifts,
            CurveTransform::FlipOneLift(i % n),
        ];
        for op in ops {
            let a2 = transform(&a, op, &tol()).unwrap();
            let d = linking_number(&a2, &b, &cfg).unwrap().d;
            assert_eq!(d, base, "instance {i}: op {op:?}");
        }
    }
    println!("acceptance 6 (representation invariance on 20 instances): PASS");
}

/// Criterion 7: 30 seeded null-homologous knots (random and line-wrapping):
/// sl is viewpoint independent over 10 viewpoints and equals the oracle
/// linking number of the two preimage sheets exactly; the affine unknot
/// has sl = 0.
#[test]
fn acceptance_7_self_linking_suite() {
    let mut nonzero = 0;
    for i in 0..30u64 {
        let k = if i % 2 == 0 {
            random_curve("K", 600 + i, 16 + 8 * ((i as usize / 2) % 4), 0, 1.2, &tol()).unwrap()
        } else {
            let edges = [24, 32, 40][(i as usize / 2) % 3];
            let harmonic = if edges == 40 { 4 } else { 2 };
            let eps = 0.3 + 0.04 * ((i as usize / 2) % 4) as f64;
            samples::wrapped_knot(700 + i, edges, harmonic, eps, &tol()).unwrap()
        };
        let cfg = RunConfig {
            seed: 4_400 + i,
            trials: 10,
            ..RunConfig::default()
        };
        let report = self_linking(&k, &cfg).unwrap();
        assert_eq!(report.per_viewpoint_sl.len(), 10);
        assert!(report.per_viewpoint_sl.iter().all(|&v| v == report.sl));
        assert_eq!(report.d, 2 * report.sl);
        let osl = oracle_selflink(&k, 30_000 + i, &params(), &tol()).unwrap();
        assert_eq!(report.sl, osl, "knot {i}: oracle disagreement");
        if report.sl != 0 {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 10, "corpus too degenerate: {nonzero} nonzero");

    let verts: Vec<[f64; 4]> = (0..16)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            [0.3 * t.cos(), 0.3 * t.sin(), 0.0, 1.0]
        })
        .collect();
    let unknot = LiftedCurve::new("U", &verts, rp3link::Closure::Plus, 1, &tol()).unwrap();
    let report = self_linking(&unknot, &RunConfig::with_seed(8)).unwrap();
    assert_eq!(report.sl, 0);
    println!("acceptance 7 (30 knots vs oracle, affine unknot sl = 0): PASS");
}

/// Criterion 8: scaling one component's weight by m scales d by m exactly,
/// m in -2..=3, on 10 instances with nonzero d.
#[test]
fn acceptance_8_weighted_cycles() {
    let mut checked = 0;
    for i in (3..43).step_by(4) {
        let spec = corpus_spec(i);
        assert_eq!(spec.class_a * spec.class_b, 1, "want odd-d instances");
        let (a, b) = corpus_pair(i);
        let cfg = RunConfig {
            seed: 4_500 + i as u64,
            trials: 2,
            ..RunConfig::default()
        };
        let base = linking_number(&a, &b, &cfg).unwrap().d;
        assert_ne!(base, 0, "instance {i}: parity guarantees nonzero d");
        for m in [-2i64, -1, 0, 1, 2, 3] {
            let aw = a.with_weight(m);
            let d = linking_number(&aw, &b, &cfg).unwrap().d;
            assert_eq!(d, m * base, "instance {i}, weight {m}");
        }
        checked += 1;
    }
    assert_eq!(checked, 10);
    println!("acceptance 8 (weight linearity on 10 instances): PASS");
}

/// Criterion 9: a viewpoint crafted on the line through one vertex of each
/// curve is rejected by the genericity screens, and a run seeded with it
/// still converges to the corpus-correct d within 20 resamples.
#[test]
fn acceptance_9_crafted_viewpoint_robustness() {
    let (a, b) = corpus_pair(0);
    let x = a.vertices()[2];
    let y = b.vertices()[5];
    let crafted = rp3link::normalize(
        [
            x.coords()[0] + y.coords()[0],
            x.coords()[1] + y.coords()[1],
            x.coords()[2] + y.coords()[2],
            x.coords()[3] + y.coords()[3],
        ],
        1e-9,
    )
    .unwrap();

    let vp = Viewpoint::at(crafted, 0, 0);
    let violations = is_generic(
        std::slice::from_ref(&a),
        std::slice::from_ref(&b),
        &vp,
        &tol(),
    )
    .unwrap();
    assert!(
        violations
            .iter()
            .any(|v| matches!(v, Violation::VertexParameter { .. })),
        "crafted viewpoint must trigger a vertex-parameter violation, got {violations:?}"
    );

    let clean_cfg = RunConfig {
        seed: 4_600,
        trials: 5,
        ..RunConfig::default()
    };
    let expected = linking_number(&a, &b, &clean_cfg).unwrap().d;

    let seeded_cfg = RunConfig {
        preview_viewpoints: vec![*crafted.coords()],
        ..clean_cfg
    };
    let report = linking_number(&a, &b, &seeded_cfg).unwrap();
    assert_eq!(report.d, expected);
    assert!(
        report.viewpoint.trial > 0 || report.viewpoint.attempt > 0,
        "the crafted viewpoint must not be the one reported"
    );
    assert!(
        report.viewpoints_tried <= seeded_cfg.trials + 20,
        "took {} viewpoints",
        report.viewpoints_tried
    );
    println!("acceptance 9 (crafted degenerate viewpoint rejected, run converges): PASS");
}

/// Criterion 10: identical seeds and configs produce byte-identical JSON
/// reports across runs and across thread counts.
#[test]
fn acceptance_10_determinism() {
    let (a, b) = corpus_pair(7);
    let cfg = RunConfig {
        seed: 31,
        trials: 5,
        ..RunConfig::default()
    };
    let json1 = serde_json::to_string(&linking_number(&a, &b, &cfg).unwrap()).unwrap();
    let json2 = serde_json::to_string(&linking_number(&a, &b, &cfg).unwrap()).unwrap();
    assert_eq!(json1, json2, "same-process rerun must be byte-identical");

    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let json_t =
            pool.install(|| serde_json::to_string(&linking_number(&a, &b, &cfg).unwrap()).unwrap());
        assert_eq!(json1, json_t, "thread count {threads} changed the report");
    }

    let k = samples::wrapped_knot(5, 32, 2, 0.35, &tol()).unwrap();
    let scfg = RunConfig::with_seed(12);
    let s1 = serde_json::to_string(&self_linking(&k, &scfg).unwrap()).unwrap();
    let s2 = serde_json::to_string(&self_linking(&k, &scfg).unwrap()).unwrap();
    assert_eq!(s1, s2);
    println!("acceptance 10 (byte-identical JSON across runs and thread counts): PASS");
}
