//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Run with `cargo test -p aklt-core --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria).

use std::time::{Duration, Instant};

use aklt_core::certify::{self, Mode};
use aklt_core::combinatorics::{even_cycle_counts, even_cycle_gf};
use aklt_core::numbers::{q, q_from_int, q_pow};
use aklt_core::transfer;
use aklt_core::verify::{self, Caps, CheckStatus};
use aklt_core::Q;

fn timed(num: u32, limit: Duration, what: &str, f: impl FnOnce()) {
    let t0 = Instant::now();
    f();
    let elapsed = t0.elapsed();
    println!(
        "criterion {num}: PASS ({what}; {:.2}s, limit {:.0}s)",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(
        elapsed <= limit,
        "criterion {num} exceeded its runtime limit: {elapsed:.2?} > {limit:.2?}"
    );
}

fn run_named(name: &str, caps: &Caps) {
    let sel = vec![name.to_string()];
    let results = verify::run(Some(&sel), caps).unwrap();
    assert_eq!(results.len(), 1);
    match &results[0].status {
        CheckStatus::Pass => {}
        CheckStatus::Fail => panic!("{name} failed: {}", results[0].detail),
        CheckStatus::Skipped(reason) => panic!("{name} skipped: {reason}"),
    }
}

#[test]
fn criterion_01_small_degree_table_exact() {
    timed(1, Duration::from_secs(1), "exact q_L and |E_L|^2 for d <= 4, n <= 6", || {
        for d in 1..=4u32 {
            for n in 1..=6u32 {
                let (ql_expect, el_expect) =
                    transfer::small_degree_closed_forms(d, n).unwrap();
                let (ql, _) = transfer::ql_exact(d, n).unwrap();
                let (el_sq, _) = transfer::el_inf_norm_sq(d, n).unwrap();
                assert_eq!(ql, ql_expect, "q_L at d={d} n={n}");
                assert_eq!(el_sq, el_expect, "|E_L|^2 at d={d} n={n}");
            }
        }
    });
}

#[test]
fn criterion_02_symmetric_projector_dense() {
    timed(2, Duration::from_secs(60), "symmetric projector exact for m <= 8", || {
        run_named("psym", &Caps::default());
    });
}

#[test]
fn criterion_03_recursion_and_summation_dense() {
    timed(
        3,
        Duration::from_secs(120),
        "recursion (m <= 8) and class sums (m <= 7) exact",
        || {
            run_named("recursion", &Caps::default());
            run_named("summation", &Caps::default());
        },
    );
}

#[test]
fn criterion_04_matching_norms_dense() {
    timed(4, Duration::from_secs(60), "norm formula equals dense trace for m <= 8", || {
        run_named("norms", &Caps::default());
    });
}

#[test]
fn criterion_05_even_cycle_generating_function() {
    timed(5, Duration::from_secs(10), "weighted even-cycle counts at y = 3, r <= 5", || {
        for r in 1..=5usize {
            let counts = even_cycle_counts(r).unwrap();
            let weighted: Q = counts
                .iter()
                .map(|(&k, h)| q_from_int(h.clone()) * q_pow(&q(3), k as i64))
                .sum();
            assert_eq!(weighted, even_cycle_gf(r as u32, &q(3)), "r={r}");
        }
    });
}

#[test]
fn criterion_06_dense_map_decomposition() {
    timed(
        6,
        Duration::from_secs(120),
        "dense images, orthogonality and singular values at 1e-10 for d <= 6, n <= 2",
        || {
            run_named("svd", &Caps::default());
        },
    );
}

#[test]
fn criterion_07_minimal_eigenvalue_scan() {
    timed(7, Duration::from_secs(60), "minimal eigenvalue closed form for d <= 30", || {
        run_named("conjecture", &Caps::default());
    });
}

#[test]
fn criterion_08_thresholds() {
    let t0 = Instant::now();
    let c33 = certify::certify(3, 3, Mode::Exact, false, 128).unwrap();
    assert!(c33.gapped, "degree 3 at decoration 3 must certify");
    let c33b = certify::certify(3, 3, Mode::Bound, false, 128).unwrap();
    assert!(c33b.gapped);
    let c44 = certify::certify(4, 4, Mode::Exact, false, 128).unwrap();
    assert!(c44.gapped, "degree 4 at decoration 4 must certify");
    let (_, f5) = certify::threshold_n(5, 160).unwrap();
    assert!(f5.width_f64() < 1e-5, "f(5) enclosure too wide");
    assert!(
        (f5.mid_f64() - 1.17851).abs() < 1e-5,
        "f(5) = {} differs from 1.17851",
        f5.mid_f64()
    );
    let c54 = certify::certify(5, 4, Mode::Bound, false, 128).unwrap();
    assert!(c54.gapped, "degree 5 at decoration 4 must certify in bound mode");
    println!(
        "criterion 8: PASS (thresholds n(3)=3, n(4)=4, f(5)~1.17851, bound-mode (5,4); {:.2}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_09_bound_dominance() {
    timed(
        9,
        Duration::from_secs(60),
        "newer bounds strictly tighter with certified separation, d <= 10",
        || {
            run_named("dominance", &Caps::default());
        },
    );
}

#[test]
fn criterion_10_bound_sandwich() {
    timed(10, Duration::from_secs(60), "closed-form bounds bracket exact values, d <= 30", || {
        run_named("sandwich", &Caps::default());
    });
}

#[test]
fn criterion_11_property_suite_end_to_end() {
    let t0 = Instant::now();
    let results = verify::run(None, &Caps::default()).unwrap();
    assert_eq!(results.len(), verify::CHECK_NAMES.len());
    for r in &results {
        match &r.status {
            CheckStatus::Pass => {}
            CheckStatus::Fail => panic!("check {} failed: {}", r.name, r.detail),
            CheckStatus::Skipped(reason) => {
                panic!("check {} skipped under default caps: {reason}", r.name)
            }
        }
    }
    println!(
        "criterion 11: PASS (all {} suite checks green; {:.2}s)",
        results.len(),
        t0.elapsed().as_secs_f64()
    );
}
