//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`; the per-test ok/FAILED line
//! carries the same verdict). Tolerances are pinned in the constants below.
//!
//! Two criteria encode idealized monotonicity claims that the model provably
//! violates (confirmed in exact rational arithmetic, see `common`):
//! criterion 6's arrival-probability leg wiggles near saturation for
//! intermediate conversion capability, and criterion 8's per-class curves
//! wiggle because resultant wavelength counts are rounded to integers. They
//! are asserted as stated and expected to stay red; the remaining ten pass.

mod common;

use std::time::Instant;

use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use obsloss::analytic::{
    arrival_pmf, blr_fixed_blocking, burst_loss_rate, stationary_distribution, SwitchParams,
};
use obsloss::qos::{class_blr, QosParams};
use obsloss::sim::{simulate, SimConfig};
use obsloss::sweep::{run_compare, GridSpec, SimSettings, SweepParam, SweepSpec};

const NORMALIZATION_TOL: f64 = 1e-9;
const ARRIVAL_SUM_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-10;
const EXACT_INSTANCE_TOL: f64 = 1e-12;
const CONVERSION_FREE_TOL: f64 = 1e-12;
const FIXED_BLOCKING_TOL: f64 = 1e-12;
const TREND_SLACK: f64 = 1e-12;
const QOS_SYMMETRY_TOL: f64 = 1e-12;
const QOS_MONOTONE_SLACK: f64 = 1e-12;
const BRUTE_FORCE_TOL: f64 = 1e-10;
const EXTENDED_ORACLE_TOL: f64 = 1e-9;

const GRID_W: [u32; 6] = [1, 2, 5, 10, 16, 20];
const GRID_ELL: [u32; 3] = [10, 50, 100];
const GRID_RHO: [f64; 5] = [0.0, 0.1, 0.3, 0.5, 1.0];
const GRID_A: [f64; 5] = [0.001, 0.01, 0.1, 0.5, 0.9];

fn params(w: u32, ell: u32, rho: f64, a: f64) -> SwitchParams {
    SwitchParams::new(w, ell, rho, a).unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "[FAIL] {criterion}: {detail}");
}

#[test]
fn criterion_01_normalization_suite() {
    let start = Instant::now();
    let mut worst_norm = 0.0f64;
    let mut worst_arrival = 0.0f64;
    for w in GRID_W {
        for ell in GRID_ELL {
            for rho in GRID_RHO {
                for a in GRID_A {
                    let p = params(w, ell, rho, a);
                    let dist = stationary_distribution(&p).unwrap();
                    worst_norm = worst_norm.max((dist.total_probability() - 1.0).abs());
                    let sum: f64 = (0..=w as i64).map(|k| arrival_pmf(w, a, k)).sum();
                    worst_arrival = worst_arrival.max((sum - 1.0).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 1 (normalization suite)",
        worst_norm <= NORMALIZATION_TOL && worst_arrival <= ARRIVAL_SUM_TOL && elapsed < 5.0,
        &format!(
            "450-point grid: worst state normalization {worst_norm:.2e} (tol {NORMALIZATION_TOL:.0e}), \
             worst arrival sum {worst_arrival:.2e} (tol {ARRIVAL_SUM_TOL:.0e}), {elapsed:.2}s"
        ),
    );
}

#[test]
fn criterion_02_closed_form_full_conversion() {
    let mut worst = 0.0f64;
    for ell in [4u32, 20, 100] {
        for a in [0.1, 0.5, 0.9] {
            for w in [ell, ell + 7] {
                let dist = stationary_distribution(&params(w, ell, 1.0, a)).unwrap();
                for k in 1..=ell {
                    let expected = a.powi(k as i32) * (1.0 - a).powi((ell - k) as i32);
                    worst = worst.max(((dist.state_prob(k) - expected) / expected).abs());
                }
            }
        }
    }
    report(
        "criterion 2 (closed form at full conversion)",
        worst <= CLOSED_FORM_TOL,
        &format!("worst relative error {worst:.2e} (tol {CLOSED_FORM_TOL:.0e})"),
    );
}

#[test]
fn criterion_03_exact_small_instance() {
    let p = params(2, 3, 0.0, 0.5);
    let dist = stationary_distribution(&p).unwrap();
    let profile = obsloss::analytic::blocking_profile(&p).unwrap();
    let checks = [
        ("e0", dist.empty_prob(), 0.2),
        ("e1", dist.state_prob(1), 0.2),
        ("e2", dist.state_prob(2), 1.0 / 15.0),
        ("Pb(1)", profile.blocking_prob(1), 0.1),
        ("Pb(2)", profile.blocking_prob(2), 1.0 / 15.0),
        ("blr", burst_loss_rate(&p), 1.0 / 12.0),
    ];
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for (name, actual, expected) in checks {
        let rel = ((actual - expected) / expected).abs();
        worst = worst.max(rel);
        detail.push_str(&format!("{name}={actual:.15} "));
    }
    report(
        "criterion 3 (exact small instance)",
        worst <= EXACT_INSTANCE_TOL,
        &format!("worst relative error {worst:.2e} (tol {EXACT_INSTANCE_TOL:.0e}); {detail}"),
    );
}

#[test]
fn criterion_04_single_wavelength_conversion_independence() {
    let mut worst = 0.0f64;
    for a in [0.01, 0.1, 0.5] {
        let base = burst_loss_rate(&params(1, 100, 0.0, a));
        for rho in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let v = burst_loss_rate(&params(1, 100, rho, a));
            worst = worst.max((v - base).abs());
        }
    }
    report(
        "criterion 4 (w=1 loss is conversion-independent)",
        worst <= CONVERSION_FREE_TOL,
        &format!("worst absolute spread {worst:.2e} (tol {CONVERSION_FREE_TOL:.0e})"),
    );
}

#[test]
fn criterion_05_unity_blocking_loses_everything() {
    let mut worst = 0.0f64;
    for pb in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let v = blr_fixed_blocking(10, 100, 0.01, pb);
        worst = worst.max((v - pb).abs());
    }
    report(
        "criterion 5 (fixed-blocking identity, unity endpoint)",
        worst <= FIXED_BLOCKING_TOL,
        &format!("worst |blr - pb| {worst:.2e} (tol {FIXED_BLOCKING_TOL:.0e})"),
    );
}

/// One monotonicity check over a curve; returns a violation description.
fn check_monotone(
    label: &str,
    xs: &[f64],
    values: &[f64],
    nondecreasing: bool,
    slack: f64,
) -> Option<String> {
    for i in 0..values.len() - 1 {
        let (prev, next) = (values[i], values[i + 1]);
        let violated = if nondecreasing {
            next < prev - slack
        } else {
            next > prev + slack
        };
        if violated {
            return Some(format!(
                "{label}: x {} -> {}: blr {prev:.6e} -> {next:.6e}",
                xs[i],
                xs[i + 1]
            ));
        }
    }
    None
}

#[test]
fn criterion_06_trend_suite() {
    let start = Instant::now();
    let mut violations: Vec<String> = Vec::new();
    let mut curves = 0;

    let arrival_grid = GridSpec::Range {
        start: 0.001,
        stop: 0.1,
        count: 25,
        log: true,
    }
    .values()
    .unwrap();
    let conversion_grid = GridSpec::Range {
        start: 0.0,
        stop: 1.0,
        count: 21,
        log: false,
    }
    .values()
    .unwrap();
    // slot-count leg: nondecreasing holds on 20..=100; the model peaks near
    // ell ~ 130 at these parameters, so the 120..=200 tail of the figure
    // grid is excluded by the stated trend range
    let slot_grid: Vec<f64> = (20..=100).step_by(20).map(f64::from).collect();
    let wavelength_grid: Vec<f64> = (1..=30).map(f64::from).collect();

    // loss nondecreasing in arrival probability
    for w in [5u32, 10, 15, 20] {
        let values: Vec<f64> = arrival_grid
            .iter()
            .map(|&a| burst_loss_rate(&params(w, 100, 0.1, a)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("A-leg rho=0.1 w={w}"),
            &arrival_grid,
            &values,
            true,
            TREND_SLACK,
        ));
    }
    for rho in [0.0, 0.3, 0.6, 1.0] {
        let values: Vec<f64> = arrival_grid
            .iter()
            .map(|&a| burst_loss_rate(&params(20, 100, rho, a)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("A-leg w=20 rho={rho}"),
            &arrival_grid,
            &values,
            true,
            TREND_SLACK,
        ));
    }

    // loss nonincreasing in conversion capability
    for w in [5u32, 10, 15, 20] {
        let values: Vec<f64> = conversion_grid
            .iter()
            .map(|&rho| burst_loss_rate(&params(w, 100, rho, 0.01)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("rho-leg A=0.01 w={w}"),
            &conversion_grid,
            &values,
            false,
            TREND_SLACK,
        ));
    }
    for a in [0.005, 0.01, 0.02] {
        let values: Vec<f64> = conversion_grid
            .iter()
            .map(|&rho| burst_loss_rate(&params(15, 100, rho, a)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("rho-leg w=15 A={a}"),
            &conversion_grid,
            &values,
            false,
            TREND_SLACK,
        ));
    }

    // loss nondecreasing in slots per burst
    for rho in [0.0, 0.3, 0.6, 1.0] {
        let values: Vec<f64> = slot_grid
            .iter()
            .map(|&ell| burst_loss_rate(&params(20, ell as u32, rho, 0.01)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("ell-leg w=20 rho={rho}"),
            &slot_grid,
            &values,
            true,
            TREND_SLACK,
        ));
    }
    for w in [10u32, 15, 20] {
        let values: Vec<f64> = slot_grid
            .iter()
            .map(|&ell| burst_loss_rate(&params(w, ell as u32, 0.1, 0.01)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("ell-leg rho=0.1 w={w}"),
            &slot_grid,
            &values,
            true,
            TREND_SLACK,
        ));
    }

    // loss nonincreasing in wavelengths
    for rho in [0.0, 0.3, 0.6, 1.0] {
        let values: Vec<f64> = wavelength_grid
            .iter()
            .map(|&w| burst_loss_rate(&params(w as u32, 100, rho, 0.01)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("w-leg A=0.01 rho={rho}"),
            &wavelength_grid,
            &values,
            false,
            TREND_SLACK,
        ));
    }
    for a in [0.005, 0.01, 0.02] {
        let values: Vec<f64> = wavelength_grid
            .iter()
            .map(|&w| burst_loss_rate(&params(w as u32, 100, 0.3, a)))
            .collect();
        curves += 1;
        violations.extend(check_monotone(
            &format!("w-leg rho=0.3 A={a}"),
            &wavelength_grid,
            &values,
            false,
            TREND_SLACK,
        ));
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 6 (trend suite)",
        violations.is_empty() && elapsed < 10.0,
        &format!(
            "{curves} curves, {} violation(s) in {elapsed:.2}s{}{}",
            violations.len(),
            if violations.is_empty() { "" } else { ": " },
            violations.join("; ")
        ),
    );
}

#[test]
fn criterion_07_qos_symmetry_at_even_split() {
    let qos = QosParams::new(16, 8, (0.5, 0.5)).unwrap();
    let mut worst = 0.0f64;
    for rho in [0.0, 0.5, 1.0] {
        for a in [0.1, 0.5] {
            let r = class_blr(&qos, 100, rho, a).unwrap();
            worst = worst.max((r.blr[0] - r.blr[1]).abs());
        }
    }
    report(
        "criterion 7 (equal reservations, equal loss)",
        worst <= QOS_SYMMETRY_TOL,
        &format!("worst |blr0 - blr1| {worst:.2e} (tol {QOS_SYMMETRY_TOL:.0e})"),
    );
}

#[test]
fn criterion_08_qos_monotone_partitioning() {
    let mut violations: Vec<String> = Vec::new();
    for rho in [0.0, 0.5, 1.0] {
        for a in [0.1, 0.5] {
            let mut blr0 = Vec::new();
            let mut blr1 = Vec::new();
            for reserved0 in 1..=15u32 {
                let qos = QosParams::new(16, reserved0, (0.5, 0.5)).unwrap();
                let r = class_blr(&qos, 100, rho, a).unwrap();
                blr0.push(r.blr[0]);
                blr1.push(r.blr[1]);
            }
            let xs: Vec<f64> = (1..=15).map(f64::from).collect();
            violations.extend(check_monotone(
                &format!("class0 rho={rho} A={a}"),
                &xs,
                &blr0,
                false,
                QOS_MONOTONE_SLACK,
            ));
            violations.extend(check_monotone(
                &format!("class1 rho={rho} A={a}"),
                &xs,
                &blr1,
                true,
                QOS_MONOTONE_SLACK,
            ));
        }
    }
    report(
        "criterion 8 (loss monotone in the reserved split)",
        violations.is_empty(),
        &format!(
            "6 (rho, A) combinations, {} violation(s){}{}",
            violations.len(),
            if violations.is_empty() { "" } else { ": " },
            violations.join("; ")
        ),
    );
}

#[test]
fn criterion_09_qos_brute_force_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for total in [2u32, 3, 4] {
        for reserved0 in 1..total {
            for share0 in [0.3, 0.5] {
                let share1 = 1.0 - share0;
                for ell in [5u32, 10] {
                    for rho in [0.0, 0.5, 1.0] {
                        for a in [0.2, 0.5] {
                            let qos = QosParams::new(total, reserved0, (share0, share1)).unwrap();
                            let actual = class_blr(&qos, ell, rho, a).unwrap();
                            let expected = rational_class_blr(
                                total as u64,
                                reserved0 as u64,
                                &rat(share0),
                                &rat(share1),
                                ell as u64,
                                &rat(rho),
                                &rat(a),
                            );
                            for (class, expected) in expected.iter().enumerate() {
                                worst = worst.max(rel_err_against(actual.blr[class], expected));
                            }
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 9 (exhaustive-scenario oracle equivalence)",
        worst <= BRUTE_FORCE_TOL && elapsed < 30.0,
        &format!(
            "{cases} configurations: worst relative error {worst:.2e} (tol {BRUTE_FORCE_TOL:.0e}), {elapsed:.2}s"
        ),
    );
}

#[test]
fn criterion_10_extended_precision_oracle() {
    // the full criterion-1 grid, sampled at 10 seeded-random points
    let mut grid = Vec::new();
    for w in GRID_W {
        for ell in GRID_ELL {
            for rho in GRID_RHO {
                for a in GRID_A {
                    grid.push((w, ell, rho, a));
                }
            }
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let points: Vec<_> = grid.choose_multiple(&mut rng, 10).copied().collect();

    let mut worst = 0.0f64;
    for (w, ell, rho, a) in points {
        let actual = burst_loss_rate(&params(w, ell, rho, a));
        let expected = rational_blr(w as u64, ell as u64, &rat(rho), &rat(a));
        let rel = rel_err_against(actual, &expected);
        worst = worst.max(rel);
        println!("  w={w} ell={ell} rho={rho} A={a}: blr={actual:.12e} rel={rel:.2e}");
    }
    report(
        "criterion 10 (extended-precision transcription)",
        worst <= EXTENDED_ORACLE_TOL,
        &format!("10 seeded grid points: worst relative error {worst:.2e} (tol {EXTENDED_ORACLE_TOL:.0e})"),
    );
}

#[test]
fn criterion_11_simulator_sanity() {
    // full conversion blocks only with every wavelength busy, over 1e5 slots
    let full = SimConfig::new(params(6, 30, 1.0, 0.4), 100_000, 3).with_warmup(0);
    let est = simulate(&full);
    let idle_blocks: u64 = est
        .replications
        .iter()
        .map(|t| t.blocked_with_free_wavelength)
        .sum();
    let saw_blocking = est.blocked > 0;

    // byte-identical reruns
    let cfg = SimConfig::new(params(8, 20, 0.3, 0.2), 50_000, 42).with_replications(5);
    let (a, b) = (simulate(&cfg), simulate(&cfg));
    let deterministic = format!("{a:?}") == format!("{b:?}");

    // conservation in every replication
    let conserved = a
        .replications
        .iter()
        .chain(est.replications.iter())
        .all(|t| t.offered == t.served + t.blocked);

    report(
        "criterion 11 (simulator sanity)",
        idle_blocks == 0 && saw_blocking && deterministic && conserved,
        &format!(
            "full-conversion idle-wavelength blocks {idle_blocks} (expected 0, blocked {}), \
             deterministic rerun {deterministic}, conservation {conserved}",
            est.blocked
        ),
    );
}

#[test]
fn criterion_12_analytic_vs_simulated_trend_agreement() {
    let start = Instant::now();
    let spec = SweepSpec {
        param: SweepParam::ArrivalProb,
        grid: GridSpec::Range {
            start: 0.002,
            stop: 0.05,
            count: 5,
            log: true,
        }
        .values()
        .unwrap(),
        base: params(20, 100, 0.1, 0.01),
        qos: None,
    };
    let settings = SimSettings {
        horizon: 200_000,
        warmup: Some(5_000),
        replications: 20,
        seed: 7,
    };
    let result = run_compare(&spec, &settings).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let mut separated = true;
    for pair in result.rows.windows(2) {
        let gap = pair[1].simulated - pair[0].simulated;
        if gap <= pair[0].ci95 + pair[1].ci95 {
            separated = false;
        }
    }
    for row in &result.rows {
        println!(
            "  A={:.5}: analytic={:.6e} simulated={:.6e} ci95={:.2e}",
            row.value, row.analytic, row.simulated, row.ci95
        );
    }
    report(
        "criterion 12 (analytic vs simulated rank agreement)",
        result.rank_agreement == 1.0 && separated && elapsed < 60.0,
        &format!(
            "rank agreement {} over 5 points, adjacent CIs separated {separated}, {elapsed:.1}s",
            result.rank_agreement
        ),
    );
}
