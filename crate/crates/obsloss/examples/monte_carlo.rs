//! Seeded Monte Carlo runs: replications, confidence intervals, and the
//! determinism contract (same seed, same bits).
//!
//! Run with:
//!   cargo run --example monte_carlo

use obsloss::sim::{simulate, simulate_qos, SimConfig};
use obsloss::{QosParams, SwitchParams};

fn main() {
    let params = SwitchParams::new(20, 100, 0.1, 0.01).expect("valid parameters");
    let config = SimConfig::new(params, 100_000, 42).with_replications(10);
    let estimate = simulate(&config);

    println!(
        "single class: offered={} blocked={} blr_hat={:.4e} ci95={:.2e}",
        estimate.offered, estimate.blocked, estimate.blr_hat, estimate.ci95
    );
    for (i, tally) in estimate.replications.iter().enumerate() {
        println!(
            "  rep {i}: offered={} served={} blocked={} blr={:.4e}",
            tally.offered,
            tally.served,
            tally.blocked,
            tally.blr()
        );
    }

    let rerun = simulate(&config);
    println!(
        "rerun with the same seed is identical: {}",
        rerun == estimate
    );

    let qos = QosParams::new(16, 4, (0.5, 0.5)).expect("valid partition");
    let params = SwitchParams::new(16, 100, 0.5, 0.05).expect("valid parameters");
    let config = SimConfig::new(params, 100_000, 42)
        .with_replications(10)
        .with_qos(qos);
    let [class0, class1] = simulate_qos(&config);
    println!(
        "\ntwo classes (L0=4, L1=12): blr_hat_0={:.4e} (+-{:.1e})  blr_hat_1={:.4e} (+-{:.1e})",
        class0.blr_hat, class0.ci95, class1.blr_hat, class1.ci95
    );
    println!("the class with fewer reserved wavelengths loses more, as expected");
}
