//! Evaluate the analytic loss model at a single parameter point and show the
//! pieces it is built from: the stationary occupancy distribution, the
//! per-occupancy blocking probabilities, and the averaged loss rate.
//!
//! Run with:
//!   cargo run --example eval_point

use obsloss::analytic::{blocking_profile, burst_loss_rate, stationary_distribution, SwitchParams};

fn main() {
    let params = SwitchParams::new(16, 100, 0.3, 0.01).expect("valid parameters");
    println!(
        "node: w={} wavelengths, ell={} slots/burst, rho={} (u={} converters), A={}",
        params.wavelengths(),
        params.slots_per_burst(),
        params.conversion_capability(),
        params.converters(),
        params.arrival_prob()
    );

    let dist = stationary_distribution(&params).unwrap();
    let profile = blocking_profile(&params).unwrap();
    println!("\n  k    e_k            P_b(k)");
    for k in 1..=params.max_occupancy() {
        println!(
            "  {k:>2}   {:<12.6e}   {:<12.6e}",
            dist.state_prob(k),
            profile.blocking_prob(k)
        );
    }
    println!(
        "\nempty-state probability e_0 = {:.6e}, normalization = {:.12}",
        dist.empty_prob(),
        dist.total_probability()
    );
    println!(
        "average burst loss rate     = {:.6e}",
        burst_loss_rate(&params)
    );

    if params.outside_derivation_regime() {
        println!("note: w >= ell, outside the model's derivation regime");
    }
}
