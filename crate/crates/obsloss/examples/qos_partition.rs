//! Two-class differentiation: how the reserved split L0 / (N - L0) moves
//! each class's loss rate, including the crossing at the even split.
//!
//! Run with:
//!   cargo run --example qos_partition

use obsloss::qos::{class_blr, reallocate, QosParams, SlotScenario};

fn main() {
    let (ell, rho, arrival) = (100, 0.5, 0.5);
    println!("N=16 wavelengths, ell={ell}, rho={rho}, A={arrival}, equal traffic shares");
    println!("\n  L0   L1   blr_0         blr_1");
    for reserved0 in 1..=15u32 {
        let qos = QosParams::new(16, reserved0, (0.5, 0.5)).expect("valid partition");
        let result = class_blr(&qos, ell, rho, arrival).expect("model evaluates");
        let marker = if result.blr[0] == result.blr[1] {
            "  <- equal"
        } else {
            ""
        };
        println!(
            "  {:>2}   {:>2}   {:<10.6e}  {:<10.6e}{marker}",
            qos.reserved(0),
            qos.reserved(1),
            result.blr[0],
            result.blr[1]
        );
    }

    // the per-slot lending behind those numbers
    let qos = QosParams::new(16, 8, (0.5, 0.5)).unwrap();
    println!("\nlending for a few slot scenarios at L0=L1=8:");
    for (j0, j1) in [(0, 0), (3, 0), (10, 0), (10, 12)] {
        let r = reallocate(&qos, SlotScenario::new(j0, j1), ell, rho, arrival).unwrap();
        println!(
            "  arrivals ({j0:>2}, {j1:>2}) -> resultant wavelengths ({:>2}, {:>2})",
            r.resultant[0], r.resultant[1]
        );
    }
}
