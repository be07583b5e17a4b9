//! Sweep the per-wavelength arrival probability over a log-spaced grid and
//! print the resulting loss rates as CSV, one curve per wavelength count.
//!
//! Run with:
//!   cargo run --example arrival_sweep

use obsloss::sweep::{run_sweep, sweep_csv, GridSpec, SweepParam, SweepSpec};
use obsloss::SwitchParams;

fn main() {
    let grid = GridSpec::Range {
        start: 0.001,
        stop: 0.1,
        count: 10,
        log: true,
    }
    .values()
    .expect("valid grid");

    for wavelengths in [5, 10, 20] {
        let spec = SweepSpec {
            param: SweepParam::ArrivalProb,
            grid: grid.clone(),
            base: SwitchParams::new(wavelengths, 100, 0.1, 0.0).expect("valid parameters"),
            qos: None,
        };
        let rows = run_sweep(&spec).expect("sweep evaluates");
        println!("{}", sweep_csv(spec.param, &rows));
    }
}
