//! Loss-rate analysis for slotted optical burst switching nodes with partial
//! wavelength conversion.
//!
//! The crate combines three views of the same node:
//!
//! - [`analytic`]: closed-form stationary occupancy distribution, blocking
//!   probabilities and the average burst loss rate;
//! - [`qos`]: two service classes sharing the fibre through reserved
//!   wavelength partitions with per-slot lending;
//! - [`sim`]: a seeded, slotted Monte Carlo simulation of the wavelength
//!   pool, used to validate the analytic trends.
//!
//! [`sweep`] and [`figures`] drive parameter sweeps, analytic-vs-simulated
//! comparisons and canned figure datasets; everything is exposed through the
//! `obsloss` command-line tool as well. See the `examples/` directory for a
//! runnable tour of each capability.
//!
//! ```
//! use obsloss::{burst_loss_rate, SwitchParams};
//!
//! let params = SwitchParams::new(2, 3, 0.0, 0.5).unwrap();
//! assert!((burst_loss_rate(&params) - 1.0 / 12.0).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod config;
mod error;
pub mod figures;
pub mod math;
pub mod output;
pub mod qos;
pub mod sim;
pub mod sweep;

pub use analytic::{blr_fixed_blocking, burst_loss_rate, SwitchParams, TimingSpec};
pub use error::ObsError;
pub use qos::{class_blr, QosParams};
pub use sim::{simulate, simulate_qos, SimConfig};
