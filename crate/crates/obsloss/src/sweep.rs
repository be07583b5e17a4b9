//! Parameter sweeps and analytic-vs-simulated comparisons over one-parameter
//! grids.

use crate::analytic::{blr_fixed_blocking, burst_loss_rate, SwitchParams};
use crate::output::format_float;
use crate::qos::{class_blr, QosParams};
use crate::sim::{simulate, SimConfig};
use crate::ObsError;

/// Which knob a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    ArrivalProb,
    ConversionCapability,
    SlotsPerBurst,
    Wavelengths,
    ReservedL0,
    FixedBlocking,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [
        SweepParam::ArrivalProb,
        SweepParam::ConversionCapability,
        SweepParam::SlotsPerBurst,
        SweepParam::Wavelengths,
        SweepParam::ReservedL0,
        SweepParam::FixedBlocking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::ArrivalProb => "arrival_prob",
            SweepParam::ConversionCapability => "conversion_capability",
            SweepParam::SlotsPerBurst => "slots_per_burst",
            SweepParam::Wavelengths => "wavelengths",
            SweepParam::ReservedL0 => "reserved_L0",
            SweepParam::FixedBlocking => "fixed_blocking",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ObsError> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let known = Self::ALL.map(|p| p.name()).join(", ");
                ObsError::invalid_parameter(format!(
                    "unknown sweep parameter {name:?}; one of: {known}"
                ))
            })
    }
}

/// Grid of values for the varied parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    Explicit(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        log: bool,
    },
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, ObsError> {
        match self {
            GridSpec::Explicit(values) => {
                if values.is_empty() {
                    return Err(ObsError::invalid_parameter("empty sweep grid"));
                }
                Ok(values.clone())
            }
            GridSpec::Range {
                start,
                stop,
                count,
                log,
            } => {
                if *count == 0 {
                    return Err(ObsError::invalid_parameter("grid count must be positive"));
                }
                if *count == 1 {
                    return Ok(vec![*start]);
                }
                if *log && (*start <= 0.0 || *stop <= 0.0) {
                    return Err(ObsError::invalid_parameter(
                        "log-spaced grids need positive endpoints",
                    ));
                }
                let n = *count as f64 - 1.0;
                let values = (0..*count)
                    .map(|i| {
                        let t = i as f64 / n;
                        if *log {
                            (start.ln() + t * (stop.ln() - start.ln())).exp()
                        } else {
                            start + t * (stop - start)
                        }
                    })
                    .collect();
                Ok(values)
            }
        }
    }
}

/// One varying parameter over a grid, everything else fixed.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub base: SwitchParams,
    /// Needed when `param` is `ReservedL0`.
    pub qos: Option<QosParams>,
}

/// One evaluated grid point.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub params: SwitchParams,
    pub blr: f64,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, ObsError> {
    if spec.grid.is_empty() {
        return Err(ObsError::invalid_parameter("empty sweep grid"));
    }
    spec.grid
        .iter()
        .map(|&value| evaluate_point(spec, value))
        .collect()
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> Result<SweepRow, ObsError> {
    let base = &spec.base;
    let (params, blr) = match spec.param {
        SweepParam::ArrivalProb => {
            let p = SwitchParams::new(
                base.wavelengths(),
                base.slots_per_burst(),
                base.conversion_capability(),
                value,
            )?;
            (p, burst_loss_rate(&p))
        }
        SweepParam::ConversionCapability => {
            let p = SwitchParams::new(
                base.wavelengths(),
                base.slots_per_burst(),
                value,
                base.arrival_prob(),
            )?;
            (p, burst_loss_rate(&p))
        }
        SweepParam::SlotsPerBurst => {
            let ell = as_count(value, "slots_per_burst")?;
            let p = SwitchParams::new(
                base.wavelengths(),
                ell,
                base.conversion_capability(),
                base.arrival_prob(),
            )?;
            (p, burst_loss_rate(&p))
        }
        SweepParam::Wavelengths => {
            let w = as_count(value, "wavelengths")?;
            let p = SwitchParams::new(
                w,
                base.slots_per_burst(),
                base.conversion_capability(),
                base.arrival_prob(),
            )?;
            (p, burst_loss_rate(&p))
        }
        SweepParam::ReservedL0 => {
            let qos = spec.qos.ok_or_else(|| {
                ObsError::invalid_parameter("reserved_L0 sweeps need QoS parameters (N, S0)")
            })?;
            let reserved0 = as_count(value, "reserved_L0")?;
            let q = QosParams::new(
                qos.total_wavelengths(),
                reserved0,
                (qos.share(0), qos.share(1)),
            )?;
            let result = class_blr(
                &q,
                base.slots_per_burst(),
                base.conversion_capability(),
                base.arrival_prob(),
            )?;
            // the blr column reports class 0, the class whose reservation
            // varies; the qos command reports both classes
            (*base, result.blr[0])
        }
        SweepParam::FixedBlocking => {
            if !(0.0..=1.0).contains(&value) {
                return Err(ObsError::invalid_parameter(format!(
                    "fixed blocking probability {value} outside [0, 1]"
                )));
            }
            let a = base.arrival_prob();
            if a == 0.0 || a >= 1.0 {
                return Err(ObsError::invalid_parameter(
                    "fixed_blocking sweeps need 0 < A < 1",
                ));
            }
            let v = blr_fixed_blocking(base.wavelengths(), base.slots_per_burst(), a, value);
            (*base, v)
        }
    };
    Ok(SweepRow { value, params, blr })
}

fn as_count(value: f64, name: &str) -> Result<u32, ObsError> {
    let rounded = value.round();
    if (value - rounded).abs() > 1e-9 || rounded < 0.0 || rounded > u32::MAX as f64 {
        return Err(ObsError::invalid_parameter(format!(
            "{name} must be a nonnegative integer, got {value}"
        )));
    }
    Ok(rounded as u32)
}

/// CSV for a sweep: `param,value,w,ell,rho,A,blr`, one row per grid point.
pub fn sweep_csv(param: SweepParam, rows: &[SweepRow]) -> String {
    let mut out = String::from("param,value,w,ell,rho,A,blr\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            param.name(),
            format_float(row.value),
            row.params.wavelengths(),
            row.params.slots_per_burst(),
            format_float(row.params.conversion_capability()),
            format_float(row.params.arrival_prob()),
            format_float(row.blr),
        ));
    }
    out
}

/// Monte Carlo settings for comparisons.
#[derive(Clone, Copy, Debug)]
pub struct SimSettings {
    pub horizon: u64,
    /// Defaults to 5% of the horizon when absent.
    pub warmup: Option<u64>,
    pub replications: u32,
    pub seed: u64,
}

/// One grid point of an analytic-vs-simulated comparison.
#[derive(Clone, Copy, Debug)]
pub struct CompareRow {
    pub value: f64,
    pub analytic: f64,
    pub simulated: f64,
    pub ci95: f64,
}

#[derive(Clone, Debug)]
pub struct CompareResult {
    pub rows: Vec<CompareRow>,
    /// Fraction of adjacent grid pairs where both series move in the same
    /// direction; 1.0 by convention for single-point grids.
    pub rank_agreement: f64,
}

/// Evaluate the sweep analytically and with the simulator. All grid points
/// share the base seed (common random numbers), so differences between
/// points reflect the parameter change rather than sampling noise.
pub fn run_compare(spec: &SweepSpec, sim: &SimSettings) -> Result<CompareResult, ObsError> {
    if matches!(
        spec.param,
        SweepParam::ReservedL0 | SweepParam::FixedBlocking
    ) {
        return Err(ObsError::invalid_parameter(
            "compare supports arrival_prob, conversion_capability, slots_per_burst and wavelengths",
        ));
    }
    let rows = run_sweep(spec)?
        .into_iter()
        .map(|row| {
            let mut cfg = SimConfig::new(row.params, sim.horizon, sim.seed)
                .with_replications(sim.replications);
            if let Some(warmup) = sim.warmup {
                cfg = cfg.with_warmup(warmup);
            }
            let est = simulate(&cfg);
            CompareRow {
                value: row.value,
                analytic: row.blr,
                simulated: est.blr_hat,
                ci95: est.ci95,
            }
        })
        .collect::<Vec<_>>();
    let analytic: Vec<f64> = rows.iter().map(|r| r.analytic).collect();
    let simulated: Vec<f64> = rows.iter().map(|r| r.simulated).collect();
    Ok(CompareResult {
        rank_agreement: rank_order_agreement(&analytic, &simulated),
        rows,
    })
}

fn direction(delta: f64) -> i8 {
    if delta > 0.0 {
        1
    } else if delta < 0.0 {
        -1
    } else {
        0
    }
}

/// Fraction of adjacent index pairs where the two series move in the same
/// direction (ties only match ties). Series shorter than two points agree
/// fully by convention.
pub fn rank_order_agreement(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "series lengths must match");
    if a.len() < 2 {
        return 1.0;
    }
    let pairs = a.len() - 1;
    let agreeing = (0..pairs)
        .filter(|&i| direction(a[i + 1] - a[i]) == direction(b[i + 1] - b[i]))
        .count();
    agreeing as f64 / pairs as f64
}

/// CSV for a comparison: `param,value,blr_analytic,blr_sim,ci95`, a `#`
/// trailer line carrying the rank-order agreement.
pub fn compare_csv(param: SweepParam, result: &CompareResult) -> String {
    let mut out = String::from("param,value,blr_analytic,blr_sim,ci95\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            param.name(),
            format_float(row.value),
            format_float(row.analytic),
            format_float(row.simulated),
            format_float(row.ci95),
        ));
    }
    out.push_str(&format!(
        "# rank_order_agreement,{}\n",
        format_float(result.rank_agreement)
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SwitchParams {
        SwitchParams::new(20, 100, 0.1, 0.01).unwrap()
    }

    #[test]
    fn grids_hit_their_endpoints() {
        let lin = GridSpec::Range {
            start: 0.0,
            stop: 1.0,
            count: 21,
            log: false,
        }
        .values()
        .unwrap();
        assert_eq!(lin.len(), 21);
        assert_eq!(lin[0], 0.0);
        assert_eq!(lin[20], 1.0);

        let log = GridSpec::Range {
            start: 0.001,
            stop: 0.1,
            count: 25,
            log: true,
        }
        .values()
        .unwrap();
        assert_eq!(log.len(), 25);
        assert!((log[0] - 0.001).abs() < 1e-15);
        assert!((log[24] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::Explicit(vec![]).values().is_err());
        assert!(GridSpec::Range {
            start: 0.0,
            stop: 1.0,
            count: 0,
            log: false
        }
        .values()
        .is_err());
        assert!(GridSpec::Range {
            start: 0.0,
            stop: 1.0,
            count: 5,
            log: true
        }
        .values()
        .is_err());
    }

    #[test]
    fn arrival_sweep_is_nondecreasing() {
        let spec = SweepSpec {
            param: SweepParam::ArrivalProb,
            grid: vec![0.001, 0.01, 0.1],
            base: base(),
            qos: None,
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].blr >= rows[0].blr);
        assert!(rows[2].blr >= rows[1].blr);
    }

    #[test]
    fn conversion_sweep_is_nonincreasing() {
        let spec = SweepSpec {
            param: SweepParam::ConversionCapability,
            grid: vec![0.0, 1.0],
            base: SwitchParams::new(15, 100, 0.0, 0.01).unwrap(),
            qos: None,
        };
        let rows = run_sweep(&spec).unwrap();
        assert!(rows[1].blr <= rows[0].blr);
    }

    #[test]
    fn integer_parameters_reject_fractional_values() {
        let spec = SweepSpec {
            param: SweepParam::Wavelengths,
            grid: vec![5.5],
            base: base(),
            qos: None,
        };
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn reserved_sweep_needs_qos() {
        let spec = SweepSpec {
            param: SweepParam::ReservedL0,
            grid: vec![4.0],
            base: base(),
            qos: None,
        };
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn sweep_csv_schema() {
        let spec = SweepSpec {
            param: SweepParam::ArrivalProb,
            grid: vec![0.01],
            base: base(),
            qos: None,
        };
        let csv = sweep_csv(spec.param, &run_sweep(&spec).unwrap());
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "param,value,w,ell,rho,A,blr");
        let row = lines.next().unwrap();
        assert!(row.starts_with("arrival_prob,0.01,20,100,0.1,0.01,"));
    }

    #[test]
    fn rank_agreement_conventions() {
        assert_eq!(rank_order_agreement(&[1.0], &[2.0]), 1.0);
        assert_eq!(rank_order_agreement(&[1.0, 2.0], &[5.0, 9.0]), 1.0);
        assert_eq!(rank_order_agreement(&[1.0, 2.0], &[5.0, 3.0]), 0.0);
        assert_eq!(
            rank_order_agreement(&[1.0, 2.0, 2.0], &[5.0, 9.0, 9.0]),
            1.0
        );
        assert_eq!(
            rank_order_agreement(&[1.0, 2.0, 3.0, 2.0], &[1.0, 5.0, 4.0, 1.0]),
            2.0 / 3.0
        );
    }

    #[test]
    fn compare_rejects_parameters_without_a_simulator_analogue() {
        let settings = SimSettings {
            horizon: 100,
            warmup: None,
            replications: 1,
            seed: 0,
        };
        for param in [SweepParam::FixedBlocking, SweepParam::ReservedL0] {
            let spec = SweepSpec {
                param,
                grid: vec![0.5],
                base: base(),
                qos: None,
            };
            assert!(run_compare(&spec, &settings).is_err());
        }
    }

    #[test]
    fn compare_emits_trailer() {
        let spec = SweepSpec {
            param: SweepParam::ArrivalProb,
            grid: vec![0.05, 0.2],
            base: SwitchParams::new(4, 10, 0.5, 0.05).unwrap(),
            qos: None,
        };
        let settings = SimSettings {
            horizon: 2000,
            warmup: None,
            replications: 2,
            seed: 7,
        };
        let result = run_compare(&spec, &settings).unwrap();
        let csv = compare_csv(spec.param, &result);
        assert!(csv.starts_with("param,value,blr_analytic,blr_sim,ci95\n"));
        assert!(csv
            .trim_end()
            .lines()
            .last()
            .unwrap()
            .starts_with("# rank_order_agreement,"));
    }
}
