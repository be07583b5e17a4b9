//! Command-line front end. All computation lives in the library; this file
//! only resolves flags (with optional key=value config files underneath),
//! renders records, and maps every validation failure to exit code 2.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use obsloss::analytic::{burst_loss_rate, SwitchParams};
use obsloss::config::parse_config;
use obsloss::figures::figure_dataset;
use obsloss::output::Record;
use obsloss::qos::{class_blr, QosParams};
use obsloss::sim::{simulate, simulate_qos, SimConfig, WavelengthPick};
use obsloss::sweep::{
    compare_csv, run_compare, run_sweep, sweep_csv, CompareResult, GridSpec, SimSettings,
    SweepParam, SweepRow, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "obsloss",
    version,
    about = "Loss-rate analysis for slotted optical burst switching nodes"
)]
struct Cli {
    /// Output format, csv or json (figure datasets are always CSV).
    #[arg(long, global = true)]
    format: Option<String>,

    /// key=value defaults, one per line; explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Base RNG seed for simulation commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic burst loss rate at one parameter point.
    Eval {
        /// Number of wavelengths.
        #[arg(long)]
        w: Option<u32>,
        /// Slots per burst.
        #[arg(long)]
        ell: Option<u32>,
        /// Wavelength conversion capability in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Per-wavelength arrival probability per slot, in [0, 1).
        #[arg(long = "A")]
        arrival: Option<f64>,
    },
    /// Analytic loss rate over a one-parameter grid.
    Sweep {
        /// Varied parameter: arrival_prob, conversion_capability,
        /// slots_per_burst, wavelengths, reserved_L0 or fixed_blocking.
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated explicit grid values.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// Grid spacing for start/stop/count ranges: linear or log.
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        w: Option<u32>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long = "A")]
        arrival: Option<f64>,
        /// Total wavelengths (reserved_L0 sweeps).
        #[arg(long = "N")]
        total: Option<u32>,
        /// Class 0 traffic share (reserved_L0 sweeps).
        #[arg(long = "S0")]
        share0: Option<f64>,
    },
    /// Per-class loss rates for the two-class partition.
    Qos {
        #[arg(long = "N")]
        total: Option<u32>,
        #[arg(long = "L0")]
        reserved0: Option<u32>,
        #[arg(long = "S0")]
        share0: Option<f64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long = "A")]
        arrival: Option<f64>,
    },
    /// Monte Carlo loss-rate estimate.
    Simulate {
        #[arg(long)]
        w: Option<u32>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long = "A")]
        arrival: Option<f64>,
        /// Measured slots per replication.
        #[arg(long)]
        horizon: Option<u64>,
        /// Unmeasured leading slots; defaults to 5% of the horizon.
        #[arg(long)]
        warmup: Option<u64>,
        #[arg(long)]
        replications: Option<u32>,
        /// Run the two-class simulator (requires --N, --L0, --S0; replaces --w).
        #[arg(long)]
        qos: bool,
        #[arg(long = "N")]
        total: Option<u32>,
        #[arg(long = "L0")]
        reserved0: Option<u32>,
        #[arg(long = "S0")]
        share0: Option<f64>,
        /// Free-wavelength choice on conversion: uniform or lowest.
        #[arg(long)]
        pick: Option<String>,
    },
    /// Analytic vs simulated loss over a grid, with a rank-order trailer.
    Compare {
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        w: Option<u32>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long = "A")]
        arrival: Option<f64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        warmup: Option<u64>,
        #[arg(long)]
        replications: Option<u32>,
    },
    /// Write the preset dataset for one figure id (2..=15) as CSV.
    Figure { id: Option<u8> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("obsloss: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Flag/config resolution: explicit flags win, then config keys, then
/// defaults.
struct Ctx {
    cfg: BTreeMap<String, String>,
}

impl Ctx {
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.cfg.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key {key}={raw:?}: {e}")),
            None => Ok(None),
        }
    }

    fn get_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String>
    where
        T::Err: Display,
    {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, String>
    where
        T::Err: Display,
    {
        self.get(flag, key)?.ok_or_else(|| {
            format!("missing required parameter {key} (flag --{key} or config key {key})")
        })
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| e.to_string())?
        }
        None => BTreeMap::new(),
    };
    let ctx = Ctx { cfg };
    let format = ctx.get_or(cli.format, "format", "csv".to_string())?;
    if format != "csv" && format != "json" {
        return Err(format!("unknown format {format:?}; expected csv or json"));
    }
    let seed = ctx.get_or(cli.seed, "seed", 0)?;
    let out = match cli.out {
        Some(path) => Some(path),
        None => ctx.cfg.get("out").map(PathBuf::from),
    };

    match cli.command {
        Command::Eval {
            w,
            ell,
            rho,
            arrival,
        } => {
            let params = SwitchParams::new(
                ctx.require(w, "w")?,
                ctx.require(ell, "ell")?,
                ctx.require(rho, "rho")?,
                ctx.require(arrival, "A")?,
            )
            .map_err(|e| e.to_string())?;
            let record = Record::new()
                .uint("w", params.wavelengths() as u64)
                .uint("ell", params.slots_per_burst() as u64)
                .float("rho", params.conversion_capability())
                .float("A", params.arrival_prob())
                .uint("u", params.converters() as u64)
                .float("blr", burst_loss_rate(&params))
                .text(
                    "regime",
                    if params.outside_derivation_regime() {
                        "w_ge_ell"
                    } else {
                        "ok"
                    },
                );
            emit(&out, &render(&record, &format))
        }

        Command::Sweep {
            param,
            values,
            start,
            stop,
            count,
            scale,
            w,
            ell,
            rho,
            arrival,
            total,
            share0,
        } => {
            let param =
                SweepParam::parse(&ctx.require(param, "param")?).map_err(|e| e.to_string())?;
            let grid = resolve_grid(&ctx, values, start, stop, count, scale)?;
            let spec = build_sweep_spec(&ctx, param, grid, w, ell, rho, arrival, total, share0)?;
            let rows = run_sweep(&spec).map_err(|e| e.to_string())?;
            let rendered = if format == "json" {
                sweep_json(param, &rows)
            } else {
                sweep_csv(param, &rows)
            };
            emit(&out, &rendered)
        }

        Command::Qos {
            total,
            reserved0,
            share0,
            ell,
            rho,
            arrival,
        } => {
            let total = ctx.require(total, "N")?;
            let reserved0 = ctx.require(reserved0, "L0")?;
            let share0 = ctx.require(share0, "S0")?;
            let ell = ctx.require(ell, "ell")?;
            let rho = ctx.require(rho, "rho")?;
            let arrival = ctx.require(arrival, "A")?;
            let qos = QosParams::new(total, reserved0, (share0, 1.0 - share0))
                .map_err(|e| e.to_string())?;
            let result = class_blr(&qos, ell, rho, arrival).map_err(|e| e.to_string())?;
            let record = Record::new()
                .uint("N", total as u64)
                .uint("L0", qos.reserved(0) as u64)
                .uint("L1", qos.reserved(1) as u64)
                .float("S0", qos.share(0))
                .float("S1", qos.share(1))
                .uint("ell", ell as u64)
                .float("rho", rho)
                .float("A", arrival)
                .float("blr_0", result.blr[0])
                .float("blr_1", result.blr[1]);
            emit(&out, &render(&record, &format))
        }

        Command::Simulate {
            w,
            ell,
            rho,
            arrival,
            horizon,
            warmup,
            replications,
            qos,
            total,
            reserved0,
            share0,
            pick,
        } => {
            let qos_mode = qos || ctx.get_or(None::<bool>, "qos", false)?;
            let ell = ctx.require(ell, "ell")?;
            let rho = ctx.require(rho, "rho")?;
            let arrival = ctx.require(arrival, "A")?;
            let horizon = ctx.get_or(horizon, "horizon", 100_000)?;
            if horizon < 1 {
                return Err("horizon must be at least 1 slot".to_string());
            }
            let replications = ctx.get_or(replications, "replications", 5)?;
            if replications < 1 {
                return Err("replications must be at least 1".to_string());
            }
            let warmup = ctx.get(warmup, "warmup")?;
            let pick = match ctx.get_or(pick, "pick", "uniform".to_string())?.as_str() {
                "uniform" => WavelengthPick::UniformRandom,
                "lowest" => WavelengthPick::LowestIndex,
                other => {
                    return Err(format!(
                        "unknown pick {other:?}; expected uniform or lowest"
                    ))
                }
            };

            if qos_mode {
                if w.is_some() {
                    return Err("--w conflicts with --qos; the fibre width is --N".to_string());
                }
                let total = ctx.require(total, "N")?;
                let reserved0 = ctx.require(reserved0, "L0")?;
                let share0 = ctx.require(share0, "S0")?;
                let qos_params = QosParams::new(total, reserved0, (share0, 1.0 - share0))
                    .map_err(|e| e.to_string())?;
                let params =
                    SwitchParams::new(total, ell, rho, arrival).map_err(|e| e.to_string())?;
                let mut cfg = SimConfig::new(params, horizon, seed)
                    .with_replications(replications)
                    .with_qos(qos_params)
                    .with_pick(pick);
                if let Some(warmup) = warmup {
                    cfg = cfg.with_warmup(warmup);
                }
                let estimates = simulate_qos(&cfg);
                let mut record = Record::new()
                    .uint("N", total as u64)
                    .uint("L0", qos_params.reserved(0) as u64)
                    .float("S0", qos_params.share(0))
                    .uint("ell", ell as u64)
                    .float("rho", rho)
                    .float("A", arrival)
                    .uint("horizon", horizon)
                    .uint("warmup", cfg.warmup)
                    .uint("replications", replications as u64)
                    .uint("seed", seed);
                for (class, est) in estimates.iter().enumerate() {
                    record = record
                        .uint(&format!("offered_{class}"), est.offered)
                        .uint(&format!("blocked_{class}"), est.blocked)
                        .float(&format!("blr_hat_{class}"), est.blr_hat)
                        .float(&format!("ci95_{class}"), est.ci95);
                }
                emit(&out, &render(&record, &format))
            } else {
                let w = ctx.require(w, "w")?;
                let params = SwitchParams::new(w, ell, rho, arrival).map_err(|e| e.to_string())?;
                let mut cfg = SimConfig::new(params, horizon, seed)
                    .with_replications(replications)
                    .with_pick(pick);
                if let Some(warmup) = warmup {
                    cfg = cfg.with_warmup(warmup);
                }
                let est = simulate(&cfg);
                let record = Record::new()
                    .uint("w", w as u64)
                    .uint("ell", ell as u64)
                    .float("rho", rho)
                    .float("A", arrival)
                    .uint("horizon", horizon)
                    .uint("warmup", cfg.warmup)
                    .uint("replications", replications as u64)
                    .uint("seed", seed)
                    .uint("offered", est.offered)
                    .uint("blocked", est.blocked)
                    .float("blr_hat", est.blr_hat)
                    .float("ci95", est.ci95);
                emit(&out, &render(&record, &format))
            }
        }

        Command::Compare {
            param,
            values,
            start,
            stop,
            count,
            scale,
            w,
            ell,
            rho,
            arrival,
            horizon,
            warmup,
            replications,
        } => {
            let param =
                SweepParam::parse(&ctx.require(param, "param")?).map_err(|e| e.to_string())?;
            let grid = resolve_grid(&ctx, values, start, stop, count, scale)?;
            let spec = build_sweep_spec(&ctx, param, grid, w, ell, rho, arrival, None, None)?;
            let horizon = ctx.get_or(horizon, "horizon", 100_000)?;
            if horizon < 1 {
                return Err("horizon must be at least 1 slot".to_string());
            }
            let replications = ctx.get_or(replications, "replications", 10)?;
            if replications < 1 {
                return Err("replications must be at least 1".to_string());
            }
            let settings = SimSettings {
                horizon,
                warmup: ctx.get(warmup, "warmup")?,
                replications,
                seed,
            };
            let result = run_compare(&spec, &settings).map_err(|e| e.to_string())?;
            let rendered = if format == "json" {
                compare_json(param, &result, &spec, &settings)
            } else {
                let meta = format!(
                    "# config: param={} w={} ell={} rho={} A={} horizon={} warmup={} replications={} seed={}\n",
                    param.name(),
                    spec.base.wavelengths(),
                    spec.base.slots_per_burst(),
                    spec.base.conversion_capability(),
                    spec.base.arrival_prob(),
                    settings.horizon,
                    settings.warmup.map_or_else(|| "default".to_string(), |w| w.to_string()),
                    settings.replications,
                    settings.seed,
                );
                format!("{meta}{}", compare_csv(param, &result))
            };
            emit(&out, &rendered)
        }

        Command::Figure { id } => {
            if format == "json" {
                return Err("figure datasets are CSV only".to_string());
            }
            let id = ctx.require(id, "id")?;
            let fig = figure_dataset(id).map_err(|e| e.to_string())?;
            let path = out.unwrap_or_else(|| PathBuf::from(fig.file_name()));
            std::fs::write(&path, fig.to_csv())
                .map_err(|e| format!("writing {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn resolve_grid(
    ctx: &Ctx,
    values: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
    scale: Option<String>,
) -> Result<Vec<f64>, String> {
    let values = ctx.get(values, "values")?;
    let grid = if let Some(list) = values {
        let parsed = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| format!("grid value {s:?}: {e}"))
            })
            .collect::<Result<Vec<f64>, String>>()?;
        GridSpec::Explicit(parsed)
    } else {
        let scale = ctx.get_or(scale, "scale", "linear".to_string())?;
        let log = match scale.as_str() {
            "linear" => false,
            "log" => true,
            other => return Err(format!("unknown scale {other:?}; expected linear or log")),
        };
        GridSpec::Range {
            start: ctx.require(start, "start")?,
            stop: ctx.require(stop, "stop")?,
            count: ctx.require(count, "count")?,
            log,
        }
    };
    grid.values().map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn build_sweep_spec(
    ctx: &Ctx,
    param: SweepParam,
    grid: Vec<f64>,
    w: Option<u32>,
    ell: Option<u32>,
    rho: Option<f64>,
    arrival: Option<f64>,
    total: Option<u32>,
    share0: Option<f64>,
) -> Result<SweepSpec, String> {
    // the varied parameter takes a placeholder in the base; its real values
    // come from the grid
    let w = match param {
        SweepParam::Wavelengths => ctx.get_or(w, "w", 1)?,
        SweepParam::ReservedL0 => ctx.require(total, "N")?,
        _ => ctx.require(w, "w")?,
    };
    let ell = match param {
        SweepParam::SlotsPerBurst => ctx.get_or(ell, "ell", 2)?,
        _ => ctx.require(ell, "ell")?,
    };
    let rho = match param {
        SweepParam::ConversionCapability | SweepParam::FixedBlocking => {
            ctx.get_or(rho, "rho", 0.0)?
        }
        _ => ctx.require(rho, "rho")?,
    };
    let arrival = match param {
        SweepParam::ArrivalProb => ctx.get_or(arrival, "A", 0.0)?,
        _ => ctx.require(arrival, "A")?,
    };
    let base = SwitchParams::new(w, ell, rho, arrival).map_err(|e| e.to_string())?;
    let qos = if param == SweepParam::ReservedL0 {
        let share0 = ctx.require(share0, "S0")?;
        Some(QosParams::new(w, 1, (share0, 1.0 - share0)).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(SweepSpec {
        param,
        grid,
        base,
        qos,
    })
}

fn render(record: &Record, format: &str) -> String {
    if format == "json" {
        record.to_json()
    } else {
        record.to_csv()
    }
}

fn sweep_json(param: SweepParam, rows: &[SweepRow]) -> String {
    let objects: Vec<String> = rows
        .iter()
        .map(|row| {
            Record::new()
                .text("param", param.name())
                .float("value", row.value)
                .uint("w", row.params.wavelengths() as u64)
                .uint("ell", row.params.slots_per_burst() as u64)
                .float("rho", row.params.conversion_capability())
                .float("A", row.params.arrival_prob())
                .float("blr", row.blr)
                .to_json()
                .trim_end()
                .to_string()
        })
        .collect();
    format!("[{}]\n", objects.join(","))
}

fn compare_json(
    param: SweepParam,
    result: &CompareResult,
    spec: &SweepSpec,
    settings: &SimSettings,
) -> String {
    let rows: Vec<String> = result
        .rows
        .iter()
        .map(|row| {
            Record::new()
                .text("param", param.name())
                .float("value", row.value)
                .float("blr_analytic", row.analytic)
                .float("blr_sim", row.simulated)
                .float("ci95", row.ci95)
                .to_json()
                .trim_end()
                .to_string()
        })
        .collect();
    let meta = Record::new()
        .uint("w", spec.base.wavelengths() as u64)
        .uint("ell", spec.base.slots_per_burst() as u64)
        .float("rho", spec.base.conversion_capability())
        .float("A", spec.base.arrival_prob())
        .uint("horizon", settings.horizon)
        .uint("replications", settings.replications as u64)
        .uint("seed", settings.seed)
        .to_json()
        .trim_end()
        .to_string();
    format!(
        "{{\"config\":{meta},\"rows\":[{}],\"rank_order_agreement\":{}}}\n",
        rows.join(","),
        obsloss::output::format_float(result.rank_agreement)
    )
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
