//! Preset datasets for the figure family: fixed parameters, curve families,
//! and x-grids live here so that every emitted dataset is reproducible from
//! the figure id alone.

use crate::analytic::{blr_fixed_blocking, burst_loss_rate, SwitchParams};
use crate::output::format_float;
use crate::qos::{class_blr, QosParams};
use crate::sweep::GridSpec;
use crate::ObsError;

/// Bumped whenever any preset changes; recorded in the dataset notes.
pub const PRESET_REGISTRY_VERSION: u32 = 1;

/// Inclusive range of known figure ids.
pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 2..=15;

// Shared preset pieces.
const ARRIVAL_GRID: GridSpec = GridSpec::Range {
    start: 0.001,
    stop: 0.1,
    count: 25,
    log: true,
};
const CONVERSION_GRID: GridSpec = GridSpec::Range {
    start: 0.0,
    stop: 1.0,
    count: 21,
    log: false,
};
const BLOCKING_GRID: GridSpec = GridSpec::Range {
    start: 0.0,
    stop: 1.0,
    count: 21,
    log: false,
};
const QOS_TOTAL: u32 = 16;
const QOS_SHARES: (f64, f64) = (0.5, 0.5);
const QOS_SLOTS: u32 = 100;

/// One figure's dataset: descriptive notes (emitted as `#` comments), a
/// header starting with `x`, and one row per grid point.
#[derive(Clone, Debug)]
pub struct FigureData {
    pub id: u8,
    pub notes: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    /// Default output file name, `figure_<id>.csv`.
    pub fn file_name(&self) -> String {
        format!("figure_{}.csv", self.id)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn slot_grid() -> Vec<f64> {
    (20..=200).step_by(20).map(|v| v as f64).collect()
}

fn wavelength_grid() -> Vec<f64> {
    (1..=30).map(|v| v as f64).collect()
}

fn reserved_grid() -> Vec<f64> {
    (1..=15).map(|v| v as f64).collect()
}

fn label(prefix: &str, value: f64) -> String {
    format!("{prefix}_{}", format_float(value))
}

/// The preset dataset for one figure id.
pub fn figure_dataset(id: u8) -> Result<FigureData, ObsError> {
    match id {
        2 => single_class_figure(
            2,
            "burst loss rate vs arrival probability",
            Axis::Arrival,
            Family::Wavelengths(vec![5, 10, 15, 20]),
            Fixed {
                wavelengths: 0,
                slots: 100,
                conversion: 0.1,
                arrival: 0.0,
            },
        ),
        3 => single_class_figure(
            3,
            "burst loss rate vs arrival probability",
            Axis::Arrival,
            Family::Conversion(vec![0.0, 0.3, 0.6, 1.0]),
            Fixed {
                wavelengths: 20,
                slots: 100,
                conversion: 0.0,
                arrival: 0.0,
            },
        ),
        4 => single_class_figure(
            4,
            "burst loss rate vs conversion capability",
            Axis::Conversion,
            Family::Wavelengths(vec![5, 10, 15, 20]),
            Fixed {
                wavelengths: 0,
                slots: 100,
                conversion: 0.0,
                arrival: 0.01,
            },
        ),
        5 => single_class_figure(
            5,
            "burst loss rate vs conversion capability",
            Axis::Conversion,
            Family::Arrival(vec![0.005, 0.01, 0.02]),
            Fixed {
                wavelengths: 15,
                slots: 100,
                conversion: 0.0,
                arrival: 0.0,
            },
        ),
        6 => single_class_figure(
            6,
            "burst loss rate vs slots per burst",
            Axis::Slots,
            Family::Conversion(vec![0.0, 0.3, 0.6, 1.0]),
            Fixed {
                wavelengths: 20,
                slots: 0,
                conversion: 0.0,
                arrival: 0.01,
            },
        ),
        7 => single_class_figure(
            7,
            "burst loss rate vs slots per burst",
            Axis::Slots,
            Family::Wavelengths(vec![10, 15, 20]),
            Fixed {
                wavelengths: 0,
                slots: 0,
                conversion: 0.1,
                arrival: 0.01,
            },
        ),
        8 => single_class_figure(
            8,
            "burst loss rate vs number of wavelengths",
            Axis::Wavelengths,
            Family::Conversion(vec![0.0, 0.3, 0.6, 1.0]),
            Fixed {
                wavelengths: 0,
                slots: 100,
                conversion: 0.0,
                arrival: 0.01,
            },
        ),
        9 => single_class_figure(
            9,
            "burst loss rate vs number of wavelengths",
            Axis::Wavelengths,
            Family::Arrival(vec![0.005, 0.01, 0.02]),
            Fixed {
                wavelengths: 0,
                slots: 100,
                conversion: 0.3,
                arrival: 0.0,
            },
        ),
        10 => fixed_blocking_figure(),
        11 => qos_figure(
            11,
            &[0],
            CurveOver::Conversion(vec![0.0, 0.5, 1.0]),
            0.5,
            0.5,
        ),
        12 => qos_figure(12, &[0], CurveOver::Arrival(vec![0.1, 0.3, 0.5]), 0.5, 0.5),
        13 => qos_figure(
            13,
            &[1],
            CurveOver::Conversion(vec![0.0, 0.5, 1.0]),
            0.5,
            0.5,
        ),
        14 => qos_figure(14, &[1], CurveOver::Arrival(vec![0.1, 0.3, 0.5]), 0.5, 0.5),
        15 => qos_figure(
            15,
            &[0, 1],
            CurveOver::Conversion(vec![0.0, 0.5, 1.0]),
            0.5,
            0.5,
        ),
        other => Err(ObsError::invalid_parameter(format!(
            "unknown figure id {other}; expected 2..=15"
        ))),
    }
}

enum Axis {
    Arrival,
    Conversion,
    Slots,
    Wavelengths,
}

enum Family {
    Wavelengths(Vec<u32>),
    Conversion(Vec<f64>),
    Arrival(Vec<f64>),
}

struct Fixed {
    wavelengths: u32,
    slots: u32,
    conversion: f64,
    arrival: f64,
}

type Curve = Box<dyn Fn(f64) -> Result<f64, ObsError>>;

fn single_class_figure(
    id: u8,
    title: &str,
    axis: Axis,
    family: Family,
    fixed: Fixed,
) -> Result<FigureData, ObsError> {
    let xs = match axis {
        Axis::Arrival => ARRIVAL_GRID.values()?,
        Axis::Conversion => CONVERSION_GRID.values()?,
        Axis::Slots => slot_grid(),
        Axis::Wavelengths => wavelength_grid(),
    };
    let (labels, curves): (Vec<String>, Vec<Curve>) = match &family {
        Family::Wavelengths(ws) => ws
            .iter()
            .map(|&w| {
                let f = fixed_curve(
                    axis_kind(&axis),
                    w,
                    fixed.slots,
                    fixed.conversion,
                    fixed.arrival,
                );
                (label("w", w as f64), f)
            })
            .unzip(),
        Family::Conversion(rhos) => rhos
            .iter()
            .map(|&rho| {
                let f = fixed_curve(
                    axis_kind(&axis),
                    fixed.wavelengths,
                    fixed.slots,
                    rho,
                    fixed.arrival,
                );
                (label("rho", rho), f)
            })
            .unzip(),
        Family::Arrival(arrivals) => arrivals
            .iter()
            .map(|&a| {
                let f = fixed_curve(
                    axis_kind(&axis),
                    fixed.wavelengths,
                    fixed.slots,
                    fixed.conversion,
                    a,
                );
                (label("A", a), f)
            })
            .unzip(),
    };

    let mut header = vec!["x".to_string()];
    header.extend(labels);
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mut row = vec![x];
        for curve in &curves {
            row.push(curve(x)?);
        }
        rows.push(row);
    }
    Ok(FigureData {
        id,
        notes: figure_notes(id, title, &family, &fixed, &axis),
        header,
        rows,
    })
}

#[derive(Clone, Copy)]
enum AxisKind {
    Arrival,
    Conversion,
    Slots,
    Wavelengths,
}

fn axis_kind(axis: &Axis) -> AxisKind {
    match axis {
        Axis::Arrival => AxisKind::Arrival,
        Axis::Conversion => AxisKind::Conversion,
        Axis::Slots => AxisKind::Slots,
        Axis::Wavelengths => AxisKind::Wavelengths,
    }
}

fn fixed_curve(
    axis: AxisKind,
    wavelengths: u32,
    slots: u32,
    conversion: f64,
    arrival: f64,
) -> Curve {
    Box::new(move |x: f64| {
        let params = match axis {
            AxisKind::Arrival => SwitchParams::new(wavelengths, slots, conversion, x)?,
            AxisKind::Conversion => SwitchParams::new(wavelengths, slots, x, arrival)?,
            AxisKind::Slots => SwitchParams::new(wavelengths, x as u32, conversion, arrival)?,
            AxisKind::Wavelengths => SwitchParams::new(x as u32, slots, conversion, arrival)?,
        };
        Ok(burst_loss_rate(&params))
    })
}

fn figure_notes(id: u8, title: &str, family: &Family, fixed: &Fixed, axis: &Axis) -> Vec<String> {
    let family_desc = match family {
        Family::Wavelengths(ws) => format!(
            "curves: w in {{{}}}",
            ws.iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Family::Conversion(rhos) => format!(
            "curves: rho in {{{}}}",
            rhos.iter()
                .map(|r| format_float(*r))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Family::Arrival(arrivals) => format!(
            "curves: A in {{{}}}",
            arrivals
                .iter()
                .map(|a| format_float(*a))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    };
    let mut fixed_parts = Vec::new();
    match axis {
        Axis::Arrival => {}
        _ => {
            if fixed.arrival > 0.0 {
                fixed_parts.push(format!("A={}", format_float(fixed.arrival)));
            }
        }
    }
    if !matches!(axis, Axis::Wavelengths) && fixed.wavelengths > 0 {
        fixed_parts.push(format!("w={}", fixed.wavelengths));
    }
    if !matches!(axis, Axis::Slots) && fixed.slots > 0 {
        fixed_parts.push(format!("ell={}", fixed.slots));
    }
    if !matches!(axis, Axis::Conversion) && !matches!(family, Family::Conversion(_)) {
        fixed_parts.push(format!("rho={}", format_float(fixed.conversion)));
    }
    vec![
        format!("figure {id}: {title}"),
        format!("fixed: {}", fixed_parts.join(" ")),
        family_desc,
        format!("preset_registry {PRESET_REGISTRY_VERSION}"),
    ]
}

fn fixed_blocking_figure() -> Result<FigureData, ObsError> {
    let xs = BLOCKING_GRID.values()?;
    let mut rows = Vec::with_capacity(xs.len());
    for &pb in &xs {
        rows.push(vec![pb, blr_fixed_blocking(10, 100, 0.01, pb)]);
    }
    Ok(FigureData {
        id: 10,
        notes: vec![
            "figure 10: burst loss rate vs fixed blocking probability".to_string(),
            "fixed: w=10 ell=100 A=0.01".to_string(),
            format!("preset_registry {PRESET_REGISTRY_VERSION}"),
        ],
        header: vec!["x".to_string(), "blr".to_string()],
        rows,
    })
}

enum CurveOver {
    Conversion(Vec<f64>),
    Arrival(Vec<f64>),
}

fn qos_figure(
    id: u8,
    classes: &[usize],
    curve: CurveOver,
    fixed_conversion: f64,
    fixed_arrival: f64,
) -> Result<FigureData, ObsError> {
    let xs = reserved_grid();
    let (curve_values, curve_prefix, fixed_desc) = match &curve {
        CurveOver::Conversion(values) => (
            values.clone(),
            "rho",
            format!("A={}", format_float(fixed_arrival)),
        ),
        CurveOver::Arrival(values) => (
            values.clone(),
            "A",
            format!("rho={}", format_float(fixed_conversion)),
        ),
    };

    let mut header = vec!["x".to_string()];
    for &v in &curve_values {
        for &class in classes {
            let name = if classes.len() == 1 {
                label(curve_prefix, v)
            } else {
                format!("blr{class}_{}", label(curve_prefix, v))
            };
            header.push(name);
        }
    }

    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let qos = QosParams::new(QOS_TOTAL, x as u32, QOS_SHARES)?;
        let mut row = vec![x];
        for &v in &curve_values {
            let (rho, a) = match curve {
                CurveOver::Conversion(_) => (v, fixed_arrival),
                CurveOver::Arrival(_) => (fixed_conversion, v),
            };
            let result = class_blr(&qos, QOS_SLOTS, rho, a)?;
            for &class in classes {
                row.push(result.blr[class]);
            }
        }
        rows.push(row);
    }

    let class_desc = if classes.len() == 1 {
        format!("class {} loss rate vs reserved wavelengths L0", classes[0])
    } else {
        "both classes' loss rates vs reserved wavelengths L0".to_string()
    };
    Ok(FigureData {
        id,
        notes: vec![
            format!("figure {id}: {class_desc}"),
            format!(
                "fixed: N={QOS_TOTAL} S0={} S1={} ell={QOS_SLOTS} {fixed_desc} (L1 = N - L0)",
                format_float(QOS_SHARES.0),
                format_float(QOS_SHARES.1)
            ),
            format!(
                "curves: {curve_prefix} in {{{}}}",
                curve_values
                    .iter()
                    .map(|v| format_float(*v))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            format!("preset_registry {PRESET_REGISTRY_VERSION}"),
        ],
        header,
        rows,
    })
}
