//! Two-class service differentiation on a shared fibre.
//!
//! Each class reserves part of the wavelength pool; per slot, a class that
//! leaves reserved wavelengths unused lends them to the other class, and the
//! expected number of lost bursts per class follows from the resultant
//! wavelength counts. Averaging over binomial arrivals split multinomially
//! between the classes yields per-class loss rates.

use crate::analytic::{arrival_pmf, blocking_profile, BlockingProfile, SwitchParams};
use crate::math::multinomial_pmf;
use crate::ObsError;

/// Wavelength partition and traffic shares for the two classes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QosParams {
    total: u32,
    reserved: [u32; 2],
    shares: [f64; 2],
}

impl QosParams {
    /// `reserved0` wavelengths go to class 0, the remaining to class 1.
    ///
    /// Shares must be probabilities summing to 1; a zero share is accepted
    /// here (the simulator handles one-class traffic) but rejected by
    /// [`class_blr`], whose normalization divides by each share.
    pub fn new(
        total_wavelengths: u32,
        reserved0: u32,
        shares: (f64, f64),
    ) -> Result<Self, ObsError> {
        if total_wavelengths < 2 {
            return Err(ObsError::invalid_parameter(
                "two classes need at least 2 wavelengths in total",
            ));
        }
        if reserved0 < 1 || reserved0 > total_wavelengths - 1 {
            return Err(ObsError::invalid_parameter(format!(
                "reserved count {reserved0} outside 1..={} (each class keeps at least one wavelength)",
                total_wavelengths - 1
            )));
        }
        let (s0, s1) = shares;
        for s in [s0, s1] {
            if !s.is_finite() || !(0.0..=1.0).contains(&s) {
                return Err(ObsError::invalid_parameter(format!(
                    "share {s} outside [0, 1]"
                )));
            }
        }
        if (s0 + s1 - 1.0).abs() > 1e-12 {
            return Err(ObsError::invalid_parameter(format!(
                "shares {s0} + {s1} do not sum to 1"
            )));
        }
        Ok(Self {
            total: total_wavelengths,
            reserved: [reserved0, total_wavelengths - reserved0],
            shares: [s0, s1],
        })
    }

    pub fn total_wavelengths(&self) -> u32 {
        self.total
    }

    pub fn reserved(&self, class: usize) -> u32 {
        self.reserved[class]
    }

    pub fn share(&self, class: usize) -> f64 {
        self.shares[class]
    }

    /// The same partition with the two classes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            total: self.total,
            reserved: [self.reserved[1], self.reserved[0]],
            shares: [self.shares[1], self.shares[0]],
        }
    }
}

/// Class arrivals within one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotScenario {
    pub arrivals: [u32; 2],
}

impl SlotScenario {
    pub fn new(class0: u32, class1: u32) -> Self {
        Self {
            arrivals: [class0, class1],
        }
    }

    pub fn total(&self) -> u32 {
        self.arrivals[0] + self.arrivals[1]
    }
}

/// Wavelength counts after lending, rounded to integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reallocation {
    pub resultant: [u32; 2],
}

/// Per-class loss rates plus the per-scenario accounting behind them.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassBlr {
    pub blr: [f64; 2],
    pub scenarios: Vec<ScenarioLoss>,
}

/// One (k, j0) term of the loss-rate double sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioLoss {
    pub arrivals: [u32; 2],
    /// Arrival probability of the scenario: A_k times the multinomial split.
    pub weight: f64,
    pub resultant: [u32; 2],
    /// Expected lost bursts per class in this scenario.
    pub lost: [f64; 2],
}

/// Blocking probability seen by `bursts` arrivals of a class holding
/// `class_wavelengths`, on the shared slot/conversion/arrival geometry.
/// Zero offered bursts are never blocked.
pub fn class_blocking(
    bursts: u32,
    class_wavelengths: u32,
    slots_per_burst: u32,
    conversion: f64,
    arrival_prob: f64,
) -> Result<f64, ObsError> {
    if bursts == 0 {
        return Ok(0.0);
    }
    let params = SwitchParams::new(class_wavelengths, slots_per_burst, conversion, arrival_prob)?;
    if bursts > params.max_occupancy() {
        return Err(ObsError::OccupancyOutOfRange {
            occupancy: bursts,
            max: params.max_occupancy(),
        });
    }
    Ok(blocking_profile(&params)?.blocking_prob(bursts))
}

/// Reserved wavelengths a class leaves unused in a slot, available for
/// lending: L - j(1 - P_b(j)). An overloaded class (j >= L) lends nothing.
pub fn free_wavelengths(
    bursts: u32,
    reserved: u32,
    slots_per_burst: u32,
    conversion: f64,
    arrival_prob: f64,
) -> Result<f64, ObsError> {
    let pb = |n: u32, w: u32| class_blocking(n, w, slots_per_burst, conversion, arrival_prob);
    free_impl(&pb, bursts, reserved)
}

/// Lending ladder: when a class stays below its reservation, its free
/// wavelengths raise the other class's count; both counts are then rounded
/// half away from zero.
pub fn reallocate(
    qos: &QosParams,
    scenario: SlotScenario,
    slots_per_burst: u32,
    conversion: f64,
    arrival_prob: f64,
) -> Result<Reallocation, ObsError> {
    check_slots(qos, slots_per_burst)?;
    let pb = |n: u32, w: u32| class_blocking(n, w, slots_per_burst, conversion, arrival_prob);
    let resultant = reallocate_impl(&pb, qos, scenario.arrivals)?;
    Ok(Reallocation { resultant })
}

/// Expected lost bursts for one class given its resultant wavelength count:
/// bursts beyond the count are lost outright, the rest see the blocking
/// probability, evaluated with w equal to the resultant count.
pub fn lost_bursts(
    bursts: u32,
    resultant: u32,
    slots_per_burst: u32,
    conversion: f64,
    arrival_prob: f64,
) -> Result<f64, ObsError> {
    let pb = |n: u32, w: u32| class_blocking(n, w, slots_per_burst, conversion, arrival_prob);
    lost_impl(&pb, bursts, resultant)
}

/// Per-class average burst loss rates:
/// BLR_i = (1 / (A N S_i)) * sum over k of A_k * sum over splits of
/// M(split) * lost_i(split).
pub fn class_blr(
    qos: &QosParams,
    slots_per_burst: u32,
    conversion: f64,
    arrival_prob: f64,
) -> Result<ClassBlr, ObsError> {
    check_slots(qos, slots_per_burst)?;
    for class in 0..2 {
        if qos.share(class) == 0.0 {
            return Err(ObsError::invalid_parameter(format!(
                "class {class} share is zero; the loss-rate normalization divides by it"
            )));
        }
    }
    if arrival_prob == 0.0 {
        return Ok(ClassBlr {
            blr: [0.0, 0.0],
            scenarios: Vec::new(),
        });
    }

    let total = qos.total_wavelengths();
    // every wavelength count a class can end up with, computed once
    let profiles: Vec<BlockingProfile> = (1..=total)
        .map(|w| {
            SwitchParams::new(w, slots_per_burst, conversion, arrival_prob)
                .and_then(|p| blocking_profile(&p))
        })
        .collect::<Result<_, _>>()?;
    let pb = |bursts: u32, class_w: u32| -> Result<f64, ObsError> {
        Ok(profiles[class_w as usize - 1].blocking_prob(bursts))
    };

    let shares = [qos.share(0), qos.share(1)];
    let mut totals = [0.0f64; 2];
    let mut scenarios = Vec::new();
    let mut per_k: Vec<ScenarioLoss> = Vec::with_capacity(total as usize + 1);
    for k in 1..=total.min(slots_per_burst) {
        let arrival_weight = arrival_pmf(total, arrival_prob, k as i64);
        per_k.clear();
        for class0 in 0..=k {
            let arrivals = [class0, k - class0];
            let split =
                multinomial_pmf(k as u64, &[arrivals[0] as u64, arrivals[1] as u64], &shares)?;
            let resultant = reallocate_impl(&pb, qos, arrivals)?;
            let lost = [
                lost_impl(&pb, arrivals[0], resultant[0])?,
                lost_impl(&pb, arrivals[1], resultant[1])?,
            ];
            per_k.push(ScenarioLoss {
                arrivals,
                weight: arrival_weight * split,
                resultant,
                lost,
            });
        }
        // each class accumulates in its own arrival order, so exchanging the
        // classes exchanges the sums exactly
        for s in &per_k {
            totals[0] += s.weight * s.lost[0];
        }
        for s in per_k.iter().rev() {
            totals[1] += s.weight * s.lost[1];
        }
        scenarios.extend_from_slice(&per_k);
    }

    let mean_arrivals = arrival_prob * total as f64;
    Ok(ClassBlr {
        blr: [
            totals[0] / (mean_arrivals * shares[0]),
            totals[1] / (mean_arrivals * shares[1]),
        ],
        scenarios,
    })
}

fn check_slots(qos: &QosParams, slots_per_burst: u32) -> Result<(), ObsError> {
    if slots_per_burst < qos.total_wavelengths() {
        return Err(ObsError::invalid_parameter(format!(
            "slots_per_burst {slots_per_burst} must be at least the wavelength count {}",
            qos.total_wavelengths()
        )));
    }
    Ok(())
}

type PbFn<'a> = &'a dyn Fn(u32, u32) -> Result<f64, ObsError>;

fn free_impl(pb: PbFn, bursts: u32, reserved: u32) -> Result<f64, ObsError> {
    if bursts >= reserved {
        return Ok(0.0);
    }
    let blocked = pb(bursts, reserved)?;
    Ok(reserved as f64 - bursts as f64 * (1.0 - blocked))
}

fn reallocate_impl(pb: PbFn, qos: &QosParams, arrivals: [u32; 2]) -> Result<[u32; 2], ObsError> {
    let [l0, l1] = [qos.reserved(0), qos.reserved(1)];
    let [j0, j1] = arrivals;
    let (new0, new1) = if j0 < l0 {
        if j1 < l1 {
            (
                l0 as f64 + free_impl(pb, j1, l1)?,
                l1 as f64 + free_impl(pb, j0, l0)?,
            )
        } else {
            (l0 as f64, l1 as f64 + free_impl(pb, j0, l0)?)
        }
    } else {
        (l0 as f64 + free_impl(pb, j1, l1)?, l1 as f64)
    };
    // round half away from zero
    let resultant = [new0.round() as u32, new1.round() as u32];
    debug_assert!(resultant[0] >= l0 && resultant[0] <= qos.total_wavelengths());
    debug_assert!(resultant[1] >= l1 && resultant[1] <= qos.total_wavelengths());
    Ok(resultant)
}

fn lost_impl(pb: PbFn, bursts: u32, resultant: u32) -> Result<f64, ObsError> {
    if bursts < resultant {
        Ok(bursts as f64 * pb(bursts, resultant)?)
    } else if resultant >= 1 {
        let overflow = (bursts - resultant) as f64;
        Ok(overflow + resultant as f64 * pb(resultant, resultant)?)
    } else {
        Ok(bursts as f64)
    }
}
