//! Single-class loss model for a slotted burst switch with partial
//! wavelength conversion.
//!
//! A node holds `w` wavelengths, `u = round(rho * w)` of them backed by
//! converters, and every accepted burst occupies its wavelength for `ell`
//! slots. The stationary occupancy distribution and the per-occupancy
//! blocking probabilities combine with binomial per-slot arrivals into the
//! average burst loss rate. All heavy products are formed in log space.

use crate::math::{binomial_coeff, binomial_weight, log_sum_exp, LogWeight};
use crate::ObsError;

/// Burst and slot durations, in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingSpec {
    /// Control burst duration.
    pub control_burst: f64,
    /// Gap between the control burst and the data burst.
    pub offset: f64,
    /// Data burst duration.
    pub data_burst: f64,
    /// Slot duration.
    pub slot: f64,
}

/// How far (offset + data_burst) / slot may sit from an integer.
const SLOT_QUOTIENT_TOL: f64 = 1e-9;

/// Number of slots spanned by one reservation: (offset + data_burst) / slot.
pub fn slots_per_burst(timing: &TimingSpec) -> Result<u32, ObsError> {
    for (name, value) in [
        ("control_burst", timing.control_burst),
        ("offset", timing.offset),
        ("data_burst", timing.data_burst),
        ("slot", timing.slot),
    ] {
        if !value.is_finite() || value <= 0.0 {
            return Err(ObsError::invalid_timing(format!(
                "{name} must be a positive duration, got {value}"
            )));
        }
    }
    let quotient = (timing.offset + timing.data_burst) / timing.slot;
    let rounded = quotient.round();
    if (quotient - rounded).abs() > SLOT_QUOTIENT_TOL {
        return Err(ObsError::invalid_timing(format!(
            "(offset + data_burst) / slot = {quotient} is not an integer"
        )));
    }
    if rounded < 1.0 || rounded > u32::MAX as f64 {
        return Err(ObsError::invalid_timing(format!(
            "slot count {rounded} outside the supported range"
        )));
    }
    Ok(rounded as u32)
}

/// Validated parameter set for the single-class model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchParams {
    wavelengths: u32,
    slots_per_burst: u32,
    conversion: f64,
    arrival: f64,
    converters: u32,
}

impl SwitchParams {
    pub fn new(
        wavelengths: u32,
        slots_per_burst: u32,
        conversion_capability: f64,
        arrival_prob: f64,
    ) -> Result<Self, ObsError> {
        if wavelengths < 1 {
            return Err(ObsError::invalid_parameter(
                "wavelengths must be at least 1",
            ));
        }
        if slots_per_burst < 2 {
            return Err(ObsError::invalid_parameter(
                "slots_per_burst must be at least 2",
            ));
        }
        if !conversion_capability.is_finite() || !(0.0..=1.0).contains(&conversion_capability) {
            return Err(ObsError::invalid_parameter(format!(
                "conversion capability {conversion_capability} outside [0, 1]"
            )));
        }
        if !arrival_prob.is_finite() || !(0.0..1.0).contains(&arrival_prob) {
            return Err(ObsError::invalid_parameter(format!(
                "arrival probability {arrival_prob} outside [0, 1)"
            )));
        }
        // round half away from zero, matching the simulator's converter pool
        let converters = (conversion_capability * wavelengths as f64).round() as u32;
        Ok(Self {
            wavelengths,
            slots_per_burst,
            conversion: conversion_capability,
            arrival: arrival_prob,
            converters,
        })
    }

    pub fn wavelengths(&self) -> u32 {
        self.wavelengths
    }

    pub fn slots_per_burst(&self) -> u32 {
        self.slots_per_burst
    }

    pub fn conversion_capability(&self) -> f64 {
        self.conversion
    }

    pub fn arrival_prob(&self) -> f64 {
        self.arrival
    }

    /// Converter count u = round(rho * w).
    pub fn converters(&self) -> u32 {
        self.converters
    }

    /// Largest number of simultaneously held bursts, min(ell, w).
    pub fn max_occupancy(&self) -> u32 {
        self.wavelengths.min(self.slots_per_burst)
    }

    /// True when w >= ell, outside the regime the occupancy distribution was
    /// derived for; results there are extrapolations.
    pub fn outside_derivation_regime(&self) -> bool {
        self.wavelengths >= self.slots_per_burst
    }
}

/// Stationary occupancy distribution of the node.
#[derive(Clone, Debug, PartialEq)]
pub struct StateDistribution {
    params: SwitchParams,
    empty: f64,
    states: Vec<f64>,
}

impl StateDistribution {
    pub fn params(&self) -> &SwitchParams {
        &self.params
    }

    /// Probability of the empty node.
    pub fn empty_prob(&self) -> f64 {
        self.empty
    }

    /// Probability of an individual state holding `occupancy` bursts.
    pub fn state_prob(&self, occupancy: u32) -> f64 {
        assert!(
            occupancy >= 1 && occupancy as usize <= self.states.len(),
            "occupancy {occupancy} outside 1..={}",
            self.states.len()
        );
        self.states[occupancy as usize - 1]
    }

    pub fn max_occupancy(&self) -> u32 {
        self.states.len() as u32
    }

    /// empty + sum of C(ell, n) * e_n over all occupancies; 1 up to rounding.
    pub fn total_probability(&self) -> f64 {
        let ell = self.params.slots_per_burst() as u64;
        self.empty
            + self
                .states
                .iter()
                .enumerate()
                .map(|(i, e)| binomial_coeff(ell, i as i64 + 1) * e)
                .sum::<f64>()
    }
}

/// Per-occupancy blocking probabilities P_b(n), n = 1..=min(ell, w).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockingProfile {
    params: SwitchParams,
    blocking: Vec<f64>,
}

impl BlockingProfile {
    pub fn params(&self) -> &SwitchParams {
        &self.params
    }

    /// P_b(n). Zero offered bursts are never blocked, so `blocking_prob(0) == 0`.
    pub fn blocking_prob(&self, occupancy: u32) -> f64 {
        if occupancy == 0 {
            return 0.0;
        }
        assert!(
            occupancy as usize <= self.blocking.len(),
            "occupancy {occupancy} outside 0..={}",
            self.blocking.len()
        );
        self.blocking[occupancy as usize - 1]
    }

    pub fn max_occupancy(&self) -> u32 {
        self.blocking.len() as u32
    }
}

/// ln of the unnormalized weight of an individual k-burst state: the product
/// over i < k of (w - i(1-rho)) / (w(1-A)/A + i(1-rho)).
pub fn state_weight(params: &SwitchParams, occupancy: u32) -> Result<LogWeight, ObsError> {
    if params.arrival_prob() == 0.0 {
        return Err(ObsError::DegenerateArrival);
    }
    if occupancy < 1 || occupancy > params.max_occupancy() {
        return Err(ObsError::OccupancyOutOfRange {
            occupancy,
            max: params.max_occupancy(),
        });
    }
    let weights = state_weight_lns(params, occupancy);
    Ok(LogWeight::from_ln(weights[occupancy as usize - 1]))
}

/// Running log-products for k = 1..=max. Every numerator factor
/// w - i(1-rho) stays positive because i <= w - 1.
fn state_weight_lns(params: &SwitchParams, max: u32) -> Vec<f64> {
    let w = params.wavelengths() as f64;
    let fixed = 1.0 - params.conversion_capability(); // share of non-convertible wavelengths
    let a = params.arrival_prob();
    let idle_ratio = w * (1.0 - a) / a;
    let mut acc = 0.0;
    let mut weights = Vec::with_capacity(max as usize);
    for i in 0..max {
        let i = i as f64;
        acc += (w - i * fixed).ln() - (idle_ratio + i * fixed).ln();
        weights.push(acc);
    }
    weights
}

/// Log state weights plus ln of the normalizer
/// D = 1 + sum over n of C(ell, n) * exp(weight_n).
fn log_state_terms(params: &SwitchParams) -> Result<(Vec<f64>, f64), ObsError> {
    if params.arrival_prob() == 0.0 {
        return Err(ObsError::DegenerateArrival);
    }
    let ell = params.slots_per_burst() as u64;
    let weights = state_weight_lns(params, params.max_occupancy());
    let mut terms = Vec::with_capacity(weights.len() + 1);
    terms.push(LogWeight::from_ln(0.0)); // the empty state contributes 1
    for (idx, weight) in weights.iter().enumerate() {
        terms.push(binomial_weight(ell, idx as u64 + 1) * LogWeight::from_ln(*weight));
    }
    let ln_norm = log_sum_exp(&terms)
        .ln()
        .expect("normalizer includes the constant 1");
    Ok((weights, ln_norm))
}

/// Stationary distribution: e_k = exp(weight_k) / D, e_0 = 1 / D.
pub fn stationary_distribution(params: &SwitchParams) -> Result<StateDistribution, ObsError> {
    let (weights, ln_norm) = log_state_terms(params)?;
    let states = weights.iter().map(|w| (w - ln_norm).exp()).collect();
    Ok(StateDistribution {
        params: *params,
        empty: (-ln_norm).exp(),
        states,
    })
}

/// Blocking probabilities for every occupancy.
///
/// For n below full occupancy only direct contention on non-convertible
/// wavelengths blocks, so P_b carries the factor (1 - rho) and vanishes
/// exactly under full conversion. At n = w an additional term covers bursts
/// that arrive with every wavelength committed.
pub fn blocking_profile(params: &SwitchParams) -> Result<BlockingProfile, ObsError> {
    let (weights, ln_norm) = log_state_terms(params)?;
    let w = params.wavelengths();
    let ell = params.slots_per_burst() as u64;
    let a = params.arrival_prob();
    let rho = params.conversion_capability();

    let direct_prefactor = LogWeight::from_value(a * (ell as f64 - 1.0) / (w as f64 * ell as f64))
        * LogWeight::from_value(1.0 - rho);

    let mut blocking = Vec::with_capacity(weights.len());
    for (idx, weight) in weights.iter().enumerate() {
        let n = idx as u64 + 1;
        let state = LogWeight::from_ln(weight - ln_norm); // e_n
        let mut term =
            direct_prefactor * LogWeight::from_value(n as f64) * binomial_weight(ell, n) * state;
        if n == w as u64 {
            // reachable only when w <= ell; C(ell-1, w) vanishes when ell-1 < w
            let full = LogWeight::from_value(a * rho) * binomial_weight(ell - 1, w as u64) * state;
            term = log_sum_exp(&[term, full]);
        }
        blocking.push(term.value());
    }
    Ok(BlockingProfile {
        params: *params,
        blocking,
    })
}

/// Binomial probability of `arrivals` bursts among `wavelengths` independent
/// inputs, each carrying an arrival with probability `arrival_prob`.
pub fn arrival_pmf(wavelengths: u32, arrival_prob: f64, arrivals: i64) -> f64 {
    assert!(
        arrival_prob.is_finite() && (0.0..=1.0).contains(&arrival_prob),
        "arrival probability {arrival_prob} outside [0, 1]"
    );
    if arrivals < 0 || arrivals > wavelengths as i64 {
        return 0.0;
    }
    let k = arrivals as u32;
    if arrival_prob == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if arrival_prob == 1.0 {
        return if k == wavelengths { 1.0 } else { 0.0 };
    }
    binomial_coeff(wavelengths as u64, k as i64)
        * arrival_prob.powi(k as i32)
        * (1.0 - arrival_prob).powi((wavelengths - k) as i32)
}

/// Arrival-count distribution on a fibre of `wavelengths` inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalDistribution {
    probs: Vec<f64>,
}

impl ArrivalDistribution {
    pub fn new(wavelengths: u32, arrival_prob: f64) -> Self {
        let probs = (0..=wavelengths)
            .map(|k| arrival_pmf(wavelengths, arrival_prob, k as i64))
            .collect();
        Self { probs }
    }

    pub fn wavelengths(&self) -> u32 {
        self.probs.len() as u32 - 1
    }

    pub fn prob(&self, arrivals: u32) -> f64 {
        self.probs.get(arrivals as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mean arrivals per slot; equals arrival_prob * wavelengths.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }
}

/// Average burst loss rate: sum over k of A_k * k * P_b(k), normalized by the
/// mean arrival count A * w. Zero arrivals lose nothing.
pub fn burst_loss_rate(params: &SwitchParams) -> f64 {
    let a = params.arrival_prob();
    if a == 0.0 {
        return 0.0;
    }
    let profile = blocking_profile(params).expect("arrival probability is positive");
    let w = params.wavelengths();
    let mut sum = 0.0;
    for k in 1..=params.max_occupancy() {
        sum += arrival_pmf(w, a, k as i64) * k as f64 * profile.blocking_prob(k);
    }
    sum / (a * w as f64)
}

/// The loss-rate sum with every P_b(k) replaced by the constant `blocking`.
/// Equal to that constant whenever w <= ell, because the truncated binomial
/// mean then covers the whole support.
pub fn blr_fixed_blocking(
    wavelengths: u32,
    slots_per_burst: u32,
    arrival_prob: f64,
    blocking: f64,
) -> f64 {
    assert!(wavelengths >= 1, "wavelengths must be at least 1");
    assert!(
        arrival_prob > 0.0 && arrival_prob < 1.0,
        "arrival probability {arrival_prob} outside (0, 1)"
    );
    assert!(
        (0.0..=1.0).contains(&blocking),
        "blocking probability {blocking} outside [0, 1]"
    );
    let max = wavelengths.min(slots_per_burst);
    let mut weighted_arrivals = 0.0;
    for k in 1..=max {
        weighted_arrivals += arrival_pmf(wavelengths, arrival_prob, k as i64) * k as f64;
    }
    blocking * weighted_arrivals / (arrival_prob * wavelengths as f64)
}
