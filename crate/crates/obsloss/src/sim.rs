//! Slotted Monte Carlo simulation of the wavelength pool.
//!
//! The simulator implements the pool semantics directly: an arrival first
//! tries its own output wavelength, then any free wavelength through a
//! converter, and is blocked otherwise. It serves as an independent check on
//! the analytic model's trends; the two are not expected to agree pointwise.

use std::ops::Range;

use rand::distributions::Bernoulli;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::analytic::SwitchParams;
use crate::qos::QosParams;

/// How a converted burst picks among the free wavelengths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WavelengthPick {
    /// Uniformly at random over the free pool.
    #[default]
    UniformRandom,
    /// Lowest free index. Debugging aid: correlates index with load.
    LowestIndex,
}

/// Parameters of one simulation campaign.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub params: SwitchParams,
    /// Measured slots per replication.
    pub horizon: u64,
    /// Slots run before statistics accumulate.
    pub warmup: u64,
    /// Base RNG seed; replication r uses stream r of this seed.
    pub seed: u64,
    pub replications: u32,
    /// Two-class partition; `None` runs the single-class pool.
    pub qos: Option<QosParams>,
    pub pick: WavelengthPick,
}

impl SimConfig {
    /// Defaults: warmup of 5% of the horizon, one replication, no classes.
    pub fn new(params: SwitchParams, horizon: u64, seed: u64) -> Self {
        assert!(horizon >= 1, "horizon must be at least 1 slot");
        Self {
            params,
            horizon,
            warmup: horizon / 20,
            seed,
            replications: 1,
            qos: None,
            pick: WavelengthPick::default(),
        }
    }

    pub fn with_warmup(mut self, warmup: u64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn with_replications(mut self, replications: u32) -> Self {
        assert!(replications >= 1, "need at least one replication");
        self.replications = replications;
        self
    }

    pub fn with_qos(mut self, qos: QosParams) -> Self {
        self.qos = Some(qos);
        self
    }

    pub fn with_pick(mut self, pick: WavelengthPick) -> Self {
        self.pick = pick;
        self
    }
}

/// Counts from one replication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReplicationTally {
    pub offered: u64,
    pub served: u64,
    pub blocked: u64,
    /// Blocked arrivals that saw at least one free wavelength, i.e. losses
    /// caused by converter exhaustion. Zero under full conversion.
    pub blocked_with_free_wavelength: u64,
}

impl ReplicationTally {
    pub fn blr(&self) -> f64 {
        if self.offered == 0 {
            0.0
        } else {
            self.blocked as f64 / self.offered as f64
        }
    }
}

/// Aggregate over replications; counts are summed, the confidence interval
/// comes from the spread of per-replication loss rates.
#[derive(Clone, Debug, PartialEq)]
pub struct SimEstimate {
    pub offered: u64,
    pub blocked: u64,
    pub blr_hat: f64,
    /// 95% half-width over per-replication rates (normal approximation);
    /// zero with fewer than two replications.
    pub ci95: f64,
    pub replications: Vec<ReplicationTally>,
}

impl SimEstimate {
    fn from_tallies(replications: Vec<ReplicationTally>) -> Self {
        let offered: u64 = replications.iter().map(|t| t.offered).sum();
        let blocked: u64 = replications.iter().map(|t| t.blocked).sum();
        let blr_hat = if offered == 0 {
            0.0
        } else {
            blocked as f64 / offered as f64
        };
        let ci95 = half_width_95(&replications.iter().map(|t| t.blr()).collect::<Vec<_>>());
        Self {
            offered,
            blocked,
            blr_hat,
            ci95,
            replications,
        }
    }

    pub fn rep_blrs(&self) -> Vec<f64> {
        self.replications.iter().map(|t| t.blr()).collect()
    }
}

fn half_width_95(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    1.96 * (var / n as f64).sqrt()
}

/// Wavelength pool with converter bookkeeping. A hold set at slot t keeps the
/// wavelength busy for slots t..t+duration-1 and releases it, together with
/// its converter if any, exactly `duration` slots after seizure.
struct NodeState {
    hold: Vec<u32>,
    used_converter: Vec<bool>,
    converters_free: u32,
    duration: u32,
}

impl NodeState {
    fn new(wavelengths: u32, converters: u32, duration: u32) -> Self {
        Self {
            hold: vec![0; wavelengths as usize],
            used_converter: vec![false; wavelengths as usize],
            converters_free: converters,
            duration,
        }
    }

    fn tick(&mut self) {
        for i in 0..self.hold.len() {
            if self.hold[i] > 0 {
                self.hold[i] -= 1;
                if self.hold[i] == 0 && self.used_converter[i] {
                    self.used_converter[i] = false;
                    self.converters_free += 1;
                }
            }
        }
    }

    fn is_free(&self, idx: usize) -> bool {
        self.hold[idx] == 0
    }

    fn busy_count(&self) -> u32 {
        self.hold.iter().filter(|&&h| h > 0).count() as u32
    }

    fn any_free(&self) -> bool {
        self.hold.contains(&0)
    }

    fn seize(&mut self, idx: usize, with_converter: bool) {
        debug_assert_eq!(self.hold[idx], 0, "seizing a busy wavelength");
        self.hold[idx] = self.duration;
        if with_converter {
            debug_assert!(self.converters_free > 0);
            self.converters_free -= 1;
            self.used_converter[idx] = true;
        }
    }

    /// A free wavelength inside `range`, or `None` when all are busy.
    fn pick_free(
        &self,
        range: Range<usize>,
        rng: &mut ChaCha12Rng,
        pick: WavelengthPick,
    ) -> Option<usize> {
        let free_count = range.clone().filter(|&i| self.hold[i] == 0).count();
        if free_count == 0 {
            return None;
        }
        let target = match pick {
            WavelengthPick::LowestIndex => 0,
            WavelengthPick::UniformRandom => rng.gen_range(0..free_count),
        };
        range.filter(|&i| self.hold[i] == 0).nth(target)
    }

    /// Assignment for an arrival whose native output wavelength is `native`:
    /// the native wavelength if free, otherwise a converted pick, searching
    /// `first` before `second`. Conversion is needed exactly when the
    /// assigned wavelength differs from the native one.
    fn assign(
        &self,
        native: usize,
        first: Range<usize>,
        second: Range<usize>,
        rng: &mut ChaCha12Rng,
        pick: WavelengthPick,
    ) -> Option<(usize, bool)> {
        if first.contains(&native) && self.is_free(native) {
            return Some((native, false));
        }
        if self.converters_free > 0 {
            if let Some(idx) = self.pick_free(first, rng, pick) {
                return Some((idx, true));
            }
        }
        if second.contains(&native) && self.is_free(native) {
            return Some((native, false));
        }
        if self.converters_free > 0 {
            if let Some(idx) = self.pick_free(second, rng, pick) {
                return Some((idx, true));
            }
        }
        None
    }
}

fn replication_rng(seed: u64, replication: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(replication as u64);
    rng
}

/// Monte Carlo estimate of the single-class loss rate. Identical configs
/// produce identical estimates.
pub fn simulate(config: &SimConfig) -> SimEstimate {
    let tallies = (0..config.replications)
        .map(|rep| {
            run_single_class(
                &config.params,
                config.horizon,
                config.warmup,
                replication_rng(config.seed, rep),
                config.pick,
            )
        })
        .collect();
    SimEstimate::from_tallies(tallies)
}

fn run_single_class(
    params: &SwitchParams,
    horizon: u64,
    warmup: u64,
    mut rng: ChaCha12Rng,
    pick: WavelengthPick,
) -> ReplicationTally {
    let w = params.wavelengths() as usize;
    let mut node = NodeState::new(
        params.wavelengths(),
        params.converters(),
        params.slots_per_burst(),
    );
    let arrival = Bernoulli::new(params.arrival_prob()).expect("probability validated");
    let mut tally = ReplicationTally::default();
    let mut arrivals: Vec<u32> = Vec::with_capacity(w);

    for slot in 0..warmup + horizon {
        node.tick();
        arrivals.clear();
        for input in 0..w {
            if rng.sample(arrival) {
                arrivals.push(input as u32);
            }
        }
        // contention order within a slot is random, not input order
        arrivals.shuffle(&mut rng);
        let measured = slot >= warmup;
        for &input in &arrivals {
            let assigned = node.assign(input as usize, 0..w, 0..0, &mut rng, pick);
            if measured {
                tally.offered += 1;
            }
            match assigned {
                Some((idx, converted)) => {
                    node.seize(idx, converted);
                    if measured {
                        tally.served += 1;
                    }
                }
                None => {
                    if measured {
                        tally.blocked += 1;
                        if node.any_free() {
                            tally.blocked_with_free_wavelength += 1;
                        }
                    }
                }
            }
        }
        debug_assert!(node.busy_count() <= w as u32);
    }
    tally
}

/// Two-class variant: wavelengths 0..L0 belong to class 0, the rest to
/// class 1. An arrival is labeled class i with probability S_i, looks for
/// room in its own partition first, and overflows into the other partition
/// (still needing a converter unless it lands on its native wavelength).
pub fn simulate_qos(config: &SimConfig) -> [SimEstimate; 2] {
    let qos = config
        .qos
        .as_ref()
        .expect("simulate_qos requires QoS parameters in the config");
    assert_eq!(
        config.params.wavelengths(),
        qos.total_wavelengths(),
        "the fibre width and the partition total must agree"
    );
    let mut per_class: [Vec<ReplicationTally>; 2] = [Vec::new(), Vec::new()];
    for rep in 0..config.replications {
        let tallies = run_two_class(
            &config.params,
            qos,
            config.horizon,
            config.warmup,
            replication_rng(config.seed, rep),
            config.pick,
        );
        per_class[0].push(tallies[0]);
        per_class[1].push(tallies[1]);
    }
    let [c0, c1] = per_class;
    [SimEstimate::from_tallies(c0), SimEstimate::from_tallies(c1)]
}

fn run_two_class(
    params: &SwitchParams,
    qos: &QosParams,
    horizon: u64,
    warmup: u64,
    mut rng: ChaCha12Rng,
    pick: WavelengthPick,
) -> [ReplicationTally; 2] {
    let n = params.wavelengths() as usize;
    let split = qos.reserved(0) as usize;
    let mut node = NodeState::new(
        params.wavelengths(),
        params.converters(),
        params.slots_per_burst(),
    );
    let arrival = Bernoulli::new(params.arrival_prob()).expect("probability validated");
    let class0 = Bernoulli::new(qos.share(0)).expect("share validated");
    let mut tallies = [ReplicationTally::default(); 2];
    let mut arrivals: Vec<(u32, usize)> = Vec::with_capacity(n);

    for slot in 0..warmup + horizon {
        node.tick();
        arrivals.clear();
        for input in 0..n {
            if rng.sample(arrival) {
                let class = if rng.sample(class0) { 0 } else { 1 };
                arrivals.push((input as u32, class));
            }
        }
        arrivals.shuffle(&mut rng);
        let measured = slot >= warmup;
        for &(input, class) in &arrivals {
            let (own, other) = if class == 0 {
                (0..split, split..n)
            } else {
                (split..n, 0..split)
            };
            let assigned = node.assign(input as usize, own, other, &mut rng, pick);
            if measured {
                tallies[class].offered += 1;
            }
            match assigned {
                Some((idx, converted)) => {
                    node.seize(idx, converted);
                    if measured {
                        tallies[class].served += 1;
                    }
                }
                None => {
                    if measured {
                        tallies[class].blocked += 1;
                        if node.any_free() {
                            tallies[class].blocked_with_free_wavelength += 1;
                        }
                    }
                }
            }
        }
        debug_assert!(node.busy_count() <= n as u32);
    }
    tallies
}
