//! Log-domain combinatorial primitives shared by the loss models.
//!
//! Reservation periods of ~100 slots push binomial coefficients and state
//! weights far beyond what naive floating-point products can hold, so every
//! quantity that feeds the state distribution stays a logarithm until the
//! final exponentiation. Exact integer arithmetic is used wherever the
//! result fits in 53 bits.

use std::sync::LazyLock;

use crate::ObsError;

/// Natural log of a nonnegative quantity, with exact zero kept as a
/// distinguished sentinel so that vanishing factors (full conversion,
/// out-of-range coefficients) stay exact under products and sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogWeight {
    /// The underlying quantity is exactly zero.
    Zero,
    /// ln of a strictly positive quantity.
    Ln(f64),
}

impl LogWeight {
    /// Log of a nonnegative value; `0.0` maps to [`LogWeight::Zero`].
    pub fn from_value(value: f64) -> Self {
        assert!(
            value >= 0.0 && value.is_finite(),
            "LogWeight requires a finite nonnegative value, got {value}"
        );
        if value == 0.0 {
            LogWeight::Zero
        } else {
            LogWeight::Ln(value.ln())
        }
    }

    /// Wrap an already-computed logarithm.
    pub fn from_ln(ln: f64) -> Self {
        assert!(ln.is_finite(), "log value must be finite, got {ln}");
        LogWeight::Ln(ln)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, LogWeight::Zero)
    }

    /// The logarithm, or `None` for the zero sentinel.
    pub fn ln(self) -> Option<f64> {
        match self {
            LogWeight::Zero => None,
            LogWeight::Ln(v) => Some(v),
        }
    }

    /// Back to linear scale; the sentinel maps to `0.0`.
    pub fn value(self) -> f64 {
        match self {
            LogWeight::Zero => 0.0,
            LogWeight::Ln(v) => v.exp(),
        }
    }
}

/// Product of the underlying quantities; zero absorbs.
impl std::ops::Mul for LogWeight {
    type Output = LogWeight;

    // a product of quantities is a sum of their logarithms
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogWeight) -> LogWeight {
        match (self, rhs) {
            (LogWeight::Ln(a), LogWeight::Ln(b)) => LogWeight::Ln(a + b),
            _ => LogWeight::Zero,
        }
    }
}

const LN_FACTORIAL_TABLE_LEN: usize = 1025;

// Compensated summation keeps every table entry within a couple of ulps of
// the true ln(n!), which a plain running sum does not guarantee at n ~ 1000.
static LN_FACTORIAL_TABLE: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
    table.push(0.0);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..LN_FACTORIAL_TABLE_LEN {
        let term = (n as f64).ln() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
        table.push(sum);
    }
    table
});

/// ln(n!). Table-backed up to n = 1024; the same compensated recurrence
/// continues on the fly above that.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACTORIAL_TABLE_LEN {
        return LN_FACTORIAL_TABLE[n as usize];
    }
    let mut sum = LN_FACTORIAL_TABLE[LN_FACTORIAL_TABLE_LEN - 1];
    let mut comp = 0.0f64;
    for i in LN_FACTORIAL_TABLE_LEN as u64..=n {
        let term = (i as f64).ln() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    sum
}

/// Largest integer magnitude that f64 represents exactly.
const EXACT_F64_LIMIT: u128 = 1 << 53;

/// C(n, k) as a float: zero outside 0 <= k <= n, exact whenever the result
/// fits in 53 bits, log-domain factorial differences otherwise.
pub fn binomial_coeff(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return 0.0;
    }
    let k = (k as u64).min(n - k as u64);
    // Multiplicative recurrence: after step i the accumulator equals
    // C(n-k+i, i), so it only grows and each division is exact.
    let mut acc: u128 = 1;
    let mut exact = true;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > EXACT_F64_LIMIT {
            exact = false;
            break;
        }
    }
    if exact {
        acc as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
    }
}

/// C(n, k) as a [`LogWeight`]; zero outside the domain.
pub fn binomial_weight(n: u64, k: u64) -> LogWeight {
    if k > n {
        return LogWeight::Zero;
    }
    LogWeight::from_ln(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
}

/// Multinomial probability of observing the split `counts` among categories
/// with the given `shares`, over `total` trials.
///
/// The log-domain accumulation groups the factorial part and the share part
/// separately; for two categories this makes the result exactly invariant
/// under swapping the categories.
pub fn multinomial_pmf(total: u64, counts: &[u64], shares: &[f64]) -> Result<f64, ObsError> {
    if counts.len() != shares.len() || counts.len() < 2 {
        return Err(ObsError::invalid_parameter(format!(
            "multinomial needs matching counts/shares of length >= 2, got {} and {}",
            counts.len(),
            shares.len()
        )));
    }
    if counts.iter().sum::<u64>() != total {
        return Err(ObsError::invalid_parameter(format!(
            "multinomial counts {counts:?} do not sum to {total}"
        )));
    }
    for &s in shares {
        if !(0.0..=1.0).contains(&s) {
            return Err(ObsError::invalid_parameter(format!(
                "share {s} outside [0, 1]"
            )));
        }
    }
    let share_sum: f64 = shares.iter().sum();
    if (share_sum - 1.0).abs() > 1e-12 {
        return Err(ObsError::invalid_parameter(format!(
            "shares sum to {share_sum}, expected 1"
        )));
    }

    let ln_coeff = ln_factorial(total) - counts.iter().map(|&c| ln_factorial(c)).sum::<f64>();
    let mut ln_shares = 0.0;
    for (&count, &share) in counts.iter().zip(shares) {
        if count == 0 {
            continue; // 0^0 = 1 by convention
        }
        if share == 0.0 {
            return Ok(0.0);
        }
        ln_shares += count as f64 * share.ln();
    }
    Ok((ln_coeff + ln_shares).exp().min(1.0))
}

/// log(sum(exp(v_i))) with the usual max shift. An empty input, or one made
/// entirely of zero sentinels, yields the zero sentinel.
pub fn log_sum_exp(values: &[LogWeight]) -> LogWeight {
    let mut max = f64::NEG_INFINITY;
    for v in values {
        if let LogWeight::Ln(x) = v {
            if *x > max {
                max = *x;
            }
        }
    }
    if max == f64::NEG_INFINITY {
        return LogWeight::Zero;
    }
    let sum: f64 = values
        .iter()
        .filter_map(|v| v.ln())
        .map(|x| (x - max).exp())
        .sum();
    LogWeight::Ln(max + sum.ln())
}
