//! Exact-arithmetic oracle: a direct rational transcription of the loss
//! model, independent of the library's log-domain evaluation path. Inputs
//! are taken as the exact rationals of the f64 parameters, so any deviation
//! measured against the library is floating-point error in the library.

#![allow(dead_code)] // each integration test target uses the slice it needs

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The exact rational represented by a finite f64.
pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn rat_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact C(n, k); zero outside the domain.
pub fn big_binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

pub fn big_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// ln of a big unsigned integer: top 53 bits plus the shifted-out exponent.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small integer").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit integer");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Rational to f64 with ~1 ulp error regardless of the magnitude of the
/// numerator and denominator (scaled integer quotient).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let numer = r.numer();
    let denom = r.denom();
    let shift: i64 = 128 + denom.bits() as i64 - numer.bits() as i64;
    let scaled: BigInt = if shift >= 0 {
        (numer << shift as usize) / denom
    } else {
        numer / (denom << (-shift) as usize)
    };
    let q = scaled.to_f64().expect("quotient fits the f64 range");
    q * (-shift as f64).exp2()
}

pub fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Relative error of `actual` against the exact `expected`.
pub fn rel_err_against(actual: f64, expected: &BigRational) -> f64 {
    let expected = rat_to_f64(expected);
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}

/// Exact stationary distribution and blocking profile.
pub struct RationalModel {
    pub empty: BigRational,
    /// e_k for k = 1..=min(ell, w).
    pub states: Vec<BigRational>,
    /// P_b(n) for n = 1..=min(ell, w).
    pub blocking: Vec<BigRational>,
}

pub fn rational_model(w: u64, ell: u64, rho: &BigRational, a: &BigRational) -> RationalModel {
    assert!(w >= 1 && ell >= 2 && !a.is_zero());
    let m = w.min(ell);
    let one = BigRational::one();
    let fixed = &one - rho;
    let idle = rat_int(w) * (&one - a) / a;

    let mut prods = Vec::with_capacity(m as usize);
    let mut p = BigRational::one();
    for i in 0..m {
        let i_rat = rat_int(i);
        let numer = rat_int(w) - &i_rat * &fixed;
        let denom = &idle + &i_rat * &fixed;
        p = p * numer / denom;
        prods.push(p.clone());
    }

    let mut norm = BigRational::one();
    for n in 1..=m {
        norm += BigRational::from_integer(big_binomial(ell, n as i64)) * &prods[n as usize - 1];
    }
    let empty = &one / &norm;
    let states: Vec<BigRational> = prods.iter().map(|p| p / &norm).collect();

    let mut blocking = Vec::with_capacity(m as usize);
    for n in 1..=m {
        let e_n = &states[n as usize - 1];
        let mut v = a * rat_int(ell - 1) / (rat_int(w) * rat_int(ell))
            * &fixed
            * rat_int(n)
            * BigRational::from_integer(big_binomial(ell, n as i64))
            * e_n;
        if n == w {
            v += a * rho * BigRational::from_integer(big_binomial(ell - 1, w as i64)) * e_n;
        }
        blocking.push(v);
    }

    RationalModel {
        empty,
        states,
        blocking,
    }
}

/// Exact binomial arrival probability for k arrivals among w inputs.
pub fn rational_arrival(w: u64, a: &BigRational, k: u64) -> BigRational {
    if k > w {
        return BigRational::zero();
    }
    BigRational::from_integer(big_binomial(w, k as i64))
        * rat_pow(a, k)
        * rat_pow(&(BigRational::one() - a), w - k)
}

/// Exact average burst loss rate.
pub fn rational_blr(w: u64, ell: u64, rho: &BigRational, a: &BigRational) -> BigRational {
    if a.is_zero() {
        return BigRational::zero();
    }
    let model = rational_model(w, ell, rho, a);
    let m = w.min(ell);
    let mut total = BigRational::zero();
    for k in 1..=m {
        total += rational_arrival(w, a, k) * rat_int(k) * &model.blocking[k as usize - 1];
    }
    total / (a * rat_int(w))
}

/// Exact exhaustive-scenario evaluation of the two-class loss rates: the
/// lending ladder, rounding by floor(x + 1/2), and the loss accounting, all
/// in rational arithmetic.
pub fn rational_class_blr(
    total_wavelengths: u64,
    reserved0: u64,
    share0: &BigRational,
    share1: &BigRational,
    ell: u64,
    rho: &BigRational,
    a: &BigRational,
) -> [BigRational; 2] {
    assert!(ell >= total_wavelengths);
    let reserved = [reserved0, total_wavelengths - reserved0];
    let profiles: Vec<RationalModel> = (1..=total_wavelengths)
        .map(|w| rational_model(w, ell, rho, a))
        .collect();

    let pb = |bursts: u64, class_w: u64| -> BigRational {
        if bursts == 0 {
            BigRational::zero()
        } else {
            profiles[class_w as usize - 1].blocking[bursts as usize - 1].clone()
        }
    };
    let free = |bursts: u64, class_l: u64| -> BigRational {
        if bursts >= class_l {
            BigRational::zero()
        } else {
            rat_int(class_l) - rat_int(bursts) * (BigRational::one() - pb(bursts, class_l))
        }
    };
    let round_half_up = |x: BigRational| -> u64 {
        assert!(!x.is_negative());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (x + half)
            .floor()
            .to_integer()
            .to_u64()
            .expect("small count")
    };
    let realloc = |j0: u64, j1: u64| -> [u64; 2] {
        let [l0, l1] = reserved;
        let (n0, n1) = if j0 < l0 {
            if j1 < l1 {
                (rat_int(l0) + free(j1, l1), rat_int(l1) + free(j0, l0))
            } else {
                (rat_int(l0), rat_int(l1) + free(j0, l0))
            }
        } else {
            (rat_int(l0) + free(j1, l1), rat_int(l1))
        };
        [round_half_up(n0), round_half_up(n1)]
    };
    let lost = |bursts: u64, resultant: u64| -> BigRational {
        if bursts < resultant {
            rat_int(bursts) * pb(bursts, resultant)
        } else if resultant >= 1 {
            rat_int(bursts - resultant) + rat_int(resultant) * pb(resultant, resultant)
        } else {
            rat_int(bursts)
        }
    };

    let mut totals = [BigRational::zero(), BigRational::zero()];
    for k in 1..=total_wavelengths.min(ell) {
        let arrival_weight = rational_arrival(total_wavelengths, a, k);
        for j0 in 0..=k {
            let j1 = k - j0;
            let split = BigRational::from_integer(big_binomial(k, j0 as i64))
                * rat_pow(share0, j0)
                * rat_pow(share1, j1);
            let weight = &arrival_weight * split;
            let resultant = realloc(j0, j1);
            totals[0] += &weight * lost(j0, resultant[0]);
            totals[1] += &weight * lost(j1, resultant[1]);
        }
    }

    let mean = a * rat_int(total_wavelengths);
    [
        totals[0].clone() / (&mean * share0),
        totals[1].clone() / (&mean * share1),
    ]
}

/// Exact multinomial probability for two categories.
pub fn rational_multinomial_2(
    total: u64,
    counts: (u64, u64),
    shares: (&BigRational, &BigRational),
) -> BigRational {
    assert_eq!(counts.0 + counts.1, total);
    BigRational::from_integer(big_binomial(total, counts.0 as i64))
        * rat_pow(shares.0, counts.0)
        * rat_pow(shares.1, counts.1)
}
