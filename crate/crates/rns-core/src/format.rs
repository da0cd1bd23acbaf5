//! RNS word formats: ordered moduli, digit width, and derived range.
//!
//! A format mixes *power-based* moduli (a prime base raised to a maximum
//! power, any intermediate power of which can be divided out) with *plain*
//! prime moduli that only ever act as whole-modulus factors. Digits are
//! ordered by ascending modulus value, smallest on the left.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// One digit modulus: `modulus = base^max_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusSpec {
    base: u64,
    max_power: u32,
    modulus: u64,
    power_based: bool,
}

impl ModulusSpec {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn max_power(&self) -> u32 {
        self.max_power
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Whether the digit participates in power scaling and zero detection.
    pub fn is_power_based(&self) -> bool {
        self.power_based
    }

    /// `base^power` for `power <= max_power`.
    pub fn power_value(&self, power: u32) -> u64 {
        debug_assert!(power <= self.max_power);
        self.base.pow(power)
    }
}

/// An ordered RNS machine-word format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnsFormat {
    specs: Vec<ModulusSpec>,
    digit_width: u32,
    base2_index: usize,
}

impl RnsFormat {
    pub fn specs(&self) -> &[ModulusSpec] {
        &self.specs
    }

    pub fn spec(&self, index: usize) -> &ModulusSpec {
        &self.specs[index]
    }

    pub fn digit_count(&self) -> usize {
        self.specs.len()
    }

    pub fn digit_width(&self) -> u32 {
        self.digit_width
    }

    /// Number of power-based digits.
    pub fn power_count(&self) -> usize {
        self.specs.iter().filter(|s| s.power_based).count()
    }

    /// Index of the digit whose base modulus is 2.
    pub fn base2_index(&self) -> usize {
        self.base2_index
    }

    pub fn index_of_base(&self, base: u64) -> Option<usize> {
        self.specs.iter().position(|s| s.base == base)
    }

    /// Resolve a factor value `base^k` to `(digit index, k)`.
    pub fn locate_power_value(&self, value: u64) -> Option<(usize, u32)> {
        for (i, s) in self.specs.iter().enumerate() {
            let mut v = s.base;
            for k in 1..=s.max_power {
                if v == value {
                    return Some((i, k));
                }
                v = v.saturating_mul(s.base);
            }
        }
        None
    }

    /// Full range `R`: product of all digit moduli.
    pub fn range(&self) -> BigUint {
        self.specs
            .iter()
            .fold(BigUint::one(), |acc, s| acc * BigUint::from(s.modulus))
    }

    /// `log2(R)`, accurate to well past four decimals.
    pub fn range_bits(&self) -> f64 {
        self.specs.iter().map(|s| (s.modulus as f64).log2()).sum()
    }
}

/// Build a validated format from power specs `(base, max_power)` and plain
/// primes, sorted ascending by modulus value.
pub fn make_format(
    power_specs: &[(u64, u32)],
    plain_primes: &[u64],
    digit_width: u32,
) -> Result<RnsFormat> {
    let mut specs = Vec::with_capacity(power_specs.len() + plain_primes.len());
    for &(base, max_power) in power_specs {
        if max_power == 0 {
            return Err(Error::InvalidPower { base, power: max_power });
        }
        if !is_prime(base) {
            return Err(Error::NotPrime(base));
        }
        let modulus = base
            .checked_pow(max_power)
            .ok_or(Error::InvalidPower { base, power: max_power })?;
        specs.push(ModulusSpec { base, max_power, modulus, power_based: true });
    }
    for &p in plain_primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        specs.push(ModulusSpec { base: p, max_power: 1, modulus: p, power_based: false });
    }

    let mut bases: Vec<u64> = specs.iter().map(|s| s.base).collect();
    bases.sort_unstable();
    for pair in bases.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateBase(pair[0]));
        }
    }

    let limit = if digit_width >= 64 { u64::MAX } else { 1u64 << digit_width };
    for s in &specs {
        if s.modulus >= limit {
            return Err(Error::WidthOverflow { modulus: s.modulus, width: digit_width });
        }
    }

    specs.sort_by_key(|s| s.modulus);
    let base2_index = specs
        .iter()
        .position(|s| s.base == 2)
        .ok_or(Error::MissingBaseTwo)?;

    Ok(RnsFormat { specs, digit_width, base2_index })
}

/// The bundled 18-digit, 9-bit default format: eight power-based moduli
/// followed by ten plain primes near the top of the 9-bit range.
pub fn mod9_default_format() -> Arc<RnsFormat> {
    let fmt = make_format(
        &[(11, 2), (5, 3), (13, 2), (3, 5), (2, 8), (17, 2), (7, 3), (19, 2)],
        &[457, 461, 463, 467, 479, 487, 491, 499, 503, 509],
        9,
    )
    .expect("default format is valid");
    Arc::new(fmt)
}

/// The power-based head of the default format (the eight digits the worked
/// traces tabulate); range is ample for every bundled reference value.
pub fn mod9_power_format() -> Arc<RnsFormat> {
    let fmt = make_format(
        &[(11, 2), (5, 3), (13, 2), (3, 5), (2, 8), (17, 2), (7, 3), (19, 2)],
        &[],
        9,
    )
    .expect("power format is valid");
    Arc::new(fmt)
}

/// Representational efficiency in percent: `log2(prod M_i) / (n * N) * 100`.
pub fn format_efficiency(fmt: &RnsFormat) -> f64 {
    fmt.range_bits() / (fmt.digit_width() as f64 * fmt.digit_count() as f64) * 100.0
}
