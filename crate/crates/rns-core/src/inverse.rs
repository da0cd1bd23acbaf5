//! Multiplicative inverses and the per-format lookup table used by scaling,
//! mixed-radix conversion, and divisor decomposition.

use crate::error::{Error, Result};
use crate::format::RnsFormat;

/// Multiplicative inverse of `a` modulo `m` via the extended Euclidean
/// algorithm: the unique `inv` in `[1, m)` with `(a * inv) % m == 1`.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    debug_assert!(m >= 2);
    let a = a % m;
    if a == 0 {
        return Err(Error::NoInverse(a, m));
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NoInverse(a, m));
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// Exact division of a digit value by `base^k`.
pub fn divide_digit(value: u64, base: u64, k: u32) -> Result<u64> {
    let divisor = base.pow(k);
    if !value.is_multiple_of(divisor) {
        return Err(Error::NotDivisible { digit: 0, value, base, power: k });
    }
    Ok(value / divisor)
}

/// Dense table of every inverse `|1/(m_j^k)|_{m_i^p}` a format can need:
/// all divisor powers `k <= P_j` of every base against all target powers
/// `p <= P_i` of every other base. Same-base cells do not exist.
#[derive(Debug, Clone)]
pub struct InverseTable {
    digit_count: usize,
    max_power: u32,
    // Flat [divisor][k-1][target][p-1]; 0 marks an undefined cell.
    entries: Vec<u64>,
    divisor_values: Vec<(usize, u32, u64)>,
}

impl InverseTable {
    fn index(&self, divisor: usize, k: u32, target: usize, p: u32) -> usize {
        let mp = self.max_power as usize;
        (((divisor * mp) + (k as usize - 1)) * self.digit_count + target) * mp + (p as usize - 1)
    }

    /// Inverse of `base_divisor^k` with respect to `base_target^p`.
    /// Missing cells are programming errors and panic.
    pub fn inverse(&self, divisor: usize, k: u32, target: usize, p: u32) -> u64 {
        let v = self.entries[self.index(divisor, k, target, p)];
        assert!(v != 0, "no inverse entry for digit {divisor}^{k} vs digit {target}^{p}");
        v
    }

    pub fn try_inverse(&self, divisor: usize, k: u32, target: usize, p: u32) -> Option<u64> {
        if k == 0 || p == 0 {
            return None;
        }
        match self.entries.get(self.index(divisor, k, target, p)) {
            Some(0) | None => None,
            Some(&v) => Some(v),
        }
    }

    /// Every divisor value the table serves, as `(digit index, k, base^k)`,
    /// ordered by digit then power.
    pub fn divisor_values(&self) -> &[(usize, u32, u64)] {
        &self.divisor_values
    }

    /// Look up by plain values rather than digit indexes (table emission and
    /// cross-checks); `None` when either value is foreign to the format or
    /// the two share a base.
    pub fn inverse_of_value(
        &self,
        fmt: &RnsFormat,
        divisor_value: u64,
        target_value: u64,
    ) -> Option<u64> {
        let (j, k) = fmt.locate_power_value(divisor_value)?;
        let (i, p) = fmt.locate_power_value(target_value)?;
        self.try_inverse(j, k, i, p)
    }
}

/// Generate the full inverse table for a format.
pub fn build_inverse_table(fmt: &RnsFormat) -> InverseTable {
    let digit_count = fmt.digit_count();
    let max_power = fmt.specs().iter().map(|s| s.max_power()).max().unwrap_or(1);
    let mut entries = vec![0u64; digit_count * max_power as usize * digit_count * max_power as usize];
    let mut divisor_values = Vec::new();
    let mut table = InverseTable { digit_count, max_power, entries: Vec::new(), divisor_values: Vec::new() };
    for (j, dspec) in fmt.specs().iter().enumerate() {
        for k in 1..=dspec.max_power() {
            let d = dspec.power_value(k);
            divisor_values.push((j, k, d));
            for (i, tspec) in fmt.specs().iter().enumerate() {
                if i == j {
                    continue;
                }
                for p in 1..=tspec.max_power() {
                    let m = tspec.power_value(p);
                    let inv = mod_inverse(d % m, m).expect("coprime bases always invert");
                    entries[table.index(j, k, i, p)] = inv;
                }
            }
        }
    }
    table.entries = entries;
    table.divisor_values = divisor_values;
    table
}
