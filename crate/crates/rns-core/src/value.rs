//! RNS values: per-digit residue state, encode/decode, and the carry-free
//! digit-parallel (PAC) operations.
//!
//! Every digit tracks how many powers of its base modulus remain valid.
//! A digit with zero powers remaining is *invalid* ("skipped"): its value
//! field is stale and every operation here branches on the power count,
//! never on the stale value.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{addmod, mulmod, submod};
use crate::error::{Error, Result};
use crate::format::RnsFormat;
use crate::inverse::mod_inverse;

/// One digit register: residue value plus remaining valid powers.
#[derive(Debug, Clone, Copy)]
pub struct DigitState {
    value: u64,
    power_remaining: u32,
}

impl DigitState {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn power_remaining(&self) -> u32 {
        self.power_remaining
    }

    pub fn is_valid(&self) -> bool {
        self.power_remaining > 0
    }
}

/// An RNS value over a shared format.
#[derive(Debug, Clone)]
pub struct RnsValue {
    format: Arc<RnsFormat>,
    digits: Vec<DigitState>,
}

impl PartialEq for RnsValue {
    /// Semantic equality: same format, same validity pattern, and equal
    /// values on valid digits (stale fields of invalid digits are ignored).
    fn eq(&self, other: &Self) -> bool {
        self.same_format(other)
            && self.digits.len() == other.digits.len()
            && self
                .digits
                .iter()
                .zip(&other.digits)
                .all(|(a, b)| {
                    a.power_remaining == b.power_remaining
                        && (a.power_remaining == 0 || a.value == b.value)
                })
    }
}

impl RnsValue {
    /// Encode a nonnegative integer `x < R` into normalized RNS form.
    pub fn encode(format: &Arc<RnsFormat>, x: &BigUint) -> Result<Self> {
        if *x >= format.range() {
            return Err(Error::OutOfRange(x.clone()));
        }
        let digits = format
            .specs()
            .iter()
            .map(|s| DigitState {
                value: (x % BigUint::from(s.modulus())).to_u64().unwrap(),
                power_remaining: s.max_power(),
            })
            .collect();
        Ok(Self { format: Arc::clone(format), digits })
    }

    pub fn encode_u64(format: &Arc<RnsFormat>, x: u64) -> Result<Self> {
        Self::encode(format, &BigUint::from(x))
    }

    /// Build a value from raw cells; `None` marks an invalid digit.
    /// `Some` digits are taken at full power.
    pub fn from_digits(format: &Arc<RnsFormat>, cells: &[Option<u64>]) -> Result<Self> {
        if cells.len() != format.digit_count() {
            return Err(Error::DigitCount { expected: format.digit_count(), got: cells.len() });
        }
        let digits = format
            .specs()
            .iter()
            .zip(cells)
            .enumerate()
            .map(|(index, (s, cell))| match cell {
                Some(v) if *v >= s.modulus() => Err(Error::DigitOutOfRange {
                    index,
                    value: *v,
                    modulus: s.modulus(),
                }),
                Some(v) => Ok(DigitState { value: *v, power_remaining: s.max_power() }),
                None => Ok(DigitState { value: 0, power_remaining: 0 }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { format: Arc::clone(format), digits })
    }

    pub fn format(&self) -> &Arc<RnsFormat> {
        &self.format
    }

    pub fn digits(&self) -> &[DigitState] {
        &self.digits
    }

    pub fn digit(&self, index: usize) -> &DigitState {
        &self.digits[index]
    }

    /// Current modulus of a digit: `base^power_remaining` (1 when invalid).
    pub fn current_modulus(&self, index: usize) -> u64 {
        self.format.spec(index).base().pow(self.digits[index].power_remaining)
    }

    pub fn same_format(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.format, &other.format) || self.format == other.format
    }

    pub fn same_validity(&self, other: &Self) -> bool {
        self.digits
            .iter()
            .zip(&other.digits)
            .all(|(a, b)| a.power_remaining == b.power_remaining)
    }

    /// Every digit at full power.
    pub fn is_normalized(&self) -> bool {
        self.digits
            .iter()
            .zip(self.format.specs())
            .all(|(d, s)| d.power_remaining == s.max_power())
    }

    /// Per-digit cells for display: `None` where the digit is invalid.
    pub fn cells(&self) -> Vec<Option<u64>> {
        self.digits
            .iter()
            .map(|d| d.is_valid().then_some(d.value))
            .collect()
    }

    pub fn current_moduli(&self) -> Vec<u64> {
        (0..self.digits.len()).map(|i| self.current_modulus(i)).collect()
    }

    /// Valid digit indexes in consumption order: ascending current modulus.
    pub(crate) fn valid_ascending(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.digits.len())
            .filter(|&i| self.digits[i].is_valid())
            .collect();
        idx.sort_by_key(|&i| self.current_modulus(i));
        idx
    }

    /// Product of the current moduli of all valid digits.
    pub fn effective_range(&self) -> BigUint {
        self.valid_ascending()
            .iter()
            .fold(BigUint::one(), |acc, &i| acc * BigUint::from(self.current_modulus(i)))
    }

    /// The unique integer in `[0, effective_range)` congruent to every valid
    /// digit, reconstructed by mixed-radix recombination. The all-invalid
    /// value decodes to 0.
    pub fn decode(&self) -> BigUint {
        let mut x = BigUint::zero();
        let mut weight = BigUint::one();
        for i in self.valid_ascending() {
            let m = self.current_modulus(i);
            let r = self.digits[i].value;
            let x_mod = (&x % BigUint::from(m)).to_u64().unwrap();
            let w_mod = (&weight % BigUint::from(m)).to_u64().unwrap();
            let w_inv = mod_inverse(w_mod, m).expect("weight coprime to modulus");
            let a = mulmod(submod(r, x_mod, m), w_inv, m);
            x += BigUint::from(a) * &weight;
            weight *= BigUint::from(m);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|d| !d.is_valid() || d.value == 0)
    }

    /// All valid digits equal one (requires at least one valid digit).
    pub fn is_one(&self) -> bool {
        self.digits.iter().any(|d| d.is_valid())
            && self.digits.iter().all(|d| !d.is_valid() || d.value == 1)
    }

    fn binary_pac(&self, other: &Self, op: impl Fn(u64, u64, u64) -> u64) -> Result<Self> {
        if !self.same_format(other) {
            return Err(Error::FormatMismatch);
        }
        if !self.same_validity(other) {
            return Err(Error::ValidityMismatch);
        }
        let mut out = self.clone();
        for (i, (a, b)) in out.digits.iter_mut().zip(&other.digits).enumerate() {
            if a.is_valid() {
                let m = self.format.spec(i).base().pow(a.power_remaining);
                a.value = op(a.value, b.value, m);
            }
        }
        Ok(out)
    }

    /// Digit-wise modular addition at each digit's current modulus.
    pub fn pac_add(&self, other: &Self) -> Result<Self> {
        self.binary_pac(other, addmod)
    }

    /// Digit-wise modular subtraction at each digit's current modulus.
    pub fn pac_sub(&self, other: &Self) -> Result<Self> {
        self.binary_pac(other, submod)
    }

    /// Digit-wise modular multiplication at each digit's current modulus.
    pub fn pac_mul(&self, other: &Self) -> Result<Self> {
        self.binary_pac(other, mulmod)
    }

    /// Broadcast-subtract a small constant from every valid digit.
    pub fn subtract_scalar(&self, t: u64) -> Self {
        let mut out = self.clone();
        out.sub_scalar_in_place(t);
        out
    }

    pub(crate) fn sub_scalar_in_place(&mut self, t: u64) {
        for i in 0..self.digits.len() {
            if self.digits[i].is_valid() {
                let m = self.current_modulus(i);
                self.digits[i].value = submod(self.digits[i].value, t, m);
            }
        }
    }

    pub(crate) fn add_scalar_in_place(&mut self, t: u64) {
        for i in 0..self.digits.len() {
            if self.digits[i].is_valid() {
                let m = self.current_modulus(i);
                self.digits[i].value = addmod(self.digits[i].value, t, m);
            }
        }
    }

    /// Largest `k <= power_remaining` with `base^k` dividing the digit value;
    /// a zero digit reports its full remaining power.
    pub fn divisible_powers(&self, index: usize) -> Result<u32> {
        let d = &self.digits[index];
        if !d.is_valid() {
            return Err(Error::DigitInvalid(index));
        }
        if d.value == 0 {
            return Ok(d.power_remaining);
        }
        let base = self.format.spec(index).base();
        let mut k = 0;
        let mut v = d.value;
        while k < d.power_remaining && v.is_multiple_of(base) {
            v /= base;
            k += 1;
        }
        Ok(k)
    }

    /// Power-based digits currently divisible by at least one power of their
    /// base, with the maximum power count for each.
    pub fn any_zero(&self) -> Vec<(usize, u32)> {
        let mut hits = Vec::new();
        for (i, s) in self.format.specs().iter().enumerate() {
            if !s.is_power_based() || !self.digits[i].is_valid() {
                continue;
            }
            let k = self.divisible_powers(i).expect("digit checked valid");
            if k > 0 {
                hits.push((i, k));
            }
        }
        hits
    }

    /// True when the value equals `effective_range - 1`: every valid digit
    /// sits at its current modulus minus one. Incrementing such a value
    /// would wrap to zero.
    pub fn at_range_top(&self) -> bool {
        self.digits.iter().any(|d| d.is_valid())
            && (0..self.digits.len()).all(|i| {
                let d = &self.digits[i];
                !d.is_valid() || d.value() == self.current_modulus(i) - 1
            })
    }

    pub(crate) fn set_digit(&mut self, index: usize, value: u64, power_remaining: u32) {
        self.digits[index] = DigitState { value, power_remaining };
    }

    /// Mark a digit invalid, keeping its stale value.
    pub fn invalidate_digit(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.digits[index].power_remaining = 0;
        out
    }
}
