//! Residue number system arithmetic with power-based moduli, and direct
//! integer division that never leaves the residue domain.
//!
//! The crate is organized around a small set of layers:
//!
//! - [`format`]: machine-word formats (ordered moduli, digit width, range).
//! - [`value`]: RNS values with per-digit validity, encode/decode, and the
//!   carry-free digit-parallel operations.
//! - [`inverse`]: multiplicative-inverse generation and the dense lookup
//!   table scaling and base extension draw from.
//! - [`scaling`]: exact division by powers of a value's own base moduli.
//! - [`mixed_radix`]: mixed-radix conversion, comparison, base extension.
//! - [`decompose`]: divisor decomposition into a script of scalings,
//!   increments, and base extensions with product `y_hat >= y`.
//! - [`divide`]: the full division engine (quotient, remainder, trace).
//! - [`trace`]: step traces and the deterministic cycle model.
//! - [`config`]: the text format for user-defined RNS formats and digit
//!   lists.
//! - [`oracle`]: big-integer ground truth, seeded fuzzing, and the bundled
//!   reference-table verifier.
//! - [`selftest`]: frozen reference traces for the default format.

pub mod arith;
pub mod config;
pub mod decompose;
pub mod divide;
pub mod error;
pub mod format;
pub mod inverse;
pub mod mixed_radix;
pub mod oracle;
pub mod scaling;
pub mod selftest;
pub mod trace;
pub mod value;

pub use decompose::{decompose, next_step, FactorScript, ScriptStep};
pub use divide::{
    apply_script_to_numer, divide, final_correction, DivideOptions, DivisionMode, DivisionResult,
};
pub use error::{Error, Result};
pub use format::{
    format_efficiency, make_format, mod9_default_format, mod9_power_format, ModulusSpec, RnsFormat,
};
pub use inverse::{build_inverse_table, divide_digit, mod_inverse, InverseTable};
pub use mixed_radix::{
    base_extend, base_extend_traced, compare, mrc_digits, mrc_value, MixedRadixDigit,
    RecombinationLog, RecombinationState,
};
pub use scaling::{multi_factor_scale, offset_for, scale_by_power};
pub use trace::{cycle_estimate, emit_trace, parse_trace_json, CycleCounters, Trace, TraceFormat, TraceRow};
pub use value::{DigitState, RnsValue};
