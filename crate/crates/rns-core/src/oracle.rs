//! Independent correctness oracles: big-integer ground truth for division,
//! a seeded fuzz driver with edge strata, and verification of the generated
//! inverse table against an independently transcribed reference table.

use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divide::{divide, DivideOptions, DivisionMode};
use crate::error::{Error, Result};
use crate::format::{make_format, RnsFormat};
use crate::inverse::InverseTable;
use crate::trace::{emit_trace, TraceFormat};
use crate::value::RnsValue;

/// Ground-truth floor division: `(x / y, x mod y)`.
pub fn oracle_divmod(x: &BigUint, y: &BigUint) -> Result<(BigUint, BigUint)> {
    if y.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let q = x / y;
    let r = x - &q * y;
    Ok((q, r))
}

/// The 3-digit exhaustive-test format: moduli (5, 8, 9), range 360. The
/// smallest word with a multi-power base-2 digit, a second power base, and
/// a single-power prime.
pub fn toy_format() -> Arc<RnsFormat> {
    Arc::new(make_format(&[(2, 3), (3, 2), (5, 1)], &[], 4).expect("toy format is valid"))
}

/// One divergence between the engine and the oracle.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzFailure {
    pub index: usize,
    pub x: String,
    pub y: String,
    pub expected_quotient: String,
    pub expected_remainder: String,
    pub got_quotient: Option<String>,
    pub got_remainder: Option<String>,
    pub error: Option<String>,
    #[serde(skip)]
    pub trace_md: String,
}

/// Outcome of a fuzz run; reproducible byte-for-byte from
/// `(format, count, seed)`.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Line-oriented summary.
    pub fn text(&self) -> String {
        let mut out = format!("fuzz: seed {} cases {} failures {}\n", self.seed, self.cases, self.failures.len());
        for f in &self.failures {
            out.push_str(&format!(
                "case {}: x={} y={} expected q={} r={} got q={} r={}{}\n",
                f.index,
                f.x,
                f.y,
                f.expected_quotient,
                f.expected_remainder,
                f.got_quotient.as_deref().unwrap_or("-"),
                f.got_remainder.as_deref().unwrap_or("-"),
                f.error.as_ref().map(|e| format!(" error: {e}")).unwrap_or_default(),
            ));
        }
        out
    }
}

fn rand_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    if *bound <= BigUint::one() {
        BigUint::zero()
    } else {
        rng.gen_biguint_below(bound)
    }
}

fn rand_range(rng: &mut ChaCha8Rng, lo: &BigUint, hi: &BigUint) -> BigUint {
    // [lo, hi)
    lo + rand_below(rng, &(hi - lo))
}

/// A product of random powers of the format's base moduli, at least 2 and
/// below the range.
fn random_power_product(rng: &mut ChaCha8Rng, fmt: &RnsFormat) -> BigUint {
    let mut product = BigUint::one();
    for s in fmt.specs() {
        if !s.is_power_based() || rng.gen_bool(0.5) {
            continue;
        }
        let k = rng.gen_range(1..=s.max_power());
        product *= BigUint::from(s.base().pow(k));
    }
    if product.is_one() {
        product = BigUint::from(fmt.spec(fmt.base2_index()).base());
    }
    product
}

/// Deterministic seeded stream of `(x, y)` division cases: uniform pairs
/// plus edge strata (exact multiples, y in {1, 2, top-of-range}, x = 0,
/// x = y, y one less than a product of base powers), every case checked
/// against the big-integer oracle.
pub fn fuzz_divisions(fmt: &Arc<RnsFormat>, tbl: &InverseTable, count: usize, seed: u64) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = fmt.range();
    let one = BigUint::one();
    let top = &range - &one;
    let mut failures = Vec::new();

    for index in 0..count {
        let (x, y) = match index % 8 {
            0..=2 => {
                let x = rand_range(&mut rng, &one, &range);
                let y = rand_range(&mut rng, &one, &(&x + &one));
                (x, y)
            }
            3 => {
                let y = rand_range(&mut rng, &one, &range);
                let qmax = &top / &y;
                let q = rand_range(&mut rng, &one, &(&qmax + &one));
                (&y * &q, y)
            }
            4 => {
                let pick = (index / 8) % 3;
                let y = match pick {
                    0 => one.clone(),
                    1 => BigUint::from(2u32).min(top.clone()),
                    _ => top.clone(),
                };
                let x = rand_range(&mut rng, &y, &range);
                (x, y)
            }
            5 => (BigUint::zero(), rand_range(&mut rng, &one, &range)),
            6 => {
                let y = rand_range(&mut rng, &one, &range);
                (y.clone(), y)
            }
            _ => {
                let p = random_power_product(&mut rng, fmt);
                let y = (&p - &one).max(one.clone()).min(top.clone());
                let x = rand_range(&mut rng, &y, &range);
                (x, y)
            }
        };

        let (eq, er) = oracle_divmod(&x, &y).expect("y >= 1");
        let xv = RnsValue::encode(fmt, &x).expect("x < R");
        let yv = RnsValue::encode(fmt, &y).expect("y < R");
        let outcome = divide(&xv, &yv, tbl, &DivideOptions::quiet());
        let ok = match &outcome {
            Ok(r) => r.quotient.decode() == eq && r.remainder.decode() == er,
            Err(_) => false,
        };
        if !ok {
            let trace_md = divide(&xv, &yv, tbl, &DivideOptions::traced(DivisionMode::Replay))
                .map(|r| emit_trace(&r.trace, TraceFormat::Markdown))
                .unwrap_or_default();
            let (gq, gr, err) = match outcome {
                Ok(r) => (
                    Some(r.quotient.decode().to_string()),
                    Some(r.remainder.decode().to_string()),
                    None,
                ),
                Err(e) => (None, None, Some(e.to_string())),
            };
            failures.push(FuzzFailure {
                index,
                x: x.to_string(),
                y: y.to_string(),
                expected_quotient: eq.to_string(),
                expected_remainder: er.to_string(),
                got_quotient: gq,
                got_remainder: gr,
                error: err,
                trace_md,
            });
        }
    }
    FuzzReport { seed, cases: count, failures }
}

/// Exhaustively check every `(x, y)` pair of the toy format against the
/// oracle. Returns the failing pairs (empty on success) and the case count.
pub fn exhaustive_toy_check(tbl: &InverseTable) -> (usize, Vec<(u64, u64)>) {
    let fmt = toy_format();
    let range = fmt.range().to_u64().expect("toy range fits");
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for x in 0..range {
        let xv = RnsValue::encode_u64(&fmt, x).expect("in range");
        for y in 1..range {
            let yv = RnsValue::encode_u64(&fmt, y).expect("in range");
            cases += 1;
            match divide(&xv, &yv, tbl, &DivideOptions::quiet()) {
                Ok(r) => {
                    let q = r.quotient.decode().to_u64().unwrap();
                    let rem = r.remainder.decode().to_u64().unwrap();
                    if q != x / y || rem != x % y {
                        failures.push((x, y));
                    }
                }
                Err(_) => failures.push((x, y)),
            }
        }
    }
    (cases, failures)
}

/// Independently transcribed reference inverse table for the default
/// power-based moduli. Row label: divisor value; columns follow
/// `REFERENCE_COLUMNS`. `UND` marks same-base cells, which have no inverse.
pub const REFERENCE_COLUMNS: [u64; 27] = [
    11, 121, 5, 25, 125, 13, 169, 3, 9, 27, 81, 243, 2, 4, 8, 16, 32, 64, 128, 256, 17, 289, 7,
    49, 343, 19, 361,
];

const REFERENCE_TABLE: &str = "\
11: UND UND 1 16 91 6 123 2 5 5 59 221 1 3 3 3 3 35 35 163 14 184 2 9 156 7 197
121: UND UND 1 6 31 10 88 1 7 25 79 241 1 1 1 9 9 9 73 201 9 43 4 32 326 11 182
5: 9 97 UND UND UND 8 34 2 2 11 65 146 1 1 5 13 13 13 77 205 7 58 3 10 206 4 289
25: 4 92 UND UND UND 12 142 1 4 13 13 175 1 1 1 9 9 9 41 41 15 185 2 2 247 16 130
125: 3 91 UND UND UND 5 96 2 8 8 35 35 1 1 5 5 21 21 85 213 3 37 6 20 118 7 26
13: 6 28 2 2 77 UND UND 1 7 25 25 187 1 1 5 5 5 5 69 197 4 89 6 34 132 3 250
169: 3 58 4 4 54 UND UND 1 4 4 58 220 1 1 1 9 25 25 25 153 16 118 1 29 274 9 47
3: 4 81 2 17 42 9 113 UND UND UND UND UND 1 3 3 11 11 43 43 171 6 193 5 33 229 13 241
9: 5 27 4 14 14 3 94 UND UND UND UND UND 1 1 1 9 25 57 57 57 2 257 4 11 305 17 321
27: 9 9 3 13 88 1 144 UND UND UND UND UND 1 3 3 3 19 19 19 19 12 182 6 20 216 12 107
81: 3 3 1 21 71 9 48 UND UND UND UND UND 1 1 1 1 17 49 49 177 4 157 2 23 72 4 156
243: 1 1 2 7 107 3 16 UND UND UND UND UND 1 3 3 11 27 59 59 59 7 245 3 24 24 14 52
2: 6 61 3 13 63 7 85 2 5 14 41 122 UND UND UND UND UND UND UND UND 13 217 2 37 86 5 271
4: 3 91 4 19 94 10 127 1 7 7 61 61 UND UND UND UND UND UND UND UND 13 217 2 37 86 5 271
8: 7 106 2 22 47 5 148 2 8 17 71 152 UND UND UND UND UND UND UND UND 15 253 1 43 43 12 316
16: 9 53 1 11 86 9 74 1 4 22 76 76 UND UND UND UND UND UND UND UND 16 271 4 46 193 6 158
32: 10 87 3 18 43 11 37 2 2 11 38 38 UND UND UND UND UND UND UND UND 8 280 2 23 268 3 79
64: 5 104 4 9 84 12 103 1 1 19 19 19 UND UND UND UND UND UND UND UND 4 140 1 36 134 11 220
128: 8 52 2 17 42 6 136 2 5 23 50 131 UND UND UND UND UND UND UND UND 2 70 4 18 67 15 110
256: 4 26 1 21 21 3 68 1 7 25 25 187 UND UND UND UND UND UND UND UND 1 35 2 9 205 17 55
17: 2 57 3 3 103 10 10 2 8 8 62 143 1 1 1 1 17 49 113 241 UND UND 5 26 222 9 85
289: 4 103 4 9 109 9 100 1 1 10 37 37 1 1 1 1 1 33 97 225 UND UND 4 39 235 5 5
7: 8 52 3 18 18 2 145 1 4 4 58 139 1 3 7 7 23 55 55 183 5 124 UND UND UND 11 258
49: 9 42 4 24 74 4 69 1 7 16 43 124 1 1 1 1 17 17 81 209 8 59 UND UND UND 7 140
343: 6 6 2 7 82 8 34 1 1 10 64 226 1 3 7 7 7 39 103 103 6 91 UND UND UND 1 20
19: 7 51 4 4 79 11 89 1 1 10 64 64 1 3 3 11 27 27 27 27 9 213 3 31 325 UND UND
361: 5 60 1 16 116 4 147 1 1 19 46 208 1 1 1 9 25 25 89 217 13 285 2 30 324 UND UND
";

/// One reference cell that disagreed with something.
#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub divisor: u64,
    pub target: u64,
    pub fixture: u64,
    pub generated: Option<u64>,
}

/// Result of checking the generated table against the reference fixture.
/// Fixture cells that fail the definitional product check are *errata*:
/// they are reported and excluded from the match requirement, since the
/// definition `(a * inv) mod m == 1` outranks any transcription.
#[derive(Debug, Clone, Serialize)]
pub struct TableVerifyReport {
    pub checked_cells: usize,
    pub errata: Vec<TableCell>,
    pub mismatches: Vec<TableCell>,
    pub missing: Vec<(u64, u64)>,
    pub und_violations: Vec<(u64, u64)>,
}

impl TableVerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.missing.is_empty() && self.und_violations.is_empty()
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "reference table: {} cells checked, {} errata, {} mismatches\n",
            self.checked_cells,
            self.errata.len(),
            self.mismatches.len()
        );
        for e in &self.errata {
            out.push_str(&format!(
                "erratum: fixture 1/{} mod {} = {} fails (a*inv) mod m = 1; generated {}\n",
                e.divisor,
                e.target,
                e.fixture,
                e.generated.map(|g| g.to_string()).unwrap_or_else(|| "-".into())
            ));
        }
        for m in &self.mismatches {
            out.push_str(&format!(
                "mismatch: 1/{} mod {}: fixture {} generated {}\n",
                m.divisor,
                m.target,
                m.fixture,
                m.generated.map(|g| g.to_string()).unwrap_or_else(|| "-".into())
            ));
        }
        for (d, t) in &self.missing {
            out.push_str(&format!("missing: generated table lacks 1/{d} mod {t}\n"));
        }
        for (d, t) in &self.und_violations {
            out.push_str(&format!("violation: generated table defines same-base 1/{d} mod {t}\n"));
        }
        out
    }
}

fn parse_reference() -> Vec<(u64, Vec<Option<u64>>)> {
    REFERENCE_TABLE
        .lines()
        .map(|line| {
            let (label, rest) = line.split_once(':').expect("fixture row label");
            let divisor: u64 = label.trim().parse().expect("fixture divisor");
            let cells: Vec<Option<u64>> = rest
                .split_whitespace()
                .map(|c| if c == "UND" { None } else { Some(c.parse().expect("fixture cell")) })
                .collect();
            assert_eq!(cells.len(), REFERENCE_COLUMNS.len(), "fixture row width");
            (divisor, cells)
        })
        .collect()
}

/// Verify the generated table for the default power-based moduli against
/// the reference fixture.
pub fn verify_reference_table(fmt: &RnsFormat, tbl: &InverseTable) -> TableVerifyReport {
    let mut report = TableVerifyReport {
        checked_cells: 0,
        errata: Vec::new(),
        mismatches: Vec::new(),
        missing: Vec::new(),
        und_violations: Vec::new(),
    };
    for (divisor, cells) in parse_reference() {
        for (col, cell) in REFERENCE_COLUMNS.iter().zip(cells) {
            let generated = tbl.inverse_of_value(fmt, divisor, *col);
            match cell {
                None => {
                    // Same-base cell: the generated table must not have it.
                    if generated.is_some() {
                        report.und_violations.push((divisor, *col));
                    }
                }
                Some(fixture) => {
                    report.checked_cells += 1;
                    let definitional =
                        (divisor as u128 * fixture as u128) % *col as u128 == 1;
                    let cellinfo = TableCell { divisor, target: *col, fixture, generated };
                    if !definitional {
                        report.errata.push(cellinfo);
                    } else if generated.is_none() {
                        report.missing.push((divisor, *col));
                    } else if generated != Some(fixture) {
                        report.mismatches.push(cellinfo);
                    }
                }
            }
        }
    }
    report
}
