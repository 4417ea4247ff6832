//! Exact evaluation of the size recurrences of the `G_d(m)` family:
//! special blocks `S`, blocks `M`, length `L`, letters `N`, and the ratios
//! `X = M / S` and `V = L / M`.
//!
//! ```text
//! S(1, m) = m + 1        S(d, 1) = 2          S(d, m) = S(d, m-1) * S(d-1, S(d, m-1))
//! M(1, m) = 3m + 3       M(d, 1) = 2d + 4     M(d, m) = M(d, m-1) * g + M(d-1, f) - g
//!                                             with f = S(d, m-1), g = S(d-1, f)
//! L(d, m) = (d + 1) * m * S(d, m)             N(d, m) = L(d, m) / (2d + 2)
//! ```
//!
//! The inner arguments grow as fast as the values, so every evaluation is
//! capped by a bit budget; anything beyond it is reported as overflow.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Default cap on the size of any evaluated value.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// Lazily extended rows of `S(d, .)` and `M(d, .)` for `d >= 2`.
#[derive(Debug, Clone)]
pub struct Recurrences {
    bit_budget: u64,
    // s_rows[d - 2][n - 1] = S(d, n); same layout for m_rows
    s_rows: Vec<Row>,
    m_rows: Vec<Row>,
}

#[derive(Debug, Clone, Default)]
struct Row {
    values: Vec<BigUint>,
    /// Set once an entry exceeded the budget; no later entry is computable.
    overflowed: bool,
}

impl Recurrences {
    pub fn new(bit_budget: u64) -> Self {
        Recurrences {
            bit_budget,
            s_rows: Vec::new(),
            m_rows: Vec::new(),
        }
    }

    pub fn bit_budget(&self) -> u64 {
        self.bit_budget
    }

    fn fits(&self, v: &BigUint) -> bool {
        v.bits() <= self.bit_budget
    }

    /// `S(d, m)` for `d, m >= 1`, or `None` past the budget.
    pub fn s(&mut self, d: u32, m: &BigUint) -> Option<BigUint> {
        assert!(d >= 1 && !m.is_zero());
        if d == 1 {
            let v = m + 1u32;
            return self.fits(&v).then_some(v);
        }
        let n = self.small_index(m)?;
        self.extend_s(d, n);
        self.s_rows[d as usize - 2].values.get(n - 1).cloned()
    }

    /// `M(d, m)` for `d, m >= 1`, or `None` past the budget.
    pub fn m(&mut self, d: u32, m: &BigUint) -> Option<BigUint> {
        assert!(d >= 1 && !m.is_zero());
        if d == 1 {
            let v = m * 3u32 + 3u32;
            return self.fits(&v).then_some(v);
        }
        let n = self.small_index(m)?;
        self.extend_m(d, n);
        self.m_rows[d as usize - 2].values.get(n - 1).cloned()
    }

    /// Row index for an argument. `S(d, n) >= 2^n`, so arguments beyond the
    /// budget can only overflow.
    fn small_index(&self, m: &BigUint) -> Option<usize> {
        let n = m.to_u64()?;
        if n > self.bit_budget {
            return None;
        }
        Some(n as usize)
    }

    fn ensure_rows(&mut self, d: u32) {
        while self.s_rows.len() < d as usize - 1 {
            self.s_rows.push(Row::default());
            self.m_rows.push(Row::default());
        }
    }

    fn extend_s(&mut self, d: u32, n: usize) {
        self.ensure_rows(d);
        let idx = d as usize - 2;
        loop {
            let row = &self.s_rows[idx];
            if row.values.len() >= n || row.overflowed {
                return;
            }
            let next = match row.values.last() {
                None => Some(BigUint::from(2u32)),
                Some(prev) => {
                    let f = prev.clone();
                    self.s(d - 1, &f).map(|g| f * g)
                }
            };
            let row = &mut self.s_rows[idx];
            match next {
                Some(v) if v.bits() <= self.bit_budget => row.values.push(v),
                _ => row.overflowed = true,
            }
        }
    }

    fn extend_m(&mut self, d: u32, n: usize) {
        self.ensure_rows(d);
        let idx = d as usize - 2;
        loop {
            let row = &self.m_rows[idx];
            if row.values.len() >= n || row.overflowed {
                return;
            }
            let len = row.values.len();
            let next = if len == 0 {
                Some(BigUint::from(2 * d + 4))
            } else {
                let prev = row.values[len - 1].clone();
                // step to index len + 1 uses f = S(d, len)
                self.s(d, &BigUint::from(len)).and_then(|f| {
                    let g = self.s(d - 1, &f)?;
                    let inner = self.m(d - 1, &f)?;
                    Some(prev * &g + inner - g)
                })
            };
            let row = &mut self.m_rows[idx];
            match next {
                Some(v) if v.bits() <= self.bit_budget => row.values.push(v),
                _ => row.overflowed = true,
            }
        }
    }

    /// All quantities for one cell, or `None` when any of them overflows.
    pub fn cell(&mut self, d: u32, m: u32) -> Option<CellValues> {
        let mb = BigUint::from(m);
        let s = self.s(d, &mb)?;
        let blocks = self.m(d, &mb)?;
        let length = &s * (d + 1) * m;
        if !self.fits(&length) {
            return None;
        }
        let per_letter = BigUint::from(2 * d + 2);
        debug_assert!((&length % &per_letter).is_zero());
        let letters = &length / &per_letter;
        let x_ratio = BigRational::new(blocks.clone().into(), s.clone().into());
        let v_ratio = BigRational::new(length.clone().into(), blocks.clone().into());
        Some(CellValues {
            special: s,
            blocks,
            length,
            letters,
            x_ratio,
            v_ratio,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellValues {
    /// `S(d, m)`
    pub special: BigUint,
    /// `M(d, m)`
    pub blocks: BigUint,
    /// `L(d, m)`
    pub length: BigUint,
    /// `N(d, m)`
    pub letters: BigUint,
    pub x_ratio: BigRational,
    pub v_ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub d: u32,
    pub m: u32,
    /// `None` marks overflow beyond the bit budget.
    pub values: Option<CellValues>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceTable {
    pub d_max: u32,
    pub m_max: u32,
    pub bit_budget: u64,
    pub cells: Vec<Cell>,
}

impl RecurrenceTable {
    pub fn get(&self, d: u32, m: u32) -> Option<&CellValues> {
        self.cells
            .iter()
            .find(|c| c.d == d && c.m == m)
            .and_then(|c| c.values.as_ref())
    }

    pub fn computed(&self) -> impl Iterator<Item = (u32, u32, &CellValues)> {
        self.cells
            .iter()
            .filter_map(|c| c.values.as_ref().map(|v| (c.d, c.m, v)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,m,S,M,L,N,Xratio,Vratio\n");
        for c in &self.cells {
            match &c.values {
                Some(v) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        c.d,
                        c.m,
                        v.special,
                        v.blocks,
                        v.length,
                        v.letters,
                        fraction(&v.x_ratio),
                        fraction(&v.v_ratio)
                    );
                }
                None => {
                    let _ = writeln!(out, "{},{}{}", c.d, c.m, ",overflow".repeat(6));
                }
            }
        }
        out
    }
}

/// `p/q` in lowest terms, always with an explicit denominator.
pub fn fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Table of every cell with `1 <= d <= d_max` and `1 <= m <= m_max`.
pub fn recurrences(d_max: u32, m_max: u32, bit_budget: u64) -> RecurrenceTable {
    let mut rec = Recurrences::new(bit_budget);
    let mut cells = Vec::new();
    for d in 1..=d_max {
        for m in 1..=m_max {
            cells.push(Cell {
                d,
                m,
                values: rec.cell(d, m),
            });
        }
    }
    RecurrenceTable {
        d_max,
        m_max,
        bit_budget,
        cells,
    }
}

/// Cells violating `X(d, m) <= 2d + 2` or `V(d, m) >= m / 2`.
pub fn ratio_violations(table: &RecurrenceTable) -> Vec<(u32, u32)> {
    table
        .computed()
        .filter(|(d, m, v)| {
            let x_cap = BigRational::from_integer((2 * d + 2).into());
            let v_floor = BigRational::new((*m).into(), 2.into());
            v.x_ratio > x_cap || v.v_ratio < v_floor
        })
        .map(|(d, m, _)| (d, m))
        .collect()
}

/// `2^(2^(m-1)) <= S(2, m) <= 2^(2^m - 1)` on a computed cell.
pub fn s2_within_bounds(m: u32, s: &BigUint) -> bool {
    let lower = BigUint::one() << (1u64 << (m - 1));
    let upper = BigUint::one() << ((1u64 << m) - 1);
    &lower <= s && s <= &upper
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn base_rows() {
        let mut r = Recurrences::new(DEFAULT_BIT_BUDGET);
        for m in 1..10u64 {
            assert_eq!(r.s(1, &big(m)), Some(big(m + 1)));
            assert_eq!(r.m(1, &big(m)), Some(big(3 * m + 3)));
        }
        for d in 2..6u32 {
            assert_eq!(r.s(d, &big(1)), Some(big(2)));
            assert_eq!(r.m(d, &big(1)), Some(big(2 * d as u64 + 4)));
        }
    }

    #[test]
    fn second_column_closed_forms() {
        let mut r = Recurrences::new(DEFAULT_BIT_BUDGET);
        for d in 2..8u32 {
            assert_eq!(r.s(d, &big(2)), Some(big(3 << (d - 1))));
            assert_eq!(r.m(d, &big(2)), Some(big((6 * d as u64 + 3) << (d - 1))));
        }
    }

    #[test]
    fn hand_evaluated_cells() {
        let t = recurrences(2, 3, DEFAULT_BIT_BUDGET);
        let c = t.get(2, 3).unwrap();
        assert_eq!(c.special, big(42));
        assert_eq!(c.blocks, big(224));
        assert_eq!(c.length, big(378));
        assert_eq!(c.letters, big(63));
        assert_eq!(fraction(&c.x_ratio), "16/3");
        assert_eq!(fraction(&c.v_ratio), "27/16");
        assert!(t.to_csv().contains("\n2,3,42,224,378,63,16/3,27/16\n"));
    }

    #[test]
    fn overflow_is_a_value() {
        let t = recurrences(4, 4, 64);
        assert!(t.get(4, 4).is_none());
        assert!(t.to_csv().contains("4,4,overflow,overflow"));
        assert!(t.get(1, 4).is_some());
    }

    #[test]
    fn s2_bounds_helper() {
        assert!(s2_within_bounds(3, &big(42)));
        assert!(!s2_within_bounds(3, &big(200)));
    }
}
