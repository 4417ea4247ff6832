//! The Ackermann hierarchy `A_1(n) = 2n`, `A_k(0) = 1`,
//! `A_k(n) = A_{k-1}(A_k(n - 1))`, its level-wise inverses
//! `alpha_k(x) = min { n : A_k(n) >= x }`, and the diagonal `A(n) = A_n(3)`
//! with inverse `alpha(x) = min { n : A(n) >= x }`.
//!
//! Two evaluators: [`ack`] materializes values up to a bit budget, and
//! [`ack_geq`] decides `A_k(n) >= x` by evaluating with every intermediate
//! value capped at `x`. Capping is exact because each level is increasing
//! and never below its argument.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::constructions::RecurrenceTable;

pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HierarchyValue {
    Exact(BigUint),
    /// The value needs more than `bits` bits.
    Saturated { bits: u64 },
}

impl HierarchyValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            HierarchyValue::Exact(v) => Some(v),
            HierarchyValue::Saturated { .. } => None,
        }
    }
}

impl fmt::Display for HierarchyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HierarchyValue::Exact(v) => write!(f, "{v}"),
            HierarchyValue::Saturated { bits } => write!(f, ">=2^{bits}"),
        }
    }
}

/// `A_k(n)` exactly, or `Saturated` once any value on the way needs more
/// than `bit_budget` bits.
pub fn ack(k: u32, n: u64, bit_budget: u64) -> HierarchyValue {
    assert!(k >= 1, "hierarchy levels start at 1");
    match eval(k, &BigUint::from(n), bit_budget) {
        Some(v) => HierarchyValue::Exact(v),
        None => HierarchyValue::Saturated { bits: bit_budget },
    }
}

fn eval(k: u32, n: &BigUint, budget: u64) -> Option<BigUint> {
    let v = match k {
        1 => n << 1usize,
        2 => {
            let e = n.to_u64().filter(|&e| e < budget)?;
            BigUint::one() << e
        }
        _ => {
            // A_k(n) >= 2^n for k >= 2, so large arguments cannot fit
            let steps = n.to_u64().filter(|&e| e < budget)?;
            let mut v = BigUint::one();
            for _ in 0..steps {
                v = eval(k - 1, &v, budget)?;
            }
            v
        }
    };
    (v.bits() <= budget).then_some(v)
}

/// `min(A_k(n), cap)`.
fn capped(k: u32, n: &BigUint, cap: &BigUint) -> BigUint {
    if n >= cap {
        // A_k(n) >= n
        return cap.clone();
    }
    match k {
        1 => (n << 1usize).min(cap.clone()),
        2 => {
            // n < cap here, so n fits whenever 2^n < cap could hold
            match n.to_u64() {
                Some(e) if e < cap.bits() => (BigUint::one() << e).min(cap.clone()),
                _ => cap.clone(),
            }
        }
        _ => {
            let mut v = BigUint::one();
            let mut i = BigUint::zero();
            // each step at least doubles v once v >= 1, so this loop runs at
            // most log2(cap) + 1 times before v reaches the cap
            while &i < n {
                v = capped(k - 1, &v, cap);
                if &v >= cap {
                    return cap.clone();
                }
                i += 1u32;
            }
            v.min(cap.clone())
        }
    }
}

/// Whether `A_k(n) >= x`, without materializing `A_k(n)`.
pub fn ack_geq(k: u32, n: u64, x: &BigUint) -> bool {
    assert!(k >= 1, "hierarchy levels start at 1");
    if x.is_zero() {
        return true;
    }
    capped(k, &BigUint::from(n), x) >= *x
}

/// `alpha_k(x) = min { n : A_k(n) >= x }`.
pub fn alpha(k: u32, x: &BigUint) -> u64 {
    let mut n = 0;
    while !ack_geq(k, n, x) {
        n += 1;
    }
    n
}

/// `A(n) = A_n(3)`.
pub fn ack_diag(n: u32, bit_budget: u64) -> HierarchyValue {
    ack(n, 3, bit_budget)
}

/// `alpha(x) = min { n >= 1 : A_n(3) >= x }`.
pub fn alpha_diag(x: &BigUint) -> u32 {
    let mut n = 1;
    while !ack_geq(n, 3, x) {
        n += 1;
    }
    n
}

/// One comparison between a special-block count and its hierarchy bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub d: u32,
    pub m: u32,
    /// The bound is `A_level(arg)`.
    pub level: u32,
    pub arg: u64,
    pub holds: bool,
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.holds { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} S({},{}) <= A_{}({})",
            self.d, self.m, self.level, self.arg
        )
    }
}

/// `S(3, m) <= A_3(2m)` and, for `d >= 4`, `S(d, m) <= A_d(m + 2)` on every
/// computed cell of the table. Levels 1 and 2 carry no such bound.
pub fn check_s_bounds(table: &RecurrenceTable) -> Vec<BoundCheck> {
    table
        .computed()
        .filter(|(d, _, _)| *d >= 3)
        .map(|(d, m, v)| {
            let arg = if d == 3 { 2 * m as u64 } else { m as u64 + 2 };
            BoundCheck {
                d,
                m,
                level: d,
                arg,
                holds: ack_geq(d, arg, &v.special),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn exact(k: u32, n: u64) -> BigUint {
        ack(k, n, DEFAULT_BIT_BUDGET).exact().cloned().unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(exact(1, 3), big(6));
        assert_eq!(exact(2, 4), big(16));
        for k in 1..6 {
            assert_eq!(exact(k, 1), big(2), "A_{k}(1)");
            assert_eq!(exact(k, 2), big(4), "A_{k}(2)");
        }
        assert_eq!(exact(3, 3), big(16));
        assert_eq!(exact(3, 4), big(65536));
        assert_eq!(exact(4, 3), big(65536));
        assert_eq!(exact(3, 5).bits(), 65537);
    }

    #[test]
    fn saturation() {
        assert_eq!(ack(3, 6, DEFAULT_BIT_BUDGET), HierarchyValue::Saturated { bits: DEFAULT_BIT_BUDGET });
        assert_eq!(ack(2, 100, 50), HierarchyValue::Saturated { bits: 50 });
        assert!(ack(5, 3, DEFAULT_BIT_BUDGET).exact().is_none());
    }

    #[test]
    fn geq_examples() {
        assert!(!ack_geq(3, 3, &big(17)));
        assert!(ack_geq(3, 3, &big(16)));
        assert!(ack_geq(2, 10, &big(1024)));
        for k in 2..6 {
            assert!(!ack_geq(k, 0, &big(2)));
        }
        // far beyond any exact evaluation
        assert!(ack_geq(5, 5, &(BigUint::one() << 5_000_000u64)));
    }

    #[test]
    fn inverses() {
        assert_eq!(alpha(2, &big(9)), 4);
        assert_eq!(alpha(1, &big(7)), 4);
        assert_eq!(alpha_diag(&big(16)), 3);
        assert_eq!(alpha_diag(&big(6)), 1);
        assert_eq!(alpha_diag(&big(17)), 4);
        assert_eq!(ack_diag(1, 64), HierarchyValue::Exact(big(6)));
        assert_eq!(ack_diag(2, 64), HierarchyValue::Exact(big(8)));
        assert_eq!(ack_diag(3, 64), HierarchyValue::Exact(big(16)));
    }
}
