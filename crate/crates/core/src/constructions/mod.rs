//! Generators for the extremal families `X_s(m)` and `G_d(m)`, the exact
//! recurrence engine for the sizes of `G_d(m)`, and disjoint concatenation.

mod g;
pub mod recurrence;
mod xs;

use std::fmt;

use num_bigint::BigUint;

use crate::error::{invalid, Result};
use crate::seq::{
    avoids_alternation, canonicalize, occurrence_profile, Block, Letter, Sequence,
};

pub use g::{build_g, build_g_with_budget, DEFAULT_MAX_LENGTH};
pub use recurrence::{
    fraction, ratio_violations, recurrences, s2_within_bounds, CellValues, RecurrenceTable,
    Recurrences, DEFAULT_BIT_BUDGET,
};
pub use xs::build_xs;

/// A two-block palindrome, stored as its first block; the second block is
/// the reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palindrome(Vec<Letter>);

impl Palindrome {
    pub fn new(half: Vec<Letter>) -> Self {
        Palindrome(half)
    }

    pub fn first(&self) -> &[Letter] {
        &self.0
    }

    pub fn second(&self) -> Vec<Letter> {
        self.0.iter().rev().copied().collect()
    }
}

/// A fan of a `G_d` construction: two letter-disjoint palindromes, either of
/// which may be empty. Fans of `X_s` use only `first`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub first: Palindrome,
    pub second: Palindrome,
}

impl Fan {
    /// The fan's three blocks; the middle one joins the two palindromes.
    pub fn blocks(&self) -> Result<Vec<Block>> {
        join_palindromes(&[self.first.clone(), self.second.clone()])
    }
}

/// Concatenates palindromes, merging each second half with the following
/// first half into one block. Fails if the merged halves share a letter.
pub fn join_palindromes(pals: &[Palindrome]) -> Result<Vec<Block>> {
    let mut blocks = Vec::with_capacity(pals.len() + 1);
    let mut carry: Vec<Letter> = Vec::new();
    for p in pals {
        let mut merged = std::mem::take(&mut carry);
        merged.extend_from_slice(p.first());
        blocks.push(Block::new(merged).map_err(|e| invalid(format!("touching halves overlap: {e}")))?);
        carry = p.second();
    }
    if !pals.is_empty() {
        blocks.push(Block::from_vec_unchecked(carry));
    }
    Ok(blocks)
}

/// A sequence with a special/regular flag per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSequence {
    pub seq: Sequence,
    pub special: Vec<bool>,
}

impl AnnotatedSequence {
    pub fn new(seq: Sequence, special: Vec<bool>) -> Result<Self> {
        if seq.block_count() != special.len() {
            return Err(invalid(format!(
                "{} flags for {} blocks",
                special.len(),
                seq.block_count()
            )));
        }
        Ok(AnnotatedSequence { seq, special })
    }

    pub fn special_count(&self) -> usize {
        self.special.iter().filter(|&&s| s).count()
    }

    pub fn special_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.special
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for AnnotatedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_blocks(f, self.seq.blocks(), |i| self.special[i])
    }
}

/// `t` letter-disjoint copies of `seq`, concatenated and canonically named.
pub fn concat_disjoint(seq: &Sequence, t: usize) -> Sequence {
    assert!(t >= 1, "need at least one copy");
    let base = canonicalize(seq);
    let n = base.letter_count() as Letter;
    let mut blocks = Vec::with_capacity(base.block_count() * t);
    for c in 0..t as Letter {
        blocks.extend(base.map_letters(|x| x + c * n).into_blocks());
    }
    Sequence::new(blocks)
}

/// One named pass/fail line of a structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckLine>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks every structural property `G_d(m)` must have, including the sizes
/// predicted by the recurrences.
pub fn verify_annotated(aseq: &AnnotatedSequence, d: usize, m: usize) -> Report {
    let mut report = Report { checks: Vec::new() };
    let seq = &aseq.seq;
    let flags = &aseq.special;
    let nblocks = seq.block_count();
    if flags.len() != nblocks {
        report.push("flags", false, format!("{} flags for {nblocks} blocks", flags.len()));
        return report;
    }
    let profile = occurrence_profile(seq);

    // block numbers in the profile are 1-based
    let endpoints_special = profile.letters().all(|x| {
        let b = profile.blocks_of(x);
        flags[b[0] - 1] && flags[b[b.len() - 1] - 1]
    });
    report.push(
        "first-last-special",
        endpoints_special,
        "every letter starts and ends in a special block",
    );

    let mut only_endpoints = true;
    for x in profile.letters() {
        let b = profile.blocks_of(x);
        for &blk in &b[1..b.len().saturating_sub(1)] {
            if flags[blk - 1] {
                only_endpoints = false;
            }
        }
    }
    report.push(
        "special-only-endpoints",
        only_endpoints,
        "special blocks hold only first and last occurrences",
    );

    let flanked = (0..nblocks)
        .filter(|&i| flags[i])
        .all(|i| i > 0 && i + 1 < nblocks && !flags[i - 1] && !flags[i + 1]);
    let no_sandwich = (1..nblocks.saturating_sub(1))
        .filter(|&i| !flags[i])
        .all(|i| !(flags[i - 1] && flags[i + 1]));
    report.push(
        "flanking",
        flanked && no_sandwich,
        format!("specials flanked by regular blocks: {flanked}; no regular block between two specials: {no_sandwich}"),
    );

    let widths_ok = seq
        .blocks()
        .iter()
        .zip(flags)
        .filter(|(_, &s)| s)
        .all(|(b, _)| b.len() == m);
    report.push("special-width", widths_ok, format!("every special block has {m} letters"));

    let occ = 2 * d + 2;
    report.push(
        "occurrences",
        profile.all_exactly(occ),
        format!("every letter occurs {occ} times"),
    );

    report.push("avoids-ababa", avoids_alternation(seq, 5), "no alternation of length 5");

    let mut rec = Recurrences::new(DEFAULT_BIT_BUDGET);
    match rec.cell(d as u32, m as u32) {
        None => report.push("sizes", false, "recurrence values overflow"),
        Some(v) => {
            let cmp = |name: &'static str, got: usize, want: &BigUint, report: &mut Report| {
                report.push(name, BigUint::from(got) == *want, format!("{got} (expected {want})"));
            };
            cmp("special-count", aseq.special_count(), &v.special, &mut report);
            cmp("block-count", nblocks, &v.blocks, &mut report);
            cmp("length", seq.len(), &v.length, &mut report);
            cmp("letter-count", profile.letter_count(), &v.letters, &mut report);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::avoids_alternation;

    #[test]
    fn palindromes_merge() {
        let blocks = join_palindromes(&[Palindrome::new(vec![0, 1]), Palindrome::new(vec![2])]).unwrap();
        let s = Sequence::new(blocks);
        assert_eq!(s.to_string(), "0 1 | 1 0 2 | 2");
        assert!(join_palindromes(&[Palindrome::new(vec![0]), Palindrome::new(vec![0])]).is_err());
    }

    #[test]
    fn concat_copies() {
        let x = build_xs(2, 3).unwrap();
        assert_eq!(concat_disjoint(&x, 1), x);
        let c = concat_disjoint(&x, 2);
        assert_eq!(c.block_count(), 6);
        assert_eq!(c.letter_count(), 4);
        assert!(avoids_alternation(&c, 3));
    }

    #[test]
    fn verify_g_and_negative_cases() {
        let g = build_g(2, 2).unwrap();
        let r = verify_annotated(&g, 2, 2);
        assert!(r.passed(), "{r}");

        // drop one occurrence of a letter from a regular block
        let mut short = g.clone();
        let (i, x) = short
            .seq
            .blocks()
            .iter()
            .enumerate()
            .find(|(i, b)| !short.special[*i] && !b.is_empty())
            .map(|(i, b)| (i, b.letters()[0]))
            .unwrap();
        let kept: Vec<Letter> = short.seq.blocks()[i].letters().iter().copied().filter(|&y| y != x).collect();
        short.seq.blocks_mut()[i] = Block::new(kept).unwrap();
        let r = verify_annotated(&short, 2, 2);
        assert!(!r.check("occurrences").unwrap().passed);

        let mut flipped = g.clone();
        let first_special = flipped.special_indices().next().unwrap();
        flipped.special[first_special - 1] = true;
        let r = verify_annotated(&flipped, 2, 2);
        assert!(!r.check("flanking").unwrap().passed);
    }
}
