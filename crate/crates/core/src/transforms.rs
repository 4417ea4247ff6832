//! The two maps between sequences on `m + 1` blocks whose letters occur at
//! least `k + 1` times and labeled k-chain collections on `[1, m]`.
//!
//! A letter with first `k + 1` occurrences in blocks `a_0 < ... < a_k` becomes
//! the chain with intervals `[a_0, a_1 - 1] [a_1, a_2 - 1] ... [a_{k-1}, a_k - 1]`,
//! i.e. breakpoints `(a_0, a_1 - 1, ..., a_k - 1)`. Conversely a chain with
//! breakpoints `b_0, ..., b_k` puts its letter in blocks `b_0, b_1 + 1, ...,
//! b_k + 1`. A set of `r` letters forms an `(r, s + 1)`-formation exactly when
//! their chains share a stabbing s-tuple, which makes the extremal functions
//! `F(r, s + 1, k + 1, m + 1)` and `eta(r, s, k, m)` equal.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::chains::{eta_exact, ChainMultiset, ExtremalValue, IntervalChain, SolverLimits};
use crate::error::{invalid, Result};
use crate::oracle::{max_letters_formation, OracleResult, SearchLimits};
use crate::seq::{occurrence_profile, Block, Letter, Sequence};

/// Chains on a common domain and order, each tagged with a distinct letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChainCollection {
    m: u32,
    k: usize,
    // sorted by label
    entries: Vec<(Letter, IntervalChain)>,
}

impl LabeledChainCollection {
    pub fn new(m: u32, k: usize, entries: Vec<(Letter, IntervalChain)>) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(invalid(format!("need m, k >= 1, got m={m} k={k}")));
        }
        let mut seen = HashSet::new();
        for (label, c) in &entries {
            if !seen.insert(*label) {
                return Err(invalid(format!("label {label} used twice")));
            }
            if c.domain() != m || c.order() != k {
                return Err(invalid(format!(
                    "chain {c} of letter {label} does not match m={m} k={k}"
                )));
            }
        }
        let mut entries = entries;
        entries.sort_by_key(|(l, _)| *l);
        Ok(LabeledChainCollection { m, k, entries })
    }

    pub fn domain(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[(Letter, IntervalChain)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The underlying multiset, forgetting labels.
    pub fn multiset(&self) -> ChainMultiset {
        let mut ms = ChainMultiset::new(self.m, self.k);
        for (_, c) in &self.entries {
            ms.add(c.clone(), 1).expect("uniform domain and order");
        }
        ms
    }

    /// Labels a multiset `0, 1, ...` in entry order.
    pub fn from_multiset(ms: &ChainMultiset) -> Self {
        let mut entries = Vec::with_capacity(ms.total());
        for (c, n) in ms.entries() {
            for _ in 0..n {
                entries.push((entries.len() as Letter, c.clone()));
            }
        }
        LabeledChainCollection {
            m: ms.domain(),
            k: ms.order(),
            entries,
        }
    }
}

/// One chain per letter, from the letter's first `k + 1` blocks. Later
/// occurrences are ignored.
pub fn seq_to_chains(seq: &Sequence, k: usize) -> Result<LabeledChainCollection> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let blocks = seq.block_count();
    if blocks <= k {
        return Err(invalid(format!(
            "{blocks} blocks cannot carry {k}-chains; need at least {}",
            k + 1
        )));
    }
    let m = (blocks - 1) as u32;
    let profile = occurrence_profile(seq);
    let mut entries = Vec::with_capacity(profile.letter_count());
    for x in profile.letters() {
        let b = profile.blocks_of(x);
        if b.len() < k + 1 {
            return Err(invalid(format!(
                "letter {x} occurs {} times, fewer than {}",
                b.len(),
                k + 1
            )));
        }
        let mut bps = Vec::with_capacity(k + 1);
        bps.push(b[0] as u32);
        bps.extend(b[1..=k].iter().map(|&a| a as u32 - 1));
        entries.push((x, IntervalChain::new(bps, m)?));
    }
    LabeledChainCollection::new(m, k, entries)
}

/// The sequence on `m + 1` blocks with each chain's letter in blocks
/// `b_0, b_1 + 1, ..., b_k + 1`. In each block, letters seen before come
/// first, most recently seen first; new letters follow in breakpoint order,
/// ties broken by label.
pub fn chains_to_seq(coll: &LabeledChainCollection) -> Sequence {
    let nblocks = coll.m as usize + 1;
    // letters starting in block i, and letters returning to it (1-based)
    let mut fresh: Vec<Vec<(&IntervalChain, Letter)>> = vec![Vec::new(); nblocks + 1];
    let mut again: Vec<Vec<Letter>> = vec![Vec::new(); nblocks + 1];
    for (label, c) in &coll.entries {
        let bp = c.breakpoints();
        fresh[bp[0] as usize].push((c, *label));
        for &b in &bp[1..] {
            again[b as usize + 1].push(*label);
        }
    }
    let mut last_pos: BTreeMap<Letter, usize> = BTreeMap::new();
    let mut pos = 0;
    let mut blocks = Vec::with_capacity(nblocks);
    for i in 1..=nblocks {
        let mut a = std::mem::take(&mut again[i]);
        a.sort_by_key(|x| std::cmp::Reverse(last_pos[x]));
        let mut b = std::mem::take(&mut fresh[i]);
        b.sort();
        let mut letters = a;
        letters.extend(b.into_iter().map(|(_, l)| l));
        for &x in &letters {
            last_pos.insert(x, pos);
            pos += 1;
        }
        blocks.push(Block::from_vec_unchecked(letters));
    }
    Sequence::new(blocks)
}

/// Both sides of `F(r, s + 1, k + 1, m + 1) = eta(r, s, k, m)` on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityReport {
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub m: usize,
    pub eta: ExtremalValue,
    pub formation: OracleResult,
}

impl EqualityReport {
    /// `Some(true)` when both sides are exact and agree, `Some(false)` on a
    /// counterexample, `None` when the oracle ran out of budget.
    pub fn agrees(&self) -> Option<bool> {
        let f = self.formation.value;
        self.formation.is_proven().then(|| match (f.finite(), self.eta.finite()) {
            (Some(a), Some(b)) => a == b,
            _ => f == self.eta,
        })
    }
}

impl fmt::Display for EqualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, s, k, m) = (self.r, self.s, self.k, self.m);
        let verdict = match self.agrees() {
            Some(true) => "equal",
            Some(false) => "COUNTEREXAMPLE",
            None => "unresolved",
        };
        let fv = if self.formation.is_proven() {
            self.formation.value.to_string()
        } else {
            format!("{} (budget exhausted)", self.formation.value)
        };
        write!(
            f,
            "eta({r},{s},{k},{m}) = {}; F({r},{},{},{}) = {fv}; {verdict}",
            self.eta,
            s + 1,
            k + 1,
            m + 1
        )
    }
}

/// Computes `eta(r, s, k, m)` with the chain solver and
/// `F(r, s + 1, k + 1, m + 1)` with the sequence oracle, independently.
pub fn check_equality_f_eta(
    r: usize,
    s: usize,
    k: usize,
    m: usize,
    solver: &SolverLimits,
    oracle: &SearchLimits,
) -> Result<EqualityReport> {
    if r == 0 || s == 0 || k == 0 || m == 0 {
        return Err(invalid(format!(
            "need r, s, k, m >= 1, got r={r} s={s} k={k} m={m}"
        )));
    }
    let eta = eta_exact(r, s, k, m as u32, solver)?.value;
    let formation = max_letters_formation(r, s + 1, k + 1, m + 1, oracle);
    Ok(EqualityReport {
        r,
        s,
        k,
        m,
        eta,
        formation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{contains_formation, Sequence};
    use crate::text::parse_sequence;

    fn chain(bps: &[u32], m: u32) -> IntervalChain {
        IntervalChain::new(bps.to_vec(), m).unwrap()
    }

    #[test]
    fn letter_to_chain() {
        let seq = parse_sequence("0 | | 0 | 0 |").unwrap();
        assert_eq!(seq.block_count(), 5);
        let c = seq_to_chains(&seq, 2).unwrap();
        assert_eq!(c.domain(), 4);
        assert_eq!(c.entries()[0].1.to_string(), "[1,2][3,3]");

        let tight = Sequence::singletons(&[0, 0, 0, 0]);
        let c = seq_to_chains(&tight, 3).unwrap();
        assert_eq!(c.entries()[0].1.to_string(), "[1,1][2,2][3,3]");
    }

    #[test]
    fn rejections() {
        let seq = parse_sequence("0 | 0 1 | 1").unwrap();
        assert!(seq_to_chains(&seq, 2).is_err());
        assert!(seq_to_chains(&Sequence::singletons(&[0, 0]), 2).is_err());
        let c = chain(&[1, 2], 3);
        assert!(LabeledChainCollection::new(3, 1, vec![(0, c.clone()), (0, c.clone())]).is_err());
        assert!(LabeledChainCollection::new(4, 1, vec![(0, c)]).is_err());
    }

    #[test]
    fn chain_to_letter() {
        let coll = LabeledChainCollection::new(3, 1, vec![(0, chain(&[2, 3], 3))]).unwrap();
        let seq = chains_to_seq(&coll);
        assert_eq!(seq.to_string(), "| 0 || 0");
    }

    #[test]
    fn singleton_chains_avoid_pairs() {
        let m = 5;
        let coll = LabeledChainCollection::new(
            m,
            1,
            (1..=m).map(|i| (i - 1, chain(&[i, i], m))).collect(),
        )
        .unwrap();
        let seq = chains_to_seq(&coll);
        assert_eq!(seq.block_count(), 6);
        assert!(!contains_formation(&seq, 2, 2));
        assert_eq!(seq_to_chains(&seq, 1).unwrap(), coll);
    }

    #[test]
    fn recency_order_in_blocks() {
        // 0 and 1 start together; 1 is placed later in block 1 and so comes
        // first when both come back in block 3
        let coll = LabeledChainCollection::new(
            2,
            1,
            vec![(0, chain(&[1, 2], 2)), (1, chain(&[1, 2], 2))],
        )
        .unwrap();
        assert_eq!(chains_to_seq(&coll).to_string(), "0 1 || 1 0");
    }

    #[test]
    fn small_equalities() {
        let limits = SolverLimits::default();
        let oracle = SearchLimits::default();
        for (r, s, k, m) in [(2, 1, 1, 3), (3, 1, 1, 3), (2, 1, 1, 2)] {
            let rep = check_equality_f_eta(r, s, k, m, &limits, &oracle).unwrap();
            assert_eq!(rep.agrees(), Some(true), "{rep}");
        }
    }
}
