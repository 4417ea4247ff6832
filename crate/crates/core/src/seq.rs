//! Block-structured sequences and the avoidance predicates everything else is
//! checked against.
//!
//! A [`Sequence`] is an ordered list of [`Block`]s, each an ordered list of
//! pairwise distinct letters. Blocks may be empty and still count toward the
//! block total. Alternation length counts symbols: `a b a b a` is an
//! alternation of length 5, and a sequence avoids alternations of length `s`
//! when every pair of letters alternates at most `s - 1` times.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Opaque letter name. After [`canonicalize`] letters are `0..n` in order of
/// first occurrence.
pub type Letter = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Block(Vec<Letter>);

impl Block {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let mut sorted = letters.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedLetter(w[0]));
        }
        Ok(Block(letters))
    }

    pub fn empty() -> Self {
        Block(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Letter) -> bool {
        self.0.contains(&x)
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(Block::new(letters.clone()).is_ok());
        Block(letters)
    }

    pub(crate) fn push(&mut self, x: Letter) {
        debug_assert!(!self.contains(x));
        self.0.push(x);
    }

    pub(crate) fn push_front(&mut self, x: Letter) {
        debug_assert!(!self.contains(x));
        self.0.insert(0, x);
    }

    pub(crate) fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Block {
        Block(self.0.iter().map(|&x| f(x)).collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Sequence {
    blocks: Vec<Block>,
}

impl Sequence {
    pub fn new(blocks: Vec<Block>) -> Self {
        Sequence { blocks }
    }

    /// Builds a sequence from raw block contents, rejecting repeated letters
    /// inside a block.
    pub fn from_blocks<I>(blocks: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<Vec<Letter>>,
    {
        let blocks = blocks
            .into_iter()
            .map(|b| Block::new(b.into()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence { blocks })
    }

    /// One block per letter.
    pub fn singletons(letters: &[Letter]) -> Self {
        Sequence {
            blocks: letters.iter().map(|&x| Block(vec![x])).collect(),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    #[cfg(test)]
    pub(crate) fn blocks_mut(&mut self) -> &mut Vec<Block> {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total number of letter occurrences.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flatten(&self) -> Vec<Letter> {
        self.blocks.iter().flat_map(|b| b.0.iter().copied()).collect()
    }

    /// Distinct letters in increasing order.
    pub fn distinct_letters(&self) -> Vec<Letter> {
        let mut v = self.flatten();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn letter_count(&self) -> usize {
        self.distinct_letters().len()
    }

    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Sequence {
        Sequence {
            blocks: self.blocks.iter().map(|b| b.map_letters(&f)).collect(),
        }
    }

    /// Flattened positions of every letter, keyed by letter.
    pub fn positions(&self) -> HashMap<Letter, Vec<usize>> {
        let mut map: HashMap<Letter, Vec<usize>> = HashMap::new();
        for (i, x) in self.flatten().into_iter().enumerate() {
            map.entry(x).or_default().push(i);
        }
        map
    }
}

impl fmt::Display for Sequence {
    /// Writes the `|`-separated text form, e.g. `0 | 0 1 | 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_blocks(f, &self.blocks, |_| false)
    }
}

/// Per-letter occurrence counts and the 1-based blocks holding them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccurrenceProfile {
    blocks: BTreeMap<Letter, Vec<usize>>,
}

impl OccurrenceProfile {
    pub fn count(&self, x: Letter) -> usize {
        self.blocks.get(&x).map_or(0, Vec::len)
    }

    pub fn blocks_of(&self, x: Letter) -> &[usize] {
        self.blocks.get(&x).map_or(&[], Vec::as_slice)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.blocks.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn letter_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    pub fn min_count(&self) -> Option<usize> {
        self.blocks.values().map(Vec::len).min()
    }

    pub fn all_exactly(&self, k: usize) -> bool {
        self.blocks.values().all(|v| v.len() == k)
    }
}

pub fn occurrence_profile(seq: &Sequence) -> OccurrenceProfile {
    let mut blocks: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
    for (i, b) in seq.blocks().iter().enumerate() {
        for &x in b.letters() {
            blocks.entry(x).or_default().push(i + 1);
        }
    }
    OccurrenceProfile { blocks }
}

/// True iff every window of `r` consecutive letters of the flattened sequence
/// is pairwise distinct.
pub fn is_r_sparse(seq: &Sequence, r: usize) -> bool {
    let mut last: HashMap<Letter, usize> = HashMap::new();
    for (i, x) in seq.flatten().into_iter().enumerate() {
        if let Some(prev) = last.insert(x, i) {
            if i - prev < r {
                return false;
            }
        }
    }
    true
}

/// Alternation length of two sorted position lists: one plus the number of
/// switches in the merged string, or 0 if both are empty.
pub(crate) fn alternation_of(px: &[usize], py: &[usize]) -> usize {
    alternation_runs(px, py).0
}

/// Alternation length and whether the final run belongs to `px`.
pub(crate) fn alternation_runs(px: &[usize], py: &[usize]) -> (usize, Option<bool>) {
    let (mut i, mut j) = (0, 0);
    let mut last: Option<bool> = None;
    let mut len = 0;
    while i < px.len() || j < py.len() {
        let take_x = j == py.len() || (i < px.len() && px[i] < py[j]);
        if take_x {
            i += 1;
        } else {
            j += 1;
        }
        if last != Some(take_x) {
            len += 1;
            last = Some(take_x);
        }
    }
    (len, last)
}

pub fn max_alternation_pair(seq: &Sequence, x: Letter, y: Letter) -> usize {
    assert_ne!(x, y, "alternation needs two distinct letters");
    let pos = seq.positions();
    let empty = Vec::new();
    alternation_of(
        pos.get(&x).unwrap_or(&empty),
        pos.get(&y).unwrap_or(&empty),
    )
}

/// Calls `f(alternation_length)` for every unordered pair of distinct letters
/// whose spans overlap; pairs with disjoint spans alternate exactly twice.
/// Stops early when `f` returns false.
fn for_overlapping_pairs(seq: &Sequence, mut f: impl FnMut(usize) -> bool) -> bool {
    let pos = seq.positions();
    let mut lists: Vec<&Vec<usize>> = pos.values().collect();
    lists.sort_unstable_by_key(|p| p[0]);
    for (i, px) in lists.iter().enumerate() {
        let last_x = *px.last().unwrap();
        for py in &lists[i + 1..] {
            if py[0] > last_x {
                break;
            }
            if !f(alternation_of(px, py)) {
                return false;
            }
        }
    }
    true
}

/// Longest alternation over all pairs of distinct letters (0 or 1 when fewer
/// than two letters occur).
pub fn max_alternation(seq: &Sequence) -> usize {
    let n = seq.letter_count();
    if n == 0 {
        return 0;
    }
    let mut best = if n >= 2 { 2 } else { 1 };
    for_overlapping_pairs(seq, |a| {
        best = best.max(a);
        true
    });
    best
}

/// True iff no two distinct letters form an alternation of length `s`.
pub fn avoids_alternation(seq: &Sequence, s: usize) -> bool {
    if s <= 2 {
        // any two distinct letters already alternate twice
        return seq.letter_count() <= 1;
    }
    for_overlapping_pairs(seq, |a| a < s)
}

/// Greedy segment count over a restricted string: a segment closes as soon as
/// all `r` letters have been seen since the previous close.
pub(crate) fn greedy_segments(restricted: impl Iterator<Item = usize>, r: usize) -> usize {
    greedy_open(restricted, r).0
}

/// Greedy segment count plus the letters seen in the unfinished segment.
pub(crate) fn greedy_open(restricted: impl Iterator<Item = usize>, r: usize) -> (usize, Vec<bool>) {
    let mut seen = vec![false; r];
    let mut fresh = 0;
    let mut closed = 0;
    for idx in restricted {
        if !seen[idx] {
            seen[idx] = true;
            fresh += 1;
            if fresh == r {
                closed += 1;
                fresh = 0;
                seen.iter_mut().for_each(|s| *s = false);
            }
        }
    }
    (closed, seen)
}

/// Merges the position lists of a letter set into one restricted string of
/// indices into that set.
pub(crate) fn restricted_string(lists: &[&[usize]]) -> Vec<usize> {
    let mut tagged: Vec<(usize, usize)> = lists
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().map(move |&q| (q, i)))
        .collect();
    tagged.sort_unstable();
    tagged.into_iter().map(|(_, i)| i).collect()
}

/// Largest `s` such that `seq` contains an `(r, s)`-formation on exactly this
/// letter set.
pub fn formation_multiplicity(seq: &Sequence, letters: &[Letter]) -> usize {
    let pos = seq.positions();
    let mut lists = Vec::with_capacity(letters.len());
    for x in letters {
        match pos.get(x) {
            Some(p) => lists.push(p.as_slice()),
            None => return 0,
        }
    }
    if lists.is_empty() {
        return 0;
    }
    greedy_segments(restricted_string(&lists).into_iter(), lists.len())
}

/// True iff some `r`-subset of the letters carries an `(r, s)`-formation.
///
/// Formation multiplicity can only drop when letters are added to the set, so
/// subsets are grown depth-first and abandoned once they fall below `s`.
pub fn contains_formation(seq: &Sequence, r: usize, s: usize) -> bool {
    if r == 0 || s == 0 {
        return true;
    }
    let pos = seq.positions();
    let mut cands: Vec<(Letter, &[usize])> = pos
        .iter()
        .filter(|(_, p)| p.len() >= s)
        .map(|(&x, p)| (x, p.as_slice()))
        .collect();
    cands.sort_unstable_by_key(|&(x, _)| x);
    let lists: Vec<&[usize]> = cands.into_iter().map(|(_, p)| p).collect();
    let mut chosen = Vec::with_capacity(r);
    grow_formation(&lists, 0, &mut chosen, r, s)
}

fn grow_formation<'a>(
    lists: &[&'a [usize]],
    start: usize,
    chosen: &mut Vec<&'a [usize]>,
    r: usize,
    s: usize,
) -> bool {
    if chosen.len() == r {
        return true;
    }
    if lists.len() - start < r - chosen.len() {
        return false;
    }
    for i in start..lists.len() {
        chosen.push(lists[i]);
        let mult = greedy_segments(restricted_string(chosen).into_iter(), chosen.len());
        if mult >= s && grow_formation(lists, i + 1, chosen, r, s) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Renames letters to `0, 1, 2, ...` by order of first occurrence.
pub fn canonicalize(seq: &Sequence) -> Sequence {
    let mut names: HashMap<Letter, Letter> = HashMap::new();
    for x in seq.flatten() {
        let next = names.len() as Letter;
        names.entry(x).or_insert(next);
    }
    seq.map_letters(|x| names[&x])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(blocks: &[&[Letter]]) -> Sequence {
        Sequence::from_blocks(blocks.iter().map(|b| b.to_vec())).unwrap()
    }

    #[test]
    fn block_rejects_repeats() {
        assert_eq!(Block::new(vec![1, 2, 1]), Err(Error::RepeatedLetter(1)));
        assert!(Block::new(vec![]).is_ok());
    }

    #[test]
    fn profile_counts_blocks() {
        let p = occurrence_profile(&s(&[&[0], &[0, 1], &[1]]));
        assert_eq!(p.count(0), 2);
        assert_eq!(p.blocks_of(0), &[1, 2]);
        assert_eq!(p.blocks_of(1), &[2, 3]);
        assert_eq!(p.total(), 4);
        assert!(occurrence_profile(&Sequence::default()).is_empty());
    }

    #[test]
    fn sparsity() {
        let abab = Sequence::singletons(&[0, 1, 0, 1]);
        assert!(is_r_sparse(&abab, 2));
        assert!(!is_r_sparse(&abab, 3));
        assert!(is_r_sparse(&abab, 1));
        assert!(!is_r_sparse(&Sequence::singletons(&[0, 0]), 2));
    }

    #[test]
    fn alternation_pairs() {
        let ababa = Sequence::singletons(&[0, 1, 0, 1, 0]);
        assert_eq!(max_alternation_pair(&ababa, 0, 1), 5);
        assert_eq!(max_alternation_pair(&ababa, 1, 0), 5);
        let aabb = Sequence::singletons(&[0, 0, 1, 1]);
        assert_eq!(max_alternation_pair(&aabb, 0, 1), 2);
        assert_eq!(max_alternation_pair(&aabb, 0, 7), 1);
        assert_eq!(max_alternation_pair(&aabb, 8, 7), 0);
    }

    #[test]
    fn avoidance() {
        let ababa = Sequence::singletons(&[0, 1, 0, 1, 0]);
        assert!(!avoids_alternation(&ababa, 5));
        assert!(avoids_alternation(&ababa, 6));
        let aabb = Sequence::singletons(&[0, 0, 1, 1]);
        assert!(avoids_alternation(&aabb, 3));
        assert!(!avoids_alternation(&aabb, 2));
        assert!(avoids_alternation(&Sequence::singletons(&[4, 4]), 2));
        assert_eq!(max_alternation(&ababa), 5);
        assert_eq!(max_alternation(&aabb), 2);
    }

    #[test]
    fn formations() {
        // abcddcbaadbc
        let f = Sequence::singletons(&[0, 1, 2, 3, 3, 2, 1, 0, 0, 3, 1, 2]);
        assert_eq!(formation_multiplicity(&f, &[0, 1, 2, 3]), 3);
        assert!(contains_formation(&f, 4, 3));
        assert!(!contains_formation(&f, 4, 4));
        let abab = Sequence::singletons(&[0, 1, 0, 1]);
        assert_eq!(formation_multiplicity(&abab, &[0, 1]), 2);
        let aabb = Sequence::singletons(&[0, 0, 1, 1]);
        assert_eq!(formation_multiplicity(&aabb, &[0, 1]), 1);
        assert_eq!(formation_multiplicity(&aabb, &[0, 9]), 0);
        assert!(contains_formation(&aabb, 1, 1));
        assert!(!contains_formation(&Sequence::default(), 1, 1));
        assert!(!contains_formation(&Sequence::new(vec![Block::empty()]), 1, 1));
    }

    #[test]
    fn canonical_names() {
        let q = s(&[&[17], &[17, 26], &[26]]);
        let c = canonicalize(&q);
        assert_eq!(c, s(&[&[0], &[0, 1], &[1]]));
        assert_eq!(canonicalize(&c), c);
    }
}
