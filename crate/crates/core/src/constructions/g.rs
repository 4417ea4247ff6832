//! The recursive family `G_d(m)`: every letter occurs `2d + 2` times, no two
//! letters alternate five times, and the blocks holding only first and last
//! occurrences (special blocks) carry `m` letters each.
//!
//! * `G_1(m)` is `m + 1` fans, each two letter-disjoint palindromes. There is
//!   one letter per pair of fans `i < j`; it fills the second palindrome of
//!   fan `i` and the first palindrome of fan `j`.
//! * `G_d(1)` for `d >= 2` is `2d + 2` singleton blocks of one letter between
//!   two empty blocks; the outer singletons are special.
//! * `G_d(m)` substitutes letter-disjoint copies of `G_d(m - 1)` for the
//!   special blocks of `G_{d-1}(S(d, m - 1))`, inserting each substituted
//!   letter twice next to the matching special block of its copy.

use crate::error::{invalid, Error, Result};
use crate::seq::{canonicalize, Block, Letter, Sequence};

use super::recurrence::Recurrences;
use super::{AnnotatedSequence, Fan, Palindrome};

/// Largest total length `build_g` will produce unless told otherwise.
pub const DEFAULT_MAX_LENGTH: u64 = 5_000_000;

pub fn build_g(d: usize, m: usize) -> Result<AnnotatedSequence> {
    build_g_with_budget(d, m, DEFAULT_MAX_LENGTH)
}

/// Builds `G_d(m)`, refusing up front when its length exceeds `max_length`.
pub fn build_g_with_budget(d: usize, m: usize, max_length: u64) -> Result<AnnotatedSequence> {
    if d == 0 || m == 0 {
        return Err(invalid(format!("G_d(m) needs d, m >= 1, got d={d} m={m}")));
    }
    let mut rec = Recurrences::new(64);
    let length = rec
        .cell(d as u32, m as u32)
        .map(|c| c.length)
        .and_then(|l| u64::try_from(l).ok());
    match length {
        Some(l) if l <= max_length => Ok(build(d, m)),
        _ => Err(Error::ResourceLimit(format!(
            "G_{d}({m}) is longer than {max_length}"
        ))),
    }
}

fn build(d: usize, m: usize) -> AnnotatedSequence {
    if d == 1 {
        return g1(m);
    }
    if m == 1 {
        return singleton_spine(d);
    }
    let inner = build(d, m - 1);
    let f = inner.special_count();
    let outer = build(d - 1, f);
    substitute(&outer, &inner)
}

fn g1(m: usize) -> AnnotatedSequence {
    let fans = m + 1;
    // letter id for the pair i < j (1-based fans)
    let id = |i: usize, j: usize| -> Letter { ((j - 1) * (j - 2) / 2 + (i - 1)) as Letter };
    let mut blocks = Vec::with_capacity(3 * fans);
    let mut special = Vec::with_capacity(3 * fans);
    for t in 1..=fans {
        // letters ending here, in reverse order of their first fan
        let first = Palindrome::new((1..t).rev().map(|i| id(i, t)).collect());
        // letters starting here, in order of their last fan
        let second = Palindrome::new((t + 1..=fans).map(|j| id(t, j)).collect());
        let fan = Fan { first, second };
        blocks.extend(fan.blocks().expect("disjoint palindromes"));
        special.extend([false, true, false]);
    }
    let seq = canonicalize(&Sequence::new(blocks));
    AnnotatedSequence::new(seq, special).expect("flags match blocks")
}

fn singleton_spine(d: usize) -> AnnotatedSequence {
    let copies = 2 * d + 2;
    let mut blocks = vec![Block::empty()];
    let mut special = vec![false];
    for i in 0..copies {
        blocks.push(Block::from_vec_unchecked(vec![0]));
        special.push(i == 0 || i == copies - 1);
    }
    blocks.push(Block::empty());
    special.push(false);
    AnnotatedSequence::new(Sequence::new(blocks), special).expect("flags match blocks")
}

/// Replaces the `i`-th special block of `outer` by the `i`-th copy of
/// `inner`. The `l`-th letter `a` of that special block goes in twice around
/// the copy's `l`-th special block: after it, as the block's last letter and
/// the next block's first, when the outer block holds `a`'s first occurrence;
/// before it, mirrored, when it holds `a`'s last occurrence.
fn substitute(outer: &AnnotatedSequence, inner: &AnnotatedSequence) -> AnnotatedSequence {
    let outer_letters = outer.seq.letter_count() as Letter;
    let inner_letters = inner.seq.letter_count() as Letter;
    let inner_special: Vec<usize> = inner.special_indices().collect();

    let (first, last) = first_last_blocks(&outer.seq);
    let mut blocks = Vec::new();
    let mut special = Vec::new();
    let mut copy = 0;
    for (j, block) in outer.seq.blocks().iter().enumerate() {
        if !outer.special[j] {
            blocks.push(block.clone());
            special.push(false);
            continue;
        }
        assert_eq!(block.len(), inner_special.len(), "special width mismatch");
        let offset = outer_letters + copy * inner_letters;
        let mut x: Vec<Block> = inner
            .seq
            .blocks()
            .iter()
            .map(|b| b.map_letters(|l| l + offset))
            .collect();
        for (l, &a) in block.letters().iter().enumerate() {
            let sb = inner_special[l];
            if first[a as usize] == j {
                x[sb].push(a);
                x[sb + 1].push_front(a);
            } else {
                debug_assert_eq!(last[a as usize], j);
                x[sb - 1].push(a);
                x[sb].push_front(a);
            }
        }
        blocks.extend(x);
        special.extend_from_slice(&inner.special);
        copy += 1;
    }
    let seq = canonicalize(&Sequence::new(blocks));
    AnnotatedSequence::new(seq, special).expect("flags match blocks")
}

/// First and last block index of every letter of a canonical sequence.
fn first_last_blocks(seq: &Sequence) -> (Vec<usize>, Vec<usize>) {
    let n = seq.letter_count();
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0; n];
    for (j, b) in seq.blocks().iter().enumerate() {
        for &x in b.letters() {
            let x = x as usize;
            first[x] = first[x].min(j);
            last[x] = j;
        }
    }
    (first, last)
}
