//! The fan construction `X_s(m)`: `m` blocks, `C(m - ceil(s/2), floor(s/2))`
//! letters, each occurring `s` times, and no alternation of length `s + 1`.
//!
//! For even `s` there are `m - 1` fans, each a two-block palindrome, and one
//! letter for every set of `s/2` pairwise non-adjacent fans. Adjacent fans
//! share no letters, so the touching halves of neighbouring fans merge into a
//! single block. For odd `s` a final block holding every letter of
//! `X_{s-1}(m-1)` is appended.

use std::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::seq::{canonicalize, Block, Letter, Sequence};

use super::{join_palindromes, Palindrome};

pub fn build_xs(s: usize, m: usize) -> Result<Sequence> {
    if s < 2 || m < s + 1 {
        return Err(invalid(format!("X_s(m) needs s >= 2 and m >= s + 1, got s={s} m={m}")));
    }
    if s % 2 == 1 {
        let base = build_xs(s - 1, m - 1)?;
        return Ok(append_recency_block(base));
    }
    Ok(canonicalize(&even_fans(s / 2, m - 1)))
}

/// All `h`-subsets of `1..=fans` with no two consecutive members, in
/// lexicographic order.
fn spread_subsets(h: usize, fans: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, fans: usize, h: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == h {
            out.push(cur.clone());
            return;
        }
        for f in start..=fans {
            cur.push(f);
            rec(f + 2, fans, h, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, fans, h, &mut Vec::new(), &mut out);
    out
}

/// Order of two new letters in their first fan: the one whose tuple holds the
/// smallest fan of the symmetric difference comes first.
fn first_divergence(a: &[usize], b: &[usize]) -> Ordering {
    let only_a = a.iter().filter(|f| !b.contains(f)).min();
    let only_b = b.iter().filter(|f| !a.contains(f)).min();
    match (only_a, only_b) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => Ordering::Equal,
    }
}

fn even_fans(h: usize, fans: usize) -> Sequence {
    let tuples = spread_subsets(h, fans);
    // last flattened position of each letter so far
    let mut last_pos: Vec<Option<usize>> = vec![None; tuples.len()];
    let mut pos = 0;
    let mut pals = Vec::with_capacity(fans);
    for fan in 1..=fans {
        let mut seen: Vec<Letter> = Vec::new();
        let mut fresh: Vec<Letter> = Vec::new();
        for (id, t) in tuples.iter().enumerate() {
            if t.contains(&fan) {
                if last_pos[id].is_some() {
                    seen.push(id as Letter);
                } else {
                    fresh.push(id as Letter);
                }
            }
        }
        seen.sort_by_key(|&x| std::cmp::Reverse(last_pos[x as usize]));
        fresh.sort_by(|&a, &b| first_divergence(&tuples[a as usize], &tuples[b as usize]));
        let mut half = seen;
        half.extend(fresh);
        // the second half reverses the first
        let width = half.len();
        for (i, &x) in half.iter().enumerate() {
            last_pos[x as usize] = Some(pos + width + (width - 1 - i));
        }
        pos += 2 * width;
        pals.push(Palindrome::new(half));
    }
    Sequence::new(join_palindromes(&pals).expect("adjacent fans share no letters"))
}

/// Appends one block with every letter, most recent last occurrence first.
fn append_recency_block(base: Sequence) -> Sequence {
    let pos = base.positions();
    let mut letters = base.distinct_letters();
    letters.sort_by_key(|x| std::cmp::Reverse(*pos[x].last().unwrap()));
    let mut blocks = base.into_blocks();
    blocks.push(Block::from_vec_unchecked(letters));
    Sequence::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{avoids_alternation, occurrence_profile};

    #[test]
    fn smallest_cases_by_hand() {
        assert_eq!(build_xs(2, 3).unwrap().to_string(), "0 | 0 1 | 1");
        assert_eq!(build_xs(3, 4).unwrap().to_string(), "0 | 0 1 | 1 | 1 0");
        assert_eq!(build_xs(2, 4).unwrap().to_string(), "0 | 0 1 | 1 2 | 2");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_xs(1, 5).is_err());
        assert!(build_xs(4, 4).is_err());
    }

    #[test]
    fn x4_9() {
        let x = build_xs(4, 9).unwrap();
        assert_eq!(x.block_count(), 9);
        assert_eq!(x.letter_count(), 21);
        assert!(occurrence_profile(&x).all_exactly(4));
        assert!(avoids_alternation(&x, 5));
        assert!(!avoids_alternation(&x, 4));
    }

    #[test]
    fn spread_subset_count() {
        // C(fans - h + 1, h)
        assert_eq!(spread_subsets(2, 6).len(), 10);
        assert_eq!(spread_subsets(3, 5).len(), 1);
        assert_eq!(spread_subsets(1, 4).len(), 4);
    }
}
