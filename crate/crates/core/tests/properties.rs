use ds_core::chains::{
    enumerate_chains, enumerate_tuples, eta_exact, stab_incidence, stabs, zeta_exact, ChainMultiset,
    IntervalChain, SolverLimits, StabTuple,
};
use ds_core::constructions::{build_xs, concat_disjoint};
use ds_core::seq::{
    avoids_alternation, canonicalize, contains_formation, formation_multiplicity,
    max_alternation, max_alternation_pair, Letter, Sequence,
};
use ds_core::text::{format_chains, format_sequence, parse_chains, parse_sequence};
use ds_core::transforms::{chains_to_seq, seq_to_chains, LabeledChainCollection};
use proptest::prelude::*;

/// Sequences of up to `max_blocks` blocks over `alphabet` letters; repeats
/// inside a block are dropped.
fn sequences(alphabet: u32, max_blocks: usize, max_width: usize) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(prop::collection::vec(0..alphabet, 0..=max_width), 0..=max_blocks).prop_map(
        |blocks| {
            let blocks: Vec<Vec<Letter>> = blocks
                .into_iter()
                .map(|b| {
                    let mut seen = Vec::new();
                    for x in b {
                        if !seen.contains(&x) {
                            seen.push(x);
                        }
                    }
                    seen
                })
                .collect();
            Sequence::from_blocks(blocks).unwrap()
        },
    )
}

/// `(k, seq)` where every letter of `seq` occurs at least `k + 1` times.
fn dense_sequences() -> impl Strategy<Value = (usize, Sequence)> {
    (1usize..3)
        .prop_flat_map(|k| (Just(k), (k + 1)..=7usize))
        .prop_flat_map(|(k, nblocks)| {
            let letter = prop::sample::subsequence((0..nblocks).collect::<Vec<_>>(), (k + 1)..=(k + 2).min(nblocks));
            (Just(k), Just(nblocks), prop::collection::vec((letter, any::<u64>()), 1..=5))
        })
        .prop_map(|(k, nblocks, letters)| {
            let mut blocks: Vec<Vec<(u64, Letter)>> = vec![Vec::new(); nblocks];
            for (x, (at, salt)) in letters.into_iter().enumerate() {
                for b in at {
                    // the salt scatters letters inside a block
                    let key = salt.rotate_left(7 * b as u32) ^ (b as u64);
                    blocks[b].push((key, x as Letter));
                }
            }
            let blocks: Vec<Vec<Letter>> = blocks
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b.into_iter().map(|(_, x)| x).collect::<Vec<Letter>>()
                })
                .collect();
            (k, Sequence::from_blocks(blocks).unwrap())
        })
}

fn chain_on(m: u32, k: usize) -> impl Strategy<Value = IntervalChain> {
    let all = enumerate_chains(m, k);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// Labeled collections with `m <= 8`, `k <= 4` and at most 6 chains.
fn collections() -> impl Strategy<Value = LabeledChainCollection> {
    (1u32..=8)
        .prop_flat_map(|m| (Just(m), 1..=(m as usize).min(4)))
        .prop_flat_map(|(m, k)| {
            (
                Just(m),
                Just(k),
                prop::collection::vec(chain_on(m, k), 0..=6),
                prop::collection::hash_set(0u32..40, 6),
            )
        })
        .prop_map(|(m, k, chains, labels)| {
            let mut labels: Vec<u32> = labels.into_iter().collect();
            labels.sort_unstable();
            let entries = labels.into_iter().zip(chains).collect();
            LabeledChainCollection::new(m, k, entries).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonicalize_is_idempotent(seq in sequences(6, 8, 4)) {
        let c = canonicalize(&seq);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(c.block_count(), seq.block_count());
        prop_assert_eq!(c.len(), seq.len());
        let mut letters = c.distinct_letters();
        letters.sort_unstable();
        prop_assert_eq!(letters, (0..c.letter_count() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn avoidance_is_monotone_in_length(seq in sequences(5, 8, 3), s in 2usize..8) {
        if avoids_alternation(&seq, s) {
            prop_assert!(avoids_alternation(&seq, s + 1));
        }
        prop_assert_eq!(avoids_alternation(&seq, s), max_alternation(&seq) < s);
    }

    #[test]
    fn alternation_is_symmetric(seq in sequences(4, 8, 3)) {
        let letters = seq.distinct_letters();
        for &x in &letters {
            for &y in &letters {
                if x != y {
                    prop_assert_eq!(max_alternation_pair(&seq, x, y), max_alternation_pair(&seq, y, x));
                }
            }
        }
    }

    #[test]
    fn formations_are_monotone(seq in sequences(5, 8, 4), r in 1usize..4, s in 1usize..5) {
        if contains_formation(&seq, r, s) {
            if s >= 2 {
                prop_assert!(contains_formation(&seq, r, s - 1));
            }
            if r >= 2 {
                prop_assert!(contains_formation(&seq, r - 1, s));
                // an (r, s)-formation holds an alternation of length s + 1
                prop_assert!(!avoids_alternation(&seq, s + 1));
            }
        }
    }

    #[test]
    fn multiplicity_drops_with_more_letters(seq in sequences(4, 8, 4)) {
        let letters = seq.distinct_letters();
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                let pair = formation_multiplicity(&seq, &[letters[i], letters[j]]);
                prop_assert!(pair <= formation_multiplicity(&seq, &[letters[i]]));
            }
        }
    }

    #[test]
    fn sequence_text_round_trip(seq in sequences(12, 8, 4)) {
        // a lone empty block prints like the empty sequence
        prop_assume!(!(seq.block_count() == 1 && seq.is_empty()));
        let text = format_sequence(&seq);
        prop_assert_eq!(parse_sequence(&text).unwrap(), seq.clone(), "{}", text);
    }

    #[test]
    fn chain_text_round_trip(m in 1u32..7, k in 1usize..4, picks in prop::collection::vec((0usize..100, 1usize..4), 0..6)) {
        prop_assume!(k <= m as usize);
        let all = enumerate_chains(m, k);
        let mut ms = ChainMultiset::new(m, k);
        for (i, n) in picks {
            ms.add(all[i % all.len()].clone(), n).unwrap();
        }
        prop_assert_eq!(parse_chains(&format_chains(&ms)).unwrap(), ms);
    }

    #[test]
    fn round_trip_through_sequences(coll in collections()) {
        let seq = chains_to_seq(&coll);
        prop_assert_eq!(seq.block_count(), coll.domain() as usize + 1);
        let profile = ds_core::seq::occurrence_profile(&seq);
        prop_assert!(profile.all_exactly(coll.order() + 1));
        prop_assert_eq!(seq_to_chains(&seq, coll.order()).unwrap(), coll.clone());
        let c = canonicalize(&seq);
        let mut letters = c.distinct_letters();
        letters.sort_unstable();
        prop_assert_eq!(letters, (0..coll.len() as u32).collect::<Vec<_>>());
    }

    /// No `r` chains sharing a stabbing s-tuple means no `(r, s + 1)`-formation.
    #[test]
    fn unstabbed_collections_give_formation_free_sequences(coll in collections(), r in 2usize..4, s in 1usize..4) {
        prop_assume!(s <= coll.order());
        let ms = coll.multiset();
        if ms.max_stabbed_load(s) < r {
            prop_assert!(!contains_formation(&chains_to_seq(&coll), r, s + 1));
        }
    }

    /// A sequence without `(r, s + 1)`-formations has no `r` chains sharing a
    /// stabbing s-tuple.
    #[test]
    fn formation_free_sequences_give_unstabbed_chains((k, seq) in dense_sequences(), r in 2usize..4, s in 1usize..3) {
        prop_assume!(s <= k);
        prop_assume!(!contains_formation(&seq, r, s + 1));
        let coll = seq_to_chains(&seq, k).unwrap();
        prop_assert!(coll.multiset().max_stabbed_load(s) < r);
    }

    #[test]
    fn disjoint_copies_keep_avoidance(s in 2usize..6, extra in 1usize..4, t in 1usize..4) {
        let x = build_xs(s, s + extra).unwrap();
        let c = concat_disjoint(&x, t);
        prop_assert!(avoids_alternation(&c, s + 1));
        prop_assert_eq!(c.letter_count(), t * x.letter_count());
    }

    #[test]
    fn interval_lookup_agrees_with_intervals(m in 1u32..9, k in 1usize..5, i in 0usize..1000) {
        prop_assume!(k <= m as usize);
        let all = enumerate_chains(m, k);
        let c = &all[i % all.len()];
        for p in 1..=m {
            let direct = c.intervals().position(|(lo, hi)| lo <= p && p <= hi).map(|j| j + 1);
            prop_assert_eq!(c.interval_of(p), direct);
        }
    }
}

fn reflect_tuple(t: &StabTuple, m: u32) -> StabTuple {
    let mut e: Vec<u32> = t.elements().iter().map(|&p| m + 1 - p).collect();
    e.sort_unstable();
    StabTuple::new(e).unwrap()
}

#[test]
fn incidence_is_symmetric_under_reflection() {
    for m in 1..=6u32 {
        for k in 1..=m as usize {
            for s in 1..=k {
                let inc = stab_incidence(m, s, k, usize::MAX).unwrap();
                for (ti, t) in inc.tuples.iter().enumerate() {
                    let rt = reflect_tuple(t, m);
                    let rj = inc.tuples.iter().position(|u| *u == rt).unwrap();
                    assert_eq!(inc.by_tuple[ti].len(), inc.by_tuple[rj].len());
                }
            }
        }
    }
    let tuples = enumerate_tuples(2, 1);
    let chains = enumerate_chains(2, 1);
    let hits: Vec<Vec<String>> = tuples
        .iter()
        .map(|t| chains.iter().filter(|c| stabs(t, c)).map(|c| c.to_string()).collect())
        .collect();
    assert_eq!(hits, vec![vec!["[1,1]", "[1,2]"], vec!["[1,2]", "[2,2]"]]);
}

#[test]
fn extremal_values_are_monotone_in_m() {
    let limits = SolverLimits::default();
    for k in 1..=3usize {
        for s in 1..=k {
            let mut prev_z = 0;
            let mut prev_e = 0;
            for m in k as u32..=7 {
                let z = zeta_exact(s, k, m, &limits).unwrap().value.finite().unwrap();
                let e = eta_exact(2, s, k, m, &limits).unwrap().value.finite().unwrap();
                assert!(z >= prev_z && e >= prev_e, "s={s} k={k} m={m}");
                assert!(z >= e, "zeta below eta at s={s} k={k} m={m}");
                assert_eq!(eta_exact(1, s, k, m, &limits).unwrap().value.finite(), Some(0));
                prev_z = z;
                prev_e = e;
            }
        }
    }
}
