//! Interval chains, stabbing tuples, and exact solvers for the stabbing
//! minimum `zeta(s, k, m)` and the packing maximum `eta(r, s, k, m)`.
//!
//! A k-chain on `[1, m]` is stored by its breakpoints `a_0 <= a_1 < ... < a_k`
//! and stands for the intervals `[a_0, a_1] [a_1 + 1, a_2] ... [a_{k-1} + 1, a_k]`.
//! An s-tuple stabs a chain when its elements land in `s` pairwise different
//! intervals of the chain.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Value of an extremal function, with the degenerate cases carried as tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremalValue {
    Finite(u64),
    /// Forced to zero because fewer than `k` blocks (or points) exist.
    Zero,
    Infinite,
    Undefined,
}

impl ExtremalValue {
    /// Numeric value, with `Zero` reading as 0.
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtremalValue::Finite(v) => Some(v),
            ExtremalValue::Zero => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for ExtremalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalValue::Finite(v) => write!(f, "{v}"),
            ExtremalValue::Zero => write!(f, "0"),
            ExtremalValue::Infinite => write!(f, "inf"),
            ExtremalValue::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalChain {
    breakpoints: Vec<u32>,
    m: u32,
}

impl IntervalChain {
    pub fn new(breakpoints: Vec<u32>, m: u32) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("a chain needs at least two breakpoints"));
        }
        if breakpoints[0] < 1 || breakpoints[0] > breakpoints[1] {
            return Err(invalid(format!("bad first interval in {breakpoints:?}")));
        }
        if breakpoints[1..].windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("breakpoints not increasing: {breakpoints:?}")));
        }
        if *breakpoints.last().unwrap() > m {
            return Err(invalid(format!("chain {breakpoints:?} leaves [1, {m}]")));
        }
        Ok(IntervalChain { breakpoints, m })
    }

    pub fn breakpoints(&self) -> &[u32] {
        &self.breakpoints
    }

    pub fn domain(&self) -> u32 {
        self.m
    }

    /// Number of intervals `k`.
    pub fn order(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Interval `i`, 1-based, as an inclusive pair.
    pub fn interval(&self, i: usize) -> (u32, u32) {
        assert!(i >= 1 && i <= self.order());
        let lo = if i == 1 {
            self.breakpoints[0]
        } else {
            self.breakpoints[i - 1] + 1
        };
        (lo, self.breakpoints[i])
    }

    pub fn intervals(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (1..=self.order()).map(|i| self.interval(i))
    }

    /// 1-based index of the interval containing `p`.
    pub fn interval_of(&self, p: u32) -> Option<usize> {
        let b = &self.breakpoints;
        if p < b[0] || p > *b.last().unwrap() {
            return None;
        }
        // first i >= 1 with p <= b[i]
        Some(b[1..].partition_point(|&x| x < p) + 1)
    }
}

impl fmt::Display for IntervalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (lo, hi) in self.intervals() {
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabTuple(Vec<u32>);

impl StabTuple {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) || elements.first() == Some(&0) {
            return Err(invalid(format!("tuple {elements:?} not strictly increasing in [1, m]")));
        }
        Ok(StabTuple(elements))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for StabTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// True iff every element of `t` lies in some interval of `c` and no two
/// share an interval. A tuple larger than the chain never stabs it.
pub fn stabs(t: &StabTuple, c: &IntervalChain) -> bool {
    if t.size() > c.order() {
        return false;
    }
    let mut prev = 0;
    for &p in t.elements() {
        match c.interval_of(p) {
            // elements increase, so distinct intervals means strictly increasing indices
            Some(i) if i > prev => prev = i,
            _ => return false,
        }
    }
    true
}

/// Multiset of k-chains on a common domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMultiset {
    m: u32,
    k: usize,
    entries: BTreeMap<IntervalChain, usize>,
}

impl ChainMultiset {
    pub fn new(m: u32, k: usize) -> Self {
        ChainMultiset {
            m,
            k,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, chain: IntervalChain, multiplicity: usize) -> Result<()> {
        if chain.domain() != self.m || chain.order() != self.k {
            return Err(invalid(format!(
                "chain {chain} does not match m={} k={}",
                self.m, self.k
            )));
        }
        if multiplicity > 0 {
            *self.entries.entry(chain).or_insert(0) += multiplicity;
        }
        Ok(())
    }

    pub fn domain(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IntervalChain, usize)> {
        self.entries.iter().map(|(c, &n)| (c, n))
    }

    pub fn multiplicity(&self, c: &IntervalChain) -> usize {
        self.entries.get(c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest total multiplicity of members stabbed by a single s-tuple.
    pub fn max_stabbed_load(&self, s: usize) -> usize {
        enumerate_tuples(self.m, s)
            .iter()
            .map(|t| {
                self.entries
                    .iter()
                    .filter(|(c, _)| stabs(t, c))
                    .map(|(_, &n)| n)
                    .sum::<usize>()
            })
            .max()
            .unwrap_or(0)
    }
}

/// All k-chains on `[1, m]` in lexicographic breakpoint order.
pub fn enumerate_chains(m: u32, k: usize) -> Vec<IntervalChain> {
    let mut out = Vec::new();
    if k == 0 || (m as usize) < k {
        return out;
    }
    let mut bp = Vec::with_capacity(k + 1);
    for a0 in 1..=m {
        for a1 in a0..=m {
            bp.clear();
            bp.push(a0);
            bp.push(a1);
            extend_chain(&mut bp, k + 1, m, &mut out);
        }
    }
    out
}

fn extend_chain(bp: &mut Vec<u32>, len: usize, m: u32, out: &mut Vec<IntervalChain>) {
    if bp.len() == len {
        out.push(IntervalChain {
            breakpoints: bp.clone(),
            m,
        });
        return;
    }
    let last = *bp.last().unwrap();
    let remaining = (len - bp.len()) as u32;
    if last + remaining > m {
        return;
    }
    for next in last + 1..=m {
        bp.push(next);
        extend_chain(bp, len, m, out);
        bp.pop();
    }
}

/// All s-subsets of `[1, m]` in lexicographic order.
pub fn enumerate_tuples(m: u32, s: usize) -> Vec<StabTuple> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(start: u32, m: u32, s: usize, cur: &mut Vec<u32>, out: &mut Vec<StabTuple>) {
        if cur.len() == s {
            out.push(StabTuple(cur.clone()));
            return;
        }
        for x in start..=m {
            if (m - x) as usize + 1 < s - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, m, s, cur, out);
            cur.pop();
        }
    }
    rec(1, m, s, &mut cur, &mut out);
    out
}

/// Bipartite stabbing incidence between all s-tuples and all k-chains.
#[derive(Debug, Clone)]
pub struct StabIncidence {
    pub tuples: Vec<StabTuple>,
    pub chains: Vec<IntervalChain>,
    /// For each tuple, indices of the chains it stabs.
    pub by_tuple: Vec<Vec<usize>>,
    /// For each chain, indices of the tuples stabbing it.
    pub by_chain: Vec<Vec<usize>>,
}

pub fn stab_incidence(m: u32, s: usize, k: usize, max_pairs: usize) -> Result<StabIncidence> {
    if s == 0 || s > k || k > m as usize {
        return Err(invalid(format!("need 1 <= s <= k <= m, got s={s} k={k} m={m}")));
    }
    let tuples = enumerate_tuples(m, s);
    let chains = enumerate_chains(m, k);
    if tuples.len().saturating_mul(chains.len()) > max_pairs {
        return Err(Error::ResourceLimit(format!(
            "{} tuples x {} chains exceeds {max_pairs} incidence checks",
            tuples.len(),
            chains.len()
        )));
    }
    let mut by_tuple = vec![Vec::new(); tuples.len()];
    let mut by_chain = vec![Vec::new(); chains.len()];
    for (ti, t) in tuples.iter().enumerate() {
        for (ci, c) in chains.iter().enumerate() {
            if stabs(t, c) {
                by_tuple[ti].push(ci);
                by_chain[ci].push(ti);
            }
        }
    }
    Ok(StabIncidence {
        tuples,
        chains,
        by_tuple,
        by_chain,
    })
}

/// Budgets for the exact solvers. Exceeding any of them aborts with
/// [`Error::ResourceLimit`]; a partial answer is never returned as exact.
#[derive(Debug, Clone, Copy)]
pub struct SolverLimits {
    pub max_incidence: usize,
    pub node_budget: u64,
    /// Worker threads for top-level branches; 1 runs sequentially.
    pub threads: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_incidence: 20_000_000,
            node_budget: 200_000_000,
            threads: 1,
        }
    }
}

struct NodeCounter<'a> {
    used: &'a AtomicU64,
    budget: u64,
}

impl NodeCounter<'_> {
    fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::ResourceLimit(format!(
                "search exceeded {} nodes",
                self.budget
            )));
        }
        Ok(())
    }
}

fn run_branches<T, F>(threads: usize, branches: Vec<T>, f: F) -> Result<()>
where
    T: Send,
    F: Fn(T) -> Result<()> + Sync + Send,
{
    if threads <= 1 {
        return branches.into_iter().try_for_each(f);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?;
    pool.install(|| branches.into_par_iter().try_for_each(f))
}

// ---------------------------------------------------------------------------
// zeta: minimum set cover

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn or_assign(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a |= b);
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn count_minus(&self, covered: &Bits) -> usize {
        self.0
            .iter()
            .zip(&covered.0)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }
}

/// Exact minimum stabbing collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaSolution {
    pub value: ExtremalValue,
    /// A minimum collection of tuples (empty for degenerate values).
    pub cover: Vec<StabTuple>,
}

/// Set cover instance after dominance reductions. Elements are chains, sets
/// are tuples.
struct CoverInstance {
    n_elems: usize,
    /// Coverage of each kept set over kept elements.
    cover: Vec<Bits>,
    /// Kept sets covering each kept element.
    covered_by: Vec<Vec<usize>>,
    /// Original tuple index of each kept set.
    set_ids: Vec<usize>,
}

impl CoverInstance {
    fn reduce(inc: &StabIncidence) -> Self {
        let mut elems: Vec<usize> = (0..inc.chains.len()).collect();
        let mut sets: Vec<usize> = (0..inc.tuples.len()).collect();
        loop {
            let before = (elems.len(), sets.len());
            // a chain stabbed by every tuple that stabs another kept chain is
            // covered for free
            let elem_sets: Vec<Bits> = elems
                .iter()
                .map(|&e| {
                    let mut b = Bits::new(inc.tuples.len());
                    for &t in &inc.by_chain[e] {
                        if sets.binary_search(&t).is_ok() {
                            b.set(t);
                        }
                    }
                    b
                })
                .collect();
            let keep_e: Vec<bool> = (0..elems.len())
                .map(|i| {
                    !(0..elems.len()).any(|j| {
                        j != i
                            && elem_sets[j].subset_of(&elem_sets[i])
                            && (elem_sets[j] != elem_sets[i] || j < i)
                    })
                })
                .collect();
            elems = elems
                .iter()
                .zip(&keep_e)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            // a tuple whose kept chains are covered by another tuple is redundant
            let set_elems: Vec<Bits> = sets
                .iter()
                .map(|&t| {
                    let mut b = Bits::new(inc.chains.len());
                    for &c in &inc.by_tuple[t] {
                        if elems.binary_search(&c).is_ok() {
                            b.set(c);
                        }
                    }
                    b
                })
                .collect();
            let keep_s: Vec<bool> = (0..sets.len())
                .map(|i| {
                    !(0..sets.len()).any(|j| {
                        j != i
                            && set_elems[i].subset_of(&set_elems[j])
                            && (set_elems[j] != set_elems[i] || j < i)
                    })
                })
                .collect();
            sets = sets
                .iter()
                .zip(&keep_s)
                .filter(|(_, &k)| k)
                .map(|(&s, _)| s)
                .collect();
            if (elems.len(), sets.len()) == before {
                break;
            }
        }
        let elem_pos: BTreeMap<usize, usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut cover = Vec::with_capacity(sets.len());
        let mut covered_by = vec![Vec::new(); elems.len()];
        for (si, &t) in sets.iter().enumerate() {
            let mut b = Bits::new(elems.len());
            for c in &inc.by_tuple[t] {
                if let Some(&p) = elem_pos.get(c) {
                    b.set(p);
                    covered_by[p].push(si);
                }
            }
            cover.push(b);
        }
        CoverInstance {
            n_elems: elems.len(),
            cover,
            covered_by,
            set_ids: sets,
        }
    }

    fn greedy(&self) -> Vec<usize> {
        let mut covered = Bits::new(self.n_elems);
        let mut chosen = Vec::new();
        let mut left = self.n_elems;
        while left > 0 {
            let (best, gain) = self
                .cover
                .iter()
                .enumerate()
                .map(|(i, b)| (i, b.count_minus(&covered)))
                .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))
                .expect("every chain is stabbed by some tuple");
            assert!(gain > 0, "uncoverable chain");
            covered.or_assign(&self.cover[best]);
            chosen.push(best);
            left -= gain;
        }
        chosen
    }

    /// Uncovered element with the fewest available sets, and that set list.
    fn branch_element(&self, covered: &Bits, excluded: &[bool]) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for e in 0..self.n_elems {
            if covered.get(e) {
                continue;
            }
            let avail: Vec<usize> = self.covered_by[e]
                .iter()
                .copied()
                .filter(|&s| !excluded[s])
                .collect();
            if best.as_ref().is_none_or(|(_, b)| avail.len() < b.len()) {
                let done = avail.len() <= 1;
                best = Some((e, avail));
                if done {
                    break;
                }
            }
        }
        best
    }

    /// Lower bound on sets still needed: a greedy packing of uncovered
    /// elements no two of which share an available set, and the count bound.
    fn lower_bound(&self, covered: &Bits, excluded: &[bool]) -> usize {
        let mut order: Vec<(usize, usize)> = (0..self.n_elems)
            .filter(|&e| !covered.get(e))
            .map(|e| {
                let n = self.covered_by[e].iter().filter(|&&s| !excluded[s]).count();
                (n, e)
            })
            .collect();
        if order.is_empty() {
            return 0;
        }
        let uncovered = order.len();
        order.sort_unstable();
        let mut used = vec![false; self.cover.len()];
        let mut packed = 0;
        for &(_, e) in &order {
            let sets = &self.covered_by[e];
            if sets.iter().all(|&s| excluded[s] || !used[s]) {
                packed += 1;
                sets.iter().for_each(|&s| used[s] = true);
            }
        }
        let max_gain = (0..self.cover.len())
            .filter(|&s| !excluded[s])
            .map(|s| self.cover[s].count_minus(covered))
            .max()
            .unwrap_or(0);
        if max_gain == 0 {
            return usize::MAX / 2;
        }
        packed.max(uncovered.div_ceil(max_gain))
    }

    fn branch_order(&self, avail: &[usize], covered: &Bits) -> Vec<usize> {
        let mut v: Vec<(std::cmp::Reverse<usize>, usize)> = avail
            .iter()
            .map(|&s| (std::cmp::Reverse(self.cover[s].count_minus(covered)), s))
            .collect();
        v.sort_unstable();
        v.into_iter().map(|(_, s)| s).collect()
    }

    /// Depth-first search for covers smaller than `bound`. `bound` holds the
    /// size of the best cover known; when `found` is given the search stops
    /// at the first cover of size below the bound and records it.
    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        covered: &Bits,
        excluded: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        bound: &AtomicUsize,
        found: &mut Option<Vec<usize>>,
        stop_first: bool,
        nodes: &NodeCounter<'_>,
    ) -> Result<()> {
        nodes.tick()?;
        let Some((_, avail)) = self.branch_element(covered, excluded) else {
            if chosen.len() < bound.load(Ordering::Relaxed) {
                bound.fetch_min(chosen.len(), Ordering::Relaxed);
                *found = Some(chosen.clone());
            }
            return Ok(());
        };
        if avail.is_empty() {
            return Ok(());
        }
        if chosen.len() + self.lower_bound(covered, excluded) >= bound.load(Ordering::Relaxed) {
            return Ok(());
        }
        let order = self.branch_order(&avail, covered);
        let mark = excluded.clone();
        for s in order {
            let mut next = covered.clone();
            next.or_assign(&self.cover[s]);
            chosen.push(s);
            self.search(&next, excluded, chosen, bound, found, stop_first, nodes)?;
            chosen.pop();
            if stop_first && found.is_some() {
                break;
            }
            excluded[s] = true;
        }
        excluded.clone_from(&mark);
        Ok(())
    }
}

/// Exact minimum number of s-tuples stabbing every k-chain on `[1, m]`.
pub fn zeta_exact(s: usize, k: usize, m: u32, limits: &SolverLimits) -> Result<ZetaSolution> {
    if s == 0 {
        return Err(invalid("zeta needs s >= 1"));
    }
    if (m as usize) < k {
        return Ok(ZetaSolution {
            value: ExtremalValue::Zero,
            cover: Vec::new(),
        });
    }
    if k < s {
        return Ok(ZetaSolution {
            value: ExtremalValue::Undefined,
            cover: Vec::new(),
        });
    }
    let inc = stab_incidence(m, s, k, limits.max_incidence)?;
    let inst = CoverInstance::reduce(&inc);
    let greedy = inst.greedy();

    let used = AtomicU64::new(0);
    let nodes = NodeCounter {
        used: &used,
        budget: limits.node_budget,
    };
    let bound = AtomicUsize::new(greedy.len());
    let covered = Bits::new(inst.n_elems);
    let no_excl = vec![false; inst.cover.len()];
    // Value phase, split over the root branches.
    if let Some((_, avail)) = inst.branch_element(&covered, &no_excl) {
        let order = inst.branch_order(&avail, &covered);
        let branches: Vec<(usize, Vec<usize>)> = order
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, order[..i].to_vec()))
            .collect();
        run_branches(limits.threads, branches, |(s, before)| {
            let mut excluded = no_excl.clone();
            before.iter().for_each(|&b| excluded[b] = true);
            let mut next = covered.clone();
            next.or_assign(&inst.cover[s]);
            let mut chosen = vec![s];
            let mut found = None;
            inst.search(&next, &mut excluded, &mut chosen, &bound, &mut found, false, &nodes)
        })?;
    }
    let value = bound.load(Ordering::Relaxed);

    // Witness phase: first cover of the optimal size in sequential order, so
    // the reported collection does not depend on scheduling.
    let target = AtomicUsize::new(value + 1);
    let mut found = None;
    inst.search(
        &covered,
        &mut no_excl.clone(),
        &mut Vec::new(),
        &target,
        &mut found,
        true,
        &nodes,
    )?;
    let witness = found.expect("optimal cover must be found again");
    debug_assert_eq!(witness.len(), value);
    let mut cover: Vec<StabTuple> = witness
        .into_iter()
        .map(|s| inc.tuples[inst.set_ids[s]].clone())
        .collect();
    cover.sort();
    debug_assert!(inc
        .chains
        .iter()
        .all(|c| cover.iter().any(|t| stabs(t, c))));
    Ok(ZetaSolution {
        value: ExtremalValue::Finite(value as u64),
        cover,
    })
}

// ---------------------------------------------------------------------------
// eta: maximum packing

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaSolution {
    pub value: ExtremalValue,
    /// A maximum collection (empty for degenerate values).
    pub collection: Option<ChainMultiset>,
}

/// Packing instance after dominance reductions: variables are chains with
/// multiplicity at most `cap`, constraints are tuples with capacity `cap`.
struct PackInstance {
    cap: usize,
    /// Tuple constraints touching each kept chain.
    rows_of: Vec<Vec<usize>>,
    /// Kept chains stabbed by each kept tuple.
    members: Vec<Vec<usize>>,
    chain_ids: Vec<usize>,
}

impl PackInstance {
    fn reduce(inc: &StabIncidence, cap: usize) -> Self {
        // A chain stabbed by a superset of the tuples stabbing another chain
        // can always be traded for that chain, so only minimal ones are kept.
        let n = inc.chains.len();
        let sets: Vec<Bits> = (0..n)
            .map(|c| {
                let mut b = Bits::new(inc.tuples.len());
                inc.by_chain[c].iter().for_each(|&t| b.set(t));
                b
            })
            .collect();
        let chain_ids: Vec<usize> = (0..n)
            .filter(|&i| {
                !(0..n).any(|j| {
                    j != i && sets[j].subset_of(&sets[i]) && (sets[j] != sets[i] || j < i)
                })
            })
            .collect();
        let mut rows: Vec<Vec<usize>> = inc
            .by_tuple
            .iter()
            .map(|cs| {
                cs.iter()
                    .filter_map(|c| chain_ids.binary_search(c).ok())
                    .collect::<Vec<_>>()
            })
            .filter(|r| !r.is_empty())
            .collect();
        rows.sort();
        rows.dedup();
        // drop rows implied by a larger row
        let keep: Vec<bool> = (0..rows.len())
            .map(|i| {
                !(0..rows.len()).any(|j| {
                    j != i && rows[j].len() > rows[i].len() && rows[i].iter().all(|c| rows[j].contains(c))
                })
            })
            .collect();
        let members: Vec<Vec<usize>> = rows
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(r, _)| r)
            .collect();
        let mut rows_of = vec![Vec::new(); chain_ids.len()];
        for (ri, r) in members.iter().enumerate() {
            r.iter().for_each(|&c| rows_of[c].push(ri));
        }
        PackInstance {
            cap,
            rows_of,
            members,
            chain_ids,
        }
    }

    fn room(&self, c: usize, residual: &[usize]) -> usize {
        self.rows_of[c]
            .iter()
            .map(|&r| residual[r])
            .min()
            .unwrap_or(self.cap)
            .min(self.cap)
    }

    /// Upper bound on what chains `from..` can still add.
    fn upper_bound(&self, from: usize, residual: &[usize]) -> usize {
        let n = self.chain_ids.len();
        let per_chain: usize = (from..n).map(|c| self.room(c, residual)).sum();
        // every remaining chain sits in some row; a greedy row cover of the
        // remaining chains caps their total by the rows' residuals
        let mut covered = vec![false; n];
        let mut left: usize = (from..n).filter(|&c| self.room(c, residual) > 0).count();
        (from..n)
            .filter(|&c| self.room(c, residual) == 0)
            .for_each(|c| covered[c] = true);
        let mut by_rows = 0;
        while left > 0 {
            let (r, gain) = self
                .members
                .iter()
                .enumerate()
                .map(|(r, cs)| (r, cs.iter().filter(|&&c| c >= from && !covered[c]).count()))
                .max_by_key(|&(r, g)| (g, std::cmp::Reverse(r)))
                .unwrap();
            if gain == 0 {
                break;
            }
            by_rows += residual[r];
            for &c in &self.members[r] {
                if c >= from && !covered[c] {
                    covered[c] = true;
                    left -= 1;
                }
            }
        }
        per_chain.min(by_rows)
    }

    /// Depth-first search over multiplicities in chain order, larger values
    /// first. `best` holds the best total known; with `stop_first` the search
    /// stops at the first assignment strictly above it.
    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        c: usize,
        residual: &mut Vec<usize>,
        assign: &mut Vec<usize>,
        total: usize,
        best: &AtomicUsize,
        found: &mut Option<Vec<usize>>,
        stop_first: bool,
        nodes: &NodeCounter<'_>,
    ) -> Result<()> {
        nodes.tick()?;
        if c == self.chain_ids.len() {
            if stop_first {
                if total >= best.load(Ordering::Relaxed) {
                    *found = Some(assign.clone());
                }
            } else if total > best.load(Ordering::Relaxed) {
                best.fetch_max(total, Ordering::Relaxed);
            }
            return Ok(());
        }
        let need = best.load(Ordering::Relaxed) + usize::from(!stop_first);
        if total + self.upper_bound(c, residual) < need {
            return Ok(());
        }
        for x in (0..=self.room(c, residual)).rev() {
            self.rows_of[c].iter().for_each(|&r| residual[r] -= x);
            assign.push(x);
            self.search(c + 1, residual, assign, total + x, best, found, stop_first, nodes)?;
            assign.pop();
            self.rows_of[c].iter().for_each(|&r| residual[r] += x);
            if stop_first && found.is_some() {
                break;
            }
        }
        Ok(())
    }
}

/// Exact maximum size of a multiset of k-chains on `[1, m]` with no s-tuple
/// stabbing `r` of its members.
///
/// Every k-chain with `k >= s` is stabbed by some s-tuple, so no chain can
/// appear more than `r - 1` times; that cap makes the search space finite.
pub fn eta_exact(r: usize, s: usize, k: usize, m: u32, limits: &SolverLimits) -> Result<EtaSolution> {
    if r == 0 || s == 0 {
        return Err(invalid("eta needs r >= 1 and s >= 1"));
    }
    if (m as usize) < k {
        return Ok(EtaSolution {
            value: ExtremalValue::Zero,
            collection: None,
        });
    }
    if k < s {
        return Ok(EtaSolution {
            value: ExtremalValue::Infinite,
            collection: None,
        });
    }
    let inc = stab_incidence(m, s, k, limits.max_incidence)?;
    debug_assert!(inc.by_chain.iter().all(|t| !t.is_empty()));
    let cap = r - 1;
    let inst = PackInstance::reduce(&inc, cap);
    let used = AtomicU64::new(0);
    let nodes = NodeCounter {
        used: &used,
        budget: limits.node_budget,
    };
    let best = AtomicUsize::new(0);
    let rows = inst.members.len();
    if !inst.chain_ids.is_empty() {
        let first_room = inst.room(0, &vec![cap; rows]);
        let branches: Vec<usize> = (0..=first_room).rev().collect();
        run_branches(limits.threads, branches, |x| {
            let mut residual = vec![cap; rows];
            inst.rows_of[0].iter().for_each(|&r| residual[r] -= x);
            let mut assign = vec![x];
            let mut found = None;
            inst.search(1, &mut residual, &mut assign, x, &best, &mut found, false, &nodes)
        })?;
    }
    let value = best.load(Ordering::Relaxed);

    let target = AtomicUsize::new(value);
    let mut found = None;
    inst.search(
        0,
        &mut vec![cap; rows],
        &mut Vec::new(),
        0,
        &target,
        &mut found,
        true,
        &nodes,
    )?;
    let assign = found.expect("optimal packing must be found again");
    let mut coll = ChainMultiset::new(m, k);
    for (i, &x) in assign.iter().enumerate() {
        coll.add(inc.chains[inst.chain_ids[i]].clone(), x)?;
    }
    debug_assert_eq!(coll.total(), value);
    debug_assert!(coll.max_stabbed_load(s) < r);
    Ok(EtaSolution {
        value: ExtremalValue::Finite(value as u64),
        collection: Some(coll),
    })
}
