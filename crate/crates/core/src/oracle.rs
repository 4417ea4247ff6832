//! Exact brute-force values of the extremal functions `A(s, k, m)` (letters
//! avoiding alternations of length `s`) and `F(r, s, k, m)` (letters avoiding
//! `(r, s)`-formations), both over sequences on `m` blocks in which every
//! letter occurs at least `k` times.
//!
//! Both predicates are closed under deleting occurrences, so it suffices to
//! search sequences in which every letter occurs exactly `k` times. The
//! search grows the sequence one letter at a time, naming letters by first
//! occurrence, and abandons a branch as soon as the forbidden pattern
//! appears. Letters first occurring in block `b` or later, restricted to
//! blocks `b..=m`, form a valid instance on `m - b + 1` blocks, so the values
//! for fewer blocks (computed first) bound what the suffix can still add.
//! The letters new in one block, cut to the blocks after it, avoid a weaker
//! pattern with one occurrence fewer, which caps how many a block can open.

use std::time::{Duration, Instant};

use crate::chains::ExtremalValue;
use crate::seq::{alternation_runs, greedy_open, restricted_string, Block, Letter, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_total_length: usize,
    pub max_letters: usize,
    pub node_budget: u64,
    /// Off by default so that results never depend on machine speed.
    pub wall_clock_budget: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_total_length: 400,
            max_letters: 100,
            node_budget: 500_000_000,
            wall_clock_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Proven,
    BudgetExhausted { best_found: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: ExtremalValue,
    pub status: Status,
    witness: Option<Sequence>,
    pub nodes: u64,
}

impl OracleResult {
    pub fn is_proven(&self) -> bool {
        self.status == Status::Proven
    }

    /// Proven finite value, if any.
    pub fn proven_value(&self) -> Option<u64> {
        if self.is_proven() {
            self.value.finite()
        } else {
            None
        }
    }

    fn degenerate(value: ExtremalValue) -> Self {
        OracleResult {
            value,
            status: Status::Proven,
            witness: None,
            nodes: 0,
        }
    }
}

/// Forbidden pattern for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// Alternations of length `s`.
    Alternation { s: usize },
    /// `(r, s)`-formations.
    Formation { r: usize, s: usize },
}

impl Pattern {
    fn degenerate(self, k: usize, m: usize) -> Option<ExtremalValue> {
        if m < k {
            return Some(ExtremalValue::Zero);
        }
        let infinite = match self {
            Pattern::Alternation { s } => k + 1 < s,
            Pattern::Formation { s, .. } => k < s,
        };
        infinite.then_some(ExtremalValue::Infinite)
    }
}

/// Maximum distinct letters on `m` blocks, each occurring at least `k` times,
/// with no alternation of length `s`.
pub fn max_letters_alt(s: usize, k: usize, m: usize, limits: &SearchLimits) -> OracleResult {
    assert!(s >= 2 && k >= 1 && m >= 1, "need s >= 2, k >= 1, m >= 1");
    max_letters(Pattern::Alternation { s }, k, m, limits)
}

/// Maximum distinct letters on `m` blocks, each occurring at least `k` times,
/// with no `(r, s)`-formation.
pub fn max_letters_formation(
    r: usize,
    s: usize,
    k: usize,
    m: usize,
    limits: &SearchLimits,
) -> OracleResult {
    assert!(r >= 1 && s >= 1 && k >= 1, "need r, s, k >= 1");
    max_letters(Pattern::Formation { r, s }, k, m, limits)
}

pub fn max_letters(pattern: Pattern, k: usize, m: usize, limits: &SearchLimits) -> OracleResult {
    if let Some(v) = pattern.degenerate(k, m) {
        return OracleResult::degenerate(v);
    }
    let started = Instant::now();
    let mut nodes = 0;
    solve(pattern, k, m, limits, started, &mut nodes).1
}

/// How many letters can first occur in one block, given the blocks after it.
enum FreshCap {
    Fixed(usize),
    /// Those letters, cut to the later blocks, avoid this weaker pattern with
    /// one occurrence fewer: the shared block extends any occurrence of it
    /// back to the full pattern.
    Reduced(Pattern, usize),
}

impl Pattern {
    fn fresh_cap(self, k: usize) -> FreshCap {
        match self {
            Pattern::Alternation { s: 2 } => FreshCap::Fixed(1),
            Pattern::Alternation { s } => FreshCap::Reduced(Pattern::Alternation { s: s - 1 }, k - 1),
            Pattern::Formation { r, s: 1 } => FreshCap::Fixed(r - 1),
            Pattern::Formation { r, s } => FreshCap::Reduced(Pattern::Formation { r, s: s - 1 }, k - 1),
        }
    }
}

/// Proven values on `0..=m` blocks (`None` from the first unproven one on)
/// and the full result on `m` blocks. The caller rules out infinite values.
fn solve(
    pattern: Pattern,
    k: usize,
    m: usize,
    limits: &SearchLimits,
    started: Instant,
    nodes: &mut u64,
) -> (Vec<Option<usize>>, OracleResult) {
    let mut table = vec![None; m + 1];
    for v in table.iter_mut().take(k) {
        *v = Some(0);
    }
    if m < k {
        return (table, OracleResult::degenerate(ExtremalValue::Zero));
    }
    // fresh[j]: letters new in a block followed by j blocks
    let fresh = match pattern.fresh_cap(k) {
        FreshCap::Fixed(c) => vec![Some(c); m],
        FreshCap::Reduced(p, k2) => {
            solve(p, k2, m - 1, limits, started, nodes).0
        }
    };
    let mut last = None;
    for j in k..=m {
        let res = run_search(pattern, k, j, &table, &fresh, limits, started, *nodes);
        *nodes = res.nodes;
        table[j] = res.proven_value().map(|v| v as usize);
        if !res.is_proven() {
            return (table, res);
        }
        last = Some(res);
    }
    (table, last.expect("m >= k"))
}

/// The maximizing sequence found by the search, canonically named.
pub fn witness(result: &OracleResult) -> Option<&Sequence> {
    result.witness.as_ref()
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    pattern: Pattern,
    k: usize,
    m: usize,
    suffix: &[Option<usize>],
    fresh: &[Option<usize>],
    limits: &SearchLimits,
    started: Instant,
    nodes: u64,
) -> OracleResult {
    let mut st = Search {
        pattern,
        k,
        m,
        suffix,
        fresh,
        limits,
        started,
        flat: Vec::new(),
        block_start: vec![0],
        block_first: vec![0],
        counts: Vec::new(),
        positions: Vec::new(),
        in_block: Vec::new(),
        best: 0,
        best_seq: None,
        nodes,
        truncated: false,
        aborted: false,
    };
    st.extend();
    let best = st.best as u64;
    let witness = st.best_seq.take().or_else(|| {
        // zero letters: the all-empty sequence
        Some(Sequence::new(vec![Block::empty(); m]))
    });
    let status = if st.aborted || st.truncated {
        Status::BudgetExhausted { best_found: best }
    } else {
        Status::Proven
    };
    OracleResult {
        value: ExtremalValue::Finite(best),
        status,
        witness,
        nodes: st.nodes,
    }
}

struct Search<'a> {
    pattern: Pattern,
    k: usize,
    m: usize,
    suffix: &'a [Option<usize>],
    fresh: &'a [Option<usize>],
    limits: &'a SearchLimits,
    started: Instant,
    flat: Vec<Letter>,
    /// Start offset in `flat` of every opened block; the last is current.
    block_start: Vec<usize>,
    /// Letters named before each opened block.
    block_first: Vec<usize>,
    counts: Vec<usize>,
    positions: Vec<Vec<usize>>,
    in_block: Vec<bool>,
    best: usize,
    best_seq: Option<Sequence>,
    nodes: u64,
    truncated: bool,
    aborted: bool,
}

impl Search<'_> {
    fn block(&self) -> usize {
        self.block_start.len()
    }

    fn letters(&self) -> usize {
        self.counts.len()
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            self.aborted = true;
        } else if self.nodes.is_multiple_of(4096) {
            if let Some(limit) = self.limits.wall_clock_budget {
                if self.started.elapsed() > limit {
                    self.aborted = true;
                }
            }
        }
        !self.aborted
    }

    fn upper_bound(&self) -> usize {
        let b = self.block();
        let before = self.block_first[b - 1];
        // letters new in block b or later, cut to blocks b..=m, are an
        // instance on m - b + 1 blocks
        match self.suffix_value(self.m - b + 1) {
            Some(v) => before + v,
            None => usize::MAX,
        }
    }

    fn suffix_value(&self, blocks: usize) -> Option<usize> {
        if blocks < self.k {
            Some(0)
        } else if blocks >= self.m {
            None
        } else {
            self.suffix[blocks]
        }
    }

    fn push(&mut self, x: Letter) {
        let x = x as usize;
        if x == self.counts.len() {
            self.counts.push(0);
            self.positions.push(Vec::new());
            self.in_block.push(false);
        }
        self.positions[x].push(self.flat.len());
        self.counts[x] += 1;
        self.in_block[x] = true;
        self.flat.push(x as Letter);
    }

    fn pop(&mut self) {
        let x = self.flat.pop().unwrap() as usize;
        self.positions[x].pop();
        self.counts[x] -= 1;
        self.in_block[x] = false;
        if self.counts[x] == 0 {
            self.counts.pop();
            self.positions.pop();
            self.in_block.pop();
        }
    }

    fn alive(&self, x: usize) -> bool {
        self.counts[x] < self.k
    }

    /// Whether the last pushed letter makes a forbidden pattern unavoidable.
    /// Letters still short of `k` occurrences are bound to occur again, which
    /// extends any pattern whose unfinished tail they complete.
    fn violated_by(&self, x: usize) -> bool {
        match self.pattern {
            Pattern::Alternation { s } => (0..self.letters()).filter(|&y| y != x).any(|y| {
                let (len, last_x) = alternation_runs(&self.positions[x], &self.positions[y]);
                let other_alive = match last_x {
                    Some(true) => self.alive(y),
                    Some(false) => self.alive(x),
                    None => false,
                };
                len + other_alive as usize >= s
            }),
            Pattern::Formation { r, s } => {
                let reach = |y: usize| self.counts[y] + self.alive(y) as usize;
                if reach(x) < s {
                    return false;
                }
                if r == 2 {
                    return (0..self.letters())
                        .filter(|&y| y != x && reach(y) >= s)
                        .any(|y| self.forced_pair(x, y) >= s);
                }
                let cands: Vec<usize> = (0..self.letters())
                    .filter(|&y| y != x && reach(y) >= s)
                    .collect();
                let mut chosen = vec![x];
                self.grow(&cands, 0, &mut chosen, r, s)
            }
        }
    }

    /// `forced_multiplicity(&[x, y])` without allocating.
    fn forced_pair(&self, x: usize, y: usize) -> usize {
        let (px, py) = (&self.positions[x], &self.positions[y]);
        let (mut i, mut j) = (0, 0);
        let (mut seen_x, mut seen_y) = (false, false);
        let mut closed = 0;
        while i < px.len() || j < py.len() {
            if j == py.len() || (i < px.len() && px[i] < py[j]) {
                seen_x = true;
                i += 1;
            } else {
                seen_y = true;
                j += 1;
            }
            if seen_x && seen_y {
                closed += 1;
                seen_x = false;
                seen_y = false;
            }
        }
        let completes = (seen_x || self.alive(x)) && (seen_y || self.alive(y));
        closed + completes as usize
    }

    /// Formation multiplicity of a letter set, counting the segment that its
    /// live letters are bound to complete.
    fn forced_multiplicity(&self, set: &[usize]) -> usize {
        let lists: Vec<&[usize]> = set.iter().map(|&y| self.positions[y].as_slice()).collect();
        let (closed, seen) = greedy_open(restricted_string(&lists).into_iter(), set.len());
        let completes = set.iter().zip(&seen).all(|(&y, &s)| s || self.alive(y));
        closed + completes as usize
    }

    fn grow(&self, cands: &[usize], start: usize, chosen: &mut Vec<usize>, r: usize, s: usize) -> bool {
        // the forced multiplicity only drops as the set grows
        if self.forced_multiplicity(chosen) < s {
            return false;
        }
        if chosen.len() == r {
            return true;
        }
        for i in start..cands.len() {
            if cands.len() - i < r - chosen.len() {
                break;
            }
            chosen.push(cands[i]);
            let hit = self.grow(cands, i + 1, chosen, r, s);
            chosen.pop();
            if hit {
                return true;
            }
        }
        false
    }

    fn try_letter(&mut self, x: Letter) {
        self.push(x);
        if !self.violated_by(x as usize) {
            self.extend();
        }
        self.pop();
    }

    fn extend(&mut self) {
        if !self.tick() {
            return;
        }
        if self.upper_bound() <= self.best {
            return;
        }
        let b = self.block();
        let blocks_after = self.m - b;

        // a fresh letter still needs k - 1 later blocks
        if self.k - 1 <= blocks_after {
            let n = self.letters();
            let cap = self.fresh.get(blocks_after).copied().flatten();
            if cap.is_some_and(|c| n - self.block_first[b - 1] >= c) {
                // no room for another new letter here
            } else if n + 1 > self.limits.max_letters
                || (n + 1) * self.k > self.limits.max_total_length
            {
                self.truncated = true;
            } else {
                self.try_letter(n as Letter);
                if self.aborted {
                    return;
                }
            }
        }

        for x in 0..self.letters() {
            if !self.in_block[x] && self.counts[x] < self.k && self.k - self.counts[x] - 1 <= blocks_after
            {
                self.try_letter(x as Letter);
                if self.aborted {
                    return;
                }
            }
        }

        if self.counts.iter().any(|&c| self.k - c > blocks_after) {
            return;
        }
        if b == self.m {
            if self.letters() > self.best {
                self.best = self.letters();
                self.best_seq = Some(self.snapshot());
            }
            return;
        }
        let cur: Vec<usize> = self.flat[self.block_start[b - 1]..]
            .iter()
            .map(|&x| x as usize)
            .collect();
        cur.iter().for_each(|&x| self.in_block[x] = false);
        self.block_start.push(self.flat.len());
        self.block_first.push(self.letters());
        self.extend();
        self.block_start.pop();
        self.block_first.pop();
        cur.iter().for_each(|&x| self.in_block[x] = true);
    }

    fn snapshot(&self) -> Sequence {
        let mut blocks = Vec::with_capacity(self.m);
        for (i, &start) in self.block_start.iter().enumerate() {
            let end = self.block_start.get(i + 1).copied().unwrap_or(self.flat.len());
            blocks.push(Block::from_vec_unchecked(self.flat[start..end].to_vec()));
        }
        Sequence::new(blocks)
    }
}
