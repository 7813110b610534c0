//! Exhaustive backtracking over binary (or ternary) words under a
//! [`ConstraintSet`].
//!
//! All searches run in lexicographic depth-first order, fix the first letter
//! to `0` when the constraints are complement-closed, and count one node per
//! word visited.

mod checkpoint;
mod constraint;
mod dfs;
mod tables;

use std::collections::BTreeSet;

pub use checkpoint::{Checkpoint, CHECKPOINT_MAGIC};
pub use constraint::{ConstraintSet, Violation};
pub use dfs::{Cursor, SearchOptions};
pub use tables::{LongestRow, LONGEST_ROWS};

use crate::error::{Error, Result};
use crate::word::{complement_letters, Word};
use constraint::Path;
use dfs::{drive, run_cursor, Counts, Longest, Progress};

/// Default node budget for [`longest_word`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;
/// Default node budget for [`count_by_length`].
pub const DEFAULT_COUNT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub max_length: usize,
    pub witness: Word,
    /// True iff the whole tree was closed within the budget.
    pub exhausted: bool,
    pub nodes_explored: u64,
}

fn initial_cursors(c: &ConstraintSet) -> Vec<Cursor> {
    if c.is_complement_closed() {
        vec![Cursor::root(vec![0])]
    } else {
        vec![Cursor::root(Vec::new())]
    }
}

/// Longest word satisfying `c`, exploring at most `budget` nodes.
///
/// ```
/// use antisquare::search::{longest_word, ConstraintSet};
/// let c = ConstraintSet::binary().with_power("2".parse().unwrap());
/// let out = longest_word(&c, 1000).unwrap();
/// assert_eq!((out.max_length, out.witness.to_string().as_str()), (3, "010"));
/// assert!(out.exhausted);
/// ```
pub fn longest_word(c: &ConstraintSet, budget: u64) -> Result<SearchOutcome> {
    longest_word_with(c, &SearchOptions::with_budget(budget), None, &mut |_| Ok(()))
}

/// [`longest_word`] with worker threads, resumption and a checkpoint hook
/// called after every round.
pub fn longest_word_with(
    c: &ConstraintSet,
    opts: &SearchOptions,
    resume: Option<Checkpoint>,
    on_checkpoint: &mut dyn FnMut(&Checkpoint) -> Result<()>,
) -> Result<SearchOutcome> {
    c.validate()?;
    let describe = c.describe();
    let start = match resume {
        Some(cp) => {
            if cp.constraints != describe {
                return Err(Error::Domain(format!(
                    "checkpoint is for constraints '{}', not '{}'",
                    cp.constraints, describe
                )));
            }
            Progress { collected: Longest { best: cp.best }, nodes: cp.nodes, pending: cp.pending }
        }
        None => Progress { collected: Longest::default(), nodes: 0, pending: initial_cursors(c) },
    };
    let snapshot = |p: &Progress<Longest>| Checkpoint {
        constraints: describe.clone(),
        nodes: p.nodes,
        best: p.collected.best.clone(),
        pending: p.pending.clone(),
    };
    let done = drive(c, start, None, opts, &mut |p| on_checkpoint(&snapshot(p)))?;
    let witness = Word::from_raw(done.collected.best, c.alphabet_size);
    Ok(SearchOutcome {
        max_length: witness.len(),
        witness,
        exhausted: done.pending.is_empty(),
        nodes_explored: done.nodes,
    })
}

/// Exact per-length counts of words satisfying a constraint set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    /// `counts[i]` is the number of valid words of length `i`.
    pub counts: Vec<u64>,
    /// False when the budget forced a shorter series than requested.
    pub complete: bool,
    pub nodes_explored: u64,
}

fn count_exact(c: &ConstraintSet, n_max: usize, opts: &SearchOptions) -> Result<(Option<Vec<u64>>, u64)> {
    let start = Progress { collected: Counts::default(), nodes: 0, pending: initial_cursors(c) };
    let done = drive(c, start, Some(n_max), opts, &mut |_| Ok(()))?;
    if !done.pending.is_empty() {
        return Ok((None, done.nodes));
    }
    let mut counts = done.collected.counts;
    counts.resize(n_max + 1, 0);
    if c.is_complement_closed() {
        for x in counts.iter_mut().skip(1) {
            *x *= 2;
        }
        counts[0] = 1;
    }
    Ok((Some(counts), done.nodes))
}

/// Counts valid words of every length up to `n_max`.
///
/// When the budget does not suffice the series is cut at the longest length
/// whose count could be closed within the same budget.
///
/// ```
/// use antisquare::search::{count_by_length, ConstraintSet};
/// let s = count_by_length(&ConstraintSet::good(), 6, 10_000).unwrap();
/// assert_eq!(s.counts, vec![1, 2, 4, 8, 12, 20, 30]);
/// ```
pub fn count_by_length(c: &ConstraintSet, n_max: usize, budget: u64) -> Result<CountSeries> {
    count_by_length_with(c, n_max, &SearchOptions::with_budget(budget))
}

pub fn count_by_length_with(c: &ConstraintSet, n_max: usize, opts: &SearchOptions) -> Result<CountSeries> {
    c.validate()?;
    let (full, mut nodes) = count_exact(c, n_max, opts)?;
    if let Some(counts) = full {
        return Ok(CountSeries { counts, complete: true, nodes_explored: nodes });
    }
    // binary search for the longest series that closes within budget
    let (mut lo, mut hi) = (0usize, n_max);
    let mut best = vec![1u64];
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        let (got, n) = count_exact(c, mid, opts)?;
        nodes += n;
        match got {
            Some(counts) => {
                best = counts;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    Ok(CountSeries { counts: best, complete: false, nodes_explored: nodes })
}

/// The cores of two-sided extendable words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreSet {
    pub cores: BTreeSet<Word>,
    pub nodes_explored: u64,
}

/// All words `y` of length `core_len` such that some `xyz` with
/// `|x| = |z| = pad_len` satisfies `c`.
///
/// Left-padded cores are enumerated first; each candidate core is then
/// tested for a right extension, stopping at the first success.
///
/// ```
/// use antisquare::search::{extendable_cores, ConstraintSet};
/// let c = ConstraintSet::binary().with_power("2".parse().unwrap());
/// assert!(extendable_cores(&c, 4, 4, 1000).unwrap().cores.is_empty());
/// ```
pub fn extendable_cores(c: &ConstraintSet, core_len: usize, pad_len: usize, budget: u64) -> Result<CoreSet> {
    c.validate()?;
    if core_len == 0 || pad_len == 0 {
        return Err(crate::error::domain("core and pad lengths must be positive"));
    }
    let over = || Error::Budget(format!("extendable cores: more than {budget} nodes"));
    let left_len = pad_len + core_len;
    let closed = c.is_complement_closed();

    // phase 1: left-extendable cores with every left pad that reaches them
    let mut leaves: std::collections::BTreeMap<Vec<u8>, Vec<Vec<u8>>> = Default::default();
    let mut nodes = 0u64;
    for cursor in initial_cursors(c) {
        let mut sink = Leaves { len: left_len, words: Vec::new() };
        let (rest, n) = run_cursor(c, cursor, Some(left_len), budget.saturating_sub(nodes), &mut sink);
        nodes += n;
        if rest.is_some() {
            return Err(over());
        }
        for w in sink.words {
            leaves.entry(w[pad_len..].to_vec()).or_default().push(w);
        }
    }

    // phase 2: keep the cores with some right extension
    let mut cores = BTreeSet::new();
    for (core, lefts) in leaves {
        for left in lefts {
            if right_extends(c, &left, left_len + pad_len, budget, &mut nodes)? {
                cores.insert(Word::from_raw(core.clone(), c.alphabet_size));
                if closed {
                    cores.insert(Word::from_raw(complement_letters(&core), c.alphabet_size));
                }
                break;
            }
        }
    }
    Ok(CoreSet { cores, nodes_explored: nodes })
}

/// Depth-first search for any valid extension of `prefix` to `target`
/// letters; stops at the first one found.
fn right_extends(c: &ConstraintSet, prefix: &[u8], target: usize, budget: u64, nodes: &mut u64) -> Result<bool> {
    let mut path = Path::new(c, target + 1);
    for &a in prefix {
        if !path.push(a) {
            return Ok(false);
        }
    }
    let mut next = 0u8;
    loop {
        if path.len() >= target {
            return Ok(true);
        }
        if *nodes >= budget {
            return Err(Error::Budget(format!("extendable cores: more than {budget} nodes")));
        }
        if (next..c.alphabet_size).any(|a| path.push(a)) {
            *nodes += 1;
            next = 0;
            continue;
        }
        if path.len() <= prefix.len() {
            return Ok(false);
        }
        next = path.pop().expect("path longer than prefix") + 1;
    }
}

#[derive(Clone, Debug, Default)]
struct Leaves {
    len: usize,
    words: Vec<Vec<u8>>,
}

impl dfs::Collector for Leaves {
    fn visit(&mut self, word: &[u8]) {
        if word.len() == self.len {
            self.words.push(word.to_vec());
        }
    }

    fn merge(&mut self, other: Self) {
        self.words.extend(other.words);
    }
}

/// Every valid word of length `len`, in lexicographic order.
pub fn words_of_length(c: &ConstraintSet, len: usize, budget: u64) -> Result<Vec<Word>> {
    c.validate()?;
    let mut sink = Leaves { len, words: Vec::new() };
    let mut nodes = 0u64;
    for cursor in initial_cursors(c) {
        let (rest, n) = run_cursor(c, cursor, Some(len), budget.saturating_sub(nodes), &mut sink);
        nodes += n;
        if rest.is_some() {
            return Err(Error::Budget(format!("word listing: more than {budget} nodes")));
        }
    }
    let mut words: Vec<Vec<u8>> = sink.words;
    if c.is_complement_closed() && len > 0 {
        let comps: Vec<Vec<u8>> = words.iter().map(|w| complement_letters(w)).collect();
        words.extend(comps);
    }
    if len == 0 {
        words = vec![Vec::new()];
    }
    words.sort();
    Ok(words.into_iter().map(|w| Word::from_raw(w, c.alphabet_size)).collect())
}

/// A valid word of length `len` found by depth-first search with letters
/// tried in random order; `None` if no such word exists.
pub fn random_word<R: rand::Rng>(c: &ConstraintSet, len: usize, rng: &mut R, budget: u64) -> Result<Option<Word>> {
    use rand::seq::SliceRandom;
    c.validate()?;
    let mut path = Path::new(c, len + 1);
    // per depth: the letters still to try
    let mut todo: Vec<Vec<u8>> = Vec::with_capacity(len + 1);
    let mut order: Vec<u8> = (0..c.alphabet_size).collect();
    order.shuffle(rng);
    todo.push(order);
    let mut nodes = 0u64;
    while let Some(options) = todo.last_mut() {
        if path.len() == len {
            return Ok(Some(Word::from_raw(path.letters.clone(), c.alphabet_size)));
        }
        if nodes >= budget {
            return Err(Error::Budget(format!("random word: more than {budget} nodes")));
        }
        match options.pop() {
            Some(a) => {
                if path.push(a) {
                    nodes += 1;
                    let mut order: Vec<u8> = (0..c.alphabet_size).collect();
                    order.shuffle(rng);
                    todo.push(order);
                }
            }
            None => {
                todo.pop();
                path.pop();
            }
        }
    }
    Ok(None)
}

/// Replays `letters` through the suffix engine; used by tests and the CLI
/// to double-check witnesses.
pub fn replay_is_valid(c: &ConstraintSet, letters: &[u8]) -> bool {
    let mut path = Path::new(c, letters.len() + 1);
    letters.iter().all(|&a| path.push(a))
}
