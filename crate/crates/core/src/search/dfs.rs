use rayon::prelude::*;

use super::constraint::{ConstraintSet, Path};
use crate::error::Result;

/// A resumable piece of depth-first search: the subtree below
/// `path[..root_len]`, positioned at `path` and about to try letters
/// from `next` upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cursor {
    pub root_len: usize,
    pub path: Vec<u8>,
    pub next: u8,
    /// False until the root word itself has been counted.
    pub visited_root: bool,
}

impl Cursor {
    pub fn root(prefix: Vec<u8>) -> Cursor {
        Cursor { root_len: prefix.len(), path: prefix, next: 0, visited_root: false }
    }
}

/// Accumulates what a search wants to know about visited words.
pub(crate) trait Collector: Send + Clone + Default {
    fn visit(&mut self, word: &[u8]);
    fn merge(&mut self, other: Self);
}

/// Longest word, ties broken towards the lexicographically least.
#[derive(Clone, Debug, Default)]
pub(crate) struct Longest {
    pub(crate) best: Vec<u8>,
}

impl Collector for Longest {
    fn visit(&mut self, word: &[u8]) {
        // lexicographic DFS order: the first word of a new length is the least
        if word.len() > self.best.len() {
            self.best = word.to_vec();
        }
    }

    fn merge(&mut self, other: Self) {
        if other.best.len() > self.best.len() || (other.best.len() == self.best.len() && other.best < self.best) {
            self.best = other.best;
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Counts {
    pub(crate) counts: Vec<u64>,
}

impl Collector for Counts {
    fn visit(&mut self, word: &[u8]) {
        if self.counts.len() <= word.len() {
            self.counts.resize(word.len() + 1, 0);
        }
        self.counts[word.len()] += 1;
    }

    fn merge(&mut self, other: Self) {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Runs one cursor for at most `quota` expansions. Returns the cursor to
/// continue from, or `None` once its subtree is closed.
pub(crate) fn run_cursor<C: Collector>(
    c: &ConstraintSet,
    mut cursor: Cursor,
    depth_limit: Option<usize>,
    quota: u64,
    out: &mut C,
) -> (Option<Cursor>, u64) {
    let capacity = depth_limit.unwrap_or(cursor.path.len() + 512).max(cursor.path.len() + 1);
    let mut path = Path::new(c, capacity);
    for &a in &cursor.path {
        if !path.push(a) {
            return (None, 0);
        }
    }
    let mut nodes = 0u64;
    if !cursor.visited_root {
        cursor.visited_root = true;
        nodes += 1;
        out.visit(&path.letters);
    }
    let alphabet = c.alphabet_size;
    let mut next = cursor.next;
    loop {
        if nodes >= quota {
            let paused = Cursor { root_len: cursor.root_len, path: path.letters.clone(), next, visited_root: true };
            return (Some(paused), nodes);
        }
        let mut pushed = false;
        if depth_limit.is_none_or(|d| path.len() < d) {
            for a in next..alphabet {
                if path.push(a) {
                    pushed = true;
                    break;
                }
            }
        }
        if pushed {
            nodes += 1;
            out.visit(&path.letters);
            next = 0;
            continue;
        }
        if path.len() <= cursor.root_len {
            return (None, nodes);
        }
        next = path.pop().expect("path longer than root") + 1;
    }
}

/// Splits off the shallowest untried siblings of a cursor as new cursors.
/// The original keeps whatever remains (and may become empty, in which case
/// `keep` is false).
fn split(cur: &mut Cursor, alphabet: u8, depth_limit: Option<usize>) -> (Vec<Cursor>, bool) {
    while cur.root_len < cur.path.len() {
        let a = cur.path[cur.root_len];
        let prefix = &cur.path[..cur.root_len];
        let spawned: Vec<Cursor> = (a + 1..alphabet)
            .map(|b| {
                let mut p = prefix.to_vec();
                p.push(b);
                Cursor::root(p)
            })
            .collect();
        cur.root_len += 1;
        if !spawned.is_empty() {
            return (spawned, true);
        }
    }
    if depth_limit.is_some_and(|d| cur.path.len() >= d) {
        return (Vec::new(), false);
    }
    let children = (cur.next..alphabet)
        .map(|b| {
            let mut p = cur.path.clone();
            p.push(b);
            Cursor::root(p)
        })
        .collect();
    (children, false)
}

/// Search knobs shared by the drivers.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of expanded nodes.
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    /// Expansions between checkpoints, summed over workers.
    pub round_nodes: u64,
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> SearchOptions {
        SearchOptions { budget, jobs: 1, round_nodes: 50_000_000 }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }
}

/// Mid-search state handed to the round callback and stored in checkpoints.
#[derive(Clone, Debug)]
pub(crate) struct Progress<C> {
    pub(crate) collected: C,
    pub(crate) nodes: u64,
    pub(crate) pending: Vec<Cursor>,
}

pub(crate) fn drive<C: Collector>(
    c: &ConstraintSet,
    mut state: Progress<C>,
    depth_limit: Option<usize>,
    opts: &SearchOptions,
    on_round: &mut dyn FnMut(&Progress<C>) -> Result<()>,
) -> Result<Progress<C>> {
    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| crate::error::Error::Domain(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    while !state.pending.is_empty() && state.nodes < opts.budget {
        if opts.jobs > 1 {
            rebalance(&mut state.pending, opts.jobs * 4, c.alphabet_size, depth_limit);
        }
        let left = opts.budget - state.nodes;
        let per_round = opts.round_nodes.min(left).max(1);
        let quota = (per_round / state.pending.len() as u64).max(1);
        let work = std::mem::take(&mut state.pending);
        let runs: Vec<(Option<Cursor>, u64, C)> = match &pool {
            Some(pool) => pool.install(|| {
                work.into_par_iter()
                    .map(|cur| {
                        let mut local = C::default();
                        let (rest, n) = run_cursor(c, cur, depth_limit, quota, &mut local);
                        (rest, n, local)
                    })
                    .collect()
            }),
            None => work
                .into_iter()
                .map(|cur| {
                    let mut local = C::default();
                    let (rest, n) = run_cursor(c, cur, depth_limit, quota, &mut local);
                    (rest, n, local)
                })
                .collect(),
        };
        for (rest, n, local) in runs {
            state.nodes += n;
            state.collected.merge(local);
            state.pending.extend(rest);
        }
        on_round(&state)?;
    }
    Ok(state)
}

fn rebalance(pending: &mut Vec<Cursor>, target: usize, alphabet: u8, depth_limit: Option<usize>) {
    let mut i = 0;
    while pending.len() < target && i < pending.len() {
        if !pending[i].visited_root {
            i += 1;
            continue;
        }
        let (spawned, keep) = split(&mut pending[i], alphabet, depth_limit);
        if !keep {
            pending.remove(i);
        }
        pending.extend(spawned);
    }
}
