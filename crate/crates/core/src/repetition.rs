//! Periods, exponents and repetitions of finite words.
//!
//! Decisions about powers are made with [`Rational`] arithmetic only. Long
//! words are handled by enumerating square runs from sample positions: a run
//! of period `p` and length at least `2p` always contains a position `j`
//! divisible by `p` with `j + p` still inside the run, so extending from every
//! such `(j, j+p)` pair in both directions finds each run.

use crate::error::{domain, Result};
use crate::rational::{PowerBound, Rational};
use crate::word::Word;

/// A factor `w[start .. start+length]` with period `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Repetition {
    pub start: usize,
    pub period: usize,
    pub length: usize,
}

impl Repetition {
    pub fn exponent(&self) -> Rational {
        Rational::ratio(self.length, self.period)
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn slice<'a>(&self, letters: &'a [u8]) -> &'a [u8] {
        &letters[self.start..self.end()]
    }
}

/// Least period of a nonempty slice (border via the failure function).
pub fn smallest_period_of(letters: &[u8]) -> usize {
    let n = letters.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && letters[i] != letters[k] {
            k = fail[k - 1];
        }
        if letters[i] == letters[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

pub fn has_period(letters: &[u8], p: usize) -> bool {
    p >= 1 && letters.iter().zip(&letters[p.min(letters.len())..]).all(|(a, b)| a == b)
}

pub fn smallest_period(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(domain("period of the empty word"));
    }
    Ok(smallest_period_of(w.letters()))
}

pub fn exponent(w: &Word) -> Result<Rational> {
    let p = smallest_period(w)?;
    Ok(Rational::ratio(w.len(), p))
}

/// Maximal runs of period `p` with length at least `2p`, in order of start.
/// The period need not be the least period of the run.
pub(crate) fn square_runs_with_period(letters: &[u8], p: usize) -> Vec<Repetition> {
    let n = letters.len();
    let mut out = Vec::new();
    if p == 0 || 2 * p > n {
        return out;
    }
    let mut j = 0;
    while j + p < n {
        let mut fwd = 0;
        while j + p + fwd < n && letters[j + fwd] == letters[j + p + fwd] {
            fwd += 1;
        }
        let mut back = 0;
        while back < j && letters[j - back - 1] == letters[j + p - back - 1] {
            back += 1;
        }
        let length = p + fwd + back;
        let start = j - back;
        let end = start + length;
        if length >= 2 * p {
            out.push(Repetition { start, period: p, length });
        }
        // every sample with j' + p <= end lies in the same run
        let next = if length >= 2 * p { end + 1 - p } else { j + 1 };
        j = next.div_ceil(p).max(j / p + 1) * p;
    }
    out
}

fn is_least_period_of_run(letters: &[u8], run: &Repetition) -> bool {
    // length >= 2p, so any smaller period divides p (Fine–Wilf)
    let s = run.slice(letters);
    let p = run.period;
    (1..p).filter(|d| p.is_multiple_of(*d)).all(|d| !has_period(s, d))
}

/// All maximal repetitions of exponent ≥ 2 whose period is least.
pub fn square_runs(letters: &[u8]) -> Vec<Repetition> {
    let mut out: Vec<Repetition> = (1..=letters.len() / 2)
        .flat_map(|p| square_runs_with_period(letters, p))
        .filter(|r| is_least_period_of_run(letters, r))
        .collect();
    out.sort();
    out
}

/// For every `p`, the maximal stretches of `w[i] = w[i+p]`, reported as
/// repetitions of length `p + stretch`. Quadratic; used below exponent 2.
fn all_period_stretches(letters: &[u8], mut visit: impl FnMut(Repetition)) {
    let n = letters.len();
    for p in 1..=n {
        let mut i = 0;
        while i + p <= n {
            let start = i;
            while i + p < n && letters[i] == letters[i + p] {
                i += 1;
            }
            visit(Repetition { start, period: p, length: p + i - start });
            i += 1;
        }
    }
}

/// Largest factor exponent with a witness.
pub fn critical_exponent(w: &Word) -> Result<(Rational, Repetition)> {
    if w.is_empty() {
        return Err(domain("critical exponent of the empty word"));
    }
    Ok(critical_exponent_of(w.letters()))
}

pub(crate) fn critical_exponent_of(letters: &[u8]) -> (Rational, Repetition) {
    let mut best: Option<Repetition> = None;
    let mut consider = |r: Repetition| {
        let better = match &best {
            None => true,
            Some(b) => {
                let (e, eb) = (r.exponent(), b.exponent());
                e > eb || (e == eb && (r.start, r.period) < (b.start, b.period))
            }
        };
        if better {
            best = Some(r);
        }
    };
    let runs = (1..=letters.len() / 2).flat_map(|p| square_runs_with_period(letters, p));
    let mut any = false;
    for r in runs {
        any = true;
        consider(r);
    }
    if !any {
        all_period_stretches(letters, &mut consider);
    }
    let best = best.expect("nonempty word");
    (best.exponent(), best)
}

/// Maximal repetitions with exponent at least `min_exponent`: not extendable
/// with the same period, and the period is the least period of the factor.
pub fn maximal_repetitions(w: &Word, min_exponent: Rational) -> Vec<Repetition> {
    let letters = w.letters();
    if min_exponent >= Rational::integer(2) {
        return square_runs(letters).into_iter().filter(|r| r.exponent() >= min_exponent).collect();
    }
    let mut out = Vec::new();
    all_period_stretches(letters, |r| {
        if r.exponent() >= min_exponent && smallest_period_of(r.slice(letters)) == r.period {
            out.push(r);
        }
    });
    out.sort();
    out
}

/// Result of checking a word against a [`PowerBound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundCheck {
    Satisfied,
    /// A shortest forbidden factor.
    Violated(Repetition),
}

impl BoundCheck {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, BoundCheck::Satisfied)
    }
}

pub fn satisfies(w: &Word, bound: &PowerBound) -> BoundCheck {
    shortest_violation(w.letters(), bound).map_or(BoundCheck::Satisfied, BoundCheck::Violated)
}

pub(crate) fn shortest_violation(letters: &[u8], bound: &PowerBound) -> Option<Repetition> {
    fn take(best: &mut Option<Repetition>, cand: Repetition) {
        if best.is_none_or(|b| (cand.length, cand.start) < (b.length, b.start)) {
            *best = Some(cand);
        }
    }
    let n = letters.len();
    let mut best: Option<Repetition> = None;
    if bound.needs_only_squares() {
        for p in 1..=n / 2 {
            let need = bound.min_violating_length(p);
            if need > n || best.is_some_and(|b| b.length < need) {
                break;
            }
            for r in square_runs_with_period(letters, p) {
                if r.length >= need {
                    take(&mut best, Repetition { start: r.start, period: p, length: need });
                }
            }
        }
    } else {
        all_period_stretches(letters, |r| {
            let need = bound.min_violating_length(r.period);
            if r.length >= need {
                take(&mut best, Repetition { start: r.start, period: r.period, length: need });
            }
        });
    }
    best
}

/// Checks only the suffixes of `letters`: the factors created by appending
/// the last letter. Returns the shortest offending suffix.
pub fn suffix_violation(letters: &[u8], bound: &PowerBound) -> Option<Repetition> {
    let n = letters.len();
    let last = n.checked_sub(1)?;
    for p in 1..=n {
        let need = bound.min_violating_length(p);
        if need > n {
            break;
        }
        if (0..need - p).all(|j| letters[last - j] == letters[last - j - p]) {
            return Some(Repetition { start: n - need, period: p, length: need });
        }
    }
    None
}

/// Shortest-period table for the incremental suffix check, so that the inner
/// search loop avoids recomputing thresholds.
#[derive(Clone, Debug)]
pub struct SuffixPowerCheck {
    bound: PowerBound,
    /// `need[p]` = shortest forbidden length for period `p`.
    need: Vec<usize>,
}

impl SuffixPowerCheck {
    pub fn new(bound: PowerBound, max_len: usize) -> SuffixPowerCheck {
        let need = (0..=max_len).map(|p| if p == 0 { usize::MAX } else { bound.min_violating_length(p) }).collect();
        SuffixPowerCheck { bound, need }
    }

    pub fn bound(&self) -> &PowerBound {
        &self.bound
    }

    /// Same contract as [`suffix_violation`].
    #[inline]
    pub fn check(&self, letters: &[u8]) -> Option<Repetition> {
        let n = letters.len();
        if n == 0 {
            return None;
        }
        let last = n - 1;
        let a = letters[last];
        for p in 1..n {
            let need = match self.need.get(p) {
                Some(&need) => need,
                None => self.bound.min_violating_length(p),
            };
            if need > n {
                break;
            }
            if letters[last - p] != a {
                continue;
            }
            if (1..need - p).all(|j| letters[last - j] == letters[last - j - p]) {
                return Some(Repetition { start: n - need, period: p, length: need });
            }
        }
        None
    }
}
