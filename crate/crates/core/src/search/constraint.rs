use std::fmt;

use crate::antisquare::inventory_of;
use crate::error::{domain, Result};
use crate::rational::PowerBound;
use crate::repetition::{shortest_violation, Repetition};
use crate::word::{complement_letters, Word};

/// Restrictions on the words a search may visit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    pub power: Option<PowerBound>,
    /// Forbid antisquares of order ≥ this value.
    pub max_antisquare_order: Option<usize>,
    /// Allow at most this many distinct antisquare factors.
    pub max_distinct_antisquares: Option<usize>,
    pub forbidden_factors: Vec<Word>,
    pub alphabet_size: u8,
}

impl Default for ConstraintSet {
    fn default() -> Self {
        ConstraintSet {
            power: None,
            max_antisquare_order: None,
            max_distinct_antisquares: None,
            forbidden_factors: Vec::new(),
            alphabet_size: 2,
        }
    }
}

impl ConstraintSet {
    pub fn binary() -> ConstraintSet {
        ConstraintSet::default()
    }

    pub fn with_power(mut self, bound: PowerBound) -> Self {
        self.power = Some(bound);
        self
    }

    /// No antisquare of order ≥ `order`.
    pub fn with_max_order(mut self, order: usize) -> Self {
        self.max_antisquare_order = Some(order);
        self
    }

    pub fn with_max_distinct(mut self, count: usize) -> Self {
        self.max_distinct_antisquares = Some(count);
        self
    }

    pub fn forbidding<I, S>(mut self, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for f in factors {
            let w = Word::parse(f.as_ref(), self.alphabet_size)?;
            if w.is_empty() {
                return Err(domain("the empty word cannot be forbidden"));
            }
            self.forbidden_factors.push(w);
        }
        Ok(self)
    }

    /// Good words: only `01` and `10` as antisquares.
    pub fn good() -> ConstraintSet {
        ConstraintSet::binary().with_max_order(2)
    }

    fn has_antisquare_rules(&self) -> bool {
        self.max_antisquare_order.is_some() || self.max_distinct_antisquares.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.alphabet_size) {
            return Err(domain("alphabet size must be 2 or 3"));
        }
        if self.power.is_none() && !self.has_antisquare_rules() && self.forbidden_factors.is_empty() {
            return Err(domain("a constraint set needs at least one constraint"));
        }
        if self.has_antisquare_rules() && self.alphabet_size != 2 {
            return Err(domain("antisquare constraints need the binary alphabet"));
        }
        Ok(())
    }

    /// Every constraint is invariant under complementing the word, so the
    /// search may fix the first letter.
    pub fn is_complement_closed(&self) -> bool {
        self.alphabet_size == 2
            && self.forbidden_factors.iter().all(|f| {
                let c = complement_letters(f.letters());
                self.forbidden_factors.iter().any(|g| g.letters() == c.as_slice())
            })
    }

    pub fn check_word(&self, w: &Word) -> std::result::Result<(), Violation> {
        self.check_letters(w.letters())
    }

    pub(crate) fn check_letters(&self, letters: &[u8]) -> std::result::Result<(), Violation> {
        if let Some(bad) = letters.iter().find(|&&a| a >= self.alphabet_size) {
            return Err(Violation::Alphabet(*bad));
        }
        for f in &self.forbidden_factors {
            if let Some(pos) = letters.windows(f.len()).position(|x| x == f.letters()) {
                return Err(Violation::Forbidden { factor: f.clone(), start: pos });
            }
        }
        if let Some(bound) = &self.power {
            if let Some(rep) = shortest_violation(letters, bound) {
                return Err(Violation::Power { bound: *bound, repetition: rep });
            }
        }
        if self.has_antisquare_rules() {
            let inv = inventory_of(letters);
            if let Some(l) = self.max_antisquare_order {
                if let Some(big) = inv.sorted().into_iter().find(|w| w.len() / 2 >= l) {
                    return Err(Violation::AntisquareOrder { factor: big.clone(), limit: l });
                }
            }
            if let Some(n) = self.max_distinct_antisquares {
                if inv.count() > n {
                    return Err(Violation::AntisquareCount {
                        found: inv.sorted().into_iter().cloned().collect(),
                        limit: n,
                    });
                }
            }
        }
        Ok(())
    }

    /// Stable one-line description, also used to tag checkpoints.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("alphabet={}", self.alphabet_size)];
        if let Some(b) = &self.power {
            parts.push(format!("beta={b}"));
        }
        if let Some(l) = self.max_antisquare_order {
            parts.push(format!("max-order<{l}"));
        }
        if let Some(n) = self.max_distinct_antisquares {
            parts.push(format!("max-count={n}"));
        }
        if !self.forbidden_factors.is_empty() {
            let f: Vec<String> = self.forbidden_factors.iter().map(Word::to_string).collect();
            parts.push(format!("forbid={}", f.join(",")));
        }
        parts.join(" ")
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Why a word fails a [`ConstraintSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Alphabet(u8),
    Forbidden { factor: Word, start: usize },
    Power { bound: PowerBound, repetition: Repetition },
    AntisquareOrder { factor: Word, limit: usize },
    AntisquareCount { found: Vec<Word>, limit: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Alphabet(a) => write!(f, "letter {a} outside the alphabet"),
            Violation::Forbidden { factor, start } => write!(f, "forbidden factor {factor} at {start}"),
            Violation::Power { bound, repetition } => write!(
                f,
                "factor at {} of length {} has period {} (bound {bound})",
                repetition.start, repetition.length, repetition.period
            ),
            Violation::AntisquareOrder { factor, limit } => {
                write!(f, "antisquare {factor} has order {} >= {limit}", factor.len() / 2)
            }
            Violation::AntisquareCount { found, limit } => {
                let list: Vec<String> = found.iter().map(Word::to_string).collect();
                write!(f, "{} distinct antisquares > {limit}: {}", found.len(), list.join(","))
            }
        }
    }
}

/// A suffix-only view of the constraints for depth-first search: each
/// appended letter is checked only against the factors it creates.
#[derive(Clone, Debug)]
pub(crate) struct Path<'c> {
    constraints: &'c ConstraintSet,
    power: Option<crate::repetition::SuffixPowerCheck>,
    pub(crate) letters: Vec<u8>,
    /// Distinct antisquares on the path as `(start, order)` of their first
    /// occurrence, in insertion order.
    antisquares: Vec<(usize, usize)>,
    /// How many antisquares each position introduced.
    added: Vec<u8>,
}

impl<'c> Path<'c> {
    pub(crate) fn new(constraints: &'c ConstraintSet, capacity: usize) -> Path<'c> {
        Path {
            constraints,
            power: constraints.power.map(|b| crate::repetition::SuffixPowerCheck::new(b, capacity.max(16))),
            letters: Vec::with_capacity(capacity),
            antisquares: Vec::new(),
            added: Vec::with_capacity(capacity),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.letters.len()
    }

    /// Appends `a` if the extended word still satisfies every constraint.
    pub(crate) fn push(&mut self, a: u8) -> bool {
        self.letters.push(a);
        if self.suffix_ok() {
            true
        } else {
            self.letters.pop();
            false
        }
    }

    pub(crate) fn pop(&mut self) -> Option<u8> {
        let a = self.letters.pop()?;
        let added = self.added.pop().unwrap_or(0) as usize;
        self.antisquares.truncate(self.antisquares.len() - added);
        Some(a)
    }

    fn suffix_ok(&mut self) -> bool {
        let w = &self.letters;
        let n = w.len();
        for f in &self.constraints.forbidden_factors {
            if w.ends_with(f.letters()) {
                return false;
            }
        }
        if let Some(check) = &self.power {
            if check.check(w).is_some() {
                return false;
            }
        }
        let mut added = 0u8;
        if self.constraints.has_antisquare_rules() {
            let last = n - 1;
            let cap_order = self.constraints.max_antisquare_order.unwrap_or(usize::MAX);
            let cap_count = self.constraints.max_distinct_antisquares.unwrap_or(usize::MAX);
            for k in 1..=n / 2 {
                if w[last] == w[last - k] {
                    continue;
                }
                let start = n - 2 * k;
                if !(1..k).all(|j| w[last - j] != w[last - j - k]) {
                    continue;
                }
                if k >= cap_order {
                    self.antisquares.truncate(self.antisquares.len() - added as usize);
                    return false;
                }
                if cap_count != usize::MAX {
                    let suffix = &w[start..];
                    let known = self.antisquares.iter().any(|&(s, o)| o == k && &w[s..s + 2 * k] == suffix);
                    if !known {
                        self.antisquares.push((start, k));
                        added += 1;
                        if self.antisquares.len() > cap_count {
                            self.antisquares.truncate(self.antisquares.len() - added as usize);
                            return false;
                        }
                    }
                }
            }
        }
        self.added.push(added);
        true
    }
}
