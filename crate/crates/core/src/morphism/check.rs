//! Verification of uniform morphisms applied to squarefree ternary words:
//! synchronization, power-freeness of images, the complement-factor bound
//! and the resulting antisquare inventory.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use super::registry::{AntisquareCap, TableRow};
use super::Morphism;
use crate::antisquare::{collect_antisquares, complement_pair_bound, AntisquareInventory};
use crate::error::{domain, Error, Result};
use crate::rational::PowerBound;
use crate::repetition::{shortest_violation, Repetition};
use crate::word::Word;

/// True when no factor of `letters` is a square.
pub fn is_squarefree(letters: &[u8]) -> bool {
    (1..=letters.len()).all(|end| !ends_with_square(&letters[..end]))
}

fn ends_with_square(letters: &[u8]) -> bool {
    let n = letters.len();
    (1..=n / 2).any(|p| letters[n - 2 * p..n - p] == letters[n - p..])
}

/// Squarefree words over `{0,1,2}` of a fixed length, in lexicographic order.
#[derive(Clone, Debug)]
pub struct SquarefreeWords {
    len: usize,
    word: Vec<u8>,
    started: bool,
}

impl Iterator for SquarefreeWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.len == 0 {
            if self.started {
                return None;
            }
            self.started = true;
            return Some(Word::empty(3));
        }
        if !self.started {
            self.started = true;
            self.word.push(0);
        } else if !self.advance() {
            return None;
        }
        loop {
            if ends_with_square(&self.word) {
                if !self.advance() {
                    return None;
                }
            } else if self.word.len() == self.len {
                return Some(Word::from_raw(self.word.clone(), 3));
            } else {
                self.word.push(0);
            }
        }
    }
}

impl SquarefreeWords {
    /// Moves to the next candidate in lexicographic order, popping exhausted
    /// positions.
    fn advance(&mut self) -> bool {
        while let Some(last) = self.word.pop() {
            if last < 2 {
                self.word.push(last + 1);
                return true;
            }
        }
        false
    }
}

pub fn squarefree_ternary_words(len: usize) -> SquarefreeWords {
    SquarefreeWords { len, word: Vec::with_capacity(len), started: false }
}

fn ternary_domain(m: &Morphism) -> Result<()> {
    if m.domain_alphabet() != 3 || m.target_alphabet() != 2 {
        return Err(domain("expected a morphism from ternary to binary words"));
    }
    Ok(())
}

/// Outcome of checking images of every squarefree word of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageCheck {
    pub bound: PowerBound,
    pub t: usize,
    pub words_checked: usize,
    /// First (lexicographic) preimage whose image breaks the bound.
    pub violation: Option<(Word, Repetition)>,
}

impl ImageCheck {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that the image of every squarefree ternary word of length `t`
/// satisfies `bound`.
pub fn image_power_check(m: &Morphism, bound: &PowerBound, t: usize) -> Result<ImageCheck> {
    ternary_domain(m)?;
    let words: Vec<Word> = squarefree_ternary_words(t).collect();
    let violation = words.par_iter().find_map_first(|u| {
        let image = m.apply_letters(u.letters());
        shortest_violation(&image, bound).map(|rep| (u.clone(), rep))
    });
    Ok(ImageCheck { bound: *bound, t, words_checked: words.len(), violation })
}

/// How the complement-factor bound is searched for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizationRule {
    pub first_length: usize,
    /// Consecutive preimage lengths that must agree.
    pub agreeing: usize,
    /// The search may not stop before this preimage length.
    pub min_length: usize,
    pub max_length: usize,
}

impl StabilizationRule {
    pub fn with_min_length(min_length: usize) -> StabilizationRule {
        StabilizationRule { first_length: 4, agreeing: 3, min_length, max_length: 24 }
    }
}

/// The longest `v` such that `v` and its complement both occur in images of
/// squarefree words of length `preimage_len`.
fn complement_bound_at(m: &Morphism, preimage_len: usize) -> usize {
    let q = m.uniform_length().expect("uniform");
    // a factor of length L sits inside the image of ceil((L-1)/q)+1 letters,
    // so short windows of the preimages carry every factor up to length 64
    let window = (63usize.div_ceil(q) + 1).min(preimage_len);
    let windows: BTreeSet<&[u8]> = BTreeSet::new();
    let words: Vec<Word> = squarefree_ternary_words(preimage_len).collect();
    let mut windows = windows;
    for w in &words {
        for f in w.letters().windows(window) {
            windows.insert(f);
        }
    }
    let images: Vec<Vec<u8>> = windows.iter().map(|u| m.apply_letters(u)).collect();
    let texts: Vec<&[u8]> = images.iter().map(Vec::as_slice).collect();
    let bound = complement_pair_bound(&texts);
    if bound < 64 || window == preimage_len {
        return bound;
    }
    let images: Vec<Vec<u8>> = words.iter().map(|u| m.apply_letters(u.letters())).collect();
    let texts: Vec<&[u8]> = images.iter().map(Vec::as_slice).collect();
    complement_pair_bound(&texts)
}

/// The stabilized complement-factor bound together with the value observed
/// at each preimage length.
pub fn complement_factor_bound(m: &Morphism, rule: &StabilizationRule) -> Result<(usize, Vec<(usize, usize)>)> {
    ternary_domain(m)?;
    if !m.is_synchronizing()? {
        return Err(domain("complement-factor bound needs a synchronizing morphism"));
    }
    let mut series: Vec<(usize, usize)> = Vec::new();
    for len in rule.first_length..=rule.max_length {
        series.push((len, complement_bound_at(m, len)));
        let tail = &series[series.len().saturating_sub(rule.agreeing)..];
        if len >= rule.min_length && tail.len() == rule.agreeing && tail.iter().all(|&(_, b)| b == tail[0].1) {
            return Ok((tail[0].1, series));
        }
    }
    Err(Error::Budget(format!(
        "complement-factor bound did not stabilize by preimage length {}: {series:?}",
        rule.max_length
    )))
}

/// Distinct antisquares of length at most `window` in the images of
/// squarefree ternary words long enough to contain them.
pub fn morphic_antisquare_inventory(m: &Morphism, window: usize) -> Result<AntisquareInventory> {
    ternary_domain(m)?;
    let q = m.uniform_length().ok_or_else(|| domain("antisquare inventory of a morphism needs uniform images"))?;
    let preimage_len = window.div_ceil(q) + 2;
    let words: Vec<Word> = squarefree_ternary_words(preimage_len).collect();
    let parts: Vec<AntisquareInventory> = words
        .par_iter()
        .map(|u| {
            let mut inv = AntisquareInventory::default();
            collect_antisquares(&m.apply_letters(u.letters()), window / 2, &mut inv);
            inv
        })
        .collect();
    let mut inv = AntisquareInventory::default();
    for p in &parts {
        inv.merge(p);
    }
    Ok(inv)
}

/// The three checks for one published row.
#[derive(Clone, Debug)]
pub struct MorphismCheckReport {
    pub row: TableRow,
    pub synchronizing: bool,
    pub image_check: ImageCheck,
    pub complement_factor_bound: usize,
    pub bound_series: Vec<(usize, usize)>,
    pub inventory: AntisquareInventory,
}

impl MorphismCheckReport {
    pub fn cap_respected(&self) -> bool {
        match self.row.cap {
            AntisquareCap::MaxOrderBelow(l) => self.inventory.max_order < l,
            AntisquareCap::MaxDistinct(n) => self.inventory.count() <= n,
        }
    }

    pub fn matches_table(&self) -> bool {
        self.complement_factor_bound == self.row.m
    }

    pub fn passed(&self) -> bool {
        self.synchronizing && self.image_check.ok() && self.matches_table() && self.cap_respected()
    }
}

impl fmt::Display for MorphismCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cap = match self.row.cap {
            AntisquareCap::MaxOrderBelow(l) => format!("order < {l}"),
            AntisquareCap::MaxDistinct(n) => format!("count <= {n}"),
        };
        writeln!(f, "morphism: {}", self.row.morphism)?;
        writeln!(f, "anchor: {}", self.row.anchor())?;
        writeln!(f, "synchronizing: {}", self.synchronizing)?;
        writeln!(f, "bound: {}", self.image_check.bound)?;
        writeln!(f, "t: {}", self.image_check.t)?;
        writeln!(f, "words_checked: {}", self.image_check.words_checked)?;
        writeln!(f, "image_bound_ok: {}", self.image_check.ok())?;
        if let Some((u, rep)) = &self.image_check.violation {
            writeln!(f, "image_violation: {u} period {} length {}", rep.period, rep.length)?;
        }
        writeln!(f, "complement_factor_bound: {}", self.complement_factor_bound)?;
        writeln!(f, "published_m: {}", self.row.m)?;
        writeln!(f, "antisquares: {}", self.inventory.count())?;
        writeln!(f, "max_order: {}", self.inventory.max_order)?;
        writeln!(f, "cap: {cap}")?;
        writeln!(f, "cap_respected: {}", self.cap_respected())?;
        write!(f, "passed: {}", self.passed())
    }
}

/// Runs every check for a published row.
pub fn verify_morphism(m: &Morphism, row: &TableRow) -> Result<MorphismCheckReport> {
    let synchronizing = m.is_synchronizing()?;
    let image_check = image_power_check(m, &row.bound(), row.t)?;
    let (bound, bound_series) = complement_factor_bound(m, &StabilizationRule::with_min_length(row.t))?;
    let inventory = morphic_antisquare_inventory(m, 2 * bound)?;
    Ok(MorphismCheckReport {
        row: *row,
        synchronizing,
        image_check,
        complement_factor_bound: bound,
        bound_series,
        inventory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::{registry, TABLE_ROWS};

    fn named(name: &str) -> &'static Morphism {
        registry().morphism(name).unwrap()
    }

    fn row(name: &str) -> &'static TableRow {
        TABLE_ROWS.iter().find(|r| r.morphism == name).unwrap()
    }

    /// Filter over all 3^n words.
    fn brute_squarefree_count(n: usize) -> usize {
        (0..3usize.pow(n as u32))
            .filter(|&code| {
                let letters: Vec<u8> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as u8).collect();
                is_squarefree(&letters)
            })
            .count()
    }

    #[test]
    fn squarefree_counts() {
        assert_eq!(squarefree_ternary_words(1).count(), 3);
        assert_eq!(squarefree_ternary_words(3).count(), 12);
        assert_eq!(brute_squarefree_count(3), 12);
        for n in 0..=9 {
            assert_eq!(squarefree_ternary_words(n).count(), brute_squarefree_count(n), "n = {n}");
        }
        let words: Vec<Word> = squarefree_ternary_words(6).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn power_checks() {
        let ok = image_power_check(named("xi6"), &"7/3+".parse().unwrap(), 14).unwrap();
        assert!(ok.ok());
        let ok = image_power_check(named("zeta10"), &"5/2+".parse().unwrap(), 10).unwrap();
        assert!(ok.ok());
        let bad = image_power_check(named("xi5"), &"2+".parse().unwrap(), 3).unwrap();
        let (u, rep) = bad.violation.expect("a violation");
        let image = named("xi5").apply(&u).unwrap();
        assert!(crate::repetition::has_period(rep.slice(image.letters()), rep.period));
        assert!(rep.length > 2 * rep.period);
    }

    #[test]
    fn small_complement_bounds() {
        let rule = |r: &TableRow| StabilizationRule::with_min_length(r.t);
        assert_eq!(complement_factor_bound(named("xi5"), &rule(row("xi5"))).unwrap().0, 16);
        assert_eq!(complement_factor_bound(named("xi3"), &rule(row("xi3"))).unwrap().0, 6);
        assert_eq!(complement_factor_bound(named("zeta16"), &rule(row("zeta16"))).unwrap().0, 13);
    }

    #[test]
    fn inventories_respect_caps() {
        let inv = morphic_antisquare_inventory(named("zeta3"), 8).unwrap();
        assert!(inv.count() <= 3);
        let inv = morphic_antisquare_inventory(named("xi6"), 52).unwrap();
        assert!(inv.max_order <= 5);
    }

    #[test]
    fn rejects_wrong_domains() {
        assert!(image_power_check(named("phi"), &"3".parse().unwrap(), 3).is_err());
        assert!(morphic_antisquare_inventory(named("h"), 4).is_err());
    }
}
