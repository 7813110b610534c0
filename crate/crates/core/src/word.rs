//! Finite words over a small alphabet and their elementary combinatorics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A finite word over `{0, …, alphabet-1}` with `alphabet ∈ {2, 3}`.
///
/// The alphabet is part of the value: a ternary word that happens to use only
/// `0` and `1` is still ternary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: u8,
}

impl Word {
    /// Builds a word, checking every letter against the alphabet.
    pub fn new(letters: Vec<u8>, alphabet: u8) -> Result<Word> {
        if !(2..=3).contains(&alphabet) {
            return Err(domain(format!("alphabet size {alphabet} not in {{2,3}}")));
        }
        if let Some(&bad) = letters.iter().find(|&&a| a >= alphabet) {
            return Err(domain(format!("letter {bad} outside alphabet of size {alphabet}")));
        }
        Ok(Word { letters, alphabet })
    }

    pub fn empty(alphabet: u8) -> Word {
        Word { letters: Vec::new(), alphabet }
    }

    /// Parses a binary digit string.
    pub fn binary(s: &str) -> Result<Word> {
        Word::parse(s, 2)
    }

    /// Parses a ternary digit string.
    pub fn ternary(s: &str) -> Result<Word> {
        Word::parse(s, 3)
    }

    pub fn parse(s: &str, alphabet: u8) -> Result<Word> {
        let letters = s
            .trim()
            .bytes()
            .map(|b| match b {
                b'0'..=b'9' if b - b'0' < alphabet => Ok(b - b'0'),
                _ => Err(Error::Parse(format!(
                    "{:?} is not a letter of the size-{alphabet} alphabet in {s:?}",
                    b as char
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Word { letters, alphabet })
    }

    pub(crate) fn from_raw(letters: Vec<u8>, alphabet: u8) -> Word {
        debug_assert!(letters.iter().all(|&a| a < alphabet));
        Word { letters, alphabet }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet == 2
    }

    /// The factor `self[start .. start+len]`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word::from_raw(self.letters[start..start + len].to_vec(), self.alphabet)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_raw(letters, self.alphabet.max(other.alphabet))
    }

    /// Letterwise `0 ↔ 1` flip.
    pub fn complement(&self) -> Result<Word> {
        if !self.is_binary() {
            return Err(domain("complement is only defined for binary words"));
        }
        Ok(Word::from_raw(complement_letters(&self.letters), 2))
    }

    /// Lengths of the maximal blocks of equal letters.
    pub fn run_length_encoding(&self) -> Result<RunLengthEncoding> {
        let (&first_letter, _) =
            self.letters.split_first().ok_or_else(|| domain("run-length encoding of the empty word"))?;
        let runs = self.letters.chunk_by(|a, b| a == b).map(|block| block.len()).collect();
        Ok(RunLengthEncoding { runs, first_letter })
    }

    /// All `|w|` cyclic shifts in rotation order, starting with `w` itself.
    pub fn conjugates(&self) -> Result<Vec<Word>> {
        if self.is_empty() {
            return Err(domain("conjugates of the empty word"));
        }
        Ok((0..self.len())
            .map(|i| {
                let mut letters = self.letters[i..].to_vec();
                letters.extend_from_slice(&self.letters[..i]);
                Word::from_raw(letters, self.alphabet)
            })
            .collect())
    }

    /// Every distinct nonempty factor of length at most `max_len`.
    pub fn factor_set(&self, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for len in 1..=max_len.min(self.len()) {
            for window in self.letters.windows(len) {
                out.insert(Word::from_raw(window.to_vec(), self.alphabet));
            }
        }
        out
    }

    /// Distinct factors of exactly length `len`.
    pub fn factors_of_length(&self, len: usize) -> BTreeSet<Word> {
        if len == 0 || len > self.len() {
            return BTreeSet::new();
        }
        self.letters.windows(len).map(|w| Word::from_raw(w.to_vec(), self.alphabet)).collect()
    }

    /// True when `needle` occurs as a factor.
    pub fn contains(&self, needle: &[u8]) -> bool {
        needle.is_empty() || self.letters.windows(needle.len()).any(|w| w == needle)
    }
}

pub(crate) fn complement_letters(letters: &[u8]) -> Vec<u8> {
    letters.iter().map(|&a| a ^ 1).collect()
}

/// Renders letters as a digit string.
pub fn digits(letters: &[u8]) -> String {
    letters.iter().map(|&a| char::from(b'0' + a)).collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?}/{})", digits(&self.letters), self.alphabet)
    }
}

/// Parses a binary word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::binary(s)
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.letters
    }
}

/// Block lengths of a word together with its first letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthEncoding {
    pub runs: Vec<usize>,
    pub first_letter: u8,
}

impl RunLengthEncoding {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// Reconstructs a binary word.
    pub fn decode(&self) -> Word {
        let mut letters = Vec::with_capacity(self.runs.iter().sum());
        let mut a = self.first_letter;
        for &r in &self.runs {
            letters.extend(std::iter::repeat_n(a, r));
            a ^= 1;
        }
        Word::from_raw(letters, 2)
    }
}

/// Writes a factor set as sorted newline-delimited digit strings (shortlex).
pub fn render_factor_set<'a>(set: impl IntoIterator<Item = &'a Word>) -> String {
    let mut words: Vec<&Word> = set.into_iter().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out = String::new();
    for w in words {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::binary(s).unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(w("0110").complement().unwrap(), w("1001"));
        assert_eq!(w("").complement().unwrap(), w(""));
        assert_eq!(w("001011").complement().unwrap().complement().unwrap(), w("001011"));
        assert!(Word::ternary("012").unwrap().complement().is_err());
    }

    #[test]
    fn run_length_examples() {
        let r = w("011100").run_length_encoding().unwrap();
        assert_eq!((r.runs.as_slice(), r.first_letter), (&[1, 3, 2][..], 0));
        let r = w("0001011101").run_length_encoding().unwrap();
        assert_eq!(r.runs, vec![3, 1, 1, 3, 1, 1]);
        assert_eq!(r.first_letter, 0);
        let r = w("0").run_length_encoding().unwrap();
        assert_eq!(r.runs, vec![1]);
        assert!(w("").run_length_encoding().is_err());
        assert_eq!(w("0001011101").run_length_encoding().unwrap().decode(), w("0001011101"));
    }

    #[test]
    fn conjugate_examples() {
        let show = |v: Vec<Word>| v.iter().map(Word::to_string).collect::<Vec<_>>();
        assert_eq!(show(w("01").conjugates().unwrap()), ["01", "10"]);
        assert_eq!(show(w("000").conjugates().unwrap()), ["000", "000", "000"]);
        assert_eq!(show(w("0011").conjugates().unwrap()), ["0011", "0110", "1100", "1001"]);
        assert!(w("").conjugates().is_err());
    }

    #[test]
    fn factor_set_examples() {
        let got: Vec<String> = w("0101").factor_set(2).iter().map(Word::to_string).collect();
        assert_eq!(got, ["0", "01", "1", "10"]);
        assert_eq!(w("00").factor_set(1).len(), 1);

        // sliding-window oracle over the Thue-Morse prefix
        let t = "0110100110010110";
        let mut oracle = std::collections::HashSet::new();
        for len in 1..=4 {
            for i in 0..=t.len() - len {
                oracle.insert(&t[i..i + len]);
            }
        }
        assert_eq!(w(t).factor_set(4).len(), oracle.len());
    }

    #[test]
    fn rejects_out_of_alphabet() {
        assert!(Word::binary("012").is_err());
        assert!(Word::new(vec![0, 3], 3).is_err());
        assert!(Word::new(vec![0], 4).is_err());
        assert_eq!(Word::ternary("0120").unwrap().alphabet(), 3);
    }

    #[test]
    fn render_sorted() {
        let set = w("0101").factor_set(2);
        assert_eq!(render_factor_set(&set), "0\n1\n01\n10\n");
    }
}
