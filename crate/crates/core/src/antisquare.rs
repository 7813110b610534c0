//! Antisquares `x·x̄`: detection, inventories, good words, minimal
//! antisquares and Pansiot codes.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{domain, Result};
use crate::word::{complement_letters, Word};

/// Order `|x|` of `letters = x·x̄`, or `None` if it is not an antisquare.
pub fn antisquare_order(letters: &[u8]) -> Option<usize> {
    let n = letters.len();
    if n < 2 || n % 2 == 1 {
        return None;
    }
    let k = n / 2;
    letters[..k].iter().zip(&letters[k..]).all(|(a, b)| a != b).then_some(k)
}

pub fn is_antisquare(w: &Word) -> Option<usize> {
    if !w.is_binary() {
        return None;
    }
    antisquare_order(w.letters())
}

/// Distinct antisquare factors of a word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntisquareInventory {
    pub distinct: BTreeSet<Word>,
    pub max_order: usize,
}

impl AntisquareInventory {
    pub fn count(&self) -> usize {
        self.distinct.len()
    }

    pub fn insert(&mut self, letters: &[u8]) {
        if !self.distinct.iter().any(|w| w.letters() == letters) {
            self.max_order = self.max_order.max(letters.len() / 2);
            self.distinct.insert(Word::from_raw(letters.to_vec(), 2));
        }
    }

    pub fn merge(&mut self, other: &AntisquareInventory) {
        for w in &other.distinct {
            self.insert(w.letters());
        }
    }

    /// True when only `01` and `10` occur.
    pub fn is_good(&self) -> bool {
        self.max_order <= 1
    }

    /// Antisquares sorted by length, then lexicographically.
    pub fn sorted(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.distinct.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }
}

impl fmt::Display for AntisquareInventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.sorted().iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Packs a window of at most 64 bits.
#[inline]
fn pack(window: &[u8]) -> u64 {
    window.iter().fold(0u64, |acc, &a| (acc << 1) | a as u64)
}

/// Length-`len` factors (packed) occurring in any of `texts`.
pub(crate) fn packed_factors<'a>(texts: impl IntoIterator<Item = &'a [u8]>, len: usize) -> HashSet<u64> {
    assert!((1..=64).contains(&len));
    let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let mut out = HashSet::new();
    for t in texts {
        if t.len() < len {
            continue;
        }
        let mut acc = pack(&t[..len - 1]);
        for &a in &t[len - 1..] {
            acc = ((acc << 1) | a as u64) & mask;
            out.insert(acc);
        }
    }
    out
}

/// Whether some factor `v` of length `len` has its complement among the
/// factors as well, over a family of binary texts.
pub(crate) fn has_complement_pair(texts: &[&[u8]], len: usize) -> bool {
    if len <= 64 {
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let set = packed_factors(texts.iter().copied(), len);
        set.iter().any(|&v| set.contains(&(!v & mask)))
    } else {
        let set: HashSet<&[u8]> = texts.iter().flat_map(|t| t.windows(len)).collect();
        set.iter().any(|v| set.contains(complement_letters(v).as_slice()))
    }
}

/// Largest `L` such that some `v` with `|v| = L` and its complement both
/// occur as factors of the texts (0 if none).
pub(crate) fn complement_pair_bound(texts: &[&[u8]]) -> usize {
    let longest = texts.iter().map(|t| t.len()).max().unwrap_or(0);
    let mut len = 0;
    while len < longest && has_complement_pair(texts, len + 1) {
        len += 1;
    }
    len
}

/// Adds every antisquare of order at most `max_order` occurring in `letters`.
pub(crate) fn collect_antisquares(letters: &[u8], max_order: usize, inv: &mut AntisquareInventory) {
    let n = letters.len();
    let mut seen: HashSet<&[u8]> = HashSet::new();
    for k in 1..=max_order.min(n / 2) {
        // run of positions j with letters[j] != letters[j + k]
        let mut run = 0;
        for j in 0..n - k {
            if letters[j] != letters[j + k] {
                run += 1;
                if run >= k {
                    let start = j + 1 - k;
                    let f = &letters[start..start + 2 * k];
                    if seen.insert(f) {
                        inv.insert(f);
                    }
                }
            } else {
                run = 0;
            }
        }
    }
}

/// All distinct antisquare factors of a binary word.
///
/// Orders are capped by the longest `v` whose complement is also a factor, so
/// long words with few complementary factors are cheap.
pub fn inventory(w: &Word) -> Result<AntisquareInventory> {
    if !w.is_binary() {
        return Err(domain("antisquare inventory needs a binary word"));
    }
    Ok(inventory_of(w.letters()))
}

pub(crate) fn inventory_of(letters: &[u8]) -> AntisquareInventory {
    let bound = complement_pair_bound(&[letters]);
    let mut inv = AntisquareInventory::default();
    collect_antisquares(letters, bound, &mut inv);
    inv
}

pub fn is_good(w: &Word) -> Result<bool> {
    Ok(inventory(w)?.is_good())
}

pub(crate) fn is_good_letters(letters: &[u8]) -> bool {
    let n = letters.len();
    for k in 2..=n / 2 {
        let mut run = 0;
        for j in 0..n - k {
            if letters[j] != letters[j + k] {
                run += 1;
                if run >= k {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}

/// An antisquare is minimal when no proper factor of length ≥ 4 is an
/// antisquare (`01` and `10` are exempt).
pub fn is_minimal_antisquare(letters: &[u8]) -> bool {
    let n = letters.len();
    if antisquare_order(letters).is_none() {
        return false;
    }
    (4..n).step_by(2).all(|len| letters.windows(len).all(|f| antisquare_order(f).is_none()))
}

/// Minimal antisquares grouped by order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimalAntisquareTable {
    pub by_order: BTreeMap<usize, BTreeSet<Word>>,
}

impl MinimalAntisquareTable {
    pub fn sizes(&self) -> Vec<usize> {
        self.by_order.values().map(BTreeSet::len).collect()
    }

    /// `order<TAB>word` lines, sorted.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (order, words) in &self.by_order {
            if words.is_empty() {
                out.push_str(&format!("{order}\t-\n"));
            }
            for w in words {
                out.push_str(&format!("{order}\t{w}\n"));
            }
        }
        out
    }
}

/// Brute force over all `2^n` antisquares of each order `n ≤ max_order`.
pub fn minimal_antisquares(max_order: usize) -> Result<MinimalAntisquareTable> {
    if max_order == 0 {
        return Err(domain("max_order must be at least 1"));
    }
    if max_order > 30 {
        return Err(domain("brute-force table limited to order 30"));
    }
    let mut table = MinimalAntisquareTable::default();
    for order in 1..=max_order {
        let words = (0u64..1 << order)
            .filter_map(|bits| {
                let half: Vec<u8> = (0..order).rev().map(|i| ((bits >> i) & 1) as u8).collect();
                let mut letters = half.clone();
                letters.extend(complement_letters(&half));
                is_minimal_antisquare(&letters).then(|| Word::from_raw(letters, 2))
            })
            .collect();
        table.by_order.insert(order, words);
    }
    Ok(table)
}

/// Closed-form minimal antisquares of a given order: literal sets up to 4,
/// then the conjugates of `0^{n-2} 1 0 1^{n-2} 0 1`.
pub fn characterized_minimal(order: usize) -> Result<BTreeSet<Word>> {
    let lit = |ws: &[&str]| ws.iter().map(|s| Word::binary(s).expect("literal")).collect();
    Ok(match order {
        0 => return Err(domain("antisquare order must be at least 1")),
        1 => lit(&["01", "10"]),
        2 => lit(&["0011", "0110", "1001", "1100"]),
        3 => lit(&["010101", "101010"]),
        4 => BTreeSet::new(),
        n => minimal_family(n - 2).conjugates()?.into_iter().collect(),
    })
}

/// `0^k 1 0 1^k 0 1`, an antisquare of order `k + 2`.
pub fn minimal_family(k: usize) -> Word {
    let mut letters = vec![0u8; k];
    letters.extend([1, 0]);
    letters.extend(std::iter::repeat_n(1, k));
    letters.extend([0, 1]);
    Word::from_raw(letters, 2)
}

/// `p_i = 0` iff `x_{i+1} = x_i`.
pub fn pansiot_encode(w: &Word) -> Result<Word> {
    if w.is_empty() || !w.is_binary() {
        return Err(domain("Pansiot code needs a nonempty binary word"));
    }
    Ok(Word::from_raw(pansiot_code(w.letters()), 2))
}

pub(crate) fn pansiot_code(letters: &[u8]) -> Vec<u8> {
    letters.windows(2).map(|p| p[0] ^ p[1]).collect()
}

pub fn pansiot_decode(code: &Word, first: u8) -> Result<Word> {
    if first > 1 || !code.is_binary() {
        return Err(domain("Pansiot decoding is binary"));
    }
    let mut letters = Vec::with_capacity(code.len() + 1);
    letters.push(first);
    let mut cur = first;
    for &p in code.letters() {
        cur ^= p;
        letters.push(cur);
    }
    Ok(Word::from_raw(letters, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::binary(s).unwrap()
    }

    fn set(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|s| w(s)).collect()
    }

    fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n).map(move |b| (0..n).map(|i| ((b >> i) & 1) as u8).collect())
    }

    /// Direct scan of every even window.
    fn brute_inventory(letters: &[u8]) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for len in (2..=letters.len()).step_by(2) {
            for f in letters.windows(len) {
                if antisquare_order(f).is_some() {
                    out.insert(Word::from_raw(f.to_vec(), 2));
                }
            }
        }
        out
    }

    #[test]
    fn detection() {
        assert_eq!(is_antisquare(&w("011100")), Some(3));
        assert_eq!(is_antisquare(&w("0101")), None);
        assert_eq!(is_antisquare(&w("")), None);
        assert_eq!(is_antisquare(&w("01")), Some(1));
    }

    #[test]
    fn inventory_examples() {
        // 0011 has no factor 10
        let inv = inventory(&w("0011")).unwrap();
        assert_eq!(inv.distinct, set(&["01", "0011"]));
        assert_eq!((inv.max_order, inv.count()), (2, 2));
        let inv = inventory(&w("100110")).unwrap();
        assert_eq!(inv.distinct, set(&["01", "10", "0011", "1001", "0110"]));
        // words over {1000, 10000}
        let blocks = ["1000", "10000"];
        for bits in 0u32..1 << 7 {
            let s: String = (0..7).map(|i| blocks[((bits >> i) & 1) as usize]).collect();
            let inv = inventory(&w(&s[..s.len().min(30)])).unwrap();
            assert_eq!(inv.distinct, set(&["01", "10"]), "{s}");
        }
    }

    #[test]
    fn goodness() {
        assert!(!is_good(&w("010101")).unwrap());
        assert!(is_good(&w("10001000010000")).unwrap());
        assert!(is_good(&w("0")).unwrap());
        assert!(is_good_letters(w("10001000010000").letters()));
        assert!(!is_good_letters(w("0011").letters()));
    }

    #[test]
    fn inventory_matches_brute_force() {
        for n in 1..=12 {
            for letters in all_words(n) {
                assert_eq!(inventory_of(&letters).distinct, brute_inventory(&letters));
                assert_eq!(is_good_letters(&letters), inventory_of(&letters).is_good());
            }
        }
    }

    #[test]
    fn minimal_table_small_orders() {
        let t = minimal_antisquares(5).unwrap();
        assert_eq!(t.by_order[&2], set(&["0011", "0110", "1001", "1100"]));
        assert!(t.by_order[&4].is_empty());
        let conj: BTreeSet<Word> = w("0001011101").conjugates().unwrap().into_iter().collect();
        assert_eq!(t.by_order[&5], conj);
        assert_eq!(conj.len(), 10);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(characterized_minimal(3).unwrap(), set(&["010101", "101010"]));
        assert_eq!(characterized_minimal(1).unwrap(), set(&["01", "10"]));
        let six = characterized_minimal(6).unwrap();
        assert_eq!(six.len(), 12);
        assert!(six.contains(&w("000010111101")));
        assert!(characterized_minimal(0).is_err());
    }

    #[test]
    fn brute_force_equals_closed_form() {
        let t = minimal_antisquares(12).unwrap();
        for (order, words) in &t.by_order {
            assert_eq!(words, &characterized_minimal(*order).unwrap(), "order {order}");
        }
        assert_eq!(t.sizes(), vec![2, 4, 2, 0, 10, 12, 14, 16, 18, 20, 22, 24]);
    }

    #[test]
    fn conjugates_and_run_counts_up_to_length_20() {
        for order in 1..=10 {
            for bits in 0u32..1 << order {
                let half: Vec<u8> = (0..order).map(|i| ((bits >> i) & 1) as u8).collect();
                let mut letters = half.clone();
                letters.extend(complement_letters(&half));
                let word = Word::from_raw(letters.clone(), 2);
                let minimal = is_minimal_antisquare(&letters);
                for c in word.conjugates().unwrap() {
                    assert!(antisquare_order(c.letters()).is_some());
                    assert_eq!(is_minimal_antisquare(c.letters()), minimal);
                }
                let runs = word.run_length_encoding().unwrap().run_count();
                assert!(runs % 4 == 2 || runs % 4 == 3, "{word} has {runs} runs");
            }
        }
    }

    #[test]
    fn family_is_minimal() {
        for k in 3..=10 {
            assert!(is_minimal_antisquare(minimal_family(k).letters()), "k = {k}");
        }
        assert!(!is_minimal_antisquare(minimal_family(2).letters()));
    }

    #[test]
    fn pansiot_examples() {
        assert_eq!(pansiot_encode(&w("0011")).unwrap(), w("010"));
        assert_eq!(pansiot_decode(&w("010"), 1).unwrap(), w("1100"));
        for n in 1..=12 {
            for letters in all_words(n) {
                let word = Word::from_raw(letters.clone(), 2);
                let code = pansiot_encode(&word).unwrap();
                assert_eq!(pansiot_decode(&code, letters[0]).unwrap(), word);
            }
        }
    }

    proptest! {
        #[test]
        fn pansiot_ignores_complement(letters in prop::collection::vec(0u8..2, 1..64)) {
            let word = Word::from_raw(letters, 2);
            prop_assert_eq!(pansiot_encode(&word).unwrap(), pansiot_encode(&word.complement().unwrap()).unwrap());
        }

        #[test]
        fn inventory_matches_scan(letters in prop::collection::vec(0u8..2, 1..80)) {
            prop_assert_eq!(inventory_of(&letters).distinct, brute_inventory(&letters));
        }
    }
}
