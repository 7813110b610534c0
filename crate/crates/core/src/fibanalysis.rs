//! Fibonacci structure: Zeckendorf coding, the good word
//! `w = g(φ^ω(0))` and its repetitions, the Fibonacci word's antisquares,
//! the `h` construction, and the factorization of 15/4-free good words.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use crate::antisquare::{inventory_of, is_good_letters, AntisquareInventory};
use crate::error::{domain, Error, Result};
use crate::morphism::{is_squarefree, registry, Morphism};
use crate::rational::Rational;
use crate::repetition::{critical_exponent_of, maximal_repetitions, Repetition};
use crate::word::{digits, Word};

/// `F_0 = 1, F_1 = 2, F_k = F_{k-1} + F_{k-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibSequence {
    values: Vec<u64>,
}

impl FibSequence {
    /// All terms up to and including the first one ≥ `limit`.
    pub fn up_to(limit: u64) -> FibSequence {
        let mut values = vec![1u64, 2];
        while *values.last().unwrap() < limit {
            let n = values.len();
            values.push(values[n - 1] + values[n - 2]);
        }
        FibSequence { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<u64> {
        self.values.get(k).copied()
    }
}

/// `F_k` in the shifted indexing above.
pub fn fib(k: usize) -> u64 {
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

/// Canonical Fibonacci representation, most significant digit first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeckendorfString(String);

impl ZeckendorfString {
    pub fn parse(s: &str) -> Result<ZeckendorfString> {
        if s.is_empty() || !s.starts_with('1') || s.contains("11") || s.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(Error::Parse(format!("'{s}' is not a canonical Zeckendorf string")));
        }
        Ok(ZeckendorfString(s.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Matches `10010*`, the shape of the periods of cubes in `w`.
    pub fn is_cube_period_shape(&self) -> bool {
        self.0.strip_prefix("10010").is_some_and(|rest| rest.bytes().all(|b| b == b'0'))
    }
}

impl fmt::Display for ZeckendorfString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Greedy representation of `n ≥ 1`.
///
/// ```
/// use antisquare::fibanalysis::{zeckendorf_decode, zeckendorf_encode};
/// let z = zeckendorf_encode(10).unwrap();
/// assert_eq!(z.as_str(), "10010");
/// assert_eq!(zeckendorf_decode(&z), 10);
/// ```
pub fn zeckendorf_encode(n: u64) -> Result<ZeckendorfString> {
    if n == 0 {
        return Err(domain("zero has no canonical Zeckendorf string"));
    }
    let fibs = FibSequence::up_to(n);
    let top = fibs.values().iter().rposition(|&f| f <= n).expect("F_0 = 1 <= n");
    let mut rest = n;
    let mut s = String::with_capacity(top + 1);
    for k in (0..=top).rev() {
        let f = fibs.values()[k];
        if f <= rest {
            rest -= f;
            s.push('1');
        } else {
            s.push('0');
        }
    }
    Ok(ZeckendorfString(s))
}

pub fn zeckendorf_decode(z: &ZeckendorfString) -> u64 {
    let len = z.0.len();
    z.0.bytes().enumerate().filter(|(_, b)| *b == b'1').map(|(i, _)| fib(len - 1 - i)).sum()
}

/// The golden ratio and the supremum `2 + α` of exponents in `w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoldenConstants {
    pub alpha: f64,
    pub target: f64,
}

impl GoldenConstants {
    pub fn new() -> GoldenConstants {
        let alpha = (1.0 + 5f64.sqrt()) / 2.0;
        GoldenConstants { alpha, target: 2.0 + alpha }
    }

    /// Exact test of `x < 2 + α`: with `y = 2x - 5` this is `y < √5`.
    pub fn below_target(x: Rational) -> bool {
        let (a, b) = (x.numer() as i128, x.denom() as i128);
        let y = 2 * a - 5 * b;
        y < 0 || y * y < 5 * b * b
    }

    /// `2 + α - x` in floating point, for reports.
    pub fn gap(&self, x: Rational) -> f64 {
        // α - (x - 2) computed as a difference of nearby quantities; the
        // exact sign comes from `below_target`
        self.alpha - (x.numer() as f64 - 2.0 * x.denom() as f64) / x.denom() as f64
    }
}

impl Default for GoldenConstants {
    fn default() -> Self {
        GoldenConstants::new()
    }
}

fn morphism(name: &str) -> &'static Morphism {
    registry().morphism(name).expect("builtin morphism")
}

/// Prefix of `w = g(φ^ω(0))`.
///
/// ```
/// let w = antisquare::fibanalysis::word_w_prefix(16).unwrap();
/// assert_eq!(w.to_string(), "0101110101110111");
/// ```
pub fn word_w_prefix(len: usize) -> Result<Word> {
    if len == 0 {
        return Err(domain("prefix length must be positive"));
    }
    let x = morphism("phi").fixed_point_prefix(0, len.div_ceil(2))?;
    Ok(morphism("g").apply(&x)?.factor(0, len))
}

/// Prefix of the Fibonacci word, the fixed point of `0 → 01, 1 → 0`.
pub fn fibonacci_word_prefix(len: usize) -> Result<Word> {
    morphism("fib").fixed_point_prefix(0, len)
}

/// Checks `φ^n(0) = 0 f^n(0) 0^{-1}` and `φ^n(01) = 0 f^n(10) 0^{-1}` for
/// `1 ≤ n ≤ n_max`, where `f` is the squared Fibonacci morphism.
pub fn verify_phi_identities(n_max: usize) -> Result<bool> {
    if n_max == 0 {
        return Err(domain("n_max must be at least 1"));
    }
    let (phi, f) = (morphism("phi"), morphism("f"));
    let shifted = |x: &Word| -> Option<Vec<u8>> {
        // 0 x 0^{-1}: only defined when x ends in 0
        let l = x.letters();
        (l.last() == Some(&0)).then(|| {
            let mut v = vec![0u8];
            v.extend_from_slice(&l[..l.len() - 1]);
            v
        })
    };
    let zero = Word::binary("0")?;
    let (zo, oz) = (Word::binary("01")?, Word::binary("10")?);
    for n in 1..=n_max {
        let lhs0 = phi.iterate(&zero, n)?;
        let lhs1 = phi.iterate(&zo, n)?;
        if shifted(&f.iterate(&zero, n)?).as_deref() != Some(lhs0.letters())
            || shifted(&f.iterate(&oz, n)?).as_deref() != Some(lhs1.letters())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One maximal repetition of exponent ≥ 3 in a prefix of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WRepetition {
    /// Index in the closed-form family, if it belongs to it.
    pub k: Option<usize>,
    /// Length minus period.
    pub n: usize,
    pub p: usize,
    pub exponent: Rational,
    pub occurrences: usize,
    pub zeckendorf: ZeckendorfString,
}

impl WRepetition {
    /// `2 + α - exponent` as a float.
    pub fn gap(&self) -> f64 {
        GoldenConstants::new().gap(self.exponent)
    }
}

/// `(n, p)` of the family member `k ≥ 4`: `(2F_{k-1} - 3, 2F_{k-3})`.
pub fn family_pair(k: usize) -> Option<(usize, usize)> {
    if k < 4 {
        return None;
    }
    Some((2 * fib(k - 1) as usize - 3, 2 * fib(k - 3) as usize))
}

/// `2 + (2F_{k-2} - 3) / (2F_{k-3})`.
pub fn family_exponent(k: usize) -> Option<Rational> {
    let (n, p) = family_pair(k)?;
    Rational::new((n + p) as u64, p as u64).ok()
}

/// Periods below this may be sporadic rather than part of the family.
pub const SPORADIC_PERIOD_LIMIT: usize = 10;

/// Result of [`analyze_w_repetitions`].
#[derive(Clone, Debug)]
pub struct WRepetitionReport {
    pub prefix_len: usize,
    /// Family members, ordered by `k`.
    pub rows: Vec<WRepetition>,
    /// Short periods outside the family.
    pub sporadic: Vec<WRepetition>,
    pub inventory: AntisquareInventory,
    pub max_exponent: Rational,
}

impl WRepetitionReport {
    /// TSV rows: k, n, p, exponent as fraction, exponent as decimal,
    /// Zeckendorf(p).
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("k\tn\tp\texponent\tdecimal\tzeckendorf\n");
        for r in self.rows.iter().chain(&self.sporadic) {
            let k = r.k.map_or("-".to_string(), |k| k.to_string());
            let _ = writeln!(s, "{k}\t{}\t{}\t{}\t{:.12}\t{}", r.n, r.p, r.exponent, r.exponent.to_f64(), r.zeckendorf);
        }
        s
    }
}

/// Maximal repetitions of exponent ≥ 3 in the prefix of `w`, matched
/// against the closed-form family. Runs that touch the end of the prefix
/// are skipped, since they may continue.
pub fn analyze_w_repetitions(prefix_len: usize) -> Result<WRepetitionReport> {
    if prefix_len < 100 {
        return Err(domain("prefix length must be at least 100"));
    }
    let w = word_w_prefix(prefix_len)?;
    let reps: Vec<Repetition> =
        maximal_repetitions(&w, Rational::integer(3)).into_iter().filter(|r| r.end() < prefix_len).collect();
    let mut by_pair: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for r in &reps {
        *by_pair.entry((r.period, r.length)).or_default() += 1;
    }
    let family: HashMap<(usize, usize), usize> =
        (4..64).map_while(|k| family_pair(k).filter(|&(_, p)| p <= prefix_len).map(|pair| (pair, k))).collect();
    let (mut rows, mut sporadic) = (Vec::new(), Vec::new());
    for ((p, length), occurrences) in by_pair {
        let n = length - p;
        let row = WRepetition {
            k: family.get(&(n, p)).copied(),
            n,
            p,
            exponent: Rational::new(length as u64, p as u64)?,
            occurrences,
            zeckendorf: zeckendorf_encode(p as u64)?,
        };
        match row.k {
            Some(_) => rows.push(row),
            None if p < SPORADIC_PERIOD_LIMIT => sporadic.push(row),
            None => {
                return Err(Error::Verification(format!(
                    "maximal repetition (n, p) = ({n}, {p}) of w is outside the closed-form family"
                )))
            }
        }
    }
    rows.sort_by_key(|r| r.k);
    let (max_exponent, _) = critical_exponent_of(w.letters());
    Ok(WRepetitionReport { prefix_len, rows, sporadic, inventory: inventory_of(w.letters()), max_exponent })
}

/// Antisquares of the Fibonacci-word prefix of length `prefix_len`.
pub fn fibonacci_word_antisquares(prefix_len: usize) -> Result<AntisquareInventory> {
    Ok(inventory_of(fibonacci_word_prefix(prefix_len)?.letters()))
}

/// `h(w)` for a squarefree ternary `w`: whether it is good, and its
/// critical exponent.
pub fn verify_h_construction(w: &Word) -> Result<(bool, Rational)> {
    if w.is_empty() || !is_squarefree(w.letters()) {
        return Err(domain("h is applied to nonempty squarefree ternary words"));
    }
    let image = morphism("h").apply(w)?;
    Ok((is_good_letters(image.letters()), critical_exponent_of(image.letters()).0))
}

/// Which of `g` and `g′` carries the factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GTag {
    /// `0 → 01, 1 → 11`, used when the marker is `0111`.
    G,
    /// `0 → 01, 1 → 00`, used when the marker is `0001`.
    GPrime,
}

impl GTag {
    fn morphism(self) -> &'static Morphism {
        match self {
            GTag::G => morphism("g"),
            GTag::GPrime => morphism("gprime"),
        }
    }
}

impl fmt::Display for GTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GTag::G => "g",
            GTag::GPrime => "g'",
        })
    }
}

/// `w = w1 G(u1 φ(u2 ⋯ φ(ur φ(V) vr) ⋯ v2) v1) w2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub w1: Word,
    pub tag: GTag,
    pub u: Vec<Word>,
    pub v: Vec<Word>,
    pub core: Word,
    pub w2: Word,
}

impl Decomposition {
    pub fn depth(&self) -> usize {
        self.u.len()
    }

    pub fn within_bounds(&self) -> bool {
        self.w1.len() <= 5
            && self.w2.len() <= 5
            && self.u.iter().all(|u| u.len() <= 4)
            && self.v.iter().all(|v| v.len() <= 3)
            && self.core.len() <= 4
    }

    /// The words under `G`, outermost first: `x_0 = u1 φ(x_1) v1`, ...,
    /// ending with `V`.
    pub fn preimages(&self) -> Vec<Word> {
        let phi = morphism("phi");
        let mut out = vec![self.core.clone()];
        for (u, v) in self.u.iter().zip(&self.v).rev() {
            let inner = phi.apply(out.last().expect("nonempty")).expect("binary");
            out.push(u.concat(&inner).concat(v));
        }
        out.reverse();
        out
    }

    pub fn recompose(&self) -> Word {
        let x0 = self.preimages().swap_remove(0);
        let mid = self.tag.morphism().apply(&x0).expect("binary");
        self.w1.concat(&mid).concat(&self.w2)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Word| if w.is_empty() { "ε".to_string() } else { w.to_string() };
        let mut inner = format!("φ({})", show(&self.core));
        for (u, v) in self.u[1..].iter().zip(&self.v[1..]).rev() {
            inner = format!("φ({} {} {})", show(u), inner, show(v));
        }
        let (u1, v1) = (&self.u[0], &self.v[0]);
        write!(f, "{} {}({} {} {}) {}", show(&self.w1), self.tag, show(u1), inner, show(v1), show(&self.w2))
    }
}

/// The marker `0001` or `0111` in the first nine letters, as a tag.
pub fn base_marker(letters: &[u8]) -> Option<GTag> {
    let head = &letters[..letters.len().min(9)];
    head.windows(4).find_map(|x| match x {
        [0, 0, 0, 1] => Some(GTag::GPrime),
        [0, 1, 1, 1] => Some(GTag::G),
        _ => None,
    })
}

/// Inverse of `G` on a whole word.
fn g_decode(tag: GTag, x: &[u8]) -> Option<Vec<u8>> {
    if !x.len().is_multiple_of(2) {
        return None;
    }
    x.chunks(2)
        .map(|c| match (tag, c) {
            (_, [0, 1]) => Some(0),
            (GTag::G, [1, 1]) | (GTag::GPrime, [0, 0]) => Some(1),
            _ => None,
        })
        .collect()
}

/// Inverse of the prefix code `φ` (`001`, `01`) on a whole word.
fn phi_decode(x: &[u8]) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(x.len() / 2);
    let mut i = 0;
    while i < x.len() {
        match &x[i..] {
            [0, 0, 1, ..] => {
                out.push(0);
                i += 3;
            }
            [0, 1, ..] => {
                out.push(1);
                i += 2;
            }
            _ => return None,
        }
    }
    Some(out)
}

type Layers = (Vec<(Vec<u8>, Vec<u8>)>, Vec<u8>);

/// Peels `x = u φ(y) v` until at most four letters remain.
fn peel(x: &[u8], memo: &mut HashMap<Vec<u8>, Option<Layers>>) -> Option<Layers> {
    if let Some(hit) = memo.get(x) {
        return hit.clone();
    }
    let mut found = None;
    'cuts: for lu in 0..=4.min(x.len()) {
        for lv in 0..=3.min(x.len() - lu) {
            let mid = &x[lu..x.len() - lv];
            if mid.is_empty() {
                continue;
            }
            let Some(y) = phi_decode(mid) else { continue };
            let rest = if y.len() <= 4 { Some((Vec::new(), y)) } else { peel(&y, memo) };
            if let Some((mut layers, core)) = rest {
                layers.insert(0, (x[..lu].to_vec(), x[x.len() - lv..].to_vec()));
                found = Some((layers, core));
                break 'cuts;
            }
        }
    }
    memo.insert(x.to_vec(), found.clone());
    found
}

/// Factorization of a 15/4-free good word of length ≥ 33.
pub fn decompose_good_word(w: &Word) -> Result<Decomposition> {
    let x = w.letters();
    if !w.is_binary() || x.len() < 33 {
        return Err(domain("decomposition needs a binary word of length at least 33"));
    }
    if !is_good_letters(x) {
        return Err(domain("decomposition needs a good word"));
    }
    let (e, _) = critical_exponent_of(x);
    if e >= Rational::new(15, 4)? {
        return Err(domain(format!("decomposition needs a 15/4-free word, exponent is {e}")));
    }
    let tag = base_marker(x)
        .ok_or_else(|| Error::Verification(format!("{w}: no 0001 or 0111 among the first nine letters")))?;
    let mut memo = HashMap::new();
    for l1 in 0..=5usize {
        for l2 in 0..=5usize.min(x.len() - l1) {
            let Some(v) = g_decode(tag, &x[l1..x.len() - l2]) else { continue };
            if let Some((layers, core)) = peel(&v, &mut memo) {
                let word = |l: &[u8]| Word::from_raw(l.to_vec(), 2);
                let d = Decomposition {
                    w1: word(&x[..l1]),
                    tag,
                    u: layers.iter().map(|(u, _)| word(u)).collect(),
                    v: layers.iter().map(|(_, v)| word(v)).collect(),
                    core: word(&core),
                    w2: word(&x[x.len() - l2..]),
                };
                debug_assert_eq!(d.recompose().letters(), x);
                return Ok(d);
            }
        }
    }
    Err(Error::Verification(format!("no decomposition of {w} with G = {tag}")))
}

/// Every word in the listing has a prefix of length ≤ 9 containing `0001`
/// or `0111`; returns the first word without one.
pub fn marker_counterexample(words: &[Word]) -> Option<&Word> {
    words.iter().find(|w| base_marker(w.letters()).is_none())
}

/// Interior of a preimage after dropping two letters on the left and one
/// on the right must avoid `000` and `11`.
pub fn interior_is_clean(x: &Word) -> bool {
    let l = x.letters();
    if l.len() < 3 {
        return true;
    }
    let inner = &l[2..l.len() - 1];
    !inner.windows(3).any(|t| t == [0, 0, 0]) && !inner.windows(2).any(|t| t == [1, 1])
}

/// Renders a word for reports, `ε` when empty.
pub fn show(letters: &[u8]) -> String {
    if letters.is_empty() {
        "ε".into()
    } else {
        digits(letters)
    }
}
