//! Counting words that avoid a finite set of factors, and the growth
//! constants that come out of those counts.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::word::Word;

/// Forbidden factors of binary good words up to order 3, plus the two
/// six-letter words every larger minimal antisquare contains.
pub const GOOD_CORE_FORBIDDEN: [&str; 8] = ["0011", "1100", "0110", "1001", "010101", "101010", "001011", "110100"];

/// Pansiot codes of the words avoiding [`GOOD_CORE_FORBIDDEN`] avoid these.
pub const PANSIOT_FORBIDDEN: [&str; 4] = ["010", "101", "11111", "01110"];

/// Deterministic automaton of the words with no factor in a finite set.
///
/// States are the prefixes of forbidden words that contain no forbidden
/// factor (the Aho–Corasick trie), plus one dead sink.
#[derive(Clone, Debug)]
pub struct FactorAvoidanceAutomaton {
    alphabet: u8,
    /// Row per state, column per letter.
    delta: Vec<Vec<usize>>,
    /// The prefix each state stands for.
    labels: Vec<Vec<u8>>,
    dead: usize,
}

impl FactorAvoidanceAutomaton {
    pub fn new(forbidden: &[Word]) -> Result<FactorAvoidanceAutomaton> {
        if forbidden.is_empty() || forbidden.iter().any(Word::is_empty) {
            return Err(domain("forbidden set must be nonempty and contain no empty word"));
        }
        let alphabet = forbidden.iter().map(Word::alphabet).max().unwrap_or(2);
        let a = alphabet as usize;
        // trie
        let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; a]];
        let mut labels: Vec<Vec<u8>> = vec![Vec::new()];
        let mut terminal = vec![false];
        for f in forbidden {
            let mut s = 0;
            for &x in f.letters() {
                s = match children[s][x as usize] {
                    Some(t) => t,
                    None => {
                        children.push(vec![None; a]);
                        let mut l = labels[s].clone();
                        l.push(x);
                        labels.push(l);
                        terminal.push(false);
                        let t = children.len() - 1;
                        children[s][x as usize] = Some(t);
                        t
                    }
                };
            }
            terminal[s] = true;
        }
        // failure links in breadth-first order
        let n = children.len();
        let mut fail = vec![0usize; n];
        let mut goto = vec![vec![0usize; a]; n];
        let mut queue = VecDeque::new();
        for x in 0..a {
            match children[0][x] {
                Some(t) => {
                    goto[0][x] = t;
                    queue.push_back(t);
                }
                None => goto[0][x] = 0,
            }
        }
        while let Some(s) = queue.pop_front() {
            terminal[s] |= terminal[fail[s]];
            for x in 0..a {
                match children[s][x] {
                    Some(t) => {
                        fail[t] = goto[fail[s]][x];
                        goto[s][x] = t;
                        queue.push_back(t);
                    }
                    None => goto[s][x] = goto[fail[s]][x],
                }
            }
        }
        // renumber: safe states first, then a single dead sink
        let mut index = vec![usize::MAX; n];
        let mut safe_labels = Vec::new();
        for s in 0..n {
            if !terminal[s] {
                index[s] = safe_labels.len();
                safe_labels.push(labels[s].clone());
            }
        }
        let dead = safe_labels.len();
        let mut delta = vec![vec![dead; a]; dead + 1];
        for s in (0..n).filter(|&s| !terminal[s]) {
            for x in 0..a {
                let t = goto[s][x];
                delta[index[s]][x] = if terminal[t] { dead } else { index[t] };
            }
        }
        safe_labels.push(Vec::new());
        Ok(FactorAvoidanceAutomaton { alphabet, delta, labels: safe_labels, dead })
    }

    pub fn from_strs<S: AsRef<str>>(forbidden: &[S]) -> Result<FactorAvoidanceAutomaton> {
        let alphabet = if forbidden.iter().any(|f| f.as_ref().contains('2')) { 3 } else { 2 };
        let words = forbidden.iter().map(|f| Word::parse(f.as_ref(), alphabet)).collect::<Result<Vec<_>>>()?;
        FactorAvoidanceAutomaton::new(&words)
    }

    /// Number of states including the dead sink.
    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn dead(&self) -> usize {
        self.dead
    }

    pub fn step(&self, state: usize, letter: u8) -> usize {
        self.delta[state][letter as usize]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut s = self.start();
        for &x in w.letters() {
            if x >= self.alphabet {
                return false;
            }
            s = self.step(s, x);
            if s == self.dead {
                return false;
            }
        }
        true
    }

    /// Exact number of accepted words of length `n`.
    pub fn count(&self, n: usize) -> BigUint {
        self.counts_up_to(n).counts.pop().unwrap_or_default()
    }

    pub fn counts_up_to(&self, n_max: usize) -> CountSeries {
        let mut v = vec![BigUint::zero(); self.dead];
        v[self.start()] = BigUint::one();
        let mut counts = vec![BigUint::one()];
        for _ in 0..n_max {
            let mut next = vec![BigUint::zero(); self.dead];
            for (s, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for x in 0..self.alphabet {
                    let t = self.step(s, x);
                    if t != self.dead {
                        next[t] += c;
                    }
                }
            }
            v = next;
            counts.push(v.iter().sum());
        }
        CountSeries { description: self.describe(), counts }
    }

    /// Exact counts of accepted words ending with `suffix`, lengths `0..=n_max`.
    pub fn counts_with_suffix(&self, n_max: usize, suffix: &[u8]) -> Vec<BigUint> {
        use std::collections::HashMap;
        let k = suffix.len();
        // (state, last min(len, k) letters) -> number of words
        let mut layer: HashMap<(usize, Vec<u8>), BigUint> = HashMap::new();
        layer.insert((self.start(), Vec::new()), BigUint::one());
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            out.push(layer.iter().filter(|((_, tail), _)| tail.as_slice() == suffix).map(|(_, c)| c).sum());
            if n == n_max {
                break;
            }
            let mut next: HashMap<(usize, Vec<u8>), BigUint> = HashMap::new();
            for ((s, tail), c) in &layer {
                for x in 0..self.alphabet {
                    let t = self.step(*s, x);
                    if t == self.dead {
                        continue;
                    }
                    let mut tail = tail.clone();
                    tail.push(x);
                    if tail.len() > k {
                        tail.remove(0);
                    }
                    *next.entry((t, tail)).or_default() += c;
                }
            }
            layer = next;
        }
        out
    }

    pub fn label(&self, state: usize) -> &[u8] {
        &self.labels[state]
    }

    /// States with arbitrarily long accepted continuations.
    pub fn live_states(&self) -> Vec<usize> {
        let mut alive: Vec<bool> = (0..self.state_count()).map(|s| s != self.dead).collect();
        loop {
            let mut changed = false;
            for s in 0..self.dead {
                if alive[s] && !(0..self.alphabet).any(|x| alive[self.step(s, x)]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.dead).filter(|&s| alive[s]).collect()
    }

    fn describe(&self) -> String {
        format!("avoidance automaton, {} states", self.state_count())
    }

    /// Adjacency lists, one state per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, row) in self.delta.iter().enumerate() {
            let name =
                if i == self.dead { "dead".to_string() } else { format!("[{}]", crate::word::digits(&self.labels[i])) };
            let targets: Vec<String> =
                row.iter().map(|t| if *t == self.dead { "dead".into() } else { t.to_string() }).collect();
            let _ = writeln!(s, "{i} {name} -> {}", targets.join(" "));
        }
        s
    }

    /// The same automaton with states renumbered by `perm` (the dead sink
    /// stays last); used to test that growth does not depend on numbering.
    pub fn permuted(&self, perm: &[usize]) -> Result<FactorAvoidanceAutomaton> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dead).collect::<Vec<_>>() {
            return Err(domain("not a permutation of the live states"));
        }
        let map = |s: usize| if s == self.dead { self.dead } else { perm[s] };
        let mut delta = vec![vec![self.dead; self.alphabet as usize]; self.delta.len()];
        let mut labels = vec![Vec::new(); self.labels.len()];
        for s in 0..self.dead {
            for x in 0..self.alphabet as usize {
                delta[map(s)][x] = map(self.delta[s][x]);
            }
            labels[map(s)] = self.labels[s].clone();
        }
        // keep the start state at index 0
        let start = map(0);
        let mut out = FactorAvoidanceAutomaton { alphabet: self.alphabet, delta, labels, dead: self.dead };
        out.swap_states(0, start);
        Ok(out)
    }

    fn swap_states(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.delta.swap(a, b);
        self.labels.swap(a, b);
        for row in &mut self.delta {
            for t in row.iter_mut() {
                if *t == a {
                    *t = b;
                } else if *t == b {
                    *t = a;
                }
            }
        }
    }
}

/// Exact counts indexed by length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub description: String,
    pub counts: Vec<BigUint>,
}

impl CountSeries {
    /// `length<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (n, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{n}\t{c}");
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthMethod {
    PowerIteration,
    CountRatio,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub value: f64,
    pub method: GrowthMethod,
    pub residual: f64,
}

impl fmt::Display for GrowthEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15} ({:?}, residual {:.1e})", self.value, self.method, self.residual)
    }
}

/// Dominant eigenvalue of the live part of the transfer matrix.
///
/// Iterates on `A + I`, which has the same dominant eigenvector and no
/// rival eigenvalue of equal modulus when `A` is periodic.
pub fn growth_rate(a: &FactorAvoidanceAutomaton, tolerance: f64) -> Result<GrowthEstimate> {
    let live = a.live_states();
    if live.is_empty() {
        return Err(domain("finite language has no growth rate"));
    }
    let mut pos = vec![usize::MAX; a.state_count()];
    for (i, &s) in live.iter().enumerate() {
        pos[s] = i;
    }
    let edges: Vec<Vec<usize>> = live
        .iter()
        .map(|&s| (0..a.alphabet).map(|x| pos[a.step(s, x)]).filter(|&t| t != usize::MAX).collect())
        .collect();
    // v -> A v with A[s][t] = number of letters s -> t; we need the row
    // vector form, counts flow from s to t
    let apply = |v: &[f64]| {
        let mut out = vec![0.0; v.len()];
        for (s, ts) in edges.iter().enumerate() {
            for &t in ts {
                out[t] += v[s];
            }
        }
        out
    };
    let n = live.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..2_000_000 {
        let av = apply(&v);
        let shifted: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x + y).collect();
        let norm: f64 = shifted.iter().map(|x| x.abs()).sum();
        let next: Vec<f64> = shifted.iter().map(|x| x / norm).collect();
        let a_next = apply(&next);
        let num: f64 = a_next.iter().zip(&next).map(|(x, y)| x * y).sum();
        let den: f64 = next.iter().map(|y| y * y).sum();
        lambda = num / den;
        residual = a_next.iter().zip(&next).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max)
            / next.iter().map(|y| y.abs()).fold(0.0, f64::max);
        v = next;
        if residual < tolerance {
            break;
        }
    }
    if residual >= tolerance {
        return Err(Error::Budget(format!("power iteration stalled at residual {residual:e}")));
    }
    Ok(GrowthEstimate { value: lambda, method: GrowthMethod::PowerIteration, residual })
}

/// Growth estimated from consecutive exact counts at length `n`.
pub fn growth_from_counts(a: &FactorAvoidanceAutomaton, n: usize) -> Result<GrowthEstimate> {
    let s = a.counts_up_to(n);
    let (x, y) = (&s.counts[n - 1], &s.counts[n]);
    if x.is_zero() {
        return Err(domain("finite language has no growth rate"));
    }
    let prev = s.counts[n - 2].to_f64().unwrap_or(f64::NAN);
    let r1 = y.to_f64().unwrap_or(f64::NAN) / x.to_f64().unwrap_or(f64::NAN);
    let r0 = x.to_f64().unwrap_or(f64::NAN) / prev;
    Ok(GrowthEstimate { value: r1, method: GrowthMethod::CountRatio, residual: (r1 - r0).abs() })
}

/// A root isolated in `[lo, hi]` with the sign change checked exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub lo: f64,
    pub hi: f64,
}

impl CertifiedRoot {
    pub fn value(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }
}

impl fmt::Display for CertifiedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15}", self.value())
    }
}

/// The real root of `X^3 = X^2 + 1`, narrowed to width `precision` by
/// bisection.
///
/// ```
/// let psi = antisquare::enumeration::supergolden(1e-15).unwrap();
/// assert_eq!(psi.to_string(), "1.465571231876768");
/// ```
pub fn supergolden(precision: f64) -> Result<CertifiedRoot> {
    if precision.is_nan() || precision < 1e-15 {
        return Err(domain("precision must be at least 1e-15"));
    }
    let p = Polynomial::new(vec![-1, 0, -1, 1]);
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while hi - lo > precision {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if p.sign_at(mid) < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if p.sign_at(lo) >= 0 || p.sign_at(hi) <= 0 {
        return Err(Error::Verification("bisection lost the sign change".into()));
    }
    Ok(CertifiedRoot { lo, hi })
}

/// Integer polynomial, coefficients from degree 0 upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<i64>) -> Polynomial {
        let mut p = Polynomial { coeffs: coeffs.into_iter().map(BigInt::from).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial { coeffs: Vec::new() };
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = Polynomial { coeffs: out };
        p.trim();
        p
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact sign at a float, treating it as the dyadic rational it is.
    pub fn sign_at(&self, x: f64) -> i32 {
        let (mantissa, exp) = dyadic(x);
        // scale by 2^(-exp*deg) so every term is an integer
        let deg = self.coeffs.len().saturating_sub(1);
        let shift = (-exp).max(0) as usize;
        let mut total = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut term = c * num_traits::pow(mantissa.clone(), i);
            let e = exp * i as i64 + (shift * deg) as i64;
            term <<= e as usize;
            total += term;
        }
        match total.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// `x = mantissa * 2^exp` exactly.
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_bits - 1075) };
    (BigInt::from(sign) * BigInt::from(m), e)
}

/// Coefficients of `(X+1)(X^2-X+1)(X^3-X^2-1)`.
pub fn polynomial_identity_expansion() -> Polynomial {
    Polynomial::new(vec![1, 1]).mul(&Polynomial::new(vec![1, -1, 1])).mul(&Polynomial::new(vec![-1, 0, -1, 1]))
}

/// Whether the expansion equals `X^6 - X^5 - X^2 - 1`.
pub fn expand_polynomial_identity() -> bool {
    polynomial_identity_expansion() == Polynomial::new(vec![-1, 0, -1, 0, 0, -1, 1])
}

/// Automaton of the Pansiot codes of words avoiding [`GOOD_CORE_FORBIDDEN`].
pub fn pansiot_automaton() -> FactorAvoidanceAutomaton {
    FactorAvoidanceAutomaton::from_strs(&PANSIOT_FORBIDDEN).expect("fixed forbidden set")
}

/// Automaton of the binary words avoiding [`GOOD_CORE_FORBIDDEN`].
pub fn good_core_automaton() -> FactorAvoidanceAutomaton {
    FactorAvoidanceAutomaton::from_strs(&GOOD_CORE_FORBIDDEN).expect("fixed forbidden set")
}

/// `C_n`: Pansiot codes of length `n` ending in `00`, for `n = 0..=n_max`.
pub fn pansiot_block_counts(n_max: usize) -> Vec<BigUint> {
    pansiot_automaton().counts_with_suffix(n_max, &[0, 0])
}

/// Whether `C_n = C_{n-1} + C_{n-4} + C_{n-6}` for every `n` in the range.
pub fn verify_pansiot_recurrence(range: std::ops::RangeInclusive<usize>) -> Result<bool> {
    if *range.start() < 6 {
        return Err(domain("the recurrence looks six steps back"));
    }
    let c = pansiot_block_counts(*range.end());
    Ok(range.into_iter().all(|n| c[n] == &c[n - 1] + &c[n - 4] + &c[n - 6]))
}
