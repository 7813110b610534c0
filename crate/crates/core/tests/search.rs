use std::collections::BTreeSet;

use antisquare::morphism::registry;
use antisquare::search::{
    count_by_length, count_by_length_with, extendable_cores, longest_word, longest_word_with, Checkpoint,
    ConstraintSet, SearchOptions,
};
use antisquare::Word;

// Naive oracles: cubic scans over all factors.

fn naive_max_exponent_violates(w: &[u8], num: u64, den: u64, strict: bool) -> bool {
    let n = w.len();
    for i in 0..n {
        for j in i + 1..=n {
            let len = j - i;
            for p in 1..len {
                if (i..j - p).all(|k| w[k] == w[k + p]) {
                    // exponent len/p against num/den
                    let lhs = len as u64 * den;
                    let rhs = num * p as u64;
                    if lhs > rhs || (strict && lhs == rhs) {
                        return true;
                    }
                    break;
                }
            }
        }
    }
    false
}

fn naive_antisquares(w: &[u8]) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    for i in 0..w.len() {
        for k in 1..=(w.len() - i) / 2 {
            if (0..k).all(|j| w[i + j] != w[i + k + j]) {
                out.insert(w[i..i + 2 * k].to_vec());
            }
        }
    }
    out
}

struct Naive {
    beta: Option<(u64, u64, bool)>,
    max_order: Option<usize>,
    max_count: Option<usize>,
}

impl Naive {
    fn accepts(&self, w: &[u8]) -> bool {
        if let Some((a, b, strict)) = self.beta {
            if naive_max_exponent_violates(w, a, b, strict) {
                return false;
            }
        }
        let anti = naive_antisquares(w);
        if let Some(l) = self.max_order {
            if anti.iter().any(|x| x.len() / 2 >= l) {
                return false;
            }
        }
        if let Some(n) = self.max_count {
            if anti.len() > n {
                return false;
            }
        }
        true
    }

    fn counts(&self, n_max: usize) -> Vec<u64> {
        (0..=n_max)
            .map(|n| {
                (0u32..1 << n)
                    .filter(|bits| {
                        let w: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                        self.accepts(&w)
                    })
                    .count() as u64
            })
            .collect()
    }
}

#[test]
fn good_word_counts_match_brute_force() {
    let got = count_by_length(&ConstraintSet::good(), 14, 10_000_000).unwrap();
    assert!(got.complete);
    let oracle = Naive { beta: None, max_order: Some(2), max_count: None }.counts(14);
    assert_eq!(got.counts, oracle);
}

#[test]
fn mixed_constraint_counts_match_brute_force() {
    let cases = [
        (
            ConstraintSet::binary().with_power("7/3".parse().unwrap()).with_max_distinct(5),
            Naive { beta: Some((7, 3, true)), max_order: None, max_count: Some(5) },
        ),
        (
            ConstraintSet::binary().with_power("5/2+".parse().unwrap()).with_max_order(3),
            Naive { beta: Some((5, 2, false)), max_order: Some(3), max_count: None },
        ),
        (
            ConstraintSet::binary().with_power("3".parse().unwrap()),
            Naive { beta: Some((3, 1, true)), max_order: None, max_count: None },
        ),
    ];
    for (c, naive) in cases {
        let got = count_by_length(&c, 12, 10_000_000).unwrap();
        assert_eq!(got.counts, naive.counts(12), "{c}");
    }
}

#[test]
fn symmetric_counts_are_twice_the_zero_branch() {
    let c = ConstraintSet::good().with_power("15/4".parse().unwrap());
    let all = count_by_length(&c, 16, 10_000_000).unwrap().counts;
    let naive = Naive { beta: Some((15, 4, true)), max_order: Some(2), max_count: None };
    for n in 1..=12usize {
        let zero_first = (0u32..1 << n)
            .filter(|bits| bits & 1 == 0)
            .filter(|bits| naive.accepts(&(0..n).map(|i| ((bits >> i) & 1) as u8).collect::<Vec<_>>()))
            .count() as u64;
        assert_eq!(all[n], 2 * zero_first);
    }
}

#[test]
fn forbidden_factor_counts() {
    // no 00: Fibonacci numbers
    let c = ConstraintSet::binary().forbidding(["00"]).unwrap();
    let got = count_by_length(&c, 10, 1000).unwrap();
    assert_eq!(got.counts, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
    assert!(!c.is_complement_closed());
}

#[test]
fn truncated_series_is_a_prefix_of_the_full_one() {
    let c = ConstraintSet::good().with_power("15/4+".parse().unwrap());
    let full = count_by_length(&c, 30, 10_000_000).unwrap();
    assert!(full.complete);
    let cut = count_by_length(&c, 30, full.nodes_explored / 2).unwrap();
    assert!(!cut.complete);
    assert!(cut.counts.len() < full.counts.len());
    assert_eq!(cut.counts[..], full.counts[..cut.counts.len()]);
}

fn small_tables() -> Vec<(ConstraintSet, usize)> {
    vec![
        (ConstraintSet::binary().with_power("8/3".parse().unwrap()).with_max_order(4), 29),
        (ConstraintSet::binary().with_power("3".parse().unwrap()).with_max_distinct(5), 17),
        (ConstraintSet::binary().with_power("7/3".parse().unwrap()).with_max_distinct(16), 38),
        (ConstraintSet::binary().with_power("8/3".parse().unwrap()).with_max_distinct(8), 52),
    ]
}

#[test]
fn witnesses_are_valid_and_maximal() {
    for (c, len) in small_tables() {
        let out = longest_word(&c, 10_000_000).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.max_length, len, "{c}");
        assert_eq!(c.check_word(&out.witness), Ok(()));
        assert_eq!(out.witness.letters()[0], 0);
        for a in 0..2 {
            let mut ext = out.witness.letters().to_vec();
            ext.push(a);
            assert!(c.check_word(&Word::new(ext, 2).unwrap()).is_err());
        }
    }
}

#[test]
fn witness_is_lexicographically_least_of_its_length() {
    // brute force over length-17 words starting with 0
    let c = ConstraintSet::binary().with_power("3".parse().unwrap()).with_max_distinct(5);
    let naive = Naive { beta: Some((3, 1, true)), max_order: None, max_count: Some(5) };
    let out = longest_word(&c, 1_000_000).unwrap();
    let least = (0u32..1 << 16)
        .map(|bits| {
            let mut w = vec![0u8];
            w.extend((0..16).rev().map(|i| ((bits >> i) & 1) as u8));
            w
        })
        .find(|w| naive.accepts(w))
        .unwrap();
    assert_eq!(out.witness.letters(), &least[..]);
}

#[test]
fn parallel_matches_sequential() {
    for (c, _) in small_tables() {
        let seq = longest_word(&c, 10_000_000).unwrap();
        for jobs in [2, 3] {
            let mut opts = SearchOptions::with_budget(10_000_000).jobs(jobs);
            opts.round_nodes = 97;
            let par = longest_word_with(&c, &opts, None, &mut |_| Ok(())).unwrap();
            assert_eq!(par, seq, "{c} with {jobs} jobs");
        }
        let mut opts = SearchOptions::with_budget(10_000_000).jobs(3);
        opts.round_nodes = 50;
        let counts = count_by_length_with(&c, 24, &opts).unwrap();
        assert_eq!(counts, count_by_length(&c, 24, 10_000_000).unwrap(), "{c}");
    }
}

#[test]
fn checkpoints_resume_to_the_same_outcome() {
    let (c, _) = small_tables().pop().unwrap();
    let reference = longest_word(&c, 10_000_000).unwrap();
    for jobs in [1, 2] {
        let mut opts = SearchOptions::with_budget(1_000).jobs(jobs);
        opts.round_nodes = 300;
        let mut last = None;
        let partial = longest_word_with(&c, &opts, None, &mut |cp| {
            last = Some(cp.clone());
            Ok(())
        })
        .unwrap();
        assert!(!partial.exhausted);
        let cp = last.unwrap();
        let text = cp.to_text();
        assert!(text.starts_with(antisquare::search::CHECKPOINT_MAGIC));
        let parsed = Checkpoint::parse(&text).unwrap();
        assert_eq!(parsed, cp);

        let mut rest = SearchOptions::with_budget(10_000_000).jobs(jobs);
        rest.round_nodes = 300;
        let resumed = longest_word_with(&c, &rest, Some(parsed), &mut |_| Ok(())).unwrap();
        assert_eq!(resumed, reference);
    }
}

#[test]
fn checkpoint_rejects_other_constraints_and_garbage() {
    let c = ConstraintSet::good();
    let cp = Checkpoint { constraints: "alphabet=2 beta=3/1".into(), nodes: 0, best: vec![], pending: vec![] };
    let opts = SearchOptions::with_budget(10);
    assert!(longest_word_with(&c, &opts, Some(cp), &mut |_| Ok(())).is_err());
    assert!(Checkpoint::parse("hello\n").is_err());
    assert!(Checkpoint::parse(&format!(
        "{}\nconstraints x\nnodes 1\nbest 0\ncursor 5 0 1 01\n",
        antisquare::search::CHECKPOINT_MAGIC
    ))
    .is_err());
}

#[test]
fn budget_exhaustion_is_flagged() {
    let c = ConstraintSet::binary().with_power("38/15".parse().unwrap()).with_max_distinct(9);
    let out = longest_word(&c, 5_000).unwrap();
    assert!(!out.exhausted);
    assert!(out.nodes_explored >= 5_000);
    assert_eq!(c.check_word(&out.witness), Ok(()));
}

fn core_constraints() -> ConstraintSet {
    ConstraintSet::binary()
        .with_power("4".parse().unwrap())
        .forbidding([
            "0011",
            "0110",
            "1100",
            "1001",
            "010101",
            "101010",
            "0001011101",
            "1011101000",
            "101110111011101",
            "010001000100010",
        ])
        .unwrap()
}

fn g_of_fibonacci_factors(len: usize) -> BTreeSet<Word> {
    let reg = registry();
    let fib = reg.morphism("fib").unwrap();
    let g = reg.morphism("g").unwrap();
    let f = fib.fixed_point_prefix(0, 20_000).unwrap();
    let gf = g.apply(&f).unwrap();
    let mut set = gf.factors_of_length(len);
    let comp: Vec<Word> = set.iter().map(|w| w.complement().unwrap()).collect();
    set.extend(comp);
    set
}

#[test]
fn extendable_cores_short_pads_contain_the_morphic_factors() {
    let s = extendable_cores(&core_constraints(), 30, 30, 100_000_000).unwrap().cores;
    assert!(g_of_fibonacci_factors(30).is_subset(&s));
}

#[test]
fn extendable_cores_at_length_100_are_exactly_the_morphic_factors() {
    let s = extendable_cores(&core_constraints(), 100, 100, 100_000_000).unwrap().cores;
    assert_eq!(s, g_of_fibonacci_factors(100));
}

#[test]
fn extendable_cores_budget_is_an_error() {
    assert!(extendable_cores(&core_constraints(), 30, 30, 100).is_err());
    assert!(extendable_cores(&core_constraints(), 0, 30, 100).is_err());
}

#[test]
fn ternary_squarefree_search_runs_forever_without_a_budget() {
    let mut c = ConstraintSet::binary().with_power("2".parse().unwrap());
    c.alphabet_size = 3;
    let out = longest_word(&c, 2_000).unwrap();
    assert!(!out.exhausted);
    assert!(out.max_length > 100);
}
