use super::ConstraintSet;
use crate::rational::{PowerBound, Rational};

/// A longest-word row: constraints, the published maximum length and the
/// published example word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LongestRow {
    pub table: u8,
    pub row: usize,
    /// Forbid antisquares of order ≥ this value.
    pub max_order: Option<usize>,
    pub max_count: Option<usize>,
    /// Words must be β-free (exponent β itself is forbidden).
    pub beta: (u64, u64),
    pub length: usize,
    pub example: &'static str,
    /// Marked rows are skipped by `--skip-slow`.
    pub slow: bool,
}

impl LongestRow {
    pub fn constraints(&self) -> ConstraintSet {
        let beta = Rational::new(self.beta.0, self.beta.1).expect("positive");
        let mut c = ConstraintSet::binary().with_power(PowerBound::free(beta));
        c.max_antisquare_order = self.max_order;
        c.max_distinct_antisquares = self.max_count;
        c
    }

    pub fn anchor(&self) -> String {
        format!("Table {} row {}", self.table, self.row)
    }
}

pub const LONGEST_ROWS: &[LongestRow] = &[
    LongestRow {
        table: 3,
        row: 1,
        max_order: Some(4),
        max_count: None,
        beta: (8, 3),
        length: 29,
        slow: false,
        example: "00100101001100101001100110100",
    },
    LongestRow {
        table: 3,
        row: 2,
        max_order: Some(5),
        max_count: None,
        beta: (5, 2),
        length: 32,
        slow: false,
        example: "00100101100101101001011001011011",
    },
    LongestRow {
        table: 3,
        row: 3,
        max_order: Some(6),
        max_count: None,
        beta: (7, 3),
        length: 30,
        slow: false,
        example: "001011001101001011010011001011",
    },
    LongestRow {
        table: 6,
        row: 1,
        max_order: None,
        max_count: Some(5),
        beta: (3, 1),
        length: 17,
        slow: false,
        example: "00101001010010011",
    },
    LongestRow {
        table: 6,
        row: 2,
        max_order: None,
        max_count: Some(8),
        beta: (8, 3),
        length: 52,
        slow: false,
        example: "0010010100110010100110011010011001101011001101011011",
    },
    LongestRow {
        table: 6,
        row: 3,
        max_order: None,
        max_count: Some(9),
        beta: (38, 15),
        length: 407,
        slow: true,
        example: concat!(
            "00100101001101001010011010011001101001010011001010011001101001010011010011001101",
            "01100110100101001101001100110100101001100101001100110100101001101001100110101100",
            "11010010100110100110011010010100110100110011010110011010010100110100110011010010",
            "10011001010011001101001010011010011001101011001101001010011010011001101001010011",
            "00101001100110100101001101001100110100101001100101001100110100101001100110100110",
            "1011011",
        ),
    },
    LongestRow {
        table: 6,
        row: 4,
        max_order: None,
        max_count: Some(14),
        beta: (5, 2),
        length: 92,
        slow: false,
        example: concat!(
            "00110100101100110110011010010110011011001101001101100110100101100110110011010011",
            "011001101100",
        ),
    },
    LongestRow {
        table: 6,
        row: 5,
        max_order: None,
        max_count: Some(15),
        beta: (17, 7),
        length: 156,
        slow: false,
        example: concat!(
            "00101100110100101100100110100110010011010010110010011001011001001101001011001001",
            "1010011001001101001011001001100101100100110100101100100110010110010011001001",
        ),
    },
    LongestRow {
        table: 6,
        row: 6,
        max_order: None,
        max_count: Some(16),
        beta: (7, 3),
        length: 38,
        slow: false,
        example: "00101100101101001011001101001011001011",
    },
];
