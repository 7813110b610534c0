//! The morphisms used by the constructions, loaded from a plain-text
//! registry file and checked against compiled-in image digests.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use super::Morphism;
use crate::error::{Error, Result};
use crate::rational::{PowerBound, Rational};

const BUILTIN: &str = include_str!("../../data/morphisms.txt");

/// SHA-256 of each image's digit string.
const DIGESTS: &[(&str, u8, &str)] = &[
    ("phi", 0, "7a3e6b16cb75f48fb897eff3ae732f3154f6d203b53f33660f01b4c3b6bc2df9"),
    ("phi", 1, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("g", 0, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("g", 1, "4fc82b26aecb47d2868c4efbe3581732a3e7cbcc6c2efb32062c08170a05eeb8"),
    ("gprime", 0, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("gprime", 1, "f1534392279bddbf9d43dde8701cb5be14b82f76ec6607bf8d6ad557f60f304e"),
    ("f", 0, "13715f6c8b48ed1b00f509ca29bc826bd04fd6f1ce8d8ebe27fb286312ce3ba1"),
    ("f", 1, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("fib", 0, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("fib", 1, "5feceb66ffc86f38d952786c6d696c79c2dbc239dd4e91b46729d73a27fb57e9"),
    ("mu", 0, "938db8c9f82c8cb58d3f3ef4fd250036a48d26a712753d2fde5abd03a85cabf4"),
    ("mu", 1, "4a44dc15364204a80fe80e9039455cc1608281820fe2b24f1e5233ade6af1dd5"),
    ("vtm", 0, "6b86b273ff34fce19d6b804eff5a3f5747ada4eaa22f1d49c01e52ddb7875b4b"),
    ("vtm", 1, "f5ca38f748a1d6eaf726b8a42fb575c3c71f1864a8143301782de13da2d9202b"),
    ("vtm", 2, "d29d53701d3c859e29e1b90028eec1ca8e2f29439198b6e036c60951fb458aa1"),
    ("h", 0, "969dec739dc7361d7100168b1adc48f69a2158ad065b4524ede34e40f6c626c9"),
    ("h", 1, "7b543496b0ba60e14fbbc417583536299937f8d47cdc37e2f0e1b5bc29ba9fb4"),
    ("h", 2, "bafa9338e3c185af739a4117f30228c1d6fb375ba15cd0c3ce7c6ba7080ddf3e"),
    ("xi3", 0, "8bda98f41ac2cd85f2d0f9be6dc5a69b5ba0074e874d31e11dbc359690f54d2b"),
    ("xi3", 1, "f2d370df1a08ea61ec34c686b814eaddad822290a311fae1cc2f21ad70c05be7"),
    ("xi3", 2, "d09cbf3cf28e1b83a6d820952cb73329c109cc3d77e69e2d04909ceb6fd45065"),
    ("xi5", 0, "b4fc27f2dc7d42b78e1b4083b90ae9a6ef132bcffae5b498240a9d2f8bdb98ea"),
    ("xi5", 1, "eccb7b632f77fb944471e29363823c507e3bb9f7065e0c617d788f2b935b05d5"),
    ("xi5", 2, "0ef27b8fed03fb812038114990a8067b598313db5b359529b1e164701bf18268"),
    ("xi6", 0, "275cb41f979e32841d7e5c5be507df51ab463e4bd3881d819e0d2e5ecc9487bd"),
    ("xi6", 1, "6b592edd5e73a26d8076494334b2d20240ec41c31af685c664b0a39de8df149a"),
    ("xi6", 2, "9d2e75461e9e41b161cc45b3cf950cefe2a96abd5b32b41f54511e867609c5fe"),
    ("zeta3", 0, "38ef6f649ffe0e23732921b5c2f4eb5c9f46bf2d360d966960b7d6c65e039554"),
    ("zeta3", 1, "1ae2558d928752851114fe6289a6eb236404ca7618e67613b2b3d2ff7ea302b8"),
    ("zeta3", 2, "df99cc495120f898a2e189c74aa5a7f34c139a9d23bcb4ab3f6d82d08c74273a"),
    ("zeta6", 0, "8bda98f41ac2cd85f2d0f9be6dc5a69b5ba0074e874d31e11dbc359690f54d2b"),
    ("zeta6", 1, "f2d370df1a08ea61ec34c686b814eaddad822290a311fae1cc2f21ad70c05be7"),
    ("zeta6", 2, "d09cbf3cf28e1b83a6d820952cb73329c109cc3d77e69e2d04909ceb6fd45065"),
    ("zeta9", 0, "886dccfa0b86ff625deeee011af86349614206f16b9ee8390f393986ac61816a"),
    ("zeta9", 1, "073d8fb5375fac8c5a48f1f9386523fb67aea4d052a89a24584c1aef77552d36"),
    ("zeta9", 2, "4254838a7fa51685ec535894159d851e1f40e8edbcecccddea0c015531b765f9"),
    ("zeta10", 0, "bd527f9fdc08b319cf1b972336ab4f9d0279bd2d47376b5291bb270cb7e19902"),
    ("zeta10", 1, "bc231277c6916daebda6cd0be0b2772c8cc6884f681527e43fc21ca4e1d4e290"),
    ("zeta10", 2, "4d27325b765faf6deda9a458a3342ef4db111765470d163e5af173496ee3bdcf"),
    ("zeta15", 0, "72010b422f1ff664737de657a52fb58c1eb725f9540acaba218b7df840491b05"),
    ("zeta15", 1, "74735eaa39d81207ff79edb3aa7926671adcfb5717445ca9d3022db441791aa7"),
    ("zeta15", 2, "14556c9c717d3cdb4038fb1e16a1da7170355e4678e3a2ce6bb3b7db8a41990a"),
    ("zeta16", 0, "b8bc11e0b68be3c7f5a3ff76cfdf2d8f08e080aca9d362f7eb33819cd5a79f72"),
    ("zeta16", 1, "a9389811e35879d74a4c8b1130c4faceee92815d2054fd257ccc9c10c388c653"),
    ("zeta16", 2, "c30bb052ac623a79d86adcdbd645d51b69eceff320dd85f5ecb4be8730e119b9"),
];

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub morphism: Morphism,
    /// Where the images come from, e.g. `Table 4`.
    pub source: String,
}

impl RegistryEntry {
    /// Hex SHA-256 of every image, in letter order.
    pub fn checksums(&self) -> Vec<String> {
        self.morphism.images().iter().map(|w| hex(&Sha256::digest(w.to_string().as_bytes()))).collect()
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Named morphisms in file order.
#[derive(Clone, Debug)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    index: BTreeMap<String, usize>,
}

impl Registry {
    /// Parses the registry format:
    ///
    /// ```text
    /// name:
    /// 0 -> image
    /// 1 -> image
    /// # source: Table 1
    /// ```
    pub fn parse(text: &str) -> Result<Registry> {
        let mut entries: Vec<RegistryEntry> = Vec::new();
        let mut current: Option<(String, Vec<String>, String)> = None;
        let flush = |cur: &mut Option<(String, Vec<String>, String)>, out: &mut Vec<RegistryEntry>| -> Result<()> {
            if let Some((name, images, source)) = cur.take() {
                let refs: Vec<&str> = images.iter().map(String::as_str).collect();
                let morphism = Morphism::from_strs(&refs).map_err(|e| Error::Parse(format!("morphism {name}: {e}")))?;
                out.push(RegistryEntry { name, morphism, source });
            }
            Ok(())
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let bad = |msg: &str| Error::Parse(format!("registry line {}: {msg}: {raw:?}", lineno + 1));
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let (Some(src), Some(cur)) = (comment.trim().strip_prefix("source:"), current.as_mut()) {
                    cur.2 = src.trim().to_string();
                }
                continue;
            }
            if let Some(name) = line.strip_suffix(':') {
                flush(&mut current, &mut entries)?;
                current = Some((name.trim().to_string(), Vec::new(), String::new()));
                continue;
            }
            let (letter, image) = line.split_once("->").ok_or_else(|| bad("expected `a -> image`"))?;
            let cur = current.as_mut().ok_or_else(|| bad("image before any name"))?;
            let letter: usize = letter.trim().parse().map_err(|_| bad("bad letter"))?;
            if letter != cur.1.len() {
                return Err(bad("images must be listed in letter order"));
            }
            cur.1.push(image.trim().to_string());
        }
        flush(&mut current, &mut entries)?;
        let mut index = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.name.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate morphism {}", e.name)));
            }
        }
        Ok(Registry { entries, index })
    }

    pub fn load(path: &Path) -> Result<Registry> {
        Registry::parse(&std::fs::read_to_string(path)?)
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn get(&self, name: &str) -> Option<&RegistryEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism> {
        self.get(name).map(|e| &e.morphism).ok_or_else(|| Error::Domain(format!("no morphism named {name:?}")))
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    /// Every recorded image digest must match, and every recorded morphism
    /// must be present.
    pub fn verify_integrity(&self) -> Result<()> {
        for &(name, letter, digest) in DIGESTS {
            let entry = self.get(name).ok_or_else(|| Error::Registry(format!("morphism {name} missing")))?;
            let sums = entry.checksums();
            match sums.get(letter as usize) {
                Some(s) if s == digest => {}
                Some(_) => return Err(Error::Registry(format!("image {name}({letter}) does not match its checksum"))),
                None => return Err(Error::Registry(format!("image {name}({letter}) missing"))),
            }
            if sums.len() != DIGESTS.iter().filter(|d| d.0 == name).count() {
                return Err(Error::Registry(format!("morphism {name} has extra images")));
            }
        }
        Ok(())
    }
}

/// The built-in registry.
pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Registry::parse(BUILTIN).expect("built-in registry parses"))
}

/// The antisquare restriction a constructed word must meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntisquareCap {
    /// No antisquare of order ≥ ℓ.
    MaxOrderBelow(usize),
    /// At most n distinct antisquares.
    MaxDistinct(usize),
}

/// One row of the published verification parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub morphism: &'static str,
    /// Table with the parameters (2 or 5).
    pub table: u8,
    pub cap: AntisquareCap,
    /// `β` as `(numerator, denominator)`; images must be β⁺-free.
    pub beta: (u64, u64),
    pub t: usize,
    pub m: usize,
    /// Uniform image length.
    pub s: usize,
}

impl TableRow {
    pub fn bound(&self) -> PowerBound {
        PowerBound::plus_free(Rational::new(self.beta.0, self.beta.1).expect("positive"))
    }

    /// 1-based position among the rows of its table.
    pub fn row_index(&self) -> usize {
        TABLE_ROWS
            .iter()
            .filter(|r| r.table == self.table)
            .position(|r| r.morphism == self.morphism)
            .map_or(0, |i| i + 1)
    }

    /// Anchor of the parameter row, e.g. `Table 2 row 1`.
    pub fn anchor(&self) -> String {
        format!("Table {} row {}", self.table, self.row_index())
    }

    /// Anchor of the row listing the morphism itself (tables 1 and 4).
    pub fn morphism_anchor(&self) -> String {
        format!("Table {} row {}", self.table - 1, self.row_index())
    }
}

use AntisquareCap::{MaxDistinct, MaxOrderBelow};

pub const TABLE_ROWS: &[TableRow] = &[
    TableRow { morphism: "xi3", table: 2, cap: MaxOrderBelow(3), beta: (8, 3), t: 8, m: 6, s: 36 },
    TableRow { morphism: "xi5", table: 2, cap: MaxOrderBelow(5), beta: (5, 2), t: 10, m: 16, s: 19 },
    TableRow { morphism: "xi6", table: 2, cap: MaxOrderBelow(6), beta: (7, 3), t: 14, m: 26, s: 37 },
    TableRow { morphism: "zeta3", table: 5, cap: MaxDistinct(3), beta: (3, 1), t: 6, m: 4, s: 13 },
    TableRow { morphism: "zeta6", table: 5, cap: MaxDistinct(6), beta: (8, 3), t: 8, m: 6, s: 36 },
    TableRow { morphism: "zeta9", table: 5, cap: MaxDistinct(9), beta: (38, 15), t: 9, m: 17, s: 192 },
    TableRow { morphism: "zeta10", table: 5, cap: MaxDistinct(10), beta: (5, 2), t: 10, m: 17, s: 75 },
    TableRow { morphism: "zeta15", table: 5, cap: MaxDistinct(15), beta: (17, 7), t: 11, m: 12, s: 194 },
    TableRow { morphism: "zeta16", table: 5, cap: MaxDistinct(16), beta: (7, 3), t: 14, m: 13, s: 192 },
];
