use std::fmt::Write as _;
use std::path::Path;

use super::dfs::Cursor;
use crate::error::{Error, Result};
use crate::word::digits;

/// First line of every checkpoint file; bump the version on format changes.
pub const CHECKPOINT_MAGIC: &str = "ANTISQUARE-SEARCH-CHECKPOINT v1";

/// Saved state of a longest-word search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    /// [`ConstraintSet::describe`](super::ConstraintSet::describe) of the search.
    pub constraints: String,
    pub nodes: u64,
    pub best: Vec<u8>,
    pub pending: Vec<Cursor>,
}

impl Checkpoint {
    pub fn is_finished(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CHECKPOINT_MAGIC}");
        let _ = writeln!(s, "constraints {}", self.constraints);
        let _ = writeln!(s, "nodes {}", self.nodes);
        let _ = writeln!(s, "best {}", or_dash(&self.best));
        for c in &self.pending {
            let _ = writeln!(s, "cursor {} {} {} {}", c.root_len, c.next, u8::from(c.visited_root), or_dash(&c.path));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let bad = |m: &str| Error::Parse(format!("checkpoint: {m}"));
        let mut lines = text.lines();
        if lines.next() != Some(CHECKPOINT_MAGIC) {
            return Err(bad("missing or unsupported header"));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated"))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| bad(&format!("expected '{key}'")))
        };
        let constraints = field("constraints")?;
        let nodes = field("nodes")?.parse().map_err(|_| bad("nodes"))?;
        let best = letters(&field("best")?).ok_or_else(|| bad("best"))?;
        let mut pending = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split(' ').collect();
            let cursor = match parts.as_slice() {
                ["cursor", root, next, visited, path] => {
                    let path = letters(path).ok_or_else(|| bad("cursor path"))?;
                    let root_len: usize = root.parse().map_err(|_| bad("cursor root"))?;
                    if root_len > path.len() {
                        return Err(bad("cursor root beyond path"));
                    }
                    Cursor {
                        root_len,
                        path,
                        next: next.parse().map_err(|_| bad("cursor next"))?,
                        visited_root: *visited == "1",
                    }
                }
                _ => return Err(bad(&format!("unexpected line '{line}'"))),
            };
            pending.push(cursor);
        }
        Ok(Checkpoint { constraints, nodes, best, pending })
    }

    /// Writes through a temporary file so a crash never leaves half a checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        Checkpoint::parse(&std::fs::read_to_string(path)?)
    }
}

fn or_dash(letters: &[u8]) -> String {
    if letters.is_empty() {
        "-".into()
    } else {
        digits(letters)
    }
}

fn letters(s: &str) -> Option<Vec<u8>> {
    if s == "-" {
        return Some(Vec::new());
    }
    s.bytes().map(|b| (b'0'..=b'2').contains(&b).then(|| b - b'0')).collect()
}
