use std::io::Write;

use serde_json::{Map, Value};

/// Final status of a run, in increasing precedence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Budget,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Budget => 3,
        }
    }
}

/// Writes one JSON record per line on stdout and the human summary on
/// stderr.
pub struct Emitter {
    quiet: bool,
    status: Status,
}

impl Emitter {
    pub fn new(quiet: bool) -> Emitter {
        Emitter { quiet, status: Status::Ok }
    }

    pub fn record(&mut self, verb: &str, anchor: &str, fields: Value) {
        let mut map = Map::new();
        map.insert("verb".into(), verb.into());
        map.insert("anchor".into(), anchor.into());
        if let Value::Object(extra) = fields {
            map.extend(extra);
        }
        let line = Value::Object(map).to_string();
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
    }

    pub fn say(&self, text: impl AsRef<str>) {
        if !self.quiet {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "{}", text.as_ref());
        }
    }

    pub fn fail(&mut self) {
        self.status = self.status.max(Status::Failed);
    }

    pub fn budget(&mut self) {
        self.status = self.status.max(Status::Budget);
    }

    pub fn status(&self) -> Status {
        self.status
    }
}

/// A count as a JSON number when it fits, else as a decimal string.
pub fn big(n: &num_bigint::BigUint) -> Value {
    match u64::try_from(n) {
        Ok(x) => x.into(),
        Err(_) => n.to_string().into(),
    }
}
