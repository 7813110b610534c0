use std::path::{Path, PathBuf};
use std::time::Instant;

use antisquare::antisquare::{characterized_minimal, inventory, minimal_antisquares};
use antisquare::enumeration::{growth_rate, FactorAvoidanceAutomaton};
use antisquare::fibanalysis::{analyze_w_repetitions, GoldenConstants, WRepetition};
use antisquare::morphism::{registry, verify_morphism, MorphismCheckReport, Registry, TableRow, TABLE_ROWS};
use antisquare::repetition::critical_exponent;
use antisquare::search::{
    count_by_length_with, longest_word_with, Checkpoint, ConstraintSet, LongestRow, SearchOptions, SearchOutcome,
    Violation, DEFAULT_COUNT_BUDGET, DEFAULT_SEARCH_BUDGET, LONGEST_ROWS,
};
use antisquare::{Error, Result, Word};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{big, Emitter};
use crate::{ConstraintArgs, RunArgs};

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

fn load_registry(path: Option<&Path>) -> Result<std::borrow::Cow<'static, Registry>> {
    Ok(match path {
        Some(p) => std::borrow::Cow::Owned(Registry::load(p)?),
        None => std::borrow::Cow::Borrowed(registry()),
    })
}

/// Anchor of the published row with exactly these constraints, if any.
fn row_anchor(c: &ConstraintSet) -> String {
    LONGEST_ROWS.iter().find(|r| r.constraints() == *c).map_or_else(|| "ad hoc".to_string(), LongestRow::anchor)
}

fn violation_witness(v: &Violation, w: &Word) -> String {
    match v {
        Violation::Alphabet(a) => a.to_string(),
        Violation::Forbidden { factor, .. } | Violation::AntisquareOrder { factor, .. } => factor.to_string(),
        Violation::Power { repetition, .. } => antisquare::word::digits(repetition.slice(w.letters())),
        Violation::AntisquareCount { found, .. } => found.iter().map(Word::to_string).collect::<Vec<_>>().join(","),
    }
}

fn read_inputs(inputs: &[String], alphabet: u8) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        if path.is_file() {
            let text = std::fs::read_to_string(path)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let w = Word::parse(line, alphabet)
                    .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?;
                words.push(w);
            }
        } else {
            words.push(Word::parse(input, alphabet).map_err(|e| Error::Parse(format!("'{input}': {e}")))?);
        }
    }
    Ok(words)
}

pub fn analyze(out: &mut Emitter, inputs: &[String], args: &ConstraintArgs) -> Result<()> {
    let c = if args.is_empty() { args.build_unchecked()? } else { args.build()? };
    let words = read_inputs(inputs, c.alphabet_size)?;
    let anchor = row_anchor(&c);
    for w in &words {
        let mut fields = json!({ "word": w.to_string(), "length": w.len(), "constraints": c.describe() });
        let mut line = format!("{w} (length {})", w.len());
        if !w.is_empty() {
            let (e, rep) = critical_exponent(w)?;
            fields["critical_exponent"] = e.to_string().into();
            fields["critical_exponent_decimal"] = e.to_f64().into();
            fields["repetition"] = json!({ "start": rep.start, "period": rep.period, "length": rep.length });
            line.push_str(&format!(
                "\n  critical exponent {e} at {} (period {}, length {})",
                rep.start, rep.period, rep.length
            ));
        }
        if w.is_binary() {
            let inv = inventory(w)?;
            fields["antisquares"] = inv.sorted().iter().map(|a| a.to_string()).collect::<Vec<_>>().into();
            fields["antisquare_count"] = inv.count().into();
            fields["max_order"] = inv.max_order.into();
            line.push_str(&format!("\n  antisquares {inv} (count {}, max order {})", inv.count(), inv.max_order));
        }
        match c.check_word(w) {
            Ok(()) => {
                fields["pass"] = true.into();
                line.push_str(&format!("\n  pass [{}]", c.describe()));
            }
            Err(v) => {
                out.fail();
                fields["pass"] = false.into();
                fields["violation"] = v.to_string().into();
                fields["witness"] = violation_witness(&v, w).into();
                line.push_str(&format!("\n  FAIL [{}]: {v}; witness {}", c.describe(), violation_witness(&v, w)));
            }
        }
        out.record("analyze", &anchor, fields);
        out.say(line);
    }
    Ok(())
}

pub fn generate(
    out: &mut Emitter,
    name: &str,
    length: usize,
    seed: u8,
    apply: Option<&str>,
    registry_path: Option<&Path>,
) -> Result<()> {
    let reg = load_registry(registry_path)?;
    let entry = reg.get(name).ok_or_else(|| Error::Domain(format!("unknown morphism '{name}'")))?;
    let m = &entry.morphism;
    let (mode, w) = match apply {
        Some(s) => {
            let pre = Word::parse(s, m.domain_alphabet()).map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
            ("image", m.apply(&pre)?)
        }
        None => ("fixed point prefix", m.fixed_point_prefix(seed, length)?),
    };
    out.record(
        "generate",
        &entry.source,
        json!({ "morphism": name, "mode": mode, "length": w.len(), "word": w.to_string() }),
    );
    out.say(format!("{name} {mode} of length {}:\n{w}", w.len()));
    Ok(())
}

fn search_options(run: &RunArgs, default_budget: u64) -> SearchOptions {
    SearchOptions::with_budget(run.budget.unwrap_or(default_budget)).jobs(run.jobs)
}

fn outcome_fields(o: &SearchOutcome, elapsed: u64) -> Value {
    json!({
        "max_length": o.max_length,
        "witness": o.witness.to_string(),
        "exhausted": o.exhausted,
        "nodes": o.nodes_explored,
        "wall_ms": elapsed,
    })
}

/// Loads `path` when resuming and it exists; the hook rewrites it each round.
fn checkpointed_search(
    c: &ConstraintSet,
    opts: &SearchOptions,
    path: Option<&Path>,
    resume: bool,
) -> Result<(SearchOutcome, Option<Checkpoint>)> {
    let start = match path {
        Some(p) if resume && p.exists() => Some(Checkpoint::load(p)?),
        _ => None,
    };
    let mut last = None;
    let outcome = longest_word_with(c, opts, start, &mut |cp| {
        if let Some(p) = path {
            cp.save(p)?;
        }
        last = Some(cp.clone());
        Ok(())
    })?;
    Ok((outcome, last))
}

pub fn search(
    out: &mut Emitter,
    args: &ConstraintArgs,
    run: &RunArgs,
    checkpoint: Option<&Path>,
    resume: bool,
    round: u64,
) -> Result<()> {
    let c = args.build()?;
    let mut opts = search_options(run, DEFAULT_SEARCH_BUDGET);
    opts.round_nodes = round.max(1);
    let t = Instant::now();
    let (o, _) = checkpointed_search(&c, &opts, checkpoint, resume)?;
    let mut fields = outcome_fields(&o, ms(t));
    fields["constraints"] = c.describe().into();
    if let Some(p) = checkpoint {
        fields["checkpoint"] = p.display().to_string().into();
    }
    if !o.exhausted {
        out.budget();
    }
    out.record("search", &row_anchor(&c), fields);
    out.say(format!(
        "[{}] longest word {} (length {}), {} nodes, {}",
        c.describe(),
        o.witness,
        o.max_length,
        o.nodes_explored,
        if o.exhausted { "exhausted" } else { "budget exhausted, length is a lower bound" }
    ));
    Ok(())
}

pub fn count(out: &mut Emitter, args: &ConstraintArgs, run: &RunArgs, n_max: usize, automaton: bool) -> Result<()> {
    let c = args.build()?;
    if automaton {
        if c.power.is_some() || c.max_antisquare_order.is_some() || c.max_distinct_antisquares.is_some() {
            return Err(Error::Domain("--automaton supports forbidden factors only".into()));
        }
        if c.alphabet_size != 2 {
            return Err(Error::Domain("--automaton counts binary words".into()));
        }
        let a = FactorAvoidanceAutomaton::new(&c.forbidden_factors)?;
        let series = a.counts_up_to(n_max);
        let mut tsv = String::from("n\tcount\n");
        for (n, x) in series.counts.iter().enumerate() {
            out.record("count", "ad hoc", json!({ "constraints": c.describe(), "n": n, "count": big(x) }));
            tsv.push_str(&format!("{n}\t{x}\n"));
        }
        out.say(tsv.trim_end());
        match growth_rate(&a, 1e-12) {
            Ok(g) => {
                out.record(
                    "count",
                    "ad hoc",
                    json!({ "constraints": c.describe(), "growth_rate": g.value, "residual": g.residual }),
                );
                out.say(format!("growth rate {:.15} (residual {:.1e})", g.value, g.residual));
            }
            Err(Error::Domain(_)) => {
                out.record("count", "ad hoc", json!({ "constraints": c.describe(), "growth_rate": 0.0 }));
                out.say("finite language, growth rate 0");
            }
            Err(e) => return Err(e),
        }
        return Ok(());
    }
    let t = Instant::now();
    let s = count_by_length_with(&c, n_max, &search_options(run, DEFAULT_COUNT_BUDGET))?;
    let anchor = row_anchor(&c);
    let mut tsv = String::from("n\tcount\n");
    for (n, x) in s.counts.iter().enumerate() {
        out.record("count", &anchor, json!({ "constraints": c.describe(), "n": n, "count": x }));
        tsv.push_str(&format!("{n}\t{x}\n"));
    }
    out.record(
        "count",
        &anchor,
        json!({
            "constraints": c.describe(),
            "n_max": s.counts.len().saturating_sub(1),
            "complete": s.complete,
            "nodes": s.nodes_explored,
            "wall_ms": ms(t),
        }),
    );
    if !s.complete {
        out.budget();
    }
    out.say(format!(
        "{}{} nodes, {}",
        tsv,
        s.nodes_explored,
        if s.complete {
            "complete".to_string()
        } else {
            format!("budget cut the series at n = {}", s.counts.len().saturating_sub(1))
        }
    ));
    Ok(())
}

fn rows_named(names: &[String]) -> Result<Vec<&'static TableRow>> {
    if names.is_empty() {
        return Ok(TABLE_ROWS.iter().collect());
    }
    names
        .iter()
        .map(|n| {
            TABLE_ROWS
                .iter()
                .find(|r| r.morphism == n)
                .ok_or_else(|| Error::Domain(format!("'{n}' has no published verification row")))
        })
        .collect()
}

fn check_rows(reg: &Registry, rows: &[&TableRow], jobs: usize) -> Result<Vec<(MorphismCheckReport, u64)>> {
    pool(jobs)?.install(|| {
        rows.par_iter()
            .map(|row| {
                let t = Instant::now();
                let m = reg.morphism(row.morphism)?;
                verify_morphism(m, row).map(|r| (r, ms(t)))
            })
            .collect()
    })
}

fn report_morphism(out: &mut Emitter, verb: &str, r: &MorphismCheckReport, elapsed: u64) {
    if !r.passed() {
        out.fail();
    }
    out.record(
        verb,
        &r.row.anchor(),
        json!({
            "morphism": r.row.morphism,
            "beta": r.image_check.bound.to_string(),
            "t": r.image_check.t,
            "m": r.complement_factor_bound,
            "published_m": r.row.m,
            "s": r.row.s,
            "synchronizing": r.synchronizing,
            "image_bound_ok": r.image_check.ok(),
            "words_checked": r.image_check.words_checked,
            "antisquare_count": r.inventory.count(),
            "max_order": r.inventory.max_order,
            "cap_respected": r.cap_respected(),
            "pass": r.passed(),
            "wall_ms": elapsed,
        }),
    );
    out.say(format!(
        "{:<15} {:<7} beta={:<7} t={:<3} m={:<3} (published {:<3}) s={:<4} sync={} images={} antisquares={} max-order={} {}",
        r.row.anchor(),
        r.row.morphism,
        r.image_check.bound.to_string(),
        r.image_check.t,
        r.complement_factor_bound,
        r.row.m,
        r.row.s,
        r.synchronizing,
        r.image_check.ok(),
        r.inventory.count(),
        r.inventory.max_order,
        if r.passed() { "ok" } else { "MISMATCH" }
    ));
}

pub fn verify_morphisms(out: &mut Emitter, names: &[String], registry_path: Option<&Path>, jobs: usize) -> Result<()> {
    let reg = load_registry(registry_path)?;
    let rows = rows_named(names)?;
    for (r, elapsed) in check_rows(&reg, &rows, jobs)? {
        report_morphism(out, "verify-morphism", &r, elapsed);
    }
    Ok(())
}

pub fn minimal(out: &mut Emitter, max_order: usize, words: bool) -> Result<()> {
    let t = Instant::now();
    let table = minimal_antisquares(max_order)?;
    for (order, found) in &table.by_order {
        let closed = characterized_minimal(*order)?;
        let equal = *found == closed;
        if !equal {
            out.fail();
        }
        let mut fields = json!({
            "order": order,
            "count": found.len(),
            "closed_form_count": closed.len(),
            "equal": equal,
        });
        if words {
            fields["words"] = found.iter().map(Word::to_string).collect::<Vec<_>>().into();
        }
        out.record("minimal-antisquares", &format!("minimal antisquares order {order}"), fields);
        out.say(format!(
            "order {order:>2}: {:>3} minimal antisquares, closed form {:>3} {}",
            found.len(),
            closed.len(),
            if equal { "equal" } else { "MISMATCH" }
        ));
        if words {
            for w in found {
                out.say(format!("  {w}"));
            }
        }
    }
    out.say(format!("{} ms", ms(t)));
    Ok(())
}

fn repetition_fields(r: &WRepetition) -> Value {
    json!({
        "k": r.k,
        "n": r.n,
        "p": r.p,
        "exponent": r.exponent.to_string(),
        "exponent_decimal": r.exponent.to_f64(),
        "zeckendorf": r.zeckendorf.as_str(),
        "occurrences": r.occurrences,
        "gap": r.gap(),
    })
}

pub fn fib_report(out: &mut Emitter, prefix_len: usize) -> Result<()> {
    let t = Instant::now();
    let report = analyze_w_repetitions(prefix_len)?;
    let anchor = "word w";
    let inv_ok = report.inventory.is_good();
    if !inv_ok {
        out.fail();
    }
    out.record(
        "fib-report",
        anchor,
        json!({
            "prefix_len": prefix_len,
            "antisquares": report.inventory.sorted().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "good": inv_ok,
        }),
    );
    out.say(format!("prefix of w of length {prefix_len}: antisquares {}", report.inventory));
    let mut tsv = String::from("k\tn\tp\texponent\tdecimal\tzeckendorf\tgap\n");
    for r in report.rows.iter().chain(&report.sporadic) {
        out.record("fib-report", anchor, repetition_fields(r));
        let k = r.k.map_or("-".to_string(), |k| k.to_string());
        tsv.push_str(&format!(
            "{k}\t{}\t{}\t{}\t{:.12}\t{}\t{:.3e}\n",
            r.n,
            r.p,
            r.exponent,
            r.exponent.to_f64(),
            r.zeckendorf.as_str(),
            r.gap()
        ));
    }
    out.say(tsv.trim_end());
    let decreasing = report.rows.windows(2).all(|w| w[1].gap() < w[0].gap());
    let positive = report.rows.iter().all(|r| r.gap() > 0.0);
    let below = GoldenConstants::below_target(report.max_exponent);
    if !(decreasing && positive && below) {
        out.fail();
    }
    let gap = GoldenConstants::new().gap(report.max_exponent);
    out.record(
        "fib-report",
        anchor,
        json!({
            "family_rows": report.rows.len(),
            "sporadic_rows": report.sporadic.len(),
            "max_exponent": report.max_exponent.to_string(),
            "max_exponent_decimal": report.max_exponent.to_f64(),
            "below_two_plus_alpha": below,
            "gap": gap,
            "gap_decreasing": decreasing,
            "wall_ms": ms(t),
        }),
    );
    out.say(format!(
        "{} family rows, {} sporadic; max exponent {} = {:.12}, gap to 2+alpha {:.3e}, gaps decreasing: {decreasing}",
        report.rows.len(),
        report.sporadic.len(),
        report.max_exponent,
        report.max_exponent.to_f64(),
        gap
    ));
    Ok(())
}

pub struct TableOptions {
    pub tables: Vec<u8>,
    pub run: RunArgs,
    pub skip_slow: bool,
    pub checkpoint_dir: Option<PathBuf>,
    pub resume: bool,
    pub registry: Option<PathBuf>,
}

pub fn reproduce_tables(out: &mut Emitter, opts: &TableOptions) -> Result<()> {
    let reg = load_registry(opts.registry.as_deref())?;
    reg.verify_integrity()?;
    let mut tables = opts.tables.clone();
    if tables.is_empty() {
        tables = (1..=6).collect();
    }
    tables.sort_unstable();
    tables.dedup();
    if let Some(dir) = &opts.checkpoint_dir {
        std::fs::create_dir_all(dir)?;
    }
    for t in tables {
        out.say(format!("Table {t}"));
        match t {
            1 | 4 => morphism_table(out, &reg, t + 1),
            2 | 5 => {
                let rows: Vec<&TableRow> = TABLE_ROWS.iter().filter(|r| r.table == t).collect();
                for (r, elapsed) in check_rows(&reg, &rows, opts.run.jobs)? {
                    report_morphism(out, "reproduce-tables", &r, elapsed);
                }
            }
            _ => {
                for row in LONGEST_ROWS.iter().filter(|r| r.table == t) {
                    longest_row(out, row, opts)?;
                }
            }
        }
    }
    Ok(())
}

/// Image lengths and digests of the morphisms behind a parameter table.
fn morphism_table(out: &mut Emitter, reg: &Registry, param_table: u8) {
    for row in TABLE_ROWS.iter().filter(|r| r.table == param_table) {
        let entry = reg.get(row.morphism);
        let s = entry.and_then(|e| e.morphism.uniform_length());
        let ok = s == Some(row.s);
        if !ok {
            out.fail();
        }
        let checksums = entry.map(|e| e.checksums()).unwrap_or_default();
        out.record(
            "reproduce-tables",
            &row.morphism_anchor(),
            json!({ "morphism": row.morphism, "s": s, "published_s": row.s, "checksums": checksums, "pass": ok }),
        );
        out.say(format!(
            "{:<15} {:<7} s={:<4} (published {:<4}) {}",
            row.morphism_anchor(),
            row.morphism,
            s.map_or("-".into(), |s| s.to_string()),
            row.s,
            if ok { "ok" } else { "MISMATCH" }
        ));
    }
}

fn row_label(row: &LongestRow) -> String {
    match (row.max_order, row.max_count) {
        (Some(l), _) => format!("order<{l}"),
        (_, Some(n)) => format!("n={n}"),
        _ => String::new(),
    }
}

fn longest_row(out: &mut Emitter, row: &LongestRow, opts: &TableOptions) -> Result<()> {
    let anchor = row.anchor();
    let beta = format!("{}/{}", row.beta.0, row.beta.1);
    let base = json!({
        "beta": beta,
        "max_order": row.max_order,
        "max_count": row.max_count,
        "published_length": row.length,
    });
    if row.slow && opts.skip_slow {
        let mut fields = base;
        fields["status"] = "skipped".into();
        out.record("reproduce-tables", &anchor, fields);
        out.say(format!("{anchor:<15} {:<9} beta={beta:<6} L={:<4} skipped", row_label(row), row.length));
        return Ok(());
    }
    let c = row.constraints();
    let search_opts = search_options(&opts.run, DEFAULT_SEARCH_BUDGET);
    let file = format!("table-{}-row-{}.ckpt", row.table, row.row);
    let path = opts.checkpoint_dir.as_ref().map(|d| d.join(&file));
    let t = Instant::now();
    let (o, last) = checkpointed_search(&c, &search_opts, path.as_deref(), opts.resume)?;
    let mut fields = outcome_fields(&o, ms(t));
    for (k, v) in base.as_object().into_iter().flatten() {
        fields[k] = v.clone();
    }
    let status = if !o.exhausted {
        out.budget();
        let saved = match (&path, last) {
            (Some(p), _) => p.clone(),
            (None, Some(cp)) => {
                let p = std::env::temp_dir().join(format!("antisquare-{file}"));
                cp.save(&p)?;
                p
            }
            (None, None) => PathBuf::new(),
        };
        fields["checkpoint"] = saved.display().to_string().into();
        "budget"
    } else if o.max_length == row.length {
        "ok"
    } else {
        out.fail();
        "mismatch"
    };
    fields["status"] = status.into();
    let note = match fields.get("checkpoint").and_then(Value::as_str) {
        Some(p) => format!(" checkpoint {p}"),
        None => String::new(),
    };
    out.record("reproduce-tables", &anchor, fields);
    out.say(format!(
        "{anchor:<15} {:<9} beta={beta:<6} L={:<4} found={:<4} exhausted={} nodes={} {status}{note}",
        row_label(row),
        row.length,
        o.max_length,
        o.exhausted,
        o.nodes_explored
    ));
    Ok(())
}
