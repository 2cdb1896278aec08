//! Command implementations behind the `triplex` binary: verify
//! certificate/design files, realize flower-intersection targets and
//! Latin-triple agreements, run the exhaustive small-order
//! enumerations, recompute the catalog's recorded identities, and
//! export the catalog.
//!
//! Each command returns a [`CommandOutcome`] instead of exiting, so the
//! same entry points drive both the binary and the integration tests.
//! Exit statuses are stable contracts:
//!
//! - `0` success,
//! - `1` verified failure or mismatch against recorded values,
//! - `2` usage error (unparsable input, inadmissible or
//!   out-of-spectrum parameters; the message cites the violated
//!   condition),
//! - `3` realizable-looking target that no route realized
//!   (search budget exhausted or a needed component is only available
//!   in external literature; the message names it).

pub mod formats;

use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use triplex_core::catalog::{self, published_spectrum, reproduce_checks, CatalogPayload};
use triplex_core::latin::realize_three_way;
use triplex_core::planner::{plan_and_realize, PlanError};
use triplex_core::search::{
    exhaustive_flower_spectrum, exhaustive_latin_3way, SearchConfig,
};
use triplex_core::spectrum::{published_jprime3, SpectrumSet};

use formats::{
    read_json, write_json, BlockDesignFile, CertificateFile, DesignFile, LatinTripleFile,
    PlanFile,
};

/// What a command did: a process exit status, a one-line summary, and
/// any files written. `report` carries the machine-readable form; it is
/// written to the `--out` path when one is given.
#[derive(Debug)]
pub struct CommandOutcome {
    pub status: i32,
    pub summary: String,
    pub outputs: Vec<PathBuf>,
}

impl CommandOutcome {
    fn ok(summary: impl Into<String>) -> Self {
        CommandOutcome { status: 0, summary: summary.into(), outputs: Vec::new() }
    }

    fn fail(status: i32, summary: impl Into<String>) -> Self {
        CommandOutcome { status, summary: summary.into(), outputs: Vec::new() }
    }

    fn with_output(mut self, path: PathBuf) -> Self {
        self.outputs.push(path);
        self
    }
}

/// Where external data files (group divisible designs, square sets)
/// live: `TRIPLEX_DATA_DIR` when set, else `./data`.
pub fn data_dir() -> PathBuf {
    match env::var_os("TRIPLEX_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from("data"),
    }
}

/// A path as given, or (when the file is not there) the same file name
/// under [`data_dir`].
pub fn resolve_input(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let fallback = data_dir().join(path);
    if fallback.exists() {
        fallback
    } else {
        path.to_path_buf()
    }
}

macro_rules! say {
    ($quiet:expr, $($arg:tt)*) => {
        if !$quiet {
            println!($($arg)*);
        }
    };
}

// ---------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyReport {
    file: String,
    kind: String,
    checks: Vec<(String, bool, String)>,
    valid: bool,
    k: Option<u32>,
    flower_point: Option<u16>,
}

/// Check a file: a certificate (three systems + flower point + claimed
/// k), a group divisible design (has `"groups"`), or a single triple
/// system. Prints one line per invariant; exit 0 iff everything holds.
pub fn cmd_verify(path: &Path, out: Option<&Path>, quiet: bool) -> CommandOutcome {
    let path = resolve_input(path);
    let value: serde_json::Value = match read_json(&path) {
        Ok(v) => v,
        Err(e) => return CommandOutcome::fail(2, format!("{e:#}")),
    };
    let mut report = VerifyReport {
        file: path.display().to_string(),
        kind: String::new(),
        checks: Vec::new(),
        valid: true,
        k: None,
        flower_point: None,
    };
    let obj = value.as_object();
    let has = |key: &str| obj.map_or(false, |m| m.contains_key(key));
    if has("flower_point") {
        report.kind = "certificate".into();
        let file: CertificateFile = match serde_json::from_value(value) {
            Ok(f) => f,
            Err(e) => return CommandOutcome::fail(2, format!("cannot parse certificate: {e}")),
        };
        let cert = file.into_certificate();
        report.flower_point = Some(cert.flower_point);
        // Walk the invariants one by one so every line is informative,
        // then let the verifier have the final word.
        for (i, sys) in cert.triple.systems.iter().enumerate() {
            let rep = sys.validate();
            report.checks.push((format!("system {i} is a Steiner triple system"), rep.ok(), rep.summary()));
        }
        let common = cert.triple.common();
        report.checks.push((
            "three pairwise intersections are identical".into(),
            common.is_ok(),
            match &common {
                Ok(c) => format!("{} common blocks", c.len()),
                Err(e) => format!("{e}"),
            },
        ));
        let verdict = cert.verify();
        match &verdict {
            Ok(k) => {
                let r = cert.r() as u32;
                report.k = Some(*k);
                report.checks.push((
                    format!("flower at point {} is common", cert.flower_point),
                    true,
                    format!("{r} flower blocks"),
                ));
                report.checks.push((
                    format!("claimed k = {} matches", cert.claimed_k),
                    true,
                    format!("recomputed k = {k}"),
                ));
            }
            Err(e) => {
                report.checks.push(("verifier accepts the certificate".into(), false, format!("{e}")));
            }
        }
        report.valid = verdict.is_ok();
        for (name, ok, detail) in &report.checks {
            say!(quiet, "[{}] {name}: {detail}", if *ok { "ok" } else { "FAIL" });
        }
        let summary = match verdict {
            Ok(k) => format!(
                "valid certificate: v = {}, flower at {}, k = {k}",
                cert.v(),
                cert.flower_point
            ),
            Err(e) => format!("invalid certificate: {e}"),
        };
        finish_verify(report, summary, out, quiet)
    } else if has("groups") {
        report.kind = "group divisible design".into();
        let file: BlockDesignFile = match serde_json::from_value(value) {
            Ok(f) => f,
            Err(e) => return CommandOutcome::fail(2, format!("cannot parse design: {e}")),
        };
        let v = file.v;
        let gdd = triplex_core::pbd::GroupDivisibleDesign::new(
            v,
            file.groups.unwrap_or_default(),
            file.blocks,
        );
        let rep = gdd.validate();
        report.valid = rep.ok();
        report.checks.push(("group divisible design audit".into(), rep.ok(), rep.summary()));
        say!(quiet, "[{}] group divisible design audit: {}", if rep.ok() { "ok" } else { "FAIL" }, rep.summary());
        let type_desc: String = gdd
            .group_type()
            .iter()
            .fold(String::new(), |mut s, (size, count)| {
                let _ = write!(s, "{size}^{count} ");
                s
            });
        let summary = if rep.ok() {
            format!("valid group divisible design on {v} points, type {}", type_desc.trim_end())
        } else {
            format!("invalid group divisible design: {}", rep.summary())
        };
        finish_verify(report, summary, out, quiet)
    } else {
        report.kind = "design".into();
        let file: DesignFile = match serde_json::from_value(value) {
            Ok(f) => f,
            Err(e) => return CommandOutcome::fail(2, format!("cannot parse design: {e}")),
        };
        let v = file.v;
        let sys = triplex_core::design::TripleSystem::new(file.v, file.blocks);
        let rep = sys.validate();
        report.valid = rep.ok();
        report.checks.push(("triple system audit".into(), rep.ok(), rep.summary()));
        say!(quiet, "[{}] triple system audit: {}", if rep.ok() { "ok" } else { "FAIL" }, rep.summary());
        let summary = if rep.ok() {
            format!("valid triple system of order {v} with {} blocks", sys.blocks().len())
        } else {
            format!("invalid triple system: {}", rep.summary())
        };
        finish_verify(report, summary, out, quiet)
    }
}

fn finish_verify(
    report: VerifyReport,
    summary: String,
    out: Option<&Path>,
    quiet: bool,
) -> CommandOutcome {
    let status = if report.valid { 0 } else { 1 };
    let mut outcome = CommandOutcome { status, summary, outputs: Vec::new() };
    if let Some(out) = out {
        if let Err(e) = write_json(out, &report) {
            return CommandOutcome::fail(2, format!("{e:#}"));
        }
        outcome = outcome.with_output(out.to_path_buf());
    }
    say!(quiet, "{}", outcome.summary);
    outcome
}

// ---------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------

/// Plan and realize a flower-intersection target `(r, k)`; on success
/// write `<out>.certificate.json` and `<out>.plan.json`.
pub fn cmd_realize(
    r: usize,
    k: u32,
    seed: u64,
    budget: u64,
    out: Option<&Path>,
    quiet: bool,
) -> CommandOutcome {
    let config = SearchConfig { seed, budget, ..SearchConfig::default() };
    match plan_and_realize(r, k, &config) {
        Ok((plan, cert)) => {
            let stem: PathBuf = match out {
                Some(p) => p.to_path_buf(),
                None => PathBuf::from(format!("triplex-r{r}-k{k}")),
            };
            let cert_path = with_suffix(&stem, "certificate.json");
            let plan_path = with_suffix(&stem, "plan.json");
            if let Err(e) = write_json(&cert_path, &CertificateFile::from_certificate(&cert)) {
                return CommandOutcome::fail(2, format!("{e:#}"));
            }
            if let Err(e) = write_json(&plan_path, &PlanFile::from_plan(&plan)) {
                return CommandOutcome::fail(2, format!("{e:#}"));
            }
            say!(quiet, "{}", describe_plan(&PlanFile::from_plan(&plan), 0));
            let outcome = CommandOutcome::ok(format!(
                "realized and verified (r = {r}, k = {k}): wrote {} and {}",
                cert_path.display(),
                plan_path.display()
            ))
            .with_output(cert_path)
            .with_output(plan_path);
            say!(quiet, "{}", outcome.summary);
            outcome
        }
        Err(e @ PlanError::NotAdmissible { .. }) | Err(e @ PlanError::OutsideSpectrum { .. }) => {
            CommandOutcome::fail(2, format!("{e}"))
        }
        Err(e @ PlanError::PlanUnavailable { .. }) => CommandOutcome::fail(3, format!("{e}")),
    }
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut name = stem.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn describe_plan(plan: &PlanFile, depth: usize) -> String {
    let pad = "  ".repeat(depth);
    let mut text = match &plan.node {
        formats::PlanNodeFile::Leaf { method } => {
            format!("{pad}(r = {}, k = {}) leaf: {method}", plan.r, plan.k)
        }
        formats::PlanNodeFile::TripleWithDiagonal { b, a1, a2, a, .. } => format!(
            "{pad}(r = {}, k = {}) layered expansion over a diagonal Latin triple: \
             b = {b}, a1 = {a1}, a2 = {a2}, a = {a}",
            plan.r, plan.k
        ),
        formats::PlanNodeFile::Expand3r { b, parts, .. } => format!(
            "{pad}(r = {}, k = {}) one-shared-point expansion: parts {parts:?}, b = {b}",
            plan.r, plan.k
        ),
        formats::PlanNodeFile::Expand3r1 { b, parts, .. } => format!(
            "{pad}(r = {}, k = {}) one-shared-block expansion: parts {parts:?}, b = {b}",
            plan.r, plan.k
        ),
        formats::PlanNodeFile::Double { s, .. } => {
            format!("{pad}(r = {}, k = {}) doubling with s = {s} fixed hubs", plan.r, plan.k)
        }
        formats::PlanNodeFile::PbdCompose { t, assignments, .. } => format!(
            "{pad}(r = {}, k = {}) composition over B({{6,{t}}},1,{}): per-block {assignments:?}",
            plan.r,
            plan.k,
            plan.r
        ),
    };
    let children: &[PlanFile] = match &plan.node {
        formats::PlanNodeFile::Leaf { .. } => &[],
        formats::PlanNodeFile::TripleWithDiagonal { children, .. }
        | formats::PlanNodeFile::Expand3r { children, .. }
        | formats::PlanNodeFile::Expand3r1 { children, .. }
        | formats::PlanNodeFile::PbdCompose { children, .. } => children,
        formats::PlanNodeFile::Double { child, .. } => std::slice::from_ref(child),
    };
    for child in children {
        text.push('\n');
        text.push_str(&describe_plan(child, depth + 1));
    }
    text
}

// ---------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct EnumerateReport {
    target: String,
    computed: Vec<u32>,
    recorded: Vec<u32>,
    matches: bool,
}

/// Exhaustively enumerate a small spectrum — the flower-intersection
/// spectrum at `r ∈ {3, 4}` or the three-way Latin agreement spectrum
/// at `n ≤ 4` — and compare against the recorded values.
pub fn cmd_enumerate(
    r: Option<usize>,
    latin_n: Option<usize>,
    out: Option<&Path>,
    quiet: bool,
) -> CommandOutcome {
    let (target, computed, recorded): (String, SpectrumSet, SpectrumSet) = match (r, latin_n) {
        (Some(r), None) => {
            let computed = match exhaustive_flower_spectrum(r) {
                Ok(s) => s,
                Err(e) => return CommandOutcome::fail(2, format!("{e}")),
            };
            let recorded = match published_spectrum(r) {
                Some(p) if p.exact => p.lower,
                _ => {
                    return CommandOutcome::fail(
                        2,
                        format!("no exact recorded spectrum for r = {r} to compare against"),
                    )
                }
            };
            (format!("flower-intersection spectrum at r = {r}"), computed, recorded)
        }
        (None, Some(n)) => {
            let computed = match exhaustive_latin_3way(n) {
                Ok(s) => s.set,
                Err(e) => return CommandOutcome::fail(2, format!("{e}")),
            };
            (format!("three-way Latin agreement spectrum at n = {n}"), computed, published_jprime3(n))
        }
        _ => return CommandOutcome::fail(2, "pass exactly one of --r or --latin-n".to_string()),
    };
    let matches = computed == recorded;
    say!(quiet, "computed: {:?}", computed.iter().collect::<Vec<_>>());
    say!(quiet, "recorded: {:?}", recorded.iter().collect::<Vec<_>>());
    let report = EnumerateReport {
        target: target.clone(),
        computed: computed.iter().copied().collect(),
        recorded: recorded.iter().copied().collect(),
        matches,
    };
    let mut outcome = if matches {
        CommandOutcome::ok(format!("{target}: matches the recorded set"))
    } else {
        CommandOutcome::fail(1, format!("{target}: differs from the recorded set"))
    };
    if let Some(out) = out {
        if let Err(e) = write_json(out, &report) {
            return CommandOutcome::fail(2, format!("{e:#}"));
        }
        outcome = outcome.with_output(out.to_path_buf());
    }
    say!(quiet, "{}", outcome.summary);
    outcome
}

// ---------------------------------------------------------------------
// latin-realize
// ---------------------------------------------------------------------

/// Realize a Latin triple of order `n` with agreement exactly `k`.
/// With `jobs > 1`, seeds `seed..seed+jobs` race in parallel and the
/// lowest-seed success wins, so the result stays deterministic.
pub fn cmd_latin_realize(
    n: usize,
    k: u32,
    seed: u64,
    budget: u64,
    jobs: usize,
    out: Option<&Path>,
    quiet: bool,
) -> CommandOutcome {
    use triplex_core::latin::LatinRealizeError;
    let jobs = jobs.max(1);
    let result = if jobs == 1 {
        realize_three_way(n, k, seed, budget)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|i| scope.spawn(move || realize_three_way(n, k, seed.wrapping_add(i), budget)))
                .collect();
            let mut first_err = None;
            let mut found = None;
            for handle in handles {
                match handle.join().expect("search thread panicked") {
                    Ok(t) if found.is_none() => found = Some(t),
                    Ok(_) => {}
                    Err(e) => first_err = first_err.or(Some(e)),
                }
            }
            match found {
                Some(t) => Ok(t),
                None => Err(first_err.unwrap_or(LatinRealizeError::Unrealized { n, k })),
            }
        })
    };
    match result {
        Ok(triple) => {
            debug_assert_eq!(triple.k(), k);
            let mut outcome = CommandOutcome::ok(format!(
                "realized a Latin triple of order {n} with agreement {k} (re-verified)"
            ));
            if let Some(out) = out {
                if let Err(e) = write_json(out, &LatinTripleFile::from_triple(&triple)) {
                    return CommandOutcome::fail(2, format!("{e:#}"));
                }
                outcome = outcome.with_output(out.to_path_buf());
            }
            say!(quiet, "{}", outcome.summary);
            outcome
        }
        Err(e @ LatinRealizeError::TargetNotInSpectrum { .. })
        | Err(e @ LatinRealizeError::EvenOrder { .. })
        | Err(e @ LatinRealizeError::NoDecomposition { .. }) => {
            CommandOutcome::fail(2, format!("{e}"))
        }
        Err(e @ LatinRealizeError::Unrealized { .. }) => CommandOutcome::fail(
            3,
            format!("{e} (within budget {budget}, seeds {seed}..{})", seed + jobs as u64),
        ),
    }
}

// ---------------------------------------------------------------------
// paper-check
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct CheckReportRow {
    label: String,
    claimed_k: u32,
    computed_k: Option<u32>,
    flower_point: Option<u16>,
    matches: bool,
    detail: String,
}

/// Recompute every identity recorded with the catalog — each a triple
/// of embedded systems under recorded relabelings with a stated
/// intersection — and print the comparison table.
pub fn cmd_paper_check(out: Option<&Path>, quiet: bool) -> CommandOutcome {
    let rows = reproduce_checks();
    let mut all_ok = true;
    let mut report = Vec::new();
    say!(quiet, "{:<12} {:>9} {:>10} {:>8}  {}", "label", "claimed k", "computed k", "flower", "status");
    for row in &rows {
        all_ok &= row.matches;
        say!(
            quiet,
            "{:<12} {:>9} {:>10} {:>8}  {}{}",
            row.label,
            row.claimed_k,
            row.computed_k.map_or("-".into(), |k| k.to_string()),
            row.flower_point.map_or("-".into(), |p| p.to_string()),
            if row.matches { "ok" } else { "MISMATCH" },
            if row.detail.is_empty() { String::new() } else { format!("  ({})", row.detail) },
        );
        report.push(CheckReportRow {
            label: row.label.clone(),
            claimed_k: row.claimed_k,
            computed_k: row.computed_k,
            flower_point: row.flower_point,
            matches: row.matches,
            detail: row.detail.clone(),
        });
    }
    let mut outcome = if all_ok {
        CommandOutcome::ok(format!("all {} recorded identities recompute exactly", rows.len()))
    } else {
        CommandOutcome::fail(1, "some recorded identities do not recompute".to_string())
    };
    if let Some(out) = out {
        if let Err(e) = write_json(out, &report) {
            return CommandOutcome::fail(2, format!("{e:#}"));
        }
        outcome = outcome.with_output(out.to_path_buf());
    }
    say!(quiet, "{}", outcome.summary);
    outcome
}

// ---------------------------------------------------------------------
// export-catalog
// ---------------------------------------------------------------------

/// Write every embedded catalog system to a design file in `dir`.
pub fn cmd_export_catalog(dir: &Path, quiet: bool) -> CommandOutcome {
    if let Err(e) = fs::create_dir_all(dir) {
        return CommandOutcome::fail(2, format!("cannot create {}: {e}", dir.display()));
    }
    let mut outcome = CommandOutcome::ok(String::new());
    let mut systems = 0usize;
    let mut skipped = 0usize;
    for id in catalog::identifiers() {
        let entry = match catalog::get(id) {
            Ok(e) => e,
            Err(e) => return CommandOutcome::fail(2, format!("{e}")),
        };
        match &entry.payload {
            CatalogPayload::System(sys) => {
                let path = dir.join(format!("{id}.json"));
                if let Err(e) = write_json(&path, &DesignFile::from_system(sys)) {
                    return CommandOutcome::fail(2, format!("{e:#}"));
                }
                say!(quiet, "wrote {}", path.display());
                outcome.outputs.push(path);
                systems += 1;
            }
            _ => skipped += 1,
        }
    }
    outcome.summary = format!(
        "exported {systems} systems to {} ({skipped} non-system entries kept embedded)",
        dir.display()
    );
    say!(quiet, "{}", outcome.summary);
    outcome
}
