//! The JSON document every command produces.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use hopfcalc_core::abelian::FgAbelianGroup;
use hopfcalc_core::hopf::Stabilization;
use hopfcalc_core::verify::SuiteReport;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENGINE_VERSION: &str = concat!("hopfcalc ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Everything requested was computed and every cross-check passed.
    Ok,
    /// A cross-check failed or a value is inconclusive.
    Failed,
    /// Invalid input, a size bound, or an engine error.
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    /// `named`, `group`, `presentation` or `hom`.
    pub kind: String,
    /// Corpus name or file path as given.
    pub source: String,
    /// SHA-256 of the file contents, or of the name for corpus entries.
    pub sha256: String,
}

impl Input {
    pub fn named(name: &str) -> Self {
        Input {
            kind: "named".into(),
            source: name.into(),
            sha256: sha256_hex(name.as_bytes()),
        }
    }

    pub fn file(kind: &str, path: &Path, contents: &[u8]) -> Self {
        Input {
            kind: kind.into(),
            source: path.display().to_string(),
            sha256: sha256_hex(contents),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfSummary {
    pub value: Option<FgAbelianGroup>,
    pub stabilization: Stabilization,
    pub working_class: usize,
    pub provenance_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub group: String,
    pub degree: usize,
    pub method: String,
    pub primes: Vec<u64>,
    /// Invariant factors of the answer, present when it was determined.
    pub factors: Option<Vec<u64>>,
    pub free_rank: Option<usize>,
    pub bar: Option<FgAbelianGroup>,
    pub hopf: Option<HopfSummary>,
    /// Whether the two engines agree, when both ran and both have a value.
    pub agreement: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisResult {
    pub operation: String,
    pub mode: String,
    pub primes: Vec<u64>,
    pub domain_order: usize,
    pub codomain_order: usize,
    pub kernel_order: usize,
    /// Answer of `is-trivial`, `is-normal` and `characterisation`.
    pub holds: Option<bool>,
    /// `Ker f` is central in the domain.
    pub central: bool,
    /// Galois group of `galois group`.
    pub factors: Option<Vec<u64>>,
    pub free_rank: Option<usize>,
    /// `centralize`: the order of `A / [Ker f, A]` and its map to the codomain.
    pub centralized_order: Option<usize>,
    pub centralized_images: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub seed: u64,
    pub max_order: usize,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Results {
    Homology(HomologyResult),
    Galois(GaloisResult),
    Verify(VerifyResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Arguments after the program name; re-running them reproduces `results`.
    pub command: Vec<String>,
    pub engine_version: String,
    pub status: Status,
    pub inputs: Vec<Input>,
    pub results: Option<Results>,
    /// Wall-clock milliseconds per phase.
    pub timings_ms: BTreeMap<String, f64>,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            engine_version: ENGINE_VERSION.into(),
            status: Status::Ok,
            inputs: Vec::new(),
            results: None,
            timings_ms: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Marks a failed cross-check; an earlier error takes precedence.
    pub fn fail(&mut self, msg: impl Into<String>) {
        if self.status == Status::Ok {
            self.status = Status::Failed;
        }
        self.diagnostics.push(msg.into());
    }

    pub fn error(&mut self, msg: impl Into<String>) {
        self.status = Status::Error;
        self.diagnostics.push(msg.into());
    }

    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = std::time::Instant::now();
        let out = f();
        self.timings_ms
            .insert(phase.into(), start.elapsed().as_secs_f64() * 1000.0);
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.results {
            Some(Results::Homology(h)) => {
                let _ = writeln!(s, "H_{}({}) [{}]", h.degree, h.group, h.method);
                if !h.primes.is_empty() {
                    let _ = writeln!(s, "  localized at {:?}", h.primes);
                }
                if let Some(b) = &h.bar {
                    let _ = writeln!(s, "  bar:  {b}");
                }
                if let Some(p) = &h.hopf {
                    let v = p
                        .value
                        .as_ref()
                        .map_or("(no value)".to_string(), |v| v.to_string());
                    let how = match p.stabilization {
                        Stabilization::None => format!("exact at class {}", p.working_class),
                        Stabilization::Stable { k, next } => {
                            format!("stable at classes {k} and {next}")
                        }
                        Stabilization::Unstable { max_class } => {
                            format!("unstable up to class {max_class}")
                        }
                    };
                    let _ = writeln!(s, "  hopf: {v} ({how})");
                }
                if let Some(a) = h.agreement {
                    let _ = writeln!(s, "  agreement: {a}");
                }
            }
            Some(Results::Galois(g)) => {
                let _ = writeln!(
                    s,
                    "galois {} ({} mode, primes {:?})",
                    g.operation, g.mode, g.primes
                );
                let _ = writeln!(
                    s,
                    "  |A| = {}, |B| = {}, |Ker| = {}, central: {}",
                    g.domain_order, g.codomain_order, g.kernel_order, g.central
                );
                if let Some(h) = g.holds {
                    let _ = writeln!(s, "  {h}");
                }
                if let (Some(f), Some(r)) = (&g.factors, g.free_rank) {
                    let _ = writeln!(s, "  Gal = {}", FgAbelianGroup::new(f.iter().copied(), r));
                }
                if let Some(o) = g.centralized_order {
                    let _ = writeln!(s, "  centralized domain order {o}");
                }
            }
            Some(Results::Verify(v)) => {
                if v.suites.is_empty() {
                    let _ = writeln!(s, "no suites run");
                }
                for r in &v.suites {
                    let verdict = if r.passed() { "pass" } else { "FAIL" };
                    let _ = writeln!(
                        s,
                        "{:<17} {verdict} ({} cases, {} failed)",
                        r.suite, r.cases, r.failed
                    );
                    for c in &r.counterexamples {
                        let _ = writeln!(s, "    {c}");
                    }
                }
            }
            None => {}
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        s
    }
}

pub fn factors_u64(g: &FgAbelianGroup) -> Result<Vec<u64>, String> {
    g.factors_u64()
        .ok_or_else(|| format!("invariant factors of {g} do not fit in 64 bits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_round_trip_through_json() {
        let mut r = RunReport::new(vec!["homology".into(), "--named".into(), "V4".into()]);
        r.inputs.push(Input::named("V4"));
        r.results = Some(Results::Homology(HomologyResult {
            group: "V4".into(),
            degree: 2,
            method: "bar".into(),
            primes: vec![],
            factors: Some(vec![2]),
            free_rank: Some(0),
            bar: Some(FgAbelianGroup::cyclic(2)),
            hopf: None,
            agreement: None,
        }));
        r.time("bar", || ());
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failures_never_mask_errors() {
        let mut r = RunReport::new(vec![]);
        r.error("bad input");
        r.fail("mismatch");
        assert_eq!(r.status, Status::Error);
        assert_eq!(r.status.exit_code(), 2);
    }
}
