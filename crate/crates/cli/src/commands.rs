use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hopfcalc_core::abelian::{quotient_by_torsion, FgAbelianGroup, PrimeSet};
use hopfcalc_core::bar::homology;
use hopfcalc_core::corpus::entry;
use hopfcalc_core::galois::{is_central, GaloisContext, Mode};
use hopfcalc_core::group::{named_group, FiniteGroup, GroupHom, GroupSpec, HomSpec};
use hopfcalc_core::hopf::{hopf_pi_n_localized, NilPresentation};
use hopfcalc_core::verify::{self, VerifyOptions};
use hopfcalc_core::Error;

use crate::report::{
    factors_u64, GaloisResult, HomologyResult, HopfSummary, Input, Results, RunReport, VerifyResult,
};

/// A failure that ends the command; `Failed` for inconclusive or
/// contradictory results, `Error` for everything else.
pub enum Abort {
    Failed(String),
    Error(String),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } | Error::Consistency(_) => Abort::Failed(e.to_string()),
            e => Abort::Error(e.to_string()),
        }
    }
}

impl From<String> for Abort {
    fn from(msg: String) -> Self {
        Abort::Error(msg)
    }
}

type CmdResult<T> = std::result::Result<T, Abort>;

fn read(path: &Path) -> CmdResult<Vec<u8>> {
    fs::read(path).map_err(|e| Abort::Error(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> CmdResult<T> {
    serde_json::from_slice(bytes).map_err(|e| Abort::Error(format!("{}: {e}", path.display())))
}

fn utf8<'a>(path: &Path, bytes: &'a [u8]) -> CmdResult<&'a str> {
    std::str::from_utf8(bytes).map_err(|_| Abort::Error(format!("{} is not UTF-8", path.display())))
}

pub fn prime_set(primes: &[u64]) -> CmdResult<PrimeSet> {
    Ok(PrimeSet::new(primes.iter().copied())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bar,
    Hopf,
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Bar => "bar",
            Method::Hopf => "hopf",
            Method::Both => "both",
        }
    }
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
pub struct Source {
    /// A corpus group, e.g. V4, Q8, C2xC4, S3.
    #[arg(long)]
    pub named: Option<String>,
    /// A group JSON file (see FORMATS.md).
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// A nilpotent presentation file; only the hopf engine can use it.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub degree: u8,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Localize at these primes: the P-primary torsion of the answer is factored out.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
}

struct Resolved {
    label: String,
    group: Option<FiniteGroup>,
    presentation: Option<NilPresentation>,
}

fn resolve(source: &Source, report: &mut RunReport) -> CmdResult<Resolved> {
    if let Some(name) = &source.named {
        report.inputs.push(Input::named(name));
        let group = named_group(name)?;
        let presentation = match entry(name).and_then(|e| e.presentation_text()) {
            Some(text) => Some(NilPresentation::parse(text)?),
            None => None,
        };
        return Ok(Resolved {
            label: name.clone(),
            group: Some(group),
            presentation,
        });
    }
    if let Some(path) = &source.group {
        let bytes = read(path)?;
        report.inputs.push(Input::file("group", path, &bytes));
        let spec: GroupSpec = parse_json(path, &bytes)?;
        return Ok(Resolved {
            label: path.display().to_string(),
            group: Some(spec.build()?),
            presentation: None,
        });
    }
    let path = source
        .presentation
        .as_ref()
        .expect("clap requires one source");
    let bytes = read(path)?;
    report
        .inputs
        .push(Input::file("presentation", path, &bytes));
    let pres = NilPresentation::parse(utf8(path, &bytes)?)?;
    Ok(Resolved {
        label: path.display().to_string(),
        group: None,
        presentation: Some(pres),
    })
}

pub fn cmd_homology(args: &HomologyArgs, report: &mut RunReport) -> CmdResult<()> {
    let primes = prime_set(&args.primes)?;
    let degree = args.degree as usize;
    let input = resolve(&args.source, report)?;
    let want_bar = args.method != Method::Hopf;
    let want_hopf = args.method != Method::Bar;

    let bar = match (&input.group, want_bar) {
        (Some(g), true) => {
            let h = report.time("bar", || homology(g, degree))?;
            Some(quotient_by_torsion(&h, &primes))
        }
        (None, true) => {
            return Err(Abort::Error(
                "the bar engine needs a finite group (--named or --group)".into(),
            ))
        }
        (_, false) => None,
    };

    let hopf = if !want_hopf {
        None
    } else {
        let Some(pres) = &input.presentation else {
            return Err(Abort::Error(format!(
                "no nilpotent presentation for {}; use --method bar",
                input.label
            )));
        };
        Some(report.time("hopf", || hopf_summary(pres, degree, &primes))?)
    };

    let hopf_value = hopf.as_ref().and_then(|h| h.value.clone());
    let agreement = match (&bar, &hopf_value) {
        (Some(b), Some(h)) => Some(b == h),
        _ => None,
    };
    let answer = bar.clone().or(hopf_value);
    if let Some(h) = &hopf {
        if h.value.is_none() {
            report.fail(format!(
                "hopf value did not stabilize ({:?})",
                h.stabilization
            ));
        }
    }
    if agreement == Some(false) {
        report.fail("bar and hopf engines disagree");
    }
    let factors = answer.as_ref().map(factors_u64).transpose()?;
    report.results = Some(Results::Homology(HomologyResult {
        group: input.label,
        degree,
        method: args.method.name().into(),
        primes: primes.iter().collect(),
        factors,
        free_rank: answer.as_ref().map(FgAbelianGroup::free_rank),
        bar,
        hopf,
        agreement,
    }));
    Ok(())
}

fn hopf_summary(
    pres: &NilPresentation,
    degree: usize,
    primes: &PrimeSet,
) -> CmdResult<HopfSummary> {
    if degree == 1 {
        let value = quotient_by_torsion(&pres.abelianization(), primes);
        return Ok(HopfSummary {
            value: Some(value),
            stabilization: hopfcalc_core::hopf::Stabilization::None,
            working_class: pres.class(),
            provenance_hash: String::new(),
        });
    }
    let r = hopf_pi_n_localized(pres, degree - 1, primes)?;
    Ok(HopfSummary {
        value: r.value.clone(),
        stabilization: r.stabilization,
        working_class: r.working_class,
        provenance_hash: r.provenance_hash,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaloisOp {
    IsTrivial,
    IsNormal,
    Centralize,
    Group,
    Characterisation,
}

impl GaloisOp {
    fn name(self) -> &'static str {
        match self {
            GaloisOp::IsTrivial => "is-trivial",
            GaloisOp::IsNormal => "is-normal",
            GaloisOp::Centralize => "centralize",
            GaloisOp::Group => "group",
            GaloisOp::Characterisation => "characterisation",
        }
    }
}

#[derive(Args, Debug)]
pub struct GaloisArgs {
    #[arg(value_enum)]
    pub op: GaloisOp,
    /// A homomorphism JSON file (see FORMATS.md).
    #[arg(long)]
    pub hom: PathBuf,
    /// Work in the composite context for these primes; without them the
    /// abelian context is used.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
}

pub fn cmd_galois(args: &GaloisArgs, report: &mut RunReport) -> CmdResult<()> {
    let primes = prime_set(&args.primes)?;
    let ctx = if primes.is_empty() {
        GaloisContext::base()
    } else {
        GaloisContext::composite(primes.clone())
    };
    let bytes = read(&args.hom)?;
    report.inputs.push(Input::file("hom", &args.hom, &bytes));
    let spec: HomSpec = parse_json(&args.hom, &bytes)?;
    let f: GroupHom = spec.build()?;
    if !f.is_surjective() {
        return Err(Error::NotSurjective.into());
    }
    let mut out = GaloisResult {
        operation: args.op.name().into(),
        mode: match ctx.mode() {
            Mode::Base => "BASE".into(),
            Mode::Composite => "COMPOSITE".into(),
        },
        primes: primes.iter().collect(),
        domain_order: f.domain().order(),
        codomain_order: f.codomain().order(),
        kernel_order: f.kernel().order(),
        holds: None,
        central: is_central(&f),
        factors: None,
        free_rank: None,
        centralized_order: None,
        centralized_images: None,
    };
    let mut problems = Vec::new();
    report.time(args.op.name(), || -> CmdResult<()> {
        match args.op {
            GaloisOp::IsTrivial => out.holds = Some(ctx.is_trivial_ext(&f)?),
            GaloisOp::IsNormal => out.holds = Some(ctx.is_normal_ext(&f)?),
            GaloisOp::Characterisation => {
                let closed = ctx.characterisation_normal(&f)?;
                if ctx.is_normal_ext(&f)? != closed {
                    problems.push("kernel-pair normality disagrees with the closed form");
                }
                out.holds = Some(closed);
            }
            GaloisOp::Centralize => {
                let c = ctx.centralize(&f)?;
                out.centralized_order = Some(c.extension.domain().order());
                out.centralized_images = Some(c.extension.images().to_vec());
            }
            GaloisOp::Group => {
                let g = ctx.galois_group(&f)?;
                let groupoid = ctx.galois_groupoid(&f)?;
                if !groupoid.check_laws() {
                    problems.push("Galois groupoid violates the groupoid laws");
                }
                if groupoid.vertex_group()? != g.value {
                    problems.push(
                        "Galois group disagrees with the vertex group of the Galois groupoid",
                    );
                }
                out.factors = Some(factors_u64(&g.value)?);
                out.free_rank = Some(g.value.free_rank());
            }
        }
        Ok(())
    })?;
    for p in problems {
        report.fail(p);
    }
    report.results = Some(Results::Galois(out));
    Ok(())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A suite name, `all` or `none`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
    /// Largest group order enumerated by the corpus sweeps.
    #[arg(long, default_value_t = VerifyOptions::default().max_order)]
    pub max_order: usize,
}

pub fn cmd_verify(args: &VerifyArgs, report: &mut RunReport) -> CmdResult<()> {
    let opts = VerifyOptions {
        seed: args.seed,
        max_order: args.max_order,
    };
    let mut suites = Vec::new();
    let names: Vec<&str> = match args.suite.as_str() {
        "all" => verify::SUITES.to_vec(),
        "none" => Vec::new(),
        s => vec![s],
    };
    for name in names {
        let r = report.time(name, || verify::run_suite(name, &opts))?;
        if !r.passed() {
            report.fail(format!(
                "suite {name}: {} of {} cases failed",
                r.failed, r.cases
            ));
        }
        suites.push(r);
    }
    report.results = Some(Results::Verify(VerifyResult {
        seed: args.seed,
        max_order: args.max_order,
        suites,
    }));
    Ok(())
}
