//! The `edlab` command line.
//!
//! Every subcommand prints a human-readable summary followed by one JSON
//! document fenced by [`BEGIN_REPORT`] and [`END_REPORT`]. Exit status is 0
//! when every check passed, 1 when one failed, 2 on input, usage or
//! hypothesis errors. The thread count follows `RAYON_NUM_THREADS`.

mod session;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::image::{self, ImageOptions, ImageOracle, MembershipStatus};
use crate::maps::{classify, Map, MapShape};
use crate::mzlab::{self, ClaimParams, ClaimReport, RadicalVerdict, ScanOptions, DEFAULT_POWER_CAP};
use crate::normalize;
use crate::polyring::parse_scalar;
use crate::scalar::resonance::{resonance_exists_bounded, resonance_exists_structured};
use crate::scalar::{Conductor, Scalar};

pub use session::{MapSpec, Session, SessionOptions};

pub const BEGIN_REPORT: &str = "--- BEGIN REPORT ---";
pub const END_REPORT: &str = "--- END REPORT ---";
/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA: &str = "edlab-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "edlab",
    version,
    about = "Exact image slices of E-derivations and derivations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SessionArg {
    /// Session file (TOML)
    #[arg(long, short = 's')]
    session: PathBuf,
}

#[derive(Debug, Args, Default)]
struct Bounds {
    /// Degree bound d
    #[arg(long, short = 'd')]
    degree: Option<u32>,
    /// Extra preimage degree for filtered slices
    #[arg(long)]
    slack: Option<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Shift,
    Diagonal,
    Linearize,
    Affine2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conjugate the session map into normal form
    Normalize {
        #[command(flatten)]
        session: SessionArg,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
    /// Echelon bases of the image up to degree d
    Image {
        #[command(flatten)]
        session: SessionArg,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Decide whether a polynomial lies in the image
    Member {
        #[command(flatten)]
        session: SessionArg,
        #[arg(long, short = 'p', allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compare image slices with slices of the ideal generated by --generator
    IdealTest {
        #[command(flatten)]
        session: SessionArg,
        #[arg(long = "generator", short = 'g', allow_hyphen_values = true)]
        generators: Vec<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compare image slices of [map] and [other_map]
    Compare {
        #[command(flatten)]
        session: SessionArg,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Bounded radical scan over monomials (and --extra candidates)
    RadicalScan {
        #[command(flatten)]
        session: SessionArg,
        #[command(flatten)]
        bounds: Bounds,
        /// Power bound M
        #[arg(long, short = 'm')]
        power: Option<u32>,
        #[arg(long)]
        power_cap: Option<u32>,
        #[arg(long = "extra", allow_hyphen_values = true)]
        extra: Vec<String>,
    },
    /// Spot-check b·a^m ∈ Im for radical monomials a
    MzCheck {
        #[command(flatten)]
        session: SessionArg,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, short = 'm')]
        power: Option<u32>,
        /// Multiplier degree bound B
        #[arg(long, short = 'b')]
        multiplier: Option<u32>,
        #[arg(long)]
        power_cap: Option<u32>,
    },
    /// Run a registered claim battery (`--claim all` runs every default instance)
    Verify(VerifyArgs),
    /// Radical evidence of the triple Jordan block against the conjectured space
    ExploreConj45 {
        #[arg(long, short = 'n', default_value_t = 1)]
        conductor: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, short = 'd', default_value_t = 5)]
        degree: u32,
        #[arg(long, short = 'm', default_value_t = 6)]
        power: u32,
    },
    /// Multiplicative resonance of eigenvalues, bounded and structured
    Resonance {
        #[arg(long, short = 'n', default_value_t = 1)]
        conductor: u32,
        #[arg(long = "lambda", required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long, default_value_t = 8)]
        bound: u32,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    claim: Option<String>,
    #[arg(long, short = 's')]
    session: Option<PathBuf>,
    #[arg(long, short = 'n')]
    conductor: Option<u32>,
    #[arg(long, short = 'd')]
    degree: Option<u32>,
    #[arg(long, short = 'm')]
    power: Option<u32>,
    #[arg(long, short = 'b')]
    multiplier: Option<u32>,
    #[arg(long)]
    slack: Option<u32>,
    #[arg(long = "lambda", allow_hyphen_values = true)]
    lambdas: Vec<String>,
    #[arg(long = "shift", allow_hyphen_values = true)]
    shift: Vec<String>,
    #[arg(long)]
    pairs: Option<usize>,
    /// Run outside the claim's hypotheses; the report is marked exploratory
    #[arg(long)]
    allow_out_of_hypothesis: bool,
    /// Print the registered claim ids
    #[arg(long)]
    list: bool,
}

/// What a subcommand produced, before rendering.
struct Outcome {
    command: &'static str,
    passed: bool,
    human: String,
    input: Value,
    result: Value,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// writes its report to `out`; diagnostics go to `err`. Returns the exit
/// status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            if emit(&outcome, out).is_err() {
                return EXIT_ERROR;
            }
            if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(o: &Outcome, out: &mut dyn Write) -> std::io::Result<()> {
    let doc = json!({
        "schema": REPORT_SCHEMA,
        "command": o.command,
        "passed": o.passed,
        "input": o.input,
        "result": o.result,
    });
    let body = serde_json::to_string_pretty(&doc).expect("report serializes");
    write!(out, "{}", o.human)?;
    if !o.human.ends_with('\n') {
        writeln!(out)?;
    }
    writeln!(out, "{BEGIN_REPORT}")?;
    writeln!(out, "{body}")?;
    writeln!(out, "{END_REPORT}")?;
    out.flush()
}

/// Extracts the JSON document between the report fences.
pub fn extract_report(output: &str) -> Option<Value> {
    let start = output.find(BEGIN_REPORT)? + BEGIN_REPORT.len();
    let end = output[start..].find(END_REPORT)? + start;
    serde_json::from_str(output[start..end].trim()).ok()
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Normalize { session, method } => cmd_normalize(&session.session, method),
        Command::Image { session, bounds } => cmd_image(&session.session, &bounds),
        Command::Member { session, poly, bounds } => cmd_member(&session.session, &poly, &bounds),
        Command::IdealTest {
            session,
            generators,
            bounds,
        } => cmd_ideal_test(&session.session, &generators, &bounds),
        Command::Compare { session, bounds } => cmd_compare(&session.session, &bounds),
        Command::RadicalScan {
            session,
            bounds,
            power,
            power_cap,
            extra,
        } => cmd_radical_scan(&session.session, &bounds, power, power_cap, &extra),
        Command::MzCheck {
            session,
            bounds,
            power,
            multiplier,
            power_cap,
        } => cmd_mz_check(&session.session, &bounds, power, multiplier, power_cap),
        Command::Verify(args) => cmd_verify(&args),
        Command::ExploreConj45 {
            conductor,
            lambda,
            degree,
            power,
        } => cmd_conj45(conductor, &lambda, degree, power),
        Command::Resonance {
            conductor,
            lambdas,
            bound,
        } => cmd_resonance(conductor, &lambdas, bound),
    }
}

fn session_input(s: &Session) -> Value {
    let mut v = json!({
        "conductor": s.field.order(),
        "nvars": s.nvars,
    });
    if let Some(spec) = &s.map_spec {
        v["map"] = json!({ "kind": spec.kind, "images": spec.images });
    }
    v
}

fn degree_of(bounds: &Bounds, s: &Session) -> Result<u32> {
    bounds
        .degree
        .or(s.options.degree)
        .ok_or_else(|| Error::Session("no degree bound: pass --degree or set options.degree".into()))
}

fn slack_of(bounds: &Bounds, s: &Session) -> Option<u32> {
    bounds.slack.or(s.options.slack)
}

fn header(s: &Session, map: &Map) -> String {
    format!(
        "ring: Q(z_{})[x1..x{}]\nmap:  {} ({})\n",
        s.field.order(),
        s.nvars,
        map,
        classify(map).name()
    )
}

fn cmd_normalize(path: &Path, method: Method) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let method = match method {
        Method::Auto => auto_method(map),
        m => m,
    };
    let result = match method {
        Method::Shift => normalize::shift_to_origin(map)?,
        Method::Diagonal => normalize::normalize_diagonal_affine(map)?,
        Method::Linearize => normalize::linearize_triangular_derivation(map)?,
        Method::Affine2 => normalize::normalize_affine_dim2(map)?,
        Method::Auto => {
            return Err(Error::ShapeMismatch(format!(
                "no normal form for a map of shape {}",
                classify(map).name()
            )))
        }
    };
    let verified = result.verify(map)?;
    let mut human = header(&s, map);
    let method_name = method
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let _ = writeln!(human, "method:      {method_name}");
    let _ = writeln!(human, "sigma:       {}", result.sigma.forward());
    let _ = writeln!(human, "sigma^-1:    {}", result.sigma.inverse());
    let _ = writeln!(human, "normalized:  {}", result.normalized);
    let _ = writeln!(
        human,
        "conjugation identity: {}",
        if verified { "verified" } else { "FAILED" }
    );
    Ok(Outcome {
        command: "normalize",
        passed: verified,
        human,
        input: json!({ "session": session_input(&s), "method": method_name }),
        result: json!({
            "sigma": result.sigma.forward(),
            "sigma_inverse": result.sigma.inverse(),
            "normalized": result.normalized.to_string(),
            "certificate": result.certificate,
            "verified": verified,
        }),
    })
}

fn auto_method(map: &Map) -> Method {
    match (map, classify(map)) {
        (Map::D(_), MapShape::DerivationAffine { .. }) => Method::Diagonal,
        (Map::D(_), MapShape::DerivationTriangular { .. }) => Method::Linearize,
        (Map::D(_), _) => Method::Auto,
        (Map::E(_), shape) => {
            let affine = matches!(map, Map::E(d) if d.phi().is_affine());
            if affine && map.nvars() == 2 && !matches!(shape, MapShape::Triangular { .. }) {
                return Method::Affine2;
            }
            match shape {
                MapShape::Triangular { tails, .. } if tails.iter().all(|t| t.degree().unwrap_or(0) == 0) => {
                    Method::Diagonal
                }
                MapShape::Triangular { .. } | MapShape::JordanPairs { .. } => Method::Shift,
                _ if affine && map.nvars() == 2 => Method::Affine2,
                _ => Method::Auto,
            }
        }
    }
}

fn cmd_image(path: &Path, bounds: &Bounds) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let d = degree_of(bounds, &s)?;
    let mut oracle = ImageOracle::new(
        map,
        ImageOptions {
            slack: slack_of(bounds, &s),
            witnesses: true,
        },
    );
    let basis = oracle.basis(d);
    let mut bad = Vec::new();
    for v in basis.vectors() {
        if let Some(w) = &v.witness {
            if map.apply(w) != v.vector {
                bad.push(v.vector.to_string());
            }
        }
    }
    let mut human = header(&s, map);
    let _ = writeln!(
        human,
        "mode: {:?}, slack {}, {}",
        basis.mode,
        basis.slack,
        if basis.exact { "exact" } else { "lower bound (filtered)" }
    );
    let _ = writeln!(
        human,
        "{:>6}  {:>8}  {:>8}  {:>8}",
        "degree", "domain", "image", "kernel"
    );
    for sl in &basis.slices {
        let kernel = sl.kernel_dim.map_or("-".to_string(), |k| k.to_string());
        let _ = writeln!(
            human,
            "{:>6}  {:>8}  {:>8}  {:>8}",
            sl.degree, sl.domain_dim, sl.dimension, kernel
        );
    }
    for sl in &basis.slices {
        for v in &sl.basis {
            let w = v.witness.as_ref().map(|w| format!("   <- {w}")).unwrap_or_default();
            let _ = writeln!(human, "  [{}] {}{}", v.pivot, v.vector, w);
        }
    }
    if !bad.is_empty() {
        let _ = writeln!(human, "witness re-validation FAILED for {} vectors", bad.len());
    }
    Ok(Outcome {
        command: "image",
        passed: bad.is_empty(),
        human,
        input: json!({ "session": session_input(&s), "degree": d, "slack": basis.slack }),
        result: json!({ "basis": basis, "witnesses_valid": bad.is_empty() }),
    })
}

fn cmd_member(path: &Path, poly: &str, bounds: &Bounds) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let q = s.parse(poly, "query")?;
    let d = bounds.degree.unwrap_or_else(|| q.degree().unwrap_or(0));
    let slack = slack_of(bounds, &s);
    let verdict = image::member(map, &q, d, slack)?;
    let witness_valid = match (&verdict.status, &verdict.witness) {
        (MembershipStatus::In, Some(w)) => map.apply(w) == q,
        (MembershipStatus::In, None) => false,
        _ => true,
    };
    let status = to_value(&verdict.status);
    let mut human = header(&s, map);
    let _ = writeln!(human, "query:   {q}");
    let _ = writeln!(human, "verdict: {}", status.as_str().unwrap_or_default());
    if let Some(w) = &verdict.witness {
        if verdict.status == MembershipStatus::In {
            let _ = writeln!(
                human,
                "witness: {w}   ({})",
                if witness_valid {
                    "re-validated"
                } else {
                    "re-validation FAILED"
                }
            );
        }
    }
    if verdict.status != MembershipStatus::In {
        let _ = writeln!(human, "residue: {}", verdict.residue);
    }
    Ok(Outcome {
        command: "member",
        passed: witness_valid,
        human,
        input: json!({ "session": session_input(&s), "query": q, "degree": d, "slack": slack }),
        result: json!({
            "verdict": status,
            "residue": verdict.residue,
            "witness": if verdict.status == MembershipStatus::In { to_value(&verdict.witness) } else { Value::Null },
            "witness_valid": witness_valid,
        }),
    })
}

fn comparison_human(human: &mut String, cmp: &image::SliceComparison, left: &str, right: &str) {
    let _ = writeln!(human, "mode: {:?}", cmp.mode);
    let _ = writeln!(human, "{:>6}  {:>8}  {:>8}  equal", "degree", left, right);
    for c in &cmp.degrees {
        let _ = writeln!(
            human,
            "{:>6}  {:>8}  {:>8}  {}",
            c.degree, c.left_dim, c.right_dim, c.equal
        );
    }
    match cmp.first_discrepancy {
        Some(e) => {
            let _ = writeln!(human, "first discrepancy at degree {e}");
        }
        None => {
            let _ = writeln!(human, "equal on every degree ≤ {}", cmp.degree_bound);
        }
    }
}

fn cmd_ideal_test(path: &Path, generators: &[String], bounds: &Bounds) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let d = degree_of(bounds, &s)?;
    let gens = if generators.is_empty() {
        s.generators()?
    } else {
        generators
            .iter()
            .enumerate()
            .map(|(i, g)| s.parse(g, &format!("generator {}", i + 1)))
            .collect::<Result<Vec<_>>>()?
    };
    if gens.is_empty() {
        return Err(Error::Session(
            "no generators: pass --generator or set options.generators".into(),
        ));
    }
    let slack = slack_of(bounds, &s);
    let cmp = image::ideal_slice_test(map, &gens, d, slack)?;
    let mut human = header(&s, map);
    let names: Vec<String> = gens.iter().map(ToString::to_string).collect();
    let _ = writeln!(human, "ideal: ({})", names.join(", "));
    comparison_human(&mut human, &cmp, "image", "ideal");
    Ok(Outcome {
        command: "ideal-test",
        passed: cmp.equal,
        human,
        input: json!({ "session": session_input(&s), "generators": gens, "degree": d, "slack": slack }),
        result: to_value(&cmp),
    })
}

fn cmd_compare(path: &Path, bounds: &Bounds) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let other = s
        .other_map
        .as_ref()
        .ok_or_else(|| Error::Session("compare needs an [other_map] table".into()))?;
    let d = degree_of(bounds, &s)?;
    let slack = slack_of(bounds, &s);
    let cmp = image::compare_images(map, other, d, slack)?;
    let mut human = header(&s, map);
    let _ = writeln!(human, "other: {} ({})", other, classify(other).name());
    comparison_human(&mut human, &cmp, "map", "other");
    Ok(Outcome {
        command: "compare",
        passed: cmp.equal,
        human,
        input: json!({
            "session": session_input(&s),
            "other_map": other.to_string(),
            "degree": d,
            "slack": slack,
        }),
        result: to_value(&cmp),
    })
}

fn scan_options(s: &Session, slack: Option<u32>, power_cap: Option<u32>) -> ScanOptions {
    ScanOptions {
        power_cap: power_cap.or(s.options.power_cap).unwrap_or(DEFAULT_POWER_CAP),
        slack,
    }
}

fn power_of(power: Option<u32>, s: &Session) -> Result<u32> {
    power
        .or(s.options.power)
        .ok_or_else(|| Error::Session("no power bound: pass --power or set options.power".into()))
}

fn cmd_radical_scan(
    path: &Path,
    bounds: &Bounds,
    power: Option<u32>,
    power_cap: Option<u32>,
    extra: &[String],
) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let d = degree_of(bounds, &s)?;
    let m = power_of(power, &s)?;
    let mut extras = s.extra()?;
    for (i, e) in extra.iter().enumerate() {
        extras.push(s.parse(e, &format!("extra candidate {}", i + 1))?);
    }
    let options = scan_options(&s, slack_of(bounds, &s), power_cap);
    let scan = mzlab::radical_scan(map, d, m, &extras, options)?;
    let mut human = header(&s, map);
    let _ = writeln!(
        human,
        "candidates: {}, powers 1..={}, degree cap {}, {}",
        scan.candidates.len(),
        m,
        scan.power_cap,
        if scan.exact { "exact" } else { "filtered" }
    );
    let _ = writeln!(human, "{:<24}  {:<20}  powers tested", "candidate", "verdict");
    for c in &scan.candidates {
        let verdict = match c.verdict {
            RadicalVerdict::InRadicalEvidence => "in-radical-evidence".to_string(),
            RadicalVerdict::Excluded { m } => format!("excluded (m = {m})"),
            RadicalVerdict::Inconclusive { m } => format!("inconclusive (m = {m})"),
        };
        let trunc = if c.truncated { " (truncated)" } else { "" };
        let _ = writeln!(
            human,
            "{:<24}  {:<20}  {}{}",
            c.candidate.to_string(),
            verdict,
            c.powers_tested,
            trunc
        );
    }
    let evidence: Vec<String> = scan.evidence().map(ToString::to_string).collect();
    let _ = writeln!(human, "evidence: {{{}}}", evidence.join(", "));
    Ok(Outcome {
        command: "radical-scan",
        passed: true,
        human,
        input: json!({
            "session": session_input(&s),
            "degree": d,
            "power": m,
            "power_cap": options.power_cap,
            "slack": options.slack,
            "extra": extras,
        }),
        result: json!({ "scan": scan, "evidence": evidence }),
    })
}

fn cmd_mz_check(
    path: &Path,
    bounds: &Bounds,
    power: Option<u32>,
    multiplier: Option<u32>,
    power_cap: Option<u32>,
) -> Result<Outcome> {
    let s = Session::load(path)?;
    let map = s.require_map()?;
    let d = degree_of(bounds, &s)?;
    let m = power_of(power, &s)?;
    let b = multiplier.or(s.options.multiplier).unwrap_or(1);
    let options = scan_options(&s, slack_of(bounds, &s), power_cap);
    let report = mzlab::mz_spot_check(map, d, m, b, options)?;
    let mut human = header(&s, map);
    let premise: Vec<String> = report.premise.iter().map(ToString::to_string).collect();
    let _ = writeln!(human, "premise: {{{}}}", premise.join(", "));
    let _ = writeln!(
        human,
        "window m ∈ [{}, {}], multipliers of degree ≤ {b}, pairs checked: {}",
        report.window.0, report.window.1, report.pairs_checked
    );
    for v in &report.violations {
        let _ = writeln!(
            human,
            "  violation: ({})·({})^{} {}",
            v.b,
            v.a,
            v.m,
            if v.certified {
                "certified not in image"
            } else {
                "not found within slack"
            }
        );
    }
    for n in &report.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let _ = writeln!(human, "result: {}", if report.passed { "pass" } else { "FAIL" });
    Ok(Outcome {
        command: "mz-check",
        passed: report.passed,
        human,
        input: json!({
            "session": session_input(&s),
            "degree": d,
            "power": m,
            "multiplier": b,
            "power_cap": options.power_cap,
            "slack": options.slack,
        }),
        result: to_value(&report),
    })
}

fn claim_params(args: &VerifyArgs, s: Option<&Session>) -> ClaimParams {
    let o = s.map(|s| s.options.clone()).unwrap_or_default();
    let pick = |cli: &Vec<String>, file: Vec<String>| if cli.is_empty() { file } else { cli.clone() };
    ClaimParams {
        conductor: args.conductor.or(s.map(|s| s.field.order())),
        degree: args.degree.or(o.degree),
        power: args.power.or(o.power),
        multiplier: args.multiplier.or(o.multiplier),
        slack: args.slack.or(o.slack),
        lambdas: pick(&args.lambdas, o.lambdas),
        shift: pick(&args.shift, o.shift),
        matrix: o.matrix,
        map: s.and_then(|s| s.map_spec.as_ref()).map(|m| (m.kind, m.images.clone())),
        pairs: args.pairs.or(o.pairs),
        nvars: s.map(|s| s.nvars),
        allow_out_of_hypothesis: args.allow_out_of_hypothesis || o.allow_out_of_hypothesis,
    }
}

fn claim_human(human: &mut String, r: &ClaimReport) {
    let tag = if r.exploratory { " [exploratory]" } else { "" };
    let _ = writeln!(
        human,
        "claim {}{}: {}",
        r.claim,
        tag,
        if r.passed { "pass" } else { "FAIL" }
    );
    for (k, v) in &r.parameters {
        let _ = writeln!(human, "  {k} = {v}");
    }
    for c in &r.checks {
        let _ = writeln!(
            human,
            "  [{}] {}: {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
        if let Some(ce) = &c.counterexample {
            let _ = writeln!(human, "         counterexample: {ce}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(human, "  note: {n}");
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    if args.list {
        let ids: Vec<&str> = mzlab::claim_ids().collect();
        return Ok(Outcome {
            command: "verify",
            passed: true,
            human: ids.iter().map(|i| format!("{i}\n")).collect(),
            input: json!({ "list": true }),
            result: json!({ "claims": ids }),
        });
    }
    let session = args.session.as_deref().map(Session::load).transpose()?;
    let claim = args
        .claim
        .clone()
        .or_else(|| session.as_ref().and_then(|s| s.options.claim.clone()))
        .ok_or_else(|| Error::Session("no claim: pass --claim or set options.claim".into()))?;
    let params = claim_params(args, session.as_ref());
    let reports: Vec<ClaimReport> = if claim == "all" {
        let ids: Vec<&str> = mzlab::claim_ids().collect();
        ids.par_iter()
            .map(|id| mzlab::verify_claim(id, &params))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![mzlab::verify_claim(&claim, &params)?]
    };
    let passed = reports.iter().all(|r| r.passed);
    let mut human = String::new();
    for r in &reports {
        claim_human(&mut human, r);
    }
    let result = if claim == "all" {
        to_value(&reports)
    } else {
        to_value(&reports[0])
    };
    Ok(Outcome {
        command: "verify",
        passed,
        human,
        input: json!({
            "claim": claim,
            "session": session.as_ref().map(session_input),
            "conductor": params.conductor,
            "degree": params.degree,
            "power": params.power,
            "multiplier": params.multiplier,
            "slack": params.slack,
            "lambdas": params.lambdas,
            "shift": params.shift,
            "allow_out_of_hypothesis": params.allow_out_of_hypothesis,
        }),
        result,
    })
}

fn scalar_arg(src: &str, field: &std::sync::Arc<Conductor>, what: &str) -> Result<Scalar> {
    parse_scalar(src, field).map_err(|e| Error::Session(format!("{what} `{src}`: {e}")))
}

fn cmd_conj45(conductor: u32, lambda: &str, d: u32, m: u32) -> Result<Outcome> {
    let field = Conductor::new(conductor)?;
    let l = scalar_arg(lambda, &field, "lambda")?;
    if l.is_zero() {
        return Err(Error::RejectedInput("lambda must be nonzero".into()));
    }
    let r = mzlab::conjecture45_explore(&l, d, m)?;
    let show = |ms: &[crate::polyring::Monomial]| ms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let mut human = format!("triple Jordan block, lambda = {l}, degree ≤ {d}, powers ≤ {m}\n");
    let _ = writeln!(human, "candidates: {}", r.candidates);
    let _ = writeln!(human, "evidence outside V: {{{}}}", show(&r.evidence_minus_v));
    let _ = writeln!(human, "V without evidence: {{{}}}", show(&r.v_minus_evidence));
    for n in &r.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let _ = writeln!(human, "result: {}", if r.passed { "pass" } else { "FAIL" });
    Ok(Outcome {
        command: "explore-conj45",
        passed: r.passed,
        human,
        input: json!({ "conductor": conductor, "lambda": l, "degree": d, "power": m }),
        result: to_value(&r),
    })
}

fn cmd_resonance(conductor: u32, lambdas: &[String], bound: u32) -> Result<Outcome> {
    let field = Conductor::new(conductor)?;
    let values = lambdas
        .iter()
        .enumerate()
        .map(|(i, s)| scalar_arg(s, &field, &format!("lambda {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().any(Scalar::is_zero) {
        return Err(Error::RejectedInput("eigenvalues must be nonzero".into()));
    }
    let bounded = resonance_exists_bounded(&values, bound);
    let factored: Option<Vec<_>> = values.iter().map(Scalar::factor_unit_form).collect();
    let structured = factored
        .as_ref()
        .map(|f| resonance_exists_structured(&field, f))
        .transpose()?;
    let holds = |w: &[u32]| {
        let mut p = Scalar::one(&field);
        for (l, &e) in values.iter().zip(w) {
            p = &p * &l.pow(u64::from(e));
        }
        p.is_one()
    };
    let bounded_ok = bounded.as_deref().is_none_or(holds);
    let structured_ok = structured.as_ref().is_none_or(|s| s.as_deref().is_none_or(holds));
    // bounded witness ⇒ structured witness; structured absence ⇒ no bounded witness
    let agree = !matches!((&bounded, &structured), (Some(_), Some(None)));
    let passed = agree && bounded_ok && structured_ok;
    let show = |w: &Option<Vec<u32>>| match w {
        Some(w) => format!("{w:?}"),
        None => "none".into(),
    };
    let names: Vec<String> = values.iter().map(ToString::to_string).collect();
    let mut human = format!("eigenvalues: ({})\n", names.join(", "));
    let _ = writeln!(human, "bounded (total degree ≤ {bound}): {}", show(&bounded));
    match &structured {
        Some(s) => {
            let _ = writeln!(human, "structured:                 {}", show(s));
        }
        None => {
            let _ = writeln!(human, "structured:                 n/a (not all eigenvalues are q·z^j)");
        }
    }
    let _ = writeln!(human, "agreement: {}", if passed { "yes" } else { "NO" });
    Ok(Outcome {
        command: "resonance",
        passed,
        human,
        input: json!({ "conductor": conductor, "lambdas": values, "bound": bound }),
        result: json!({
            "bounded": bounded,
            "structured": structured,
            "factored": factored,
            "witnesses_valid": bounded_ok && structured_ok,
            "agree": agree,
        }),
    })
}
