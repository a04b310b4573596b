use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use spincert_core::gam::{asymptotic_threshold, gam_dimension_report};
use spincert_core::index::{
    chi_c, chi_c_l0_on, compactness_bound, expected_dimension, nonvanishing_parity, parity_mode, vdim,
};
use spincert_core::json::{ints, parse_vector, IntInput, QueryFile, ScenarioFile, SurfaceSpec, VerdictFile};
use spincert_core::lattice::{is_characteristic, make_spin_c};
use spincert_core::simplicity::check_simple;
use spincert_core::verdict::{
    contradiction_report, finite_candidates, scenario, spin_poly_status, ContradictionReport, DiffeoHypothesis,
    Outcome, ScenarioName, Status, StatusOptions, Verdict,
};
use spincert_core::walls::{enumerate_separating_walls, SearchBudget, WallError};
use spincert_core::{BundleTopology, LatticeClass, Polarization, SurfaceModel};

const COMPUTED: u8 = 0;
const INPUT_ERROR: u8 = 1;
const REFUSED: u8 = 2;

#[derive(Parser)]
#[command(name = "spincert", version, about = "Exact lattice bookkeeping and status certificates for Spin-polynomial invariants")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface description.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Index, virtual dimensions, parity and compactness for a bundle type.
    Index(TypeArgs),
    /// Extension dimension counts and the asymptotic threshold.
    Dims {
        #[command(flatten)]
        ty: TypeArgs,
        /// Polarization used to list candidate curve classes.
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Walls of a type separating two polarizations.
    Walls {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        #[arg(long = "H1", allow_hyphen_values = true)]
        h1: String,
        #[arg(long = "H2", allow_hyphen_values = true)]
        h2: String,
    },
    /// Simplicity certificate for c1 at a polarization.
    Simplicity {
        file: PathBuf,
        #[arg(long = "H", allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
    },
    /// Status of a single query, or the contradiction report of a scenario.
    Verdict {
        /// Query or scenario file.
        #[arg(required_unless_present = "scenario", conflicts_with = "scenario")]
        file: Option<PathBuf>,
        /// fake-plane, fake-f1, fake-quadric or identity.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        #[arg(long, default_value_t = 64)]
        max_scale: u32,
        #[arg(long, default_value_t = 8)]
        max_box: u32,
    },
}

#[derive(Subcommand)]
enum LatticeAction {
    Check { file: PathBuf },
}

#[derive(Args)]
struct TypeArgs {
    file: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    c1: String,
    #[arg(long, allow_hyphen_values = true)]
    c2: String,
    /// Spin^c class; −K when omitted.
    #[arg(long = "C", allow_hyphen_values = true)]
    c: Option<String>,
}

/// An error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure { code: INPUT_ERROR, error: e.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((code, text, value)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("values serialize"));
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

type Outcome3 = (u8, String, Value);

fn run(cli: &Cli) -> Result<Outcome3, Failure> {
    match &cli.command {
        Command::Lattice { action: LatticeAction::Check { file } } => lattice_check(file),
        Command::Index(ty) => index_cmd(ty),
        Command::Dims { ty, h } => dims_cmd(ty, h.as_deref()),
        Command::Walls { file, c1, c2, h1, h2 } => walls_cmd(file, c1, c2, h1, h2),
        Command::Simplicity { file, h, c1 } => simplicity_cmd(file, h, c1),
        Command::Verdict { file, scenario, c2, max_scale, max_box } => {
            let budget = SearchBudget { max_scale: *max_scale, max_box: *max_box };
            verdict_cmd(file.as_deref(), scenario.as_deref(), c2.as_deref(), budget)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input)
}

fn load_surface(path: &Path) -> Result<SurfaceModel, Failure> {
    let spec = SurfaceSpec::from_json(&read(path)?).map_err(input)?;
    spec.build().map_err(input)
}

fn class(s: &SurfaceModel, text: &str) -> Result<LatticeClass, Failure> {
    let v = parse_vector(text).map_err(input)?;
    s.class(v).map_err(input)
}

fn scalar(text: &str) -> Result<BigInt, Failure> {
    text.trim().parse().map_err(|_| input(anyhow!("`{text}` is not an integer")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn lattice_check(path: &Path) -> Result<Outcome3, Failure> {
    let s = load_surface(path)?;
    let pic = s.pic();
    let k = s.canonical();
    let anti = make_spin_c(-k).map_err(input)?;
    let chi_l0 = chi_c_l0_on(&s, &anti).map_err(input)?;
    let noether_lhs = k.square() + BigInt::from(pic.rank() + 2);
    let noether_rhs = BigInt::from(12) * s.chi_o();
    let noether = noether_lhs == noether_rhs;
    let text = format!(
        "surface {}\nrank {}, b2+ = {}, b2- = {}, signature {}, {}\nK = {} (characteristic: {}), K^2 = {}\nchi(O) = {}, chi_C(L0) for C = -K: {}\nNoether K^2 + e = 12 chi(O): {}\n",
        s.name(),
        pic.rank(),
        pic.b2_plus(),
        pic.b2_minus(),
        pic.signature(),
        if pic.is_even() { "even" } else { "odd" },
        k,
        is_characteristic(k),
        k.square(),
        s.chi_o(),
        chi_l0,
        noether
    );
    let value = json!({
        "surface": s.name(),
        "lattice": to_value(&pic.summary()),
        "K": to_value(k),
        "K_text": k.to_string(),
        "K_square": k.square().to_string(),
        "K_characteristic": is_characteristic(k),
        "chi_O": s.chi_o().to_string(),
        "chi_C_L0": chi_l0.to_string(),
        "noether": noether,
    });
    Ok((COMPUTED, text, value))
}

struct TypeInput {
    s: SurfaceModel,
    e: BundleTopology,
    c: spincert_core::SpinCStructure,
}

fn type_input(ty: &TypeArgs) -> Result<TypeInput, Failure> {
    let s = load_surface(&ty.file)?;
    let c1 = class(&s, &ty.c1)?;
    let e = BundleTopology::new(c1, scalar(&ty.c2)?);
    let c = match &ty.c {
        Some(t) => class(&s, t)?,
        None => -s.canonical(),
    };
    let c = make_spin_c(c).map_err(input)?;
    Ok(TypeInput { s, e, c })
}

fn index_cmd(ty: &TypeArgs) -> Result<Outcome3, Failure> {
    let TypeInput { s, e, c } = type_input(ty)?;
    let chi_l0 = chi_c_l0_on(&s, &c).map_err(input)?;
    let chi = chi_c(&e, &c, &chi_l0).map_err(input)?;
    let dims = vdim(&e, s.pic(), &c, &chi_l0).map_err(input)?;
    let bound = compactness_bound(&e, &c, s.pic().b2_plus(), &chi_l0).map_err(input)?;
    let mode = parity_mode(&s, &e).map_err(input)?;
    let nonvanishing = nonvanishing_parity(&s, &e).map_err(input)?;
    let text = format!(
        "surface {}, type {}, C = {}\nchi_C(L0) = {}, chi_C(E) = {}\nd = {}, d1 = {}, vcodim = {}\ncompactness: c2 >= {} (exact {}), met: {}\nparity mode {:?}; nonvanishing parity holds: {}\n",
        s.name(),
        e,
        c,
        chi_l0,
        chi,
        dims.d,
        dims.d1,
        dims.vcodim,
        bound.min_c2,
        bound.threshold,
        bound.admits(&e.c2),
        mode,
        nonvanishing
    );
    let value = json!({
        "surface": s.name(),
        "type": to_value(&e),
        "type_text": e.to_string(),
        "C": to_value(c.class()),
        "index": to_value(&dims),
        "compactness": to_value(&bound),
        "compactness_met": bound.admits(&e.c2),
        "parity_mode": format!("{mode:?}"),
        "nonvanishing_parity": nonvanishing,
    });
    Ok((COMPUTED, text, value))
}

fn dims_cmd(ty: &TypeArgs, h: Option<&str>) -> Result<Outcome3, Failure> {
    let TypeInput { s, e, c } = type_input(ty)?;
    let candidates = match h {
        Some(t) => {
            let h = class(&s, t)?;
            finite_candidates(&s, &h, &e.c1).map_err(input)?
        }
        None => Vec::new(),
    };
    let expected = expected_dimension(&s, &e).map_err(input)?;
    let report = gam_dimension_report(&s, &e, &candidates).map_err(input)?;
    let threshold = asymptotic_threshold(&s, &e.c1, &c, &candidates).map_err(input)?;
    let mut text = format!(
        "surface {}, type {}\nexpected dimension {}\ngeneric fibre dimension {} (extension space generically empty: {})\nasymptotic threshold N = {}{}\n",
        s.name(),
        e,
        expected,
        report.fibre_dim_generic,
        report.extension_space_empty,
        threshold.n_h_c1,
        if threshold.incomplete { " (some bounds not evaluable)" } else { "" }
    );
    for contribution in &threshold.contributions {
        let min = contribution.min_c2.as_ref().map_or("?".to_string(), |m| m.to_string());
        text.push_str(&format!("  {:<28} {:>6}  {}\n", contribution.name, min, contribution.detail));
    }
    let value = json!({
        "surface": s.name(),
        "type": to_value(&e),
        "type_text": e.to_string(),
        "expected_dimension": expected.to_string(),
        "report": to_value(&report),
        "threshold": to_value(&threshold),
    });
    Ok((COMPUTED, text, value))
}

fn walls_cmd(path: &Path, c1: &str, c2: &str, h1: &str, h2: &str) -> Result<Outcome3, Failure> {
    let s = load_surface(path)?;
    let c1 = class(&s, c1)?;
    let c2 = scalar(c2)?;
    let (h1, h2) = (class(&s, h1)?, class(&s, h2)?);
    let sep = match enumerate_separating_walls(s.pic(), &c1, &c2, &h1, &h2) {
        Ok(sep) => sep,
        Err(e @ (WallError::EnumerationTooLarge { .. } | WallError::InfiniteEnumeration)) => {
            return Err(Failure { code: REFUSED, error: e.into() })
        }
        Err(e) => return Err(input(e)),
    };
    let mut text = format!(
        "type (2, {c1}, {c2}) between H1 = {h1} and H2 = {h2}: {} separating wall(s)\n",
        sep.separating_walls.len()
    );
    for w in &sep.separating_walls {
        text.push_str(&format!("  {w}\n"));
    }
    Ok((COMPUTED, text, to_value(&sep)))
}

fn simplicity_cmd(path: &Path, h: &str, c1: &str) -> Result<Outcome3, Failure> {
    let s = load_surface(path)?;
    let h = class(&s, h)?;
    let c1 = class(&s, c1)?;
    let cert = check_simple(&s, &h, &c1).map_err(|e| Failure { code: REFUSED, error: e.into() })?;
    let mut text = format!("{} at H = {} on {}: simple = {}\n", c1, h, s.name(), cert.simple);
    for side in [&cert.primary, &cert.partner] {
        text.push_str(&format!("  {} semisimple: {}\n", side.class_text, side.semisimple));
        for f in &side.families {
            let sides = match (&f.lhs, &f.rhs) {
                (Some(l), Some(r)) => format!(" [{l} vs {r}]"),
                _ => String::new(),
            };
            let verdict = match f.violating_class.as_ref() {
                Some(v) => format!("fails at {v}"),
                None => "holds".to_string(),
            };
            text.push_str(&format!("    {}: {}{} {}\n", f.family_text, f.polynomial_text, sides, verdict));
        }
    }
    let code = if cert.simple { COMPUTED } else { REFUSED };
    Ok((code, text, to_value(&cert)))
}

fn verdict_cmd(
    file: Option<&Path>,
    scenario_name: Option<&str>,
    c2: Option<&str>,
    budget: SearchBudget,
) -> Result<Outcome3, Failure> {
    let c2 = c2.map(scalar).transpose()?;
    if let Some(name) = scenario_name {
        let sc = scenario(ScenarioName::parse(name).map_err(input)?).map_err(input)?;
        let c2 = c2.unwrap_or_else(|| BigInt::from(7));
        let report = sc.run(c2, budget).map_err(input)?;
        return Ok(render_report(Some(name), &report));
    }
    let path = file.ok_or_else(|| input(anyhow!("a file or --scenario is required")))?;
    match VerdictFile::from_json(&read(path)?).map_err(input)? {
        VerdictFile::Query(q) => query(&q, c2),
        VerdictFile::Scenario(f) => scenario_file(&f, c2, budget),
    }
}

fn file_c2(given: Option<BigInt>, stored: &Option<IntInput>) -> Result<BigInt, Failure> {
    match (given, stored) {
        (Some(v), _) => Ok(v),
        (None, Some(v)) => v.value().map_err(input),
        (None, None) => Err(input(anyhow!("c2 is neither in the file nor given with --c2"))),
    }
}

fn query(q: &QueryFile, c2: Option<BigInt>) -> Result<Outcome3, Failure> {
    let s = q.surface.build().map_err(input)?;
    let h = s.class(ints(&q.h).map_err(input)?).map_err(input)?;
    let h = Polarization::best(&s, h).map_err(input)?;
    let c = match &q.c {
        Some(v) => s.class(ints(v).map_err(input)?).map_err(input)?,
        None => -s.canonical(),
    };
    let c = make_spin_c(c).map_err(input)?;
    let c1 = s.class(ints(&q.c1).map_err(input)?).map_err(input)?;
    let e = BundleTopology::new(c1, file_c2(c2, &q.c2)?);
    let v = spin_poly_status(&s, &h, &c, &e, &StatusOptions::default()).map_err(input)?;
    let code = if v.status == Status::Unknown { REFUSED } else { COMPUTED };
    let mut text = String::new();
    render_verdict(&mut text, &v);
    Ok((code, text, to_value(&v)))
}

fn scenario_file(f: &ScenarioFile, c2: Option<BigInt>, budget: SearchBudget) -> Result<Outcome3, Failure> {
    let source = f.source.build().map_err(input)?;
    let target = f.target.build().map_err(input)?;
    let hyp = match &f.pullback {
        Some(rows) => {
            let m = rows.iter().map(|r| ints(r)).collect::<Result<Vec<_>, _>>().map_err(input)?;
            DiffeoHypothesis::new(source, target, m)
        }
        None => DiffeoHypothesis::identity(source, target),
    }
    .map_err(input)?;
    let t = &hyp.target;
    let c1 = t.class(ints(&f.c1).map_err(input)?).map_err(input)?;
    let h = t.class(ints(&f.h).map_err(input)?).map_err(input)?;
    let e = BundleTopology::new(c1, file_c2(c2, &f.c2)?);
    let report = contradiction_report(&hyp, &e, &h, budget).map_err(input)?;
    Ok(render_report(None, &report))
}

fn render_verdict(out: &mut String, v: &Verdict) {
    out.push_str(&format!("  {} at H = {}: {}\n", v.surface, v.polarization_text, v.status));
    out.push_str(&format!("    queried {}, with C = -K: {}\n", v.queried_type_text, v.transported_type_text));
    for r in &v.reasons {
        let mark = if r.passed { "pass" } else { "fail" };
        out.push_str(&format!("    [{mark}] {}: {}\n", r.rule, r.detail));
    }
    if v.chamber_warning {
        out.push_str("    warning: the polarization lies on a wall\n");
    }
}

fn render_report(name: Option<&str>, r: &ContradictionReport) -> Outcome3 {
    let mut text = String::new();
    if let Some(n) = name {
        text.push_str(&format!("scenario {n}\n"));
    }
    text.push_str(&format!(
        "target type {}; transported source type {}; canonical increment {}\n",
        r.target_type_text, r.transported_type_text, r.canonical_increment
    ));
    for (label, side) in [("target", &r.target), ("source", &r.source)] {
        text.push_str(&format!("{label} {}\n", side.surface));
        for n in &side.notes {
            text.push_str(&format!("  {n}\n"));
        }
        match &side.verdict {
            Some(v) => render_verdict(&mut text, v),
            None => text.push_str("  no verdict\n"),
        }
    }
    text.push_str(&format!("outcome {}\n", r.outcome));
    let mut value = to_value(r);
    if let (Some(n), Value::Object(map)) = (name, &mut value) {
        map.insert("scenario".into(), Value::String(n.to_string()));
    }
    let code = if r.outcome == Outcome::Contradiction { COMPUTED } else { REFUSED };
    (code, text, value)
}
