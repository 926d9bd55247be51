use asai_core::error::Error;
use asai_core::exactnum::{parse_rational, smallest_nonresidue, MPoly, QuadCtx, Rational};
use asai_core::gstar::{delta1_star, gstar_factor};
use asai_core::heckealg::{double_coset_hecke, euler_poly, satake, EulerKind, Group, HeckeElem};
use asai_core::heckemod::{
    certify_ideal, delta1_verify, elem_from_json, local_factor_checked, trace_level, CertPart, Delta1Case, GroupElem,
    Level, TestVector,
};
use asai_core::hilbert::{ingest, parse_inputs, period_ideal_check, PeriodOptions, Place};
use asai_core::par::{set_workers, Exec};
use asai_core::suite::{run_suite, SuiteConfig};
use asai_core::whitzeta::{normalize, zeta_asai, zeta_rs_split, SchwartzFn, WhitParams, ZetaOptions, ZetaResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_ASSERTION: u8 = 4;

#[derive(Parser)]
#[command(name = "asai", version, about = "Exact local Asai zeta integrals, Hecke local factors and their certificates")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = 3)]
    prime: u64,
    /// Non-residue defining the quadratic extension; must be the smallest one for p.
    #[arg(long, global = true)]
    nonresidue: Option<i64>,
    /// Largest discretization level a zeta integral may use.
    #[arg(long, global = true, default_value_t = 7)]
    precision_cap: u32,
    /// Keep Satake parameters symbolic (the default).
    #[arg(long, global = true, conflicts_with = "satake")]
    symbolic: bool,
    /// Specialize at Satake parameters: A B (inert) or u1 v1 u2 v2 (split).
    #[arg(long, global = true, num_args = 2..=4, value_names = ["A", "B"])]
    satake: Option<Vec<String>>,
    #[arg(long, global = true, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    /// Worker threads; 1 runs the sequential path.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Satake image of a Hecke element.
    Satake {
        #[arg(long, value_enum, default_value_t = GroupArg::Inert)]
        group: GroupArg,
        /// Hecke element as JSON {"terms": [{"exp": [i, j, k, l], "coeff": "x"}]} or @file.
        #[arg(long, conflicts_with = "double_coset")]
        hecke: Option<String>,
        /// Characteristic function of K t(lambda, 0) K.
        #[arg(long)]
        double_coset: Option<u32>,
        /// Factor carrying the double coset for product groups.
        #[arg(long, default_value_t = 0)]
        pair: usize,
    },
    /// Euler polynomial with Hecke coefficients.
    EulerPoly {
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Zeta integral of a Schwartz function against a translate of the spherical Whittaker function.
    Zeta {
        /// Schwartz function JSON file, or `unramified` for ch(Z_p^2).
        #[arg(long)]
        phi: String,
        /// `identity` or a group element JSON file ({"inert": M} or {"split": [M1, M2]}).
        #[arg(long, default_value = "identity")]
        g: String,
        /// Use the product group GL2 x GL2 (only with --g identity).
        #[arg(long)]
        split: bool,
        #[arg(long)]
        normalize: bool,
    },
    /// Local factor P_delta of a test vector (traced to full level first when at K[p]).
    LocalFactor {
        #[arg(long)]
        vector: PathBuf,
    },
    /// Integrality or ideal-membership certificate for a test vector.
    Certify {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        part: u8,
    },
    /// Verify the delta_1 construction and its local factor.
    Delta1Verify {
        #[arg(long, value_enum)]
        case: CaseArg,
    },
    /// Local factor of a G* vector, its preimage under iota and its ideal certificate.
    GstarFactor {
        /// G* test vector JSON file.
        #[arg(long, conflicts_with = "delta1")]
        vector: Option<PathBuf>,
        #[arg(long, value_enum)]
        delta1: Option<CaseArg>,
    },
    /// Period ideal check for a Hilbert eigenform.
    HilbertCheck {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long)]
        ell: u64,
        /// Comma-separated primes of S0.
        #[arg(long, value_delimiter = ',')]
        s0: Vec<u64>,
        /// Root of d mod l selecting the place when l splits in the coefficient field.
        #[arg(long)]
        root: Option<i64>,
        /// Assert that l is coprime to the narrow class number times #(O_E/n)^x.
        #[arg(long)]
        class_number_coprime: bool,
    },
    /// Run the acceptance battery.
    VerifySuite,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Inert,
    Split,
    GstarInert,
    GstarSplit,
}

impl GroupArg {
    fn group(self) -> Group {
        match self {
            GroupArg::Inert => Group::InertF,
            GroupArg::Split => Group::SplitPair,
            GroupArg::GstarInert => Group::GstarInert,
            GroupArg::GstarSplit => Group::GstarSplit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    AsaiInert,
    AsaiStarInert,
    AsaiStarSplit,
    StandardF,
    RsSplit,
}

impl KindArg {
    fn kind(self) -> EulerKind {
        match self {
            KindArg::AsaiInert => EulerKind::AsaiInert,
            KindArg::AsaiStarInert => EulerKind::AsaiStarInert,
            KindArg::AsaiStarSplit => EulerKind::AsaiStarSplit,
            KindArg::StandardF => EulerKind::StandardF,
            KindArg::RsSplit => EulerKind::RsSplit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Inert,
    Split,
}

impl CaseArg {
    fn case(self) -> Delta1Case {
        match self {
            CaseArg::Inert => Delta1Case::Inert,
            CaseArg::Split => Delta1Case::Split,
        }
    }
}

/// A command result: JSON payload, one summary line, and whether its assertions held.
struct Outcome {
    json: Value,
    summary: String,
    ok: bool,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn read_json(path: &std::path::Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn inline_or_file(arg: &str) -> Result<Value, Error> {
    match arg.strip_prefix('@') {
        Some(path) => read_json(path.as_ref()),
        None => serde_json::from_str(arg).map_err(|e| input(format!("inline JSON: {e}"))),
    }
}

fn params(run: &RunConfig) -> Result<Option<WhitParams>, Error> {
    let Some(vals) = &run.satake else { return Ok(None) };
    let r: Vec<Rational> = vals
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| input(format!("{s} is not a rational number"))))
        .collect::<Result<_, _>>()?;
    let w = match r.as_slice() {
        [a, b] => WhitParams::Inert { a: a.clone(), b: b.clone() },
        [u1, v1, u2, v2] => WhitParams::Split { u1: u1.clone(), v1: v1.clone(), u2: u2.clone(), v2: v2.clone() },
        _ => return Err(input("--satake takes two (inert) or four (split) values")),
    };
    w.validate()?;
    Ok(Some(w))
}

fn specialize(run: &RunConfig, f: &MPoly) -> Result<Option<String>, Error> {
    Ok(params(run)?.map(|w| w.eval(f)).transpose()?.map(|x| x.to_string()))
}

fn hecke_from_json(group: Group, v: &Value) -> Result<HeckeElem, Error> {
    let terms = v["terms"].as_array().ok_or_else(|| input("Hecke JSON needs a `terms` array"))?;
    let mut h = HeckeElem::zero(group);
    for t in terms {
        let exp: [i32; 4] = serde_json::from_value(t["exp"].clone()).map_err(|e| input(format!("exp: {e}")))?;
        let coeff = match &t["coeff"] {
            Value::Null => Rational::from_integer(1.into()),
            c => c.as_str().and_then(parse_rational).ok_or_else(|| input(format!("coeff {c} is not a rational string")))?,
        };
        h = h.add(&HeckeElem::monomial(group, exp, coeff));
    }
    Ok(h)
}

fn zeta_options(run: &RunConfig) -> ZetaOptions {
    let exec = if run.workers == Some(1) { Exec::Sequential } else { Exec::Parallel };
    ZetaOptions { level_cap: run.precision_cap, exec, ..Default::default() }
}

fn zeta_json(run: &RunConfig, p: u64, z: &ZetaResult, want_normalized: bool) -> Result<(Value, String), Error> {
    let mut out = z.to_json();
    let mut summary = format!("zeta integral at level {}", z.level);
    if want_normalized {
        let n = normalize(p, z)?;
        let names = if z.split { ["e1", "e2", "f1", "f2"] } else { ["e1", "e2", "_", "_"] };
        out["normalized"] = json!(n.render(names));
        summary = format!("normalized zeta = {}", n.render(names));
        if let Some(v) = specialize(run, &n)? {
            out["normalized_value"] = json!(v);
        }
    }
    if let Some(w) = params(run)? {
        let f = z.specialize(&w)?;
        let render = |poly: &asai_core::exactnum::LaurentPoly<Rational>| -> Value {
            poly.terms().map(|(k, c)| (k.to_string(), json!(c.to_string()))).collect()
        };
        out["value"] = json!({ "numerator": render(&f.num), "denominator": render(&f.den) });
    }
    Ok((out, summary))
}

fn execute(run: &RunConfig, cmd: &Command) -> Result<Outcome, Error> {
    let p = run.prime;
    let ctx = QuadCtx::new(p)?;
    if let Some(r) = run.nonresidue {
        QuadCtx::with_nonresidue(p, r)?;
        if r != smallest_nonresidue(p) {
            return Err(input(format!("only the smallest non-residue {} is supported for p = {p}", ctx.r)));
        }
    }
    if run.precision_cap < 2 {
        return Err(input("--precision-cap must be at least 2"));
    }
    match cmd {
        Command::Satake { group, hecke, double_coset, pair } => {
            let g = group.group();
            let h = match (hecke, double_coset) {
                (Some(s), _) => hecke_from_json(g, &inline_or_file(s)?)?,
                (None, Some(l)) => double_coset_hecke(p, *l, g, *pair)?,
                (None, None) => return Err(input("give --hecke or --double-coset")),
            };
            let names = if g.is_split() { ["e1", "e2", "f1", "f2"] } else { ["e1", "e2", "_", "_"] };
            let s = satake(&h, p);
            let mut out = json!({ "p": p, "group": g, "hecke": h.render(), "satake": s.render(names) });
            if let Some(v) = specialize(run, &s)? {
                out["value"] = json!(v);
            }
            Ok(Outcome { summary: format!("Satake({h}) = {}", s.render(names)), json: out, ok: true })
        }
        Command::EulerPoly { kind } => {
            let e = euler_poly(kind.kind(), p)?;
            let names = if e.group().is_split() { ["e1", "e2", "f1", "f2"] } else { ["e1", "e2", "_", "_"] };
            let sat: Vec<Value> = e.satake().terms().map(|(k, c)| json!({ "power": k, "coeff": c.render(names) })).collect();
            let out = json!({
                "p": p,
                "kind": e.kind,
                "group": e.group(),
                "coefficients": e.coeffs.iter().map(HeckeElem::render).collect::<Vec<_>>(),
                "at_one": e.at_one().render(),
                "at_one_involuted": e.at_one_involuted().render(),
                "satake": sat,
            });
            Ok(Outcome { summary: format!("degree {} Euler polynomial", e.degree()), json: out, ok: true })
        }
        Command::Zeta { phi, g, split, normalize: want } => {
            let phi = if phi == "unramified" {
                SchwartzFn::lattice(p, 0)
            } else {
                serde_json::from_value(read_json(phi.as_ref())?).map_err(|e| input(format!("phi: {e}")))?
            };
            let elem = if g == "identity" {
                GroupElem::identity(&ctx, *split)
            } else {
                elem_from_json(&ctx, &read_json(g.as_ref())?)?
            };
            let opts = zeta_options(run);
            let z = match &elem {
                GroupElem::Inert(m) => zeta_asai(p, &phi, m, &opts)?,
                GroupElem::Split(a, b) => zeta_rs_split(p, &phi, (a, b), &opts)?,
            };
            let (json, summary) = zeta_json(run, p, &z, *want)?;
            Ok(Outcome { json, summary, ok: true })
        }
        Command::LocalFactor { vector } => {
            let v = TestVector::from_json(&read_json(vector)?)?;
            let traced = v.level == Level::Kp;
            let at_k = if traced { trace_level(&v)? } else { v };
            let lf = local_factor_checked(&at_k, &zeta_options(run))?;
            let ok = lf.verified();
            let mut out = serde_json::to_value(&lf).map_err(|e| Error::Internal(e.to_string()))?;
            out["traced"] = json!(traced);
            if let Some(val) = specialize(run, &lf.zeta)? {
                out["zeta_value"] = json!(val);
            }
            Ok(Outcome { summary: format!("P_delta = {}", lf.factor), json: out, ok })
        }
        Command::Certify { vector, part } => {
            let v = TestVector::from_json(&read_json(vector)?)?;
            let part = [CertPart::One, CertPart::Two, CertPart::Three][*part as usize - 1];
            let c = certify_ideal(&v, part)?;
            Ok(Outcome { summary: format!("{part:?}: verified = {}", c.verified), ok: c.verified, json: c.to_json() })
        }
        Command::Delta1Verify { case } => {
            let r = delta1_verify(p, case.case())?;
            let ok = r.all_ok();
            let summary = format!("A(s) = 1: {}; local factor matches: {}", r.a_of_s_is_one, r.factor_matches);
            Ok(Outcome { json: serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?, summary, ok })
        }
        Command::GstarFactor { vector, delta1 } => {
            let v = match (vector, delta1) {
                (Some(path), _) => TestVector::from_json(&read_json(path)?)?,
                (None, Some(case)) => delta1_star(p, case.case())?,
                (None, None) => return Err(input("give --vector or --delta1")),
            };
            let f = gstar_factor(&v)?;
            Ok(Outcome { summary: format!("P* = {}", f.p_star), ok: f.verified(), json: f.to_json() })
        }
        Command::HilbertCheck { form, inputs, ell, s0, root, class_number_coprime } => {
            let data = ingest(&read_json(form)?)?;
            let inputs = parse_inputs(&read_json(inputs)?)?;
            let s0: BTreeSet<u64> = s0.iter().copied().collect();
            let opts = PeriodOptions { class_number_coprime: *class_number_coprime, zeta: zeta_options(run) };
            let r = period_ideal_check(&data, &inputs, &s0, Place { ell: *ell, root: *root }, &opts)?;
            let summary = format!("valuation {:?} against required {}: member = {}", r.valuation, r.required, r.member);
            Ok(Outcome { ok: r.holds(), summary, json: serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))? })
        }
        Command::VerifySuite => {
            let report = run_suite(&SuiteConfig { prime: p, seed: run.seed, ..Default::default() });
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let summary = format!("{} of {} criteria passed", report.criteria.iter().filter(|c| c.passed).count(), report.criteria.len());
            Ok(Outcome { ok: report.all_passed, summary, json: serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))? })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionOverflow { .. } | Error::BoxOverflow { .. } => EXIT_PRECISION,
        Error::NotMember(_) | Error::NotInImage(_) | Error::NotDivisible(_) | Error::Internal(_) => EXIT_ASSERTION,
        _ => EXIT_INPUT,
    }
}

fn emit(run: &RunConfig, v: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))? + "\n";
    match &run.out {
        Some(path) => std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.run.workers {
        set_workers(n.max(1));
    }
    let result = execute(&cli.run, &cli.cmd).and_then(|o| emit(&cli.run, &o.json).map(|_| o));
    match result {
        Ok(o) => {
            eprintln!("{}", o.summary);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("assertion failed");
                ExitCode::from(EXIT_ASSERTION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
