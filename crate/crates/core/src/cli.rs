//! The `fatf` command-line tool. Every command prints one JSON document and
//! exits with 0 (yes), 1 (no), 2 (unknown) or 3 (input error).

use std::ffi::OsString;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::decide::Solver;
use crate::decision::{Certificate, Config, Decision, LogSet, DEFAULT_GRID};
use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::fatf::{FatfElement, Signature};
use crate::hnn::HnnGroup;
use crate::linalg::{snf, AffineMap};
use crate::orbit::{self, ClassCertificate, NoCertificate, OrbitAnswer, OrbitConfig};
use crate::oracle::{Backend, OracleConfig};
use crate::parse::{self, endomorphism_to_json, matrix_json, vector_json};
use crate::verify;

pub const SCHEMA: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "fatf", version, about = "Decision procedures for endomorphisms of Fn x Zm")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Options {
    /// Free-group backend: bounded, abelian or auto.
    #[arg(long, global = true, default_value = "auto")]
    oracle: Backend,
    /// Iteration steps for orbit walks.
    #[arg(long, global = true, env = "FATF_BOUND", default_value_t = 10_000)]
    bound: u64,
    /// Word length bound for free-group walks.
    #[arg(long, global = true, env = "FATF_MAXLEN", default_value_t = 64)]
    maxlen: usize,
    /// Diagonal bound for two-sided searches.
    #[arg(long, global = true, env = "FATF_GRID", default_value_t = DEFAULT_GRID)]
    grid: u64,
    /// Re-check witnesses by direct arithmetic.
    #[arg(long, global = true)]
    verify: bool,
    /// Expected free rank.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Expected free-abelian rank.
    #[arg(long, global = true)]
    m: Option<usize>,
}

/// An endomorphism file, or an inline JSON document starting with `{`.
type EndoArg = String;

#[derive(Subcommand, Debug)]
enum Command {
    /// Recognize the type of an endomorphism.
    Classify { endo: EndoArg },
    /// Apply an endomorphism, optionally several times.
    Apply {
        endo: EndoArg,
        element: String,
        #[arg(long, default_value_t = 1)]
        times: u64,
    },
    /// The composite `first` followed by `second`.
    Compose { first: EndoArg, second: EndoArg },
    /// Closed form of the k-th power.
    Power { endo: EndoArg, k: u64 },
    Injective { endo: EndoArg },
    /// Least k with gΦ^k = h.
    Brp { endo: EndoArg, g: String, h: String },
    /// Least k with gΦ^k conjugate to h.
    Brcp { endo: EndoArg, g: String, h: String },
    /// Some z with (zΦ)⁻¹ g z = h.
    Tcp { endo: EndoArg, g: String, h: String },
    /// Least (r, s) with gΦ^r conjugate to hΦ^s.
    Tsbrcp { endo: EndoArg, g: String, h: String },
    /// All k with gΦ^k = h (or conjugate with --conjugacy).
    Philog {
        endo: EndoArg,
        g: String,
        h: String,
        #[arg(long)]
        conjugacy: bool,
    },
    /// Least k ≥ k-min with x·M^k (+ affine part) = y.
    Orbit {
        #[arg(long = "M")]
        matrix: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Translation, making the step x ↦ xM + b.
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = 0)]
        k_min: u64,
    },
    /// Smith normal form U·M·V = D.
    Snf {
        #[arg(long = "M")]
        matrix: String,
    },
    /// Ascending HNN extension by an injective endomorphism.
    Hnn {
        #[command(subcommand)]
        command: HnnCommand,
    },
}

#[derive(Subcommand, Debug)]
enum HnnCommand {
    /// Is the element trivial?
    Wp { endo: EndoArg, e: String },
    Mul { endo: EndoArg, a: String, b: String },
    /// Some z with z⁻¹ a z = b.
    Cp { endo: EndoArg, a: String, b: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Apply { .. } => "apply",
            Command::Compose { .. } => "compose",
            Command::Power { .. } => "power",
            Command::Injective { .. } => "injective",
            Command::Brp { .. } => "brp",
            Command::Brcp { .. } => "brcp",
            Command::Tcp { .. } => "tcp",
            Command::Tsbrcp { .. } => "tsbrcp",
            Command::Philog { .. } => "philog",
            Command::Orbit { .. } => "orbit",
            Command::Snf { .. } => "snf",
            Command::Hnn { command: HnnCommand::Wp { .. } } => "hnn-wp",
            Command::Hnn { command: HnnCommand::Mul { .. } } => "hnn-mul",
            Command::Hnn { command: HnnCommand::Cp { .. } } => "hnn-cp",
        }
    }
}

/// Process exit status and printed output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    fn code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

struct Report {
    answer: Answer,
    witness: Value,
    certificate: Value,
    taint: Value,
    verified: Value,
}

impl Report {
    fn yes(witness: Value) -> Report {
        Report { answer: Answer::Yes, witness, certificate: Value::Null, taint: Value::Null, verified: Value::Null }
    }

    fn no(certificate: Value) -> Report {
        Report { answer: Answer::No, witness: Value::Null, certificate, taint: Value::Null, verified: Value::Null }
    }
}

pub fn main() -> i32 {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = cli.command.name();
    match dispatch(&cli) {
        Ok(r) => {
            let mut answer = r.answer;
            let mut taint = r.taint;
            if r.verified == Value::Bool(false) {
                answer = Answer::Unknown;
                taint = json!("witness failed self-check");
            }
            let doc = json!({
                "schema": SCHEMA,
                "command": name,
                "answer": answer.as_str(),
                "witness": if answer == Answer::Yes { r.witness } else { Value::Null },
                "certificate": r.certificate,
                "taint": taint,
                "stats": stats(&cli.opts, r.verified),
            });
            Outcome { code: answer.code(), stdout: render(&doc), stderr: String::new() }
        }
        Err(e) => {
            let doc = json!({
                "schema": SCHEMA,
                "command": name,
                "answer": "error",
                "error": e.to_string(),
            });
            Outcome { code: 3, stdout: render(&doc), stderr: format!("fatf: {e}\n") }
        }
    }
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

fn stats(o: &Options, verified: Value) -> Value {
    json!({
        "oracle": o.oracle.to_string(),
        "bound": o.bound,
        "maxlen": o.maxlen,
        "grid": o.grid,
        "verified": verified,
    })
}

fn config(o: &Options) -> Config {
    Config {
        oracle: OracleConfig { backend: o.oracle, steps: o.bound, maxlen: o.maxlen, ..OracleConfig::default() },
        orbit: OrbitConfig::with_bound(o.bound),
        grid: o.grid,
    }
}

fn load_endo(arg: &str, o: &Options) -> Result<Endomorphism> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Precondition(format!("cannot read {arg}: {e}")))?
    };
    let phi = parse::parse_endomorphism(&text)?;
    let sig = phi.signature();
    let want = Signature::new(o.n.unwrap_or(sig.n), o.m.unwrap_or(sig.m));
    want.check(sig)?;
    Ok(phi)
}

fn element(text: &str, phi: &Endomorphism) -> Result<FatfElement> {
    parse::parse_element(text, phi.signature())
}

fn check_flag(o: &Options, f: impl FnOnce() -> bool) -> Value {
    if o.verify {
        Value::Bool(f())
    } else {
        Value::Null
    }
}

fn from_decision<W>(d: Decision<W>, witness: impl FnOnce(&W) -> Value, verified: Value) -> Report {
    match d {
        Decision::Yes(w) => Report { verified, ..Report::yes(witness(&w)) },
        Decision::No(c) => Report::no(certificate_json(&c)),
        Decision::Unknown(t) => Report {
            answer: Answer::Unknown,
            witness: Value::Null,
            certificate: Value::Null,
            taint: json!(t.0),
            verified: Value::Null,
        },
    }
}

fn endo_summary(phi: &Endomorphism) -> Value {
    json!({
        "type": match phi { Endomorphism::I(_) => "I", Endomorphism::II(_) => "II" },
        "injective": phi.is_injective(),
        "bijective": phi.is_bijective(),
        "endomorphism": endomorphism_to_json(phi),
    })
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let o = &cli.opts;
    let cfg = config(o);
    let solver = Solver::new(&cfg);
    Ok(match &cli.command {
        Command::Classify { endo } => Report::yes(endo_summary(&load_endo(endo, o)?)),
        Command::Apply { endo, element: e, times } => {
            let phi = load_endo(endo, o)?;
            let g = element(e, &phi)?;
            Report::yes(json!({ "image": phi.iterate(&g, *times)?.to_string() }))
        }
        Command::Compose { first, second } => {
            let a = load_endo(first, o)?;
            let b = load_endo(second, o)?;
            Report::yes(endo_summary(&a.compose(&b)?))
        }
        Command::Power { endo, k } => Report::yes(endo_summary(&load_endo(endo, o)?.power(*k)?)),
        Command::Injective { endo } => {
            let phi = load_endo(endo, o)?;
            if phi.is_injective() {
                Report::yes(json!({ "bijective": phi.is_bijective() }))
            } else {
                Report::no(json!({ "step": injectivity_failure(&phi), "detail": Value::Null }))
            }
        }
        Command::Brp { endo, g, h } | Command::Brcp { endo, g, h } => {
            let conj = matches!(cli.command, Command::Brcp { .. });
            let phi = load_endo(endo, o)?;
            let (g, h) = (element(g, &phi)?, element(h, &phi)?);
            let d = if conj { solver.brcp(&phi, &g, &h)? } else { solver.brp(&phi, &g, &h)? };
            let verified = match &d {
                Decision::Yes(k) if conj => check_flag(o, || verify::brcp(&phi, &g, &h, *k)),
                Decision::Yes(k) => check_flag(o, || verify::brp(&phi, &g, &h, *k)),
                _ => Value::Null,
            };
            from_decision(d, |k| json!({ "k": k }), verified)
        }
        Command::Tcp { endo, g, h } => {
            let phi = load_endo(endo, o)?;
            let (g, h) = (element(g, &phi)?, element(h, &phi)?);
            let d = solver.tcp(&phi, &g, &h)?;
            let verified = match &d {
                Decision::Yes(z) => check_flag(o, || verify::twisted_conjugator(&phi, &g, &h, z)),
                _ => Value::Null,
            };
            from_decision(d, |z| json!({ "z": z.to_string() }), verified)
        }
        Command::Tsbrcp { endo, g, h } => {
            let phi = load_endo(endo, o)?;
            let (g, h) = (element(g, &phi)?, element(h, &phi)?);
            let d = solver.tsbrcp(&phi, &g, &h)?;
            let verified = match &d {
                Decision::Yes((r, s)) => check_flag(o, || verify::two_sided(&phi, &g, &h, *r, *s)),
                _ => Value::Null,
            };
            from_decision(d, |(r, s)| json!({ "r": r, "s": s }), verified)
        }
        Command::Philog { endo, g, h, conjugacy } => {
            let phi = load_endo(endo, o)?;
            let (g, h) = (element(g, &phi)?, element(h, &phi)?);
            let d = solver.philog(&phi, &g, &h, *conjugacy)?;
            let verified = match &d {
                Decision::Yes(ls) => check_flag(o, || verify::log_set(&phi, &g, &h, ls, *conjugacy, 100)),
                _ => Value::Null,
            };
            from_decision(d, log_set_json, verified)
        }
        Command::Orbit { matrix, x, y, b, k_min } => {
            let m = parse::parse_matrix(matrix, None)?;
            let x = parse::parse_vector(x)?;
            let y = parse::parse_vector(y)?;
            if !m.is_square() || m.rows() != x.len() || x.len() != y.len() {
                return Err(Error::DimensionMismatch(format!(
                    "orbit needs a square matrix matching x and y, got {}x{}, |x| = {}, |y| = {}",
                    m.rows(),
                    m.cols(),
                    x.len(),
                    y.len()
                )));
            }
            let (ans, verified) = match b {
                None => {
                    let a = orbit::solve_linear_orbit(&x, &m, &y, *k_min, &cfg.orbit);
                    let v = check_flag(o, || orbit::verify_linear(&x, &m, &y, *k_min, &a));
                    (a, v)
                }
                Some(b) => {
                    let t = AffineMap::new(m, parse::parse_vector(b)?)?;
                    let a = orbit::solve_affine_orbit(&x, &t, &y, *k_min, &cfg.orbit);
                    let v = check_flag(o, || orbit::verify_affine(&x, &t, &y, *k_min, &a));
                    (a, v)
                }
            };
            match ans {
                OrbitAnswer::Yes(k) => Report { verified, ..Report::yes(json!({ "k": k })) },
                OrbitAnswer::No(c) => Report {
                    verified,
                    ..Report::no(json!({ "step": orbit_step(&c), "detail": orbit_json(&c) }))
                },
                OrbitAnswer::Unknown { bound } => Report {
                    answer: Answer::Unknown,
                    witness: Value::Null,
                    certificate: Value::Null,
                    taint: json!(format!("orbit: no certificate within {bound} steps")),
                    verified: Value::Null,
                },
            }
        }
        Command::Snf { matrix } => {
            let a = parse::parse_matrix(matrix, None)?;
            let s = snf(&a);
            let ok = &(&s.u * &a) * &s.v == s.d;
            Report {
                verified: check_flag(o, || ok),
                ..Report::yes(json!({
                    "diagonal": vector_json(&s.diagonal()),
                    "rank": s.rank,
                    "D": matrix_json(&s.d),
                    "U": matrix_json(&s.u),
                    "V": matrix_json(&s.v),
                }))
            }
        }
        Command::Hnn { command } => hnn(command, o, &solver)?,
    })
}

fn hnn(command: &HnnCommand, o: &Options, solver: &Solver) -> Result<Report> {
    let endo = match command {
        HnnCommand::Wp { endo, .. } | HnnCommand::Mul { endo, .. } | HnnCommand::Cp { endo, .. } => endo,
    };
    let group = HnnGroup::new(load_endo(endo, o)?)?;
    Ok(match command {
        HnnCommand::Wp { e, .. } => {
            let e = parse::parse_hnn(e, &group)?;
            if group.is_identity(&e) {
                Report::yes(json!({ "normal_form": e.to_string() }))
            } else {
                Report::no(json!({
                    "step": "normal form is not trivial",
                    "detail": { "normal_form": e.to_string() },
                }))
            }
        }
        HnnCommand::Mul { a, b, .. } => {
            let a = parse::parse_hnn(a, &group)?;
            let b = parse::parse_hnn(b, &group)?;
            Report::yes(json!({ "product": group.mul(&a, &b)?.to_string() }))
        }
        HnnCommand::Cp { a, b, .. } => {
            let a = parse::parse_hnn(a, &group)?;
            let b = parse::parse_hnn(b, &group)?;
            let d = group.conjugacy(&a, &b, solver)?;
            let verified = match &d {
                Decision::Yes(z) => check_flag(o, || verify::hnn_conjugator(&group, &a, &b, z)),
                _ => Value::Null,
            };
            from_decision(d, |z| json!({ "z": z.to_string() }), verified)
        }
    })
}

fn injectivity_failure(phi: &Endomorphism) -> &'static str {
    match phi {
        Endomorphism::II(_) => "type II endomorphisms are never injective",
        Endomorphism::I(f) => {
            if f.q().determinant() == num_traits::Zero::zero() {
                "Q is singular"
            } else {
                "free images generate a subgroup of smaller rank"
            }
        }
    }
}

fn log_set_json(ls: &LogSet) -> Value {
    match ls {
        LogSet::Empty => json!({ "log_set": "empty" }),
        LogSet::Progression { k0, p } => json!({ "log_set": ls.to_string(), "k0": k0, "p": p }),
    }
}

fn orbit_step(c: &NoCertificate) -> &'static str {
    match c {
        NoCertificate::Cycle { .. } => "orbit cycle misses target",
        NoCertificate::Functional { .. } => "invariant functional separates target",
        NoCertificate::Preimage { .. } => "target has no preimage at the required depth",
        NoCertificate::Growth { .. } => "orbit norm grows past target",
        NoCertificate::Congruence { .. } => "orbit misses target modulo q",
    }
}

pub fn orbit_json(c: &NoCertificate) -> Value {
    match c {
        NoCertificate::Cycle { entry, period } => json!({ "kind": "cycle", "entry": entry, "period": period }),
        NoCertificate::Functional { period, classes } => json!({
            "kind": "functional",
            "period": period,
            "classes": classes.iter().map(|c| match c {
                ClassCertificate::Invariant { f0 } => json!({ "invariant": vector_json(f0) }),
                ClassCertificate::Drift { f0, f, den } => json!({
                    "drift": { "f0": vector_json(f0), "f": vector_json(f), "den": den.to_string() }
                }),
            }).collect::<Vec<_>>(),
        }),
        NoCertificate::Preimage { depth } => json!({ "kind": "preimage", "depth": depth }),
        NoCertificate::Growth { k0, form } => json!({ "kind": "growth", "k0": k0, "form": matrix_json(form) }),
        NoCertificate::Congruence { modulus, entry, period } => {
            json!({ "kind": "congruence", "modulus": modulus, "entry": entry, "period": period })
        }
    }
}

pub fn certificate_json(c: &Certificate) -> Value {
    let detail = match c {
        Certificate::WordCycle { entry, period } | Certificate::ClassCycle { entry, period } => {
            json!({ "entry": entry, "period": period })
        }
        Certificate::AbelianOrbit(o) | Certificate::CyclicImage(o) | Certificate::Orbit(o) => orbit_json(o),
        Certificate::AbelianMismatch { k0 } => json!({ "k0": k0 }),
        Certificate::Cross { entry, periods, rays } => json!({
            "entry": [entry.0, entry.1],
            "periods": [periods.0, periods.1],
            "rays": rays.iter().map(orbit_json).collect::<Vec<_>>(),
        }),
        Certificate::SingleRay { start } => json!({ "start": start.map(|(r, s)| vec![r, s]) }),
        Certificate::ExponentSum { left, right } => json!({ "left": left, "right": right }),
        Certificate::Branches(bs) => Value::Array(bs.iter().map(certificate_json).collect()),
        _ => Value::Null,
    };
    json!({ "step": c.step(), "detail": detail })
}
