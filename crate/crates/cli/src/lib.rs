//! Command-line frontend: parses surfaces and curves, runs one analysis and
//! prints a canonical JSON (or flattened text) report.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a
//! verification step fails.

pub mod paper;
pub mod report;

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jetcontact::contact::{compose, contact_report, tangency_psc_test};
use jetcontact::faa::{all_constants, expand};
use jetcontact::lift::{construct_regular_witness, identity_pairs, lift_identity_residual, obstruction_b};
use jetcontact::normal::{lemma1_check, levi_sample, to_normal_form, LeviConfig, NormalForm};
use jetcontact::parse::{format_polynomial, parse_curve, parse_hermitian, parse_polynomial};
use jetcontact::search::{search_type, SearchConfig};
use jetcontact::{CurveJet, GaussianRational, HermitianPolynomial};
use serde_json::{json, Value};

use report::{gaussian, order, rational};

#[derive(Parser, Debug)]
#[command(
    name = "jetcontact",
    version,
    about = "Order of contact of holomorphic curves with real hypersurfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel stages; 0 picks automatically.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct SurfaceArg {
    /// Defining function, inline or a path to a file holding one.
    #[arg(long, allow_hyphen_values = true)]
    surface: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a surface (and optionally a curve) and print the canonical form.
    Parse {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
    },
    /// Compose a curve with the defining function and report the contact order.
    Contact {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long = "truncate", default_value_t = 40)]
        truncation: u32,
    },
    /// Chain-rule expansion of D^{a,b}[r∘γ], or of D^{aM,bM} with --mult.
    Expand {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        mult: Option<u32>,
        /// Drop terms with a slot of order below the multiplicity.
        #[arg(long)]
        reduce_mv: bool,
    },
    /// Bounded search for singular and regular type lower bounds.
    Search {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 2)]
        max_mult: u32,
        #[arg(long, default_value_t = 2)]
        jet_len: u32,
        /// Comma-separated Gaussian rationals, e.g. "0,1,i".
        #[arg(long, default_value = "0,1")]
        coeffs: String,
        #[arg(long, default_value_t = 200)]
        probes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "truncate", default_value_t = 40)]
        truncation: u32,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
        /// Keep the first component of every probe identically zero.
        #[arg(long)]
        tangent_only: bool,
    },
    /// Obstruction, lift identities and regular witness construction.
    Lift {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, default_value_t = 4)]
        target: u32,
        #[arg(long = "truncate", default_value_t = 40)]
        truncation: u32,
    },
    /// Exact normal form through a given degree.
    Normalform {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 5)]
        degree: u32,
    },
    /// Levi-form sampling plus the exact normal-form checks.
    Psc {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Leading-term pseudoconvexity test along one curve.
    PscTangency {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long = "truncate", default_value_t = 40)]
        truncation: u32,
    },
    /// Regression suite for the reference surface and its curves.
    VerifyPaper {
        #[arg(long, default_value_t = 200)]
        probes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<jetcontact::Error> for Failure {
    fn from(e: jetcontact::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

/// Runs the CLI on `args` (program name first) without touching the
/// process streams.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let render = |v: &Value| match cli.format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Format::Text => report::to_text(v) + "\n",
    };
    match dispatch(&cli) {
        Ok(v) => Outcome {
            code: 0,
            stdout: render(&v),
            stderr: String::new(),
        },
        Err(Failure::Verification(v)) => Outcome {
            code: 2,
            stdout: render(&v),
            stderr: "verification failed\n".into(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

/// Reads a surface from a file when `arg` names one, else parses it inline.
/// Lines starting with `#` are comments.
fn load_surface(arg: &str) -> Result<(HermitianPolynomial, Value), Failure> {
    let path = Path::new(arg);
    let (text, provenance) = if path.is_file() {
        let raw = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        let body: Vec<&str> = raw.lines().filter(|l| !l.trim_start().starts_with('#')).collect();
        (body.join(" "), json!({ "file": arg }))
    } else {
        (arg.to_string(), json!("inline"))
    };
    let r = parse_hermitian(text.trim(), None)?;
    let echo = json!({ "text": text.trim(), "provenance": provenance, "canonical": format_polynomial(&r) });
    Ok((r, echo))
}

fn load_curve(text: &str) -> Result<CurveJet, Failure> {
    Ok(parse_curve(text)?)
}

/// Embeds the surface and curve into a common dimension.
fn align(r: &HermitianPolynomial, curve: &CurveJet) -> Result<(HermitianPolynomial, CurveJet), Failure> {
    let n = r.dim().max(curve.dim());
    Ok((r.with_dimension(n)?, curve.with_dimension(n)?))
}

fn parse_coefficients(text: &str) -> Result<Vec<GaussianRational>, Failure> {
    text.split(',')
        .map(|part| {
            let p = parse_polynomial(part.trim(), Some(1))?;
            if p.terms().any(|(m, _)| !m.is_constant()) {
                return Err(Failure::Usage(format!("coefficient `{part}` is not a constant")));
            }
            Ok(p.constant_term())
        })
        .collect()
}

fn dispatch(cli: &Cli) -> CmdResult {
    let threads = cli.threads;
    match &cli.command {
        Command::Parse { surface, curve } => {
            let (r, input) = load_surface(&surface.surface)?;
            let again = parse_hermitian(&format_polynomial(&r), Some(r.dim()))?;
            let terms: Vec<Value> = r
                .terms()
                .map(|(m, c)| json!({ "z": m.z, "zb": m.zb, "coeff": gaussian(c) }))
                .collect();
            let curve_v = match curve {
                Some(c) => Some(report::curve(&load_curve(c)?)),
                None => None,
            };
            Ok(report::envelope(
                "parse",
                json!({ "surface": input, "curve": curve }),
                json!({
                    "dimension": r.dim(),
                    "canonical": format_polynomial(&r),
                    "terms": terms,
                    "hermitian": true,
                    "round_trip": again == r,
                    "curve": curve_v,
                }),
            ))
        }
        Command::Contact {
            surface,
            curve,
            truncation,
        } => {
            let (r, input) = load_surface(&surface.surface)?;
            let (r, jet) = align(&r, &load_curve(curve)?)?;
            let rep = contact_report(&r, &jet, *truncation)?;
            let trace = compose(&r, &jet, *truncation)?;
            Ok(report::envelope(
                "contact",
                json!({ "surface": input, "curve": curve, "truncation": truncation }),
                json!({
                    "dimension": r.dim(),
                    "curve": report::curve(&jet),
                    "report": report::contact_report(&rep),
                    "nu_trace": order(rep.nu_trace),
                    "trace": report::trace(&trace),
                }),
            ))
        }
        Command::Expand { a, b, mult, reduce_mv } => expand_cmd(*a, *b, *mult, *reduce_mv),
        Command::Search {
            surface,
            max_mult,
            jet_len,
            coeffs,
            probes,
            seed,
            truncation,
            budget,
            tangent_only,
        } => {
            let (r, input) = load_surface(&surface.surface)?;
            let config = SearchConfig {
                max_mult: *max_mult,
                jet_len: *jet_len,
                coefficients: parse_coefficients(coeffs)?,
                truncation: *truncation,
                probes: *probes,
                seed: *seed,
                budget: *budget,
                threads,
                tangent_only: *tangent_only,
            };
            let est = search_type(&r, &config)?;
            Ok(report::envelope(
                "search",
                json!({
                    "surface": input,
                    "max_mult": max_mult,
                    "jet_len": jet_len,
                    "coeffs": config.coefficients.iter().map(gaussian).collect::<Vec<_>>(),
                    "probes": probes,
                    "seed": seed,
                    "truncation": truncation,
                    "budget": budget.to_string(),
                    "tangent_only": tangent_only,
                }),
                report::type_estimate(&est),
            ))
        }
        Command::Lift {
            surface,
            curve,
            target,
            truncation,
        } => {
            let (r, input) = load_surface(&surface.surface)?;
            let (r, jet) = align(&r, &load_curve(curve)?)?;
            let b = obstruction_b(&r, &jet)?;
            let outcome = construct_regular_witness(&r, &jet, *target, *truncation)?;
            let residuals: Vec<Value> = identity_pairs()
                .into_iter()
                .map(|(a, bb)| match lift_identity_residual(&r, &jet, a, bb) {
                    Ok(v) => json!({ "pair": [a, bb], "residual": gaussian(&v) }),
                    Err(e) => json!({ "pair": [a, bb], "error": e.to_string() }),
                })
                .collect();
            Ok(report::envelope(
                "lift",
                json!({ "surface": input, "curve": curve, "target": target, "truncation": truncation }),
                json!({
                    "obstruction": report::obstruction(&b),
                    "witness": report::witness_outcome(&outcome),
                    "identity_residuals": residuals,
                }),
            ))
        }
        Command::Normalform { surface, degree } => {
            let (r, input) = load_surface(&surface.surface)?;
            let nf = to_normal_form(&r, *degree)?;
            let round_trip = nf.pullback() == r.as_poly().truncate(*degree);
            Ok(report::envelope(
                "normalform",
                json!({ "surface": input, "degree": degree }),
                json!({ "normal_form": normal_form(&nf), "round_trip": round_trip }),
            ))
        }
        Command::Psc {
            surface,
            radius,
            samples,
            tol,
            seed,
            degree,
        } => {
            let (r, input) = load_surface(&surface.surface)?;
            let config = LeviConfig {
                radius: *radius,
                samples: *samples,
                tol: *tol,
                seed: *seed,
                threads,
            };
            let sample = levi_sample(&r, &config)?;
            let mut nf = to_normal_form(&r, *degree)?;
            nf.certify(&sample);
            let l1 = lemma1_check(&nf);
            Ok(report::envelope(
                "psc",
                json!({
                    "surface": input,
                    "radius": radius,
                    "samples": samples,
                    "tol": tol,
                    "seed": seed,
                    "degree": degree,
                }),
                json!({
                    "levi": levi(&sample),
                    "kappa": nf.kappa.iter().map(rational).collect::<Vec<_>>(),
                    "lemma1": lemma1(&l1),
                    "psc_status": nf.psc.to_string(),
                }),
            ))
        }
        Command::PscTangency {
            surface,
            curve,
            truncation,
        } => {
            let (r, input) = load_surface(&surface.surface)?;
            let (r, jet) = align(&r, &load_curve(curve)?)?;
            let t = tangency_psc_test(&r, &jet, *truncation)?;
            Ok(report::envelope(
                "psc-tangency",
                json!({ "surface": input, "curve": curve, "truncation": truncation }),
                json!({
                    "applicable": t.applicable,
                    "order": order(t.order),
                    "even": t.even,
                    "leading_diag": gaussian(&t.leading_diag),
                    "verdict": t.verdict.to_string(),
                }),
            ))
        }
        Command::VerifyPaper { probes, seed } => {
            let checks = paper::run(*probes, *seed, threads)?;
            let all = checks.iter().all(|c| c.pass);
            let v = report::envelope(
                "verify-paper",
                json!({ "probes": probes, "seed": seed }),
                json!({
                    "checks": checks.iter().map(paper::Check::to_json).collect::<Vec<_>>(),
                    "passed": all,
                }),
            );
            if all {
                Ok(v)
            } else {
                Err(Failure::Verification(v))
            }
        }
    }
}

fn expand_cmd(a: u32, b: u32, mult: Option<u32>, reduce_mv: bool) -> CmdResult {
    if reduce_mv && mult.is_none() {
        return Err(Failure::Usage("--reduce-mv needs --mult".into()));
    }
    let m = mult.unwrap_or(1);
    if m == 0 {
        return Err(Failure::Usage("--mult must be positive".into()));
    }
    let mut e = expand(a * m, b * m)?;
    if reduce_mv {
        e = e.reduce_mod_mv(m);
    }
    let named = match mult {
        Some(m) => all_constants(m)?,
        None => Vec::new(),
    };
    let terms: Vec<Value> = e
        .terms()
        .map(|t| {
            let constant = named.iter().find(|c| c.derivative == (a, b) && c.shape == t.shape);
            json!({
                "shape": report::shape(&t.shape),
                "oracle_coefficient": rational(&t.coefficient),
                "paper_coefficient": constant.map(|c| rational(&c.paper_value)),
                "constant": constant.map(|c| report::constant(c)["name"].clone()),
            })
        })
        .collect();
    Ok(report::envelope(
        "expand",
        json!({ "a": a, "b": b, "mult": mult, "reduce_mv": reduce_mv }),
        json!({
            "derivative": [a * m, b * m],
            "display": e.to_string(),
            "terms": terms,
            "constants_comparison": named.iter().map(report::constant).collect::<Vec<_>>(),
        }),
    ))
}

fn lemma1(l: &jetcontact::normal::Lemma1Check) -> Value {
    json!({
        "consistent": l.consistent,
        "offending_triple": l.offending_triple.map(|(j, k, m)| json!([j, k, m])),
    })
}

fn levi(s: &jetcontact::normal::LeviSample) -> Value {
    json!({
        "min_eigenvalue": s.min_eigenvalue,
        "witness_point": s.witness_point.as_ref().map(|q| q.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>()),
        "verdict": s.verdict.to_string(),
        "located": s.located,
        "failures": s.failures,
        "seed": s.seed,
        "eigenvalue_kind": "float",
    })
}

fn normal_form(nf: &NormalForm) -> Value {
    let lambda: serde_json::Map<String, Value> = nf
        .lambda
        .iter()
        .map(|(&(j, k, l), c)| (format!("{j},{k},{l}"), gaussian(c)))
        .collect();
    let (pos, neg, zero) = nf.levi_signature();
    json!({
        "degree": nf.degree,
        "kappa": nf.kappa.iter().map(rational).collect::<Vec<_>>(),
        "lambda": lambda,
        "remainder": format_polynomial(nf.remainder.as_poly()),
        "remainder_admissible": nf.remainder_admissible(),
        "multiplier": format_polynomial(&nf.multiplier),
        "transform": {
            "identity": nf.transform.is_identity(),
            "forward": nf.transform.forward().iter().map(format_polynomial).collect::<Vec<_>>(),
            "inverse": nf.transform.inverse().iter().map(format_polynomial).collect::<Vec<_>>(),
        },
        "signature": { "positive": pos, "negative": neg, "zero": zero },
        "psc_status": nf.psc.to_string(),
        "lemma1": lemma1(&lemma1_check(nf)),
    })
}
