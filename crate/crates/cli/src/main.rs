use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use braidcat::algebra::{AlgebraKind, AlgebraSpec};
use braidcat::braid::{fixture, geometric_rep, BraidOracle, BraidWord, GroupId, OracleStatus};
use braidcat::complex::{module_letter, ProjComplex};
use braidcat::minimize::minimize;
use braidcat::scalar::{Field, Rational, F1000003, F2147483647, F32003, F65521, SUPPORTED_PRIMES};
use braidcat::suite::{run_suite, SuiteName, SuiteOptions, DEFAULT_MAX_N};
use braidcat::twist::{FunctorWord, TwistEngine, DEFAULT_MAX_SUMMANDS};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const MAX_N_VAR: &str = "BRAIDCAT_MAX_N";

#[derive(Parser)]
#[command(name = "braidcat", version, about = "Exact checks of braid group actions on homotopy categories")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// `rational` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of summands any intermediate complex may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUMMANDS)]
    max_summands: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "n")]
        n: usize,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Report every elapsed_ms as 0.
        #[arg(long)]
        no_timing: bool,
    },
    /// Apply a functor word to a projective or a complex and print the minimal image.
    Act {
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        #[arg(long = "n")]
        n: usize,
        /// Letters F_i, R_i, H_i with optional `^-1`, applied right to left.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// `P3`, `Q2`, a JSON complex file, or `-` for standard input.
        #[arg(long)]
        on: String,
    },
    /// Compare two braid words through the images of all projectives.
    Wordeq {
        /// Kn, An, Affine or Bn.
        #[arg(long)]
        group: String,
        #[arg(long = "n")]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        w1: String,
        #[arg(allow_hyphen_values = true)]
        w2: String,
    },
    /// Evaluate a B(K_n) word in the geometric representation.
    Rep {
        #[arg(long = "n")]
        n: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "fixture", required_unless_present = "fixture")]
        word: Option<String>,
        /// Named word, e.g. `eta-witness`.
        #[arg(long)]
        fixture: Option<String>,
        /// Basis label `v4` or a comma-separated integer vector.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraArg {
    Nakayama,
    Zigzag,
}

impl From<AlgebraArg> for AlgebraKind {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::Nakayama => AlgebraKind::Nakayama,
            AlgebraArg::Zigzag => AlgebraKind::Zigzag,
        }
    }
}

type CliResult = Result<ExitCode, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = max_n().and_then(|max_n| match parse_field(&cli.common.field)? {
        0 => run::<Rational>(&cli, max_n),
        32_003 => run::<F32003>(&cli, max_n),
        65_521 => run::<F65521>(&cli, max_n),
        1_000_003 => run::<F1000003>(&cli, max_n),
        2_147_483_647 => run::<F2147483647>(&cli, max_n),
        p => Err(format!("unsupported prime {p}")),
    });
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn max_n() -> Result<usize, String> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{MAX_N_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

/// `0` stands for the rationals.
fn parse_field(text: &str) -> Result<u64, String> {
    if text == "rational" {
        return Ok(0);
    }
    let p = text
        .strip_prefix("fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| format!("--field expects `rational` or `fp:<prime>`, got {text:?}"))?;
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(p)
    } else {
        Err(format!("prime {p} is not available; choose one of {SUPPORTED_PRIMES:?}"))
    }
}

fn check_rank(n: usize, max_n: usize) -> Result<(), String> {
    if (2..=max_n).contains(&n) {
        Ok(())
    } else {
        Err(format!("rank {n} outside 2..={max_n} (raise with {MAX_N_VAR})"))
    }
}

fn run<F: Field>(cli: &Cli, max_n: usize) -> CliResult {
    let c = &cli.common;
    match &cli.command {
        Command::Verify { suite, n, jobs, no_timing } => {
            let name = SuiteName::parse(suite).ok_or_else(|| format!("unknown suite {suite:?}"))?;
            let opts = SuiteOptions {
                n: *n,
                seed: c.seed,
                jobs: *jobs,
                max_n,
                max_summands: c.max_summands,
                timing: !no_timing,
            };
            let report = run_suite::<F>(name, &opts).map_err(|e| e.to_string())?;
            match c.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json_string()),
            }
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Act { algebra, n, word, on } => {
            check_rank(*n, max_n)?;
            act::<F>((*algebra).into(), *n, word, on, c)
        }
        Command::Wordeq { group, n, w1, w2 } => {
            check_rank(*n, max_n)?;
            let group = GroupId::parse(group).ok_or_else(|| format!("unknown group {group:?}; use Kn, An, Affine or Bn"))?;
            let w1 = BraidWord::parse(group, *n, w1).map_err(|e| format!("first word: {e}"))?;
            let w2 = BraidWord::parse(group, *n, w2).map_err(|e| format!("second word: {e}"))?;
            let oracle = BraidOracle::<F>::with_cap(*n, c.max_summands).map_err(|e| e.to_string())?;
            let v = oracle.compare(&w1, &w2, c.seed).map_err(|e| e.to_string())?;
            let letter = module_letter(braidcat::braid::action_algebra(group));
            match c.format {
                Format::Json => {
                    let mut out = serde_json::to_value(&v).expect("verdict serializes");
                    out["evidence"] = json!(v.evidence_note());
                    out["left_word"] = json!(w1.to_string());
                    out["right_word"] = json!(w2.to_string());
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                }
                Format::Text => {
                    println!("{:?}", v.status);
                    if v.status == OracleStatus::ProvenDistinct {
                        let vertex = v.vertex.expect("distinct verdict names a vertex");
                        let k = vertex - 1;
                        println!("distinguishing projective: {letter}{vertex}");
                        if let Some(cert) = &v.certificate {
                            println!("  degree {}: {:?} vs {:?}", cert.degree, cert.left, cert.right);
                        }
                        println!("  {w1}: {}", v.left_images[k]);
                        println!("  {w2}: {}", v.right_images[k]);
                    }
                    println!("note: {}", v.evidence_note());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rep { n, word, fixture: name, vector } => {
            check_rank(*n, max_n)?;
            let w = match (word, name) {
                (Some(text), _) => BraidWord::parse(GroupId::Kn, *n, text).map_err(|e| e.to_string())?,
                (None, Some(name)) => fixture(name, *n)
                    .ok_or_else(|| format!("unknown fixture {name:?}; available: eta-witness"))?
                    .map_err(|e| e.to_string())?,
                (None, None) => unreachable!("clap requires one of --word and --fixture"),
            };
            let v = parse_vector(vector, *n)?;
            let image = geometric_rep(&w).map_err(|e| e.to_string())?.apply(&v);
            match c.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "n": n, "word": w.to_string(), "vector": v, "image": image }))
                        .expect("json")
                ),
                Format::Text => {
                    let parts: Vec<String> = image.iter().map(i64::to_string).collect();
                    println!("({})", parts.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_vector(text: &str, n: usize) -> Result<Vec<i64>, String> {
    if let Some(k) = text.strip_prefix('v') {
        let k: usize = k.parse().map_err(|_| format!("bad basis label {text:?}"))?;
        if k == 0 || k > n {
            return Err(format!("basis label {text:?} out of range v1..v{n}"));
        }
        let mut v = vec![0; n];
        v[k - 1] = 1;
        return Ok(v);
    }
    let v: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad vector entry {s:?}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("vector has {} entries, expected {n}", v.len()));
    }
    Ok(v)
}

fn act<F: Field>(kind: AlgebraKind, n: usize, word: &str, on: &str, c: &Common) -> CliResult {
    let word = FunctorWord::parse(word, n).map_err(|e| format!("word: {e}"))?;
    if let Some(side) = word.side() {
        if side != kind {
            return Err(format!("word acts on the {side} algebra, not on {kind}"));
        }
    }
    let spec = AlgebraSpec::build(kind, n).map_err(|e| e.to_string())?;
    let engine = TwistEngine::<F>::with_cap(std::sync::Arc::new(spec), c.max_summands);
    let letter = module_letter(kind);
    let target = match on.strip_prefix(letter).and_then(|v| v.parse::<usize>().ok()) {
        Some(v) => engine.stalk(v).map_err(|e| e.to_string())?,
        None if is_projective_label(on) => {
            return Err(format!("{on:?} names a projective of the other algebra; {kind} projectives are {letter}1..{letter}{n}"))
        }
        None => {
            let text = if on == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
                s
            } else if Path::new(on).exists() {
                std::fs::read_to_string(on).map_err(|e| format!("{on}: {e}"))?
            } else {
                return Err(format!("--on expects {letter}<k>, a JSON complex file or `-`; no file {on:?}"));
            };
            let x = ProjComplex::<F>::from_json_str(&text).map_err(|e| e.to_string())?;
            if x.spec().kind() != kind || x.spec().n() != n {
                return Err(format!("complex lives over {}, not over {kind} with n = {n}", x.spec().name()));
            }
            x
        }
    };
    let image = minimize(&engine.apply(&word, &target).map_err(|e| e.to_string())?);
    match c.format {
        Format::Json => println!("{}", image.to_json_string()),
        Format::Text => print!("{}", aligned(&image)),
    }
    Ok(ExitCode::SUCCESS)
}

fn is_projective_label(text: &str) -> bool {
    let mut chars = text.chars();
    matches!(chars.next(), Some('P' | 'Q')) && !chars.as_str().is_empty() && chars.as_str().chars().all(|c| c.is_ascii_digit())
}

/// One row per degree, highest first, each followed by its outgoing differential.
fn aligned<F: Field>(x: &ProjComplex<F>) -> String {
    let mut out = format!("{}\n", x.spec().name());
    if x.is_zero() {
        out.push_str("0\n");
        return out;
    }
    let letter = module_letter(x.spec().kind());
    let (lo, hi) = x.degree_range().expect("nonzero complex");
    let width = lo.to_string().len().max(hi.to_string().len());
    for k in (lo..=hi).rev() {
        let names: Vec<String> = x.term(k).summands.iter().map(|v| format!("{letter}{v}")).collect();
        let body = if names.is_empty() { "0".to_string() } else { names.join(" + ") };
        out.push_str(&format!("deg {k:>width$}  {body}\n"));
        if k > lo {
            let d = x.diff(k);
            let shown = if d.is_zero() { "0".to_string() } else { d.display(x.spec()) };
            out.push_str(&format!("{:>w$}  d: {shown}\n", "", w = width + 4));
        }
    }
    out
}
