use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use superverma::report::{self, Check, VerifyRequest};
use superverma::root_data::{AlgebraData, CaseId, Family, Weight};
use superverma::{Error, Scalar, Q};

#[derive(Parser)]
#[command(name = "superverma", version, about = "Exact singular-vector verification in Verma modules over basic Lie superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the candidate vectors on a parameter grid and test them.
    Verify(VerifyArgs),
    /// Propagate a Shapovalov element along a W′-orbit.
    Orbit(OrbitArgs),
    /// Run the invariant suite at the smallest parameters.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CaseArgs {
    /// B-I, B-II, D-I, D-II, F31 or G3.
    #[arg(long = "case")]
    family: Family,
    /// Number of δs (grid syntax: `2`, `1..3`, `1,3`).
    #[arg(long)]
    m: Option<String>,
    /// Number of εs (grid syntax).
    #[arg(long)]
    n: Option<String>,
}

impl CaseArgs {
    fn cases(&self) -> Result<Vec<CaseId>, Error> {
        if !self.family.has_rank_params() {
            return Ok(vec![CaseId::new(self.family, 0, 0)?]);
        }
        let need = |v: &Option<String>, name: &str| {
            v.as_deref()
                .ok_or_else(|| Error::InvalidParams(format!("{} needs --{name}", self.family)))
                .and_then(report::parse_grid)
        };
        let (ms, ns) = (need(&self.m, "m")?, need(&self.n, "n")?);
        let mut out = Vec::new();
        for &m in &ms {
            for &n in &ns {
                out.push(CaseId::new(self.family, m as usize, n as usize)?);
            }
        }
        Ok(out)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// N = ⟨λ, h_γ⟩ (grid syntax).
    #[arg(long = "N")]
    big_n: Option<String>,
    /// M with N = 2M+1 (grid syntax).
    #[arg(long = "M", conflicts_with = "big_n")]
    big_m: Option<String>,
    /// Explicit λ as comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Seeds for λ and sampling (grid syntax).
    #[arg(long, default_value = "0")]
    seed: String,
    #[arg(long, default_value = "singular")]
    check: Vec<Check>,
    /// Newline-delimited JSON.
    #[arg(long)]
    json: bool,
    /// Add elapsed milliseconds (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long = "C", default_value_t = 1)]
    c: u32,
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Target index `i`, or pair `i,j` for D-II.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Restrict to one family.
    #[arg(long = "case")]
    family: Option<Family>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: String) {
    if json {
        println!("{}", serde_json::to_string(value).expect("report serializes"));
    } else {
        println!("{text}");
    }
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let cases = args.case.cases()?;
    let seeds = report::parse_grid(&args.seed)?;
    let explicit: Option<Vec<Q>> = match &args.lambda {
        Some(s) => Some(
            s.split(',')
                .map(|x| Q::parse_rational(x).ok_or_else(|| Error::Parse(format!("bad rational `{x}`"))))
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    let ns: Option<Vec<u64>> = match (&args.big_n, &args.big_m) {
        (Some(n), _) => Some(report::parse_grid(n)?),
        (None, Some(m)) => Some(report::parse_grid(m)?.into_iter().map(|m| 2 * m + 1).collect()),
        (None, None) => None,
    };
    let mut reqs = Vec::new();
    for case in cases {
        let lambda = match &explicit {
            Some(coords) => {
                let alg = AlgebraData::<Q>::build(case)?;
                if coords.len() != alg.rank() {
                    return Err(Error::InvalidParams(format!("--lambda needs {} coordinates for {case}", alg.rank())).into());
                }
                Some((Weight::new(coords.clone()), alg))
            }
            None => None,
        };
        let n_values: Vec<u64> = match (&ns, &lambda) {
            (Some(ns), _) => ns.clone(),
            (None, Some((l, alg))) => {
                let pairing = alg.coroot_pairing(l, &alg.gamma.weight)?;
                match pairing.to_int() {
                    Some(k) if k > 0 => vec![k as u64],
                    _ => return Err(Error::InvalidParams(format!("⟨λ, h_γ⟩ = {} is not a positive integer", pairing.render())).into()),
                }
            }
            (None, None) => return Err(Failure::Usage("give --N, --M or --lambda".into())),
        };
        for &n_value in &n_values {
            for &seed in &seeds {
                reqs.push(VerifyRequest {
                    case,
                    n_value: n_value as u32,
                    lambda: lambda.as_ref().map(|(l, _)| l.clone()),
                    seed,
                    checks: args.check.clone(),
                    timing: args.timing,
                });
            }
        }
    }
    let results = report::verify_grid(&reqs);
    let mut failed = false;
    for r in results {
        let r = r?;
        failed |= !r.passed();
        emit(args.json, &r, r.to_text());
    }
    if failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn orbit(args: OrbitArgs) -> Result<(), Failure> {
    if matches!(args.case.family, Family::F31 | Family::G3) {
        return Err(Failure::Usage(format!(
            "{}: no orbit propagation; γ's W′-orbit is covered by `verify`",
            args.case.family
        )));
    }
    let target: Vec<usize> = args
        .target
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad target `{t}`"))))
        .collect::<Result<_, _>>()?;
    let cases = args.case.cases()?;
    let results: Vec<_> = cases
        .par_iter()
        .map(|&c| report::run_orbit(c, args.c, args.p, &target, args.seed, args.timing))
        .collect();
    let mut failed = false;
    for r in results {
        let r = r?;
        failed |= !r.passed;
        emit(args.json, &r, r.to_text());
    }
    if failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn selftest(args: SelftestArgs) -> Result<(), Failure> {
    let families: Vec<Family> = match args.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let results: Vec<_> = families
        .par_iter()
        .map(|&f| report::selftest_case(report::smallest_case(f), args.seed, args.inject_fault))
        .collect();
    let mut first_failure = None;
    for lines in results {
        for line in lines? {
            if !line.passed && first_failure.is_none() {
                first_failure = Some(line.clone());
            }
            emit(args.json, &line, line.to_string());
        }
    }
    match first_failure {
        None => Ok(()),
        Some(l) => {
            eprintln!("selftest failed: check \"{}\" on {}: {}", l.check, l.case, l.detail);
            Err(Failure::Check)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Orbit(a) => orbit(a),
        Command::Selftest(a) => selftest(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
