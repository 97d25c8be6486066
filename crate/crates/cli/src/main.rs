mod batch;
mod error;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nondistill::certifier::{
    certify, check_certificate, recheck_math, Certificate, CertificationProblem, CertifyOptions,
    VerifyError, DEFAULT_MAX_DM,
};
use nondistill::families::{deterministic_family, random_filter_family};
use nondistill::measures::{estimate_lambda_lower, secret_bit_fraction, MeasureError, SearchOptions};
use nondistill::rational::{self, Rational};
use nondistill::{JointDist, MapFamily};

use error::CliError;

#[derive(Parser)]
#[command(name = "nondistill", version, about = "Exact certificates of non-distillability")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the secret bit fraction of a distribution.
    Lambda { dist: PathBuf },
    /// Search for a lower bound on the maximal extractable secret bit fraction.
    LambdaMax {
        dist: PathBuf,
        /// Candidate pairs to visit (the noise baseline counts as one).
        #[arg(long)]
        budget: Option<usize>,
        /// Refine the best deterministic pair by alternating optimization.
        #[arg(long)]
        refine: bool,
        /// Write the witness JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the activation LP and write a certificate.
    Certify {
        g: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "1/2")]
        lambda0: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DM)]
        max_dm: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate against (g, family, lambda0).
    Verify {
        g: PathBuf,
        cert: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
        /// Defaults to the certificate's own value.
        #[arg(long)]
        lambda0: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_DM)]
        max_dm: usize,
    },
    /// Run the certifications listed in a JSON manifest.
    Batch {
        manifest: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DM)]
        max_dm: usize,
    },
    /// Write a generated family as JSON.
    GenFamily {
        #[command(flatten)]
        family: FamilyArgs,
        /// Copy alphabet size on Alice's side.
        #[arg(long, default_value_t = 1)]
        a_copy: usize,
        #[arg(long, default_value_t = 1)]
        b_copy: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, serde::Deserialize, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Deterministic,
    Random,
}

#[derive(Args, Clone, Debug)]
pub struct FamilyArgs {
    /// Family JSON file.
    #[arg(long, conflicts_with = "gen")]
    family: Option<PathBuf>,
    /// Generate the family instead of reading it.
    #[arg(long, value_enum)]
    gen: Option<Generator>,
    /// Number of pairs.
    #[arg(long = "M", default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Denominator bound of random coefficients.
    #[arg(long, default_value_t = 4)]
    cap: u32,
}

/// How a run obtains its family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilySpec {
    File(PathBuf),
    Deterministic { m: usize },
    Random { m: usize, seed: u64, cap: u32 },
}

impl FamilySpec {
    fn from_args(args: &FamilyArgs) -> Result<FamilySpec, CliError> {
        match (&args.family, args.gen) {
            (Some(p), None) => Ok(FamilySpec::File(p.clone())),
            (None, Some(g)) => Ok(FamilySpec::generated(g, args.m, args.seed, args.cap)),
            (None, None) => Err(CliError::input("give either --family <path> or --gen <kind>")),
            (Some(_), Some(_)) => Err(CliError::input("--family and --gen are exclusive")),
        }
    }

    pub fn generated(kind: Generator, m: usize, seed: u64, cap: u32) -> FamilySpec {
        match kind {
            Generator::Deterministic => FamilySpec::Deterministic { m },
            Generator::Random => FamilySpec::Random { m, seed, cap },
        }
    }

    pub fn resolve(&self, a_copy: usize, b_copy: usize) -> Result<MapFamily, CliError> {
        Ok(match self {
            FamilySpec::File(p) => {
                MapFamily::from_json(&read(p)?).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?
            }
            FamilySpec::Deterministic { m } => deterministic_family(a_copy, b_copy, *m),
            FamilySpec::Random { m, seed, cap } => random_filter_family(a_copy, b_copy, *m, *seed, *cap),
        })
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::File(p) => p.display().to_string(),
            FamilySpec::Deterministic { m } => format!("deterministic:M={m}"),
            FamilySpec::Random { m, seed, cap } => format!("random:M={m},seed={seed},cap={cap}"),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_dist(path: &Path) -> Result<JointDist, CliError> {
    JointDist::from_json(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Parses `λ0` exactly and checks it lies in `[1/2, 1)`.
pub fn parse_lambda0(text: &str) -> Result<Rational, CliError> {
    let l0 = rational::parse(text).map_err(|e| CliError::input(format!("lambda0: {e}")))?;
    if l0 < rational::half() || l0 >= rational::one() {
        return Err(CliError::input(format!("lambda0 {} must lie in [1/2, 1)", rational::format(&l0))));
    }
    Ok(l0)
}

pub fn copies(g: &JointDist) -> Result<(usize, usize), CliError> {
    let size = |l: &str| g.axis(l).map(|a| a.size).map_err(|e| CliError::input(e.to_string()));
    Ok((size("A")?, size("B")?))
}

fn summary(cert: &Certificate) -> String {
    match cert.verdict {
        nondistill::Verdict::Undistillable => "UNDISTILLABLE".into(),
        nondistill::Verdict::Inconclusive => {
            format!("INCONCLUSIVE optimum={}", rational::format(&cert.optimum))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::internal(e.to_string()))?;
    }
    match cli.command {
        Command::Lambda { dist } => {
            let p = load_dist(&dist)?;
            let lam = secret_bit_fraction(&p).map_err(|e| CliError::input(e.to_string()))?;
            println!("{}", rational::format(&lam));
        }
        Command::LambdaMax { dist, budget, refine, out } => {
            let p = load_dist(&dist)?;
            let opts = SearchOptions { budget, refine, ..SearchOptions::default() };
            match estimate_lambda_lower(&p, &opts) {
                Err(MeasureError::EmptySearch) => println!("no witness searched (budget 0)"),
                Err(e) => return Err(CliError::input(e.to_string())),
                Ok(est) => {
                    let w = &est.witness;
                    let status = if est.exhausted { "budget exhausted" } else { "search complete" };
                    println!("lower bound {}", rational::format(&w.value));
                    println!("candidates visited {} ({status})", est.visited);
                    println!("map_a {}", serde_json::to_string(&w.map_a.to_wire()).expect("map serializes"));
                    println!("map_b {}", serde_json::to_string(&w.map_b.to_wire()).expect("map serializes"));
                    if let Some(out) = out {
                        write(&out, &w.to_json())?;
                    }
                }
            }
        }
        Command::Certify { g, family, lambda0, max_dm, out } => {
            let l0 = parse_lambda0(&lambda0)?;
            let gd = load_dist(&g)?;
            let (ca, cb) = copies(&gd)?;
            let fam = FamilySpec::from_args(&family)?.resolve(ca, cb)?;
            let opts = CertifyOptions { max_dm, ..CertifyOptions::default() };
            let cert = certify(&gd, &fam, &l0, &opts)?;
            if let Some(out) = out {
                write(&out, &cert.to_json())?;
            }
            println!("{}", summary(&cert));
        }
        Command::Verify { g, cert, family, lambda0, max_dm } => {
            let gd = load_dist(&g)?;
            let (ca, cb) = copies(&gd)?;
            let fam = FamilySpec::from_args(&family)?.resolve(ca, cb)?;
            let c = Certificate::from_json(&read(&cert)?)
                .map_err(|e| CliError::input(format!("{}: {e}", cert.display())))?;
            let l0 = match lambda0 {
                Some(t) => parse_lambda0(&t)?,
                None => c.lambda0.clone(),
            };
            let opts = CertifyOptions { max_dm, ..CertifyOptions::default() };
            match check_certificate(&gd, &fam, &l0, &c, &opts) {
                Ok(()) => println!("VALID {}", summary(&c)),
                Err(VerifyError::Digest) => {
                    // Name the violated row when the edit also breaks the mathematics.
                    let problem = CertificationProblem::new(&gd, &fam, &l0)?;
                    let err = recheck_math(&problem, &c, &opts).err().unwrap_or(VerifyError::Digest);
                    return Err(err.into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Batch { manifest, max_dm } => {
            let report = batch::run(&manifest, max_dm)?;
            print!("{}", report.table);
            eprint!("{}", report.timings);
            if let Some(code) = report.failure {
                return Err(CliError::silent(code));
            }
        }
        Command::GenFamily { family, a_copy, b_copy, out } => {
            let spec = match (&family.family, family.gen) {
                (None, Some(kind)) => FamilySpec::generated(kind, family.m, family.seed, family.cap),
                _ => return Err(CliError::input("gen-family needs --gen <kind>")),
            };
            let text = spec.resolve(a_copy.max(1), b_copy.max(1))?.to_json_pretty();
            match out {
                Some(path) => write(&path, &text)?,
                None => println!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("{}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
