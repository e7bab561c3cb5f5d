use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpencil::algebra::Fq;
use qpencil::bench;
use qpencil::gen::{generate, parse_blocks, Plant};
use qpencil::io::{emit_descriptor, emit_pencil, emit_solution, parse_pencil, parse_solution, Solution};
use qpencil::ip2s::ip2s_solve;
use qpencil::pencil::{verify_ip1s, verify_ip2s, Pencil};
use qpencil::regular::{canonicalize, ip1s_solve};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exit status for a proven non-equivalence or a rejected solution.
const REJECTED: u8 = 2;

#[derive(Parser)]
#[command(name = "qpencil", version, about = "Congruence of symmetric pencils over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    /// Field order, or the characteristic when --degree is larger than one.
    #[arg(long, default_value_t = 101)]
    q: u64,
    #[arg(long)]
    degree: Option<usize>,
    /// Defining polynomial coefficients, constant first, comma separated.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random or planted instance.
    Gen {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with = "plant_ip2s")]
        plant_ip1s: bool,
        #[arg(long)]
        plant_ip2s: bool,
        /// Block list such as "K1, L(x^2+1,1,D), Linf(2,1)".
        #[arg(long)]
        blocks: Option<String>,
        /// Output directory for A.json, B.json and secret.json.
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print the canonical descriptor of a pencil.
    Canon {
        pencil: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Find S with B = S^T A S.
    Ip1s {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Find S and a homography with B = S^T (A twisted) S.
    Ip2s {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Check a solution file against two pencils.
    Verify { a: PathBuf, b: PathBuf, solution: PathBuf },
    /// Time canonicalization for growing n and fit a log-log slope.
    Bench {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

enum Failure {
    Rejected(String),
    Usage(String),
}

impl From<qpencil::Error> for Failure {
    fn from(e: qpencil::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(REJECTED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn build_field(a: &FieldArgs) -> Result<Fq, Failure> {
    let base = match a.degree {
        Some(e) if e > 1 => Fq::with_degree(a.q, e)?,
        _ => Fq::with_order(a.q)?,
    };
    if let Some(e) = a.degree {
        if e != base.degree() {
            return Err(Failure::Usage(format!("--degree {e} does not match field of order {}", a.q)));
        }
    }
    match &a.modulus {
        None => Ok(base),
        Some(m) if m.len() == base.degree() + 1 => Ok(Fq::new(base.p(), m)?),
        Some(_) => Err(Failure::Usage("modulus length must be degree + 1".into())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn output(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Pencil, Failure> {
    Ok(parse_pencil(&read(path)?)?)
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Gen { field, n, seed, plant_ip1s, plant_ip2s, blocks, out } => {
            let f = build_field(&field)?;
            let blocks = match blocks {
                Some(s) => parse_blocks(&f, &s)?,
                None => Vec::new(),
            };
            let plant = match (plant_ip1s, plant_ip2s) {
                (true, _) => Plant::Ip1s,
                (_, true) => Plant::Ip2s,
                _ => Plant::None,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = generate(&f, n, &blocks, plant, &mut rng)?;
            let Some(dir) = out else {
                if inst.b.is_some() {
                    return Err(Failure::Usage("planted instances need -o <dir>".into()));
                }
                println!("{}", emit_pencil(&inst.a));
                return Ok(());
            };
            fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            write(&dir.join("A.json"), &emit_pencil(&inst.a))?;
            if let (Some(b), Some(s)) = (&inst.b, &inst.s) {
                write(&dir.join("B.json"), &emit_pencil(b))?;
                let sol = Solution { s: s.matrix().clone(), gamma: inst.gamma.clone() };
                write(&dir.join("secret.json"), &emit_solution(&f, &sol))?;
            }
            Ok(())
        }
        Cmd::Canon { pencil, out } => {
            let p = load(&pencil)?;
            let d = canonicalize(&p)?;
            output(&out, &emit_descriptor(p.field(), &d))
        }
        Cmd::Ip1s { a, b, out } => {
            let (a, b) = (load(&a)?, load(&b)?);
            match ip1s_solve(&a, &b)? {
                Some(s) => output(&out, &emit_solution(a.field(), &Solution { s: s.matrix().clone(), gamma: None })),
                None => Err(Failure::Rejected("not congruent".into())),
            }
        }
        Cmd::Ip2s { a, b, out } => {
            let (a, b) = (load(&a)?, load(&b)?);
            match ip2s_solve(&a, &b)? {
                Some((s, g)) => output(&out, &emit_solution(a.field(), &Solution { s: s.matrix().clone(), gamma: Some(g) })),
                None => Err(Failure::Rejected("not equivalent under any homography".into())),
            }
        }
        Cmd::Verify { a, b, solution } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let sol = parse_solution(a.field(), a.dim(), &read(&solution)?)
                .map_err(|e| Failure::Rejected(format!("unreadable solution: {e}")))?;
            let ok = match &sol.gamma {
                None => verify_ip1s(&a, &b, &sol.s)?,
                Some(g) => verify_ip2s(&a, &b, &sol.s, g)?,
            };
            if ok {
                println!("ok");
                Ok(())
            } else {
                Err(Failure::Rejected("solution does not verify".into()))
            }
        }
        Cmd::Bench { field, seed, sizes, reps } => {
            if sizes.len() < 2 || reps == 0 {
                return Err(Failure::Usage("need at least two sizes and one repetition".into()));
            }
            let f = build_field(&field)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (label, singular) in [("regular", false), ("singular", true)] {
                let samples = bench::scaling(&f, &sizes, singular, reps, &mut rng)?;
                for (n, t) in &samples {
                    println!("{label} n={n} median={:.6}s", t.as_secs_f64());
                }
                println!("{label} slope={:.3}", bench::loglog_slope(&samples));
            }
            Ok(())
        }
    }
}
