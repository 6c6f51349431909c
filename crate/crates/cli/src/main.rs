use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use primesum::arith::{cache, FnKind, SieveConfig};
use primesum::dioph::{
    admissible_window, approx_quality, continued_fraction, major_arcs, parse_ratio, realize_alpha,
    AlphaSource, AlphaSpec,
};
use primesum::experiments::{self, ExperimentConfig};
use primesum::expsum::{expsum_full, prefix_sups, window_l2_average, PhaseContext, DEFAULT_RESYNC};
use primesum::verify::{self, CheckParams};
use primesum::Error;

#[derive(Parser)]
#[command(
    name = "primesum",
    version,
    about = "Short-interval exponential sums over primes and divisors"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve an arithmetic function over [lo, hi].
    Sieve {
        #[arg(long, default_value = "von-mangoldt")]
        kind: FnKind,
        #[arg(long, default_value_t = 1)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        /// Print every value as `n,value`.
        #[arg(long)]
        print: bool,
        /// Directory for the binary table cache.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// F(x; α) and max_{n<=x} |F(n; α)|.
    Expsum {
        #[command(flatten)]
        target: Target,
    },
    /// The L² window average S.
    WindowAvg {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = DEFAULT_RESYNC)]
        resync: u64,
    },
    /// Continued fraction, R(x, α) and convergent windows.
    Dioph {
        #[arg(long)]
        alpha: AlphaSource,
        /// Number of partial quotients.
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Also report R(x, α) at this x.
        #[arg(long)]
        x: Option<u64>,
        /// Also report the admissible window for this ε' (e.g. 1/24).
        #[arg(long)]
        eps_prime: Option<String>,
        /// Smallest convergent denominator for the window.
        #[arg(long, default_value_t = 12)]
        s_min: u64,
        #[arg(long, default_value_t = 1)]
        floor: u64,
    },
    /// The set of a/q with q <= Q and |α - a/q| <= 1/(6y).
    MajorArcs {
        #[arg(long)]
        alpha: AlphaSource,
        #[arg(long = "Q", alias = "q")]
        q_max: u64,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = 1 << 20)]
        floor: u64,
    },
    /// Run a named check (`verify list` shows them).
    Verify {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Append reports as JSON lines to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment (`experiment list` shows them).
    Experiment {
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        resync: Option<u64>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long, default_value = "von-mangoldt")]
    kind: FnKind,
    #[arg(long)]
    alpha: AlphaSource,
    #[arg(long)]
    x: u64,
    /// Minimum realization denominator (default x²).
    #[arg(long)]
    floor: Option<u64>,
}

impl Target {
    fn alpha(&self) -> primesum::Result<AlphaSpec> {
        realize_alpha(
            self.alpha.clone(),
            self.floor.unwrap_or(self.x.saturating_mul(self.x)),
        )
    }
}

enum Outcome {
    Ok,
    Failed,
}

fn print_json(v: &serde_json::Value) {
    println!("{v}");
}

fn run(cli: Cli) -> primesum::Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Sieve {
            kind,
            lo,
            hi,
            print,
            cache_dir,
        } => {
            let table = match cache_dir {
                Some(dir) => cache::load_or_sieve(&dir, &SieveConfig::default(), kind, lo, hi)?,
                None => SieveConfig::default().sieve(kind, lo, hi)?,
            };
            if print {
                let mut out = std::io::stdout().lock();
                for (i, v) in table.values().iter().enumerate() {
                    writeln!(out, "{},{v}", lo + i as u64)?;
                }
            } else {
                print_json(&json!({
                    "kind": kind.name(),
                    "lo": lo,
                    "hi": hi,
                    "sum": table.values().iter().sum::<f64>(),
                    "nonzero": table.nonzero(lo, hi).count(),
                }));
            }
        }
        Command::Expsum { target } => {
            let table = SieveConfig::default().sieve(target.kind, 1, target.x)?;
            let alpha = target.alpha()?;
            let ctx = PhaseContext::new(&alpha);
            let z = expsum_full(&table, &ctx, target.x)?;
            let (sup, argmax) = prefix_sups(&table, &ctx, target.x)?;
            print_json(&json!({
                "kind": target.kind.name(),
                "alpha": alpha.to_string(),
                "x": target.x,
                "re": z.re,
                "im": z.im,
                "abs": z.norm(),
                "sup_prefix": sup,
                "argmax": argmax,
            }));
        }
        Command::WindowAvg { target, y, resync } => {
            let table = SieveConfig::default().sieve(target.kind, 1, target.x)?;
            let alpha = target.alpha()?;
            let w = window_l2_average(&table, &PhaseContext::new(&alpha), target.x, y, resync)?;
            print_json(&serde_json::to_value(&w)?);
        }
        Command::Dioph {
            alpha,
            k,
            x,
            eps_prime,
            s_min,
            floor,
        } => {
            let spec = realize_alpha(alpha, floor)?;
            let cf = continued_fraction(&spec, k)?;
            let mut out = json!({
                "alpha": spec.to_string(),
                "partial_quotients": cf.partial_quotients.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "convergents": cf.convergents.iter().map(|c| format!("{}/{}", c.p, c.q)).collect::<Vec<_>>(),
            });
            if let Some(x) = x {
                let q = approx_quality(
                    &realize_alpha(spec.source().clone(), x.saturating_mul(x))?,
                    x,
                )?;
                out["R"] = json!(q.r.to_string());
                out["witness"] = json!(q.witness.to_string());
            }
            if let Some(e) = eps_prime {
                let w = admissible_window(&spec, &parse_ratio(&e)?, s_min)?;
                out["window"] = json!({"s": w.s, "u": w.u, "y_lo": w.y_lo, "y_hi": w.y_hi});
            }
            print_json(&out);
        }
        Command::MajorArcs {
            alpha,
            q_max,
            y,
            floor,
        } => {
            let spec = realize_alpha(alpha, floor)?;
            println!("{}", major_arcs(&spec, q_max, y)?.to_json());
        }
        Command::Verify {
            name,
            seed,
            set,
            out,
        } => {
            if name == "list" {
                for c in verify::registry() {
                    println!("{:<20} {}", c.name(), c.summary());
                }
                return Ok(Outcome::Ok);
            }
            let check = verify::find_check(&name)?;
            let mut params = CheckParams::new(seed);
            for s in &set {
                params.set(s)?;
            }
            let reports = check.run(&params)?;
            let mut lines = String::new();
            for r in &reports {
                lines.push_str(&r.to_json_line());
                lines.push('\n');
            }
            print!("{lines}");
            if let Some(path) = out {
                let mut f = fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)?;
                f.write_all(lines.as_bytes())?;
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                eprintln!("{name}: {failed} of {} reports failed", reports.len());
                return Ok(Outcome::Failed);
            }
        }
        Command::Experiment {
            name,
            config,
            out,
            seed,
            resync,
        } => {
            if name == "list" {
                for e in experiments::registry() {
                    println!("{:<20} {}", e.name(), e.summary());
                }
                return Ok(Outcome::Ok);
            }
            let path = config.ok_or_else(|| Error::Config("--config is required".into()))?;
            let mut cfg = ExperimentConfig::from_path(&path)?;
            if let Some(o) = out {
                cfg.out_path = o;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = resync {
                cfg.resync = r;
            }
            if cli.threads.is_some() {
                cfg.threads = None;
            }
            let rows = experiments::run_and_write(&name, &cfg)?;
            eprintln!(
                "{name}: {} rows written to {}",
                rows.len(),
                cfg.out_path.display()
            );
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
