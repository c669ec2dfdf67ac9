use basiclocus::special_lattices::SweepConfig;
use basiclocus::SpaceInvariants;
use basiclocus_cli::commands::{self, Outcome, SpecialArgs, StrataArgs};
use basiclocus_cli::report::{emit, render_json};
use basiclocus_cli::verify::{run_verify, Budget, Target, VerifyPlan};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "basiclocus",
    version,
    about = "Exact checks on vertex lattices, Weyl group elements and Deligne-Lusztig strata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Residue degree; defaults to 1, or to dim V for `special`.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Witt vector precision K of the lattice window.
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,
    /// Size caps for `verify`, e.g. `n=4,t=10,cap=none`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Allow requests outside the desk-scale envelope.
    #[arg(long, global = true)]
    force: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long = "json", global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Write the count table as CSV (strata, special).
    #[arg(long, global = true, value_name = "OUT")]
    csv: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, Jordan profile and vertex-lattice tables of a form.
    Classify {
        /// Diagonal entries, e.g. `1,3,-2`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "gram")]
        diag: Option<String>,
        /// Integer Gram matrix as JSON, e.g. `[[2,1],[1,2]]`.
        #[arg(long)]
        gram: Option<String>,
    },
    /// The elements w_r, w_r' (or w_{r,s} with --t-prime), lengths and dimensions.
    Weyl {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        t_prime: Option<usize>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
    },
    /// Admissible sets against the KR tables.
    Adm {
        /// One of 1, 2a, 2b, 3.
        #[arg(long)]
        case: String,
        #[arg(long)]
        n: usize,
        /// Level; all levels when omitted.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Points and strata of S_Λ for Λ with Jordan profile (n0, χ0; t, χ).
    Strata {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        chi: i8,
        #[arg(long, default_value_t = 2)]
        n0: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        chi0: i8,
        /// Pairs of substrata checked against the join rule.
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        /// Largest m in the point-count series for the degree estimate; 0 skips it.
        #[arg(long, default_value_t = 3)]
        series_m: usize,
    },
    /// Enumerate special lattices of type h in V and check the dichotomy and cover.
    Special {
        /// dim, χ, χ′, Hasse, e.g. `4,1,0,-1`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        h: usize,
        #[arg(long, default_value_t = 2)]
        a: usize,
        #[arg(long, default_value_t = 2)]
        b: usize,
        /// Points per family.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run named checks; `all` selects every target.
    Verify {
        #[arg(long = "target", value_delimiter = ',')]
        targets: Vec<String>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
}

fn parse_space(s: &str) -> basiclocus::Result<SpaceInvariants> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || basiclocus::Error::Invalid(format!("--v {s:?}: expected dim,chi,chi',hasse"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let dim = parts[0].parse().map_err(|_| bad())?;
    let nums: Vec<i8> = parts[1..]
        .iter()
        .map(|x| x.parse().map_err(|_| bad()))
        .collect::<basiclocus::Result<_>>()?;
    SpaceInvariants::new(dim, nums[0], nums[1], nums[2])
}

fn run(cli: &Cli) -> basiclocus::Result<Outcome> {
    let m = cli.m.unwrap_or(1);
    match &cli.command {
        Command::Classify { diag, gram } => {
            commands::classify(cli.p, diag.as_deref(), gram.as_deref())
        }
        Command::Weyl {
            t,
            h,
            t_prime,
            sign,
        } => commands::weyl(*t, *h, *t_prime, *sign),
        Command::Adm { case, n, s } => commands::adm(case, *n, *s),
        Command::Strata {
            t,
            h,
            chi,
            n0,
            chi0,
            pairs,
            series_m,
        } => commands::strata(&StrataArgs {
            n0: *n0,
            chi0: *chi0,
            t: *t,
            h: *h,
            chi: *chi,
            p: cli.p,
            m,
            pairs: *pairs,
            series_m: *series_m,
            force: cli.force,
        }),
        Command::Special { v, h, a, b, cap } => {
            let v = parse_space(v)?;
            let config = SweepConfig {
                p: cli.p,
                m: cli.m.unwrap_or(v.dim),
                precision: cli.precision,
                a: *a,
                b: *b,
                cap: *cap,
            };
            commands::special(&SpecialArgs {
                v,
                h: *h,
                config,
                force: cli.force,
            })
        }
        Command::Verify { targets, timings } => {
            let targets = if targets.iter().any(|t| t == "all") {
                Target::all().to_vec()
            } else {
                targets
                    .iter()
                    .map(|t| Target::parse(t))
                    .collect::<basiclocus::Result<_>>()?
            };
            let budget = match &cli.budget {
                Some(b) => Budget::parse(b)?,
                None => Budget::default(),
            };
            let plan = VerifyPlan {
                targets,
                budget,
                seed: cli.seed,
                force: cli.force,
            };
            let report = run_verify(&plan)?;
            Ok(Outcome {
                json: report.to_json(*timings),
                csv: None,
                ok: report.passed,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = emit(&render_json(&out.json), cli.json.as_deref()).and_then(|_| {
        match (&cli.csv, &out.csv) {
            (Some(path), Some(text)) => emit(text, Some(path)),
            _ => Ok(()),
        }
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
