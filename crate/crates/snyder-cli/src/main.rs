//! Command-line front end: compute momentum sums, run the verification
//! suites, verify Cayley-table fixtures, and evaluate the sampled action.
//!
//! Exit codes: 0 all-pass, 1 usage error, 2 domain error, 3 verification
//! failure. The environment variable `SNYDER_SEED` overrides the default
//! seed when `--seed` is not given. All structured output is UTF-8 JSON.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

mod suites;

#[derive(Parser)]
#[command(name = "snyder", version, about = "curved momentum space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add two momenta along the chosen computation path(s).
    Sum(SumArgs),
    /// Run the continuous verification suites and write a report.
    Verify(VerifyArgs),
    /// Classify and verify a finite Cayley-table fixture.
    Hopf(HopfArgs),
    /// Evaluate the sampled scalar-field action and its symmetry checks.
    Action(ActionArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Closed,
    #[value(name = "first-order")]
    FirstOrder,
    All,
}

#[derive(Args)]
struct SumArgs {
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    #[arg(long, num_args = 4, allow_hyphen_values = true, required = true)]
    p: Vec<f64>,
    #[arg(long, num_args = 4, allow_hyphen_values = true, required = true)]
    q: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteChoice {
    Kloop,
    Lts,
    Star,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Decomposition {
    Desitter,
    Lorentz,
    Sphere,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
    suite: SuiteChoice,
    #[arg(long, value_enum, default_value_t = Decomposition::Desitter)]
    decomposition: Decomposition,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildCross {
    Auto,
    None,
}

#[derive(Args)]
struct HopfArgs {
    #[arg(long, required = true)]
    table: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = BuildCross::Auto)]
    build_cross: BuildCross,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ActionArgs {
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0.4)]
    mass: f64,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long, default_value_t = 0.3)]
    width: f64,
    /// Profile center in chart coordinates (asymmetric profiles expose the
    /// bracketing order of the cubic term).
    #[arg(long, num_args = 4, allow_hyphen_values = true, default_values_t = [0.0, 0.0, 0.0, 0.0])]
    center: Vec<f64>,
    #[arg(long, default_value_t = 20000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn default_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed.unwrap_or_else(|| {
        std::env::var("SNYDER_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn emit(value: &serde_json::Value) {
    let mut stdout = std::io::stdout();
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(value).unwrap());
}

fn domain_error(err: impl std::fmt::Display) -> ExitCode {
    emit(&json!({ "error": { "kind": "domain", "message": err.to_string() } }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; keep the usage exit code at 1
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match cli.command {
        Command::Sum(args) => run_sum(args),
        Command::Verify(args) => run_verify(args),
        Command::Hopf(args) => run_hopf(args),
        Command::Action(args) => run_action(args),
    }
}

fn run_sum(args: SumArgs) -> ExitCode {
    use snyder_core::snyder::{sum_closed_form, sum_exact, sum_first_order, Momentum};
    let build = |v: &[f64]| Momentum::new([v[0], v[1], v[2], v[3]], args.kappa);
    let (p, q) = match (build(&args.p), build(&args.q)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) => return domain_error(e),
    };
    let result = (|| -> Result<serde_json::Value, snyder_core::snyder::SnyderError> {
        Ok(match args.method {
            Method::Exact => {
                let s = sum_exact(&p, &q)?;
                json!({ "p_sum": s.p, "method": "exact" })
            }
            Method::Closed => {
                let (s, prec) = sum_closed_form(&p, &q)?;
                json!({ "p_sum": s.p, "method": "closed",
                        "precession": { "rho": prec.rho, "beta": prec.beta } })
            }
            Method::FirstOrder => {
                let s = sum_first_order(&p, &q)?;
                json!({ "p_sum": s.p, "method": "first-order" })
            }
            Method::All => {
                let e = sum_exact(&p, &q)?;
                let (c, prec) = sum_closed_form(&p, &q)?;
                let f = sum_first_order(&p, &q)?;
                let diff = |a: &[f64; 4], b: &[f64; 4]| -> f64 {
                    (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
                };
                json!({
                    "p_sum": e.p,
                    "method": "all",
                    "closed": c.p,
                    "first_order": f.p,
                    "precession": { "rho": prec.rho, "beta": prec.beta },
                    "agreement": {
                        "exact_vs_closed": diff(&e.p, &c.p),
                        "exact_vs_first_order": diff(&e.p, &f.p),
                    }
                })
            }
        })
    })();
    match result {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(e) => domain_error(e),
    }
}

fn write_report(report: &snyder_core::report::Report, out: &Option<std::path::PathBuf>) -> bool {
    let text = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write report: {e}");
                return false;
            }
        }
        None => println!("{text}"),
    }
    true
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let seed = default_seed(args.seed);
    let preset = match args.decomposition {
        Decomposition::Desitter => snyder_core::kloop::Preset::DeSitter,
        Decomposition::Lorentz => snyder_core::kloop::Preset::Lorentz,
        Decomposition::Sphere => snyder_core::kloop::Preset::Sphere,
    };
    let start = std::time::Instant::now();
    let mut reports = Vec::new();
    match args.suite {
        SuiteChoice::Kloop => {
            reports.push(suites::kloop_suite(preset, args.samples, seed, args.tol))
        }
        SuiteChoice::Lts => reports.push(suites::lts_suite(preset, args.samples, seed)),
        SuiteChoice::Star => reports.push(suites::star_suite(args.samples, seed)),
        SuiteChoice::All => {
            // independent seeds per suite; ordered assembly
            let (k, l, s) = std::thread::scope(|scope| {
                let hk =
                    scope.spawn(|| suites::kloop_suite(preset, args.samples, seed, args.tol));
                let hl = scope.spawn(|| suites::lts_suite(preset, args.samples, seed + 1));
                let hs = scope.spawn(|| suites::star_suite(args.samples, seed + 2));
                (hk.join().unwrap(), hl.join().unwrap(), hs.join().unwrap())
            });
            reports.extend([k, l, s]);
        }
    }
    let elapsed = start.elapsed().as_millis();
    let mut all_pass = true;
    for r in &mut reports {
        r.wall_time_ms = elapsed;
        all_pass &= r.passed;
    }
    let ok = if reports.len() == 1 {
        write_report(&reports[0], &args.out)
    } else {
        let combined = serde_json::to_string_pretty(
            &reports
                .iter()
                .map(|r| serde_json::from_str::<serde_json::Value>(&r.to_json()).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        match &args.out {
            Some(path) => std::fs::write(path, &combined).is_ok(),
            None => {
                println!("{combined}");
                true
            }
        }
    };
    if !ok {
        return ExitCode::from(2);
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run_hopf(args: HopfArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.table) {
        Ok(t) => t,
        Err(e) => return domain_error(format!("cannot read table: {e}")),
    };
    let table: snyder_core::finite_hopf::FiniteLoop = match serde_json::from_str(&text) {
        Ok(t) => t,
        Err(e) => return domain_error(format!("malformed table: {e}")),
    };
    if let Err(e) = table.validate() {
        return domain_error(e);
    }
    let build_cross = matches!(args.build_cross, BuildCross::Auto);
    let start = std::time::Instant::now();
    let mut report = suites::hopf_suite(&table, build_cross);
    report.wall_time_ms = start.elapsed().as_millis();
    let passed = report.passed;
    if !write_report(&report, &args.out) {
        return ExitCode::from(2);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run_action(args: ActionArgs) -> ExitCode {
    use snyder_core::star::{check_action_symmetries, interaction_terms, propagating_term, Profile};
    let seed = default_seed(args.seed);
    if !(args.kappa > 0.0) || !(args.width > 0.0) {
        return domain_error("kappa and width must be positive");
    }
    let profile = Profile::Gaussian {
        center: [args.center[0], args.center[1], args.center[2], args.center[3]],
        width: args.width,
    };
    let kinetic = propagating_term(&profile, args.mass, args.kappa, args.samples, seed);
    let cubic = interaction_terms(&profile, args.kappa, args.samples, seed + 1);
    let metric = snyder_core::kloop::Preset::DeSitter.metric();
    let boost = snyder_core::ambient::generator(0, 1, &metric)
        .unwrap()
        .scale(0.2)
        .add(&snyder_core::ambient::generator(2, 3, &metric).unwrap().scale(0.3));
    let lorentz = snyder_core::ambient::exp(&boost).unwrap();
    let symmetry = check_action_symmetries(
        &profile,
        &lorentz,
        &[0.7, -0.3, 0.2, 0.5],
        args.mass,
        args.lambda,
        args.kappa,
        (args.samples / 4).max(500),
        seed + 2,
    );
    let total = kinetic.value + args.lambda / 6.0 * cubic.inner.value;
    let sigmas = if cubic.difference.std_error > 0.0 {
        cubic.difference.value.abs() / cubic.difference.std_error
    } else {
        0.0
    };
    emit(&json!({
        "kappa": args.kappa,
        "mass": args.mass,
        "lambda": args.lambda,
        "profile": { "center": args.center, "width": args.width },
        "seed": seed,
        "samples": args.samples,
        "kinetic": { "value": kinetic.value, "std_error": kinetic.std_error,
                     "excluded_fraction": kinetic.excluded_fraction },
        "cubic": {
            "inner": { "value": cubic.inner.value, "std_error": cubic.inner.std_error },
            "outer": { "value": cubic.outer.value, "std_error": cubic.outer.std_error },
            "difference": { "value": cubic.difference.value,
                            "std_error": cubic.difference.std_error,
                            "sigmas": sigmas }
        },
        "action": total,
        "symmetries": {
            "lorentz_difference": symmetry.lorentz_difference,
            "lorentz_std_error": symmetry.lorentz_std_error,
            "lorentz_pass": symmetry.lorentz_pass,
            "max_translation_phase_residual": symmetry.max_phase_residual,
        }
    }));
    ExitCode::SUCCESS
}
