use clap::{Args, Parser, Subcommand};
use rapidline_cli::format::{build_report, load_instance, render_report};
use rapidline_cli::svg::emit_svg;
use rapidline_core::{brute_force, captation_partition, solve_with, Config};
use std::path::PathBuf;
use std::process::ExitCode;

/// Locates a service facility and a fixed-length rapid transit line under
/// rectilinear travel distances.
#[derive(Debug, Parser)]
#[command(name = "rapidline", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file and print the placement report as JSON.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file: {"points": [{"x", "y", "w"}, ...], "length": ℓ, "k": k}
    instance: PathBuf,

    /// Also run the brute-force lattice oracle and report agreement.
    #[arg(long)]
    oracle: bool,

    /// Oracle facility lattice resolution per axis.
    #[arg(long, default_value_t = 129)]
    grid: usize,

    /// Oracle entrance-angle count.
    #[arg(long, default_value_t = 512)]
    angles: usize,

    /// Write an SVG figure of the solution to this path.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Absolute tolerance on coordinates and objective deltas.
    #[arg(long, default_value_t = rapidline_core::DEFAULT_TOL)]
    tol: f64,

    /// Pretty-print the report.
    #[arg(long)]
    pretty: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => run_solve(args),
    }
}

fn run_solve(args: SolveArgs) -> ExitCode {
    let instance = match load_instance(&args.instance) {
        Ok(instance) => instance,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };

    let config = Config {
        tol: args.tol,
        ..Config::default()
    };
    let solution = solve_with(&instance, &config);

    let oracle = if args.oracle {
        match brute_force(&instance, args.grid, args.angles) {
            Ok(result) => Some(result),
            Err(err) => {
                eprintln!("error: {err}");
                return ExitCode::from(2);
            }
        }
    } else {
        None
    };

    let report = build_report(&instance, &solution, oracle.as_ref(), args.tol);
    print!("{}", render_report(&report, args.pretty));

    if let Some(path) = &args.svg {
        let partition = captation_partition(&instance, &solution.segment, args.tol);
        if let Err(err) = emit_svg(&instance, &solution, &partition, args.tol, path) {
            eprintln!("error: {}: {err}", path.display());
            return ExitCode::from(2);
        }
    }

    if let Some(section) = report.oracle.as_ref() {
        if !section.agrees {
            eprintln!(
                "error: oracle objective {} disagrees with solver objective {} beyond \
                 the error bound {}",
                section.objective, report.objective, section.error_bound
            );
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}
