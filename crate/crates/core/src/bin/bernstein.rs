use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bernstein_core::acceptance::{run_criterion, run_suite, SuiteConfig, SuiteReport, CRITERIA};
use bernstein_core::engine::Mode;
use bernstein_core::report::{
    cmd_analyze, cmd_approx, load_function, parse_degree, parse_schedule, render_analyze, render_approx,
    ConfigOverrides, GridSpec, OutputFormat,
};
use bernstein_core::{Error, ExactScalar, Result};

/// Bernstein approximation workbench.
#[derive(Parser)]
#[command(name = "bernstein", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trajectory of B_n(f, x0) over a schedule, with a convergence verdict.
    Approx {
        #[command(flatten)]
        function: FunctionArgs,
        /// Evaluation point, as p/q.
        #[arg(long, value_parser = parse_scalar)]
        x0: ExactScalar,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classification, jump sets, oscillation table and variation profile.
    Analyze {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Runs the acceptance suite and prints one row per criterion.
    Verify {
        /// Largest Bernstein degree any criterion may use, e.g. 2^10.
        #[arg(long, value_parser = parse_degree_arg)]
        schedule_cap: Option<u64>,
        /// Run only these criteria (repeatable).
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=CRITERIA as i64))]
        criteria: Vec<u8>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct FunctionArgs {
    /// Gallery preset: heaviside, square, thomae-default, php-h, dirichlet.
    #[arg(long, conflicts_with = "function")]
    preset: Option<String>,
    /// JSON file holding a serialized gallery function.
    #[arg(long)]
    function: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file with RunConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Comma-separated degrees, e.g. 16,32,2^10.
    #[arg(long)]
    schedule: Option<String>,
    /// uniform:<count> or comma-separated p/q points.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Tolerance as p/q.
    #[arg(long, value_parser = parse_scalar)]
    tol: Option<ExactScalar>,
    /// csv or json.
    #[arg(long, value_parser = parse_output)]
    output: Option<OutputFormat>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scalar(s: &str) -> std::result::Result<ExactScalar, String> {
    s.parse().map_err(|e: Error| e.message().to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.message().to_string())
}

fn parse_output(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.message().to_string())
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.message().to_string())
}

fn parse_degree_arg(s: &str) -> std::result::Result<u64, String> {
    parse_degree(s).map_err(|e| e.message().to_string())
}

impl CommonArgs {
    fn overrides(&self) -> Result<ConfigOverrides> {
        let flags = ConfigOverrides {
            mode: self.mode,
            schedule: self.schedule.as_deref().map(parse_schedule).transpose()?,
            grid: self.grid.clone(),
            tol: self.tol.clone(),
            output: self.output,
            seed: self.seed,
        };
        Ok(match &self.config {
            Some(path) => flags.over(ConfigOverrides::from_json_file(path)?),
            None => flags,
        })
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn function(args: &FunctionArgs) -> Result<bernstein_core::gallery::GalleryFn> {
    load_function(args.preset.as_deref(), args.function.as_deref())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Approx { function: fargs, x0, common } => {
            let config = common.overrides()?.resolve()?;
            let out = cmd_approx(&function(&fargs)?, &x0, &config)?;
            common.emit(&render_approx(&out, config.output)?)?;
            Ok(out.exit_code())
        }
        Command::Analyze { function: fargs, common } => {
            let config = common.overrides()?.resolve()?;
            let out = cmd_analyze(&function(&fargs)?, &config)?;
            common.emit(&render_analyze(&out, config.output)?)?;
            Ok(0)
        }
        Command::Verify { schedule_cap, criteria, common } => {
            let config = common.overrides()?.resolve()?;
            let suite = SuiteConfig { mode: config.mode, seed: config.seed, schedule_cap };
            let report = if criteria.is_empty() {
                run_suite(&suite)
            } else {
                SuiteReport { config: suite, results: criteria.iter().map(|&id| run_criterion(id, &suite)).collect() }
            };
            common.emit(&report.render(config.output)?)?;
            Ok(report.exit_code())
        }
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error: usage: {first}");
            return exit(1);
        }
    };
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e.message().replace('\n', " "));
            exit(e.exit_code())
        }
    }
}
