use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use defhull::cli::{run, Command, JobDescription, Overrides};
use defhull::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Cohomology,
    Hull,
    Oracle,
    Weights,
    Selftest,
}

/// Exact deformation hulls of local systems on finite complexes.
#[derive(Parser, Debug)]
#[command(name = "defhull", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// Job description (JSON); `-` reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Truncation order of the hull.
    #[arg(long, default_value_t = defhull::hull::DEFAULT_ORDER)]
    order: u32,
    /// Work over the prime field F_p instead of the job's field.
    #[arg(long)]
    prime: Option<u32>,
    /// Enumeration budget.
    #[arg(long, default_value_t = defhull::orbits::DEFAULT_BUDGET)]
    budget: u64,
    /// Accepted for compatibility; weights are decided exactly.
    #[arg(long, default_value_t = 32)]
    tolerance: u32,
    /// Write the machine-readable report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn load(args: &Args) -> Result<JobDescription, Error> {
    let path = args.input.as_ref().ok_or_else(|| Error::Schema("--input is required".into()))?;
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Schema(e.to_string()))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?
    };
    let mut job = JobDescription::from_json(&text)?;
    let flags = Overrides {
        order: job.order.is_none().then_some(args.order),
        prime: args.prime,
        budget: job.budget.is_none().then_some(args.budget),
        tolerance: job.tolerance.is_none().then_some(args.tolerance),
    };
    flags.apply(&mut job);
    job.validate()?;
    Ok(job)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Sub::Cohomology => Command::Cohomology,
        Sub::Hull => Command::Hull,
        Sub::Oracle => Command::Oracle,
        Sub::Weights => Command::Weights,
        Sub::Selftest => Command::Selftest,
    };
    let result = if command == Command::Selftest {
        defhull::cli::selftest()
    } else {
        load(&args).and_then(|job| run(command, &job))
    };
    match result {
        Ok(report) => {
            print!("{}", report.text);
            if let Some(out) = &args.json {
                if let Err(e) = std::fs::write(out, report.json_string() + "\n") {
                    eprintln!("error: {}: {e}", out.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
