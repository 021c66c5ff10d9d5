use std::path::PathBuf;
use std::process::ExitCode;

use brauerkit_cli::reproduce::{self, HEIGHT3_ORDER};
use brauerkit_cli::{run_document, CliError, Format, Output, Overrides, SurfaceKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "brauerkit", version, about = "Formal Brauer groups of K3 surfaces and Landweber exactness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Args)]
struct JobArgs {
    /// Job document (TOML)
    file: PathBuf,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    hmax: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Complete-intersection jobs (Stienstra logarithm)
    StienstraCi(JobArgs),
    /// Double-plane jobs (Stienstra logarithm)
    StienstraDp(JobArgs),
    /// Weierstrass jobs (Artin's reduction)
    Artin(JobArgs),
    /// Height of any job
    Height(JobArgs),
    /// Landweber exactness report of any job
    Landweber(JobArgs),
    /// Recompute every published value and print the comparison table
    Reproduce {
        /// Order used for the height-3 rows
        #[arg(long, default_value_t = HEIGHT3_ORDER)]
        order: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    }
}

fn job(args: &JobArgs, kinds: &[SurfaceKind], outputs: Option<&'static [Output]>) -> Result<String, CliError> {
    let src = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Parse(format!("{}: {e}", args.file.display())))?;
    let overrides = Overrides { prime: args.prime, order: args.order, hmax: args.hmax, outputs };
    run_document(&src, overrides, kinds, format_of(args.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::StienstraCi(a) => job(a, &[SurfaceKind::CompleteIntersection], None),
        Command::StienstraDp(a) => job(a, &[SurfaceKind::DoublePlane], None),
        Command::Artin(a) => job(a, &[SurfaceKind::EllipticWeierstrass], None),
        Command::Height(a) => job(a, &[], Some(&[Output::Height])),
        Command::Landweber(a) => job(a, &[], Some(&[Output::Landweber])),
        Command::Reproduce { order, format } => {
            let rows = reproduce::reproduce(*order);
            let text = match format_of(*format) {
                Format::Text => reproduce::render_text(&rows),
                Format::Machine => reproduce::render_machine(&rows),
            };
            print!("{text}");
            let (_, failed, _) = reproduce::summary(&rows);
            return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
