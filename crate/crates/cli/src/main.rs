//! `reesjump`: run computations and checks on task files.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage or parse errors, 3 when an internal invariant is violated.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use reesjump_core::dispatch::{self, Command, SessionConfig};
use reesjump_core::{Error, Format};

#[derive(Parser, Debug)]
#[command(
    name = "reesjump",
    version,
    about = "Exact graded Ext computations and dimension-jump checks over Rees rings",
    after_help = "COMMANDS:\n  gb M | resolve M | ext --q Q M N | rees M | sp0 Mt | sp1 Mt | lsp0 Mt\n  check:lemma1 | check:lemma2 | check:lemma3 | check:jump | check:example15 | check:all\n\n\
                  Check commands without --input run the bundled corpus.\n\
                  Exit status: 0 pass, 1 check failure, 2 usage or parse error, 3 internal error."
)]
struct Cli {
    /// Command to run.
    command: String,

    /// Module names the command operates on.
    names: Vec<String>,

    /// Task file, or a directory of `.task` files.
    #[arg(short, long)]
    input: Option<PathBuf>,

    /// Coefficient field, overriding the task's ring declaration: QQ or Fp=<p>.
    #[arg(long)]
    field: Option<String>,

    /// Monomial order, overriding the task's ring declaration: grevlex or lex.
    #[arg(long)]
    order: Option<String>,

    /// Degree window lo:hi for graded tables.
    #[arg(long, default_value = "-20:20", allow_hyphen_values = true)]
    window: String,

    /// Largest Ext index examined by the checks.
    #[arg(long = "max-q", default_value_t = 4)]
    max_q: i64,

    /// Ext index for `ext`.
    #[arg(long)]
    q: Option<i64>,

    /// Output format: json or text.
    #[arg(long, default_value = "json")]
    format: String,

    /// Run on mutated copies of the bundled corpus generated from this seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Write 0 for every timing, making reports byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

fn config(cli: &Cli) -> Result<SessionConfig, Error> {
    let command = Command::parse(&cli.command, &cli.names, cli.q)?;
    let mut c = SessionConfig::new(command);
    c.field = cli.field.as_deref().map(dispatch::parse_field).transpose()?;
    c.order = cli.order.as_deref().map(dispatch::parse_order).transpose()?;
    c.window = dispatch::parse_window(&cli.window)?;
    c.qmax = cli.max_q;
    c.format = cli.format.parse::<Format>()?;
    c.input = cli.input.clone();
    c.seed = cli.seed;
    c.timing = !cli.no_timing;
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let out = match config(&cli) {
        Ok(c) => dispatch::run(&c),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
