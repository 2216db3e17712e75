use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use equivarium::artifact::{self, Artifact, BuildArgs};
use equivarium::verify::{self, group_from_arg, Suite, VerifyOptions};
use equivarium::Error;

/// Elmendorf constructions for finite groups, with theorem-verification suites.
#[derive(Parser)]
#[command(name = "equivarium", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an artifact and print it as JSON.
    Build {
        #[arg(value_enum)]
        what: BuildKind,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteKind,
        #[command(flatten)]
        common: Common,
        /// Include wall-clock timing in the report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Group key (C<n>, D<n>, S<n>) or path to a group JSON file.
    /// Repeatable for `verify`; defaults to C2, C3, C4, S3 there.
    #[arg(long)]
    group: Vec<String>,
    /// Presheaf descriptor: family:e|all|none|<ids>, constant:point|chain<n>|complete<n>|discrete<n>, phi:groupoid|delooping.
    #[arg(long)]
    presheaf: Option<String>,
    /// Milnor truncation depth.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Nerve truncation dimension.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    OrbitCat,
    MarkedOrbitCat,
    CCat,
    CPos,
    Milnor,
    Quotient,
    Nerve,
    Hocolim,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteKind {
    CatTheorem,
    PosTheorem,
    Thomason,
    QuotientCounterexample,
    All,
}

fn emit(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serializes");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Invalid(format!("writing {}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn groups(common: &Common) -> Result<Vec<Arc<equivarium::group::FiniteGroup>>, Error> {
    common.group.iter().map(|g| group_from_arg(g).map(Arc::new)).collect()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Build { what, common } => {
            let Format::Json = common.format;
            let mut gs = groups(&common)?;
            if gs.len() != 1 {
                return Err(Error::Invalid("build needs exactly one --group".into()));
            }
            let what = match what {
                BuildKind::OrbitCat => Artifact::OrbitCat,
                BuildKind::MarkedOrbitCat => Artifact::MarkedOrbitCat,
                BuildKind::CCat => Artifact::CCat,
                BuildKind::CPos => Artifact::CPos,
                BuildKind::Milnor => Artifact::Milnor,
                BuildKind::Quotient => Artifact::Quotient,
                BuildKind::Nerve => Artifact::Nerve,
                BuildKind::Hocolim => Artifact::Hocolim,
            };
            let args = BuildArgs { group: gs.remove(0), presheaf: common.presheaf, depth: common.depth, dim: common.dim };
            emit(&artifact::build(what, &args)?, common.out.as_ref())?;
            Ok(0)
        }
        Command::Verify { suite, common, timing } => {
            let Format::Json = common.format;
            let suite = match suite {
                SuiteKind::CatTheorem => Suite::CatTheorem,
                SuiteKind::PosTheorem => Suite::PosTheorem,
                SuiteKind::Thomason => Suite::Thomason,
                SuiteKind::QuotientCounterexample => Suite::QuotientCounterexample,
                SuiteKind::All => Suite::All,
            };
            let gs = groups(&common)?;
            let mut opts = VerifyOptions { presheaf: common.presheaf, depth: common.depth, dim: common.dim, timing, ..Default::default() };
            if !gs.is_empty() {
                opts.groups = gs;
            }
            let report = verify::verify(suite, &opts)?;
            emit(&report.to_json(), common.out.as_ref())?;
            match report.first_failure() {
                None => Ok(0),
                Some(c) => {
                    eprintln!(
                        "verification failed: {} [{}]: {}",
                        c.id,
                        c.instance,
                        c.witness.as_deref().unwrap_or("")
                    );
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let body = serde_json::to_string_pretty(&artifact::error_json(&e)).expect("JSON serializes");
            println!("{body}");
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
