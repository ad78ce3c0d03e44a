//! `zs`: enumerate minimal zero-sum sequences over `[-n, n]`, build their
//! derivation posets and compare length bounds.

mod verify;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use zerosum_core::bounds::{dominance_scan, CSV_HEADER};
use zerosum_core::derivation::diagonal_family;
use zerosum_core::enumeration::write_atomically;
use zerosum_core::{bound_report, build_poset, parse_seq, AtomCache, AtomSet, EnumOptions, Error, ZSeq};

/// Largest `n` the enumerating commands accept.
const ENUM_N_CAP: u32 = 12;
/// Largest `n` `verify` accepts.
const VERIFY_N_CAP: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "zs", version, about = "Minimal zero-sum sequences over [-n, n]")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory for cached atom sets.
    #[arg(long, global = true, env = "ZS_CACHE_DIR", default_value = ".zscache")]
    cache_dir: PathBuf,

    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the atoms over [-n, n], one per negation class.
    Atoms {
        #[arg(long)]
        n: u32,
    },
    /// Emit the derivation poset (DOT by default, or JSON).
    Poset {
        #[arg(long)]
        n: u32,
    },
    /// List the maximal elements of the derivation poset.
    Maximal {
        #[arg(long)]
        n: u32,
        /// Also list maximal elements outside the diagonal family a^[b/g]·(-b)^[a/g].
        #[arg(long)]
        check_diagonal: bool,
    },
    /// Bound report for one sequence, or CSV over every atom for n.
    #[command(group(ArgGroup::new("input").required(true).args(["n", "seq"])))]
    Bounds {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        seq: Option<String>,
    },
    /// Summarize how the bound families compare over every atom for n.
    Compare {
        #[arg(long)]
        n: u32,
    },
    /// Run the invariant suite for n.
    Verify {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

enum Failure {
    /// Bad arguments or input; exit status 2.
    Usage(String),
    /// Internal or invariant failure; exit status 1.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyInput
            | Error::MalformedTerm(_)
            | Error::BadMultiplicity(_)
            | Error::TermOutOfRange { .. }
            | Error::ZeroTerm(_)
            | Error::OneSided(_)
            | Error::NotZeroSum(_)
            | Error::NOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(format!("{e:#}"))
    }
}

type CmdResult = Result<(), Failure>;

struct Ctx {
    format: Option<Format>,
    out: Option<PathBuf>,
    cache: AtomCache,
}

impl Ctx {
    fn format(&self, default: Format, allowed: &[Format], command: &str) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Usage(format!(
                "`{command}` does not support --format {}",
                format!("{f:?}").to_lowercase()
            )))
        }
    }

    fn emit(&self, text: &str) -> CmdResult {
        match &self.out {
            Some(path) => Ok(write_atomically(path, text)?),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn atoms(&self, n: u32, cap: u32) -> Result<AtomSet, Failure> {
        if n == 0 || n > cap {
            return Err(Failure::Usage(format!("n = {n} is outside [1, {cap}]")));
        }
        Ok(self.cache.get(n, &EnumOptions::default())?)
    }
}

fn lines<'a>(items: impl IntoIterator<Item = &'a ZSeq>) -> String {
    items.into_iter().map(|s| format!("{s}\n")).collect()
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn cmd_atoms(ctx: &Ctx, n: u32) -> CmdResult {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json], "atoms")?;
    let atoms = ctx.atoms(n, ENUM_N_CAP)?;
    ctx.emit(&match format {
        Format::Json => atoms.to_json(),
        _ => lines(atoms.iter()),
    })
}

fn cmd_poset(ctx: &Ctx, n: u32) -> CmdResult {
    let format = ctx.format(Format::Dot, &[Format::Dot, Format::Json], "poset")?;
    let poset = build_poset(&ctx.atoms(n, ENUM_N_CAP)?)?;
    ctx.emit(&match format {
        Format::Json => poset.to_json(),
        _ => poset.to_dot(),
    })
}

fn cmd_maximal(ctx: &Ctx, n: u32, check_diagonal: bool) -> CmdResult {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json], "maximal")?;
    let maximal = build_poset(&ctx.atoms(n, ENUM_N_CAP)?)?.maximal_elements();
    let outside: Option<BTreeSet<ZSeq>> = if check_diagonal {
        let diag = diagonal_family(n)?;
        Some(maximal.members.difference(&diag).cloned().collect())
    } else {
        None
    };
    let text = match format {
        Format::Json => {
            let mut v = serde_json::json!({ "n": n, "maximal": maximal.members });
            if let Some(o) = &outside {
                v["outside_diagonal"] = serde_json::json!(o);
            }
            json_line(v)
        }
        _ => {
            let mut text = lines(&maximal.members);
            if let Some(o) = &outside {
                text.push_str(&format!("# outside the diagonal family: {}\n", o.len()));
                text.push_str(&lines(o));
            }
            text
        }
    };
    ctx.emit(&text)
}

fn cmd_bounds(ctx: &Ctx, n: Option<u32>, seq: Option<&str>) -> CmdResult {
    if let Some(literal) = seq {
        let format = ctx.format(Format::Text, &[Format::Text, Format::Json], "bounds --seq")?;
        let s = parse_seq(literal)?;
        if s.len() < 2 {
            return Err(Failure::Usage(format!("{s} has fewer than two terms")));
        }
        let report = bound_report(&s)?;
        return ctx.emit(&match format {
            Format::Json => json_line(serde_json::to_value(&report).map_err(anyhow::Error::from)?),
            _ => report.to_text(),
        });
    }
    let n = n.expect("clap requires --n or --seq");
    let format = ctx.format(
        Format::Csv,
        &[Format::Csv, Format::Text, Format::Json],
        "bounds --n",
    )?;
    let atoms = ctx.atoms(n, ENUM_N_CAP)?;
    let reports = atoms
        .iter()
        .filter(|s| s.len() > 1 && !s.contains(0))
        .map(bound_report)
        .collect::<Result<Vec<_>, _>>()?;
    ctx.emit(&match format {
        Format::Json => json_line(serde_json::to_value(&reports).map_err(anyhow::Error::from)?),
        _ => {
            let mut text = format!("{CSV_HEADER}\n");
            for r in &reports {
                text.push_str(&r.to_csv_row());
                text.push('\n');
            }
            text
        }
    })
}

fn cmd_compare(ctx: &Ctx, n: u32) -> CmdResult {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json], "compare")?;
    let summary = dominance_scan(&ctx.atoms(n, ENUM_N_CAP)?)?;
    ctx.emit(&match format {
        Format::Json => json_line(serde_json::to_value(&summary).map_err(anyhow::Error::from)?),
        _ => summary.to_text(),
    })
}

fn cmd_verify(ctx: &Ctx, n: u32) -> CmdResult {
    ctx.format(Format::Text, &[Format::Text], "verify")?;
    let atoms = ctx.atoms(n, VERIFY_N_CAP)?;
    let previous = if n > 1 {
        Some(ctx.atoms(n - 1, VERIFY_N_CAP)?)
    } else {
        None
    };
    let checks = verify::run(&atoms, previous.as_ref());
    ctx.emit(&verify::render(&checks))?;
    match checks.iter().find(|c| c.status == verify::Status::Fail) {
        Some(c) => Err(Failure::Internal(format!(
            "check failed: {}: {}",
            c.name, c.detail
        ))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| Failure::Internal(format!("thread pool: {e}")))?;
    }
    let ctx = Ctx {
        format: cli.format,
        out: cli.out,
        cache: AtomCache::new(cli.cache_dir),
    };
    match cli.command {
        Command::Atoms { n } => cmd_atoms(&ctx, n),
        Command::Poset { n } => cmd_poset(&ctx, n),
        Command::Maximal { n, check_diagonal } => cmd_maximal(&ctx, n, check_diagonal),
        Command::Bounds { n, seq } => cmd_bounds(&ctx, n, seq.as_deref()),
        Command::Compare { n } => cmd_compare(&ctx, n),
        Command::Verify { n } => cmd_verify(&ctx, n),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
