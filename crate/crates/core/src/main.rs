use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hypq::cli::{
    self, Figure, SchemeChoice, TreeFormat, EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED,
};
use hypq::geometry::DEFAULT_TILE_CAP;
use hypq::tree::node_cap_from_env;
use hypq::verify::{self, Fault, Scope};

#[derive(Parser)]
#[command(
    name = "hypq",
    version,
    about = "Splittings, spanning trees, numeration and figures for {p,q} tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix, polynomial and Pisot verdict of a splitting.
    Analyze {
        #[arg(short)]
        p: i64,
        #[arg(short)]
        q: i64,
        /// even-q, odd-legacy, odd-v1, odd-v2 or auto.
        #[arg(long, default_value = "auto")]
        scheme: SchemeChoice,
        #[arg(long)]
        json: bool,
    },
    /// Spanning tree of a splitting: level counts, DOT or JSON.
    Tree {
        #[arg(short)]
        p: i64,
        #[arg(short)]
        q: i64,
        #[arg(long, default_value = "auto")]
        scheme: SchemeChoice,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// counts, dot or json.
        #[arg(long, default_value = "counts")]
        format: TreeFormat,
        /// Node cap; overrides HYPQ_NODE_CAP.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Maximal representations of 0..=up-to.
    Numeration {
        #[arg(short)]
        p: i64,
        #[arg(short)]
        q: i64,
        #[arg(long, default_value = "auto")]
        scheme: SchemeChoice,
        #[arg(long, default_value_t = 20)]
        up_to: u64,
    },
    /// SVG figure in the Poincare disc.
    Render {
        #[arg(short)]
        p: i64,
        #[arg(short)]
        q: i64,
        /// tessellation, sectors, midlines, zigzag or dual45.
        #[arg(long, default_value = "tessellation")]
        what: Figure,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
        tile_cap: usize,
        /// Output file; stdout when absent.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Built-in checks; exit 1 when one fails.
    Verify {
        /// all, core, geometry, numeration or dual.
        #[arg(default_value = "all")]
        scope: Scope,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

fn run(cmd: Command) -> hypq::Result<(String, i32)> {
    let out = match cmd {
        Command::Analyze { p, q, scheme, json } => cli::cmd_analyze(p, q, scheme, json)?,
        Command::Tree {
            p,
            q,
            scheme,
            depth,
            format,
            cap,
        } => {
            let cap = match cap {
                Some(c) => c,
                None => node_cap_from_env()?,
            };
            cli::cmd_tree(p, q, scheme, depth, format, cap)?
        }
        Command::Numeration {
            p,
            q,
            scheme,
            up_to,
        } => cli::cmd_numeration(p, q, scheme, up_to)?,
        Command::Render {
            p,
            q,
            what,
            depth,
            tile_cap,
            o,
        } => {
            let svg = cli::cmd_render(p, q, what, depth, tile_cap)?;
            match o {
                Some(path) => {
                    std::fs::write(&path, svg).map_err(|e| {
                        hypq::Error::InvalidInput(format!("{}: {e}", path.display()))
                    })?;
                    String::new()
                }
                None => svg,
            }
        }
        Command::Verify {
            scope,
            inject_fault,
        } => {
            let report = verify::run(scope, inject_fault);
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            return Ok((report.to_text(), code));
        }
    };
    Ok((out, EXIT_OK))
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INVALID as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    match run(parsed.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("hypq: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
