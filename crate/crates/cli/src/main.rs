//! `bks` — command-line workbench for Kochen-Specker colorability.
//!
//! Verdicts (colorable/uncolorable, contradiction/none) are program output
//! with exit 0; exit 2 means a requested finding does not exist (no parity
//! certificate, no contradiction); exit 1 is reserved for usage and I/O
//! errors.

mod commands;
mod input;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bks",
    version,
    about = "Kochen-Specker colorability workbench",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SetSource {
    /// Built-in ray set: ceg18, peres24, hardy16
    #[arg(long, value_name = "KEY", group = "source", required = true)]
    set: Option<String>,
    /// Ray set file (one ray per line; integers or p/q rationals)
    #[arg(long, value_name = "PATH", group = "source")]
    file: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List or print the built-in ray sets and states
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Orthogonality graph of a ray set
    Graph {
        #[command(flatten)]
        source: SetSource,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all complete orthogonal bases
    Bases {
        #[command(flatten)]
        source: SetSource,
        #[arg(long)]
        json: bool,
    },
    /// Decide colorability; on uncolorable sets also report the parity certificate
    Color {
        #[command(flatten)]
        source: SetSource,
        /// Constraint semantics: bases | bases+pairs
        #[arg(long, default_value = "bases", value_parser = input::parse_mode)]
        mode: bks_core::Mode,
        #[arg(long)]
        json: bool,
    },
    /// Search for a parity certificate (exit 2 if none exists)
    Parity {
        #[command(flatten)]
        source: SetSource,
        #[arg(long)]
        json: bool,
    },
    /// Census of critical (minimal uncolorable) subsets
    Critical {
        #[command(flatten)]
        source: SetSource,
        /// Smallest subset size to report
        #[arg(long, default_value_t = 4)]
        min: usize,
        /// Largest subset size to report (default: all rays)
        #[arg(long)]
        max: Option<usize>,
        /// Constraint semantics; when omitted, runs bases and cross-checks
        /// bases+pairs, flagging any disagreement
        #[arg(long, value_parser = input::parse_mode)]
        mode: Option<bks_core::Mode>,
        /// Worker threads (output does not depend on this)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a ray set by a prepared state
    Reduce {
        #[command(flatten)]
        source: SetSource,
        /// State key (singlet, hardy, phi-xx) or components like 0,1,-1,0
        #[arg(long)]
        state: String,
        #[arg(long)]
        json: bool,
    },
    /// Seed with pre/postselection forced values and propagate (exit 2 if
    /// no contradiction is reached)
    Hardy {
        #[command(flatten)]
        source: SetSource,
        /// Preselected state (key or components)
        #[arg(long)]
        pre: String,
        /// Postselected state (key or components)
        #[arg(long)]
        post: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Exact Born probabilities for projectors and local events
    Prob {
        /// State (key or components)
        #[arg(long)]
        state: String,
        /// Ray components for a rank-1 projector probability
        #[arg(long, group = "query", required = true)]
        ray: Option<String>,
        /// Local event such as x2=+1 or z1=-1
        #[arg(long, group = "query")]
        event: Option<String>,
        /// Conditioning event (requires --event)
        #[arg(long, requires = "event")]
        given: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The four local probabilities of a pre/post pair plus forced values
    Report {
        /// Preselected state (key or components)
        #[arg(long)]
        pre: String,
        /// Postselected state (key or components; must factorize)
        #[arg(long)]
        post: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Keys and sizes of everything built in
    List {
        #[arg(long)]
        json: bool,
    },
    /// Print a ray set in the text format
    Show {
        /// ceg18, peres24, or hardy16
        key: String,
    },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `bks critical | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List { json } => commands::catalog_list(json),
            CatalogAction::Show { key } => commands::catalog_show(&key),
        },
        Command::Graph { source, json } => {
            let set = input::load_ray_set(&source)?;
            commands::graph(&set, json)
        }
        Command::Bases { source, json } => {
            let set = input::load_ray_set(&source)?;
            commands::bases(&set, json)
        }
        Command::Color { source, mode, json } => {
            let set = input::load_ray_set(&source)?;
            commands::color(&set, mode, json)
        }
        Command::Parity { source, json } => {
            let set = input::load_ray_set(&source)?;
            commands::parity(&set, json)
        }
        Command::Critical {
            source,
            min,
            max,
            mode,
            threads,
            json,
        } => {
            let set = input::load_ray_set(&source)?;
            commands::critical(&set, &source, min, max, mode, threads, json)
        }
        Command::Reduce {
            source,
            state,
            json,
        } => {
            let set = input::load_ray_set(&source)?;
            let state = input::parse_state(&state)?;
            commands::reduce(&set, &state, json)
        }
        Command::Hardy {
            source,
            pre,
            post,
            json,
        } => {
            let set = input::load_ray_set(&source)?;
            let pre = input::parse_state(&pre)?;
            let post = post.as_deref().map(input::parse_state).transpose()?;
            commands::hardy(&set, &pre, post.as_ref(), json)
        }
        Command::Prob {
            state,
            ray,
            event,
            given,
            json,
        } => {
            let state = input::parse_state(&state)?;
            commands::prob(
                &state,
                ray.as_deref(),
                event.as_deref(),
                given.as_deref(),
                json,
            )
        }
        Command::Report { pre, post, json } => {
            let pre = input::parse_state(&pre)?;
            let post = input::parse_state(&post)?;
            commands::report(&pre, &post, json)
        }
    }
}
