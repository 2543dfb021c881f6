mod commands;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "khoma", version, about = "Kauffman bracket, Khovanov and Lee homology of link diagrams")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, env = "KHOMA_MAX_CROSSINGS", default_value_t = 16)]
    max_crossings: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    StateSum,
    SpanningTree,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ring {
    Z,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Thm23,
    Alt,
    Hopf,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Kauffman bracket.
    Bracket {
        /// PD file, `-` for stdin, or `corpus:NAME`.
        input: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        /// Crossing order for the expansion, e.g. `2,0,1`.
        #[arg(long)]
        numbering: Option<String>,
    },
    /// Black graph, single-circle states and the expansion tree.
    Trees {
        input: String,
        #[arg(long)]
        numbering: Option<String>,
    },
    /// Khovanov homology.
    Homology {
        input: String,
        #[arg(long, value_enum, default_value = "z")]
        ring: Ring,
        /// Shift by `[-n₋]{n₊ - 2n₋}`.
        #[arg(long)]
        normalize: bool,
        #[arg(long, value_enum)]
        check: Option<Check>,
    },
    /// Lee homology.
    Lee {
        input: String,
        #[arg(long, value_enum, default_value = "q")]
        ring: Ring,
        /// Also run the admissible colouring decomposition.
        #[arg(long)]
        colorings: bool,
    },
    /// Run every checker over the corpus.
    Verify {
        /// Corpus entries to check; all of them when omitted.
        names: Vec<String>,
        /// Include the connected-sum family.
        #[arg(long)]
        all: bool,
    },
    /// List the built-in diagrams, or print one as PD text.
    Corpus { name: Option<String> },
}

/// Failure classes mapped to exit codes.
pub enum Failure {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// A check failed or a precondition does not hold: exit 1.
    Check(String),
}

impl From<khoma::Error> for Failure {
    fn from(e: khoma::Error) -> Self {
        match e {
            khoma::Error::Parse(e) => Failure::Input(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<khoma::DiagramError> for Failure {
    fn from(e: khoma::DiagramError) -> Self {
        Failure::Check(e.to_string())
    }
}

impl From<khoma::ComplexError> for Failure {
    fn from(e: khoma::ComplexError) -> Self {
        Failure::Check(e.to_string())
    }
}

fn load(input: &str, max_crossings: usize) -> Result<khoma::diagram::PlanarDiagram, Failure> {
    let text = if let Some(name) = input.strip_prefix("corpus:") {
        khoma::corpus::get(name)
            .ok_or_else(|| Failure::Input(format!("no corpus entry `{name}`")))?
            .pd
            .to_string()
    } else if input == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Input(format!("stdin: {e}")))?
    } else {
        let path = PathBuf::from(input);
        std::fs::read_to_string(&path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let d = khoma::diagram::parse_pd(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))?;
    if d.crossing_count() > max_crossings {
        return Err(Failure::Input(format!(
            "{input} has {} crossings, more than the limit of {max_crossings} (KHOMA_MAX_CROSSINGS)",
            d.crossing_count()
        )));
    }
    Ok(d)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match cli.command {
        Command::Bracket { input, method, numbering } => load(&input, cli.max_crossings)
            .and_then(|d| commands::bracket(&d, method, numbering.as_deref(), json)),
        Command::Trees { input, numbering } => {
            load(&input, cli.max_crossings).and_then(|d| commands::trees(&d, numbering.as_deref(), json))
        }
        Command::Homology {
            input,
            ring,
            normalize,
            check,
        } => load(&input, cli.max_crossings).and_then(|d| commands::homology(&d, ring, normalize, check, json)),
        Command::Lee { input, ring, colorings } => {
            load(&input, cli.max_crossings).and_then(|d| commands::lee(&d, ring, colorings, json))
        }
        Command::Verify { names, all } => verify::run(&names, all, cli.max_crossings, json),
        Command::Corpus { name } => commands::corpus(name.as_deref(), json),
    };
    match result {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
    }
}
