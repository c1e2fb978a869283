use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcorr_core::qstates::{StateLimits, DEFAULT_MAX_QUBITS};
use qcorr_core::report::{self, PartitionSelection, StateSpec, Units};
use qcorr_core::Result;

#[derive(Parser)]
#[command(name = "qcorr", version, about = "Correlation content of multi-qubit states")]
struct Cli {
    /// Largest register to build or load (at most 12).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_QUBITS)]
    max_qubits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Internal/external correlation for chosen partitions.
    Analyze {
        /// ghz:N, ue:N, bellpairs:K, ghzblocks:N or file:PATH
        #[arg(long)]
        state: StateSpec,
        /// Partitions such as `ab|cd`, `0,2|1,3` or `all`; repeatable.
        #[arg(long = "partition")]
        partitions: Vec<String>,
        #[arg(long, default_value = "nats")]
        units: Units,
        /// Emit the report as JSON (values in nats).
        #[arg(long)]
        json: bool,
    },
    /// Every canonical bipartition of the state.
    Sweep {
        #[arg(long)]
        state: StateSpec,
        /// Only cuts with one side of this many qubits.
        #[arg(long)]
        size_alpha: Option<usize>,
        #[arg(long, default_value = "nats")]
        units: Units,
        #[arg(long)]
        json: bool,
    },
    /// Von Neumann entropy of a subset of qubits.
    Entropy {
        #[arg(long)]
        state: StateSpec,
        #[arg(long)]
        subset: String,
        #[arg(long, default_value = "nats")]
        units: Units,
    },
    /// Purify the reduced state of a subset of qubits.
    Purify {
        #[arg(long)]
        state: StateSpec,
        #[arg(long)]
        subset: String,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<String> {
    let limits = StateLimits::new(cli.max_qubits);
    match cli.command {
        Command::Analyze {
            state,
            partitions,
            units,
            json,
        } => {
            let selection = if partitions.is_empty() || partitions.iter().any(|p| p == "all") {
                PartitionSelection::All
            } else {
                let n = state.build(&limits)?.n_qubits();
                let mut list = Vec::new();
                for text in &partitions {
                    list.extend(
                        report::parse_partition_list(text, n).map_err(|e| e.context(format!("partition {text:?}")))?,
                    );
                }
                PartitionSelection::List(list)
            };
            let r = report::analyze(&state, &selection, units, &limits)?;
            Ok(if json { r.to_json() } else { r.to_table() })
        }
        Command::Sweep {
            state,
            size_alpha,
            units,
            json,
        } => {
            let mut r = report::sweep(&state, size_alpha, &limits)?;
            r.units = units;
            Ok(if json { r.to_json() } else { r.to_table() })
        }
        Command::Entropy { state, subset, units } => {
            let (qs, s) = report::subset_entropy(&state, &subset, &limits)?;
            Ok(format!("S({qs:?}) = {:.12} {units}", units.convert(s)))
        }
        Command::Purify { state, subset, json } => {
            let r = report::purify_subset(&state, &subset, &limits)?;
            Ok(if json { r.to_json() } else { r.to_table() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
