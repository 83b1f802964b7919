mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{render_text, Report, Timing};

#[derive(Parser)]
#[command(name = "jumploci", version, about = "Resonance varieties, support loci, tangent cones and formality tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// Built-in fixture name.
    #[arg(long, global = true, conflicts_with = "input")]
    pub fixture: Option<String>,
    /// Input file (JSON, or a presentation for groups).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Cohomological degree.
    #[arg(long, global = true, default_value_t = 1)]
    pub degree: usize,
    /// Compact JSON output.
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Pretty-printed JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Largest support enumerated by the exponential tangent cone.
    #[arg(long, global = true, default_value_t = jumploci_core::tcone::DEFAULT_MAX_PARTITION_SUPPORT)]
    pub max_partition_support: usize,
    /// Largest arrangement accepted by the 3-net search and R¹.
    #[arg(long, global = true, default_value_t = jumploci_core::arrangements::DEFAULT_MAX_ARRANGEMENT_SIZE)]
    pub max_arrangement_size: usize,
    /// Adds a timing field (outside the digest) to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Finite CDGAs: validation, cohomology, resonance and support loci.
    Cdga {
        #[command(subcommand)]
        action: CdgaAction,
        #[command(flatten)]
        common: Common,
    },
    /// Exponential and classical tangent cones at the identity.
    Tcone {
        #[command(subcommand)]
        action: TconeAction,
        #[command(flatten)]
        common: Common,
    },
    /// Tangent cone formula check; exit status 2 on NON-FORMAL.
    Formality {
        /// Torus-locus fixture name or JSON file for the characteristic variety.
        #[arg(long)]
        tori: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Fox calculus on finitely presented groups.
    Fox {
        #[command(subcommand)]
        action: FoxAction,
        /// Presentation given inline, e.g. "gens: x y; rel: [x, y]".
        #[arg(long, global = true)]
        presentation: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Central hyperplane arrangements.
    Arrangement {
        #[command(subcommand)]
        action: ArrangementAction,
        #[command(flatten)]
        common: Common,
    },
    /// Unimodular elliptic arrangements and their models.
    Elliptic {
        #[command(subcommand)]
        action: EllipticAction,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Clone, Copy)]
pub enum CdgaAction {
    /// Checks the CDGA axioms and the weight grading.
    Validate,
    /// Betti numbers and cohomology representatives.
    Cohomology,
    /// Resonance variety in the given degree.
    Resonance {
        /// Use the cohomology algebra with zero differential instead.
        #[arg(long)]
        of_cohomology: bool,
    },
    /// Support of the (co)homology of the universal complex.
    Support {
        #[arg(long, value_enum, default_value_t = Variant::Homological)]
        variant: Variant,
    },
    /// Compares resonance and support loci up to the given degree.
    Compare,
}

#[derive(ValueEnum, Clone, Copy)]
pub enum Variant {
    Homological,
    Cohomological,
}

#[derive(Subcommand, Clone)]
pub enum TconeAction {
    /// τ₁: union of rational subspaces.
    Exp {
        #[command(flatten)]
        polys: PolyArgs,
    },
    /// TC₁: initial ideal at the identity.
    Classical {
        #[command(flatten)]
        polys: PolyArgs,
    },
}

#[derive(Args, Clone)]
pub struct PolyArgs {
    /// Laurent polynomial in t1..tn (repeatable).
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// Number of variables for --poly.
    #[arg(long)]
    pub nvars: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
pub enum FoxAction {
    /// Abelianized Fox Jacobian.
    Alexander,
    /// Linearized Alexander matrix over ℚ[z].
    Linearized,
    /// Ideal of the first characteristic variety.
    V1,
    /// First resonance ideal from the linearized matrix.
    R1,
}

#[derive(Subcommand, Clone, Copy)]
pub enum ArrangementAction {
    /// Rank-2 flats.
    Flats,
    /// Orlik–Solomon algebra in degrees ≤ 2.
    Os,
    /// R¹ with local and 3-net components.
    R1,
}

#[derive(Subcommand, Clone)]
pub enum EllipticAction {
    /// Unimodularity check.
    Check,
    /// The CDGA model.
    Model,
    /// Full Conf(E*,2) computation; exit status 2 on NON-FORMAL.
    Pipeline {
        #[arg(long)]
        tori: Option<String>,
    },
    /// Compares two arrangements' lattices and R¹ (no general claim is made).
    Compare {
        /// Second arrangement: fixture name or JSON file.
        #[arg(long)]
        other: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (common, outcome) = match &cli.command {
        Command::Cdga { action, common } => (common, commands::cdga(*action, common)),
        Command::Tcone { action, common } => (common, commands::tcone(action, common)),
        Command::Formality { tori, common } => (common, commands::formality(tori.as_deref(), common)),
        Command::Fox { action, presentation, common } => (common, commands::fox(*action, presentation.as_deref(), common)),
        Command::Arrangement { action, common } => (common, commands::arrangement(*action, common)),
        Command::Elliptic { action, common } => (common, commands::elliptic(action, common)),
    };
    match outcome {
        Ok(out) => {
            let mut report = Report::new(out.command, out.input, out.data, out.verdict.clone());
            if common.timing {
                report.timing = Some(Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
            }
            let text = if common.json {
                serde_json::to_string(&report).expect("serializable")
            } else if common.pretty {
                serde_json::to_string_pretty(&report).expect("serializable")
            } else {
                render_text(&serde_json::to_value(&report).expect("serializable"))
            };
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
