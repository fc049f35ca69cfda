use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "triadeform", version, about = "Triangular matrix groups, their abelian deformations and first-order checks")]
pub struct Cli {
    /// RNG seed for sampled checks; overrides TRIADEFORM_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random samples for checks that cannot run exhaustively.
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    /// Atom budget for the first-order evaluator.
    #[arg(long, global = true, default_value_t = triadeform::fo::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ring arithmetic and unit groups.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Ext(B, A) of two finitely generated abelian groups.
    Ext {
        /// Quotient group B, e.g. "Z/4" or "units(Z[sqrt(2)])".
        b: String,
        /// Kernel group A.
        a: String,
    },
    /// Symmetric 2-cocycles given as JSON files.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Deformed groups given by a spec JSON file.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Center, derived and Fitting subgroups, tori and widths.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// First-order formulas.
    #[command(subcommand)]
    Fo(FoCmd),
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    Info { ring: String },
    Units { ring: String },
    /// Exits 1 when `a` does not divide `b`.
    Divides { ring: String, a: String, b: String },
    /// Evaluates the Ψ divisibility predicate in a real quadratic order.
    Psi {
        ring: String,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        a: String,
    },
}

#[derive(Args, Debug)]
pub struct CocycleFile {
    #[arg(long)]
    file: String,
}

#[derive(Subcommand, Debug)]
pub enum CocycleCmd {
    Verify(CocycleFile),
    IsCoboundary(CocycleFile),
    IsCot(CocycleFile),
    /// Transports a cocycle along automorphisms ψ of A and η of B.
    Transport {
        #[arg(long)]
        file: String,
        /// Integer matrix for ψ: A → A′ (JSON or @file).
        #[arg(long)]
        psi: String,
        /// Integer matrix for η: B → B′ (JSON or @file).
        #[arg(long)]
        eta: String,
        /// A′; defaults to A.
        #[arg(long)]
        codomain: Option<String>,
        /// B′; defaults to B.
        #[arg(long)]
        domain: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct SpecFile {
    /// Deformation spec JSON: {"ring", "n", "cocycles"}.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    Build(SpecFile),
    /// Product of two elements given as JSON (or @file).
    Mul {
        #[arg(long)]
        spec: String,
        x: String,
        y: String,
    },
    CheckPresentation(SpecFile),
    FnIdentity(SpecFile),
    SplitIso(SpecFile),
    Enumerate {
        #[arg(long)]
        spec: String,
        /// Print every element.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// Deformation spec JSON file.
    #[arg(long)]
    group: String,
    /// Also compute the subgroup by brute force and compare.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Subcommand, Debug)]
pub enum StructureCmd {
    Center(GroupArgs),
    Derived(GroupArgs),
    Fitting(GroupArgs),
    /// Checks that every element of G′ is a product of `bound` commutators.
    Width {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    Torus {
        #[command(flatten)]
        args: GroupArgs,
        #[arg(long)]
        index: usize,
        /// Report the torus coordinate of this element instead.
        #[arg(long)]
        element: Option<String>,
    },
    /// Whether torsion lifts in Δ_i split over the center.
    Theta {
        #[arg(long)]
        group: String,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FoCmd {
    Parse { formula: String },
    Eval {
        /// Deformation spec JSON file for a finite group.
        #[arg(long)]
        model: String,
        /// Formula text, or a file containing it.
        #[arg(long)]
        formula: String,
        #[arg(long)]
        semantic: bool,
        /// NAME=center|derived|fitting|<file of element JSONs>.
        #[arg(long = "define")]
        defines: Vec<String>,
        /// NAME=<element JSON>.
        #[arg(long = "const")]
        constants: Vec<String>,
        /// VAR=<element JSON>.
        #[arg(long = "assign")]
        assignments: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.or_else(|| std::env::var("TRIADEFORM_SEED").ok().and_then(|s| s.parse().ok())).unwrap_or(0);
    let config = commands::Config { seed, trials: cli.trials, budget: cli.budget };
    match commands::run(&config, &cli.command) {
        Ok(report) => {
            println!("{}", commands::render(&report.body, cli.output));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("{}", serde_json::json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
