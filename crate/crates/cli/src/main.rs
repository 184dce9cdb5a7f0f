mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BarArgs, MethodArg};

#[derive(Parser)]
#[command(name = "daggerhom", version, about = "Exact checks for dagger algebras, bar complexes and Hochschild homology")]
struct Cli {
    #[command(flatten)]
    output: Output,
    /// Cap on ball sizes and form-space dimensions.
    #[arg(long, global = true, env = "DAGGERHOM_CAP", default_value_t = 1_000_000)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Render a table instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Noncommutative torus computations.
    Torus {
        #[command(subcommand)]
        target: TorusTarget,
    },
    /// Finite-dimensional algebras.
    Finite {
        #[command(subcommand)]
        target: FiniteTarget,
    },
    /// Commutator quotients along a tower of finite groups.
    Iwasawa {
        #[arg(long)]
        tower: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Level of the X-complex computed at each stage.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Dagger gauge of an element file.
    Gauge {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Bar complex identities, contraction and growth certificates.
    Bar {
        #[arg(long, default_value = "free:2")]
        group: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        ball: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, hide = true)]
        corrupt_prism_sign: bool,
    },
}

#[derive(Subcommand)]
enum TorusTarget {
    /// Hochschild homology totals.
    Hh {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value = "6/5", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 6)]
        window: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Graded)]
        method: MethodArg,
    },
}

#[derive(Subcommand)]
enum FiniteTarget {
    /// Homology of the X-complex of a group algebra, `m2` or `field`.
    X {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.cap;
    let result = match cli.command {
        Command::Verify { target: VerifyTarget::Bar { group, max_degree, ball, samples, seed, p, corrupt_prism_sign } } => {
            commands::verify_bar(&BarArgs { group, max_degree, ball, samples, seed, p, cap, corrupt_prism_sign })
        }
        Command::Torus { target: TorusTarget::Hh { p, lambda, window, method } } => commands::torus_hh(p, &lambda, window, method),
        Command::Finite { target: FiniteTarget::X { group, level } } => commands::finite_x(&group, level, cap),
        Command::Iwasawa { tower, levels, n } => commands::iwasawa(&tower, levels, n, cap),
        Command::Gauge { input, p } => commands::gauge(&input, p),
    };
    match result {
        Ok(report) => {
            if cli.output.pretty {
                print!("{}", report.render_pretty());
            } else {
                println!("{}", serde_json::to_string(&report.to_json()).expect("serializable"));
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
