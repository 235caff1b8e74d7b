//! Command-line front end: build models, run verifications, emit and check
//! certificates, decide stability, scan parameter ranges, produce reports.
//!
//! Exit codes: 0 success/verified, 1 verification failed, 2 usage error,
//! 3 budget exceeded.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hilbstab",
    about = "Exact-arithmetic workbench for finite Hilbert stability of curves with torus actions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Curve family: ribbon | doubleA | rosary1 | rosary2 | wiman
    #[arg(long)]
    model: String,
    /// Genus
    #[arg(long)]
    g: u32,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Write the JSON/CSV output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Add decimal renderings of rational values (display only, never used
    /// in verification)
    #[arg(long)]
    approx: bool,
    /// Include measured runtimes in verdicts (off by default so identical
    /// runs are byte-identical)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Structural model verification: span dimensions, scroll minors, the
    /// rosary quadric, weight distinctness
    Verify {
        #[command(flatten)]
        common: Common,
        /// Verify degrees 2..=mmax
        #[arg(long, default_value_t = 3)]
        mmax: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit a certificate (or family) and optionally verify it
    Cert {
        /// Certificate id: ribbon | rosary1 | rosary2 | wiman
        which: String,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u32,
        /// Emit a single family instead of the certificate,
        /// e.g. --family ribbon:Bminus
        #[arg(long)]
        family: Option<String>,
        /// Verify the certificate identity and its members
        #[arg(long)]
        check: bool,
        /// Max members to materialize per multibasis verification
        #[arg(long, default_value_t = 100_000)]
        budget_members: usize,
        /// Seed for deterministic member sampling
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Decide torus (semi)stability of the m-th Hilbert point
    Decide {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: u32,
        /// Max cutting planes before reporting "undecided (budget)"
        #[arg(long, default_value_t = 10_000)]
        budget_cuts: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Evaluate a single one-parameter subgroup
    Destab {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: u32,
        /// Comma-separated rational weights, e.g. "1,-1/2,-1/2"
        #[arg(long)]
        rho: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Scan a (g, m) range and tabulate verdicts, margins and slopes as CSV
    Scan {
        /// Curve family: ribbon | doubleA | rosary1 | rosary2 | wiman
        #[arg(long)]
        model: String,
        /// Genus range lo:hi (inclusive)
        #[arg(long)]
        g: String,
        /// Degree range lo:hi (inclusive)
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 10_000)]
        budget_cuts: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Model descriptor (and optional monomial-image table) as JSON
    Report {
        #[command(flatten)]
        common: Common,
        /// Also export the degree-m monomial image table
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            common,
            mmax,
            output,
        } => commands::cmd_verify(&common, mmax, &output),
        Command::Cert {
            which,
            g,
            m,
            family,
            check,
            budget_members,
            seed,
            output,
        } => commands::cmd_cert(&which, g, m, family.as_deref(), check, budget_members, seed, &output),
        Command::Decide {
            common,
            m,
            budget_cuts,
            output,
        } => commands::cmd_decide(&common, m, budget_cuts, &output),
        Command::Destab {
            common,
            m,
            rho,
            output,
        } => commands::cmd_destab(&common, m, &rho, &output),
        Command::Scan {
            model,
            g,
            m,
            budget_cuts,
            output,
        } => commands::cmd_scan(&model, &g, &m, budget_cuts, &output),
        Command::Report { common, m, output } => commands::cmd_report(&common, m, &output),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
