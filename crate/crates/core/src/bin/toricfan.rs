use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toricfan::cli::{run, Command};
use toricfan::topo::Field;

/// Invariants of rational fans: piecewise polynomials, Atiyah–Bredon
/// complexes, links, cell censuses and cubical subdivisions.
#[derive(Parser)]
#[command(name = "toricfan", version)]
struct Args {
    /// Fan file (JSON with dim, rays, cones).
    fan: PathBuf,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse the fan and print its face counts.
    Validate,
    Complete,
    Smooth,
    Simplicial,
    Hereditary,
    /// Facet-connected components of the maximal cones.
    Components,
    /// Ranks of piecewise polynomials per degree.
    Hilbert {
        #[arg(long)]
        max_degree: Option<u32>,
    },
    PpBasis {
        #[arg(long)]
        degree: u32,
    },
    /// Build the Atiyah–Bredon complexes and report their cohomology.
    AbCheck {
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Exit 1 unless Atiyah–Bredon cohomology vanishes in positive positions.
    Evenness {
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    Torsion {
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Evenness probe on the star fan of every cone.
    Sweep {
        #[arg(long)]
        max_degree: Option<u32>,
    },
    Links,
    Cubes,
    Census {
        /// C, R or R+.
        #[arg(long)]
        field: Field,
    },
    /// Write the barycentric subdivision of a cone's star as a fan file.
    Subdivide {
        #[arg(long)]
        out: PathBuf,
        /// Cone id; 0 is the zero cone.
        #[arg(long, default_value_t = 0)]
        cone: usize,
    },
    /// Exit 1 unless the ambient fan completes this one.
    CheckCompletion {
        #[arg(long)]
        ambient: PathBuf,
    },
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Complete => Command::Complete,
            Cmd::Smooth => Command::Smooth,
            Cmd::Simplicial => Command::Simplicial,
            Cmd::Hereditary => Command::Hereditary,
            Cmd::Components => Command::Components,
            Cmd::Hilbert { max_degree } => Command::Hilbert { max_degree },
            Cmd::PpBasis { degree } => Command::PpBasis { degree },
            Cmd::AbCheck { max_degree, modulus } => Command::AbCheck { max_degree, modulus },
            Cmd::Evenness { max_degree, modulus } => Command::Evenness { max_degree, modulus },
            Cmd::Torsion { max_degree } => Command::Torsion { max_degree },
            Cmd::Sweep { max_degree } => Command::Sweep { max_degree },
            Cmd::Links => Command::Links,
            Cmd::Cubes => Command::Cubes,
            Cmd::Census { field } => Command::Census { field },
            Cmd::Subdivide { out, cone } => Command::Subdivide { out, cone },
            Cmd::CheckCompletion { ambient } => Command::CheckCompletion { ambient },
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = run(&args.fan, &args.command.into());
    print!("{}", outcome.render());
    ExitCode::from(outcome.exit_code as u8)
}
