use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "charvar", version, about = "Eigenvalue varieties, K2 symbols and regulator integrals of two-bridge links")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Seed for every random choice (sample representations).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Self-check tolerance (eigenvariety residuals, quantization residual).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Sample count: verification points for eigenvariety, grid intervals for paths.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalue curve of a slice of the geometric component.
    Eigenvariety {
        link: PathBuf,
        #[arg(long, default_value_t = 1)]
        component: usize,
        /// Parabolic signs of the other meridians, e.g. "+" or "-1".
        #[arg(long, default_value = "")]
        slice_signs: String,
        #[arg(long)]
        require_hyperbolic: bool,
    },
    /// Cyclotomic certificate for every Newton-polygon edge.
    Tempered { curve: PathBuf },
    /// Tame symbols of {l, m}^ε (or --symbol) at the ideal points of a curve.
    Tame {
        curve: PathBuf,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Normalize a product of symbols, e.g. "{x, 1 - x} * {x*y, y}^2".
    SymbolReduce { symbol: String },
    /// Track a path on the curves and integrate η and ξ.
    Integrate {
        #[arg(required = true)]
        curves: Vec<PathBuf>,
        #[arg(long)]
        path: PathBuf,
        /// Chern–Simons invariant of the complete structure (defaults to 0, flagged).
        #[arg(long)]
        cs: Option<f64>,
        /// Symbol order q used in U (defaults to the tame-symbol candidate).
        #[arg(long)]
        q: Option<u64>,
    },
    /// V(t) along a deformation path from the complete structure.
    VolumePath {
        link: PathBuf,
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        component: usize,
        #[arg(long, default_value = "")]
        slice_signs: String,
    },
    /// Rational reconstruction of −∮ξ/4π² over a closed loop.
    Quantize {
        #[arg(required = true)]
        curves: Vec<PathBuf>,
        #[arg(long = "loop")]
        loop_path: PathBuf,
    },
    /// Oracle volume of a bundled triangulation, optionally deformed to m = exp(iπa).
    OracleVolume {
        /// "figure-eight", "whitehead" or a link JSON file
        link: String,
        #[arg(long, default_value_t = 0.0)]
        deform: f64,
        #[arg(long, default_value_t = 1)]
        component: usize,
    },
}

/// Stable exit codes, one per error class.
pub fn exit_code(class: &str) -> u8 {
    match class {
        "parse" => 10,
        "io" => 11,
        "degenerate-input" => 12,
        "non-univariate" => 13,
        "wrong-arity" => 14,
        "edge-not-on-polygon" => 15,
        "degree-cap" => 16,
        "invalid-code" => 17,
        "invalid-slice" => 18,
        "invalid-path" => 19,
        "no-hyperbolic-solution" => 20,
        "no-geometric-factor" => 21,
        "inconsistent-family" => 22,
        "elimination-collapse" => 23,
        "indeterminate" => 24,
        "untempered" => 30,
        "non-commuting" => 31,
        "not-special-linear" => 32,
        "not-handled" => 33,
        "branch-point" => 40,
        "divisor-collision" => 41,
        "tracking-failure" => 42,
        "insufficient-samples" => 43,
        "open-path" => 44,
        "reconstruction-failure" => 45,
        "gluing-divergence" => 50,
        "singular-input" => 51,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.cmd {
        Cmd::Eigenvariety { link, component, slice_signs, require_hyperbolic } => {
            commands::eigenvariety(g, &link, component, &slice_signs, require_hyperbolic)
        }
        Cmd::Tempered { curve } => commands::tempered(&curve),
        Cmd::Tame { curve, symbol } => commands::tame(&curve, symbol.as_deref()),
        Cmd::SymbolReduce { symbol } => commands::symbol_reduce(&symbol),
        Cmd::Integrate { curves, path, cs, q } => commands::integrate(g, &curves, &path, cs, q),
        Cmd::VolumePath { link, path, component, slice_signs } => {
            commands::volume_path(g, &link, &path, component, &slice_signs)
        }
        Cmd::Quantize { curves, loop_path } => commands::quantize(g, &curves, &loop_path),
        Cmd::OracleVolume { link, deform, component } => commands::oracle_volume(&link, deform, component),
    };
    match result.and_then(|text| commands::emit(g, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(e.class());
            let block = serde_json::json!({ "error": { "class": e.class(), "message": e.to_string(), "exit_code": code } });
            eprintln!("{block}");
            ExitCode::from(code)
        }
    }
}
