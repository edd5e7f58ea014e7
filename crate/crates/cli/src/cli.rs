use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ioncavity", version, about = "Trapped ion + cavity gate timing and RWA validation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Carrier quarter-turn times t_{m,m} and speedup ratios.
    Table1(Common),
    /// Sideband π-times t_{m-k,m} and speedup ratios.
    Table2 {
        #[command(flatten)]
        common: Common,
        /// Which drive supplies the sideband.
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
    },
    /// Compile a gate, print its pulses and truth-table fidelities.
    Gate {
        #[arg(value_enum)]
        gate: GateArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare closed-form evolutions with full propagation over ν/rate ratios.
    VerifyRwa(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Hadamard,
    Phase,
    Cnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Laser,
    Cavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rwa,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Laser Lamb-Dicke parameter(s); a comma list for the tables.
    #[arg(long, value_delimiter = ',')]
    pub eta_l: Option<Vec<f64>>,
    /// Cavity Lamb-Dicke parameter(s); a comma list for the tables.
    #[arg(long, value_delimiter = ',')]
    pub eta_c: Option<Vec<f64>>,
    /// Laser Rabi frequency Ω/2π in Hz.
    #[arg(long)]
    pub omega_hz: Option<f64>,
    /// Ion-cavity coupling g/2π in Hz.
    #[arg(long)]
    pub g_hz: Option<f64>,
    /// Trap frequency ν/2π in Hz.
    #[arg(long)]
    pub nu_hz: Option<f64>,
    /// Phonon numbers (tables) or the compiled control phonon number (gate).
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    /// Sideband order.
    #[arg(long)]
    pub k: Option<usize>,
    /// Phonon number encoding control |0⟩ (gate).
    #[arg(long)]
    pub m0: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// ν/Ω (or ν/g) ratios for verify-rwa.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Highest sideband order kept by full propagation.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Flat `key = value` file; command-line flags win over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 unless the printed table values (tables) or a
    /// monotone improvement with ratio (verify-rwa) are reproduced.
    #[arg(long)]
    pub check: bool,
}
