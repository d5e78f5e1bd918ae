use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use spinwire_core::protocols::ProtocolId;

use crate::config::{CommandKind, Format, ProfileKind, RunConfig, WireKind};

#[derive(Parser, Debug)]
#[command(
    name = "spinwire",
    version,
    about = "Perfect state transfer on engineered xx spin chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One-excitation spectrum and the parity matching check.
    Spectrum(Flags),
    /// Run one transfer protocol.
    Transfer(Flags),
    /// Nested commutators of an operator with the symbolic Hamiltonian.
    Expand(Flags),
    /// Heisenberg-picture mirror relations at the transfer time.
    Mirror(Flags),
    /// Fidelity on a grid of evolution times.
    Scan(Flags),
    /// Fidelity statistics over random inputs and wires.
    Batch(Flags),
}

#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Number of sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Global coupling; the transfer time is pi / J.
    #[arg(long)]
    pub j: Option<f64>,
    /// Uniform magnetic field.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, value_enum)]
    pub profile: Option<ProfileKind>,
    /// Comma-separated couplings J1..J(n-1); implies `--profile custom`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub couplings: Option<Vec<f64>>,
    /// code2, single-init, single-uninit or difranco.
    #[arg(long)]
    pub protocol: Option<ProtocolId>,
    /// Bloch vector to send, `x,y,z`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub wire: Option<WireKind>,
    /// State file for `--wire file` (JSON or binary).
    #[arg(long)]
    pub wire_file: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rank of a random mixed wire.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Forced measurement outcomes `j,k` (each ±0.5) for difranco.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub outcomes: Option<Vec<f64>>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Operator in Pauli letters, e.g. "X1 X2 + Y1 Y2".
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Check every iterate against dense matrix commutators.
    #[arg(long)]
    pub verify_matrix: bool,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of grid points for `scan`.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file whose keys override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> anyhow::Result<RunConfig> {
        let (kind, flags) = match self.command {
            Command::Spectrum(f) => (CommandKind::Spectrum, f),
            Command::Transfer(f) => (CommandKind::Transfer, f),
            Command::Expand(f) => (CommandKind::Expand, f),
            Command::Mirror(f) => (CommandKind::Mirror, f),
            Command::Scan(f) => (CommandKind::Scan, f),
            Command::Batch(f) => (CommandKind::Batch, f),
        };
        flags.into_config(kind)
    }
}

impl Flags {
    pub fn into_config(self, command: CommandKind) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig {
            command,
            ..RunConfig::default()
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(n, j, b, protocol, wire, seed, tol, depth, samples, points, t_min, format);
        if let Some(p) = self.profile {
            cfg.profile = p;
        }
        if let Some(c) = self.couplings {
            cfg.couplings = Some(c);
            if self.profile.is_none() {
                cfg.profile = ProfileKind::Custom;
            }
        }
        if let Some(r) = self.r {
            cfg.r = r.try_into().map_err(|v: Vec<f64>| {
                anyhow::anyhow!("--r takes 3 components, got {}", v.len())
            })?;
        }
        if let Some(o) = self.outcomes {
            let o: [f64; 2] = o.try_into().map_err(|v: Vec<f64>| {
                anyhow::anyhow!("--outcomes takes 2 values, got {}", v.len())
            })?;
            cfg.outcomes = Some(o);
        }
        cfg.wire_file = self.wire_file.or(cfg.wire_file);
        cfg.rank = self.rank.or(cfg.rank);
        cfg.op = self.op.or(cfg.op);
        cfg.t_max = self.t_max.or(cfg.t_max);
        cfg.output = self.output.or(cfg.output);
        cfg.verify_matrix |= self.verify_matrix;
        match self.config {
            Some(path) => cfg.overlay_file(&path),
            None => Ok(cfg),
        }
    }
}
