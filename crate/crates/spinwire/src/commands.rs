//! One function per subcommand, each returning the serialized output and
//! whether the checked property held.

use std::thread;

use anyhow::{bail, Context};
use serde::Serialize;
use spinwire_core::chain::spmc_check;
use spinwire_core::dynamics::verify_mirror_relations;
use spinwire_core::linalg::{commutator, frobenius_distance};
use spinwire_core::pauli::{hamiltonian_symbolic, nested_adjoint, to_matrix, DEFAULT_TERM_BUDGET};
use spinwire_core::protocols::{
    batch_sample, BatchStatistics, DiFrancoMode, ProtocolId, Simulator, SingleQubitOptions,
    TransferReport,
};
use spinwire_core::{ChainSpec, PauliOperator};

use crate::config::{CommandKind, Format, RunConfig};

/// Serialized output of a command plus its verdict.
#[derive(Debug)]
pub struct Outcome {
    pub payload: String,
    pub pass: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    pass: bool,
    result: T,
}

fn json<T: Serialize>(cfg: &RunConfig, pass: bool, result: T) -> anyhow::Result<Outcome> {
    let envelope = Envelope {
        tool: "spinwire",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        pass,
        result,
    };
    Ok(Outcome {
        payload: serde_json::to_string_pretty(&envelope)? + "\n",
        pass,
    })
}

/// CSV with the version and config as leading `#` comment lines.
fn csv_with_header<R: Serialize>(
    cfg: &RunConfig,
    pass: bool,
    rows: impl IntoIterator<Item = R>,
) -> anyhow::Result<Outcome> {
    let mut out = format!(
        "# spinwire {}\n# config {}\n",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(cfg)?
    );
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    out.push_str(std::str::from_utf8(&writer.into_inner()?)?);
    Ok(Outcome { payload: out, pass })
}

fn require_format(cfg: &RunConfig, allowed: &[Format]) -> anyhow::Result<()> {
    if !allowed.contains(&cfg.format) {
        bail!(
            "format {:?} is not available for `{:?}`",
            cfg.format,
            cfg.command
        );
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match cfg.command {
        CommandKind::Spectrum => spectrum(cfg),
        CommandKind::Transfer => transfer(cfg),
        CommandKind::Expand => expand(cfg),
        CommandKind::Mirror => mirror(cfg),
        CommandKind::Scan => scan(cfg),
        CommandKind::Batch => batch(cfg),
    }
}

fn spectrum(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json])?;
    let report = spmc_check(&cfg.chain_spec()?, cfg.tol)?;
    json(cfg, report.spmc_pass, report)
}

fn simulator(cfg: &RunConfig, spec: &ChainSpec) -> anyhow::Result<Simulator> {
    let min = cfg.protocol.min_sites();
    if spec.n < min {
        bail!(
            "protocol {} needs n >= {min}, got n = {}",
            cfg.protocol,
            spec.n
        );
    }
    Ok(Simulator::new(spec)?)
}

fn run_protocol(cfg: &RunConfig, sim: &Simulator, t: f64) -> anyhow::Result<TransferReport> {
    let wire = cfg.wire_spec(cfg.protocol.wire_sites(sim.spec().n))?;
    let r = cfg.bloch();
    Ok(match (cfg.protocol, cfg.outcomes) {
        (ProtocolId::DiFranco, Some([j, k])) => {
            sim.difranco_at(&r, &wire, DiFrancoMode::Forced { j, k }, true, t)?
        }
        (ProtocolId::DiFranco, None) => {
            sim.difranco_at(&r, &wire, DiFrancoMode::Exhaustive, true, t)?
        }
        (_, Some(_)) => bail!("--outcomes only applies to difranco"),
        (ProtocolId::SingleInitialized, None) => {
            if cfg.wire != crate::config::WireKind::AllDown {
                bail!("single-init always uses the all-down wire");
            }
            sim.single_qubit_at(cfg.protocol, &r, &wire, SingleQubitOptions::default(), t)?
        }
        (protocol, None) => sim.run(protocol, &r, &wire, t)?,
    })
}

/// Claim protocols pass at `fidelity >= 1 - tol`; diagnostics always pass.
fn verdict(protocol: ProtocolId, fidelity: f64, tol: f64) -> bool {
    !protocol.promises_perfection() || fidelity >= 1.0 - tol
}

fn transfer(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json])?;
    let spec = cfg.chain_spec()?;
    let sim = simulator(cfg, &spec)?;
    let report = run_protocol(cfg, &sim, spec.transfer_time())?;
    json(cfg, verdict(cfg.protocol, report.fidelity, cfg.tol), report)
}

#[derive(Serialize)]
struct ScanPoint {
    t: f64,
    fidelity: f64,
}

fn scan(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json, Format::Csv])?;
    let spec = cfg.chain_spec()?;
    let sim = simulator(cfg, &spec)?;
    let points = cfg
        .time_grid()?
        .into_iter()
        .map(|t| {
            Ok(ScanPoint {
                t,
                fidelity: run_protocol(cfg, &sim, t)?.fidelity,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    match cfg.format {
        Format::Csv => csv_with_header(cfg, true, points),
        _ => json(cfg, true, points),
    }
}

#[derive(Serialize)]
struct BatchRow {
    protocol: ProtocolId,
    n: usize,
    sample: usize,
    fidelity: f64,
    leakage: f64,
    t: f64,
}

fn batch(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json, Format::Csv])?;
    if cfg.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let spec = cfg.chain_spec()?;
    let sim = simulator(cfg, &spec)?;
    let workers = thread::available_parallelism()
        .map_or(1, |w| w.get())
        .min(cfg.samples);
    // sample i goes to worker i % workers; each sample has its own stream
    let mut samples = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let sim = &sim;
                scope.spawn(move || {
                    (w..cfg.samples)
                        .step_by(workers)
                        .map(|i| batch_sample(sim, cfg.protocol, cfg.seed, i))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("batch worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?
    .into_iter()
    .flatten()
    .collect::<Vec<_>>();
    samples.sort_by_key(|s| s.sample);
    let stats = BatchStatistics::from_samples(cfg.protocol, spec.n, cfg.seed, samples)?;
    let pass = verdict(cfg.protocol, stats.min, cfg.tol);
    match cfg.format {
        Format::Csv => {
            let rows: Vec<BatchRow> = stats
                .samples
                .iter()
                .map(|s| BatchRow {
                    protocol: stats.protocol,
                    n: stats.n,
                    sample: s.sample,
                    fidelity: s.fidelity,
                    leakage: s.leakage,
                    t: s.t,
                })
                .collect();
            csv_with_header(cfg, pass, rows)
        }
        _ => json(cfg, pass, stats),
    }
}

fn mirror(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json])?;
    let report = verify_mirror_relations(&cfg.chain_spec()?, cfg.tol)?;
    json(cfg, report.all_pass, report)
}

/// Residuals are relative to the Frobenius norm of the dense iterate.
const VERIFY_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct Iterate {
    depth: usize,
    terms: usize,
    support: Vec<usize>,
    lines: Vec<String>,
}

#[derive(Serialize)]
struct Verification {
    couplings: Vec<f64>,
    tolerance: f64,
    residuals: Vec<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct Expansion {
    n: usize,
    operator: String,
    iterates: Vec<Iterate>,
    verification: Option<Verification>,
}

fn expand(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    require_format(cfg, &[Format::Json, Format::Text])?;
    let expr = cfg.op.as_deref().context("expand needs --op")?;
    let o = PauliOperator::parse_expression(cfg.n, expr)?;
    let h = hamiltonian_symbolic(cfg.n)?;
    let iterates = nested_adjoint(&h, &o, cfg.depth, DEFAULT_TERM_BUDGET)?;

    let verification = if cfg.verify_matrix {
        // the symbolic Hamiltonian carries no field term
        let spec = cfg.chain_spec()?.with_field(0.0);
        let couplings = spec.couplings();
        let h_dense = spinwire_core::chain::hamiltonian_dense(&spec)?;
        let mut dense = to_matrix(&o, &couplings)?;
        let mut residuals = Vec::with_capacity(iterates.len());
        for (k, op) in iterates.iter().enumerate() {
            if k > 0 {
                dense = commutator(&h_dense, &dense);
            }
            let scale = dense.norm().max(1.0);
            residuals.push(frobenius_distance(&to_matrix(op, &couplings)?, &dense) / scale);
        }
        let pass = residuals.iter().all(|&r| r <= VERIFY_TOL);
        Some(Verification {
            couplings,
            tolerance: VERIFY_TOL,
            residuals,
            pass,
        })
    } else {
        None
    };
    let pass = verification.as_ref().is_none_or(|v| v.pass);

    if cfg.format == Format::Text {
        let mut text = String::new();
        for (k, op) in iterates.iter().enumerate() {
            text.push_str(&format!("# depth {k}: {} terms\n{op}", op.weight()));
        }
        if let Some(v) = &verification {
            text.push_str(&format!(
                "# matrix check: max residual {:e}, pass {}\n",
                v.residuals.iter().fold(0.0f64, |a, &b| a.max(b)),
                v.pass
            ));
        }
        return Ok(Outcome {
            payload: text,
            pass,
        });
    }
    let iterates = iterates
        .iter()
        .enumerate()
        .map(|(depth, op)| Iterate {
            depth,
            terms: op.weight(),
            support: op.support().into_iter().collect(),
            lines: op.to_string().lines().map(str::to_owned).collect(),
        })
        .collect();
    json(
        cfg,
        pass,
        Expansion {
            n: cfg.n,
            operator: expr.to_owned(),
            iterates,
            verification,
        },
    )
}
