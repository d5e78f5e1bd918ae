use alloc::vec::Vec;

// Only used when std is absent from the build graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::ProtocolId;
use super::simulator::Simulator;
use super::wire::{random_bloch, WireStateSpec};
use crate::chain::ChainSpec;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BatchSample {
    pub sample: usize,
    pub fidelity: f64,
    pub leakage: f64,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BatchStatistics {
    pub protocol: ProtocolId,
    pub n: usize,
    pub seed: u64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Population standard deviation.
    pub std: f64,
    pub samples: Vec<BatchSample>,
}

/// Generator for sample `index`: the master seed picks the key and the index
/// picks the stream, so samples can be drawn in any order.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// One batch sample: a Haar-random `r` and, except for the initialized
/// protocol, a Haar-random pure wire.
pub fn batch_sample(
    sim: &Simulator,
    protocol: ProtocolId,
    seed: u64,
    index: usize,
) -> Result<BatchSample> {
    let mut rng = sample_rng(seed, index);
    let r = random_bloch(&mut rng);
    let wire = match protocol {
        ProtocolId::SingleInitialized => WireStateSpec::AllDown,
        _ => WireStateSpec::RandomPure { seed: rng.random() },
    };
    let t = sim.spec().transfer_time();
    let report = sim.run(protocol, &r, &wire, t)?;
    Ok(BatchSample {
        sample: index,
        fidelity: report.fidelity,
        leakage: report.leakage,
        t,
    })
}

impl BatchStatistics {
    pub fn from_samples(
        protocol: ProtocolId,
        n: usize,
        seed: u64,
        samples: Vec<BatchSample>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter(
                "batch needs at least one sample".into(),
            ));
        }
        let count = samples.len() as f64;
        let mean = samples.iter().map(|s| s.fidelity).sum::<f64>() / count;
        let var = samples
            .iter()
            .map(|s| (s.fidelity - mean).powi(2))
            .sum::<f64>()
            / count;
        Ok(Self {
            protocol,
            n,
            seed,
            mean,
            min: samples
                .iter()
                .map(|s| s.fidelity)
                .fold(f64::INFINITY, f64::min),
            max: samples
                .iter()
                .map(|s| s.fidelity)
                .fold(f64::NEG_INFINITY, f64::max),
            std: var.sqrt(),
            samples,
        })
    }
}

pub fn batch_average(
    spec: &ChainSpec,
    protocol: ProtocolId,
    samples: usize,
    seed: u64,
) -> Result<BatchStatistics> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "batch needs at least one sample".into(),
        ));
    }
    let sim = Simulator::new(spec)?;
    let drawn = (0..samples)
        .map(|i| batch_sample(&sim, protocol, seed, i))
        .collect::<Result<Vec<_>>>()?;
    BatchStatistics::from_samples(protocol, spec.n, seed, drawn)
}
