//! Quantum states on disk, as JSON or a compact little-endian binary form.
//!
//! Binary layout: magic `SPWS`, format version byte, kind byte (`0` pure,
//! `1` mixed), site count as `u32`, then `(re, im)` pairs as `f64`, row-major
//! for density matrices.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spinwire_core::linalg::{CMatrix, CVector};
use spinwire_core::QuantumState;

const MAGIC: &[u8; 4] = b"SPWS";
const BINARY_VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Mixed,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n: usize,
    kind: Kind,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn split(state: &QuantumState) -> (Kind, Vec<Complex64>) {
    match state {
        QuantumState::Pure { psi, .. } => (Kind::Pure, psi.iter().copied().collect()),
        QuantumState::Mixed { rho, .. } => {
            let d = rho.nrows();
            (
                Kind::Mixed,
                (0..d * d).map(|k| rho[(k / d, k % d)]).collect(),
            )
        }
    }
}

fn assemble(n: usize, kind: Kind, data: Vec<Complex64>) -> anyhow::Result<QuantumState> {
    if n == 0 || n > 20 {
        bail!("state files hold 1..=20 sites, got {n}");
    }
    let d = 1usize << n;
    let expected = match kind {
        Kind::Pure => d,
        Kind::Mixed => d * d,
    };
    if data.len() != expected {
        bail!(
            "expected {expected} amplitudes for {n} sites, found {}",
            data.len()
        );
    }
    Ok(match kind {
        Kind::Pure => QuantumState::pure(n, CVector::from_vec(data))?,
        Kind::Mixed => QuantumState::mixed(n, CMatrix::from_row_slice(d, d, &data))?,
    })
}

pub fn state_to_json(state: &QuantumState) -> String {
    let (kind, data) = split(state);
    let file = StateFile {
        n: state.site_count(),
        kind,
        re: data.iter().map(|c| c.re).collect(),
        im: data.iter().map(|c| c.im).collect(),
    };
    serde_json::to_string_pretty(&file).expect("state serializes") + "\n"
}

pub fn state_from_json(text: &str) -> anyhow::Result<QuantumState> {
    let file: StateFile = serde_json::from_str(text)?;
    if file.re.len() != file.im.len() {
        bail!("`re` and `im` differ in length");
    }
    let data = file
        .re
        .iter()
        .zip(&file.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    assemble(file.n, file.kind, data)
}

pub fn write_state_binary(state: &QuantumState, mut out: impl Write) -> anyhow::Result<()> {
    let (kind, data) = split(state);
    out.write_all(MAGIC)?;
    out.write_all(&[BINARY_VERSION, kind as u8])?;
    out.write_all(&(state.site_count() as u32).to_le_bytes())?;
    for c in data {
        out.write_all(&c.re.to_le_bytes())?;
        out.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_state_binary(mut input: impl Read) -> anyhow::Result<QuantumState> {
    let mut header = [0u8; 10];
    input.read_exact(&mut header).context("truncated header")?;
    if &header[..4] != MAGIC {
        bail!("not a binary state file");
    }
    if header[4] != BINARY_VERSION {
        bail!("unsupported binary state version {}", header[4]);
    }
    let kind = match header[5] {
        0 => Kind::Pure,
        1 => Kind::Mixed,
        other => bail!("unknown state kind {other}"),
    };
    let n = u32::from_le_bytes(header[6..10].try_into().expect("four bytes")) as usize;
    let mut rest = Vec::new();
    input.read_to_end(&mut rest)?;
    if rest.len() % 16 != 0 {
        bail!("trailing bytes after amplitudes");
    }
    let data = rest
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("eight bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("eight bytes"));
            Complex64::new(re, im)
        })
        .collect();
    assemble(n, kind, data)
}

/// Reads either format, telling them apart by the binary magic.
pub fn load_state(path: &Path) -> anyhow::Result<QuantumState> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if bytes.starts_with(MAGIC) {
        read_state_binary(bytes.as_slice())
    } else {
        state_from_json(
            std::str::from_utf8(&bytes).context("state file is neither binary nor UTF-8")?,
        )
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinwire_core::WireStateSpec;

    fn samples() -> Vec<QuantumState> {
        vec![
            WireStateSpec::RandomPure { seed: 1 }.resolve(3).unwrap(),
            WireStateSpec::RandomMixed { seed: 2, rank: 2 }
                .resolve(2)
                .unwrap(),
        ]
    }

    #[test]
    fn json_round_trip_is_exact() {
        for state in samples() {
            assert_eq!(state_from_json(&state_to_json(&state)).unwrap(), state);
        }
    }

    #[test]
    fn binary_round_trip_is_exact() {
        for state in samples() {
            let mut buf = Vec::new();
            write_state_binary(&state, &mut buf).unwrap();
            assert_eq!(read_state_binary(buf.as_slice()).unwrap(), state);
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(state_from_json(r#"{"n": 1, "kind": "pure", "re": [1.0], "im": [0.0]}"#).is_err());
        assert!(
            state_from_json(r#"{"n": 1, "kind": "pure", "re": [2.0, 0.0], "im": [0.0, 0.0]}"#)
                .is_err()
        );
        assert!(read_state_binary(&b"SPWS\x01"[..]).is_err());
        assert!(read_state_binary(&b"NOPE\x01\x00\x01\x00\x00\x00"[..]).is_err());
    }
}
