//! JSON schemas for matrices, states, and channels, plus small file
//! helpers.  Entries are row-major split into `re`/`im` arrays; f64
//! values survive a round trip bit-exactly through serde_json.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Subsystems};
use crate::states::DensityMatrix;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.rows * self.cols || self.im.len() != self.re.len() {
            return Err(Error::ShapeMismatch(
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len(),
            ));
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| C64::new(r, i))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelJson {
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        Self {
            in_dim: ch.in_dim(),
            out_dim: ch.out_dim(),
            kraus: ch.kraus().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus: Result<Vec<ComplexMatrix>> =
            self.kraus.iter().map(|k| k.to_matrix()).collect();
        let ch = QuantumChannel::from_kraus(kraus?)?;
        if ch.in_dim() != self.in_dim || ch.out_dim() != self.out_dim {
            return Err(Error::DimMismatch(format!(
                "declared {}x{} but kraus are {}x{}",
                self.out_dim,
                self.in_dim,
                ch.out_dim(),
                ch.in_dim()
            )));
        }
        Ok(ch)
    }
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path)?;
    let parsed: MatrixJson = serde_json::from_str(&text)?;
    parsed.to_matrix()
}

pub fn save_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    let text = serde_json::to_string_pretty(&MatrixJson::from_matrix(m))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Load a density matrix, optionally reinterpreted over tensor factors.
pub fn load_density(path: &Path, dims: Option<&[usize]>) -> Result<DensityMatrix> {
    let mat = load_matrix(path)?;
    match dims {
        Some(d) => DensityMatrix::with_subsystems(mat, Subsystems::new(d.to_vec())?),
        None => DensityMatrix::new(mat),
    }
}

pub fn load_channel(path: &Path) -> Result<QuantumChannel> {
    let text = fs::read_to_string(path)?;
    let parsed: ChannelJson = serde_json::from_str(&text)?;
    parsed.to_channel()
}

pub fn save_channel(path: &Path, ch: &QuantumChannel) -> Result<()> {
    let text = serde_json::to_string_pretty(&ChannelJson::from_channel(ch))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Serialize any report to pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_roundtrip_exact() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| {
            C64::new(1.0 / (i as f64 + 1.5), (j as f64 - 0.3).exp())
        });
        let back = MatrixJson::from_matrix(&m).to_matrix().unwrap();
        assert_eq!(m.data(), back.data());
    }

    #[test]
    fn matrix_rejects_bad_lengths() {
        let bad = MatrixJson { rows: 2, cols: 2, re: vec![0.0; 3], im: vec![0.0; 3] };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn channel_roundtrip_preserves_choi() {
        let ch = crate::channels::random_dio(2, 3, 9).unwrap();
        let json = ChannelJson::from_channel(&ch);
        let back = json.to_channel().unwrap();
        assert_eq!(ch.in_dim(), back.in_dim());
        assert_eq!(ch.out_dim(), back.out_dim());
        assert!(ch.choi().sub(back.choi()).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn channel_rejects_dim_mismatch() {
        let ch = QuantumChannel::identity(2);
        let mut json = ChannelJson::from_channel(&ch);
        json.out_dim = 3;
        assert!(json.to_channel().is_err());
    }

    #[test]
    fn files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let rho = crate::states::max_coherent(4).unwrap();
        save_matrix(&path, rho.mat()).unwrap();
        let back = load_density(&path, Some(&[2, 2])).unwrap();
        assert_eq!(back.subs().dims(), &[2, 2]);
        assert_eq!(back.mat().data(), rho.mat().data());
    }

    proptest! {
        #[test]
        fn json_text_roundtrip_bit_exact(
            vals in proptest::collection::vec(
                prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO,
                8,
            )
        ) {
            let m = ComplexMatrix::new(
                2,
                2,
                (0..4).map(|i| C64::new(vals[i], vals[i + 4])).collect(),
            )
            .unwrap();
            let text = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
            let parsed: MatrixJson = serde_json::from_str(&text).unwrap();
            let back = parsed.to_matrix().unwrap();
            for (a, b) in m.data().iter().zip(back.data()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
