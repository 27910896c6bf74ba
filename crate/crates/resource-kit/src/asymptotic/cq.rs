//! Classical-quantum channels and the purification-induced channel of
//! a density matrix.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::monotones::vn_entropy;
use crate::states::{purify, DensityMatrix};

/// A CQ channel x -> zeta_x together with a source distribution.
#[derive(Clone, Debug)]
pub struct CQChannel {
    outputs: Vec<DensityMatrix>,
    /// Unit vectors when every output is pure (the common case here).
    vectors: Option<Vec<ComplexMatrix>>,
    source: Vec<f64>,
}

impl CQChannel {
    pub fn new(outputs: Vec<DensityMatrix>, source: Vec<f64>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::EmptyPool);
        }
        if outputs.len() != source.len() {
            return Err(Error::DimMismatch(format!(
                "{} outputs vs {} source entries",
                outputs.len(),
                source.len()
            )));
        }
        let sum: f64 = source.iter().sum();
        if source.iter().any(|&v| v < -1e-9) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotADistribution(format!("sum {sum}")));
        }
        Ok(Self { outputs, vectors: None, source })
    }

    /// Construct from explicit pure output vectors.
    pub fn from_vectors(vectors: Vec<ComplexMatrix>, source: Vec<f64>) -> Result<Self> {
        let outputs: Result<Vec<DensityMatrix>> =
            vectors.iter().map(DensityMatrix::pure).collect();
        let mut ch = Self::new(outputs?, source)?;
        ch.vectors = Some(vectors);
        Ok(ch)
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    pub fn vectors(&self) -> Option<&[ComplexMatrix]> {
        self.vectors.as_deref()
    }

    /// Single-letter overlap matrix V[a,b] = <zeta_a | zeta_b> for pure
    /// outputs.
    pub fn overlap_matrix(&self) -> Result<ComplexMatrix> {
        let vecs = self.vectors.as_ref().ok_or(Error::NotPure(f64::NAN))?;
        let k = vecs.len();
        Ok(ComplexMatrix::from_fn(k, k, |a, b| vecs[a].inner(&vecs[b])))
    }
}

/// The appendix's CQ channel |x><x| -> |zeta_x><zeta_x| of a state rho,
/// with source distribution p(x) = <x|rho|x>.
pub fn cq_from_state(rho: &DensityMatrix) -> Result<CQChannel> {
    let pur = purify(rho)?;
    CQChannel::from_vectors(pur.zetas, pur.probs)
}

/// Holevo mutual information I(W; p) = S(sum_x p zeta) - sum_x p S(zeta).
pub fn mutual_info(w: &CQChannel) -> Result<f64> {
    let dim = w.outputs()[0].dim();
    let mut avg = ComplexMatrix::zeros(dim, dim);
    let mut cond = 0.0;
    for (out, &p) in w.outputs().iter().zip(w.source().iter()) {
        if p <= 0.0 {
            continue;
        }
        avg = avg.add(&out.mat().scale(C64::new(p, 0.0)))?;
        cond += p * vn_entropy(out)?;
    }
    let avg = DensityMatrix::new(avg)?;
    Ok((vn_entropy(&avg)? - cond).max(0.0))
}
