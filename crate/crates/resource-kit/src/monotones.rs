//! Scalar resource quantifiers: entropies, relative entropy of
//! coherence, Renyi entanglement entropies, l1-coherence, negativity
//! and the distillable entanglement of maximally correlated states.
//!
//! All logarithms are base 2; every quantity is reported in bits.

use crate::error::{Error, Result};
use crate::matrix::{partial_transpose, trace_norm, Subsystems};
use crate::states::{dephase_canonical, DensityMatrix, MCState};

/// Eigenvalues below this are treated as zero rank in entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Schmidt coefficients below this are dropped in Renyi entropies.
pub const SCHMIDT_CUTOFF: f64 = 1e-10;

/// A spectrum together with the cutoff used to truncate it.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub values: Vec<f64>,
    pub cutoff: f64,
}

impl SpectrumReport {
    pub fn new(values: Vec<f64>, cutoff: f64) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v < -cutoff) {
            return Err(Error::NotADistribution(format!("negative value {v:e}")));
        }
        Ok(Self { values, cutoff })
    }

    /// Entries above the cutoff.
    pub fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(move |&v| v > self.cutoff)
    }
}

fn entropy_of(values: impl Iterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for v in values {
        s -= v * v.log2();
    }
    s
}

/// Von Neumann entropy S(rho) in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = rho.eig()?;
    let spec = SpectrumReport { values: eig.values, cutoff: ENTROPY_CUTOFF };
    Ok(entropy_of(spec.support()).max(0.0))
}

/// Shannon entropy of a probability distribution, in bits.
pub fn shannon(p: &[f64]) -> Result<f64> {
    if let Some(&v) = p.iter().find(|&&v| v < -1e-12 || !v.is_finite()) {
        return Err(Error::NotADistribution(format!("entry {v}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("sum {sum}")));
    }
    Ok(entropy_of(p.iter().copied().filter(|&v| v > ENTROPY_CUTOFF)).max(0.0))
}

/// Relative entropy of coherence C_r(rho) = S(Delta(rho)) - S(rho).
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    let pinched = dephase_canonical(rho)?;
    let cr = vn_entropy(&pinched)? - vn_entropy(rho)?;
    Ok(cr.max(0.0))
}

/// Schmidt spectrum of a pure bipartite state: eigenvalues of the
/// reduced state on the first factor, above [`SCHMIDT_CUTOFF`].
pub fn schmidt_spectrum(psi: &DensityMatrix) -> Result<Vec<f64>> {
    let subs = psi.subs();
    if subs.len() != 2 {
        return Err(Error::BadSubsystems {
            dims: subs.dims().to_vec(),
            dim: psi.dim(),
        });
    }
    let top = psi.eig()?.values[0];
    if top < 1.0 - 1e-9 {
        return Err(Error::NotPure(top));
    }
    let reduced = crate::matrix::partial_trace(psi.mat(), subs, &[0])?;
    let eig = crate::matrix::hermitian_eig(&reduced)?;
    Ok(eig.values.into_iter().filter(|&v| v > SCHMIDT_CUTOFF).collect())
}

/// Renyi alpha-entropy of entanglement of a pure bipartite state.
/// `alpha = f64::INFINITY` gives the min-entropy; alpha = 1 the usual
/// entanglement entropy; alpha = 0 the log Schmidt rank.
pub fn renyi_entanglement(psi: &DensityMatrix, alpha: f64) -> Result<f64> {
    if alpha < 0.0 || alpha.is_nan() {
        return Err(Error::BadAlpha(alpha));
    }
    let lambda = schmidt_spectrum(psi)?;
    let e = if alpha == 0.0 {
        (lambda.len() as f64).log2()
    } else if alpha.is_infinite() {
        let max = lambda.iter().cloned().fold(0.0_f64, f64::max);
        -max.log2()
    } else if (alpha - 1.0).abs() < f64::EPSILON {
        entropy_of(lambda.into_iter())
    } else {
        let power: f64 = lambda.iter().map(|&l| l.powf(alpha)).sum();
        power.log2() / (1.0 - alpha)
    };
    Ok(e.max(0.0))
}

/// l1 norm of coherence: sum of |rho_ij| over i != j.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += rho.mat()[(i, j)].norm();
            }
        }
    }
    s
}

/// Negativity (||rho^Gamma||_1 - 1) / 2 across the given bipartition.
pub fn negativity(rho: &DensityMatrix, subs: &Subsystems) -> Result<f64> {
    if subs.len() != 2 {
        return Err(Error::BadSubsystems {
            dims: subs.dims().to_vec(),
            dim: rho.dim(),
        });
    }
    subs.check_matches(rho.mat())?;
    let pt = partial_transpose(rho.mat(), subs, 1)?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

/// Distillable entanglement of a bipartite MC state:
/// h({c_ii}) - S(coeff).
pub fn mc_distillable(mc: &MCState) -> Result<f64> {
    if mc.parties() != 2 {
        return Err(Error::DimMismatch(format!(
            "mc_distillable needs a bipartite MC state, got {} parties",
            mc.parties()
        )));
    }
    let diag = mc.coeff().diagonal_probs();
    Ok((shannon(&diag)? - vn_entropy(mc.coeff())?).max(0.0))
}
