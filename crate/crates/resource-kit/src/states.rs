//! Density matrices, dephasing, and the maximally-correlated (MC)
//! embedding between coherence on one system and entanglement of
//! correlated states on many.
//!
//! The incoherent basis is fixed to the computational basis of each
//! factor; any other basis enters through an explicit [`BasisSpec`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eig, partial_trace, ComplexMatrix, HermitianEig, Subsystems,
};

/// Tolerance for density-matrix invariants.
pub const TOL_DENSITY: f64 = 1e-9;
/// Tolerance for basis orthonormality.
pub const TOL_BASIS: f64 = 1e-10;

/// A certified density operator: Hermitian, positive semidefinite and
/// unit trace within [`TOL_DENSITY`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    subs: Subsystems,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let dim = mat.require_square()?;
        Self::with_subsystems(mat, Subsystems::single(dim))
    }

    pub fn with_subsystems(mat: ComplexMatrix, subs: Subsystems) -> Result<Self> {
        subs.check_matches(&mat)?;
        let dev = mat.hermiticity_deviation();
        if dev > TOL_DENSITY {
            return Err(Error::NotADensityMatrix(format!(
                "hermiticity deviation {dev:e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_DENSITY || tr.im.abs() > TOL_DENSITY {
            return Err(Error::NotADensityMatrix(format!("trace {tr}")));
        }
        let eig = hermitian_eig(&mat)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -TOL_DENSITY {
            return Err(Error::NotADensityMatrix(format!("min eigenvalue {min:e}")));
        }
        Ok(Self { mat, subs })
    }

    /// Rank-1 state |v><v| from a (normalized) column vector.
    pub fn pure(v: &ComplexMatrix) -> Result<Self> {
        let norm = v.inner(v).re.sqrt();
        if (norm - 1.0).abs() > TOL_DENSITY {
            return Err(Error::NotADensityMatrix(format!("vector norm {norm}")));
        }
        Self::new(v.outer(v))
    }

    pub fn pure_with_subsystems(v: &ComplexMatrix, subs: Subsystems) -> Result<Self> {
        let d = Self::pure(v)?;
        Self::with_subsystems(d.mat, subs)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn subs(&self) -> &Subsystems {
        &self.subs
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn eig(&self) -> Result<HermitianEig> {
        hermitian_eig(&self.mat)
    }

    /// Diagonal in the computational basis, clamped to [0, 1].
    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re.clamp(0.0, 1.0)).collect()
    }

    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).map(|m| m.trace().re).unwrap_or(0.0)
    }

    pub fn reinterpret(&self, subs: Subsystems) -> Result<Self> {
        subs.check_matches(&self.mat)?;
        Ok(Self { mat: self.mat.clone(), subs })
    }
}

/// An ordered orthonormal basis (columns) with a human-readable label.
#[derive(Clone, Debug)]
pub struct BasisSpec {
    vectors: ComplexMatrix,
    label: String,
}

impl BasisSpec {
    pub fn new(vectors: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for i in 0..vectors.cols() {
            for j in 0..vectors.cols() {
                let ip = vectors.column(i).inner(&vectors.column(j));
                let expect = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((ip - C64::new(expect, 0.0)).norm());
            }
        }
        if dev > TOL_BASIS {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { vectors, label: label.into() })
    }

    /// The computational basis of the given dimension.
    pub fn canonical(dim: usize) -> Self {
        Self { vectors: ComplexMatrix::identity(dim), label: "canonical".into() }
    }

    /// Basis obtained by applying a unitary to the canonical basis.
    pub fn from_unitary(u: &ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        Self::new(u.clone(), label)
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn count(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vector(&self, i: usize) -> ComplexMatrix {
        self.vectors.column(i)
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_canonical(&self) -> bool {
        self.vectors == ComplexMatrix::identity(self.dim())
    }
}

/// Dephasing of an arbitrary (not necessarily positive) operator:
/// sum_i |b_i><b_i| M |b_i><b_i|.  Linear building block for channel
/// covariance checks.
pub fn dephase_op(m: &ComplexMatrix, basis: &BasisSpec) -> Result<ComplexMatrix> {
    let dim = m.require_square()?;
    if basis.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "basis dim {} vs operator dim {}",
            basis.dim(),
            dim
        )));
    }
    if basis.is_canonical() {
        let mut out = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            out[(i, i)] = m[(i, i)];
        }
        return Ok(out);
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..basis.count() {
        let b = basis.vector(i);
        let w = b.inner(&m.matmul(&b)?);
        let proj = b.outer(&b);
        out = out.add(&proj.scale(w))?;
    }
    Ok(out)
}

/// Delta_B(rho): the state pinched to its diagonal in basis `b`.
pub fn dephase(rho: &DensityMatrix, b: &BasisSpec) -> Result<DensityMatrix> {
    let out = dephase_op(rho.mat(), b)?;
    DensityMatrix::with_subsystems(out, rho.subs().clone())
}

/// Dephasing in the canonical (incoherent) basis.
pub fn dephase_canonical(rho: &DensityMatrix) -> Result<DensityMatrix> {
    dephase(rho, &BasisSpec::canonical(rho.dim()))
}

/// The maximally coherent state of dimension d as a rank-1 density matrix.
pub fn max_coherent(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let v = ComplexMatrix::from_fn(d, 1, |_, _| C64::new(amp, 0.0));
    DensityMatrix::pure(&v)
}

/// A maximally correlated state, stored as its coefficient matrix plus
/// the local bases it is correlated in.
#[derive(Clone, Debug)]
pub struct MCState {
    coeff: DensityMatrix,
    bases: Vec<BasisSpec>,
}

impl MCState {
    pub fn new(coeff: DensityMatrix, bases: Vec<BasisSpec>) -> Result<Self> {
        if bases.len() < 2 {
            return Err(Error::DimMismatch(format!(
                "MC state needs at least 2 parties, got {}",
                bases.len()
            )));
        }
        let d = coeff.dim();
        for b in &bases {
            if b.count() < d {
                return Err(Error::DimMismatch(format!(
                    "local basis has {} vectors < coefficient dim {}",
                    b.count(),
                    d
                )));
            }
        }
        Ok(Self { coeff, bases })
    }

    pub fn coeff(&self) -> &DensityMatrix {
        &self.coeff
    }

    pub fn bases(&self) -> &[BasisSpec] {
        &self.bases
    }

    pub fn parties(&self) -> usize {
        self.bases.len()
    }

    pub fn local_dim(&self) -> usize {
        self.coeff.dim()
    }

    /// The full N-party operator sum_ij c_ij |a_i b_i ...><a_j b_j ...|.
    pub fn expand(&self) -> Result<DensityMatrix> {
        let d = self.local_dim();
        // Correlated vectors |a_i>|b_i>|...>
        let mut corr: Vec<ComplexMatrix> = Vec::with_capacity(d);
        for i in 0..d {
            let mut v = self.bases[0].vector(i);
            for b in &self.bases[1..] {
                v = v.kron(&b.vector(i));
            }
            corr.push(v);
        }
        let total: usize = self.bases.iter().map(|b| b.dim()).product();
        let mut out = ComplexMatrix::zeros(total, total);
        for i in 0..d {
            for j in 0..d {
                let c = self.coeff.mat()[(i, j)];
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                out = out.add(&corr[i].outer(&corr[j]).scale(c))?;
            }
        }
        let subs = Subsystems::new(self.bases.iter().map(|b| b.dim()).collect())?;
        DensityMatrix::with_subsystems(out, subs)
    }
}

/// Embed a state's coherence as N-party MC entanglement.
pub fn mc_embed(rho: &DensityMatrix, bases: Vec<BasisSpec>) -> Result<MCState> {
    MCState::new(rho.clone(), bases)
}

/// Embed with canonical local bases of the same dimension.
pub fn mc_embed_canonical(rho: &DensityMatrix, parties: usize) -> Result<MCState> {
    let bases = (0..parties).map(|_| BasisSpec::canonical(rho.dim())).collect();
    mc_embed(rho, bases)
}

/// Detect MC structure in the canonical correlated basis {|ii...i>}.
///
/// Returns the coefficient state when every matrix element outside the
/// span of {|ii...><jj...|} is below 1e-10, otherwise `None`.
pub fn mc_recognize(rho: &DensityMatrix) -> Option<MCState> {
    let subs = rho.subs();
    if subs.len() < 2 {
        return None;
    }
    let d = subs.dims()[0];
    if subs.dims().iter().any(|&x| x != d) {
        return None;
    }
    let dim = rho.dim();
    let mut coeff = ComplexMatrix::zeros(d, d);
    for row in 0..dim {
        let ri = subs.unravel(row);
        let r_corr = ri.iter().all(|&x| x == ri[0]);
        for col in 0..dim {
            let ci = subs.unravel(col);
            let c_corr = ci.iter().all(|&x| x == ci[0]);
            let e = rho.mat()[(row, col)];
            if r_corr && c_corr {
                coeff[(ri[0], ci[0])] = e;
            } else if e.norm() > 1e-10 {
                return None;
            }
        }
    }
    let coeff = DensityMatrix::new(coeff).ok()?;
    let bases = (0..subs.len()).map(|_| BasisSpec::canonical(d)).collect();
    MCState::new(coeff, bases).ok()
}

/// A purification |psi> = sum_x sqrt(p(x)) |x>^A |zeta_x>^E with p the
/// incoherent-basis diagonal of rho.
#[derive(Clone, Debug)]
pub struct Purification {
    pub vector: ComplexMatrix,
    pub a_dim: usize,
    pub e_dim: usize,
    /// p(x) = <x|rho|x>.
    pub probs: Vec<f64>,
    /// Normalized conditional environment states; index x.
    pub zetas: Vec<ComplexMatrix>,
    /// False for symbols with p(x) = 0 (zeta set to a placeholder).
    pub active: Vec<bool>,
}

const PURIFY_ZERO: f64 = 1e-14;

/// Purify into A (x) E with E dimension equal to rank(rho).
pub fn purify(rho: &DensityMatrix) -> Result<Purification> {
    let a_dim = rho.dim();
    let eig = rho.eig()?;
    let rank = eig.values.iter().filter(|&&v| v > 1e-12).count().max(1);
    // |psi> = sum_k sqrt(lambda_k) |v_k>|k>, so <x|psi> has E-components
    // w_x[k] = sqrt(lambda_k) v_k[x].
    let mut vector = ComplexMatrix::zeros(a_dim * rank, 1);
    let mut probs = Vec::with_capacity(a_dim);
    let mut zetas = Vec::with_capacity(a_dim);
    let mut active = Vec::with_capacity(a_dim);
    for x in 0..a_dim {
        let mut w = ComplexMatrix::zeros(rank, 1);
        for k in 0..rank {
            let lam = eig.values[k].max(0.0);
            w[(k, 0)] = eig.vectors[(x, k)] * lam.sqrt();
        }
        let p = w.inner(&w).re;
        probs.push(p);
        if p > PURIFY_ZERO {
            let zeta = w.scale_re(1.0 / p.sqrt());
            for k in 0..rank {
                vector[(x * rank + k, 0)] = w[(k, 0)];
            }
            zetas.push(zeta);
            active.push(true);
        } else {
            zetas.push(ComplexMatrix::basis_vector(rank, 0));
            active.push(false);
        }
    }
    Ok(Purification { vector, a_dim, e_dim: rank, probs, zetas, active })
}

impl Purification {
    /// Reduced state on A, for consistency checks.
    pub fn marginal_a(&self) -> Result<ComplexMatrix> {
        let full = self.vector.outer(&self.vector);
        let subs = Subsystems::new(vec![self.a_dim, self.e_dim])?;
        partial_trace(&full, &subs, &[0])
    }
}
