//! Quantum channels and the operational classes built on dephasing
//! covariance: CPTP checks, DIO/MIO membership, controlled-unitary DIO
//! maps, diagonal-unitary twirling, and MC extension of DIO maps to
//! full bipartite channels.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eig, trace_norm, unitarity_deviation, ComplexMatrix, Subsystems,
};
use crate::states::{dephase_op, BasisSpec, DensityMatrix};

/// Default tolerance for channel membership checks.
pub const TOL_CHANNEL: f64 = 1e-9;
/// Eigenvalue cutoff when extracting Kraus operators from a Choi matrix.
const KRAUS_CUTOFF: f64 = 1e-10;

/// Outcome of a channel verification.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    pub max_residual: f64,
    pub tol: f64,
}

impl CheckReport {
    fn from_residual(max_residual: f64, tol: f64) -> Self {
        Self { ok: max_residual <= tol, max_residual, tol }
    }
}

/// A channel in Kraus form with its (unnormalized, output-first) Choi
/// matrix choi = sum_ij E(|i><j|) (x) |i><j|.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
    choi: ComplexMatrix,
}

impl QuantumChannel {
    /// Build from Kraus operators (all out_dim x in_dim).  Completeness
    /// is *not* enforced here; use [`QuantumChannel::is_cptp`].
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyPool)?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != out_dim || k.cols() != in_dim {
                return Err(Error::ShapeMismatch(k.rows(), k.cols(), out_dim, in_dim));
            }
        }
        let dim = out_dim * in_dim;
        let mut choi = ComplexMatrix::zeros(dim, dim);
        for k in &kraus {
            // vectorize: v[(o, i)] = K[o, i]
            for o in 0..out_dim {
                for i in 0..in_dim {
                    for o2 in 0..out_dim {
                        for i2 in 0..in_dim {
                            choi[(o * in_dim + i, o2 * in_dim + i2)] +=
                                k[(o, i)] * k[(o2, i2)].conj();
                        }
                    }
                }
            }
        }
        Ok(Self { in_dim, out_dim, kraus, choi })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(dim)]).unwrap()
    }

    /// Unitary conjugation channel.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let dev = unitarity_deviation(u)?;
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
        Self::from_kraus(vec![u.clone()])
    }

    /// The completely dephasing channel in the canonical basis.
    pub fn fully_dephasing(dim: usize) -> Self {
        let kraus = (0..dim).map(|i| ComplexMatrix::basis_projector(dim, i)).collect();
        Self::from_kraus(kraus).unwrap()
    }

    /// Recover a channel from a Choi matrix in this crate's convention.
    pub fn from_choi(choi: &ComplexMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        let dim = choi.require_square()?;
        if dim != in_dim * out_dim {
            return Err(Error::DimMismatch(format!(
                "choi dim {dim} vs in {in_dim} x out {out_dim}"
            )));
        }
        let eig = hermitian_eig(choi)?;
        let mut kraus = Vec::new();
        for (m, &lam) in eig.values.iter().enumerate() {
            if lam <= KRAUS_CUTOFF {
                continue;
            }
            let s = lam.sqrt();
            let mut k = ComplexMatrix::zeros(out_dim, in_dim);
            for o in 0..out_dim {
                for i in 0..in_dim {
                    k[(o, i)] = eig.vectors[(o * in_dim + i, m)] * s;
                }
            }
            kraus.push(k);
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(out_dim, in_dim));
        }
        Self::from_kraus(kraus)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// Action on an arbitrary operator: sum_m K M K†.
    pub fn apply_op(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.in_dim || m.cols() != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "operator dim {} vs channel input {}",
                m.rows(),
                self.in_dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = out.add(&k.matmul(m)?.matmul(&k.adjoint())?)?;
        }
        Ok(out)
    }

    /// sum_m K†K, for completeness checks.
    pub fn completeness_op(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            let kk = k.adjoint().matmul(k).unwrap();
            acc = acc.add(&kk).unwrap();
        }
        acc
    }

    /// CPTP verification: trace preservation and Choi positivity.
    pub fn is_cptp(&self, tol: f64) -> CheckReport {
        let diff = self
            .completeness_op()
            .sub(&ComplexMatrix::identity(self.in_dim))
            .unwrap();
        let tp = trace_norm(&diff).unwrap_or(f64::INFINITY);
        let min_eig = hermitian_eig(&self.choi)
            .map(|e| e.values.last().copied().unwrap_or(0.0))
            .unwrap_or(f64::NEG_INFINITY);
        CheckReport::from_residual(tp.max((-min_eig).max(0.0)), tol)
    }
}

/// Apply a channel to a density matrix; validates the output state.
pub fn apply(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(ch.apply_op(rho.mat())?)
}

/// Definition-1 check: E(Delta_B1(E_ij)) = Delta_B2(E(E_ij)) on every
/// matrix unit E_ij = |b_i><b_j| of B1; linearity makes this complete.
pub fn is_dephasing_covariant(
    ch: &QuantumChannel,
    b1: &BasisSpec,
    b2: &BasisSpec,
    tol: f64,
) -> Result<CheckReport> {
    if b1.dim() != ch.in_dim || b2.dim() != ch.out_dim {
        return Err(Error::DimMismatch(format!(
            "bases {}x{} vs channel {}->{}",
            b1.dim(),
            b2.dim(),
            ch.in_dim,
            ch.out_dim
        )));
    }
    let mut max_residual: f64 = 0.0;
    for i in 0..b1.count() {
        let bi = b1.vector(i);
        for j in 0..b1.count() {
            let unit = bi.outer(&b1.vector(j));
            let lhs = ch.apply_op(&dephase_op(&unit, b1)?)?;
            let rhs = dephase_op(&ch.apply_op(&unit)?, b2)?;
            let gap = trace_norm(&lhs.sub(&rhs)?)?;
            max_residual = max_residual.max(gap);
        }
    }
    Ok(CheckReport::from_residual(max_residual, tol))
}

/// DIO membership: dephasing covariance in the canonical bases.
pub fn is_dio(ch: &QuantumChannel, tol: f64) -> CheckReport {
    is_dephasing_covariant(
        ch,
        &BasisSpec::canonical(ch.in_dim),
        &BasisSpec::canonical(ch.out_dim),
        tol,
    )
    .expect("canonical bases always match channel dims")
}

/// MIO membership: every incoherent basis state maps to a diagonal state.
pub fn is_mio(ch: &QuantumChannel, tol: f64) -> CheckReport {
    let mut max_residual: f64 = 0.0;
    for i in 0..ch.in_dim {
        let out = ch
            .apply_op(&ComplexMatrix::basis_projector(ch.in_dim, i))
            .expect("dims match");
        let diag = dephase_op(&out, &BasisSpec::canonical(ch.out_dim)).expect("square");
        let gap = trace_norm(&out.sub(&diag).unwrap()).unwrap_or(f64::INFINITY);
        max_residual = max_residual.max(gap);
    }
    CheckReport::from_residual(max_residual, tol)
}

/// The DIO channel of Proposition 2: rho on A2(x)A3 goes to
/// Tr_A3(W rho W†) with W = sum_m |m><m| (x) U_m.
pub fn controlled_unitary_dio(unitaries: &[ComplexMatrix]) -> Result<QuantumChannel> {
    let m_dim = unitaries.len();
    if m_dim == 0 {
        return Err(Error::EmptyPool);
    }
    let d = unitaries[0].require_square()?;
    for u in unitaries {
        if u.require_square()? != d {
            return Err(Error::ShapeMismatch(u.rows(), u.cols(), d, d));
        }
        let dev = unitarity_deviation(u)?;
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
    }
    // Kraus K_k = (I (x) <k|) W : entries K_k[m, (m', j)] = delta_mm' U_m[k, j]
    let mut kraus = Vec::with_capacity(d);
    for k in 0..d {
        let mut km = ComplexMatrix::zeros(m_dim, m_dim * d);
        for m in 0..m_dim {
            for j in 0..d {
                km[(m, m * d + j)] = unitaries[m][(k, j)];
            }
        }
        kraus.push(km);
    }
    QuantumChannel::from_kraus(kraus)
}

fn rotate_to_product_frame(
    rho: &ComplexMatrix,
    locals: &[&ComplexMatrix],
) -> Result<ComplexMatrix> {
    let mut w = locals[0].clone();
    for u in &locals[1..] {
        w = w.kron(u);
    }
    w.adjoint().matmul(rho)?.matmul(&w)
}

fn rotate_from_product_frame(
    rho: &ComplexMatrix,
    locals: &[&ComplexMatrix],
) -> Result<ComplexMatrix> {
    let mut w = locals[0].clone();
    for u in &locals[1..] {
        w = w.kron(u);
    }
    w.matmul(rho)?.matmul(&w.adjoint())
}

/// Closed-form twirl mask in the rotated product frame: keep product
/// diagonal entries and the correlated (MC) block, zero everything else.
fn twirl_mask(rho: &ComplexMatrix, subs: &Subsystems) -> ComplexMatrix {
    let dim = rho.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let ri = subs.unravel(r);
        let r_corr = ri.iter().all(|&x| x == ri[0]);
        for c in 0..dim {
            if r == c {
                out[(r, c)] = rho[(r, c)];
                continue;
            }
            let ci = subs.unravel(c);
            if r_corr && ci.iter().all(|&x| x == ci[0]) {
                out[(r, c)] = rho[(r, c)];
            }
        }
    }
    out
}

/// Diagonal-unitary group twirl of a bipartite state, in the MC basis
/// |a_i b_i> = U|i> (x) V|i>.
pub fn twirl(rho: &DensityMatrix, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<DensityMatrix> {
    let subs = rho.subs().clone();
    if subs.len() != 2 || subs.dims()[0] != subs.dims()[1] {
        return Err(Error::DimMismatch(format!(
            "twirl needs a d(x)d bipartite state, got dims {:?}",
            subs.dims()
        )));
    }
    let d = subs.dims()[0];
    for w in [u, v] {
        if w.require_square()? != d {
            return Err(Error::DimMismatch(format!(
                "local unitary dim {} vs local dim {d}",
                w.rows()
            )));
        }
        let dev = unitarity_deviation(w)?;
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
    }
    let rotated = rotate_to_product_frame(rho.mat(), &[u, v])?;
    let masked = twirl_mask(&rotated, &subs);
    let back = rotate_from_product_frame(&masked, &[u, v])?;
    DensityMatrix::with_subsystems(back, subs)
}

/// N-party twirl: the composition of all pairwise twirls, evaluated in
/// closed form (keep fully diagonal entries plus the correlated block).
pub fn twirl_multiparty(
    rho: &DensityMatrix,
    local_unitaries: &[ComplexMatrix],
) -> Result<DensityMatrix> {
    let subs = rho.subs().clone();
    let n = subs.len();
    if n < 2 || local_unitaries.len() != n {
        return Err(Error::DimMismatch(format!(
            "{} parties vs {} local unitaries",
            n,
            local_unitaries.len()
        )));
    }
    let d = subs.dims()[0];
    if subs.dims().iter().any(|&x| x != d) {
        return Err(Error::DimMismatch(format!("unequal local dims {:?}", subs.dims())));
    }
    for w in local_unitaries {
        if w.require_square()? != d {
            return Err(Error::DimMismatch(format!(
                "local unitary dim {} vs local dim {d}",
                w.rows()
            )));
        }
        let dev = unitarity_deviation(w)?;
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
    }
    let locals: Vec<&ComplexMatrix> = local_unitaries.iter().collect();
    let rotated = rotate_to_product_frame(rho.mat(), &locals)?;
    let masked = twirl_mask(&rotated, &subs);
    let back = rotate_from_product_frame(&masked, &locals)?;
    DensityMatrix::with_subsystems(back, subs)
}

/// The filler map F acting on the mismatched product-basis sector.
#[derive(Clone, Debug)]
pub enum Filler {
    /// Dephase in the mismatched basis; when the output sector has a
    /// different size, relabel all mass to |a'_0 b'_1>.
    Default,
    /// Explicit channel on the mismatched coordinates, ordered
    /// lexicographically by (i, j) with i != j.
    Channel(QuantumChannel),
}

/// Everything needed to build the MC extension of a DIO map.
#[derive(Clone, Debug)]
pub struct MCDCSpec {
    pub dio: QuantumChannel,
    /// MC bases (A, B) on the input space.
    pub mc_bases_in: (BasisSpec, BasisSpec),
    /// MC bases (A', B') on the output space.
    pub mc_bases_out: (BasisSpec, BasisSpec),
    pub filler: Filler,
}

impl MCDCSpec {
    /// Canonical-basis spec with the default filler.
    pub fn canonical(dio: QuantumChannel) -> Self {
        let d1 = dio.in_dim();
        let d2 = dio.out_dim();
        Self {
            dio,
            mc_bases_in: (BasisSpec::canonical(d1), BasisSpec::canonical(d1)),
            mc_bases_out: (BasisSpec::canonical(d2), BasisSpec::canonical(d2)),
            filler: Filler::Default,
        }
    }
}

/// Lexicographic enumeration of mismatched index pairs (i, j), i != j.
fn mismatched_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(d * (d - 1));
    for i in 0..d {
        for j in 0..d {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Eq. 13: the MC extension E~ = (F (+) E_MC) o tau of a DIO map, as a
/// channel on the full bipartite spaces.
pub fn mc_extend(spec: &MCDCSpec) -> Result<QuantumChannel> {
    let d1 = spec.dio.in_dim();
    let d2 = spec.dio.out_dim();
    let dio_report = is_dio(&spec.dio, TOL_CHANNEL);
    if !dio_report.ok {
        return Err(Error::SpecInvalid(dio_report.max_residual));
    }
    let (ba, bb) = &spec.mc_bases_in;
    let (ba2, bb2) = &spec.mc_bases_out;
    if ba.dim() != d1 || bb.dim() != d1 || ba2.dim() != d2 || bb2.dim() != d2 {
        return Err(Error::DimMismatch(format!(
            "MC bases dims ({},{})->({},{}) vs DIO {}->{}",
            ba.dim(),
            bb.dim(),
            ba2.dim(),
            bb2.dim(),
            d1,
            d2
        )));
    }
    let pairs_in = mismatched_pairs(d1);
    let pairs_out = mismatched_pairs(d2);
    if let Filler::Channel(f) = &spec.filler {
        if f.in_dim() != pairs_in.len() || f.out_dim() != pairs_out.len() {
            return Err(Error::DimMismatch(format!(
                "filler {}->{} vs mismatched sectors {}->{}",
                f.in_dim(),
                f.out_dim(),
                pairs_in.len(),
                pairs_out.len()
            )));
        }
        let rep = is_dio(f, TOL_CHANNEL);
        if !rep.ok {
            return Err(Error::FillerInvalid(rep.max_residual));
        }
    }
    let din = d1 * d1;
    let dout = d2 * d2;
    let subs_in = Subsystems::uniform(d1, 2);
    let u_in = ba.vectors();
    let v_in = bb.vectors();

    // Assemble the Choi matrix from the action on canonical matrix units.
    let mut choi = ComplexMatrix::zeros(dout * din, dout * din);
    for r in 0..din {
        for c in 0..din {
            let unit = ComplexMatrix::basis_vector(din, r)
                .outer(&ComplexMatrix::basis_vector(din, c));
            // tau: rotate to product frame and mask
            let rotated = rotate_to_product_frame(&unit, &[u_in, v_in])?;
            let masked = twirl_mask(&rotated, &subs_in);
            // MC block -> coefficient matrix M, pushed through the DIO map
            let mut m = ComplexMatrix::zeros(d1, d1);
            for i in 0..d1 {
                for k in 0..d1 {
                    m[(i, k)] = masked[(i * d1 + i, k * d1 + k)];
                }
            }
            let m_out = spec.dio.apply_op(&m)?;
            let mut out = ComplexMatrix::zeros(dout, dout);
            for j in 0..d2 {
                for l in 0..d2 {
                    out[(j * d2 + j, l * d2 + l)] = m_out[(j, l)];
                }
            }
            // mismatched sector through the filler
            match &spec.filler {
                Filler::Default => {
                    if d1 == d2 {
                        for &(i, j) in &pairs_in {
                            let idx = i * d2 + j;
                            out[(idx, idx)] += masked[(i * d1 + j, i * d1 + j)];
                        }
                    } else {
                        // all mismatched mass relabels to |a'_0 b'_1>
                        let sink = 1;
                        for &(i, j) in &pairs_in {
                            out[(sink, sink)] += masked[(i * d1 + j, i * d1 + j)];
                        }
                    }
                }
                Filler::Channel(f) => {
                    let mut w = ComplexMatrix::zeros(pairs_in.len(), pairs_in.len());
                    for (p, &(i, j)) in pairs_in.iter().enumerate() {
                        w[(p, p)] = masked[(i * d1 + j, i * d1 + j)];
                    }
                    let fw = f.apply_op(&w)?;
                    for (p, &(i, j)) in pairs_out.iter().enumerate() {
                        for (q, &(k, l)) in pairs_out.iter().enumerate() {
                            out[(i * d2 + j, k * d2 + l)] += fw[(p, q)];
                        }
                    }
                }
            }
            // rotate the output into the computational frame
            let out_full =
                rotate_from_product_frame(&out, &[ba2.vectors(), bb2.vectors()])?;
            for o in 0..dout {
                for o2 in 0..dout {
                    choi[(o * din + r, o2 * din + c)] = out_full[(o, o2)];
                }
            }
        }
    }
    QuantumChannel::from_choi(&choi, din, dout)
}

const DIO_SAMPLE_MAX_ITERS: usize = 800;

/// Orthogonal projection of a Choi matrix onto the affine DIO + TP set.
fn project_dio_affine(choi: &mut ComplexMatrix, d_in: usize, d_out: usize) {
    // Hermitize first
    let herm = choi.add(&choi.adjoint()).unwrap().scale_re(0.5);
    *choi = herm;
    for i in 0..d_in {
        for j in 0..d_in {
            if i == j {
                // B_ii must be diagonal with unit trace
                let mut tr = 0.0;
                for o in 0..d_out {
                    for o2 in 0..d_out {
                        if o != o2 {
                            choi[(o * d_in + i, o2 * d_in + i)] = C64::new(0.0, 0.0);
                        }
                    }
                    tr += choi[(o * d_in + i, o * d_in + i)].re;
                }
                let shift = (1.0 - tr) / d_out as f64;
                for o in 0..d_out {
                    let v = choi[(o * d_in + i, o * d_in + i)].re + shift;
                    choi[(o * d_in + i, o * d_in + i)] = C64::new(v, 0.0);
                }
            } else {
                // B_ij (i != j) must have a zero diagonal
                for o in 0..d_out {
                    choi[(o * d_in + i, o * d_in + j)] = C64::new(0.0, 0.0);
                }
            }
        }
    }
}

fn dio_affine_residual(choi: &ComplexMatrix, d_in: usize, d_out: usize) -> f64 {
    let mut res: f64 = 0.0;
    for i in 0..d_in {
        for j in 0..d_in {
            if i == j {
                let mut tr = C64::new(0.0, 0.0);
                for o in 0..d_out {
                    for o2 in 0..d_out {
                        if o != o2 {
                            res = res.max(choi[(o * d_in + i, o2 * d_in + i)].norm());
                        }
                    }
                    tr += choi[(o * d_in + i, o * d_in + i)];
                }
                res = res.max((tr - C64::new(1.0, 0.0)).norm());
            } else {
                for o in 0..d_out {
                    res = res.max(choi[(o * d_in + i, o * d_in + j)].norm());
                }
            }
        }
    }
    res
}

/// Sample a random DIO channel by alternating projections between the
/// affine DIO constraints and the PSD cone, starting from a random
/// isometry-induced CPTP channel.  Deterministic in the seed.
pub fn random_dio(d_in: usize, d_out: usize, seed: u64) -> Result<QuantumChannel> {
    if d_in < 2 || d_out < 2 {
        return Err(Error::BadDimension(d_in.min(d_out)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random isometry d_in -> d_out (x) env via Gram-Schmidt
    let env = d_out;
    let rows = d_out * env;
    let mut cols: Vec<ComplexMatrix> = Vec::with_capacity(d_in);
    for _ in 0..d_in {
        let mut v = ComplexMatrix::from_fn(rows, 1, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        for c in &cols {
            let ov = c.inner(&v);
            v = v.sub(&c.scale(ov))?;
        }
        let norm = v.inner(&v).re.sqrt();
        v = v.scale_re(1.0 / norm);
        cols.push(v);
    }
    // Kraus K_e[o, i] = V[(o, e), i]
    let mut kraus = Vec::with_capacity(env);
    for e in 0..env {
        let mut k = ComplexMatrix::zeros(d_out, d_in);
        for o in 0..d_out {
            for (i, c) in cols.iter().enumerate() {
                k[(o, i)] = c[(o * env + e, 0)];
            }
        }
        kraus.push(k);
    }
    let start = QuantumChannel::from_kraus(kraus)?;
    let mut choi = start.choi().clone();
    for _ in 0..DIO_SAMPLE_MAX_ITERS {
        project_dio_affine(&mut choi, d_in, d_out);
        // PSD projection: clip negative eigenvalues
        let eig = hermitian_eig(&choi)?;
        let min_eig = eig.values.last().copied().unwrap_or(0.0);
        if min_eig >= -TOL_CHANNEL {
            let ch = QuantumChannel::from_choi(&choi, d_in, d_out)?;
            let rep = is_dio(&ch, TOL_CHANNEL);
            let cptp = ch.is_cptp(TOL_CHANNEL);
            if rep.ok && cptp.ok {
                return Ok(ch);
            }
        }
        choi = eig.map_eigenvalues(|v| v.max(0.0));
        if dio_affine_residual(&choi, d_in, d_out) <= TOL_CHANNEL {
            let ch = QuantumChannel::from_choi(&choi, d_in, d_out)?;
            let rep = is_dio(&ch, TOL_CHANNEL);
            let cptp = ch.is_cptp(TOL_CHANNEL);
            if rep.ok && cptp.ok {
                return Ok(ch);
            }
        }
    }
    Err(Error::SamplingFailed(DIO_SAMPLE_MAX_ITERS))
}
