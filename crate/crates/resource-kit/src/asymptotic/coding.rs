//! Constructive CQ channel coding: pretty-good-measurement decoding,
//! greedy same-type codes, and the iterative covering partition.
//!
//! Codeword output states are pure product states, so every decoding
//! quantity is computed from Gram matrices of single-letter overlaps;
//! nothing of size d^n is materialized except in the explicit dense
//! decoder, which is reserved for small n.

use std::collections::BTreeMap;
use std::collections::HashSet;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, hermitian_eig_tol, tensor, ComplexMatrix};
use crate::monotones::shannon;

use super::cq::{mutual_info, CQChannel};
use super::types::{
    check_enumeration, counts_of, sequence_probability, SequenceSet,
};

/// Overlap <zeta_{u}|zeta_{w}> of product states, from joint counts.
/// Conjugate pairs are folded into |.|^2 powers so that mathematically
/// real overlaps (same-type qubit pairs) come out with exact zero
/// imaginary part.
pub fn sequence_overlap(v: &ComplexMatrix, u: &[usize], w: &[usize]) -> C64 {
    let k = v.rows();
    let mut counts = vec![0i32; k * k];
    for (&a, &b) in u.iter().zip(w.iter()) {
        counts[a * k + b] += 1;
    }
    let mut real: f64 = 1.0;
    let mut rest = C64::new(1.0, 0.0);
    let mut has_rest = false;
    for a in 0..k {
        let caa = counts[a * k + a];
        if caa > 0 {
            real *= v[(a, a)].re.powi(caa);
        }
        for b in (a + 1)..k {
            let cab = counts[a * k + b];
            let cba = counts[b * k + a];
            let m = cab.min(cba);
            if m > 0 {
                real *= v[(a, b)].norm_sqr().powi(m);
            }
            if cab > m {
                rest *= v[(a, b)].powi(cab - m);
                has_rest = true;
            }
            if cba > m {
                rest *= v[(b, a)].powi(cba - m);
                has_rest = true;
            }
        }
    }
    if has_rest {
        rest * real
    } else {
        C64::new(real, 0.0)
    }
}

/// Gram matrix of a codeword list (exactly Hermitian by construction).
pub fn codeword_gram(v: &ComplexMatrix, codewords: &[Vec<usize>]) -> ComplexMatrix {
    let c = codewords.len();
    let mut g = ComplexMatrix::zeros(c, c);
    for i in 0..c {
        g[(i, i)] = C64::new(1.0, 0.0);
        for j in (i + 1)..c {
            let o = sequence_overlap(v, &codewords[i], &codewords[j]);
            g[(i, j)] = o;
            g[(j, i)] = o.conj();
        }
    }
    g
}

/// PGM success probabilities from the Gram matrix alone:
/// Tr[rho_c Pi_c] = ((sqrt G)_cc)^2, exact for pure codeword states
/// including the rank-deficient case (pseudo-inverse convention).
pub fn pgm_successes(gram: &ComplexMatrix) -> Result<Vec<f64>> {
    let c = gram.rows();
    let eig = hermitian_eig_tol(gram, 1e-8 * gram.max_abs_entry().max(1.0))?;
    let cutoff = eig.values[0].max(0.0) * 1e-12;
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l > cutoff { l.sqrt() } else { 0.0 })
        .collect();
    let mut out = Vec::with_capacity(c);
    for i in 0..c {
        let mut diag = 0.0;
        for (k, &r) in roots.iter().enumerate() {
            diag += r * eig.vectors[(i, k)].norm_sqr();
        }
        out.push((diag * diag).min(1.0));
    }
    Ok(out)
}

/// A dense POVM: outcome elements plus the completing remainder Pi_0.
#[derive(Clone, Debug)]
pub struct Povm {
    pub elements: Vec<ComplexMatrix>,
    pub remainder: ComplexMatrix,
}

impl Povm {
    /// Largest violation of positivity/completeness.
    pub fn residual(&self) -> Result<f64> {
        let dim = self.remainder.rows();
        let mut res: f64 = 0.0;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in self.elements.iter().chain(std::iter::once(&self.remainder)) {
            let min = hermitian_eig(e)?.values.last().copied().unwrap_or(0.0);
            res = res.max((-min).max(0.0));
            sum = sum.add(e)?;
        }
        let gap = sum.sub(&ComplexMatrix::identity(dim))?;
        Ok(res.max(gap.max_abs_entry()))
    }
}

/// Dense product output state rho_{u} = zeta_{u_1} (x) ... (x) zeta_{u_n}.
pub fn product_output(w: &CQChannel, u: &[usize]) -> Result<ComplexMatrix> {
    let outs = w.outputs();
    let dim = outs[0].dim();
    check_enumeration(dim, u.len())?;
    let mut acc = outs[u[0]].mat().clone();
    for &x in &u[1..] {
        acc = tensor(&acc, outs[x].mat());
    }
    Ok(acc)
}

/// Dense pretty-good measurement Pi_c = S^{-1/2} rho_c S^{-1/2} with
/// S = sum rho_c (pseudo-inverse on the support).
pub fn pgm_decoder(codewords: &[Vec<usize>], w: &CQChannel) -> Result<Povm> {
    if codewords.is_empty() {
        return Err(Error::EmptyPool);
    }
    let states: Result<Vec<ComplexMatrix>> =
        codewords.iter().map(|u| product_output(w, u)).collect();
    let states = states?;
    let dim = states[0].rows();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for st in &states {
        s = s.add(st)?;
    }
    let eig = hermitian_eig(&s)?;
    let cutoff = eig.values[0].max(0.0) * 1e-12;
    let inv_root =
        eig.map_eigenvalues(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let mut elements = Vec::with_capacity(states.len());
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for st in &states {
        let pi = inv_root.matmul(st)?.matmul(&inv_root)?;
        sum = sum.add(&pi)?;
        elements.push(pi);
    }
    let remainder = ComplexMatrix::identity(dim).sub(&sum)?;
    Ok(Povm { elements, remainder })
}

/// An (n, epsilon) code: distinct same-type codewords with a PGM
/// decoder certified by its per-codeword success probabilities.
#[derive(Clone, Debug)]
pub struct Code {
    pub n: usize,
    pub codewords: Vec<Vec<usize>>,
    pub gram: ComplexMatrix,
    pub successes: Vec<f64>,
    pub max_error: f64,
    /// Source probability of each codeword (equal within a type).
    pub seq_probability: f64,
    pub rate: f64,
}

impl Code {
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    /// Total source mass carried by the code.
    pub fn probability(&self) -> f64 {
        self.seq_probability * self.size() as f64
    }

    /// Rebuild the Gram and PGM from scratch and return the recomputed
    /// max error (certificate audit).
    pub fn recompute_max_error(&self, w: &CQChannel) -> Result<f64> {
        let v = w.overlap_matrix()?;
        let gram = codeword_gram(&v, &self.codewords);
        let succ = pgm_successes(&gram)?;
        Ok(succ.iter().fold(0.0_f64, |acc, &s| acc.max(1.0 - s)))
    }

    /// Dense decoding POVM; only viable for small n.
    pub fn dense_povm(&self, w: &CQChannel) -> Result<Povm> {
        pgm_decoder(&self.codewords, w)
    }
}

/// Greedy Lemma-2 code: pick the heaviest type in the pool and add its
/// sequences in lexicographic order, recomputing the PGM after each
/// addition, stopping before the max decoding error reaches epsilon.
pub fn build_code(
    w: &CQChannel,
    n: usize,
    epsilon: f64,
    pool: &SequenceSet,
) -> Result<Code> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let p = w.source();
    let mut by_type: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for seq in &pool.sequences {
        by_type
            .entry(counts_of(seq, w.alphabet_size()))
            .or_default()
            .push(seq.clone());
    }
    let (counts, mut candidates) = by_type
        .into_iter()
        .max_by(|(ca, sa), (cb, sb)| {
            let ma = sa.len() as f64
                * ca.iter().zip(p).map(|(&c, &q)| q.powi(c as i32)).product::<f64>();
            let mb = sb.len() as f64
                * cb.iter().zip(p).map(|(&c, &q)| q.powi(c as i32)).product::<f64>();
            // break probability ties toward the lexicographically
            // smallest type (keep the earlier BTreeMap entry)
            ma.partial_cmp(&mb).unwrap().then(std::cmp::Ordering::Less)
        })
        .expect("nonempty pool");
    candidates.sort();
    let seq_probability = sequence_probability(p, &candidates[0]);
    let _ = counts;

    let v = w.overlap_matrix()?;
    let mut codewords: Vec<Vec<usize>> = vec![candidates[0].clone()];
    let mut successes = vec![1.0];
    let mut max_error = 0.0;
    for cand in candidates.into_iter().skip(1) {
        let mut trial = codewords.clone();
        trial.push(cand);
        let gram = codeword_gram(&v, &trial);
        let succ = pgm_successes(&gram)?;
        let err = succ.iter().fold(0.0_f64, |acc, &s| acc.max(1.0 - s));
        if err < epsilon {
            codewords = trial;
            successes = succ;
            max_error = err;
        } else {
            break;
        }
    }
    let gram = codeword_gram(&v, &codewords);
    let rate = (codewords.len() as f64).log2() / n as f64;
    Ok(Code { n, codewords, gram, successes, max_error, seq_probability, rate })
}

/// A disjoint family of codes carving up (most of) a sequence pool.
#[derive(Clone, Debug)]
pub struct CoveringPartition {
    pub n: usize,
    pub cells: Vec<Code>,
    pub uncovered: SequenceSet,
    pub coverage: f64,
    /// Cell count plus the empty terminator of the Lemma 3 proof.
    pub l_count: usize,
    pub rate: f64,
    /// Smallest tau for which (1/n) log2 L <= H(p) - I(W;p) + tau.
    pub tau_slack: f64,
}

impl CoveringPartition {
    /// Certificate audit: cells disjoint, per-cell errors reproducible.
    pub fn verify(&self, w: &CQChannel, tol: f64) -> Result<()> {
        let mut seen: HashSet<&[usize]> = HashSet::new();
        for cell in &self.cells {
            for u in &cell.codewords {
                if !seen.insert(u) {
                    return Err(Error::DomainViolation(format!(
                        "covering cells overlap at {u:?}"
                    )));
                }
            }
            let err = cell.recompute_max_error(w)?;
            if (err - cell.max_error).abs() > tol {
                return Err(Error::DomainViolation(format!(
                    "cell error drift {} vs {}",
                    err, cell.max_error
                )));
            }
        }
        Ok(())
    }
}

/// Iteratively carve codes out of a pool until its residual source mass
/// drops to `threshold`.
pub fn covering_partition_pool(
    w: &CQChannel,
    n: usize,
    epsilon: f64,
    pool: SequenceSet,
    threshold: f64,
) -> Result<CoveringPartition> {
    let p = w.source().to_vec();
    let mut remaining = pool.sequences;
    let mut remaining_mass: f64 =
        remaining.iter().map(|s| sequence_probability(&p, s)).sum();
    let mut cells: Vec<Code> = Vec::new();
    let mut coverage = 0.0;
    while remaining_mass > threshold && !remaining.is_empty() {
        let pool_set = SequenceSet {
            n,
            sequences: remaining.clone(),
            total_probability: remaining_mass,
        };
        let code = build_code(w, n, epsilon, &pool_set)?;
        let used: HashSet<&Vec<usize>> = code.codewords.iter().collect();
        remaining.retain(|s| !used.contains(s));
        coverage += code.probability();
        remaining_mass -= code.probability();
        cells.push(code);
    }
    let uncovered = SequenceSet {
        n,
        sequences: remaining,
        total_probability: remaining_mass.max(0.0),
    };
    let l_count = cells.len() + 1;
    let rate = (l_count as f64).log2() / n as f64;
    let h = shannon(&p)?;
    let i = mutual_info(w)?;
    let tau_slack = (rate - (h - i)).max(0.0);
    Ok(CoveringPartition { n, cells, uncovered, coverage, l_count, rate, tau_slack })
}

/// Lemma 3: cover the delta-typical set down to residual mass eps/2.
pub fn covering_partition(
    w: &CQChannel,
    n: usize,
    epsilon: f64,
    delta: f64,
) -> Result<CoveringPartition> {
    let typical = super::types::typical_set(w.source(), n, delta)?;
    covering_partition_pool(w, n, epsilon, typical, epsilon / 2.0)
}
