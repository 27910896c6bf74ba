//! Gentle-measurement audits and unitary dilation of a PGM decoder.

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, trace_norm, ComplexMatrix};
use crate::states::DensityMatrix;

use super::coding::Povm;

/// One side of the gentle measurement lemma for a single outcome X.
#[derive(Clone, Debug)]
pub struct GentleReport {
    /// ||rho - sqrt(X) rho sqrt(X)||_1
    pub lhs: f64,
    /// 1 - Tr[X rho]
    pub epsilon: f64,
    /// sqrt(8 epsilon)
    pub bound: f64,
    pub ok: bool,
}

/// Check ||rho - sqrt(X) rho sqrt(X)||_1 <= sqrt(8 (1 - Tr[X rho]))
/// for a POVM element 0 <= X <= I.
pub fn gentle_check(rho: &DensityMatrix, x: &ComplexMatrix) -> Result<GentleReport> {
    let eig = hermitian_eig(x)?;
    let (lo, hi) = (
        eig.values.last().copied().unwrap_or(0.0),
        eig.values.first().copied().unwrap_or(0.0),
    );
    if lo < -1e-9 || hi > 1.0 + 1e-9 {
        return Err(Error::DomainViolation(format!(
            "POVM element spectrum outside [0,1]: [{lo}, {hi}]"
        )));
    }
    let root = eig.map_eigenvalues(|l| l.clamp(0.0, 1.0).sqrt());
    let kept = root.matmul(rho.mat())?.matmul(&root)?;
    let lhs = trace_norm(&rho.mat().sub(&kept)?)?;
    let succ = x.matmul(rho.mat())?.trace().re;
    let epsilon = (1.0 - succ).max(0.0);
    let bound = (8.0 * epsilon).sqrt();
    Ok(GentleReport { lhs, epsilon, bound, ok: lhs <= bound + 1e-9 })
}

/// Dilate a POVM with outcomes Pi_1..Pi_C and remainder Pi_0 into a
/// unitary W on a (C+1)-dim flag register tensored with the system
/// (flag most significant, flag 0 first): the flag-0 input columns act
/// as sum_c sqrt(Pi_c) (x) |c><0|, completed to a unitary by
/// Gram-Schmidt over the remaining columns.
pub fn decoder_dilation(povm: &Povm) -> Result<ComplexMatrix> {
    let dim = povm.remainder.rows();
    let flags = povm.elements.len() + 1;
    let total = dim * flags;
    let mut w = ComplexMatrix::zeros(total, total);
    let mut roots = Vec::with_capacity(flags);
    roots.push(sqrt_psd(&povm.remainder)?);
    for e in &povm.elements {
        roots.push(sqrt_psd(e)?);
    }
    for j in 0..dim {
        for (c, root) in roots.iter().enumerate() {
            for i in 0..dim {
                w[(c * dim + i, j)] = root[(i, j)];
            }
        }
    }
    complete_unitary(&mut w, dim, total)?;
    Ok(w)
}

fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let floor = eig.values.first().copied().unwrap_or(0.0).max(0.0) * -1e-10;
    if eig.values.last().copied().unwrap_or(0.0) < floor - 1e-9 {
        return Err(Error::DomainViolation(
            "POVM element not positive semidefinite".into(),
        ));
    }
    Ok(eig.map_eigenvalues(|l| l.max(0.0).sqrt()))
}

/// Fill columns `placed..total` by Gram-Schmidt against the columns
/// already in place.
fn complete_unitary(w: &mut ComplexMatrix, placed: usize, total: usize) -> Result<()> {
    let mut basis: Vec<ComplexMatrix> = (0..placed).map(|j| w.column(j)).collect();
    let mut next = placed;
    for seed in 0..total {
        if next == total {
            break;
        }
        let mut v = ComplexMatrix::basis_vector(total, seed);
        for _ in 0..2 {
            for b in &basis {
                let c = b.inner(&v);
                v = v.sub(&b.scale(c))?;
            }
        }
        let norm = v.inner(&v).re.sqrt();
        if norm < 1e-7 {
            continue;
        }
        let v = v.scale_re(1.0 / norm);
        w.set_column(next, &v);
        basis.push(v);
        next += 1;
    }
    if next != total {
        return Err(Error::CompletionFailed(format!(
            "only {next} of {total} unitary columns found"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::coding::pgm_decoder;
    use crate::asymptotic::cq::CQChannel;
    use num_complex::Complex64 as C64;
    use crate::matrix::unitarity_deviation;
    use crate::states::max_coherent;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
        let g = ComplexMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let pos = g.matmul(&g.adjoint()).unwrap();
        let tr = pos.trace().re;
        DensityMatrix::new(pos.scale_re(1.0 / tr)).unwrap()
    }

    fn random_povm_element(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let pos = g.matmul(&g.adjoint()).unwrap();
        let top = hermitian_eig(&pos).unwrap().values[0];
        pos.scale_re(rng.gen_range(0.1..1.0) / top)
    }

    #[test]
    fn gentle_bound_random_audit() {
        let mut rng = ChaCha8Rng::seed_from_u64(140);
        for _ in 0..1000 {
            let d = rng.gen_range(2..=4);
            let rho = random_density(d, &mut rng);
            let x = random_povm_element(d, &mut rng);
            let rep = gentle_check(&rho, &x).unwrap();
            assert!(rep.ok, "lhs {} > bound {}", rep.lhs, rep.bound);
        }
    }

    #[test]
    fn gentle_identity_is_tight_zero() {
        let rho = max_coherent(3).unwrap();
        let rep = gentle_check(&rho, &ComplexMatrix::identity(3)).unwrap();
        assert!(rep.lhs < 1e-12);
        assert!(rep.epsilon < 1e-12);
    }

    #[test]
    fn gentle_rejects_oversized_element() {
        let rho = max_coherent(2).unwrap();
        let x = ComplexMatrix::identity(2).scale_re(1.5);
        assert!(matches!(
            gentle_check(&rho, &x),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn dilation_is_unitary_and_reproduces_probabilities() {
        let v0 = ComplexMatrix::basis_vector(2, 0);
        let mut v1 = ComplexMatrix::zeros(2, 1);
        v1[(0, 0)] = C64::new(0.6, 0.0);
        v1[(1, 0)] = C64::new(0.8, 0.0);
        let w = CQChannel::from_vectors(vec![v0, v1], vec![0.5, 0.5]).unwrap();
        let codewords = vec![vec![0, 1], vec![1, 0]];
        let povm = pgm_decoder(&codewords, &w).unwrap();
        let u = decoder_dilation(&povm).unwrap();
        assert!(unitarity_deviation(&u).unwrap() < 1e-8);
        // W (|psi> (x) |0>) has flag-c block norm^2 = <psi|Pi_c|psi>
        let dim = 4;
        let flags = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(141);
        let mut psi = ComplexMatrix::from_fn(dim, 1, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        psi = psi.scale_re(1.0 / psi.inner(&psi).re.sqrt());
        // flag-major layout: |0>_flag |psi> occupies the first dim rows
        let mut inp = ComplexMatrix::zeros(dim * flags, 1);
        for i in 0..dim {
            inp[(i, 0)] = psi[(i, 0)];
        }
        let out = u.matmul(&inp).unwrap();
        for (c, elem) in std::iter::once(&povm.remainder)
            .chain(povm.elements.iter())
            .enumerate()
        {
            let mut block = 0.0;
            for i in 0..dim {
                block += out[(c * dim + i, 0)].norm_sqr();
            }
            let expect = psi.inner(&elem.matmul(&psi).unwrap()).re;
            assert!((block - expect).abs() < 1e-8, "flag {c}: {block} vs {expect}");
        }
    }

    #[test]
    fn dilation_projective_case_is_exact() {
        // orthogonal outputs: PGM is projective and the dilation columns
        // are the projectors themselves
        let vecs = (0..2).map(|i| ComplexMatrix::basis_vector(2, i)).collect();
        let w = CQChannel::from_vectors(vecs, vec![0.5, 0.5]).unwrap();
        let codewords = vec![vec![0, 0], vec![1, 1]];
        let povm = pgm_decoder(&codewords, &w).unwrap();
        let u = decoder_dilation(&povm).unwrap();
        assert!(unitarity_deviation(&u).unwrap() < 1e-10);
    }
}
