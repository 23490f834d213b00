//! Spectral decomposition of Hermitian observables by cyclic complex Jacobi.
//!
//! Sweeps visit the pairs `(p, q)` with `p < q` in row-major order, so the
//! rotation sequence, and hence every eigenvector, is fully determined by
//! the input matrix. After sorting, eigenvectors belonging to one degenerate
//! cluster are re-orthonormalized by ordered Gram-Schmidt, and each vector's
//! first non-negligible component is rotated onto the positive real axis.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::operator::{hermitian_deviation, Observable, HERMITIAN_TOLERANCE};
use super::state::{Labels, StateVector};
use crate::error::{Result, WeakError};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const PHASE_THRESHOLD: f64 = 1e-10;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `sum_n a_n |n><n|`.
    pub fn reconstruct(&self) -> Array2<Complex64> {
        let n = self.eigenvalues.len();
        let mut out = Array2::zeros((n, n));
        for (a, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let v = v.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    out[[i, j]] += v[i] * v[j].conj() * *a;
                }
            }
        }
        out
    }
}

pub fn spectral_decomposition(a: &Observable) -> Result<Spectrum> {
    let (values, vectors) = hermitian_eigen(a.matrix())?;
    let eigenvectors = vectors
        .into_iter()
        .map(|v| StateVector::from_array(a.labels().clone(), v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors,
    })
}

/// Eigen-decomposition of a raw Hermitian matrix; eigenvectors are returned
/// as plain amplitude arrays in ascending eigenvalue order.
pub fn hermitian_eigen(m: &Array2<Complex64>) -> Result<(Vec<f64>, Vec<Array1<Complex64>>)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(WeakError::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let max_deviation = hermitian_deviation(m);
    if max_deviation >= HERMITIAN_TOLERANCE * scale {
        return Err(WeakError::NotHermitian { max_deviation });
    }

    let mut a = m.clone();
    let mut v: Array2<Complex64> = Array2::eye(n);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[[p, q]].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let values: Vec<f64> = order.iter().map(|&i| a[[i, i]].re).collect();
    let mut vectors: Vec<Array1<Complex64>> = order.iter().map(|&i| v.column(i).to_owned()).collect();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut vectors[start..end]);
        }
        start = end;
    }
    for vec in &mut vectors {
        fix_phase(vec);
    }
    Ok((values, vectors))
}

/// One Jacobi rotation annihilating `a[p][q]`: a phase rotation making the
/// pivot real followed by the classic real rotation. `v` accumulates the
/// eigenvector columns.
fn rotate(a: &mut Array2<Complex64>, v: &mut Array2<Complex64>, p: usize, q: usize) {
    let apq = a[[p, q]];
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = apq / magnitude;
    let theta = (a[[q, q]].re - a[[p, p]].re) / (2.0 * magnitude);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // Rotation block [[c, s], [-s e^{-ia}, c e^{-ia}]] on columns (p, q).
    let vpq = Complex64::new(s, 0.0);
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[[k, p]], a[[k, q]]);
        a[[k, p]] = akp * c + akq * vqp;
        a[[k, q]] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[[p, k]], a[[q, k]]);
        a[[p, k]] = apk * c + aqk * vqp.conj();
        a[[q, k]] = apk * vpq + aqk * vqq.conj();
    }
    a[[p, q]] = Complex64::new(0.0, 0.0);
    a[[q, p]] = Complex64::new(0.0, 0.0);
    a[[p, p]].im = 0.0;
    a[[q, q]].im = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
        v[[k, p]] = vkp * c + vkq * vqp;
        v[[k, q]] = vkp * vpq + vkq * vqq;
    }
}

pub(crate) fn gram_schmidt(vectors: &mut [Array1<Complex64>]) {
    for i in 0..vectors.len() {
        for j in 0..i {
            let (done, rest) = vectors.split_at_mut(i);
            let overlap: Complex64 = done[j].iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
            rest[0].zip_mut_with(&done[j], |x, y| *x -= overlap * y);
        }
        let norm = vectors[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        vectors[i].mapv_inplace(|z| z / norm);
    }
}

fn fix_phase(v: &mut Array1<Complex64>) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > PHASE_THRESHOLD) {
        let rot = lead.conj() / lead.norm();
        v.mapv_inplace(|z| z * rot);
    }
}

/// Convenience for callers that want the spectrum of a raw matrix over anonymous labels.
pub fn spectral_decomposition_matrix(m: &Array2<Complex64>) -> Result<Spectrum> {
    let labels = Labels::indexed(m.nrows())?;
    let obs = Observable::new("M", labels, m.clone())?;
    spectral_decomposition(&obs)
}
