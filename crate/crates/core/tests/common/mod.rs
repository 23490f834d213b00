#![allow(dead_code)]

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use weakval_core::hilbert::spectral_decomposition_matrix;
use weakval_core::{Complex64, Labels, Observable, PostState, StateVector};

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(rng: &mut ChaCha8Rng, labels: &Labels) -> StateVector {
    let raw = (0..labels.len()).map(|_| gaussian(rng)).collect();
    StateVector::new(labels.clone(), raw).unwrap()
}

pub fn random_real_state(rng: &mut ChaCha8Rng, labels: &Labels) -> StateVector {
    let raw: Vec<f64> = (0..labels.len()).map(|_| rng.sample(StandardNormal)).collect();
    StateVector::from_real(labels.clone(), &raw).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, name: &str, labels: &Labels) -> Observable {
    let n = labels.len();
    let g = Array2::from_shape_fn((n, n), |_| gaussian(rng));
    let h = (&g + &g.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    Observable::new(name, labels.clone(), h).unwrap()
}

pub fn random_real_symmetric(rng: &mut ChaCha8Rng, name: &str, labels: &Labels) -> Observable {
    let n = labels.len();
    let g = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.sample(StandardNormal), 0.0));
    let h = (&g + &g.t()).mapv(|z| z * 0.5);
    Observable::new(name, labels.clone(), h).unwrap()
}

/// A random orthonormal basis: eigenvectors of a random Hermitian matrix.
pub fn random_basis(rng: &mut ChaCha8Rng, labels: &Labels) -> Vec<PostState> {
    let h = random_hermitian(rng, "h", labels);
    spectral_decomposition_matrix(h.matrix())
        .unwrap()
        .eigenvectors
        .into_iter()
        .enumerate()
        .map(|(i, v)| PostState::new(format!("x{i}"), StateVector::new(labels.clone(), v.amplitudes().to_vec()).unwrap()))
        .collect()
}

/// Direct `<bra|M|ket>` with plain loops.
pub fn sandwich(bra: &StateVector, m: &Array2<Complex64>, ket: &StateVector) -> Complex64 {
    let n = bra.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            total += bra.amplitude(i).conj() * m[[i, j]] * ket.amplitude(j);
        }
    }
    total
}

pub fn overlap(bra: &StateVector, ket: &StateVector) -> Complex64 {
    (0..bra.dim()).map(|i| bra.amplitude(i).conj() * ket.amplitude(i)).sum()
}
