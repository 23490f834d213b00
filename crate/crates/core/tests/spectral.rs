mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weakval_core::{
    inner_product, make_state, projector_onto, spectral_decomposition, tensor_operator, tensor_product, Complex64,
    Labels, Observable, WeakError,
};

#[test]
fn reconstruction_and_orthonormality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..100 {
        let l = Labels::indexed(1 + t % 8).unwrap();
        let a = random_hermitian(&mut rng, "A", &l);
        let s = spectral_decomposition(&a).unwrap();
        assert!((s.reconstruct() - a.matrix()).iter().all(|z| z.norm() < 1e-10));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for (i, u) in s.eigenvectors.iter().enumerate() {
            let av = a.apply(u).unwrap();
            let resid: f64 = av.iter().zip(u.amplitudes()).map(|(x, y)| (x - y * s.eigenvalues[i]).norm_sqr()).sum();
            assert!(resid.sqrt() < 1e-10);
            for (j, v) in s.eigenvectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner_product(u, v).unwrap() - want).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn degenerate_spectrum_is_deterministic() {
    let l = Labels::indexed(4).unwrap();
    let v = make_state(&l, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
    let p = projector_onto(&v);
    let a = spectral_decomposition(&p).unwrap();
    let b = spectral_decomposition(&p).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    for (x, y) in a.eigenvectors.iter().zip(&b.eigenvectors) {
        assert_eq!(x.amplitudes(), y.amplitudes());
    }
    assert!((a.eigenvalues[3] - 1.0).abs() < 1e-10);
    assert!(a.eigenvalues[..3].iter().all(|e| e.abs() < 1e-10));
}

#[test]
fn projector_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=8 {
        let l = Labels::indexed(n).unwrap();
        let v = random_state(&mut rng, &l);
        let p = projector_onto(&v);
        let pp = p.matrix().dot(p.matrix());
        assert!((&pp - p.matrix()).iter().all(|z| z.norm() < 1e-12));
        let trace: Complex64 = p.matrix().diag().sum();
        assert!((trace - 1.0).norm() < 1e-12);
    }
}

#[test]
fn inner_product_conjugate_linear_in_bra() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let l = Labels::indexed(5).unwrap();
    for _ in 0..50 {
        let u = random_state(&mut rng, &l);
        let v = random_state(&mut rng, &l);
        let c = Complex64::from_polar(1.0, rand::Rng::random_range(&mut rng, 0.0..6.28));
        let cu = u.with_phase(c);
        let lhs = inner_product(&cu, &v).unwrap();
        assert!((lhs - c.conj() * inner_product(&u, &v).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn tensor_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let la = Labels::new(["a0", "a1"]).unwrap();
    let lb = Labels::new(["b0", "b1", "b2"]).unwrap();
    let a = random_state(&mut rng, &la);
    let b = random_state(&mut rng, &lb);
    let ab = tensor_product(&a, &b).unwrap();
    assert_eq!(ab.dim(), 6);
    assert_eq!(ab.labels().as_slice()[4], "a1b1");
    assert!((inner_product(&ab, &ab).unwrap() - 1.0).norm() < 1e-12);
    assert!((ab.amplitude(5) - a.amplitude(1) * b.amplitude(2)).norm() < 1e-15);
    let id = tensor_operator(&Observable::identity(&la), &Observable::identity(&lb)).unwrap();
    let want = Observable::identity(ab.labels());
    assert_eq!(id.matrix(), want.matrix());
}

#[test]
fn rejects_bad_states() {
    let l = Labels::indexed(2).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    assert!(matches!(make_state(&l, &[zero, zero]), Err(WeakError::ZeroVector { .. })));
    assert!(matches!(make_state(&l, &[zero]), Err(WeakError::DimensionMismatch { .. })));
    let nan = Complex64::new(f64::NAN, 0.0);
    assert!(matches!(make_state(&l, &[nan, zero]), Err(WeakError::NonFinite(0))));
}
