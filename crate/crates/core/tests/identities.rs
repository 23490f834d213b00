mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weakval_core::weak::{
    abl_probability, check_born_reduction, check_consistency_one, check_consistency_two, joint_probability,
    observable_distance, observable_distance_via_weak_values, variance_via_weak_values, weak_equivalence_residual,
    ColumnResidual,
};
use weakval_core::{projector_onto, weak_value, weak_value_table, Complex64, Labels, Observable, TableOptions};

const DIMENSIONS: [usize; 4] = [2, 3, 4, 8];
const TRIALS: usize = 200;

fn trials(mut f: impl FnMut(&mut ChaCha8Rng, &Labels)) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for t in 0..TRIALS {
        let labels = Labels::indexed(DIMENSIONS[t % DIMENSIONS.len()]).unwrap();
        f(&mut rng, &labels);
    }
}

#[test]
fn completeness_over_random_resolutions() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let resolution: Vec<_> = random_basis(rng, l).into_iter().map(|p| p.state).collect();
        let r = check_consistency_one(&pre, &post, &resolution).unwrap();
        assert!(ColumnResidual::max(&r) < 1e-10);
        assert!(r.iter().all(|c| c.residual.is_some()));
    });
}

#[test]
fn bilinear_consistency_matches_operator_product() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let a = random_hermitian(rng, "A", l);
        let b = random_hermitian(rng, "B", l);
        assert!(check_consistency_two(&pre, &post, &a, &b).unwrap() < 1e-10);

        // independent oracle: explicit ratios against <psi|AB|psi>
        let ab = a.matrix().dot(b.matrix());
        let direct = sandwich(&pre, &ab, &pre);
        let mut weak = Complex64::new(0.0, 0.0);
        for x in &post {
            let ov = overlap(&x.state, &pre);
            let ha = sandwich(&x.state, a.matrix(), &pre) / ov;
            let hb = sandwich(&x.state, b.matrix(), &pre) / ov;
            weak += ha.conj() * hb * ov.norm_sqr();
        }
        assert!((weak - direct).norm() < 1e-10);
    });
}

#[test]
fn born_reduction_and_variance() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let a = random_hermitian(rng, "A", l);
        assert!(check_born_reduction(&pre, &post, &a).unwrap() < 1e-10);

        let v = variance_via_weak_values(&pre, &post, &a).unwrap();
        assert!(v.residual() < 1e-10);
        assert!(v.weak_form.im.abs() < 1e-10);
        let mean = sandwich(&pre, a.matrix(), &pre).re;
        let second = sandwich(&pre, &a.matrix().dot(a.matrix()), &pre).re;
        assert!((v.direct - (second - mean * mean)).abs() < 1e-10);

        let t = weak_value_table(&pre, &post, &[a.clone()], TableOptions::default()).unwrap();
        assert!((t.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!((t.rows[0].average - Complex64::new(mean, 0.0)).norm() < 1e-10);
        let real_only = t.real_part_average("A").unwrap();
        assert!((real_only - mean).abs() < 1e-10);
    });
}

#[test]
fn abl_two_forms_agree() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_state(rng, l);
        let a = random_state(rng, l);
        let p = abl_probability(&pre, &post, &a).unwrap();
        assert!(p.residual() < 1e-12);
        let oracle = overlap(&a, &pre).norm_sqr() * overlap(&post, &a).norm_sqr();
        assert!((p.factual_probability - oracle).abs() < 1e-12);
    });
}

#[test]
fn distance_summation_matches_operator_form() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let a = random_hermitian(rng, "A", l);
        let b = random_hermitian(rng, "B", l);
        let direct = observable_distance(&pre, &a, &b).unwrap();
        let weak = observable_distance_via_weak_values(&pre, &post, &a, &b).unwrap();
        assert!((direct - weak).abs() < 1e-10 * direct.max(1.0));
        let d = a.minus(&b).unwrap();
        let oracle = sandwich(&pre, &d.matrix().dot(d.matrix()), &pre).re;
        assert!((direct - oracle).abs() < 1e-10 * oracle.max(1.0));
    });
}

#[test]
fn joint_probability_matches_operator_product() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let a = random_state(rng, l);
        let b = random_hermitian(rng, "B", l);
        let j = joint_probability(&pre, &a, &b).unwrap();
        let oracle = sandwich(&pre, &projector_onto(&a).matrix().dot(b.matrix()), &pre);
        assert!((j - oracle).norm() < 1e-12 * oracle.norm().max(1.0));
    });
}

#[test]
fn scale_invariance_of_weak_value() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_state(rng, l);
        let a = random_hermitian(rng, "A", l);
        let c = gaussian(rng);
        let scaled = weakval_core::StateVector::new(l.clone(), post.amplitudes().mapv(|z| z * c).to_vec()).unwrap();
        let w0 = weak_value(&pre, &post, &a).unwrap();
        let w1 = weak_value(&pre, &scaled, &a).unwrap();
        assert!((w0 - w1).norm() < 1e-12 * w0.norm().max(1.0));
    });
}

#[test]
fn equivalent_observables_agree_everywhere() {
    // A and B = A + (1 - P) C (1 - P) with P the projector on psi agree on psi
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let a = random_hermitian(rng, "A", l);
        let c = random_hermitian(rng, "C", l);
        let q = Observable::identity(l).minus(&projector_onto(&pre)).unwrap();
        let qcq = q.matrix().dot(c.matrix()).dot(q.matrix());
        let b = Observable::new("B", l.clone(), a.matrix() + &qcq).unwrap();
        assert!(observable_distance(&pre, &a, &b).unwrap() < 1e-10);
        let r = weak_equivalence_residual(&pre, &post, &a, &b).unwrap();
        assert!(ColumnResidual::max(&r) < 1e-9);
    });
}

#[test]
fn projector_averages_are_born_probabilities() {
    trials(|rng, l| {
        let pre = random_state(rng, l);
        let post = random_basis(rng, l);
        let m = random_state(rng, l);
        let t = weak_value_table(&pre, &post, &[projector_onto(&m)], TableOptions::default()).unwrap();
        let avg = t.rows[0].average;
        assert!(avg.im.abs() < 1e-10);
        assert!((avg.re - overlap(&m, &pre).norm_sqr()).abs() < 1e-10);
        assert!(avg.re >= -1e-10 && avg.re <= 1.0 + 1e-10);
    });
}
