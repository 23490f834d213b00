//! Executable forms of the completeness, Born, variance, ABL, joint-probability
//! and equivalence identities obeyed by weak values.
//!
//! Each check evaluates the weak-value side of an identity literally (ratios
//! of amplitudes, weighted by `Pr(x)`) and compares it with the direct
//! operator-side expression. Post-selections orthogonal to the pre-selection
//! have no weak value; sums over a basis substitute the limit of the term,
//! which for every identity here is the finite product form.

use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WeakError};
use crate::hilbert::{projector_onto, Observable, StateVector};

use super::table::{validate_basis, PostState};
use super::{weak_value_with_floor, DEFAULT_OVERLAP_FLOOR};

/// Residual for a single post-selection; `None` marks a skipped column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnResidual {
    pub post: String,
    pub residual: Option<f64>,
}

impl ColumnResidual {
    pub fn max(residuals: &[ColumnResidual]) -> f64 {
        residuals.iter().filter_map(|r| r.residual).fold(0.0, f64::max)
    }
}

struct Column {
    overlap: Complex64,
    state: StateVector,
}

fn columns(pre: &StateVector, post: &[PostState]) -> Result<Vec<Column>> {
    let states: Vec<&StateVector> = post.iter().map(|p| &p.state).collect();
    validate_basis(&states, true)?;
    post.iter()
        .map(|p| {
            Ok(Column {
                overlap: p.state.inner(pre)?,
                state: p.state.clone(),
            })
        })
        .collect()
}

/// `sum_x term(x)` where `term` receives `(<x|psi>, <x|A psi>, <x|B psi>)`
/// and is only called for defined columns; undefined columns add `limit`.
fn bilinear_sum(
    pre: &StateVector,
    post: &[PostState],
    a: &Array1<Complex64>,
    b: &Array1<Complex64>,
    term: impl Fn(Complex64, Complex64) -> Complex64,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for col in columns(pre, post)? {
        let xa = col.state.inner_raw(a);
        let xb = col.state.inner_raw(b);
        if col.overlap.norm() >= DEFAULT_OVERLAP_FLOOR {
            let weight = col.overlap.norm_sqr();
            total += term(xa / col.overlap, xb / col.overlap) * weight;
        } else {
            total += xa.conj() * xb;
        }
    }
    Ok(total)
}

/// Completeness: the weak values of a complete projector resolution sum to 1
/// at every post-selection.
pub fn check_consistency_one(
    pre: &StateVector,
    post: &[PostState],
    projector_states: &[StateVector],
) -> Result<Vec<ColumnResidual>> {
    let refs: Vec<&StateVector> = projector_states.iter().collect();
    validate_basis(&refs, true)?;
    let projectors: Vec<Observable> = projector_states.iter().map(projector_onto).collect();
    post.iter()
        .map(|x| {
            let mut sum = Complex64::new(0.0, 0.0);
            for p in &projectors {
                match weak_value_with_floor(pre, &x.state, p, DEFAULT_OVERLAP_FLOOR) {
                    Ok(w) => sum += w,
                    Err(WeakError::NullPostSelection { .. }) => {
                        return Ok(ColumnResidual {
                            post: x.name.clone(),
                            residual: None,
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(ColumnResidual {
                post: x.name.clone(),
                residual: Some((sum - Complex64::new(1.0, 0.0)).norm()),
            })
        })
        .collect()
}

/// Both sides of `sum_x h_A(x)^* Pr(x) h_B(x) = <psi|AB|psi>`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BilinearIdentity {
    pub weak_form: Complex64,
    pub direct: Complex64,
}

impl BilinearIdentity {
    pub fn residual(&self) -> f64 {
        (self.weak_form - self.direct).norm()
    }
}

pub fn consistency_two(pre: &StateVector, post: &[PostState], a: &Observable, b: &Observable) -> Result<BilinearIdentity> {
    let apsi = a.apply(pre)?;
    let bpsi = b.apply(pre)?;
    let weak_form = bilinear_sum(pre, post, &apsi, &bpsi, |ha, hb| ha.conj() * hb)?;
    // <psi|AB|psi> = <A psi|B psi> for Hermitian A
    let direct = apsi.iter().zip(bpsi.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(BilinearIdentity { weak_form, direct })
}

/// Residual of the bilinear identity.
pub fn check_consistency_two(pre: &StateVector, post: &[PostState], a: &Observable, b: &Observable) -> Result<f64> {
    Ok(consistency_two(pre, post, a, b)?.residual())
}

/// Row average over the basis against `<psi|A|psi>`.
pub fn check_born_reduction(pre: &StateVector, post: &[PostState], a: &Observable) -> Result<f64> {
    let apsi = a.apply(pre)?;
    let mut average = Complex64::new(0.0, 0.0);
    for col in columns(pre, post)? {
        average += col.overlap.conj() * col.state.inner_raw(&apsi);
    }
    Ok((average - Complex64::new(a.expectation(pre)?, 0.0)).norm())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VarianceReport {
    /// `sum |h|^2 Pr - (sum h Pr)^2`, the second term squared as a complex number.
    pub weak_form: Complex64,
    /// `<psi|(A - <A>)^2|psi>`.
    pub direct: f64,
}

impl VarianceReport {
    pub fn value(&self) -> f64 {
        self.weak_form.re
    }

    pub fn residual(&self) -> f64 {
        (self.weak_form - Complex64::new(self.direct, 0.0)).norm()
    }
}

pub fn variance_via_weak_values(pre: &StateVector, post: &[PostState], a: &Observable) -> Result<VarianceReport> {
    let apsi = a.apply(pre)?;
    let ones = pre.amplitudes().clone();
    let second = bilinear_sum(pre, post, &apsi, &apsi, |h, _| Complex64::new(h.norm_sqr(), 0.0))?;
    let mean = bilinear_sum(pre, post, &ones, &apsi, |_, h| h)?;
    let weak_form = second - mean * mean;

    let expectation = a.expectation(pre)?;
    let centered = &apsi - &pre.amplitudes().mapv(|z| z * expectation);
    let direct = centered.iter().map(|z| z.norm_sqr()).sum();
    Ok(VarianceReport { weak_form, direct })
}

/// `<psi|a><a|B|psi>`, the joint quasi-probability of `B` and then `|a><a|`.
pub fn joint_probability(pre: &StateVector, a: &StateVector, b: &Observable) -> Result<Complex64> {
    Ok(a.inner(pre)?.conj() * b.sandwich(a, pre)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AblProbability {
    /// `|w(|a><a|)|^2` from the weak value.
    pub modulus_squared: f64,
    /// `Pr(a; psi) Pr(phi; a) / Pr(phi; psi)`.
    pub ratio_form: f64,
    /// `modulus_squared * Pr(phi; psi)`, the probability of the sequence
    /// pre -> a -> post when `a` is projectively measured.
    pub factual_probability: f64,
}

impl AblProbability {
    pub fn residual(&self) -> f64 {
        (self.modulus_squared - self.ratio_form).abs()
    }
}

pub fn abl_probability(pre: &StateVector, post: &StateVector, intermediate: &StateVector) -> Result<AblProbability> {
    let w = weak_value_with_floor(pre, post, &projector_onto(intermediate), DEFAULT_OVERLAP_FLOOR)?;
    let pr_post = post.inner(pre)?.norm_sqr();
    let ratio_form = intermediate.inner(pre)?.norm_sqr() * post.inner(intermediate)?.norm_sqr() / pr_post;
    let modulus_squared = w.norm_sqr();
    Ok(AblProbability {
        modulus_squared,
        ratio_form,
        factual_probability: modulus_squared * pr_post,
    })
}

/// `<psi|(A - B)^2|psi>`, zero iff `A` and `B` are equivalent in `psi`.
pub fn observable_distance(pre: &StateVector, a: &Observable, b: &Observable) -> Result<f64> {
    let d = a.minus(b)?;
    let d2 = d.matrix().dot(d.matrix());
    let value: Complex64 = pre.inner_raw(&d2.dot(pre.amplitudes()));
    Ok(value.re.max(0.0))
}

/// `sum_x Pr(x) |h_A(x) - h_B(x)|^2` over a complete basis.
pub fn observable_distance_via_weak_values(
    pre: &StateVector,
    post: &[PostState],
    a: &Observable,
    b: &Observable,
) -> Result<f64> {
    let diff = &a.apply(pre)? - &b.apply(pre)?;
    Ok(bilinear_sum(pre, post, &diff, &diff, |h, _| Complex64::new(h.norm_sqr(), 0.0))?.re)
}

/// `|w_A(x) - w_B(x)|` for each post-selection.
pub fn weak_equivalence_residual(
    pre: &StateVector,
    post: &[PostState],
    a: &Observable,
    b: &Observable,
) -> Result<Vec<ColumnResidual>> {
    post.iter()
        .map(|x| {
            let residual = match (
                weak_value_with_floor(pre, &x.state, a, DEFAULT_OVERLAP_FLOOR),
                weak_value_with_floor(pre, &x.state, b, DEFAULT_OVERLAP_FLOOR),
            ) {
                (Ok(wa), Ok(wb)) => Some((wa - wb).norm()),
                (Err(WeakError::NullPostSelection { .. }), _) => None,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            Ok(ColumnResidual {
                post: x.name.clone(),
                residual,
            })
        })
        .collect()
}
