//! Exhaustive grid search over the cone `<phi|psi> = cos(xi)`.
//!
//! The cone is parameterized exactly: `phi = cos(xi) psi + sin(xi) u` where
//! `u` is a unit vector in the orthogonal complement of `psi`, written in
//! hyperspherical angles over an orthonormal frame obtained by Gram-Schmidt
//! on `psi` followed by the eigenvectors of the observable. Polar angles are
//! sampled on `[0, pi]` including both poles, the azimuth on `[0, 2 pi)`.

use std::f64::consts::PI;

use ndarray::Array1;
use rayon::prelude::*;

use super::{dot, ensure_real_observable, ensure_real_state, ensure_xi, real_part, to_state, Objective};
use crate::error::{Result, WeakError};
use crate::hilbert::{spectral_decomposition, Observable, StateVector};

pub const ORACLE_MAX_DIMENSION: usize = 8;
pub const MIN_RESOLUTION: usize = 8;
const MAX_GRID_POINTS: f64 = 4e8;

#[derive(Clone, Debug)]
pub struct OracleExtremum {
    pub value: f64,
    pub phi: StateVector,
    pub evaluated: u64,
}

/// Number of hyperspherical angles needed for dimension `n`.
pub fn oracle_angle_count(n: usize) -> usize {
    n.saturating_sub(2)
}

/// A resolution giving roughly four million grid points for dimension `n`.
pub fn default_resolution(n: usize) -> usize {
    match oracle_angle_count(n) {
        0 => MIN_RESOLUTION,
        1 => 100_000,
        k => ((4e6f64).powf(1.0 / k as f64).floor() as usize).max(MIN_RESOLUTION),
    }
}

fn frame(psi: &Array1<f64>, a: &Observable) -> Result<Vec<Array1<f64>>> {
    let n = psi.len();
    let spectrum = spectral_decomposition(a)?;
    let mut basis: Vec<Array1<f64>> = vec![psi.clone()];
    let candidates = spectrum
        .eigenvectors
        .iter()
        .map(real_part)
        .chain((0..n).map(|i| {
            let mut e = Array1::zeros(n);
            e[i] = 1.0;
            e
        }));
    for mut v in candidates {
        if basis.len() == n {
            break;
        }
        for b in &basis {
            let overlap = dot(b, &v);
            v = v - b * overlap;
        }
        let norm = v.dot(&v).sqrt();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    Ok(basis.split_off(1))
}

/// Unit vector on `S^{m-1}` from `m - 1` angles, filling `out`.
fn spherical(angles: &[f64], out: &mut [f64]) {
    let mut sin_prod = 1.0;
    for (k, &a) in angles.iter().enumerate() {
        out[k] = sin_prod * a.cos();
        sin_prod *= a.sin();
    }
    out[angles.len()] = sin_prod;
}

/// Best real weak value of `a` over the cone at the given grid resolution.
pub fn grid_oracle_extremal(
    pre: &StateVector,
    a: &Observable,
    xi: f64,
    resolution: usize,
    objective: Objective,
) -> Result<OracleExtremum> {
    ensure_real_state(pre)?;
    ensure_real_observable(a)?;
    ensure_xi(xi)?;
    pre.labels().ensure_same(a.labels())?;
    let n = pre.dim();
    if n > ORACLE_MAX_DIMENSION {
        return Err(WeakError::OracleDimension {
            found: n,
            max: ORACLE_MAX_DIMENSION,
        });
    }
    if n < 2 {
        return Err(WeakError::DimensionMismatch { expected: 2, found: n });
    }
    if resolution < MIN_RESOLUTION {
        return Err(WeakError::ResolutionTooCoarse(resolution));
    }
    let angle_count = oracle_angle_count(n);
    let points = (resolution as f64).powi(angle_count as i32);
    if points > MAX_GRID_POINTS {
        return Err(WeakError::GridTooLarge { points });
    }

    let psi = real_part(pre);
    let a_psi = a.matrix().dot(pre.amplitudes()).mapv(|z| z.re);
    let frame = frame(&psi, a)?;
    let (c, s) = (xi.cos(), xi.sin());
    // Projections of A psi and psi onto the frame; the weak value at
    // u is (c <psi|A psi> + s sum u_k <e_k|A psi>) / (c + s sum u_k <e_k|psi>).
    let centre_num = c * dot(&psi, &a_psi);
    let num: Vec<f64> = frame.iter().map(|e| s * dot(e, &a_psi)).collect();
    let den: Vec<f64> = frame.iter().map(|e| s * dot(e, &psi)).collect();
    let m = frame.len();

    let polar_step = PI / (resolution - 1) as f64;
    let azimuth_step = 2.0 * PI / resolution as f64;
    let angle_at = |slot: usize, idx: usize| {
        if slot + 1 == angle_count {
            idx as f64 * azimuth_step
        } else {
            idx as f64 * polar_step
        }
    };
    let evaluate = |u: &[f64]| {
        let mut top = centre_num;
        let mut bottom = c;
        for k in 0..m {
            top += u[k] * num[k];
            bottom += u[k] * den[k];
        }
        top / bottom
    };

    // (value, grid index) with ties resolved toward the lexicographically smaller index.
    let better = |x: (f64, Vec<usize>), y: (f64, Vec<usize>)| {
        if objective.prefers(y.0, x.0) || (y.0 == x.0 && y.1 < x.1) {
            y
        } else {
            x
        }
    };

    let best: (f64, Vec<usize>) = if angle_count == 0 {
        let plus = evaluate(&[1.0]);
        let minus = evaluate(&[-1.0]);
        better((plus, vec![0]), (minus, vec![1]))
    } else {
        (0..resolution)
            .into_par_iter()
            .map(|first| {
                let mut idx = vec![0usize; angle_count];
                idx[0] = first;
                let mut angles = vec![0.0; angle_count];
                let mut u = vec![0.0; m];
                let mut local: Option<(f64, Vec<usize>)> = None;
                loop {
                    for (slot, a) in angles.iter_mut().enumerate() {
                        *a = angle_at(slot, idx[slot]);
                    }
                    spherical(&angles, &mut u);
                    let w = evaluate(&u);
                    local = Some(match local {
                        None => (w, idx.clone()),
                        Some(cur) => {
                            if objective.prefers(w, cur.0) {
                                (w, idx.clone())
                            } else {
                                cur
                            }
                        }
                    });
                    // odometer over slots 1..angle_count
                    let mut slot = angle_count;
                    loop {
                        if slot == 1 {
                            return local.expect("at least one grid point");
                        }
                        slot -= 1;
                        idx[slot] += 1;
                        if idx[slot] < resolution {
                            break;
                        }
                        idx[slot] = 0;
                    }
                }
            })
            .reduce_with(better)
            .expect("resolution >= 8")
    };

    let mut u = vec![0.0; m];
    if angle_count == 0 {
        u[0] = if best.1[0] == 0 { 1.0 } else { -1.0 };
    } else {
        let angles: Vec<f64> = best.1.iter().enumerate().map(|(slot, &i)| angle_at(slot, i)).collect();
        spherical(&angles, &mut u);
    }
    let mut phi = &psi * c;
    for (k, e) in frame.iter().enumerate() {
        phi = phi + e * (s * u[k]);
    }
    Ok(OracleExtremum {
        value: best.0,
        phi: to_state(pre, &phi)?,
        evaluated: if angle_count == 0 { 2 } else { points as u64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Labels;
    use approx::assert_abs_diff_eq;

    fn sigma_x() -> Observable {
        Observable::from_real("sx", Labels::indexed(2).unwrap(), &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn two_dimensional_cone_has_two_points() {
        let pre = StateVector::basis(&Labels::indexed(2).unwrap(), 0).unwrap();
        let xi = 1.0;
        // phi = cos(xi)|0> +/- sin(xi)|1>  ->  w = +/- tan(xi)
        let lo = grid_oracle_extremal(&pre, &sigma_x(), xi, 8, Objective::Minimize).unwrap();
        let hi = grid_oracle_extremal(&pre, &sigma_x(), xi, 8, Objective::Maximize).unwrap();
        assert_abs_diff_eq!(lo.value, -xi.tan(), epsilon = 1e-14);
        assert_abs_diff_eq!(hi.value, xi.tan(), epsilon = 1e-14);
        assert_eq!(lo.evaluated, 2);
    }

    #[test]
    fn returned_phi_is_on_cone() {
        let l = Labels::indexed(3).unwrap();
        let pre = StateVector::from_real(l.clone(), &[1.0, 2.0, 2.0]).unwrap();
        let a = Observable::from_real("A", l, &[1.0, 0.5, 0.0, 0.5, -1.0, 0.2, 0.0, 0.2, 0.3]).unwrap();
        let r = grid_oracle_extremal(&pre, &a, 0.7, 360, Objective::Minimize).unwrap();
        assert_abs_diff_eq!(r.phi.inner(&pre).unwrap().re, 0.7f64.cos(), epsilon = 1e-12);
        let w = crate::weak::weak_value(&pre, &r.phi, &a).unwrap();
        assert_abs_diff_eq!(w.re, r.value, epsilon = 1e-12);
    }

    #[test]
    fn deterministic_across_runs() {
        let l = Labels::indexed(4).unwrap();
        let pre = StateVector::from_real(l.clone(), &[0.0, 1.0, 1.0, 1.0]).unwrap();
        let a = crate::hilbert::projector_onto(&StateVector::basis(&l, 1).unwrap());
        let x = grid_oracle_extremal(&pre, &a, 1.0, 200, Objective::Minimize).unwrap();
        let y = grid_oracle_extremal(&pre, &a, 1.0, 200, Objective::Minimize).unwrap();
        assert_eq!(x.value, y.value);
        assert_eq!(x.phi, y.phi);
    }

    #[test]
    fn rejects_bad_inputs() {
        let pre = StateVector::basis(&Labels::indexed(2).unwrap(), 0).unwrap();
        assert!(matches!(
            grid_oracle_extremal(&pre, &sigma_x(), 1.0, 7, Objective::Minimize),
            Err(WeakError::ResolutionTooCoarse(7))
        ));
        let big = Labels::indexed(9).unwrap();
        let pre9 = StateVector::basis(&big, 0).unwrap();
        assert!(matches!(
            grid_oracle_extremal(&pre9, &Observable::identity(&big), 1.0, 8, Objective::Minimize),
            Err(WeakError::OracleDimension { .. })
        ));
        assert!(matches!(
            grid_oracle_extremal(&pre, &sigma_x(), 0.0, 8, Objective::Minimize),
            Err(WeakError::XiOutOfRange { .. })
        ));
    }
}
