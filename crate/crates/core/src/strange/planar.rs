use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{cone_point, dot, ensure_real_state, real_part, to_state, XI_CEILING};
use crate::error::{Result, WeakError};
use crate::hilbert::{projector_onto, StateVector};
use crate::weak::weak_value;

/// Which way to tilt `phi` away from `psi` inside the `psi`-`n` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Toward `n`: `<n|phi> = cos(theta_n - xi)`.
    Plus,
    /// Away from `n`: `<n|phi> = cos(theta_n + xi)`, the negative branch.
    Minus,
}

/// Angles of the planar construction, both in `(0, pi/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanarGeometry {
    /// Angle between `|n>` and `|psi>`.
    pub theta_n: f64,
    /// Cone angle, `Pr(phi) = cos^2(xi)`.
    pub xi: f64,
}

impl PlanarGeometry {
    /// Closed-form weak value of `|n><n|`: `cos(theta_n +/- xi) cos(theta_n) / cos(xi)`.
    pub fn weak_value(&self, branch: Branch) -> f64 {
        let tilt = match branch {
            Branch::Plus => self.theta_n - self.xi,
            Branch::Minus => self.theta_n + self.xi,
        };
        tilt.cos() * self.theta_n.cos() / self.xi.cos()
    }

    /// The negative branch is negative exactly when `theta_n + xi` is obtuse.
    /// True when the minus branch is strictly negative; the right-angle
    /// boundary (within 1e-12) counts as zero.
    pub fn admits_negative(&self) -> bool {
        self.theta_n + self.xi > FRAC_PI_2 + 1e-12
    }
}

#[derive(Clone, Debug)]
pub struct PlanarPostSelection {
    pub phi: StateVector,
    pub weak_value: f64,
    pub geometry: PlanarGeometry,
}

/// Post-selection on the cone `<phi|psi> = cos(xi)` inside `span{psi, n}`
/// and the weak value of `|n><n|` it produces.
///
/// The sign of `n` is chosen so that `<n|psi> > 0`; the projector is unchanged.
pub fn planar_postselection(pre: &StateVector, n: &StateVector, xi: f64, branch: Branch) -> Result<PlanarPostSelection> {
    ensure_real_state(pre)?;
    ensure_real_state(n)?;
    pre.inner(n)?;
    if !(xi.is_finite() && xi > 0.0 && xi < FRAC_PI_2) {
        return Err(WeakError::XiOutOfRange {
            xi,
            ceiling: XI_CEILING,
        });
    }
    if xi >= XI_CEILING {
        return Err(WeakError::NullPostSelection { overlap: xi.cos() });
    }
    let psi = real_part(pre);
    let mut nv = real_part(n);
    let overlap = dot(&nv, &psi);
    if overlap.abs() < 1e-12 {
        return Err(WeakError::OrthogonalIntermediate);
    }
    if overlap < 0.0 {
        nv.mapv_inplace(|x| -x);
    }
    let cos_theta = overlap.abs().min(1.0);
    let geometry = PlanarGeometry {
        theta_n: cos_theta.acos(),
        xi,
    };
    let toward = match branch {
        Branch::Plus => nv.clone(),
        Branch::Minus => nv.mapv(|x| -x),
    };
    // n parallel to psi: the plane degenerates and every cone point gives w = 1.
    let phi = match cone_point(&psi, &toward, xi) {
        Some(phi) => phi,
        None => {
            (0..psi.len())
                .map(|i| {
                    let mut e = ndarray::Array1::zeros(psi.len());
                    e[i] = 1.0;
                    e
                })
                .find_map(|e| cone_point(&psi, &e, xi))
                .ok_or(WeakError::DimensionMismatch { expected: 2, found: psi.len() })?
        }
    };
    let phi = to_state(pre, &phi)?;
    let w = weak_value(pre, &phi, &projector_onto(n))?;
    Ok(PlanarPostSelection {
        phi,
        weak_value: w.re,
        geometry,
    })
}
