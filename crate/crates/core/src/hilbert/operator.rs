use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::state::{Labels, StateVector};
use crate::error::{Result, WeakError};

/// Maximum entrywise `|M - M^dagger|` accepted for an observable.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A named Hermitian operator over a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    name: String,
    labels: Labels,
    matrix: Array2<Complex64>,
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermitian_deviation(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

impl Observable {
    pub fn new(name: impl Into<String>, labels: Labels, matrix: Array2<Complex64>) -> Result<Self> {
        let n = labels.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(WeakError::DimensionMismatch {
                expected: n,
                found: if matrix.nrows() != n { matrix.nrows() } else { matrix.ncols() },
            });
        }
        if let Some(i) = matrix.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WeakError::NonFinite(i));
        }
        let max_deviation = hermitian_deviation(&matrix);
        if max_deviation >= HERMITIAN_TOLERANCE {
            return Err(WeakError::NotHermitian { max_deviation });
        }
        Ok(Self {
            name: name.into(),
            labels,
            matrix,
        })
    }

    /// Builds from row-major real entries.
    pub fn from_real(name: impl Into<String>, labels: Labels, entries: &[f64]) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n * n {
            return Err(WeakError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let m = Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(entries[i * n + j], 0.0));
        Self::new(name, labels, m)
    }

    pub fn identity(labels: &Labels) -> Self {
        let n = labels.len();
        Self {
            name: "id".into(),
            labels: labels.clone(),
            matrix: Array2::eye(n),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `A|ket>` as a raw (unnormalized) amplitude vector.
    pub fn apply(&self, ket: &StateVector) -> Result<Array1<Complex64>> {
        self.labels.ensure_same(ket.labels())?;
        Ok(self.matrix.dot(ket.amplitudes()))
    }

    /// `<bra|A|ket>`.
    pub fn sandwich(&self, bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
        self.labels.ensure_same(bra.labels())?;
        Ok(bra.inner_raw(&self.apply(ket)?))
    }

    /// `<psi|A|psi>`; real for a Hermitian operator up to rounding.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        Ok(self.sandwich(psi, psi)?.re)
    }

    fn combine(&self, other: &Observable, name: String, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.labels.ensure_same(&other.labels)?;
        let matrix = ndarray::Zip::from(&self.matrix)
            .and(&other.matrix)
            .map_collect(|&a, &b| f(a, b));
        Ok(Self {
            name,
            labels: self.labels.clone(),
            matrix,
        })
    }

    pub fn plus(&self, other: &Observable) -> Result<Self> {
        self.combine(other, format!("{}+{}", self.name, other.name), |a, b| a + b)
    }

    pub fn minus(&self, other: &Observable) -> Result<Self> {
        self.combine(other, format!("{}-{}", self.name, other.name), |a, b| a - b)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            name: format!("{factor}*{}", self.name),
            labels: self.labels.clone(),
            matrix: self.matrix.mapv(|z| z * factor),
        }
    }

    /// Largest absolute imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// The rank-1 projector `|v><v|`.
pub fn projector_onto(state: &StateVector) -> Observable {
    let v = state.amplitudes();
    let n = v.len();
    let matrix = Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj());
    Observable {
        name: "P".into(),
        labels: state.labels().clone(),
        matrix,
    }
}

/// Kronecker product `A (x) B`.
pub fn tensor_operator(a: &Observable, b: &Observable) -> Result<Observable> {
    let labels = a.labels.tensor(&b.labels)?;
    let (na, nb) = (a.dim(), b.dim());
    let matrix = Array2::from_shape_fn((na * nb, na * nb), |(r, c)| {
        a.matrix[[r / nb, c / nb]] * b.matrix[[r % nb, c % nb]]
    });
    Ok(Observable {
        name: format!("{}*{}", a.name, b.name),
        labels,
        matrix,
    })
}
