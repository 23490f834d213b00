use std::fmt;
use std::sync::Arc;

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Result, WeakError};
use crate::MAX_DIMENSION;

/// Norm below which a raw amplitude list is treated as the zero vector.
pub const ZERO_NORM: f64 = 1e-14;

/// Ordered, unique names for the basis states of a Hilbert space.
#[derive(Clone, PartialEq, Eq)]
pub struct Labels(Arc<[String]>);

impl Labels {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_DIMENSION {
            return Err(WeakError::DimensionTooLarge(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(WeakError::DuplicateLabel(name.clone()));
            }
        }
        Ok(Self(names.into()))
    }

    /// Labels `"0"`, `"1"`, ... for an anonymous space of dimension `n`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|l| l == name)
    }

    /// Product labels in row-major order: `a_i` followed by `b_j`.
    pub fn tensor(&self, other: &Labels) -> Result<Self> {
        Self::new(
            self.0
                .iter()
                .flat_map(|a| other.0.iter().map(move |b| format!("{a}{b}"))),
        )
    }

    pub(crate) fn ensure_same(&self, other: &Labels) -> Result<()> {
        if self.len() != other.len() {
            return Err(WeakError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if self != other {
            return Err(WeakError::LabelMismatch {
                left: self.0.to_vec(),
                right: other.0.to_vec(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Labels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A normalized pure state over a labeled basis.
///
/// The amplitudes always have unit norm; construction divides the raw input
/// by its norm. Because weak values are ratios, this does not change any
/// weak value computed from the state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    labels: Labels,
    amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Normalizes `raw` onto `labels`.
    pub fn new(labels: Labels, raw: Vec<Complex64>) -> Result<Self> {
        if raw.len() != labels.len() {
            return Err(WeakError::DimensionMismatch {
                expected: labels.len(),
                found: raw.len(),
            });
        }
        if let Some(i) = raw.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WeakError::NonFinite(i));
        }
        let amplitudes = Array1::from(raw);
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < ZERO_NORM {
            return Err(WeakError::ZeroVector { norm });
        }
        Ok(Self {
            labels,
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    pub fn from_real(labels: Labels, raw: &[f64]) -> Result<Self> {
        Self::new(labels, raw.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_array(labels: Labels, raw: Array1<Complex64>) -> Result<Self> {
        Self::new(labels, raw.to_vec())
    }

    /// The basis state `|labels[index]>`.
    pub fn basis(labels: &Labels, index: usize) -> Result<Self> {
        if index >= labels.len() {
            return Err(WeakError::DimensionMismatch {
                expected: labels.len(),
                found: index + 1,
            });
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); labels.len()];
        raw[index] = Complex64::new(1.0, 0.0);
        Self::new(labels.clone(), raw)
    }

    /// The basis state with the given label, if present.
    pub fn basis_named(labels: &Labels, name: &str) -> Option<Self> {
        labels.position(name).and_then(|i| Self::basis(labels, i).ok())
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// `<self|ket>`, conjugate-linear in `self`.
    pub fn inner(&self, ket: &StateVector) -> Result<Complex64> {
        self.labels.ensure_same(&ket.labels)?;
        Ok(self.inner_raw(&ket.amplitudes))
    }

    pub(crate) fn inner_raw(&self, ket: &Array1<Complex64>) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(ket.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies by a unit-modulus phase. The magnitude of `phase` is ignored.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        let unit = phase / phase.norm();
        Self {
            labels: self.labels.clone(),
            amplitudes: self.amplitudes.mapv(|z| z * unit),
        }
    }

    /// Largest imaginary part among the amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Normalizes `raw` into a state over `labels`.
pub fn make_state(labels: &Labels, raw: &[Complex64]) -> Result<StateVector> {
    StateVector::new(labels.clone(), raw.to_vec())
}

/// `<bra|ket>`.
pub fn inner_product(bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
    bra.inner(ket)
}

/// `|a> (x) |b>` with amplitude `a_i b_j` at row-major position `(i, j)`.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let labels = a.labels.tensor(&b.labels)?;
    let raw = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::new(labels, raw)
}
