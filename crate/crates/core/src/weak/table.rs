use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WeakError};
use crate::hilbert::{Observable, StateVector};

use super::DEFAULT_OVERLAP_FLOOR;

/// Tolerance for the orthonormality of a post-selection basis.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// A post-selection state together with its display name.
#[derive(Clone, Debug)]
pub struct PostState {
    pub name: String,
    pub state: StateVector,
}

impl PostState {
    pub fn new(name: impl Into<String>, state: StateVector) -> Self {
        Self {
            name: name.into(),
            state,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub overlap_floor: f64,
    /// Reject post-selections that are not a complete orthonormal basis.
    pub require_basis: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            overlap_floor: DEFAULT_OVERLAP_FLOOR,
            require_basis: true,
        }
    }
}

/// One observable's weak values across the post-selections.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub name: String,
    /// `None` where the post-selection is orthogonal to the pre-selection.
    pub cells: Vec<Option<Complex64>>,
    pub average: Complex64,
    /// Closed-form expression per cell, when the builder knows one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formulas: Option<Vec<String>>,
}

/// A summary row below the observables (`Sum`, `Sum of squared`).
#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub label: String,
    pub cells: Vec<Option<Complex64>>,
    pub average: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakValueTable {
    pub title: String,
    pub post_labels: Vec<String>,
    pub weights: Vec<f64>,
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_sums: Option<SummaryRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_sums: Option<SummaryRow>,
}

/// Checks that `states` are orthonormal and, if `complete`, span the space.
pub fn validate_basis(states: &[&StateVector], complete: bool) -> Result<()> {
    let mut max_deviation = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let want = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((a.inner(b)? - Complex64::new(want, 0.0)).norm());
        }
    }
    if max_deviation >= BASIS_TOLERANCE {
        return Err(WeakError::NotOrthonormal { max_deviation });
    }
    if complete {
        let dimension = states.first().map_or(0, |s| s.dim());
        if states.len() != dimension || dimension == 0 {
            return Err(WeakError::IncompleteBasis {
                found: states.len(),
                dimension,
            });
        }
    }
    Ok(())
}

/// Tabulates `h_A(x)` for every observable and post-selection.
///
/// Averages use `sum_x <psi|x><x|A|psi>`, so a post-selection orthogonal to
/// the pre-selection contributes exactly zero even though its cell is
/// undefined.
pub fn weak_value_table(
    pre: &StateVector,
    post: &[PostState],
    observables: &[Observable],
    options: TableOptions,
) -> Result<WeakValueTable> {
    if observables.is_empty() {
        return Err(WeakError::EmptyObservableSet);
    }
    let states: Vec<&StateVector> = post.iter().map(|p| &p.state).collect();
    if options.require_basis {
        validate_basis(&states, true)?;
    }
    let overlaps = states
        .iter()
        .map(|x| x.inner(pre))
        .collect::<Result<Vec<_>>>()?;
    let weights = overlaps.iter().map(|z| z.norm_sqr()).collect();

    let rows = observables
        .iter()
        .map(|a| {
            let applied = a.apply(pre)?;
            let mut cells = Vec::with_capacity(states.len());
            let mut average = Complex64::new(0.0, 0.0);
            for (x, overlap) in states.iter().zip(&overlaps) {
                let numerator = x.inner_raw(&applied);
                average += overlap.conj() * numerator;
                cells.push((overlap.norm() >= options.overlap_floor).then(|| numerator / overlap));
            }
            Ok(TableRow {
                name: a.name().to_string(),
                cells,
                average,
                formulas: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(WeakValueTable {
        title: String::new(),
        post_labels: post.iter().map(|p| p.name.clone()).collect(),
        weights,
        rows,
        column_sums: None,
        square_sums: None,
    })
}

impl WeakValueTable {
    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    /// Adds the `Sum` row: per-column sums over the observables (undefined
    /// columns stay undefined) and the sum of the row averages.
    pub fn with_column_sums(mut self) -> Self {
        let cells = self.column_fold(|acc, z| acc + z);
        let average = self.rows.iter().map(|r| r.average).sum();
        self.column_sums = Some(SummaryRow {
            label: "Sum".into(),
            cells,
            average,
        });
        self
    }

    /// Adds the `Sum of squared` row: algebraic (not modulus) squares.
    pub fn with_square_sums(mut self) -> Self {
        let cells = self.column_fold(|acc, z| acc + z * z);
        let average = self.rows.iter().map(|r| r.average * r.average).sum();
        self.square_sums = Some(SummaryRow {
            label: "Sum of squared".into(),
            cells,
            average,
        });
        self
    }

    fn column_fold(&self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Vec<Option<Complex64>> {
        (0..self.post_labels.len())
            .map(|col| {
                self.rows.iter().try_fold(Complex64::new(0.0, 0.0), |acc, row| row.cells[col].map(|z| f(acc, z)))
            })
            .collect()
    }

    pub fn row(&self, name: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.post_labels.iter().position(|l| l == label)
    }

    /// Weak value at (`row`, `column`), if both exist and the cell is defined.
    pub fn cell(&self, row: &str, column: &str) -> Option<Complex64> {
        let col = self.column_index(column)?;
        self.row(row)?.cells[col]
    }

    /// Row average using only the real part of each weak value.
    pub fn real_part_average(&self, row: &str) -> Option<f64> {
        let r = self.row(row)?;
        Some(
            r.cells
                .iter()
                .zip(&self.weights)
                .filter_map(|(c, w)| c.map(|z| z.re * w))
                .sum(),
        )
    }
}
