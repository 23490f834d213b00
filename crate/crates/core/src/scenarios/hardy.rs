//! Hardy's paradox: an electron and a positron in two Mach-Zehnder
//! interferometers whose inner arms `I_e`, `I_p` cross.
//!
//! The two-particle space is ordered positron-major:
//! `I_pI_e, I_pO_e, O_pI_e, O_pO_e`. Detector states per particle are
//! `B = (I + O)/sqrt2` and `D = (I - O)/sqrt2`.

use std::f64::consts::FRAC_1_SQRT_2;

use indexmap::IndexMap;
use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::Scenario;
use crate::error::{Result, WeakError};
use crate::hilbert::{
    hermitian_eigen, projector_onto, tensor_operator, tensor_product, Labels, Observable, StateVector,
};
use crate::suite::{CheckKind, CheckSpec};
use crate::weak::{
    abl_probability, observable_distance, weak_value, weak_value_table, PostState, TableOptions, WeakValueTable,
};

pub const POSITRON_LABELS: [&str; 2] = ["I_p", "O_p"];
pub const ELECTRON_LABELS: [&str; 2] = ["I_e", "O_e"];
/// Detector coincidences in table order.
pub const DETECTORS: [&str; 4] = ["D_pD_e", "D_pB_e", "B_pD_e", "B_pB_e"];

pub const OUT_POSITRON_BRIGHT: &str = "P[O_p(I_e+O_e)]";
pub const OUT_ELECTRON_BRIGHT: &str = "P[(I_p+O_p)O_e]";
pub const IN_P_OUT_E: &str = "P[I_pO_e]";
pub const OUT_P_IN_E: &str = "P[O_pI_e]";
pub const OUT_OUT: &str = "P[O_pO_e]";
pub const IN_IN: &str = "P[I_pI_e]";
pub const ENTANGLED: &str = "P[I_pO_e+O_pI_e]";
pub const POSITRON_OUT: &str = "P[O_p*id]";
pub const POSITRON_IN: &str = "P[I_p*id]";
pub const ELECTRON_OUT: &str = "P[id*O_e]";
pub const ELECTRON_IN: &str = "P[id*I_e]";

/// Observable pairs that the counter-factual arguments declare equivalent,
/// in the order InPositron, InElectron, OutPositron, OutElectron.
pub const COUNTERFACTUAL_PAIRS: [(&str, &str); 4] = [
    (IN_P_OUT_E, POSITRON_IN),
    (OUT_P_IN_E, ELECTRON_IN),
    (OUT_POSITRON_BRIGHT, POSITRON_OUT),
    (OUT_ELECTRON_BRIGHT, ELECTRON_OUT),
];

const TOLERANCE: f64 = 1e-12;

/// Amplitudes of `eta|I_pI_e> + x|I_pO_e> + y|O_pI_e> + z|O_pO_e>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyCoefficients {
    pub eta: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl HardyCoefficients {
    pub fn new(eta: Complex64, x: Complex64, y: Complex64, z: Complex64) -> Result<Self> {
        let norm_sq = eta.norm_sqr() + x.norm_sqr() + y.norm_sqr() + z.norm_sqr();
        if (norm_sq - 1.0).abs() > TOLERANCE {
            return Err(WeakError::NotNormalized { norm_sq });
        }
        Ok(Self { eta, x, y, z })
    }

    pub fn real(eta: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let c = |v| Complex64::new(v, 0.0);
        Self::new(c(eta), c(x), c(y), c(z))
    }

    /// Scales arbitrary real amplitudes to unit norm.
    pub fn normalized_real(eta: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (eta * eta + x * x + y * y + z * z).sqrt();
        if norm < 1e-14 {
            return Err(WeakError::ZeroVector { norm });
        }
        Self::real(eta / norm, x / norm, y / norm, z / norm)
    }

    /// `(|I_pO_e> + |O_pI_e> + |O_pO_e>)/sqrt3`.
    pub fn standard() -> Self {
        let t = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        Self {
            eta: Complex64::new(0.0, 0.0),
            x: t,
            y: t,
            z: t,
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.eta, self.x, self.y, self.z]
    }

    /// Overlaps `<detector|psi>` in [`DETECTORS`] order.
    pub fn zetas(&self) -> [Complex64; 4] {
        let Self { eta, x, y, z } = *self;
        [
            (eta - x - y + z) / 2.0,
            (eta + x - y - z) / 2.0,
            (eta - x + y - z) / 2.0,
            (eta + x + y + z) / 2.0,
        ]
    }
}

pub fn hardy_labels() -> Labels {
    let p = Labels::new(POSITRON_LABELS).expect("static labels");
    let e = Labels::new(ELECTRON_LABELS).expect("static labels");
    p.tensor(&e).expect("static labels")
}

fn particle_states(labels: [&str; 2]) -> (Labels, StateVector, StateVector, StateVector, StateVector) {
    let l = Labels::new(labels).expect("static labels");
    let inner = StateVector::basis(&l, 0).expect("basis");
    let outer = StateVector::basis(&l, 1).expect("basis");
    let bright = StateVector::from_real(l.clone(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("valid");
    let dark = StateVector::from_real(l.clone(), &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("valid");
    (l, inner, outer, bright, dark)
}

/// Detector coincidence states in [`DETECTORS`] order.
pub fn detector_states() -> Vec<PostState> {
    let (_, _, _, bp, dp) = particle_states(POSITRON_LABELS);
    let (_, _, _, be, de) = particle_states(ELECTRON_LABELS);
    let pairs = [(&dp, &de), (&dp, &be), (&bp, &de), (&bp, &be)];
    DETECTORS
        .iter()
        .zip(pairs)
        .map(|(name, (p, e))| PostState::new(*name, tensor_product(p, e).expect("2x2")))
        .collect()
}

/// The path projectors used throughout the Hardy analysis.
pub fn hardy_registry() -> IndexMap<String, Observable> {
    let (pl, ip, op, _, _) = particle_states(POSITRON_LABELS);
    let (el, ie, oe, be, _) = particle_states(ELECTRON_LABELS);
    let labels = hardy_labels();
    let prod = |a: &StateVector, b: &StateVector| tensor_product(a, b).expect("2x2");
    let proj = |name: &str, s: &StateVector| projector_onto(s).renamed(name);
    let bright_p = StateVector::from_real(pl.clone(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("valid");
    let entangled = StateVector::from_real(labels, &[0.0, 1.0, 1.0, 0.0]).expect("valid");
    let local = |name: &str, a: Observable, b: Observable| tensor_operator(&a, &b).expect("2x2").renamed(name);

    [
        proj(OUT_POSITRON_BRIGHT, &prod(&op, &be)),
        proj(OUT_ELECTRON_BRIGHT, &prod(&bright_p, &oe)),
        proj(IN_P_OUT_E, &prod(&ip, &oe)),
        proj(OUT_P_IN_E, &prod(&op, &ie)),
        proj(OUT_OUT, &prod(&op, &oe)),
        proj(IN_IN, &prod(&ip, &ie)),
        proj(ENTANGLED, &entangled),
        local(POSITRON_OUT, projector_onto(&op), Observable::identity(&el)),
        local(POSITRON_IN, projector_onto(&ip), Observable::identity(&el)),
        local(ELECTRON_OUT, Observable::identity(&pl), projector_onto(&oe)),
        local(ELECTRON_IN, Observable::identity(&pl), projector_onto(&ie)),
    ]
    .into_iter()
    .map(|o| (o.name().to_string(), o))
    .collect()
}

pub fn hardy_prestate(coeffs: &HardyCoefficients) -> Result<StateVector> {
    StateVector::new(hardy_labels(), coeffs.as_array().to_vec())
}

/// Hardy scenario: detector post-selections, the path-projector registry,
/// and the check suite (completeness over the path basis, Born reduction,
/// variance, bilinear consistency, ABL, and the counter-factual
/// equivalences).
pub fn build_hardy(coeffs: &HardyCoefficients) -> Result<Scenario> {
    let mut scenario = Scenario::new(hardy_prestate(coeffs)?);
    for post in detector_states() {
        scenario = scenario.with_post(post.name, post.state)?;
    }
    for (_, observable) in hardy_registry() {
        scenario = scenario.with_observable(observable)?;
    }
    scenario = scenario
        .with_check(CheckSpec::new(CheckKind::Consistency1))
        .with_check(CheckSpec::new(CheckKind::Consistency2))
        .with_check(CheckSpec::new(CheckKind::Born))
        .with_check(CheckSpec::new(CheckKind::Variance))
        .with_check(CheckSpec::new(CheckKind::Abl));
    for (a, b) in COUNTERFACTUAL_PAIRS {
        scenario = scenario.with_check(CheckSpec::new(CheckKind::Equivalence).observables([a, b]));
    }
    Ok(scenario)
}

fn table(scenario: &Scenario, rows: &[&str]) -> Result<WeakValueTable> {
    weak_value_table(
        &scenario.pre_state,
        &scenario.post_basis(),
        &scenario.select(rows)?,
        TableOptions {
            overlap_floor: scenario.overlap_floor,
            require_basis: true,
        },
    )
}

/// The published Hardy tables for the standard pre-selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardyTable {
    /// Three mutually non-commuting projectors, all weak values non-negative.
    Noncommuting,
    /// `O_p(I_e+O_e)` with the orthogonal `I_pO_e`, and their column sums.
    Cancellation,
    /// The complete path-projector resolution with column sums.
    Orthogonal,
    /// All eight rows of the general-coefficient table, with formulas.
    General,
}

impl HardyTable {
    pub const ALL: [(&'static str, HardyTable); 4] = [
        ("noncommuting", HardyTable::Noncommuting),
        ("cancellation", HardyTable::Cancellation),
        ("orthogonal", HardyTable::Orthogonal),
        ("general", HardyTable::General),
    ];
}

pub fn hardy_table(variant: HardyTable) -> Result<WeakValueTable> {
    let scenario = build_hardy(&HardyCoefficients::standard())?;
    Ok(match variant {
        HardyTable::Noncommuting => table(&scenario, &[OUT_POSITRON_BRIGHT, OUT_ELECTRON_BRIGHT, ENTANGLED])?
            .titled("Hardy: non-commuting projectors"),
        HardyTable::Cancellation => table(&scenario, &[OUT_POSITRON_BRIGHT, IN_P_OUT_E])?
            .with_column_sums()
            .titled("Hardy: partial cancellation"),
        HardyTable::Orthogonal => table(&scenario, &[IN_P_OUT_E, OUT_P_IN_E, OUT_OUT, IN_IN])?
            .with_column_sums()
            .titled("Hardy: orthogonal path projectors"),
        HardyTable::General => hardy_general_table(&HardyCoefficients::standard())?,
    })
}

const GENERAL_ROWS: [&str; 8] = [
    OUT_POSITRON_BRIGHT,
    OUT_ELECTRON_BRIGHT,
    IN_P_OUT_E,
    OUT_P_IN_E,
    POSITRON_OUT,
    POSITRON_IN,
    ELECTRON_OUT,
    ELECTRON_IN,
];

/// Closed-form numerators over `2 zeta` for the general table, per row and
/// detector. The first two rows carry the factor 1/2 from the normalized
/// bright-port state.
const GENERAL_NUMERATORS: [[&str; 4]; 8] = [
    ["0", "-(y+z)", "0", "(y+z)"],
    ["0", "0", "-(x+z)", "(x+z)"],
    ["-x", "x", "-x", "x"],
    ["-y", "-y", "y", "y"],
    ["(-y+z)", "(-y-z)", "(y-z)", "(y+z)"],
    ["(η-x)", "(η+x)", "(η-x)", "(η+x)"],
    ["(-x+z)", "(x-z)", "(-x-z)", "(x+z)"],
    ["(η-y)", "(η-y)", "(η+y)", "(η+y)"],
];

/// Weak values of every Hardy path observable for arbitrary coefficients.
/// Cells are evaluated numerically; each row also carries its closed form.
pub fn hardy_general_table(coeffs: &HardyCoefficients) -> Result<WeakValueTable> {
    let scenario = build_hardy(coeffs)?;
    let mut t = table(&scenario, &GENERAL_ROWS)?.titled("Hardy: general pre-selection");
    for (row, numerators) in t.rows.iter_mut().zip(GENERAL_NUMERATORS) {
        row.formulas = Some(
            numerators
                .iter()
                .zip(DETECTORS)
                .map(|(num, det)| if *num == "0" { "0".to_string() } else { format!("{num}/(2ζ[{det}])") })
                .collect(),
        );
    }
    Ok(t)
}

/// `w_A - w_B` at `D_pD_e` for each counter-factual pair (InPositron,
/// InElectron, OutPositron, OutElectron).
pub fn counterfactual_weak_differences(coeffs: &HardyCoefficients) -> Result<[Complex64; 4]> {
    let pre = hardy_prestate(coeffs)?;
    let registry = hardy_registry();
    let dd = &detector_states()[0].state;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (slot, (a, b)) in out.iter_mut().zip(COUNTERFACTUAL_PAIRS) {
        *slot = weak_value(&pre, dd, &registry[a])? - weak_value(&pre, dd, &registry[b])?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HardyDerivation {
    pub coefficients: HardyCoefficients,
    /// Solution of the expectation-form constraints `(B - A)|psi> = 0`.
    pub expectation_route: [Complex64; 4],
    /// Solution of the weak-form constraints `<D_pD_e|(A - B)|psi> = 0`.
    pub weak_route: [Complex64; 4],
    /// `<psi|(A - B)^2|psi>` per pair at the derived state.
    pub expectation_residuals: [f64; 4],
    /// `|w_A - w_B|` at `D_pD_e` per pair at the derived state.
    pub weak_residuals: [f64; 4],
}

impl HardyDerivation {
    /// Largest coefficient difference between the two routes.
    pub fn route_disagreement(&self) -> f64 {
        self.expectation_route
            .iter()
            .zip(&self.weak_route)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Unit vector spanning the null space of the PSD matrix `m`, with the
/// spectral phase convention (first non-zero amplitude real-positive).
fn unique_null_vector(m: &Array2<Complex64>) -> Result<[Complex64; 4]> {
    let (values, vectors) = hermitian_eigen(m)?;
    let null: Vec<_> = values.iter().zip(&vectors).filter(|(v, _)| v.abs() < 1e-12).collect();
    if null.len() != 1 {
        return Err(WeakError::Underdetermined {
            null_dimension: null.len(),
        });
    }
    let v = null[0].1;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Recovers the Hardy pre-selection from the four counter-factual
/// equivalences, once from their expectation form and once from their weak
/// form at the `D_pD_e` post-selection.
///
/// Each equivalence pairs projectors with `A <= B`, so
/// `<psi|(A - B)^2|psi> = ||(B - A) psi||^2` and the expectation constraints
/// are the linear system `(B - A)|psi> = 0`. The weak constraints
/// `w_A(D_pD_e) = w_B(D_pD_e)` reduce to `<D_pD_e|(A - B)|psi> = 0`. Both
/// systems have a one-dimensional solution space.
pub fn derive_hardy_prestate() -> Result<HardyDerivation> {
    let registry = hardy_registry();
    let dd = detector_states()[0].state.amplitudes().clone();
    let mut gram_expectation = Array2::<Complex64>::zeros((4, 4));
    let mut gram_weak = Array2::<Complex64>::zeros((4, 4));
    for (a, b) in COUNTERFACTUAL_PAIRS {
        let d = registry[a].matrix() - registry[b].matrix();
        let dh = d.t().mapv(|z| z.conj());
        gram_expectation = gram_expectation + dh.dot(&d);
        // bra row <D_pD_e|(A - B)
        let row = dd.mapv(|z| z.conj()).dot(&d);
        for i in 0..4 {
            for j in 0..4 {
                gram_weak[[i, j]] += row[i].conj() * row[j];
            }
        }
    }
    let expectation_route = unique_null_vector(&gram_expectation)?;
    let weak_route = unique_null_vector(&gram_weak)?;
    let [eta, x, y, z] = expectation_route;
    let coefficients = HardyCoefficients::new(eta, x, y, z)?;

    let pre = hardy_prestate(&coefficients)?;
    let mut expectation_residuals = [0.0; 4];
    for (slot, (a, b)) in expectation_residuals.iter_mut().zip(COUNTERFACTUAL_PAIRS) {
        *slot = observable_distance(&pre, &registry[a], &registry[b])?;
    }
    let weak_residuals = counterfactual_weak_differences(&coefficients)?.map(|z| z.norm());
    Ok(HardyDerivation {
        coefficients,
        expectation_route,
        weak_route,
        expectation_residuals,
        weak_residuals,
    })
}

/// Detector probabilities when the positron path is measured projectively.
#[derive(Clone, Debug, Serialize)]
pub struct FactualCase {
    /// The measured projector, e.g. `P[O_p*id]`.
    pub measured: String,
    /// Probability of the measurement outcome itself.
    pub outcome_probability: f64,
    /// Sequential Born rule: `|<x|P psi>|^2` per detector.
    pub born: Vec<f64>,
    /// `|w(P psi)|^2 Pr(x)` per detector, via the ABL formula.
    pub abl: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactualProbabilities {
    pub detectors: Vec<String>,
    pub cases: Vec<FactualCase>,
    /// Unconditional detector probabilities `|<x|psi>|^2`.
    pub unconditional: Vec<f64>,
}

/// Detector statistics when the positron's path (`O_p` or `I_p`) is
/// measured in the standard Hardy state, computed by the sequential Born
/// rule and reconstructed through the ABL formula.
pub fn hardy_factual_probabilities() -> Result<FactualProbabilities> {
    let pre = hardy_prestate(&HardyCoefficients::standard())?;
    let registry = hardy_registry();
    let detectors = detector_states();
    let mut cases = Vec::new();
    for measured in [POSITRON_OUT, POSITRON_IN] {
        let projected = registry[measured].apply(&pre)?;
        let outcome_probability = projected.iter().map(|z| z.norm_sqr()).sum();
        let collapsed = StateVector::new(pre.labels().clone(), projected.to_vec())?;
        let mut born = Vec::new();
        let mut abl = Vec::new();
        for det in &detectors {
            born.push(det.state.inner(&collapsed)?.norm_sqr() * outcome_probability);
            abl.push(match abl_probability(&pre, &det.state, &collapsed) {
                Ok(p) => p.factual_probability,
                // a detector the pre-selection never reaches cannot fire
                Err(WeakError::NullPostSelection { .. }) => 0.0,
                Err(e) => return Err(e),
            });
        }
        cases.push(FactualCase {
            measured: measured.to_string(),
            outcome_probability,
            born,
            abl,
        });
    }
    let unconditional = detectors
        .iter()
        .map(|d| d.state.inner(&pre).map(|z| z.norm_sqr()))
        .collect::<Result<_>>()?;
    Ok(FactualProbabilities {
        detectors: DETECTORS.iter().map(|s| s.to_string()).collect(),
        cases,
        unconditional,
    })
}

/// A point of the post-selection family
/// `cos(t)|I_pO_e> + sin(t)(|O_pI_e> + |O_pO_e>)/2` in the plane of the
/// standard pre-selection and `|I_pO_e>`.
#[derive(Clone, Debug)]
pub struct PlanarFamilyPoint {
    pub theta: f64,
    /// `<phi|psi>` for the family member as written, `(sin t + cos t)/sqrt3`.
    pub overlap_as_written: f64,
    /// `<phi|psi>` after normalizing `phi`.
    pub overlap_normalized: f64,
    /// Weak value of `P[I_pO_e]`; diverges as the overlap vanishes.
    pub weak_value: Result<f64>,
}

pub fn hardy_planar_family(theta: f64) -> Result<PlanarFamilyPoint> {
    let labels = hardy_labels();
    let raw = [0.0, theta.cos(), theta.sin() / 2.0, theta.sin() / 2.0];
    let pre = hardy_prestate(&HardyCoefficients::standard())?;
    let overlap_as_written: f64 = raw.iter().zip(pre.amplitudes()).map(|(a, b)| a * b.re).sum();
    let phi = StateVector::from_real(labels, &raw)?;
    let overlap_normalized = phi.inner(&pre)?.re;
    let weak_value = weak_value(&pre, &phi, &hardy_registry()[IN_P_OUT_E]).map(|w| w.re);
    Ok(PlanarFamilyPoint {
        theta,
        overlap_as_written,
        overlap_normalized,
        weak_value,
    })
}
