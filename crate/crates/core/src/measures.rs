//! Entanglement and correlation quantifiers for two-qubit states.
//!
//! Discord is directional. With the measurement on the second qubit,
//!
//! ```text
//! D(A:B) = S(ρ_B) - S(ρ) + min_Π Σ_k p_k S(ρ_{A|k})
//! ```
//!
//! and the mirrored expression holds when the first qubit is measured. Two
//! independent minimizers are provided: a four-candidate closed form valid for
//! real symmetric X-states, and a brute-force search over the Bloch sphere.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, partial_trace, partial_transpose, pauli_y, psd_sqrt, spectrum_entropy, tensor_product,
    validate_density, ComplexMatrix, SubsystemDims, C64, PSD_WINDOW,
};
use crate::optimize::golden_section_min;

/// Discord values in `[-DISCORD_WINDOW, 0)` are roundoff and clamp to zero.
pub const DISCORD_WINDOW: f64 = 1e-9;
/// Measurement outcomes rarer than this carry no weight.
pub const OUTCOME_FLOOR: f64 = 1e-14;
/// Entries outside the X pattern (and imaginary parts) must stay below this.
pub const X_SHAPE_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are exact zeros inside the concurrence square roots.
const SQRT_FLOOR: f64 = 1e-14;
const ORACLE_PARAM_TOL: f64 = 1e-8;
const ORACLE_MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::First => 0,
            Side::Second => 1,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// A two-qubit split together with the side the projective measurement acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    dims: SubsystemDims,
    measured_side: Side,
}

impl Bipartition {
    pub fn qubits(measured_side: Side) -> Self {
        Self {
            dims: SubsystemDims::qubits(2),
            measured_side,
        }
    }

    pub fn new(dims: SubsystemDims, measured_side: Side) -> Result<Self> {
        if dims.factors() != [2, 2] {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: dims.total(),
            });
        }
        Ok(Self { dims, measured_side })
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn measured_side(&self) -> Side {
        self.measured_side
    }
}

impl Default for Bipartition {
    /// Projectors on the second qubit.
    fn default() -> Self {
        Self::qubits(Side::Second)
    }
}

/// Parameters of a rank-one projective qubit measurement.
///
/// `Bloch` names the outcome-0 direction `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
/// `Appendix` uses `κ = t² + y₃²` and `μ = (t y₁ + y₂ y₃)²` for the SU(2)
/// element `V = t I + i y·σ` whose first column is the outcome-0 direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasurementPoint {
    Bloch { theta: f64, phi: f64 },
    Appendix { kappa: f64, mu: f64 },
}

impl MeasurementPoint {
    pub fn bloch(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(Error::domain("theta", theta, "[0, pi]"));
        }
        if !(phi.is_finite() && (0.0..2.0 * PI).contains(&phi)) {
            return Err(Error::domain("phi", phi, "[0, 2pi)"));
        }
        Ok(Self::Bloch { theta, phi })
    }

    /// Requires `κ ∈ [0, 1]` and `0 ≤ μ ≤ κ(1-κ) ≤ 1/4`.
    pub fn appendix(kappa: f64, mu: f64) -> Result<Self> {
        if !(kappa.is_finite() && (0.0..=1.0).contains(&kappa)) {
            return Err(Error::domain("kappa", kappa, "[0, 1]"));
        }
        if !(mu.is_finite() && mu >= 0.0 && mu <= kappa * (1.0 - kappa) + 1e-15) {
            return Err(Error::domain("mu", mu, "[0, kappa (1 - kappa)]"));
        }
        Ok(Self::Appendix { kappa, mu })
    }

    /// Outcome-0 basis vector.
    ///
    /// For appendix coordinates the branch `y₃ = 0`, `t = √κ`, `y₁ = √(μ/κ)`,
    /// `y₂ = √(ℓ - μ/κ)` is used, giving `V|0⟩ = (t, -y₂ + i y₁)`.
    pub fn outcome_vector(&self) -> [C64; 2] {
        match *self {
            MeasurementPoint::Bloch { theta, phi } => {
                let half = 0.5 * theta;
                [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phi)]
            }
            MeasurementPoint::Appendix { kappa, mu } => {
                let t = kappa.sqrt();
                let y1 = if kappa > 0.0 { (mu / kappa).sqrt() } else { 0.0 };
                let y2 = ((1.0 - kappa) - y1 * y1).max(0.0).sqrt();
                [C64::new(t, 0.0), C64::new(-y2, y1)]
            }
        }
    }

    /// Equivalent Bloch angles `(θ, φ)`.
    pub fn to_bloch(&self) -> (f64, f64) {
        match *self {
            MeasurementPoint::Bloch { theta, phi } => (theta, phi),
            MeasurementPoint::Appendix { .. } => {
                let [a, b] = self.outcome_vector();
                let theta = 2.0 * a.norm().clamp(0.0, 1.0).acos();
                let phi = if b.norm() == 0.0 || a.norm() == 0.0 {
                    0.0
                } else {
                    (b.arg() - a.arg()).rem_euclid(2.0 * PI)
                };
                (theta, phi)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordMethod {
    XstateFast,
    Oracle,
}

/// Mutual information, classical correlation and discord in bits, with
/// `mutual_information = classical_correlation + discord`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub min_conditional_entropy: f64,
    pub argmin: MeasurementPoint,
    pub method: DiscordMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResolution {
    pub theta_points: usize,
    pub phi_points: usize,
}

impl Default for OracleResolution {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscordOptions {
    pub force_oracle: bool,
    pub resolution: OracleResolution,
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// Swaps the two qubits.
fn swap_qubits(rho: &ComplexMatrix) -> ComplexMatrix {
    const PERM: [usize; 4] = [0, 2, 1, 3];
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            out[(PERM[i], PERM[j])] = rho[(i, j)];
        }
    }
    out
}

/// Reorders so the measured qubit is the second one.
fn measured_last(rho: &ComplexMatrix, side: Side) -> ComplexMatrix {
    match side {
        Side::Second => rho.clone(),
        Side::First => swap_qubits(rho),
    }
}

fn binary_entropy(x: f64) -> f64 {
    [x, 1.0 - x]
        .into_iter()
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.log2())
        .sum()
}

/// Entropy of a unit-trace 2×2 Hermitian matrix `[[a, b], [b*, d]]`.
fn qubit_entropy(a: f64, d: f64, b: C64) -> f64 {
    let radius = ((a - d).powi(2) + 4.0 * b.norm_sqr()).sqrt().min(1.0);
    binary_entropy(0.5 * (1.0 + radius))
}

/// `[S(ρ), S(ρ_first), S(ρ_second)]` of a validated two-qubit state.
fn entropies(rho: &ComplexMatrix, dims: &SubsystemDims, joint_spectrum: &[f64]) -> Result<[f64; 3]> {
    let first = partial_trace(rho, dims, &[0])?;
    let second = partial_trace(rho, dims, &[1])?;
    let s = |m: &ComplexMatrix| qubit_entropy(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
    Ok([spectrum_entropy(joint_spectrum)?, s(&first), s(&second)])
}

/// `Σ_k p_k S(ρ_{A|k})` for the measurement with outcome-0 direction `v` on
/// the second qubit of an already-validated state.
fn conditional_entropy_second(rho: &ComplexMatrix, v: [C64; 2]) -> f64 {
    let w = [-v[1].conj(), v[0].conj()];
    let mut total = 0.0;
    for u in [v, w] {
        let mut block = [[C64::new(0.0, 0.0); 2]; 2];
        for (a, row) in block.iter_mut().enumerate() {
            for (a2, entry) in row.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..2 {
                    for b2 in 0..2 {
                        acc += u[b].conj() * rho[(2 * a + b, 2 * a2 + b2)] * u[b2];
                    }
                }
                *entry = acc;
            }
        }
        let pk = block[0][0].re + block[1][1].re;
        if pk < OUTCOME_FLOOR {
            continue;
        }
        total += pk * qubit_entropy(block[0][0].re / pk, block[1][1].re / pk, block[0][1] / pk);
    }
    total.clamp(0.0, 1.0)
}

/// `N(ρ) = log₂ Σ|λ(ρ^pt)|`, transposing the measured side. Exactly zero when
/// the partial transpose is positive within the PSD window.
pub fn log_negativity(rho: &ComplexMatrix, bp: &Bipartition) -> Result<f64> {
    check_two_qubit(rho)?;
    validate_density(rho)?;
    let pt = partial_transpose(rho, bp.dims(), bp.measured_side().index())?;
    let values = hermitian_eigen(&pt, false)?.values;
    if values.iter().all(|&x| x >= -PSD_WINDOW) {
        return Ok(0.0);
    }
    Ok(values.iter().map(|x| x.abs()).sum::<f64>().log2().max(0.0))
}

/// Wootters concurrence, computed from the Hermitian matrix `√ρ R √ρ` with
/// `R = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    validate_density(rho)?;
    let yy = tensor_product(&pauli_y(), &pauli_y())?;
    let flipped = rho.conj().conjugate_by(&yy);
    let root = psd_sqrt(rho, SQRT_FLOOR)?;
    let m = (&(&root * &flipped) * &root).hermitian_part();
    let mut lambdas: Vec<f64> = hermitian_eigen(&m, false)?
        .values
        .into_iter()
        .map(|x| if x > SQRT_FLOOR { x.sqrt() } else { 0.0 })
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Binary-entropy form of the entanglement of formation in terms of concurrence.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())).clamp(0.0, 1.0)
}

pub fn entanglement_of_formation(rho: &ComplexMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// `I = S(ρ_A) + S(ρ_B) - S(ρ)`.
pub fn mutual_information(rho: &ComplexMatrix, bp: &Bipartition) -> Result<f64> {
    check_two_qubit(rho)?;
    let spectrum = validate_density(rho)?;
    let [joint, first, second] = entropies(rho, bp.dims(), &spectrum)?;
    Ok((first + second - joint).max(0.0))
}

/// `Σ_k p_k S(ρ_{·|k})` for the projective measurement `m` on the measured side.
pub fn measured_conditional_entropy(rho: &ComplexMatrix, bp: &Bipartition, m: &MeasurementPoint) -> Result<f64> {
    check_two_qubit(rho)?;
    validate_density(rho)?;
    let arranged = measured_last(rho, bp.measured_side());
    Ok(conditional_entropy_second(&arranged, m.outcome_vector()))
}

fn check_x_state(rho: &ComplexMatrix) -> Result<()> {
    check_two_qubit(rho)?;
    let deviation = rho
        .x_shape_deviation()
        .max(rho.max_imag())
        .max(rho.hermiticity_deviation());
    if deviation > X_SHAPE_TOL {
        return Err(Error::NotXState { deviation });
    }
    Ok(())
}

fn is_real_x_state(rho: &ComplexMatrix) -> bool {
    check_x_state(rho).is_ok()
}

/// Closed-form conditional entropy of a real symmetric X-state measured on
/// its second qubit, as a function of `κ` and `μ`.
pub fn xstate_conditional_entropy(rho_x: &ComplexMatrix, kappa: f64, mu: f64) -> Result<f64> {
    check_x_state(rho_x)?;
    validate_density(rho_x)?;
    MeasurementPoint::appendix(kappa, mu)?;
    Ok(xstate_conditional_entropy_unchecked(rho_x, kappa, mu))
}

fn xstate_conditional_entropy_unchecked(rho: &ComplexMatrix, kappa: f64, mu: f64) -> f64 {
    let e = |i: usize, j: usize| rho[(i, j)].re;
    let (r11, r22, r33, r44) = (e(0, 0), e(1, 1), e(2, 2), e(3, 3));
    let (r14, r23) = (e(0, 3), e(1, 2));
    let ell = 1.0 - kappa;

    let p0 = (r22 + r44) * ell + (r11 + r33) * kappa;
    let p1 = 1.0 - p0;
    let beta = 4.0 * kappa * ell * (r14 + r23).powi(2) - 16.0 * mu * r14 * r23;
    let branches = [
        (p0, (r11 - r33) * kappa + (r22 - r44) * ell),
        (p1, (r11 - r33) * ell + (r22 - r44) * kappa),
    ];
    branches
        .into_iter()
        .filter(|&(pk, _)| pk >= OUTCOME_FLOOR)
        .map(|(pk, bias)| {
            let theta = ((bias * bias + beta).max(0.0).sqrt() / pk).min(1.0);
            pk * binary_entropy(0.5 * (1.0 + theta))
        })
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// The candidate measurements `(κ, μ)` in tie-break order.
const XSTATE_CANDIDATES: [(f64, f64); 4] = [(0.5, 0.0), (0.5, 0.25), (0.0, 0.0), (1.0, 0.0)];

fn assemble(
    entropies: [f64; 3],
    measured: Side,
    min_conditional_entropy: f64,
    argmin: MeasurementPoint,
    method: DiscordMethod,
) -> Result<DiscordResult> {
    let [joint, first, second] = entropies;
    let (unmeasured_s, measured_s) = match measured {
        Side::Second => (first, second),
        Side::First => (second, first),
    };
    let mutual_information = unmeasured_s + measured_s - joint;
    let mut classical_correlation = unmeasured_s - min_conditional_entropy;
    let mut discord = mutual_information - classical_correlation;
    if discord < -DISCORD_WINDOW {
        return Err(Error::NegativeDiscord(discord));
    }
    if discord < 0.0 {
        discord = 0.0;
        classical_correlation = mutual_information;
    }
    Ok(DiscordResult {
        mutual_information,
        classical_correlation,
        discord,
        min_conditional_entropy,
        argmin,
        method,
    })
}

/// Discord of a real symmetric X-state from the four candidate measurements
/// `(κ, μ) ∈ {(½, 0), (½, ¼), (0, 0), (1, 0)}`; earlier candidates win ties.
pub fn xstate_discord(rho_x: &ComplexMatrix, bp: &Bipartition) -> Result<DiscordResult> {
    check_two_qubit(rho_x)?;
    let arranged = measured_last(rho_x, bp.measured_side());
    check_x_state(&arranged)?;
    let spectrum = validate_density(rho_x)?;
    let ents = entropies(rho_x, bp.dims(), &spectrum)?;

    let mut best: Option<((f64, f64), f64)> = None;
    for (kappa, mu) in XSTATE_CANDIDATES {
        let s = xstate_conditional_entropy_unchecked(&arranged, kappa, mu);
        match best {
            Some((_, b)) if s >= b - 1e-14 => {}
            _ => best = Some(((kappa, mu), s)),
        }
    }
    let ((kappa, mu), min_s) = best.expect("candidate set is nonempty");
    assemble(
        ents,
        bp.measured_side(),
        min_s,
        MeasurementPoint::Appendix { kappa, mu },
        DiscordMethod::XstateFast,
    )
}

/// Discord by exhaustive `(θ, φ)` grid search followed by alternating
/// golden-section refinement of the best grid point.
pub fn oracle_discord(rho: &ComplexMatrix, bp: &Bipartition, resolution: OracleResolution) -> Result<DiscordResult> {
    check_two_qubit(rho)?;
    if resolution.theta_points == 0 || resolution.phi_points == 0 {
        return Err(Error::domain("oracle resolution", 0.0, "positive grid sizes"));
    }
    let spectrum = validate_density(rho)?;
    let ents = entropies(rho, bp.dims(), &spectrum)?;
    let arranged = measured_last(rho, bp.measured_side());

    let f = |theta: f64, phi: f64| {
        let half = 0.5 * theta;
        conditional_entropy_second(&arranged, [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phi)])
    };

    let (nt, np) = (resolution.theta_points, resolution.phi_points);
    let h_theta = PI / nt as f64;
    let h_phi = 2.0 * PI / np as f64;
    let grid: Vec<f64> = (0..nt)
        .into_par_iter()
        .flat_map_iter(|i| (0..np).map(move |j| (i, j)))
        .map(|(i, j)| f(i as f64 * h_theta, j as f64 * h_phi))
        .collect();
    // Sequential scan: the first minimum in (i, j) order wins ties.
    let (best_idx, mut best_val) = grid
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
    let mut theta = (best_idx / np) as f64 * h_theta;
    let mut phi = (best_idx % np) as f64 * h_phi;

    for _ in 0..ORACLE_MAX_ITERS {
        let (t_new, v_t) =
            golden_section_min(|t| f(t, phi), theta - h_theta, theta + h_theta, 0.1 * ORACLE_PARAM_TOL);
        let dt = if v_t < best_val {
            best_val = v_t;
            let d = (t_new - theta).abs();
            theta = t_new;
            d
        } else {
            0.0
        };
        let (p_new, v_p) = golden_section_min(|p| f(theta, p), phi - h_phi, phi + h_phi, 0.1 * ORACLE_PARAM_TOL);
        let dp = if v_p < best_val {
            best_val = v_p;
            let d = (p_new - phi).abs();
            phi = p_new;
            d
        } else {
            0.0
        };
        if dt < ORACLE_PARAM_TOL && dp < ORACLE_PARAM_TOL {
            break;
        }
    }

    let (theta, phi) = canonical_bloch(theta, phi);
    assemble(
        ents,
        bp.measured_side(),
        best_val,
        MeasurementPoint::Bloch { theta, phi },
        DiscordMethod::Oracle,
    )
}

/// Folds arbitrary angles back into `θ ∈ [0, π]`, `φ ∈ [0, 2π)` without
/// changing the measurement direction.
fn canonical_bloch(theta: f64, phi: f64) -> (f64, f64) {
    let mut theta = theta.rem_euclid(2.0 * PI);
    let mut phi = phi;
    if theta > PI {
        theta = 2.0 * PI - theta;
        phi += PI;
    }
    let mut phi = phi.rem_euclid(2.0 * PI);
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    (theta.clamp(0.0, PI), phi)
}

/// Directional discord. Real symmetric X-states (after moving the measured
/// qubit last) take the closed-form path unless `force_oracle` is set.
pub fn discord_with(rho: &ComplexMatrix, bp: &Bipartition, options: &DiscordOptions) -> Result<DiscordResult> {
    check_two_qubit(rho)?;
    if !options.force_oracle && is_real_x_state(&measured_last(rho, bp.measured_side())) {
        xstate_discord(rho, bp)
    } else {
        oracle_discord(rho, bp, options.resolution)
    }
}

pub fn discord(rho: &ComplexMatrix, bp: &Bipartition) -> Result<DiscordResult> {
    discord_with(rho, bp, &DiscordOptions::default())
}
