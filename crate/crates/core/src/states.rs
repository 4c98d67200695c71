//! State families and the single-mode fermionic Unruh channel.
//!
//! Two-qubit inputs are ordered `(A, B)`. Accelerating slot `B` produces the
//! three-mode ordering `(A, I, II)`; accelerating slot `A` produces `(I, II, B)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{validate_density, ComplexMatrix, C64};

const PARAM_SLACK: f64 = 1e-12;

/// Weight of the entangled component in the pseudo-entangled mixture.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FractionP(f64);

impl FractionP {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&p) {
            Ok(Self(p.clamp(0.0, 1.0)))
        } else {
            Err(Error::domain("p", p, "[0, 1]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Unruh mixing angle `r`, with `0` inertial and `π/4` infinite acceleration.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RindlerR(f64);

impl RindlerR {
    pub const INERTIAL: RindlerR = RindlerR(0.0);
    pub const INFINITE: RindlerR = RindlerR(FRAC_PI_4);

    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && (-PARAM_SLACK..=FRAC_PI_4 + PARAM_SLACK).contains(&r) {
            Ok(Self(r.clamp(0.0, FRAC_PI_4)))
        } else {
            Err(Error::domain("r", r, "[0, pi/4]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Real amplitudes of `α(|00⟩+|11⟩) + β|10⟩` with `2α² + β² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBeta {
    alpha: f64,
    beta: f64,
}

impl AlphaBeta {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::domain("alpha", alpha, "[0, 1/sqrt(2)]"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain("beta", beta, "[0, 1]"));
        }
        let norm = 2.0 * alpha * alpha + beta * beta;
        if (norm - 1.0).abs() > PARAM_SLACK {
            return Err(Error::domain("2 alpha^2 + beta^2", norm, "{1}"));
        }
        Ok(Self { alpha, beta })
    }

    /// Picks the nonnegative `α` normalizing the given `β ∈ [0, 1]`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && (0.0..=1.0).contains(&beta)) {
            return Err(Error::domain("beta", beta, "[0, 1]"));
        }
        Self::new(((1.0 - beta * beta) / 2.0).max(0.0).sqrt(), beta)
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }
}

/// Which qubit of a two-qubit state is carried by the accelerated observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcceleratedSlot {
    First,
    Second,
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn real4(rows: [[f64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_real(4, rows.as_flattened()).expect("4x4")
}

pub fn phi_plus() -> [C64; 4] {
    [c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]
}

pub fn psi_plus() -> [C64; 4] {
    [c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)]
}

fn werner_like(p: FractionP, psi: &[C64; 4]) -> ComplexMatrix {
    let p = p.value();
    let noise = ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    let pure = ComplexMatrix::projector(psi).expect("4-vector").scale(p);
    &noise + &pure
}

/// `(1-p)/4 · I + p |Φ+⟩⟨Φ+|`.
pub fn pseudo_entangled(p: FractionP) -> ComplexMatrix {
    werner_like(p, &phi_plus())
}

/// `(1-p)/4 · I + p |Ψ+⟩⟨Ψ+|`, the image of [`pseudo_entangled`] under `σx` on the second qubit.
pub fn sigma_x_equivalent(p: FractionP) -> ComplexMatrix {
    werner_like(p, &psi_plus())
}

/// Projector onto `α(|00⟩+|11⟩) + β|10⟩`, or with `tilde` onto its
/// `σx ⊗ I` image `α(|10⟩+|01⟩) + β|00⟩`.
pub fn alpha_beta_pure(ab: AlphaBeta, tilde: bool) -> ComplexMatrix {
    let (a, b) = (ab.alpha, ab.beta);
    let psi = if tilde {
        [c(b), c(a), c(a), c(0.0)]
    } else {
        [c(a), c(0.0), c(b), c(a)]
    };
    ComplexMatrix::projector(&psi).expect("4-vector")
}

/// `cos r = 1/√(1 + e^{-2πω/a})` in natural units.
pub fn acceleration_to_r(acceleration: f64, omega: f64) -> Result<RindlerR> {
    if !(acceleration.is_finite() && acceleration > 0.0) {
        return Err(Error::domain("acceleration", acceleration, "(0, inf)"));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain("omega", omega, "(0, inf)"));
    }
    let cos_r = 1.0 / (1.0 + (-2.0 * PI * omega / acceleration).exp()).sqrt();
    RindlerR::new(cos_r.acos())
}

/// Image of a Minkowski basis state as `(region-I bit, region-II bit, amplitude)` terms.
fn mode_image(bit: usize, r: RindlerR) -> Vec<(usize, usize, f64)> {
    match bit {
        0 => vec![(0, 0, r.value().cos()), (1, 1, r.value().sin())],
        _ => vec![(1, 0, 1.0)],
    }
}

/// Applies `|0⟩ → cos r|00⟩ + sin r|11⟩`, `|1⟩ → |10⟩` to the accelerated
/// qubit, returning the 8×8 state on `(A, I, II)` or `(I, II, B)`.
pub fn unruh_channel(rho: &ComplexMatrix, r: RindlerR, slot: AcceleratedSlot) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    validate_density(rho)?;

    // Columns of the 8x4 isometry as sparse (row, amplitude) lists.
    let columns: Vec<Vec<(usize, f64)>> = (0..4)
        .map(|x| {
            let (hi, lo) = (x >> 1, x & 1);
            let (kept, moving) = match slot {
                AcceleratedSlot::Second => (hi, lo),
                AcceleratedSlot::First => (lo, hi),
            };
            mode_image(moving, r)
                .into_iter()
                .map(|(m, n, amplitude)| {
                    let row = match slot {
                        AcceleratedSlot::Second => 4 * kept + 2 * m + n,
                        AcceleratedSlot::First => 4 * m + 2 * n + kept,
                    };
                    (row, amplitude)
                })
                .collect()
        })
        .collect();

    let mut out = ComplexMatrix::zeros(8);
    for (x, col_x) in columns.iter().enumerate() {
        for (y, col_y) in columns.iter().enumerate() {
            let rxy = rho[(x, y)];
            if rxy == c(0.0) {
                continue;
            }
            for &(i, vi) in col_x {
                for &(j, vj) in col_y {
                    out[(i, j)] += rxy * (vi * vj);
                }
            }
        }
    }
    Ok(out)
}

/// Alice–Rob state: region II traced out of the accelerated pseudo-entangled state.
pub fn rho_ai(p: FractionP, r: RindlerR) -> ComplexMatrix {
    let (p, r) = (p.value(), r.value());
    let (cr, sr) = (r.cos(), r.sin());
    let (c2, s2) = (cr * cr, sr * sr);
    real4([
        [(1.0 + p) * c2, 0.0, 0.0, 2.0 * p * cr],
        [0.0, 1.0 + s2 - p * c2, 0.0, 0.0],
        [0.0, 0.0, (1.0 - p) * c2, 0.0],
        [2.0 * p * cr, 0.0, 0.0, 1.0 + s2 + p * c2],
    ])
    .scale(0.25)
}

/// Alice–antiRob state: region I traced out.
pub fn rho_aii(p: FractionP, r: RindlerR) -> ComplexMatrix {
    let (p, r) = (p.value(), r.value());
    let (cr, sr) = (r.cos(), r.sin());
    let (c2, s2) = (cr * cr, sr * sr);
    real4([
        [1.0 + c2 - p * s2, 0.0, 0.0, 0.0],
        [0.0, (1.0 + p) * s2, 2.0 * p * sr, 0.0],
        [0.0, 2.0 * p * sr, 1.0 + c2 + p * s2, 0.0],
        [0.0, 0.0, 0.0, (1.0 - p) * s2],
    ])
    .scale(0.25)
}

/// Rob–antiRob state: Alice traced out. Independent of `p`.
pub fn rho_iii(r: RindlerR) -> ComplexMatrix {
    let r = r.value();
    let (cr, sr) = (r.cos(), r.sin());
    real4([
        [cr * cr, 0.0, 0.0, sr * cr],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [sr * cr, 0.0, 0.0, sr * sr],
    ])
    .scale(0.5)
}

/// `α(|00⟩+|11⟩) + β|10⟩` with the first qubit accelerated and region II traced out,
/// ordered `(I, B)`.
pub fn rho_ib(ab: AlphaBeta, r: RindlerR) -> ComplexMatrix {
    let (a, b, r) = (ab.alpha, ab.beta, r.value());
    let (cr, sr) = (r.cos(), r.sin());
    real4([
        [a * a * cr * cr, 0.0, a * b * cr, a * a * cr],
        [0.0, 0.0, 0.0, 0.0],
        [a * b * cr, 0.0, b * b + a * a * sr * sr, a * b],
        [a * a * cr, 0.0, a * b, a * a],
    ])
}

/// Same as [`rho_ib`] for the `σx ⊗ I` equivalent `α(|10⟩+|01⟩) + β|00⟩`.
pub fn rho_tilde_ib(ab: AlphaBeta, r: RindlerR) -> ComplexMatrix {
    let (a, b, r) = (ab.alpha, ab.beta, r.value());
    let (cr, sr) = (r.cos(), r.sin());
    let (c2, s2) = (cr * cr, sr * sr);
    real4([
        [b * b * c2, a * b * c2, a * b * cr, 0.0],
        [a * b * c2, a * a * c2, a * a * cr, 0.0],
        [a * b * cr, a * a * cr, a * a + b * b * s2, a * b * s2],
        [0.0, 0.0, a * b * s2, a * a * s2],
    ])
}

/// Matrices with known closed-form spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumFamily {
    AI,
    AIPt,
    AII,
    AIIPt,
}

impl FromStr for SpectrumFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "AI" => Ok(Self::AI),
            "AIPT" => Ok(Self::AIPt),
            "AII" => Ok(Self::AII),
            "AIIPT" => Ok(Self::AIIPt),
            _ => Err(Error::Unknown {
                kind: "spectrum family",
                name: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for SpectrumFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AI => "AI",
            Self::AIPt => "AI_pt",
            Self::AII => "AII",
            Self::AIIPt => "AII_pt",
        })
    }
}

/// Closed-form eigenvalues `[λ1, λ2, λ3, λ4]` (pairs `λ1,2 = x ± √y`, `λ3,4 = u ± v`).
/// For the partial transposes `λ2` is the only one that can go negative.
pub fn closed_form_spectra(family: SpectrumFamily, p: FractionP, r: RindlerR) -> [f64; 4] {
    let (p, r) = (p.value(), r.value());
    let (c2, s2) = (r.cos().powi(2), r.sin().powi(2));
    let (pair_shift, root, quad_sign, quad_mod) = match family {
        SpectrumFamily::AI => (p * c2, (4.0 * p * p * c2 + s2 * s2).sqrt(), -p * c2, s2),
        SpectrumFamily::AIPt => (-p * c2, (s2 * s2 + 4.0 * p * p * c2).sqrt(), p * c2, s2),
        SpectrumFamily::AII => (p * s2, (c2 * c2 + 4.0 * p * p * s2).sqrt(), -p * s2, c2),
        SpectrumFamily::AIIPt => (-p * s2, (c2 * c2 + 4.0 * p * p * s2).sqrt(), p * s2, c2),
    };
    [
        (1.0 + pair_shift + root) / 4.0,
        (1.0 + pair_shift - root) / 4.0,
        (1.0 + quad_sign + quad_mod) / 4.0,
        (1.0 + quad_sign - quad_mod) / 4.0,
    ]
}

/// The bipartitions whose partial transposes can acquire a negative eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NptFamily {
    AI,
    AII,
}

/// `λ2` of the partial transpose, the sole eigenvalue that decides separability.
pub fn pt_lambda2(family: NptFamily, p: FractionP, r: RindlerR) -> f64 {
    let spectra = match family {
        NptFamily::AI => SpectrumFamily::AIPt,
        NptFamily::AII => SpectrumFamily::AIIPt,
    };
    closed_form_spectra(spectra, p, r)[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, partial_transpose, tensor_product, SubsystemDims};

    fn fp(p: f64) -> FractionP {
        FractionP::new(p).unwrap()
    }

    fn rr(r: f64) -> RindlerR {
        RindlerR::new(r).unwrap()
    }

    #[test]
    fn parameter_domains() {
        assert!(FractionP::new(-0.1).is_err());
        assert!(FractionP::new(1.5).is_err());
        assert!(FractionP::new(f64::NAN).is_err());
        assert!(RindlerR::new(1.0).is_err());
        assert!(RindlerR::new(FRAC_PI_4).is_ok());
        assert!(AlphaBeta::new(0.5, 0.5).is_err());
        assert!(AlphaBeta::new(-FRAC_1_SQRT_2, 0.0).is_err());
        assert!(AlphaBeta::from_beta(1.2).is_err());
        let ab = AlphaBeta::from_beta(0.6).unwrap();
        assert!((2.0 * ab.alpha().powi(2) + 0.36 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pseudo_entangled_limits() {
        let bell = ComplexMatrix::projector(&phi_plus()).unwrap();
        assert!(pseudo_entangled(fp(1.0)).max_abs_diff(&bell) < 1e-16);
        let mixed = ComplexMatrix::identity(4).scale(0.25);
        assert!(pseudo_entangled(fp(0.0)).max_abs_diff(&mixed) < 1e-16);
        assert!(sigma_x_equivalent(fp(0.0)).max_abs_diff(&mixed) < 1e-16);
        let psi = ComplexMatrix::projector(&psi_plus()).unwrap();
        assert!(sigma_x_equivalent(fp(1.0)).max_abs_diff(&psi) < 1e-16);
    }

    #[test]
    fn separability_boundary_at_one_third() {
        let pt = partial_transpose(&pseudo_entangled(fp(1.0 / 3.0)), &SubsystemDims::qubits(2), 1).unwrap();
        let min = crate::linalg::hermitian_eigen(&pt, false).unwrap().values[3];
        assert!(min.abs() < 1e-12, "{min}");
    }

    #[test]
    fn sigma_x_equivalent_is_local_conjugation() {
        let x2 = tensor_product(&ComplexMatrix::identity(2), &crate::linalg::pauli_x()).unwrap();
        for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let conj = pseudo_entangled(fp(p)).conjugate_by(&x2);
            assert!(conj.max_abs_diff(&sigma_x_equivalent(fp(p))) <= 1e-14);
        }
    }

    #[test]
    fn alpha_beta_special_cases() {
        let ab = AlphaBeta::new(FRAC_1_SQRT_2, 0.0).unwrap();
        let bell = ComplexMatrix::projector(&phi_plus()).unwrap();
        assert!(alpha_beta_pure(ab, false).max_abs_diff(&bell) < 1e-15);
        let psi = ComplexMatrix::projector(&psi_plus()).unwrap();
        assert!(alpha_beta_pure(ab, true).max_abs_diff(&psi) < 1e-15);
        let sep = alpha_beta_pure(AlphaBeta::new(0.0, 1.0).unwrap(), false);
        assert_eq!(sep, ComplexMatrix::diag(&[0.0, 0.0, 1.0, 0.0]).unwrap());
    }

    #[test]
    fn acceleration_conversion() {
        assert!(acceleration_to_r(1e-3, 1.0).unwrap().value() < 1e-12);
        assert!((acceleration_to_r(1e9, 1.0).unwrap().value() - FRAC_PI_4).abs() < 1e-8);
        let r = acceleration_to_r(2.0 * PI * 3.0, 3.0).unwrap().value();
        let expected = (1.0 / (1.0 + (-1.0f64).exp()).sqrt()).acos();
        assert!((r - expected).abs() < 1e-15);
        assert!(acceleration_to_r(0.0, 1.0).is_err());
        assert!(acceleration_to_r(1.0, -1.0).is_err());
    }

    #[test]
    fn channel_reproduces_tripartite_matrix() {
        for &(p, r) in &[(0.0, 0.3), (0.5, 0.2), (1.0, FRAC_PI_4), (0.37, 0.61)] {
            let out = unruh_channel(&pseudo_entangled(fp(p)), rr(r), AcceleratedSlot::Second).unwrap();
            let (cr, sr) = (f64::cos(r), f64::sin(r));
            let s2r = f64::sin(2.0 * r);
            let mut e = ComplexMatrix::zeros(8);
            let mut set = |i: usize, j: usize, v: f64| {
                e[(i, j)] = c(v / 4.0);
                e[(j, i)] = c(v / 4.0);
            };
            set(0, 0, (1.0 + p) * cr * cr);
            set(0, 3, (1.0 + p) / 2.0 * s2r);
            set(0, 6, 2.0 * p * cr);
            set(2, 2, 1.0 - p);
            set(3, 3, (1.0 + p) * sr * sr);
            set(3, 6, 2.0 * p * sr);
            set(4, 4, (1.0 - p) * cr * cr);
            set(4, 7, (1.0 - p) / 2.0 * s2r);
            set(6, 6, 1.0 + p);
            set(7, 7, (1.0 - p) * sr * sr);
            assert!(out.max_abs_diff(&e) <= 1e-12, "p={p} r={r}");
        }
    }

    #[test]
    fn inertial_channel_is_embedding() {
        let mut rho = ComplexMatrix::from_real(4, &[
            0.3, 0.1, 0.0, 0.05, 0.1, 0.2, 0.0, 0.0, 0.0, 0.0, 0.25, 0.02, 0.05, 0.0, 0.02, 0.25,
        ])
        .unwrap();
        rho[(0, 2)] = C64::new(0.0, 0.03);
        rho[(2, 0)] = C64::new(0.0, -0.03);
        let ket0 = ComplexMatrix::diag(&[1.0, 0.0]).unwrap();
        let second = unruh_channel(&rho, RindlerR::INERTIAL, AcceleratedSlot::Second).unwrap();
        assert!(second.max_abs_diff(&tensor_product(&rho, &ket0).unwrap()) < 1e-15);
        // (I, II, B): region II sits between the two original qubits.
        let first = unruh_channel(&rho, RindlerR::INERTIAL, AcceleratedSlot::First).unwrap();
        let dims = SubsystemDims::qubits(3);
        assert!(partial_trace(&first, &dims, &[0, 2]).unwrap().max_abs_diff(&rho) < 1e-15);
        assert!(partial_trace(&first, &dims, &[1]).unwrap().max_abs_diff(&ket0) < 1e-15);
    }

    #[test]
    fn channel_rejects_non_states() {
        let bad = ComplexMatrix::diag(&[0.5, 0.5, 0.5, -0.5]).unwrap();
        assert!(matches!(
            unruh_channel(&bad, rr(0.1), AcceleratedSlot::Second),
            Err(Error::NotAState(_))
        ));
        assert!(unruh_channel(&ComplexMatrix::identity(2).scale(0.5), rr(0.1), AcceleratedSlot::First).is_err());
    }

    #[test]
    fn reductions_at_inertial_limit() {
        for p in [0.0, 0.4, 1.0] {
            assert!(rho_ai(fp(p), RindlerR::INERTIAL).max_abs_diff(&pseudo_entangled(fp(p))) < 1e-15);
            let aii = rho_aii(fp(p), RindlerR::INERTIAL);
            assert!(aii.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.0, 0.5, 0.0]).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn ib_closed_forms_have_unit_trace() {
        for beta in [0.0, 0.3, 0.8, 1.0] {
            let ab = AlphaBeta::from_beta(beta).unwrap();
            for r in [0.0, 0.4, FRAC_PI_4] {
                assert!((rho_ib(ab, rr(r)).trace().re - 1.0).abs() < 1e-14);
                assert!((rho_tilde_ib(ab, rr(r)).trace().re - 1.0).abs() < 1e-14);
                validate_density(&rho_ib(ab, rr(r))).unwrap();
                validate_density(&rho_tilde_ib(ab, rr(r))).unwrap();
            }
        }
    }

    #[test]
    fn ib_closed_forms_match_channel() {
        let dims = SubsystemDims::qubits(3);
        for beta in [0.0, 0.25, 0.8, 1.0] {
            let ab = AlphaBeta::from_beta(beta).unwrap();
            for r in [0.0, 0.3, FRAC_PI_4] {
                for tilde in [false, true] {
                    let out = unruh_channel(&alpha_beta_pure(ab, tilde), rr(r), AcceleratedSlot::First).unwrap();
                    let ib = partial_trace(&out, &dims, &[0, 2]).unwrap();
                    let closed = if tilde { rho_tilde_ib(ab, rr(r)) } else { rho_ib(ab, rr(r)) };
                    assert!(ib.max_abs_diff(&closed) <= 1e-12, "beta={beta} r={r} tilde={tilde}");
                }
            }
        }
    }

    #[test]
    fn closed_form_threshold_points() {
        let l2 = closed_form_spectra(SpectrumFamily::AIPt, fp(1.0 / 3.0), RindlerR::INERTIAL)[1];
        assert!(l2.abs() < 1e-15);
        let l2 = closed_form_spectra(SpectrumFamily::AIPt, fp(3.0 / 7.0), RindlerR::INFINITE)[1];
        assert!(l2.abs() <= 1e-12);
        let l2 = closed_form_spectra(SpectrumFamily::AIIPt, fp(1.0), RindlerR::INERTIAL)[1];
        assert_eq!(l2, 0.0);
        let l2 = pt_lambda2(NptFamily::AII, fp(3.0 / 7.0), RindlerR::INFINITE);
        assert!(l2.abs() <= 1e-12);
    }

    #[test]
    fn spectrum_family_parsing() {
        assert_eq!("ai_pt".parse::<SpectrumFamily>().unwrap(), SpectrumFamily::AIPt);
        assert_eq!("AII".parse::<SpectrumFamily>().unwrap(), SpectrumFamily::AII);
        assert!(matches!("AB".parse::<SpectrumFamily>(), Err(Error::Unknown { .. })));
    }
}
