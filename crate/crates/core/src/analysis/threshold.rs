use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{log_negativity, Bipartition};
use crate::optimize::{bisect, golden_section_min};
use crate::states::{pt_lambda2, rho_ib, rho_tilde_ib, AlphaBeta, FractionP, NptFamily, RindlerR};

const ROOT_TOL: f64 = 1e-10;
/// `|λ2|` below this at a bracket end counts as a root sitting on that end.
const ENDPOINT_ZERO: f64 = 1e-14;
const BETA_SCAN_POINTS: usize = 1001;
const BETA_TOL: f64 = 1e-8;

/// Outcome of a search for the separability boundary in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    /// Entangled for `p` above this value.
    Critical(f64),
    /// Separable for every `p ∈ [0, 1]`.
    NoThreshold,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Threshold::Critical(p) => Some(p),
            Threshold::NoThreshold => None,
        }
    }
}

/// Outcome of a search for the acceleration that kills `ρ_{A,I}` entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalR {
    /// Separable already in the inertial frame.
    AlreadySeparable,
    /// Entanglement dies at this `r`.
    At(f64),
    /// Entangled for every `r ∈ [0, π/4]`.
    EntangledAtAllR,
}

impl CriticalR {
    /// `r*`, with inertially separable states reporting zero.
    pub fn r_star(self) -> Option<f64> {
        match self {
            CriticalR::AlreadySeparable => Some(0.0),
            CriticalR::At(r) => Some(r),
            CriticalR::EntangledAtAllR => None,
        }
    }
}

/// Smallest `p` at which `λ2` of the partial transpose turns negative.
pub fn critical_p(r: RindlerR, family: NptFamily) -> Threshold {
    let f = |p: f64| pt_lambda2(family, FractionP::new(p).expect("bracket stays in [0, 1]"), r);
    let (f0, f1) = (f(0.0), f(1.0));
    if !(f0 > 0.0 && f1 < 0.0) {
        return Threshold::NoThreshold;
    }
    Threshold::Critical(bisect(f, 0.0, 1.0, ROOT_TOL))
}

/// Mixing angle at which `ρ_{A,I}(p, r)` becomes separable.
pub fn critical_r(p: FractionP) -> CriticalR {
    let g = |r: f64| pt_lambda2(NptFamily::AI, p, RindlerR::new(r).expect("bracket stays in [0, pi/4]"));
    if g(0.0) >= 0.0 {
        return CriticalR::AlreadySeparable;
    }
    let g_hi = g(FRAC_PI_4);
    if g_hi.abs() < ENDPOINT_ZERO {
        return CriticalR::At(FRAC_PI_4);
    }
    if g_hi < 0.0 {
        return CriticalR::EntangledAtAllR;
    }
    CriticalR::At(bisect(g, 0.0, FRAC_PI_4, ROOT_TOL))
}

/// `N(ρ_{I,B}) - N(ρ̃_{I,B})` at amplitude `β`.
pub fn negativity_gap(beta: f64, r: RindlerR) -> Result<f64> {
    let ab = AlphaBeta::from_beta(beta)?;
    let bp = Bipartition::default();
    Ok(log_negativity(&rho_ib(ab, r), &bp)? - log_negativity(&rho_tilde_ib(ab, r), &bp)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalBeta {
    pub beta: f64,
    pub gap: f64,
}

/// The `β` that maximizes the negativity gap at fixed `r`: a uniform scan
/// followed by golden-section refinement around the best scan point.
pub fn extremal_beta(r: RindlerR) -> Result<ExtremalBeta> {
    let step = 1.0 / (BETA_SCAN_POINTS - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..BETA_SCAN_POINTS {
        let g = negativity_gap(k as f64 * step, r)?;
        if g > best.1 {
            best = (k, g);
        }
    }
    let k = best.0;
    let lo = k.saturating_sub(1) as f64 * step;
    let hi = ((k + 1).min(BETA_SCAN_POINTS - 1)) as f64 * step;
    let mut failure = None;
    let (beta, neg_gap) = golden_section_min(
        |b| match negativity_gap(b, r) {
            Ok(g) => -g,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        BETA_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if -neg_gap >= best.1 {
        ExtremalBeta { beta, gap: -neg_gap }
    } else {
        ExtremalBeta {
            beta: k as f64 * step,
            gap: best.1,
        }
    })
}
