//! Default tolerances of the verification suites. The CLI exposes each as a
//! flag and echoes the effective values in every report.

use serde::{Deserialize, Serialize};

/// Off-duality curvature density of harmonic ansatz connections (absolute).
pub const DUALITY_RESIDUAL: f64 = 1e-10;
/// Relative match of the non-harmonic control against `(3/8)(Δρ/ρ)²`.
pub const CONTROL_RELATIVE: f64 = 1e-8;
/// Relative error of `|F⁺|² + ¼ΔΔ log ρ = 0`.
pub const DENSITY_IDENTITY_RELATIVE: f64 = 1e-8;
/// Absolute error of `c₂`.
pub const C2_ABSOLUTE: f64 = 5e-2;
/// Both vortex-equation residuals.
pub const VORTEX_RESIDUAL: f64 = 1e-9;
/// Absolute error of `c₁`.
pub const C1_ABSOLUTE: f64 = 5e-3;
/// Agreement of `c₂` of the lift with `c₁` of the vortex.
pub const REDUCTION_CHERN: f64 = 5e-2;
/// Distance of recovered Higgs zeros from the prescribed ones.
pub const HIGGS_ZERO: f64 = 1e-8;
/// Residuals and gauge relation of gauge-equivalent pairs.
pub const PAIR_GAUGE: f64 = 1e-9;
/// Agreement of the two closed forms of the two-patch functions.
pub const FHP_FORMS: f64 = 1e-10;
/// Monodromy gauge relations between `φ` and its continuation.
pub const MONODROMY: f64 = 1e-9;
/// `|holonomy − e^{2πic}|` at the smallest radius.
pub const HOLONOMY: f64 = 0.02;
/// Relative agreement of the ADHM and ansatz densities under difference curvature.
pub const ADHM_RELATIVE: f64 = 1e-4;
/// Relative agreement of the Yang–Mills–Higgs action with `4πc₁`.
pub const ACTION_RELATIVE: f64 = 2e-2;

/// The full set, as carried by reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub duality_residual: f64,
    pub control_relative: f64,
    pub density_identity_relative: f64,
    pub c2_absolute: f64,
    pub vortex_residual: f64,
    pub c1_absolute: f64,
    pub reduction_chern: f64,
    pub higgs_zero: f64,
    pub pair_gauge: f64,
    pub fhp_forms: f64,
    pub monodromy: f64,
    pub holonomy: f64,
    pub adhm_relative: f64,
    pub action_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            duality_residual: DUALITY_RESIDUAL,
            control_relative: CONTROL_RELATIVE,
            density_identity_relative: DENSITY_IDENTITY_RELATIVE,
            c2_absolute: C2_ABSOLUTE,
            vortex_residual: VORTEX_RESIDUAL,
            c1_absolute: C1_ABSOLUTE,
            reduction_chern: REDUCTION_CHERN,
            higgs_zero: HIGGS_ZERO,
            pair_gauge: PAIR_GAUGE,
            fhp_forms: FHP_FORMS,
            monodromy: MONODROMY,
            holonomy: HOLONOMY,
            adhm_relative: ADHM_RELATIVE,
            action_relative: ACTION_RELATIVE,
        }
    }
}
