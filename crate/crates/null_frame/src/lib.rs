//! Null frames in canonical form on a chart: label bookkeeping, frame fields
//! with rational components, pointwise null bases, connection coefficients
//! Γ_{abc} = g(∇_{ξ_a}ξ_b, ξ_c), the canonical almost null structures N_M,
//! and involutivity testing by two independent routes.
//!
//! Frame index order is pinned workspace-wide: ξ_1..ξ_m at 0..m-1,
//! ξ̃_1..ξ̃_m at m..2m-1, ξ_0 at 2m (odd dimensions only). In this order the
//! canonical pairings read h[μ][m+μ] = h[m+μ][μ] = 1, h[2m][2m] = 1, and h
//! is its own inverse.

pub mod connection;
pub mod field;
pub mod involutivity;
pub mod label;
pub mod pointwise;

pub use connection::{connection_coeffs, ConnectionCoeffs};
pub use field::{
    frame_from_json, frame_to_json, validate_frame, FrameField, FrameJet, PairingReport,
};
pub use involutivity::{involutivity_check, InvolutivityVerdict};
pub use label::{
    dual_index, frame_metric, relabel_for, CanonicalStructure, FrameLabel, LabelPerm,
};
pub use pointwise::pointwise_null_frame;

pub use chart_engine::C64;

#[derive(Debug, thiserror::Error)]
pub enum NullFrameError {
    #[error("frame labels do not match (m, m, ε): {0}")]
    LabelMismatch(String),
    #[error("frame evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("involutivity oracles disagree: {0}")]
    OracleDisagreement(String),
    #[error(transparent)]
    Chart(#[from] chart_engine::ChartError),
}
