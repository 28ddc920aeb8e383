//! Weight-graded classification of Weyl and Cotton-York tensors in a null
//! frame, for any canonical structure N_M, plus the signature / real-index
//! bookkeeping needed to transfer the holomorphic picture to real metrics.
//!
//! Design notes:
//! - Tensors live in frame components (labels μ, μ̃, 0) and are classified by
//!   the weight sum of their indices after the relabeling that maps N_M to
//!   the standard structure.  Levels are kept as doubled integers so that
//!   half-integer Cotton-York levels in even dimension stay exact.
//! - Symmetry projection is a closed-form orthogonal projection (no
//!   iteration): Young-type symmetrizers followed by an exact trace split
//!   against the frame metric h, which is real and self-inverse.

pub mod degeneracy;
pub mod filtration;
pub mod project;
pub mod reality;
pub mod tensor;
pub mod weight;

pub use degeneracy::{
    degeneracy_conditions, degeneracy_cross_check, stage_unknown_counts, IndexKind,
};
pub use filtration::{filtration_level, weight_truncate, FiltrationReport};
pub use project::{cotton_project, symmetry_project};
pub use reality::{
    conjugation_action, quotient_structures, real_index_allowed, ConjugationAction,
    SignatureInfo,
};
pub use tensor::{
    frame_components3, frame_components4, frame_tensor_from_json, frame_tensor_to_json,
    FrameTensor, SymmetryClass,
};
pub use weight::{doubled_weight, index_weight};

pub use chart_engine::C64;
use null_frame::NullFrameError;

#[derive(Debug, thiserror::Error)]
pub enum ClassError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("declared symmetry class violated: residual {residual:.3e} exceeds {tolerance:.3e}")]
    SymmetryViolation { residual: f64, tolerance: f64 },
    #[error("real index {r} is not allowed for signature ({p},{q})")]
    InvalidRealIndex { r: usize, p: usize, q: usize },
    #[error("no degeneracy picture at level {k} for epsilon = {epsilon}")]
    UnsupportedLevel { k: i32, epsilon: usize },
    #[error(transparent)]
    Frame(#[from] NullFrameError),
}
