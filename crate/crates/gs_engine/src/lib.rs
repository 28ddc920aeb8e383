pub mod bianchi;
pub mod cy_alt;
pub mod synth;
pub mod system;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GsError {
    #[error("chart: {0}")]
    Chart(#[from] chart_engine::ChartError),
    #[error("frame: {0}")]
    Frame(#[from] null_frame::NullFrameError),
    #[error("classification: {0}")]
    Class(#[from] classification::ClassError),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("determinant split violated: {0}")]
    SplitViolation(String),
    #[error("dimension too small: {0}")]
    DimensionTooSmall(String),
    #[error("conformal factor vanishes at a sample point")]
    ZeroOmega,
    #[error("system builders disagree: {0}")]
    BuilderDisagreement(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub use bianchi::{
    bianchi_residuals, frame_curvature_at, residual_report, BianchiEval, BianchiResidualReport,
    FamilyId, FamilyResidual, FrameData, Mutation,
};
pub use cy_alt::cotton_york_alt;
pub use synth::{constant_null_frame, random_class_cy, random_class_weyl, required_cy_level2, weak_weyl_project};
pub use system::{
    assemble_system, solve_trivial, DiagBlocks, GsCase, GsSystem, KernelReport, Parity, Stage,
    Unknown,
};
