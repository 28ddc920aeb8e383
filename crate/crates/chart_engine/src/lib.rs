//! Holomorphic polynomial metrics on complex charts: exact jets, curvature,
//! and the tensors feeding null-frame classification (Weyl, Rho, Cotton-York).
//!
//! Design notes:
//! - Metric entries are sparse polynomials over C; all differentiation is
//!   exact (term-wise), so the only floating-point steps are evaluation and
//!   linear algebra (inverses, determinants).
//! - Curvature conventions are fixed once here and consumed verbatim
//!   downstream:
//!     Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_bd - d_d g_bc)
//!     R^a_bcd    = d_c Gamma^a_db - d_d Gamma^a_cb
//!                  + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
//!     R_abcd     = g_ae R^e_bcd,   Ric_bd = g^ac R_abcd
//!   The (C, A) pair carries one overall sign convention; every identity the
//!   workspace checks is jointly linear in (C, A), so the choice cancels.

pub mod chart;
pub mod curvature;
pub mod jet;
pub mod poly;
pub mod rat;
pub mod tensor;

pub use chart::{
    random_polydisc_point, random_polynomial_metric, random_unit_disc, ChartMetric,
};
pub use curvature::{
    christoffel_at, cotton_york_at, curvature_at, rho_weyl_at, riemann_at, CurvatureAtPoint,
};
pub use jet::{jet_at, CoordJet};
pub use poly::Poly;
pub use rat::RatPoly;
pub use tensor::{Arr2, Arr3, Arr4, Arr5};

pub type C64 = num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum ChartError {
    #[error("metric degenerate at sample point: |det g| = {det:.3e} <= floor {floor:.3e}")]
    DegenerateMetric { det: f64, floor: f64 },
    #[error("point dimension {got} does not match chart dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("denominator vanishes at sample point (|den| = {0:.3e})")]
    VanishingDenominator(f64),
    #[error("malformed input: {0}")]
    Malformed(String),
}
