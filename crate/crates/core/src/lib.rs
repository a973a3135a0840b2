//! Exact dynamics of a V-type three-level atom in a dissipative cavity with
//! a Lorentzian reservoir, and the squeezing diagnostics built on it:
//! entropy and variance squeezing factors, atomic inversion, and l1-norm
//! coherence.
//!
//! The closed-form layers ([`model`], [`state`], [`spin`], [`squeezing`])
//! are generic over [`Real`] (`f32` or `f64`). The independent checks in
//! [`oracle`], the time-grid orchestration in [`runner`] and the file/CLI
//! layer in [`output`] work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod model;
pub mod oracle;
pub mod output;
pub mod runner;
pub mod scalar;
pub mod spin;
pub mod squeezing;
pub mod state;

pub use model::{
    amplitudes_from_angles, evolve_amplitudes, propagator_g, q_factors, rate_r, AngleConvention, Channel, ModelError,
    Preset,
};
pub use scalar::Real;
pub use spin::{SpinAxis, TransverseAxis};

pub type SystemParams = model::SystemParams<f64>;
pub type InitialAmplitudes = model::InitialAmplitudes<f64>;
pub type AmplitudeSet = model::AmplitudeSet<f64>;
pub type DensityMatrix3 = state::DensityMatrix3<f64>;
pub type SqueezingRecord = squeezing::SqueezingRecord<f64>;

pub type SystemParams32 = model::SystemParams<f32>;
pub type InitialAmplitudes32 = model::InitialAmplitudes<f32>;
pub type AmplitudeSet32 = model::AmplitudeSet<f32>;
pub type DensityMatrix32 = state::DensityMatrix3<f32>;
pub type SqueezingRecord32 = squeezing::SqueezingRecord<f32>;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    State(#[from] state::StateError),
    #[error(transparent)]
    Spin(#[from] spin::SpinError),
    #[error(transparent)]
    Squeezing(#[from] squeezing::SqueezingError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Runner(#[from] runner::RunnerError),
    #[error(transparent)]
    Output(#[from] output::OutputError),
}
