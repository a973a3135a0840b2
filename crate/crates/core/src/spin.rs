//! Spin-1 operators of the three-level atom, their eigenbases, and moments.
//!
//! All matrices and vectors use the `[|C⟩, |B⟩, |A⟩]` basis order, and
//! outcome triples are always ordered `(+1, 0, −1)`.

use num_complex::Complex;
use thiserror::Error;

use crate::model::AmplitudeSet;
use crate::scalar::Real;
use crate::state::{DensityMatrix3, Matrix3, Vector3, IDX_A, IDX_B, IDX_C};

/// Eigenvalue labels in the order every outcome triple is reported.
pub const OUTCOMES: [i8; 3] = [1, 0, -1];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("outcome probabilities sum to {0}, expected 1")]
    NonUnitProbability(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    pub const ALL: [SpinAxis; 3] = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z];
}

/// Axes for which squeezing factors are defined (`S_z` is the reference).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransverseAxis {
    X,
    Y,
}

impl TransverseAxis {
    pub const BOTH: [TransverseAxis; 2] = [TransverseAxis::X, TransverseAxis::Y];
}

impl From<TransverseAxis> for SpinAxis {
    fn from(axis: TransverseAxis) -> Self {
        match axis {
            TransverseAxis::X => SpinAxis::X,
            TransverseAxis::Y => SpinAxis::Y,
        }
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::from(T::zero())
}

fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn spin_operator<T: Real>(axis: SpinAxis) -> Matrix3<T> {
    let i = i_unit::<T>();
    let mut m = [[zero::<T>(); 3]; 3];
    // each operator acts on the two levels other than its zero eigenstate
    let (j, k) = match axis {
        SpinAxis::X => (IDX_B, IDX_A),
        SpinAxis::Y => (IDX_A, IDX_C),
        SpinAxis::Z => (IDX_C, IDX_B),
    };
    m[j][k] = -i;
    m[k][j] = i;
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinEigenbasis<T> {
    /// Eigenvectors for outcomes `(+1, 0, −1)`.
    pub vectors: [Vector3<T>; 3],
}

impl<T: Real> SpinEigenbasis<T> {
    pub fn vector(&self, outcome: i8) -> &Vector3<T> {
        match outcome {
            1 => &self.vectors[0],
            0 => &self.vectors[1],
            -1 => &self.vectors[2],
            _ => panic!("spin-1 outcome must be -1, 0 or 1, got {outcome}"),
        }
    }
}

pub fn eigenbasis<T: Real>(axis: SpinAxis) -> SpinEigenbasis<T> {
    let h = Complex::from(T::FRAC_1_SQRT_2());
    let ih = i_unit::<T>() * T::FRAC_1_SQRT_2();
    let o = zero::<T>();
    let one = Complex::from(T::one());
    let vectors = match axis {
        SpinAxis::X => [[o, -ih, h], [one, o, o], [o, ih, h]],
        SpinAxis::Y => [[h, o, -ih], [o, one, o], [h, o, ih]],
        SpinAxis::Z => [[h, ih, o], [o, o, one], [h, -ih, o]],
    };
    SpinEigenbasis { vectors }
}

/// `⟨S_axis⟩` from the amplitudes.
pub fn expectation<T: Real>(a: &AmplitudeSet<T>, axis: SpinAxis) -> T {
    let i = i_unit::<T>();
    let v = match axis {
        SpinAxis::X => i * a.b * a.a.conj() - i * a.a * a.b.conj(),
        SpinAxis::Y => i * a.a * a.c.conj() - i * a.c * a.a.conj(),
        SpinAxis::Z => i * a.c * a.b.conj() - i * a.b * a.c.conj(),
    };
    v.re
}

/// `⟨S_axis²⟩` from the amplitudes.
pub fn second_moment<T: Real>(a: &AmplitudeSet<T>, axis: TransverseAxis) -> T {
    match axis {
        TransverseAxis::X => a.b.norm_sqr() + a.a.norm_sqr(),
        TransverseAxis::Y => T::one() - a.b.norm_sqr(),
    }
}

/// Outcome probabilities `(p₊, p₀, p₋)` of measuring `S_axis` on `rho`.
///
/// Uses the entries of `rho` directly: the zero outcome is the population of
/// the operator's null level and `p±` split the remaining two populations by
/// the imaginary part of their coherence.
pub fn probabilities<T: Real>(rho: &DensityMatrix3<T>, axis: SpinAxis) -> Result<[T; 3], SpinError> {
    let pop = |k: usize| rho.entries[k][k].re;
    let half = T::lit(0.5);
    let (p0, mean, split) = match axis {
        SpinAxis::X => (pop(IDX_C), half * (pop(IDX_B) + pop(IDX_A)), -rho.entries[IDX_B][IDX_A].im),
        SpinAxis::Y => (pop(IDX_B), half * (pop(IDX_C) + pop(IDX_A)), rho.entries[IDX_C][IDX_A].im),
        SpinAxis::Z => (pop(IDX_A), half * (pop(IDX_C) + pop(IDX_B)), -rho.entries[IDX_C][IDX_B].im),
    };
    normalize_probabilities([mean + split, p0, mean - split])
}

/// Clamps to `[0, 1]`; renormalizes drift above 1e-12 and rejects drift
/// above 1e-9.
pub(crate) fn normalize_probabilities<T: Real>(raw: [T; 3]) -> Result<[T; 3], SpinError> {
    let total: T = raw[0] + raw[1] + raw[2];
    if !((total - T::one()).abs() <= T::tol(1e-9)) {
        return Err(SpinError::NonUnitProbability(total.to_f64_lossy()));
    }
    let mut p = raw.map(|x| x.max(T::zero()).min(T::one()));
    let sum = p[0] + p[1] + p[2];
    if (sum - T::one()).abs() > T::tol(1e-12) {
        p = p.map(|x| x / sum);
    }
    Ok(p)
}

/// `A·B` for 3×3 complex matrices.
pub fn matmul<T: Real>(x: &Matrix3<T>, y: &Matrix3<T>) -> Matrix3<T> {
    let mut out = [[zero::<T>(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = (0..3).fold(zero::<T>(), |acc, k| acc + x[i][k] * y[k][j]);
        }
    }
    out
}
