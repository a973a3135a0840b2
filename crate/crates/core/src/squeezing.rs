//! Variance and entropy squeezing diagnostics.
//!
//! Variance squeezing compares `ΔS_j` with the Heisenberg bound
//! `sqrt(|⟨S_z⟩|/2)`; entropy squeezing compares `exp(H(S_j))` with
//! `e / sqrt(exp(H(S_z)))`. Entropies are in nats throughout, and the
//! three-observable entropic bound is `H_x + H_y + H_z ≥ 2 ln 2`.

use num_complex::Complex;
use thiserror::Error;

use crate::model::AmplitudeSet;
use crate::scalar::Real;
use crate::spin::{expectation, second_moment, SpinAxis, TransverseAxis};
use crate::state::{density_matrix, l1_coherence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SqueezingError {
    #[error("variance radicand {0:e} is negative beyond rounding")]
    NegativeRadicand(f64),
    #[error("not a probability distribution: {0:?}")]
    InvalidDistribution([f64; 3]),
}

/// Lower bound of `E(S_j)` in this model, `1 − e/√2`.
pub fn entropy_factor_floor<T: Real>() -> T {
    T::one() - T::E() * T::FRAC_1_SQRT_2()
}

/// Three-observable entropic bound in nats, `2 ln 2`.
pub fn entropic_bound<T: Real>() -> T {
    T::lit(2.0) * T::LN_2()
}

/// All observables at one time sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingRecord<T> {
    pub t: T,
    pub e_sx: T,
    pub e_sy: T,
    pub v_sx: T,
    pub v_sy: T,
    pub h_sx: T,
    pub h_sy: T,
    pub h_sz: T,
    pub d_sx: T,
    pub d_sy: T,
    pub sz_expect: T,
    pub entropy_sum: T,
    pub coherence: T,
}

/// `ΔS_axis` from the expanded amplitude forms.
pub fn std_dev<T: Real>(a: &AmplitudeSet<T>, axis: TransverseAxis) -> Result<T, SqueezingError> {
    let two = T::lit(2.0);
    let (base, u, v) = match axis {
        TransverseAxis::X => (a.a.norm_sqr() + a.b.norm_sqr(), a.b, a.a),
        TransverseAxis::Y => (T::one() - a.b.norm_sqr(), a.c, a.a),
    };
    // u² v*² + v² u*² − 2|u|²|v|² = −⟨S⟩²
    let cross: Complex<T> = u * u * v.conj() * v.conj() + v * v * u.conj() * u.conj();
    let radicand = base + cross.re - two * u.norm_sqr() * v.norm_sqr();
    if radicand < -T::tol(1e-9) {
        return Err(SqueezingError::NegativeRadicand(radicand.to_f64_lossy()));
    }
    Ok(radicand.max(T::zero()).sqrt())
}

/// `V(S_axis) = ΔS_axis − sqrt(|⟨S_z⟩|/2)`; negative means squeezed.
pub fn variance_factor<T: Real>(a: &AmplitudeSet<T>, axis: TransverseAxis) -> Result<T, SqueezingError> {
    let sz = expectation(a, SpinAxis::Z);
    Ok(std_dev(a, axis)? - (sz.abs() * T::lit(0.5)).sqrt())
}

fn neg_xlnx<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.ln()
    }
}

/// `−Σ p ln p` in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy<T: Real>(probs: [T; 3]) -> Result<T, SqueezingError> {
    let total = probs[0] + probs[1] + probs[2];
    let in_range = probs.iter().all(|&p| p >= -T::tol(1e-12) && p <= T::one() + T::tol(1e-9));
    if !in_range || !((total - T::one()).abs() <= T::tol(1e-9)) {
        return Err(SqueezingError::InvalidDistribution(probs.map(|p| p.to_f64_lossy())));
    }
    Ok(probs.into_iter().map(neg_xlnx).fold(T::zero(), |acc, x| acc + x))
}

/// Outcome probabilities `(p₊, p₀, p₋)` written directly in the amplitudes.
pub fn entropy_terms<T: Real>(a: &AmplitudeSet<T>, axis: SpinAxis) -> [T; 3] {
    let half = T::lit(0.5);
    let i = Complex::new(T::zero(), T::one());
    let (mean, split, p0) = match axis {
        SpinAxis::X => (
            half * (a.b.norm_sqr() + a.a.norm_sqr()),
            (i * a.b * a.a.conj() - i * a.a * a.b.conj()).re,
            T::one() - a.b.norm_sqr() - a.a.norm_sqr(),
        ),
        SpinAxis::Y => (half - half * a.b.norm_sqr(), (i * a.a * a.c.conj() - i * a.c * a.a.conj()).re, a.b.norm_sqr()),
        SpinAxis::Z => (half - half * a.a.norm_sqr(), (i * a.c * a.b.conj() - i * a.b * a.c.conj()).re, a.a.norm_sqr()),
    };
    [mean + half * split, p0, mean - half * split]
}

/// `H(S_axis)` in nats from the amplitude closed forms.
pub fn entropy<T: Real>(a: &AmplitudeSet<T>, axis: SpinAxis) -> T {
    entropy_terms(a, axis).into_iter().map(neg_xlnx).fold(T::zero(), |acc, x| acc + x)
}

/// `E(S_axis) = exp(H(S_axis)) − e/sqrt(exp(H(S_z)))`; negative means squeezed.
pub fn entropy_factor<T: Real>(a: &AmplitudeSet<T>, axis: TransverseAxis) -> T {
    let h = entropy(a, axis.into());
    let hz = entropy(a, SpinAxis::Z);
    h.exp() - T::E() / hz.exp().sqrt()
}

/// `(ΔS_x ΔS_y, |⟨S_z⟩|/2)`; physical states have `lhs ≥ rhs`.
pub fn heisenberg_check<T: Real>(a: &AmplitudeSet<T>) -> Result<(T, T), SqueezingError> {
    let lhs = std_dev(a, TransverseAxis::X)? * std_dev(a, TransverseAxis::Y)?;
    let rhs = expectation(a, SpinAxis::Z).abs() * T::lit(0.5);
    Ok((lhs, rhs))
}

/// `H(S_x) + H(S_y) + H(S_z)` in nats.
pub fn entropy_sum<T: Real>(a: &AmplitudeSet<T>) -> T {
    SpinAxis::ALL.iter().map(|&axis| entropy(a, axis)).fold(T::zero(), |acc, x| acc + x)
}

/// Evaluates every observable at one amplitude sample.
pub fn record<T: Real>(a: &AmplitudeSet<T>) -> Result<SqueezingRecord<T>, SqueezingError> {
    let [h_sx, h_sy, h_sz] = SpinAxis::ALL.map(|axis| entropy(a, axis));
    let d_sx = std_dev(a, TransverseAxis::X)?;
    let d_sy = std_dev(a, TransverseAxis::Y)?;
    let sz_expect = expectation(a, SpinAxis::Z);
    let bound = (sz_expect.abs() * T::lit(0.5)).sqrt();
    let reference = T::E() / h_sz.exp().sqrt();
    Ok(SqueezingRecord {
        t: a.t,
        e_sx: h_sx.exp() - reference,
        e_sy: h_sy.exp() - reference,
        v_sx: d_sx - bound,
        v_sy: d_sy - bound,
        h_sx,
        h_sy,
        h_sz,
        d_sx,
        d_sy,
        sz_expect,
        entropy_sum: h_sx + h_sy + h_sz,
        coherence: l1_coherence(&density_matrix(a)),
    })
}

/// `⟨S_axis²⟩ − ⟨S_axis⟩²` from the generic moment definitions.
pub fn variance_from_moments<T: Real>(a: &AmplitudeSet<T>, axis: TransverseAxis) -> T {
    let mean = expectation(a, axis.into());
    second_moment(a, axis) - mean * mean
}
