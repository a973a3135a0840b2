//! Closed-form single-excitation dynamics of a V-type atom coupled to a
//! lossy cavity with a Lorentzian reservoir.
//!
//! The two excited levels `|A⟩`, `|B⟩` are degenerate and share the ground
//! level `|C⟩`. In the symmetric/antisymmetric basis `D± = D_A ± D_B` the
//! dynamics decouple into two damped channels with propagators `G±(t)`;
//! the ground amplitude is frozen and the lost population sits in the
//! reservoir.
//!
//! Time is measured in units of `1/κ` whenever `κ = 1`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

/// `|z|` below which `sinh(z)/z` is evaluated from its Taylor series.
pub const SINHC_SERIES_THRESHOLD: f64 = 1e-2;

/// Above this `|Re z|` the propagator is evaluated in split-exponential form.
const SPLIT_EXP_THRESHOLD: f64 = 20.0;

/// Slack on probability conservation before a state is considered invalid.
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("spectral width kappa must be positive and finite, got {0}")]
    Kappa(f64),
    #[error("decay coefficient gamma0 must be non-negative and finite, got {0}")]
    Gamma0(f64),
    #[error("interference parameter theta must lie in [-1, 1], got {0}")]
    Theta(f64),
    #[error("detuning delta must be finite, got {0}")]
    Delta(f64),
    #[error("initial amplitudes are not normalized: |dA|^2+|dB|^2+|dC|^2 = {0}")]
    NotNormalized(f64),
    #[error("time must be non-negative and finite, got {0}")]
    Time(f64),
    #[error("unknown initial-state preset `{0}` (expected S1 or S2)")]
    UnknownPreset(String),
    #[error("unknown angle convention `{0}` (expected sin-beta or cos-beta)")]
    UnknownConvention(String),
}

/// Physical constants of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    /// Spectral width of the reservoir.
    pub kappa: T,
    /// Excited-state decay coefficient.
    pub gamma0: T,
    /// Spontaneously-generated-interference parameter.
    pub theta: T,
    /// Atom–cavity detuning.
    pub delta: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(kappa: T, gamma0: T, theta: T, delta: T) -> Result<Self, ModelError> {
        if !(kappa > T::zero() && kappa.is_finite()) {
            return Err(ModelError::Kappa(kappa.to_f64_lossy()));
        }
        if !(gamma0 >= T::zero() && gamma0.is_finite()) {
            return Err(ModelError::Gamma0(gamma0.to_f64_lossy()));
        }
        if !(theta.abs() <= T::one()) {
            return Err(ModelError::Theta(theta.to_f64_lossy()));
        }
        if !delta.is_finite() {
            return Err(ModelError::Delta(delta.to_f64_lossy()));
        }
        Ok(Self { kappa, gamma0, theta, delta })
    }

    /// Weak (Markovian) coupling iff `κ ≥ 2γ0`.
    pub fn is_markovian(&self) -> bool {
        self.kappa >= T::lit(2.0) * self.gamma0
    }

    /// `κ + iΔ`.
    pub fn complex_width(&self) -> Complex<T> {
        Complex::new(self.kappa, self.delta)
    }

    /// Effective squared coupling of one channel, `γ0 (1 ± θ) κ`.
    pub fn channel_strength(&self, channel: Channel) -> T {
        self.gamma0 * (T::one() + channel.sign::<T>() * self.theta) * self.kappa
    }
}

impl Default for SystemParams<f64> {
    fn default() -> Self {
        Self { kappa: 1.0, gamma0: 10.0, theta: 0.5, delta: 0.0 }
    }
}

/// Symmetric (`+`) or antisymmetric (`−`) excited-state channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Plus,
    Minus,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Plus, Channel::Minus];

    pub fn sign<T: Real>(self) -> T {
        match self {
            Channel::Plus => T::one(),
            Channel::Minus => -T::one(),
        }
    }
}

/// Pure initial atomic state `dA|A⟩ + dB|B⟩ + dC|C⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialAmplitudes<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
}

impl<T: Real> InitialAmplitudes<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Result<Self, ModelError> {
        let norm = a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
        if !((norm - T::one()).abs() <= T::tol(1e-12)) {
            return Err(ModelError::NotNormalized(norm.to_f64_lossy()));
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: T, b: T, c: T) -> Result<Self, ModelError> {
        Self::new(Complex::from(a), Complex::from(b), Complex::from(c))
    }
}

/// Atomic amplitudes at time `t` plus the population lost to the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet<T> {
    pub t: T,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    /// `1 − |dA|² − |dB|² − |dC|²`, clamped to `[0, 1]`.
    pub bath_weight: T,
}

impl<T: Real> AmplitudeSet<T> {
    /// Builds a set from raw amplitudes, deriving the reservoir weight.
    pub fn from_amplitudes(t: T, a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Self {
        let atom = a.norm_sqr() + b.norm_sqr() + c.norm_sqr();
        let bath_weight = (T::one() - atom).max(T::zero()).min(T::one());
        Self { t, a, b, c, bath_weight }
    }

    /// The pure state itself at `t = 0`.
    pub fn initial(init: &InitialAmplitudes<T>) -> Self {
        Self::from_amplitudes(T::zero(), init.a, init.b, init.c)
    }

    /// `|dA|² + |dB|² + |dC|²`.
    pub fn atomic_norm(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()
    }
}

/// How `(α, β)` map onto the `|B⟩` and `|C⟩` amplitudes.
///
/// `dA = cos α` in both; `SinBeta` puts `sin α sin β` on `|B⟩` and
/// `sin α cos β` on `|C⟩`, `CosBeta` swaps the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleConvention {
    SinBeta,
    CosBeta,
}

impl AngleConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleConvention::SinBeta => "sin-beta",
            AngleConvention::CosBeta => "cos-beta",
        }
    }
}

impl FromStr for AngleConvention {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sin-beta" | "sinbeta" | "sin" => Ok(AngleConvention::SinBeta),
            "cos-beta" | "cosbeta" | "cos" => Ok(AngleConvention::CosBeta),
            _ => Err(ModelError::UnknownConvention(s.to_string())),
        }
    }
}

pub fn amplitudes_from_angles<T: Real>(alpha: T, beta: T, convention: AngleConvention) -> InitialAmplitudes<T> {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (b, c) = match convention {
        AngleConvention::SinBeta => (sa * sb, sa * cb),
        AngleConvention::CosBeta => (sa * cb, sa * sb),
    };
    InitialAmplitudes { a: Complex::from(ca), b: Complex::from(b), c: Complex::from(c) }
}

/// Named initial states used by the figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `(|A⟩ + |C⟩)/√2`.
    S1,
    /// `α = π/2.5`, `β = π/10` in the sin-beta convention.
    S2,
}

impl Preset {
    pub fn angles(self) -> (f64, f64, AngleConvention) {
        match self {
            Preset::S1 => (PI / 4.0, 0.0, AngleConvention::SinBeta),
            Preset::S2 => (PI / 2.5, PI / 10.0, AngleConvention::SinBeta),
        }
    }

    pub fn amplitudes<T: Real>(self) -> InitialAmplitudes<T> {
        let (alpha, beta, convention) = self.angles();
        amplitudes_from_angles(T::lit(alpha), T::lit(beta), convention)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::S1 => "S1",
            Preset::S2 => "S2",
        }
    }
}

impl FromStr for Preset {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(Preset::S1),
            "S2" => Ok(Preset::S2),
            _ => Err(ModelError::UnknownPreset(s.to_string())),
        }
    }
}

/// `R± = sqrt((κ + iΔ)² − 2γ0(1 ± θ)κ)`, principal branch.
pub fn rate_r<T: Real>(params: &SystemParams<T>, channel: Channel) -> Complex<T> {
    let w = params.complex_width();
    let mut radicand = w * w - Complex::from(T::lit(2.0) * params.channel_strength(channel));
    // -0.0 on the negative real axis would select the lower branch
    radicand.im = radicand.im + T::zero();
    radicand.sqrt()
}

/// `sinh(z)/z` from an 8-term Taylor series.
pub(crate) fn sinhc_series<T: Real>(z: Complex<T>) -> Complex<T> {
    let z2 = z * z;
    // 1/(2k+1)! for k = 7 down to 0
    const COEFFS: [f64; 8] = [
        1.0 / 1_307_674_368_000.0,
        1.0 / 6_227_020_800.0,
        1.0 / 39_916_800.0,
        1.0 / 362_880.0,
        1.0 / 5_040.0,
        1.0 / 120.0,
        1.0 / 6.0,
        1.0,
    ];
    COEFFS.iter().fold(Complex::from(T::zero()), |acc, &c| acc * z2 + Complex::from(T::lit(c)))
}

/// `sinh(z)/z` with the removable singularity at zero filled in.
pub fn sinhc<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(SINHC_SERIES_THRESHOLD) {
        sinhc_series(z)
    } else {
        z.sinh() / z
    }
}

/// Propagator for a damped channel with width `w = κ + iΔ` and root `r`.
///
/// Even in `r`, so the square-root branch does not matter.
pub(crate) fn propagator_from_root<T: Real>(width: Complex<T>, root: Complex<T>, t: T) -> Complex<T> {
    let half_t = t * T::lit(0.5);
    let w = width * half_t;
    let z = root * half_t;
    if z.norm() < T::lit(SINHC_SERIES_THRESHOLD) {
        (-w).exp() * (z.cosh() + w * sinhc_series(z))
    } else if z.re.abs() <= T::lit(SPLIT_EXP_THRESHOLD) {
        (-w).exp() * (z.cosh() + w * (z.sinh() / z))
    } else {
        let one = Complex::from(T::one());
        let q = w / z;
        ((one + q) * (z - w).exp() + (one - q) * (-z - w).exp()) * T::lit(0.5)
    }
}

/// `G±(t) = e^{−(κ+iΔ)t/2} [cosh(R±t/2) + (κ+iΔ)(t/2) sinhc(R±t/2)]`.
pub fn propagator_g<T: Real>(params: &SystemParams<T>, channel: Channel, t: T) -> Complex<T> {
    propagator_from_root(params.complex_width(), rate_r(params, channel), t)
}

/// `(Q1, Q2) = ((G+ + G−)/2, (G+ − G−)/2)`.
pub fn q_factors<T: Real>(params: &SystemParams<T>, t: T) -> (Complex<T>, Complex<T>) {
    let plus = propagator_g(params, Channel::Plus, t);
    let minus = if params.theta == T::zero() { plus } else { propagator_g(params, Channel::Minus, t) };
    let half = T::lit(0.5);
    ((plus + minus) * half, (plus - minus) * half)
}

pub fn evolve_amplitudes<T: Real>(params: &SystemParams<T>, init: &InitialAmplitudes<T>, t: T) -> AmplitudeSet<T> {
    let (q1, q2) = q_factors(params, t);
    AmplitudeSet::from_amplitudes(t, q1 * init.a + q2 * init.b, q2 * init.a + q1 * init.b, init.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn params(kappa: f64, gamma0: f64, theta: f64, delta: f64) -> SystemParams<f64> {
        SystemParams::new(kappa, gamma0, theta, delta).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn params_validation() {
        assert!(matches!(SystemParams::new(0.0, 1.0, 0.0, 0.0), Err(ModelError::Kappa(_))));
        assert!(matches!(SystemParams::new(1.0, -1.0, 0.0, 0.0), Err(ModelError::Gamma0(_))));
        assert!(matches!(SystemParams::new(1.0, 1.0, 1.5, 0.0), Err(ModelError::Theta(_))));
        assert!(matches!(SystemParams::new(1.0, 1.0, 0.0, f64::NAN), Err(ModelError::Delta(_))));
        assert!(SystemParams::new(1.0, 0.0, -1.0, -3.0).is_ok());
    }

    #[test]
    fn markovian_classification() {
        assert!(params(1.0, 0.1, 0.5, 0.0).is_markovian());
        assert!(params(1.0, 0.5, 0.5, 0.0).is_markovian());
        assert!(!params(1.0, 10.0, 0.5, 0.0).is_markovian());
    }

    #[test]
    fn rate_r_examples() {
        let r = rate_r(&params(1.0, 10.0, 0.5, 0.0), Channel::Plus);
        assert!(close(r, Complex64::new(0.0, 29f64.sqrt()), 1e-12), "{r}");
        assert!((r.im - 5.3852).abs() < 1e-4);

        let r = rate_r(&params(1.0, 10.0, 1.0, 0.0), Channel::Minus);
        assert_eq!(r, Complex64::new(1.0, 0.0));

        for ch in Channel::BOTH {
            for theta in [-1.0, 0.0, 0.3, 1.0] {
                let r = rate_r(&params(1.0, 0.0, theta, 5.0), ch);
                assert!(close(r, Complex64::new(1.0, 5.0), 1e-12));
            }
        }
    }

    #[test]
    fn negative_zero_detuning_keeps_upper_branch() {
        let r = rate_r(&params(1.0, 10.0, 0.5, -0.0), Channel::Plus);
        assert!(r.im > 0.0);
    }

    #[test]
    fn propagator_at_zero_is_one() {
        for p in [params(1.0, 10.0, 0.5, 0.0), params(2.0, 0.3, -0.4, 7.0)] {
            for ch in Channel::BOTH {
                assert!(close(propagator_g(&p, ch, 0.0), Complex64::new(1.0, 0.0), 1e-15));
            }
        }
    }

    #[test]
    fn decoherence_free_channel() {
        let p = params(1.0, 10.0, 1.0, 0.0);
        for k in 0..=500 {
            let t = k as f64 * 0.1;
            let g = propagator_g(&p, Channel::Minus, t);
            assert!(close(g, Complex64::new(1.0, 0.0), 1e-12), "t={t} g={g}");
        }
    }

    #[test]
    fn propagator_frozen_values() {
        // reference: 30-digit Taylor ODE integration of D'' + (κ+iΔ)D' + g²D = 0
        let p = params(1.0, 10.0, 0.5, 0.0);
        let gp = propagator_g(&p, Channel::Plus, 1.0);
        assert!(close(gp, Complex64::new(-0.497519893425070459, 0.0), 1e-12), "{gp}");
        let gm = propagator_g(&p, Channel::Minus, 1.0);
        assert!(close(gm, Complex64::new(0.244574712355404630, 0.0), 1e-12), "{gm}");

        let g = propagator_g(&params(1.0, 10.0, 1.0, 5.0), Channel::Plus, 2.0);
        assert!(close(g, Complex64::new(-0.515722474680512482, 0.0817660771774890905), 1e-12));
        let g = propagator_g(&params(1.0, 0.1, 0.5, 0.0), Channel::Plus, 3.0);
        assert!(close(g, Complex64::new(0.852889928591080914, 0.0), 1e-12));
        let g = propagator_g(&params(1.0, 10.0, 0.0, 10.0), Channel::Minus, 0.7);
        assert!(close(g, Complex64::new(0.894872465740807007, 0.278346831585141911), 1e-12));
    }

    #[test]
    fn q_factor_values() {
        let p = params(1.0, 10.0, 0.5, 0.0);
        assert_eq!(q_factors(&p, 0.0), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let (q1, q2) = q_factors(&p, 1.0);
        assert!(close(q1, Complex64::new(-0.126472590534832914, 0.0), 1e-12));
        assert!(close(q2, Complex64::new(-0.371047302890237545, 0.0), 1e-12));

        let p = params(1.0, 10.0, 0.0, 3.0);
        for k in 0..50 {
            assert_eq!(q_factors(&p, k as f64 * 0.37).1, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn evolve_examples() {
        let p = params(1.0, 10.0, 0.5, 0.0);
        let s1 = Preset::S1.amplitudes::<f64>();
        let a0 = evolve_amplitudes(&p, &s1, 0.0);
        assert_eq!((a0.a, a0.b, a0.c), (s1.a, s1.b, s1.c));
        assert!(a0.bath_weight.abs() < 1e-15);

        let (q1, q2) = q_factors(&p, 1.0);
        let a1 = evolve_amplitudes(&p, &s1, 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(a1.a, q1 * h, 1e-15));
        assert!(close(a1.b, q2 * h, 1e-15));
        assert_eq!(a1.c, s1.c);
        assert!((a1.bath_weight - (1.0 - a1.atomic_norm())).abs() < 1e-15);
    }

    #[test]
    fn dark_state_is_stationary() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let init = InitialAmplitudes::real(h, -h, 0.0).unwrap();
        for delta in [0.0, 5.0] {
            let p = params(1.0, 10.0, 1.0, delta);
            for k in 0..=100 {
                let s = evolve_amplitudes(&p, &init, k as f64 * 0.5);
                assert!(close(s.a, init.a, 1e-12) && close(s.b, init.b, 1e-12));
            }
        }
    }

    #[test]
    fn angle_conventions() {
        let s1 = amplitudes_from_angles(PI / 4.0, 0.0, AngleConvention::SinBeta);
        assert!(
            (s1.a.re - FRAC_1_SQRT_2).abs() < 1e-15 && s1.b.re.abs() < 1e-15 && (s1.c.re - FRAC_1_SQRT_2).abs() < 1e-15
        );

        let lit = amplitudes_from_angles(PI / 2.5, PI / 10.0, AngleConvention::CosBeta);
        assert!((lit.a.re - 0.3090).abs() < 1e-4);
        assert!((lit.b.re - 0.9045).abs() < 1e-4);
        assert!((lit.c.re - 0.2939).abs() < 1e-4);

        let s2 = Preset::S2.amplitudes::<f64>();
        assert!((s2.b.re - 0.2939).abs() < 1e-4 && (s2.c.re - 0.9045).abs() < 1e-4);

        for beta in [0.0, 1.0, -2.0] {
            let a = amplitudes_from_angles(0.0, beta, AngleConvention::SinBeta);
            assert_eq!(a.a.re, 1.0);
            assert!(a.b.norm() < 1e-15 && a.c.norm() < 1e-15);
        }
    }

    #[test]
    fn initial_normalization_enforced() {
        assert!(InitialAmplitudes::real(1.0, 1.0, 0.0).is_err());
        assert!(InitialAmplitudes::real(0.6, 0.0, 0.8).is_ok());
    }

    #[test]
    fn sinhc_continuity_at_threshold() {
        for angle in [0.0, 0.7, 1.5, 2.2, 3.1] {
            for scale in [0.999, 1.0, 1.001] {
                let r = SINHC_SERIES_THRESHOLD * scale;
                let z = Complex64::from_polar(r, angle);
                let direct = z.sinh() / z;
                assert!((sinhc_series(z) - direct).norm() < 1e-14);
            }
        }
        assert_eq!(sinhc(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn split_exponential_form_agrees_with_direct() {
        let width = Complex64::new(1.0, 0.0);
        let root = Complex64::new(0.8, 0.0);
        // |Re z| = 0.4 t crosses 20 at t = 50
        for t in [49.0, 49.99, 50.01, 51.0] {
            let w = width * (t / 2.0);
            let z = root * (t / 2.0);
            let direct = (-w).exp() * (z.cosh() + w * z.sinh() / z);
            let g = propagator_from_root(width, root, t);
            assert!((g - direct).norm() <= 1e-12 * direct.norm().max(1e-300), "t={t}");
        }
        // no overflow far out
        let g = propagator_from_root(width, root, 5000.0);
        assert!(g.re.is_finite() && g.norm() < 1.0);
    }

    #[test]
    fn single_precision_tracks_double() {
        let p32 = SystemParams::<f32>::new(1.0, 10.0, 0.5, 2.0).unwrap();
        let p64 = params(1.0, 10.0, 0.5, 2.0);
        for k in 0..40 {
            let t = k as f64 * 0.25;
            let g32 = propagator_g(&p32, Channel::Plus, t as f32);
            let g64 = propagator_g(&p64, Channel::Plus, t);
            assert!((g32.re as f64 - g64.re).abs() < 1e-4 && (g32.im as f64 - g64.im).abs() < 1e-4);
        }
    }
}
