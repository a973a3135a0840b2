//! The full battery of oracle checks behind `vsqueeze verify`.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{bound_search, max_ode_error, projection_probabilities, trace_product, OdeConfig, OracleError};
use crate::model::{
    evolve_amplitudes, propagator_g, q_factors, AmplitudeSet, Channel, InitialAmplitudes, SystemParams,
};
use crate::runner::{figure_preset, sweep_configs, FigureId};
use crate::spin::{expectation, matmul, probabilities, second_moment, spin_operator, SpinAxis, TransverseAxis};
use crate::squeezing::{entropy, entropy_sum, heisenberg_check, shannon_entropy};
use crate::state::density_matrix;

pub const ODE_DT: f64 = 1e-3;
pub const ODE_T_MAX: f64 = 20.0;
pub const ODE_TOL: f64 = 1e-6;
pub const MIN_CONVERGENCE_RATIO: f64 = 12.0;
pub const ENTROPY_TOL: f64 = 1e-12;
pub const BOUND_SLACK: f64 = 1e-9;
pub const BOUND_SEARCH_TOL: f64 = 1e-3;
/// A bound-search minimum this far below `2 ln 2` means a units error.
pub const BOUND_FLOOR_SLACK: f64 = 1e-6;
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Worst deviation observed (or the measured quantity for ratio checks).
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn below(name: &str, max_error: f64, tolerance: f64, detail: String) -> Self {
        Self { name: name.into(), max_error, tolerance, passed: max_error < tolerance, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub random_states: usize,
    pub seed: u64,
    pub bound_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { random_states: 1000, seed: 0, bound_samples: 100_000 }
    }
}

/// Distinct physical parameter sets over all figure presets.
pub fn figure_parameter_sets() -> Vec<SystemParams<f64>> {
    let mut out: Vec<SystemParams<f64>> = Vec::new();
    for id in FigureId::ALL {
        let preset = figure_preset(id);
        for (_, config) in sweep_configs(&preset.base, &preset.axes).expect("figure table is valid") {
            if !out.contains(&config.params) {
                out.push(config.params);
            }
        }
    }
    out
}

/// Worst `|G±_closed − G±_ode|` over every figure parameter set and both channels.
pub fn ode_equivalence(dt: f64) -> Result<f64, OracleError> {
    let config = OdeConfig::new(dt, ODE_T_MAX)?;
    let jobs: Vec<_> = figure_parameter_sets().into_iter().flat_map(|p| Channel::BOTH.map(|c| (p, c))).collect();
    let errors = jobs.par_iter().map(|(p, c)| max_ode_error(p, *c, &config)).collect::<Result<Vec<_>, _>>()?;
    Ok(errors.into_iter().fold(0.0, f64::max))
}

/// `(error at dt, error at dt/2, ratio)`.
pub fn ode_convergence(dt: f64) -> Result<(f64, f64, f64), OracleError> {
    let coarse = ode_equivalence(dt)?;
    let fine = ode_equivalence(dt / 2.0)?;
    Ok((coarse, fine, coarse / fine))
}

/// Amplitude samples from random parameters, initial states and times.
pub fn random_reachable_states(n: usize, seed: u64) -> Vec<AmplitudeSet<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let params =
                SystemParams::new(1.0, rng.gen_range(0.0..20.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-10.0..10.0))
                    .expect("sampled parameters are in range");
            let x: [f64; 6] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let z = |k: usize| Complex64::new(x[2 * k] / norm, x[2 * k + 1] / norm);
            let init = InitialAmplitudes::new(z(0), z(1), z(2)).expect("normalized");
            evolve_amplitudes(&params, &init, rng.gen_range(0.0..50.0))
        })
        .collect()
}

/// Every grid point of the given figures.
pub fn figure_states(ids: &[FigureId]) -> Vec<AmplitudeSet<f64>> {
    ids.iter()
        .flat_map(|&id| {
            let preset = figure_preset(id);
            sweep_configs(&preset.base, &preset.axes).expect("figure table is valid")
        })
        .flat_map(|(_, config)| {
            let init = config.initial.resolve();
            let params = config.params;
            config.grid().into_par_iter().map(move |t| evolve_amplitudes(&params, &init, t)).collect::<Vec<_>>()
        })
        .collect()
}

/// Worst disagreement between the amplitude closed form of `H(S_axis)` and
/// the two density-matrix routes (analytic entries, literal projections).
pub fn entropy_route_error(states: &[AmplitudeSet<f64>]) -> f64 {
    states
        .par_iter()
        .map(|a| {
            let rho = density_matrix(a);
            let mut worst: f64 = 0.0;
            for axis in SpinAxis::ALL {
                let closed = entropy(a, axis);
                let proj = shannon_entropy(projection_probabilities(&rho, axis)).unwrap_or(f64::INFINITY);
                let entries =
                    probabilities(&rho, axis).ok().and_then(|p| shannon_entropy(p).ok()).unwrap_or(f64::INFINITY);
                worst = worst.max((closed - proj).abs()).max((closed - entries).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// `⟨S⟩` and `⟨S²⟩` closed forms against `Tr(ρ S)`, `Tr(ρ S²)`.
pub fn trace_oracle_error(states: &[AmplitudeSet<f64>]) -> f64 {
    states
        .par_iter()
        .map(|a| {
            let rho = density_matrix(a);
            let mut worst: f64 = 0.0;
            for axis in SpinAxis::ALL {
                let s = spin_operator::<f64>(axis);
                worst = worst.max((expectation(a, axis) - trace_product(&rho, &s).re).abs());
            }
            for axis in TransverseAxis::BOTH {
                let s = spin_operator::<f64>(axis.into());
                let s2 = matmul(&s, &s);
                worst = worst.max((second_moment(a, axis) - trace_product(&rho, &s2).re).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Worst trace, Hermiticity and positivity defect of the density matrices.
pub fn density_validity_error(states: &[AmplitudeSet<f64>]) -> f64 {
    states
        .par_iter()
        .map(|a| {
            let rho = density_matrix(a);
            (rho.trace() - 1.0).norm().max(rho.hermiticity_defect()).max(-rho.min_eigenvalue())
        })
        .reduce(|| 0.0, f64::max)
}

/// `(min ΔS_x ΔS_y − |⟨S_z⟩|/2, min entropy_sum − 2 ln 2)`; both should be ≥ 0.
pub fn bound_margins(states: &[AmplitudeSet<f64>]) -> (f64, f64) {
    states
        .par_iter()
        .map(|a| {
            let heis = heisenberg_check(a).map(|(l, r)| l - r).unwrap_or(f64::NEG_INFINITY);
            (heis, entropy_sum(a) - 2.0 * LN_2)
        })
        .reduce(|| (f64::INFINITY, f64::INFINITY), |x, y| (x.0.min(y.0), x.1.min(y.1)))
}

/// Worst deviation from the exact special cases on `t ∈ [0, 50]`:
/// `G− ≡ 1` at `θ = 1`, `Q2 ≡ 0` at `θ = 0`, and a frozen dark state
/// `dA = −dB` at `θ = 1`.
pub fn identity_error() -> f64 {
    let times: Vec<f64> = (0..=5000).map(|k| k as f64 * 0.01).collect();
    let mut jobs = Vec::new();
    for gamma0 in [0.1, 1.0, 10.0] {
        for delta in [0.0, 5.0, 10.0] {
            jobs.push((gamma0, delta));
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dark = InitialAmplitudes::new(Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, 0.0))
        .expect("normalized");
    let dark_mixed = InitialAmplitudes::new(
        Complex64::new(0.5, 0.1),
        Complex64::new(-0.5, -0.1),
        Complex64::new(0.0, (1.0f64 - 0.52).sqrt()),
    )
    .expect("normalized");
    jobs.par_iter()
        .map(|&(gamma0, delta)| {
            let sfi = SystemParams::new(1.0, gamma0, 1.0, delta).expect("valid");
            let none = SystemParams::new(1.0, gamma0, 0.0, delta).expect("valid");
            let one = Complex64::new(1.0, 0.0);
            let mut worst: f64 = 0.0;
            for &t in &times {
                worst = worst.max((propagator_g(&sfi, Channel::Minus, t) - one).norm());
                worst = worst.max(q_factors(&none, t).1.norm());
                for init in [&dark, &dark_mixed] {
                    let a = evolve_amplitudes(&sfi, init, t);
                    worst = worst.max((a.a - init.a).norm()).max((a.b - init.b).norm()).max((a.c - init.c).norm());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

pub fn run_suite(opts: &SuiteOptions) -> Report {
    let mut checks = Vec::new();

    match ode_convergence(ODE_DT) {
        Ok((coarse, fine, ratio)) => {
            checks.push(Check::below(
                "ode_equivalence",
                coarse,
                ODE_TOL,
                format!("max |G_closed - G_ode| over figure parameters, t<={ODE_T_MAX}, dt={ODE_DT}"),
            ));
            checks.push(Check {
                name: "ode_convergence".into(),
                max_error: ratio,
                tolerance: MIN_CONVERGENCE_RATIO,
                passed: ratio >= MIN_CONVERGENCE_RATIO,
                detail: format!("error ratio dt={ODE_DT} vs dt/2 ({coarse:.3e} / {fine:.3e}); must be >= tolerance"),
            });
        }
        Err(e) => checks.push(Check {
            name: "ode_equivalence".into(),
            max_error: f64::INFINITY,
            tolerance: ODE_TOL,
            passed: false,
            detail: e.to_string(),
        }),
    }

    let random = random_reachable_states(opts.random_states, opts.seed);
    let figures = figure_states(&FigureId::ALL[..7]);
    checks.push(Check::below(
        "entropy_routes_random",
        entropy_route_error(&random),
        ENTROPY_TOL,
        format!("{} seeded random states, three probability routes", random.len()),
    ));
    checks.push(Check::below(
        "entropy_routes_figures",
        entropy_route_error(&figures),
        ENTROPY_TOL,
        format!("{} trajectory points of fig1..fig7", figures.len()),
    ));
    let mut all = random;
    all.extend(figures);
    checks.push(Check::below(
        "trace_oracle",
        trace_oracle_error(&all),
        ENTROPY_TOL,
        "closed-form <S>, <S^2> against Tr(rho S)".into(),
    ));
    checks.push(Check::below(
        "density_validity",
        density_validity_error(&all),
        ENTROPY_TOL,
        "trace, hermiticity and positivity of rho".into(),
    ));
    let (heis, ent) = bound_margins(&all);
    checks.push(Check {
        name: "heisenberg_bound".into(),
        max_error: (-heis).max(0.0),
        tolerance: BOUND_SLACK,
        passed: heis >= -BOUND_SLACK,
        detail: format!("min dSx*dSy - |<Sz>|/2 = {heis:.3e}"),
    });
    checks.push(Check {
        name: "entropic_bound".into(),
        max_error: (-ent).max(0.0),
        tolerance: BOUND_SLACK,
        passed: ent >= -BOUND_SLACK,
        detail: format!("min H_x + H_y + H_z - 2 ln 2 = {ent:.3e}"),
    });
    checks.push(Check::below(
        "exact_identities",
        identity_error(),
        IDENTITY_TOL,
        "G- = 1 at theta=1, Q2 = 0 at theta=0, dark state frozen".into(),
    ));

    match bound_search(opts.bound_samples, opts.seed) {
        Ok(b) => {
            let gap = b.min_sum - 2.0 * LN_2;
            checks.push(Check {
                name: "bound_search".into(),
                max_error: gap.abs(),
                tolerance: BOUND_SEARCH_TOL,
                passed: gap.abs() < BOUND_SEARCH_TOL && gap >= -BOUND_FLOOR_SLACK,
                detail: format!(
                    "{} samples, seed {}: refined min {:.12}, sampled min {:.6}, 2 ln 2 = {:.12}",
                    b.samples,
                    b.seed,
                    b.min_sum,
                    b.sampled_min,
                    2.0 * LN_2
                ),
            });
        }
        Err(e) => checks.push(Check {
            name: "bound_search".into(),
            max_error: f64::INFINITY,
            tolerance: BOUND_SEARCH_TOL,
            passed: false,
            detail: e.to_string(),
        }),
    }

    Report { checks }
}
