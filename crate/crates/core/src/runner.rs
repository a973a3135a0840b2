//! Time-grid evolution, parameter sweeps and the figure presets.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{amplitudes_from_angles, evolve_amplitudes, AngleConvention, ModelError, Preset};
use crate::output::Column;
use crate::squeezing::{record, SqueezingError};
use crate::{AmplitudeSet, InitialAmplitudes, SqueezingRecord, SystemParams};

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunnerError {
    #[error("invalid time grid: dt={dt}, t_max={t_max}")]
    InvalidGrid { dt: f64, t_max: f64 },
    #[error("unknown sweep parameter `{0}` (expected theta, gamma0, delta, alpha or beta)")]
    UnknownParameter(String),
    #[error("sweep axis `{0}` has no values")]
    EmptyAxis(String),
    #[error("unknown figure `{0}` (expected fig1..fig8)")]
    UnknownFigure(String),
    #[error("cannot sweep `{0}` on an explicit-amplitude initial state")]
    NotAngleBased(String),
    #[error("at t={t}: {source}")]
    AtTime { t: f64, source: SqueezingError },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How the initial atomic state is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialChoice {
    Preset(Preset),
    Angles { alpha: f64, beta: f64, convention: AngleConvention },
    Amplitudes(InitialAmplitudes),
}

impl InitialChoice {
    pub fn resolve(&self) -> InitialAmplitudes {
        match *self {
            InitialChoice::Preset(p) => p.amplitudes(),
            InitialChoice::Angles { alpha, beta, convention } => amplitudes_from_angles(alpha, beta, convention),
            InitialChoice::Amplitudes(a) => a,
        }
    }

    fn as_angles(&self, param: SweepParam) -> Result<(f64, f64, AngleConvention), RunnerError> {
        match *self {
            InitialChoice::Preset(p) => Ok(p.angles()),
            InitialChoice::Angles { alpha, beta, convention } => Ok((alpha, beta, convention)),
            InitialChoice::Amplitudes(_) => Err(RunnerError::NotAngleBased(param.to_string())),
        }
    }
}

impl Default for InitialChoice {
    fn default() -> Self {
        InitialChoice::Preset(Preset::S1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub initial: InitialChoice,
    pub t_max: f64,
    pub dt: f64,
    /// Columns to emit; empty means all.
    pub outputs: Vec<Column>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            initial: InitialChoice::default(),
            t_max: DEFAULT_T_MAX,
            dt: DEFAULT_DT,
            outputs: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn new(params: SystemParams, initial: InitialChoice) -> Self {
        Self { params, initial, ..Self::default() }
    }

    pub fn with_grid(mut self, t_max: f64, dt: f64) -> Self {
        self.t_max = t_max;
        self.dt = dt;
        self
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        if !(self.dt > 0.0 && self.t_max.is_finite() && self.t_max >= self.dt) {
            return Err(RunnerError::InvalidGrid { dt: self.dt, t_max: self.t_max });
        }
        // re-run the constructor checks on possibly hand-built params
        let p = self.params;
        SystemParams::new(p.kappa, p.gamma0, p.theta, p.delta)?;
        Ok(())
    }

    /// Number of grid points, `floor(t_max/dt) + 1`.
    pub fn grid_len(&self) -> usize {
        (self.t_max / self.dt + 1e-9).floor() as usize + 1
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_len()).map(|k| k as f64 * self.dt).collect()
    }

    pub fn columns(&self) -> Vec<Column> {
        if self.outputs.is_empty() {
            Column::ALL.to_vec()
        } else {
            self.outputs.clone()
        }
    }
}

/// One grid sample: the amplitudes and every derived observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub amplitudes: AmplitudeSet,
    pub record: SqueezingRecord,
}

impl TrajectoryPoint {
    pub fn t(&self) -> f64 {
        self.amplitudes.t
    }
}

pub fn evaluate(params: &SystemParams, init: &InitialAmplitudes, t: f64) -> Result<TrajectoryPoint, RunnerError> {
    let amplitudes = evolve_amplitudes(params, init, t);
    let record = record(&amplitudes).map_err(|source| RunnerError::AtTime { t, source })?;
    Ok(TrajectoryPoint { amplitudes, record })
}

/// Evaluates the closed form on `{0, dt, …, t_max}`.
pub fn evolve(config: &RunConfig) -> Result<Vec<TrajectoryPoint>, RunnerError> {
    config.validate()?;
    let init = config.initial.resolve();
    let params = config.params;
    config.grid().into_par_iter().map(|t| evaluate(&params, &init, t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Theta,
    Gamma0,
    Delta,
    Alpha,
    Beta,
}

impl SweepParam {
    /// Short tag used in output file names.
    pub fn tag(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Gamma0 => "gamma",
            SweepParam::Delta => "delta",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
        }
    }

    fn apply(self, config: &mut RunConfig, value: f64) -> Result<(), RunnerError> {
        let p = &mut config.params;
        match self {
            SweepParam::Theta => p.theta = value,
            SweepParam::Gamma0 => p.gamma0 = value,
            SweepParam::Delta => p.delta = value,
            SweepParam::Alpha | SweepParam::Beta => {
                let (mut alpha, mut beta, convention) = config.initial.as_angles(self)?;
                if self == SweepParam::Alpha {
                    alpha = value;
                } else {
                    beta = value;
                }
                config.initial = InitialChoice::Angles { alpha, beta, convention };
            }
        }
        Ok(())
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SweepParam::Theta => "theta",
            SweepParam::Gamma0 => "gamma0",
            SweepParam::Delta => "delta",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
        };
        f.write_str(name)
    }
}

impl FromStr for SweepParam {
    type Err = RunnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theta" => Ok(SweepParam::Theta),
            "gamma0" | "gamma" => Ok(SweepParam::Gamma0),
            "delta" => Ok(SweepParam::Delta),
            "alpha" => Ok(SweepParam::Alpha),
            "beta" => Ok(SweepParam::Beta),
            _ => Err(RunnerError::UnknownParameter(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(param: SweepParam, values: impl Into<Vec<f64>>) -> Self {
        Self { param, values: values.into() }
    }
}

impl FromStr for SweepAxis {
    type Err = RunnerError;

    /// Parses `name=v1,v2,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, list) = s.split_once('=').ok_or_else(|| RunnerError::UnknownParameter(s.to_string()))?;
        let param: SweepParam = name.parse()?;
        let values = list
            .split(',')
            .filter(|v| !v.trim().is_empty())
            .map(|v| v.trim().parse::<f64>().map_err(|_| RunnerError::EmptyAxis(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(RunnerError::EmptyAxis(name.to_string()));
        }
        Ok(Self { param, values })
    }
}

/// One run of a sweep, tagged by its coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub coords: SweepCoords,
    pub config: RunConfig,
    pub points: Vec<TrajectoryPoint>,
}

impl SweepCell {
    /// `gamma0.1`, `delta5_gamma10`, …; `base` for the empty sweep.
    pub fn label(&self) -> String {
        if self.coords.is_empty() {
            return "base".to_string();
        }
        self.coords.iter().map(|(p, v)| format!("{}{}", p.tag(), v)).collect::<Vec<_>>().join("_")
    }

    pub fn legend(&self) -> String {
        if self.coords.is_empty() {
            return "run".to_string();
        }
        self.coords.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(", ")
    }
}

/// Coordinates of one sweep cell, in axis order.
pub type SweepCoords = Vec<(SweepParam, f64)>;

/// Cartesian product of the axes, first axis outermost.
pub fn sweep_configs(base: &RunConfig, axes: &[SweepAxis]) -> Result<Vec<(SweepCoords, RunConfig)>, RunnerError> {
    let mut cells = vec![(Vec::new(), base.clone())];
    for axis in axes {
        if axis.values.is_empty() {
            return Err(RunnerError::EmptyAxis(axis.param.to_string()));
        }
        let mut next = Vec::with_capacity(cells.len() * axis.values.len());
        for (coords, config) in &cells {
            for &value in &axis.values {
                let mut config = config.clone();
                axis.param.apply(&mut config, value)?;
                let mut coords = coords.clone();
                coords.push((axis.param, value));
                next.push((coords, config));
            }
        }
        cells = next;
    }
    Ok(cells)
}

pub fn sweep(base: &RunConfig, axes: &[SweepAxis]) -> Result<Vec<SweepCell>, RunnerError> {
    sweep_configs(base, axes)?
        .into_par_iter()
        .map(|(coords, config)| {
            let points = evolve(&config)?;
            Ok(SweepCell { coords, config, points })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = RunnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| RunnerError::UnknownFigure(s.to_string()))
    }
}

/// One plotted panel: a column drawn for a subset of the figure's runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub stem: String,
    pub column: Column,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub base: RunConfig,
    pub axes: Vec<SweepAxis>,
    pub panels: Vec<Panel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureBundle {
    pub id: FigureId,
    pub cells: Vec<SweepCell>,
    pub panels: Vec<Panel>,
}

impl FigureBundle {
    pub fn cell(&self, param: SweepParam, value: f64) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.coords.iter().any(|&(p, v)| p == param && v == value))
    }
}

fn five_panels(id: FigureId, lines: usize) -> Vec<Panel> {
    [Column::ESx, Column::ESy, Column::VSx, Column::VSy, Column::SzExpect]
        .into_iter()
        .zip('a'..)
        .map(|(column, letter)| Panel { stem: format!("{id}{letter}"), column, lines: (0..lines).collect() })
        .collect()
}

/// Parameter table of the eight figures; `κ = 1` throughout.
pub fn figure_preset(id: FigureId) -> FigurePreset {
    use SweepParam::*;
    let params = |gamma0, theta, delta| SystemParams { kappa: 1.0, gamma0, theta, delta };
    let run = |preset, p, t_max| RunConfig::new(p, InitialChoice::Preset(preset)).with_grid(t_max, DEFAULT_DT);
    let gammas = || SweepAxis::new(Gamma0, [0.1, 10.0]);
    let thetas = || SweepAxis::new(Theta, [0.0, 0.5, 1.0]);
    let (base, axes) = match id {
        FigureId::Fig1 => (run(Preset::S1, params(10.0, 0.5, 0.0), 50.0), vec![gammas()]),
        FigureId::Fig2 => (run(Preset::S1, params(10.0, 0.5, 0.0), 50.0), vec![thetas()]),
        FigureId::Fig3 => (run(Preset::S2, params(10.0, 1.0, 0.0), 50.0), vec![gammas()]),
        FigureId::Fig4 => (run(Preset::S2, params(10.0, 1.0, 0.0), 50.0), vec![thetas()]),
        FigureId::Fig5 => (run(Preset::S2, params(10.0, 1.0, 5.0), 600.0), vec![gammas()]),
        FigureId::Fig6 => (run(Preset::S2, params(10.0, 1.0, 5.0), 50.0), vec![thetas()]),
        FigureId::Fig7 => {
            (run(Preset::S2, params(10.0, 1.0, 0.0), 600.0), vec![SweepAxis::new(Delta, [0.0, 5.0, 10.0])])
        }
        FigureId::Fig8 => {
            (run(Preset::S2, params(10.0, 1.0, 0.0), 50.0), vec![SweepAxis::new(Delta, [0.0, 5.0]), gammas()])
        }
    };
    let lines = axes.iter().map(|a| a.values.len()).product();
    let panels = match id {
        FigureId::Fig7 => [Column::ESx, Column::VSx, Column::SzExpect]
            .into_iter()
            .zip('a'..)
            .map(|(column, letter)| Panel { stem: format!("{id}{letter}"), column, lines: (0..lines).collect() })
            .collect(),
        FigureId::Fig8 => vec![
            Panel { stem: "fig8a".into(), column: Column::CoherenceL1, lines: vec![0, 1] },
            Panel { stem: "fig8b".into(), column: Column::CoherenceL1, lines: vec![2, 3] },
        ],
        _ => five_panels(id, lines),
    };
    let mut base = base;
    if id == FigureId::Fig8 {
        base.outputs = vec![Column::T, Column::CoherenceL1, Column::ESx, Column::VSx, Column::SzExpect];
    }
    FigurePreset { id, base, axes, panels }
}

pub fn figure(id: FigureId) -> Result<FigureBundle, RunnerError> {
    let preset = figure_preset(id);
    let cells = sweep(&preset.base, &preset.axes)?;
    Ok(FigureBundle { id, cells, panels: preset.panels })
}

pub fn figure_by_name(name: &str) -> Result<FigureBundle, RunnerError> {
    figure(name.parse()?)
}

/// Curve-reading helpers used to compare trajectories with quoted times.
pub mod analysis {
    /// First sign change of `values`, located by linear interpolation.
    pub fn first_zero_crossing(times: &[f64], values: &[f64]) -> Option<f64> {
        crossings(times, values).into_iter().next()
    }

    /// All sign changes, linearly interpolated.
    pub fn crossings(times: &[f64], values: &[f64]) -> Vec<f64> {
        let mut out = Vec::new();
        for k in 1..values.len().min(times.len()) {
            let (v0, v1) = (values[k - 1], values[k]);
            if (v0 < 0.0) != (v1 < 0.0) {
                let frac = if v1 == v0 { 0.0 } else { v0 / (v0 - v1) };
                out.push(times[k - 1] + frac * (times[k] - times[k - 1]));
            }
        }
        out
    }

    /// First time after which the series stays within `tol` of its last value.
    pub fn settle_time(times: &[f64], values: &[f64], tol: f64) -> Option<f64> {
        let last = *values.last()?;
        match values.iter().rposition(|v| (v - last).abs() > tol) {
            None => times.first().copied(),
            Some(k) => times.get(k + 1).copied(),
        }
    }

    /// Intervals on which the series is negative, ends interpolated.
    pub fn negative_excursions(times: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start = None;
        for k in 0..values.len() {
            let neg = values[k] < 0.0;
            match (neg, start) {
                (true, None) => {
                    start = Some(if k == 0 {
                        times[0]
                    } else {
                        let (v0, v1) = (values[k - 1], values[k]);
                        times[k - 1] + v0 / (v0 - v1) * (times[k] - times[k - 1])
                    })
                }
                (false, Some(s)) => {
                    let (v0, v1) = (values[k - 1], values[k]);
                    let frac = if v1 == v0 { 0.0 } else { v0 / (v0 - v1) };
                    out.push((s, times[k - 1] + frac * (times[k] - times[k - 1])));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, *times.last().unwrap()));
        }
        out
    }

    /// Times of strict interior local maxima.
    pub fn local_maxima(times: &[f64], values: &[f64]) -> Vec<f64> {
        (1..values.len().saturating_sub(1))
            .filter(|&k| values[k] > values[k - 1] && values[k] >= values[k + 1])
            .map(|k| times[k])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::analysis::*;
    use super::*;

    #[test]
    fn grid_arithmetic() {
        let c = RunConfig::default();
        assert_eq!(c.grid_len(), 5001);
        assert_eq!(c.grid().last().copied(), Some(50.0));
        let c = RunConfig::default().with_grid(1.0, 0.3);
        assert_eq!(c.grid_len(), 4);
        assert!(RunConfig::default().with_grid(0.001, 0.01).validate().is_err());
        assert!(RunConfig::default().with_grid(1.0, 0.0).validate().is_err());
    }

    #[test]
    fn evolve_s1_t0() {
        let c = RunConfig::default().with_grid(0.1, 0.1);
        let pts = evolve(&c).unwrap();
        assert_eq!(pts.len(), 2);
        let r = pts[0].record;
        assert_eq!(r.sz_expect, 0.0);
        assert!((r.coherence - 1.0).abs() < 1e-15);
        // |S_y| probabilities of (|A⟩+|C⟩)/√2 are (1/2 ± 1/2·0, 0, …): H_y = ln 2
        assert!((r.h_sy - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn sweep_empty_axes_is_base_run() {
        let c = RunConfig::default().with_grid(2.0, 0.5);
        let cells = sweep(&c, &[]).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].points, evolve(&c).unwrap());
        assert_eq!(cells[0].label(), "base");
    }

    #[test]
    fn sweep_order_and_labels() {
        let c = RunConfig::default().with_grid(1.0, 0.5);
        let axes = [SweepAxis::new(SweepParam::Delta, [0.0, 5.0]), SweepAxis::new(SweepParam::Gamma0, [0.1, 10.0])];
        let cells = sweep(&c, &axes).unwrap();
        let labels: Vec<_> = cells.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["delta0_gamma0.1", "delta0_gamma10", "delta5_gamma0.1", "delta5_gamma10"]);
        assert_eq!(cells[3].config.params.delta, 5.0);
        assert_eq!(cells[3].config.params.gamma0, 10.0);
    }

    #[test]
    fn sweep_over_angles() {
        let c = RunConfig::new(SystemParams::default(), InitialChoice::Preset(Preset::S2)).with_grid(1.0, 1.0);
        let cells = sweep(&c, &[SweepAxis::new(SweepParam::Alpha, [0.0])]).unwrap();
        let init = cells[0].config.initial.resolve();
        assert_eq!(init.a.re, 1.0);

        let explicit = RunConfig::new(SystemParams::default(), InitialChoice::Amplitudes(Preset::S1.amplitudes()));
        assert!(matches!(
            sweep(&explicit, &[SweepAxis::new(SweepParam::Beta, [0.0])]),
            Err(RunnerError::NotAngleBased(_))
        ));
    }

    #[test]
    fn sweep_param_parsing() {
        assert!(matches!("kappa".parse::<SweepParam>(), Err(RunnerError::UnknownParameter(_))));
        let axis: SweepAxis = "theta=0,0.5,1".parse().unwrap();
        assert_eq!(axis.values, vec![0.0, 0.5, 1.0]);
        assert!("theta=".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn sweep_rejects_invalid_theta() {
        let c = RunConfig::default().with_grid(1.0, 0.5);
        assert!(matches!(
            sweep(&c, &[SweepAxis::new(SweepParam::Theta, [2.0])]),
            Err(RunnerError::Model(ModelError::Theta(_)))
        ));
    }

    #[test]
    fn figure_table() {
        let f5 = figure_preset(FigureId::Fig5);
        assert_eq!(f5.base.params.theta, 1.0);
        assert_eq!(f5.base.params.delta, 5.0);
        assert_eq!(f5.base.initial, InitialChoice::Preset(Preset::S2));
        assert_eq!(f5.axes, vec![SweepAxis::new(SweepParam::Gamma0, [0.1, 10.0])]);
        let f8 = figure_preset(FigureId::Fig8);
        assert_eq!(f8.panels.len(), 2);
        assert!(matches!("fig9".parse::<FigureId>(), Err(RunnerError::UnknownFigure(_))));
        assert_eq!("FIG2".parse::<FigureId>().unwrap(), FigureId::Fig2);
        for id in FigureId::ALL {
            assert_eq!(figure_preset(id).base.params.kappa, 1.0);
        }
    }

    #[test]
    fn analysis_helpers() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let v = [1.0, -1.0, -2.0, 0.5, 0.5];
        assert_eq!(first_zero_crossing(&t, &v), Some(0.5));
        assert_eq!(crossings(&t, &v), vec![0.5, 2.8]);
        assert_eq!(negative_excursions(&t, &v), vec![(0.5, 2.8)]);
        assert_eq!(settle_time(&t, &v, 0.1), Some(3.0));
        assert_eq!(local_maxima(&t, &[0.0, 2.0, 1.0, 3.0, 0.0]), vec![1.0, 3.0]);
        assert_eq!(negative_excursions(&t, &[-1.0, -1.0, 1.0, 1.0, -1.0]), vec![(0.0, 1.5), (3.5, 4.0)]);
    }
}
