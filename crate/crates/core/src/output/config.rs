//! JSON run configuration.
//!
//! ```json
//! {"kappa": 1, "gamma0": 10, "theta": 1, "delta": 5,
//!  "initial": {"preset": "S2"}, "tmax": 50, "dt": 0.01}
//! ```
//!
//! `initial` is one of `{"preset": ..}`, `{"alpha": .., "beta": .., "convention": ..}`
//! or `{"amplitudes": [[re, im], [re, im], [re, im]]}` in `A, B, C` order.
//! Every key is optional; missing keys keep the defaults.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OutputError;
use crate::model::{AngleConvention, Preset};
use crate::runner::{InitialChoice, RunConfig};
use crate::InitialAmplitudes;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 3]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

impl InitialFile {
    pub fn to_initial(&self) -> Result<InitialChoice, OutputError> {
        let bad = |msg: &str| OutputError::Config(msg.to_string());
        let angles = self.alpha.is_some() || self.beta.is_some() || self.convention.is_some();
        let forms = [self.preset.is_some(), angles, self.amplitudes.is_some()];
        match forms.iter().filter(|f| **f).count() {
            0 => return Err(bad("`initial` needs one of preset, alpha/beta or amplitudes")),
            1 => {}
            _ => return Err(bad("`initial` mixes preset, alpha/beta and amplitudes")),
        }
        if let Some(name) = &self.preset {
            let preset: Preset = name.parse().map_err(|e: crate::ModelError| bad(&e.to_string()))?;
            return Ok(InitialChoice::Preset(preset));
        }
        if let Some(a) = self.amplitudes {
            let [a, b, c] = a.map(|[re, im]| Complex64::new(re, im));
            let init = InitialAmplitudes::new(a, b, c).map_err(|e| bad(&e.to_string()))?;
            return Ok(InitialChoice::Amplitudes(init));
        }
        let (Some(alpha), Some(beta)) = (self.alpha, self.beta) else {
            return Err(bad("`initial` needs both alpha and beta"));
        };
        let convention = match &self.convention {
            Some(c) => c.parse().map_err(|e: crate::ModelError| bad(&e.to_string()))?,
            None => AngleConvention::SinBeta,
        };
        Ok(InitialChoice::Angles { alpha, beta, convention })
    }
}

impl ConfigFile {
    pub fn from_json(text: &str, path: &Path) -> Result<Self, OutputError> {
        serde_json::from_str(text).map_err(|source| OutputError::Json { path: path.to_path_buf(), source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, OutputError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| OutputError::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// Overlays the file's values onto `config`.
    pub fn apply(&self, config: &mut RunConfig) -> Result<(), OutputError> {
        let p = &mut config.params;
        p.kappa = self.kappa.unwrap_or(p.kappa);
        p.gamma0 = self.gamma0.unwrap_or(p.gamma0);
        p.theta = self.theta.unwrap_or(p.theta);
        p.delta = self.delta.unwrap_or(p.delta);
        config.t_max = self.tmax.unwrap_or(config.t_max);
        config.dt = self.dt.unwrap_or(config.dt);
        if let Some(initial) = &self.initial {
            config.initial = initial.to_initial()?;
        }
        Ok(())
    }

    /// The file equivalent of `config`.
    pub fn from_run_config(config: &RunConfig) -> Self {
        let initial = match config.initial {
            InitialChoice::Preset(p) => InitialFile { preset: Some(p.as_str().into()), ..Default::default() },
            InitialChoice::Angles { alpha, beta, convention } => InitialFile {
                alpha: Some(alpha),
                beta: Some(beta),
                convention: Some(convention.as_str().into()),
                ..Default::default()
            },
            InitialChoice::Amplitudes(a) => {
                InitialFile { amplitudes: Some([a.a, a.b, a.c].map(|z| [z.re, z.im])), ..Default::default() }
            }
        };
        let p = config.params;
        Self {
            kappa: Some(p.kappa),
            gamma0: Some(p.gamma0),
            theta: Some(p.theta),
            delta: Some(p.delta),
            initial: Some(initial),
            tmax: Some(config.t_max),
            dt: Some(config.dt),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ConfigFile, OutputError> {
        ConfigFile::from_json(text, Path::new("test.json"))
    }

    #[test]
    fn preset_file() {
        let f = parse(r#"{"gamma0": 0.1, "theta": 1, "initial": {"preset": "S2"}, "tmax": 10}"#).unwrap();
        let mut c = RunConfig::default();
        f.apply(&mut c).unwrap();
        assert_eq!(c.params.gamma0, 0.1);
        assert_eq!(c.params.kappa, 1.0);
        assert_eq!(c.initial, InitialChoice::Preset(Preset::S2));
        assert_eq!(c.t_max, 10.0);
        assert_eq!(c.dt, 0.01);
    }

    #[test]
    fn amplitudes_and_angles() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(r#"{{"initial": {{"amplitudes": [[{h}, 0], [0, 0], [0, {h}]]}}}}"#);
        let mut c = RunConfig::default();
        parse(&text).unwrap().apply(&mut c).unwrap();
        let init = c.initial.resolve();
        assert_eq!(init.c.im, h);

        let f = parse(r#"{"initial": {"alpha": 0.3, "beta": 0.2, "convention": "cos-beta"}}"#).unwrap();
        f.apply(&mut c).unwrap();
        assert!(matches!(c.initial, InitialChoice::Angles { convention: AngleConvention::CosBeta, .. }));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse(r#"{"kapa": 1}"#), Err(OutputError::Json { .. })));
        let mut c = RunConfig::default();
        for bad in [
            r#"{"initial": {}}"#,
            r#"{"initial": {"preset": "S1", "alpha": 1}}"#,
            r#"{"initial": {"alpha": 1}}"#,
            r#"{"initial": {"preset": "S3"}}"#,
            r#"{"initial": {"amplitudes": [[1, 0], [1, 0], [0, 0]]}}"#,
        ] {
            assert!(matches!(parse(bad).unwrap().apply(&mut c), Err(OutputError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::default().with_grid(20.0, 0.05);
        let f = ConfigFile::from_run_config(&c);
        let text = serde_json::to_string(&f).unwrap();
        let mut back = RunConfig::default();
        parse(&text).unwrap().apply(&mut back).unwrap();
        assert_eq!(back, c);
    }
}
