//! CSV and JSON serialization, SVG line plots and the command-line front end.

use std::fmt;
use std::io;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::runner::TrajectoryPoint;

pub mod cli;
pub mod config;
pub mod csv;
pub mod report;
pub mod svg;

pub use self::csv::{read_csv, write_csv, write_csv_to, CsvTable};
pub use self::svg::{render_svg, write_svg_plot, PlotStyle, Series};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: ::csv::Error },
    #[error("{path}: malformed value `{value}` in column {column}")]
    Parse { path: PathBuf, column: String, value: String },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("nothing to write: record sequence is empty")]
    EmptyRecords,
    #[error("plot needs at least one non-empty series")]
    EmptySeries,
    #[error("series `{label}` has a non-finite value at index {index}")]
    NonFinite { label: String, index: usize },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("invalid config: {0}")]
    Config(String),
}

impl OutputError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        OutputError::Io { path: path.into(), source }
    }
}

/// CSV columns, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    T,
    DaRe,
    DaIm,
    DbRe,
    DbIm,
    DcRe,
    DcIm,
    BathWeight,
    ESx,
    ESy,
    VSx,
    VSy,
    HSx,
    HSy,
    HSz,
    DSx,
    DSy,
    SzExpect,
    EntropySum,
    CoherenceL1,
}

impl Column {
    pub const ALL: [Column; 20] = [
        Column::T,
        Column::DaRe,
        Column::DaIm,
        Column::DbRe,
        Column::DbIm,
        Column::DcRe,
        Column::DcIm,
        Column::BathWeight,
        Column::ESx,
        Column::ESy,
        Column::VSx,
        Column::VSy,
        Column::HSx,
        Column::HSy,
        Column::HSz,
        Column::DSx,
        Column::DSy,
        Column::SzExpect,
        Column::EntropySum,
        Column::CoherenceL1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::T => "t",
            Column::DaRe => "dA_re",
            Column::DaIm => "dA_im",
            Column::DbRe => "dB_re",
            Column::DbIm => "dB_im",
            Column::DcRe => "dC_re",
            Column::DcIm => "dC_im",
            Column::BathWeight => "bath_weight",
            Column::ESx => "E_Sx",
            Column::ESy => "E_Sy",
            Column::VSx => "V_Sx",
            Column::VSy => "V_Sy",
            Column::HSx => "H_Sx",
            Column::HSy => "H_Sy",
            Column::HSz => "H_Sz",
            Column::DSx => "dSx",
            Column::DSy => "dSy",
            Column::SzExpect => "Sz_expect",
            Column::EntropySum => "entropy_sum",
            Column::CoherenceL1 => "coherence_l1",
        }
    }

    pub fn value(self, p: &TrajectoryPoint) -> f64 {
        let (a, r) = (&p.amplitudes, &p.record);
        match self {
            Column::T => a.t,
            Column::DaRe => a.a.re,
            Column::DaIm => a.a.im,
            Column::DbRe => a.b.re,
            Column::DbIm => a.b.im,
            Column::DcRe => a.c.re,
            Column::DcIm => a.c.im,
            Column::BathWeight => a.bath_weight,
            Column::ESx => r.e_sx,
            Column::ESy => r.e_sy,
            Column::VSx => r.v_sx,
            Column::VSy => r.v_sy,
            Column::HSx => r.h_sx,
            Column::HSy => r.h_sy,
            Column::HSz => r.h_sz,
            Column::DSx => r.d_sx,
            Column::DSy => r.d_sy,
            Column::SzExpect => r.sz_expect,
            Column::EntropySum => r.entropy_sum,
            Column::CoherenceL1 => r.coherence,
        }
    }

    /// `(t, value)` pairs of one column.
    pub fn series(self, points: &[TrajectoryPoint]) -> Vec<(f64, f64)> {
        points.iter().map(|p| (p.t(), self.value(p))).collect()
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = OutputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Column::ALL.into_iter().find(|c| c.name() == s.trim()).ok_or_else(|| OutputError::UnknownColumn(s.to_string()))
    }
}

/// Formats a value with 12 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}
