//! Snapshot of every figure line on a coarse grid.
//!
//! Regenerate with `VSQUEEZE_BLESS=1 cargo test --test golden`.

use std::path::PathBuf;

use vsqueeze::output::{read_csv, write_csv, Column};
use vsqueeze::runner::{figure_preset, sweep, FigureId};

/// Relative tolerance; the files carry 12 significant digits.
const REL_TOL: f64 = 1e-10;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

#[test]
fn figure_lines_match_snapshots() {
    let bless = std::env::var_os("VSQUEEZE_BLESS").is_some();
    let scratch = tempfile::tempdir().unwrap();
    let mut compared = 0;
    for id in FigureId::ALL {
        let preset = figure_preset(id);
        let coarse_dt = preset.base.t_max / 100.0;
        let base = preset.base.clone().with_grid(preset.base.t_max, coarse_dt);
        for cell in sweep(&base, &preset.axes).unwrap() {
            let name = format!("{id}_{}.csv", cell.label());
            let golden = golden_dir().join(&name);
            if bless {
                std::fs::create_dir_all(golden_dir()).unwrap();
                write_csv(&cell.points, &[], &golden).unwrap();
                continue;
            }
            let fresh = scratch.path().join(&name);
            write_csv(&cell.points, &[], &fresh).unwrap();
            let expected = read_csv(&golden).unwrap_or_else(|e| panic!("{e}; bless to create"));
            let actual = read_csv(&fresh).unwrap();
            assert_eq!(actual.columns, Column::ALL);
            assert_eq!(actual.rows.len(), expected.rows.len(), "{name}");
            for (r, (a, e)) in actual.rows.iter().zip(&expected.rows).enumerate() {
                for (c, (x, y)) in a.iter().zip(e).enumerate() {
                    let scale = x.abs().max(y.abs()).max(1e-300);
                    assert!(
                        (x - y).abs() <= REL_TOL * scale || (x - y).abs() < 1e-15,
                        "{name} row {r} column {}: {x} vs {y}",
                        Column::ALL[c]
                    );
                }
            }
            compared += 1;
        }
    }
    if !bless {
        assert_eq!(compared, 22);
    }
}
