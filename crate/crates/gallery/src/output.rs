//! Files written by every command.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use fractal_conjugacy::measure::Report;
use fractal_conjugacy::raster::Raster;

/// Comment lines identifying the invocation.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub command: String,
}

impl Provenance {
    pub fn from_args() -> Self {
        let args: Vec<String> = std::env::args().skip(1).collect();
        Self {
            command: format!("fractal-gallery {}", args.join(" ")),
        }
    }

    pub fn stamp(&self, raster: Raster, fields: &[(&str, String)]) -> Raster {
        let mut r = raster.with_comment(format!("command: {}", self.command));
        for (k, v) in fields {
            r = r.with_comment(format!("{k}: {v}"));
        }
        r
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn write_raster(path: &Path, raster: &Raster) -> Result<()> {
    let mut w = create(path)?;
    raster.write(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    let mut w = create(path)?;
    report.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

/// CSV with a header row and one row per record.
pub fn write_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}
