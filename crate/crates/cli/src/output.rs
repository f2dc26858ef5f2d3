//! Dataset serialization: CSV and JSON with a fixed column schema, plus an
//! optional minimal SVG render.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// The fixed partner-potential schema: x, V, Vt, psi, psi2.
pub struct PartnerDataset {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub vt: Vec<f64>,
    pub psi: Vec<f64>,
    pub psi2: Vec<f64>,
    pub metadata: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Default output directory: $DARBOUX_OUT_DIR if set, else the working
/// directory.
pub fn out_dir() -> PathBuf {
    std::env::var_os("DARBOUX_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

pub fn resolve_output(explicit: Option<&Path>, default_name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => out_dir().join(default_name),
    }
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(std::io::BufWriter::new(f))
}

impl PartnerDataset {
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(path),
            Format::Json => self.write_json(path),
        }
    }

    fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = create(path)?;
        writeln!(w, "x,V,Vt,psi,psi2")?;
        for i in 0..self.x.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.x[i], self.v[i], self.vt[i], self.psi[i], self.psi2[i]
            )?;
        }
        Ok(())
    }

    fn write_json(&self, path: &Path) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            metadata: &'a serde_json::Value,
            data: Data<'a>,
        }
        #[derive(Serialize)]
        struct Data<'a> {
            x: &'a [f64],
            #[serde(rename = "V")]
            v: &'a [f64],
            #[serde(rename = "Vt")]
            vt: &'a [f64],
            psi: &'a [f64],
            psi2: &'a [f64],
        }
        let doc = Doc {
            metadata: &self.metadata,
            data: Data {
                x: &self.x,
                v: &self.v,
                vt: &self.vt,
                psi: &self.psi,
                psi2: &self.psi2,
            },
        };
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        Ok(())
    }

    /// Minimal static render: V and Vt as polylines.
    pub fn write_svg(&self, path: &Path) -> Result<()> {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const PAD: f64 = 50.0;
        let (x0, x1) = (self.x[0], self.x[self.x.len() - 1]);
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for v in self.v.iter().chain(&self.vt) {
            y0 = y0.min(*v);
            y1 = y1.max(*v);
        }
        if y1 - y0 < 1e-12 {
            y1 = y0 + 1.0;
        }
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let polyline = |ys: &[f64]| -> String {
            self.x
                .iter()
                .zip(ys)
                .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut w = create(path)?;
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        )?;
        writeln!(w, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
        writeln!(
            w,
            r##"<polyline points="{}" fill="none" stroke="#888" stroke-width="1"/>"##,
            polyline(&self.v)
        )?;
        writeln!(
            w,
            r##"<polyline points="{}" fill="none" stroke="#c33" stroke-width="1.5"/>"##,
            polyline(&self.vt)
        )?;
        writeln!(
            w,
            r#"<text x="{}" y="20" font-family="monospace" font-size="12">V (grey), partner (red); x in [{x0:.3}, {x1:.3}]</text>"#,
            PAD
        )?;
        writeln!(w, "</svg>")?;
        Ok(())
    }
}

/// Rows of a D-scan.
pub struct ScanDataset {
    pub rows: Vec<(f64, bool, Option<f64>)>,
    pub metadata: serde_json::Value,
}

impl ScanDataset {
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = create(path)?;
                writeln!(w, "D,nonsingular,crossing")?;
                for (d, singular, crossing) in &self.rows {
                    let c = crossing
                        .map(|x| format!("{x:.16e}"))
                        .unwrap_or_default();
                    writeln!(w, "{:.16e},{},{}", d, u8::from(!singular), c)?;
                }
                Ok(())
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Row {
                    #[serde(rename = "D")]
                    d: f64,
                    nonsingular: bool,
                    crossing: Option<f64>,
                }
                let doc = serde_json::json!({
                    "metadata": self.metadata,
                    "data": self.rows.iter().map(|&(d, singular, crossing)| Row {
                        d,
                        nonsingular: !singular,
                        crossing,
                    }).collect::<Vec<_>>(),
                });
                let mut w = create(path)?;
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}

/// Band-edge comparison rows.
pub struct BandsDataset {
    pub rows: Vec<(String, f64, f64)>, // label, analytic, numeric
    pub metadata: serde_json::Value,
}

impl BandsDataset {
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = create(path)?;
                writeln!(w, "edge,analytic,numeric,discrepancy")?;
                for (label, a, n) in &self.rows {
                    writeln!(w, "{label},{a:.16e},{n:.16e},{:.16e}", (a - n).abs())?;
                }
                Ok(())
            }
            Format::Json => {
                let doc = serde_json::json!({
                    "metadata": self.metadata,
                    "data": self.rows.iter().map(|(label, a, n)| serde_json::json!({
                        "edge": label,
                        "analytic": a,
                        "numeric": n,
                        "discrepancy": (a - n).abs(),
                    })).collect::<Vec<_>>(),
                });
                let mut w = create(path)?;
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}
