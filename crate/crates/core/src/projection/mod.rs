//! Scaling projections and multi-configuration comparison: bit density,
//! stack height, the layer count needed for a density target, layer
//! sweeps and side-by-side metric tables.

pub mod calibrate;

use crate::electrical::{DisturbWorkload, OperatingPoint, TimingModel};
use crate::error::{ensure, Error, Result};
use crate::report::{evaluate, fmt_sig6, EvaluationReport};
use crate::tech::TechnologyProfile;
use crate::topology::{ArrayConfig, RoutingTopology};
use crate::units::bits_per_nm2_to_gb_per_mm2;

/// Reference bit density of the planar baseline node (Gb/mm²).
pub const BASELINE_REFERENCE_DENSITY_GB_MM2: f64 = 0.433;

/// Bit density (Gb/mm²): one bit per cell footprint per layer, scaled by
/// the live-cell area fraction. Planar baselines use
/// [`BASELINE_REFERENCE_DENSITY_GB_MM2`] instead.
pub fn bit_density(config: &ArrayConfig) -> Result<f64> {
    if !config.profile.is_stacked() {
        return Err(Error::RequiresStacked { op: "bit_density" });
    }
    let g = &config.profile.geometry;
    let bits_per_nm2 = config.array_efficiency * config.layers() as f64 / (g.x_pitch * g.y_pitch);
    Ok(bits_per_nm2_to_gb_per_mm2(bits_per_nm2))
}

/// Total cell stack height (μm).
pub fn stack_height(config: &ArrayConfig) -> Result<f64> {
    if !config.profile.is_stacked() {
        return Err(Error::RequiresStacked { op: "stack_height" });
    }
    let z = config.profile.geometry.z_pitch.ok_or_else(|| Error::Validation {
        field: "z_pitch".to_string(),
        message: "stacked profile is missing its per-layer height".to_string(),
    })?;
    Ok(config.layers() as f64 * z * 1e-3)
}

/// Smallest layer count whose density reaches `target_gb_mm2`.
pub fn layers_for_density(
    profile: &TechnologyProfile,
    array_efficiency: f64,
    target_gb_mm2: f64,
) -> Result<u32> {
    if !profile.is_stacked() {
        return Err(Error::RequiresStacked {
            op: "layers_for_density",
        });
    }
    ensure(target_gb_mm2 > 0.0, "target_density", "must be > 0")?;
    ensure(
        array_efficiency > 0.0 && array_efficiency <= 1.0,
        "array_efficiency",
        "must lie in (0, 1]",
    )?;
    let g = &profile.geometry;
    let per_layer = bits_per_nm2_to_gb_per_mm2(array_efficiency / (g.x_pitch * g.y_pitch));
    // Guard the exact-inverse case against rounding overshoot before ceil.
    let exact = target_gb_mm2 / per_layer;
    Ok((exact * (1.0 - 1e-9)).ceil().max(1.0) as u32)
}

/// Evaluate one report per layer count over an inclusive range.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    profile: &TechnologyProfile,
    topology: &RoutingTopology,
    op: &OperatingPoint,
    workload: &DisturbWorkload,
    timing: &TimingModel,
    layers_from: u32,
    layers_to: u32,
    layers_step: u32,
    array_efficiency: f64,
    min_pitch_um: f64,
    provenance: &[String],
) -> Result<Vec<EvaluationReport>> {
    if layers_from == 0 || layers_to < layers_from || layers_step == 0 {
        return Err(Error::EmptyLayerRange);
    }
    let mut out = Vec::new();
    let mut n = layers_from;
    while n <= layers_to {
        let cfg = ArrayConfig::new(
            profile.clone(),
            topology.clone(),
            Some(n),
            array_efficiency,
        )?;
        out.push(evaluate(
            &cfg,
            op,
            workload,
            timing,
            min_pitch_um,
            provenance.to_vec(),
        )?);
        n = match n.checked_add(layers_step) {
            Some(next) => next,
            None => break,
        };
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub metric: &'static str,
    pub values: Vec<Option<f64>>,
    /// Ratio against the first (baseline) column; index 0 is skipped.
    pub ratios: Vec<Option<f64>>,
}

/// Side-by-side metric table over several evaluated configurations, with
/// per-column ratios against the first configuration.
#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub columns: Vec<String>,
    pub rows: Vec<CompareRow>,
}

fn metric_rows(r: &EvaluationReport) -> Vec<(&'static str, Option<f64>)> {
    vec![
        ("n_layers", r.n_layers.map(|n| n as f64)),
        ("cells_per_bl", Some(r.cells_per_bl as f64)),
        ("bit_density_gb_mm2", Some(r.bit_density)),
        ("stack_height_um", r.stack_height),
        ("c_bl_effective_ff", Some(r.c_bl_effective)),
        ("c_bl_sensing_ff", Some(r.c_bl_sensing)),
        ("sense_margin_mv", Some(r.sense_margin)),
        ("margin_after_disturb_mv", Some(r.margin_after_disturb)),
        ("t_rc_ns", Some(r.t_rc)),
        ("e_read_fj", Some(r.e_read.total)),
        ("e_write_fj", Some(r.e_write.total)),
        ("hcb_pitch_um", r.hcb_pitch),
        ("blsa_area_um2", r.blsa_area),
    ]
}

pub fn compare_report(reports: &[EvaluationReport]) -> Result<ComparisonTable> {
    if reports.len() < 2 {
        return Err(Error::ComparisonTooSmall);
    }
    let columns: Vec<String> = reports
        .iter()
        .map(|r| match r.n_layers {
            Some(n) => format!("{}@{}L/{}", r.profile, n, r.scheme),
            None => format!("{}/{}", r.profile, r.scheme),
        })
        .collect();
    let metric_names: Vec<&'static str> = metric_rows(&reports[0])
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    let per_report: Vec<Vec<(&'static str, Option<f64>)>> =
        reports.iter().map(metric_rows).collect();

    let mut rows = Vec::new();
    for (i, name) in metric_names.iter().enumerate() {
        let values: Vec<Option<f64>> = per_report.iter().map(|m| m[i].1).collect();
        let base = values[0];
        let ratios: Vec<Option<f64>> = values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k == 0 {
                    None
                } else {
                    match (base, v) {
                        (Some(b), Some(x)) if b != 0.0 => Some(x / b),
                        _ => None,
                    }
                }
            })
            .collect();
        rows.push(CompareRow {
            metric: name,
            values,
            ratios,
        });
    }
    Ok(ComparisonTable { columns, rows })
}

impl ComparisonTable {
    fn cell(v: Option<f64>) -> String {
        v.map(fmt_sig6).unwrap_or_default()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric");
        for (i, col) in self.columns.iter().enumerate() {
            out.push_str(&format!(",{col}"));
            if i > 0 {
                out.push_str(&format!(",{col}_vs_baseline"));
            }
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(row.metric);
            for (i, v) in row.values.iter().enumerate() {
                out.push(',');
                out.push_str(&Self::cell(*v));
                if i > 0 {
                    out.push(',');
                    out.push_str(&Self::cell(row.ratios[i]));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn to_text(&self) -> String {
        let mut headers = vec!["metric".to_string()];
        for (i, col) in self.columns.iter().enumerate() {
            headers.push(col.clone());
            if i > 0 {
                headers.push("vs_base".to_string());
            }
        }
        let mut grid: Vec<Vec<String>> = vec![headers];
        for row in &self.rows {
            let mut line = vec![row.metric.to_string()];
            for (i, v) in row.values.iter().enumerate() {
                line.push(Self::cell(*v));
                if i > 0 {
                    line.push(Self::cell(row.ratios[i]));
                }
            }
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &grid {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{:>width$}", cell, width = widths[c]));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
