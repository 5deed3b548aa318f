//! Evaluation reports: every derived metric for one configuration, with
//! deterministic 6-significant-digit emission as JSON or CSV.
//!
//! The evaluator only calls the underlying module operations; nothing is
//! recomputed or post-processed here, so every reported number is
//! reproducible from the echoed configuration.

use serde_json::{json, Value};

use crate::electrical::{
    energy_per_bit, margin_after_disturb, row_cycle_time, sense_margin, AccessKind,
    DisturbWorkload, EnergyBreakdown, OperatingPoint, RowCycleBreakdown, TimingModel,
};
use crate::error::{ensure, Result};
use crate::projection::{bit_density, stack_height, BASELINE_REFERENCE_DENSITY_GB_MM2};
use crate::tech::cells_per_bl;
use crate::topology::{
    blsa_area, effective_bl_capacitance, feasibility, hcb_pitch, sensing_bl_capacitance,
    ArrayConfig, Scheme, BASELINE_BLSA_AREA_UM2,
};

/// Round to six significant digits. All emitted numbers pass through
/// here, which keeps JSON and CSV emissions byte-stable and mutually
/// consistent.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(5 - exp);
    (x * factor).round() / factor
}

pub fn fmt_sig6(x: f64) -> String {
    format!("{}", round_sig6(x))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig6).unwrap_or_default()
}

fn json_num(x: f64) -> Value {
    json!(round_sig6(x))
}

fn json_opt(x: Option<f64>) -> Value {
    match x {
        Some(v) => json_num(v),
        None => Value::Null,
    }
}

/// All derived metrics for one configuration.
#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub profile: String,
    pub scheme: Scheme,
    pub n_layers: Option<u32>,
    pub cells_per_bl: u32,
    pub array_efficiency: f64,
    /// Structural effective bitline capacitance (fF).
    pub c_bl_effective: f64,
    /// Capacitance used by the sensing path (fF); differs from the
    /// structural value only under a calibrated override.
    pub c_bl_sensing: f64,
    pub sense_margin: f64,
    pub margin_after_disturb: f64,
    pub t_rc: f64,
    pub stages: RowCycleBreakdown,
    pub e_read: EnergyBreakdown,
    pub e_write: EnergyBreakdown,
    pub hcb_pitch: Option<f64>,
    pub blsa_area: Option<f64>,
    pub bit_density: f64,
    pub stack_height: Option<f64>,
    pub feasible: Option<bool>,
    pub pitch_margin: Option<f64>,
    /// Which parameters were fitted rather than taken from the tables.
    pub provenance: Vec<String>,
}

impl EvaluationReport {
    pub fn validate(&self) -> Result<()> {
        let nums = [
            self.c_bl_effective,
            self.c_bl_sensing,
            self.sense_margin,
            self.margin_after_disturb,
            self.t_rc,
            self.e_read.total,
            self.e_write.total,
            self.bit_density,
        ];
        for (i, x) in nums.iter().enumerate() {
            ensure(x.is_finite(), "report", &format!("field {i} is not finite"))?;
        }
        let sum = self.stages.wordline
            + self.stages.bitline
            + self.stages.sense
            + self.stages.restore
            + self.stages.overhead;
        ensure(
            (sum - self.t_rc).abs() <= 1e-12 * self.t_rc.max(1.0),
            "report",
            "stage breakdown does not sum to t_rc",
        )?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "profile": self.profile,
            "scheme": self.scheme.name(),
            "n_layers": self.n_layers,
            "cells_per_bl": self.cells_per_bl,
            "array_efficiency": json_num(self.array_efficiency),
            "c_bl_effective_ff": json_num(self.c_bl_effective),
            "c_bl_sensing_ff": json_num(self.c_bl_sensing),
            "sense_margin_mv": json_num(self.sense_margin),
            "margin_after_disturb_mv": json_num(self.margin_after_disturb),
            "t_rc_ns": json_num(self.t_rc),
            "t_rc_stages": {
                "wordline_ns": json_num(self.stages.wordline),
                "bitline_ns": json_num(self.stages.bitline),
                "sense_ns": json_num(self.stages.sense),
                "restore_ns": json_num(self.stages.restore),
                "overhead_ns": json_num(self.stages.overhead),
            },
            "e_read_fj": json_num(self.e_read.total),
            "e_write_fj": json_num(self.e_write.total),
            "e_read_parts": {
                "bitline_fj": json_num(self.e_read.bitline),
                "wordline_share_fj": json_num(self.e_read.wordline_share),
            },
            "e_write_parts": {
                "bitline_fj": json_num(self.e_write.bitline),
                "wordline_share_fj": json_num(self.e_write.wordline_share),
            },
            "hcb_pitch_um": json_opt(self.hcb_pitch),
            "blsa_area_um2": json_opt(self.blsa_area),
            "bit_density_gb_mm2": json_num(self.bit_density),
            "stack_height_um": json_opt(self.stack_height),
            "feasible": self.feasible,
            "pitch_margin_um": json_opt(self.pitch_margin),
            "provenance": self.provenance,
        })
    }

    pub const CSV_HEADER: &'static str = "profile,scheme,n_layers,cells_per_bl,bit_density_gb_mm2,\
stack_height_um,c_bl_effective_ff,c_bl_sensing_ff,sense_margin_mv,margin_after_disturb_mv,\
t_rc_ns,t_wl_ns,t_bl_ns,t_sense_ns,t_restore_ns,t_overhead_ns,e_read_fj,e_write_fj,\
e_wl_share_fj,hcb_pitch_um,blsa_area_um2,feasible,pitch_margin_um";

    pub fn csv_row(&self) -> String {
        let cols = [
            self.profile.clone(),
            self.scheme.name().to_string(),
            self.n_layers.map(|n| n.to_string()).unwrap_or_default(),
            self.cells_per_bl.to_string(),
            fmt_sig6(self.bit_density),
            fmt_opt(self.stack_height),
            fmt_sig6(self.c_bl_effective),
            fmt_sig6(self.c_bl_sensing),
            fmt_sig6(self.sense_margin),
            fmt_sig6(self.margin_after_disturb),
            fmt_sig6(self.t_rc),
            fmt_sig6(self.stages.wordline),
            fmt_sig6(self.stages.bitline),
            fmt_sig6(self.stages.sense),
            fmt_sig6(self.stages.restore),
            fmt_sig6(self.stages.overhead),
            fmt_sig6(self.e_read.total),
            fmt_sig6(self.e_write.total),
            fmt_sig6(self.e_write.wordline_share),
            fmt_opt(self.hcb_pitch),
            fmt_opt(self.blsa_area),
            self.feasible.map(|f| f.to_string()).unwrap_or_default(),
            fmt_opt(self.pitch_margin),
        ];
        cols.join(",")
    }
}

pub fn reports_to_csv(reports: &[EvaluationReport]) -> String {
    let mut out = String::from(EvaluationReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Evaluate every metric for one configuration. Geometry fields that do
/// not apply (bond pitch for the planar baseline, sense-amp area outside
/// the strap family) come back as `None`; the planar baseline reports its
/// stored reference density and sense-amp area.
pub fn evaluate(
    config: &ArrayConfig,
    op: &OperatingPoint,
    workload: &DisturbWorkload,
    timing: &TimingModel,
    min_pitch_um: f64,
    provenance: Vec<String>,
) -> Result<EvaluationReport> {
    config.validate()?;
    op.validate()?;
    workload.validate()?;
    timing.validate()?;

    let stages = row_cycle_time(config, op, timing);
    let stacked = config.profile.is_stacked();

    let (pitch, area, density, height, feas) = if stacked {
        let f = feasibility(config, min_pitch_um)?;
        (
            Some(hcb_pitch(config)?),
            if config.topology.scheme.is_strap_family() {
                Some(blsa_area(config)?)
            } else {
                None
            },
            bit_density(config)?,
            Some(stack_height(config)?),
            Some(f),
        )
    } else {
        (
            None,
            Some(BASELINE_BLSA_AREA_UM2),
            BASELINE_REFERENCE_DENSITY_GB_MM2,
            None,
            None,
        )
    };

    let report = EvaluationReport {
        profile: config.profile.name.clone(),
        scheme: config.topology.scheme,
        n_layers: config.n_layers,
        cells_per_bl: cells_per_bl(&config.profile, config.n_layers)?,
        array_efficiency: config.array_efficiency,
        c_bl_effective: effective_bl_capacitance(config),
        c_bl_sensing: sensing_bl_capacitance(config),
        sense_margin: sense_margin(config, op),
        margin_after_disturb: margin_after_disturb(config, op, workload),
        t_rc: stages.total,
        stages,
        e_read: energy_per_bit(config, op, AccessKind::Read),
        e_write: energy_per_bit(config, op, AccessKind::Write),
        hcb_pitch: pitch,
        blsa_area: area,
        bit_density: density,
        stack_height: height,
        feasible: feas.map(|f| f.feasible),
        pitch_margin: feas.map(|f| f.pitch_margin),
        provenance,
    };
    report.validate()?;
    Ok(report)
}
