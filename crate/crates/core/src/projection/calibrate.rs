//! Calibration of the model's free parameters against reference anchors.
//!
//! The engine runs deterministic coordinate descent on weighted relative
//! residuals. A parameter that influences exactly one anchor is solved by
//! bisection on that anchor's residual; anything else takes a
//! golden-section line search over the weighted sum of squares. Sweeps
//! repeat until parameters stop moving, so a re-run on a fitted state is
//! a no-op.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::electrical::{
    energy_per_bit, margin_after_disturb, row_cycle_time, sense_margin, AccessKind,
    DisturbWorkload, OperatingPoint, TimingModel,
};
use crate::error::{ensure, Error, Result};
use crate::projection::{bit_density, stack_height};
use crate::tech::TechnologyProfile;
use crate::topology::{
    effective_bl_capacitance, hcb_pitch, sensing_bl_capacitance, ArrayConfig, RoutingTopology,
    Scheme, SelectorDevice,
};

/// Array voltage used before any calibration has run.
pub const DEFAULT_V_ARRAY: f64 = 0.6;

/// Everything the observables can see, with the calibrated quantities in
/// mutable slots. `v_array_sense` is a reporting-only per-profile sensing
/// voltage fitted by the optional profile-fit stage; ordinary evaluations
/// keep using `v_array`.
#[derive(Debug, Clone)]
pub struct ModelState {
    pub profiles: BTreeMap<String, TechnologyProfile>,
    pub base_topology: RoutingTopology,
    pub v_array: BTreeMap<String, f64>,
    pub v_array_sense: BTreeMap<String, f64>,
    pub array_efficiency: BTreeMap<String, f64>,
    pub c_sense_override: BTreeMap<String, f64>,
    pub timing: TimingModel,
    pub rh_toggles: u64,
    pub fbe_cycles: u64,
    pub refresh_window_ms: f64,
    /// Total disturb charge per refresh window (aC), split below.
    pub q_total_ac: f64,
    /// Fraction of the disturb charge attributed to row-hammer toggles.
    pub rh_fbe_split: f64,
    pub min_pitch_um: f64,
}

impl ModelState {
    pub fn profile(&self, name: &str) -> Result<&TechnologyProfile> {
        self.profiles
            .get(name)
            .ok_or_else(|| Error::UnknownProfile(name.to_string()))
    }

    pub fn v_array_for(&self, profile: &str) -> f64 {
        self.v_array.get(profile).copied().unwrap_or(DEFAULT_V_ARRAY)
    }

    fn v_sense_for(&self, profile: &str) -> f64 {
        self.v_array_sense
            .get(profile)
            .copied()
            .unwrap_or_else(|| self.v_array_for(profile))
    }

    pub fn array_efficiency_for(&self, profile: &str) -> f64 {
        self.array_efficiency.get(profile).copied().unwrap_or(1.0)
    }

    /// Specialize the shared topology for one profile and scheme. Planar
    /// profiles carry no bonding parasitics; the sensing override applies
    /// to whichever profile declares one.
    pub fn topology_for(&self, profile: &TechnologyProfile, scheme: Scheme) -> RoutingTopology {
        let mut t = self.base_topology.clone();
        t.scheme = scheme;
        t.selector = if scheme == Scheme::SelectorStrap {
            Some(
                self.base_topology
                    .selector
                    .clone()
                    .unwrap_or_else(SelectorDevice::default_igo),
            )
        } else {
            None
        };
        if !profile.is_stacked() {
            t.c_bond = 0.0;
            t.r_bond = 0.0;
            t.c_strap_wire = 0.0;
        }
        t.c_sense_override = self.c_sense_override.get(&profile.name).copied();
        t
    }

    pub fn array_config(
        &self,
        profile: &str,
        scheme: Scheme,
        n_layers: Option<u32>,
    ) -> Result<ArrayConfig> {
        let p = self.profile(profile)?;
        let layers = if p.is_stacked() { n_layers } else { None };
        if p.is_stacked() && n_layers.is_none() {
            return Err(Error::MissingLayers);
        }
        if !p.is_stacked() && n_layers.is_some() {
            return Err(Error::ExtraneousLayers);
        }
        ArrayConfig::new(
            p.clone(),
            self.topology_for(p, scheme),
            layers,
            self.array_efficiency_for(profile),
        )
    }

    pub fn operating_point(&self, profile: &str) -> Result<OperatingPoint> {
        let p = self.profile(profile)?;
        let op = OperatingPoint::for_profile(p, self.v_array_for(profile));
        op.validate()?;
        Ok(op)
    }

    fn sensing_point(&self, profile: &str) -> Result<OperatingPoint> {
        let p = self.profile(profile)?;
        let op = OperatingPoint::for_profile(p, self.v_sense_for(profile));
        op.validate()?;
        Ok(op)
    }

    /// Disturb workload with the calibrated total charge split between
    /// row-hammer and floating-body events.
    pub fn workload(&self) -> DisturbWorkload {
        let rh_charge = self.q_total_ac * self.rh_fbe_split;
        let fbe_charge = self.q_total_ac * (1.0 - self.rh_fbe_split);
        DisturbWorkload {
            rh_toggles: self.rh_toggles,
            fbe_cycles: self.fbe_cycles,
            refresh_window_ms: self.refresh_window_ms,
            q_rh: if self.rh_toggles > 0 {
                rh_charge / self.rh_toggles as f64
            } else {
                0.0
            },
            q_fbe: if self.fbe_cycles > 0 {
                fbe_charge / self.fbe_cycles as f64
            } else {
                0.0
            },
        }
    }

    pub fn metric_value(&self, point: &AnchorPoint, metric: Metric) -> Result<f64> {
        let cfg = self.array_config(&point.profile, point.scheme, point.n_layers)?;
        Ok(match metric {
            Metric::EffectiveCapacitance => effective_bl_capacitance(&cfg),
            Metric::SensingCapacitance => sensing_bl_capacitance(&cfg),
            Metric::SenseMargin => sense_margin(&cfg, &self.operating_point(&point.profile)?),
            Metric::SenseMarginProfileFit => {
                sense_margin(&cfg, &self.sensing_point(&point.profile)?)
            }
            Metric::MarginAfterDisturb => margin_after_disturb(
                &cfg,
                &self.operating_point(&point.profile)?,
                &self.workload(),
            ),
            Metric::RowCycleTime => {
                row_cycle_time(&cfg, &self.operating_point(&point.profile)?, &self.timing).total
            }
            Metric::EnergyRead => {
                energy_per_bit(&cfg, &self.operating_point(&point.profile)?, AccessKind::Read)
                    .total
            }
            Metric::EnergyWrite => {
                energy_per_bit(&cfg, &self.operating_point(&point.profile)?, AccessKind::Write)
                    .total
            }
            Metric::BitDensity => bit_density(&cfg)?,
            Metric::StackHeight => stack_height(&cfg)?,
            Metric::HcbPitch => hcb_pitch(&cfg)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    EffectiveCapacitance,
    SensingCapacitance,
    SenseMargin,
    SenseMarginProfileFit,
    MarginAfterDisturb,
    RowCycleTime,
    EnergyRead,
    EnergyWrite,
    BitDensity,
    StackHeight,
    HcbPitch,
}

/// The configuration an anchor observes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorPoint {
    pub profile: String,
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_layers: Option<u32>,
}

/// One calibration target: an observable at a configuration, its target
/// value and a weight in the least-squares objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationAnchor {
    pub name: String,
    #[serde(flatten)]
    pub point: AnchorPoint,
    pub metric: Metric,
    pub target: f64,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

/// A free parameter with its admissible interval. Names address the
/// model state: `v_array.<profile>`, `v_array_sense.<profile>`,
/// `array_efficiency.<profile>`, `c_sense_override.<profile>`, `c_bond`,
/// `c_junction`, `c_strap_wire`, `r_bond`, `timing.<factor>`, `q_total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSpec {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedParameter {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Calibration outcome: fitted values with their bounds, the relative
/// residual of every anchor, and whether the final sweep moved no
/// parameter beyond the convergence threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub parameters: BTreeMap<String, FittedParameter>,
    pub residuals: BTreeMap<String, f64>,
    pub converged: bool,
}

impl Calibration {
    pub fn merge(mut self, other: Calibration) -> Calibration {
        self.parameters.extend(other.parameters);
        self.residuals.extend(other.residuals);
        self.converged &= other.converged;
        self
    }
}

fn get_param(state: &ModelState, name: &str) -> Result<f64> {
    let invalid = || Error::Validation {
        field: "parameters".to_string(),
        message: format!("unknown free parameter `{name}`"),
    };
    if let Some(p) = name.strip_prefix("v_array_sense.") {
        state.profile(p)?;
        return Ok(state.v_sense_for(p));
    }
    if let Some(p) = name.strip_prefix("v_array.") {
        state.profile(p)?;
        return Ok(state.v_array_for(p));
    }
    if let Some(p) = name.strip_prefix("array_efficiency.") {
        state.profile(p)?;
        return Ok(state.array_efficiency_for(p));
    }
    if let Some(p) = name.strip_prefix("c_sense_override.") {
        state.profile(p)?;
        return Ok(state.c_sense_override.get(p).copied().unwrap_or(0.0));
    }
    match name {
        "c_bond" => Ok(state.base_topology.c_bond),
        "r_bond" => Ok(state.base_topology.r_bond),
        "c_strap_wire" => Ok(state.base_topology.c_strap_wire),
        "c_junction" => Ok(state.base_topology.junction_capacitance()),
        "timing.k_wl" => Ok(state.timing.k_wl),
        "timing.k_bl" => Ok(state.timing.k_bl),
        "timing.t_sense" => Ok(state.timing.t_sense),
        "timing.k_restore" => Ok(state.timing.k_restore),
        "timing.t_overhead" => Ok(state.timing.t_overhead),
        "q_total" => Ok(state.q_total_ac),
        _ => Err(invalid()),
    }
}

fn set_param(state: &mut ModelState, name: &str, value: f64) -> Result<()> {
    let invalid = || Error::Validation {
        field: "parameters".to_string(),
        message: format!("unknown free parameter `{name}`"),
    };
    if let Some(p) = name.strip_prefix("v_array_sense.") {
        state.profile(p)?;
        state.v_array_sense.insert(p.to_string(), value);
        return Ok(());
    }
    if let Some(p) = name.strip_prefix("v_array.") {
        state.profile(p)?;
        state.v_array.insert(p.to_string(), value);
        return Ok(());
    }
    if let Some(p) = name.strip_prefix("array_efficiency.") {
        state.profile(p)?;
        state.array_efficiency.insert(p.to_string(), value);
        return Ok(());
    }
    if let Some(p) = name.strip_prefix("c_sense_override.") {
        state.profile(p)?;
        state.c_sense_override.insert(p.to_string(), value);
        return Ok(());
    }
    match name {
        "c_bond" => state.base_topology.c_bond = value,
        "r_bond" => state.base_topology.r_bond = value,
        "c_strap_wire" => state.base_topology.c_strap_wire = value,
        "c_junction" => {
            state
                .base_topology
                .selector
                .get_or_insert_with(SelectorDevice::default_igo)
                .c_junction = value
        }
        "timing.k_wl" => state.timing.k_wl = value,
        "timing.k_bl" => state.timing.k_bl = value,
        "timing.t_sense" => state.timing.t_sense = value,
        "timing.k_restore" => state.timing.k_restore = value,
        "timing.t_overhead" => state.timing.t_overhead = value,
        "q_total" => state.q_total_ac = value,
        _ => return Err(invalid()),
    }
    Ok(())
}

/// Reported convergence threshold: the relative step below which a sweep
/// counts as converged.
const CONVERGENCE_STEP: f64 = 1e-6;
/// The engine keeps polishing well past the reported threshold so that a
/// re-run on its own output does not move parameters.
const POLISH_STEP: f64 = 1e-13;
const MAX_SWEEPS: usize = 200;
const BISECTION_REL_TOL: f64 = 1e-12;

fn weighted_sse(
    state: &ModelState,
    anchors: &[CalibrationAnchor],
    subset: &BTreeSet<usize>,
) -> Result<f64> {
    let mut sse = 0.0;
    for (i, a) in anchors.iter().enumerate() {
        if !subset.contains(&i) {
            continue;
        }
        let obs = state.metric_value(&a.point, a.metric)?;
        let rel = (obs - a.target) / a.target.abs().max(1e-12);
        sse += (a.weight * rel).powi(2);
    }
    Ok(sse)
}

/// Golden-section minimization of the weighted SSE along one parameter.
/// The incumbent value only moves when the candidate strictly improves
/// the objective, which keeps re-runs on a fitted state bit-identical
/// even where irreducible residuals leave the objective numerically
/// flat around the optimum.
fn golden_minimize(
    state: &mut ModelState,
    name: &str,
    incumbent: f64,
    lower: f64,
    upper: f64,
    anchors: &[CalibrationAnchor],
    subset: &BTreeSet<usize>,
) -> Result<f64> {
    const PHI: f64 = 0.618_033_988_749_894_8;
    let eval = |state: &mut ModelState, x: f64| -> Result<f64> {
        set_param(state, name, x)?;
        weighted_sse(state, anchors, subset)
    };
    let (mut a, mut b) = (lower, upper);
    let mut x1 = b - PHI * (b - a);
    let mut x2 = a + PHI * (b - a);
    let mut f1 = eval(state, x1)?;
    let mut f2 = eval(state, x2)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (a.abs().max(b.abs()).max(1.0)) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - PHI * (b - a);
            f1 = eval(state, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + PHI * (b - a);
            f2 = eval(state, x2)?;
        }
    }
    let candidate = 0.5 * (a + b);
    let f_candidate = eval(state, candidate)?;
    let f_incumbent = eval(state, incumbent)?;
    if f_candidate < f_incumbent {
        set_param(state, name, candidate)?;
        Ok(candidate)
    } else {
        set_param(state, name, incumbent)?;
        Ok(incumbent)
    }
}

/// Bisection on the single sensitive anchor's residual. Falls back to
/// `None` when the bracket does not change sign.
fn bisect_root(
    state: &mut ModelState,
    name: &str,
    lower: f64,
    upper: f64,
    anchor: &CalibrationAnchor,
) -> Result<Option<f64>> {
    let eval = |state: &mut ModelState, x: f64| -> Result<f64> {
        set_param(state, name, x)?;
        Ok(state.metric_value(&anchor.point, anchor.metric)? - anchor.target)
    };
    let f_lo = eval(state, lower)?;
    let f_hi = eval(state, upper)?;
    if f_lo == 0.0 {
        set_param(state, name, lower)?;
        return Ok(Some(lower));
    }
    if f_hi == 0.0 {
        set_param(state, name, upper)?;
        return Ok(Some(upper));
    }
    if f_lo.signum() == f_hi.signum() {
        return Ok(None);
    }
    let (mut a, mut b, mut fa) = (lower, upper, f_lo);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = eval(state, mid)?;
        if fm == 0.0 {
            set_param(state, name, mid)?;
            return Ok(Some(mid));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (b - a).abs() <= BISECTION_REL_TOL * a.abs().max(b.abs()).max(1.0) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    set_param(state, name, x)?;
    Ok(Some(x))
}

/// Fit the free parameters to the anchors by coordinate descent, leaving
/// the fitted values in `state`. An empty parameter list just reports
/// residuals. Every parameter must influence at least one anchor
/// (checked by finite differences); a parameter that fails the check is
/// an error, never silently skipped.
pub fn calibrate(
    state: &mut ModelState,
    params: &[ParameterSpec],
    anchors: &[CalibrationAnchor],
) -> Result<Calibration> {
    for a in anchors {
        ensure(a.target.is_finite(), &a.name, "anchor target must be finite")?;
        ensure(a.weight >= 0.0, &a.name, "anchor weight must be >= 0")?;
    }
    for p in params {
        ensure(
            p.lower < p.upper,
            &p.name,
            "parameter bounds must satisfy lower < upper",
        )?;
    }
    if !params.is_empty() {
        ensure(!anchors.is_empty(), "anchors", "need at least one anchor")?;
    }

    // Clamp starting values into bounds (also validates the names).
    for p in params {
        let cur = get_param(state, &p.name)?;
        set_param(state, &p.name, cur.clamp(p.lower, p.upper))?;
    }

    // Finite-difference sensitivity: which anchors react to which
    // parameter. The sets are structural and computed once.
    let mut sensitive: Vec<BTreeSet<usize>> = Vec::with_capacity(params.len());
    for p in params {
        let x0 = get_param(state, &p.name)?;
        let delta = 1e-3 * (p.upper - p.lower);
        let probe = if x0 + delta <= p.upper { x0 + delta } else { x0 - delta };
        let base: Vec<f64> = anchors
            .iter()
            .map(|a| state.metric_value(&a.point, a.metric))
            .collect::<Result<_>>()?;
        set_param(state, &p.name, probe)?;
        let moved: Vec<f64> = anchors
            .iter()
            .map(|a| state.metric_value(&a.point, a.metric))
            .collect::<Result<_>>()?;
        set_param(state, &p.name, x0)?;
        let mut set = BTreeSet::new();
        for (i, (b, m)) in base.iter().zip(&moved).enumerate() {
            let scale = b.abs().max(anchors[i].target.abs()).max(1e-12);
            if (m - b).abs() > 1e-10 * scale {
                set.insert(i);
            }
        }
        if set.is_empty() {
            return Err(Error::InsensitiveParameter(p.name.clone()));
        }
        sensitive.push(set);
    }

    let mut last_step = 0.0;
    for _sweep in 0..MAX_SWEEPS {
        let mut max_step: f64 = 0.0;
        for (i, p) in params.iter().enumerate() {
            let old = get_param(state, &p.name)?;
            let subset = &sensitive[i];
            let new = if subset.len() == 1 {
                let anchor = &anchors[*subset.iter().next().unwrap()];
                match bisect_root(state, &p.name, p.lower, p.upper, anchor)? {
                    Some(x) => x,
                    None => {
                        golden_minimize(state, &p.name, old, p.lower, p.upper, anchors, subset)?
                    }
                }
            } else {
                golden_minimize(state, &p.name, old, p.lower, p.upper, anchors, subset)?
            };
            let step = (new - old).abs() / old.abs().max(1e-12);
            max_step = max_step.max(step);
        }
        last_step = max_step;
        if max_step < POLISH_STEP {
            break;
        }
    }

    let mut parameters = BTreeMap::new();
    for p in params {
        parameters.insert(
            p.name.clone(),
            FittedParameter {
                value: get_param(state, &p.name)?,
                lower: p.lower,
                upper: p.upper,
            },
        );
    }
    let mut residuals = BTreeMap::new();
    for a in anchors {
        let obs = state.metric_value(&a.point, a.metric)?;
        residuals.insert(a.name.clone(), (obs - a.target) / a.target.abs().max(1e-12));
    }
    Ok(Calibration {
        parameters,
        residuals,
        converged: params.is_empty() || last_step < CONVERGENCE_STEP,
    })
}
