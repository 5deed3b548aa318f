//! Electrical figures of merit: charge-sharing sense margin, disturb
//! losses, a staged row-cycle-time model and per-bit access energy.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::tech::TechnologyProfile;
use crate::topology::{effective_bl_capacitance, sensing_bl_capacitance, ArrayConfig};
use crate::units::kohm_ff_to_ns;

/// 50% delay coefficient for a distributed RC line driven from one end
/// (0.69 would be the single-lump value).
pub const ELMORE_DISTRIBUTED: f64 = 0.38;

/// Array-internal voltage levels for one evaluation. The bitline
/// precharge sits at `v_array / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingPoint {
    /// Internal array swing (V); a calibrated quantity, not a table value.
    pub v_array: f64,
    /// Wordline overdrive (V), taken from the profile.
    pub v_pp: f64,
    /// Wordline low level (V), taken from the profile.
    pub v_bb_wl: f64,
}

impl OperatingPoint {
    pub fn for_profile(profile: &TechnologyProfile, v_array: f64) -> Self {
        OperatingPoint {
            v_array,
            v_pp: profile.transistor.v_pp,
            v_bb_wl: profile.transistor.v_bb_wl,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.v_array > 0.0, "v_array", "must be > 0")?;
        ensure(self.v_pp >= self.v_array, "v_pp", "must be >= v_array")?;
        Ok(())
    }
}

/// Aggregate disturb activity per refresh window: row-hammer toggles on
/// neighbouring wordlines and floating-body events from row cycling, each
/// with a per-event charge loss (aC).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbWorkload {
    pub rh_toggles: u64,
    pub fbe_cycles: u64,
    pub refresh_window_ms: f64,
    pub q_rh: f64,
    pub q_fbe: f64,
}

impl Default for DisturbWorkload {
    fn default() -> Self {
        DisturbWorkload {
            rh_toggles: 10_000,
            fbe_cycles: 1_500_000,
            refresh_window_ms: 64.0,
            q_rh: 0.0,
            q_fbe: 0.0,
        }
    }
}

impl DisturbWorkload {
    pub fn validate(&self) -> Result<()> {
        ensure(self.refresh_window_ms > 0.0, "refresh_window_ms", "must be > 0")?;
        ensure(self.q_rh >= 0.0, "q_rh", "must be >= 0")?;
        ensure(self.q_fbe >= 0.0, "q_fbe", "must be >= 0")?;
        Ok(())
    }

    /// Total charge lost per refresh window (aC).
    pub fn total_charge_ac(&self) -> f64 {
        self.rh_toggles as f64 * self.q_rh + self.fbe_cycles as f64 * self.q_fbe
    }
}

/// Stage factors decomposing the row cycle time. The decomposition is a
/// modelling device: one shared set of factors is fitted to the planar
/// baseline and reused unchanged for the stacked nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingModel {
    pub k_wl: f64,
    pub k_bl: f64,
    /// Fixed sense-amplifier latency (ns).
    pub t_sense: f64,
    pub k_restore: f64,
    /// Fixed command/precharge overhead (ns).
    pub t_overhead: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        TimingModel {
            k_wl: 2.0,
            k_bl: 1.0,
            t_sense: 2.0,
            k_restore: 10.0,
            t_overhead: 2.0,
        }
    }
}

impl TimingModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k_wl", self.k_wl),
            ("k_bl", self.k_bl),
            ("t_sense", self.t_sense),
            ("k_restore", self.k_restore),
            ("t_overhead", self.t_overhead),
        ] {
            ensure(v >= 0.0, name, "must be >= 0")?;
        }
        Ok(())
    }
}

/// Charge-sharing voltage developed on the bitline (mV):
/// ΔV = (v_array/2) · cs / (cs + C_eff).
pub fn sense_margin(config: &ArrayConfig, op: &OperatingPoint) -> f64 {
    let cs = config.profile.cs;
    let c_eff = sensing_bl_capacitance(config);
    1000.0 * (op.v_array / 2.0) * cs / (cs + c_eff)
}

/// Disturb-induced margin loss at the sense node (mV): the window's
/// total charge loss over the total sensing capacitance (aC/fF = mV).
pub fn disturb_margin_loss(config: &ArrayConfig, workload: &DisturbWorkload) -> f64 {
    let cs = config.profile.cs;
    let c_eff = sensing_bl_capacitance(config);
    workload.total_charge_ac() / (cs + c_eff)
}

/// Worst-case margin after one refresh window of disturb, floored at 0.
pub fn margin_after_disturb(
    config: &ArrayConfig,
    op: &OperatingPoint,
    workload: &DisturbWorkload,
) -> f64 {
    (sense_margin(config, op) - disturb_margin_loss(config, workload)).max(0.0)
}

/// Wordline rise time (ns): distributed-line Elmore delay over the full
/// wordline load.
pub fn wordline_delay(profile: &TechnologyProfile) -> f64 {
    ELMORE_DISTRIBUTED * kohm_ff_to_ns(profile.rwl, profile.cwl_total())
}

/// Cell restore time (ns): the access transistor at I_on slews the
/// storage node across the full swing (fF·V/μA = ns).
pub fn restore_time(config: &ArrayConfig, op: &OperatingPoint) -> f64 {
    config.profile.cs * op.v_array / config.profile.transistor.i_on
}

/// Bitline settling time constant (ns): total path resistance, including
/// bond and any series pass device, times the structural effective
/// capacitance.
pub fn bl_time_constant(config: &ArrayConfig) -> f64 {
    let rbl = if config.profile.is_stacked() {
        config.layers() as f64 * config.profile.rbl_per_layer
    } else {
        config.profile.rbl_per_layer
    };
    let r_path = rbl + config.topology.r_bond + config.topology.series_selector_resistance();
    kohm_ff_to_ns(r_path, effective_bl_capacitance(config))
}

/// Row cycle time stages (ns). The stages always sum to `total`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowCycleBreakdown {
    pub wordline: f64,
    pub bitline: f64,
    pub sense: f64,
    pub restore: f64,
    pub overhead: f64,
    pub total: f64,
}

pub fn row_cycle_time(
    config: &ArrayConfig,
    op: &OperatingPoint,
    timing: &TimingModel,
) -> RowCycleBreakdown {
    let wordline = timing.k_wl * wordline_delay(&config.profile);
    let bitline = timing.k_bl * bl_time_constant(config);
    let sense = timing.t_sense;
    let restore = timing.k_restore * restore_time(config, op);
    let overhead = timing.t_overhead;
    RowCycleBreakdown {
        wordline,
        bitline,
        sense,
        restore,
        overhead,
        total: wordline + bitline + sense + restore + overhead,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessKind {
    Read,
    Write,
}

/// Per-bit access energy components (fJ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// Bitline plus cell charging term.
    pub bitline: f64,
    /// This bit's share of the wordline swing.
    pub wordline_share: f64,
    pub total: f64,
}

/// Per-bit energy (fJ): the bitline term swings the full array voltage on
/// a write and half of it on a read (quarter energy); every access also
/// pays a 1/cells_per_wl share of the wordline charge.
pub fn energy_per_bit(
    config: &ArrayConfig,
    op: &OperatingPoint,
    kind: AccessKind,
) -> EnergyBreakdown {
    let c_total = effective_bl_capacitance(config) + config.profile.cs;
    let swing = match kind {
        AccessKind::Write => op.v_array,
        AccessKind::Read => op.v_array / 2.0,
    };
    let bitline = c_total * swing * swing;
    let wordline_share =
        config.profile.cwl_total() * op.v_pp * op.v_pp / config.profile.cells_per_wl as f64;
    EnergyBreakdown {
        bitline,
        wordline_share,
        total: bitline + wordline_share,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tech::builtin_profiles;
    use crate::topology::{RoutingTopology, Scheme};
    use proptest::prelude::*;

    fn profile(name: &str) -> TechnologyProfile {
        builtin_profiles()
            .into_iter()
            .find(|p| p.name == name)
            .unwrap()
    }

    fn d1b_sense_config() -> ArrayConfig {
        let mut t = RoutingTopology::new(Scheme::DirectBlsa);
        t.c_sense_override = Some(20.0);
        ArrayConfig::new(profile("d1b"), t, None, 1.0).unwrap()
    }

    #[test]
    fn sense_margin_baseline_anchor() {
        let cfg = d1b_sense_config();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.648);
        assert!((sense_margin(&cfg, &op) - 54.0).abs() < 1e-9);
    }

    #[test]
    fn sense_margin_strap_point() {
        // Effective 6.6 fF at the shared 0.648 V sensing voltage.
        let mut t = RoutingTopology::new(Scheme::DirectBlsa);
        t.c_sense_override = Some(6.6);
        let cfg = ArrayConfig::new(profile("si3d"), t, Some(76), 1.0).unwrap();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.648);
        assert!((sense_margin(&cfg, &op) - 122.264_150_9).abs() < 1e-6);
    }

    #[test]
    fn sense_margin_without_parasitics_is_half_swing() {
        let mut t = RoutingTopology::new(Scheme::DirectBlsa);
        t.c_sense_override = Some(0.0);
        let cfg = ArrayConfig::new(profile("d1b"), t, None, 1.0).unwrap();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.648);
        assert!((sense_margin(&cfg, &op) - 324.0).abs() < 1e-9);
    }

    #[test]
    fn disturb_loss_is_linear_in_charge() {
        let cfg = d1b_sense_config();
        let mut w = DisturbWorkload::default();
        assert_eq!(disturb_margin_loss(&cfg, &w), 0.0);
        w.q_rh = 0.003;
        w.q_fbe = 2.0e-5;
        let once = disturb_margin_loss(&cfg, &w);
        w.q_rh *= 2.0;
        w.q_fbe *= 2.0;
        assert!((disturb_margin_loss(&cfg, &w) - 2.0 * once).abs() < 1e-12);
    }

    #[test]
    fn margin_after_disturb_floors_at_zero() {
        let cfg = d1b_sense_config();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.648);
        let mut w = DisturbWorkload::default();
        w.q_rh = 1.0; // 10 fC per window: far more than the cell holds
        assert_eq!(margin_after_disturb(&cfg, &op, &w), 0.0);
    }

    #[test]
    fn wordline_delay_examples() {
        let d = wordline_delay(&profile("d1b"));
        assert!((d - 1.425_547_2).abs() < 1e-6, "{d}");
        let s = wordline_delay(&profile("si3d"));
        assert!((s - 0.425_687_4).abs() < 1e-6, "{s}");
        let mut p = profile("d1b");
        p.rwl = 0.0;
        assert_eq!(wordline_delay(&p), 0.0);
    }

    #[test]
    fn restore_time_examples() {
        let d1b = d1b_sense_config();
        let op = OperatingPoint::for_profile(&d1b.profile, 0.648);
        assert!((restore_time(&d1b, &op) - 1.062_295_1).abs() < 1e-6);

        let si = ArrayConfig::new(
            profile("si3d"),
            RoutingTopology::new(Scheme::SelectorStrap),
            Some(137),
            1.0,
        )
        .unwrap();
        let op = OperatingPoint::for_profile(&si.profile, 0.648);
        assert!((restore_time(&si, &op) - 0.287_043_2).abs() < 1e-6);

        let mut fast = si.clone();
        fast.profile.transistor.i_on = 1e12;
        assert!(restore_time(&fast, &op) < 1e-9);
    }

    #[test]
    fn row_cycle_zero_factors_leave_overhead() {
        let cfg = d1b_sense_config();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.648);
        let tm = TimingModel {
            k_wl: 0.0,
            k_bl: 0.0,
            t_sense: 0.0,
            k_restore: 0.0,
            t_overhead: 3.5,
        };
        let b = row_cycle_time(&cfg, &op, &tm);
        assert_eq!(b.total, 3.5);
    }

    #[test]
    fn energy_zero_swing_leaves_wordline_share() {
        let cfg = d1b_sense_config();
        let op = OperatingPoint {
            v_array: 0.0,
            v_pp: 2.5,
            v_bb_wl: -0.3,
        };
        let e = energy_per_bit(&cfg, &op, AccessKind::Write);
        assert_eq!(e.bitline, 0.0);
        assert!((e.total - e.wordline_share).abs() < 1e-15);
        // 46.2 fF * 2.5^2 / 1024
        assert!((e.wordline_share - 0.281_982_4).abs() < 1e-6);
    }

    #[test]
    fn energy_model_values_for_strap_config() {
        // Zero-parasitic selector strap at 87 layers, 0.6 V.
        let mut t = RoutingTopology::new(Scheme::SelectorStrap);
        t.selector.as_mut().unwrap().c_junction = 0.0;
        let cfg = ArrayConfig::new(profile("aos3d"), t, Some(87), 1.0).unwrap();
        let op = OperatingPoint::for_profile(&cfg.profile, 0.60);
        let w = energy_per_bit(&cfg, &op, AccessKind::Write);
        let r = energy_per_bit(&cfg, &op, AccessKind::Read);
        // (11.136 + 4) * 0.36 + 0.319 and quarter swing + 0.319
        assert!((w.total - 5.767_96).abs() < 1e-4, "{}", w.total);
        assert!((r.total - 1.681_24).abs() < 1e-4, "{}", r.total);
        assert!((w.wordline_share - 0.319).abs() < 1e-9);
    }

    proptest! {
        /// Margin falls with load and scales linearly with swing.
        #[test]
        fn margin_monotonicity(
            c1 in 1.0f64..40.0,
            dc in 0.1f64..20.0,
            v in 0.1f64..1.2,
            scale in 1.1f64..3.0,
        ) {
            let mut t = RoutingTopology::new(Scheme::DirectBlsa);
            t.c_sense_override = Some(c1);
            let cfg = ArrayConfig::new(profile("d1b"), t, None, 1.0).unwrap();
            let op = OperatingPoint { v_array: v, v_pp: 4.0, v_bb_wl: -0.3 };
            let m1 = sense_margin(&cfg, &op);

            let mut heavier = cfg.clone();
            heavier.topology.c_sense_override = Some(c1 + dc);
            prop_assert!(sense_margin(&heavier, &op) < m1);

            let op2 = OperatingPoint { v_array: v * scale, ..op };
            let m2 = sense_margin(&cfg, &op2);
            prop_assert!((m2 - m1 * scale).abs() < 1e-9 * m2.max(1.0));
        }

        /// Stage terms are non-negative and sum exactly to the total.
        #[test]
        fn stage_sum_identity(
            k_wl in 0.0f64..5.0,
            k_bl in 0.0f64..5.0,
            t_sense in 0.0f64..5.0,
            k_restore in 0.0f64..20.0,
            t_overhead in 0.0f64..5.0,
            layers in 1u32..300,
            v in 0.2f64..1.2,
        ) {
            let cfg = ArrayConfig::new(
                profile("si3d"),
                RoutingTopology::new(Scheme::SelectorStrap),
                Some(layers),
                1.0,
            ).unwrap();
            let op = OperatingPoint::for_profile(&cfg.profile, v);
            let tm = TimingModel { k_wl, k_bl, t_sense, k_restore, t_overhead };
            let b = row_cycle_time(&cfg, &op, &tm);
            for stage in [b.wordline, b.bitline, b.sense, b.restore, b.overhead] {
                prop_assert!(stage >= 0.0);
            }
            let sum = b.wordline + b.bitline + b.sense + b.restore + b.overhead;
            prop_assert_eq!(sum, b.total);
        }

        /// A read moves a quarter of the write charge on the same load.
        #[test]
        fn read_cheaper_than_write(layers in 1u32..300, v in 0.05f64..1.2) {
            let cfg = ArrayConfig::new(
                profile("aos3d"),
                RoutingTopology::new(Scheme::SelectorStrap),
                Some(layers),
                1.0,
            ).unwrap();
            let op = OperatingPoint::for_profile(&cfg.profile, v);
            let w = energy_per_bit(&cfg, &op, AccessKind::Write);
            let r = energy_per_bit(&cfg, &op, AccessKind::Read);
            prop_assert!(r.total < w.total);
            prop_assert!((w.bitline - 4.0 * r.bitline).abs() < 1e-9 * w.bitline.max(1e-12));
        }
    }
}
