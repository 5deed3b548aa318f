//! Bitline routing schemes and bonding geometry.
//!
//! Four ways of getting a vertical bitline to its sense amplifier on the
//! bonded CMOS wafer: a dedicated bond pad per bitline, simple strapping
//! of several bitlines onto one pad, a mux in the CMOS core, and a
//! selector transistor per bitline feeding a shared strap. The scheme
//! determines the capacitance seen by the sense amplifier, the required
//! bond pad pitch and the area available for one sense amplifier.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::tech::TechnologyProfile;
use crate::units::{nm2_to_um2, nm_to_um};

/// Reference sense-amplifier area of the planar baseline (μm²). Stored,
/// not computed: the planar layout does not follow the pad-footprint
/// model below.
pub const BASELINE_BLSA_AREA_UM2: f64 = 0.44;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    DirectBlsa,
    BlStrap,
    CoreMux,
    SelectorStrap,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::DirectBlsa,
        Scheme::BlStrap,
        Scheme::CoreMux,
        Scheme::SelectorStrap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DirectBlsa => "direct_blsa",
            Scheme::BlStrap => "bl_strap",
            Scheme::CoreMux => "core_mux",
            Scheme::SelectorStrap => "selector_strap",
        }
    }

    pub fn is_strap_family(self) -> bool {
        matches!(self, Scheme::BlStrap | Scheme::SelectorStrap)
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct_blsa" => Ok(Scheme::DirectBlsa),
            "bl_strap" => Ok(Scheme::BlStrap),
            "core_mux" => Ok(Scheme::CoreMux),
            "selector_strap" => Ok(Scheme::SelectorStrap),
            other => Err(Error::Validation {
                field: "scheme".to_string(),
                message: format!(
                    "unknown scheme `{other}` (expected direct_blsa | bl_strap | core_mux | selector_strap)"
                ),
            }),
        }
    }
}

/// BEOL-compatible selector transistor gating one bitline onto a strap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectorDevice {
    /// On-current (μA) at `drive_voltage`.
    pub i_on: f64,
    /// Gate drive at which `i_on` is quoted (V).
    pub drive_voltage: f64,
    /// Channel width (nm).
    pub width: f64,
    /// Channel length (nm).
    pub length: f64,
    /// Subthreshold slope (mV/dec); 60 is the thermionic limit.
    pub ss: f64,
    /// Capacitance one selector contributes to the strap node (fF).
    pub c_junction: f64,
    /// On-resistance (kΩ). Absent means derive it as drive_voltage / i_on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_on: Option<f64>,
}

impl SelectorDevice {
    /// Default IGO selector: 50 μA at 2 V on a 70 nm / 50 nm device with
    /// a near-ideal 60 mV/dec slope.
    pub fn default_igo() -> Self {
        SelectorDevice {
            i_on: 50.0,
            drive_voltage: 2.0,
            width: 70.0,
            length: 50.0,
            ss: 60.0,
            c_junction: 0.2,
            r_on: None,
        }
    }

    /// On-resistance in kΩ: explicit value or drive_voltage / i_on
    /// (V / μA = MΩ, hence the factor 1000).
    pub fn r_on_kohm(&self) -> f64 {
        self.r_on
            .unwrap_or(self.drive_voltage / self.i_on * 1000.0)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.i_on > 0.0, "selector.i_on", "must be > 0")?;
        ensure(self.drive_voltage > 0.0, "selector.drive_voltage", "must be > 0")?;
        ensure(
            self.ss >= 60.0,
            "selector.ss",
            "cannot beat the 60 mV/dec thermionic limit",
        )?;
        ensure(self.c_junction >= 0.0, "selector.c_junction", "must be >= 0")?;
        ensure(self.r_on_kohm() > 0.0, "selector.r_on", "must be > 0")?;
        Ok(())
    }
}

/// One routing scheme plus its multiplexing degrees and lumped bonding
/// parasitics.
///
/// `c_sense_override`, when present, replaces the structural effective
/// capacitance in the sensing path only. It exists for baselines whose
/// effective sensing load is known as an opaque calibrated value rather
/// than derivable from the structural model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutingTopology {
    pub scheme: Scheme,
    #[serde(default = "default_bls_per_strap")]
    pub bls_per_strap: u32,
    #[serde(default = "default_wls_per_strap_driver")]
    pub wls_per_strap_driver: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<SelectorDevice>,
    /// Hybrid bond pad plus global routing capacitance (fF).
    #[serde(default)]
    pub c_bond: f64,
    /// Bond pad plus via resistance (kΩ).
    #[serde(default)]
    pub r_bond: f64,
    /// Strap wiring capacitance (fF).
    #[serde(default)]
    pub c_strap_wire: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_sense_override: Option<f64>,
}

fn default_bls_per_strap() -> u32 {
    8
}

fn default_wls_per_strap_driver() -> u32 {
    16
}

impl RoutingTopology {
    pub fn new(scheme: Scheme) -> Self {
        RoutingTopology {
            scheme,
            bls_per_strap: default_bls_per_strap(),
            wls_per_strap_driver: default_wls_per_strap_driver(),
            selector: if scheme == Scheme::SelectorStrap {
                Some(SelectorDevice::default_igo())
            } else {
                None
            },
            c_bond: 0.0,
            r_bond: 0.0,
            c_strap_wire: 0.0,
            c_sense_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.bls_per_strap >= 1, "bls_per_strap", "must be >= 1")?;
        ensure(
            self.wls_per_strap_driver >= 1,
            "wls_per_strap_driver",
            "must be >= 1",
        )?;
        ensure(self.c_bond >= 0.0, "c_bond", "must be >= 0")?;
        ensure(self.r_bond >= 0.0, "r_bond", "must be >= 0")?;
        ensure(self.c_strap_wire >= 0.0, "c_strap_wire", "must be >= 0")?;
        match (self.scheme, &self.selector) {
            (Scheme::SelectorStrap, None) => ensure(
                false,
                "selector",
                "selector_strap requires a selector device",
            )?,
            (Scheme::SelectorStrap, Some(s)) => s.validate()?,
            (_, Some(_)) => ensure(
                false,
                "selector",
                "selector device is only valid for selector_strap",
            )?,
            (_, None) => {}
        }
        if let Some(c) = self.c_sense_override {
            ensure(c >= 0.0, "c_sense_override", "must be >= 0")?;
        }
        Ok(())
    }

    /// Bitlines sharing one bond pad under this scheme.
    pub fn bls_per_pad(&self) -> u32 {
        match self.scheme {
            Scheme::DirectBlsa | Scheme::CoreMux => 1,
            Scheme::BlStrap | Scheme::SelectorStrap => self.bls_per_strap,
        }
    }

    /// Junction capacitance loading the shared node (fF). The core mux
    /// has no dedicated device entry, so it borrows the default selector.
    pub fn junction_capacitance(&self) -> f64 {
        self.selector
            .as_ref()
            .map(|s| s.c_junction)
            .unwrap_or_else(|| SelectorDevice::default_igo().c_junction)
    }

    /// Series resistance of the pass device in the bitline path (kΩ);
    /// zero for schemes without one.
    pub fn series_selector_resistance(&self) -> f64 {
        match self.scheme {
            Scheme::SelectorStrap => self
                .selector
                .as_ref()
                .map(|s| s.r_on_kohm())
                .unwrap_or_else(|| SelectorDevice::default_igo().r_on_kohm()),
            Scheme::CoreMux => SelectorDevice::default_igo().r_on_kohm(),
            Scheme::DirectBlsa | Scheme::BlStrap => 0.0,
        }
    }
}

/// One evaluation point: a technology, a routing topology, the layer
/// count for stacked profiles and the live-cell area fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub profile: TechnologyProfile,
    pub topology: RoutingTopology,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_layers: Option<u32>,
    pub array_efficiency: f64,
}

impl ArrayConfig {
    pub fn new(
        profile: TechnologyProfile,
        topology: RoutingTopology,
        n_layers: Option<u32>,
        array_efficiency: f64,
    ) -> Result<Self> {
        let cfg = ArrayConfig {
            profile,
            topology,
            n_layers,
            array_efficiency,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        self.topology.validate()?;
        match (self.profile.is_stacked(), self.n_layers) {
            (true, None) => return Err(Error::MissingLayers),
            (false, Some(_)) => return Err(Error::ExtraneousLayers),
            (true, Some(n)) => ensure(n >= 1, "n_layers", "must be >= 1")?,
            (false, None) => {}
        }
        ensure(
            self.array_efficiency > 0.0 && self.array_efficiency <= 1.0,
            "array_efficiency",
            "must lie in (0, 1]",
        )?;
        Ok(())
    }

    pub fn layers(&self) -> u32 {
        self.n_layers.unwrap_or(1)
    }
}

/// Capacitance of one local bitline (fF): the full column for stacked
/// profiles, the fixed total for the planar baseline.
pub fn local_bl_capacitance(config: &ArrayConfig) -> f64 {
    if config.profile.is_stacked() {
        config.layers() as f64 * config.profile.cbl_per_layer
    } else {
        config.profile.cbl_per_layer
    }
}

/// Structural capacitance seen by the sense amplifier during sensing (fF).
///
/// direct: local bitline plus bond; core mux adds one junction; simple
/// strapping keeps every strapped bitline connected; the selector strap
/// isolates unselected bitlines, leaving one junction plus the strap
/// wiring and bond.
pub fn effective_bl_capacitance(config: &ArrayConfig) -> f64 {
    let local = local_bl_capacitance(config);
    let t = &config.topology;
    match t.scheme {
        Scheme::DirectBlsa => local + t.c_bond,
        Scheme::CoreMux => local + t.c_bond + t.junction_capacitance(),
        Scheme::BlStrap => t.bls_per_strap as f64 * local + t.c_strap_wire + t.c_bond,
        Scheme::SelectorStrap => local + t.junction_capacitance() + t.c_strap_wire + t.c_bond,
    }
}

/// Effective capacitance used in the sensing path: the calibrated
/// override when one is present, the structural value otherwise.
pub fn sensing_bl_capacitance(config: &ArrayConfig) -> f64 {
    config
        .topology
        .c_sense_override
        .unwrap_or_else(|| effective_bl_capacitance(config))
}

/// Plan-view footprint per bond pad (nm²): two cells per layer hang off
/// one vertical bitline, so one bitline shadows 2·x·y, times the number
/// of bitlines multiplexed onto the pad.
fn pad_footprint_nm2(config: &ArrayConfig) -> f64 {
    let g = &config.profile.geometry;
    config.topology.bls_per_pad() as f64 * 2.0 * g.x_pitch * g.y_pitch
}

/// Required hybrid bond pad pitch (μm) assuming pads on a square grid,
/// one pad per `bls_per_pad` bitlines.
pub fn hcb_pitch(config: &ArrayConfig) -> Result<f64> {
    if !config.profile.is_stacked() {
        return Err(Error::RequiresStacked { op: "hcb_pitch" });
    }
    Ok(nm_to_um(pad_footprint_nm2(config).sqrt()))
}

/// Area available for one sense amplifier (μm²): two pad footprints, the
/// selected and the reference strap column. For the planar baseline use
/// [`BASELINE_BLSA_AREA_UM2`] instead.
pub fn blsa_area(config: &ArrayConfig) -> Result<f64> {
    if !config.profile.is_stacked() {
        return Err(Error::RequiresStacked { op: "blsa_area" });
    }
    if !config.topology.scheme.is_strap_family() {
        return Err(Error::RequiresStrap { op: "blsa_area" });
    }
    Ok(2.0 * nm2_to_um2(pad_footprint_nm2(config)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Signed distance to the manufacturable window (μm).
    pub pitch_margin: f64,
}

/// Check the required pad pitch against a manufacturable minimum.
pub fn feasibility(config: &ArrayConfig, min_pitch_um: f64) -> Result<Feasibility> {
    if min_pitch_um <= 0.0 {
        return Err(Error::InvalidMinPitch);
    }
    let pitch = hcb_pitch(config)?;
    Ok(Feasibility {
        feasible: pitch >= min_pitch_um,
        pitch_margin: pitch - min_pitch_um,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PadCounts {
    pub bl_pads: u64,
    pub wl_pads: u64,
}

/// Bond pads needed to serve one bank of the given dimensions.
pub fn pad_counts(config: &ArrayConfig, bank_rows: u64, bank_cols: u64) -> Result<PadCounts> {
    ensure(bank_rows >= 1, "bank_rows", "must be >= 1")?;
    ensure(bank_cols >= 1, "bank_cols", "must be >= 1")?;
    let bls = config.topology.bls_per_pad() as u64;
    let wls = config.topology.wls_per_strap_driver as u64;
    Ok(PadCounts {
        bl_pads: bank_cols.div_ceil(bls),
        wl_pads: bank_rows.div_ceil(wls),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tech::builtin_profiles;
    use proptest::prelude::*;

    fn profile(name: &str) -> TechnologyProfile {
        builtin_profiles()
            .into_iter()
            .find(|p| p.name == name)
            .unwrap()
    }

    fn config(name: &str, scheme: Scheme, layers: Option<u32>) -> ArrayConfig {
        ArrayConfig::new(profile(name), RoutingTopology::new(scheme), layers, 1.0).unwrap()
    }

    #[test]
    fn local_capacitance_examples() {
        let si = config("si3d", Scheme::SelectorStrap, Some(137));
        assert!((local_bl_capacitance(&si) - 11.1655).abs() < 1e-9);
        let aos = config("aos3d", Scheme::SelectorStrap, Some(87));
        assert!((local_bl_capacitance(&aos) - 11.136).abs() < 1e-9);
        let d1b = config("d1b", Scheme::DirectBlsa, None);
        assert_eq!(local_bl_capacitance(&d1b), 25.0);
    }

    #[test]
    fn zero_parasitics_degenerate_to_local() {
        let mut cfg = config("si3d", Scheme::SelectorStrap, Some(64));
        cfg.topology.selector.as_mut().unwrap().c_junction = 0.0;
        cfg.topology.c_bond = 0.0;
        cfg.topology.c_strap_wire = 0.0;
        assert_eq!(
            effective_bl_capacitance(&cfg),
            local_bl_capacitance(&cfg)
        );
    }

    #[test]
    fn strap_exceeds_selector_strap() {
        let sel = config("si3d", Scheme::SelectorStrap, Some(64));
        let mut strap = config("si3d", Scheme::BlStrap, Some(64));
        strap.topology.c_bond = sel.topology.c_bond;
        strap.topology.c_strap_wire = sel.topology.c_strap_wire;
        assert!(effective_bl_capacitance(&strap) > effective_bl_capacitance(&sel));
        assert!(
            effective_bl_capacitance(&strap)
                >= strap.topology.bls_per_strap as f64 * local_bl_capacitance(&strap)
        );
    }

    #[test]
    fn sensing_override_replaces_structural_value() {
        let mut d1b = config("d1b", Scheme::DirectBlsa, None);
        assert_eq!(sensing_bl_capacitance(&d1b), 25.0);
        d1b.topology.c_sense_override = Some(20.0);
        assert_eq!(sensing_bl_capacitance(&d1b), 20.0);
        assert_eq!(effective_bl_capacitance(&d1b), 25.0);
    }

    #[test]
    fn pitch_examples() {
        let cases = [
            ("si3d", Scheme::DirectBlsa, 0.264_196_9),
            ("aos3d", Scheme::DirectBlsa, 0.218_174_2),
            ("si3d", Scheme::SelectorStrap, 0.747_261_7),
            ("aos3d", Scheme::SelectorStrap, 0.617_089_9),
        ];
        for (name, scheme, expect) in cases {
            let cfg = config(name, scheme, Some(100));
            let pitch = hcb_pitch(&cfg).unwrap();
            assert!(
                (pitch - expect).abs() < 1e-6,
                "{name}/{scheme}: {pitch} vs {expect}"
            );
        }
        let d1b = config("d1b", Scheme::DirectBlsa, None);
        assert!(matches!(
            hcb_pitch(&d1b),
            Err(Error::RequiresStacked { .. })
        ));
    }

    #[test]
    fn blsa_area_examples() {
        let si = config("si3d", Scheme::SelectorStrap, Some(137));
        assert!((blsa_area(&si).unwrap() - 1.1168).abs() < 1e-9);
        let aos = config("aos3d", Scheme::SelectorStrap, Some(87));
        assert!((blsa_area(&aos).unwrap() - 0.7616).abs() < 1e-9);
        assert!((BASELINE_BLSA_AREA_UM2 - 0.44).abs() < 1e-12);

        let direct = config("si3d", Scheme::DirectBlsa, Some(137));
        assert!(matches!(blsa_area(&direct), Err(Error::RequiresStrap { .. })));
        let d1b = config("d1b", Scheme::DirectBlsa, None);
        assert!(matches!(blsa_area(&d1b), Err(Error::RequiresStacked { .. })));
    }

    #[test]
    fn feasibility_examples() {
        let sel = config("si3d", Scheme::SelectorStrap, Some(137));
        let f = feasibility(&sel, 0.4).unwrap();
        assert!(f.feasible);
        assert!((f.pitch_margin - 0.347_261_7).abs() < 1e-6);

        let direct = config("si3d", Scheme::DirectBlsa, Some(137));
        let f = feasibility(&direct, 0.4).unwrap();
        assert!(!f.feasible);
        assert!((f.pitch_margin + 0.135_803_1).abs() < 1e-6);

        // Boundary is inclusive.
        let pitch = hcb_pitch(&sel).unwrap();
        let f = feasibility(&sel, pitch).unwrap();
        assert!(f.feasible);
        assert!(f.pitch_margin.abs() < 1e-12);

        assert!(matches!(
            feasibility(&sel, 0.0),
            Err(Error::InvalidMinPitch)
        ));
    }

    #[test]
    fn pad_count_examples() {
        let sel = config("si3d", Scheme::SelectorStrap, Some(137));
        assert_eq!(
            pad_counts(&sel, 1024, 1024).unwrap(),
            PadCounts { bl_pads: 128, wl_pads: 64 }
        );
        let direct = config("si3d", Scheme::DirectBlsa, Some(137));
        assert_eq!(
            pad_counts(&direct, 1024, 1024).unwrap(),
            PadCounts { bl_pads: 1024, wl_pads: 64 }
        );
        assert_eq!(
            pad_counts(&sel, 1, 1).unwrap(),
            PadCounts { bl_pads: 1, wl_pads: 1 }
        );
    }

    #[test]
    fn config_layer_validation() {
        assert!(matches!(
            ArrayConfig::new(
                profile("si3d"),
                RoutingTopology::new(Scheme::DirectBlsa),
                None,
                1.0
            ),
            Err(Error::MissingLayers)
        ));
        assert!(matches!(
            ArrayConfig::new(
                profile("d1b"),
                RoutingTopology::new(Scheme::DirectBlsa),
                Some(3),
                1.0
            ),
            Err(Error::ExtraneousLayers)
        ));
    }

    #[test]
    fn selector_presence_matches_scheme() {
        let mut t = RoutingTopology::new(Scheme::SelectorStrap);
        t.selector = None;
        assert!(t.validate().is_err());
        let mut t = RoutingTopology::new(Scheme::BlStrap);
        t.selector = Some(SelectorDevice::default_igo());
        assert!(t.validate().is_err());
    }

    #[test]
    fn default_selector_derives_40_kohm() {
        assert!((SelectorDevice::default_igo().r_on_kohm() - 40.0).abs() < 1e-12);
    }

    proptest! {
        /// Geometry depends on the x·y product only.
        #[test]
        fn geometry_invariant_under_pitch_swap(
            x in 30.0f64..500.0,
            y in 30.0f64..500.0,
            layers in 1u32..300,
        ) {
            let mut p = profile("si3d");
            p.geometry.x_pitch = x;
            p.geometry.y_pitch = y;
            let mut q = p.clone();
            q.geometry.x_pitch = y;
            q.geometry.y_pitch = x;
            let t = RoutingTopology::new(Scheme::SelectorStrap);
            let a = ArrayConfig::new(p, t.clone(), Some(layers), 1.0).unwrap();
            let b = ArrayConfig::new(q, t, Some(layers), 1.0).unwrap();
            prop_assert_eq!(hcb_pitch(&a).unwrap(), hcb_pitch(&b).unwrap());
            prop_assert_eq!(blsa_area(&a).unwrap(), blsa_area(&b).unwrap());
        }

        /// Strap-family pitch is exactly sqrt(bls_per_strap) times the
        /// per-bitline pitch, and the sense-amp area is two squared
        /// pitches.
        #[test]
        fn pitch_and_area_scaling(
            bls in 1u32..64,
            layers in 1u32..300,
        ) {
            let p = profile("si3d");
            let mut strap = RoutingTopology::new(Scheme::SelectorStrap);
            strap.bls_per_strap = bls;
            let direct = RoutingTopology::new(Scheme::DirectBlsa);
            let a = ArrayConfig::new(p.clone(), strap, Some(layers), 1.0).unwrap();
            let b = ArrayConfig::new(p, direct, Some(layers), 1.0).unwrap();
            let ps = hcb_pitch(&a).unwrap();
            let pd = hcb_pitch(&b).unwrap();
            prop_assert!((ps - (bls as f64).sqrt() * pd).abs() <= 1e-12 * ps);
            let area = blsa_area(&a).unwrap();
            prop_assert!((area - 2.0 * ps * ps).abs() <= 1e-12 * area);
        }

        /// The effective capacitance is affine in the layer count with
        /// slope cbl_per_layer (times the strap degree for bl_strap), and
        /// in realistic parameter ranges the selector strap never loads
        /// the sense amp more than plain strapping.
        #[test]
        fn effective_capacitance_structure(
            cbl in 0.05f64..0.3,
            cj in 0.0f64..0.3,
            cw in 0.0f64..2.0,
            cb in 0.0f64..3.0,
            bls in 2u32..16,
            layers in 8u32..400,
        ) {
            let mut p = profile("si3d");
            p.cbl_per_layer = cbl;
            let mut sel = RoutingTopology::new(Scheme::SelectorStrap);
            sel.bls_per_strap = bls;
            sel.selector.as_mut().unwrap().c_junction = cj;
            sel.c_strap_wire = cw;
            sel.c_bond = cb;
            let mut strap = RoutingTopology::new(Scheme::BlStrap);
            strap.bls_per_strap = bls;
            strap.c_strap_wire = cw;
            strap.c_bond = cb;

            for topo in [sel.clone(), strap.clone()] {
                let c1 = effective_bl_capacitance(
                    &ArrayConfig::new(p.clone(), topo.clone(), Some(layers), 1.0).unwrap(),
                );
                let c2 = effective_bl_capacitance(
                    &ArrayConfig::new(p.clone(), topo.clone(), Some(layers + 1), 1.0).unwrap(),
                );
                let slope = if topo.scheme == Scheme::BlStrap {
                    bls as f64 * cbl
                } else {
                    cbl
                };
                prop_assert!((c2 - c1 - slope).abs() < 1e-9);
            }

            let a = ArrayConfig::new(p.clone(), sel, Some(layers), 1.0).unwrap();
            let b = ArrayConfig::new(p, strap, Some(layers), 1.0).unwrap();
            prop_assert!(effective_bl_capacitance(&a) <= effective_bl_capacitance(&b));
        }
    }
}
