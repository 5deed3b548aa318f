//! Technology data model: cell geometry, parasitics, access transistor and
//! operating voltages for one DRAM node, plus the built-in baseline
//! profiles and their JSON ingestion.
//!
//! Profiles are immutable after construction and safe to share across
//! evaluation workers.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Planar baseline vs vertically stacked cell array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimensionality {
    Planar2d,
    Stacked3d,
}

/// Access-transistor channel material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    CrystallineSi,
    EpitaxialSi,
    IwoAos,
}

/// Cell footprint and transistor dimensions. Lengths in nm; `z_pitch` is
/// the per-layer height and is present exactly for stacked profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellGeometry {
    pub x_pitch: f64,
    pub y_pitch: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_pitch: Option<f64>,
    pub gate_length: f64,
    pub channel_width: f64,
}

/// Cell access transistor: drive/leakage currents (μA / fA) and gate
/// voltage levels (V). `v_bb` is the optional second back-bias level and
/// is stored as absent, not zero, when a profile does not define it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessTransistor {
    pub i_on: f64,
    pub i_off: f64,
    pub v_th: f64,
    pub v_pp: f64,
    pub v_bb_wl: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_bb: Option<f64>,
}

/// One column of the technology table.
///
/// For planar profiles `cbl_per_layer`/`rbl_per_layer` hold the total
/// bitline values (a single "layer") and `cells_per_bl_fixed` is set; for
/// stacked profiles the bitline scales with the layer count and the cell
/// count per bitline is twice the layer count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologyProfile {
    pub name: String,
    pub dimensionality: Dimensionality,
    pub channel: Channel,
    pub geometry: CellGeometry,
    /// Storage node capacitance (fF).
    pub cs: f64,
    /// Bitline capacitance per layer (fF); total for planar profiles.
    pub cbl_per_layer: f64,
    /// Bitline resistance per layer (kΩ); total for planar profiles.
    pub rbl_per_layer: f64,
    /// Wordline capacitance (fF).
    pub cwl: f64,
    /// Wordline resistance (kΩ).
    pub rwl: f64,
    /// Additional parasitic wordline capacitance (fF).
    pub cwl_parasitic: f64,
    pub cells_per_wl: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_per_bl_fixed: Option<u32>,
    pub transistor: AccessTransistor,
    /// Free-text note on the bitline conductor material.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material_note: Option<String>,
}

impl TechnologyProfile {
    pub fn is_stacked(&self) -> bool {
        self.dimensionality == Dimensionality::Stacked3d
    }

    /// Total wordline load: device plus parasitic capacitance (fF).
    pub fn cwl_total(&self) -> f64 {
        self.cwl + self.cwl_parasitic
    }

    pub fn validate(&self) -> Result<()> {
        let f = |name: &str| format!("{}.{}", self.name, name);
        ensure(!self.name.is_empty(), "name", "must not be empty")?;

        let g = &self.geometry;
        ensure(g.x_pitch > 0.0, &f("geometry.x_pitch"), "must be > 0")?;
        ensure(g.y_pitch > 0.0, &f("geometry.y_pitch"), "must be > 0")?;
        ensure(g.gate_length > 0.0, &f("geometry.gate_length"), "must be > 0")?;
        ensure(g.channel_width > 0.0, &f("geometry.channel_width"), "must be > 0")?;
        match (self.is_stacked(), g.z_pitch) {
            (true, None) => ensure(false, &f("geometry.z_pitch"), "required for stacked profiles")?,
            (false, Some(_)) => ensure(false, &f("geometry.z_pitch"), "not applicable to planar profiles")?,
            (true, Some(z)) => ensure(z > 0.0, &f("geometry.z_pitch"), "must be > 0")?,
            (false, None) => {}
        }

        ensure(self.cs > 0.0, &f("cs"), "must be > 0")?;
        ensure(self.cbl_per_layer >= 0.0, &f("cbl_per_layer"), "must be >= 0")?;
        ensure(self.rbl_per_layer >= 0.0, &f("rbl_per_layer"), "must be >= 0")?;
        ensure(self.cwl >= 0.0, &f("cwl"), "must be >= 0")?;
        ensure(self.rwl >= 0.0, &f("rwl"), "must be >= 0")?;
        ensure(self.cwl_parasitic >= 0.0, &f("cwl_parasitic"), "must be >= 0")?;
        ensure(self.cells_per_wl >= 1, &f("cells_per_wl"), "must be >= 1")?;

        match (self.is_stacked(), self.cells_per_bl_fixed) {
            (false, None) => ensure(false, &f("cells_per_bl_fixed"), "required for planar profiles")?,
            (true, Some(_)) => {
                ensure(false, &f("cells_per_bl_fixed"), "not applicable to stacked profiles")?
            }
            (false, Some(n)) => ensure(n >= 1, &f("cells_per_bl_fixed"), "must be >= 1")?,
            (true, None) => {}
        }

        let t = &self.transistor;
        ensure(t.i_on > 0.0, &f("transistor.i_on"), "must be > 0")?;
        ensure(t.i_off >= 0.0, &f("transistor.i_off"), "must be >= 0")?;
        // i_on is in μA, i_off in fA; compare on a common fA scale.
        ensure(
            t.i_on * 1e9 > t.i_off,
            &f("transistor.i_on"),
            "on-current must exceed off-current",
        )?;
        ensure(t.v_th > 0.0, &f("transistor.v_th"), "must be > 0")?;
        ensure(t.v_pp > t.v_th, &f("transistor.v_pp"), "must exceed v_th")?;
        ensure(t.v_bb_wl <= 0.0, &f("transistor.v_bb_wl"), "must be <= 0")?;
        Ok(())
    }
}

/// The three built-in profiles, in deterministic order: the planar
/// baseline (`d1b`), the stacked epitaxial-Si node (`si3d`) and the
/// stacked IWO oxide-semiconductor node (`aos3d`).
pub fn builtin_profiles() -> Vec<TechnologyProfile> {
    vec![
        TechnologyProfile {
            name: "d1b".to_string(),
            dimensionality: Dimensionality::Planar2d,
            channel: Channel::CrystallineSi,
            geometry: CellGeometry {
                x_pitch: 32.6,
                y_pitch: 37.6,
                z_pitch: None,
                gate_length: 120.0,
                channel_width: 11.7,
            },
            cs: 4.0,
            cbl_per_layer: 25.0,
            rbl_per_layer: 49.6,
            cwl: 30.0,
            rwl: 81.2,
            cwl_parasitic: 16.2,
            cells_per_wl: 1024,
            cells_per_bl_fixed: Some(1280),
            transistor: AccessTransistor {
                i_on: 2.44,
                i_off: 0.2,
                v_th: 0.43,
                v_pp: 2.5,
                v_bb_wl: -0.3,
                v_bb: Some(-0.6),
            },
            material_note: None,
        },
        TechnologyProfile {
            name: "si3d".to_string(),
            dimensionality: Dimensionality::Stacked3d,
            channel: Channel::EpitaxialSi,
            geometry: CellGeometry {
                x_pitch: 349.0,
                y_pitch: 100.0,
                z_pitch: Some(70.0),
                gate_length: 100.0,
                channel_width: 70.0,
            },
            cs: 4.0,
            cbl_per_layer: 0.0815,
            rbl_per_layer: 0.292,
            cwl: 96.3,
            rwl: 8.1,
            cwl_parasitic: 42.0,
            cells_per_wl: 1024,
            cells_per_bl_fixed: None,
            transistor: AccessTransistor {
                i_on: 9.03,
                i_off: 0.02,
                v_th: 0.30,
                v_pp: 1.8,
                v_bb_wl: -0.3,
                v_bb: None,
            },
            material_note: Some("N+ p-Si bitline".to_string()),
        },
        TechnologyProfile {
            name: "aos3d".to_string(),
            dimensionality: Dimensionality::Stacked3d,
            channel: Channel::IwoAos,
            geometry: CellGeometry {
                x_pitch: 238.0,
                y_pitch: 100.0,
                z_pitch: Some(80.0),
                gate_length: 40.0,
                channel_width: 70.0,
            },
            cs: 4.0,
            cbl_per_layer: 0.128,
            rbl_per_layer: 0.0167,
            cwl: 94.4,
            rwl: 19.9,
            cwl_parasitic: 33.2,
            cells_per_wl: 1024,
            cells_per_bl_fixed: None,
            transistor: AccessTransistor {
                i_on: 10.4,
                i_off: 0.02,
                v_th: 0.20,
                v_pp: 1.6,
                v_bb_wl: -0.6,
                v_bb: None,
            },
            material_note: Some("TiN/W bitline".to_string()),
        },
    ]
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDocument {
    profiles: Vec<TechnologyProfile>,
}

/// Parse a profile file. The schema is strict: unknown keys are an error,
/// every profile must satisfy its invariants and names must be unique.
pub fn load_profiles(document: &str) -> Result<Vec<TechnologyProfile>> {
    let doc: ProfileDocument = serde_json::from_str(document)?;
    let mut seen = std::collections::BTreeSet::new();
    for p in &doc.profiles {
        p.validate()?;
        if !seen.insert(p.name.clone()) {
            return Err(Error::DuplicateProfile(p.name.clone()));
        }
    }
    Ok(doc.profiles)
}

/// Serialize profiles into the same document format `load_profiles` reads.
pub fn save_profiles(profiles: &[TechnologyProfile]) -> String {
    let doc = ProfileDocument {
        profiles: profiles.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("profile serialization cannot fail")
}

/// Cells hanging off one bitline: the fixed count for planar profiles,
/// two per layer for stacked ones.
pub fn cells_per_bl(profile: &TechnologyProfile, n_layers: Option<u32>) -> Result<u32> {
    match (profile.is_stacked(), n_layers) {
        (false, None) => Ok(profile
            .cells_per_bl_fixed
            .expect("validated planar profile carries a fixed count")),
        (false, Some(_)) => Err(Error::ExtraneousLayers),
        (true, None) => Err(Error::MissingLayers),
        (true, Some(n)) => {
            ensure(n >= 1, "n_layers", "must be >= 1")?;
            Ok(2 * n)
        }
    }
}
