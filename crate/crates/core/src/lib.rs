//! Design-space exploration engine for monolithic 3D DRAM with a
//! CMOS-bonded periphery.
//!
//! The crate models four bitline routing topologies over vertically
//! stacked 1T1C arrays and computes, per configuration: the effective
//! bitline capacitance seen by the sense amplifier, charge-sharing sense
//! margin with disturb losses, a staged row-cycle-time estimate, per-bit
//! read/write energy, hybrid bond pad pitch and feasibility, bit density
//! and stack height. A small switched-RC transient solver provides an
//! independent cross-check of the lumped formulas, and a deterministic
//! calibration engine pins the model's few free parameters to reference
//! anchors.

pub mod circuit;
pub mod config;
pub mod electrical;
pub mod error;
pub mod projection;
pub mod report;
pub mod tech;
pub mod topology;
pub mod units;

pub use config::{CalibratedModel, Document};
pub use electrical::{AccessKind, DisturbWorkload, OperatingPoint, TimingModel};
pub use error::{Error, Result};
pub use projection::calibrate::{
    calibrate, AnchorPoint, Calibration, CalibrationAnchor, Metric, ModelState, ParameterSpec,
};
pub use report::EvaluationReport;
pub use tech::{builtin_profiles, TechnologyProfile};
pub use topology::{ArrayConfig, RoutingTopology, Scheme, SelectorDevice};
