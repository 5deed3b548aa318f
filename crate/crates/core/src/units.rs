//! Unit conventions.
//!
//! The data model stores values in the units of the technology table:
//! lengths in nm, capacitances in fF, resistances in kΩ, currents in μA
//! (on) / fA (off), voltages in V, times in ns, energies in fJ. The
//! transient solver works in plain SI (F, Ω, s, V). Conversions happen
//! at these helpers so no formula carries hidden scale factors.
//!
//! Handy identities used throughout:
//! fF·V = fC, aC/fF = mV, fF·V² = fJ, fF·V/μA = ns, kΩ·fF = ps.

/// kΩ·fF is a picosecond; report times in ns.
pub fn kohm_ff_to_ns(r_kohm: f64, c_ff: f64) -> f64 {
    r_kohm * c_ff * 1e-3
}

pub fn nm_to_um(x: f64) -> f64 {
    x * 1e-3
}

pub fn nm2_to_um2(x: f64) -> f64 {
    x * 1e-6
}

/// bits/nm² → Gb/mm² (1e12 nm² per mm², 1e9 bits per Gb).
pub fn bits_per_nm2_to_gb_per_mm2(x: f64) -> f64 {
    x * 1e3
}

pub const FF: f64 = 1e-15;
pub const KOHM: f64 = 1e3;
pub const NS: f64 = 1e-9;
