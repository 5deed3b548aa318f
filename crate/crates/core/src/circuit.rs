//! Switched linear RC transient solver.
//!
//! A small modified-nodal-analysis engine used as an independent,
//! first-principles cross-check of the lumped charge-sharing and settling
//! formulas. Networks hold ground-referenced capacitors, resistors, ideal
//! switches (a resistor stamped only while on) and ideal piecewise-linear
//! voltage sources. Integration is backward Euler: unconditionally
//! stable, first order, with step boundaries snapped to every switch and
//! source breakpoint. Systems here stay small (≤ a few hundred nodes), so
//! a dense LU solve is used throughout.

use serde::{Deserialize, Serialize};

use crate::electrical::OperatingPoint;
use crate::error::{ensure, Error, Result};
use crate::topology::{ArrayConfig, Scheme};
use crate::units::{FF, KOHM};

/// Delay before the access switch closes in generated bitline networks
/// (s). Gives the waveform a visible precharged sample at t = 0.
pub const ACCESS_SWITCH_DELAY_S: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resistor {
    pub a: usize,
    pub b: usize,
    pub ohms: f64,
}

/// Ground-referenced capacitor with its initial voltage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Capacitor {
    pub node: usize,
    pub farads: f64,
    pub initial_voltage: f64,
}

/// Ideal switch: `on_resistance` between `a` and `b` while on, removed
/// from the system while off. Off until the first schedule entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Switch {
    pub a: usize,
    pub b: usize,
    pub on_resistance: f64,
    /// Time-sorted (time s, state) pairs.
    pub schedule: Vec<(f64, bool)>,
}

impl Switch {
    fn state_at(&self, t: f64) -> bool {
        self.schedule
            .iter()
            .rev()
            .find(|(tt, _)| *tt <= t + 1e-18)
            .map(|(_, s)| *s)
            .unwrap_or(false)
    }
}

/// Ideal voltage source from `node` to ground following a piecewise
/// linear waveform (clamped beyond its endpoints).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    pub node: usize,
    pub waveform: Vec<(f64, f64)>,
}

impl Source {
    fn value_at(&self, t: f64) -> f64 {
        pwl(&self.waveform, t)
    }
}

fn pwl(points: &[(f64, f64)], t: f64) -> f64 {
    match points {
        [] => 0.0,
        [only] => only.1,
        _ => {
            if t <= points[0].0 {
                return points[0].1;
            }
            if t >= points[points.len() - 1].0 {
                return points[points.len() - 1].1;
            }
            let i = points.partition_point(|(tt, _)| *tt <= t);
            let (t0, v0) = points[i - 1];
            let (t1, v1) = points[i];
            if t1 <= t0 {
                v1
            } else {
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }
}

/// Netlist for the solver. Node 0 is ground. Exchanged as JSON via serde.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RcNetwork {
    pub node_count: usize,
    #[serde(default)]
    pub resistors: Vec<Resistor>,
    #[serde(default)]
    pub capacitors: Vec<Capacitor>,
    #[serde(default)]
    pub switches: Vec<Switch>,
    #[serde(default)]
    pub sources: Vec<Source>,
}

impl RcNetwork {
    pub fn total_capacitance(&self) -> f64 {
        self.capacitors.iter().map(|c| c.farads).sum()
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.node_count >= 2, "node_count", "needs ground plus one node")?;
        let n = self.node_count;
        for (i, r) in self.resistors.iter().enumerate() {
            let f = format!("resistors[{i}]");
            ensure(r.a < n && r.b < n, &f, "node index out of range")?;
            ensure(r.a != r.b, &f, "must span two distinct nodes")?;
            ensure(r.ohms > 0.0, &f, "resistance must be > 0")?;
        }
        for (i, c) in self.capacitors.iter().enumerate() {
            let f = format!("capacitors[{i}]");
            ensure(c.node < n, &f, "node index out of range")?;
            ensure(c.node != 0, &f, "capacitor cannot sit on ground")?;
            ensure(c.farads > 0.0, &f, "capacitance must be > 0")?;
        }
        for (i, s) in self.switches.iter().enumerate() {
            let f = format!("switches[{i}]");
            ensure(s.a < n && s.b < n, &f, "node index out of range")?;
            ensure(s.a != s.b, &f, "must span two distinct nodes")?;
            ensure(s.on_resistance > 0.0, &f, "on-resistance must be > 0")?;
            ensure(
                s.schedule.windows(2).all(|w| w[0].0 <= w[1].0),
                &f,
                "schedule must be time-sorted",
            )?;
        }
        for (i, s) in self.sources.iter().enumerate() {
            let f = format!("sources[{i}]");
            ensure(s.node < n && s.node != 0, &f, "node index out of range")?;
            ensure(
                s.waveform.windows(2).all(|w| w[0].0 <= w[1].0),
                &f,
                "waveform must be time-sorted",
            )?;
        }
        // Conflicting initial conditions on a shared node are almost
        // certainly a construction bug.
        let mut init: std::collections::BTreeMap<usize, f64> = Default::default();
        for c in &self.capacitors {
            if let Some(prev) = init.insert(c.node, c.initial_voltage) {
                ensure(
                    (prev - c.initial_voltage).abs() < 1e-12,
                    "capacitors",
                    "conflicting initial voltages on one node",
                )?;
            }
        }
        // Every non-ground node must hold a capacitor or be reachable
        // from a source or capacitor through resistors/switches.
        let mut anchored = vec![false; n];
        for c in &self.capacitors {
            anchored[c.node] = true;
        }
        for s in &self.sources {
            anchored[s.node] = true;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for r in &self.resistors {
            adj[r.a].push(r.b);
            adj[r.b].push(r.a);
        }
        for s in &self.switches {
            adj[s.a].push(s.b);
            adj[s.b].push(s.a);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| anchored[i]).collect();
        let mut seen = anchored.clone();
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        for node in 1..n {
            if !seen[node] {
                return Err(Error::SingularSystem { node });
            }
        }
        Ok(())
    }
}

/// Sampled node voltages. `nodes` lists the probed node ids; `values` has
/// one row per probe, one column per time sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Waveform {
    pub times: Vec<f64>,
    pub nodes: Vec<usize>,
    pub values: Vec<Vec<f64>>,
}

impl Waveform {
    pub fn voltages(&self, node: usize) -> Option<&[f64]> {
        let i = self.nodes.iter().position(|&n| n == node)?;
        Some(&self.values[i])
    }

    /// Linearly interpolated voltage of `node` at time `t`.
    pub fn value_at(&self, node: usize, t: f64) -> Option<f64> {
        let row = self.voltages(node)?;
        if self.times.is_empty() {
            return None;
        }
        if t <= self.times[0] {
            return Some(row[0]);
        }
        if t >= *self.times.last().unwrap() {
            return Some(*row.last().unwrap());
        }
        let i = self.times.partition_point(|&tt| tt <= t);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (v0, v1) = (row[i - 1], row[i]);
        if t1 <= t0 {
            Some(v1)
        } else {
            Some(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
        }
    }

    pub fn final_value(&self, node: usize) -> Option<f64> {
        self.voltages(node).and_then(|r| r.last().copied())
    }

    /// CSV emission: `time_s,node_<k>,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_s");
        for n in &self.nodes {
            out.push_str(&format!(",node_{n}"));
        }
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t:e}"));
            for row in &self.values {
                out.push_str(&format!(",{:e}", row[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Dense LU with partial pivoting. Factored once per (step size, switch
/// state) segment and back-substituted per step.
struct Lu {
    n: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

fn lu_factor(mut a: Vec<f64>, n: usize) -> std::result::Result<Lu, usize> {
    let scale = a.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let tol = scale * 1e-14;
    let mut piv = vec![0usize; n];
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > tol) {
            return Err(k);
        }
        piv[k] = p;
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
        }
        let d = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / d;
            a[i * n + k] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    Ok(Lu { n, a, piv })
}

impl Lu {
    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        // Rows were swapped wholesale during factorization, so the whole
        // permutation applies to the right-hand side before elimination.
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for k in 0..n {
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..n {
                    b[i] -= self.a[i * n + k] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= self.a[k * n + j] * b[j];
            }
            b[k] = s / self.a[k * n + k];
        }
    }
}

fn time_grid(dt: f64, t_end: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut ts: Vec<f64> = Vec::new();
    let mut k: u64 = 1;
    loop {
        let t = k as f64 * dt;
        if t >= t_end - 1e-18 {
            break;
        }
        ts.push(t);
        k += 1;
    }
    for &b in breakpoints {
        if b > 1e-18 && b < t_end - 1e-18 {
            ts.push(b);
        }
    }
    ts.push(t_end);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-18);
    ts
}

/// Backward-Euler transient over `[0, t_end]`. An empty probe list means
/// "record every non-ground node". Switch state changes and source
/// breakpoints become step boundaries, so state flips land exactly on a
/// sample.
pub fn transient(net: &RcNetwork, dt: f64, t_end: f64, probes: &[usize]) -> Result<Waveform> {
    net.validate()?;
    ensure(dt > 0.0, "dt", "must be > 0")?;
    ensure(t_end >= dt, "t_end", "must be >= dt")?;
    ensure(t_end / dt <= 5e7, "dt", "step count too large")?;

    let probe_nodes: Vec<usize> = if probes.is_empty() {
        (1..net.node_count).collect()
    } else {
        for &p in probes {
            ensure(p > 0 && p < net.node_count, "probes", "node index out of range")?;
        }
        probes.to_vec()
    };

    let nv = net.node_count - 1;
    let dim = nv + net.sources.len();

    let mut v = vec![0.0; net.node_count];
    for c in &net.capacitors {
        v[c.node] = c.initial_voltage;
    }
    for s in &net.sources {
        v[s.node] = s.value_at(0.0);
    }

    let mut breakpoints: Vec<f64> = net
        .switches
        .iter()
        .flat_map(|s| s.schedule.iter().map(|(t, _)| *t))
        .collect();
    breakpoints.extend(
        net.sources
            .iter()
            .flat_map(|s| s.waveform.iter().map(|(t, _)| *t)),
    );
    let grid = time_grid(dt, t_end, &breakpoints);

    let mut times = Vec::with_capacity(grid.len() + 1);
    let mut values: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len() + 1); probe_nodes.len()];
    let record = |t: f64, v: &[f64], times: &mut Vec<f64>, values: &mut Vec<Vec<f64>>| {
        times.push(t);
        for (row, &node) in values.iter_mut().zip(&probe_nodes) {
            row.push(v[node]);
        }
    };
    record(0.0, &v, &mut times, &mut values);

    let mut cached: Option<(u64, Vec<bool>, Lu)> = None;
    let mut rhs = vec![0.0; dim];
    let mut t_prev = 0.0;

    for &t in &grid {
        let h = t - t_prev;
        if h <= 0.0 {
            continue;
        }
        let states: Vec<bool> = net.switches.iter().map(|s| s.state_at(t_prev)).collect();
        let needs_factor = match &cached {
            Some((hb, st, _)) => *hb != h.to_bits() || st != &states,
            None => true,
        };
        if needs_factor {
            let mut a = vec![0.0; dim * dim];
            let stamp = |na: usize, nb: usize, ohms: f64, a: &mut Vec<f64>| {
                let g = 1.0 / ohms;
                if na != 0 {
                    a[(na - 1) * dim + (na - 1)] += g;
                }
                if nb != 0 {
                    a[(nb - 1) * dim + (nb - 1)] += g;
                }
                if na != 0 && nb != 0 {
                    a[(na - 1) * dim + (nb - 1)] -= g;
                    a[(nb - 1) * dim + (na - 1)] -= g;
                }
            };
            for r in &net.resistors {
                stamp(r.a, r.b, r.ohms, &mut a);
            }
            for (s, &on) in net.switches.iter().zip(&states) {
                if on {
                    stamp(s.a, s.b, s.on_resistance, &mut a);
                }
            }
            for c in &net.capacitors {
                a[(c.node - 1) * dim + (c.node - 1)] += c.farads / h;
            }
            for (k, s) in net.sources.iter().enumerate() {
                a[(s.node - 1) * dim + (nv + k)] += 1.0;
                a[(nv + k) * dim + (s.node - 1)] += 1.0;
            }
            let lu = lu_factor(a, dim).map_err(|col| {
                let node = if col < nv {
                    col + 1
                } else {
                    net.sources[col - nv].node
                };
                Error::SingularSystem { node }
            })?;
            cached = Some((h.to_bits(), states, lu));
        }
        let lu = &cached.as_ref().unwrap().2;

        rhs.iter_mut().for_each(|x| *x = 0.0);
        for c in &net.capacitors {
            rhs[c.node - 1] += c.farads / h * v[c.node];
        }
        for (k, s) in net.sources.iter().enumerate() {
            rhs[nv + k] = s.value_at(t);
        }
        lu.solve(&mut rhs);
        for node in 1..net.node_count {
            v[node] = rhs[node - 1];
        }
        record(t, &v, &mut times, &mut values);
        t_prev = t;
    }

    Ok(Waveform {
        times,
        nodes: probe_nodes,
        values,
    })
}

/// First time after which the node stays within `tolerance × |swing|` of
/// `target` for the rest of the waveform, with the crossing linearly
/// interpolated between samples. Swing is measured from the node's first
/// sample to the target.
pub fn settle_time(w: &Waveform, node: usize, target: f64, tolerance: f64) -> Result<f64> {
    ensure(
        tolerance > 0.0 && tolerance < 1.0,
        "tolerance",
        "must lie in (0, 1)",
    )?;
    let row = w.voltages(node).ok_or_else(|| Error::Validation {
        field: "node".to_string(),
        message: format!("node {node} is not probed in this waveform"),
    })?;
    ensure(!row.is_empty(), "waveform", "must contain samples")?;

    let swing = (target - row[0]).abs();
    if swing == 0.0 {
        let scale = target.abs().max(1.0);
        return if row.iter().all(|&v| (v - target).abs() <= 1e-12 * scale) {
            Ok(0.0)
        } else {
            Err(Error::Unsettled)
        };
    }
    let band = tolerance * swing;
    let last_outside = row.iter().rposition(|&v| (v - target).abs() > band);
    match last_outside {
        None => Ok(0.0),
        Some(i) if i + 1 >= row.len() => Err(Error::Unsettled),
        Some(i) => {
            let (v0, v1) = (row[i], row[i + 1]);
            let (t0, t1) = (w.times[i], w.times[i + 1]);
            let boundary = if v0 > target + band {
                target + band
            } else {
                target - band
            };
            let frac = if (v1 - v0).abs() < f64::MIN_POSITIVE {
                1.0
            } else {
                ((boundary - v0) / (v1 - v0)).clamp(0.0, 1.0)
            };
            Ok(t0 + frac * (t1 - t0))
        }
    }
}

/// Relative charge imbalance of the isolated capacitive islands over
/// `[t0, t1]`: |ΣCv(t1) − ΣCv(t0)| / |ΣCv(t0)|, maximised over islands.
///
/// An island is a connected component (through resistors and switches
/// that are on during the interval) that touches no source and no ground
/// path. The interval must contain no switch events.
pub fn charge_audit(net: &RcNetwork, w: &Waveform, t0: f64, t1: f64) -> Result<f64> {
    ensure(t1 >= t0, "interval", "must satisfy t1 >= t0")?;
    if t1 - t0 <= 0.0 {
        return Ok(0.0);
    }
    for s in &net.switches {
        for &(tt, _) in &s.schedule {
            if tt > t0 + 1e-15 && tt < t1 - 1e-15 {
                return Err(Error::AuditSwitchEvent(tt));
            }
        }
    }

    let n = net.node_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for r in &net.resistors {
        union(&mut parent, r.a, r.b);
    }
    for s in &net.switches {
        if s.state_at(t0) {
            union(&mut parent, s.a, s.b);
        }
    }

    let ground_root = find(&mut parent, 0);
    let mut source_roots = std::collections::BTreeSet::new();
    for s in &net.sources {
        source_roots.insert(find(&mut parent, s.node));
    }

    let mut islands: std::collections::BTreeMap<usize, (f64, f64)> = Default::default();
    for c in &net.capacitors {
        let root = find(&mut parent, c.node);
        if root == ground_root || source_roots.contains(&root) {
            continue;
        }
        let v_start = w.value_at(c.node, t0).ok_or_else(|| Error::Validation {
            field: "waveform".to_string(),
            message: format!("capacitor node {} is not probed", c.node),
        })?;
        let v_end = w.value_at(c.node, t1).ok_or_else(|| Error::Validation {
            field: "waveform".to_string(),
            message: format!("capacitor node {} is not probed", c.node),
        })?;
        let e = islands.entry(root).or_insert((0.0, 0.0));
        e.0 += c.farads * v_start;
        e.1 += c.farads * v_end;
    }
    if islands.is_empty() {
        return Err(Error::AuditNoIsland);
    }
    Ok(islands
        .values()
        .map(|&(q0, q1)| (q1 - q0).abs() / q0.abs().max(q1.abs()).max(1e-30))
        .fold(0.0, f64::max))
}

/// Where everything sits inside a generated bitline network.
///
/// Node numbering is deterministic: ground 0, cell storage node 1, then
/// the selected bitline's sections bottom→top, then (for bl_strap) the
/// remaining strapped ladders, then the strap node (strap family), then
/// the sense-amp input node when the bond branch carries resistance.
#[derive(Debug, Clone, Serialize)]
pub struct BlNetworkMap {
    pub cell_node: usize,
    /// One entry per ladder; entry 0 is the selected bitline.
    pub ladders: Vec<Vec<usize>>,
    pub strap_node: Option<usize>,
    pub blsa_node: usize,
    pub access_switch: usize,
    pub selector_switch: Option<usize>,
    pub access_on_time: f64,
}

/// Build the sensing-path network for one configuration: storage cell at
/// `v_array` behind the access switch, per-layer RC ladder, scheme
/// wiring, and everything else precharged to `v_array / 2`.
///
/// The per-section bitline resistance of the final section rides along
/// with the element linking the ladder to the next stage (selector
/// switch, strap tie or bond branch), keeping the path total at
/// `n_layers × rbl_per_layer`. The pass transistor of the core mux is a
/// static resistor. A zero `r_bond` merges the sense-amp node into the
/// strap node.
pub fn build_bl_network(
    config: &ArrayConfig,
    op: &OperatingPoint,
) -> Result<(RcNetwork, BlNetworkMap)> {
    config.validate()?;
    op.validate()?;
    if !config.profile.is_stacked() {
        return Err(Error::RequiresStacked {
            op: "build_bl_network",
        });
    }
    ensure(
        config.profile.rbl_per_layer > 0.0,
        "rbl_per_layer",
        "must be > 0 to build a ladder network",
    )?;

    let p = &config.profile;
    let t = &config.topology;
    let layers = config.layers() as usize;
    let v_pre = op.v_array / 2.0;

    let cbl = p.cbl_per_layer * FF;
    let rbl = p.rbl_per_layer * KOHM;
    let cs = p.cs * FF;
    let r_bond = t.r_bond * KOHM;
    let c_bond = t.c_bond * FF;
    let c_strap = t.c_strap_wire * FF;
    let c_junction = t.junction_capacitance() * FF;
    // Access device approximated by its full-overdrive on-resistance.
    let r_access = op.v_pp / p.transistor.i_on * 1e6;

    let mut net = RcNetwork {
        node_count: 2, // ground + cell so far
        ..Default::default()
    };
    let add_node = |net: &mut RcNetwork| {
        let id = net.node_count;
        net.node_count += 1;
        id
    };
    let add_cap = |net: &mut RcNetwork, node: usize, farads: f64, v0: f64| {
        if farads > 0.0 {
            net.capacitors.push(Capacitor {
                node,
                farads,
                initial_voltage: v0,
            });
        }
    };

    let cell_node = 1;
    add_cap(&mut net, cell_node, cs, op.v_array);

    let ladder_count = if t.scheme == Scheme::BlStrap {
        t.bls_per_strap as usize
    } else {
        1
    };
    let mut ladders: Vec<Vec<usize>> = Vec::with_capacity(ladder_count);
    for _ in 0..ladder_count {
        let mut nodes = Vec::with_capacity(layers);
        for i in 0..layers {
            let id = add_node(&mut net);
            add_cap(&mut net, id, cbl, v_pre);
            if i > 0 {
                net.resistors.push(Resistor {
                    a: nodes[i - 1],
                    b: id,
                    ohms: rbl,
                });
            }
            nodes.push(id);
        }
        ladders.push(nodes);
    }

    let mut strap_node = None;
    let mut selector_switch = None;
    let blsa_node;
    match t.scheme {
        Scheme::DirectBlsa => {
            blsa_node = add_node(&mut net);
            add_cap(&mut net, blsa_node, c_bond, v_pre);
            net.resistors.push(Resistor {
                a: *ladders[0].last().unwrap(),
                b: blsa_node,
                ohms: rbl + r_bond,
            });
        }
        Scheme::CoreMux => {
            blsa_node = add_node(&mut net);
            add_cap(&mut net, blsa_node, c_bond + c_junction, v_pre);
            net.resistors.push(Resistor {
                a: *ladders[0].last().unwrap(),
                b: blsa_node,
                ohms: rbl + t.series_selector_resistance() * KOHM + r_bond,
            });
        }
        Scheme::BlStrap | Scheme::SelectorStrap => {
            let strap = add_node(&mut net);
            strap_node = Some(strap);
            let strap_cap = if t.scheme == Scheme::SelectorStrap {
                c_strap + c_junction
            } else {
                c_strap
            };
            add_cap(&mut net, strap, strap_cap, v_pre);
            if t.scheme == Scheme::SelectorStrap {
                selector_switch = Some(net.switches.len());
                net.switches.push(Switch {
                    a: *ladders[0].last().unwrap(),
                    b: strap,
                    on_resistance: rbl + t.series_selector_resistance() * KOHM,
                    schedule: vec![(0.0, true)],
                });
            } else {
                for ladder in &ladders {
                    net.resistors.push(Resistor {
                        a: *ladder.last().unwrap(),
                        b: strap,
                        ohms: rbl,
                    });
                }
            }
            if r_bond > 0.0 {
                blsa_node = add_node(&mut net);
                add_cap(&mut net, blsa_node, c_bond, v_pre);
                net.resistors.push(Resistor {
                    a: strap,
                    b: blsa_node,
                    ohms: r_bond,
                });
            } else {
                blsa_node = strap;
                add_cap(&mut net, strap, c_bond, v_pre);
            }
        }
    }

    let access_switch = net.switches.len();
    net.switches.push(Switch {
        a: cell_node,
        b: ladders[0][0],
        on_resistance: r_access,
        schedule: vec![(ACCESS_SWITCH_DELAY_S, true)],
    });

    net.validate()?;
    Ok((
        net,
        BlNetworkMap {
            cell_node,
            ladders,
            strap_node,
            blsa_node,
            access_switch,
            selector_switch,
            access_on_time: ACCESS_SWITCH_DELAY_S,
        },
    ))
}
