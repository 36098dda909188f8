use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hardware::{distance, HardwareModel, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateClass {
    Rz,
    Gr,
    Cz,
    Move,
}

/// Time of one native gate in microseconds.
pub fn gate_duration(g: &Gate, hw: &HardwareModel, layout: &Layout) -> Result<(f64, GateClass)> {
    Ok(match *g {
        Gate::Rz { lambda, .. } => (hw.t_rz_pi * lambda.abs() / PI, GateClass::Rz),
        Gate::Gr { theta, .. } => (hw.t_gr_pi * theta.abs() / PI, GateClass::Gr),
        Gate::Cz { .. } => (hw.t_cz, GateClass::Cz),
        Gate::Move {
            from_site,
            to_site,
            from_offset,
            to_offset,
            ..
        } => {
            let len = distance(layout.point_with(from_site, from_offset), layout.point_with(to_site, to_offset));
            (len / hw.move_speed, GateClass::Move)
        }
        Gate::U3 { .. } | Gate::Swap { .. } => {
            return Err(Error::InvalidCircuit(format!("cannot time non-native gate {g:?}")))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTiming {
    pub duration: f64,
    /// Class of the longest gate; `None` for an empty moment.
    pub class: Option<GateClass>,
}

/// Execution-time breakdown. Moments run back to back; each lasts as long as
/// its slowest gate and is charged to that gate's class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurationReport {
    pub total: f64,
    pub gr_time: f64,
    pub rz_time: f64,
    pub cz_time: f64,
    pub move_time: f64,
    pub moment_count: usize,
    pub moments: Vec<MomentTiming>,
}

pub fn duration(c: &Circuit, hw: &HardwareModel, layout: &Layout) -> Result<DurationReport> {
    let mut r = DurationReport {
        total: 0.0,
        gr_time: 0.0,
        rz_time: 0.0,
        cz_time: 0.0,
        move_time: 0.0,
        moment_count: c.moments.len(),
        moments: Vec::with_capacity(c.moments.len()),
    };
    for m in &c.moments {
        let mut best: Option<(f64, GateClass)> = None;
        for g in &m.gates {
            let (t, class) = gate_duration(g, hw, layout)?;
            if best.is_none_or(|(bt, _)| t > bt) {
                best = Some((t, class));
            }
        }
        let t = best.map_or(0.0, |b| b.0);
        r.total += t;
        match best.map(|b| b.1) {
            Some(GateClass::Rz) => r.rz_time += t,
            Some(GateClass::Gr) => r.gr_time += t,
            Some(GateClass::Cz) => r.cz_time += t,
            Some(GateClass::Move) => r.move_time += t,
            None => {}
        }
        r.moments.push(MomentTiming {
            duration: t,
            class: best.map(|b| b.1),
        });
    }
    Ok(r)
}
