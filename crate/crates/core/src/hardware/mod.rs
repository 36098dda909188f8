//! Physical model of a neutral-atom array: timing constants, site layout,
//! connectivity and movement graphs, initial placement and parallelism rules.

mod graph;
mod layout;
mod mapping;
mod parallel;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use graph::{build_connectivity_graph, build_movement_graph, SiteGraph};
pub use layout::{distance, Layout, Point};
pub use mapping::{initial_mapping, Mapping};
pub use parallel::{can_parallel_cz, can_parallel_moves, cz_pairs_compatible, moves_compatible, MovePath};

/// Timing and geometry of one device. Times in microseconds, lengths in
/// micrometres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareModel {
    pub name: String,
    /// Duration of `Rz(pi)`.
    pub t_rz_pi: f64,
    /// Duration of `GR(pi, phi)`.
    pub t_gr_pi: f64,
    pub t_cz: f64,
    /// Atom transport speed in um/us.
    pub move_speed: f64,
    /// Blockade radius.
    pub r_b: f64,
    /// Grid spacing `s`.
    pub spacing: f64,
    /// Minimum trap separation `d_thr`.
    pub d_thr: f64,
    /// `(rows, cols)`; chosen from the qubit count when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<(usize, usize)>,
    /// Longest direct move; `2 * spacing` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub movement_cutoff: Option<f64>,
    /// Multiplier applied to every error probability.
    pub error_scale: f64,
}

/// Partial model as read from a config file; unset keys keep the base preset.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct HardwareFile {
    preset: Option<String>,
    name: Option<String>,
    t_rz_pi: Option<f64>,
    t_gr_pi: Option<f64>,
    t_cz: Option<f64>,
    move_speed: Option<f64>,
    r_b: Option<f64>,
    spacing: Option<f64>,
    d_thr: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
    movement_cutoff: Option<f64>,
    error_scale: Option<f64>,
}

impl HardwareModel {
    fn base(name: &str, t_rz_pi: f64, t_gr_pi: f64, t_cz: f64) -> Self {
        Self {
            name: name.to_string(),
            t_rz_pi,
            t_gr_pi,
            t_cz,
            move_speed: 0.55,
            r_b: 7.0,
            spacing: 5.0,
            d_thr: 1.0,
            grid: None,
            movement_cutoff: None,
            error_scale: 0.1,
        }
    }

    /// Fast global gates, slow CZ.
    pub fn a1() -> Self {
        Self::base("A1", 0.25, 0.25, 2.5)
    }

    /// Slow global gates, fast CZ.
    pub fn a2() -> Self {
        Self::base("A2", 0.2, 5.0, 0.75)
    }

    /// Named preset, case-insensitive.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "A1" => Some(Self::a1()),
            "A2" => Some(Self::a2()),
            _ => None,
        }
    }

    /// Parses a TOML key-value description. `preset = "A2"` selects the base
    /// values (default A1); every other key overrides one field.
    ///
    /// ```toml
    /// preset = "A2"
    /// r_b = 9.0
    /// rows = 4
    /// cols = 4
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let f: HardwareFile = toml::from_str(text)?;
        let mut hw = match &f.preset {
            Some(p) => Self::preset(p)
                .ok_or_else(|| Error::InvalidHardware(format!("unknown preset `{p}`")))?,
            None => Self::a1(),
        };
        if let Some(v) = f.name {
            hw.name = v;
        } else if f.preset.is_none() {
            hw.name = "custom".into();
        }
        macro_rules! set {
            ($($field:ident),*) => {$( if let Some(v) = f.$field { hw.$field = v; } )*};
        }
        set!(t_rz_pi, t_gr_pi, t_cz, move_speed, r_b, spacing, d_thr, error_scale);
        if f.movement_cutoff.is_some() {
            hw.movement_cutoff = f.movement_cutoff;
        }
        match (f.rows, f.cols) {
            (Some(r), Some(c)) => hw.grid = Some((r, c)),
            (None, None) => {}
            _ => return Err(Error::InvalidHardware("`rows` and `cols` must be given together".into())),
        }
        hw.validate()?;
        Ok(hw)
    }

    /// Checks physical consistency.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("t_rz_pi", self.t_rz_pi),
            ("t_gr_pi", self.t_gr_pi),
            ("t_cz", self.t_cz),
            ("move_speed", self.move_speed),
            ("r_b", self.r_b),
            ("spacing", self.spacing),
            ("d_thr", self.d_thr),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidHardware(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.error_scale.is_finite() && self.error_scale >= 0.0) {
            return Err(Error::InvalidHardware(format!(
                "error_scale must be non-negative, got {}",
                self.error_scale
            )));
        }
        if self.r_b <= self.spacing {
            return Err(Error::InvalidHardware(format!(
                "blockade radius {} must exceed spacing {} or no CZ can run",
                self.r_b, self.spacing
            )));
        }
        if self.d_thr >= self.spacing {
            return Err(Error::InvalidHardware(format!(
                "d_thr {} must be below spacing {}",
                self.d_thr, self.spacing
            )));
        }
        if let Some(c) = self.movement_cutoff {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidHardware(format!("movement_cutoff must be positive, got {c}")));
            }
        }
        if let Some((r, c)) = self.grid {
            if r == 0 || c == 0 {
                return Err(Error::InvalidHardware("grid dimensions must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn movement_cutoff(&self) -> f64 {
        self.movement_cutoff.unwrap_or(2.0 * self.spacing)
    }

    /// Grid shape for `n` atoms: the configured one, or the smallest
    /// near-square grid with `cols = ceil(sqrt(n))`.
    pub fn grid_for(&self, n: usize) -> Result<(usize, usize)> {
        let (rows, cols) = match self.grid {
            Some(g) => g,
            None => {
                let n = n.max(1);
                let cols = (n as f64).sqrt().ceil() as usize;
                (n.div_ceil(cols), cols)
            }
        };
        if rows * cols < n {
            return Err(Error::InsufficientSites {
                sites: rows * cols,
                qubits: n,
            });
        }
        Ok((rows, cols))
    }

    /// Evenly spaced layout for `n` atoms.
    pub fn layout_for(&self, n: usize) -> Result<Layout> {
        let (rows, cols) = self.grid_for(n)?;
        Ok(Layout::new(rows, cols, self.spacing, self.d_thr))
    }
}
