//! Spectrum budget for the arbitration channels.
//!
//! Each node needs one arbitration channel wide enough to carry its
//! sub-stream word once per cycle. Symbol rate is taken as the occupied
//! bandwidth, and the technology cutoff frequency as the usable ceiling.

use crate::arbitration::substream_width;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RfBudget {
    pub num_nodes: usize,
    pub cycle_freq_ghz: f64,
    pub bits_per_symbol: u32,
    pub channel_spacing_ghz: f64,
    pub f_t_ghz: f64,
}

impl RfBudget {
    pub fn new(
        num_nodes: usize,
        cycle_freq_ghz: f64,
        bits_per_symbol: u32,
        channel_spacing_ghz: f64,
        f_t_ghz: f64,
    ) -> Result<Self> {
        if num_nodes < 2 {
            return Err(Error::TooFewNodes { min: 2, got: num_nodes });
        }
        if bits_per_symbol == 0 {
            return Err(Error::InvalidConfig("bits per symbol must be at least 1".into()));
        }
        for (name, v) in [
            ("cycle frequency", cycle_freq_ghz),
            ("channel spacing", channel_spacing_ghz),
            ("cutoff frequency", f_t_ghz),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(RfBudget { num_nodes, cycle_freq_ghz, bits_per_symbol, channel_spacing_ghz, f_t_ghz })
    }

    /// 16 nodes at 2 GHz with QAM-64, 4 GHz spacing, 350 GHz cutoff.
    pub fn reference() -> Self {
        RfBudget {
            num_nodes: 16,
            cycle_freq_ghz: 2.0,
            bits_per_symbol: 6,
            channel_spacing_ghz: 4.0,
            f_t_ghz: 350.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Headroom {
    pub feasible: bool,
    pub margin_ghz: f64,
    pub max_nodes: usize,
}

pub fn substream_bits(num_nodes: usize) -> Result<usize> {
    if num_nodes < 2 {
        return Err(Error::TooFewNodes { min: 2, got: num_nodes });
    }
    Ok(substream_width(num_nodes))
}

pub fn channel_bandwidth_ghz(budget: &RfBudget) -> f64 {
    substream_width(budget.num_nodes) as f64 / budget.bits_per_symbol as f64 * budget.cycle_freq_ghz
}

pub fn total_arbitration_bandwidth_ghz(budget: &RfBudget) -> f64 {
    budget.num_nodes as f64 * budget.channel_spacing_ghz
}

/// Set when the spacing is narrower than the per-channel bandwidth.
pub fn spacing_warning(budget: &RfBudget) -> Option<String> {
    let bw = channel_bandwidth_ghz(budget);
    (budget.channel_spacing_ghz < bw).then(|| {
        format!(
            "channel spacing {} GHz is below the per-channel bandwidth {} GHz",
            budget.channel_spacing_ghz, bw
        )
    })
}

pub fn headroom(budget: &RfBudget) -> Headroom {
    let total = total_arbitration_bandwidth_ghz(budget);
    let spacing = budget.channel_spacing_ghz;
    // Nudge the float floor so that max * spacing <= f_t < (max + 1) * spacing
    // holds in the same arithmetic used by callers.
    let mut max_nodes = (budget.f_t_ghz / spacing).floor() as usize;
    while (max_nodes + 1) as f64 * spacing <= budget.f_t_ghz {
        max_nodes += 1;
    }
    while max_nodes > 0 && max_nodes as f64 * spacing > budget.f_t_ghz {
        max_nodes -= 1;
    }
    Headroom {
        feasible: total <= budget.f_t_ghz,
        margin_ghz: budget.f_t_ghz - total,
        max_nodes,
    }
}
