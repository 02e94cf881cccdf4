//! Stream arbitration for frequency-division multiplexed NoC interconnects.
//!
//! [`arbitration`] holds the pure per-node grant computation for the
//! multiband (MRFI) scheme and the single-band (RF-I) baseline.
//! [`simulator`] drives it cycle by cycle over a message workload from
//! [`traffic`]; [`metrics`] turns the resulting event log into utilization,
//! wait and transfer-window numbers. [`feasibility`] is the arbitration
//! spectrum budget calculator.

pub mod arbitration;
pub mod error;
pub mod feasibility;
pub mod metrics;
pub mod simulator;
pub mod traffic;

pub use arbitration::{
    allocate_channels, compute_all_grants, compute_grant, rfi_allocate, scan_winners, ChannelGrant, ChannelId,
    FullStream, NodeId, PriorityMap, Scheme, SubStreamVector, WinnerRecord,
};
pub use error::{Error, Result};
pub use metrics::MetricsSummary;
pub use simulator::{simulate, Message, PriorityPolicy, SimConfig, SimReport, Simulator, TransferEvent};
