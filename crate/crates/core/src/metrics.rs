//! Comparison metrics computed from a finished run.
//!
//! The transfer window runs from the first to the last cycle that carried any
//! flit, idle cycles inside it included. Utilization is delivered flits over
//! `window * M`. A message's wait excludes the arbitration pipeline, so a
//! message that wins its first round waits 0 cycles.

use num_rational::Ratio;

use crate::arbitration::Scheme;
use crate::simulator::{SimConfig, SimReport};

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSummary {
    pub scheme: Scheme,
    pub num_nodes: usize,
    pub num_data_channels: usize,
    pub seed: u64,
    pub total_flits: u64,
    pub transfer_cycles: u64,
    pub end_to_end_cycles: u64,
    pub bandwidth_utilization: Ratio<u64>,
    /// False when there were no transfers, in which case utilization reads 0.
    pub utilization_defined: bool,
    pub longest_wait_cycles: u64,
    /// Flits received, indexed by destination node.
    pub per_node_delivered: Vec<u64>,
    pub complete: bool,
}

impl Default for MetricsSummary {
    fn default() -> Self {
        MetricsSummary {
            scheme: Scheme::Mrfi,
            num_nodes: 0,
            num_data_channels: 0,
            seed: 0,
            total_flits: 0,
            transfer_cycles: 0,
            end_to_end_cycles: 0,
            bandwidth_utilization: Ratio::new_raw(0, 1),
            utilization_defined: false,
            longest_wait_cycles: 0,
            per_node_delivered: Vec::new(),
            complete: true,
        }
    }
}

impl MetricsSummary {
    pub fn utilization_f64(&self) -> f64 {
        *self.bandwidth_utilization.numer() as f64 / *self.bandwidth_utilization.denom() as f64
    }

    /// Utilization as a percentage with one decimal, e.g. `33.3%`.
    pub fn utilization_percent(&self) -> String {
        format!("{:.1}%", self.utilization_f64() * 100.0)
    }
}

fn transfer_span(report: &SimReport) -> Option<(u64, u64)> {
    let first = report.events.iter().map(|e| e.cycle).min()?;
    let last = report.events.iter().map(|e| e.cycle).max()?;
    Some((first, last))
}

pub fn transfer_cycles(report: &SimReport) -> u64 {
    transfer_span(report).map_or(0, |(first, last)| last - first + 1)
}

/// From the earliest injection (its first arbitration round) to the last
/// delivery, inclusive.
pub fn end_to_end_cycles(report: &SimReport) -> u64 {
    let Some((_, last)) = transfer_span(report) else { return 0 };
    let start = report.message_timings.values().map(|t| t.inject_cycle).min().unwrap_or(0);
    last.saturating_sub(start) + 1
}

pub fn bandwidth_utilization(report: &SimReport, num_data_channels: usize) -> Ratio<u64> {
    let window = transfer_cycles(report);
    if window == 0 || num_data_channels == 0 {
        return Ratio::new_raw(0, 1);
    }
    Ratio::new(report.events.len() as u64, window * num_data_channels as u64)
}

pub fn longest_wait(report: &SimReport, arbitration_latency: u64) -> u64 {
    report
        .message_timings
        .values()
        .filter_map(|t| {
            let first = t.first_transmit_cycle?;
            Some(first.saturating_sub(t.inject_cycle).saturating_sub(arbitration_latency))
        })
        .max()
        .unwrap_or(0)
}

pub fn summarize(report: &SimReport, config: &SimConfig) -> MetricsSummary {
    let mut per_node_delivered = vec![0u64; config.num_nodes];
    for e in &report.events {
        per_node_delivered[e.dst.index()] += 1;
    }
    let transfer = transfer_cycles(report);
    MetricsSummary {
        scheme: config.scheme,
        num_nodes: config.num_nodes,
        num_data_channels: config.num_data_channels,
        seed: config.seed,
        total_flits: report.events.len() as u64,
        transfer_cycles: transfer,
        end_to_end_cycles: end_to_end_cycles(report),
        bandwidth_utilization: bandwidth_utilization(report, config.num_data_channels),
        utilization_defined: transfer > 0,
        longest_wait_cycles: longest_wait(report, config.arbitration_latency),
        per_node_delivered,
        complete: report.complete,
    }
}

/// Key-value rendering for terminals.
pub fn format_summary(s: &MetricsSummary) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    kv("scheme", s.scheme.to_string());
    kv("nodes", s.num_nodes.to_string());
    kv("data_channels", s.num_data_channels.to_string());
    kv("total_flits", s.total_flits.to_string());
    kv("transfer_cycles", s.transfer_cycles.to_string());
    kv("end_to_end_cycles", s.end_to_end_cycles.to_string());
    let util = if s.utilization_defined {
        s.utilization_percent()
    } else {
        format!("{} (no transfers)", s.utilization_percent())
    };
    kv("bandwidth_utilization", util);
    kv("longest_wait_cycles", s.longest_wait_cycles.to_string());
    kv("complete", s.complete.to_string());
    out
}

pub const SUMMARY_CSV_HEADER: &str =
    "scheme,nodes,data_channels,flits,transfer_cycles,end_to_end_cycles,utilization,longest_wait,seed";

pub fn summary_csv_row(s: &MetricsSummary) -> String {
    format!(
        "{},{},{},{},{},{},{:.6},{},{}",
        s.scheme,
        s.num_nodes,
        s.num_data_channels,
        s.total_flits,
        s.transfer_cycles,
        s.end_to_end_cycles,
        s.utilization_f64(),
        s.longest_wait_cycles,
        s.seed
    )
}
