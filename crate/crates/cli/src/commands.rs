use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use num_rational::Ratio;
use streamarb::feasibility::{self, RfBudget};
use streamarb::metrics::{format_summary, summary_csv_row, SUMMARY_CSV_HEADER};
use streamarb::simulator::{simulate, SimConfig, SimReport, TransferEvent};
use streamarb::traffic::{generate_hotspot, generate_uniform, paper_example_trace, save_trace};
use streamarb::{ChannelId, Message, MetricsSummary, NodeId, Scheme};

use crate::config::load_run_config;

pub const EVENTS_CSV_HEADER: &str = "cycle,channel,src,dst,message_id,flit_seq";

pub fn events_csv(events: &[TransferEvent]) -> String {
    let mut out = String::with_capacity(EVENTS_CSV_HEADER.len() + 1 + events.len() * 16);
    out.push_str(EVENTS_CSV_HEADER);
    out.push('\n');
    for e in events {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.cycle, e.channel, e.src, e.dst, e.message_id, e.flit_seq
        ));
    }
    out
}

pub fn summary_csv<'a>(rows: impl IntoIterator<Item = &'a MetricsSummary>) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for s in rows {
        out.push_str(&summary_csv_row(s));
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn simulate_with(config: &SimConfig, scheme: Scheme, traffic: Vec<Message>) -> Result<SimReport> {
    let cfg = SimConfig { scheme, ..config.clone() };
    Ok(simulate(cfg, traffic)?)
}

pub fn cmd_run(config_path: &Path, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let cfg = load_run_config(config_path, true)?;
    let traffic = cfg.messages()?;
    let report = simulate_with(&cfg.sim, cfg.sim.scheme, traffic)?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    write_file(&out_dir.join("summary.csv"), &summary_csv([&report.summary]))?;
    write_file(&out_dir.join("events.csv"), &events_csv(&report.events))?;
    out.write_all(format_summary(&report.summary).as_bytes())?;
    if !report.complete {
        writeln!(out, "note: max_cycles reached with flits undelivered")?;
    }
    Ok(())
}

/// `(flits, transfer cycles, longest wait, utilization)` in table order.
fn table(out: &mut dyn Write, rows: &[&MetricsSummary]) -> std::io::Result<()> {
    writeln!(out, "{:<8}{:>8}{:>18}{:>15}{:>14}", "scheme", "flits", "transfer_cycles", "longest_wait", "utilization")?;
    for s in rows {
        writeln!(
            out,
            "{:<8}{:>8}{:>18}{:>15}{:>14}",
            s.scheme.to_string(),
            s.total_flits,
            s.transfer_cycles,
            s.longest_wait_cycles,
            s.utilization_percent()
        )?;
    }
    Ok(())
}

fn run_both(config: &SimConfig, traffic: Vec<Message>) -> Result<(SimReport, SimReport)> {
    let (mrfi, rfi) = std::thread::scope(|s| {
        let t = traffic.clone();
        let mrfi = s.spawn(move || simulate_with(config, Scheme::Mrfi, t));
        let rfi = simulate_with(config, Scheme::Rfi, traffic);
        (mrfi.join().expect("mrfi run panicked"), rfi)
    });
    Ok((mrfi?, rfi?))
}

pub fn cmd_compare(config_path: &Path, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let cfg = load_run_config(config_path, false)?;
    let traffic = cfg.messages()?;
    let (mrfi, rfi) = run_both(&cfg.sim, traffic)?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    write_file(&out_dir.join("summary.csv"), &summary_csv([&mrfi.summary, &rfi.summary]))?;
    write_file(&out_dir.join("events_mrfi.csv"), &events_csv(&mrfi.events))?;
    write_file(&out_dir.join("events_rfi.csv"), &events_csv(&rfi.events))?;
    table(out, &[&mrfi.summary, &rfi.summary])?;
    Ok(())
}

/// `1-4` for a contiguous run, `{1,3}` otherwise.
pub fn format_channels(set: &BTreeSet<ChannelId>) -> String {
    let ids: Vec<usize> = set.iter().map(|c| c.index()).collect();
    match (ids.first(), ids.last()) {
        (Some(&a), Some(&b)) if ids.len() > 1 && b - a + 1 == ids.len() => format!("{a}-{b}"),
        _ => {
            let parts: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        }
    }
}

/// One line per transmitting node per data cycle.
pub fn grant_narrative(report: &SimReport) -> Vec<String> {
    let mut lines = Vec::new();
    for round in &report.rounds {
        for (n, g) in round.grants.iter().enumerate() {
            if let Some(peer) = g.tx_peer {
                lines.push(format!(
                    "cycle {}: {}: channels {} → {}",
                    round.data_cycle,
                    NodeId(n).label(),
                    format_channels(&g.tx_channels),
                    peer.label()
                ));
            }
        }
    }
    lines
}

struct Expected {
    scheme: Scheme,
    flits: u64,
    transfer_cycles: u64,
    longest_wait: u64,
    utilization: Ratio<u64>,
    narrative: &'static [&'static str],
}

const EXPECTED: [Expected; 2] = [
    Expected {
        scheme: Scheme::Mrfi,
        flits: 8,
        transfer_cycles: 2,
        longest_wait: 1,
        utilization: Ratio::new_raw(1, 1),
        narrative: &[
            "cycle 1: n1: channels 1-4 → n2",
            "cycle 2: n3: channels {1,3} → n2",
            "cycle 2: n4: channels {2,4} → n1",
        ],
    },
    Expected {
        scheme: Scheme::Rfi,
        flits: 8,
        transfer_cycles: 6,
        longest_wait: 4,
        utilization: Ratio::new_raw(1, 3),
        narrative: &[],
    },
];

fn self_check(exp: &Expected, report: &SimReport) -> Vec<String> {
    let s = &report.summary;
    let mut bad = Vec::new();
    let mut check = |what: &str, got: String, want: String| {
        if got != want {
            bad.push(format!("{}: {what} is {got}, expected {want}", exp.scheme));
        }
    };
    check("total flits", s.total_flits.to_string(), exp.flits.to_string());
    check("transfer cycles", s.transfer_cycles.to_string(), exp.transfer_cycles.to_string());
    check("longest wait", s.longest_wait_cycles.to_string(), exp.longest_wait.to_string());
    check("utilization", s.bandwidth_utilization.to_string(), exp.utilization.to_string());
    if !exp.narrative.is_empty() {
        check("grant trace", grant_narrative(report).join("; "), exp.narrative.join("; "));
    }
    bad
}

/// Runs the built-in four-node example under both schemes and checks the
/// results. Returns false if anything deviated.
pub fn cmd_paper_example(out: &mut dyn Write) -> Result<bool> {
    let config = SimConfig::new(4, 4, Scheme::Mrfi);
    let (mrfi, rfi) = run_both(&config, paper_example_trace())?;

    writeln!(out, "4 nodes, 4 data channels, static priority n1 > n2 > n3 > n4")?;
    writeln!(out, "traffic: n1 -> n2 4 flits @0, n3 -> n2 2 flits @0, n4 -> n1 2 flits @1")?;
    writeln!(out)?;
    table(out, &[&mrfi.summary, &rfi.summary])?;
    for report in [&mrfi, &rfi] {
        writeln!(out)?;
        writeln!(out, "{} grants:", report.summary.scheme)?;
        for line in grant_narrative(report) {
            writeln!(out, "  {line}")?;
        }
    }

    let mismatches: Vec<String> = EXPECTED
        .iter()
        .zip([&mrfi, &rfi])
        .flat_map(|(exp, report)| self_check(exp, report))
        .collect();
    writeln!(out)?;
    if mismatches.is_empty() {
        writeln!(out, "self-check: ok")?;
    } else {
        for m in &mismatches {
            writeln!(out, "mismatch: {m}")?;
        }
    }
    Ok(mismatches.is_empty())
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrafficKind {
    Uniform,
    Hotspot { hotspot: usize, fraction: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub kind: TrafficKind,
    pub nodes: usize,
    pub cycles: u64,
    pub rate: f64,
    pub flit_min: u64,
    pub flit_max: u64,
    pub seed: u64,
}

pub fn cmd_gen_traffic(params: &GenParams, out_path: &Path, out: &mut dyn Write) -> Result<()> {
    let flits = params.flit_min..=params.flit_max;
    let messages = match params.kind {
        TrafficKind::Uniform => generate_uniform(params.nodes, params.cycles, params.rate, flits, params.seed)?,
        TrafficKind::Hotspot { hotspot, fraction } => generate_hotspot(
            params.nodes,
            params.cycles,
            params.rate,
            NodeId(hotspot),
            fraction,
            flits,
            params.seed,
        )?,
    };
    save_trace(out_path, &messages)?;
    writeln!(out, "wrote {} messages to {}", messages.len(), out_path.display())?;
    Ok(())
}

pub fn cmd_feasibility(budget: &RfBudget, out: &mut dyn Write) -> Result<()> {
    let h = feasibility::headroom(budget);
    writeln!(out, "nodes = {}", budget.num_nodes)?;
    writeln!(out, "substream_bits = {}", feasibility::substream_bits(budget.num_nodes)?)?;
    writeln!(out, "channel_bandwidth_ghz = {}", feasibility::channel_bandwidth_ghz(budget))?;
    writeln!(out, "channel_spacing_ghz = {}", budget.channel_spacing_ghz)?;
    writeln!(out, "total_arbitration_bandwidth_ghz = {}", feasibility::total_arbitration_bandwidth_ghz(budget))?;
    writeln!(out, "f_t_ghz = {}", budget.f_t_ghz)?;
    writeln!(out, "feasible = {}", h.feasible)?;
    writeln!(out, "margin_ghz = {}", h.margin_ghz)?;
    writeln!(out, "max_nodes = {}", h.max_nodes)?;
    if let Some(w) = feasibility::spacing_warning(budget) {
        writeln!(out, "warning = {w}")?;
    }
    Ok(())
}
