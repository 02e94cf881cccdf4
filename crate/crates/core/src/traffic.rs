//! Workloads: the built-in example, seeded synthetic generators, and CSV
//! trace files.
//!
//! Generators draw from [`Lcg64`], a 64-bit linear congruential generator
//! with Knuth's MMIX constants, so a `(parameters, seed)` pair describes the
//! same trace in any implementation:
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
//! ```
//!
//! The initial state is the seed. Every draw advances the state once:
//! a unit float is `(state >> 11) / 2^53` and an integer below `n` is
//! `((state >> 32) * n) >> 32`.
//!
//! Both generators walk cycles `0..cycles` and, inside each cycle, sources
//! `0..K` in order. A source injects with probability `rate`; only then are
//! the destination and the flit count drawn, in that order. Message ids are
//! assigned sequentially from 0.

use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use crate::arbitration::NodeId;
use crate::error::{Error, Result};
use crate::simulator::Message;

pub const TRACE_HEADER: &str = "inject_cycle,src,dst,flits";

#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `0..n`, `1 <= n <= 2^32`.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!((1..=1 << 32).contains(&n));
        ((self.next_u64() >> 32) * n) >> 32
    }

    pub fn in_range(&mut self, range: &RangeInclusive<u64>) -> u64 {
        range.start() + self.below(range.end() - range.start() + 1)
    }
}

/// The four-node scenario: n1 sends 4 flits to n2 and n3 sends 2 flits to n2
/// at cycle 0; n4 sends 2 flits to n1 at cycle 1.
pub fn paper_example_trace() -> Vec<Message> {
    vec![
        Message::new(0, 0, 1, 4, 0),
        Message::new(1, 2, 1, 2, 0),
        Message::new(2, 3, 0, 2, 1),
    ]
}

fn check_common(num_nodes: usize, rate: f64, flits: &RangeInclusive<u64>) -> Result<()> {
    if num_nodes < 2 {
        return Err(Error::TooFewNodes { min: 2, got: num_nodes });
    }
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidTraffic(format!("injection rate {rate} outside [0, 1]")));
    }
    if *flits.start() < 1 || flits.start() > flits.end() {
        return Err(Error::InvalidTraffic(format!(
            "flit range {}..={} must be nonempty and start at 1 or more",
            flits.start(),
            flits.end()
        )));
    }
    Ok(())
}

/// Bernoulli injection at every node, destinations uniform over the other
/// nodes.
pub fn generate_uniform(
    num_nodes: usize,
    cycles: u64,
    rate: f64,
    flits: RangeInclusive<u64>,
    seed: u64,
) -> Result<Vec<Message>> {
    check_common(num_nodes, rate, &flits)?;
    let mut rng = Lcg64::new(seed);
    let mut out = Vec::new();
    for cycle in 0..cycles {
        for src in 0..num_nodes {
            if rng.next_unit() >= rate {
                continue;
            }
            let mut dst = rng.below(num_nodes as u64 - 1) as usize;
            if dst >= src {
                dst += 1;
            }
            let f = rng.in_range(&flits);
            out.push(Message::new(out.len() as u64, src, dst, f, cycle));
        }
    }
    Ok(out)
}

/// Like [`generate_uniform`], but each message targets `hotspot` with
/// probability `hotspot_fraction`, and otherwise a uniformly chosen node that
/// is neither the source nor the hotspot. The hotspot itself only receives.
pub fn generate_hotspot(
    num_nodes: usize,
    cycles: u64,
    rate: f64,
    hotspot: NodeId,
    hotspot_fraction: f64,
    flits: RangeInclusive<u64>,
    seed: u64,
) -> Result<Vec<Message>> {
    check_common(num_nodes, rate, &flits)?;
    if hotspot.0 >= num_nodes {
        return Err(Error::NodeOutOfRange { node: hotspot.0, num_nodes });
    }
    if !(0.0..=1.0).contains(&hotspot_fraction) {
        return Err(Error::InvalidTraffic(format!(
            "hotspot fraction {hotspot_fraction} outside [0, 1]"
        )));
    }
    if hotspot_fraction < 1.0 && num_nodes < 3 {
        return Err(Error::InvalidTraffic(
            "non-hotspot destinations need at least 3 nodes".into(),
        ));
    }
    let mut rng = Lcg64::new(seed);
    let mut out = Vec::new();
    for cycle in 0..cycles {
        for src in (0..num_nodes).filter(|&s| s != hotspot.0) {
            if rng.next_unit() >= rate {
                continue;
            }
            let dst = if rng.next_unit() < hotspot_fraction {
                hotspot.0
            } else {
                // Skip both src and hotspot, in ascending order.
                let (lo, hi) = (src.min(hotspot.0), src.max(hotspot.0));
                let mut d = rng.below(num_nodes as u64 - 2) as usize;
                if d >= lo {
                    d += 1;
                }
                if d >= hi {
                    d += 1;
                }
                d
            };
            let f = rng.in_range(&flits);
            out.push(Message::new(out.len() as u64, src, dst, f, cycle));
        }
    }
    Ok(out)
}

/// Renders messages as a trace file. Ids are not stored; loading assigns row
/// indices.
pub fn format_trace(messages: &[Message]) -> String {
    let mut out = String::with_capacity(32 + messages.len() * 16);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for m in messages {
        out.push_str(&format!("{},{},{},{}\n", m.inject_cycle, m.src, m.dst, m.flits));
    }
    out
}

/// Parses trace text. `origin` only labels error messages. When `num_nodes`
/// is given, node ids are range-checked as well.
pub fn parse_trace(text: &str, origin: &Path, num_nodes: Option<usize>) -> Result<Vec<Message>> {
    let err = |line: usize, reason: String| Error::Trace { path: origin.to_path_buf(), line, reason };
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h == TRACE_HEADER => {}
        _ => return Err(err(1, format!("expected header `{TRACE_HEADER}`"))),
    }
    let mut out: Vec<Message> = Vec::new();
    let mut rows = lines.peekable();
    while let Some((lineno, line)) = rows.next() {
        if line.is_empty() && rows.peek().is_none() {
            break;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err(lineno, format!("expected 4 fields, found {}", fields.len())));
        }
        let num = |i: usize, name: &str| {
            fields[i]
                .parse::<u64>()
                .map_err(|_| err(lineno, format!("{name} {:?} is not a non-negative integer", fields[i])))
        };
        let inject_cycle = num(0, "inject_cycle")?;
        let src = num(1, "src")? as usize;
        let dst = num(2, "dst")? as usize;
        let flits = num(3, "flits")?;
        if src == dst {
            return Err(err(lineno, format!("src and dst are both {src}")));
        }
        if flits == 0 {
            return Err(err(lineno, "flits must be at least 1".into()));
        }
        if let Some(k) = num_nodes {
            if src >= k || dst >= k {
                return Err(err(lineno, format!("node id out of range for {k} nodes")));
            }
        }
        if out.last().is_some_and(|prev| prev.inject_cycle > inject_cycle) {
            return Err(err(lineno, "rows are not sorted by inject_cycle".into()));
        }
        out.push(Message::new(out.len() as u64, src, dst, flits, inject_cycle));
    }
    Ok(out)
}

pub fn load_trace(path: &Path, num_nodes: Option<usize>) -> Result<Vec<Message>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_trace(&text, path, num_nodes)
}

pub fn save_trace(path: &Path, messages: &[Message]) -> Result<()> {
    if messages.windows(2).any(|w| w[0].inject_cycle > w[1].inject_cycle) {
        return Err(Error::InvalidTraffic("messages must be sorted by inject_cycle".into()));
    }
    fs::write(path, format_trace(messages)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
