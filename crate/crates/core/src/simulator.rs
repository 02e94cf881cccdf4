//! Cycle engine.
//!
//! Arbitration is pipelined with data transfer: the round computed in cycle
//! `t` dictates the transfers of cycle `t + arbitration_latency`, and every
//! cycle runs a fresh round. One cycle of [`Simulator::step`] does, in order:
//!
//! 1. transfers for the grants that come due this cycle,
//! 2. RX buffer drain,
//! 3. injection of messages whose `inject_cycle` is this cycle,
//! 4. sub-stream emission, stream assembly and grant computation,
//! 5. the priority-policy update.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::arbitration::{ChannelGrant, ChannelId, FullStream, NodeId, PriorityMap, Scheme, SubStreamVector};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricsSummary};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub id: u64,
    pub src: NodeId,
    pub dst: NodeId,
    pub flits: u64,
    pub inject_cycle: u64,
}

impl Message {
    pub fn new(id: u64, src: usize, dst: usize, flits: u64, inject_cycle: u64) -> Self {
        Message { id, src: NodeId(src), dst: NodeId(dst), flits, inject_cycle }
    }

    pub fn validate(&self, num_nodes: usize) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidMessage { id: self.id, reason });
        if self.src == self.dst {
            return bad(format!("source and destination are both node {}", self.src));
        }
        if self.src.0 >= num_nodes || self.dst.0 >= num_nodes {
            return bad(format!(
                "node ids {} -> {} out of range for {num_nodes} nodes",
                self.src, self.dst
            ));
        }
        if self.flits == 0 {
            return bad("message carries no flits".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PriorityPolicy {
    Static,
    /// Rotate the priority map by one rank every cycle.
    Rotary,
}

impl PriorityPolicy {
    pub fn name(self) -> &'static str {
        match self {
            PriorityPolicy::Static => "static",
            PriorityPolicy::Rotary => "rotary",
        }
    }
}

impl fmt::Display for PriorityPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PriorityPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(PriorityPolicy::Static),
            "rotary" => Ok(PriorityPolicy::Rotary),
            other => Err(Error::InvalidConfig(format!(
                "unknown priority policy {other:?} (expected static or rotary)"
            ))),
        }
    }
}

/// The priority map to use for the round after `cycle`.
pub fn apply_priority_policy(pmap: &PriorityMap, policy: PriorityPolicy, _cycle: u64) -> PriorityMap {
    match policy {
        PriorityPolicy::Static => pmap.clone(),
        PriorityPolicy::Rotary => pmap.rotated(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub num_nodes: usize,
    pub num_data_channels: usize,
    pub scheme: Scheme,
    pub priority_policy: PriorityPolicy,
    pub arbitration_latency: u64,
    /// RX buffer capacity in flits; `None` is unbounded.
    pub rx_buffer_flits: Option<u64>,
    /// Flits drained from each RX buffer per cycle; `None` drains everything.
    pub rx_drain_flits_per_cycle: Option<u64>,
    pub max_cycles: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(num_nodes: usize, num_data_channels: usize, scheme: Scheme) -> Self {
        SimConfig {
            num_nodes,
            num_data_channels,
            scheme,
            priority_policy: PriorityPolicy::Static,
            arbitration_latency: 1,
            rx_buffer_flits: None,
            rx_drain_flits_per_cycle: None,
            max_cycles: 100_000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::TooFewNodes { min: 2, got: self.num_nodes });
        }
        if self.num_data_channels < 1 {
            return Err(Error::InvalidConfig("at least one data channel is required".into()));
        }
        if self.arbitration_latency < 1 {
            return Err(Error::InvalidConfig("arbitration latency must be at least 1 cycle".into()));
        }
        if self.rx_buffer_flits == Some(0) {
            return Err(Error::InvalidConfig("rx buffer must hold at least one flit".into()));
        }
        if self.rx_drain_flits_per_cycle == Some(0) {
            return Err(Error::InvalidConfig("rx drain rate must be at least one flit per cycle".into()));
        }
        Ok(())
    }
}

/// Per-node simulator state.
#[derive(Clone, Debug, Default)]
pub struct NodeState {
    queue: VecDeque<Message>,
    flits_remaining: u64,
    rx_occupancy: u64,
}

impl NodeState {
    pub fn queue(&self) -> &VecDeque<Message> {
        &self.queue
    }

    /// Unsent flits of the head message, 0 when the queue is empty.
    pub fn flits_remaining(&self) -> u64 {
        self.flits_remaining
    }

    /// Free RX buffer space; `None` is unbounded.
    pub fn rx_buffer_free(&self, capacity: Option<u64>) -> Option<u64> {
        capacity.map(|c| c.saturating_sub(self.rx_occupancy))
    }

    fn outstanding_flits(&self) -> u64 {
        self.flits_remaining + self.queue.iter().skip(1).map(|m| m.flits).sum::<u64>()
    }

    fn push(&mut self, msg: Message) {
        if self.queue.is_empty() {
            self.flits_remaining = msg.flits;
        }
        self.queue.push_back(msg);
    }

    fn retire_head(&mut self) {
        self.queue.pop_front();
        self.flits_remaining = self.queue.front().map_or(0, |m| m.flits);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransferEvent {
    pub cycle: u64,
    pub channel: ChannelId,
    pub src: NodeId,
    pub dst: NodeId,
    pub message_id: u64,
    /// One-based position of the flit within its message.
    pub flit_seq: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MessageTiming {
    pub inject_cycle: u64,
    pub first_transmit_cycle: Option<u64>,
    pub last_transmit_cycle: Option<u64>,
}

/// The outcome of one arbitration round that granted anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbitrationRound {
    pub cycle: u64,
    pub data_cycle: u64,
    pub stream: FullStream,
    pub grants: Vec<ChannelGrant>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub events: Vec<TransferEvent>,
    pub message_timings: BTreeMap<u64, MessageTiming>,
    pub rounds: Vec<ArbitrationRound>,
    pub cycles_simulated: u64,
    /// False when `max_cycles` ran out with flits still undelivered.
    pub complete: bool,
    pub summary: MetricsSummary,
}

#[derive(Debug)]
struct PendingRound {
    data_cycle: u64,
    grants: Vec<ChannelGrant>,
}

pub struct Simulator {
    config: SimConfig,
    cycle: u64,
    pmap: PriorityMap,
    nodes: Vec<NodeState>,
    staged: VecDeque<Message>,
    pending: VecDeque<PendingRound>,
    events: Vec<TransferEvent>,
    timings: BTreeMap<u64, MessageTiming>,
    rounds: Vec<ArbitrationRound>,
    injected_flits: u64,
    delivered_flits: u64,
}

impl Simulator {
    pub fn new(config: SimConfig, traffic: Vec<Message>) -> Result<Self> {
        config.validate()?;
        let mut ids = HashSet::with_capacity(traffic.len());
        for m in &traffic {
            m.validate(config.num_nodes)?;
            if !ids.insert(m.id) {
                return Err(Error::InvalidMessage { id: m.id, reason: "duplicate message id".into() });
            }
        }
        let timings = traffic
            .iter()
            .map(|m| {
                let t = MessageTiming {
                    inject_cycle: m.inject_cycle,
                    first_transmit_cycle: None,
                    last_transmit_cycle: None,
                };
                (m.id, t)
            })
            .collect();
        let mut staged = traffic;
        staged.sort_by_key(|m| m.inject_cycle);
        Ok(Simulator {
            pmap: PriorityMap::identity(config.num_nodes),
            nodes: vec![NodeState::default(); config.num_nodes],
            config,
            cycle: 0,
            staged: staged.into(),
            pending: VecDeque::new(),
            events: Vec::new(),
            timings,
            rounds: Vec::new(),
            injected_flits: 0,
            delivered_flits: 0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn priority_map(&self) -> &PriorityMap {
        &self.pmap
    }

    pub fn node(&self, node: NodeId) -> &NodeState {
        &self.nodes[node.0]
    }

    pub fn events(&self) -> &[TransferEvent] {
        &self.events
    }

    /// `(injected, delivered, outstanding)` flit counts.
    pub fn flit_balance(&self) -> (u64, u64, u64) {
        let outstanding = self.nodes.iter().map(NodeState::outstanding_flits).sum();
        (self.injected_flits, self.delivered_flits, outstanding)
    }

    /// True once every message has been injected and fully sent.
    pub fn is_drained(&self) -> bool {
        self.staged.is_empty() && self.nodes.iter().all(|n| n.queue.is_empty())
    }

    /// The word `node` would broadcast now.
    ///
    /// A node only asks for channels if it still has flits that the grants
    /// already in the pipeline will not carry.
    pub fn emit_substream(&self, node: NodeId) -> SubStreamVector {
        let state = &self.nodes[node.0];
        let can_receive = state.rx_buffer_free(self.config.rx_buffer_flits).is_none_or(|f| f >= 1);

        let mut queue = state.queue.iter();
        let mut head = queue.next().map(|m| (m.dst, state.flits_remaining));
        for round in &self.pending {
            let granted = round.grants[node.0].tx_channels.len() as u64;
            if granted == 0 {
                continue;
            }
            let Some((_, remaining)) = head.as_mut() else { break };
            *remaining = remaining.saturating_sub(granted);
            if *remaining == 0 {
                head = queue.next().map(|m| (m.dst, m.flits));
            }
        }
        match head {
            Some((dst, _)) => SubStreamVector::request(dst, can_receive),
            None => SubStreamVector::idle(can_receive),
        }
    }

    /// Advances one cycle and returns that cycle's transfer events.
    pub fn step(&mut self) -> Vec<TransferEvent> {
        let cycle = self.cycle;
        let first_event = self.events.len();

        if let Some(round) = self.pending.pop_front_if(|r| r.data_cycle == cycle) {
            self.transfer(cycle, &round.grants);
        }

        for n in &mut self.nodes {
            n.rx_occupancy = match self.config.rx_drain_flits_per_cycle {
                Some(rate) => n.rx_occupancy.saturating_sub(rate),
                None => 0,
            };
        }

        while self.staged.front().is_some_and(|m| m.inject_cycle <= cycle) {
            let msg = self.staged.pop_front().expect("front checked");
            self.injected_flits += msg.flits;
            self.nodes[msg.src.0].push(msg);
        }

        let k = self.config.num_nodes;
        let words: Vec<SubStreamVector> = (0..k).map(|n| self.emit_substream(NodeId(n))).collect();
        let stream = FullStream::new(words).expect("node state only emits valid requests");
        let grants = self.config.scheme.allocate(&stream, &self.pmap, self.config.num_data_channels);
        let data_cycle = cycle + self.config.arbitration_latency;
        if grants.iter().any(|g| !g.is_empty()) {
            self.rounds.push(ArbitrationRound { cycle, data_cycle, stream, grants: grants.clone() });
        }
        self.pending.push_back(PendingRound { data_cycle, grants });

        self.pmap = apply_priority_policy(&self.pmap, self.config.priority_policy, cycle);
        self.cycle += 1;

        self.events[first_event..].to_vec()
    }

    fn transfer(&mut self, cycle: u64, grants: &[ChannelGrant]) {
        let capacity = self.config.rx_buffer_flits;
        let mut sent: Vec<TransferEvent> = Vec::new();
        for (src, grant) in grants.iter().enumerate() {
            let Some(peer) = grant.tx_peer else { continue };
            debug_assert_eq!(grants[peer.0].rx_peer, Some(NodeId(src)));
            debug_assert_eq!(grants[peer.0].rx_channels, grant.tx_channels);
            let Some(head) = self.nodes[src].queue.front().cloned() else { continue };
            if head.dst != peer {
                continue;
            }
            let room = self.nodes[peer.0].rx_buffer_free(capacity).unwrap_or(u64::MAX);
            let remaining = self.nodes[src].flits_remaining;
            let count = remaining.min(grant.tx_channels.len() as u64).min(room);
            if count == 0 {
                continue;
            }
            let already_sent = head.flits - remaining;
            for (i, &channel) in grant.tx_channels.iter().take(count as usize).enumerate() {
                sent.push(TransferEvent {
                    cycle,
                    channel,
                    src: NodeId(src),
                    dst: peer,
                    message_id: head.id,
                    flit_seq: already_sent + i as u64 + 1,
                });
            }
            let timing = self.timings.get_mut(&head.id).expect("timing for every message");
            timing.first_transmit_cycle.get_or_insert(cycle);
            timing.last_transmit_cycle = Some(cycle);

            self.nodes[peer.0].rx_occupancy += count;
            self.delivered_flits += count;
            let node = &mut self.nodes[src];
            node.flits_remaining -= count;
            if node.flits_remaining == 0 {
                node.retire_head();
            }
        }
        sent.sort_by_key(|e| e.channel);
        self.events.extend(sent);
    }

    /// Steps until every message is delivered or `max_cycles` is reached.
    pub fn run(mut self) -> SimReport {
        while !self.is_drained() && self.cycle < self.config.max_cycles {
            self.step();
        }
        let complete = self.is_drained();
        let mut report = SimReport {
            events: self.events,
            message_timings: self.timings,
            rounds: self.rounds,
            cycles_simulated: self.cycle,
            complete,
            summary: MetricsSummary::default(),
        };
        report.summary = metrics::summarize(&report, &self.config);
        report
    }
}

/// Convenience wrapper: build and run in one call.
pub fn simulate(config: SimConfig, traffic: Vec<Message>) -> Result<SimReport> {
    Ok(Simulator::new(config, traffic)?.run())
}
