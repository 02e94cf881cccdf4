//! Frequency-domain stream arbitration.
//!
//! Every node broadcasts a small sub-stream vector on its own arbitration
//! channel. Because every node hears every arbitration channel, every node
//! holds the same [`FullStream`] after one round and can compute the outcome
//! for itself without any further exchange. The functions here are that
//! per-node computation, plus a single-channel baseline allocator in which a
//! source-destination pair may only ever use one data channel.
//!
//! Nodes are zero-based ([`NodeId`]); data channels are one-based
//! ([`ChannelId`], `1..=M`). Priority ranks are one-based, rank 1 being the
//! highest priority and the lowest arbitration channel.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }

    /// One-based display label, `n1` for index 0.
    pub fn label(self) -> String {
        format!("n{}", self.0 + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A data channel, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId(usize);

impl ChannelId {
    pub fn new(index: usize, num_channels: usize) -> Option<Self> {
        (1..=num_channels).contains(&index).then_some(ChannelId(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which allocator turns a round's winners into channel grants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Multiband: each winner gets every `q`-th channel starting at `p + 1`.
    Mrfi,
    /// Single-band baseline: each winner gets exactly channel `p + 1`.
    Rfi,
}

impl Scheme {
    pub fn allocate(self, stream: &FullStream, pmap: &PriorityMap, num_channels: usize) -> Vec<ChannelGrant> {
        match self {
            Scheme::Mrfi => compute_all_grants(stream, pmap, num_channels),
            Scheme::Rfi => rfi_allocate(stream, pmap, num_channels),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Mrfi => "mrfi",
            Scheme::Rfi => "rfi",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mrfi" => Ok(Scheme::Mrfi),
            "rfi" => Ok(Scheme::Rfi),
            other => Err(Error::InvalidConfig(format!(
                "unknown scheme {other:?} (expected mrfi or rfi)"
            ))),
        }
    }
}

/// One node's arbitration word for a round.
///
/// `flow_control` is the raw bit: `false` (0) means the node can accept data.
/// A vector that is not interested always carries destination 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubStreamVector {
    flow_control: bool,
    interested: bool,
    destination: NodeId,
}

impl SubStreamVector {
    pub fn new(flow_control: bool, interested: bool, destination: NodeId) -> Self {
        SubStreamVector {
            flow_control,
            interested,
            destination: if interested { destination } else { NodeId(0) },
        }
    }

    /// A node with nothing to send.
    pub fn idle(can_receive: bool) -> Self {
        Self::new(!can_receive, false, NodeId(0))
    }

    /// A node asking to transmit to `destination`.
    pub fn request(destination: NodeId, can_receive: bool) -> Self {
        Self::new(!can_receive, true, destination)
    }

    pub fn flow_control(&self) -> bool {
        self.flow_control
    }

    pub fn can_receive(&self) -> bool {
        !self.flow_control
    }

    pub fn interested(&self) -> bool {
        self.interested
    }

    /// The requested destination, if the node is interested.
    pub fn destination(&self) -> Option<NodeId> {
        self.interested.then_some(self.destination)
    }
}

/// Width of the destination field: `ceil(log2(num_nodes))`.
pub fn destination_bits(num_nodes: usize) -> usize {
    if num_nodes <= 1 {
        0
    } else {
        (usize::BITS - (num_nodes - 1).leading_zeros()) as usize
    }
}

/// Total sub-stream width: flow-control bit, interested bit, destination.
pub fn substream_width(num_nodes: usize) -> usize {
    2 + destination_bits(num_nodes)
}

/// Encodes `v` as `[flow_control, interested, destination (big-endian)]`.
pub fn encode_substream(v: &SubStreamVector, num_nodes: usize) -> Result<Vec<bool>> {
    if num_nodes < 2 {
        return Err(Error::TooFewNodes { min: 2, got: num_nodes });
    }
    if v.destination.0 >= num_nodes {
        return Err(Error::NodeOutOfRange { node: v.destination.0, num_nodes });
    }
    let width = destination_bits(num_nodes);
    let mut bits = Vec::with_capacity(2 + width);
    bits.push(v.flow_control);
    bits.push(v.interested);
    bits.extend((0..width).rev().map(|b| (v.destination.0 >> b) & 1 == 1));
    Ok(bits)
}

/// Inverse of [`encode_substream`]. The destination of an uninterested word is
/// canonicalized to 0.
pub fn decode_substream(bits: &[bool], num_nodes: usize) -> Result<SubStreamVector> {
    if num_nodes < 2 {
        return Err(Error::TooFewNodes { min: 2, got: num_nodes });
    }
    let expected = substream_width(num_nodes);
    if bits.len() != expected {
        return Err(Error::WordLength { expected, actual: bits.len() });
    }
    let destination = bits[2..].iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    if destination >= num_nodes {
        return Err(Error::NodeOutOfRange { node: destination, num_nodes });
    }
    Ok(SubStreamVector::new(bits[0], bits[1], NodeId(destination)))
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::BadBit(other)),
        })
        .collect()
}

/// All sub-stream vectors of one round, indexed by node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FullStream {
    vectors: Vec<SubStreamVector>,
}

impl FullStream {
    pub fn new(vectors: Vec<SubStreamVector>) -> Result<Self> {
        let k = vectors.len();
        if k == 0 {
            return Err(Error::TooFewNodes { min: 1, got: 0 });
        }
        for (n, v) in vectors.iter().enumerate() {
            if let Some(dst) = v.destination() {
                if dst.0 >= k {
                    return Err(Error::NodeOutOfRange { node: dst.0, num_nodes: k });
                }
                if dst.0 == n {
                    return Err(Error::SelfDirected(NodeId(n)));
                }
            }
        }
        Ok(FullStream { vectors })
    }

    /// A stream in which nobody is interested and everyone can receive.
    pub fn quiet(num_nodes: usize) -> Self {
        FullStream { vectors: vec![SubStreamVector::idle(true); num_nodes] }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, node: NodeId) -> &SubStreamVector {
        &self.vectors[node.0]
    }

    pub fn vectors(&self) -> &[SubStreamVector] {
        &self.vectors
    }

    /// Per-node bit strings, in node order.
    pub fn words(&self) -> Result<Vec<String>> {
        let k = self.len();
        self.vectors
            .iter()
            .map(|v| encode_substream(v, k).map(|b| bits_to_string(&b)))
            .collect()
    }
}

/// Builds the full stream from per-node words received on the arbitration
/// channels. Insertion order does not matter.
pub fn assemble_full_stream<I>(words: I, num_nodes: usize) -> Result<FullStream>
where
    I: IntoIterator<Item = (NodeId, SubStreamVector)>,
{
    let mut slots: Vec<Option<SubStreamVector>> = vec![None; num_nodes];
    for (node, v) in words {
        let slot = slots
            .get_mut(node.0)
            .ok_or(Error::NodeOutOfRange { node: node.0, num_nodes })?;
        if slot.replace(v).is_some() {
            return Err(Error::InvalidConfig(format!("duplicate sub-stream vector for node {node}")));
        }
    }
    let vectors = slots
        .into_iter()
        .enumerate()
        .map(|(n, v)| v.ok_or(Error::MissingNode(NodeId(n))))
        .collect::<Result<Vec<_>>>()?;
    FullStream::new(vectors)
}

/// Bijection from priority rank (1 = highest) to node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriorityMap {
    rank_to_node: Vec<NodeId>,
}

impl PriorityMap {
    pub fn new(rank_to_node: Vec<NodeId>) -> Result<Self> {
        let k = rank_to_node.len();
        let distinct: HashSet<_> = rank_to_node.iter().collect();
        if k == 0 || distinct.len() != k || rank_to_node.iter().any(|n| n.0 >= k) {
            return Err(Error::NotAPermutation(k));
        }
        Ok(PriorityMap { rank_to_node })
    }

    /// Node `i` holds rank `i + 1`.
    pub fn identity(num_nodes: usize) -> Self {
        PriorityMap { rank_to_node: (0..num_nodes).map(NodeId).collect() }
    }

    pub fn len(&self) -> usize {
        self.rank_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_to_node.is_empty()
    }

    /// Node holding one-based `rank`.
    pub fn node_at(&self, rank: usize) -> NodeId {
        self.rank_to_node[rank - 1]
    }

    /// One-based rank of `node`.
    pub fn rank_of(&self, node: NodeId) -> usize {
        self.rank_to_node.iter().position(|&n| n == node).expect("node in priority map") + 1
    }

    pub fn ranks(&self) -> &[NodeId] {
        &self.rank_to_node
    }

    /// Rank-1 holder drops to rank K, everyone else moves up one.
    pub fn rotated(&self) -> Self {
        let mut rank_to_node = self.rank_to_node.clone();
        rank_to_node.rotate_left(1);
        PriorityMap { rank_to_node }
    }
}

/// Channels a node will use in the next data cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChannelGrant {
    pub tx_channels: BTreeSet<ChannelId>,
    pub rx_channels: BTreeSet<ChannelId>,
    pub tx_peer: Option<NodeId>,
    pub rx_peer: Option<NodeId>,
}

impl ChannelGrant {
    pub fn is_empty(&self) -> bool {
        self.tx_peer.is_none() && self.rx_peer.is_none()
    }
}

/// A source-destination pair that won a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WinnerRecord {
    pub source: NodeId,
    pub destination: NodeId,
    /// One-based priority rank of the source.
    pub rank: usize,
    /// Number of winning pairs with higher priority.
    pub p: usize,
}

fn check_shapes(stream: &FullStream, pmap: &PriorityMap, num_channels: usize) {
    assert_eq!(stream.len(), pmap.len(), "stream and priority map disagree on node count");
    assert!(num_channels >= 1, "at least one data channel is required");
}

/// Walks ranks from highest to lowest priority. A source wins when it is
/// interested and its destination is still available; the destination is then
/// claimed for the rest of the round. At most `num_channels` pairs win.
pub fn scan_winners(stream: &FullStream, pmap: &PriorityMap, num_channels: usize) -> Vec<WinnerRecord> {
    check_shapes(stream, pmap, num_channels);
    // Local copy: the received stream itself is never modified.
    let mut busy: Vec<bool> = stream.vectors().iter().map(|v| v.flow_control()).collect();
    let mut winners = Vec::new();
    for rank in 1..=pmap.len() {
        let source = pmap.node_at(rank);
        let Some(destination) = stream.get(source).destination() else {
            continue;
        };
        if busy[destination.0] {
            continue;
        }
        busy[destination.0] = true;
        winners.push(WinnerRecord { source, destination, rank, p: winners.len() });
        if winners.len() == num_channels {
            break;
        }
    }
    winners
}

fn stride_channels(p: usize, q: usize, num_channels: usize) -> BTreeSet<ChannelId> {
    (p + 1..=num_channels).step_by(q).map(ChannelId).collect()
}

/// Channels `p + 1 + j*q` for `j = 0, 1, ...` not exceeding `num_channels`.
pub fn allocate_channels(p: usize, q: usize, num_channels: usize) -> Result<BTreeSet<ChannelId>> {
    if p >= q || q > num_channels {
        return Err(Error::InvalidAllocation { p, q, m: num_channels });
    }
    Ok(stride_channels(p, q, num_channels))
}

fn grant_for(winners: &[WinnerRecord], me: NodeId, channels: impl Fn(usize) -> BTreeSet<ChannelId>) -> ChannelGrant {
    let mut grant = ChannelGrant::default();
    for w in winners {
        if w.source == me {
            grant.tx_channels = channels(w.p);
            grant.tx_peer = Some(w.destination);
        }
        if w.destination == me {
            grant.rx_channels = channels(w.p);
            grant.rx_peer = Some(w.source);
        }
    }
    grant
}

fn mrfi_grant(winners: &[WinnerRecord], num_channels: usize, me: NodeId) -> ChannelGrant {
    let q = winners.len();
    grant_for(winners, me, |p| stride_channels(p, q, num_channels))
}

fn rfi_grant(winners: &[WinnerRecord], me: NodeId) -> ChannelGrant {
    grant_for(winners, me, |p| BTreeSet::from([ChannelId(p + 1)]))
}

/// The grant node `me` derives from the shared stream.
pub fn compute_grant(stream: &FullStream, pmap: &PriorityMap, num_channels: usize, me: NodeId) -> ChannelGrant {
    assert!(me.0 < stream.len(), "node {me} outside the stream");
    let winners = scan_winners(stream, pmap, num_channels);
    mrfi_grant(&winners, num_channels, me)
}

/// Every node's grant, indexed by node.
pub fn compute_all_grants(stream: &FullStream, pmap: &PriorityMap, num_channels: usize) -> Vec<ChannelGrant> {
    let winners = scan_winners(stream, pmap, num_channels);
    (0..stream.len())
        .map(|n| mrfi_grant(&winners, num_channels, NodeId(n)))
        .collect()
}

/// Single-channel baseline: same winners, but winner `p` only gets channel
/// `p + 1`.
pub fn rfi_allocate(stream: &FullStream, pmap: &PriorityMap, num_channels: usize) -> Vec<ChannelGrant> {
    let winners = scan_winners(stream, pmap, num_channels);
    (0..stream.len()).map(|n| rfi_grant(&winners, NodeId(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(ids: &[usize]) -> BTreeSet<ChannelId> {
        ids.iter().map(|&i| ChannelId(i)).collect()
    }

    fn word(s: &str, k: usize) -> SubStreamVector {
        decode_substream(&bits_from_str(s).unwrap(), k).unwrap()
    }

    fn stream(words: &[&str]) -> FullStream {
        FullStream::new(words.iter().map(|w| word(w, words.len())).collect()).unwrap()
    }

    #[test]
    fn encodes_example_words() {
        let enc = |v: SubStreamVector| bits_to_string(&encode_substream(&v, 4).unwrap());
        assert_eq!(enc(SubStreamVector::request(NodeId(1), true)), "0101");
        assert_eq!(enc(SubStreamVector::request(NodeId(0), true)), "0100");
        assert_eq!(enc(SubStreamVector::idle(true)), "0000");
    }

    #[test]
    fn decodes_example_words() {
        assert_eq!(word("0101", 4), SubStreamVector::request(NodeId(1), true));
        assert_eq!(word("0000", 4), SubStreamVector::idle(true));
    }

    #[test]
    fn width_follows_log2() {
        assert_eq!(substream_width(2), 3);
        assert_eq!(substream_width(3), 4);
        assert_eq!(substream_width(4), 4);
        assert_eq!(substream_width(5), 5);
        assert_eq!(substream_width(16), 6);
        assert_eq!(substream_width(17), 7);
    }

    #[test]
    fn encode_rejects_bad_inputs() {
        let v = SubStreamVector::request(NodeId(4), true);
        assert!(matches!(encode_substream(&v, 4), Err(Error::NodeOutOfRange { node: 4, .. })));
        assert!(matches!(encode_substream(&SubStreamVector::idle(true), 1), Err(Error::TooFewNodes { .. })));
    }

    #[test]
    fn decode_rejects_bad_words() {
        assert!(matches!(
            decode_substream(&bits_from_str("010").unwrap(), 4),
            Err(Error::WordLength { expected: 4, actual: 3 })
        ));
        // K = 3 uses two destination bits; codepoint 3 is unused.
        assert!(matches!(
            decode_substream(&bits_from_str("0111").unwrap(), 3),
            Err(Error::NodeOutOfRange { node: 3, num_nodes: 3 })
        ));
        assert!(matches!(bits_from_str("01x1"), Err(Error::BadBit('x'))));
    }

    #[test]
    fn every_four_bit_word_round_trips() {
        for code in 0u8..16 {
            let bits: Vec<bool> = (0..4).rev().map(|b| (code >> b) & 1 == 1).collect();
            let v = decode_substream(&bits, 4).unwrap();
            let mut canonical = bits.clone();
            if !bits[1] {
                canonical[2] = false;
                canonical[3] = false;
            }
            assert_eq!(encode_substream(&v, 4).unwrap(), canonical, "word {code:04b}");
            assert_eq!(decode_substream(&canonical, 4).unwrap(), v);
        }
    }

    #[test]
    fn assembly_is_order_independent() {
        let cycle0 = ["0101", "0000", "0101", "0000"];
        let fwd: Vec<_> = cycle0.iter().enumerate().map(|(n, w)| (NodeId(n), word(w, 4))).collect();
        let mut rev = fwd.clone();
        rev.reverse();
        let a = assemble_full_stream(fwd, 4).unwrap();
        let b = assemble_full_stream(rev, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.words().unwrap(), cycle0);
    }

    #[test]
    fn assembly_errors() {
        let words = vec![(NodeId(0), SubStreamVector::idle(true))];
        assert!(matches!(assemble_full_stream(words, 2), Err(Error::MissingNode(NodeId(1)))));
        let single = assemble_full_stream(vec![(NodeId(0), SubStreamVector::idle(true))], 1).unwrap();
        assert_eq!(single.len(), 1);
        let selfish = vec![
            (NodeId(0), SubStreamVector::request(NodeId(0), true)),
            (NodeId(1), SubStreamVector::idle(true)),
        ];
        assert!(matches!(assemble_full_stream(selfish, 2), Err(Error::SelfDirected(NodeId(0)))));
    }

    #[test]
    fn priority_map_validation_and_rotation() {
        assert!(PriorityMap::new(vec![NodeId(0), NodeId(0)]).is_err());
        assert!(PriorityMap::new(vec![NodeId(0), NodeId(2)]).is_err());
        let pm = PriorityMap::identity(4);
        let r = pm.rotated();
        assert_eq!(r.ranks(), &[NodeId(1), NodeId(2), NodeId(3), NodeId(0)]);
        assert_eq!(r.rank_of(NodeId(0)), 4);
        let mut back = pm.clone();
        for _ in 0..4 {
            back = back.rotated();
        }
        assert_eq!(back, pm);
    }

    #[test]
    fn scan_cycle0_one_winner() {
        let s = stream(&["0101", "0000", "0101", "0000"]);
        let w = scan_winners(&s, &PriorityMap::identity(4), 4);
        assert_eq!(w, vec![WinnerRecord { source: NodeId(0), destination: NodeId(1), rank: 1, p: 0 }]);
    }

    #[test]
    fn scan_cycle1_two_winners() {
        let s = stream(&["0000", "0000", "0101", "0100"]);
        let w = scan_winners(&s, &PriorityMap::identity(4), 4);
        assert_eq!(w.len(), 2);
        assert_eq!((w[0].source, w[0].destination, w[0].p), (NodeId(2), NodeId(1), 0));
        assert_eq!((w[1].source, w[1].destination, w[1].p), (NodeId(3), NodeId(0), 1));
    }

    #[test]
    fn scan_stops_at_channel_count() {
        // Four disjoint pairs but only two channels.
        let s = stream(&["0101", "0110", "0111", "0100"]);
        let w = scan_winners(&s, &PriorityMap::identity(4), 2);
        assert_eq!(w.len(), 2);
        assert_eq!(w[1].source, NodeId(1));
    }

    #[test]
    fn scan_respects_busy_destination() {
        // n2 signals it cannot receive.
        let s = stream(&["0101", "1000", "0000", "0000"]);
        assert!(scan_winners(&s, &PriorityMap::identity(4), 4).is_empty());
    }

    #[test]
    fn quiet_stream_has_no_winners() {
        let s = FullStream::quiet(4);
        assert!(scan_winners(&s, &PriorityMap::identity(4), 4).is_empty());
        for g in compute_all_grants(&s, &PriorityMap::identity(4), 4) {
            assert!(g.is_empty());
        }
        for g in rfi_allocate(&s, &PriorityMap::identity(4), 4) {
            assert!(g.is_empty());
        }
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(allocate_channels(0, 1, 4).unwrap(), ch(&[1, 2, 3, 4]));
        assert_eq!(allocate_channels(0, 2, 4).unwrap(), ch(&[1, 3]));
        assert_eq!(allocate_channels(1, 2, 4).unwrap(), ch(&[2, 4]));
        assert_eq!(allocate_channels(0, 3, 6).unwrap(), ch(&[1, 4]));
        assert_eq!(allocate_channels(1, 3, 6).unwrap(), ch(&[2, 5]));
        assert_eq!(allocate_channels(2, 3, 6).unwrap(), ch(&[3, 6]));
    }

    #[test]
    fn allocation_rejects_bad_parameters() {
        assert!(matches!(allocate_channels(2, 2, 4), Err(Error::InvalidAllocation { .. })));
        assert!(matches!(allocate_channels(0, 5, 4), Err(Error::InvalidAllocation { .. })));
    }

    #[test]
    fn grants_for_example_rounds() {
        let pm = PriorityMap::identity(4);
        let c0 = stream(&["0101", "0000", "0101", "0000"]);
        let g = compute_grant(&c0, &pm, 4, NodeId(0));
        assert_eq!(g.tx_channels, ch(&[1, 2, 3, 4]));
        assert_eq!(g.tx_peer, Some(NodeId(1)));
        assert!(g.rx_channels.is_empty());
        assert!(compute_grant(&c0, &pm, 4, NodeId(2)).is_empty());

        let c1 = stream(&["0000", "0000", "0101", "0100"]);
        let all = compute_all_grants(&c1, &pm, 4);
        assert_eq!(all[0].rx_channels, ch(&[2, 4]));
        assert_eq!(all[0].rx_peer, Some(NodeId(3)));
        assert!(all[0].tx_channels.is_empty());
        assert_eq!(all[1].rx_channels, ch(&[1, 3]));
        assert_eq!(all[2].tx_channels, ch(&[1, 3]));
        assert_eq!(all[3].tx_channels, ch(&[2, 4]));
        for (n, g) in all.iter().enumerate() {
            assert_eq!(*g, compute_grant(&c1, &pm, 4, NodeId(n)));
        }
    }

    #[test]
    fn baseline_grants_single_channel() {
        let pm = PriorityMap::identity(4);
        let c0 = stream(&["0101", "0000", "0101", "0000"]);
        let g = rfi_allocate(&c0, &pm, 4);
        assert_eq!(g[0].tx_channels, ch(&[1]));
        assert_eq!(g[1].rx_channels, ch(&[1]));
        let c1 = stream(&["0000", "0000", "0101", "0100"]);
        let g = rfi_allocate(&c1, &pm, 4);
        assert_eq!(g[2].tx_channels, ch(&[1]));
        assert_eq!(g[3].tx_channels, ch(&[2]));
        assert_eq!(g[0].rx_channels, ch(&[2]));
    }

    #[test]
    fn full_duplex_node_holds_both_grants() {
        // n1 -> n2 and n2 -> n1 in the same round.
        let s = stream(&["0101", "0100", "0000", "0000"]);
        let g = compute_all_grants(&s, &PriorityMap::identity(4), 4);
        assert_eq!(g[0].tx_channels, ch(&[1, 3]));
        assert_eq!(g[0].rx_channels, ch(&[2, 4]));
    }

    #[test]
    fn scheme_parses() {
        assert_eq!("mrfi".parse::<Scheme>().unwrap(), Scheme::Mrfi);
        assert_eq!("rfi".parse::<Scheme>().unwrap(), Scheme::Rfi);
        assert!("tdma".parse::<Scheme>().is_err());
    }
}
