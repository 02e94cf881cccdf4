use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use streamarb::traffic::{generate_hotspot, generate_uniform, paper_example_trace};
use streamarb::{
    simulate, Message, NodeId, PriorityPolicy, Scheme, SimConfig, SimReport, Simulator, TransferEvent,
};

fn config(k: usize, m: usize, scheme: Scheme) -> SimConfig {
    SimConfig::new(k, m, scheme)
}

fn check_log(report: &SimReport, traffic: &[Message], m: usize) {
    let mut per_slot = BTreeSet::new();
    let mut by_cycle_dst: BTreeMap<(u64, NodeId), NodeId> = BTreeMap::new();
    let mut seqs: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for e in &report.events {
        assert!(e.channel.index() >= 1 && e.channel.index() <= m);
        assert!(per_slot.insert((e.cycle, e.channel)), "two flits on {e:?}");
        let src = by_cycle_dst.entry((e.cycle, e.dst)).or_insert(e.src);
        assert_eq!(*src, e.src, "destination {} hears two sources in cycle {}", e.dst, e.cycle);
        seqs.entry(e.message_id).or_default().push(e.flit_seq);
    }
    if report.complete {
        for msg in traffic {
            let s = &seqs[&msg.id];
            assert_eq!(*s, (1..=msg.flits).collect::<Vec<_>>(), "message {}", msg.id);
        }
    }
}

#[test]
fn conservation_holds_every_cycle() {
    for seed in 0..10 {
        let traffic = generate_uniform(6, 60, 0.2, 1..=6, seed).unwrap();
        for scheme in [Scheme::Mrfi, Scheme::Rfi] {
            let mut sim = Simulator::new(config(6, 5, scheme), traffic.clone()).unwrap();
            while !sim.is_drained() {
                sim.step();
                let (injected, delivered, outstanding) = sim.flit_balance();
                assert_eq!(injected, delivered + outstanding);
                assert_eq!(delivered, sim.events().len() as u64);
            }
        }
    }
}

#[test]
fn logs_are_well_formed() {
    for seed in 0..20 {
        let traffic = generate_hotspot(8, 80, 0.15, NodeId(3), 0.4, 1..=5, seed).unwrap();
        for scheme in [Scheme::Mrfi, Scheme::Rfi] {
            for policy in [PriorityPolicy::Static, PriorityPolicy::Rotary] {
                let mut cfg = config(8, 6, scheme);
                cfg.priority_policy = policy;
                let report = simulate(cfg, traffic.clone()).unwrap();
                assert!(report.complete);
                check_log(&report, &traffic, 6);
            }
        }
    }
}

#[test]
fn baseline_sends_one_flit_per_source_per_cycle() {
    let traffic = generate_uniform(5, 80, 0.3, 1..=8, 4).unwrap();
    let report = simulate(config(5, 4, Scheme::Rfi), traffic).unwrap();
    let mut seen = BTreeSet::new();
    for e in &report.events {
        assert!(seen.insert((e.cycle, e.src)), "{e:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let traffic = generate_uniform(8, 100, 0.1, 1..=4, 21).unwrap();
    for scheme in [Scheme::Mrfi, Scheme::Rfi] {
        let a = simulate(config(8, 8, scheme), traffic.clone()).unwrap();
        let b = simulate(config(8, 8, scheme), traffic.clone()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn longer_pipeline_still_delivers_everything() {
    let traffic = generate_uniform(6, 50, 0.2, 1..=6, 9).unwrap();
    let total: u64 = traffic.iter().map(|m| m.flits).sum();
    for latency in 1..=3 {
        for scheme in [Scheme::Mrfi, Scheme::Rfi] {
            let mut cfg = config(6, 4, scheme);
            cfg.arbitration_latency = latency;
            let report = simulate(cfg, traffic.clone()).unwrap();
            assert!(report.complete);
            assert_eq!(report.events.len() as u64, total);
            check_log(&report, &traffic, 4);
        }
    }
}

#[test]
fn bounded_buffers_never_overflow() {
    let traffic = generate_hotspot(6, 60, 0.3, NodeId(0), 0.8, 2..=6, 13).unwrap();
    let mut cfg = config(6, 6, Scheme::Mrfi);
    cfg.rx_buffer_flits = Some(3);
    cfg.rx_drain_flits_per_cycle = Some(2);
    let report = simulate(cfg, traffic.clone()).unwrap();
    assert!(report.complete);
    check_log(&report, &traffic, 6);
    // Occupancy after each cycle's drain, replayed from the log.
    let mut occ = [0u64; 6];
    let last = report.events.last().unwrap().cycle;
    for cycle in 0..=last {
        for e in report.events.iter().filter(|e| e.cycle == cycle) {
            occ[e.dst.index()] += 1;
            assert!(occ[e.dst.index()] <= 3);
        }
        for o in &mut occ {
            *o = o.saturating_sub(2);
        }
    }
}

#[test]
fn single_source_four_flits() {
    let traffic = vec![Message::new(0, 0, 1, 4, 0)];
    let mrfi = simulate(config(4, 4, Scheme::Mrfi), traffic.clone()).unwrap();
    let rfi = simulate(config(4, 4, Scheme::Rfi), traffic).unwrap();
    assert_eq!(mrfi.summary.transfer_cycles, 1);
    assert_eq!(rfi.summary.transfer_cycles, 4);
}

fn occupancy(events: &[TransferEvent]) -> BTreeMap<u64, usize> {
    let mut occ = BTreeMap::new();
    for e in events {
        *occ.entry(e.cycle).or_insert(0) += 1;
    }
    occ
}

#[test]
fn saturated_mrfi_fills_every_channel() {
    for seed in 0..20u64 {
        let k = 2 + (seed as usize % 7);
        let m = 1 + (seed as usize * 3 % 8);
        let cycles = 40;
        // Every message outlasts the run, so each winner always has >= M flits.
        let big = (cycles * m as u64 * 4)..=(cycles * m as u64 * 5);
        let traffic = generate_uniform(k, 10, 0.3, big, seed).unwrap();
        let mut cfg = config(k, m, Scheme::Mrfi);
        cfg.max_cycles = cycles;
        let report = simulate(cfg, traffic).unwrap();
        let occ = occupancy(&report.events);
        let (first, last) = (*occ.keys().next().unwrap(), *occ.keys().last().unwrap());
        for cycle in first..=last {
            assert_eq!(occ.get(&cycle).copied().unwrap_or(0), m, "seed {seed} cycle {cycle}");
        }
        assert_eq!(report.summary.utilization_f64(), 1.0);
    }
}

#[test]
fn mrfi_never_slower_than_baseline() {
    for seed in 0..200u64 {
        let k = 2 + (seed as usize % 7);
        let m = 1 + (seed as usize / 7 % 8);
        let traffic = generate_uniform(k, 30, 0.15, 1..=8, seed).unwrap();
        let mrfi = simulate(config(k, m, Scheme::Mrfi), traffic.clone()).unwrap();
        let rfi = simulate(config(k, m, Scheme::Rfi), traffic).unwrap();
        assert!(mrfi.complete && rfi.complete);
        assert!(
            mrfi.summary.transfer_cycles <= rfi.summary.transfer_cycles,
            "seed {seed} K={k} M={m}: {} > {}",
            mrfi.summary.transfer_cycles,
            rfi.summary.transfer_cycles
        );
        assert!(mrfi.summary.bandwidth_utilization >= rfi.summary.bandwidth_utilization);
    }
}

#[test]
fn example_grants_match_narrative() {
    let report = simulate(config(4, 4, Scheme::Mrfi), paper_example_trace()).unwrap();
    let by_cycle: Vec<(u64, usize, Vec<usize>)> = report
        .rounds
        .iter()
        .flat_map(|r| {
            r.grants.iter().enumerate().filter(|(_, g)| g.tx_peer.is_some()).map(move |(n, g)| {
                (r.data_cycle, n, g.tx_channels.iter().map(|c| c.index()).collect())
            })
        })
        .collect();
    assert_eq!(by_cycle, vec![(1, 0, vec![1, 2, 3, 4]), (2, 2, vec![1, 3]), (2, 3, vec![2, 4])]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_configs_conserve_and_stay_exclusive(
        k in 2usize..=8,
        m in 1usize..=8,
        rate in 0.0f64..0.5,
        seed in any::<u64>(),
        rotary in any::<bool>(),
        rfi in any::<bool>(),
    ) {
        let traffic = generate_uniform(k, 25, rate, 1..=6, seed).unwrap();
        let mut cfg = config(k, m, if rfi { Scheme::Rfi } else { Scheme::Mrfi });
        if rotary {
            cfg.priority_policy = PriorityPolicy::Rotary;
        }
        let total: u64 = traffic.iter().map(|m| m.flits).sum();
        let report = simulate(cfg, traffic.clone()).unwrap();
        prop_assert!(report.complete);
        prop_assert_eq!(report.events.len() as u64, total);
        check_log(&report, &traffic, m);
    }
}
