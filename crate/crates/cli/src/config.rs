//! `key = value` run configuration files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use streamarb::simulator::{PriorityPolicy, SimConfig};
use streamarb::traffic::{generate_hotspot, generate_uniform, load_trace, paper_example_trace};
use streamarb::{Message, NodeId, Scheme};

const KNOWN_KEYS: &[&str] = &[
    "nodes",
    "data_channels",
    "scheme",
    "priority_policy",
    "arbitration_latency",
    "rx_buffer",
    "rx_drain",
    "max_cycles",
    "trace",
    "kind",
    "rate",
    "cycles",
    "flit_min",
    "flit_max",
    "hotspot",
    "hotspot_fraction",
    "seed",
];

const GENERATOR_KEYS: &[&str] = &["rate", "cycles", "flit_min", "flit_max", "hotspot", "hotspot_fraction"];

#[derive(Clone, Debug, PartialEq)]
pub enum TrafficSource {
    Trace(PathBuf),
    Example,
    Uniform { cycles: u64, rate: f64, flit_min: u64, flit_max: u64, seed: u64 },
    Hotspot { cycles: u64, rate: f64, flit_min: u64, flit_max: u64, hotspot: usize, fraction: f64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub sim: SimConfig,
    /// False when the file had no `scheme` key.
    pub scheme_given: bool,
    pub traffic: TrafficSource,
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries<'a> {
    path: &'a Path,
    map: BTreeMap<String, Entry>,
}

impl Entries<'_> {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.map.get(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.raw(key) else { return Ok(None) };
        e.value
            .parse::<T>()
            .map(Some)
            .map_err(|err| anyhow!("{}:{}: {key}: {err} ({:?})", self.path.display(), e.line, e.value))
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?
            .ok_or_else(|| anyhow!("{}: missing required key `{key}`", self.path.display()))
    }

    fn limit(&self, key: &str) -> Result<Option<Option<u64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) if e.value == "unbounded" => Ok(Some(None)),
            Some(_) => Ok(Some(self.parse::<u64>(key)?)),
        }
    }
}

pub fn parse_run_config(text: &str, path: &Path, require_scheme: bool) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{line}: expected `key = value`", path.display()))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            bail!("{}:{line}: unknown key `{key}`", path.display());
        }
        let entry = Entry { line, value: value.trim().to_string() };
        if map.insert(key.to_string(), entry).is_some() {
            bail!("{}:{line}: duplicate key `{key}`", path.display());
        }
    }
    let entries = Entries { path, map };

    let nodes: usize = entries.required("nodes")?;
    let data_channels: usize = entries.required("data_channels")?;
    let scheme = match entries.parse::<Scheme>("scheme")? {
        Some(s) => Some(s),
        None if require_scheme => bail!("{}: missing required key `scheme`", path.display()),
        None => None,
    };
    let mut sim = SimConfig::new(nodes, data_channels, scheme.unwrap_or(Scheme::Mrfi));
    if let Some(p) = entries.parse::<PriorityPolicy>("priority_policy")? {
        sim.priority_policy = p;
    }
    if let Some(l) = entries.parse::<u64>("arbitration_latency")? {
        sim.arbitration_latency = l;
    }
    if let Some(b) = entries.limit("rx_buffer")? {
        sim.rx_buffer_flits = b;
    }
    if let Some(d) = entries.limit("rx_drain")? {
        sim.rx_drain_flits_per_cycle = d;
    }
    if let Some(c) = entries.parse::<u64>("max_cycles")? {
        sim.max_cycles = c;
    }
    let seed = entries.parse::<u64>("seed")?.unwrap_or(0);
    sim.seed = seed;
    sim.validate().with_context(|| path.display().to_string())?;

    let has_trace = entries.raw("trace").is_some();
    let has_kind = entries.raw("kind").is_some();
    let traffic = match (has_trace, has_kind) {
        (true, true) => bail!("{}: `trace` and `kind` are mutually exclusive traffic sources", path.display()),
        (false, false) => bail!("{}: no traffic source (set `trace` or `kind`)", path.display()),
        (true, false) => {
            if let Some(k) = GENERATOR_KEYS.iter().find(|k| entries.raw(k).is_some()) {
                let e = entries.raw(k).expect("found above");
                bail!("{}:{}: generator key `{k}` given with a trace file", path.display(), e.line);
            }
            let rel = PathBuf::from(&entries.raw("trace").expect("checked").value);
            let base = path.parent().unwrap_or(Path::new("."));
            TrafficSource::Trace(if rel.is_absolute() { rel } else { base.join(rel) })
        }
        (false, true) => {
            let kind = entries.raw("kind").expect("checked");
            let cycles = || entries.required::<u64>("cycles");
            let rate = || entries.required::<f64>("rate");
            let flit_min = || Ok::<_, anyhow::Error>(entries.parse::<u64>("flit_min")?.unwrap_or(1));
            let flit_max = |min: u64| Ok::<_, anyhow::Error>(entries.parse::<u64>("flit_max")?.unwrap_or(min));
            match kind.value.as_str() {
                "paper" | "paper-example" => {
                    if let Some(k) = GENERATOR_KEYS.iter().find(|k| entries.raw(k).is_some()) {
                        bail!("{}: key `{k}` does not apply to the built-in example", path.display());
                    }
                    TrafficSource::Example
                }
                "uniform" => {
                    for k in ["hotspot", "hotspot_fraction"] {
                        if entries.raw(k).is_some() {
                            bail!("{}: key `{k}` only applies to kind = hotspot", path.display());
                        }
                    }
                    let min = flit_min()?;
                    TrafficSource::Uniform { cycles: cycles()?, rate: rate()?, flit_min: min, flit_max: flit_max(min)?, seed }
                }
                "hotspot" => {
                    let min = flit_min()?;
                    TrafficSource::Hotspot {
                        cycles: cycles()?,
                        rate: rate()?,
                        flit_min: min,
                        flit_max: flit_max(min)?,
                        hotspot: entries.required("hotspot")?,
                        fraction: entries.required("hotspot_fraction")?,
                        seed,
                    }
                }
                other => bail!(
                    "{}:{}: kind: unknown traffic kind {other:?} (expected uniform, hotspot or paper)",
                    path.display(),
                    kind.line
                ),
            }
        }
    };

    Ok(RunConfig { sim, scheme_given: scheme.is_some(), traffic })
}

pub fn load_run_config(path: &Path, require_scheme: bool) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_run_config(&text, path, require_scheme)
}

impl RunConfig {
    pub fn messages(&self) -> Result<Vec<Message>> {
        let k = self.sim.num_nodes;
        let msgs = match &self.traffic {
            TrafficSource::Trace(p) => load_trace(p, Some(k))?,
            TrafficSource::Example => paper_example_trace(),
            TrafficSource::Uniform { cycles, rate, flit_min, flit_max, seed } => {
                generate_uniform(k, *cycles, *rate, *flit_min..=*flit_max, *seed)?
            }
            TrafficSource::Hotspot { cycles, rate, flit_min, flit_max, hotspot, fraction, seed } => {
                generate_hotspot(k, *cycles, *rate, NodeId(*hotspot), *fraction, *flit_min..=*flit_max, *seed)?
            }
        };
        Ok(msgs)
    }
}
