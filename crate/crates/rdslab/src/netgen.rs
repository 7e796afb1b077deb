//! Population graph generation.
//!
//! Four generators are provided: plain Erdős–Rényi (`ER1`), Erdős–Rényi with
//! nested subpopulations joined through bridge nodes (`ER2`), plain
//! Barabási–Albert preferential attachment (`BA1`), and Barabási–Albert with
//! subpopulations joined through their highest-degree hubs (`BA2`). Every
//! generator targets a mean degree of 20 by default, enforces a single
//! connected component, and produces bit-identical output for identical
//! configurations.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

/// How many times generation is retried (with `seed + attempt`) before a
/// disconnected result is reported as an error.
pub const CONNECTIVITY_ATTEMPTS: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetModel {
    Er1,
    Er2,
    Ba1,
    Ba2,
}

impl NetModel {
    pub fn label(&self) -> &'static str {
        match self {
            NetModel::Er1 => "er1",
            NetModel::Er2 => "er2",
            NetModel::Ba1 => "ba1",
            NetModel::Ba2 => "ba2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er1" => Some(NetModel::Er1),
            "er2" => Some(NetModel::Er2),
            "ba1" => Some(NetModel::Ba1),
            "ba2" => Some(NetModel::Ba2),
            _ => None,
        }
    }

    pub fn clustered(&self) -> bool {
        matches!(self, NetModel::Er2 | NetModel::Ba2)
    }
}

impl fmt::Display for NetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Configuration for one population graph.
///
/// Exactly one of two parameterisations drives each model: either
/// `target_mean_degree` (the default, from which the link probability or
/// attachment count is derived) or an explicit `er_p` / `ba_m` override.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetModelConfig {
    pub model: NetModel,
    pub n: usize,
    pub target_mean_degree: f64,
    /// Literal link probability for the ER models (per block for ER2).
    pub er_p: Option<f64>,
    /// Literal links-per-new-node for the BA models; may be fractional.
    pub ba_m: Option<f64>,
    pub n_subpops: usize,
    pub bridges_per_subpop: usize,
    pub seed: u64,
}

impl NetModelConfig {
    pub fn new(model: NetModel, seed: u64) -> Self {
        NetModelConfig {
            model,
            n: 10_000,
            target_mean_degree: 20.0,
            er_p: None,
            ba_m: None,
            n_subpops: 5,
            bridges_per_subpop: 10,
            seed,
        }
    }

    /// Effective ER link probability: the literal value if set, otherwise
    /// derived so the expected mean degree matches `target_mean_degree`.
    pub fn effective_p(&self, block_size: usize) -> f64 {
        self.er_p
            .unwrap_or(self.target_mean_degree / (block_size as f64 - 1.0))
    }

    /// Effective BA attachment count: the literal value if set, otherwise
    /// `target_mean_degree / 2` (each attachment contributes two degree ends).
    pub fn effective_m(&self) -> f64 {
        self.ba_m.unwrap_or(self.target_mean_degree / 2.0)
    }

    fn block_size(&self) -> usize {
        if self.model.clustered() {
            self.n / self.n_subpops
        } else {
            self.n
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NetGenError {
    #[error("population size {0} is too small (need at least 2 nodes)")]
    PopulationTooSmall(usize),
    #[error("link probability {0} outside (0, 1]")]
    InvalidLinkProbability(f64),
    #[error("attachment count m={m} invalid for n={n} (need 1 <= m and ceil(m) < n)")]
    InvalidAttachment { m: f64, n: usize },
    #[error("n={n} not divisible by n_subpops={n_subpops}")]
    IndivisibleSubpops { n: usize, n_subpops: usize },
    #[error("bridges_per_subpop={bridges} invalid for subpopulation size {block} (need 1 <= bridges <= block)")]
    InvalidBridges { bridges: usize, block: usize },
    #[error("graph disconnected after {0} generation attempts")]
    Disconnected(u64),
    #[error("attributes already assigned")]
    AttributesAlreadyAssigned,
    #[error("model {model} requires the {param} parameter family")]
    WrongModelParameter { model: NetModel, param: &'static str },
}

/// An immutable undirected population graph with per-node attributes.
///
/// Adjacency is stored in compressed form (offsets into a flat neighbor
/// array); neighbor lists are sorted ascending. Node ids are dense `0..n`.
#[derive(Debug, Clone)]
pub struct PopulationGraph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    degree: Vec<u32>,
    e1: Vec<bool>,
    e2: Vec<bool>,
    infected: Vec<bool>,
    subpop: Vec<u32>,
    attributes_assigned: bool,
    provenance: Option<NetModelConfig>,
}

impl PopulationGraph {
    /// Build a graph from an undirected edge list (each edge once, any order).
    /// Edges are normalised, sorted and deduplicated; self-loops are dropped.
    pub fn from_edges(
        n: usize,
        edges: &[(u32, u32)],
        subpop: Vec<u32>,
        provenance: Option<NetModelConfig>,
    ) -> Self {
        let mut norm: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        norm.sort_unstable();
        norm.dedup();

        let mut degree = vec![0u32; n];
        for &(a, b) in &norm {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v] as usize;
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * norm.len()];
        for &(a, b) in &norm {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        PopulationGraph {
            n,
            offsets,
            neighbors,
            degree,
            e1: vec![false; n],
            e2: vec![false; n],
            infected: vec![false; n],
            subpop,
            attributes_assigned: false,
            provenance,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.degree[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    pub fn e1(&self, v: u32) -> bool {
        self.e1[v as usize]
    }

    pub fn e2(&self, v: u32) -> bool {
        self.e2[v as usize]
    }

    pub fn infected(&self, v: u32) -> bool {
        self.infected[v as usize]
    }

    pub fn subpop(&self, v: u32) -> u32 {
        self.subpop[v as usize]
    }

    pub fn attributes_assigned(&self) -> bool {
        self.attributes_assigned
    }

    pub fn provenance(&self) -> Option<&NetModelConfig> {
        self.provenance.as_ref()
    }

    pub fn infected_count(&self) -> usize {
        self.infected.iter().filter(|&&i| i).count()
    }

    pub fn infected_flags(&self) -> &[bool] {
        &self.infected
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n as f64
    }

    /// Undirected edges, each once, ascending `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start as u32);
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_count() == 1
    }

    pub(crate) fn set_infected(&mut self, flags: Vec<bool>) {
        assert_eq!(flags.len(), self.n);
        self.infected = flags;
    }

    pub(crate) fn clear_infected(&mut self) {
        self.infected.iter_mut().for_each(|f| *f = false);
    }

    pub(crate) fn set_attributes(&mut self, e1: Vec<bool>, e2: Vec<bool>) {
        assert_eq!(e1.len(), self.n);
        assert_eq!(e2.len(), self.n);
        self.e1 = e1;
        self.e2 = e2;
        self.attributes_assigned = true;
    }

    /// Full-scan structural check: symmetric sorted adjacency, no self-loops,
    /// no duplicate edges, degree array consistent, single component.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.offsets.len() != self.n + 1 {
            return Err("offset array length mismatch".into());
        }
        for v in 0..self.n as u32 {
            let nb = self.neighbors(v);
            if nb.len() != self.degree(v) as usize {
                return Err(format!("degree mismatch at node {v}"));
            }
            for pair in nb.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(format!("unsorted or duplicate neighbor at node {v}"));
                }
            }
            for &w in nb {
                if w == v {
                    return Err(format!("self-loop at node {v}"));
                }
                if self.neighbors(w).binary_search(&v).is_err() {
                    return Err(format!("asymmetric edge {v}-{w}"));
                }
            }
        }
        if !self.is_connected() {
            return Err("graph is not connected".into());
        }
        Ok(())
    }

    /// Write the edge list: one `"u v"` line per undirected edge, ascending.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Write the node attribute table: `id,degree,e1,e2,infected,subpop`.
    pub fn write_node_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "id,degree,e1,e2,infected,subpop")?;
        for v in 0..self.n as u32 {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                v,
                self.degree(v),
                self.e1(v) as u8,
                self.e2(v) as u8,
                self.infected(v) as u8,
                self.subpop(v),
            )?;
        }
        Ok(())
    }

    /// Read a graph back from an edge list and a node attribute table, as
    /// written by [`write_edge_list`](Self::write_edge_list) and
    /// [`write_node_csv`](Self::write_node_csv).
    pub fn import(edges_path: &Path, nodes_path: &Path) -> anyhow::Result<Self> {
        use anyhow::Context;
        let node_file = std::fs::File::open(nodes_path)
            .with_context(|| format!("opening {}", nodes_path.display()))?;
        let mut lines = std::io::BufReader::new(node_file).lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or_else(|| anyhow::anyhow!("empty node file"))?;
        if header.trim() != "id,degree,e1,e2,infected,subpop" {
            anyhow::bail!("unexpected node CSV header: {header}");
        }
        let mut e1 = Vec::new();
        let mut e2 = Vec::new();
        let mut infected = Vec::new();
        let mut subpop = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                anyhow::bail!("node CSV row {}: expected 6 fields", lineno + 2);
            }
            let id: usize = fields[0].parse()?;
            if id != e1.len() {
                anyhow::bail!("node CSV row {}: ids must be dense 0..n", lineno + 2);
            }
            e1.push(fields[2] == "1");
            e2.push(fields[3] == "1");
            infected.push(fields[4] == "1");
            subpop.push(fields[5].parse()?);
        }
        let n = e1.len();

        let edge_file = std::fs::File::open(edges_path)
            .with_context(|| format!("opening {}", edges_path.display()))?;
        let mut edges = Vec::new();
        for (lineno, line) in std::io::BufReader::new(edge_file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: u32 = it
                .next()
                .ok_or_else(|| anyhow::anyhow!("edge line {}: missing endpoint", lineno + 1))?
                .parse()?;
            let v: u32 = it
                .next()
                .ok_or_else(|| anyhow::anyhow!("edge line {}: missing endpoint", lineno + 1))?
                .parse()?;
            if u as usize >= n || v as usize >= n {
                anyhow::bail!("edge line {}: endpoint out of range", lineno + 1);
            }
            edges.push((u, v));
        }

        let mut g = PopulationGraph::from_edges(n, &edges, subpop, None);
        let attrs_set = e1.iter().any(|&b| b) || e2.iter().any(|&b| b);
        g.e1 = e1;
        g.e2 = e2;
        g.infected = infected;
        g.attributes_assigned = attrs_set;
        Ok(g)
    }
}

/// Generate a population graph for any of the four models, retrying with
/// incremented seeds until the result is connected.
pub fn generate(cfg: &NetModelConfig) -> Result<PopulationGraph, NetGenError> {
    validate(cfg)?;
    for attempt in 0..CONNECTIVITY_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(attempt));
        let g = build_once(cfg, &mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(NetGenError::Disconnected(CONNECTIVITY_ATTEMPTS))
}

pub fn generate_er1(cfg: &NetModelConfig) -> Result<PopulationGraph, NetGenError> {
    expect_model(cfg, NetModel::Er1)?;
    generate(cfg)
}

pub fn generate_er2(cfg: &NetModelConfig) -> Result<PopulationGraph, NetGenError> {
    expect_model(cfg, NetModel::Er2)?;
    generate(cfg)
}

pub fn generate_ba1(cfg: &NetModelConfig) -> Result<PopulationGraph, NetGenError> {
    expect_model(cfg, NetModel::Ba1)?;
    generate(cfg)
}

pub fn generate_ba2(cfg: &NetModelConfig) -> Result<PopulationGraph, NetGenError> {
    expect_model(cfg, NetModel::Ba2)?;
    generate(cfg)
}

fn expect_model(cfg: &NetModelConfig, want: NetModel) -> Result<(), NetGenError> {
    if cfg.model != want {
        return Err(NetGenError::WrongModelParameter {
            model: cfg.model,
            param: want.label(),
        });
    }
    Ok(())
}

fn validate(cfg: &NetModelConfig) -> Result<(), NetGenError> {
    if cfg.n < 2 {
        return Err(NetGenError::PopulationTooSmall(cfg.n));
    }
    if cfg.model.clustered() {
        if cfg.n_subpops == 0 || cfg.n % cfg.n_subpops != 0 {
            return Err(NetGenError::IndivisibleSubpops {
                n: cfg.n,
                n_subpops: cfg.n_subpops,
            });
        }
        let block = cfg.n / cfg.n_subpops;
        if cfg.bridges_per_subpop == 0 || cfg.bridges_per_subpop > block {
            return Err(NetGenError::InvalidBridges {
                bridges: cfg.bridges_per_subpop,
                block,
            });
        }
    }
    match cfg.model {
        NetModel::Er1 | NetModel::Er2 => {
            if cfg.ba_m.is_some() {
                return Err(NetGenError::WrongModelParameter {
                    model: cfg.model,
                    param: "er_p",
                });
            }
            let p = cfg.effective_p(cfg.block_size());
            if !(p > 0.0 && p <= 1.0) {
                return Err(NetGenError::InvalidLinkProbability(p));
            }
        }
        NetModel::Ba1 | NetModel::Ba2 => {
            if cfg.er_p.is_some() {
                return Err(NetGenError::WrongModelParameter {
                    model: cfg.model,
                    param: "ba_m",
                });
            }
            let m = cfg.effective_m();
            let block = cfg.block_size();
            if !(m >= 1.0) || m.ceil() as usize + 1 > block {
                return Err(NetGenError::InvalidAttachment { m, n: block });
            }
        }
    }
    Ok(())
}

fn build_once(cfg: &NetModelConfig, rng: &mut ChaCha8Rng) -> Result<PopulationGraph, NetGenError> {
    let n = cfg.n;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let subpop = match cfg.model {
        NetModel::Er1 => {
            sample_er_edges(n, cfg.effective_p(n), rng, 0, &mut edges);
            vec![0u32; n]
        }
        NetModel::Ba1 => {
            build_ba_block(n, cfg.effective_m(), rng, 0, &mut edges);
            vec![0u32; n]
        }
        NetModel::Er2 => {
            let k = cfg.n_subpops;
            let block = n / k;
            let p = cfg.effective_p(block);
            for b in 0..k {
                sample_er_edges(block, p, rng, (b * block) as u32, &mut edges);
            }
            let bridges = choose_random_bridges(k, block, cfg.bridges_per_subpop, rng);
            wire_ring(&bridges, rng, &mut edges);
            block_labels(n, k)
        }
        NetModel::Ba2 => {
            let k = cfg.n_subpops;
            let block = n / k;
            let m = cfg.effective_m();
            let mut hubs: Vec<Vec<u32>> = Vec::with_capacity(k);
            for b in 0..k {
                let deg = build_ba_block(block, m, rng, (b * block) as u32, &mut edges);
                hubs.push(top_degree_hubs(
                    &deg,
                    cfg.bridges_per_subpop,
                    (b * block) as u32,
                ));
            }
            wire_all_pairs(&hubs, rng, &mut edges);
            block_labels(n, k)
        }
    };
    Ok(PopulationGraph::from_edges(
        n,
        &edges,
        subpop,
        Some(cfg.clone()),
    ))
}

fn block_labels(n: usize, k: usize) -> Vec<u32> {
    let block = n / k;
    (0..n).map(|v| (v / block) as u32 + 1).collect()
}

/// G(n, p) edge sampling with geometric gap skipping, O(E) in expectation.
fn sample_er_edges(n: usize, p: f64, rng: &mut ChaCha8Rng, base: u32, edges: &mut Vec<(u32, u32)>) {
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((base + w as u32, base + v as u32));
            }
        }
        return;
    }
    let ln_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / ln_q).floor() as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((base + w as u32, base + v as u32));
        }
    }
}

/// Barabási–Albert preferential attachment via the edge-endpoint urn: each
/// new node attaches to distinct existing nodes drawn with probability
/// proportional to current degree. A fractional `m` attaches to `floor(m)`
/// nodes plus one more with probability `frac(m)`. Returns the block-local
/// degree sequence.
fn build_ba_block(n: usize, m: f64, rng: &mut ChaCha8Rng, base: u32, edges: &mut Vec<(u32, u32)>) -> Vec<u32> {
    let m_floor = m.floor() as usize;
    let frac = m - m.floor();
    let m_max = if frac > 0.0 { m_floor + 1 } else { m_floor };
    let seed_size = (m_max + 1).min(n);

    let mut degree = vec![0u32; n];
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * (n * m_max + seed_size * seed_size / 2));
    for v in 1..seed_size {
        for w in 0..v {
            edges.push((base + w as u32, base + v as u32));
            endpoints.push(w as u32);
            endpoints.push(v as u32);
            degree[w] += 1;
            degree[v] += 1;
        }
    }

    let mut chosen: Vec<u32> = Vec::with_capacity(m_max);
    for v in seed_size..n {
        let mi = m_floor
            + if frac > 0.0 && rng.random::<f64>() < frac {
                1
            } else {
                0
            };
        chosen.clear();
        while chosen.len() < mi {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((base + t, base + v as u32));
            degree[t as usize] += 1;
            degree[v] += 1;
        }
        for &t in &chosen {
            endpoints.push(t);
            endpoints.push(v as u32);
        }
    }
    degree
}

fn choose_random_bridges(
    k: usize,
    block: usize,
    per_block: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<u32>> {
    (0..k)
        .map(|b| {
            let base = (b * block) as u32;
            let mut ids: Vec<u32> = index::sample(rng, block, per_block)
                .iter()
                .map(|i| base + i as u32)
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect()
}

/// The `per_block` highest-degree nodes of a block, ties broken by ascending
/// node id.
fn top_degree_hubs(block_degree: &[u32], per_block: usize, base: u32) -> Vec<u32> {
    let mut order: Vec<usize> = (0..block_degree.len()).collect();
    order.sort_by(|&a, &b| {
        block_degree[b]
            .cmp(&block_degree[a])
            .then_with(|| a.cmp(&b))
    });
    let mut hubs: Vec<u32> = order[..per_block.min(order.len())]
        .iter()
        .map(|&i| base + i as u32)
        .collect();
    hubs.sort_unstable();
    hubs
}

/// ER2 cross wiring: subpopulations form a ring; every bridge node gains one
/// edge to a uniformly chosen bridge in each neighboring subpopulation.
fn wire_ring(bridges: &[Vec<u32>], rng: &mut ChaCha8Rng, edges: &mut Vec<(u32, u32)>) {
    let k = bridges.len();
    if k < 2 {
        return;
    }
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    for i in 0..k {
        let mut targets = vec![(i + 1) % k];
        if k > 2 {
            targets.push((i + k - 1) % k);
        }
        for &b in &bridges[i] {
            for &j in &targets {
                let t = bridges[j][rng.random_range(0..bridges[j].len())];
                push_cross_edge(b, t, &mut seen, edges);
            }
        }
    }
}

/// BA2 cross wiring: every hub gains one edge to a uniformly chosen hub in
/// every other subpopulation.
fn wire_all_pairs(hubs: &[Vec<u32>], rng: &mut ChaCha8Rng, edges: &mut Vec<(u32, u32)>) {
    let k = hubs.len();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    for i in 0..k {
        for &h in &hubs[i] {
            for (j, other) in hubs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let t = other[rng.random_range(0..other.len())];
                push_cross_edge(h, t, &mut seen, edges);
            }
        }
    }
}

fn push_cross_edge(a: u32, b: u32, seen: &mut HashSet<(u32, u32)>, edges: &mut Vec<(u32, u32)>) {
    let key = if a < b { (a, b) } else { (b, a) };
    if seen.insert(key) {
        edges.push(key);
    }
}

/// Assign the E1 and E2 attributes: each is true for exactly `n/2` uniformly
/// chosen nodes, independently of each other and of the graph structure.
pub fn assign_attributes(g: &PopulationGraph, seed: u64) -> Result<PopulationGraph, NetGenError> {
    if g.attributes_assigned {
        return Err(NetGenError::AttributesAlreadyAssigned);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = g.n / 2;
    let mut e1 = vec![false; g.n];
    for i in index::sample(&mut rng, g.n, half) {
        e1[i] = true;
    }
    let mut e2 = vec![false; g.n];
    for i in index::sample(&mut rng, g.n, half) {
        e2[i] = true;
    }
    let mut out = g.clone();
    out.set_attributes(e1, e2);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(model: NetModel, n: usize, seed: u64) -> NetModelConfig {
        let mut c = NetModelConfig::new(model, seed);
        c.n = n;
        c
    }

    #[test]
    fn er1_two_nodes_p_one_forms_single_edge() {
        let mut c = cfg(NetModel::Er1, 2, 1);
        c.er_p = Some(1.0);
        let g = generate_er1(&c).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn er1_derived_p_hits_target_mean_degree() {
        // Expectation oracle: mean degree = p * (n - 1) with p = 20 / 9999.
        let mut total = 0.0;
        for s in 0..20 {
            let g = generate_er1(&cfg(NetModel::Er1, 10_000, 100 + s)).unwrap();
            total += g.mean_degree();
        }
        let mean = total / 20.0;
        assert_abs_diff_eq!(mean, 20.0, epsilon = 0.3);
    }

    #[test]
    fn er1_literal_p_gives_mean_degree_25() {
        // p = 0.0025 on n = 10,000 implies mean degree p*(n-1) = 24.9975,
        // not the 20 the derived parameterisation targets.
        let mut total = 0.0;
        for s in 0..5 {
            let mut c = cfg(NetModel::Er1, 10_000, 300 + s);
            c.er_p = Some(0.0025);
            total += generate_er1(&c).unwrap().mean_degree();
        }
        assert_abs_diff_eq!(total / 5.0, 25.0, epsilon = 0.3);
    }

    #[test]
    fn er1_mean_degree_within_three_se_of_expectation() {
        let n = 10_000usize;
        let p = 20.0 / (n as f64 - 1.0);
        let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
        // mean degree = 2E/n, E ~ Binomial(pairs, p)
        let se_one = 2.0 * (pairs * p * (1.0 - p)).sqrt() / n as f64;
        let gens = 10;
        let mut total = 0.0;
        for s in 0..gens {
            total += generate_er1(&cfg(NetModel::Er1, n, 4000 + s)).unwrap().mean_degree();
        }
        let mean = total / gens as f64;
        let se_mean = se_one / (gens as f64).sqrt();
        assert!(
            (mean - p * (n as f64 - 1.0)).abs() < 3.0 * se_mean,
            "mean degree {mean} outside 3 s.e. of {}",
            p * (n as f64 - 1.0)
        );
    }

    #[test]
    fn er1_rejects_bad_p_and_tiny_n() {
        let mut c = cfg(NetModel::Er1, 100, 1);
        c.er_p = Some(1.5);
        assert!(matches!(
            generate_er1(&c),
            Err(NetGenError::InvalidLinkProbability(_))
        ));
        c.er_p = Some(0.0);
        assert!(matches!(
            generate_er1(&c),
            Err(NetGenError::InvalidLinkProbability(_))
        ));
        let c2 = cfg(NetModel::Er1, 1, 1);
        assert!(matches!(
            generate_er1(&c2),
            Err(NetGenError::PopulationTooSmall(1))
        ));
    }

    #[test]
    fn er2_blocks_and_bridge_structure() {
        let mut c = cfg(NetModel::Er2, 10_000, 7);
        c.n_subpops = 5;
        let g = generate_er2(&c).unwrap();
        g.check_invariants().unwrap();
        // Within-block expectation: p = 20/1999 per 2000-node block.
        assert_abs_diff_eq!(g.mean_degree(), 20.0, epsilon = 0.5);

        let bridges: HashSet<u32> = g
            .edges()
            .filter(|&(u, v)| g.subpop(u) != g.subpop(v))
            .flat_map(|(u, v)| [u, v])
            .collect();
        // Cross-subpopulation edges exist only between bridge nodes, and only
        // ten nodes per block were designated as bridges.
        for b in 1..=5u32 {
            let in_block = bridges.iter().filter(|&&v| g.subpop(v) == b).count();
            assert!(in_block <= 10, "block {b} exposes {in_block} bridge nodes");
        }
        // Ring connectivity: at least one cross edge between adjacent blocks.
        let mut adjacent = HashSet::new();
        for (u, v) in g.edges() {
            let (a, b) = (g.subpop(u), g.subpop(v));
            if a != b {
                adjacent.insert((a.min(b), a.max(b)));
            }
        }
        for i in 0..5u32 {
            let j = (i + 1) % 5;
            let key = ((i + 1).min(j + 1), (i + 1).max(j + 1));
            assert!(adjacent.contains(&key), "missing ring link {key:?}");
        }
    }

    #[test]
    fn er2_non_bridge_nodes_never_cross() {
        let mut c = cfg(NetModel::Er2, 1000, 11);
        c.n_subpops = 5;
        let g = generate_er2(&c).unwrap();
        // Collect nodes incident to cross edges; everything else must only
        // link within its own block.
        let cross_nodes: HashSet<u32> = g
            .edges()
            .filter(|&(u, v)| g.subpop(u) != g.subpop(v))
            .flat_map(|(u, v)| [u, v])
            .collect();
        for v in 0..g.node_count() as u32 {
            if cross_nodes.contains(&v) {
                continue;
            }
            for &w in g.neighbors(v) {
                assert_eq!(g.subpop(v), g.subpop(w), "non-bridge {v} crosses to {w}");
            }
        }
    }

    #[test]
    fn er2_tiny_complete_blocks() {
        let mut c = cfg(NetModel::Er2, 10, 3);
        c.n_subpops = 5;
        c.bridges_per_subpop = 1;
        c.er_p = Some(1.0);
        let g = generate_er2(&c).unwrap();
        assert!(g.is_connected());
        // Five 2-cliques plus bridge edges.
        assert!(g.edge_count() >= 5 + 5);
    }

    #[test]
    fn er2_requires_divisible_n() {
        let mut c = cfg(NetModel::Er2, 10_001, 3);
        c.n_subpops = 5;
        assert!(matches!(
            generate_er2(&c),
            Err(NetGenError::IndivisibleSubpops { .. })
        ));
    }

    #[test]
    fn ba1_mean_and_min_degree() {
        let mut c = cfg(NetModel::Ba1, 10_000, 17);
        c.ba_m = Some(10.0);
        let g = generate_ba1(&c).unwrap();
        g.check_invariants().unwrap();
        // Edge-count identity: E = C(11,2) + (n-11)*10, mean = 2E/n.
        let expected = 2.0 * (55.0 + (10_000.0 - 11.0) * 10.0) / 10_000.0;
        assert_abs_diff_eq!(g.mean_degree(), expected, epsilon = 1e-9);
        assert_eq!(*g.degrees().iter().min().unwrap(), 10);
    }

    #[test]
    fn ba1_heavy_tail() {
        let mut c = cfg(NetModel::Ba1, 10_000, 23);
        c.ba_m = Some(10.0);
        let g = generate_ba1(&c).unwrap();
        let mut d: Vec<u32> = g.degrees().to_vec();
        d.sort_unstable();
        let median = d[d.len() / 2] as f64;
        let max = *d.last().unwrap() as f64;
        assert!(
            max / median > 10.0,
            "max/median = {} not heavy-tailed",
            max / median
        );
        assert!((12.0..=16.0).contains(&median), "median {median}");
    }

    #[test]
    fn ba1_seed_clique_case() {
        let mut c = cfg(NetModel::Ba1, 11, 5);
        c.ba_m = Some(10.0);
        let g = generate_ba1(&c).unwrap();
        assert_eq!(g.edge_count(), 55); // complete graph on m+1 nodes
        assert!(g.degrees().iter().all(|&d| d == 10));
    }

    #[test]
    fn ba1_rejects_bad_m() {
        let mut c = cfg(NetModel::Ba1, 10, 5);
        c.ba_m = Some(0.5);
        assert!(matches!(
            generate_ba1(&c),
            Err(NetGenError::InvalidAttachment { .. })
        ));
        c.ba_m = Some(10.0); // ceil(m)+1 = 11 > n
        assert!(matches!(
            generate_ba1(&c),
            Err(NetGenError::InvalidAttachment { .. })
        ));
    }

    #[test]
    fn ba_fractional_m_expected_degree() {
        let mut c = cfg(NetModel::Ba1, 10_000, 31);
        c.ba_m = Some(12.5);
        let g = generate_ba1(&c).unwrap();
        // Expected mean degree ~ 2m = 25 (seed clique contributes the rest).
        assert_abs_diff_eq!(g.mean_degree(), 25.0, epsilon = 0.4);
        assert!(*g.degrees().iter().min().unwrap() >= 12);
    }

    #[test]
    fn ba2_hub_wiring() {
        let mut c = cfg(NetModel::Ba2, 10_000, 13);
        c.ba_m = Some(10.0);
        let g = generate_ba2(&c).unwrap();
        g.check_invariants().unwrap();
        assert_abs_diff_eq!(g.mean_degree(), 20.0, epsilon = 0.5);

        let cross_nodes: HashSet<u32> = g
            .edges()
            .filter(|&(u, v)| g.subpop(u) != g.subpop(v))
            .flat_map(|(u, v)| [u, v])
            .collect();
        // Exactly ten hubs per block carry all cross edges.
        for b in 1..=5u32 {
            let carriers = cross_nodes.iter().filter(|&&v| g.subpop(v) == b).count();
            assert!(
                carriers <= 10,
                "block {b}: {carriers} nodes carry cross edges"
            );
        }
        // Hubs are the block's highest-degree nodes: every carrier's
        // within-block degree rank must be in the top ten (ties by id).
        for &h in &cross_nodes {
            let b = g.subpop(h);
            let within: u32 = g
                .neighbors(h)
                .iter()
                .filter(|&&w| g.subpop(w) == b)
                .count() as u32;
            let better = (0..g.node_count() as u32)
                .filter(|&v| g.subpop(v) == b && v != h)
                .filter(|&v| {
                    let dv: u32 =
                        g.neighbors(v).iter().filter(|&&w| g.subpop(w) == b).count() as u32;
                    dv > within || (dv == within && v < h)
                })
                .count();
            assert!(better < 10, "carrier {h} is not a top-ten hub");
        }
    }

    #[test]
    fn ba2_removing_cross_edges_gives_five_components() {
        let mut c = cfg(NetModel::Ba2, 1000, 19);
        c.ba_m = Some(5.0);
        let g = generate_ba2(&c).unwrap();
        let within: Vec<(u32, u32)> = g
            .edges()
            .filter(|&(u, v)| g.subpop(u) == g.subpop(v))
            .collect();
        let stripped =
            PopulationGraph::from_edges(g.node_count(), &within, vec![0; g.node_count()], None);
        assert_eq!(stripped.component_count(), 5);
    }

    #[test]
    fn ba_heavier_tail_than_er_paired() {
        for s in 0..10u64 {
            let mut bc = cfg(NetModel::Ba1, 5000, 900 + s);
            bc.ba_m = Some(10.0);
            let ba = generate_ba1(&bc).unwrap();
            let er = generate_er1(&cfg(NetModel::Er1, 5000, 900 + s)).unwrap();
            let ratio = |g: &PopulationGraph| {
                let mut d: Vec<u32> = g.degrees().to_vec();
                d.sort_unstable();
                *d.last().unwrap() as f64 / d[d.len() / 2] as f64
            };
            assert!(
                ratio(&ba) > ratio(&er),
                "seed {s}: BA tail {} <= ER tail {}",
                ratio(&ba),
                ratio(&er)
            );
        }
    }

    #[test]
    fn attributes_are_exact_halves_and_independent() {
        let g = generate_er1(&cfg(NetModel::Er1, 10_000, 41)).unwrap();
        let g = assign_attributes(&g, 99).unwrap();
        let n1 = (0..10_000u32).filter(|&v| g.e1(v)).count();
        let n2 = (0..10_000u32).filter(|&v| g.e2(v)).count();
        assert_eq!(n1, 5000);
        assert_eq!(n2, 5000);
        // Hypergeometric overlap: mean 2500, sd ~ 25.
        let both = (0..10_000u32).filter(|&v| g.e1(v) && g.e2(v)).count() as f64;
        assert!((both - 2500.0).abs() < 100.0, "overlap {both}");
    }

    #[test]
    fn attributes_tiny_population() {
        let mut c = cfg(NetModel::Er1, 2, 2);
        c.er_p = Some(1.0);
        let g = assign_attributes(&generate_er1(&c).unwrap(), 5).unwrap();
        assert_eq!((0..2).filter(|&v| g.e1(v)).count(), 1);
        assert_eq!((0..2).filter(|&v| g.e2(v)).count(), 1);
    }

    #[test]
    fn attributes_cannot_be_reassigned() {
        let g = generate_er1(&cfg(NetModel::Er1, 100, 3)).unwrap();
        let g = assign_attributes(&g, 1).unwrap();
        assert!(matches!(
            assign_attributes(&g, 2),
            Err(NetGenError::AttributesAlreadyAssigned)
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        for model in [NetModel::Er1, NetModel::Er2, NetModel::Ba1, NetModel::Ba2] {
            let c = cfg(model, 1000, 77);
            let a = generate(&c).unwrap();
            let b = generate(&c).unwrap();
            assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn structural_invariants_hold_for_all_models() {
        for model in [NetModel::Er1, NetModel::Er2, NetModel::Ba1, NetModel::Ba2] {
            let g = generate(&cfg(model, 2000, 55)).unwrap();
            g.check_invariants()
                .unwrap_or_else(|e| panic!("{model}: {e}"));
        }
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = assign_attributes(&generate_er1(&cfg(NetModel::Er1, 500, 8)).unwrap(), 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let epath = dir.path().join("edges.txt");
        let npath = dir.path().join("nodes.csv");
        g.write_edge_list(std::fs::File::create(&epath).unwrap())
            .unwrap();
        g.write_node_csv(std::fs::File::create(&npath).unwrap())
            .unwrap();
        let h = PopulationGraph::import(&epath, &npath).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), h.edges().collect::<Vec<_>>());
        for v in 0..500u32 {
            assert_eq!(g.e1(v), h.e1(v));
            assert_eq!(g.e2(v), h.e2(v));
            assert_eq!(g.degree(v), h.degree(v));
        }
    }
}
