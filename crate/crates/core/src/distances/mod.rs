//! Pairwise separation measures between common neighbors.
//!
//! Every measure asks how far apart two common neighbors `s, t` of the
//! center and a candidate `v` are once the tie being judged is hidden:
//!
//! * [`DistanceSpec::Threshold`]: 1 when the hop distance in the network
//!   minus `{center, v}` is at least the radius (unreachable counts as
//!   infinite). Radius 3 is the default: `s` and `t` are not linked and share
//!   no other contact.
//! * [`DistanceSpec::DifferentComponent`]: 1 when `s` and `t` fall in
//!   different connected components of the network minus `{center, v}`.
//! * [`DistanceSpec::DifferentCommunity`]: 1 when a modularity partition of
//!   the neighbor-only graph separates them.
//! * [`DistanceSpec::SpringLength`]: Euclidean distance in a force-directed
//!   layout of the neighbor-only graph.
//!
//! Community and spring contexts depend only on the neighbor-only graph, so
//! they are computed once per network via [`distance_context`] and shared by
//! every candidate; recomputing them per candidate is a bug this API does
//! not allow.

mod louvain;
mod spring;

pub use louvain::{louvain, modularity};
pub use spring::spring_layout;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EgoNetwork, GraphView, NodeId};

pub const DEFAULT_SPRING_ITERATIONS: u32 = 50;
pub const DEFAULT_SPRING_SEED: u64 = 0;

/// Which separation measure to apply between common neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DistanceSpec {
    Threshold { radius: u32 },
    DifferentComponent,
    DifferentCommunity,
    SpringLength { iterations: u32, seed: u64 },
}

impl Default for DistanceSpec {
    fn default() -> Self {
        DistanceSpec::Threshold { radius: 3 }
    }
}

impl DistanceSpec {
    pub fn threshold(radius: u32) -> Result<Self> {
        if (2..=4).contains(&radius) {
            Ok(DistanceSpec::Threshold { radius })
        } else {
            Err(Error::BadThreshold(radius))
        }
    }

    pub fn spring() -> Self {
        DistanceSpec::SpringLength {
            iterations: DEFAULT_SPRING_ITERATIONS,
            seed: DEFAULT_SPRING_SEED,
        }
    }

    /// Parses the textual form used on the command line:
    /// `threshold:2|3|4`, `component`, `community`,
    /// `spring[:iters=N,seed=S]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadDistanceSpec {
            text: text.to_owned(),
            reason: reason.to_owned(),
        };
        match text {
            "component" => return Ok(DistanceSpec::DifferentComponent),
            "community" => return Ok(DistanceSpec::DifferentCommunity),
            "spring" => return Ok(DistanceSpec::spring()),
            _ => {}
        }
        if let Some(r) = text.strip_prefix("threshold:") {
            let radius: u32 = r.parse().map_err(|_| bad("radius must be an integer"))?;
            return DistanceSpec::threshold(radius);
        }
        if let Some(args) = text.strip_prefix("spring:") {
            let mut iterations = DEFAULT_SPRING_ITERATIONS;
            let mut seed = DEFAULT_SPRING_SEED;
            for part in args.split(',') {
                match part.split_once('=') {
                    Some(("iters", v)) => {
                        iterations = v.parse().map_err(|_| bad("iters must be an integer"))?;
                        if iterations == 0 {
                            return Err(bad("iters must be positive"));
                        }
                    }
                    Some(("seed", v)) => {
                        seed = v.parse().map_err(|_| bad("seed must be a u64"))?;
                    }
                    _ => return Err(bad("expected iters=N or seed=S")),
                }
            }
            return Ok(DistanceSpec::SpringLength { iterations, seed });
        }
        Err(bad(
            "expected threshold:2|3|4, component, community, or spring[:iters=N,seed=S]",
        ))
    }

    /// Canonical text form; `parse(label())` round-trips.
    pub fn label(&self) -> String {
        match self {
            DistanceSpec::Threshold { radius } => format!("threshold:{radius}"),
            DistanceSpec::DifferentComponent => "component".to_owned(),
            DistanceSpec::DifferentCommunity => "community".to_owned(),
            DistanceSpec::SpringLength { iterations, seed } => {
                format!("spring:iters={iterations},seed={seed}")
            }
        }
    }

    /// Short name used in feature column headers.
    pub fn column_suffix(&self) -> String {
        match self {
            DistanceSpec::Threshold { radius } => format!("threshold{radius}"),
            DistanceSpec::DifferentComponent => "component".to_owned(),
            DistanceSpec::DifferentCommunity => "community".to_owned(),
            DistanceSpec::SpringLength { .. } => "spring".to_owned(),
        }
    }

    /// The six standard specs in feature-column order.
    pub fn standard_set(spring_iterations: u32, spring_seed: u64) -> Vec<DistanceSpec> {
        vec![
            DistanceSpec::Threshold { radius: 2 },
            DistanceSpec::Threshold { radius: 3 },
            DistanceSpec::Threshold { radius: 4 },
            DistanceSpec::DifferentComponent,
            DistanceSpec::DifferentCommunity,
            DistanceSpec::SpringLength {
                iterations: spring_iterations,
                seed: spring_seed,
            },
        ]
    }

    fn needs_partition(&self) -> bool {
        matches!(self, DistanceSpec::DifferentCommunity)
    }
}

/// Assignment of view nodes to communities `0..community_count`.
///
/// Community ids are densified in order of each community's smallest dense
/// node index, so equal partitions always carry equal labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    comm: Vec<u32>,
    count: usize,
}

const NOT_IN_VIEW: u32 = u32::MAX;

impl Partition {
    /// Densifies raw labels (indexed by dense node id, `NOT_IN_VIEW` for
    /// removed nodes) into canonical community ids.
    pub(crate) fn from_raw_labels(raw: Vec<u32>) -> Partition {
        let mut map: Vec<Option<u32>> = vec![None; raw.len()];
        let mut comm = vec![NOT_IN_VIEW; raw.len()];
        let mut count = 0u32;
        for (i, &label) in raw.iter().enumerate() {
            if label == NOT_IN_VIEW {
                continue;
            }
            let dense = *map[label as usize].get_or_insert_with(|| {
                let id = count;
                count += 1;
                id
            });
            comm[i] = dense;
        }
        Partition {
            comm,
            count: count as usize,
        }
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    /// Community of a node; `None` if the node is outside the view.
    pub fn community_of(&self, n: NodeId) -> Option<u32> {
        match self.comm.get(n.index()) {
            Some(&c) if c != NOT_IN_VIEW => Some(c),
            _ => None,
        }
    }
}

/// Node coordinates from a force-directed embedding of a view.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarLayout {
    pos: Vec<[f64; 2]>,
    present: Vec<bool>,
}

impl PlanarLayout {
    pub(crate) fn new(pos: Vec<[f64; 2]>, present: Vec<bool>) -> Self {
        PlanarLayout { pos, present }
    }

    pub fn position(&self, n: NodeId) -> Option<[f64; 2]> {
        if *self.present.get(n.index())? {
            Some(self.pos[n.index()])
        } else {
            None
        }
    }

    /// Euclidean distance between two laid-out nodes.
    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        let pa = self.pos[a.index()];
        let pb = self.pos[b.index()];
        ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt()
    }
}

/// Shared per-network context for the distance specs that need one.
///
/// Built once per `(network, spec)` by [`distance_context`] on the
/// neighbor-only graph and reused for every candidate and pair.
#[derive(Clone, Debug, Default)]
pub struct DistanceContext {
    partition: Option<Arc<Partition>>,
    layout: Option<Arc<PlanarLayout>>,
}

impl DistanceContext {
    pub fn empty() -> Self {
        DistanceContext::default()
    }

    pub fn partition(&self) -> Option<&Arc<Partition>> {
        self.partition.as_ref()
    }

    pub fn layout(&self) -> Option<&Arc<PlanarLayout>> {
        self.layout.as_ref()
    }

    pub(crate) fn require_partition(&self, spec: &DistanceSpec) -> Result<&Partition> {
        self.partition
            .as_deref()
            .ok_or_else(|| Error::MissingContext(spec.label()))
    }

    pub(crate) fn require_layout(&self, spec: &DistanceSpec) -> Result<&PlanarLayout> {
        self.layout
            .as_deref()
            .ok_or_else(|| Error::MissingContext(spec.label()))
    }
}

/// Computes whatever shared state `spec` needs on the neighbor-only graph.
pub fn distance_context(g: &EgoNetwork, spec: &DistanceSpec) -> DistanceContext {
    let mut ctx = DistanceContext::default();
    if spec.needs_partition() {
        ctx.partition = Some(Arc::new(louvain(&g.without_center())));
    }
    if let DistanceSpec::SpringLength { iterations, seed } = spec {
        ctx.layout = Some(Arc::new(spring_layout(
            &g.without_center(),
            *iterations,
            *seed,
        )));
    }
    ctx
}

/// BFS hop distance within a view; `None` when unreachable.
pub fn hop_distance(view: &GraphView, s: NodeId, t: NodeId) -> Option<u32> {
    if !view.contains(s) || !view.contains(t) {
        return None;
    }
    if s == t {
        return Some(0);
    }
    let n = view.base().node_count();
    let mut dist = vec![u32::MAX; n];
    dist[s.index()] = 0;
    let mut frontier = vec![s];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for node in frontier {
            for nb in view.neighbors(node) {
                if dist[nb.index()] == u32::MAX {
                    if nb == t {
                        return Some(d);
                    }
                    dist[nb.index()] = d;
                    next.push(nb);
                }
            }
        }
        frontier = next;
    }
    None
}

/// True when the hop distance from `s` to `t` within the view is `< bound`.
pub(crate) fn reachable_within(view: &GraphView, s: NodeId, t: NodeId, bound: u32) -> bool {
    if s == t {
        return true;
    }
    if bound <= 1 {
        return false;
    }
    if view.adjacent(s, t) {
        return true;
    }
    if bound == 2 {
        return false;
    }
    let n = view.base().node_count();
    let mut seen = vec![false; n];
    seen[s.index()] = true;
    let mut frontier = vec![s];
    for _ in 1..bound {
        let mut next = Vec::new();
        for node in frontier {
            for nb in view.neighbors(node) {
                if nb == t {
                    return true;
                }
                if !seen[nb.index()] {
                    seen[nb.index()] = true;
                    next.push(nb);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    false
}

/// Connected components of a view, labeled in order of each component's
/// smallest dense node index.
pub fn connected_components(view: &GraphView) -> Partition {
    let n = view.base().node_count();
    let mut raw = vec![NOT_IN_VIEW; n];
    let mut label = 0u32;
    for &start in view.live_nodes() {
        if raw[start.index()] != NOT_IN_VIEW {
            continue;
        }
        raw[start.index()] = label;
        let mut frontier = vec![start];
        while let Some(node) = frontier.pop() {
            for nb in view.neighbors(node) {
                if raw[nb.index()] == NOT_IN_VIEW {
                    raw[nb.index()] = label;
                    frontier.push(nb);
                }
            }
        }
        label += 1;
    }
    Partition::from_raw_labels(raw)
}

/// Distance between two common neighbors `s, t` of the center and `v`.
///
/// Preconditions: `v` is a neighbor, `s` and `t` are common neighbors of the
/// center and `v`. Community and spring specs read their shared state from
/// `ctx` and fail with [`Error::MissingContext`] if it was not built.
pub fn pairwise_distance(
    g: &EgoNetwork,
    v: NodeId,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    s: NodeId,
    t: NodeId,
) -> Result<f64> {
    let c = g.common_neighbors(v)?;
    for node in [s, t] {
        if !c.contains(node) {
            return Err(Error::NotANeighbor(g.external_id(node).to_owned()));
        }
    }
    if s == t {
        return Ok(0.0);
    }
    match spec {
        DistanceSpec::Threshold { radius } => {
            let view = g.without_center_and(v);
            Ok(if reachable_within(&view, s, t, *radius) {
                0.0
            } else {
                1.0
            })
        }
        DistanceSpec::DifferentComponent => {
            let view = g.without_center_and(v);
            Ok(if reachable_within(&view, s, t, u32::MAX) {
                0.0
            } else {
                1.0
            })
        }
        DistanceSpec::DifferentCommunity => {
            let p = ctx.require_partition(spec)?;
            Ok(if p.community_of(s) == p.community_of(t) {
                0.0
            } else {
                1.0
            })
        }
        DistanceSpec::SpringLength { .. } => {
            let l = ctx.require_layout(spec)?;
            Ok(l.distance(s, t))
        }
    }
}
