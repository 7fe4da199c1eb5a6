//! Dispersion measures over one ego network.
//!
//! For a candidate neighbor `v`, absolute dispersion sums a pairwise
//! distance over all unordered pairs of common neighbors of the center and
//! `v`, evaluated with the tie `center-v` hidden. Normalizing by
//! embeddedness, or feeding both through a parametric form, trades off how
//! much a tie's mutual friends know each other against how many there are.
//!
//! The recursive variant iterates that idea: every neighbor starts at 1 and
//! repeatedly absorbs its common-neighbor structure weighted by the current
//! values, so ties whose mutual friends are themselves dispersed get
//! amplified. One iteration from the all-ones state reduces to
//! `1 + 2 * normalized`.

use std::collections::BTreeMap;

use crate::distances::{
    connected_components, DistanceContext, DistanceSpec,
};
use crate::error::{Error, Result};
use crate::graph::{EgoNetwork, NodeId};

pub const DEFAULT_RECURSIVE_ITERATIONS: u32 = 3;

/// Values above this trigger a whole-table renormalization during recursive
/// iteration; the update is degree-2 homogeneous, so rescaling preserves the
/// induced ranking.
pub const RENORMALIZE_CAP: f64 = 1e300;

/// Parameters of the parametric score `(dispersion + b)^alpha /
/// (embeddedness + c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParametricParams {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for ParametricParams {
    fn default() -> Self {
        ParametricParams {
            alpha: 0.61,
            b: 0.0,
            c: 5.0,
        }
    }
}

/// One score per neighbor, aligned with [`EgoNetwork::neighbors`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreTable {
    pub measure: String,
    pub scores: Vec<f64>,
    pub meta: BTreeMap<String, String>,
}

impl ScoreTable {
    pub(crate) fn new(measure: String, scores: Vec<f64>) -> Self {
        ScoreTable {
            measure,
            scores,
            meta: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Score of the neighbor at a [`EgoNetwork::neighbors`] position.
    pub fn get(&self, pos: usize) -> f64 {
        self.scores[pos]
    }

    /// Score of a neighbor by external id.
    pub fn score_of(&self, g: &EgoNetwork, external: &str) -> Option<f64> {
        let v = g.node_id(external)?;
        if v == g.center() {
            return None;
        }
        Some(self.scores[g.neighbor_pos(v)])
    }
}

/// Per-neighbor values of the recursive iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursiveState {
    pub values: Vec<f64>,
    pub iteration: u32,
}

impl RecursiveState {
    /// The all-ones starting state.
    pub fn initial(g: &EgoNetwork) -> Self {
        RecursiveState {
            values: vec![1.0; g.neighbor_count()],
            iteration: 0,
        }
    }
}

/// Enumerates unordered common-neighbor pairs of `(center, v)` ascending and
/// feeds their pairwise distance to `f`. Strategy depends on the spec:
/// thresholds 2 and 3 reduce to adjacency and shared-contact checks on
/// bitset rows, threshold 4 walks a bounded frontier, components are labeled
/// once per `v`, and community/spring read the shared context.
fn for_each_pair_distance<F: FnMut(NodeId, NodeId, f64)>(
    g: &EgoNetwork,
    v: NodeId,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    mut f: F,
) -> Result<()> {
    let common = g.common_neighbors(v)?;
    let members = common.members();
    if members.len() < 2 {
        return Ok(());
    }
    match spec {
        DistanceSpec::Threshold { radius: 2 } => {
            for (i, &s) in members.iter().enumerate() {
                for &t in &members[i + 1..] {
                    f(s, t, if g.adjacent(s, t) { 0.0 } else { 1.0 });
                }
            }
        }
        DistanceSpec::Threshold { radius: 3 } => {
            // Far iff not adjacent and no shared contact besides the center
            // and v.
            let words = g.words();
            let mut excluded = vec![0u64; words];
            for node in [g.center(), v] {
                excluded[node.index() / 64] |= 1u64 << (node.index() % 64);
            }
            for (i, &s) in members.iter().enumerate() {
                let sr = g.row(s);
                for &t in &members[i + 1..] {
                    let d = if g.adjacent(s, t) {
                        0.0
                    } else {
                        let tr = g.row(t);
                        let shared = sr
                            .iter()
                            .zip(tr)
                            .zip(&excluded)
                            .any(|((a, b), e)| a & b & !e != 0);
                        if shared {
                            0.0
                        } else {
                            1.0
                        }
                    };
                    f(s, t, d);
                }
            }
        }
        DistanceSpec::Threshold { radius } => {
            let view = g.without_center_and(v);
            let n = g.node_count();
            // reach[s] = nodes within radius-1 hops of s in the view.
            let mut reach = vec![false; n];
            for (i, &s) in members.iter().enumerate() {
                reach.iter_mut().for_each(|b| *b = false);
                reach[s.index()] = true;
                let mut frontier = vec![s];
                for _ in 1..*radius {
                    let mut next = Vec::new();
                    for &node in &frontier {
                        for nb in view.neighbors(node) {
                            if !reach[nb.index()] {
                                reach[nb.index()] = true;
                                next.push(nb);
                            }
                        }
                    }
                    frontier = next;
                    if frontier.is_empty() {
                        break;
                    }
                }
                for &t in &members[i + 1..] {
                    f(s, t, if reach[t.index()] { 0.0 } else { 1.0 });
                }
            }
        }
        DistanceSpec::DifferentComponent => {
            let labels = connected_components(&g.without_center_and(v));
            for (i, &s) in members.iter().enumerate() {
                for &t in &members[i + 1..] {
                    let d = if labels.community_of(s) == labels.community_of(t) {
                        0.0
                    } else {
                        1.0
                    };
                    f(s, t, d);
                }
            }
        }
        DistanceSpec::DifferentCommunity => {
            let p = ctx.require_partition(spec)?;
            for (i, &s) in members.iter().enumerate() {
                for &t in &members[i + 1..] {
                    let d = if p.community_of(s) == p.community_of(t) {
                        0.0
                    } else {
                        1.0
                    };
                    f(s, t, d);
                }
            }
        }
        DistanceSpec::SpringLength { .. } => {
            let l = ctx.require_layout(spec)?;
            for (i, &s) in members.iter().enumerate() {
                for &t in &members[i + 1..] {
                    f(s, t, l.distance(s, t));
                }
            }
        }
    }
    Ok(())
}

/// Sum of the pairwise distance over unordered common-neighbor pairs; 0 when
/// fewer than two common neighbors exist.
pub fn absolute_dispersion(
    g: &EgoNetwork,
    v: NodeId,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
) -> Result<f64> {
    let mut sum = 0.0;
    for_each_pair_distance(g, v, spec, ctx, |_, _, d| sum += d)?;
    Ok(sum)
}

/// `absolute / embeddedness`, defined as 0 when embeddedness is 0.
pub fn normalized_dispersion(
    g: &EgoNetwork,
    v: NodeId,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
) -> Result<f64> {
    let emb = g.embeddedness(v)? as f64;
    if emb == 0.0 {
        return Ok(0.0);
    }
    Ok(absolute_dispersion(g, v, spec, ctx)? / emb)
}

/// `(absolute + b)^alpha / (embeddedness + c)` as a plain function of the
/// two inputs.
///
/// A non-positive base yields numerator 0 for any alpha (the zero-power
/// convention); a non-positive denominator yields +inf when the numerator is
/// positive and 0 otherwise, keeping scores total-ordered without NaN.
pub fn parametric_value(absolute: f64, embeddedness: f64, p: &ParametricParams) -> f64 {
    let base = absolute + p.b;
    let numerator = if base <= 0.0 { 0.0 } else { base.powf(p.alpha) };
    let denominator = embeddedness + p.c;
    if denominator <= 0.0 {
        if numerator > 0.0 {
            return f64::INFINITY;
        }
        return 0.0;
    }
    numerator / denominator
}

pub fn parametric_score(
    g: &EgoNetwork,
    v: NodeId,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    p: &ParametricParams,
) -> Result<f64> {
    let absolute = absolute_dispersion(g, v, spec, ctx)?;
    let emb = g.embeddedness(v)? as f64;
    Ok(parametric_value(absolute, emb, p))
}

/// Per-neighbor pair structure reused across recursive iterations.
struct NeighborhoodPairs {
    emb: Vec<f64>,
    members: Vec<Vec<u32>>,
    pairs: Vec<Vec<(u32, u32, f64)>>,
}

fn build_pairs(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
) -> Result<NeighborhoodPairs> {
    let count = g.neighbor_count();
    let mut emb = Vec::with_capacity(count);
    let mut members = Vec::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);
    for v in g.neighbors() {
        let common = g.common_neighbors(v)?;
        emb.push(common.len() as f64);
        members.push(
            common
                .members()
                .iter()
                .map(|&w| g.neighbor_pos(w) as u32)
                .collect(),
        );
        let mut weighted = Vec::new();
        for_each_pair_distance(g, v, spec, ctx, |s, t, d| {
            if d != 0.0 {
                weighted.push((g.neighbor_pos(s) as u32, g.neighbor_pos(t) as u32, d));
            }
        })?;
        pairs.push(weighted);
    }
    Ok(NeighborhoodPairs { emb, members, pairs })
}

fn step(pairs: &NeighborhoodPairs, state: &RecursiveState) -> RecursiveState {
    let x = &state.values;
    let values = (0..x.len())
        .map(|pos| {
            let emb = pairs.emb[pos];
            if emb == 0.0 {
                return 0.0;
            }
            let mut squares = 0.0;
            for &w in &pairs.members[pos] {
                squares += x[w as usize] * x[w as usize];
            }
            let mut cross = 0.0;
            for &(s, t, d) in &pairs.pairs[pos] {
                cross += d * x[s as usize] * x[t as usize];
            }
            (squares + 2.0 * cross) / emb
        })
        .collect();
    RecursiveState {
        values,
        iteration: state.iteration + 1,
    }
}

/// One synchronous update of every neighbor's value.
pub fn recursive_step(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    state: &RecursiveState,
) -> Result<RecursiveState> {
    let pairs = build_pairs(g, spec, ctx)?;
    Ok(step(&pairs, state))
}

/// Runs `iterations` synchronous updates from the all-ones state.
pub fn recursive_dispersion(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    iterations: u32,
) -> Result<ScoreTable> {
    recursive_dispersion_capped(g, spec, ctx, iterations, RENORMALIZE_CAP)
}

/// [`recursive_dispersion`] with an explicit renormalization cap. Whenever
/// any value exceeds `cap` after a step the whole table is divided by its
/// maximum. The update is homogeneous in the values, so this only rescales
/// the result; rankings are preserved except where two scores already
/// agreed to the last few bits.
pub fn recursive_dispersion_capped(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    iterations: u32,
    cap: f64,
) -> Result<ScoreTable> {
    if iterations == 0 {
        return Err(Error::BadIterationCount);
    }
    let pairs = build_pairs(g, spec, ctx)?;
    let mut state = RecursiveState::initial(g);
    let mut renormalized = false;
    for _ in 0..iterations {
        state = step(&pairs, &state);
        let max = state.values.iter().cloned().fold(0.0f64, f64::max);
        if max > cap {
            for v in state.values.iter_mut() {
                *v /= max;
            }
            renormalized = true;
        }
    }
    let mut table = ScoreTable::new(
        format!("rec@{iterations}:{}", spec.label()),
        state.values,
    );
    table.meta.insert("distance".into(), spec.label());
    table.meta.insert("iterations".into(), iterations.to_string());
    if renormalized {
        table.meta.insert("renormalized".into(), "true".into());
    }
    Ok(table)
}

/// Tables after every iteration `1..=max_iterations`, sharing one pair
/// build; entry `k - 1` equals `recursive_dispersion(g, spec, ctx, k)`.
pub fn recursive_series(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    max_iterations: u32,
) -> Result<Vec<ScoreTable>> {
    if max_iterations == 0 {
        return Err(Error::BadIterationCount);
    }
    let pairs = build_pairs(g, spec, ctx)?;
    let mut state = RecursiveState::initial(g);
    let mut renormalized = false;
    let mut out = Vec::with_capacity(max_iterations as usize);
    for k in 1..=max_iterations {
        state = step(&pairs, &state);
        let max = state.values.iter().cloned().fold(0.0f64, f64::max);
        if max > RENORMALIZE_CAP {
            for v in state.values.iter_mut() {
                *v /= max;
            }
            renormalized = true;
        }
        let mut table = ScoreTable::new(
            format!("rec@{k}:{}", spec.label()),
            state.values.clone(),
        );
        table.meta.insert("distance".into(), spec.label());
        table.meta.insert("iterations".into(), k.to_string());
        if renormalized {
            table.meta.insert("renormalized".into(), "true".into());
        }
        out.push(table);
    }
    Ok(out)
}

/// Embeddedness of every neighbor.
pub fn embeddedness_table(g: &EgoNetwork) -> ScoreTable {
    let scores = g
        .neighbors()
        .map(|v| g.embeddedness(v).unwrap() as f64)
        .collect();
    ScoreTable::new("emb".into(), scores)
}

pub fn absolute_table(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
) -> Result<ScoreTable> {
    let mut scores = Vec::with_capacity(g.neighbor_count());
    for v in g.neighbors() {
        scores.push(absolute_dispersion(g, v, spec, ctx)?);
    }
    let mut table = ScoreTable::new(format!("disp:{}", spec.label()), scores);
    table.meta.insert("distance".into(), spec.label());
    Ok(table)
}

pub fn normalized_table(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
) -> Result<ScoreTable> {
    let mut scores = Vec::with_capacity(g.neighbor_count());
    for v in g.neighbors() {
        scores.push(normalized_dispersion(g, v, spec, ctx)?);
    }
    let mut table = ScoreTable::new(format!("norm:{}", spec.label()), scores);
    table.meta.insert("distance".into(), spec.label());
    Ok(table)
}

pub fn parametric_table(
    g: &EgoNetwork,
    spec: &DistanceSpec,
    ctx: &DistanceContext,
    p: &ParametricParams,
) -> Result<ScoreTable> {
    let mut scores = Vec::with_capacity(g.neighbor_count());
    for v in g.neighbors() {
        scores.push(parametric_score(g, v, spec, ctx, p)?);
    }
    let mut table = ScoreTable::new(
        format!(
            "parametric:{}:alpha={},b={},c={}",
            spec.label(),
            p.alpha,
            p.b,
            p.c
        ),
        scores,
    );
    table.meta.insert("distance".into(), spec.label());
    table.meta.insert("alpha".into(), p.alpha.to_string());
    table.meta.insert("b".into(), p.b.to_string());
    table.meta.insert("c".into(), p.c.to_string());
    Ok(table)
}
