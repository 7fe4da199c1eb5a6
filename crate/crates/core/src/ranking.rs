//! Partner prediction: a measure registry, deterministic ranking with a
//! fixed tie-break, corpus evaluation with slice filters, the parametric
//! sweep, and the two-hop rescoring heuristic.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{betweenness_table, constraint_table};
use crate::dispersion::{
    absolute_table, embeddedness_table, normalized_table, parametric_table,
    parametric_value, recursive_dispersion, ParametricParams, ScoreTable,
};
use crate::distances::{distance_context, DistanceSpec};
use crate::error::{Error, Result};
use crate::graph::{EgoNetwork, NodeId};

/// How many top forward candidates the two-hop heuristic rescores.
pub const DEFAULT_TWO_HOP_CANDIDATES: usize = 20;

/// Whether larger or smaller scores mark the stronger candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximum,
    Minimum,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Maximum => "max",
            Direction::Minimum => "min",
        }
    }
}

/// A fully parameterized measure, pairing a score function with its
/// predictor direction.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    Embeddedness,
    Absolute(DistanceSpec),
    Normalized(DistanceSpec),
    Parametric(DistanceSpec, ParametricParams),
    Recursive(DistanceSpec, u32),
    Betweenness,
    Constraint,
}

impl MeasureSpec {
    /// Resolves a measure name from the command line; `distance`, `params`,
    /// and `iterations` supply whichever settings the named measure uses.
    pub fn from_name(
        name: &str,
        distance: DistanceSpec,
        params: ParametricParams,
        iterations: u32,
    ) -> Result<Self> {
        match name {
            "emb" => Ok(MeasureSpec::Embeddedness),
            "disp" => Ok(MeasureSpec::Absolute(distance)),
            "norm" => Ok(MeasureSpec::Normalized(distance)),
            "parametric" => Ok(MeasureSpec::Parametric(distance, params)),
            "rec" => {
                if iterations == 0 {
                    return Err(Error::BadIterationCount);
                }
                Ok(MeasureSpec::Recursive(distance, iterations))
            }
            "betweenness" => Ok(MeasureSpec::Betweenness),
            "constraint" => Ok(MeasureSpec::Constraint),
            other => Err(Error::UnknownMeasure(other.to_owned())),
        }
    }

    /// Constraint ranks low-is-strong (brokers); everything else ranks
    /// high-is-strong.
    pub fn direction(&self) -> Direction {
        match self {
            MeasureSpec::Constraint => Direction::Minimum,
            _ => Direction::Maximum,
        }
    }

    /// Matches the `measure` field of the tables this spec produces.
    pub fn label(&self) -> String {
        match self {
            MeasureSpec::Embeddedness => "emb".to_owned(),
            MeasureSpec::Absolute(d) => format!("disp:{}", d.label()),
            MeasureSpec::Normalized(d) => format!("norm:{}", d.label()),
            MeasureSpec::Parametric(d, p) => format!(
                "parametric:{}:alpha={},b={},c={}",
                d.label(),
                p.alpha,
                p.b,
                p.c
            ),
            MeasureSpec::Recursive(d, k) => format!("rec@{k}:{}", d.label()),
            MeasureSpec::Betweenness => "betweenness".to_owned(),
            MeasureSpec::Constraint => "constraint".to_owned(),
        }
    }

    /// Scores every neighbor of one network, building whatever shared
    /// distance context the spec requires.
    pub fn score(&self, g: &EgoNetwork) -> Result<ScoreTable> {
        match self {
            MeasureSpec::Embeddedness => Ok(embeddedness_table(g)),
            MeasureSpec::Absolute(d) => {
                let ctx = distance_context(g, d);
                absolute_table(g, d, &ctx)
            }
            MeasureSpec::Normalized(d) => {
                let ctx = distance_context(g, d);
                normalized_table(g, d, &ctx)
            }
            MeasureSpec::Parametric(d, p) => {
                let ctx = distance_context(g, d);
                parametric_table(g, d, &ctx, p)
            }
            MeasureSpec::Recursive(d, k) => {
                let ctx = distance_context(g, d);
                recursive_dispersion(g, d, &ctx, *k)
            }
            MeasureSpec::Betweenness => Ok(betweenness_table(g)),
            MeasureSpec::Constraint => Ok(constraint_table(g)),
        }
    }
}

/// One labeled ego network: the ground-truth partner, optional family
/// members, and free-form tags used by slice filters.
#[derive(Clone, Debug)]
pub struct Instance {
    network: EgoNetwork,
    partner: NodeId,
    family: Vec<NodeId>,
    tags: BTreeMap<String, String>,
}

impl Instance {
    /// Validates that the partner and every family member are neighbors of
    /// the center. The partner is dropped from the family set if listed
    /// there, and duplicates are collapsed.
    pub fn new(
        network: EgoNetwork,
        partner: &str,
        family: &[String],
        tags: BTreeMap<String, String>,
    ) -> Result<Self> {
        let not_partner = || {
            Error::PartnerNotNeighbor(partner.to_owned(), network.center_id().to_owned())
        };
        let p = network.node_id(partner).ok_or_else(not_partner)?;
        if p == network.center() {
            return Err(not_partner());
        }
        let mut fam = Vec::new();
        for f in family {
            let id = network.node_id(f).ok_or_else(|| {
                Error::FamilyNotNeighbor(f.clone(), network.center_id().to_owned())
            })?;
            if id == network.center() {
                return Err(Error::FamilyNotNeighbor(
                    f.clone(),
                    network.center_id().to_owned(),
                ));
            }
            if id != p && !fam.contains(&id) {
                fam.push(id);
            }
        }
        fam.sort();
        Ok(Instance {
            network,
            partner: p,
            family: fam,
            tags,
        })
    }

    pub fn network(&self) -> &EgoNetwork {
        &self.network
    }

    pub fn partner(&self) -> NodeId {
        self.partner
    }

    pub fn partner_id(&self) -> &str {
        self.network.external_id(self.partner)
    }

    pub fn family(&self) -> &[NodeId] {
        &self.family
    }

    /// Family external ids in ascending order.
    pub fn family_ids(&self) -> Vec<&str> {
        self.family
            .iter()
            .map(|&f| self.network.external_id(f))
            .collect()
    }

    pub fn tags(&self) -> &BTreeMap<String, String> {
        &self.tags
    }

    pub fn tags_mut(&mut self) -> &mut BTreeMap<String, String> {
        &mut self.tags
    }

    /// True when `chosen` names the partner.
    pub fn is_correct(&self, chosen: &str) -> bool {
        self.partner_id() == chosen
    }

    /// True when `chosen` names the partner or any family member.
    pub fn is_hit(&self, chosen: &str) -> bool {
        if self.is_correct(chosen) {
            return true;
        }
        match self.network.node_id(chosen) {
            Some(id) => self.family.binary_search(&id).is_ok(),
            None => false,
        }
    }
}

/// A full neighbor ordering plus the top pick.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    /// `(external id, score)` from strongest to weakest.
    pub ranked: Vec<(String, f64)>,
    /// External id of the first entry.
    pub chosen: String,
    /// Two-hop only: set when no reverse network was available at all and
    /// the ranking fell back to forward scores.
    pub forward_only: bool,
    /// Two-hop only: candidates whose reverse network was missing (their
    /// reverse score was taken as 0).
    pub missing_reverse: Vec<String>,
}

fn order_positions(
    scores: &[f64],
    embs: &[usize],
    ids: &[&str],
    direction: Direction,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let primary = match direction {
            Direction::Maximum => scores[b].total_cmp(&scores[a]),
            Direction::Minimum => scores[a].total_cmp(&scores[b]),
        };
        primary
            .then_with(|| embs[b].cmp(&embs[a]))
            .then_with(|| ids[a].cmp(ids[b]))
    });
    order
}

/// Orders neighbors by score in the predictor's direction; ties fall back
/// to higher embeddedness, then to the smaller external id, making the
/// result a total order on any input.
pub fn rank(g: &EgoNetwork, table: &ScoreTable, direction: Direction) -> Prediction {
    debug_assert_eq!(table.len(), g.neighbor_count());
    let embs: Vec<usize> = g.neighbors().map(|v| g.embeddedness(v).unwrap()).collect();
    let ids: Vec<&str> = g.neighbors().map(|v| g.external_id(v)).collect();
    let order = order_positions(&table.scores, &embs, &ids, direction);
    let ranked: Vec<(String, f64)> = order
        .iter()
        .map(|&pos| (ids[pos].to_owned(), table.get(pos)))
        .collect();
    let chosen = ranked[0].0.clone();
    Prediction {
        ranked,
        chosen,
        forward_only: false,
        missing_reverse: Vec::new(),
    }
}

/// A tag filter: an instance matches when `tags[tag] == value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub tag: String,
    pub value: String,
}

impl Slice {
    pub fn new(tag: impl Into<String>, value: impl Into<String>) -> Self {
        Slice {
            tag: tag.into(),
            value: value.into(),
        }
    }

    pub fn name(&self) -> String {
        format!("{}={}", self.tag, self.value)
    }

    pub fn matches(&self, instance: &Instance) -> bool {
        instance.tags().get(&self.tag) == Some(&self.value)
    }
}

/// Counts and precisions over one subset of the corpus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRow {
    pub slice: String,
    pub n: usize,
    pub correct: usize,
    pub hitset_correct: usize,
    /// `correct / n`; absent when the slice is empty.
    pub precision: Option<f64>,
    /// `hitset_correct / n`; absent when the slice is empty.
    pub hitset_precision: Option<f64>,
}

/// Evaluation results for one measure: an `all` row followed by one row per
/// requested slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub measure: String,
    pub direction: String,
    pub rows: Vec<SliceRow>,
}

fn fmt_opt(p: Option<f64>) -> String {
    match p {
        Some(x) => format!("{x:.6}"),
        None => "-".to_owned(),
    }
}

impl EvalReport {
    /// The `all` row.
    pub fn overall(&self) -> &SliceRow {
        &self.rows[0]
    }

    /// Tab-separated rows; the hit-set column appears only when asked for.
    pub fn to_text(&self, include_hitset: bool) -> String {
        let mut out = String::new();
        out.push_str("slice\tn\tprecision");
        if include_hitset {
            out.push_str("\thitset_precision");
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}",
                row.slice,
                row.n,
                fmt_opt(row.precision)
            ));
            if include_hitset {
                out.push_str(&format!("\t{}", fmt_opt(row.hitset_precision)));
            }
            out.push('\n');
        }
        out
    }
}

fn make_row(slice: String, outcomes: &[(bool, bool)], keep: &[bool]) -> SliceRow {
    let mut n = 0;
    let mut correct = 0;
    let mut hitset_correct = 0;
    for (o, &k) in outcomes.iter().zip(keep) {
        if !k {
            continue;
        }
        n += 1;
        correct += o.0 as usize;
        hitset_correct += o.1 as usize;
    }
    SliceRow {
        slice,
        n,
        correct,
        hitset_correct,
        precision: (n > 0).then(|| correct as f64 / n as f64),
        hitset_precision: (n > 0).then(|| hitset_correct as f64 / n as f64),
    }
}

/// Scores and ranks every instance under one measure, reporting
/// precision-at-1 (plain and hit-set) overall and per slice. Instances are
/// processed in parallel; results merge in corpus order, so the report does
/// not depend on the worker count.
pub fn evaluate(
    corpus: &[Instance],
    measure: &MeasureSpec,
    slices: &[Slice],
) -> Result<EvalReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let direction = measure.direction();
    let outcomes: Vec<Result<(bool, bool)>> = corpus
        .par_iter()
        .map(|instance| {
            let table = measure.score(instance.network())?;
            let prediction = rank(instance.network(), &table, direction);
            Ok((
                instance.is_correct(&prediction.chosen),
                instance.is_hit(&prediction.chosen),
            ))
        })
        .collect();
    let outcomes: Vec<(bool, bool)> = outcomes.into_iter().collect::<Result<_>>()?;
    let all = vec![true; corpus.len()];
    let mut rows = vec![make_row("all".to_owned(), &outcomes, &all)];
    for slice in slices {
        let keep: Vec<bool> = corpus.iter().map(|i| slice.matches(i)).collect();
        rows.push(make_row(slice.name(), &outcomes, &keep));
    }
    Ok(EvalReport {
        measure: measure.label(),
        direction: direction.as_str().to_owned(),
        rows,
    })
}

/// One grid point of the parametric sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
    pub correct: usize,
    pub precision: f64,
}

/// The per-alpha maximum over `(b, c)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub precision: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub distance: String,
    pub rows: Vec<SweepRow>,
    pub curve: Vec<CurvePoint>,
}

impl SweepReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("alpha\tb\tc\tn\tprecision\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.6}\n",
                r.alpha, r.b, r.c, r.n, r.precision
            ));
        }
        out
    }

    pub fn curve_to_text(&self) -> String {
        let mut out = String::from("alpha\tmax_precision\n");
        for p in &self.curve {
            out.push_str(&format!("{}\t{:.6}\n", p.alpha, p.precision));
        }
        out
    }
}

struct SweepInstance {
    dispersion: Vec<f64>,
    embeddedness: Vec<f64>,
    emb_int: Vec<usize>,
    ids: Vec<String>,
    partner_pos: usize,
}

/// Precision-at-1 of the parametric score over the full `alpha x b x c`
/// grid (alpha outermost), plus the per-alpha maximum curve. Dispersion and
/// embeddedness are computed once per instance and shared by every grid
/// point.
pub fn sweep_parametric(
    corpus: &[Instance],
    spec: &DistanceSpec,
    alphas: &[f64],
    bs: &[f64],
    cs: &[f64],
) -> Result<SweepReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if alphas.is_empty() || bs.is_empty() || cs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let prepped: Vec<Result<SweepInstance>> = corpus
        .par_iter()
        .map(|instance| {
            let g = instance.network();
            let ctx = distance_context(g, spec);
            let disp = absolute_table(g, spec, &ctx)?;
            let emb = embeddedness_table(g);
            Ok(SweepInstance {
                dispersion: disp.scores,
                emb_int: emb.scores.iter().map(|&x| x as usize).collect(),
                embeddedness: emb.scores,
                ids: g.neighbors().map(|v| g.external_id(v).to_owned()).collect(),
                partner_pos: g.neighbor_pos(instance.partner()),
            })
        })
        .collect();
    let prepped: Vec<SweepInstance> = prepped.into_iter().collect::<Result<_>>()?;

    let grid: Vec<(f64, f64, f64)> = alphas
        .iter()
        .flat_map(|&a| {
            bs.iter()
                .flat_map(move |&b| cs.iter().map(move |&c| (a, b, c)))
        })
        .collect();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(alpha, b, c)| {
            let p = ParametricParams { alpha, b, c };
            let correct = prepped
                .iter()
                .filter(|inst| {
                    let scores: Vec<f64> = inst
                        .dispersion
                        .iter()
                        .zip(&inst.embeddedness)
                        .map(|(&d, &e)| parametric_value(d, e, &p))
                        .collect();
                    let ids: Vec<&str> = inst.ids.iter().map(String::as_str).collect();
                    let order =
                        order_positions(&scores, &inst.emb_int, &ids, Direction::Maximum);
                    order[0] == inst.partner_pos
                })
                .count();
            SweepRow {
                alpha,
                b,
                c,
                n: prepped.len(),
                correct,
                precision: correct as f64 / prepped.len() as f64,
            }
        })
        .collect();
    let curve = alphas
        .iter()
        .map(|&alpha| {
            let best = rows
                .iter()
                .filter(|r| r.alpha == alpha)
                .map(|r| r.precision)
                .fold(f64::NEG_INFINITY, f64::max);
            CurvePoint {
                alpha,
                precision: best,
            }
        })
        .collect();
    Ok(SweepReport {
        distance: spec.label(),
        rows,
        curve,
    })
}

/// Rescans the top forward candidates with the reverse view: each candidate
/// `v` is rescored by the minimum of the forward value and the value of the
/// center as seen from `v`'s own network. Candidates without a reverse
/// network score 0 on the reverse side and are listed in the prediction;
/// when no reverse network exists at all, the forward ranking is returned
/// with `forward_only` set.
///
/// `top_k` of 0 means rescore every neighbor.
pub fn two_hop_predict(
    g: &EgoNetwork,
    neighbor_networks: &BTreeMap<String, EgoNetwork>,
    spec: &DistanceSpec,
    iterations: u32,
    top_k: usize,
) -> Result<Prediction> {
    let ctx = distance_context(g, spec);
    let forward = recursive_dispersion(g, spec, &ctx, iterations)?;
    let base = rank(g, &forward, Direction::Maximum);
    let take = if top_k == 0 {
        base.ranked.len()
    } else {
        top_k.min(base.ranked.len())
    };
    let top = &base.ranked[..take];

    let mut missing = Vec::new();
    let mut any_reverse = false;
    let mut rescored: Vec<(String, f64)> = Vec::with_capacity(top.len());
    for (candidate, fwd) in top {
        match neighbor_networks.get(candidate) {
            None => {
                missing.push(candidate.clone());
                rescored.push((candidate.clone(), fwd.min(0.0)));
            }
            Some(reverse_net) => {
                let u = reverse_net
                    .node_id(g.center_id())
                    .filter(|&n| n != reverse_net.center())
                    .ok_or_else(|| Error::ReverseMissingCenter {
                        candidate: candidate.clone(),
                        center: g.center_id().to_owned(),
                    })?;
                let rctx = distance_context(reverse_net, spec);
                let rtable = recursive_dispersion(reverse_net, spec, &rctx, iterations)?;
                let rev = rtable.get(reverse_net.neighbor_pos(u));
                any_reverse = true;
                rescored.push((candidate.clone(), fwd.min(rev)));
            }
        }
    }
    if !any_reverse {
        return Ok(Prediction {
            chosen: top[0].0.clone(),
            ranked: top.to_vec(),
            forward_only: true,
            missing_reverse: missing,
        });
    }
    let embs: Vec<usize> = rescored
        .iter()
        .map(|(id, _)| g.embeddedness(g.node_id(id).unwrap()).unwrap())
        .collect();
    let ids: Vec<&str> = rescored.iter().map(|(id, _)| id.as_str()).collect();
    let scores: Vec<f64> = rescored.iter().map(|&(_, s)| s).collect();
    let order = order_positions(&scores, &embs, &ids, Direction::Maximum);
    let ranked: Vec<(String, f64)> = order
        .iter()
        .map(|&pos| rescored[pos].clone())
        .collect();
    Ok(Prediction {
        chosen: ranked[0].0.clone(),
        ranked,
        forward_only: false,
        missing_reverse: missing,
    })
}
