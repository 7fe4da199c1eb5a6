//! Bridging baselines that do not use the dispersion machinery:
//! shortest-path betweenness and Burt's network constraint, both computed on
//! the neighbor-only graph (center removed).

use std::collections::VecDeque;

use crate::dispersion::ScoreTable;
use crate::graph::{EgoNetwork, NodeId};

/// Which baseline to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineKind {
    Betweenness,
    NetworkConstraint,
}

impl BaselineKind {
    pub fn compute(self, g: &EgoNetwork) -> ScoreTable {
        match self {
            BaselineKind::Betweenness => betweenness_table(g),
            BaselineKind::NetworkConstraint => constraint_table(g),
        }
    }
}

/// Unnormalized shortest-path betweenness of each neighbor in the
/// neighbor-only graph: over unordered node pairs, the fraction of geodesics
/// passing through the neighbor, accumulated with Brandes' dependency
/// recursion. Pairs in different components contribute nothing.
pub fn betweenness_table(g: &EgoNetwork) -> ScoreTable {
    let view = g.without_center();
    let n = g.node_count();
    let mut bc = vec![0.0f64; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![u32::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &s in view.live_nodes() {
        for i in 0..n {
            sigma[i] = 0.0;
            dist[i] = u32::MAX;
            delta[i] = 0.0;
            preds[i].clear();
        }
        sigma[s.index()] = 1.0;
        dist[s.index()] = 0;
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in view.neighbors(v) {
                if dist[w.index()] == u32::MAX {
                    dist[w.index()] = dist[v.index()] + 1;
                    queue.push_back(w);
                }
                if dist[w.index()] == dist[v.index()] + 1 {
                    sigma[w.index()] += sigma[v.index()];
                    preds[w.index()].push(v);
                }
            }
        }
        while let Some(w) = order.pop() {
            for &v in &preds[w.index()] {
                delta[v.index()] +=
                    sigma[v.index()] / sigma[w.index()] * (1.0 + delta[w.index()]);
            }
            if w != s {
                bc[w.index()] += delta[w.index()];
            }
        }
    }
    // Running from every source visits each unordered pair twice.
    let scores = g.neighbors().map(|v| bc[v.index()] / 2.0).collect();
    ScoreTable::new("betweenness".into(), scores)
}

/// Burt's network constraint of each neighbor in the neighbor-only graph
/// with uniform tie weights: `p_ij = 1/deg(i)`, and
/// `constraint(i) = sum over j in N(i) of (p_ij + sum_q p_iq * p_qj)^2`
/// where `q` ranges over shared contacts of `i` and `j`. An isolated node
/// gets the sentinel 2.0, above the attainable range, so it ranks as
/// maximally constrained. Low constraint marks a broker, so the predictor
/// direction for this table is minimum.
pub fn constraint_table(g: &EgoNetwork) -> ScoreTable {
    let view = g.without_center();
    let mut scores = Vec::with_capacity(g.neighbor_count());
    for i in g.neighbors() {
        let deg = view.degree(i);
        if deg == 0 {
            scores.push(2.0);
            continue;
        }
        let p_i = 1.0 / deg as f64;
        let contacts: Vec<NodeId> = view.neighbors(i).collect();
        let mut total = 0.0;
        for &j in &contacts {
            let mut indirect = 0.0;
            for &q in &contacts {
                if q != j && view.adjacent(q, j) {
                    indirect += p_i / view.degree(q) as f64;
                }
            }
            let term = p_i + indirect;
            total += term * term;
        }
        scores.push(total);
    }
    ScoreTable::new("constraint".into(), scores)
}
