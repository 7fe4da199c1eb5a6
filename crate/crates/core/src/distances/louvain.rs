//! Greedy modularity communities with a pinned, deterministic schedule.
//!
//! Local moves sweep nodes in ascending dense-index order. A node moves only
//! when some neighboring community offers a strictly positive modularity
//! gain over staying; among equal best gains the smallest community id wins.
//! A pass with no improving move ends the level; communities are then
//! renumbered by their smallest member and aggregated, and the process
//! repeats until a level makes no move. Resolution is fixed at 1 and input
//! edges are unweighted (aggregation introduces internal weights only).

use std::collections::BTreeMap;

use crate::distances::Partition;
use crate::graph::GraphView;

const NOT_IN_VIEW: u32 = u32::MAX;

/// Modularity of a partition over the view's unweighted edges; 0 for an
/// edgeless view.
pub fn modularity(view: &GraphView, p: &Partition) -> f64 {
    let count = p.community_count();
    if count == 0 {
        return 0.0;
    }
    let mut internal = vec![0.0f64; count];
    let mut total_deg = vec![0.0f64; count];
    let mut two_m = 0.0f64;
    for &a in view.live_nodes() {
        let ca = match p.community_of(a) {
            Some(c) => c as usize,
            None => continue,
        };
        for b in view.neighbors(a) {
            two_m += 1.0;
            total_deg[ca] += 1.0;
            if p.community_of(b) == Some(ca as u32) {
                internal[ca] += 1.0;
            }
        }
    }
    if two_m == 0.0 {
        return 0.0;
    }
    (0..count)
        .map(|c| internal[c] / two_m - (total_deg[c] / two_m).powi(2))
        .sum()
}

/// Community detection on a view.
pub fn louvain(view: &GraphView) -> Partition {
    let n = view.base().node_count();
    let live = view.live_nodes();
    let m = live.len();
    if m == 0 {
        return Partition::from_raw_labels(vec![NOT_IN_VIEW; n]);
    }

    let mut compact = vec![usize::MAX; n];
    for (ci, &node) in live.iter().enumerate() {
        compact[node.index()] = ci;
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (ci, &node) in live.iter().enumerate() {
        for nb in view.neighbors(node) {
            let cj = compact[nb.index()];
            if cj > ci {
                adj[ci].push((cj, 1.0));
                adj[cj].push((ci, 1.0));
            }
        }
    }
    let mut self_loops = vec![0.0f64; m];
    let mut assignment: Vec<usize> = (0..m).collect();

    let raw_of = |assignment: &[usize]| {
        let mut raw = vec![NOT_IN_VIEW; n];
        for (ci, &node) in live.iter().enumerate() {
            raw[node.index()] = assignment[ci] as u32;
        }
        raw
    };
    let mut prev_q = modularity(view, &Partition::from_raw_labels(raw_of(&assignment)));

    loop {
        let (labels, any_move) = one_level(&adj, &self_loops);

        // Renumber communities by smallest contained node of this level.
        let mut renum = vec![usize::MAX; labels.len()];
        let mut next = 0usize;
        for &l in &labels {
            if renum[l] == usize::MAX {
                renum[l] = next;
                next += 1;
            }
        }
        for slot in assignment.iter_mut() {
            *slot = renum[labels[*slot]];
        }

        let q = modularity(view, &Partition::from_raw_labels(raw_of(&assignment)));
        debug_assert!(
            q >= prev_q - 1e-9,
            "modularity decreased across a level: {prev_q} -> {q}"
        );
        prev_q = q;

        if !any_move {
            break;
        }

        // Aggregate: one node per community, internal weight as self-loops.
        let mut new_self = vec![0.0f64; next];
        let mut new_edges: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); next];
        for i in 0..labels.len() {
            let ci = renum[labels[i]];
            new_self[ci] += self_loops[i];
            for &(j, w) in &adj[i] {
                if j > i {
                    let cj = renum[labels[j]];
                    if ci == cj {
                        new_self[ci] += w;
                    } else {
                        let (a, b) = (ci.min(cj), ci.max(cj));
                        *new_edges[a].entry(b).or_insert(0.0) += w;
                    }
                }
            }
        }
        let mut next_adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); next];
        for (a, row) in new_edges.iter().enumerate() {
            for (&b, &w) in row {
                next_adj[a].push((b, w));
                next_adj[b].push((a, w));
            }
        }
        adj = next_adj;
        self_loops = new_self;
    }

    Partition::from_raw_labels(raw_of(&assignment))
}

/// One local-move level on a weighted graph. Returns the community of each
/// node and whether any move happened.
fn one_level(adj: &[Vec<(usize, f64)>], self_loops: &[f64]) -> (Vec<usize>, bool) {
    let m = adj.len();
    let mut k = vec![0.0f64; m];
    let mut two_m = 0.0f64;
    for i in 0..m {
        let w_sum: f64 = adj[i].iter().map(|&(_, w)| w).sum();
        k[i] = w_sum + 2.0 * self_loops[i];
        two_m += w_sum + 2.0 * self_loops[i];
    }
    let mut comm: Vec<usize> = (0..m).collect();
    if two_m == 0.0 {
        return (comm, false);
    }
    let mut sigma_tot = k.clone();
    let mut any_move = false;
    loop {
        let mut moved = false;
        for i in 0..m {
            let mut neigh: BTreeMap<usize, f64> = BTreeMap::new();
            for &(j, w) in &adj[i] {
                if j != i {
                    *neigh.entry(comm[j]).or_insert(0.0) += w;
                }
            }
            let old = comm[i];
            sigma_tot[old] -= k[i];
            let stay = neigh.get(&old).copied().unwrap_or(0.0) - sigma_tot[old] * k[i] / two_m;
            let mut best_comm = old;
            let mut best_gain = stay;
            for (&c, &w_ic) in &neigh {
                if c == old {
                    continue;
                }
                let gain = w_ic - sigma_tot[c] * k[i] / two_m;
                if gain > best_gain {
                    best_gain = gain;
                    best_comm = c;
                }
            }
            comm[i] = best_comm;
            sigma_tot[best_comm] += k[i];
            if best_comm != old {
                moved = true;
                any_move = true;
            }
        }
        if !moved {
            break;
        }
    }
    (comm, any_move)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EgoNetwork;

    fn net(center: &str, edges: &[(&str, &str)]) -> EgoNetwork {
        EgoNetwork::build(center, edges).unwrap()
    }

    // Two 4-cliques joined by a single bridge, hung off a center so the
    // neighbor-only view is exactly the clique pair.
    fn clique_pair() -> EgoNetwork {
        let mut edges: Vec<(String, String)> = Vec::new();
        let a = ["a0", "a1", "a2", "a3"];
        let b = ["b0", "b1", "b2", "b3"];
        for group in [&a, &b] {
            for i in 0..4 {
                edges.push(("u".into(), group[i].into()));
                for j in i + 1..4 {
                    edges.push((group[i].into(), group[j].into()));
                }
            }
        }
        edges.push(("a0".into(), "b0".into()));
        EgoNetwork::build("u", &edges).unwrap()
    }

    #[test]
    fn splits_clique_pair_into_its_cliques() {
        let g = clique_pair();
        let p = louvain(&g.without_center());
        assert_eq!(p.community_count(), 2);
        let of = |s: &str| p.community_of(g.node_id(s).unwrap()).unwrap();
        for x in ["a0", "a1", "a2", "a3"] {
            assert_eq!(of(x), 0);
        }
        for x in ["b0", "b1", "b2", "b3"] {
            assert_eq!(of(x), 1);
        }
    }

    #[test]
    fn merges_a_complete_graph_into_one_community() {
        let mut edges: Vec<(String, String)> = Vec::new();
        let ids: Vec<String> = (0..5).map(|i| format!("n{i}")).collect();
        for i in 0..5 {
            edges.push(("u".into(), ids[i].clone()));
            for j in i + 1..5 {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
        let g = EgoNetwork::build("u", &edges).unwrap();
        let p = louvain(&g.without_center());
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn edgeless_view_stays_singletons_with_zero_modularity() {
        let g = net("u", &[("u", "a"), ("u", "b"), ("u", "c")]);
        let view = g.without_center();
        let p = louvain(&view);
        assert_eq!(p.community_count(), 3);
        assert_eq!(modularity(&view, &p), 0.0);
    }

    #[test]
    fn never_worse_than_singletons() {
        let g = clique_pair();
        let view = g.without_center();
        let mut raw = vec![u32::MAX; g.node_count()];
        for (i, node) in view.live_nodes().iter().enumerate() {
            raw[node.index()] = i as u32;
        }
        let singleton = Partition::from_raw_labels(raw);
        let found = louvain(&view);
        assert!(modularity(&view, &found) >= modularity(&view, &singleton));
    }

    #[test]
    fn deterministic_across_runs() {
        let g = clique_pair();
        let p1 = louvain(&g.without_center());
        let p2 = louvain(&g.without_center());
        assert_eq!(p1, p2);
    }
}
