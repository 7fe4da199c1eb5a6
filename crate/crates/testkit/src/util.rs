//! Helpers that legitimately touch the real library: tolerance checks,
//! adapters feeding its shared distance contexts into the naive pair
//! loops, and a node-renaming rebuild used by two-network scenarios.

use std::collections::BTreeMap;

use egonet::distances::DistanceContext;
use egonet::EgoNetwork;

/// Relative comparison with an absolute floor of 1, so values near zero
/// are held to `tol` absolutely and large values proportionally.
pub fn relative_eq(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}

/// The library's own edge list, as owned pairs of external ids.
pub fn edges_of(g: &EgoNetwork) -> Vec<(String, String)> {
    g.edges()
        .map(|(a, b)| (g.external_id(a).to_owned(), g.external_id(b).to_owned()))
        .collect()
}

/// A pairwise 0/1 distance reading community labels from the library's
/// shared context. Replaying it through the naive pair loop checks the
/// dispersion plumbing around the clustering, not the clustering itself.
pub fn community_closure(
    g: &EgoNetwork,
    ctx: &DistanceContext,
) -> impl Fn(&str, &str) -> f64 + use<> {
    let partition = ctx.partition().expect("context has a partition").clone();
    let ids: BTreeMap<String, egonet::NodeId> = g
        .nodes()
        .map(|n| (g.external_id(n).to_owned(), n))
        .collect();
    move |s, t| {
        let cs = partition.community_of(ids[s]).expect("s is in the view");
        let ct = partition.community_of(ids[t]).expect("t is in the view");
        if cs == ct {
            0.0
        } else {
            1.0
        }
    }
}

/// Euclidean separation recomputed from the shared layout's coordinates.
pub fn spring_closure(
    g: &EgoNetwork,
    ctx: &DistanceContext,
) -> impl Fn(&str, &str) -> f64 + use<> {
    let layout = ctx.layout().expect("context has a layout").clone();
    let ids: BTreeMap<String, egonet::NodeId> = g
        .nodes()
        .map(|n| (g.external_id(n).to_owned(), n))
        .collect();
    move |s, t| {
        let ps = layout.position(ids[s]).expect("s is placed");
        let pt = layout.position(ids[t]).expect("t is placed");
        (ps[0] - pt[0]).hypot(ps[1] - pt[1])
    }
}

/// Rebuilds a network with external ids substituted per `map` (ids not in
/// the map pass through). Lets one generated network impersonate another
/// center, which is how reverse-direction scenarios are staged.
pub fn rename_network(g: &EgoNetwork, map: &BTreeMap<String, String>) -> EgoNetwork {
    let rename = |id: &str| -> String {
        map.get(id).cloned().unwrap_or_else(|| id.to_owned())
    };
    let edges: Vec<(String, String)> = g
        .edges()
        .map(|(a, b)| (rename(g.external_id(a)), rename(g.external_id(b))))
        .collect();
    EgoNetwork::build(&rename(g.center_id()), &edges).expect("renamed network rebuilds")
}

/// Builds reverse-direction networks for the named candidates of one
/// forward instance, staging a mutual-partner world: the true partner's
/// own network plants the forward center as its partner, while every
/// other candidate's network contains the forward center only as an
/// ordinary member of its first focus.
///
/// Generated member ids are moved into an `r`-prefixed namespace before
/// the forward ids are spliced in, so the two networks' vocabularies
/// cannot collide.
pub fn stage_reverse_networks(
    forward: &egonet::ranking::Instance,
    candidates: &[String],
    params: &egonet::synthgen::GenParams,
    seed_base: u64,
) -> BTreeMap<String, EgoNetwork> {
    use egonet::seed::derive_seed;
    use egonet::synthgen::{generate_instance, CENTER_ID, PARTNER_ID};

    let center = forward.network().center_id();
    let partner = forward.partner_id();
    let mut out = BTreeMap::new();
    for (i, cand) in candidates.iter().enumerate() {
        let mut p = params.clone();
        p.seed = derive_seed(seed_base, i as u64);
        let inst = generate_instance(&p).expect("reverse network generates");
        let g = inst.network();
        let mut map: BTreeMap<String, String> = g
            .neighbors()
            .map(|n| g.external_id(n))
            .filter(|id| id.starts_with('f'))
            .map(|id| (id.to_owned(), format!("r{}", &id[1..])))
            .collect();
        map.insert(CENTER_ID.to_owned(), cand.clone());
        if cand == partner {
            map.insert(PARTNER_ID.to_owned(), center.to_owned());
        } else {
            map.insert(PARTNER_ID.to_owned(), "rpartner".to_owned());
            map.insert("f0000".to_owned(), center.to_owned());
        }
        out.insert(cand.clone(), rename_network(g, &map));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use egonet::distances::{distance_context, DistanceSpec};
    use egonet::fixtures;

    #[test]
    fn relative_eq_handles_zero_and_infinity() {
        assert!(relative_eq(0.0, 5e-10, 1e-9));
        assert!(relative_eq(f64::INFINITY, f64::INFINITY, 1e-9));
        assert!(!relative_eq(1.0, 1.1, 1e-9));
        assert!(relative_eq(1e12, 1e12 * (1.0 + 1e-10), 1e-9));
    }

    #[test]
    fn closures_cover_every_neighbor_pair() {
        let g = fixtures::bridge_demo();
        let spec = DistanceSpec::parse("community").unwrap();
        let ctx = distance_context(&g, &spec);
        let f = community_closure(&g, &ctx);
        let spring = DistanceSpec::spring();
        let sctx = distance_context(&g, &spring);
        let s = spring_closure(&g, &sctx);
        let ids: Vec<&str> = g.neighbors().map(|n| g.external_id(n)).collect();
        for a in &ids {
            for b in &ids {
                if a < b {
                    let c = f(a, b);
                    assert!(c == 0.0 || c == 1.0);
                    assert!(s(a, b).is_finite());
                }
            }
        }
    }

    #[test]
    fn renaming_preserves_structure() {
        let g = fixtures::bridge_demo();
        let mut map = BTreeMap::new();
        map.insert("u".to_owned(), "x".to_owned());
        map.insert("h".to_owned(), "u".to_owned());
        let r = rename_network(&g, &map);
        assert_eq!(r.center_id(), "x");
        assert_eq!(r.node_count(), g.node_count());
        assert_eq!(r.edge_count(), g.edge_count());
        let u = r.node_id("u").unwrap();
        assert_eq!(r.embeddedness(u).unwrap(), 4);
    }
}
