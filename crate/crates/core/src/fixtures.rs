//! Small hand-built networks used by tests and doc examples.

use crate::graph::EgoNetwork;

/// Edge list of [`bridge_demo`], center `"u"` first.
///
/// Nine neighbors: a dense cluster `a..f` around the center, a bridge node
/// `h`, and a satellite pair `j, k`. The cluster ties `b, c, f` have the
/// highest embeddedness (5 common friends each) while `h` has 4; but `h`'s
/// common friends split into two groups (`c, f` in the cluster, `j, k`
/// outside) that are mutually unlinked and share no other contacts, so `h`
/// maximizes every dispersion variant.
pub fn bridge_demo_edges() -> Vec<(&'static str, &'static str)> {
    vec![
        ("u", "a"),
        ("u", "b"),
        ("u", "c"),
        ("u", "d"),
        ("u", "e"),
        ("u", "f"),
        ("u", "h"),
        ("u", "j"),
        ("u", "k"),
        ("a", "b"),
        ("a", "c"),
        ("a", "d"),
        ("b", "c"),
        ("b", "d"),
        ("b", "e"),
        ("b", "f"),
        ("c", "d"),
        ("c", "f"),
        ("c", "h"),
        ("d", "f"),
        ("e", "f"),
        ("f", "h"),
        ("h", "j"),
        ("h", "k"),
        ("j", "k"),
    ]
}

/// The worked-example neighborhood: embeddedness and dispersion disagree
/// about which tie is strongest.
pub fn bridge_demo() -> EgoNetwork {
    EgoNetwork::build("u", &bridge_demo_edges()).unwrap()
}

/// Center `"u"` plus a complete graph on `n` neighbors `n00, n01, ...`.
pub fn complete(n: usize) -> EgoNetwork {
    assert!((1..=100).contains(&n));
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    for i in 0..n {
        edges.push(("u".into(), ids[i].clone()));
        for j in i + 1..n {
            edges.push((ids[i].clone(), ids[j].clone()));
        }
    }
    EgoNetwork::build("u", &edges).unwrap()
}

/// Center `"u"` plus a path `v00 - v01 - ... - v(n-1)` of neighbors.
pub fn path(n: usize) -> EgoNetwork {
    assert!((1..=100).contains(&n));
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    for i in 0..n {
        edges.push(("u".into(), ids[i].clone()));
        if i + 1 < n {
            edges.push((ids[i].clone(), ids[i + 1].clone()));
        }
    }
    EgoNetwork::build("u", &edges).unwrap()
}

/// Center `"u"` plus a star: hub `h` linked to `k` leaves `l00, l01, ...`.
pub fn star(k: usize) -> EgoNetwork {
    assert!((1..=100).contains(&k));
    let mut edges: Vec<(String, String)> = vec![("u".into(), "h".into())];
    for i in 0..k {
        let leaf = format!("l{i:02}");
        edges.push(("u".into(), leaf.clone()));
        edges.push(("h".into(), leaf));
    }
    EgoNetwork::build("u", &edges).unwrap()
}
