//! Random edge-list generators for the comparison suites.
//!
//! Everything returns plain `(String, String)` edge lists with the center
//! named `"u"`, so the same input can feed both the library and the naive
//! models without either side translating for the other.

use rand::Rng;

fn ids(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("v{i:02}")).collect()
}

fn star_edges(ids: &[String]) -> Vec<(String, String)> {
    ids.iter().map(|v| ("u".to_owned(), v.clone())).collect()
}

/// A random ego network with 1 to `max_neighbors` neighbors and one of a
/// few densities, biased to hit sparse, clustered, and dense regimes.
pub fn random_ego<R: Rng>(rng: &mut R, max_neighbors: usize) -> Vec<(String, String)> {
    let m = rng.gen_range(1..=max_neighbors);
    let q = [0.15, 0.3, 0.5, 0.8][rng.gen_range(0..4)];
    let ids = ids(m);
    let mut edges = star_edges(&ids);
    for i in 0..m {
        for j in i + 1..m {
            if rng.gen::<f64>() < q {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    edges
}

/// A random ego network whose view without the center has girth at least
/// five: start from a uniform random tree, then add extra chords only
/// between nodes at hop distance four or more.
pub fn high_girth_ego<R: Rng>(rng: &mut R, max_neighbors: usize) -> Vec<(String, String)> {
    let m = rng.gen_range(4..=max_neighbors.max(4));
    let ids = ids(m);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 1..m {
        let parent = rng.gen_range(0..i);
        adj[i].push(parent);
        adj[parent].push(i);
    }
    let chords = rng.gen_range(0..=3);
    for _ in 0..chords {
        let a = rng.gen_range(0..m);
        let b = rng.gen_range(0..m);
        if a == b || adj[a].contains(&b) {
            continue;
        }
        if hop(&adj, a, b) >= 4 {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut edges = star_edges(&ids);
    for a in 0..m {
        for &b in &adj[a] {
            if a < b {
                edges.push((ids[a].clone(), ids[b].clone()));
            }
        }
    }
    edges
}

fn hop(adj: &[Vec<usize>], s: usize, t: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            return dist[t];
        }
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    usize::MAX
}
