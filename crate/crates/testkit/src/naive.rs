//! Slow reference implementations on plain string adjacency maps.
//!
//! Nothing here imports the library under test. Scores are computed the
//! way one would on a whiteboard: materialize the neighborhood, loop over
//! pairs, run textbook searches. Quadratic and exponential corners are
//! fine because callers only feed in graphs of a dozen nodes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// An ego network modeled as nothing but an adjacency map.
///
/// Construction mirrors the documented input contract: keep the center
/// and its direct neighbors, drop self-loops, duplicates, and any edge
/// touching a node outside that set.
pub struct Model {
    center: String,
    adj: BTreeMap<String, BTreeSet<String>>,
}

impl Model {
    pub fn new(center: &str, edges: &[(String, String)]) -> Model {
        let mut nbrs: BTreeSet<String> = BTreeSet::new();
        for (a, b) in edges {
            if a == center && b != center {
                nbrs.insert(b.clone());
            }
            if b == center && a != center {
                nbrs.insert(a.clone());
            }
        }
        let mut adj: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        adj.insert(center.to_owned(), BTreeSet::new());
        for n in &nbrs {
            adj.insert(n.clone(), BTreeSet::new());
        }
        for (a, b) in edges {
            let inside =
                |x: &String| x == center || nbrs.contains(x.as_str());
            if a != b && inside(a) && inside(b) {
                adj.get_mut(a.as_str()).unwrap().insert(b.clone());
                adj.get_mut(b.as_str()).unwrap().insert(a.clone());
            }
        }
        Model {
            center: center.to_owned(),
            adj,
        }
    }

    pub fn center(&self) -> &str {
        &self.center
    }

    /// Neighbor ids in ascending order.
    pub fn neighbors(&self) -> Vec<&str> {
        self.adj
            .keys()
            .filter(|k| **k != self.center)
            .map(|s| s.as_str())
            .collect()
    }

    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn degree_without_center(&self, v: &str) -> usize {
        self.adj[v].iter().filter(|w| **w != self.center).count()
    }

    /// Common neighbors of the center and `v`, ascending.
    pub fn common(&self, v: &str) -> Vec<&str> {
        self.neighbors()
            .into_iter()
            .filter(|w| *w != v && self.adjacent(w, v))
            .collect()
    }

    pub fn emb(&self, v: &str) -> usize {
        self.common(v).len()
    }

    /// Breadth-first hop count from `s` to `t` ignoring `excluded` nodes;
    /// `None` when unreachable or either endpoint is excluded.
    pub fn dist(&self, excluded: &[&str], s: &str, t: &str) -> Option<usize> {
        if excluded.contains(&s) || excluded.contains(&t) {
            return None;
        }
        if s == t {
            return Some(0);
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        seen.insert(s);
        let mut queue: VecDeque<(&str, usize)> = VecDeque::new();
        queue.push_back((s, 0));
        while let Some((x, d)) = queue.pop_front() {
            for y in &self.adj[x] {
                let y = y.as_str();
                if excluded.contains(&y) || !seen.insert(y) {
                    continue;
                }
                if y == t {
                    return Some(d + 1);
                }
                queue.push_back((y, d + 1));
            }
        }
        None
    }
}

/// How to measure the separation of a common-neighbor pair.
pub enum PairDist<'a> {
    /// 1 when the hop distance in the view without the center and `v` is
    /// at least this radius (or the pair is disconnected), else 0.
    Threshold(u32),
    /// 1 when the pair is disconnected in that same view.
    Component,
    /// A caller-supplied pairwise value, used to replay context-based
    /// distances (community labels, layout geometry) through the naive
    /// pair loop.
    Shared(&'a dyn Fn(&str, &str) -> f64),
}

pub fn pair_distance(m: &Model, v: &str, s: &str, t: &str, d: &PairDist) -> f64 {
    match d {
        PairDist::Threshold(r) => {
            let excluded = [m.center(), v];
            match m.dist(&excluded, s, t) {
                None => 1.0,
                Some(h) => {
                    if h >= *r as usize {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        }
        PairDist::Component => {
            let excluded = [m.center(), v];
            if m.dist(&excluded, s, t).is_none() {
                1.0
            } else {
                0.0
            }
        }
        PairDist::Shared(f) => f(s, t),
    }
}

/// Sum of pair distances over the unordered common-neighbor pairs of `v`.
pub fn disp(m: &Model, v: &str, d: &PairDist) -> f64 {
    let c = m.common(v);
    let mut total = 0.0;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            total += pair_distance(m, v, c[i], c[j], d);
        }
    }
    total
}

pub fn norm(m: &Model, v: &str, d: &PairDist) -> f64 {
    let emb = m.emb(v);
    if emb == 0 {
        0.0
    } else {
        disp(m, v, d) / emb as f64
    }
}

pub fn parametric(m: &Model, v: &str, d: &PairDist, alpha: f64, b: f64, c: f64) -> f64 {
    let base = disp(m, v, d) + b;
    let numerator = if base <= 0.0 { 0.0 } else { base.powf(alpha) };
    let denominator = m.emb(v) as f64 + c;
    if denominator <= 0.0 {
        if numerator > 0.0 {
            return f64::INFINITY;
        }
        return 0.0;
    }
    numerator / denominator
}

/// Synchronous quadratic iteration from all-ones, every neighbor at once.
pub fn recursive(m: &Model, d: &PairDist, iterations: u32) -> BTreeMap<String, f64> {
    let nbrs = m.neighbors();
    let mut x: BTreeMap<&str, f64> = nbrs.iter().map(|v| (*v, 1.0)).collect();
    for _ in 0..iterations {
        let mut next: BTreeMap<&str, f64> = BTreeMap::new();
        for v in &nbrs {
            let c = m.common(v);
            if c.is_empty() {
                next.insert(v, 0.0);
                continue;
            }
            let mut numerator: f64 = c.iter().map(|w| x[*w] * x[*w]).sum();
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    numerator += 2.0
                        * pair_distance(m, v, c[i], c[j], d)
                        * x[c[i]]
                        * x[c[j]];
                }
            }
            next.insert(v, numerator / c.len() as f64);
        }
        x = next;
    }
    x.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

/// Betweenness in the view without the center, by literally enumerating
/// every shortest path of every unordered pair and crediting interior
/// nodes their fair share.
pub fn betweenness(m: &Model) -> BTreeMap<String, f64> {
    let nbrs = m.neighbors();
    let mut bc: BTreeMap<&str, f64> = nbrs.iter().map(|v| (*v, 0.0)).collect();
    for i in 0..nbrs.len() {
        for j in i + 1..nbrs.len() {
            let paths = shortest_paths(m, nbrs[i], nbrs[j]);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for path in &paths {
                for w in &path[1..path.len() - 1] {
                    *bc.get_mut(w).unwrap() += 1.0 / total;
                }
            }
        }
    }
    bc.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

/// All shortest `s`-`t` paths in the view without the center.
fn shortest_paths<'m>(m: &'m Model, s: &'m str, t: &'m str) -> Vec<Vec<&'m str>> {
    let excluded = [m.center()];
    let Some(target) = m.dist(&excluded, s, t) else {
        return Vec::new();
    };
    // Levels first, then depth-first descent from t toward s along edges
    // that drop exactly one level.
    let mut level: BTreeMap<&str, usize> = BTreeMap::new();
    level.insert(s, 0);
    let mut queue: VecDeque<&str> = VecDeque::new();
    queue.push_back(s);
    while let Some(x) = queue.pop_front() {
        for y in &m.adj[x] {
            let y = y.as_str();
            if y == m.center() || level.contains_key(y) {
                continue;
            }
            level.insert(y, level[x] + 1);
            queue.push_back(y);
        }
    }
    let mut paths = Vec::new();
    let mut stack: Vec<&str> = vec![t];
    descend(m, &level, s, &mut stack, &mut paths);
    debug_assert!(paths.iter().all(|p| p.len() == target + 1));
    paths
}

fn descend<'m>(
    m: &'m Model,
    level: &BTreeMap<&'m str, usize>,
    s: &'m str,
    stack: &mut Vec<&'m str>,
    paths: &mut Vec<Vec<&'m str>>,
) {
    let here = *stack.last().unwrap();
    if here == s {
        let mut path: Vec<&str> = stack.clone();
        path.reverse();
        paths.push(path);
        return;
    }
    for y in &m.adj[here] {
        let y = y.as_str();
        if y == m.center() {
            continue;
        }
        if level.get(y) == Some(&(level[here] - 1)) {
            stack.push(y);
            descend(m, level, s, stack, paths);
            stack.pop();
        }
    }
}

/// Burt's constraint in the view without the center: for each contact `j`
/// of `v`, square the direct share `1/deg(v)` plus the indirect share
/// routed through every mutual contact `q`. Isolated nodes get the 2.0
/// out-of-range sentinel.
pub fn constraint(m: &Model) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for v in m.neighbors() {
        let contacts: Vec<&str> = m.adj[v]
            .iter()
            .map(|s| s.as_str())
            .filter(|w| *w != m.center())
            .collect();
        if contacts.is_empty() {
            out.insert(v.to_owned(), 2.0);
            continue;
        }
        let p = 1.0 / contacts.len() as f64;
        let mut total = 0.0;
        for j in &contacts {
            let mut share = p;
            for q in &contacts {
                if q != j && m.adjacent(q, j) {
                    share += p / m.degree_without_center(q) as f64;
                }
            }
            total += share * share;
        }
        out.insert(v.to_owned(), total);
    }
    out
}
