//! Seeded force-directed layout.
//!
//! Classic repulsion/attraction embedding in the unit square: ideal edge
//! length `k = sqrt(1/n)`, repulsive force `k^2/d` between all pairs,
//! attractive force `d^2/k` along edges, per-step displacement capped by a
//! temperature that cools linearly from 0.1 and never reaches zero.
//!
//! Initial positions draw x then y per node, in ascending dense-index order,
//! from ChaCha8 seeded with the layout seed. Everything else is pure f64
//! arithmetic in a fixed order, so a (view, iterations, seed) triple always
//! produces the same coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distances::PlanarLayout;
use crate::graph::GraphView;

pub fn spring_layout(view: &GraphView, iterations: u32, seed: u64) -> PlanarLayout {
    let n = view.base().node_count();
    let live = view.live_nodes();
    let m = live.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = vec![[0.0f64; 2]; n];
    let mut present = vec![false; n];
    for &node in live {
        let x: f64 = rng.gen();
        let y: f64 = rng.gen();
        pos[node.index()] = [x, y];
        present[node.index()] = true;
    }
    if m <= 1 {
        return PlanarLayout::new(pos, present);
    }

    let edges: Vec<(usize, usize)> = live
        .iter()
        .flat_map(|&a| {
            view.neighbors(a)
                .filter(move |&b| b > a)
                .map(move |b| (a.index(), b.index()))
        })
        .collect();

    let k = (1.0 / m as f64).sqrt();
    let mut t = 0.1f64;
    let dt = t / (f64::from(iterations) + 1.0);

    for _ in 0..iterations {
        let mut disp = vec![[0.0f64; 2]; n];
        for (i, &a) in live.iter().enumerate() {
            let a = a.index();
            for &b in &live[i + 1..] {
                let b = b.index();
                let dx = pos[a][0] - pos[b][0];
                let dy = pos[a][1] - pos[b][1];
                let d = (dx * dx + dy * dy).sqrt().max(1e-9);
                let f = k * k / d / d;
                disp[a][0] += dx * f;
                disp[a][1] += dy * f;
                disp[b][0] -= dx * f;
                disp[b][1] -= dy * f;
            }
        }
        for &(a, b) in &edges {
            let dx = pos[a][0] - pos[b][0];
            let dy = pos[a][1] - pos[b][1];
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d / k;
            disp[a][0] -= dx * f;
            disp[a][1] -= dy * f;
            disp[b][0] += dx * f;
            disp[b][1] += dy * f;
        }
        for &node in live {
            let i = node.index();
            let len = (disp[i][0] * disp[i][0] + disp[i][1] * disp[i][1])
                .sqrt()
                .max(1e-12);
            let limited = len.min(t);
            pos[i][0] += disp[i][0] / len * limited;
            pos[i][1] += disp[i][1] / len * limited;
        }
        t -= dt;
    }

    PlanarLayout::new(pos, present)
}
