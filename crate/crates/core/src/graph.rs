//! Immutable ego networks with dense node indexing.
//!
//! An ego network is the subgraph induced on a center node and its direct
//! neighbors. The center is adjacent to every other node by construction, so
//! every non-center node is a neighbor. Nodes are indexed densely in
//! ascending external-id order, which fixes iteration order everywhere and
//! makes results reproducible byte for byte.
//!
//! Adjacency is stored twice: sorted lists for traversal and one bitset row
//! per node for O(n/64) pairwise intersection. [`GraphView`] drops nodes
//! without copying either.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Opaque dense node handle, valid only within the network that minted it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(u32);

impl NodeId {
    pub(crate) fn new(index: usize) -> Self {
        NodeId(index as u32)
    }

    /// Dense index in `0..node_count`.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Immutable ego network.
#[derive(Clone, Debug)]
pub struct EgoNetwork {
    ids: Vec<String>,
    center: u32,
    adj: Vec<Vec<NodeId>>,
    bits: Vec<u64>,
    words: usize,
    edge_count: usize,
    dropped: usize,
}

impl EgoNetwork {
    /// Builds the network induced on `center` and its neighbors.
    ///
    /// Self-loops and edges touching nodes outside the neighborhood are
    /// dropped; the count is kept in [`EgoNetwork::dropped_edge_count`].
    /// Duplicate edges collapse silently.
    pub fn build<S: AsRef<str>>(center: &str, edges: &[(S, S)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let mut center_seen = false;
        let mut neighbors: BTreeSet<&str> = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == center || b == center {
                center_seen = true;
            }
            if a == center && b != center {
                neighbors.insert(b);
            }
            if b == center && a != center {
                neighbors.insert(a);
            }
        }
        if !center_seen {
            return Err(Error::CenterMissing(center.to_owned()));
        }
        if neighbors.is_empty() {
            return Err(Error::IsolatedCenter(center.to_owned()));
        }

        let mut ids: Vec<String> = neighbors.iter().map(|s| (*s).to_owned()).collect();
        ids.push(center.to_owned());
        ids.sort();
        let n = ids.len();
        let center_idx = ids.binary_search_by(|id| id.as_str().cmp(center)).unwrap();

        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        let mut edge_count = 0usize;
        let mut dropped = 0usize;
        let insert = |ai: usize, bi: usize, bits: &mut Vec<u64>| {
            let w = ai * words + bi / 64;
            let m = 1u64 << (bi % 64);
            if bits[w] & m == 0 {
                bits[w] |= m;
                bits[bi * words + ai / 64] |= 1u64 << (ai % 64);
                true
            } else {
                false
            }
        };
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                dropped += 1;
                continue;
            }
            let ai = ids.binary_search_by(|id| id.as_str().cmp(a));
            let bi = ids.binary_search_by(|id| id.as_str().cmp(b));
            match (ai, bi) {
                (Ok(ai), Ok(bi)) => {
                    if insert(ai, bi, &mut bits) {
                        edge_count += 1;
                    }
                }
                _ => dropped += 1,
            }
        }

        let adj = (0..n)
            .map(|i| {
                let row = &bits[i * words..(i + 1) * words];
                iter_bits(row).map(NodeId::new).collect()
            })
            .collect();

        Ok(EgoNetwork {
            ids,
            center: center_idx as u32,
            adj,
            bits,
            words,
            edge_count,
            dropped,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn neighbor_count(&self) -> usize {
        self.ids.len() - 1
    }

    pub fn center(&self) -> NodeId {
        NodeId(self.center)
    }

    pub fn center_id(&self) -> &str {
        &self.ids[self.center as usize]
    }

    /// External id for a dense handle.
    pub fn external_id(&self, n: NodeId) -> &str {
        &self.ids[n.index()]
    }

    /// Dense handle for an external id, if the node exists here.
    pub fn node_id(&self, external: &str) -> Option<NodeId> {
        self.ids
            .binary_search_by(|id| id.as_str().cmp(external))
            .ok()
            .map(NodeId::new)
    }

    /// All nodes in ascending external-id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.ids.len()).map(NodeId::new)
    }

    /// All neighbors of the center in ascending external-id order.
    pub fn neighbors(&self) -> impl Iterator<Item = NodeId> + '_ {
        let center = self.center;
        (0..self.ids.len() as u32)
            .filter(move |&i| i != center)
            .map(NodeId)
    }

    /// Position of neighbor `v` within the [`EgoNetwork::neighbors`] order.
    pub fn neighbor_pos(&self, v: NodeId) -> usize {
        debug_assert!(v.0 != self.center);
        if v.0 < self.center {
            v.index()
        } else {
            v.index() - 1
        }
    }

    /// Neighbor at a given position of the [`EgoNetwork::neighbors`] order.
    pub fn neighbor_at(&self, pos: usize) -> NodeId {
        if (pos as u32) < self.center {
            NodeId::new(pos)
        } else {
            NodeId::new(pos + 1)
        }
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        let w = a.index() * self.words + b.index() / 64;
        self.bits[w] & (1u64 << (b.index() % 64)) != 0
    }

    /// Sorted adjacency list.
    pub fn adj(&self, a: NodeId) -> &[NodeId] {
        &self.adj[a.index()]
    }

    pub fn degree(&self, a: NodeId) -> usize {
        self.adj[a.index()].len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Count of input edges ignored during construction.
    pub fn dropped_edge_count(&self) -> usize {
        self.dropped
    }

    /// Edges as dense pairs with `a < b`, ascending; equivalently sorted by
    /// external id pair.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |a| {
            self.adj(a)
                .iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    pub(crate) fn row(&self, a: NodeId) -> &[u64] {
        &self.bits[a.index() * self.words..(a.index() + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    fn check_neighbor(&self, v: NodeId) -> Result<()> {
        if v.index() >= self.ids.len() {
            return Err(Error::UnknownNode(format!("#{}", v.index())));
        }
        if v.0 == self.center {
            return Err(Error::NotANeighbor(self.center_id().to_owned()));
        }
        Ok(())
    }

    /// Common neighbors of the center and `v`, excluding both.
    pub fn common_neighbors(&self, v: NodeId) -> Result<CommonNeighborSet> {
        self.check_neighbor(v)?;
        let cr = self.row(self.center());
        let vr = self.row(v);
        let bits: Vec<u64> = cr.iter().zip(vr).map(|(a, b)| a & b).collect();
        let members = iter_bits(&bits).map(NodeId::new).collect();
        Ok(CommonNeighborSet { members, bits })
    }

    /// Number of common neighbors of the center and `v`.
    pub fn embeddedness(&self, v: NodeId) -> Result<usize> {
        self.check_neighbor(v)?;
        let cr = self.row(self.center());
        let vr = self.row(v);
        Ok(cr
            .iter()
            .zip(vr)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// View of this network with the given nodes dropped.
    pub fn remove_nodes(&self, drop: &[NodeId]) -> GraphView<'_> {
        let mut removed = vec![0u64; self.words];
        for &d in drop {
            removed[d.index() / 64] |= 1u64 << (d.index() % 64);
        }
        let live = self
            .nodes()
            .filter(|n| removed[n.index() / 64] & (1u64 << (n.index() % 64)) == 0)
            .collect();
        GraphView {
            g: self,
            removed,
            live,
        }
    }

    /// The neighbor-only graph: this network minus its center.
    pub fn without_center(&self) -> GraphView<'_> {
        self.remove_nodes(&[self.center()])
    }

    /// This network minus its center and one neighbor `v`.
    pub fn without_center_and(&self, v: NodeId) -> GraphView<'_> {
        self.remove_nodes(&[self.center(), v])
    }
}

/// Iterate set bit positions of a bitset row, ascending.
fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Common-neighbor set of the center and one neighbor: a sorted dense vector
/// plus a bitset over the full network for O(n/64) membership math.
#[derive(Clone, Debug)]
pub struct CommonNeighborSet {
    members: Vec<NodeId>,
    bits: Vec<u64>,
}

impl CommonNeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending dense order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.bits[n.index() / 64] & (1u64 << (n.index() % 64)) != 0
    }
}

/// Read-only view of an [`EgoNetwork`] with some nodes removed.
#[derive(Clone, Debug)]
pub struct GraphView<'a> {
    g: &'a EgoNetwork,
    removed: Vec<u64>,
    live: Vec<NodeId>,
}

impl<'a> GraphView<'a> {
    pub fn base(&self) -> &'a EgoNetwork {
        self.g
    }

    pub fn node_count(&self) -> usize {
        self.live.len()
    }

    /// Live nodes in ascending dense order.
    pub fn live_nodes(&self) -> &[NodeId] {
        &self.live
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.removed[n.index() / 64] & (1u64 << (n.index() % 64)) == 0
    }

    /// Adjacency within the view; false if either endpoint was removed.
    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.contains(a) && self.contains(b) && self.g.adjacent(a, b)
    }

    /// Live neighbors of a live node, ascending.
    pub fn neighbors(&self, a: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.g.adj(a).iter().copied().filter(|&b| self.contains(b))
    }

    pub fn degree(&self, a: NodeId) -> usize {
        self.neighbors(a).count()
    }

    /// True when `s` and `t` share at least one live neighbor.
    pub fn common_neighbor_exists(&self, s: NodeId, t: NodeId) -> bool {
        let sr = self.g.row(s);
        let tr = self.g.row(t);
        sr.iter()
            .zip(tr)
            .zip(&self.removed)
            .any(|((a, b), r)| a & b & !r != 0)
    }
}
