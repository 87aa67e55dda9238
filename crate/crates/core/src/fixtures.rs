//! Named graph families, the catalog of small connected graphs, and a seeded
//! random graph generator.

#[cfg(feature = "oracle")]
use alloc::collections::BTreeSet;
#[cfg(feature = "oracle")]
use alloc::vec;
use alloc::vec::Vec;

use rand_core::Rng;
use rand_pcg::Pcg32;

use crate::graph::Graph;

/// Stream constant for [`GraphSampler`]; PCG's published default increment
/// shifted right by one, as `Pcg32::new` expects.
pub const SAMPLER_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

fn build(vertex_count: usize, edges: &[(usize, usize)]) -> Graph {
    match Graph::new(vertex_count, edges) {
        Ok(g) => g,
        Err(e) => panic!("fixture construction failed: {e}"),
    }
}

/// Path `P_n` on `n >= 2` vertices.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    build(n, &edges)
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    build(n, &edges)
}

/// Star with centre 0 and `leaves` edges.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    build(n, &edges)
}

/// `K_{m,p}`: vertices `0..m` on one side, `m..m+p` on the other.
pub fn complete_bipartite(m: usize, p: usize) -> Graph {
    let edges: Vec<_> = (0..m).flat_map(|u| (m..m + p).map(move |v| (u, v))).collect();
    build(m + p, &edges)
}

#[cfg(feature = "oracle")]
// Bit index of the unordered pair (u, v), u < v, in a graph on n vertices.
fn pair_bit(n: usize, u: usize, v: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

#[cfg(feature = "oracle")]
fn mask_edges(n: usize, mask: u64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mask >> pair_bit(n, u, v) & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    edges
}

#[cfg(feature = "oracle")]
fn mask_connected(n: usize, mask: u64) -> bool {
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        for u in (0..n).filter(|&u| frontier >> u & 1 == 1) {
            for v in 0..n {
                if v != u {
                    let (a, b) = (u.min(v), u.max(v));
                    if mask >> pair_bit(n, a, b) & 1 == 1 && seen >> v & 1 == 0 {
                        next |= 1 << v;
                    }
                }
            }
        }
        seen |= next;
        frontier = next;
    }
    seen.count_ones() as usize == n
}

#[cfg(feature = "oracle")]
// Smallest adjacency bitmask over all vertex orders that list vertices by an
// isomorphism-invariant label and permute freely inside label classes.
fn canonical_mask(n: usize, mask: u64) -> u64 {
    let edges = mask_edges(n, mask);
    let mut adj = vec![vec![false; n]; n];
    let mut degree = vec![0u64; n];
    for &(u, v) in &edges {
        adj[u][v] = true;
        adj[v][u] = true;
        degree[u] += 1;
        degree[v] += 1;
    }
    let label = |v: usize| -> u64 {
        let mut nd: Vec<u64> = (0..n).filter(|&w| adj[v][w]).map(|w| degree[w]).collect();
        nd.sort_unstable();
        nd.iter().fold(degree[v], |acc, &d| acc * 16 + d + 1)
    };
    let labels: Vec<u64> = (0..n).map(label).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| labels[v]);
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || labels[order[i]] != labels[order[start]] {
            classes.push((start, i));
            start = i;
        }
    }
    let mut best = u64::MAX;
    permute_classes(&classes, 0, &mut order, &mut |ord| {
        let mut m = 0u64;
        for p in 0..n {
            for q in p + 1..n {
                if adj[ord[p]][ord[q]] {
                    m |= 1 << pair_bit(n, p, q);
                }
            }
        }
        best = best.min(m);
    });
    best
}

#[cfg(feature = "oracle")]
fn permute_classes(
    classes: &[(usize, usize)],
    class: usize,
    order: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if class == classes.len() {
        visit(order);
        return;
    }
    let (lo, hi) = classes[class];
    heap_permute(lo, hi - lo, order, &mut |ord| {
        let mut ord = ord.to_vec();
        permute_classes(classes, class + 1, &mut ord, visit);
    });
}

#[cfg(feature = "oracle")]
// Heap's algorithm over order[lo..lo+k].
fn heap_permute(lo: usize, k: usize, order: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(lo, k - 1, order, visit);
        if k.is_multiple_of(2) {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
    heap_permute(lo, k - 1, order, visit);
}

/// Every connected simple graph on exactly `n` vertices, one per isomorphism
/// class. Supports `2 <= n <= 8`.
#[cfg(feature = "oracle")]
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((2..=8).contains(&n), "catalog supports 2..=8 vertices");
    let pairs = n * (n - 1) / 2;
    let mut level: BTreeSet<u64> = BTreeSet::new();
    level.insert(0);
    let mut out = Vec::new();
    for _ in 0..pairs {
        let mut next = BTreeSet::new();
        for &mask in &level {
            for bit in 0..pairs {
                if mask >> bit & 1 == 0 {
                    next.insert(canonical_mask(n, mask | 1 << bit));
                }
            }
        }
        out.extend(
            next.iter()
                .filter(|&&m| mask_connected(n, m))
                .map(|&m| build(n, &mask_edges(n, m))),
        );
        level = next;
    }
    out
}

/// All connected graphs with `2 <= V <= max_vertices`, smallest first.
#[cfg(feature = "oracle")]
pub fn catalog(max_vertices: usize) -> Vec<Graph> {
    (2..=max_vertices).flat_map(connected_graphs).collect()
}

/// Seeded PCG32 (XSH-RR, 64-bit state) source of fixtures.
///
/// Derived draws are pinned so another implementation can reproduce them:
/// `next_u64 = hi << 32 | lo` from two consecutive 32-bit outputs (hi first),
/// `unit = (next_u64 >> 11) * 2^-53`, and `below(n)` rejects 32-bit outputs
/// at or above `floor(2^32 / n) * n` before reducing mod `n`.
#[derive(Debug, Clone)]
pub struct GraphSampler {
    rng: Pcg32,
}

impl GraphSampler {
    pub fn new(seed: u64) -> Self {
        GraphSampler { rng: Pcg32::new(seed, SAMPLER_STREAM) }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        let hi = u64::from(self.next_u32());
        let lo = u64::from(self.next_u32());
        hi << 32 | lo
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0);
        let limit = (u64::from(u32::MAX) + 1) / u64::from(n) * u64::from(n);
        loop {
            let x = self.next_u32();
            if u64::from(x) < limit {
                return x % n;
            }
        }
    }

    /// Erdős–Rényi graph on `V` vertices (`V` uniform in `min_v..=max_v`)
    /// conditioned by rejection on being connected with at most `max_edges`
    /// edges. Each attempt draws `p` uniform in `[0.25, 0.75)` and then one
    /// `unit()` per vertex pair in lexicographic order.
    pub fn connected_graph(&mut self, min_v: usize, max_v: usize, max_edges: usize) -> Graph {
        assert!(2 <= min_v && min_v <= max_v && max_edges + 1 >= max_v);
        let v = min_v + self.below((max_v - min_v + 1) as u32) as usize;
        loop {
            let p = 0.25 + 0.5 * self.unit();
            let mut edges = Vec::new();
            for a in 0..v {
                for b in a + 1..v {
                    if self.unit() < p {
                        edges.push((a, b));
                    }
                }
            }
            if edges.len() <= max_edges {
                if let Ok(g) = Graph::new(v, &edges) {
                    return g;
                }
            }
        }
    }

    /// `count` lengths uniform in `[base, base + spread)`.
    pub fn lengths(&mut self, count: usize, base: f64, spread: f64) -> Vec<f64> {
        (0..count)
            .map(|_| {
                let l = base + spread * self.unit();
                // keep the half-open window even when the sum rounds up
                if l >= base + spread && spread > 0.0 { base } else { l }
            })
            .collect()
    }
}
