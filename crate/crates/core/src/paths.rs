//! Shortest paths with exact rational weights.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::distance::{Distance, Rational};

/// Weighted adjacency lists over vertices `0..n`. Weights must be nonnegative.
pub type Adjacency = Vec<Vec<(usize, Rational)>>;

/// Single-source shortest paths (Dijkstra). Unreachable vertices are
/// `Distance::Infinite`.
pub fn dijkstra(adj: &Adjacency, source: usize) -> Vec<Distance> {
    let n = adj.len();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(Rational::from_integer(0));
    heap.push(Reverse((Rational::from_integer(0), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u] {
            debug_assert!(w >= Rational::from_integer(0));
            let nd = d + w;
            if dist[v].is_none_or(|cur| nd < cur) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist.into_iter()
        .map(|d| d.map_or(Distance::Infinite, Distance::Finite))
        .collect()
}

/// All-pairs shortest paths by repeated Dijkstra, as a row-major `n × n`
/// matrix.
pub fn all_pairs(adj: &Adjacency) -> Vec<Distance> {
    let n = adj.len();
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n {
        out.extend(dijkstra(adj, s));
    }
    out
}

/// Unit-weight breadth-first distances from `source`.
pub fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices are labelled");
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Shortest-path closure of a dense matrix (Floyd–Warshall), in place.
/// Returns `true` when any entry decreased.
pub fn metric_closure(n: usize, values: &mut [Distance]) -> bool {
    let mut changed = false;
    for k in 0..n {
        for i in 0..n {
            let ik = values[i * n + k];
            if !ik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = ik + values[k * n + j];
                if via < values[i * n + j] {
                    values[i * n + j] = via;
                    changed = true;
                }
            }
        }
    }
    changed
}
