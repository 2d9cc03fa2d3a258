//! Shortest paths with negative lengths: Bellman–Ford with cycle extraction,
//! Johnson reweighting and Dijkstra.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub len: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BellmanFord {
    /// `dist[v]` is `None` for unreachable vertices; `pred[v]` is the index
    /// of the last arc on a shortest path.
    Distances {
        dist: Vec<Option<i64>>,
        pred: Vec<Option<usize>>,
    },
    /// Arc indices of a negative cycle, in traversal order.
    NegativeCycle(Vec<usize>),
}

/// Bellman–Ford from several sources with given start values.
pub fn bellman_ford(n: usize, arcs: &[Arc], sources: &[(usize, i64)]) -> BellmanFord {
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for &(s, d0) in sources {
        if dist[s].is_none_or(|d| d0 < d) {
            dist[s] = Some(d0);
        }
    }
    let mut last = None;
    for _round in 0..n {
        last = None;
        for (i, a) in arcs.iter().enumerate() {
            let Some(du) = dist[a.from] else { continue };
            let cand = du + a.len;
            if dist[a.to].is_none_or(|dv| cand < dv) {
                dist[a.to] = Some(cand);
                pred[a.to] = Some(i);
                if last.is_none() {
                    last = Some(a.to);
                }
            }
        }
        if last.is_none() {
            return BellmanFord::Distances { dist, pred };
        }
    }
    // still relaxing after n rounds; walk back n steps to land on the cycle
    let mut v = last.expect("relaxed vertex");
    for _ in 0..n {
        v = arcs[pred[v].expect("predecessor")].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let i = pred[v].expect("predecessor");
        cycle.push(i);
        v = arcs[i].from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    BellmanFord::NegativeCycle(cycle)
}

/// Arc indices of the predecessor path ending at `v`.
pub fn path_to(arcs: &[Arc], pred: &[Option<usize>], v: usize) -> Vec<usize> {
    let mut path = Vec::new();
    let mut cur = v;
    while let Some(i) = pred[cur] {
        path.push(i);
        cur = arcs[i].from;
    }
    path.reverse();
    path
}

/// Dijkstra for nonnegative lengths.
pub fn dijkstra(n: usize, adj: &[Vec<(usize, i64)>], source: usize) -> Vec<Option<i64>> {
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0i64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u] != Some(d) {
            continue;
        }
        for &(v, w) in &adj[u] {
            debug_assert!(w >= 0);
            let cand = d + w;
            if dist[v].is_none_or(|dv| cand < dv) {
                dist[v] = Some(cand);
                heap.push(Reverse((cand, v)));
            }
        }
    }
    dist
}

/// Distances from each of `sources` to all vertices, by one Bellman–Ford
/// pass for potentials followed by Dijkstra on the reweighted arcs.
/// Returns the arcs of a negative cycle if one exists.
pub fn johnson(
    n: usize,
    arcs: &[Arc],
    sources: &[usize],
) -> Result<Vec<Vec<Option<i64>>>, Vec<usize>> {
    let all: Vec<(usize, i64)> = (0..n).map(|v| (v, 0)).collect();
    let pot = match bellman_ford(n, arcs, &all) {
        BellmanFord::NegativeCycle(c) => return Err(c),
        BellmanFord::Distances { dist, .. } => {
            dist.into_iter().map(|d| d.unwrap_or(0)).collect::<Vec<_>>()
        }
    };
    let mut adj = vec![Vec::new(); n];
    for a in arcs {
        adj[a.from].push((a.to, a.len + pot[a.from] - pot[a.to]));
    }
    Ok(sources
        .iter()
        .map(|&s| {
            dijkstra(n, &adj, s)
                .into_iter()
                .enumerate()
                .map(|(v, d)| d.map(|d| d - pot[s] + pot[v]))
                .collect()
        })
        .collect())
}
