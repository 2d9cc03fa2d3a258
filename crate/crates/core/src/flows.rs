//! Flows with a prescribed boundary, nowhere-zero completion and the
//! enumeration of relevant boundaries.

use std::collections::VecDeque;

use thiserror::Error;

use crate::chains::{Chain0, Chain1};
use crate::map::{admissible_values, CombinatorialMap, HalfEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("boundary entries do not sum to zero")]
    NotAZeroBoundary,
    #[error("zero-coefficient edges have a vertex of odd degree")]
    ParityViolation,
}

/// `d[v]` has the parity of `deg(v)` at every vertex.
pub fn is_parity_compliant(map: &CombinatorialMap, d: &Chain0) -> bool {
    (0..map.vertex_count()).all(|v| (d.get(v) - map.degree(v) as i64).rem_euclid(2) == 0)
}

struct Network {
    head: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Adds an arc and its residual twin; returns the arc index.
    fn add(&mut self, u: usize, v: usize, c: i64) -> usize {
        let i = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.adj[u].push(i);
        self.head.push(u);
        self.cap.push(0);
        self.adj[v].push(i + 1);
        i
    }

    /// Edmonds–Karp; arcs are scanned in insertion order.
    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut via: Vec<Option<usize>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &i in &self.adj[u] {
                    let v = self.head[i];
                    if self.cap[i] > 0 && !seen[v] {
                        seen[v] = true;
                        via[v] = Some(i);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while let Some(i) = via[v] {
                push = push.min(self.cap[i]);
                v = self.head[i ^ 1];
            }
            let mut v = t;
            while let Some(i) = via[v] {
                self.cap[i] -= push;
                self.cap[i ^ 1] += push;
                v = self.head[i ^ 1];
            }
            total += push;
        }
    }

    fn flow_on(&self, i: usize) -> i64 {
        self.cap[i ^ 1]
    }
}

/// A flow `f` with `∂₁f = d`, or `None` if none exists.
pub fn flow_with_boundary(map: &CombinatorialMap, d: &Chain0) -> Result<Option<Chain1>, FlowError> {
    if d.coeffs().iter().sum::<i64>() != 0 {
        return Err(FlowError::NotAZeroBoundary);
    }
    let nv = map.vertex_count();
    let (s, t) = (nv, nv + 1);
    let mut net = Network::new(nv + 2);
    let mut arcs: Vec<(HalfEdge, usize, usize)> = Vec::new();
    for &h in map.canonical_half_edges() {
        if map.is_loop(h) {
            continue;
        }
        let fwd = net.add(map.src(h), map.tgt(h), 1);
        let back = net.add(map.tgt(h), map.src(h), 1);
        arcs.push((h, fwd, back));
    }
    let mut need = 0;
    for v in 0..nv {
        let dv = d.get(v);
        if dv < 0 {
            net.add(s, v, -dv);
        } else if dv > 0 {
            net.add(v, t, dv);
            need += dv;
        }
    }
    if net.max_flow(s, t) != need {
        return Ok(None);
    }
    let mut f = Chain1::zero(map);
    for (h, fwd, back) in arcs {
        f.set(h, net.flow_on(fwd) - net.flow_on(back));
    }
    Ok(Some(f))
}

/// Orients the zero-coefficient edges of `f1` along closed trails, giving a
/// nowhere-zero flow with the same boundary.
pub fn nowhere_zero_completion(map: &CombinatorialMap, f1: &Chain1) -> Result<Chain1, FlowError> {
    let zero: Vec<bool> = map
        .canonical_half_edges()
        .iter()
        .map(|&h| f1.get(h) == 0)
        .collect();
    let nv = map.vertex_count();
    let mut deg = vec![0usize; nv];
    for (e, &h) in map.canonical_half_edges().iter().enumerate() {
        if zero[e] {
            deg[map.tgt(h)] += 1;
            deg[map.src(h)] += 1;
        }
    }
    if deg.iter().any(|d| d % 2 == 1) {
        return Err(FlowError::ParityViolation);
    }
    // outgoing zero half-edges per vertex, smallest id first
    let mut out: Vec<Vec<HalfEdge>> = (0..nv)
        .map(|v| {
            let mut hs: Vec<HalfEdge> = map
                .rotation(v)
                .iter()
                .map(|&h| map.opp(h))
                .filter(|&h| zero[map.edge_of(h)])
                .collect();
            hs.sort_unstable();
            hs
        })
        .collect();
    let mut used = vec![false; map.edge_count()];
    let mut f = f1.clone();
    for start in 0..nv {
        loop {
            // drop used half-edges lazily
            while out[start].last().is_some_and(|&h| used[map.edge_of(h)]) {
                out[start].pop();
            }
            if out[start].is_empty() {
                break;
            }
            let mut u = start;
            loop {
                let next = out[u].iter().position(|&h| !used[map.edge_of(h)]);
                let Some(i) = next else { break };
                let h = out[u][i];
                used[map.edge_of(h)] = true;
                f.set(h, 1);
                u = map.tgt(h);
            }
            debug_assert_eq!(u, start);
        }
    }
    Ok(f)
}

/// A nowhere-zero flow with boundary `d`, if one exists.
pub fn nowhere_zero_flow_with_boundary(
    map: &CombinatorialMap,
    d: &Chain0,
) -> Result<Option<Chain1>, FlowError> {
    if d.coeffs().iter().sum::<i64>() != 0 {
        return Err(FlowError::NotAZeroBoundary);
    }
    if !is_parity_compliant(map, d) {
        return Ok(None);
    }
    match flow_with_boundary(map, d)? {
        None => Ok(None),
        Some(f1) => nowhere_zero_completion(map, &f1).map(Some),
    }
}

/// A 0-boundary whose entries are multiples of `modulus`, of the parity of
/// the degree, and bounded by the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantBoundary {
    pub d: Chain0,
    pub modulus: u32,
}

/// Lexicographic stream of all relevant boundaries.
pub struct RelevantBoundaries<'a> {
    map: &'a CombinatorialMap,
    modulus: u32,
    choices: Vec<Vec<i64>>,
    /// `[min, max]` of the sum over vertices `v..`.
    rest: Vec<(i64, i64)>,
    stack: Vec<usize>,
    sum: i64,
    started: bool,
}

impl<'a> RelevantBoundaries<'a> {
    fn feasible(&self, depth: usize, sum: i64) -> bool {
        let (lo, hi) = self.rest[depth];
        sum + lo <= 0 && 0 <= sum + hi
    }

    /// Descends from the current stack taking the first feasible choice at
    /// each level; returns false if stuck.
    fn descend(&mut self) -> bool {
        while self.stack.len() < self.choices.len() {
            let depth = self.stack.len();
            let first = (0..self.choices[depth].len())
                .find(|&i| self.feasible(depth + 1, self.sum + self.choices[depth][i]));
            match first {
                Some(i) => {
                    self.sum += self.choices[depth][i];
                    self.stack.push(i);
                }
                None => return false,
            }
        }
        true
    }

    /// Moves to the next sibling at the deepest possible level.
    fn advance(&mut self) -> bool {
        while let Some(i) = self.stack.pop() {
            let depth = self.stack.len();
            self.sum -= self.choices[depth][i];
            let next = (i + 1..self.choices[depth].len())
                .find(|&j| self.feasible(depth + 1, self.sum + self.choices[depth][j]));
            if let Some(j) = next {
                self.sum += self.choices[depth][j];
                self.stack.push(j);
                if self.descend() {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for RelevantBoundaries<'_> {
    type Item = RelevantBoundary;

    fn next(&mut self) -> Option<RelevantBoundary> {
        let ok = if !self.started {
            self.started = true;
            self.choices.iter().all(|c| !c.is_empty()) && self.feasible(0, 0) && self.descend()
                || self.advance()
        } else {
            self.advance()
        };
        if !ok {
            self.stack.clear();
            return None;
        }
        let coeffs = self
            .stack
            .iter()
            .enumerate()
            .map(|(v, &i)| self.choices[v][i])
            .collect();
        let d = Chain0::from_coeffs(self.map, coeffs).expect("one entry per vertex");
        Some(RelevantBoundary {
            d,
            modulus: self.modulus,
        })
    }
}

pub fn relevant_boundaries(map: &CombinatorialMap, modulus: u32) -> RelevantBoundaries<'_> {
    let choices: Vec<Vec<i64>> = (0..map.vertex_count())
        .map(|v| admissible_values(map.degree(v), modulus))
        .collect();
    let mut rest = vec![(0, 0); choices.len() + 1];
    for v in (0..choices.len()).rev() {
        let lo = choices[v].first().copied().unwrap_or(0);
        let hi = choices[v].last().copied().unwrap_or(0);
        rest[v] = (rest[v + 1].0 + lo, rest[v + 1].1 + hi);
    }
    RelevantBoundaries {
        map,
        modulus,
        choices,
        rest,
        stack: Vec::new(),
        sum: 0,
        started: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::boundary1;
    use crate::generators::{bouquet, gen_grid};

    #[test]
    fn parity() {
        let m = bouquet();
        assert!(is_parity_compliant(&m, &Chain0::zero(&m)));
        let edge = CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap();
        assert!(!is_parity_compliant(&edge, &Chain0::zero(&edge)));
        let d = Chain0::from_coeffs(&edge, vec![1, 1]).unwrap();
        assert!(is_parity_compliant(&edge, &d));
    }

    #[test]
    fn zero_boundary_gives_zero_flow() {
        let m = bouquet();
        let f = flow_with_boundary(&m, &Chain0::zero(&m)).unwrap().unwrap();
        assert!(f.is_zero());
        let g = nowhere_zero_completion(&m, &f).unwrap();
        assert!(g.is_nowhere_zero());
        assert_eq!(g, Chain1::from_half_edges(&m, [0, 2]));
    }

    #[test]
    fn routes_two_units_on_grid_dual() {
        let h = gen_grid(3, 3).unwrap();
        let g = h.dual();
        let e = g.canonical_half_edges()[0];
        let (u, w) = (g.tgt(e), g.src(e));
        let mut d = Chain0::zero(&g);
        d.set(u, 2);
        d.set(w, -2);
        let f = flow_with_boundary(&g, &d).unwrap().unwrap();
        assert!(f.is_flow());
        assert_eq!(boundary1(&g, &f).unwrap(), d);
        let nz = nowhere_zero_flow_with_boundary(&g, &d).unwrap().unwrap();
        assert!(nz.is_nowhere_zero());
        assert_eq!(boundary1(&g, &nz).unwrap(), d);
    }

    #[test]
    fn errors() {
        let m = CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap();
        let d = Chain0::from_coeffs(&m, vec![1, 0]).unwrap();
        assert_eq!(flow_with_boundary(&m, &d), Err(FlowError::NotAZeroBoundary));
        assert_eq!(
            nowhere_zero_completion(&m, &Chain1::zero(&m)),
            Err(FlowError::ParityViolation)
        );
        assert_eq!(
            nowhere_zero_flow_with_boundary(&m, &Chain0::zero(&m)),
            Ok(None)
        );
    }

    #[test]
    fn boundaries_of_four_regular() {
        let g = gen_grid(3, 3).unwrap().dual();
        let all: Vec<_> = relevant_boundaries(&g, 3).collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].d.is_zero());
    }

    #[test]
    fn boundaries_with_two_degree_six_vertices() {
        // two vertices joined by three parallel edges, each of degree 3 at m = 3
        let m = CombinatorialMap::from_rotations(vec![vec![0, 2, 4], vec![1, 5, 3]]).unwrap();
        let ds: Vec<Vec<i64>> = relevant_boundaries(&m, 3)
            .map(|b| b.d.coeffs().to_vec())
            .collect();
        assert_eq!(ds, vec![vec![-3, 3], vec![3, -3]]);
        // six parallel edges: degree 6 at each end
        let rot0: Vec<usize> = (0..6).map(|i| 2 * i).collect();
        let rot1: Vec<usize> = (0..6).rev().map(|i| 2 * i + 1).collect();
        let m = CombinatorialMap::from_rotations(vec![rot0, rot1]).unwrap();
        let ds: Vec<Vec<i64>> = relevant_boundaries(&m, 3)
            .map(|b| b.d.coeffs().to_vec())
            .collect();
        assert_eq!(ds, vec![vec![-6, 6], vec![0, 0], vec![6, -6]]);
    }
}
