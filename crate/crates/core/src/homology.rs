//! Tree–cotree bases of homology and cohomology, homology classes of
//! cocycles, and copaths between faces.

use std::collections::VecDeque;

use thiserror::Error;

use crate::chains::{self, Chain1};
use crate::map::{CombinatorialMap, Face, HalfEdge, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("chain is not a cocycle")]
    NotACocycle,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error(transparent)]
    Chain(#[from] chains::ChainError),
}

/// Dual bases `{f_e}` of homology and `{K_e}` of cohomology with
/// `pair(f_e, K_e') = [e = e']`.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    map_id: u64,
    /// Edge indices of the leftover edges `Y`.
    pub edges: Vec<usize>,
    /// Chosen (canonical) half-edge `h_e` per element of `Y`.
    pub half_edges: Vec<HalfEdge>,
    pub cycles: Vec<Chain1>,
    pub cocycles: Vec<Chain1>,
}

impl CohomologyBasis {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn map_id(&self) -> u64 {
        self.map_id
    }

    /// `pair(f_e, K_e')` for all pairs.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        self.cycles
            .iter()
            .map(|f| {
                self.cocycles
                    .iter()
                    .map(|k| chains::pair_raw(f, k))
                    .collect()
            })
            .collect()
    }

    /// `Σ z_e K_e`.
    pub fn combine_cocycles(&self, map: &CombinatorialMap, z: &[i64]) -> Chain1 {
        let mut out = Chain1::zero(map);
        for (k, &c) in self.cocycles.iter().zip(z) {
            if c != 0 {
                out += &(c * k);
            }
        }
        out
    }

    /// `Σ a_e f_e`.
    pub fn combine_cycles(&self, map: &CombinatorialMap, a: &[i64]) -> Chain1 {
        let mut out = Chain1::zero(map);
        for (f, &c) in self.cycles.iter().zip(a) {
            if c != 0 {
                out += &(c * f);
            }
        }
        out
    }
}

/// BFS spanning tree; `parent[v]` is the half-edge from the parent into `v`.
struct VertexTree {
    parent: Vec<Option<HalfEdge>>,
    in_tree: Vec<bool>,
}

fn vertex_tree(map: &CombinatorialMap) -> VertexTree {
    let nv = map.vertex_count();
    let mut parent = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut in_tree = vec![false; map.edge_count()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        let mut hs: Vec<HalfEdge> = map.rotation(v).to_vec();
        hs.sort_unstable();
        for h in hs {
            let u = map.src(h);
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(map.opp(h));
                in_tree[map.edge_of(h)] = true;
                queue.push_back(u);
            }
        }
    }
    VertexTree { parent, in_tree }
}

/// Chain of the tree path from the root to `v`.
fn root_path(map: &CombinatorialMap, parent: &[Option<HalfEdge>], v: Vertex) -> Chain1 {
    let mut c = Chain1::zero(map);
    let mut cur = v;
    while let Some(h) = parent[cur] {
        c.add_at(h, 1);
        cur = map.src(h);
    }
    c
}

/// BFS spanning tree of the dual restricted to edges allowed by `usable`;
/// `parent[y]` is the half-edge `h` with `left(h) = y` crossed to reach `y`.
fn face_tree(
    map: &CombinatorialMap,
    root: Face,
    usable: impl Fn(usize) -> bool,
) -> Vec<Option<HalfEdge>> {
    let nf = map.face_count();
    let mut parent = vec![None; nf];
    let mut seen = vec![false; nf];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(y) = queue.pop_front() {
        let mut hs: Vec<HalfEdge> = map.face_boundary(y).to_vec();
        hs.sort_unstable();
        for h in hs {
            if !usable(map.edge_of(h)) {
                continue;
            }
            let o = map.opp(h);
            let z = map.left(o);
            if !seen[z] {
                seen[z] = true;
                parent[z] = Some(o);
                queue.push_back(z);
            }
        }
    }
    parent
}

fn face_root_path(map: &CombinatorialMap, parent: &[Option<HalfEdge>], y: Face) -> Chain1 {
    let mut c = Chain1::zero(map);
    let mut cur = y;
    while let Some(h) = parent[cur] {
        c.add_at(h, 1);
        cur = map.left(map.opp(h));
    }
    c
}

/// Tree–cotree construction of dual homology/cohomology bases.
pub fn cohomology_basis(map: &CombinatorialMap) -> CohomologyBasis {
    let tree = vertex_tree(map);
    let cotree_parent = face_tree(map, 0, |e| !tree.in_tree[e]);
    let mut in_cotree = vec![false; map.edge_count()];
    for h in cotree_parent.iter().flatten() {
        in_cotree[map.edge_of(*h)] = true;
    }
    let mut basis = CohomologyBasis {
        map_id: map.id(),
        edges: Vec::new(),
        half_edges: Vec::new(),
        cycles: Vec::new(),
        cocycles: Vec::new(),
    };
    for (e, &co) in in_cotree.iter().enumerate() {
        if tree.in_tree[e] || co {
            continue;
        }
        let h = map.edge_half(e);
        // f_e = h + path(tgt(h) -> src(h)) in T
        let mut f = Chain1::half_edge(map, h);
        f += &root_path(map, &tree.parent, map.src(h));
        f -= &root_path(map, &tree.parent, map.tgt(h));
        // K_e = h + copath(left(h) -> left(opp h)) in the cotree
        let mut k = Chain1::half_edge(map, h);
        k += &face_root_path(map, &cotree_parent, map.left(map.opp(h)));
        k -= &face_root_path(map, &cotree_parent, map.left(h));
        basis.edges.push(e);
        basis.half_edges.push(h);
        basis.cycles.push(f);
        basis.cocycles.push(k);
    }
    debug_assert_eq!(basis.len(), map.euler_genus());
    basis
}

/// `z_e = pair(f_e, K)`, the coordinates of a cocycle's cohomology class.
pub fn homology_class(
    map: &CombinatorialMap,
    k: &Chain1,
    basis: &CohomologyBasis,
) -> Result<Vec<i64>, HomologyError> {
    if !chains::is_cocycle(map, k)? {
        return Err(HomologyError::NotACocycle);
    }
    Ok(class_unchecked(k, basis))
}

pub(crate) fn class_unchecked(k: &Chain1, basis: &CohomologyBasis) -> Vec<i64> {
    basis
        .cycles
        .iter()
        .map(|f| chains::pair_raw(f, k))
        .collect()
}

/// `pair(c, K_e)` for each basis cocycle; for a cycle `c` these are the
/// values of the homomorphism it induces on cohomology.
pub fn cycle_pairings(c: &Chain1, basis: &CohomologyBasis) -> Vec<i64> {
    basis
        .cocycles
        .iter()
        .map(|k| chains::pair_raw(c, k))
        .collect()
}

/// A cycle is a 1-boundary iff it pairs to zero with every basis cocycle.
pub fn is_1boundary(
    map: &CombinatorialMap,
    f: &Chain1,
    basis: &CohomologyBasis,
) -> Result<bool, HomologyError> {
    if !chains::is_cycle(map, f)? {
        return Err(HomologyError::NotACycle);
    }
    Ok(basis.cocycles.iter().all(|k| chains::pair_raw(f, k) == 0))
}

/// A 1-chain whose coboundary is `to - from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copath {
    pub from: Face,
    pub to: Face,
    pub chain: Chain1,
}

/// Copaths from `x` to each target along one BFS tree of the dual.
pub fn copaths_from(map: &CombinatorialMap, x: Face, targets: &[Face]) -> Vec<Copath> {
    let parent = face_tree(map, x, |_| true);
    targets
        .iter()
        .map(|&y| Copath {
            from: x,
            to: y,
            chain: face_root_path(map, &parent, y),
        })
        .collect()
}

/// Copaths from `x` to every face, indexed by face id.
pub fn copaths_to_all(map: &CombinatorialMap, x: Face) -> Vec<Chain1> {
    let parent = face_tree(map, x, |_| true);
    (0..map.face_count())
        .map(|y| face_root_path(map, &parent, y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{coboundary1, face_boundary_chain, vertex_coboundary_chain, Chain2};

    fn bouquet() -> CombinatorialMap {
        CombinatorialMap::from_rotations(vec![vec![0, 2, 1, 3]]).unwrap()
    }

    #[test]
    fn bouquet_basis() {
        let m = bouquet();
        let b = cohomology_basis(&m);
        assert_eq!(b.edges, vec![0, 1]);
        let a = Chain1::half_edge(&m, 0);
        let bb = Chain1::half_edge(&m, 2);
        assert_eq!(b.cycles, vec![a.clone(), bb.clone()]);
        assert_eq!(b.cocycles, vec![a.clone(), bb.clone()]);
        assert_eq!(b.pairing_matrix(), vec![vec![1, 0], vec![0, 1]]);
        let k = &(2 * &a) - &bb;
        assert_eq!(homology_class(&m, &k, &b).unwrap(), vec![2, -1]);
        assert!(!is_1boundary(&m, &a, &b).unwrap());
    }

    #[test]
    fn sphere_has_empty_basis() {
        let m = CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap();
        let b = cohomology_basis(&m);
        assert!(b.is_empty());
        // two vertices joined by three parallel edges: every cycle bounds
        let m = CombinatorialMap::from_rotations(vec![vec![0, 2, 4], vec![1, 5, 3]]).unwrap();
        assert_eq!(m.euler_genus(), 0);
        let b = cohomology_basis(&m);
        let cyc = Chain1::from_half_edges(&m, [0, 3]);
        assert!(is_1boundary(&m, &cyc, &b).unwrap());
    }

    #[test]
    fn coboundaries_have_zero_class() {
        let m = bouquet();
        let b = cohomology_basis(&m);
        let k = vertex_coboundary_chain(&m, 0);
        assert_eq!(homology_class(&m, &k, &b).unwrap(), vec![0, 0]);
        assert!(is_1boundary(&m, &face_boundary_chain(&m, 0), &b).unwrap());
    }

    #[test]
    fn not_a_cycle_rejected() {
        let m = CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap();
        let b = cohomology_basis(&m);
        let h = Chain1::half_edge(&m, 0);
        assert_eq!(is_1boundary(&m, &h, &b), Err(HomologyError::NotACycle));
        let digon = CombinatorialMap::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap();
        let b = cohomology_basis(&digon);
        let h = Chain1::half_edge(&digon, 0);
        assert_eq!(
            homology_class(&digon, &h, &b),
            Err(HomologyError::NotACocycle)
        );
    }

    #[test]
    fn copaths_on_digon() {
        let m = CombinatorialMap::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap();
        let ps = copaths_from(&m, 0, &[0, 1]);
        assert!(ps[0].chain.is_zero());
        let d = coboundary1(&m, &ps[1].chain).unwrap();
        let expect = &Chain2::unit(&m, 1) - &Chain2::unit(&m, 0);
        assert_eq!(d, expect);
        assert!(ps[1].chain.is_simple());
        assert_eq!(ps[1].chain.norm(), 1);
    }
}
