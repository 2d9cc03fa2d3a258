//! Combinatorial maps: 2-cell embeddings of connected graphs in orientable
//! surfaces, stored as half-edges with an opposition involution and
//! counterclockwise vertex rotations.
//!
//! Every half-edge `h` is directed into `tgt(h)` and listed exactly once, in
//! the rotation of `tgt(h)`. Faces are derived: following `h` into its target
//! and turning to the clockwise neighbour gives the next half-edge on the
//! boundary of the face to the left of `h`, so
//!
//! ```text
//! next(h) = opp(rot_pred_{tgt(h)}(h))
//! ```
//!
//! and `left(h)` is the orbit of `next` containing `h`.
//!
//! The canonical half-edge of an edge is the member of its opposition pair
//! with the smaller id (the even one under the `opp(2i) = 2i + 1` pairing used
//! by the text format). Edge `e` is numbered by the rank of its canonical
//! half-edge.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

pub type HalfEdge = usize;
pub type Vertex = usize;
pub type Face = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has no half-edges")]
    Empty,
    #[error("half-edge count {0} is odd")]
    OddHalfEdgeCount(usize),
    #[error("opposition is not a fixed-point-free involution at half-edge {0}")]
    NotInvolution(HalfEdge),
    #[error("half-edge {0} is missing from the rotations, repeated, or out of range")]
    DanglingHalfEdge(HalfEdge),
    #[error("the underlying graph is disconnected")]
    Disconnected,
    #[error("computed Euler genus {0} is odd; only orientable surfaces are supported")]
    OddEulerGenus(i64),
    #[error("face relabelling is not a permutation")]
    BadFaceLabels,
}

static NEXT_MAP_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_MAP_ID.fetch_add(1, Ordering::Relaxed)
}

/// An immutable, validated 2-cell embedding.
#[derive(Debug, Clone)]
pub struct CombinatorialMap {
    id: u64,
    opp: Arc<[HalfEdge]>,
    tgt: Vec<Vertex>,
    rot: Vec<Vec<HalfEdge>>,
    rot_pos: Vec<usize>,
    left: Vec<Face>,
    faces: Vec<Vec<HalfEdge>>,
    edge_of: Vec<usize>,
    edge_half: Vec<HalfEdge>,
    euler_genus: usize,
}

impl CombinatorialMap {
    /// Builds a map from per-vertex counterclockwise rotations of incoming
    /// half-edges and an explicit opposition table.
    pub fn build(rotations: Vec<Vec<HalfEdge>>, opp: Vec<HalfEdge>) -> Result<Self, MapError> {
        let n = opp.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if n % 2 == 1 {
            return Err(MapError::OddHalfEdgeCount(n));
        }
        for (h, &o) in opp.iter().enumerate() {
            if o >= n || o == h || opp[o] != h {
                return Err(MapError::NotInvolution(h));
            }
        }

        let mut tgt = vec![usize::MAX; n];
        let mut rot_pos = vec![0; n];
        for (v, r) in rotations.iter().enumerate() {
            for (i, &h) in r.iter().enumerate() {
                if h >= n || tgt[h] != usize::MAX {
                    return Err(MapError::DanglingHalfEdge(h.min(n)));
                }
                tgt[h] = v;
                rot_pos[h] = i;
            }
        }
        if let Some(h) = tgt.iter().position(|&v| v == usize::MAX) {
            return Err(MapError::DanglingHalfEdge(h));
        }

        // Connectivity over vertices, isolated vertices included.
        let nv = rotations.len();
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &rotations[v] {
                let u = tgt[opp[h]];
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(MapError::Disconnected);
        }

        let mut left = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if left[start] != usize::MAX {
                continue;
            }
            let fid = faces.len();
            let mut walk = Vec::new();
            let mut h = start;
            loop {
                left[h] = fid;
                walk.push(h);
                let r = &rotations[tgt[h]];
                let pred = r[(rot_pos[h] + r.len() - 1) % r.len()];
                h = opp[pred];
                if h == start {
                    break;
                }
            }
            faces.push(walk);
        }

        let mut edge_of = vec![0; n];
        let mut edge_half = Vec::with_capacity(n / 2);
        for h in 0..n {
            if h < opp[h] {
                edge_of[h] = edge_half.len();
                edge_of[opp[h]] = edge_half.len();
                edge_half.push(h);
            }
        }

        let chi = nv as i64 - (n / 2) as i64 + faces.len() as i64;
        let genus = 2 - chi;
        if genus % 2 != 0 || genus < 0 {
            return Err(MapError::OddEulerGenus(genus));
        }

        Ok(Self {
            id: fresh_id(),
            opp: opp.into(),
            tgt,
            rot: rotations,
            rot_pos,
            left,
            faces,
            edge_of,
            edge_half,
            euler_genus: genus as usize,
        })
    }

    /// Builds a map with the standard pairing `opp(2i) = 2i + 1`.
    pub fn from_rotations(rotations: Vec<Vec<HalfEdge>>) -> Result<Self, MapError> {
        let n: usize = rotations.iter().map(Vec::len).sum();
        let opp = (0..n).map(|h| h ^ 1).collect();
        Self::build(rotations, opp)
    }

    /// Renumbers faces so that the face currently numbered `i` becomes
    /// `labels[i]`. Boundary walks keep their starting half-edge.
    pub(crate) fn relabel_faces(mut self, labels: &[Face]) -> Result<Self, MapError> {
        let nf = self.faces.len();
        if labels.len() != nf {
            return Err(MapError::BadFaceLabels);
        }
        let mut faces = vec![Vec::new(); nf];
        let mut used = vec![false; nf];
        for (old, walk) in self.faces.into_iter().enumerate() {
            let new = labels[old];
            if new >= nf || used[new] {
                return Err(MapError::BadFaceLabels);
            }
            used[new] = true;
            faces[new] = walk;
        }
        for l in self.left.iter_mut() {
            *l = labels[*l];
        }
        self.faces = faces;
        self.id = fresh_id();
        Ok(self)
    }

    /// Identity of this map; chains remember the map they were created on.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub(crate) fn opp_table(&self) -> &Arc<[HalfEdge]> {
        &self.opp
    }

    pub fn half_edge_count(&self) -> usize {
        self.opp.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_half.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// `|V| + |F| + |E|`.
    pub fn size(&self) -> usize {
        self.vertex_count() + self.face_count() + self.edge_count()
    }

    pub fn euler_genus(&self) -> usize {
        self.euler_genus
    }

    #[inline]
    pub fn opp(&self, h: HalfEdge) -> HalfEdge {
        self.opp[h]
    }

    #[inline]
    pub fn tgt(&self, h: HalfEdge) -> Vertex {
        self.tgt[h]
    }

    /// Tail of `h`, i.e. `tgt(opp(h))`.
    #[inline]
    pub fn src(&self, h: HalfEdge) -> Vertex {
        self.tgt[self.opp[h]]
    }

    #[inline]
    pub fn left(&self, h: HalfEdge) -> Face {
        self.left[h]
    }

    /// Successor of `h` on the boundary walk of `left(h)`.
    pub fn next(&self, h: HalfEdge) -> HalfEdge {
        let r = &self.rot[self.tgt[h]];
        self.opp[r[(self.rot_pos[h] + r.len() - 1) % r.len()]]
    }

    /// Counterclockwise rotation of half-edges entering `v`.
    pub fn rotation(&self, v: Vertex) -> &[HalfEdge] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rot
    }

    /// Boundary walk of face `x`, starting at its smallest half-edge.
    pub fn face_boundary(&self, x: Face) -> &[HalfEdge] {
        &self.faces[x]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rot[v].len()
    }

    pub fn face_len(&self, x: Face) -> usize {
        self.faces[x].len()
    }

    #[inline]
    pub fn is_canonical(&self, h: HalfEdge) -> bool {
        h < self.opp[h]
    }

    /// Edge index of the edge containing `h`.
    #[inline]
    pub fn edge_of(&self, h: HalfEdge) -> usize {
        self.edge_of[h]
    }

    /// Canonical half-edge of edge `e`.
    #[inline]
    pub fn edge_half(&self, e: usize) -> HalfEdge {
        self.edge_half[e]
    }

    /// Canonical half-edges in ascending id order.
    pub fn canonical_half_edges(&self) -> &[HalfEdge] {
        &self.edge_half
    }

    pub fn is_loop(&self, h: HalfEdge) -> bool {
        self.tgt(h) == self.src(h)
    }

    /// True when both sides of `h` are the same face.
    pub fn is_dual_loop(&self, h: HalfEdge) -> bool {
        self.left(h) == self.left(self.opp(h))
    }

    pub fn has_loops(&self) -> bool {
        self.edge_half.iter().any(|&h| self.is_loop(h))
    }

    /// The dual map: vertex `x` of the result is face `x` of `self`, face `v`
    /// of the result is vertex `v` of `self`, and half-edge ids are shared.
    ///
    /// The dual half-edge `h` is directed into `left(h)`, and the result's
    /// face to the left of `h` is `src(h)`. Dualizing twice yields `self`
    /// relabelled by `h -> opp(h)`.
    pub fn dual(&self) -> CombinatorialMap {
        let rotations: Vec<Vec<HalfEdge>> = self.faces.clone();
        let d = Self::build(rotations, self.opp.to_vec()).expect("dual of a valid map is valid");
        let labels: Vec<Face> = (0..d.face_count())
            .map(|f| self.src(d.faces[f][0]))
            .collect();
        d.relabel_faces(&labels)
            .expect("dual faces correspond to primal vertices")
    }

    /// Checks that `other` equals `self` after renaming half-edges by `perm`
    /// (vertex and face ids are taken from the renamed half-edges).
    pub fn is_isomorphic_via(&self, other: &CombinatorialMap, perm: &[HalfEdge]) -> bool {
        if perm.len() != self.half_edge_count()
            || other.half_edge_count() != self.half_edge_count()
            || other.vertex_count() != self.vertex_count()
            || other.face_count() != self.face_count()
        {
            return false;
        }
        let n = perm.len();
        let mut vmap = vec![usize::MAX; self.vertex_count()];
        for h in 0..n {
            let p = perm[h];
            if other.opp(p) != perm[self.opp(h)] || other.next(p) != perm[self.next(h)] {
                return false;
            }
            let v = self.tgt(h);
            if vmap[v] == usize::MAX {
                vmap[v] = other.tgt(p);
            } else if vmap[v] != other.tgt(p) {
                return false;
            }
        }
        // rotation successor must be preserved as well
        (0..n).all(|h| {
            let r = &self.rot[self.tgt[h]];
            let succ = r[(self.rot_pos[h] + 1) % r.len()];
            let ro = &other.rot[other.tgt[perm[h]]];
            ro[(other.rot_pos[perm[h]] + 1) % ro.len()] == perm[succ]
        })
    }
}

/// Per-face odd-cycle quantities `q_C`, `b_C` and their aggregates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceProfile {
    pub modulus: u32,
    pub face_lengths: Vec<usize>,
    pub q: Vec<u64>,
    /// `None` when no admissible value exists (then `q` is 0).
    pub b: Vec<Option<i64>>,
    /// Product of the per-face `q`; saturates at `u128::MAX`.
    pub q_star: u128,
    pub b_star: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModulusError {
    #[error("modulus {0} is even")]
    EvenModulus(u32),
    #[error("modulus {0} is below 3")]
    ModulusTooSmall(u32),
}

pub fn check_modulus(m: u32) -> Result<(), ModulusError> {
    if m < 3 {
        Err(ModulusError::ModulusTooSmall(m))
    } else if m.is_multiple_of(2) {
        Err(ModulusError::EvenModulus(m))
    } else {
        Ok(())
    }
}

/// Integers `i` with `m | i`, `i ≡ n (mod 2)` and `|i| <= n`, ascending.
pub fn admissible_values(n: usize, m: u32) -> Vec<i64> {
    let n = n as i64;
    let m = m as i64;
    let k = n / m;
    (-k..=k)
        .map(|j| j * m)
        .filter(|i| (i - n).rem_euclid(2) == 0)
        .collect()
}

pub fn q_c(n: usize, m: u32) -> u64 {
    admissible_values(n, m).len() as u64
}

pub fn b_c(n: usize, m: u32) -> Option<i64> {
    admissible_values(n, m).last().copied()
}

impl FaceProfile {
    pub fn of(map: &CombinatorialMap, m: u32) -> Result<Self, ModulusError> {
        check_modulus(m)?;
        let face_lengths: Vec<usize> = (0..map.face_count()).map(|x| map.face_len(x)).collect();
        let q: Vec<u64> = face_lengths.iter().map(|&n| q_c(n, m)).collect();
        let b: Vec<Option<i64>> = face_lengths.iter().map(|&n| b_c(n, m)).collect();
        let q_star = q
            .iter()
            .fold(1u128, |acc, &x| acc.saturating_mul(x as u128));
        let b_star = 1 + b.iter().map(|x| x.unwrap_or(0)).sum::<i64>();
        Ok(Self {
            modulus: m,
            face_lengths,
            q,
            b,
            q_star,
            b_star,
        })
    }

    /// Face-length histogram as `(count, length)` pairs sorted by length.
    pub fn length_histogram(&self) -> Vec<(usize, usize)> {
        let mut lens = self.face_lengths.clone();
        lens.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for l in lens {
            match out.last_mut() {
                Some((c, len)) if *len == l => *c += 1,
                _ => out.push((1, l)),
            }
        }
        out
    }
}

pub fn face_profile(map: &CombinatorialMap, m: u32) -> Result<FaceProfile, ModulusError> {
    FaceProfile::of(map, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bouquet() -> CombinatorialMap {
        // a = 0, ā = 1, b = 2, b̄ = 3; rotation (a, b, ā, b̄)
        CombinatorialMap::from_rotations(vec![vec![0, 2, 1, 3]]).unwrap()
    }

    #[test]
    fn bouquet_is_a_torus() {
        let m = bouquet();
        assert_eq!(m.vertex_count(), 1);
        assert_eq!(m.edge_count(), 2);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.face_len(0), 4);
        assert_eq!(m.euler_genus(), 2);
        // orbit is (a, b, ā, b̄) under next, the reverse traversal of (a, b̄, ā, b)
        assert_eq!(m.face_boundary(0), &[0, 2, 1, 3]);
    }

    #[test]
    fn single_edge_is_a_sphere() {
        let m = CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            (m.vertex_count(), m.edge_count(), m.face_count()),
            (2, 1, 1)
        );
        assert_eq!(m.face_len(0), 2);
        assert_eq!(m.euler_genus(), 0);
    }

    #[test]
    fn rejects_fixed_point() {
        let err = CombinatorialMap::build(vec![vec![0, 1]], vec![0, 1]).unwrap_err();
        assert_eq!(err, MapError::NotInvolution(0));
    }

    #[test]
    fn rejects_disconnected_and_dangling() {
        let err = CombinatorialMap::from_rotations(vec![vec![0, 1], vec![2, 3]]).unwrap_err();
        assert_eq!(err, MapError::Disconnected);
        let err = CombinatorialMap::build(vec![vec![0]], vec![1, 0]).unwrap_err();
        assert_eq!(err, MapError::DanglingHalfEdge(1));
        let err = CombinatorialMap::build(vec![vec![0, 0, 1]], vec![1, 0]).unwrap_err();
        assert_eq!(err, MapError::DanglingHalfEdge(0));
    }

    #[test]
    fn dual_of_bouquet() {
        let d = bouquet().dual();
        assert_eq!(
            (d.vertex_count(), d.edge_count(), d.face_count()),
            (1, 2, 1)
        );
        assert_eq!(d.euler_genus(), 2);
    }

    #[test]
    fn dual_twice_is_opp_relabelling() {
        let m = bouquet();
        let dd = m.dual().dual();
        let perm: Vec<usize> = (0..m.half_edge_count()).map(|h| m.opp(h)).collect();
        assert!(m.is_isomorphic_via(&dd, &perm));
    }

    #[test]
    fn face_profile_examples() {
        assert_eq!(q_c(4, 3), 1);
        assert_eq!(b_c(4, 3), Some(0));
        assert_eq!(admissible_values(6, 3), vec![-6, 0, 6]);
        assert_eq!(b_c(6, 3), Some(6));
        assert_eq!(admissible_values(6, 5), vec![0]);
        assert_eq!(admissible_values(3, 3), vec![-3, 3]);
        assert_eq!(q_c(1, 3), 0);
        assert_eq!(b_c(1, 3), None);
    }

    #[test]
    fn modulus_checks() {
        let m = bouquet();
        assert_eq!(
            face_profile(&m, 4).unwrap_err(),
            ModulusError::EvenModulus(4)
        );
        assert_eq!(
            face_profile(&m, 1).unwrap_err(),
            ModulusError::ModulusTooSmall(1)
        );
        let p = face_profile(&m, 3).unwrap();
        assert_eq!((p.q_star, p.b_star), (1, 1));
    }
}
