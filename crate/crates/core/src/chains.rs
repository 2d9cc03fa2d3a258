//! Integer chains on a map and the boundary, coboundary and pairing
//! operators between them.
//!
//! A [`Chain1`] keeps a coefficient for every half-edge and maintains
//! `K[opp(h)] = -K[h]`; iteration over "the" coefficients means iteration over
//! canonical half-edges in ascending id order.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use thiserror::Error;

use crate::map::{CombinatorialMap, Face, HalfEdge, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain belongs to a different map")]
    MapMismatch,
}

/// Integer combination of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain0 {
    map_id: u64,
    coeffs: Vec<i64>,
}

/// Integer combination of faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain2 {
    map_id: u64,
    coeffs: Vec<i64>,
}

/// Integer combination of canonical half-edges.
#[derive(Clone)]
pub struct Chain1 {
    map_id: u64,
    opp: Arc<[HalfEdge]>,
    coeffs: Vec<i64>,
}

macro_rules! point_chain {
    ($ty:ident, $count:ident) => {
        impl $ty {
            pub fn zero(map: &CombinatorialMap) -> Self {
                Self {
                    map_id: map.id(),
                    coeffs: vec![0; map.$count()],
                }
            }

            pub fn from_coeffs(
                map: &CombinatorialMap,
                coeffs: Vec<i64>,
            ) -> Result<Self, ChainError> {
                if coeffs.len() != map.$count() {
                    return Err(ChainError::MapMismatch);
                }
                Ok(Self {
                    map_id: map.id(),
                    coeffs,
                })
            }

            pub fn unit(map: &CombinatorialMap, i: usize) -> Self {
                let mut c = Self::zero(map);
                c.coeffs[i] = 1;
                c
            }

            pub fn map_id(&self) -> u64 {
                self.map_id
            }

            pub fn coeffs(&self) -> &[i64] {
                &self.coeffs
            }

            pub fn get(&self, i: usize) -> i64 {
                self.coeffs[i]
            }

            pub fn set(&mut self, i: usize, v: i64) {
                self.coeffs[i] = v;
            }

            pub fn norm(&self) -> i64 {
                self.coeffs.iter().map(|c| c.abs()).sum()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(|&c| c == 0)
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                assert_eq!(self.map_id, rhs.map_id, "chains on different maps");
                $ty {
                    map_id: self.map_id,
                    coeffs: self
                        .coeffs
                        .iter()
                        .zip(&rhs.coeffs)
                        .map(|(a, b)| a + b)
                        .collect(),
                }
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                assert_eq!(self.map_id, rhs.map_id, "chains on different maps");
                $ty {
                    map_id: self.map_id,
                    coeffs: self
                        .coeffs
                        .iter()
                        .zip(&rhs.coeffs)
                        .map(|(a, b)| a - b)
                        .collect(),
                }
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    map_id: self.map_id,
                    coeffs: self.coeffs.iter().map(|a| -a).collect(),
                }
            }
        }

        impl Mul<&$ty> for i64 {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                $ty {
                    map_id: rhs.map_id,
                    coeffs: rhs.coeffs.iter().map(|a| self * a).collect(),
                }
            }
        }
    };
}

point_chain!(Chain0, vertex_count);
point_chain!(Chain2, face_count);

impl Chain1 {
    pub fn zero(map: &CombinatorialMap) -> Self {
        Self {
            map_id: map.id(),
            opp: Arc::clone(map.opp_table()),
            coeffs: vec![0; map.half_edge_count()],
        }
    }

    /// The chain `h` (equivalently `-opp(h)`).
    pub fn half_edge(map: &CombinatorialMap, h: HalfEdge) -> Self {
        let mut c = Self::zero(map);
        c.add_at(h, 1);
        c
    }

    /// Chain with the given coefficients on canonical half-edges, listed in
    /// edge order.
    pub fn from_edge_coeffs(map: &CombinatorialMap, coeffs: &[i64]) -> Result<Self, ChainError> {
        if coeffs.len() != map.edge_count() {
            return Err(ChainError::MapMismatch);
        }
        let mut c = Self::zero(map);
        for (e, &v) in coeffs.iter().enumerate() {
            c.set(map.edge_half(e), v);
        }
        Ok(c)
    }

    /// Sum of the given half-edges, each counted once per occurrence.
    pub fn from_half_edges<I: IntoIterator<Item = HalfEdge>>(
        map: &CombinatorialMap,
        hs: I,
    ) -> Self {
        let mut c = Self::zero(map);
        for h in hs {
            c.add_at(h, 1);
        }
        c
    }

    pub fn map_id(&self) -> u64 {
        self.map_id
    }

    #[inline]
    pub fn get(&self, h: HalfEdge) -> i64 {
        self.coeffs[h]
    }

    /// Sets `K[h] = v` (and `K[opp(h)] = -v`).
    #[inline]
    pub fn set(&mut self, h: HalfEdge, v: i64) {
        self.coeffs[h] = v;
        self.coeffs[self.opp[h]] = -v;
    }

    /// Adds `v·h` to the chain.
    #[inline]
    pub fn add_at(&mut self, h: HalfEdge, v: i64) {
        self.coeffs[h] += v;
        self.coeffs[self.opp[h]] -= v;
    }

    /// `(h, K[h])` over canonical half-edges in ascending order.
    pub fn canonical_iter(&self) -> impl Iterator<Item = (HalfEdge, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(h, _)| h < self.opp[h])
            .map(|(h, &c)| (h, c))
    }

    /// Coefficients over every half-edge (both orientations).
    pub fn all_coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients over canonical half-edges, in edge order.
    pub fn edge_coeffs(&self) -> Vec<i64> {
        self.canonical_iter().map(|(_, c)| c).collect()
    }

    pub fn norm(&self) -> i64 {
        self.canonical_iter().map(|(_, c)| c.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Every coefficient in `{-1, 0, 1}`.
    pub fn is_simple(&self) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= 1)
    }

    pub fn is_flow(&self) -> bool {
        self.is_simple()
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c != 0)
    }

    /// Coefficient-wise `self ⪯ other`: `0 <= self[h] <= other[h]` wherever
    /// `other[h] >= 0`.
    pub fn dominated_by(&self, other: &Chain1) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&c, &f)| f < 0 || (0 <= c && c <= f))
    }

    fn same_map(&self, other: &Chain1) -> Result<(), ChainError> {
        if self.map_id == other.map_id {
            Ok(())
        } else {
            Err(ChainError::MapMismatch)
        }
    }
}

impl std::fmt::Debug for Chain1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<(HalfEdge, i64)> = self.canonical_iter().filter(|&(_, c)| c != 0).collect();
        f.debug_struct("Chain1").field("terms", &terms).finish()
    }
}

impl PartialEq for Chain1 {
    fn eq(&self, other: &Self) -> bool {
        self.map_id == other.map_id && self.coeffs == other.coeffs
    }
}

impl Eq for Chain1 {}

impl AddAssign<&Chain1> for Chain1 {
    fn add_assign(&mut self, rhs: &Chain1) {
        assert_eq!(self.map_id, rhs.map_id, "chains on different maps");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Chain1> for Chain1 {
    fn sub_assign(&mut self, rhs: &Chain1) {
        assert_eq!(self.map_id, rhs.map_id, "chains on different maps");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add for &Chain1 {
    type Output = Chain1;
    fn add(self, rhs: &Chain1) -> Chain1 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Chain1 {
    type Output = Chain1;
    fn sub(self, rhs: &Chain1) -> Chain1 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Chain1 {
    type Output = Chain1;
    fn neg(self) -> Chain1 {
        -1 * self
    }
}

impl Mul<&Chain1> for i64 {
    type Output = Chain1;
    fn mul(self, rhs: &Chain1) -> Chain1 {
        Chain1 {
            map_id: rhs.map_id,
            opp: Arc::clone(&rhs.opp),
            coeffs: rhs.coeffs.iter().map(|a| self * a).collect(),
        }
    }
}

fn check(map: &CombinatorialMap, id: u64) -> Result<(), ChainError> {
    if map.id() == id {
        Ok(())
    } else {
        Err(ChainError::MapMismatch)
    }
}

/// `∂₂`: each face maps to the sum of the half-edges having it on their left.
pub fn boundary2(map: &CombinatorialMap, a: &Chain2) -> Result<Chain1, ChainError> {
    check(map, a.map_id)?;
    let mut k = Chain1::zero(map);
    for &h in map.canonical_half_edges() {
        k.set(h, a.get(map.left(h)) - a.get(map.left(map.opp(h))));
    }
    Ok(k)
}

/// `∂₁ h = tgt(h) - tgt(opp(h))`.
pub fn boundary1(map: &CombinatorialMap, k: &Chain1) -> Result<Chain0, ChainError> {
    check(map, k.map_id)?;
    let mut b = Chain0::zero(map);
    for v in 0..map.vertex_count() {
        b.set(v, map.rotation(v).iter().map(|&h| k.get(h)).sum());
    }
    Ok(b)
}

pub fn boundary0(map: &CombinatorialMap, b: &Chain0) -> Result<i64, ChainError> {
    check(map, b.map_id)?;
    Ok(b.coeffs().iter().sum())
}

/// `∂⋆₂`: each vertex maps to the sum of the half-edges entering it.
pub fn coboundary2(map: &CombinatorialMap, b: &Chain0) -> Result<Chain1, ChainError> {
    check(map, b.map_id)?;
    let mut k = Chain1::zero(map);
    for &h in map.canonical_half_edges() {
        k.set(h, b.get(map.tgt(h)) - b.get(map.src(h)));
    }
    Ok(k)
}

/// `∂⋆₁ h = left(h) - left(opp(h))`.
pub fn coboundary1(map: &CombinatorialMap, k: &Chain1) -> Result<Chain2, ChainError> {
    check(map, k.map_id)?;
    let mut a = Chain2::zero(map);
    for x in 0..map.face_count() {
        a.set(x, map.face_boundary(x).iter().map(|&h| k.get(h)).sum());
    }
    Ok(a)
}

pub fn coboundary0(map: &CombinatorialMap, a: &Chain2) -> Result<i64, ChainError> {
    check(map, a.map_id)?;
    Ok(a.coeffs().iter().sum())
}

/// `trans_f(K)`: the amount `f` sends across `K`.
pub fn pair(f: &Chain1, k: &Chain1) -> Result<i64, ChainError> {
    f.same_map(k)?;
    Ok(pair_raw(f, k))
}

pub(crate) fn pair_raw(f: &Chain1, k: &Chain1) -> i64 {
    f.canonical_iter().map(|(h, c)| c * k.get(h)).sum()
}

/// `trans⁺_f(K)`: sum over all half-edges with `f[h] > 0` and `K[h] > 0`.
pub fn pair_plus(f: &Chain1, k: &Chain1) -> Result<i64, ChainError> {
    f.same_map(k)?;
    Ok(pair_plus_raw(f, k))
}

pub(crate) fn pair_plus_raw(f: &Chain1, k: &Chain1) -> i64 {
    f.coeffs
        .iter()
        .zip(&k.coeffs)
        .filter(|&(&a, &b)| a > 0 && b > 0)
        .map(|(a, b)| a * b)
        .sum()
}

pub fn is_cycle(map: &CombinatorialMap, k: &Chain1) -> Result<bool, ChainError> {
    Ok(boundary1(map, k)?.is_zero())
}

pub fn is_cocycle(map: &CombinatorialMap, k: &Chain1) -> Result<bool, ChainError> {
    Ok(coboundary1(map, k)?.is_zero())
}

/// `∂₂ x` for a single face.
pub fn face_boundary_chain(map: &CombinatorialMap, x: Face) -> Chain1 {
    boundary2(map, &Chain2::unit(map, x)).expect("same map")
}

/// `∂⋆₂ v` for a single vertex.
pub fn vertex_coboundary_chain(map: &CombinatorialMap, v: Vertex) -> Chain1 {
    coboundary2(map, &Chain0::unit(map, v)).expect("same map")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bouquet() -> CombinatorialMap {
        CombinatorialMap::from_rotations(vec![vec![0, 2, 1, 3]]).unwrap()
    }

    fn sphere_edge() -> CombinatorialMap {
        CombinatorialMap::from_rotations(vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn antisymmetric_reads() {
        let m = bouquet();
        let mut k = Chain1::zero(&m);
        k.add_at(1, 3);
        assert_eq!(k.get(1), 3);
        assert_eq!(k.get(0), -3);
        assert_eq!(k.norm(), 3);
    }

    #[test]
    fn bouquet_boundaries_vanish() {
        let m = bouquet();
        assert!(face_boundary_chain(&m, 0).is_zero());
        assert!(vertex_coboundary_chain(&m, 0).is_zero());
        let a = Chain1::half_edge(&m, 0);
        assert!(is_cycle(&m, &a).unwrap());
        assert!(is_cocycle(&m, &a).unwrap());
    }

    #[test]
    fn pairings_on_bouquet() {
        let m = bouquet();
        let a = Chain1::half_edge(&m, 0);
        let b = Chain1::half_edge(&m, 2);
        let f = &a + &b;
        assert_eq!(pair(&f, &a).unwrap(), 1);
        assert_eq!(pair(&f, &b).unwrap(), 1);
        let k = &a - &b;
        assert_eq!(pair_plus(&f, &k).unwrap(), 1);
        assert_eq!(pair_plus(&f, &Chain1::zero(&m)).unwrap(), 0);
    }

    #[test]
    fn single_non_loop_half_edge() {
        let m = sphere_edge();
        let h = Chain1::half_edge(&m, 0);
        assert!(!is_cycle(&m, &h).unwrap());
        // the edge has the same face on both sides, so it is a cocycle there;
        // the sphere with one edge has a single face
        assert!(is_cocycle(&m, &h).unwrap());
        let db = boundary1(&m, &h).unwrap();
        assert_eq!(db.coeffs(), &[1, -1]);
    }

    #[test]
    fn mismatch_detected() {
        let m1 = bouquet();
        let m2 = bouquet();
        let a = Chain1::half_edge(&m1, 0);
        let b = Chain1::half_edge(&m2, 0);
        assert_eq!(pair(&a, &b), Err(ChainError::MapMismatch));
        assert_eq!(boundary1(&m2, &a), Err(ChainError::MapMismatch));
    }

    #[test]
    fn coboundary1_of_half_edge() {
        let m = CombinatorialMap::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap();
        // two parallel edges between two vertices: sphere with two faces
        assert_eq!(m.face_count(), 2);
        let h = Chain1::half_edge(&m, 0);
        let d = coboundary1(&m, &h).unwrap();
        let mut expect = Chain2::zero(&m);
        expect.set(m.left(0), 1);
        expect.set(m.left(1), -1);
        assert_eq!(d, expect);
        assert!(!is_cycle(&m, &h).unwrap());
        assert!(!is_cocycle(&m, &h).unwrap());
    }
}
