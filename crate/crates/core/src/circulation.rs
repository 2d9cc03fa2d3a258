//! 1-cycles with prescribed pairings, and their repair into f-circulations
//! via shortest paths on the dual, or a violated-copath certificate.

use thiserror::Error;

use crate::chains::{self, face_boundary_chain, Chain1};
use crate::homology::{class_unchecked, copaths_from, cycle_pairings, CohomologyBasis};
use crate::map::{CombinatorialMap, Face, HalfEdge};
use crate::paths::{self, Arc, BellmanFord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("distinguished face {0} is not among the terminals")]
    MissingAnchor(Face),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("prescribed value at the anchor must be zero")]
    NonzeroAnchor,
    #[error("chain for terminal {0} is not a copath from the anchor")]
    BadCopath(Face),
    #[error("duplicate terminal {0}")]
    DuplicateTerminal(Face),
}

/// Prescribed pairings `a` over the basis and `a_prime` over the terminal
/// faces `s`, measured along the copaths from `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTarget {
    pub a: Vec<i64>,
    pub x: Face,
    pub s: Vec<Face>,
    pub copaths: Vec<Chain1>,
    pub a_prime: Vec<i64>,
}

impl HomologyTarget {
    pub fn new(
        map: &CombinatorialMap,
        basis: &CohomologyBasis,
        a: Vec<i64>,
        x: Face,
        s: Vec<Face>,
        copaths: Vec<Chain1>,
        a_prime: Vec<i64>,
    ) -> Result<Self, TargetError> {
        if a.len() != basis.len() {
            return Err(TargetError::LengthMismatch {
                expected: basis.len(),
                got: a.len(),
            });
        }
        for v in [copaths.len(), a_prime.len()] {
            if v != s.len() {
                return Err(TargetError::LengthMismatch {
                    expected: s.len(),
                    got: v,
                });
            }
        }
        let Some(ix) = s.iter().position(|&y| y == x) else {
            return Err(TargetError::MissingAnchor(x));
        };
        if a_prime[ix] != 0 {
            return Err(TargetError::NonzeroAnchor);
        }
        let mut sorted = s.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(TargetError::DuplicateTerminal(w[0]));
        }
        for (&y, p) in s.iter().zip(&copaths) {
            let ok = chains::coboundary1(map, p).is_ok_and(|d| {
                (0..map.face_count()).all(|z| {
                    let want = i64::from(z == y) - i64::from(z == x);
                    d.get(z) == want
                })
            });
            if !ok {
                return Err(TargetError::BadCopath(y));
            }
        }
        Ok(HomologyTarget {
            a,
            x,
            s,
            copaths,
            a_prime,
        })
    }

    /// Target with only the anchor face as terminal.
    pub fn anchored(map: &CombinatorialMap, a: Vec<i64>, x: Face) -> Self {
        HomologyTarget {
            a,
            x,
            s: vec![x],
            copaths: vec![Chain1::zero(map)],
            a_prime: vec![0],
        }
    }

    fn index_of(&self, y: Face) -> usize {
        self.s.iter().position(|&t| t == y).expect("terminal face")
    }
}

/// Terminal faces `s` with copaths from the anchor `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terminals {
    pub x: Face,
    pub s: Vec<Face>,
    pub copaths: Vec<Chain1>,
}

impl Terminals {
    /// Copaths from `x` to each of `s`; `x` is added first if missing.
    pub fn new(map: &CombinatorialMap, x: Face, s: &[Face]) -> Self {
        let mut faces = Vec::with_capacity(s.len() + 1);
        if !s.contains(&x) {
            faces.push(x);
        }
        faces.extend_from_slice(s);
        let copaths = copaths_from(map, x, &faces)
            .into_iter()
            .map(|p| p.chain)
            .collect();
        Terminals {
            x,
            s: faces,
            copaths,
        }
    }

    pub fn anchor_only(map: &CombinatorialMap, x: Face) -> Self {
        Terminals {
            x,
            s: vec![x],
            copaths: vec![Chain1::zero(map)],
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn anchor_index(&self) -> usize {
        self.s
            .iter()
            .position(|&y| y == self.x)
            .expect("anchor is a terminal")
    }

    pub fn target(&self, a: Vec<i64>, a_prime: Vec<i64>) -> HomologyTarget {
        assert_eq!(a_prime.len(), self.s.len());
        HomologyTarget {
            a,
            x: self.x,
            s: self.s.clone(),
            copaths: self.copaths.clone(),
            a_prime,
        }
    }
}

/// A simple copath `d` from `y` to `y_prime` along which `f` leaves too
/// little room for the prescribed pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub d: Chain1,
    pub y: Face,
    pub y_prime: Face,
    pub z: Vec<i64>,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CirculationOutcome {
    Circulation(Chain1),
    Certificate(Certificate),
}

impl CirculationOutcome {
    pub fn is_circulation(&self) -> bool {
        matches!(self, CirculationOutcome::Circulation(_))
    }
}

/// A 1-cycle `b` with `pair(b, K_e) = a_e` and `pair(b, P(y)) = a'(y)`.
pub fn prescribed_cycle(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    target: &HomologyTarget,
) -> Chain1 {
    let mut b = basis.combine_cycles(map, &target.a);
    for ((&y, p), &ap) in target.s.iter().zip(&target.copaths).zip(&target.a_prime) {
        if y == target.x {
            continue;
        }
        let through: i64 = basis
            .cycles
            .iter()
            .zip(&target.a)
            .map(|(f, &ae)| ae * chains::pair_raw(f, p))
            .sum();
        let gamma = ap - through;
        if gamma != 0 {
            b += &(gamma * &face_boundary_chain(map, y));
        }
    }
    b
}

/// Arc `left(opp h) -> left(h)` for every half-edge `h`, in id order.
pub(crate) fn dual_arcs(map: &CombinatorialMap, f: &Chain1, b: &Chain1) -> Vec<Arc> {
    (0..map.half_edge_count())
        .map(|h| {
            let fh = f.get(h);
            let len = if fh > 0 { fh - b.get(h) } else { -b.get(h) };
            Arc {
                from: map.left(map.opp(h)),
                to: map.left(h),
                len,
            }
        })
        .collect()
}

fn certificate(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    target: &HomologyTarget,
    hs: &[HalfEdge],
    y: Face,
    y_prime: Face,
) -> Certificate {
    let d = Chain1::from_half_edges(map, hs.iter().copied());
    let mut k = d.clone();
    k -= &target.copaths[target.index_of(y_prime)];
    k += &target.copaths[target.index_of(y)];
    let z = class_unchecked(&k, basis);
    let lhs = z.iter().zip(&target.a).map(|(a, b)| a * b).sum::<i64>()
        + target.a_prime[target.index_of(y_prime)]
        - target.a_prime[target.index_of(y)];
    let rhs = chains::pair_plus_raw(f, &d);
    Certificate {
        d,
        y,
        y_prime,
        z,
        lhs,
        rhs,
    }
}

/// Either an f-circulation with the prescribed pairings or a certificate
/// that none exists.
pub fn circulation_or_certificate(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    target: &HomologyTarget,
) -> CirculationOutcome {
    let b = prescribed_cycle(map, basis, target);
    let arcs = dual_arcs(map, f, &b);
    let nf = map.face_count();
    let all: Vec<(usize, i64)> = (0..nf).map(|y| (y, 0)).collect();
    let out = match paths::bellman_ford(nf, &arcs, &all) {
        BellmanFord::NegativeCycle(cycle) => CirculationOutcome::Certificate(certificate(
            map, basis, f, target, &cycle, target.x, target.x,
        )),
        BellmanFord::Distances { .. } => {
            let sources: Vec<(usize, i64)> = target.s.iter().map(|&y| (y, 0)).collect();
            let BellmanFord::Distances { dist, pred } = paths::bellman_ford(nf, &arcs, &sources)
            else {
                unreachable!("no negative cycle on the second pass")
            };
            let bad = target
                .s
                .iter()
                .copied()
                .find(|&y| dist[y].is_some_and(|d| d < 0));
            match bad {
                Some(y_prime) => {
                    let path = paths::path_to(&arcs, &pred, y_prime);
                    let y = arcs[path[0]].from;
                    CirculationOutcome::Certificate(certificate(
                        map, basis, f, target, &path, y, y_prime,
                    ))
                }
                None => {
                    let l: Vec<i64> = dist.iter().map(|d| d.expect("dual is connected")).collect();
                    let mut c = b;
                    for &h in map.canonical_half_edges() {
                        c.add_at(h, l[map.left(h)] - l[map.left(map.opp(h))]);
                    }
                    CirculationOutcome::Circulation(c)
                }
            }
        }
    };
    debug_assert!(match &out {
        CirculationOutcome::Circulation(c) => validate_circulation(map, basis, f, target, c),
        CirculationOutcome::Certificate(cert) => validate_certificate(map, basis, f, target, cert),
    });
    out
}

/// `c` is a cycle dominated by `f` with the prescribed pairings.
pub fn validate_circulation(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    target: &HomologyTarget,
    c: &Chain1,
) -> bool {
    chains::is_cycle(map, c).unwrap_or(false)
        && c.dominated_by(f)
        && cycle_pairings(c, basis) == target.a
        && target
            .copaths
            .iter()
            .zip(&target.a_prime)
            .all(|(p, &ap)| chains::pair_raw(c, p) == ap)
}

/// Simplicity, endpoints, class and strict violation of a certificate.
pub fn validate_certificate(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    target: &HomologyTarget,
    cert: &Certificate,
) -> bool {
    if !cert.d.is_simple() || !target.s.contains(&cert.y) || !target.s.contains(&cert.y_prime) {
        return false;
    }
    let Ok(db) = chains::coboundary1(map, &cert.d) else {
        return false;
    };
    let ends_ok = (0..map.face_count())
        .all(|z| db.get(z) == i64::from(z == cert.y_prime) - i64::from(z == cert.y));
    let mut k = cert.d.clone();
    k -= &target.copaths[target.index_of(cert.y_prime)];
    k += &target.copaths[target.index_of(cert.y)];
    let lhs = cert
        .z
        .iter()
        .zip(&target.a)
        .map(|(a, b)| a * b)
        .sum::<i64>()
        + target.a_prime[target.index_of(cert.y_prime)]
        - target.a_prime[target.index_of(cert.y)];
    ends_ok
        && chains::is_cocycle(map, &k).unwrap_or(false)
        && class_unchecked(&k, basis) == cert.z
        && cert.lhs == lhs
        && cert.rhs == chains::pair_plus_raw(f, &cert.d)
        && cert.lhs > cert.rhs
}
