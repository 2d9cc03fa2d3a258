//! The polytope of homology vectors realised by f-circulations: coordinate
//! bounds, a separation oracle, right-hand sides for the terminal part, a
//! modular difference-constraint solver and the lattice search.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::chains::{self, Chain1};
use crate::circulation::{self, circulation_or_certificate, CirculationOutcome, Terminals};
use crate::homology::{cycle_pairings, CohomologyBasis};
use crate::map::CombinatorialMap;
use crate::paths::{self, Arc, BellmanFord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("anchor vector is outside the polytope")]
    AnchorOutsidePolytope,
    #[error("map has {edges} edges, budget is {budget}")]
    BudgetExceeded { edges: usize, budget: usize },
}

pub const DEFAULT_EDGE_BUDGET: usize = 14;

/// A rational query point over the basis and the terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPoint {
    pub u: Vec<Ratio<i64>>,
    pub u_prime: Vec<Ratio<i64>>,
}

impl HomologyPoint {
    pub fn integral(u: &[i64], u_prime: &[i64]) -> Self {
        HomologyPoint {
            u: u.iter().map(|&v| Ratio::from_integer(v)).collect(),
            u_prime: u_prime.iter().map(|&v| Ratio::from_integer(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Inside,
    /// `⟨(z, z'), p⟩ <= rhs` for all polytope points `p`, violated by the query.
    Separator {
        z: Vec<i64>,
        z_prime: Vec<i64>,
        rhs: Ratio<i64>,
    },
}

/// Intervals `[-pair⁺(-f, K), pair⁺(f, K)]` per basis cocycle and copath.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub basis: Vec<(i64, i64)>,
    pub terminals: Vec<(i64, i64)>,
}

fn interval(f: &Chain1, neg_f: &Chain1, k: &Chain1) -> (i64, i64) {
    (
        -chains::pair_plus_raw(neg_f, k),
        chains::pair_plus_raw(f, k),
    )
}

pub fn veras_bounds(f: &Chain1, basis: &CohomologyBasis, terminals: &Terminals) -> Bounds {
    let neg_f = -f;
    Bounds {
        basis: basis
            .cocycles
            .iter()
            .map(|k| interval(f, &neg_f, k))
            .collect(),
        terminals: terminals
            .copaths
            .iter()
            .map(|p| interval(f, &neg_f, p))
            .collect(),
    }
}

/// Separation oracle for the polytope spanned by the homology vectors of
/// f-circulations.
pub fn membership(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    terminals: &Terminals,
    point: &HomologyPoint,
) -> Membership {
    let ix = terminals.anchor_index();
    let ux = point.u_prime[ix];
    if ux != Ratio::from_integer(0) {
        let mut z_prime = vec![0; terminals.len()];
        z_prime[ix] = if ux > Ratio::from_integer(0) { 1 } else { -1 };
        return Membership::Separator {
            z: vec![0; basis.len()],
            z_prime,
            rhs: Ratio::from_integer(0),
        };
    }
    let mu = point
        .u
        .iter()
        .chain(&point.u_prime)
        .fold(1i64, |acc, r| acc.lcm(r.denom()));
    let scale = |r: &Ratio<i64>| (r * mu).to_integer();
    let a = point.u.iter().map(scale).collect();
    let a_prime = point.u_prime.iter().map(scale).collect();
    let target = terminals.target(a, a_prime);
    let mu_f = mu * f;
    match circulation_or_certificate(map, basis, &mu_f, &target) {
        CirculationOutcome::Circulation(_) => Membership::Inside,
        CirculationOutcome::Certificate(cert) => {
            let mut z_prime = vec![0; terminals.len()];
            let iy = terminals
                .s
                .iter()
                .position(|&t| t == cert.y)
                .expect("terminal");
            let iy2 = terminals
                .s
                .iter()
                .position(|&t| t == cert.y_prime)
                .expect("terminal");
            z_prime[iy2] += 1;
            z_prime[iy] -= 1;
            Membership::Separator {
                z: cert.z,
                z_prime,
                rhs: Ratio::new(cert.rhs, mu),
            }
        }
    }
}

/// `beta[i][j]`: the largest `a'(s[j]) - a'(s[i])` over f-circulations whose
/// basis pairings are `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsTable {
    pub beta: Vec<Vec<i64>>,
}

pub fn rhs_table(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    a: &[i64],
    terminals: &Terminals,
) -> Result<RhsTable, LatticeError> {
    let anchored = circulation::HomologyTarget::anchored(map, a.to_vec(), terminals.x);
    let b = circulation::prescribed_cycle(map, basis, &anchored);
    let arcs: Vec<Arc> = circulation::dual_arcs(map, f, &b);
    let dist = paths::johnson(map.face_count(), &arcs, &terminals.s)
        .map_err(|_| LatticeError::AnchorOutsidePolytope)?;
    let along: Vec<i64> = terminals
        .copaths
        .iter()
        .map(|p| chains::pair_raw(&b, p))
        .collect();
    let n = terminals.len();
    let beta = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = dist[i][terminals.s[j]].expect("dual is connected");
                    along[j] - along[i] + d
                })
                .collect()
        })
        .collect();
    Ok(RhsTable { beta })
}

/// Residues a lattice point must meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSpec {
    pub m: i64,
    pub r0: Vec<i64>,
    pub r0_prime: Vec<i64>,
}

/// Integers `l` with `l[x] = 0`, `l[j] - l[i] <= d[i][j]` and
/// `l[i] ≡ r[i] (mod m)`, or `None`.
pub fn residue_difference_solve(x: usize, m: i64, d: &[Vec<i64>], r: &[i64]) -> Option<Vec<i64>> {
    let n = r.len();
    let mut arcs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let want = r[j] - r[i];
            let t = d[i][j] - (d[i][j] - want).rem_euclid(m);
            if i == j {
                if t < 0 {
                    return None;
                }
                continue;
            }
            arcs.push(Arc {
                from: i,
                to: j,
                len: t,
            });
        }
    }
    match paths::bellman_ford(n, &arcs, &[(x, 0)]) {
        BellmanFord::NegativeCycle(_) => None,
        BellmanFord::Distances { dist, .. } => Some(
            dist.into_iter()
                .map(|v| v.expect("complete digraph"))
                .collect(),
        ),
    }
}

/// Strategy for walking the residue-restricted box. `accept` returns true
/// when a point succeeds, which ends the search.
pub trait BoxSearch {
    fn search(
        &self,
        bounds: &[(i64, i64)],
        residues: &[i64],
        m: i64,
        accept: &mut dyn FnMut(&[i64]) -> bool,
    ) -> Option<Vec<i64>>;
}

/// Lexicographic enumeration with stride `m` per coordinate.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lexicographic;

impl BoxSearch for Lexicographic {
    fn search(
        &self,
        bounds: &[(i64, i64)],
        residues: &[i64],
        m: i64,
        accept: &mut dyn FnMut(&[i64]) -> bool,
    ) -> Option<Vec<i64>> {
        let start: Vec<i64> = bounds
            .iter()
            .zip(residues)
            .map(|(&(lo, _), &r)| lo + (r - lo).rem_euclid(m))
            .collect();
        if start.iter().zip(bounds).any(|(&s, &(_, hi))| s > hi) {
            return None;
        }
        let mut u = start.clone();
        loop {
            if accept(&u) {
                return Some(u);
            }
            // odometer, last coordinate fastest
            let mut i = u.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                u[i] += m;
                if u[i] <= bounds[i].1 {
                    break;
                }
                u[i] = start[i];
            }
        }
    }
}

/// Outcome of the constrained search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedSearch {
    pub circulation: Option<Chain1>,
    pub a: Vec<i64>,
    pub a_prime: Vec<i64>,
    pub points_tested: usize,
}

/// An f0-circulation whose pairings with the basis and the copaths meet the
/// residues of `spec`.
pub fn find_constrained_circulation(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f0: &Chain1,
    spec: &ResidueSpec,
    terminals: &Terminals,
    strategy: &dyn BoxSearch,
) -> ConstrainedSearch {
    let bounds = veras_bounds(f0, basis, terminals);
    let anchor = Terminals::anchor_only(map, terminals.x);
    let x = terminals.anchor_index();
    let mut tested = 0;
    let mut found: Option<(Vec<i64>, Vec<i64>)> = None;
    let mut accept = |u: &[i64]| {
        tested += 1;
        let p = HomologyPoint::integral(u, &[0]);
        if membership(map, basis, f0, &anchor, &p) != Membership::Inside {
            return false;
        }
        let Ok(table) = rhs_table(map, basis, f0, u, terminals) else {
            return false;
        };
        match residue_difference_solve(x, spec.m, &table.beta, &spec.r0_prime) {
            Some(l) => {
                found = Some((u.to_vec(), l));
                true
            }
            None => false,
        }
    };
    strategy.search(&bounds.basis, &spec.r0, spec.m, &mut accept);
    match found {
        None => ConstrainedSearch {
            circulation: None,
            a: Vec::new(),
            a_prime: Vec::new(),
            points_tested: tested,
        },
        Some((a, l)) => {
            let target = terminals.target(a.clone(), l.clone());
            match circulation_or_certificate(map, basis, f0, &target) {
                CirculationOutcome::Circulation(c) => ConstrainedSearch {
                    circulation: Some(c),
                    a,
                    a_prime: l,
                    points_tested: tested,
                },
                CirculationOutcome::Certificate(cert) => {
                    panic!("feasible residue solution refuted by {cert:?}")
                }
            }
        }
    }
}

/// All f-circulations, enumerated edge by edge with vertex-excess pruning.
pub fn f_circulations(
    map: &CombinatorialMap,
    f: &Chain1,
    budget: usize,
) -> Result<Vec<Chain1>, LatticeError> {
    let ne = map.edge_count();
    if ne > budget {
        return Err(LatticeError::BudgetExceeded { edges: ne, budget });
    }
    let hs = map.canonical_half_edges();
    // value range of c on each canonical half-edge
    let ranges: Vec<(i64, i64)> = hs
        .iter()
        .map(|&h| {
            let v = f.get(h);
            if v >= 0 {
                (0, v)
            } else {
                (v, 0)
            }
        })
        .collect();
    let nv = map.vertex_count();
    // remaining reachable excess range per vertex from edges e..
    let mut rem_lo = vec![vec![0i64; nv]; ne + 1];
    let mut rem_hi = vec![vec![0i64; nv]; ne + 1];
    for e in (0..ne).rev() {
        rem_lo[e] = rem_lo[e + 1].clone();
        rem_hi[e] = rem_hi[e + 1].clone();
        let h = hs[e];
        if map.is_loop(h) {
            continue;
        }
        let (lo, hi) = ranges[e];
        rem_lo[e][map.tgt(h)] += lo;
        rem_hi[e][map.tgt(h)] += hi;
        rem_lo[e][map.src(h)] -= hi;
        rem_hi[e][map.src(h)] -= lo;
    }
    let mut out = Vec::new();
    let mut values = vec![0i64; ne];
    let mut excess = vec![0i64; nv];
    #[allow(clippy::too_many_arguments)]
    fn go(
        e: usize,
        map: &CombinatorialMap,
        hs: &[usize],
        ranges: &[(i64, i64)],
        rem: (&[Vec<i64>], &[Vec<i64>]),
        values: &mut [i64],
        excess: &mut [i64],
        out: &mut Vec<Vec<i64>>,
    ) {
        let (lo, hi) = (&rem.0[e], &rem.1[e]);
        if (0..excess.len()).any(|v| excess[v] + lo[v] > 0 || excess[v] + hi[v] < 0) {
            return;
        }
        if e == hs.len() {
            out.push(values.to_vec());
            return;
        }
        let h = hs[e];
        let (t, s) = (map.tgt(h), map.src(h));
        for c in ranges[e].0..=ranges[e].1 {
            values[e] = c;
            excess[t] += c;
            excess[s] -= c;
            go(e + 1, map, hs, ranges, rem, values, excess, out);
            excess[t] -= c;
            excess[s] += c;
        }
        values[e] = 0;
    }
    let mut raw = Vec::new();
    go(
        0,
        map,
        hs,
        &ranges,
        (&rem_lo, &rem_hi),
        &mut values,
        &mut excess,
        &mut raw,
    );
    for v in raw {
        out.push(Chain1::from_edge_coeffs(map, &v).expect("one value per edge"));
    }
    Ok(out)
}

/// Pairings `(a, a')` with the basis cocycles and the copaths.
pub type IntegerPoint = (Vec<i64>, Vec<i64>);

/// Integer points `(a, a')` realised by f-circulations.
pub fn integer_points_bruteforce(
    map: &CombinatorialMap,
    basis: &CohomologyBasis,
    f: &Chain1,
    terminals: &Terminals,
    budget: usize,
) -> Result<BTreeSet<IntegerPoint>, LatticeError> {
    Ok(f_circulations(map, f, budget)?
        .iter()
        .map(|c| {
            let a = cycle_pairings(c, basis);
            let ap = terminals
                .copaths
                .iter()
                .map(|p| chains::pair_raw(c, p))
                .collect();
            (a, ap)
        })
        .collect())
}
