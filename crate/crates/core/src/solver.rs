//! Extension of a precoloring to a homomorphism into the odd cycle `C_m`,
//! through nowhere-zero flows on the dual.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::chains::{self, Chain0, Chain1};
use crate::circulation::Terminals;
use crate::flows::{nowhere_zero_flow_with_boundary, relevant_boundaries};
use crate::homology::{cohomology_basis, copaths_to_all, cycle_pairings, CohomologyBasis};
use crate::lattice::{find_constrained_circulation, BoxSearch, Lexicographic, ResidueSpec};
use crate::map::{check_modulus, CombinatorialMap, Face, ModulusError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error("vertex {0} does not exist")]
    UnknownVertex(Vertex),
    #[error("color {color} out of range for modulus {m}")]
    ColorOutOfRange { color: u32, m: u32 },
    #[error("coloring has {got} entries, map has {want} vertices")]
    WrongLength { got: usize, want: usize },
    #[error("colors across edge {0} do not differ by one")]
    NotAHomomorphism(usize),
    #[error("flow is not divisible by the modulus")]
    DivisibilityViolation,
}

/// Partial coloring `psi` with colors in `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precoloring {
    pub m: u32,
    pub psi: BTreeMap<Vertex, u32>,
}

impl Precoloring {
    pub fn new(m: u32, psi: BTreeMap<Vertex, u32>) -> Result<Self, SolverError> {
        check_modulus(m)?;
        if let Some(&color) = psi.values().find(|&&c| c >= m) {
            return Err(SolverError::ColorOutOfRange { color, m });
        }
        Ok(Precoloring { m, psi })
    }

    pub fn empty(m: u32) -> Result<Self, SolverError> {
        Self::new(m, BTreeMap::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    LoopInGraph,
    /// Adjacent precolored vertices whose colors are not neighbours in `C_m`.
    PrecolorConflict(Vertex, Vertex),
    /// Every relevant boundary was tried.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Extendable,
    NotExtendable(Refusal),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub boundaries_tried: usize,
    pub lattice_points_tested: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringResult {
    pub status: Status,
    pub coloring: Option<Vec<u32>>,
    pub witness_boundary: Option<Chain0>,
    pub stats: SolveStats,
}

impl ColoringResult {
    pub fn is_extendable(&self) -> bool {
        self.status == Status::Extendable
    }

    fn refused(r: Refusal) -> Self {
        ColoringResult {
            status: Status::NotExtendable(r),
            coloring: None,
            witness_boundary: None,
            stats: SolveStats::default(),
        }
    }
}

fn adjacent_in_cycle(a: u32, b: u32, m: u32) -> bool {
    (a + 1) % m == b || (b + 1) % m == a
}

/// The flow on `g` induced by a coloring of its faces: `f[h] = ±1` congruent
/// to `phi(left h) - phi(left opp h)`.
pub fn coloring_to_flow(g: &CombinatorialMap, phi: &[u32], m: u32) -> Result<Chain1, SolverError> {
    check_modulus(m)?;
    if phi.len() != g.face_count() {
        return Err(SolverError::WrongLength {
            got: phi.len(),
            want: g.face_count(),
        });
    }
    let mut f = Chain1::zero(g);
    for (e, &h) in g.canonical_half_edges().iter().enumerate() {
        let (a, b) = (phi[g.left(h)], phi[g.left(g.opp(h))]);
        if a >= m || b >= m {
            return Err(SolverError::ColorOutOfRange { color: a.max(b), m });
        }
        let v = if (b + 1) % m == a {
            1
        } else if (a + 1) % m == b {
            -1
        } else {
            return Err(SolverError::NotAHomomorphism(e));
        };
        f.set(h, v);
    }
    Ok(f)
}

fn divisible(g: &CombinatorialMap, f: &Chain1, basis: &CohomologyBasis, m: i64) -> bool {
    let d = chains::boundary1(g, f).expect("same map");
    d.coeffs().iter().all(|v| v % m == 0) && cycle_pairings(f, basis).iter().all(|v| v % m == 0)
}

/// The coloring of the faces of `g` with `phi(y) = c0 + pair(f, P_y)`,
/// copaths taken from `anchor.0`.
pub fn flow_to_coloring(
    g: &CombinatorialMap,
    f: &Chain1,
    m: u32,
    anchor: (Face, u32),
) -> Result<Vec<u32>, SolverError> {
    check_modulus(m)?;
    let basis = cohomology_basis(g);
    let mi = i64::from(m);
    if !divisible(g, f, &basis, mi) {
        return Err(SolverError::DivisibilityViolation);
    }
    let (x, c0) = anchor;
    Ok(copaths_to_all(g, x)
        .iter()
        .map(|p| (i64::from(c0) + chains::pair_raw(f, p)).rem_euclid(mi) as u32)
        .collect())
}

/// Adjacent vertices get neighbouring colors of `C_m`, and `psi` is kept.
pub fn verify_homomorphism(
    h: &CombinatorialMap,
    m: u32,
    phi: &[u32],
    psi: Option<&Precoloring>,
) -> bool {
    if phi.len() != h.vertex_count() || phi.iter().any(|&c| c >= m) {
        return false;
    }
    let edges_ok = h
        .canonical_half_edges()
        .iter()
        .all(|&e| adjacent_in_cycle(phi[h.tgt(e)], phi[h.src(e)], m));
    let kept = psi.is_none_or(|p| p.psi.iter().all(|(&v, &c)| phi.get(v) == Some(&c)));
    edges_ok && kept
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Boundaries processed concurrently; 1 is sequential.
    pub jobs: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { jobs: 1 }
    }
}

struct Instance<'a> {
    g: &'a CombinatorialMap,
    basis: CohomologyBasis,
    terminals: Terminals,
    /// `r(y) = psi(y) - psi(x) mod m` per terminal.
    r: Vec<i64>,
    m: i64,
    anchor_color: u32,
}

struct Attempt {
    coloring: Option<Vec<u32>>,
    points: usize,
}

impl Instance<'_> {
    fn attempt(&self, d: &Chain0, strategy: &dyn BoxSearch) -> Attempt {
        let g = self.g;
        let Ok(Some(f0)) = nowhere_zero_flow_with_boundary(g, d) else {
            return Attempt {
                coloring: None,
                points: 0,
            };
        };
        let m = self.m;
        let half = (m + 1) / 2;
        let r0 = cycle_pairings(&f0, &self.basis)
            .iter()
            .map(|t| (half * t).rem_euclid(m))
            .collect();
        let r0_prime = self
            .terminals
            .copaths
            .iter()
            .zip(&self.r)
            .map(|(p, r)| (half * (chains::pair_raw(&f0, p) - r)).rem_euclid(m))
            .collect();
        let spec = ResidueSpec { m, r0, r0_prime };
        let found =
            find_constrained_circulation(g, &self.basis, &f0, &spec, &self.terminals, strategy);
        let coloring = found.circulation.map(|c| {
            let f = &f0 - &(2 * &c);
            debug_assert!(f.is_nowhere_zero());
            flow_to_coloring(g, &f, m as u32, (self.terminals.x, self.anchor_color))
                .expect("constructed flow is divisible")
        });
        Attempt {
            coloring,
            points: found.points_tested,
        }
    }
}

/// Decides whether `pre` extends to a homomorphism from `h` to `C_m`.
pub fn extend_precoloring(
    h: &CombinatorialMap,
    pre: &Precoloring,
) -> Result<ColoringResult, SolverError> {
    extend_precoloring_with(h, pre, SolverOptions::default())
}

pub fn extend_precoloring_with(
    h: &CombinatorialMap,
    pre: &Precoloring,
    opts: SolverOptions,
) -> Result<ColoringResult, SolverError> {
    let m = pre.m;
    check_modulus(m)?;
    if let Some((&v, _)) = pre.psi.iter().find(|(&v, _)| v >= h.vertex_count()) {
        return Err(SolverError::UnknownVertex(v));
    }
    if let Some(&color) = pre.psi.values().find(|&&c| c >= m) {
        return Err(SolverError::ColorOutOfRange { color, m });
    }
    if h.has_loops() {
        return Ok(ColoringResult::refused(Refusal::LoopInGraph));
    }
    for &e in h.canonical_half_edges() {
        let (u, v) = (h.src(e), h.tgt(e));
        if let (Some(&a), Some(&b)) = (pre.psi.get(&u), pre.psi.get(&v)) {
            if !adjacent_in_cycle(a, b, m) {
                return Ok(ColoringResult::refused(Refusal::PrecolorConflict(
                    u.min(v),
                    u.max(v),
                )));
            }
        }
    }
    let g = h.dual();
    let (x, anchor_color) = pre
        .psi
        .iter()
        .next()
        .map(|(&v, &c)| (v, c))
        .unwrap_or((0, 0));
    let s: Vec<Face> = pre.psi.keys().copied().collect();
    let terminals = Terminals::new(&g, x, &s);
    let mi = i64::from(m);
    let r = terminals
        .s
        .iter()
        .map(|y| {
            (i64::from(pre.psi.get(y).copied().unwrap_or(anchor_color)) - i64::from(anchor_color))
                .rem_euclid(mi)
        })
        .collect();
    let inst = Instance {
        g: &g,
        basis: cohomology_basis(&g),
        terminals,
        r,
        m: mi,
        anchor_color,
    };

    let mut stats = SolveStats::default();
    let mut stream = relevant_boundaries(&g, m);
    let chunk = if opts.jobs <= 1 { 1 } else { opts.jobs * 4 };
    let pool = if opts.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .ok()
    } else {
        None
    };
    loop {
        let batch: Vec<Chain0> = stream.by_ref().take(chunk).map(|b| b.d).collect();
        if batch.is_empty() {
            break;
        }
        let attempts: Vec<Attempt> = match &pool {
            Some(pool) => pool.install(|| {
                batch
                    .par_iter()
                    .map(|d| inst.attempt(d, &Lexicographic))
                    .collect()
            }),
            None => batch
                .iter()
                .map(|d| inst.attempt(d, &Lexicographic))
                .collect(),
        };
        for (d, att) in batch.into_iter().zip(attempts) {
            stats.boundaries_tried += 1;
            stats.lattice_points_tested += att.points;
            if let Some(phi) = att.coloring {
                assert!(
                    verify_homomorphism(h, m, &phi, Some(pre)),
                    "decoded coloring failed verification"
                );
                return Ok(ColoringResult {
                    status: Status::Extendable,
                    coloring: Some(phi),
                    witness_boundary: Some(d),
                    stats,
                });
            }
        }
    }
    Ok(ColoringResult {
        status: Status::NotExtendable(Refusal::Exhausted),
        coloring: None,
        witness_boundary: None,
        stats,
    })
}

/// Backtracking over all extensions of `pre`, vertices in id order.
pub fn exhaustive_extension(h: &CombinatorialMap, pre: &Precoloring) -> Option<Vec<u32>> {
    let n = h.vertex_count();
    let m = pre.m;
    let mut nbrs: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &e in h.canonical_half_edges() {
        let (u, v) = (h.src(e), h.tgt(e));
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    let mut phi = vec![u32::MAX; n];
    fn go(v: usize, m: u32, nbrs: &[Vec<Vertex>], pre: &Precoloring, phi: &mut Vec<u32>) -> bool {
        if v == phi.len() {
            return true;
        }
        let options: Vec<u32> = match pre.psi.get(&v) {
            Some(&c) => vec![c],
            None => (0..m).collect(),
        };
        for c in options {
            let ok = nbrs[v].iter().all(|&u| match u.cmp(&v) {
                Ordering::Less => adjacent_in_cycle(phi[u], c, m),
                Ordering::Equal => false,
                Ordering::Greater => true,
            });
            if ok {
                phi[v] = c;
                if go(v + 1, m, nbrs, pre, phi) {
                    return true;
                }
                phi[v] = u32::MAX;
            }
        }
        false
    }
    go(0, m, &nbrs, pre, &mut phi).then_some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_q13};

    fn diag(a: usize, b: usize, m: u32) -> Vec<u32> {
        (0..a * b).map(|v| ((v / b + v % b) as u32) % m).collect()
    }

    #[test]
    fn grid_diagonal_coloring_round_trip() {
        let h = gen_grid(3, 3).unwrap();
        let phi = diag(3, 3, 3);
        assert!(verify_homomorphism(&h, 3, &phi, None));
        let g = h.dual();
        let f = coloring_to_flow(&g, &phi, 3).unwrap();
        assert!(f.is_nowhere_zero());
        let back = flow_to_coloring(&g, &f, 3, (0, phi[0])).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn flow_errors() {
        let h = gen_grid(3, 3).unwrap();
        let g = h.dual();
        assert!(matches!(
            coloring_to_flow(&g, &[0; 9], 3),
            Err(SolverError::NotAHomomorphism(_))
        ));
        let b = crate::generators::bouquet();
        let f = Chain1::half_edge(&b, 0);
        assert_eq!(
            flow_to_coloring(&b, &f, 3, (0, 0)),
            Err(SolverError::DivisibilityViolation)
        );
    }

    #[test]
    fn grid_is_colorable() {
        let h = gen_grid(3, 3).unwrap();
        let r = extend_precoloring(&h, &Precoloring::empty(3).unwrap()).unwrap();
        assert!(r.is_extendable());
        assert!(verify_homomorphism(
            &h,
            3,
            r.coloring.as_ref().unwrap(),
            None
        ));
    }

    #[test]
    fn q13_is_not_colorable() {
        let h = gen_q13();
        let r = extend_precoloring(&h, &Precoloring::empty(3).unwrap()).unwrap();
        assert_eq!(r.status, Status::NotExtendable(Refusal::Exhausted));
        assert_eq!(r.stats.boundaries_tried, 1);
    }

    #[test]
    fn adjacent_equal_precolors_refused() {
        let h = gen_grid(3, 3).unwrap();
        let psi = BTreeMap::from([(0, 0), (1, 0)]);
        let r = extend_precoloring(&h, &Precoloring::new(3, psi).unwrap()).unwrap();
        assert_eq!(
            r.status,
            Status::NotExtendable(Refusal::PrecolorConflict(0, 1))
        );
    }

    #[test]
    fn verify_examples() {
        let h = gen_grid(4, 4).unwrap();
        let two: Vec<u32> = (0..16).map(|v| ((v / 4 + v % 4) % 2) as u32).collect();
        assert!(verify_homomorphism(&h, 5, &two, None));
        assert!(!verify_homomorphism(&h, 3, &[1; 16], None));
    }

    #[test]
    fn oracle_agrees_on_grid() {
        let h = gen_grid(3, 3).unwrap();
        let pre = Precoloring::empty(3).unwrap();
        let phi = exhaustive_extension(&h, &pre).unwrap();
        assert!(verify_homomorphism(&h, 3, &phi, None));
        assert_eq!(exhaustive_extension(&gen_q13(), &pre), None);
    }
}
