//! Built-in instances: torus quadrangulations, the two-loop bouquet and
//! random small maps.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::map::CombinatorialMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("grid dimensions must be at least 3, got {0}x{1}")]
    BadDimensions(usize, usize),
}

/// Torus quadrangulation with `n` vertices where vertex `v` has east
/// neighbour `east(v)` and north neighbour `north(v)`. Edge `2v` goes east
/// from `v`, edge `2v + 1` goes north; half-edge `2e` points away from `v`.
fn torus_quadrangulation(
    n: usize,
    east: impl Fn(usize) -> usize,
    north: impl Fn(usize) -> usize,
) -> CombinatorialMap {
    let mut west = vec![0; n];
    let mut south = vec![0; n];
    for v in 0..n {
        west[east(v)] = v;
        south[north(v)] = v;
    }
    let into_v_east = |v: usize| 2 * (2 * v) + 1;
    let into_v_north = |v: usize| 2 * (2 * v + 1) + 1;
    let rotations = (0..n)
        .map(|v| {
            vec![
                into_v_east(v),
                into_v_north(v),
                2 * (2 * west[v]),
                2 * (2 * south[v] + 1),
            ]
        })
        .collect();
    CombinatorialMap::from_rotations(rotations).expect("torus quadrangulation is valid")
}

/// `C_a □ C_b` on the torus; vertex `(i, j)` has id `i * b + j`.
pub fn gen_grid(a: usize, b: usize) -> Result<CombinatorialMap, GeneratorError> {
    if a < 3 || b < 3 {
        return Err(GeneratorError::BadDimensions(a, b));
    }
    Ok(torus_quadrangulation(
        a * b,
        |v| ((v / b + 1) % a) * b + v % b,
        |v| (v / b) * b + (v % b + 1) % b,
    ))
}

/// The Cayley graph `C(Z_13; 1, 5)` quadrangulating the torus, with faces
/// `i, i+1, i+6, i+5`.
pub fn gen_q13() -> CombinatorialMap {
    torus_quadrangulation(13, |v| (v + 1) % 13, |v| (v + 5) % 13)
}

/// One vertex with two interleaved loops.
pub fn bouquet() -> CombinatorialMap {
    CombinatorialMap::from_rotations(vec![vec![0, 2, 1, 3]]).expect("bouquet is valid")
}

/// A connected map on `vertices` vertices with `edges` edges and uniformly
/// shuffled rotations. Loops and parallel edges may occur.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, vertices: usize, edges: usize) -> CombinatorialMap {
    assert!(vertices >= 1 && edges + 1 >= vertices);
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    for e in 0..edges {
        let (u, v) = if e + 1 < vertices {
            // random spanning tree first
            (order[rng.gen_range(0..=e)], order[e + 1])
        } else {
            (rng.gen_range(0..vertices), rng.gen_range(0..vertices))
        };
        rotations[v].push(2 * e);
        rotations[u].push(2 * e + 1);
    }
    for r in &mut rotations {
        r.shuffle(rng);
    }
    if edges == 0 {
        // a lone vertex has no half-edges; give it a loop instead
        rotations[0] = vec![0, 1];
    }
    CombinatorialMap::from_rotations(rotations).expect("random map is valid")
}
