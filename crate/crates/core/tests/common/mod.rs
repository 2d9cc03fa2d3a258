#![allow(dead_code)]

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use surfflow::generators::random_map;
use surfflow::{Chain0, Chain1, Chain2, CombinatorialMap};

/// Connected maps with at most `max_edges` edges.
pub fn arb_map(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = CombinatorialMap> {
    (1..=max_vertices, 0..=max_edges, any::<u64>())
        .prop_map(|(v, e, seed)| random_map(&mut StdRng::seed_from_u64(seed), v, e.max(v - 1)))
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rand_chain0(map: &CombinatorialMap, r: &mut StdRng, k: i64) -> Chain0 {
    let c = (0..map.vertex_count())
        .map(|_| r.gen_range(-k..=k))
        .collect();
    Chain0::from_coeffs(map, c).unwrap()
}

pub fn rand_chain2(map: &CombinatorialMap, r: &mut StdRng, k: i64) -> Chain2 {
    let c = (0..map.face_count()).map(|_| r.gen_range(-k..=k)).collect();
    Chain2::from_coeffs(map, c).unwrap()
}

pub fn rand_chain1(map: &CombinatorialMap, r: &mut StdRng, k: i64) -> Chain1 {
    let c: Vec<i64> = (0..map.edge_count()).map(|_| r.gen_range(-k..=k)).collect();
    Chain1::from_edge_coeffs(map, &c).unwrap()
}

/// Random `±1` on every edge.
pub fn rand_unit_flow(map: &CombinatorialMap, r: &mut StdRng) -> Chain1 {
    let c: Vec<i64> = (0..map.edge_count())
        .map(|_| if r.gen() { 1 } else { -1 })
        .collect();
    Chain1::from_edge_coeffs(map, &c).unwrap()
}

/// Vertex excess of a 1-chain computed from scratch.
pub fn excess(map: &CombinatorialMap, c: &Chain1) -> Vec<i64> {
    let mut ex = vec![0; map.vertex_count()];
    for h in 0..map.half_edge_count() {
        if h % 2 == 0 {
            ex[map.tgt(h)] += c.get(h);
            ex[map.src(h)] -= c.get(h);
        }
    }
    ex
}

/// Every 1-cycle `c` with `c[h]` between 0 and `f[h]` on each edge,
/// by plain enumeration of the per-edge product.
pub fn brute_circulations(map: &CombinatorialMap, f: &Chain1) -> Vec<Chain1> {
    let evens: Vec<usize> = (0..map.half_edge_count()).step_by(2).collect();
    let range = |h: usize| {
        let fv = f.get(h);
        if fv >= 0 {
            (0, fv)
        } else {
            (fv, 0)
        }
    };
    let mut out = Vec::new();
    let mut vals: Vec<i64> = evens.iter().map(|&h| range(h).0).collect();
    loop {
        let mut c = Chain1::zero(map);
        for (&h, &v) in evens.iter().zip(&vals) {
            c.set(h, v);
        }
        if excess(map, &c).iter().all(|&v| v == 0) {
            out.push(c);
        }
        let mut i = 0;
        loop {
            if i == evens.len() {
                return out;
            }
            let (lo, hi) = range(evens[i]);
            if vals[i] < hi {
                vals[i] += 1;
                break;
            }
            vals[i] = lo;
            i += 1;
        }
    }
}

/// Sum over even half-edges; generated maps pair `h` with `h ^ 1`.
pub fn pair(a: &Chain1, b: &Chain1) -> i64 {
    (0..a.all_coeffs().len())
        .step_by(2)
        .map(|h| a.get(h) * b.get(h))
        .sum()
}

/// Sum over all half-edges with both values positive.
pub fn pair_plus(f: &Chain1, k: &Chain1) -> i64 {
    (0..f.all_coeffs().len())
        .filter(|&h| f.get(h) > 0 && k.get(h) > 0)
        .map(|h| f.get(h) * k.get(h))
        .sum()
}

/// `min_t pair_plus(f, k + ∂⋆₂ t)` over integer potentials `t`, by steepest
/// descent over `t ± χ_X` (the objective is a sum of convex functions of
/// potential differences, so a local minimum in this neighbourhood is global).
pub fn coset_value(map: &CombinatorialMap, f: &Chain1, k: &Chain1) -> i64 {
    let n = map.vertex_count();
    let value = |t: &[i64]| -> i64 {
        (0..map.half_edge_count())
            .filter(|&h| f.get(h) > 0)
            .map(|h| f.get(h) * (k.get(h) + t[map.tgt(h)] - t[map.src(h)]).max(0))
            .sum()
    };
    let mut t = vec![0i64; n];
    let mut best = value(&t);
    loop {
        let mut improved = None;
        for mask in 1u32..(1 << n) {
            for s in [1i64, -1] {
                let cand: Vec<i64> = (0..n)
                    .map(|v| t[v] + if mask >> v & 1 == 1 { s } else { 0 })
                    .collect();
                let val = value(&cand);
                if val < best && improved.as_ref().is_none_or(|(b, _)| val < *b) {
                    improved = Some((val, cand));
                }
            }
        }
        match improved {
            Some((val, cand)) => {
                best = val;
                t = cand;
            }
            None => return best,
        }
    }
}
