#![allow(dead_code)]

use multihilb::{Monomial, MultigradedIdeal, Multidegree, RingSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn md(e: &[u32]) -> Multidegree {
    Multidegree::new(e.to_vec())
}

pub fn ring(blocks: &[u32]) -> RingSpec {
    RingSpec::new(blocks.to_vec()).unwrap()
}

pub fn monomial_ideal(blocks: &[u32], gens: &[&str]) -> MultigradedIdeal {
    let r = ring(blocks);
    let ms = gens.iter().map(|g| r.parse_monomial(g).unwrap()).collect();
    MultigradedIdeal::from_monomials(r, ms).unwrap()
}

pub fn bilex_ideal() -> MultigradedIdeal {
    monomial_ideal(
        &[5, 5],
        &[
            "x[1][0]", "x[1][2]", "x[1][3]", "x[2][0]", "x[2][2]", "x[2][3]",
            "x[1][1]^2", "x[1][1]*x[1][4]", "x[2][1]^2", "x[2][1]*x[2][4]",
        ],
    )
}

/// All exponent vectors of `n + 1` variables summing to `e`, any order.
fn compositions(vars: usize, e: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![e]];
    }
    let mut out = Vec::new();
    for first in 0..=e {
        for mut rest in compositions(vars - 1, e - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every monomial of multidegree `e`, built without the library.
pub fn brute_force_monomials(blocks: &[u32], e: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (&n, &ei) in blocks.iter().zip(e) {
        let parts = compositions(n as usize + 1, ei);
        out = out
            .into_iter()
            .flat_map(|p| {
                parts.iter().map(move |c| {
                    let mut q = p.clone();
                    q.extend_from_slice(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Standard-monomial count by exhaustive divisibility checks.
pub fn brute_force_hilbert(blocks: &[u32], gens: &[Vec<u32>], e: &[u32]) -> u64 {
    brute_force_monomials(blocks, e)
        .iter()
        .filter(|m| !gens.iter().any(|g| g.iter().zip(m.iter()).all(|(a, b)| a <= b)))
        .count() as u64
}

pub fn exponent_lists(ideal: &MultigradedIdeal) -> Vec<Vec<u32>> {
    ideal
        .generators()
        .iter()
        .map(|g| g.as_single_term().expect("monomial generator").exponents().to_vec())
        .collect()
}

pub fn ideal_from_exponents(blocks: &[u32], gens: Vec<Vec<u32>>) -> MultigradedIdeal {
    let r = ring(blocks);
    MultigradedIdeal::from_monomials(r, gens.into_iter().map(Monomial::new).collect()).unwrap()
}

/// Random exponent vector with per-block degree `<= max_deg`.
fn random_monomial(rng: &mut ChaCha8Rng, blocks: &[u32], max_deg: u32) -> Vec<u32> {
    let mut exps = Vec::new();
    for &n in blocks {
        let deg = rng.random_range(0..=max_deg);
        let mut part = vec![0u32; n as usize + 1];
        for _ in 0..deg {
            let j = rng.random_range(0..=n as usize);
            part[j] += 1;
        }
        exps.extend(part);
    }
    exps
}

/// Reproducible corpus of monomial ideals with `s` in `{1, 2, 3}`, `n_i <= 2`
/// and per-block generator degrees `<= 4`. About two thirds contain a pure
/// power of every variable but the last in each block, so their Hilbert
/// polynomial is constant; the rest are unconstrained.
pub fn random_corpus(seed: u64, count: usize) -> Vec<MultigradedIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let s = rng.random_range(1..=3usize);
            let blocks: Vec<u32> = (0..s).map(|_| rng.random_range(0..=2u32)).collect();
            let nvars: usize = blocks.iter().map(|&n| n as usize + 1).sum();
            let mut gens = Vec::new();
            let finite = rng.random_bool(0.67);
            let mut offset = 0;
            for &n in &blocks {
                for j in 0..n as usize {
                    if finite || rng.random_bool(0.4) {
                        let a = match rng.random_range(0..10u32) {
                            0..=5 => 1,
                            6..=8 => 2,
                            _ => rng.random_range(3..=4),
                        };
                        let mut g = vec![0u32; nvars];
                        g[offset + j] = a;
                        gens.push(g);
                    }
                }
                offset += n as usize + 1;
            }
            let extra = rng.random_range(0..=3usize);
            for _ in 0..extra {
                let g = random_monomial(&mut rng, &blocks, 4);
                if g.iter().any(|&x| x > 0) || rng.random_bool(0.05) {
                    gens.push(g);
                }
            }
            ideal_from_exponents(&blocks, gens)
        })
        .collect()
}

/// `(blocks, generator exponent lists)`.
pub type Shape = (Vec<u32>, Vec<Vec<u32>>);

/// Shapes with `s <= max_s`, `n_i <= max_n`, per-block generator degree `<= max_deg`.
pub fn ideal_shape(
    max_s: usize,
    max_n: u32,
    max_deg: u32,
    max_gens: usize,
) -> impl Strategy<Value = Shape> {
    prop::collection::vec(0..=max_n, 1..=max_s).prop_flat_map(move |blocks| {
        let per_block: Vec<_> = blocks
            .iter()
            .map(|&n| prop::collection::vec(0..=max_deg, n as usize + 1))
            .collect();
        let monomial = per_block.prop_map(move |parts| {
            parts
                .into_iter()
                .flat_map(|mut part| {
                    // cap the block degree by lowering the largest entry
                    while part.iter().sum::<u32>() > max_deg {
                        let k = (0..part.len()).max_by_key(|&k| part[k]).unwrap();
                        part[k] -= 1;
                    }
                    part
                })
                .collect::<Vec<u32>>()
        });
        (Just(blocks), prop::collection::vec(monomial, 0..=max_gens))
    })
}

pub fn degree_for(blocks: &[u32], max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, blocks.len())
}
