//! Rank of sparse coefficient matrices.
//!
//! Rows are lists of `(column, value)` pairs sorted by column. The exact path
//! clears denominators once and then eliminates over the integers without
//! division: `row <- (b/g)·row - (a/g)·pivot` followed by division by the row
//! content, so entries stay primitive. The modular path works over a random
//! prime above `2^30` and can only under-count the rank.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type RationalRow = Vec<(usize, BigRational)>;
type IntRow = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    Exact,
    /// Rank over `F_p` for a prime drawn from the seed. A lower bound on the rational rank.
    Modular { seed: u64 },
}

pub fn rank(rows: Vec<RationalRow>, method: RankMethod) -> usize {
    match method {
        RankMethod::Exact => exact_rank(rows.into_iter().map(clear_denominators).collect()),
        RankMethod::Modular { seed } => modular_rank(&rows, seed),
    }
}

fn clear_denominators(row: RationalRow) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    row.into_iter()
        .map(|(col, c)| {
            let scaled = c.numer() * (&lcm / c.denom());
            (col, scaled)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let negate = row.first().is_some_and(|(_, c)| c.sign() == Sign::Minus);
    if g.is_zero() {
        return;
    }
    if !g.is_one() || negate {
        let g = if negate { -g } else { g };
        for (_, c) in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `(b/g)·row - (a/g)·pivot` where `a`, `b` are the leading coefficients.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &row[0].1;
    let b = &pivot[0].1;
    let g = a.gcd(b);
    let row_mul = b / &g;
    let piv_mul = a / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (col, val) = if take_row {
            let v = &row[i].1 * &row_mul;
            i += 1;
            (row[i - 1].0, v)
        } else if take_piv {
            let v = -(&pivot[j].1 * &piv_mul);
            j += 1;
            (pivot[j - 1].0, v)
        } else {
            let v = &row[i].1 * &row_mul - &pivot[j].1 * &piv_mul;
            i += 1;
            j += 1;
            (row[i - 1].0, v)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn exact_rank(mut rows: Vec<IntRow>) -> usize {
    // sparsest first: unit rows become pivots before anything can fill them in
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, IntRow> = HashMap::new();
    for mut row in rows {
        make_primitive(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    row = eliminate(&row, p);
                    make_primitive(&mut row);
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn random_prime(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let candidate = rng.random_range((1u64 << 30) + 1..(1u64 << 31)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn modular_rank(rows: &[RationalRow], seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, reduced) = loop {
        let p = random_prime(&mut rng);
        let mut ok = true;
        let reduced: Vec<Vec<(usize, u64)>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(col, c)| {
                        let den = reduce_mod(c.denom(), p);
                        if den == 0 {
                            ok = false;
                            return None;
                        }
                        let v = reduce_mod(c.numer(), p) * pow_mod(den, p - 2, p) % p;
                        (v != 0).then_some((*col, v))
                    })
                    .collect()
            })
            .collect();
        if ok {
            break (p, reduced);
        }
    };
    let mut rows = reduced;
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut row in rows {
        while let Some(&(lead, lead_val)) = row.first() {
            match pivots.get(&lead) {
                Some(piv) => {
                    // pivots are monic
                    let factor = lead_val;
                    let mut merged: std::collections::BTreeMap<usize, u64> =
                        row.iter().copied().collect();
                    for &(c, v) in piv {
                        let e = merged.entry(c).or_insert(0);
                        *e = (*e + p - factor * v % p) % p;
                    }
                    row = merged.into_iter().filter(|&(_, v)| v != 0).collect();
                }
                None => {
                    let inv = pow_mod(lead_val, p - 2, p);
                    for (_, v) in row.iter_mut() {
                        *v = *v * inv % p;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}
