//! Homogeneous ideals and their multigraded Hilbert functions.
//!
//! Two evaluation paths:
//!
//! * counting: when every generator (and every relation of the ring) is a
//!   monomial, `H_I(e)` is the number of degree-`e` monomials divisible by no
//!   generator. A depth-first search over exponents counts them, pruning any
//!   branch that no generator can still divide with a closed-form binomial
//!   product.
//! * rank: otherwise `H_I(e) = dim S_e - rank M_e`, where the rows of `M_e`
//!   are all products `u·g` of degree `e` expanded in the canonical monomial
//!   basis. Relations of a presented ring are adjoined to the generators, so
//!   ideals of `S = R / I_X` are evaluated through their lift to `R`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::budget::Limits;
use crate::error::{Error, Result};
use crate::grading::{
    bounded_dimension, enumerate_monomials, graded_piece_dimension, Monomial, Multidegree,
    RingElement, RingSpec,
};
use crate::linalg::{rank, RankMethod, RationalRow};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertValue {
    pub degree: Multidegree,
    pub value: u64,
    /// `false` when a modular rank was used; the value is then only an upper bound.
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub struct MultigradedIdeal {
    ring: RingSpec,
    generators: Vec<RingElement>,
    generator_degrees: Vec<Multidegree>,
    relation_degrees: Vec<Multidegree>,
    is_monomial: bool,
}

impl MultigradedIdeal {
    /// Zero generators are dropped; an empty list is the zero ideal.
    pub fn new(ring: RingSpec, generators: Vec<RingElement>) -> Result<Self> {
        let mut kept = Vec::with_capacity(generators.len());
        let mut generator_degrees = Vec::with_capacity(generators.len());
        for g in generators {
            if let Some(d) = ring.element_degree(&g)? {
                generator_degrees.push(d);
                kept.push(g);
            }
        }
        let relation_degrees = ring
            .relations()
            .iter()
            .filter_map(|r| ring.element_degree(r).ok().flatten())
            .collect();
        let is_monomial = kept.iter().all(RingElement::is_monomial);
        Ok(MultigradedIdeal {
            ring,
            generators: kept,
            generator_degrees,
            relation_degrees,
            is_monomial,
        })
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::new(ring, Vec::new()).expect("the zero ideal is always valid")
    }

    pub fn from_monomials(ring: RingSpec, monomials: Vec<Monomial>) -> Result<Self> {
        Self::new(ring, monomials.into_iter().map(RingElement::monomial).collect())
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> &[Multidegree] {
        &self.generator_degrees
    }

    /// Every generator is a single term with coefficient 1.
    pub fn is_monomial(&self) -> bool {
        self.is_monomial
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether the lifted ideal (relations plus generators) is monomial, so
    /// the counting path applies.
    fn lifted_is_monomial(&self) -> bool {
        self.is_monomial && self.ring.relations().iter().all(RingElement::is_monomial)
    }

    fn lifted_monomials(&self) -> Vec<&Monomial> {
        self.ring
            .relations()
            .iter()
            .chain(&self.generators)
            .filter_map(RingElement::as_single_term)
            .collect()
    }

    /// Componentwise maximum of the degrees of the given generators, together
    /// with the ring relations, since Hilbert data is that of the lifted ideal.
    pub fn generation_degree_bound(&self) -> Multidegree {
        self.generator_degrees
            .iter()
            .chain(&self.relation_degrees)
            .fold(Multidegree::zero(self.ring.factors()), |acc, d| acc.join(d))
    }

    /// Some generator divides `m`. Only defined for monomial ideals.
    pub fn is_member(&self, m: &Monomial) -> Result<bool> {
        if !self.lifted_is_monomial() {
            return Err(Error::NotMonomial);
        }
        self.ring.check_monomial(m)?;
        Ok(self.lifted_monomials().iter().any(|g| g.divides(m)))
    }

    /// `dim_k (S/I)_e` with default limits and exact arithmetic.
    pub fn hilbert_function(&self, e: &Multidegree) -> Result<u64> {
        self.hilbert_function_with(e, &Limits::default())
    }

    pub fn hilbert_function_with(&self, e: &Multidegree, limits: &Limits) -> Result<u64> {
        Ok(self.hilbert_value(e, limits, RankMethod::Exact)?.value)
    }

    /// Full evaluation result. `method` only matters on the rank path.
    pub fn hilbert_value(
        &self,
        e: &Multidegree,
        limits: &Limits,
        method: RankMethod,
    ) -> Result<HilbertValue> {
        self.ring.check_degree(e)?;
        if self.lifted_is_monomial() {
            let value = self.count_standard_monomials(e, limits)?;
            return Ok(HilbertValue {
                degree: e.clone(),
                value,
                verified: true,
            });
        }
        let value = self.hilbert_function_by_rank(e, limits, method)?;
        Ok(HilbertValue {
            degree: e.clone(),
            value,
            verified: method == RankMethod::Exact,
        })
    }

    /// The rank path, even for monomial ideals.
    pub fn hilbert_function_by_rank(
        &self,
        e: &Multidegree,
        limits: &Limits,
        method: RankMethod,
    ) -> Result<u64> {
        self.ring.check_degree(e)?;
        let dim = bounded_dimension(&self.ring, e, limits.max_monomials)?;
        let lifted: Vec<(&RingElement, Multidegree)> = self
            .ring
            .relations()
            .iter()
            .zip(self.relation_degrees.iter().cloned())
            .chain(self.generators.iter().zip(self.generator_degrees.iter().cloned()))
            .filter_map(|(g, d)| e.checked_sub(&d).map(|rest| (g, rest)))
            .collect();
        if lifted.is_empty() {
            return Ok(dim);
        }

        let row_count: BigUint = lifted
            .iter()
            .map(|(_, rest)| graded_piece_dimension(&self.ring, rest))
            .sum::<Result<BigUint>>()?;
        if row_count > BigUint::from(limits.max_matrix_rows) {
            return Err(Error::budget("coefficient matrix rows", row_count, limits.max_matrix_rows));
        }

        let basis = enumerate_monomials(&self.ring, e, limits)?;
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<RationalRow> = Vec::new();
        for (g, rest) in &lifted {
            for u in enumerate_monomials(&self.ring, rest, limits)? {
                let mut row: RationalRow = g
                    .terms()
                    .iter()
                    .map(|(m, c)| (index[&u.mul(m)], c.clone()))
                    .collect();
                row.sort_by_key(|(col, _)| *col);
                rows.push(row);
            }
        }
        let r = rank(rows, method) as u64;
        Ok(dim - r)
    }

    fn count_standard_monomials(&self, e: &Multidegree, limits: &Limits) -> Result<u64> {
        let gens: Vec<&Monomial> = self
            .lifted_monomials()
            .into_iter()
            .filter(|g| self.ring.multidegree(g).le(e))
            .collect();
        let mut search = CountingSearch::new(&self.ring, &gens, limits.max_monomials);
        let mut rem: Vec<u32> = e.entries().to_vec();
        let live: Vec<usize> = (0..gens.len()).collect();
        let total = search.count(0, &mut rem, &live)?;
        u64::try_from(total).map_err(|_| Error::budget("Hilbert value", total, u64::MAX))
    }
}

struct CountingSearch<'a> {
    gens: Vec<&'a [u32]>,
    /// One past the last variable with a nonzero exponent.
    ends: Vec<usize>,
    block_of: Vec<usize>,
    block_start: Vec<usize>,
    block_end: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl<'a> CountingSearch<'a> {
    fn new(ring: &RingSpec, gens: &[&'a Monomial], max_nodes: u64) -> Self {
        let mut block_of = Vec::with_capacity(ring.nvars());
        let mut block_start = Vec::with_capacity(ring.factors());
        let mut block_end = Vec::with_capacity(ring.factors());
        for b in 0..ring.factors() {
            let range = ring.block_range(b);
            block_start.push(range.start);
            block_end.push(range.end);
            block_of.extend(range.map(|_| b));
        }
        let ends = gens
            .iter()
            .map(|g| {
                g.exponents()
                    .iter()
                    .rposition(|&x| x > 0)
                    .map_or(0, |p| p + 1)
            })
            .collect();
        CountingSearch {
            gens: gens.iter().map(|g| g.exponents()).collect(),
            ends,
            block_of,
            block_start,
            block_end,
            nodes: 0,
            max_nodes,
        }
    }

    /// Monomials completing the current prefix with no further constraint.
    fn free_completions(&self, var: usize, rem: &[u32]) -> Result<u128> {
        let overflow = || Error::budget("Hilbert value", "more than 2^128", u64::MAX);
        let mut total: u128 = 1;
        for (b, &r) in rem.iter().enumerate() {
            let vars_left = self.block_end[b] - self.block_start[b].max(var).min(self.block_end[b]);
            if vars_left == 0 {
                if r != 0 {
                    return Ok(0);
                }
                continue;
            }
            let vars_left = vars_left as u64;
            let c = binom_u128(r as u64 + vars_left - 1, vars_left - 1).ok_or_else(overflow)?;
            total = total.checked_mul(c).ok_or_else(overflow)?;
        }
        Ok(total)
    }

    fn count(&mut self, var: usize, rem: &mut [u32], live: &[usize]) -> Result<u128> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::budget("standard monomial search nodes", self.nodes, self.max_nodes));
        }
        if live.iter().any(|&g| self.ends[g] <= var) {
            // a generator is already fully matched
            return Ok(0);
        }
        if live.is_empty() {
            return self.free_completions(var, rem);
        }
        let b = self.block_of[var];
        let last_in_block = var + 1 == self.block_end[b];
        let choices = if last_in_block { rem[b]..=rem[b] } else { 0..=rem[b] };
        let mut total: u128 = 0;
        let mut next_live = Vec::with_capacity(live.len());
        for k in choices {
            next_live.clear();
            next_live.extend(live.iter().copied().filter(|&g| self.gens[g][var] <= k));
            rem[b] -= k;
            let sub = self.count(var + 1, rem, &next_live);
            rem[b] += k;
            total += sub?;
        }
        Ok(total)
    }
}

fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

/// `graded_piece_dimension` as `u64` when it fits.
pub fn piece_dimension_u64(ring: &RingSpec, e: &Multidegree) -> Result<Option<u64>> {
    Ok(graded_piece_dimension(ring, e)?.to_u64())
}
