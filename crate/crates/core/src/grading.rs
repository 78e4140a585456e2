//! Ambient ring combinatorics for the Cox ring of `P^{n_1} x ... x P^{n_s}`.
//!
//! Variables are flattened block-major: block 1 first, and inside a block
//! `x[i][0], ..., x[i][n_i]`. Every variable of block `i` has multidegree `e_i`.
//!
//! The canonical order used for enumeration, sparse-row column indices and
//! file output lists the monomials of one multidegree from the lexicographically
//! largest exponent vector to the smallest (`x[1][0]` is the largest variable).
//! Position in [`enumerate_monomials`] is the canonical index.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Limits;
use crate::error::{Error, Result};

/// A point of `N^s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(entries: Vec<u32>) -> Self {
        Multidegree(entries)
    }

    pub fn zero(s: usize) -> Self {
        Multidegree(vec![0; s])
    }

    /// Rejects negative entries.
    pub fn from_signed(entries: &[i64]) -> Result<Self> {
        entries
            .iter()
            .map(|&e| {
                u32::try_from(e).map_err(|_| {
                    Error::InvalidDegree(format!("entry {e} is negative or too large"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Multidegree)
    }

    /// Parses a comma separated list such as `2,3`.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad degree entry '{t}' in '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_signed(&entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Multidegree)
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Multidegree) -> Multidegree {
        Multidegree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn with_entry(&self, axis: usize, value: u32) -> Multidegree {
        let mut v = self.0.clone();
        v[axis] = value;
        Multidegree(v)
    }

    pub fn shifted(&self, by: u32) -> Multidegree {
        Multidegree(self.0.iter().map(|e| e + by).collect())
    }
}

impl std::ops::Index<usize> for Multidegree {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Exponent vector over the flattened variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Exact-coefficient polynomial in the ambient ring, terms in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    terms: Vec<(Monomial, BigRational)>,
}

impl RingElement {
    /// Combines duplicate exponent vectors and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut terms: Vec<(Monomial, BigRational)> = terms.into_iter().collect();
        // descending exponent vectors = canonical order within one multidegree
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == m => *acc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        RingElement { terms: merged }
    }

    pub fn monomial(m: Monomial) -> Self {
        RingElement {
            terms: vec![(m, BigRational::one())],
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single monomial of a one-term element.
    pub fn as_single_term(&self) -> Option<&Monomial> {
        match self.terms.as_slice() {
            [(m, _)] => Some(m),
            _ => None,
        }
    }

    /// Single term with coefficient 1.
    pub fn is_monomial(&self) -> bool {
        matches!(self.terms.as_slice(), [(_, c)] if c.is_one())
    }
}

/// Block structure `(n_1, ..., n_s)` plus optional presentation relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    blocks: Vec<u32>,
    offsets: Vec<usize>,
    relations: Vec<RingElement>,
}

impl RingSpec {
    pub fn new(blocks: Vec<u32>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidRing("at least one factor is required".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0usize;
        for &n in &blocks {
            offsets.push(acc);
            acc += n as usize + 1;
        }
        offsets.push(acc);
        Ok(RingSpec {
            blocks,
            offsets,
            relations: Vec::new(),
        })
    }

    /// Adjoins the relations of a presentation `S = R / I_X`. Each must be homogeneous.
    pub fn with_relations(mut self, relations: Vec<RingElement>) -> Result<Self> {
        let mut kept = Vec::with_capacity(relations.len());
        for r in relations {
            if r.is_zero() {
                continue;
            }
            self.element_degree(&r)?;
            kept.push(r);
        }
        self.relations = kept;
        Ok(self)
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn relations(&self) -> &[RingElement] {
        &self.relations
    }

    /// The same block structure without relations.
    pub fn free(&self) -> RingSpec {
        RingSpec {
            blocks: self.blocks.clone(),
            offsets: self.offsets.clone(),
            relations: Vec::new(),
        }
    }

    /// Number of factors `s`.
    pub fn factors(&self) -> usize {
        self.blocks.len()
    }

    pub fn nvars(&self) -> usize {
        self.offsets[self.blocks.len()]
    }

    /// Range of flattened variable indices belonging to `block`.
    pub fn block_range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    pub fn check_degree(&self, e: &Multidegree) -> Result<()> {
        if e.len() != self.factors() {
            return Err(Error::DimensionMismatch {
                expected: self.factors(),
                found: e.len(),
            });
        }
        Ok(())
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.exponents().len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: m.exponents().len(),
            });
        }
        Ok(())
    }

    pub fn multidegree(&self, m: &Monomial) -> Multidegree {
        Multidegree(
            (0..self.factors())
                .map(|b| m.exponents()[self.block_range(b)].iter().sum())
                .collect(),
        )
    }

    /// Multidegree of a homogeneous element; `None` for zero.
    pub fn element_degree(&self, f: &RingElement) -> Result<Option<Multidegree>> {
        let mut degree: Option<Multidegree> = None;
        for (m, _) in f.terms() {
            self.check_monomial(m)?;
            let d = self.multidegree(m);
            match &degree {
                None => degree = Some(d),
                Some(prev) if *prev != d => {
                    return Err(Error::NotHomogeneous(format!(
                        "terms of degrees {prev} and {d} in {}",
                        self.format_element(f)
                    )))
                }
                _ => {}
            }
        }
        Ok(degree)
    }

    /// Canonical text form, e.g. `x[1][0]^2*x[2][3]`; `1` for the empty monomial.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut factors = Vec::new();
        for b in 0..self.factors() {
            for (j, v) in self.block_range(b).enumerate() {
                match m.exponents().get(v).copied().unwrap_or(0) {
                    0 => {}
                    1 => factors.push(format!("x[{}][{}]", b + 1, j)),
                    k => factors.push(format!("x[{}][{}]^{}", b + 1, j, k)),
                }
            }
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    pub fn format_element(&self, f: &RingElement) -> String {
        if f.is_zero() {
            return "0".into();
        }
        f.terms()
            .iter()
            .map(|(m, c)| format!("({c})*{}", self.format_monomial(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the canonical monomial text form. Repeated factors multiply.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let text = text.trim();
        let mut exps = vec![0u32; self.nvars()];
        if text == "1" {
            return Ok(Monomial(exps));
        }
        let bad = |why: &str| Error::Parse(format!("monomial '{text}': {why}"));
        for factor in text.split('*') {
            let factor = factor.trim();
            let rest = factor.strip_prefix("x[").ok_or_else(|| bad("expected x[i][j]"))?;
            let (block, rest) = rest.split_once("][").ok_or_else(|| bad("expected x[i][j]"))?;
            let (var, rest) = rest.split_once(']').ok_or_else(|| bad("unclosed bracket"))?;
            let power = match rest {
                "" => 1,
                r => r
                    .strip_prefix('^')
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| bad("bad exponent"))?,
            };
            let block: usize = block.parse().map_err(|_| bad("bad block index"))?;
            let var: usize = var.parse().map_err(|_| bad("bad variable index"))?;
            if block == 0 || block > self.factors() {
                return Err(bad("block index out of range (blocks are numbered from 1)"));
            }
            if var > self.blocks[block - 1] as usize {
                return Err(bad("variable index out of range"));
            }
            exps[self.offsets[block - 1] + var] += power;
        }
        Ok(Monomial(exps))
    }
}

/// Canonical comparison: by multidegree, then lex-larger exponent vectors first.
pub fn canonical_cmp(ring: &RingSpec, a: &Monomial, b: &Monomial) -> Ordering {
    ring.multidegree(a)
        .cmp(&ring.multidegree(b))
        .then_with(|| b.exponents().cmp(a.exponents()))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `dim_k S_e = prod_i C(n_i + e_i, n_i)` for the ring without relations.
pub fn graded_piece_dimension(ring: &RingSpec, e: &Multidegree) -> Result<BigUint> {
    ring.check_degree(e)?;
    Ok(ring
        .blocks()
        .iter()
        .zip(e.entries())
        .map(|(&n, &d)| binomial(n as u64 + d as u64, n as u64))
        .product())
}

/// `dim_k S_e` as a `u64`, or a budget error if it exceeds `limit`.
pub(crate) fn bounded_dimension(ring: &RingSpec, e: &Multidegree, limit: u64) -> Result<u64> {
    let dim = graded_piece_dimension(ring, e)?;
    match u64::try_from(&dim) {
        Ok(d) if d <= limit => Ok(d),
        _ => Err(Error::budget("monomial enumeration", dim, limit)),
    }
}

/// Exponent vectors of degree `k` in `vars` variables, lex-largest first.
fn block_monomials(vars: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(vars - 1, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, k, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// All monomials of multidegree `e`, in canonical order.
pub fn enumerate_monomials(ring: &RingSpec, e: &Multidegree, limits: &Limits) -> Result<Vec<Monomial>> {
    let dim = bounded_dimension(ring, e, limits.max_monomials)?;
    let per_block: Vec<Vec<Vec<u32>>> = (0..ring.factors())
        .map(|b| block_monomials(ring.block_range(b).len(), e[b]))
        .collect();
    let mut out: Vec<Vec<u32>> = vec![Vec::with_capacity(ring.nvars())];
    for block in &per_block {
        let mut next = Vec::with_capacity(out.len() * block.len());
        for prefix in &out {
            for part in block {
                let mut v = prefix.clone();
                v.extend_from_slice(part);
                next.push(v);
            }
        }
        out = next;
    }
    debug_assert_eq!(out.len() as u64, dim);
    Ok(out.into_iter().map(Monomial).collect())
}
