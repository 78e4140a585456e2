//! Macaulay representations, the growth operator `α^<d>`, and Gotzmann
//! representations of univariate Hilbert polynomials.

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::{binomial, Multidegree};
use crate::poly::NumericalPolynomial;

/// `α = C(κ(d), d) + C(κ(d-1), d-1) + ... + C(κ(1), 1)` with strictly
/// decreasing `κ`. `kappas[0]` is `κ(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacaulayRep {
    pub d: u32,
    pub kappas: Vec<u64>,
}

impl MacaulayRep {
    /// `(κ(j), j)` pairs from `j = d` down to `1`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.kappas
            .iter()
            .enumerate()
            .map(move |(i, &k)| (k, (self.d as usize - i) as u64))
    }

    pub fn value(&self) -> BigUint {
        self.terms().map(|(k, j)| binomial(k, j)).sum()
    }

    pub fn growth(&self) -> BigUint {
        self.terms().map(|(k, j)| binomial(k + 1, j + 1)).sum()
    }
}

fn check_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("Macaulay degree d must be positive".into()));
    }
    Ok(())
}

/// Largest `k >= j - 1` with `C(k, j) <= target`.
fn largest_kappa(target: &BigUint, j: u64) -> u64 {
    let mut lo = j - 1; // C(j-1, j) = 0 always fits
    let mut step = 1u64;
    // gallop for an upper bound
    let mut hi = loop {
        let probe = lo.saturating_add(step);
        if binomial(probe, j) > *target {
            break probe;
        }
        lo = probe;
        step = step.saturating_mul(2);
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if binomial(mid, j) <= *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Greedy Macaulay representation. `α = 0` gives `κ(j) = j - 1` throughout.
pub fn macaulay_rep(alpha: u64, d: u32) -> Result<MacaulayRep> {
    check_d(d)?;
    let mut rem = BigUint::from(alpha);
    let mut kappas = Vec::with_capacity(d as usize);
    for j in (1..=d as u64).rev() {
        let k = largest_kappa(&rem, j);
        rem -= binomial(k, j);
        kappas.push(k);
    }
    debug_assert!(rem.is_zero());
    debug_assert!(kappas.windows(2).all(|w| w[0] > w[1]));
    Ok(MacaulayRep { d, kappas })
}

/// `α^<d>`; `0^<d> = 0`.
pub fn macaulay_growth(alpha: u64, d: u32) -> Result<BigUint> {
    Ok(macaulay_rep(alpha, d)?.growth())
}

/// Cap on the number of terms of a Gotzmann representation.
pub const MAX_GOTZMANN_TERMS: usize = 1_000_000;

/// `P(t) = sum_{i=1}^{r} C(t + a_i - i + 1, a_i)` with `a_1 >= ... >= a_r >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GotzmannRep {
    pub degrees: Vec<u32>,
}

impl GotzmannRep {
    /// The Gotzmann number `r`.
    pub fn number(&self) -> usize {
        self.degrees.len()
    }

    /// Rebuilds the polynomial from its terms.
    pub fn to_polynomial(&self) -> NumericalPolynomial {
        self.degrees
            .iter()
            .enumerate()
            .fold(NumericalPolynomial::zero(1), |acc, (idx, &a)| {
                let i = idx as i64 + 1;
                acc.add(&NumericalPolynomial::binomial(a as i64 - i + 1, a))
            })
    }

    /// `(a, count)` runs, for compact display.
    pub fn runs(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &a in &self.degrees {
            match out.last_mut() {
                Some((prev, n)) if *prev == a => *n += 1,
                _ => out.push((a, 1)),
            }
        }
        out
    }
}

/// Greedy Gotzmann representation of a univariate Hilbert polynomial.
pub fn gotzmann_rep(p: &NumericalPolynomial) -> Result<GotzmannRep> {
    if p.vars() != 1 {
        return Err(Error::InvalidArgument(format!(
            "Gotzmann representation needs a univariate polynomial, got {} variables",
            p.vars()
        )));
    }
    if !p.is_integer_valued() {
        return Err(Error::NotHilbertPolynomial(format!("{p} is not integer-valued")));
    }
    let mut rem = p.clone();
    let mut degrees: Vec<u32> = Vec::new();
    while let Some((a, lead)) = rem.univariate_leading() {
        if lead.is_negative() {
            return Err(Error::NotHilbertPolynomial(format!(
                "{p}: remainder {rem} after {} terms has negative leading coefficient",
                degrees.len()
            )));
        }
        if a == 0 {
            let count = lead
                .to_integer()
                .to_usize()
                .filter(|c| degrees.len() + c <= MAX_GOTZMANN_TERMS)
                .ok_or_else(|| {
                    Error::NotHilbertPolynomial(format!(
                        "{p}: more than {MAX_GOTZMANN_TERMS} terms"
                    ))
                })?;
            degrees.extend(std::iter::repeat_n(0, count));
            break;
        }
        if degrees.len() >= MAX_GOTZMANN_TERMS {
            return Err(Error::NotHilbertPolynomial(format!(
                "{p}: more than {MAX_GOTZMANN_TERMS} terms"
            )));
        }
        let i = degrees.len() as i64 + 1;
        rem = rem.sub(&NumericalPolynomial::binomial(a as i64 - i + 1, a));
        degrees.push(a);
    }
    Ok(GotzmannRep { degrees })
}

pub fn gotzmann_number(p: &NumericalPolynomial) -> Result<usize> {
    Ok(gotzmann_rep(p)?.number())
}

/// `(d1, r)` where `r` is the Gotzmann number of `t -> P(d1, t)`.
pub fn min_certificate_point_2d(p: &NumericalPolynomial, d1: u32) -> Result<Multidegree> {
    if p.vars() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a bivariate polynomial, got {} variables",
            p.vars()
        )));
    }
    let slice = p.substitute(0, d1 as i64)?;
    let r = gotzmann_number(&slice)?;
    let r = u32::try_from(r).map_err(|_| Error::InvalidArgument("Gotzmann number overflows".into()))?;
    Ok(Multidegree::new(vec![d1, r]))
}
