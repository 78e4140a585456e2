//! Brute-force ground truth over finite boxes.
//!
//! A finite box can refute persistence but never prove it; the certificate
//! does the proving.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::budget::Limits;
use crate::error::{Error, Result};
use crate::grading::Multidegree;
use crate::ideal::MultigradedIdeal;
use crate::par::Execution;
use crate::poly::NumericalPolynomial;

pub const DEFAULT_HORIZON: u32 = 5;

/// Dense table of `H_I` over `lower ..= upper`, last coordinate fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertGrid {
    pub lower: Multidegree,
    pub upper: Multidegree,
    pub values: Vec<u64>,
}

/// All points of the box in lexicographic order.
pub fn box_points(lower: &Multidegree, upper: &Multidegree) -> Vec<Multidegree> {
    let mut points = vec![Vec::with_capacity(lower.len())];
    for (&lo, &hi) in lower.entries().iter().zip(upper.entries()) {
        points = points
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points.into_iter().map(Multidegree::new).collect()
}

fn box_volume(lower: &Multidegree, upper: &Multidegree) -> Result<u128> {
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch {
            expected: lower.len(),
            found: upper.len(),
        });
    }
    if !lower.le(upper) {
        return Err(Error::InvalidArgument(format!("empty box {lower}..{upper}")));
    }
    Ok(lower
        .entries()
        .iter()
        .zip(upper.entries())
        .map(|(&lo, &hi)| (hi - lo) as u128 + 1)
        .fold(1u128, |acc, w| acc.saturating_mul(w)))
}

fn checked_box(ideal: &MultigradedIdeal, lower: &Multidegree, upper: &Multidegree, limits: &Limits) -> Result<()> {
    ideal.ring().check_degree(lower)?;
    ideal.ring().check_degree(upper)?;
    let volume = box_volume(lower, upper)?;
    if volume > limits.max_monomials as u128 {
        return Err(Error::budget("grid points", volume, limits.max_monomials));
    }
    Ok(())
}

pub fn compute_grid(ideal: &MultigradedIdeal, lower: &Multidegree, upper: &Multidegree) -> Result<HilbertGrid> {
    compute_grid_with(ideal, lower, upper, &Limits::default(), Execution::default())
}

pub fn compute_grid_with(
    ideal: &MultigradedIdeal,
    lower: &Multidegree,
    upper: &Multidegree,
    limits: &Limits,
    exec: Execution,
) -> Result<HilbertGrid> {
    checked_box(ideal, lower, upper, limits)?;
    let points = box_points(lower, upper);
    let values = exec
        .map(&points, |e| ideal.hilbert_function_with(e, limits))
        .into_iter()
        .collect::<Result<Vec<u64>>>()?;
    Ok(HilbertGrid {
        lower: lower.clone(),
        upper: upper.clone(),
        values,
    })
}

impl HilbertGrid {
    pub fn points(&self) -> Vec<Multidegree> {
        box_points(&self.lower, &self.upper)
    }

    pub fn get(&self, e: &Multidegree) -> Option<u64> {
        if e.len() != self.lower.len() || !self.lower.le(e) || !e.le(&self.upper) {
            return None;
        }
        let mut index = 0usize;
        for i in 0..e.len() {
            let width = (self.upper[i] - self.lower[i]) as usize + 1;
            index = index * width + (e[i] - self.lower[i]) as usize;
        }
        self.values.get(index).copied()
    }

    /// Header `t1,...,ts,H`, one row per point in lexicographic order.
    pub fn to_csv(&self) -> String {
        let s = self.lower.len();
        let mut out = String::new();
        for i in 1..=s {
            let _ = write!(out, "t{i},");
        }
        out.push_str("H\n");
        for (e, h) in self.points().iter().zip(&self.values) {
            for x in e.entries() {
                let _ = write!(out, "{x},");
            }
            let _ = writeln!(out, "{h}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub point: Multidegree,
    pub observed: u64,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub holds: bool,
    /// Lexicographically smallest point where `H_I != P`.
    pub witness: Option<Counterexample>,
    pub points_checked: u64,
    pub note: String,
}

pub fn verify_persistence(
    ideal: &MultigradedIdeal,
    d: &Multidegree,
    p: &NumericalPolynomial,
    horizon: u32,
) -> Result<PersistenceReport> {
    verify_persistence_with(ideal, d, p, horizon, &Limits::default(), Execution::default())
}

/// Compares `H_I` with `P` on `[d, d + horizon]^s`.
pub fn verify_persistence_with(
    ideal: &MultigradedIdeal,
    d: &Multidegree,
    p: &NumericalPolynomial,
    horizon: u32,
    limits: &Limits,
    exec: Execution,
) -> Result<PersistenceReport> {
    if p.vars() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: p.vars(),
        });
    }
    let grid = compute_grid_with(ideal, d, &d.shifted(horizon), limits, exec)?;
    let mut witness = None;
    for (e, &h) in grid.points().iter().zip(&grid.values) {
        let expected = p.evaluate_degree(e)?;
        if expected != BigRational::from_integer(h.into()) {
            witness = Some(Counterexample {
                point: e.clone(),
                observed: h,
                expected: expected.to_string(),
            });
            break;
        }
    }
    Ok(PersistenceReport {
        holds: witness.is_none(),
        witness,
        points_checked: grid.values.len() as u64,
        note: format!(
            "finite check on [{d}, {}]; can refute but not prove persistence",
            d.shifted(horizon)
        ),
    })
}
