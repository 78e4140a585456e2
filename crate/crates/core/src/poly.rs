//! Integer-valued polynomials in `t1..ts` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::budget::Limits;
use crate::error::{Error, Result};
use crate::grading::Multidegree;
use crate::ideal::MultigradedIdeal;
use crate::par::Execution;

/// Box `[lower, upper]` on which a recovered polynomial was checked point by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedRegion {
    pub lower: Multidegree,
    pub upper: Multidegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
    validated: Option<ValidatedRegion>,
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl NumericalPolynomial {
    pub fn zero(vars: usize) -> Self {
        NumericalPolynomial {
            vars,
            terms: BTreeMap::new(),
            validated: None,
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        Self::from_terms(vars, [(vec![0; vars], c)]).expect("exponent length matches")
    }

    /// Sums duplicate exponents and drops zeros. No integer-valuedness check.
    pub fn from_terms(
        vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars {
                return Err(Error::DimensionMismatch {
                    expected: vars,
                    found: exps.len(),
                });
            }
            *map.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(NumericalPolynomial {
            vars,
            terms: map,
            validated: None,
        })
    }

    /// Like [`from_terms`](Self::from_terms) but rejects polynomials that are
    /// not integer-valued on the test grid `[0, deg+1]^s`.
    pub fn from_terms_checked(
        vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<Self> {
        let p = Self::from_terms(vars, terms)?;
        if !p.is_integer_valued() {
            return Err(Error::InvalidArgument(format!("{p} is not integer-valued")));
        }
        Ok(p)
    }

    /// Univariate polynomial from ascending coefficients `[c0, c1, ...]`.
    pub fn from_coefficients(coeffs: &[BigRational]) -> Self {
        Self::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
        .expect("univariate")
    }

    /// Univariate `C(t + shift, a) = (t+shift)(t+shift-1)...(t+shift-a+1) / a!`.
    pub fn binomial(shift: i64, a: u32) -> Self {
        let mut acc = Self::constant(1, BigRational::one());
        let mut fact = BigInt::one();
        for j in 0..a as i64 {
            let factor = Self::from_coefficients(&[int(shift - j), BigRational::one()]);
            acc = acc.mul(&factor);
            fact *= j + 1;
        }
        acc.scale(&BigRational::from_integer(fact).recip())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn validated_region(&self) -> Option<&ValidatedRegion> {
        self.validated.as_ref()
    }

    pub fn with_validated_region(mut self, region: ValidatedRegion) -> Self {
        self.validated = Some(region);
        self
    }

    /// Degree in each variable.
    pub fn degree_bounds(&self) -> Vec<u32> {
        let mut out = vec![0; self.vars];
        for exps in self.terms.keys() {
            for (o, e) in out.iter_mut().zip(exps) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .get(&vec![0; self.vars])
                .cloned(),
            _ => None,
        }
    }

    pub fn evaluate(&self, point: &[i64]) -> Result<BigRational> {
        let point: Vec<BigRational> = point.iter().map(|&x| int(x)).collect();
        self.evaluate_rational(&point)
    }

    pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                term *= num_traits::pow(x.clone(), e as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn evaluate_degree(&self, e: &Multidegree) -> Result<BigRational> {
        let point: Vec<i64> = e.entries().iter().map(|&x| x as i64).collect();
        self.evaluate(&point)
    }

    /// Sampled check on the grid `[0, deg_i + 1]` per axis.
    pub fn is_integer_valued(&self) -> bool {
        let bounds: Vec<i64> = self.degree_bounds().iter().map(|&d| d as i64 + 1).collect();
        grid_points(&vec![0; self.vars], &bounds)
            .iter()
            .all(|p| self.evaluate(p).map(|v| v.is_integer()).unwrap_or(false))
    }

    /// Fixes variable `var` to `value`, removing it.
    pub fn substitute(&self, var: usize, value: i64) -> Result<NumericalPolynomial> {
        if var >= self.vars {
            return Err(Error::InvalidArgument(format!(
                "variable t{} does not exist in a polynomial in {} variables",
                var + 1,
                self.vars
            )));
        }
        let x = int(value);
        Self::from_terms(
            self.vars - 1,
            self.terms.iter().map(|(exps, c)| {
                let mut rest = exps.clone();
                let e = rest.remove(var);
                (rest, c * num_traits::pow(x.clone(), e as usize))
            }),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        Self::from_terms(
            self.vars,
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
        .expect("same variable count")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
            .expect("same variable count")
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.push((e, ca * cb));
            }
        }
        Self::from_terms(self.vars, out).expect("same variable count")
    }

    /// Leading degree and coefficient of a univariate polynomial.
    pub(crate) fn univariate_leading(&self) -> Option<(u32, BigRational)> {
        debug_assert_eq!(self.vars, 1);
        self.terms.iter().next_back().map(|(e, c)| (e[0], c.clone()))
    }

    /// Coefficients in the basis `prod_i C(t_i + a_i, a_i)`, keyed by `(a_1..a_s)`.
    pub fn to_binomial_basis(&self) -> BTreeMap<Vec<u32>, BigRational> {
        let bounds = self.degree_bounds();
        let shape: Vec<usize> = bounds.iter().map(|&d| d as usize + 1).collect();
        // values at t_i = -1, -2, ..., -(deg_i + 1)
        let lows: Vec<i64> = vec![0; self.vars];
        let highs: Vec<i64> = bounds.iter().map(|&d| d as i64).collect();
        let mut data: Vec<BigRational> = grid_points(&lows, &highs)
            .iter()
            .map(|idx| {
                let p: Vec<i64> = idx.iter().map(|&j| -(j + 1)).collect();
                self.evaluate(&p).expect("arity matches")
            })
            .collect();
        for axis in 0..self.vars {
            transform_axis(&mut data, &shape, axis, |fiber| {
                // f(-j) = sum_{a<j} b_a (-1)^a C(j-1, a)
                let mut b: Vec<BigRational> = Vec::with_capacity(fiber.len());
                for j in 1..=fiber.len() {
                    let mut acc = fiber[j - 1].clone();
                    for (a, ba) in b.iter().enumerate() {
                        let sign = if a % 2 == 0 { int(1) } else { int(-1) };
                        acc -= ba * sign * int(small_binomial(j as i64 - 1, a as i64));
                    }
                    let a = j - 1;
                    if a % 2 == 1 {
                        acc = -acc;
                    }
                    b.push(acc);
                }
                b
            });
        }
        let mut out = BTreeMap::new();
        for (idx, c) in grid_points(&lows, &highs).into_iter().zip(data) {
            if !c.is_zero() {
                out.insert(idx.iter().map(|&x| x as u32).collect(), c);
            }
        }
        out
    }

    pub fn binomial_display(&self) -> String {
        let basis = self.to_binomial_basis();
        if basis.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (a, c) in basis.iter().rev() {
            let factors: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, &ai)| ai > 0)
                .map(|(i, &ai)| format!("C(t{}+{ai},{ai})", i + 1))
                .collect();
            parts.push(signed_term(c, &factors.join("*")));
        }
        join_terms(parts)
    }
}

fn small_binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn signed_term(c: &BigRational, body: &str) -> (bool, String) {
    let neg = c.is_negative();
    let mag = c.abs();
    let text = if body.is_empty() {
        mag.to_string()
    } else if mag.is_one() {
        body.to_string()
    } else {
        format!("{mag}*{body}")
    };
    (neg, text)
}

fn join_terms(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, text)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push('-'),
            (_, false) => out.push('+'),
        }
        out.push_str(&text);
    }
    out
}

impl fmt::Display for NumericalPolynomial {
    /// Terms by descending total degree, then descending exponents: `t1*t2+2*t1+2*t2+4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let parts = terms
            .into_iter()
            .map(|(exps, c)| {
                let body: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| match e {
                        1 => format!("t{}", i + 1),
                        _ => format!("t{}^{e}", i + 1),
                    })
                    .collect();
                signed_term(c, &body.join("*"))
            })
            .collect();
        write!(f, "{}", join_terms(parts))
    }
}

/// All integer points of the box `[lows, highs]`, last coordinate fastest.
pub(crate) fn grid_points(lows: &[i64], highs: &[i64]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::with_capacity(lows.len())];
    for (&lo, &hi) in lows.iter().zip(highs) {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for p in &out {
            for x in lo..=hi {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Applies a 1-D linear map to every fiber of a row-major tensor along `axis`.
fn transform_axis<F>(data: &mut [BigRational], shape: &[usize], axis: usize, f: F)
where
    F: Fn(&[BigRational]) -> Vec<BigRational>,
{
    let stride: usize = shape[axis + 1..].iter().product();
    let len = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let mut fiber = Vec::with_capacity(len);
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * len * stride + inner;
            fiber.clear();
            fiber.extend((0..len).map(|k| data[base + k * stride].clone()));
            for (k, v) in f(&fiber).into_iter().enumerate() {
                data[base + k * stride] = v;
            }
        }
    }
}

/// Newton interpolation through `(nodes[k], values[k])`, returned as ascending
/// monomial coefficients.
fn newton_to_monomial(nodes: &[BigRational], values: &[BigRational]) -> Vec<BigRational> {
    let n = nodes.len();
    let mut dd: Vec<BigRational> = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&nodes[k] - &nodes[k - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs: Vec<BigRational> = vec![dd[n - 1].clone()];
    for k in (0..n - 1).rev() {
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &nodes[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs.truncate(n);
    coeffs
}

/// The unique polynomial with degree `<= bounds[i]` in `t_i` matching every
/// value of a full product grid. Extra grid points are used as checks.
pub fn interpolate_on_grid(
    values: &BTreeMap<Vec<i64>, BigRational>,
    bounds: &[u32],
) -> Result<NumericalPolynomial> {
    let s = bounds.len();
    let mut axes: Vec<Vec<i64>> = vec![Vec::new(); s];
    for p in values.keys() {
        if p.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: p.len(),
            });
        }
        for (axis, &x) in axes.iter_mut().zip(p) {
            axis.push(x);
        }
    }
    for axis in axes.iter_mut() {
        axis.sort_unstable();
        axis.dedup();
    }
    let full: usize = axes.iter().map(Vec::len).product();
    if values.is_empty() || full != values.len() {
        return Err(Error::GridTooSmall(format!(
            "{} values do not form a full product grid",
            values.len()
        )));
    }
    for (i, (axis, &b)) in axes.iter().zip(bounds).enumerate() {
        if axis.len() < b as usize + 1 {
            return Err(Error::GridTooSmall(format!(
                "axis t{} has {} coordinates, degree bound {b} needs {}",
                i + 1,
                axis.len(),
                b + 1
            )));
        }
    }

    let shape: Vec<usize> = bounds.iter().map(|&b| b as usize + 1).collect();
    let nodes: Vec<Vec<i64>> = axes
        .iter()
        .zip(&shape)
        .map(|(axis, &n)| axis[..n].to_vec())
        .collect();
    let idx_lows = vec![0i64; s];
    let idx_highs: Vec<i64> = shape.iter().map(|&n| n as i64 - 1).collect();
    let index_points = grid_points(&idx_lows, &idx_highs);
    let mut data: Vec<BigRational> = index_points
        .iter()
        .map(|idx| {
            let p: Vec<i64> = idx
                .iter()
                .enumerate()
                .map(|(a, &k)| nodes[a][k as usize])
                .collect();
            values[&p].clone()
        })
        .collect();
    for (axis, coords) in nodes.iter().enumerate() {
        let axis_nodes: Vec<BigRational> = coords.iter().map(|&x| int(x)).collect();
        transform_axis(&mut data, &shape, axis, |fiber| {
            newton_to_monomial(&axis_nodes, fiber)
        });
    }
    let poly = NumericalPolynomial::from_terms(
        s,
        index_points
            .into_iter()
            .zip(data)
            .map(|(idx, c)| (idx.iter().map(|&k| k as u32).collect(), c)),
    )?;
    for (p, v) in values {
        let got = poly.evaluate(p)?;
        if &got != v {
            return Err(Error::NotPolynomial(format!(
                "value {v} at {p:?} disagrees with interpolant {poly} (gives {got})"
            )));
        }
    }
    Ok(poly)
}

/// Retries allowed by [`hilbert_polynomial`] before giving up.
pub const STABILIZATION_ATTEMPTS: u32 = 6;

fn degree_of(p: &[i64]) -> Multidegree {
    Multidegree::new(p.iter().map(|&x| x as u32).collect())
}

fn evaluate_box(
    ideal: &MultigradedIdeal,
    lows: &[i64],
    highs: &[i64],
    limits: &Limits,
    exec: Execution,
) -> Result<BTreeMap<Vec<i64>, BigRational>> {
    let points = grid_points(lows, highs);
    let values = exec.map(&points, |p| ideal.hilbert_function_with(&degree_of(p), limits));
    points
        .into_iter()
        .zip(values)
        .map(|(p, v)| Ok((p, int(v? as i64))))
        .collect()
}

fn agrees(poly: &NumericalPolynomial, values: &BTreeMap<Vec<i64>, BigRational>) -> Result<bool> {
    for (p, v) in values {
        if &poly.evaluate(p)? != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recovers the Hilbert polynomial of a monomial ideal.
///
/// Starts at offset `D = generation bound + (n_1..n_s)`, interpolates on
/// `D + [0, n]`, and validates on `D + 1 + [0, n + 1]`. On mismatch `D` is
/// doubled. After success the lower corner is walked down axis by axis while
/// the new faces still agree, and the checked box is recorded on the result.
pub fn hilbert_polynomial(
    ideal: &MultigradedIdeal,
    limits: &Limits,
    exec: Execution,
) -> Result<NumericalPolynomial> {
    if !ideal.is_monomial() || ideal.ring().relations().iter().any(|r| !r.is_monomial()) {
        return Err(Error::NotMonomial);
    }
    let ring = ideal.ring();
    let s = ring.factors();
    let n: Vec<i64> = ring.blocks().iter().map(|&b| b as i64).collect();
    let bound = ideal.generation_degree_bound();
    let mut offset: Vec<i64> = bound
        .entries()
        .iter()
        .zip(&n)
        .map(|(&g, &ni)| g as i64 + ni)
        .collect();
    let bounds: Vec<u32> = ring.blocks().to_vec();

    for _ in 0..STABILIZATION_ATTEMPTS {
        let highs: Vec<i64> = offset.iter().zip(&n).map(|(d, ni)| d + ni).collect();
        let values = evaluate_box(ideal, &offset, &highs, limits, exec)?;
        let poly = interpolate_on_grid(&values, &bounds)?;

        let check_lows: Vec<i64> = offset.iter().map(|d| d + 1).collect();
        let check_highs: Vec<i64> = check_lows.iter().zip(&n).map(|(d, ni)| d + ni + 1).collect();
        let check = evaluate_box(ideal, &check_lows, &check_highs, limits, exec)?;
        if !agrees(&poly, &check)? {
            offset = offset.iter().map(|&d| (2 * d).max(1)).collect();
            continue;
        }

        let mut lower = offset.clone();
        let upper = check_highs;
        for axis in 0..s {
            while lower[axis] > 0 {
                let mut lows = lower.clone();
                let mut highs = upper.clone();
                lows[axis] -= 1;
                highs[axis] = lows[axis];
                let face = evaluate_box(ideal, &lows, &highs, limits, exec)?;
                if !agrees(&poly, &face)? {
                    break;
                }
                lower[axis] -= 1;
            }
        }
        return Ok(poly.with_validated_region(ValidatedRegion {
            lower: degree_of(&lower),
            upper: degree_of(&upper),
        }));
    }
    Err(Error::StabilizationNotDetected {
        attempts: STABILIZATION_ATTEMPTS,
    })
}
