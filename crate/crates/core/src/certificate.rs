//! Hypercube persistence certificates for constant Hilbert polynomials.
//!
//! For `I` in the Cox ring of `P^{n_1} x ... x P^{n_s}` generated in degrees
//! `<= d` with every `d_i >= max(m, 1)`: if `H_I = m` on the `2^s` vertices
//! `{d_i, d_i + 1}^s`, then `H_I = m` on all of `d + N^s`. The argument fixes
//! all coordinates but one, views the slice as a module `F/N` over the
//! remaining block's polynomial ring (`F = R^v`, basis in degree 0, `N`
//! generated in degrees `<= a`), and applies Gasharov's growth bound and
//! persistence axis by axis. [`replay_induction`] re-runs that argument
//! numerically.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::Limits;
use crate::error::{Error, Result};
use crate::grading::Multidegree;
use crate::ideal::{piece_dimension_u64, MultigradedIdeal};
use crate::macaulay::macaulay_growth;
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionReason {
    /// Some `d_i < m`, or some `d_i = 0`.
    DegreeBoundTooLow,
    /// A given generator has degree not `<= d`.
    GeneratorDegreeExceedsBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateVerdict {
    Certified,
    FailedAtVertex {
        vertex: Multidegree,
        observed: u64,
        expected: u64,
    },
    PreconditionViolated {
        reason: PreconditionReason,
    },
}

impl CertificateVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertificateVerdict::Certified)
    }
}

/// The `2^s` points `{d_i, d_i + 1}^s` in lexicographic order.
pub fn hypercube_vertices(d: &Multidegree) -> Vec<Multidegree> {
    let s = d.len();
    (0..1usize << s)
        .map(|mask| {
            Multidegree::new(
                (0..s)
                    .map(|i| d[i] + ((mask >> (s - 1 - i)) & 1) as u32)
                    .collect(),
            )
        })
        .collect()
}

/// Checks the two hypotheses on `(d, m)` and the generation bound.
pub fn check_preconditions(
    generation_bound: &Multidegree,
    d: &Multidegree,
    m: u64,
) -> Option<PreconditionReason> {
    if d.entries().iter().any(|&di| di == 0 || (di as u64) < m) {
        return Some(PreconditionReason::DegreeBoundTooLow);
    }
    if !generation_bound.le(d) {
        return Some(PreconditionReason::GeneratorDegreeExceedsBound);
    }
    None
}

/// Certificate check against an arbitrary Hilbert-function source. Exactly
/// `2^s` evaluations when the preconditions hold, none otherwise.
pub fn certify_with<F>(
    generation_bound: &Multidegree,
    d: &Multidegree,
    m: u64,
    exec: Execution,
    hilbert: F,
) -> Result<CertificateVerdict>
where
    F: Fn(&Multidegree) -> Result<u64> + Sync + Send,
{
    if generation_bound.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: generation_bound.len(),
            found: d.len(),
        });
    }
    if let Some(reason) = check_preconditions(generation_bound, d, m) {
        return Ok(CertificateVerdict::PreconditionViolated { reason });
    }
    let vertices = hypercube_vertices(d);
    let observed = exec.map(&vertices, &hilbert);
    for (vertex, value) in vertices.into_iter().zip(observed) {
        let value = value?;
        if value != m {
            return Ok(CertificateVerdict::FailedAtVertex {
                vertex,
                observed: value,
                expected: m,
            });
        }
    }
    Ok(CertificateVerdict::Certified)
}

pub fn certify_constant(ideal: &MultigradedIdeal, d: &Multidegree, m: u64) -> Result<CertificateVerdict> {
    certify_constant_with(ideal, d, m, &Limits::default(), Execution::default())
}

pub fn certify_constant_with(
    ideal: &MultigradedIdeal,
    d: &Multidegree,
    m: u64,
    limits: &Limits,
    exec: Execution,
) -> Result<CertificateVerdict> {
    ideal.ring().check_degree(d)?;
    certify_with(&ideal.generation_degree_bound(), d, m, exec, |e| {
        ideal.hilbert_function_with(e, limits)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceProvenance {
    /// Built by [`module_slice`] from an ideal.
    Engine,
    /// Supplied from outside (files, synthetic tests).
    #[default]
    External,
}

/// `M = ⊕_u (S/I)_{(fixed, u at axis)}` as a module `F/N` over the polynomial
/// ring of block `axis`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSlice {
    /// The fixed coordinates, in order, with the sliced axis removed.
    #[serde(default)]
    pub prefix: Vec<u32>,
    /// Index of the varying coordinate.
    #[serde(default)]
    pub axis: usize,
    /// Rank of `F`: `dim S` at the fixed coordinates with `0` on the axis.
    #[serde(default)]
    pub v: u64,
    /// `N` is generated in degrees `<= generator_degree_bound`.
    pub generator_degree_bound: u32,
    /// Largest degree of a basis element of `F`; always 0 for engine slices.
    #[serde(default)]
    pub l: u32,
    pub hf: BTreeMap<u32, u64>,
    #[serde(default)]
    pub provenance: SliceProvenance,
}

impl ModuleSlice {
    pub fn synthetic(hf: BTreeMap<u32, u64>, l: u32, generator_degree_bound: u32) -> Self {
        ModuleSlice {
            prefix: Vec::new(),
            axis: 0,
            v: 0,
            generator_degree_bound,
            l,
            hf,
            provenance: SliceProvenance::External,
        }
    }

    /// Full multidegree of the point `u` on this slice.
    pub fn degree_at(&self, u: u32) -> Multidegree {
        let mut e = self.prefix.clone();
        e.insert(self.axis, u);
        Multidegree::new(e)
    }
}

/// Slice along the last coordinate with the first `s - 1` fixed to `prefix`.
pub fn module_slice(ideal: &MultigradedIdeal, prefix: &[u32], u_max: u32) -> Result<ModuleSlice> {
    let axis = ideal.ring().factors() - 1;
    module_slice_along(ideal, axis, prefix, u_max, &Limits::default(), Execution::default())
}

pub fn module_slice_along(
    ideal: &MultigradedIdeal,
    axis: usize,
    fixed: &[u32],
    u_max: u32,
    limits: &Limits,
    exec: Execution,
) -> Result<ModuleSlice> {
    let s = ideal.ring().factors();
    if axis >= s {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range for {s} factors")));
    }
    if fixed.len() + 1 != s {
        return Err(Error::DimensionMismatch {
            expected: s - 1,
            found: fixed.len(),
        });
    }
    let a = ideal.generation_degree_bound()[axis];
    if u_max < a {
        return Err(Error::InvalidArgument(format!(
            "u_max {u_max} is below the generator degree bound {a} on this axis"
        )));
    }
    let mut slice = ModuleSlice {
        prefix: fixed.to_vec(),
        axis,
        v: 0,
        generator_degree_bound: a,
        l: 0,
        hf: BTreeMap::new(),
        provenance: SliceProvenance::Engine,
    };
    let base = slice.degree_at(0);
    slice.v = piece_dimension_u64(ideal.ring(), &base)?
        .ok_or_else(|| Error::budget("free module rank", "more than 2^64", u64::MAX))?;
    let us: Vec<u32> = (0..=u_max).collect();
    let values = exec.map(&us, |&u| ideal.hilbert_function_with(&slice.degree_at(u), limits));
    for (u, value) in us.into_iter().zip(values) {
        slice.hf.insert(u, value?);
    }
    Ok(slice)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GasharovOutcome {
    /// `dim M_{d+1} > (dim M_d)^<d-l>`: impossible for genuine module data.
    BoundViolated,
    GrowthStrict,
    MaximalGrowthPersists,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PersistenceCheck {
    /// `dim M_{d+2} = (dim M_{d+1})^<d-l+1>` holds in the data.
    Confirmed,
    /// The data disagrees although `N` is generated in degrees `<= d`.
    Contradicted,
    /// `N` is not known to be generated in degrees `<= d`.
    NotApplicable,
    /// No value at `d + 2`.
    NoData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GasharovReport {
    pub outcome: GasharovOutcome,
    pub d: u32,
    pub l: u32,
    pub current: u64,
    pub next: u64,
    #[serde(serialize_with = "big_as_string", deserialize_with = "big_from_string")]
    pub bound: BigUint,
    pub persistence: Option<PersistenceCheck>,
    pub provenance: SliceProvenance,
}

impl GasharovReport {
    /// Maximal growth with the persistence clause confirmed in the data.
    pub fn persists(&self) -> bool {
        self.outcome == GasharovOutcome::MaximalGrowthPersists
            && self.persistence == Some(PersistenceCheck::Confirmed)
    }
}

fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn big_from_string<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(serde::de::Error::custom)
}

fn hf_at(slice: &ModuleSlice, u: u32) -> Result<u64> {
    slice
        .hf
        .get(&u)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("slice has no value at degree {u}")))
}

/// Gasharov's bound `dim M_{d+1} <= (dim M_d)^<d-l>` and, on equality, the
/// persistence clause at `d + 2`.
pub fn gasharov_check(slice: &ModuleSlice, d: u32) -> Result<GasharovReport> {
    if d < slice.l + 1 {
        return Err(Error::InvalidArgument(format!(
            "degree {d} is below l + 1 = {}",
            slice.l + 1
        )));
    }
    let current = hf_at(slice, d)?;
    let next = hf_at(slice, d + 1)?;
    let bound = macaulay_growth(current, d - slice.l)?;
    let next_big = BigUint::from(next);
    let (outcome, persistence) = if next_big > bound {
        (GasharovOutcome::BoundViolated, None)
    } else if next_big < bound {
        (GasharovOutcome::GrowthStrict, None)
    } else {
        let check = if slice.generator_degree_bound > d {
            PersistenceCheck::NotApplicable
        } else {
            match slice.hf.get(&(d + 2)) {
                None => PersistenceCheck::NoData,
                Some(&after) => {
                    if BigUint::from(after) == macaulay_growth(next, d - slice.l + 1)? {
                        PersistenceCheck::Confirmed
                    } else {
                        PersistenceCheck::Contradicted
                    }
                }
            }
        };
        (GasharovOutcome::MaximalGrowthPersists, Some(check))
    };
    Ok(GasharovReport {
        outcome,
        d,
        l: slice.l,
        current,
        next,
        bound,
        persistence,
        provenance: slice.provenance,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayStep {
    pub axis: usize,
    pub prefix: Vec<u32>,
    pub report: GasharovReport,
}

/// Re-runs the axis-by-axis induction for a certified `(d, m)`.
///
/// Axis `j` is handled from last to first. Coordinates before `j` range over
/// `{d_i, d_i + 1}`; coordinates after `j` range over `d_i ..= d_i + horizon`
/// (the induction covers all of `d_i + N`, the replay samples it). Each slice
/// is checked at `d_j` with data up to `d_j + 2`.
pub fn replay_induction(
    ideal: &MultigradedIdeal,
    d: &Multidegree,
    horizon: u32,
    limits: &Limits,
    exec: Execution,
) -> Result<Vec<ReplayStep>> {
    ideal.ring().check_degree(d)?;
    let s = d.len();
    let mut steps = Vec::new();
    for axis in (0..s).rev() {
        let ranges: Vec<(u32, u32)> = (0..s)
            .filter(|&i| i != axis)
            .map(|i| {
                if i < axis {
                    (d[i], d[i] + 1)
                } else {
                    (d[i], d[i] + horizon)
                }
            })
            .collect();
        let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
        for (lo, hi) in ranges {
            prefixes = prefixes
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
        let slices = exec.map(&prefixes, |prefix| {
            module_slice_along(ideal, axis, prefix, d[axis] + 2, limits, Execution::Sequential)
        });
        for (prefix, slice) in prefixes.into_iter().zip(slices) {
            let report = gasharov_check(&slice?, d[axis])?;
            steps.push(ReplayStep { axis, prefix, report });
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::RingSpec;

    fn md(e: &[u32]) -> Multidegree {
        Multidegree::new(e.to_vec())
    }

    fn monomial_ideal(blocks: &[u32], gens: &[&str]) -> MultigradedIdeal {
        let r = RingSpec::new(blocks.to_vec()).unwrap();
        let ms = gens.iter().map(|g| r.parse_monomial(g).unwrap()).collect();
        MultigradedIdeal::from_monomials(r, ms).unwrap()
    }

    #[test]
    fn vertices() {
        assert_eq!(hypercube_vertices(&md(&[2, 2])), vec![md(&[2, 2]), md(&[2, 3]), md(&[3, 2]), md(&[3, 3])]);
        assert_eq!(
            hypercube_vertices(&md(&[7, 54])),
            vec![md(&[7, 54]), md(&[7, 55]), md(&[8, 54]), md(&[8, 55])]
        );
        assert_eq!(hypercube_vertices(&md(&[5])), vec![md(&[5]), md(&[6])]);
        assert_eq!(hypercube_vertices(&md(&[1, 1, 1])).len(), 8);
    }

    #[test]
    fn certify_examples() {
        let pts = monomial_ideal(&[1, 1], &["x[1][0]^2", "x[2][0]"]);
        assert_eq!(certify_constant(&pts, &md(&[2, 2]), 2).unwrap(), CertificateVerdict::Certified);

        let hyper = monomial_ideal(&[1, 1], &["x[1][0]"]);
        assert_eq!(
            certify_constant(&hyper, &md(&[1, 1]), 1).unwrap(),
            CertificateVerdict::FailedAtVertex { vertex: md(&[1, 1]), observed: 2, expected: 1 }
        );
        assert_eq!(
            certify_constant(&hyper, &md(&[1, 1]), 2).unwrap(),
            CertificateVerdict::PreconditionViolated { reason: PreconditionReason::DegreeBoundTooLow }
        );
    }

    #[test]
    fn generator_bound_precondition() {
        let i = monomial_ideal(&[1, 1], &["x[1][0]^3", "x[2][0]"]);
        assert_eq!(
            certify_constant(&i, &md(&[2, 2]), 1).unwrap(),
            CertificateVerdict::PreconditionViolated {
                reason: PreconditionReason::GeneratorDegreeExceedsBound
            }
        );
    }

    #[test]
    fn zero_polynomial_certificate() {
        // unit ideal: H == 0 everywhere
        let r = RingSpec::new(vec![1, 1]).unwrap();
        let unit = MultigradedIdeal::from_monomials(r.clone(), vec![crate::grading::Monomial::one(r.nvars())]).unwrap();
        assert!(certify_constant(&unit, &md(&[1, 1]), 0).unwrap().is_certified());
        assert_eq!(
            certify_constant(&unit, &md(&[0, 1]), 0).unwrap(),
            CertificateVerdict::PreconditionViolated { reason: PreconditionReason::DegreeBoundTooLow }
        );
    }

    #[test]
    fn exactly_two_to_the_s_evaluations() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let calls = AtomicUsize::new(0);
        let verdict = certify_with(&md(&[0, 0, 0]), &md(&[3, 3, 3]), 2, Execution::Parallel, |_| {
            calls.fetch_add(1, Ordering::SeqCst);
            Ok(2)
        })
        .unwrap();
        assert!(verdict.is_certified());
        assert_eq!(calls.load(Ordering::SeqCst), 8);

        let calls = AtomicUsize::new(0);
        certify_with(&md(&[0, 0]), &md(&[1, 1]), 3, Execution::Parallel, |_| {
            calls.fetch_add(1, Ordering::SeqCst);
            Ok(3)
        })
        .unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn smallest_failing_vertex_reported() {
        let verdict = certify_with(&md(&[0, 0]), &md(&[2, 2]), 2, Execution::Parallel, |e| {
            Ok(if e[0] == 3 { 5 } else if e[1] == 3 { 4 } else { 2 })
        })
        .unwrap();
        assert_eq!(
            verdict,
            CertificateVerdict::FailedAtVertex { vertex: md(&[2, 3]), observed: 4, expected: 2 }
        );
    }

    #[test]
    fn verdict_json() {
        let v = serde_json::to_string(&CertificateVerdict::Certified).unwrap();
        assert_eq!(v, r#"{"status":"certified"}"#);
        let f = CertificateVerdict::FailedAtVertex { vertex: md(&[1, 1]), observed: 2, expected: 1 };
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"status":"failed_at_vertex","vertex":[1,1],"observed":2,"expected":1}"#
        );
        let p = CertificateVerdict::PreconditionViolated { reason: PreconditionReason::DegreeBoundTooLow };
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"status":"precondition_violated","reason":"degree_bound_too_low"}"#
        );
    }

    #[test]
    fn slice_examples() {
        let ip = monomial_ideal(
            &[5, 5],
            &[
                "x[1][0]", "x[1][2]", "x[1][3]", "x[2][0]", "x[2][2]", "x[2][3]",
                "x[1][1]^2", "x[1][1]*x[1][4]", "x[2][1]^2", "x[2][1]*x[2][4]",
            ],
        );
        let s = module_slice(&ip, &[2], 5).unwrap();
        assert_eq!((s.v, s.generator_degree_bound, s.l), (21, 2, 0));
        for u in 1..=5 {
            assert_eq!(s.hf[&u], 4 * u as u64 + 8);
        }

        let zero = MultigradedIdeal::zero(RingSpec::new(vec![1, 1]).unwrap());
        let s = module_slice(&zero, &[1], 3).unwrap();
        assert_eq!((s.v, s.generator_degree_bound), (2, 0));
        assert_eq!(s.hf.values().copied().collect::<Vec<_>>(), vec![2, 4, 6, 8]);

        let full = monomial_ideal(&[1, 1], &["x[1][0]", "x[1][1]"]);
        let s = module_slice(&full, &[1], 2).unwrap();
        assert!(s.hf.values().all(|&h| h == 0));

        assert!(module_slice(&full, &[1, 1], 2).is_err());
        let pts = monomial_ideal(&[1, 1], &["x[1][0]^2", "x[2][0]^3"]);
        assert!(module_slice(&pts, &[1], 2).is_err());
    }

    #[test]
    fn gasharov_examples() {
        let pts = monomial_ideal(&[1, 1], &["x[1][0]^2", "x[2][0]"]);
        let s = module_slice(&pts, &[2], 4).unwrap();
        assert!(s.hf.values().all(|&h| h == 2));
        let r = gasharov_check(&s, 2).unwrap();
        assert_eq!(r.outcome, GasharovOutcome::MaximalGrowthPersists);
        assert_eq!(r.persistence, Some(PersistenceCheck::Confirmed));
        assert!(r.persists());

        let zero = MultigradedIdeal::zero(RingSpec::new(vec![1, 1]).unwrap());
        let s = module_slice(&zero, &[1], 3).unwrap();
        let r = gasharov_check(&s, 1).unwrap();
        assert_eq!(r.outcome, GasharovOutcome::GrowthStrict);
        assert_eq!((r.current, r.next, r.bound.clone()), (4, 6, BigUint::from(10u32)));

        let synthetic = ModuleSlice::synthetic([(3, 1), (4, 5)].into_iter().collect(), 0, 0);
        let r = gasharov_check(&synthetic, 3).unwrap();
        assert_eq!(r.outcome, GasharovOutcome::BoundViolated);
        assert_eq!(r.provenance, SliceProvenance::External);
    }

    #[test]
    fn gasharov_preconditions() {
        let synthetic = ModuleSlice::synthetic([(0, 1), (1, 1)].into_iter().collect(), 0, 0);
        assert!(gasharov_check(&synthetic, 0).is_err());
        assert!(gasharov_check(&synthetic, 1).is_err()); // no value at 2
        let shifted = ModuleSlice::synthetic([(2, 1), (3, 1)].into_iter().collect(), 2, 0);
        assert!(gasharov_check(&shifted, 2).is_err());
        let r = gasharov_check(&ModuleSlice::synthetic([(3, 1), (4, 1)].into_iter().collect(), 2, 9), 3).unwrap();
        assert_eq!(r.persistence, Some(PersistenceCheck::NotApplicable));
        let r = gasharov_check(&ModuleSlice::synthetic([(3, 1), (4, 1)].into_iter().collect(), 0, 0), 3).unwrap();
        assert_eq!(r.persistence, Some(PersistenceCheck::NoData));
        let r = gasharov_check(&ModuleSlice::synthetic([(3, 1), (4, 1), (5, 2)].into_iter().collect(), 0, 0), 3).unwrap();
        assert_eq!(r.persistence, Some(PersistenceCheck::Contradicted));
    }

    #[test]
    fn replay_on_certified_instance() {
        let i = monomial_ideal(&[1, 2, 1], &["x[1][0]^2", "x[2][0]", "x[2][1]", "x[3][0]"]);
        let d = md(&[2, 2, 2]);
        assert!(certify_constant(&i, &d, 2).unwrap().is_certified());
        let steps = replay_induction(&i, &d, 2, &Limits::default(), Execution::Parallel).unwrap();
        // axis 2: 4 prefixes; axis 1: 2 * 3; axis 0: 3 * 3
        assert_eq!(steps.len(), 4 + 6 + 9);
        assert!(steps.iter().all(|s| s.report.persists()), "{steps:#?}");
    }
}
