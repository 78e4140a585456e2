//! JSON shapes for ideals and polynomials.
//!
//! Ideal:
//!
//! ```json
//! {"blocks":[1,1],"relations":[],"generators":["x[1][0]^2",{"terms":[{"coeff":"1/2","exps":[0,1,1,0]}]}]}
//! ```
//!
//! Polynomial: `{"vars":2,"terms":[{"exps":[1,1],"coeff":"1"}]}` with optional
//! `validated_lower` / `validated_upper`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::{Monomial, Multidegree, RingElement, RingSpec};
use crate::ideal::MultigradedIdeal;
use crate::poly::{NumericalPolynomial, ValidatedRegion};

/// Exact rational from `"p/q"`, `"-7"` or a finite decimal like `"2.5"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{frac}", whole.trim_start_matches(['-', '+']));
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, scale);
        return Ok(if negative { -r } else { r });
    }
    t.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Text(String),
    Integer(i64),
}

impl CoeffJson {
    fn value(&self) -> Result<BigRational> {
        match self {
            CoeffJson::Text(t) => parse_rational(t),
            CoeffJson::Integer(n) => Ok(BigRational::from_integer((*n).into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Monomial(String),
    Terms { terms: Vec<TermJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealJson {
    pub blocks: Vec<u32>,
    #[serde(default)]
    pub relations: Vec<ElementJson>,
    #[serde(default)]
    pub generators: Vec<ElementJson>,
}

fn element_from_json(ring: &RingSpec, e: &ElementJson) -> Result<RingElement> {
    match e {
        ElementJson::Monomial(text) => Ok(RingElement::monomial(ring.parse_monomial(text)?)),
        ElementJson::Terms { terms } => {
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                let m = Monomial::new(t.exps.clone());
                ring.check_monomial(&m)?;
                out.push((m, t.coeff.value()?));
            }
            Ok(RingElement::from_terms(out))
        }
    }
}

/// Monomials with coefficient 1 are written in canonical text form.
fn element_to_json(ring: &RingSpec, f: &RingElement) -> ElementJson {
    if f.is_monomial() {
        if let Some(m) = f.as_single_term() {
            return ElementJson::Monomial(ring.format_monomial(m));
        }
    }
    ElementJson::Terms {
        terms: f
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                coeff: CoeffJson::Text(format_rational(c)),
                exps: m.exponents().to_vec(),
            })
            .collect(),
    }
}

impl IdealJson {
    pub fn into_ideal(&self) -> Result<MultigradedIdeal> {
        let free = RingSpec::new(self.blocks.clone())?;
        let relations = self
            .relations
            .iter()
            .map(|e| element_from_json(&free, e))
            .collect::<Result<Vec<_>>>()?;
        let ring = free.with_relations(relations)?;
        let generators = self
            .generators
            .iter()
            .map(|e| element_from_json(&ring, e))
            .collect::<Result<Vec<_>>>()?;
        MultigradedIdeal::new(ring, generators)
    }

    pub fn from_ideal(ideal: &MultigradedIdeal) -> Self {
        let ring = ideal.ring();
        IdealJson {
            blocks: ring.blocks().to_vec(),
            relations: ring.relations().iter().map(|r| element_to_json(ring, r)).collect(),
            generators: ideal.generators().iter().map(|g| element_to_json(ring, g)).collect(),
        }
    }
}

pub fn parse_ideal(json: &str) -> Result<MultigradedIdeal> {
    let raw: IdealJson = serde_json::from_str(json).map_err(|e| Error::Parse(format!("ideal: {e}")))?;
    raw.into_ideal()
}

pub fn ideal_to_json(ideal: &MultigradedIdeal) -> String {
    serde_json::to_string_pretty(&IdealJson::from_ideal(ideal)).expect("ideal JSON serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub exps: Vec<u32>,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub vars: usize,
    pub terms: Vec<PolyTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validated_lower: Option<Multidegree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validated_upper: Option<Multidegree>,
}

impl PolynomialJson {
    pub fn into_polynomial(&self) -> Result<NumericalPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exps.clone(), t.coeff.value()?)))
            .collect::<Result<Vec<_>>>()?;
        let p = NumericalPolynomial::from_terms(self.vars, terms)?;
        Ok(match (&self.validated_lower, &self.validated_upper) {
            (Some(lower), Some(upper)) => p.with_validated_region(ValidatedRegion {
                lower: lower.clone(),
                upper: upper.clone(),
            }),
            _ => p,
        })
    }

    pub fn from_polynomial(p: &NumericalPolynomial) -> Self {
        let region = p.validated_region();
        PolynomialJson {
            vars: p.vars(),
            terms: p
                .terms()
                .iter()
                .rev()
                .map(|(e, c)| PolyTermJson {
                    exps: e.clone(),
                    coeff: CoeffJson::Text(format_rational(c)),
                })
                .collect(),
            validated_lower: region.map(|r| r.lower.clone()),
            validated_upper: region.map(|r| r.upper.clone()),
        }
    }
}

pub fn parse_polynomial(json: &str) -> Result<NumericalPolynomial> {
    let raw: PolynomialJson =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("polynomial: {e}")))?;
    raw.into_polynomial()
}

/// Univariate polynomial from ascending coefficients, given as `"2,1"` or `"[2, 1]"`.
pub fn parse_coefficient_list(text: &str) -> Result<NumericalPolynomial> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(NumericalPolynomial::zero(1));
    }
    let coeffs = inner
        .split(',')
        .map(|c| parse_rational(c.trim().trim_matches('"')))
        .collect::<Result<Vec<_>>>()?;
    Ok(NumericalPolynomial::from_coefficients(&coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("2.25").unwrap(), q(9, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn ideal_round_trip() {
        let text = r#"{"blocks":[5],
            "relations":[{"terms":[{"coeff":"1","exps":[1,0,0,0,0,1]},{"coeff":"-1","exps":[0,1,0,0,1,0]},{"coeff":"1","exps":[0,0,1,1,0,0]}]}],
            "generators":["x[1][0]"]}"#;
        let ideal = parse_ideal(text).unwrap();
        assert_eq!(ideal.ring().relations().len(), 1);
        assert!(ideal.is_monomial());
        let again = parse_ideal(&ideal_to_json(&ideal)).unwrap();
        assert_eq!(again.ring().relations(), ideal.ring().relations());
        assert_eq!(again.generators(), ideal.generators());
    }

    #[test]
    fn ideal_errors() {
        assert!(parse_ideal("{").is_err());
        assert!(parse_ideal(r#"{"blocks":[1],"generators":["x[2][0]"]}"#).is_err());
        assert!(parse_ideal(r#"{"blocks":[1],"generators":[{"terms":[{"coeff":"1","exps":[1]}]}]}"#).is_err());
        let inhomogeneous = r#"{"blocks":[1],"generators":[{"terms":[{"coeff":"1","exps":[1,0]},{"coeff":"1","exps":[2,0]}]}]}"#;
        assert!(parse_ideal(inhomogeneous).is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let text = r#"{"vars":2,"terms":[{"exps":[1,1],"coeff":"1"},{"exps":[1,0],"coeff":2},{"exps":[0,1],"coeff":"2"},{"exps":[0,0],"coeff":"4"}]}"#;
        let p = parse_polynomial(text).unwrap();
        assert_eq!(p.to_string(), "t1*t2+2*t1+2*t2+4");
        let json = serde_json::to_string(&PolynomialJson::from_polynomial(&p)).unwrap();
        assert_eq!(parse_polynomial(&json).unwrap(), p);
    }

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_coefficient_list("2,1").unwrap().to_string(), "t1+2");
        assert_eq!(parse_coefficient_list("[18, 9]").unwrap().to_string(), "9*t1+18");
        assert!(parse_coefficient_list("").unwrap().is_zero());
        assert!(parse_coefficient_list("1,a").is_err());
    }
}
