//! Versioned JSON form of a generated approximant.

use std::sync::Arc;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{ApproximantDescriptor, Family};
use crate::approx::{Approximant, PolyExpApproximant};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, PolyExpSum, RationalPolynomial};
use crate::grid::{GridApproximant, GridTable};
use crate::oracle::PrecisionContext;
use crate::series::{build_erf_series, build_gauss_g, build_gauss_h, RationalFunctionApproximant};
use crate::spline::build_spline;
use crate::sqrt::{build_sqrt, SqrtForm};
use crate::subinterval::build_subinterval;
use crate::transition::{taylor, PiecewiseApproximant};

pub const SCHEMA: &str = "erfkit-approximant/1";

/// One decay rate k with its polynomial, coefficients lowest power first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyExpTerm {
    pub rate: String,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub resolution: String,
    pub x_max: f64,
    /// erf(k Delta) for k = 0..=k_max, enough digits to round-trip the binary value
    pub cumulative: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximantDocument {
    pub schema: String,
    pub descriptor: ApproximantDescriptor,
    pub label: String,
    /// "poly_exp", "sqrt", "rational" or "grid"
    pub kind: String,
    /// poly_exp: terms of sqrt(pi) f; sqrt: terms of the radicand S with f = sqrt(S/pi)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<PolyExpTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<String>,
    pub formula: String,
}

fn poly_strings(p: &RationalPolynomial) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn poly_from(v: &[String]) -> Result<RationalPolynomial> {
    Ok(RationalPolynomial::new(v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?))
}

fn terms_of(form: &PolyExpSum) -> Vec<PolyExpTerm> {
    form.terms().map(|(k, p)| PolyExpTerm { rate: format_rational(k), coefficients: poly_strings(p) }).collect()
}

fn form_from(terms: &[PolyExpTerm]) -> Result<PolyExpSum> {
    let mut s = PolyExpSum::zero();
    for t in terms {
        let k = parse_rational(&t.rate)?;
        if k < 0 {
            return Err(Error::Usage(format!("negative decay rate {}", t.rate)));
        }
        s.add_term(k, poly_from(&t.coefficients)?);
    }
    Ok(s)
}

/// Decimal digits that reproduce a binary float of `bits` exactly.
fn roundtrip_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

fn full(v: &Float) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.to_string_radix(10, Some(roundtrip_digits(v.prec())))
}

const GRID_X_MAX: f64 = 10.0;

impl ApproximantDocument {
    pub fn from_descriptor(desc: &ApproximantDescriptor) -> Result<Self> {
        desc.validate()?;
        let n = desc.order;
        let mut doc = ApproximantDocument {
            schema: SCHEMA.into(),
            descriptor: desc.clone(),
            label: desc.label(),
            kind: String::new(),
            terms: None,
            numerator: None,
            denominator: None,
            grid: None,
            transition: None,
            formula: String::new(),
        };
        let poly_exp = |form: PolyExpSum, doc: &mut ApproximantDocument| {
            doc.kind = "poly_exp".into();
            doc.formula = format!("(1/sqrt(pi)) [{}]", form.render());
            doc.terms = Some(terms_of(&form));
        };
        match desc.family {
            Family::Spline => poly_exp(build_spline(n).form, &mut doc),
            Family::Subinterval => poly_exp(build_subinterval(n, desc.subintervals.unwrap_or(1))?.form, &mut doc),
            Family::Taylor => poly_exp(taylor(n)?.form(), &mut doc),
            Family::Series => poly_exp(build_erf_series(n, desc.terms.unwrap_or(2))?.form(), &mut doc),
            Family::Sqrt => {
                let f = build_sqrt(n);
                doc.kind = "sqrt".into();
                doc.formula = f.render();
                doc.terms = Some(terms_of(&f.radicand()));
            }
            Family::GaussG | Family::GaussH => {
                let r = if desc.family == Family::GaussG { build_gauss_g(n) } else { build_gauss_h(n) };
                doc.kind = "rational".into();
                doc.formula = r.render();
                doc.numerator = Some(poly_strings(&r.numerator));
                doc.denominator = Some(poly_strings(&r.denominator));
            }
            Family::Grid => {
                let res = desc.resolution()?;
                let g = GridApproximant::new(n, &res, GRID_X_MAX, &desc.ctx()?)?;
                doc.kind = "grid".into();
                doc.formula = format!(
                    "erf(k D) + (order-{n} spline rule over [k D, x]), k = floor(x/D), D = {}",
                    format_rational(&res)
                );
                doc.grid = Some(GridDocument {
                    resolution: format_rational(&res),
                    x_max: GRID_X_MAX,
                    cumulative: g.table.cumulative.iter().map(full).collect(),
                });
            }
        }
        if desc.transition.is_some() {
            let inner = approximant_from_document_inner(&doc, &desc.ctx()?)?;
            if let Some(x) = desc.transition_point(inner.as_ref())? {
                doc.formula = format!("{} for 0 <= x <= x_o; 1 for x > x_o, x_o = {}", doc.formula, x.to_f64());
                doc.transition = Some(full(&x));
            }
        }
        Ok(doc)
    }
}

fn approximant_from_document_inner(doc: &ApproximantDocument, ctx: &PrecisionContext) -> Result<Arc<dyn Approximant>> {
    let missing = |what: &str| Error::Usage(format!("{} document lacks {what}", doc.kind));
    Ok(match doc.kind.as_str() {
        "poly_exp" => {
            let form = form_from(doc.terms.as_deref().ok_or_else(|| missing("terms"))?)?;
            Arc::new(PolyExpApproximant { label: doc.label.clone(), form })
        }
        "sqrt" => {
            let s = form_from(doc.terms.as_deref().ok_or_else(|| missing("terms"))?)?;
            let pi_q0 = s.poly(&Rational::new()).map(|p| p.coeff(0)).unwrap_or_default();
            let pi_terms =
                PolyExpSum::from_terms(s.terms().filter(|(k, _)| **k != 0).map(|(k, p)| (k.clone(), p.clone())));
            Arc::new(SqrtForm { base_order: Some(doc.descriptor.order), pi_q0, pi_terms })
        }
        "rational" => Arc::new(RationalFunctionApproximant {
            label: doc.label.clone(),
            numerator: poly_from(doc.numerator.as_deref().ok_or_else(|| missing("numerator"))?)?,
            denominator: poly_from(doc.denominator.as_deref().ok_or_else(|| missing("denominator"))?)?,
        }),
        "grid" => {
            let g = doc.grid.as_ref().ok_or_else(|| missing("grid"))?;
            let prec = ctx.bits();
            let cumulative = g
                .cumulative
                .iter()
                .map(|s| ctx.parse(s).map(|v| Float::with_val(prec, v)))
                .collect::<Result<Vec<_>>>()?;
            if cumulative.is_empty() {
                return Err(missing("grid values"));
            }
            let mut c = vec![Float::new(prec)];
            for w in cumulative.windows(2) {
                c.push(Float::with_val(prec, &w[1] - &w[0]));
            }
            let table = GridTable {
                resolution: parse_rational(&g.resolution)?,
                c,
                cumulative,
                digits: ctx.working_digits(),
                exhausted_from: None,
            };
            Arc::new(GridApproximant { order: doc.descriptor.order, table })
        }
        other => return Err(Error::Usage(format!("unknown document kind {other:?}"))),
    })
}

/// Rebuilds an approximant from its JSON document alone.
pub fn approximant_from_document(doc: &ApproximantDocument) -> Result<Arc<dyn Approximant>> {
    if doc.schema != SCHEMA {
        return Err(Error::Usage(format!("unsupported schema {:?}, expected {SCHEMA}", doc.schema)));
    }
    let ctx = doc.descriptor.ctx()?;
    let inner = approximant_from_document_inner(doc, &ctx)?;
    match &doc.transition {
        Some(x) => Ok(Arc::new(PiecewiseApproximant::new(inner, ctx.parse(x)?)?)),
        None => Ok(inner),
    }
}
