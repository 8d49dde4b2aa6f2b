//! Approximants over m equal sub-intervals of [0, x].

use rug::Rational;

use crate::approx::{Approximant, Evaluator, PolyExpEvaluator};
use crate::error::{Error, Result};
use crate::exact::{hermite_table, PolyExpSum, RationalPolynomial};
use crate::oracle::PrecisionContext;
use crate::spline::spline_segment;

#[derive(Clone, Debug)]
pub struct SubintervalApproximant {
    pub order: usize,
    pub subintervals: usize,
    /// sqrt(pi) f_{n,m}; rates i^2/m^2
    pub form: PolyExpSum,
}

pub fn build_subinterval(n: usize, m: usize) -> Result<SubintervalApproximant> {
    if m == 0 {
        return Err(Error::Domain("need at least one sub-interval".into()));
    }
    let table = hermite_table(n);
    let mut form = PolyExpSum::zero();
    for i in 0..m {
        let lo = Rational::from((i as u64, m as u64));
        let hi = Rational::from((i as u64 + 1, m as u64));
        form = form.add(&spline_segment(n, &lo, &hi, &table));
    }
    Ok(SubintervalApproximant { order: n, subintervals: m, form })
}

impl Approximant for SubintervalApproximant {
    fn label(&self) -> String {
        format!("subinterval n={} m={}", self.order, self.subintervals)
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(PolyExpEvaluator::new(&self.form, ctx)))
    }
}

/// One printed line: (x * scale) * e^{-rate x^2} * [1 + b1 x^2 + b2 x^4 + ...].
pub(crate) struct PrintedLine {
    pub rate: (i64, i64),
    pub scale: (i64, i64),
    pub bracket: &'static [(i64, i64)],
}

impl PrintedLine {
    pub(crate) fn poly(&self) -> RationalPolynomial {
        let s = Rational::from(self.scale);
        let mut v = vec![Rational::new()];
        for (i, b) in self.bracket.iter().enumerate() {
            if i > 0 {
                v.push(Rational::new());
            }
            v.push(Rational::from(*b) * s.clone());
        }
        RationalPolynomial::new(v)
    }
}

/// Transcription of the printed sixteen sub-interval, fourth order expression.
pub(crate) const PRINTED_F4_16: &[PrintedLine] = &[
    PrintedLine { rate: (0, 1), scale: (1, 16), bracket: &[(1, 1), (-16, 73728), (16, 1321205760)] },
    PrintedLine {
        rate: (1, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (47, 27525120), (-1, 5284823040), (1, 4058744094720)],
    },
    PrintedLine {
        rate: (1, 64),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (187, 27525120), (-1, 1321205760), (1, 253671505920)],
    },
    PrintedLine {
        rate: (9, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (1261, 82575360), (-1, 587202560), (3, 150323855360)],
    },
    PrintedLine {
        rate: (1, 16),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (249, 9175040), (-1, 330301440), (1, 15854469120)],
    },
    PrintedLine {
        rate: (25, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (389, 9175040), (-5, 1056964608), (125, 811748818944)],
    },
    PrintedLine {
        rate: (9, 64),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (5041, 82575360), (-1, 146800640), (3, 9395240960)],
    },
    PrintedLine {
        rate: (49, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (2287, 27525120), (-7, 754974720), (343, 579820584960)],
    },
    PrintedLine {
        rate: (1, 4),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (2987, 27525120), (-1, 82575360), (1, 990904320)],
    },
    PrintedLine {
        rate: (81, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (11341, 82575360), (-9, 587202560), (243, 150323855360)],
    },
    PrintedLine {
        rate: (25, 64),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (4667, 27525120), (-5, 264241152), (125, 50734301184)],
    },
    PrintedLine {
        rate: (121, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (5647, 27525120), (-121, 5284823040), (14641, 4058744094720)],
    },
    PrintedLine {
        rate: (9, 16),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (20161, 82575360), (-1, 36700160), (3, 587202560)],
    },
    PrintedLine {
        rate: (169, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (2629, 9175040), (-169, 5284823040), (28561, 4058744094720)],
    },
    PrintedLine {
        rate: (49, 64),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (3049, 9175040), (-7, 188743680), (343, 36238786560)],
    },
    PrintedLine {
        rate: (225, 256),
        scale: (1, 8),
        bracket: &[(1, 1), (-1, 4608), (31501, 82575360), (-5, 117440512), (375, 30064771072)],
    },
    PrintedLine {
        rate: (1, 1),
        scale: (1, 16),
        bracket: &[(1, 1), (127, 4608), (3929, 9175040), (79, 20643840), (1, 61931520)],
    },
];

pub(crate) fn printed_form(lines: &[PrintedLine]) -> PolyExpSum {
    PolyExpSum::from_terms(lines.iter().map(|l| (Rational::from(l.rate), l.poly())))
}

/// A coefficient where the printed sixteen sub-interval expression and the
/// generator disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMismatch {
    pub rate: Rational,
    pub power: usize,
    pub generated: Rational,
    pub printed: Rational,
}

#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub generated_rates: usize,
    pub printed_rates: usize,
    pub compared: usize,
    pub mismatches: Vec<CoefficientMismatch>,
}

/// Compares build_subinterval(4, 16) against the printed expression.
pub fn appendix3_crosscheck() -> CrosscheckReport {
    let generated = build_subinterval(4, 16).expect("m > 0").form;
    let printed = printed_form(PRINTED_F4_16);
    compare_forms(&generated, &printed)
}

pub(crate) fn compare_forms(generated: &PolyExpSum, printed: &PolyExpSum) -> CrosscheckReport {
    let mut rates: Vec<Rational> = generated.rates();
    for r in printed.rates() {
        if !rates.contains(&r) {
            rates.push(r);
        }
    }
    rates.sort();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for r in &rates {
        let g = generated.poly(r).cloned().unwrap_or_default();
        let p = printed.poly(r).cloned().unwrap_or_default();
        let deg = g.degree().max(p.degree());
        for power in 0..=deg.max(0) as usize {
            compared += 1;
            let (a, b) = (g.coeff(power), p.coeff(power));
            if a != b {
                mismatches.push(CoefficientMismatch { rate: r.clone(), power, generated: a, printed: b });
            }
        }
    }
    CrosscheckReport { generated_rates: generated.len(), printed_rates: printed.len(), compared, mismatches }
}
