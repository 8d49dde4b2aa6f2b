//! Rational approximants for exp(-x^2) and series for erf built from the
//! spline residual.

use rug::{Float, Rational};

use crate::approx::{Approximant, Evaluator};
use crate::error::{Error, Result};
use crate::exact::{hermite_table, spline_coeffs, CompiledPolyExp, PolyExpSum, RationalPolynomial};
use crate::oracle::PrecisionContext;
use crate::spline::{build_spline, residual_derivative};

/// num(x)/den(x), normalized so both have constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionApproximant {
    pub label: String,
    pub numerator: RationalPolynomial,
    pub denominator: RationalPolynomial,
}

impl RationalFunctionApproximant {
    fn normalized(label: String, num: RationalPolynomial, den: RationalPolynomial) -> Self {
        let d0 = den.coeff(0);
        let inv = Rational::from(d0.recip_ref());
        RationalFunctionApproximant { label, numerator: num.scale(&inv), denominator: den.scale(&inv) }
    }

    pub fn eval(&self, x: &Float, ctx: &PrecisionContext) -> Float {
        let x = ctx.float(x);
        self.numerator.eval(&x) / self.denominator.eval(&x)
    }

    /// Smallest |den(x)| over an even sampling of [0, x_max].
    pub fn min_denominator(&self, x_max: f64, samples: usize, ctx: &PrecisionContext) -> Float {
        let mut best: Option<Float> = None;
        for i in 0..=samples {
            let x = ctx.float(x_max * i as f64 / samples as f64);
            let d = self.denominator.eval(&x).abs();
            if best.as_ref().map_or(true, |b| d < *b) {
                best = Some(d);
            }
        }
        best.expect("at least one sample")
    }

    pub fn render(&self) -> String {
        format!("({})/({})", self.numerator.render("x"), self.denominator.render("x"))
    }
}

/// g_n: solves the derivative of f_n for exp(-x^2).
pub fn build_gauss_g(n: usize) -> RationalFunctionApproximant {
    let c = spline_coeffs(n);
    let t = hermite_table(n + 1);
    let mut num = RationalPolynomial::zero();
    let mut den = RationalPolynomial::one();
    for k in 0..=n {
        let v = Rational::from(&c[k] * (k as u32 + 1)) * t.a(k, 0);
        num = &num + &RationalPolynomial::monomial(k, v);
        let lin = RationalPolynomial::new(vec![Rational::from(k as u32 + 1), Rational::new(), Rational::from(-2)]);
        let inner = &(&lin * t.row(k)) + &t.row(k).derivative().shift(1);
        let mut term = inner.shift(k).scale(&c[k]);
        if k % 2 == 0 {
            term = -&term;
        }
        den = &den + &term;
    }
    RationalFunctionApproximant::normalized(format!("g n={n}"), num, den)
}

/// h_n = [1 + sum c_{n,k} (-1)^{k+1} x^{2k+2}] / [1 + sum c_{n,k} x^{2k+2}]
pub fn build_gauss_h(n: usize) -> RationalFunctionApproximant {
    let c = spline_coeffs(n);
    let mut num = RationalPolynomial::one();
    let mut den = RationalPolynomial::one();
    for (k, ck) in c.iter().enumerate() {
        let mono = RationalPolynomial::monomial(2 * k + 2, ck.clone());
        den = &den + &mono;
        num = if k % 2 == 0 { &num - &mono } else { &num + &mono };
    }
    RationalFunctionApproximant::normalized(format!("h n={n}"), num, den)
}

struct RationalFunctionEvaluator {
    num: Vec<Float>,
    den: Vec<Float>,
    prec: u32,
}

fn horner(c: &[Float], x: &Float, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for v in c.iter().rev() {
        acc *= x;
        acc += v;
    }
    acc
}

impl Evaluator for RationalFunctionEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        let x = Float::with_val(self.prec, x);
        Ok(horner(&self.num, &x, self.prec) / horner(&self.den, &x, self.prec))
    }

    /// Both Gaussian approximants are even.
    fn eval(&self, x: &Float) -> Result<Float> {
        self.eval_nonneg(&Float::with_val(self.prec, x.abs_ref()))
    }
}

impl Approximant for RationalFunctionApproximant {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        let prec = ctx.bits();
        Ok(Box::new(RationalFunctionEvaluator {
            num: self.numerator.to_floats(prec),
            den: self.denominator.to_floats(prec),
            prec,
        }))
    }
}

/// f_n plus the first `tail_terms` nonzero Maclaurin terms of its residual.
#[derive(Clone, Debug)]
pub struct ErfSeriesApproximant {
    pub base_order: usize,
    /// sqrt(pi) f_n
    pub base: PolyExpSum,
    pub tail_terms: usize,
    /// sqrt(pi) times the truncated residual; odd powers only
    pub tail: RationalPolynomial,
}

pub fn build_erf_series(n: usize, tail_terms: usize) -> Result<ErfSeriesApproximant> {
    if tail_terms == 0 {
        return Err(Error::Domain("erf series needs at least one tail term".into()));
    }
    let r = residual_derivative(n);
    let mut degree = 2 * n + 2 + 2 * tail_terms;
    let picked = loop {
        let t = r.taylor(degree);
        let nz: Vec<(usize, Rational)> =
            t.coeffs().iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, c.clone())).collect();
        if nz.len() >= tail_terms {
            break nz.into_iter().take(tail_terms).collect::<Vec<_>>();
        }
        degree += 2 * tail_terms;
    };
    let mut tail = RationalPolynomial::zero();
    for (power, c) in picked {
        tail = &tail + &RationalPolynomial::monomial(power + 1, c / (power as u32 + 1));
    }
    Ok(ErfSeriesApproximant { base_order: n, base: build_spline(n).form, tail_terms, tail })
}

impl ErfSeriesApproximant {
    pub fn form(&self) -> PolyExpSum {
        self.base.add(&PolyExpSum::polynomial(self.tail.clone()))
    }
}

struct SeriesEvaluator {
    compiled: CompiledPolyExp,
    inv_sqrt_pi: Float,
}

impl Evaluator for SeriesEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        Ok(self.compiled.eval(x) * &self.inv_sqrt_pi)
    }
}

impl Approximant for ErfSeriesApproximant {
    fn label(&self) -> String {
        format!("series n={} terms={}", self.base_order, self.tail_terms)
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(SeriesEvaluator { compiled: self.form().compile(ctx.bits()), inv_sqrt_pi: ctx.sqrt_pi().recip() }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::erf_ref;
    use rug::Integer;

    fn even(fr: &[(i64, i64)]) -> RationalPolynomial {
        let mut v = Vec::new();
        for (i, f) in fr.iter().enumerate() {
            if i > 0 {
                v.push(Rational::new());
            }
            v.push(Rational::from(*f));
        }
        RationalPolynomial::new(v)
    }

    fn check(f: &RationalFunctionApproximant, num: &[(i64, i64)], den: &[(i64, i64)]) {
        assert_eq!(f.numerator, even(num), "{} numerator", f.label);
        assert_eq!(f.denominator, even(den), "{} denominator", f.label);
    }

    #[test]
    fn gauss_g_closed_forms() {
        check(&build_gauss_g(0), &[(1, 1)], &[(1, 1), (2, 1)]);
        check(&build_gauss_g(1), &[(1, 1)], &[(1, 1), (1, 1), (2, 3)]);
        check(&build_gauss_g(2), &[(1, 1), (-1, 10)], &[(1, 1), (9, 10), (2, 5), (2, 15)]);
        check(&build_gauss_g(3), &[(1, 1), (-1, 7)], &[(1, 1), (6, 7), (5, 14), (2, 21), (2, 105)]);
        check(
            &build_gauss_g(4),
            &[(1, 1), (-1, 6), (1, 252)],
            &[(1, 1), (5, 6), (85, 252), (11, 126), (1, 63), (2, 945)],
        );
        check(
            &build_gauss_g(5),
            &[(1, 1), (-2, 11), (1, 132)],
            &[(1, 1), (9, 11), (43, 132), (1, 12), (1, 66), (1, 495), (2, 10395)],
        );
        check(
            &build_gauss_g(7),
            &[(1, 1), (-1, 5), (1, 78), (-1, 4290)],
            &[(1, 1), (4, 5), (61, 195), (34, 429), (83, 5720), (1, 495), (7, 32175), (4, 225225), (2, 2027025)],
        );
    }

    #[test]
    fn gauss_h_closed_forms() {
        check(&build_gauss_h(0), &[(1, 1), (-1, 2)], &[(1, 1), (1, 2)]);
        check(
            &build_gauss_h(5),
            &[(1, 1), (-1, 2), (5, 44), (-1, 66), (1, 792), (-1, 15840), (1, 665280)],
            &[(1, 1), (1, 2), (5, 44), (1, 66), (1, 792), (1, 15840), (1, 665280)],
        );
    }

    /// Derivative of f_n is (A' + (B' - 2xB) e^{-x^2})/sqrt(pi) and must equal
    /// 2 e^{-x^2}/sqrt(pi) - residual; solving for e^{-x^2} gives g_n.
    #[test]
    fn derivative_identity() {
        for n in 0..=16 {
            let f = build_spline(n).form;
            let a = f.polynomial_part();
            let b = f.poly(&Rational::from(1)).unwrap().clone();
            let two = RationalPolynomial::constant(Rational::from(2));
            let w = &(&two - &b.derivative()) + &(&RationalPolynomial::monomial(1, Rational::from(2)) * &b);
            let g = build_gauss_g(n);
            let lhs = &a.derivative() * &g.denominator;
            let rhs = &g.numerator * &w;
            assert!((&lhs - &rhs).is_zero(), "order {n}");
        }
    }

    #[test]
    fn value_at_zero_and_parity() {
        let ctx = PrecisionContext::default();
        for n in 0..=12 {
            for f in [build_gauss_g(n), build_gauss_h(n)] {
                assert_eq!(f.eval(&ctx.float(0), &ctx), 1);
                assert!(f.numerator.is_even() && f.denominator.is_even());
                assert!(f.min_denominator(6.0, 600, &ctx) > 0.5);
            }
        }
    }

    #[test]
    fn series_fixtures() {
        let s0 = build_erf_series(0, 5).unwrap();
        let f = |k: u32| Integer::from(Integer::factorial(k));
        for k in 0..5u32 {
            let mut expect = Rational::from(((2 * k + 1) as i64, 1)) / Rational::from(f(k + 1) * (2 * k + 3));
            if k % 2 == 1 {
                expect = -expect;
            }
            assert_eq!(s0.tail.coeff(2 * k as usize + 3), expect, "k={k}");
        }
        let s1 = build_erf_series(1, 2).unwrap();
        assert_eq!(
            s1.tail,
            RationalPolynomial::from_fracs(&[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 30), (0, 1), (-1, 21)])
        );
        let s2 = build_erf_series(2, 1).unwrap();
        assert_eq!(s2.tail, RationalPolynomial::monomial(7, Rational::from((1, 420))));
        let longer = build_erf_series(2, 4).unwrap();
        assert_eq!(longer.tail.coeff(7), s2.tail.coeff(7));
        assert!(build_erf_series(1, 0).is_err());
    }

    #[test]
    fn series_error_order() {
        // error scales as x^{2n+2K+3}: slope of log|err| vs log x
        let ctx = PrecisionContext::new(60).unwrap();
        for (n, k) in [(0usize, 2usize), (1, 2), (2, 1)] {
            let s = build_erf_series(n, k).unwrap();
            let ev = s.evaluator(&ctx).unwrap();
            let err = |x: f64| {
                let xf = ctx.float(x);
                let d = erf_ref(&xf, &ctx).unwrap() - ev.eval(&xf).unwrap();
                d.abs().to_f64().ln()
            };
            let slope = (err(1e-2) - err(1e-3)) / (1e-2f64.ln() - 1e-3f64.ln());
            let expect = (2 * n + 2 * k + 3) as f64;
            assert!((slope - expect).abs() < 0.05, "n={n} K={k} slope {slope}");
        }
    }
}
