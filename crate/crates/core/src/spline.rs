//! Single-interval spline approximants f_n and their residuals.

use rug::{Float, Integer, Rational};

use crate::approx::{Approximant, Evaluator, PolyExpEvaluator};
use crate::error::{Error, Result};
use crate::exact::{hermite_table, spline_coeffs, HermiteTable, PolyExpSum, RationalPolynomial};
use crate::oracle::PrecisionContext;

/// Order-n rule over the segment [lo*x, hi*x], scaled by sqrt(pi):
/// 2 sum_k c_{n,k} ((hi-lo)x)^{k+1} [p(k, lo x) e^{-lo^2 x^2} + (-1)^k p(k, hi x) e^{-hi^2 x^2}].
pub fn spline_segment(n: usize, lo: &Rational, hi: &Rational, table: &HermiteTable) -> PolyExpSum {
    let c = spline_coeffs(n);
    let width = Rational::from(hi - lo);
    let mut left = RationalPolynomial::zero();
    let mut right = RationalPolynomial::zero();
    let mut wpow = width.clone();
    for k in 0..=n {
        let lead = Rational::from(&c[k] * &wpow) * 2u32;
        let l = table.row(k).compose_scaled(lo).shift(k + 1).scale(&lead);
        let mut r = table.row(k).compose_scaled(hi).shift(k + 1).scale(&lead);
        if k % 2 == 1 {
            r = -&r;
        }
        left = &left + &l;
        right = &right + &r;
        wpow *= &width;
    }
    let mut s = PolyExpSum::term(Rational::from(lo * lo), left);
    s.add_term(Rational::from(hi * hi), right);
    s
}

#[derive(Clone, Debug)]
pub struct SplineApproximant {
    pub order: usize,
    /// sqrt(pi) f_n
    pub form: PolyExpSum,
    /// sqrt(pi) times the derivative of erf - f_n
    pub residual_derivative_form: PolyExpSum,
}

pub fn build_spline(n: usize) -> SplineApproximant {
    let table = hermite_table(n + 1);
    let form = spline_segment(n, &Rational::new(), &Rational::from(1), &table);
    let residual_derivative_form = residual_from_form(&form);
    SplineApproximant { order: n, form, residual_derivative_form }
}

fn residual_from_form(form: &PolyExpSum) -> PolyExpSum {
    let target = PolyExpSum::term(Rational::from(1), RationalPolynomial::constant(Rational::from(2)));
    target.sub(&form.differentiate())
}

/// sqrt(pi) times the residual derivative of f_n.
pub fn residual_derivative(n: usize) -> PolyExpSum {
    build_spline(n).residual_derivative_form
}

impl Approximant for SplineApproximant {
    fn label(&self) -> String {
        format!("spline n={}", self.order)
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(PolyExpEvaluator::new(&self.form, ctx)))
    }
}

/// Order-n rule on [alpha, x]:
/// (1/sqrt(pi)) [left(x) e^{-alpha^2} + right(x) e^{-x^2}].
#[derive(Clone, Debug)]
pub struct IntervalSpline {
    pub order: usize,
    pub alpha: Rational,
    /// 2 sum_k c_{n,k} (x-alpha)^{k+1} p(k, alpha); multiplies e^{-alpha^2}
    pub left: RationalPolynomial,
    /// 2 sum_k c_{n,k} (x-alpha)^{k+1} (-1)^k p(k, x); multiplies e^{-x^2}
    pub right: RationalPolynomial,
}

pub fn build_interval_spline(n: usize, alpha: &Rational) -> Result<IntervalSpline> {
    if *alpha < 0 {
        return Err(Error::Domain("interval spline needs alpha >= 0".into()));
    }
    let table = hermite_table(n);
    let c = spline_coeffs(n);
    let neg_alpha = Rational::from(-alpha);
    let lin = RationalPolynomial::new(vec![neg_alpha, Rational::from(1)]);
    let mut pow = lin.clone();
    let mut left = RationalPolynomial::zero();
    let mut right = RationalPolynomial::zero();
    for k in 0..=n {
        let row = table.row(k);
        let lc = Rational::from(&c[k] * &row.eval_rational(alpha)) * 2u32;
        left = &left + &pow.scale(&lc);
        let mut r = (&pow * row).scale(&(Rational::from(&c[k] * 2u32)));
        if k % 2 == 1 {
            r = -&r;
        }
        right = &right + &r;
        pow = &pow * &lin;
    }
    Ok(IntervalSpline { order: n, alpha: alpha.clone(), left, right })
}

impl IntervalSpline {
    pub fn eval(&self, x: &Float, ctx: &PrecisionContext) -> Float {
        let prec = ctx.bits();
        let x = Float::with_val(prec, x);
        let a = Float::with_val(prec, &self.alpha);
        let ea = crate::oracle::exp_neg_sq(&a, prec);
        let ex = crate::oracle::exp_neg_sq(&x, prec);
        let v = self.left.eval(&x) * ea + self.right.eval(&x) * ex;
        v / ctx.sqrt_pi()
    }
}

/// Numeric order-n rule over [a, x] for float endpoints, scaled by
/// 1/sqrt(pi). Shared by the grid family.
pub struct SegmentEvaluator {
    coeffs: Vec<Float>,
    rows: Vec<Vec<Float>>,
    inv_sqrt_pi: Float,
    prec: u32,
}

impl SegmentEvaluator {
    pub fn new(n: usize, ctx: &PrecisionContext) -> Self {
        let prec = ctx.bits();
        let table = hermite_table(n);
        SegmentEvaluator {
            coeffs: spline_coeffs(n).iter().map(|c| Float::with_val(prec, Rational::from(c * 2u32))).collect(),
            rows: table.rows().iter().map(|r| r.to_floats(prec)).collect(),
            inv_sqrt_pi: ctx.sqrt_pi().recip(),
            prec,
        }
    }

    fn horner(coeffs: &[Float], x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for a in coeffs.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    /// Approximates erf(x) - erf(a) for a <= x.
    pub fn eval(&self, a: &Float, x: &Float) -> Float {
        let prec = self.prec;
        let h = Float::with_val(prec, x - a);
        if h.is_zero() {
            return Float::new(prec);
        }
        let ea = crate::oracle::exp_neg_sq(a, prec);
        let ex = crate::oracle::exp_neg_sq(x, prec);
        let mut sum = Float::new(prec);
        let mut hp = h.clone();
        for (k, ck) in self.coeffs.iter().enumerate() {
            let pa = Self::horner(&self.rows[k], a);
            let px = Self::horner(&self.rows[k], x);
            let mut bracket = pa * &ea;
            if k % 2 == 1 {
                bracket -= px * &ex;
            } else {
                bracket += px * &ex;
            }
            sum += bracket * &hp * ck;
            hp *= &h;
        }
        sum * &self.inv_sqrt_pi
    }
}

/// x_{n,0} = 2^n prod_{i=0}^{n} (2i+1)
pub fn x_n0(n: usize) -> Integer {
    let mut v = Integer::from(1) << n as u32;
    for i in 0..=n {
        v *= (2 * i + 1) as u32;
    }
    v
}

#[derive(Clone, Debug)]
pub struct ResidualDiagnostics {
    pub order: usize,
    pub x_n0: Integer,
    /// Coefficients of sqrt(pi) x_{n,0} eps_n'(x)/x^{2n+2}, powers 0,1,2,...
    pub g_poly_truncation: Vec<Rational>,
}

pub fn residual_diagnostics(n: usize, truncation_terms: usize) -> ResidualDiagnostics {
    let eps = residual_derivative(n);
    let lead = 2 * n + 2;
    let max_degree = lead + 2 * truncation_terms;
    let t = eps.taylor(max_degree);
    let x0 = x_n0(n);
    let scale = Rational::from(x0.clone());
    let g: Vec<Rational> = (0..2 * truncation_terms).map(|i| Rational::from(&t.coeff(lead + i) * &scale)).collect();
    ResidualDiagnostics { order: n, x_n0: x0, g_poly_truncation: g }
}

/// Residual-bound constant: |eps_n'(x)| <= (K_O/sqrt(pi)) x^{2n+2}/x_{n,0}.
pub const K_O: f64 = 1.2;

/// max over x_i = i x_max / samples of sqrt(pi) x_{n,0} |eps_n'(x)| / x^{2n+2}.
/// Evaluated with 3(2n+2) extra digits since the residual cancels heavily
/// at small x.
pub fn residual_bound_ratio(n: usize, x_max: f64, samples: usize, ctx: &PrecisionContext) -> Result<Float> {
    let digits = ctx.working_digits() + 3 * (2 * n as u32 + 2);
    let hi = PrecisionContext::new(digits)?;
    let prec = hi.bits();
    let form = residual_derivative(n).compile(prec);
    let x0 = Float::with_val(prec, x_n0(n));
    let mut best = Float::new(prec);
    for i in 1..=samples {
        let x = Float::with_val(prec, x_max) * i as u64 / samples as u64;
        let v = form.eval(&x).abs();
        let r = v * &x0 / Float::with_val(prec, rug::ops::Pow::pow(&x, 2 * n as u32 + 2));
        if r > best {
            best = r;
        }
    }
    Ok(Float::with_val(ctx.bits(), best))
}

/// The two large-argument forms: erf ~ 1 and erf ~ 1 - e^{-x^2}/(sqrt(pi) x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailForm {
    One,
    Asymptotic,
}

pub fn tail_value(form: TailForm, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    match form {
        TailForm::One => Ok(ctx.float(1)),
        TailForm::Asymptotic => {
            if *x <= 0 {
                return Err(Error::Domain("asymptotic tail form needs x > 0".into()));
            }
            let x = ctx.float(x);
            let e = crate::oracle::exp_neg_sq(&x, ctx.bits());
            Ok(ctx.float(1) - e / (x * ctx.sqrt_pi()))
        }
    }
}
