//! Square-root form approximants f = sqrt(S(x))/sqrt(pi), where
//! S = pi q0 + sum_i pi q_i(x) e^{-k_i x^2} has exact rational data.

use rug::{Float, Rational};

use crate::approx::{Approximant, Evaluator};
use crate::error::{Error, Result};
use crate::exact::{hermite_table, render_rate, spline_coeffs, PolyExpSum, RationalPolynomial};
use crate::oracle::PrecisionContext;
use crate::spline::build_spline;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtForm {
    pub base_order: Option<usize>,
    /// pi q0
    pub pi_q0: Rational,
    /// pi q_i(x) at decay rate k_i > 0
    pub pi_terms: PolyExpSum,
}

impl SqrtForm {
    fn from_radicand(base_order: Option<usize>, radicand: PolyExpSum) -> Result<Self> {
        let constant = radicand.polynomial_part();
        if constant.degree() > 0 {
            return Err(Error::Numeric("radicand has a non-constant polynomial part".into()));
        }
        let pi_q0 = constant.coeff(0);
        let pi_terms =
            PolyExpSum::from_terms(radicand.terms().filter(|(k, _)| **k != 0).map(|(k, p)| (k.clone(), p.clone())));
        Ok(SqrtForm { base_order, pi_q0, pi_terms })
    }

    /// S(x) as a single poly-exp sum.
    pub fn radicand(&self) -> PolyExpSum {
        let mut s = self.pi_terms.clone();
        s.add_term(Rational::new(), RationalPolynomial::constant(self.pi_q0.clone()));
        s
    }

    /// sqrt(pi q0 / pi), the value as x -> infinity.
    pub fn limit(&self, ctx: &PrecisionContext) -> Float {
        (ctx.float(&self.pi_q0) / ctx.pi()).sqrt()
    }

    pub fn render(&self) -> String {
        let mut out = render_const(&self.pi_q0).to_string();
        for (k, p) in self.pi_terms.terms() {
            let e = format!("e^(-{}x^2)", render_rate(k));
            if p.degree() == 0 {
                let c = p.coeff(0);
                let mag = Rational::from(c.abs_ref());
                let sign = if c < 0 { " - " } else { " + " };
                if mag == 1 {
                    out.push_str(&format!("{sign}{e}"));
                } else {
                    out.push_str(&format!("{sign}{} {e}", render_const(&mag)));
                }
            } else {
                out.push_str(&format!(" + ({}) {e}", p.render("x")));
            }
        }
        format!("sqrt({out})/sqrt(pi)")
    }
}

fn render_const(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// pi * alpha_j for j = 0..=m (odd entries zero), m = n for even n, n-1 for odd n.
pub fn alpha_coeffs(n: usize) -> Vec<Rational> {
    let c = spline_coeffs(n);
    let t = hermite_table(n);
    let m = if n % 2 == 0 { n } else { n - 1 };
    let mut alpha = vec![Rational::new(); m + 1];
    alpha[m] = Rational::from(&c[m] * &t.a(m, 0)) * -4i32;
    let mut j = m;
    while j >= 2 {
        j -= 2;
        let carry = Rational::from(&alpha[j + 2] * (j as u32 + 2)) / 2u32;
        alpha[j] = carry - Rational::from(&c[j] * &t.a(j, 0)) * 4u32;
    }
    alpha
}

/// pi * beta_j for j = 0..=2n (odd entries zero).
pub fn beta_coeffs(n: usize) -> Vec<Rational> {
    let c = spline_coeffs(n);
    let t = hermite_table(n);
    let mut beta = vec![Rational::new(); 2 * n + 1];
    let sign = if n % 2 == 0 { -2i32 } else { 2 };
    beta[2 * n] = Rational::from(&c[n] * &t.a(n, n)) * sign;
    let mut j = 2 * n;
    while j >= 2 {
        j -= 2;
        let mut s = Rational::new();
        for k in j / 2..=j.min(n) {
            let v = Rational::from(&c[k] * &t.a(k, j - k));
            if k % 2 == 0 {
                s += v;
            } else {
                s -= v;
            }
        }
        let carry = Rational::from(&beta[j + 2] * (j as u32 + 2)) / 4u32;
        beta[j] = carry - s * 2u32;
    }
    beta
}

fn even_poly(coeffs: &[Rational]) -> RationalPolynomial {
    RationalPolynomial::new(coeffs.to_vec())
}

/// The order-n form from the coefficient recurrences.
pub fn build_sqrt(n: usize) -> SqrtForm {
    let alpha = alpha_coeffs(n);
    let beta = beta_coeffs(n);
    let pi_q0 = -Rational::from(&alpha[0] + &beta[0]);
    let mut pi_terms = PolyExpSum::term(Rational::from(1), even_poly(&alpha));
    pi_terms.add_term(Rational::from(2), even_poly(&beta));
    SqrtForm { base_order: Some(n), pi_q0, pi_terms }
}

/// S = 4 * integral_0^x base(t) e^{-t^2} dt for an odd base (sqrt(pi) times an
/// erf approximant).
pub fn sqrt_transform(base: &PolyExpSum) -> Result<SqrtForm> {
    if !base.is_odd() {
        return Err(Error::Domain("sqrt transform needs an odd base".into()));
    }
    let integrand = base.shift_rates(&Rational::from(1)).scale(&Rational::from(4));
    SqrtForm::from_radicand(None, integrand.integrate()?)
}

/// Recurrence output and the transform of the order-n spline agree.
pub fn sqrt_from_spline(n: usize) -> Result<SqrtForm> {
    let mut s = sqrt_transform(&build_spline(n).form)?;
    s.base_order = Some(n);
    Ok(s)
}

pub struct SqrtEvaluator {
    radicand: crate::exact::CompiledPolyExp,
    inv_sqrt_pi: Float,
    clamp: Float,
}

impl SqrtEvaluator {
    pub fn new(form: &SqrtForm, ctx: &PrecisionContext) -> Self {
        let ten = ctx.float(10);
        let clamp = rug::ops::Pow::pow(ten, -(ctx.working_digits() as i32 - 2));
        SqrtEvaluator { radicand: form.radicand().compile(ctx.bits()), inv_sqrt_pi: ctx.sqrt_pi().recip(), clamp }
    }

    /// S(x), clamped at 0 for tiny negative rounding.
    pub fn radicand(&self, x: &Float) -> Result<Float> {
        let s = self.radicand.eval(x);
        if s < 0 {
            if Float::with_val(s.prec(), -&s) > self.clamp {
                return Err(Error::Numeric(format!("negative radicand {} at x = {}", s.to_f64(), x.to_f64())));
            }
            return Ok(Float::new(s.prec()));
        }
        Ok(s)
    }
}

impl Evaluator for SqrtEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        Ok(self.radicand(x)?.sqrt() * &self.inv_sqrt_pi)
    }
}

impl Approximant for SqrtForm {
    fn label(&self) -> String {
        match self.base_order {
            Some(n) => format!("sqrt n={n}"),
            None => "sqrt transform".into(),
        }
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(SqrtEvaluator::new(self, ctx)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemarcationForm {
    /// e_C^2 = -(S - pi q0)/pi, so e_C^2 + f^2 = pi q0/pi
    Limit,
    /// e_C^2 = 1 - S/pi, so e_C^2 + f^2 = 1
    Unit,
}

#[derive(Clone, Debug)]
pub struct ComplementaryDemarcation {
    pub form: SqrtForm,
    pub kind: DemarcationForm,
}

pub fn complementary_demarcation(n: usize) -> ComplementaryDemarcation {
    ComplementaryDemarcation { form: build_sqrt(n), kind: DemarcationForm::Limit }
}

impl ComplementaryDemarcation {
    pub fn with_kind(mut self, kind: DemarcationForm) -> Self {
        self.kind = kind;
        self
    }

    pub fn eval(&self, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
        let ev = SqrtEvaluator::new(&self.form, ctx);
        self.eval_with(&ev, x, ctx)
    }

    fn eval_with(&self, ev: &SqrtEvaluator, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
        let s = ev.radicand(&Float::with_val(ctx.bits(), x.abs_ref()))?;
        let top = match self.kind {
            DemarcationForm::Limit => ctx.float(&self.form.pi_q0) - s,
            DemarcationForm::Unit => ctx.pi() - s,
        };
        let v = top / ctx.pi();
        Ok(if v < 0 { Float::new(ctx.bits()) } else { v.sqrt() })
    }

    /// Root of e_C(x) = f_n(x) on [0, 3] by bisection.
    pub fn crossing(&self, ctx: &PrecisionContext) -> Result<Float> {
        let ev = SqrtEvaluator::new(&self.form, ctx);
        let gap = |x: &Float| -> Result<Float> {
            let e = self.eval_with(&ev, x, ctx)?;
            Ok(e - ev.eval_nonneg(x)?)
        };
        let mut lo = ctx.float(0);
        let mut hi = ctx.float(3);
        for _ in 0..ctx.bits() {
            let mid = Float::with_val(ctx.bits(), &lo + &hi) / 2u32;
            if gap(&mid)? > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{erf_ref, relative_error};
    use crate::subinterval::build_subinterval;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn even(fr: &[(i64, i64)]) -> RationalPolynomial {
        let mut v = Vec::new();
        for (i, f) in fr.iter().enumerate() {
            if i > 0 {
                v.push(Rational::new());
            }
            v.push(r(f.0, f.1));
        }
        RationalPolynomial::new(v)
    }

    #[test]
    fn low_order_recurrences() {
        assert_eq!(alpha_coeffs(0), vec![r(-2, 1)]);
        assert_eq!(beta_coeffs(0), vec![r(-1, 1)]);
        assert_eq!(even_poly(&alpha_coeffs(2)), even(&[(-29, 15), (1, 15)]));
        assert_eq!(even_poly(&alpha_coeffs(4)), even(&[(1, 1), (-17, 298), (1, 1192)]).scale(&r(-596, 315)));
        assert_eq!(even_poly(&beta_coeffs(1)), even(&[(1, 1), (2, 7)]).scale(&r(-7, 6)));
        assert_eq!(even_poly(&beta_coeffs(3)), even(&[(1, 1), (10, 26), (1, 13), (1, 130)]).scale(&r(-26, 21)));
    }

    #[test]
    fn pi_sequence() {
        let expect = [(3, 1), (19, 6), (63, 20), (22, 7), (377, 120), (174169, 55440), (4528409, 1441440)];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(build_sqrt(n).pi_q0, r(e.0, e.1), "order {n}");
        }
        // 19/6 overshoots pi, so the sequence is not monotone; its distance to pi is
        let pi = std::f64::consts::PI;
        let mut prev = f64::INFINITY;
        for n in 0..=10 {
            let d = (build_sqrt(n).pi_q0.to_f64() - pi).abs();
            assert!(d < prev, "order {n}");
            prev = d;
        }
    }

    #[test]
    fn recurrences_match_transform() {
        for n in 0..=24 {
            assert_eq!(build_sqrt(n), sqrt_from_spline(n).unwrap(), "order {n}");
        }
    }

    #[test]
    fn radicand_structure() {
        for n in [0usize, 3, 8] {
            let f = build_sqrt(n);
            assert_eq!(f.radicand().eval_rational_at_zero(), 0);
            assert!(f.pi_terms.is_even());
        }
        let f0 = build_sqrt(0);
        assert_eq!(f0.render(), "sqrt(3 - 2 e^(-x^2) - e^(-2 x^2))/sqrt(pi)");
    }

    #[test]
    fn radicand_nonnegative_and_limit() {
        let ctx = PrecisionContext::default();
        for n in [0usize, 2, 5, 9] {
            let f = build_sqrt(n);
            let ev = SqrtEvaluator::new(&f, &ctx);
            for i in 1..=400 {
                let x = ctx.float(i) / 20u32;
                assert!(ev.radicand(&x).unwrap() >= 0);
            }
            let far = ev.eval(&ctx.float(1e6)).unwrap();
            let d = Float::with_val(ctx.bits(), &far - &f.limit(&ctx)).abs();
            assert!(d < 1e-40);
        }
    }

    #[test]
    fn transform_of_subinterval_base() {
        let base = build_subinterval(1, 4).unwrap().form;
        let s = sqrt_transform(&base).unwrap();
        assert_eq!(s.pi_q0, r(128177, 40800));
        assert_eq!(s.pi_terms.rates(), vec![r(1, 1), r(17, 16), r(5, 4), r(25, 16), r(2, 1)]);
        let mut even_term = PolyExpSum::polynomial(RationalPolynomial::monomial(2, r(1, 1)));
        even_term.add_term(r(1, 1), RationalPolynomial::monomial(1, r(1, 1)));
        assert!(sqrt_transform(&even_term).is_err());
    }

    #[test]
    fn demarcation() {
        let ctx = PrecisionContext::default();
        let d = complementary_demarcation(20);
        let zero = ctx.float(0);
        let e0 = d.eval(&zero, &ctx).unwrap();
        let defect = (d.form.pi_q0.to_f64() / std::f64::consts::PI - 1.0).abs();
        assert!((e0.to_f64() - 1.0).abs() <= defect);
        let unit = complementary_demarcation(20).with_kind(DemarcationForm::Unit);
        assert_eq!(unit.eval(&zero, &ctx).unwrap(), 1);
        let x = ctx.float(1.3);
        let f = build_sqrt(20).eval(&x, &ctx).unwrap();
        let e = d.eval(&x, &ctx).unwrap();
        let sum = Float::with_val(ctx.bits(), f.square_ref()) + Float::with_val(ctx.bits(), e.square_ref());
        assert!((sum.to_f64() - (1.0 - defect)).abs() < 1e-15);
        let xo = d.crossing(&ctx).unwrap();
        assert!((xo.to_f64() - 0.74373198514677).abs() < 1e-8, "{xo}");
        let half = erf_ref(&ctx.parse("0.74373198514677").unwrap(), &ctx).unwrap();
        let target = ctx.float(0.5).sqrt();
        assert!(relative_error(&half, &target).unwrap().abs() < 1e-14);
    }
}
