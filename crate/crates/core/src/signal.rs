//! Power and harmonic content of an erf-limited sinusoid, and the
//! response of a double-pole filter to an erf step.

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::approx::{Approximant, Evaluator};
use crate::error::{Error, Result};
use crate::oracle::{bessel_i, erf_ref, exp_neg_sq, PrecisionContext};

/// Polynomial in a^2 with rational coefficients (lowest power first).
fn poly_a2(a2: &Float, coeffs: &[(i64, i64)]) -> Float {
    let prec = a2.prec();
    let mut acc = Float::new(prec);
    for &(n, d) in coeffs.iter().rev() {
        acc *= a2;
        acc += Rational::from((n, d));
    }
    acc
}

fn rat(prec: u32, n: i64, d: i64) -> Float {
    Float::with_val(prec, Rational::from((n, d)))
}

/// Extra digits for closed forms with 1/a^k cancellation.
fn closed_form_ctx(ctx: &PrecisionContext) -> PrecisionContext {
    PrecisionContext::with_guard(ctx.working_digits(), ctx.guard_digits() + 40).expect("valid guard")
}

/// Closed-form mean output power using the order-3 sqrt form.
pub fn output_power(a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *a <= 0 {
        return Err(Error::Domain("amplitude must be positive".into()));
    }
    let c = closed_form_ctx(ctx);
    let p = c.bits();
    let a = c.float(a);
    let a2 = Float::with_val(p, a.square_ref());
    let half = Float::with_val(p, &a2 / 2u32);
    let pi = c.pi();
    let i0h = bessel_i(0, &half, &c)?;
    let i1h = bessel_i(1, &half, &c)?;
    let i0 = bessel_i(0, &a2, &c)?;
    let i1 = bessel_i(1, &a2, &c)?;
    let eh = (-half.clone()).exp();
    let e1 = (-a2.clone()).exp();

    let mut s = rat(p, 22, 7);
    s -= rat(p, 40, 21) * i0h * poly_a2(&a2, &[(1, 1), (-1, 40)]) * &eh;
    s -= rat(p, 26, 21) * i0 * poly_a2(&a2, &[(1, 1), (5, 26), (41, 1040), (1, 260)]) * &e1;
    s -= rat(p, 1, 21) * Float::with_val(p, &a2 * i1h) * &eh;
    s += rat(p, 37, 140) * Float::with_val(p, &a2 * &i1) * poly_a2(&a2, &[(1, 1), (43, 222), (2, 111)]) * &e1;
    Ok(Float::with_val(ctx.bits(), s / pi))
}

/// Periodic trapezoid of F over one period [0, 1), starting at 4096
/// nodes and doubling until two passes agree.
pub fn periodic_mean<F>(f: F, ctx: &PrecisionContext) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let prec = ctx.bits();
    let tol = Float::with_val(prec, ctx.tolerance() * 1000u32);
    let pass = |n: usize| -> Result<Float> {
        let vals: Vec<Float> = (0..n)
            .into_par_iter()
            .map(|j| f(&Float::with_val(prec, Rational::from((j as u64, n as u64)))))
            .collect::<Result<_>>()?;
        let mut s = Float::new(prec);
        for v in &vals {
            s += v;
        }
        Ok(s / n as u64)
    };
    let mut n = 4096;
    let mut prev = pass(n)?;
    while n < 1 << 16 {
        n *= 2;
        let next = pass(n)?;
        let diff = Float::with_val(prec, &next - &prev).abs();
        let scale = Float::with_val(prec, next.abs_ref()).max(&Float::with_val(prec, 1e-30));
        if diff <= Float::with_val(prec, &tol * &scale) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

fn sin_2pi(l: &Float, k: u32, prec: u32) -> Float {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    (pi * l * (2 * k)).sin()
}

/// Mean of y^2(a sin 2 pi lambda) for y given by an evaluator.
pub fn power_quadrature(y: &dyn Evaluator, a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    periodic_mean(
        |l| {
            let v = y.eval(&Float::with_val(prec, a * sin_2pi(l, 1, prec)))?;
            Ok(v.square())
        },
        ctx,
    )
}

/// Mean output power of erf(a sin) by quadrature.
pub fn erf_power_quadrature(a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let oracle = crate::approx::ErfOracle;
    let ev = oracle.evaluator(ctx)?;
    power_quadrature(ev.as_ref(), a, ctx)
}

/// Printed c_{4,7} has both terms negative; the quadrature oracle
/// supports a positive I_1 term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeventhHarmonicForm {
    AsPrinted,
    #[default]
    Corrected,
}

/// c_{4,k}/sqrt(T) in closed form for the order-4 spline, k in {1,3,5,7}.
pub fn harmonic_levels(a: &Float, k: u32, ctx: &PrecisionContext) -> Result<Float> {
    harmonic_levels_with(a, k, SeventhHarmonicForm::Corrected, ctx)
}

pub fn harmonic_levels_with(a: &Float, k: u32, form: SeventhHarmonicForm, ctx: &PrecisionContext) -> Result<Float> {
    if *a <= 0 {
        return Err(Error::Domain("amplitude must be positive".into()));
    }
    if k % 2 == 0 || k > 7 || k == 0 {
        return Err(Error::Domain(format!("harmonic k must be one of 1, 3, 5, 7, got {k}")));
    }
    let c = closed_form_ctx(ctx);
    let p = c.bits();
    let a = c.float(a);
    let a2 = Float::with_val(p, a.square_ref());
    let half = Float::with_val(p, &a2 / 2u32);
    let i0 = bessel_i(0, &half, &c)? * (-half.clone()).exp();
    let i1 = bessel_i(1, &half, &c)? * (-half.clone()).exp();
    let r2 = c.float(2).sqrt() / c.sqrt_pi();
    let pw = |e: i32| Float::with_val(p, rug::ops::Pow::pow(&a, e));
    let v = match k {
        1 => {
            let lead = Float::with_val(p, &r2 * &a) / 2u32;
            let mut s = Float::with_val(p, &lead * poly_a2(&a2, &[(1, 1), (-1, 24), (1, 2016)]));
            s += Float::with_val(p, &lead * &i0) * poly_a2(&a2, &[(1, 1), (11, 24), (11, 105), (1, 70), (1, 945)]);
            s -= Float::with_val(p, &r2 * &a)
                * rat(p, 5, 6)
                * &i1
                * poly_a2(&a2, &[(1, 1), (1481, 4200), (38, 525), (29, 3150), (1, 1575)]);
            s
        }
        3 => {
            let mut s = Float::with_val(p, &r2 * pw(3)) / 144u32 * poly_a2(&a2, &[(1, 1), (-1, 56)]);
            s -= Float::with_val(p, &r2 * &a)
                * rat(p, 115, 84)
                * &i0
                * poly_a2(&a2, &[(1, 1), (403, 1380), (6, 115), (31, 5175), (2, 5175)]);
            s += Float::with_val(p, &r2 / &a)
                * rat(p, 115, 21)
                * &i1
                * poly_a2(&a2, &[(1, 1), (8, 23), (163, 1840), (76, 5175), (11, 6900), (1, 10350)]);
            s
        }
        5 => {
            let mut s = Float::with_val(p, &r2 * pw(5)) / 40320u32;
            s += Float::with_val(p, &r2 / &a)
                * rat(p, 262, 15)
                * &i0
                * poly_a2(&a2, &[(1, 1), (1943, 7336), (1485, 29344), (73, 11004), (13, 22008), (1, 33012)]);
            s -= Float::with_val(p, &r2 * pw(-3))
                * rat(p, 1048, 15)
                * &i1
                * poly_a2(
                    &a2,
                    &[(1, 1), (1943, 7336), (1201, 14672), (5125, 352128), (5, 2751), (41, 264096), (1, 132048)],
                );
            s
        }
        _ => {
            let mut s = -(Float::with_val(p, &r2 * pw(-3))
                * rat(p, 6784, 21)
                * &i0
                * poly_a2(
                    &a2,
                    &[(1, 1), (779, 3392), (631, 13568), (2047, 325632), (25, 40704), (17, 407040), (1, 610560)],
                ));
            let t = Float::with_val(p, &r2 * pw(-5))
                * rat(p, 27136, 21)
                * &i1
                * poly_a2(
                    &a2,
                    &[
                        (1, 1),
                        (779, 3392),
                        (1055, 13568),
                        (137, 10176),
                        (2269, 1302528),
                        (67, 407040),
                        (1, 92160),
                        (1, 2442240),
                    ],
                );
            match form {
                SeventhHarmonicForm::AsPrinted => s -= t,
                SeventhHarmonicForm::Corrected => s += t,
            }
            s
        }
    };
    Ok(Float::with_val(ctx.bits(), v))
}

/// sqrt(2) * integral over one period of y(a sin 2 pi l) sin(2 pi k l).
pub fn harmonic_quadrature(y: &dyn Evaluator, a: &Float, k: u32, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let m = periodic_mean(
        |l| {
            let v = y.eval(&Float::with_val(prec, a * sin_2pi(l, 1, prec)))?;
            Ok(v * sin_2pi(l, k, prec))
        },
        ctx,
    )?;
    Ok(m * ctx.float(2).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArbitrationResult {
    pub k: u32,
    pub closed_form: Float,
    pub quadrature: Float,
    /// |closed - quadrature| / |quadrature|
    pub deviation: f64,
    pub passed: bool,
}

/// Compares a closed-form harmonic against quadrature of the order-4 spline.
pub fn arbitrate_harmonic(
    a: &Float,
    k: u32,
    form: SeventhHarmonicForm,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<ArbitrationResult> {
    let y4 = crate::spline::build_spline(4);
    let ev = y4.evaluator(ctx)?;
    let closed_form = harmonic_levels_with(a, k, form, ctx)?;
    let quadrature = harmonic_quadrature(ev.as_ref(), a, k, ctx)?;
    let diff = Float::with_val(ctx.bits(), &closed_form - &quadrature).abs();
    let deviation = (diff / Float::with_val(ctx.bits(), quadrature.abs_ref())).to_f64();
    Ok(ArbitrationResult { k, closed_form, quadrature, deviation, passed: deviation <= tol })
}

/// Double-pole filter time constant and erf step scale.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterModel {
    pub gamma: Float,
    pub f_p: Float,
    pub tau: Float,
}

impl FilterModel {
    pub fn new(gamma: &Float, f_p: &Float, ctx: &PrecisionContext) -> Result<Self> {
        if *gamma <= 0 || *f_p <= 0 {
            return Err(Error::Domain("filter needs gamma > 0 and f_p > 0".into()));
        }
        let tau = (ctx.pi() * ctx.float(f_p) * 2u32).recip();
        Ok(FilterModel { gamma: ctx.float(gamma), f_p: ctx.float(f_p), tau })
    }

    /// Impulse response t e^{-t/tau}/tau^2.
    pub fn impulse(&self, t: &Float) -> Float {
        let p = t.prec().max(self.tau.prec());
        let r = Float::with_val(p, t / &self.tau);
        let e = Float::with_val(p, -&r).exp();
        r * e / &self.tau
    }
}

fn filter_response(
    model: &FilterModel,
    t: &Float,
    f: &dyn Fn(&Float) -> Result<Float>,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if *t < 0 {
        return Ok(ctx.float(0));
    }
    let p = ctx.bits();
    let g = &model.gamma;
    let tau = &model.tau;
    let t = ctx.float(t);
    let tg = Float::with_val(p, &t / g);
    let aa = Float::with_val(p, g / Float::with_val(p, tau * 2u32));
    let e = Float::with_val(p, aa.square_ref()).exp();
    let sp = ctx.sqrt_pi();
    let gs = Float::with_val(p, g / &sp);
    let coef = Float::with_val(p, Float::with_val(p, g.square_ref()) / Float::with_val(p, tau * 2u32))
        - Float::with_val(p, &t + tau);
    let diff = f(&aa)? - f(&Float::with_val(p, &aa - &tg))?;
    let gauss = exp_neg_sq(&Float::with_val(p, &tg - &aa), p);
    let bracket = coef * &e * diff - Float::with_val(p, &gs * &e) * gauss + &gs;
    let decay = Float::with_val(p, -Float::with_val(p, &t / tau)).exp() / tau;
    Ok(f(&tg)? + decay * bracket)
}

/// Closed-form output for the erf step.
pub fn filter_response_exact(model: &FilterModel, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    filter_response(model, t, &|x| erf_ref(x, ctx), ctx)
}

/// Same expression with erf replaced by an approximant (odd extension).
pub fn filter_response_approx(
    model: &FilterModel,
    y: &dyn Evaluator,
    t: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    filter_response(model, t, &|x| y.eval(x), ctx)
}

/// Direct convolution of erf(s/gamma) with the impulse response, by Romberg.
pub fn filter_convolution(model: &FilterModel, t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.bits();
    if *t <= 0 {
        return Ok(ctx.float(0));
    }
    let t = ctx.float(t);
    let integrand = |s: &Float| -> Result<Float> {
        let u = Float::with_val(p, Float::with_val(p, &t - s) / &model.gamma);
        Ok(erf_ref(&u, ctx)? * model.impulse(s))
    };
    let tol = Float::with_val(p, ctx.tolerance() * 1000u32);
    let mut rows: Vec<Vec<Float>> = Vec::new();
    let h0 = t.clone();
    let first = (integrand(&ctx.float(0))? + integrand(&t)?) * &h0 / 2u32;
    rows.push(vec![first]);
    for level in 1..=16usize {
        let n = 1usize << level;
        let h = Float::with_val(p, &h0 / n as u64);
        let mids: Vec<Float> = (0..n / 2)
            .into_par_iter()
            .map(|j| integrand(&Float::with_val(p, &h * (2 * j + 1) as u64)))
            .collect::<Result<_>>()?;
        let mut s = Float::new(p);
        for v in &mids {
            s += v;
        }
        let mut row = vec![Float::with_val(p, &rows[level - 1][0] / 2u32) + s * &h];
        let mut four = Float::with_val(p, 1);
        for j in 1..=level {
            four *= 4u32;
            let prev = &rows[level - 1][j - 1];
            let cur = &row[j - 1];
            let v = Float::with_val(p, cur - prev) / Float::with_val(p, &four - 1u32) + cur;
            row.push(v);
        }
        let best = row[level].clone();
        let diff = Float::with_val(p, &best - &rows[level - 1][level - 1]).abs();
        rows.push(row);
        if level >= 4 && diff <= tol {
            return Ok(best);
        }
    }
    Ok(rows.last().unwrap().last().unwrap().clone())
}

/// Time grid t_i = i * t_max / points, i = 1..=points.
pub fn filter_time_grid(t_max: &Float, points: usize, ctx: &PrecisionContext) -> Vec<Float> {
    (1..=points).map(|i| ctx.float(t_max) * i as u64 / points as u64).collect()
}

/// max_t |y_n(t) - y(t)| / |y(t)| over the time grid.
pub fn filter_max_relative_error(
    model: &FilterModel,
    y: &dyn Evaluator,
    ts: &[Float],
    ctx: &PrecisionContext,
) -> Result<Float> {
    let p = ctx.bits();
    let errs: Vec<Float> = ts
        .par_iter()
        .map(|t| {
            let exact = filter_response_exact(model, t, ctx)?;
            let approx = filter_response_approx(model, y, t, ctx)?;
            Ok((Float::with_val(p, 1) - approx / exact).abs())
        })
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(Float::new(p), |m, e| if e > m { e } else { m }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sqrt::build_sqrt;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn power_small_and_large_amplitude() {
        let c = ctx();
        let p = output_power(&c.parse("1e-3").unwrap(), &c).unwrap();
        assert!(p > 0 && p < 1e-5, "{}", p.to_f64());
        let p = output_power(&c.float(30), &c).unwrap();
        assert!(p < 1 && p > 0.9);
        assert!(output_power(&c.float(0), &c).is_err());
    }

    #[test]
    fn power_closed_form_matches_own_quadrature() {
        let c = ctx();
        let y3 = build_sqrt(3);
        let ev = y3.evaluator(&c).unwrap();
        for a in [0.5, 2.0] {
            let a = c.float(a);
            let closed = output_power(&a, &c).unwrap();
            let q = power_quadrature(ev.as_ref(), &a, &c).unwrap();
            let d = (Float::with_val(c.bits(), &closed - &q) / &q).abs().to_f64();
            assert!(d < 1e-25, "{d}");
        }
    }

    #[test]
    fn power_close_to_erf_power() {
        let c = ctx();
        let a = c.float(2);
        let closed = output_power(&a, &c).unwrap();
        let q = erf_power_quadrature(&a, &c).unwrap();
        let d = (Float::with_val(c.bits(), &closed - &q) / &q).abs().to_f64();
        assert!(d < 4e-4, "{d}");
    }

    #[test]
    fn harmonics_arbitrated() {
        let c = ctx();
        let a = c.float(1.5);
        for k in [1, 3, 5, 7] {
            let r = arbitrate_harmonic(&a, k, SeventhHarmonicForm::Corrected, 1e-12, &c).unwrap();
            assert!(r.passed, "k={k} dev={}", r.deviation);
        }
        let bad = arbitrate_harmonic(&a, 7, SeventhHarmonicForm::AsPrinted, 1e-3, &c).unwrap();
        assert!(!bad.passed);
        assert!(harmonic_levels(&a, 2, &c).is_err());
        assert!(harmonic_levels(&a, 9, &c).is_err());
    }

    #[test]
    fn fifth_harmonic_vanishes_like_a5() {
        let c = PrecisionContext::new(50).unwrap();
        let a = c.parse("0.01").unwrap();
        let v = harmonic_levels(&a, 5, &c).unwrap().to_f64().abs();
        assert!(v < 1e-9, "{v}");
    }

    #[test]
    fn even_harmonics_vanish() {
        let c = ctx();
        let y4 = crate::spline::build_spline(4);
        let ev = y4.evaluator(&c).unwrap();
        let v = harmonic_quadrature(ev.as_ref(), &c.float(1.2), 2, &c).unwrap();
        assert!(v.abs() < 1e-30);
    }

    #[test]
    fn filter_endpoints_and_convolution() {
        let c = ctx();
        let m = FilterModel::new(&c.float(0.5), &c.float(1), &c).unwrap();
        assert!(filter_response_exact(&m, &c.float(0), &c).unwrap().abs() < 1e-35);
        let late = filter_response_exact(&m, &c.float(20), &c).unwrap();
        assert!((late.to_f64() - 1.0).abs() < 1e-20);
        for t in [0.2, 1.0] {
            let t = c.float(t);
            let a = filter_response_exact(&m, &t, &c).unwrap();
            let b = filter_convolution(&m, &t, &c).unwrap();
            let d = Float::with_val(c.bits(), &a - &b).abs().to_f64();
            assert!(d < 1e-28, "{d}");
        }
    }

    #[test]
    fn filter_with_oracle_is_exact() {
        let c = ctx();
        let m = FilterModel::new(&c.float(0.5), &c.float(1), &c).unwrap();
        let o = crate::approx::ErfOracle;
        let ev = o.evaluator(&c).unwrap();
        let t = c.float(0.8);
        assert_eq!(
            filter_response_approx(&m, ev.as_ref(), &t, &c).unwrap(),
            filter_response_exact(&m, &t, &c).unwrap()
        );
    }
}
