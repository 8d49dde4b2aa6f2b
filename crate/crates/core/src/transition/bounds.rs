use std::sync::Arc;

use rug::Float;

use super::sweep::{evaluate_on, ReferenceGrid};
use crate::approx::Approximant;
use crate::error::{Error, Result};
use crate::oracle::PrecisionContext;

/// lower = base/(1 + eps), upper = base/(1 - eps)
#[derive(Clone)]
pub struct EnvelopePair {
    pub base: Arc<dyn Approximant>,
    pub eps: Float,
}

pub fn envelope(base: Arc<dyn Approximant>, eps: Float) -> Result<EnvelopePair> {
    if eps <= 0 || eps >= 1 {
        return Err(Error::Domain("envelope bound must lie in (0, 1)".into()));
    }
    Ok(EnvelopePair { base, eps })
}

/// Certified bound: value rounded up to three significant figures.
pub fn round_up_3sig(v: &Float) -> Float {
    if v.is_zero() {
        return v.clone();
    }
    let prec = v.prec();
    let e = v.to_f64().abs().log10().floor() as i32 - 2;
    let scale = Float::with_val(prec, rug::ops::Pow::pow(Float::with_val(prec, 10), e));
    let q = Float::with_val(prec, v / &scale);
    let mut c = q;
    c.ceil_mut();
    c * scale
}

#[derive(Clone, Debug)]
pub struct EnvelopeCheck {
    /// max relative error of the lower function
    pub lower_re_b: Float,
    /// max relative error of the upper function
    pub upper_re_b: Float,
    pub violations: usize,
}

impl EnvelopePair {
    /// Envelope bounds 2 eps/(1 + eps) and 2 eps/(1 - eps).
    pub fn formula_bounds(&self) -> (Float, Float) {
        formula_bounds(&self.eps)
    }

    pub fn eval(&self, x: &Float, ctx: &PrecisionContext) -> Result<(Float, Float)> {
        let v = self.base.eval(x, ctx)?;
        let one = ctx.float(1);
        let lo = Float::with_val(ctx.bits(), &v / Float::with_val(ctx.bits(), &one + &self.eps));
        let hi = Float::with_val(ctx.bits(), &v / Float::with_val(ctx.bits(), &one - &self.eps));
        Ok((lo, hi))
    }

    /// Re-sweeps both envelope functions and counts points where
    /// lower < erf < upper fails.
    pub fn check(&self, grid: &ReferenceGrid) -> Result<EnvelopeCheck> {
        let prec = grid.ctx.bits();
        let values = evaluate_on(self.base.as_ref(), grid)?;
        let one = Float::with_val(prec, 1);
        let lo_div = Float::with_val(prec, &one + &self.eps);
        let hi_div = Float::with_val(prec, &one - &self.eps);
        let mut lower_re_b = Float::new(prec);
        let mut upper_re_b = Float::new(prec);
        let mut violations = 0;
        for (v, r) in values.iter().zip(&grid.values) {
            let lo = Float::with_val(prec, v / &lo_div);
            let hi = Float::with_val(prec, v / &hi_div);
            if !(lo < *r && *r < hi) {
                violations += 1;
            }
            let rl = (Float::with_val(prec, 1) - Float::with_val(prec, &lo / r)).abs();
            let ru = (Float::with_val(prec, 1) - Float::with_val(prec, &hi / r)).abs();
            if rl > lower_re_b {
                lower_re_b = rl;
            }
            if ru > upper_re_b {
                upper_re_b = ru;
            }
        }
        Ok(EnvelopeCheck { lower_re_b, upper_re_b, violations })
    }
}

pub fn formula_bounds(eps: &Float) -> (Float, Float) {
    let prec = eps.prec();
    let two = Float::with_val(prec, eps * 2u32);
    let lo = Float::with_val(prec, &two / Float::with_val(prec, eps + 1u32));
    let hi = Float::with_val(prec, &two / Float::with_val(prec, 1u32 - eps));
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PublishedBound {
    Chu,
    Neuman,
    Yang,
}

/// Chu parameters p = 1, q = 4/pi.
pub fn published_bounds(x: &Float, which: PublishedBound, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if *x <= 0 {
        return Err(Error::Domain("published bounds need x > 0".into()));
    }
    let prec = ctx.bits();
    let x = ctx.float(x);
    let x2 = Float::with_val(prec, x.square_ref());
    let pi = ctx.pi();
    let e = |k: &Float| (-Float::with_val(prec, k * &x2)).exp();
    let one = ctx.float(1);
    Ok(match which {
        PublishedBound::Chu => {
            let q = Float::with_val(prec, 4u32) / &pi;
            let lo = (ctx.float(1) - e(&one)).sqrt();
            let hi = (ctx.float(1) - e(&q)).sqrt();
            (lo, hi)
        }
        PublishedBound::Neuman => {
            let sp = ctx.sqrt_pi();
            let lo = Float::with_val(prec, &x * 2u32) / &sp * e(&(ctx.float(1) / 3u32));
            let hi = Float::with_val(prec, &x * 4u32) / (Float::with_val(prec, &sp * 3u32)) * (e(&one) / 2u32 + 1u32);
            (lo, hi)
        }
        PublishedBound::Yang => {
            let c1 = Float::with_val(prec, 20u32) / (Float::with_val(prec, &pi * 3u32))
                * (ctx.float(1) - Float::with_val(prec, &pi / 4u32));
            let c2 = ctx.float(8) / 3u32 * (ctx.float(1) - ctx.float(5) / (Float::with_val(prec, &pi * 2u32)));
            let lo = (ctx.float(1) - c1 * e(&(ctx.float(8) / 5u32)) - c2 * e(&one)).sqrt();
            let p0 = yang_p0(ctx);
            let lam = yang_lambda(&p0, ctx);
            let mu = yang_mu(&p0, ctx);
            let rest = ctx.float(1) - &lam;
            let hi = (ctx.float(1) - lam * e(&p0) - rest * e(&mu)).sqrt();
            (lo, hi)
        }
    })
}

/// p0 = (21 pi - 60 + sqrt(3(147 pi^2 - 920 pi + 1440)))/(30 (pi - 3))
pub fn yang_p0(ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits();
    let pi = ctx.pi();
    let pi2 = Float::with_val(prec, pi.square_ref());
    let disc = (pi2 * 147u32 - Float::with_val(prec, &pi * 920u32) + 1440u32) * 3u32;
    let num = Float::with_val(prec, &pi * 21u32) - 60u32 + disc.sqrt();
    num / (Float::with_val(prec, &pi - 3u32) * 30u32)
}

/// lambda(p) = 4[7 pi - 20 - 5(pi - 3)p] / (pi (15 p^2 - 40 p + 28))
pub fn yang_lambda(p: &Float, ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits();
    let pi = ctx.pi();
    let top = (Float::with_val(prec, &pi * 7u32) - 20u32 - Float::with_val(prec, &pi - 3u32) * p * 5u32) * 4u32;
    let bot = Float::with_val(prec, p.square_ref()) * 15u32 - Float::with_val(prec, p * 40u32) + 28u32;
    top / (bot * pi)
}

/// mu(p) = 4(5p - 7)/(5(3p - 4))
pub fn yang_mu(p: &Float, _ctx: &PrecisionContext) -> Float {
    let prec = p.prec();
    let top = (Float::with_val(prec, p * 5u32) - 7u32) * 4u32;
    let bot = (Float::with_val(prec, p * 3u32) - 4u32) * 5u32;
    top / bot
}
