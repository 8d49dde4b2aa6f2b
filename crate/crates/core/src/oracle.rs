//! High-precision reference values and relative-error measurement.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Decimal working precision plus guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    working_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 34;
    pub const HIGH_DIGITS: u32 = 70;

    pub fn new(working_digits: u32) -> Result<Self> {
        Self::with_guard(working_digits, 10)
    }

    pub fn with_guard(working_digits: u32, guard_digits: u32) -> Result<Self> {
        if working_digits < 16 {
            return Err(Error::Domain(format!("working digits must be >= 16, got {working_digits}")));
        }
        if guard_digits < 10 {
            return Err(Error::Domain(format!("guard digits must be >= 10, got {guard_digits}")));
        }
        Ok(PrecisionContext { working_digits, guard_digits })
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary precision covering working plus guard digits.
    pub fn bits(&self) -> u32 {
        ((self.working_digits + self.guard_digits) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    /// Parses a decimal string at this precision.
    pub fn parse(&self, s: &str) -> Result<Float> {
        let v = Float::parse(s.trim()).map_err(|e| Error::Usage(format!("bad number {s:?}: {e}")))?;
        Ok(Float::with_val(self.bits(), v))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn sqrt_pi(&self) -> Float {
        self.pi().sqrt()
    }

    /// 10^-(working + guard)
    pub fn tolerance(&self) -> Float {
        let ten = self.float(10);
        ten.pow(-((self.working_digits + self.guard_digits) as i32))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_digits: Self::DEFAULT_DIGITS, guard_digits: 10 }
    }
}

/// erf(x) from the all-positive series (2/sqrt(pi)) e^{-x^2} sum 2^n x^{2n+1}/(1*3*...*(2n+1)).
/// Negative arguments use erf(-x) = -erf(x).
pub fn erf_ref(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if !x.is_finite() {
        return Err(Error::Domain("erf_ref needs a finite argument".into()));
    }
    if x.is_sign_negative() && !x.is_zero() {
        let v = erf_ref(&Float::with_val(ctx.bits(), -x), ctx)?;
        return Ok(-v);
    }
    let prec = ctx.bits();
    let x = Float::with_val(prec, x);
    if x.is_zero() {
        return Ok(Float::new(prec));
    }
    let tol = ctx.tolerance();
    let x2 = Float::with_val(prec, x.square_ref());
    let e = Float::with_val(prec, -&x2).exp();
    // 1 - erf(x) < e^{-x^2}/(x sqrt(pi)); below the tolerance erf is 1 at this precision.
    let tail = Float::with_val(prec, &e / &x) / ctx.sqrt_pi();
    if tail < tol {
        return Ok(Float::with_val(prec, 1));
    }
    let two_x2 = Float::with_val(prec, &x2 * 2u32);
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut n: u64 = 0;
    let half = Float::with_val(prec, 0.5);
    loop {
        let ratio = Float::with_val(prec, &two_x2 / (2 * n + 3));
        term *= &ratio;
        let before = sum.clone();
        sum += &term;
        debug_assert!(sum >= before, "oracle partial sums must increase");
        n += 1;
        if ratio < half && Float::with_val(prec, &term / &sum) < tol {
            break;
        }
    }
    let two_over_sqrt_pi = Float::with_val(prec, 2u32) / ctx.sqrt_pi();
    Ok(sum * e * two_over_sqrt_pi)
}

/// erf_ref for an f64 argument.
pub fn erf_ref_f64(x: f64, ctx: &PrecisionContext) -> Result<Float> {
    erf_ref(&ctx.float(x), ctx)
}

/// exp(-x^2) at the context precision.
pub fn gauss_ref(x: &Float, ctx: &PrecisionContext) -> Float {
    exp_neg_sq(x, ctx.bits())
}

/// exp(-x^2) at `prec` bits.
pub fn exp_neg_sq(x: &Float, prec: u32) -> Float {
    let x2 = Float::with_val(prec, x.square_ref());
    (-x2).exp()
}

/// Modified Bessel function I_0 or I_1 by its power series.
pub fn bessel_i(order: u32, z: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if order > 1 {
        return Err(Error::Domain(format!("bessel_i supports orders 0 and 1, got {order}")));
    }
    if !z.is_finite() || z.is_sign_negative() && !z.is_zero() {
        return Err(Error::Domain("bessel_i needs a finite z >= 0".into()));
    }
    let prec = ctx.bits();
    let half_z = Float::with_val(prec, z) / 2u32;
    let q = Float::with_val(prec, half_z.square_ref());
    let mut term = if order == 0 { Float::with_val(prec, 1) } else { half_z.clone() };
    if term.is_zero() {
        return Ok(term);
    }
    let mut sum = term.clone();
    let tol = ctx.tolerance();
    let half = Float::with_val(prec, 0.5);
    let mut k: u64 = 0;
    loop {
        let ratio = Float::with_val(prec, &q / ((k + 1) * (k + 1 + order as u64)));
        term *= &ratio;
        sum += &term;
        k += 1;
        if ratio < half && Float::with_val(prec, &term / &sum) < tol {
            break;
        }
    }
    Ok(sum)
}

/// re = 1 - approx/reference
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct RelativeError {
    pub value: Float,
}

impl RelativeError {
    pub fn abs(&self) -> Float {
        Float::with_val(self.value.prec(), self.value.abs_ref())
    }
}

pub fn relative_error(approx_value: &Float, ref_value: &Float) -> Result<RelativeError> {
    if ref_value.is_zero() {
        return Err(Error::Domain("relative error against a zero reference".into()));
    }
    let prec = approx_value.prec().max(ref_value.prec());
    let q = Float::with_val(prec, approx_value / ref_value);
    Ok(RelativeError { value: Float::with_val(prec, 1) - q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn close(a: &Float, b: f64, rel: f64) -> bool {
        ((a.to_f64() - b) / b).abs() < rel
    }

    #[test]
    fn oracle_values() {
        let c = ctx();
        assert!(close(&erf_ref_f64(0.5, &c).unwrap(), 0.5204998778, 1e-10));
        assert!(erf_ref_f64(0.0, &c).unwrap().is_zero());
        let d = erf_ref_f64(3.0, &c).unwrap() - erf_ref_f64(2.5, &c).unwrap();
        assert!(close(&d, 3.848615204e-4, 1e-9));
        assert_eq!(erf_ref_f64(-0.5, &c).unwrap(), -erf_ref_f64(0.5, &c).unwrap());
        assert!(erf_ref_f64(f64::NAN, &c).is_err());
    }

    #[test]
    fn oracle_matches_mpfr() {
        let c = PrecisionContext::new(50).unwrap();
        for x in ["0.001", "0.1", "1", "2.75", "5", "7.5", "9"] {
            let xf = c.parse(x).unwrap();
            let ours = erf_ref(&xf, &c).unwrap();
            let mpfr = Float::with_val(c.bits() + 64, &xf).erf();
            let re = relative_error(&ours, &mpfr).unwrap().abs();
            assert!(re < c.float(1e-50), "x={x}, re={re}");
        }
    }

    #[test]
    fn precision_doubling_agrees() {
        let lo = PrecisionContext::new(34).unwrap();
        let hi = PrecisionContext::new(68).unwrap();
        for x in ["0.1", "1", "5", "12"] {
            let a = erf_ref(&lo.parse(x).unwrap(), &lo).unwrap();
            let b = erf_ref(&hi.parse(x).unwrap(), &hi).unwrap();
            let re = relative_error(&a, &b).unwrap().abs();
            assert!(re < lo.float(1e-34), "x={x}");
        }
    }

    #[test]
    fn bessel_values() {
        let c = ctx();
        assert_eq!(bessel_i(0, &c.float(0), &c).unwrap(), 1);
        assert!(bessel_i(1, &c.float(0), &c).unwrap().is_zero());
        assert!(close(&bessel_i(0, &c.float(1), &c).unwrap(), 1.2660658777520082, 1e-15));
        assert!(close(&bessel_i(1, &c.float(1), &c).unwrap(), 0.5651591039924851, 1e-15));
        assert!(bessel_i(2, &c.float(1), &c).is_err());
    }

    #[test]
    fn relative_error_basics() {
        let c = ctx();
        assert_eq!(relative_error(&c.float(1), &c.float(2)).unwrap().value, 0.5);
        assert!(relative_error(&c.float(2), &c.float(2)).unwrap().value.is_zero());
        assert!(relative_error(&c.float(2), &c.float(0)).is_err());
    }

    #[test]
    fn context_validation() {
        assert!(PrecisionContext::new(15).is_err());
        assert!(PrecisionContext::with_guard(20, 9).is_err());
        assert!(PrecisionContext::new(70).unwrap().bits() > 260);
    }
}
