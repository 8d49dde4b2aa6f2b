//! Common evaluation interface for every erf approximant.

use rug::Float;

use crate::error::Result;
use crate::exact::{CompiledPolyExp, PolyExpSum};
use crate::oracle::{erf_ref, PrecisionContext};

/// A prepared evaluator bound to one precision.
pub trait Evaluator: Send + Sync {
    /// Value for x >= 0.
    fn eval_nonneg(&self, x: &Float) -> Result<Float>;

    /// Value on the whole line via erf(-x) = -erf(x).
    fn eval(&self, x: &Float) -> Result<Float> {
        if x.is_sign_negative() && !x.is_zero() {
            let neg = Float::with_val(x.prec(), -x);
            Ok(-self.eval_nonneg(&neg)?)
        } else {
            self.eval_nonneg(x)
        }
    }
}

pub trait Approximant: Send + Sync {
    fn label(&self) -> String;

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>>;

    /// One-off evaluation; prefer `evaluator` in loops.
    fn eval(&self, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
        self.evaluator(ctx)?.eval(x)
    }
}

/// (1/sqrt(pi)) * form(x)
#[derive(Clone, Debug)]
pub struct PolyExpApproximant {
    pub label: String,
    pub form: PolyExpSum,
}

pub struct PolyExpEvaluator {
    compiled: CompiledPolyExp,
    inv_sqrt_pi: Float,
}

impl PolyExpEvaluator {
    pub fn new(form: &PolyExpSum, ctx: &PrecisionContext) -> Self {
        PolyExpEvaluator { compiled: form.compile(ctx.bits()), inv_sqrt_pi: ctx.sqrt_pi().recip() }
    }
}

impl Evaluator for PolyExpEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        Ok(self.compiled.eval(x) * &self.inv_sqrt_pi)
    }
}

impl Approximant for PolyExpApproximant {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(PolyExpEvaluator::new(&self.form, ctx)))
    }
}

/// The reference itself, usable wherever an approximant is expected.
#[derive(Clone, Copy, Debug, Default)]
pub struct ErfOracle;

struct OracleEvaluator(PrecisionContext);

impl Evaluator for OracleEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        erf_ref(x, &self.0)
    }
}

impl Approximant for ErfOracle {
    fn label(&self) -> String {
        "erf".into()
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(OracleEvaluator(*ctx)))
    }
}

/// erf(x) ~ 1 for x > 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantOne;

struct OneEvaluator(u32);

impl Evaluator for OneEvaluator {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        Ok(if x.is_zero() { Float::new(self.0) } else { Float::with_val(self.0, 1) })
    }
}

impl Approximant for ConstantOne {
    fn label(&self) -> String {
        "1".into()
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(OneEvaluator(ctx.bits())))
    }
}
