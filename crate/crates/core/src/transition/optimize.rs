use std::sync::Arc;

use rug::Float;

use super::sweep::{evaluate_on, max_abs, relative_errors, report_from_values, ReferenceGrid, SweepReport};
use crate::approx::{Approximant, Evaluator};
use crate::error::{Error, Result};
use crate::oracle::PrecisionContext;

/// inner(x) for x <= x_o, 1 beyond.
#[derive(Clone)]
pub struct PiecewiseApproximant {
    pub inner: Arc<dyn Approximant>,
    pub x_o: Float,
}

impl std::fmt::Debug for PiecewiseApproximant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PiecewiseApproximant")
            .field("inner", &self.inner.label())
            .field("x_o", &self.x_o.to_f64())
            .finish()
    }
}

impl PiecewiseApproximant {
    pub fn new(inner: Arc<dyn Approximant>, x_o: Float) -> Result<Self> {
        if x_o <= 0 {
            return Err(Error::Domain("transition point must be positive".into()));
        }
        Ok(PiecewiseApproximant { inner, x_o })
    }
}

struct PiecewiseEvaluator<'a> {
    inner: Box<dyn Evaluator + 'a>,
    x_o: Float,
    prec: u32,
}

impl Evaluator for PiecewiseEvaluator<'_> {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        if *x <= self.x_o {
            self.inner.eval_nonneg(x)
        } else {
            Ok(Float::with_val(self.prec, 1))
        }
    }
}

impl Approximant for PiecewiseApproximant {
    fn label(&self) -> String {
        format!("{} | 1 beyond {}", self.inner.label(), self.x_o.to_f64())
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(PiecewiseEvaluator { inner: self.inner.evaluator(ctx)?, x_o: self.x_o.clone(), prec: ctx.bits() }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TransitionRule {
    /// First grid point where the inner error reaches the tail's error.
    #[default]
    Crossing,
    /// Grid point minimizing the assembled bound; ties go to the smaller x.
    MinMax,
}

#[derive(Clone, Debug)]
pub enum TransitionOutcome {
    Transition {
        x_o: Float,
        index: usize,
        re_b: Float,
        argmax: Float,
    },
    /// The tail never beats the inner approximant on the grid.
    TailNeverBetter {
        re_b: Float,
        argmax: Float,
    },
}

impl TransitionOutcome {
    pub fn re_b(&self) -> &Float {
        match self {
            TransitionOutcome::Transition { re_b, .. } | TransitionOutcome::TailNeverBetter { re_b, .. } => re_b,
        }
    }

    pub fn x_o(&self) -> Option<&Float> {
        match self {
            TransitionOutcome::Transition { x_o, .. } => Some(x_o),
            TransitionOutcome::TailNeverBetter { .. } => None,
        }
    }
}

/// Chooses x_o on the grid for inner joined to the constant 1.
pub fn optimize_transition(
    inner: &dyn Approximant,
    grid: &ReferenceGrid,
    rule: TransitionRule,
) -> Result<TransitionOutcome> {
    let values = evaluate_on(inner, grid)?;
    choose_transition(&values, grid, rule)
}

pub fn choose_transition(values: &[Float], grid: &ReferenceGrid, rule: TransitionRule) -> Result<TransitionOutcome> {
    let prec = grid.ctx.bits();
    let n = grid.len();
    let inner: Vec<Float> = relative_errors(values, grid).into_iter().map(|v| v.abs()).collect();
    let ones: Vec<Float> = (0..n).map(|_| Float::with_val(prec, 1)).collect();
    let tail: Vec<Float> = relative_errors(&ones, grid).into_iter().map(|v| v.abs()).collect();

    // prefix[i] = (max inner[0..=i], arg), suffix[i] = (max tail[i..], arg)
    let mut prefix: Vec<(Float, usize)> = Vec::with_capacity(n);
    for (i, v) in inner.iter().enumerate() {
        match prefix.last() {
            Some((m, a)) if *m >= *v => prefix.push((m.clone(), *a)),
            _ => prefix.push((v.clone(), i)),
        }
    }
    let mut suffix: Vec<Option<(Float, usize)>> = vec![None; n + 1];
    for i in (0..n).rev() {
        suffix[i] = match &suffix[i + 1] {
            Some((m, a)) if *m >= tail[i] => Some((m.clone(), *a)),
            _ => Some((tail[i].clone(), i)),
        };
    }
    let assembled = |i: usize| -> (Float, usize) {
        let (pm, pa) = prefix[i].clone();
        match &suffix[i + 1] {
            Some((sm, sa)) if *sm > pm => (sm.clone(), *sa),
            _ => (pm, pa),
        }
    };

    let pick = match rule {
        TransitionRule::Crossing => (0..n).find(|&i| inner[i] >= tail[i]),
        TransitionRule::MinMax => {
            let mut best: Option<(Float, usize)> = None;
            for i in 0..n {
                let (v, _) = assembled(i);
                if best.as_ref().map_or(true, |(b, _)| v < *b) {
                    best = Some((v, i));
                }
            }
            best.map(|(_, i)| i).filter(|&i| i + 1 < n)
        }
    };
    match pick {
        Some(i) => {
            let (re_b, at) = assembled(i);
            Ok(TransitionOutcome::Transition { x_o: grid.xs[i].clone(), index: i, re_b, argmax: grid.xs[at].clone() })
        }
        None => {
            let (re_b, at) = max_abs(&inner);
            Ok(TransitionOutcome::TailNeverBetter { re_b, argmax: grid.xs[at].clone() })
        }
    }
}

/// Sweep of the assembled approximant after choosing x_o.
pub fn improved(
    inner: Arc<dyn Approximant>,
    grid: &ReferenceGrid,
    rule: TransitionRule,
) -> Result<(PiecewiseApproximant, SweepReport)> {
    let outcome = optimize_transition(inner.as_ref(), grid, rule)?;
    let x_o = outcome
        .x_o()
        .cloned()
        .ok_or_else(|| Error::Numeric(format!("no transition for {} on {}", inner.label(), grid.spec.describe())))?;
    let pw = PiecewiseApproximant::new(inner, x_o)?;
    let values = evaluate_on(&pw, grid)?;
    Ok((pw, report_from_values(&values, grid)))
}
