use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::approx::Approximant;
use crate::error::{Error, Result};
use crate::grid::format_float;
use crate::oracle::{erf_ref, gauss_ref, PrecisionContext};

/// x_i = a + i (b - a)/N for i = 1..=N.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub a: Float,
    pub b: Float,
    pub points: usize,
}

impl GridSpec {
    pub fn new(a: Float, b: Float, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Domain("a sweep needs at least 2 points".into()));
        }
        if b <= a {
            return Err(Error::Domain("sweep interval must have b > a".into()));
        }
        Ok(GridSpec { a, b, points })
    }

    pub fn from_f64(a: f64, b: f64, points: usize, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(ctx.float(a), ctx.float(b), points)
    }

    pub fn x(&self, i: usize) -> Float {
        let prec = self.a.prec().max(self.b.prec());
        let w = Float::with_val(prec, &self.b - &self.a) * i as u64 / self.points as u64;
        w + &self.a
    }

    pub fn step(&self) -> Float {
        let prec = self.a.prec().max(self.b.prec());
        Float::with_val(prec, &self.b - &self.a) / self.points as u64
    }

    pub fn describe(&self) -> String {
        format!("({}, {}] x {}", short(&self.a), short(&self.b), self.points)
    }
}

fn short(v: &Float) -> String {
    let s = format!("{:.6}", v.to_f64());
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// What a sweep compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Erf,
    Gauss,
}

/// Reference values on a grid, computed once and shared by many sweeps.
#[derive(Clone, Debug)]
pub struct ReferenceGrid {
    pub spec: GridSpec,
    pub ctx: PrecisionContext,
    pub target: Target,
    pub xs: Vec<Float>,
    pub values: Vec<Float>,
}

impl ReferenceGrid {
    pub fn new(spec: GridSpec, target: Target, ctx: &PrecisionContext) -> Result<Self> {
        let xs: Vec<Float> = (1..=spec.points).map(|i| Float::with_val(ctx.bits(), spec.x(i))).collect();
        let values = xs
            .par_iter()
            .map(|x| match target {
                Target::Erf => erf_ref(x, ctx),
                Target::Gauss => Ok(gauss_ref(x, ctx)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReferenceGrid { spec, ctx: *ctx, target, xs, values })
    }

    pub fn erf(spec: GridSpec, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(spec, Target::Erf, ctx)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub spec: GridSpec,
    pub digits: u32,
    pub xs: Vec<Float>,
    /// 1 - approx/reference at each grid point
    pub re: Vec<Float>,
    pub re_b: Float,
    pub argmax: Float,
    pub argmax_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub grid: String,
    pub points: usize,
    pub digits: u32,
    pub re_b: String,
    pub argmax: String,
}

impl SweepReport {
    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            grid: self.spec.describe(),
            points: self.spec.points,
            digits: self.digits,
            re_b: format_float(&self.re_b, 6),
            argmax: format_float(&self.argmax, 10),
        }
    }
}

/// 1 - v/r for every grid point, in grid order.
pub fn relative_errors(values: &[Float], grid: &ReferenceGrid) -> Vec<Float> {
    let prec = grid.ctx.bits();
    values
        .par_iter()
        .zip(grid.values.par_iter())
        .map(|(v, r)| Float::with_val(prec, 1) - Float::with_val(prec, v / r))
        .collect()
}

/// Approximant values at every grid point.
pub fn evaluate_on(approx: &dyn Approximant, grid: &ReferenceGrid) -> Result<Vec<Float>> {
    let ev = approx.evaluator(&grid.ctx)?;
    grid.xs.par_iter().map(|x| ev.eval(x)).collect()
}

/// (max |v|, index of the first maximum)
pub(crate) fn max_abs(v: &[Float]) -> (Float, usize) {
    let mut best = Float::new(v.first().map_or(64, |f| f.prec()));
    let mut at = 0;
    for (i, x) in v.iter().enumerate() {
        let a = Float::with_val(x.prec(), x.abs_ref());
        if a > best {
            best = a;
            at = i;
        }
    }
    (best, at)
}

pub fn sweep(approx: &dyn Approximant, grid: &ReferenceGrid) -> Result<SweepReport> {
    let values = evaluate_on(approx, grid)?;
    Ok(report_from_values(&values, grid))
}

pub fn report_from_values(values: &[Float], grid: &ReferenceGrid) -> SweepReport {
    let re = relative_errors(values, grid);
    let (re_b, at) = max_abs(&re);
    SweepReport {
        spec: grid.spec.clone(),
        digits: grid.ctx.working_digits(),
        xs: grid.xs.clone(),
        re,
        re_b,
        argmax: grid.xs[at].clone(),
        argmax_index: at,
    }
}

/// One-shot sweep against erf.
pub fn sweep_interval(approx: &dyn Approximant, spec: GridSpec, ctx: &PrecisionContext) -> Result<SweepReport> {
    sweep(approx, &ReferenceGrid::erf(spec, ctx)?)
}
