//! Tabulated erf increments on a grid plus a spline over the last partial cell.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::approx::{Approximant, Evaluator};
use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::oracle::{erf_ref, PrecisionContext};
use crate::spline::SegmentEvaluator;

/// c_k = erf(k Delta) - erf((k-1) Delta), c_0 = 0.
#[derive(Clone, Debug)]
pub struct GridTable {
    pub resolution: Rational,
    pub c: Vec<Float>,
    /// erf(k Delta)
    pub cumulative: Vec<Float>,
    pub digits: u32,
    /// First k whose increment fell below the precision floor, if any.
    pub exhausted_from: Option<usize>,
}

pub fn build_grid_table(resolution: &Rational, k_max: usize, ctx: &PrecisionContext) -> Result<GridTable> {
    if *resolution <= 0 {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let prec = ctx.bits();
    let tol = ctx.tolerance();
    let mut c = vec![Float::new(prec)];
    let mut cumulative = vec![Float::new(prec)];
    let mut exhausted_from = None;
    for k in 1..=k_max {
        let x = Float::with_val(prec, Rational::from(resolution * k as u64));
        let v = if exhausted_from.is_some() { cumulative[k - 1].clone() } else { erf_ref(&x, ctx)? };
        let d = Float::with_val(prec, &v - &cumulative[k - 1]);
        if exhausted_from.is_none() && d < tol {
            exhausted_from = Some(k);
        }
        if exhausted_from.is_some() {
            c.push(Float::new(prec));
            cumulative.push(cumulative[k - 1].clone());
        } else {
            c.push(d);
            cumulative.push(v);
        }
    }
    Ok(GridTable { resolution: resolution.clone(), c, cumulative, digits: ctx.working_digits(), exhausted_from })
}

impl GridTable {
    pub fn k_max(&self) -> usize {
        self.c.len() - 1
    }

    /// Serializable view: Delta as "num/den", c_k as decimal strings.
    pub fn to_record(&self) -> GridTableRecord {
        GridTableRecord {
            resolution: format_rational(&self.resolution),
            digits: self.digits,
            c: self.c.iter().map(|v| format_float(v, self.digits as usize)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct GridTableRecord {
    pub resolution: String,
    pub digits: u32,
    pub c: Vec<String>,
}

pub(crate) fn format_float(v: &Float, digits: usize) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.to_string_radix(10, Some(digits))
}

/// (floor(x/Delta), x - Delta floor(x/Delta)), computed from the exact
/// binary value of x.
pub fn floor_cells(x: &Float, resolution: &Rational) -> Result<(usize, Float)> {
    if *x < 0 {
        return Err(Error::Domain("floor_cells needs x >= 0".into()));
    }
    let xr = x.to_rational().ok_or_else(|| Error::Domain("floor_cells needs finite x".into()))?;
    let q = Rational::from(&xr / resolution);
    let (_, floor) = q.fract_floor(Integer::new());
    let index = floor.to_usize().ok_or_else(|| Error::Range("cell index overflow".into()))?;
    let start = Rational::from(resolution * index as u64);
    let offset = Float::with_val(x.prec(), &xr - start);
    Ok((index, offset))
}

/// f_{n,Delta}(x).
pub fn eval_grid_spline(n: usize, table: &GridTable, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    GridEvaluator::new(n, table, ctx).eval_nonneg(x)
}

#[derive(Clone, Debug)]
pub struct GridApproximant {
    pub order: usize,
    pub table: GridTable,
}

impl GridApproximant {
    /// Table sized to cover [0, x_max].
    pub fn new(order: usize, resolution: &Rational, x_max: f64, ctx: &PrecisionContext) -> Result<Self> {
        let xm = Rational::from_f64(x_max).ok_or_else(|| Error::Domain("bad x_max".into()))?;
        let cells = Rational::from(&xm / resolution);
        let (_, k) = cells.fract_floor(Integer::new());
        let k_max = k.to_usize().unwrap_or(0) + 1;
        Ok(GridApproximant { order, table: build_grid_table(resolution, k_max, ctx)? })
    }
}

pub struct GridEvaluator<'a> {
    table: &'a GridTable,
    segment: SegmentEvaluator,
    prec: u32,
}

impl<'a> GridEvaluator<'a> {
    pub fn new(n: usize, table: &'a GridTable, ctx: &PrecisionContext) -> Self {
        GridEvaluator { table, segment: SegmentEvaluator::new(n, ctx), prec: ctx.bits() }
    }
}

impl Evaluator for GridEvaluator<'_> {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        let x = Float::with_val(self.prec, x);
        let (k, _) = floor_cells(&x, &self.table.resolution)?;
        if k > self.table.k_max() {
            return Err(Error::Range(format!(
                "x = {} lies beyond the grid table (cells 0..={})",
                x.to_f64(),
                self.table.k_max()
            )));
        }
        let a = Float::with_val(self.prec, Rational::from(&self.table.resolution * k as u64));
        let base = Float::with_val(self.prec, &self.table.cumulative[k]);
        Ok(base + self.segment.eval(&a, &x))
    }
}

impl Approximant for GridApproximant {
    fn label(&self) -> String {
        format!("grid n={} delta={}", self.order, format_rational(&self.table.resolution))
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(GridEvaluator::new(self.order, &self.table, ctx)))
    }
}

/// Knots 0 = x_0 < x_1 < ... < x_m with erf(x_k) tabulated.
#[derive(Clone, Debug)]
pub struct NonUniformGrid {
    pub order: usize,
    pub knots: Vec<Float>,
    /// erf(x_k), aligned with `knots`
    pub cumulative: Vec<Float>,
    /// c_k = erf(x_k) - erf(x_{k-1}), c_0 = 0
    pub c: Vec<Float>,
}

pub fn build_nonuniform(order: usize, interior_knots: &[Float], ctx: &PrecisionContext) -> Result<NonUniformGrid> {
    let prec = ctx.bits();
    let mut knots = vec![Float::new(prec)];
    for k in interior_knots {
        if *k <= *knots.last().expect("nonempty") {
            return Err(Error::Domain("knots must be positive and strictly increasing".into()));
        }
        knots.push(Float::with_val(prec, k));
    }
    let mut cumulative = Vec::with_capacity(knots.len());
    let mut c = Vec::with_capacity(knots.len());
    for (i, k) in knots.iter().enumerate() {
        let v = erf_ref(k, ctx)?;
        c.push(if i == 0 { Float::new(prec) } else { Float::with_val(prec, &v - &cumulative[i - 1]) });
        cumulative.push(v);
    }
    Ok(NonUniformGrid { order, knots, cumulative, c })
}

impl NonUniformGrid {
    /// Index of the largest knot <= x.
    pub fn select(&self, x: &Float) -> usize {
        self.knots.partition_point(|k| k <= x) - 1
    }
}

pub fn eval_nonuniform(grid: &NonUniformGrid, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    grid.evaluator(ctx)?.eval_nonneg(x)
}

struct NonUniformEvaluator<'a> {
    grid: &'a NonUniformGrid,
    segment: SegmentEvaluator,
    prec: u32,
}

impl Evaluator for NonUniformEvaluator<'_> {
    fn eval_nonneg(&self, x: &Float) -> Result<Float> {
        if *x < 0 {
            return Err(Error::Domain("eval_nonuniform needs x >= 0".into()));
        }
        let x = Float::with_val(self.prec, x);
        let s = self.grid.select(&x);
        let base = Float::with_val(self.prec, &self.grid.cumulative[s]);
        Ok(base + self.segment.eval(&self.grid.knots[s], &x))
    }
}

impl Approximant for NonUniformGrid {
    fn label(&self) -> String {
        format!("nonuniform grid n={} knots={}", self.order, self.knots.len() - 1)
    }

    fn evaluator(&self, ctx: &PrecisionContext) -> Result<Box<dyn Evaluator + '_>> {
        Ok(Box::new(NonUniformEvaluator {
            grid: self,
            segment: SegmentEvaluator::new(self.order, ctx),
            prec: ctx.bits(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::relative_error;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn half() -> Rational {
        Rational::from((1, 2))
    }

    #[test]
    fn printed_increments() {
        let c = ctx();
        let t = build_grid_table(&half(), 12, &c).unwrap();
        let printed = [
            5.204998778e-1,
            3.222009151e-1,
            1.234043535e-1,
            2.921711854e-2,
            4.270782964e-3,
            3.848615204e-4,
            2.134739863e-5,
            7.276811144e-7,
            1.522064186e-8,
            1.950785844e-10,
            1.530101947e-12,
            7.336328181e-15,
        ];
        assert!(t.c[0].is_zero());
        for (k, v) in printed.iter().enumerate() {
            let got = t.c[k + 1].to_f64();
            assert!(((got - v) / v).abs() < 1e-9, "k={} got {got}", k + 1);
        }
        for k in 1..=12 {
            assert!(t.c[k] > 0);
            if k >= 3 {
                assert!(t.c[k] < t.c[k - 1]);
            }
        }
        assert!(build_grid_table(&Rational::new(), 3, &c).is_err());
    }

    #[test]
    fn table_exhausts_far_out() {
        let t = build_grid_table(&Rational::from(2), 10, &ctx()).unwrap();
        let k = t.exhausted_from.expect("erf saturates by x = 20");
        assert!(k >= 5);
        assert!(t.c[k..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn floor_cells_boundaries() {
        let c = ctx();
        let (k, off) = floor_cells(&c.float(1.0), &half()).unwrap();
        assert_eq!((k, off.is_zero()), (2, true));
        let (k, off) = floor_cells(&c.parse("0.74").unwrap(), &half()).unwrap();
        assert_eq!(k, 1);
        assert!((off.to_f64() - 0.24).abs() < 1e-15);
        let below = c.parse("0.49999999999999999999").unwrap();
        let (k, off) = floor_cells(&below, &half()).unwrap();
        assert_eq!(k, 0);
        assert!(off.to_f64() > 0.49);
        assert!(floor_cells(&c.float(-1), &half()).is_err());
    }

    #[test]
    fn first_cell_is_zero_order_spline() {
        let c = ctx();
        let t = build_grid_table(&half(), 4, &c).unwrap();
        let x = c.parse("0.3").unwrap();
        let v = eval_grid_spline(0, &t, &x, &c).unwrap();
        let e = crate::oracle::exp_neg_sq(&x, c.bits());
        let expect = Float::with_val(c.bits(), &x / c.sqrt_pi()) * (e + 1u32);
        assert!(relative_error(&v, &expect).unwrap().abs() < 1e-40);
    }

    /// Printed explicit forms for orders 1 and 2.
    #[test]
    fn explicit_low_orders() {
        let c = ctx();
        let delta = Rational::from((3, 4));
        let t = build_grid_table(&delta, 8, &c).unwrap();
        let sp = c.sqrt_pi();
        for xs in ["0.2", "1.1", "2.9", "4.5"] {
            let x = c.parse(xs).unwrap();
            let (k, h) = floor_cells(&x, &delta).unwrap();
            let a = c.float(Rational::from(&delta * k as u64));
            let ea = crate::oracle::exp_neg_sq(&a, c.bits());
            let ex = crate::oracle::exp_neg_sq(&x, c.bits());
            let base = t.cumulative[k].clone();
            let s1 = Float::with_val(c.bits(), &h / &sp) * Float::with_val(c.bits(), &ea + &ex);
            let diff_ax = Float::with_val(c.bits(), &a * &ea) - Float::with_val(c.bits(), &x * &ex);
            let h2 = Float::with_val(c.bits(), h.square_ref());
            let f1 = base.clone() + &s1 - Float::with_val(c.bits(), &h2 / (c.float(3) * &sp)) * &diff_ax;
            let got1 = eval_grid_spline(1, &t, &x, &c).unwrap();
            assert!(relative_error(&got1, &f1).unwrap().abs() < 1e-40, "n=1 x={xs}");
            let h3 = Float::with_val(c.bits(), &h2 * &h);
            let a2 = Float::with_val(c.bits(), a.square_ref());
            let x2 = Float::with_val(c.bits(), x.square_ref());
            let p2 = (c.float(1) - a2 * 2u32) * &ea + (c.float(1) - x2 * 2u32) * &ex;
            let f2 = base + &s1
                - Float::with_val(c.bits(), &h2 * 2u32) / (c.float(5) * &sp) * &diff_ax
                - h3 / (c.float(30) * &sp) * p2;
            let got2 = eval_grid_spline(2, &t, &x, &c).unwrap();
            assert!(relative_error(&got2, &f2).unwrap().abs() < 1e-40, "n=2 x={xs}");
        }
    }

    #[test]
    fn continuity_at_knots_and_range() {
        let c = ctx();
        let t = build_grid_table(&half(), 6, &c).unwrap();
        for k in 1..=5u32 {
            let knot = c.float(Rational::from((k, 2)));
            let at = eval_grid_spline(3, &t, &knot, &c).unwrap();
            assert_eq!(at, t.cumulative[k as usize]);
            let eps = c.parse("1e-30").unwrap();
            let before = eval_grid_spline(3, &t, &Float::with_val(c.bits(), &knot - &eps), &c).unwrap();
            // the jump is the order-3 rule's error over one full cell
            let jump = Float::with_val(c.bits(), &before - &at).abs();
            assert!(jump < 1e-6, "k={k} jump={jump}");
            let seg = SegmentEvaluator::new(3, &c);
            let lo = c.float(Rational::from((k - 1, 2)));
            let cell = Float::with_val(c.bits(), &t.cumulative[k as usize - 1] + seg.eval(&lo, &knot));
            let cell_err = Float::with_val(c.bits(), &cell - &at).abs();
            assert!(Float::with_val(c.bits(), &jump - &cell_err).abs() < 1e-25);
        }
        assert!(matches!(eval_grid_spline(2, &t, &c.float(3.6), &c), Err(Error::Range(_))));
    }

    #[test]
    fn uniform_knots_match_grid() {
        let c = ctx();
        let knots: Vec<Float> = (1..=12).map(|k| c.float(Rational::from((k, 2)))).collect();
        let g = build_nonuniform(2, &knots, &c).unwrap();
        let t = build_grid_table(&half(), 12, &c).unwrap();
        for xs in ["0.2", "2.75", "5.9"] {
            let x = c.parse(xs).unwrap();
            let a = eval_nonuniform(&g, &x, &c).unwrap();
            let b = eval_grid_spline(2, &t, &x, &c).unwrap();
            assert!(relative_error(&a, &b).unwrap().abs() < 1e-40, "x={xs}");
        }
        let x = c.parse("0.3").unwrap();
        assert_eq!(g.select(&x), 0);
        let wide = build_nonuniform(2, &knots[..2], &c).unwrap();
        let near =
            relative_error(&eval_nonuniform(&wide, &c.float(1.5), &c).unwrap(), &erf_ref(&c.float(1.5), &c).unwrap())
                .unwrap()
                .abs();
        let far = relative_error(&eval_nonuniform(&wide, &c.float(3), &c).unwrap(), &erf_ref(&c.float(3), &c).unwrap())
            .unwrap()
            .abs();
        assert!(far > near);
        assert!(build_nonuniform(2, &[c.float(1), c.float(1)], &c).is_err());
    }
}
