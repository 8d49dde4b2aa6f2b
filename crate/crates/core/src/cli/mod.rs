//! Command implementations behind the `erfkit` binary. Every command
//! writes to a `Write` so it can be driven from tests.

mod document;

use std::io::Write;
use std::sync::Arc;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

pub use document::{approximant_from_document, ApproximantDocument, GridDocument, PolyExpTerm, SCHEMA};

use crate::approx::Approximant;
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::grid::{format_float, GridApproximant};
use crate::oracle::PrecisionContext;
use crate::series::{build_erf_series, build_gauss_g, build_gauss_h};
use crate::signal::{
    erf_power_quadrature, filter_response_approx, filter_response_exact, filter_time_grid, harmonic_levels,
    output_power, FilterModel,
};
use crate::spline::build_spline;
use crate::sqrt::build_sqrt;
use crate::subinterval::build_subinterval;
use crate::tables::{reproduce_table, TableReport};
use crate::transition::{
    optimize_transition, report_from_values, taylor, GridSpec, PiecewiseApproximant, ReferenceGrid, Target,
    TransitionRule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Spline,
    Subinterval,
    Grid,
    Sqrt,
    Taylor,
    Series,
    GaussG,
    GaussH,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "spline" => Family::Spline,
            "subinterval" => Family::Subinterval,
            "grid" => Family::Grid,
            "sqrt" => Family::Sqrt,
            "taylor" => Family::Taylor,
            "series" => Family::Series,
            "gauss_g" => Family::GaussG,
            "gauss_h" => Family::GaussH,
            _ => return Err(Error::Usage(format!("unknown family {s:?}"))),
        })
    }

    /// Gaussian approximants are compared against exp(-x^2).
    pub fn target(self) -> Target {
        match self {
            Family::GaussG | Family::GaussH => Target::Gauss,
            _ => Target::Erf,
        }
    }
}

/// What to join to the constant 1, and where.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionSpec {
    Auto,
    /// decimal string
    At(String),
}

impl TransitionSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(TransitionSpec::Auto);
        }
        let v: f64 = s.parse().map_err(|_| Error::Usage(format!("--transition takes auto or a number, got {s:?}")))?;
        if !(v > 0.0) {
            return Err(Error::Usage("transition point must be positive".into()));
        }
        Ok(TransitionSpec::At(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximantDescriptor {
    pub family: Family,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subintervals: Option<usize>,
    /// grid resolution as "num/den"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
    /// series tail length
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionSpec>,
    pub digits: u32,
}

impl ApproximantDescriptor {
    pub fn new(family: Family, order: usize) -> Self {
        ApproximantDescriptor {
            family,
            order,
            subintervals: None,
            resolution: None,
            terms: None,
            transition: None,
            digits: PrecisionContext::DEFAULT_DIGITS,
        }
    }

    pub fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.digits).map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn resolution(&self) -> Result<Rational> {
        let r = self.resolution.as_deref().ok_or_else(|| Error::Usage("grid family needs --resolution p/q".into()))?;
        let r = parse_rational(r)?;
        if r <= 0 {
            return Err(Error::Usage("resolution must be positive".into()));
        }
        Ok(r)
    }

    /// Rejects flag combinations that do not apply to the family.
    pub fn validate(&self) -> Result<()> {
        let f = self.family;
        if self.subintervals.is_some() != (f == Family::Subinterval) {
            return Err(Error::Usage("--subintervals applies to (and is required by) the subinterval family".into()));
        }
        if self.resolution.is_some() != (f == Family::Grid) {
            return Err(Error::Usage("--resolution applies to (and is required by) the grid family".into()));
        }
        if self.terms.is_some() && f != Family::Series {
            return Err(Error::Usage("--terms applies to the series family".into()));
        }
        if self.subintervals == Some(0) {
            return Err(Error::Usage("need at least one sub-interval".into()));
        }
        if self.terms == Some(0) {
            return Err(Error::Usage("series needs at least one tail term".into()));
        }
        if f == Family::Taylor && self.order % 2 == 0 {
            return Err(Error::Usage(format!("Taylor order must be odd, got {}", self.order)));
        }
        if f == Family::Grid {
            self.resolution()?;
        }
        if self.transition.is_some() && matches!(f, Family::Sqrt | Family::Grid | Family::GaussG | Family::GaussH) {
            return Err(Error::Usage("a transition to 1 applies to spline, subinterval, taylor and series".into()));
        }
        self.ctx()?;
        Ok(())
    }

    pub fn label(&self) -> String {
        let mut s = format!("{:?} n={}", self.family, self.order).to_lowercase();
        if let Some(m) = self.subintervals {
            s.push_str(&format!(" m={m}"));
        }
        if let Some(r) = &self.resolution {
            s.push_str(&format!(" delta={r}"));
        }
        if let Some(k) = self.terms {
            s.push_str(&format!(" terms={k}"));
        }
        s
    }

    /// Grid used to pick x_o for `--transition auto`.
    pub fn auto_grid(&self) -> (f64, usize) {
        match self.family {
            Family::Taylor => (4.0, 10000),
            Family::Subinterval => match self.subintervals.unwrap_or(1) {
                0..=4 => (8.0, 10000),
                5..=16 => (12.0, 10000),
                _ => (16.0, 10000),
            },
            _ => (5.0, 10000),
        }
    }

    /// Inner approximant without any transition.
    pub fn build_inner(&self, x_max: f64) -> Result<Arc<dyn Approximant>> {
        self.validate()?;
        let n = self.order;
        Ok(match self.family {
            Family::Spline => Arc::new(build_spline(n)),
            Family::Subinterval => Arc::new(build_subinterval(n, self.subintervals.unwrap_or(1))?),
            Family::Grid => Arc::new(GridApproximant::new(n, &self.resolution()?, x_max, &self.ctx()?)?),
            Family::Sqrt => Arc::new(build_sqrt(n)),
            Family::Taylor => Arc::new(taylor(n)?),
            Family::Series => Arc::new(build_erf_series(n, self.terms.unwrap_or(2))?),
            Family::GaussG => Arc::new(build_gauss_g(n)),
            Family::GaussH => Arc::new(build_gauss_h(n)),
        })
    }

    /// Transition point, optimizing on the family's default grid for `auto`.
    pub fn transition_point(&self, inner: &dyn Approximant) -> Result<Option<Float>> {
        let ctx = self.ctx()?;
        match &self.transition {
            None => Ok(None),
            Some(TransitionSpec::At(s)) => Ok(Some(ctx.parse(s)?)),
            Some(TransitionSpec::Auto) => {
                let (b, pts) = self.auto_grid();
                let grid = ReferenceGrid::erf(GridSpec::from_f64(0.0, b, pts, &ctx)?, &ctx)?;
                let out = optimize_transition(inner, &grid, TransitionRule::Crossing)?;
                out.x_o()
                    .cloned()
                    .map(Some)
                    .ok_or_else(|| Error::Numeric(format!("{} never crosses the constant 1", self.label())))
            }
        }
    }

    /// Full approximant, piecewise when a transition is requested.
    pub fn build(&self, x_max: f64) -> Result<Arc<dyn Approximant>> {
        let inner = self.build_inner(x_max)?;
        match self.transition_point(inner.as_ref())? {
            Some(x_o) => Ok(Arc::new(PiecewiseApproximant::new(inner, x_o)?)),
            None => Ok(inner),
        }
    }
}

/// JSON document of the closed form.
pub fn cmd_gen(desc: &ApproximantDescriptor, out: &mut dyn Write) -> Result<ApproximantDocument> {
    let doc = ApproximantDocument::from_descriptor(desc)?;
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(doc)
}

/// Value at one point, printed with the working digits.
pub fn cmd_eval(desc: &ApproximantDescriptor, x: &str, out: &mut dyn Write) -> Result<Float> {
    let ctx = desc.ctx()?;
    let x = ctx.parse(x)?;
    let a = desc.build(x.to_f64().abs() + 1.0)?;
    let v = a.eval(&x, &ctx)?;
    writeln!(out, "{}", format_float(&v, ctx.working_digits() as usize))?;
    Ok(v)
}

/// Parses "a:b".
pub fn parse_interval(s: &str) -> Result<(String, String)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Usage(format!("--interval takes a:b, got {s:?}")))?;
    let (fa, fb): (f64, f64) = (
        a.trim().parse().map_err(|_| Error::Usage(format!("bad interval start {a:?}")))?,
        b.trim().parse().map_err(|_| Error::Usage(format!("bad interval end {b:?}")))?,
    );
    if !(fb > fa) {
        return Err(Error::Usage("interval needs b > a".into()));
    }
    Ok((a.trim().to_string(), b.trim().to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub rows: usize,
    pub re_b: String,
    pub argmax: String,
    pub x_o: Option<String>,
}

/// CSV of x, approximation, reference and relative error on a grid.
pub fn cmd_sweep(
    desc: &ApproximantDescriptor,
    interval: &str,
    points: usize,
    out: &mut dyn Write,
) -> Result<SweepOutcome> {
    let ctx = desc.ctx()?;
    let (a, b) = parse_interval(interval)?;
    let spec = GridSpec::new(ctx.parse(&a)?, ctx.parse(&b)?, points).map_err(|e| Error::Usage(e.to_string()))?;
    let x_max = spec.b.to_f64();
    let inner = desc.build_inner(x_max)?;
    let x_o = desc.transition_point(inner.as_ref())?;
    let approx: Arc<dyn Approximant> = match &x_o {
        Some(x) => Arc::new(PiecewiseApproximant::new(inner, x.clone())?),
        None => inner,
    };
    let grid = ReferenceGrid::new(spec, desc.family.target(), &ctx)?;
    let values = crate::transition::evaluate_on(approx.as_ref(), &grid)?;
    let rep = report_from_values(&values, &grid);
    let d = ctx.working_digits() as usize;
    let reference = match desc.family.target() {
        Target::Erf => "erf",
        Target::Gauss => "exp(-x^2)",
    };
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record([
        format!("x[grid={}]", grid.spec.describe()),
        format!("approx[{}]", approx.label()),
        format!("{reference}[digits={}]", ctx.working_digits()),
        "re".to_string(),
    ])?;
    for i in 0..grid.len() {
        w.write_record([
            format_float(&grid.xs[i], d),
            format_float(&values[i], d),
            format_float(&grid.values[i], d),
            format_float(&rep.re[i], d),
        ])?;
    }
    w.flush()?;
    Ok(SweepOutcome {
        rows: grid.len(),
        re_b: format_float(&rep.re_b, 6),
        argmax: format_float(&rep.argmax, 10),
        x_o: x_o.map(|x| format_float(&x, 10)),
    })
}

/// CSV of a reproduced table; the report says whether every row passed.
pub fn cmd_table(id: u32, out: &mut dyn Write) -> Result<TableReport> {
    let report = reproduce_table(id)?;
    write_table_csv(&report, out)?;
    Ok(report)
}

pub fn write_table_csv(report: &TableReport, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record([
        "table",
        "row",
        "grid",
        "digits",
        "printed_x_o",
        "computed_x_o",
        "grid_step",
        "printed",
        "computed",
        "deviation",
        "status",
        "note",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &report.rows {
        w.write_record([
            r.table.clone(),
            r.label.clone(),
            r.grid.clone(),
            r.digits.to_string(),
            opt(r.printed_x_o),
            r.computed_x_o.clone().unwrap_or_default(),
            opt(r.grid_step),
            r.printed.clone(),
            r.computed.clone(),
            format!("{:.4e}", r.deviation),
            r.status().to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum AppsCommand {
    /// a from step to a_max
    Power {
        a_max: String,
        step: String,
        oracle: bool,
    },
    Harmonics {
        a_max: String,
        step: String,
    },
    /// t in (0, t_max] with `points` samples
    Filter {
        gamma: String,
        f_p: String,
        t_max: String,
        points: usize,
        approx: ApproximantDescriptor,
    },
}

fn amplitudes(a_max: &str, step: &str, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let a_max = ctx.parse(a_max)?;
    let step = ctx.parse(step)?;
    if step <= 0 || a_max <= 0 {
        return Err(Error::Usage("amplitude range needs positive step and maximum".into()));
    }
    let n = Float::with_val(ctx.bits(), &a_max / &step).to_f64().round() as u64;
    if n == 0 || n > 1_000_000 {
        return Err(Error::Usage("amplitude range gives no points or too many".into()));
    }
    Ok((1..=n).map(|i| Float::with_val(ctx.bits(), &step * i)).collect())
}

/// CSV for the distortion and filtering applications.
pub fn cmd_apps(cmd: &AppsCommand, digits: u32, out: &mut dyn Write) -> Result<usize> {
    let ctx = PrecisionContext::new(digits).map_err(|e| Error::Usage(e.to_string()))?;
    let d = digits as usize;
    let mut w = csv::Writer::from_writer(&mut *out);
    let mut rows = 0;
    match cmd {
        AppsCommand::Power { a_max, step, oracle } => {
            let mut head = vec![format!("a[digits={digits}]"), "P".to_string()];
            if *oracle {
                head.push("P_erf_quadrature".into());
            }
            w.write_record(&head)?;
            for a in amplitudes(a_max, step, &ctx)? {
                let mut rec = vec![format_float(&a, 6), format_float(&output_power(&a, &ctx)?, d)];
                if *oracle {
                    rec.push(format_float(&erf_power_quadrature(&a, &ctx)?, d));
                }
                w.write_record(&rec)?;
                rows += 1;
            }
        }
        AppsCommand::Harmonics { a_max, step } => {
            w.write_record([
                format!("a[digits={digits}]"),
                "c1".into(),
                "c3".into(),
                "c5".into(),
                "c7".into(),
                "d3".into(),
                "d5".into(),
                "d7".into(),
            ])?;
            for a in amplitudes(a_max, step, &ctx)? {
                let c: Vec<Float> =
                    [1u32, 3, 5, 7].iter().map(|&k| harmonic_levels(&a, k, &ctx)).collect::<Result<_>>()?;
                let c1sq = Float::with_val(ctx.bits(), c[0].square_ref());
                let mut rec = vec![format_float(&a, 6)];
                rec.extend(c.iter().map(|v| format_float(v, d)));
                for v in &c[1..] {
                    rec.push(format_float(&(Float::with_val(ctx.bits(), v.square_ref()) / &c1sq), d));
                }
                w.write_record(&rec)?;
                rows += 1;
            }
        }
        AppsCommand::Filter { gamma, f_p, t_max, points, approx } => {
            let model = FilterModel::new(&ctx.parse(gamma)?, &ctx.parse(f_p)?, &ctx)?;
            if *points == 0 {
                return Err(Error::Usage("filter sweep needs at least one point".into()));
            }
            let mut ad = approx.clone();
            ad.digits = digits;
            let t_max_v = ctx.parse(t_max)?;
            if t_max_v <= 0 {
                return Err(Error::Usage("t_max must be positive".into()));
            }
            // arguments reach t/gamma and |gamma/(2 tau) - t/gamma|
            let reach = (t_max_v.to_f64() / model.gamma.to_f64() + (model.gamma.to_f64() / (2.0 * model.tau.to_f64())))
                .max(1.0)
                + 1.0;
            let a = ad.build(reach)?;
            let ev = a.evaluator(&ctx)?;
            w.write_record([
                format!("t[gamma={gamma} f_p={f_p} points={points}]"),
                format!("y[digits={digits}]"),
                format!("y_n[{}]", a.label()),
                "re".into(),
            ])?;
            for t in filter_time_grid(&t_max_v, *points, &ctx) {
                let y = filter_response_exact(&model, &t, &ctx)?;
                let yn = filter_response_approx(&model, ev.as_ref(), &t, &ctx)?;
                let re = Float::with_val(ctx.bits(), 1) - Float::with_val(ctx.bits(), &yn / &y);
                w.write_record([format_float(&t, 6), format_float(&y, d), format_float(&yn, d), format_float(&re, d)])?;
                rows += 1;
            }
        }
    }
    w.flush()?;
    Ok(rows)
}
