//! Sweeps, transition-point choice, and bounded envelopes.

mod bounds;
mod optimize;
mod sweep;
mod taylor;

pub use bounds::{
    envelope, formula_bounds, published_bounds, round_up_3sig, yang_lambda, yang_mu, yang_p0, EnvelopeCheck,
    EnvelopePair, PublishedBound,
};
pub use optimize::{
    choose_transition, improved, optimize_transition, PiecewiseApproximant, TransitionOutcome, TransitionRule,
};
pub use sweep::{
    evaluate_on, relative_errors, report_from_values, sweep, sweep_interval, GridSpec, ReferenceGrid, SweepReport,
    SweepSummary, Target,
};
pub use taylor::{taylor, TaylorApproximant};
