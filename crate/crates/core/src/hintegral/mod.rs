mod convergence;
mod expr;
mod function;
mod integral;

pub use convergence::{
    beppo_levi_limit, fatou_check, BeppoLeviReport, ChainRule, FatouReport, FatouSequence,
};
pub use expr::{Expr, SeriesExpr, SignPattern};
pub use function::{Domain, PiecewiseFunction, Term};
pub use integral::{
    additivity_over_region, countable_additivity, h_integral, indicator_bridge, is_integrable,
    monotone_compare, restrict_to_support, support, Identity, MonotoneComparison, Partition,
    RegionAdditivity,
};
