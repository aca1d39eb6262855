//! Dimension-measure pairs and their algebra.

mod dimension;
mod extreal;
mod pair;
mod seq;

pub use dimension::{Dimension, LogRatio};
pub use extreal::ExtReal;
pub use pair::{hpair_inf, hpair_sum, hpair_sup, HPair};
pub use seq::{
    hpair_series, hpair_series_climbing, hseq_liminf, hseq_limit, hseq_limsup, partial_sums,
    CoefficientSeries, HSeq, TailRule,
};
