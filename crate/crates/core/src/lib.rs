//! Exact arithmetic for dimension-measure pairs, sets built from catalog
//! atoms, and integrals of piecewise functions over them.

pub mod deficiency;
pub mod doc;
pub mod error;
pub mod gen;
pub mod hintegral;
pub mod hvalue;
pub mod logs;
pub mod metrics;
pub mod num;
pub mod oracle;
pub mod poly;
pub mod setalg;
pub mod suites;

pub use error::{HError, Result};
pub use hvalue::*;
pub use num::Rational;
pub use setalg::{Atom, RepSet};
