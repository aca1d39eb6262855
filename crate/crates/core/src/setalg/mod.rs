//! Sets built from finitely many catalog atoms.

mod atom;
mod ops;
mod repset;

pub use atom::{
    cantor_contains, cantor_measure, Atom, AtomKind, SeqKind, SeqSpec, MAX_ENUMERATION,
};
pub use ops::{diff_atoms, intersect_atoms, CANTOR_DEPTH};
pub use repset::{
    hmeasure, is_subset, member, repset_diff, repset_eq, repset_intersect, repset_normalize,
    repset_symdiff, repset_union, unit_interval, verify_monotone, verify_subadditive,
    MonotoneCheck, RepSet, SubadditiveCheck,
};
