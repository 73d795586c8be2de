//! Numerical semigroup invariants, relative ideal arithmetic, classification
//! predicates, inequality verification, genus enumeration, and good
//! semigroups of the plane.

pub mod bits;
pub mod semigroup;
pub mod ideal;
pub mod classify;
pub mod bounds;
pub mod census;
pub mod param;
pub mod plane;

pub use census::{
    brute_force_census, enumerate_by_genus, sweep, CensusError, CensusSummary,
    ClassFilter, GenusRow, SweepConfig, TreeNode, Violation,
};
pub use bounds::{
    ag_bookkeeping, check_all, equality_analysis, BookkeepingReport, BoundsError,
    DimdClass, EqualityAnalysis, InequalityVerdict,
};
pub use ideal::{IdealError, RelativeIdeal};
pub use param::{coefficient, from_parametrization, BranchSeries};
pub use plane::{
    distance, distance_exhaustive, GoodIdealPlane, GoodSemigroupPlane, PlaneError,
    PlaneInvariantReport, Pt,
};
pub use semigroup::{
    ClassificationFlags, InvariantReport, NumericalSemigroup, SemigroupError,
};
