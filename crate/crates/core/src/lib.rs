//! Representation-parametric solver for one-dimensional spin-1/2 scattering.
//!
//! The mode equation `p·u = (x1·(E − V) + x2·m)·u` is solved for any registered
//! pair `(x1, x2)`: the standard Dirac pair, a unitarily equivalent pair built
//! from nilpotent matrices, and a non-unitarily equivalent pair with its own
//! current operator. Step and barrier problems are solved by boundary matching.

pub mod equivalence;
pub mod numkernel;
pub mod planewave;
pub mod representations;
pub mod scattering;

pub use equivalence::{compare_representations, find_intertwiner, EquivalenceError, EquivalenceReport};
pub use numkernel::{ComplexMatrix, ComplexVector, EigenPair, KernelError};
pub use planewave::{
    Character, Direction, Kinematics, KleinConvention, Mode, ModeOptions, PlanewaveError, Spin, SpinBasis,
};
pub use representations::{
    registry_lookup, Algebra, AlgebraReport, Kind, RepresentationError, RepresentationSet, REGISTRY_NAMES,
};
pub use scattering::{
    solve_barrier, solve_step, sweep, AuditReport, ClosedFormPoint, KleinReport, Regime, ScatterError,
    ScatterResult, StepProblem, SweepRow,
};
