//! Exact-arithmetic workbench for Kochen-Specker colorability.
//!
//! Everything runs over arbitrary-precision rationals; there is no floating
//! point anywhere. The pieces:
//!
//! - [`ray`]: canonical projective rays, orthogonality graphs, complete-basis
//!   enumeration, span tests, tensor structure, signed-permutation symmetry.
//! - [`coloring`]: exactly-one-per-basis constraint systems, unit
//!   propagation with traces, exhaustive colorability search, GF(2) parity
//!   certificates.
//! - [`search`]: census of critical (minimal uncolorable) subsets with
//!   memoized subset colorability; deterministic under any worker count.
//! - [`quantum`]: exact Born probabilities, product-observable eigenvector
//!   checks, pre/postselection forcing, state-specific reduction, and the
//!   translation into local conditional probabilities.
//! - [`catalog`]: built-in ray sets (18-ray, 24-ray tesseract, 16 edge
//!   centers) and named states, self-verified at load.
//! - [`text`]: the line-oriented ray set file format.
//!
//! All values are immutable after construction and the operations are pure
//! functions, so everything here is safe to share across threads.
//!
//! ```
//! use bks_core::{catalog, colorable, parity_certificate, ConstraintSystem, Mode};
//!
//! let ceg = catalog::ceg18().rays;
//! let cs = ConstraintSystem::build(&ceg, Mode::BasesOnly);
//! assert!(!colorable(&cs).is_colorable());
//!
//! // An odd number of bases covering every ray an even number of times:
//! // the sums of the selected constraints cannot all be 1.
//! let cert = parity_certificate(&cs).unwrap();
//! assert_eq!(cert.len(), 9);
//! assert!(cert.coverage(&cs).values().all(|&c| c == 2));
//! ```

pub mod catalog;
pub mod coloring;
pub mod quantum;
pub mod ray;
pub mod search;
pub mod text;

pub use catalog::{CatalogEntry, CatalogError};
pub use coloring::{
    colorable, parity_certificate, propagate, Assignment, Clash, ColorOutcome, ColoringError,
    ConstraintSystem, ContradictionReport, Mode, ParityCertificate, PropagationOutcome, Reason,
    TraceEvent,
};
pub use quantum::{
    born, conditional_probability, eigen_check, event_probability, forced_values, hardy_run,
    joint_probability, nonlocality_report, state_reduce, Axis, EigenOutcome, ForcedLocal,
    HardyOutcome, HardyRecord, LocalEvent, Particle, Pauli, ProductObservable, QuantumError,
    ReducedConstraint, ReducedSystem, Sign, State,
};
pub use ray::{
    in_span, Basis, Factorization, Int, OrthogonalityGraph, Ray, RayError, RaySet, Scalar,
    SignedPermutation,
};
pub use search::{
    enumerate_critical, is_critical, Census, CriticalSet, SearchError, SubsetColorability,
};
pub use text::{parse_ray_set, TextFormatError};
