//! Rigorous volume-bound certification for one-cusped hyperbolic
//! 3-manifolds.
//!
//! The core result this crate machine-checks: every one-cusped hyperbolic
//! 3-manifold that lacks a torus-friendly geometric Mom-2 or Mom-3 structure
//! has volume greater than 2.848. The certification bounds explicit
//! functions of the Euclidean spectrum `(e2, e3, e4)` from below over a
//! compact parameter box, across the eighteen maximal triple combinations,
//! using self-validating affine 1-jet arithmetic and branch-and-bound
//! subdivision.
//!
//! Module map:
//!
//! * [`machine`] — binary64 model, exact-error helpers;
//! * [`jet`] — affine 1-jet arithmetic with machine-epsilon-aware error
//!   terms;
//! * [`hp`] — 256-bit scalars (validation grids, test oracles);
//! * [`scalar`] — the kind abstraction tying the three arithmetics to one
//!   set of formulas;
//! * [`geom`] — horoball geometry primitives (`lessvol`, lens areas and the
//!   polynomial majorant);
//! * [`cases`] — Mom-structure combinatorics and the eighteen maximal
//!   cases;
//! * [`bounds`] — the volume lower-bound functions of the spectrum;
//! * [`certify`] — branch-and-bound certification engine and certificate
//!   bundles;
//! * [`fillings`] — Dehn-filling slope cutoffs and short-slope enumeration.

pub mod bounds;
pub mod cases;
pub mod certify;
pub mod fillings;
pub mod geom;
pub mod hp;
pub mod jet;
pub mod machine;
pub mod scalar;

pub use bounds::SpectrumPoint;
pub use cases::{CaseSpec, TripleType};
pub use certify::{CaseReport, CertificateBundle, ParamBox, Status, Strategy};
pub use jet::{Axis, Jet, JetError};
pub use scalar::{ExactScalar, Scalar, ScalarKind};
