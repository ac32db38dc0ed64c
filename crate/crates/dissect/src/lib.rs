//! Decorated dissection diagrams: the Hopf algebra, bi-arrangement
//! presentations, reduction to iterated integrals and numerical evaluation.

pub mod arrangement;
pub mod cohomology;
pub mod decoration;
pub mod diagram;
pub mod hopf;
pub mod json;
pub mod linalg;
pub mod numeric;
pub mod reduction;
pub mod render;
pub mod scalar;
pub mod symbol;
pub mod verify;

pub use decoration::{DecoratedDiagram, DecoratedGraph, DecorationError};
pub use diagram::{DiagramError, DissectionDiagram, FacePartition};
pub use hopf::{AlgebraElement, FlipReport, HopfError, Monomial, Poly, TensorElement, XParam};
pub use scalar::{Mode, Rational, Scalar, ScalarError};
pub use symbol::{ItIntSymbol, JSymbol};
pub use numeric::{CPath, EvalRecord, NumericError, PathPlan, QuadratureConfig};
pub use reduction::{FormalSum, ReductionError};
