//! The Hopf algebra of decorated dissection diagrams.

mod algebra;
mod formulas;
mod ops;

pub use algebra::{
    antipode, antipode_monomial, convolution_s_id, convolution_id_s, coproduct, coproduct_diagram,
    coproduct_monomial, delta_tensor_id, id_tensor_delta, AlgebraElement, Monomial, Poly, TensorElement,
    TripleElement, XParam,
};
pub use formulas::{
    corolla_decorated, goncharov_coproduct, j_coproduct, path_tree_decorated, x_closed_formula,
    y_closed_formula, SymbolTensor,
};
pub use ops::{
    k_c_direct, k_c_k123, k_c_path, k_paths, q_c, q_faces, r_c, sigma_c, sigma_from_paths, FlipReport, QFace,
};

use crate::decoration::DecorationError;
use crate::diagram::DiagramError;
use crate::scalar::ScalarError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("chord {0} is not a chord of a degree-{1} diagram")]
    InvalidChord(usize, usize),
    #[error("non-generic input: {0}")]
    NonGeneric(String),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
