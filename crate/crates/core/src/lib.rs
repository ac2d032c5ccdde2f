//! Majorana-style generator sets built from qubit trees, fermion-to-qubit
//! encodings derived from them, and propagation of quadratic circuits in the
//! generator basis with a dense state-vector oracle for small widths.

pub mod circuit;
pub mod dense;
pub mod error;
pub mod fermion;
pub mod generators;
pub mod modes;
pub mod occupation;
pub mod pauli;
pub mod spin;
pub mod tree;

pub use circuit::{
    build_tree, encoding_for_tree, run_circuit, Basis, CircuitFile, RunOutput, StepRecord,
};
pub use dense::{DenseOperator, StateVector, C64};
pub use error::{Error, Result};
pub use fermion::{
    bk_standard, ladder_binary_xy, ladder_jw, ladder_xz, number_operator, BkStandard, EncodingKind,
    FermionEncoding, LadderOperator, NumberOperator,
};
pub use generators::{GeneratorSet, Validation};
pub use modes::{
    mode_unitary, perfect_transfer_check, propagate_path_state, ModeHamiltonian, ModeUnitary,
    PathStateVector,
};
pub use occupation::{GTree, NodeKind, OccupationMap};
pub use pauli::{Letter, PauliTerm};
pub use spin::{
    adjoint_rotation, propagate_covariance, propagate_expectations, terminal_pair_su4_set,
    QuadraticHamiltonian, RotationMatrix,
};
pub use tree::{QubitTree, TreeFile};
