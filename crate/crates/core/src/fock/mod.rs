//! Truncated symmetric Fock space over `H = C^d`.

pub mod basis;
pub mod exponential;
pub mod ladder;
pub mod normalization;
pub mod operator;
pub mod skorohod;
pub mod split;
pub mod tensor;

pub use basis::{factorial, level_dim, LevelBasis, MultiIndex, MAX_LEVEL_DIM};
pub use exponential::{
    exp_gram, exp_shift, exp_shift_combo, exp_tail, exp_vector, product_gram, tensor_power, v_map,
    v_map_adjoint, EmbeddedCombo, ExpCombo, ExpVector, ProductCombo, ShiftMode, ShiftOperand,
};
pub use ladder::{
    annihilate, conservation, create, grad_minus, grad_minus_marked, grad_plus, graph_inner,
    number_apply, number_semigroup, q_map, second_quantize, GradMinus, Truncated,
};
pub use operator::{operator_matrix, DenseOperator, LevelOp};
pub use skorohod::{ito_skorohod_abstract, SkorohodReport};
pub use split::{
    merge, split_grad_minus_residual, split_grad_plus_residual, split_iso, Partition, SplitFock,
};
pub use tensor::{DoubleMarkedTensor, FockVector, HVector, MarkedFock, MarkedTensor, SymTensor};
