//! Directional H^2-matrices for Galerkin discretizations of the Helmholtz
//! single layer operator with piecewise constant basis functions.

mod basis;
mod galerkin;
mod matrix;
mod power;

pub use basis::{cluster_directions, leaf_matrix, transfer_matrix, ClusterBasis, Slot};
pub use galerkin::{assemble_dense, GalerkinQuadrature, DENSE_LIMIT};
pub use matrix::{
    coupling_matrix, dense_matvec, low_rank_product, CouplingStorage, Dh2Config, Dh2Matrix,
};
pub use power::{spectral_norm, DenseOperator, Difference, LinearOperator};
