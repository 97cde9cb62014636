#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bench;
pub mod dh2;
pub mod direction;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod kernels;
pub mod scalar;
pub mod tree;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mesh = geometry::TriMesh<f64>;
pub type Bounds = interp::BoxNd<f64>;
pub type Dir = direction::Direction<f64>;
pub type Rule = interp::InterpolationRule<f64>;
pub type Kernel64 = kernels::HelmholtzKernel<f64>;
pub type Dh2 = dh2::Dh2Matrix<f64, kernels::HelmholtzKernel<f64>>;
pub type Tree = tree::ClusterTree<f64>;
pub type Directions = tree::DirectionFamily<f64>;
