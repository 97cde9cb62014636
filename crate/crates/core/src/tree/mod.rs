//! Cluster trees, hierarchical directions, admissibility and block trees.

mod admissibility;
mod block;
mod cluster;
mod directions;

pub use admissibility::{choose_direction, is_admissible, Admissibility};
pub use block::{block_direction, Block, BlockStatus, BlockTree};
pub use cluster::{Cluster, ClusterTree, Support};
pub use directions::{cube_face_directions, DirectionFamily};
