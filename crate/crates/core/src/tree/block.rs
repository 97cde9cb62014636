use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::geometry::box_metrics;
use crate::scalar::Real;

use super::admissibility::{choose_direction, is_admissible, Admissibility};
use super::cluster::ClusterTree;
use super::directions::DirectionFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStatus {
    /// Farfield leaf with the pool id of its direction.
    Admissible {
        direction: usize,
    },
    /// Nearfield leaf, stored densely.
    Inadmissible,
    Subdivided,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    pub status: BlockStatus,
    pub sons: Vec<usize>,
}

impl Block {
    pub fn is_leaf(&self) -> bool {
        !matches!(self.status, BlockStatus::Subdivided)
    }
}

/// Block tree over `I x I`; node 0 is `(root, root)`.
#[derive(Debug, Clone)]
pub struct BlockTree {
    blocks: Vec<Block>,
    admissible: Vec<usize>,
    inadmissible: Vec<usize>,
}

impl BlockTree {
    pub fn build<T: Real>(
        tree: &ClusterTree<T>,
        dirs: &DirectionFamily<T>,
        params: &Admissibility<T>,
    ) -> Result<Self> {
        if dirs.num_levels() != tree.depth() + 1 {
            return Err(Error::Inconsistent(format!(
                "{} direction levels for a tree of depth {}",
                dirs.num_levels(),
                tree.depth()
            )));
        }
        let mut blocks: Vec<Block> = Vec::new();
        let mut admissible = Vec::new();
        let mut inadmissible = Vec::new();
        let mut pending = vec![(tree.root(), tree.root(), None::<usize>)];
        // depth-first, sons visited in natural order
        while let Some((t, s, father)) = pending.pop() {
            let id = blocks.len();
            if let Some(f) = father {
                blocks[f].sons.push(id);
            }
            let (ct, cs) = (tree.cluster(t), tree.cluster(s));
            let status = match block_direction(tree, dirs, params, t, s)? {
                Some(c) if is_admissible(&ct.bbox, &cs.bbox, dirs.direction(c), params) => {
                    admissible.push(id);
                    BlockStatus::Admissible { direction: c }
                }
                _ if ct.is_leaf() && cs.is_leaf() => {
                    inadmissible.push(id);
                    BlockStatus::Inadmissible
                }
                _ => BlockStatus::Subdivided,
            };
            blocks.push(Block {
                row: t,
                col: s,
                status,
                sons: Vec::new(),
            });
            if status == BlockStatus::Subdivided {
                let rows: Vec<usize> = if ct.is_leaf() {
                    vec![t]
                } else {
                    ct.sons.clone()
                };
                let cols: Vec<usize> = if cs.is_leaf() {
                    vec![s]
                } else {
                    cs.sons.clone()
                };
                for &r in rows.iter().rev() {
                    for &c in cols.iter().rev() {
                        pending.push((r, c, Some(id)));
                    }
                }
            }
        }
        Ok(Self {
            blocks,
            admissible,
            inadmissible,
        })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, id: usize) -> &Block {
        &self.blocks[id]
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Ids of admissible leaves.
    pub fn admissible(&self) -> &[usize] {
        &self.admissible
    }

    /// Ids of inadmissible leaves.
    pub fn inadmissible(&self) -> &[usize] {
        &self.inadmissible
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&b| self.blocks[b].is_leaf())
    }
}

/// Direction a block `(t, s)` would get, taken from the set of the coarser
/// of the two levels. `None` if the boxes touch or share a midpoint.
///
/// If `kappa * maxdiam <= eta1` the zero direction is used even when that
/// level carries oscillatory directions.
pub fn block_direction<T: Real>(
    tree: &ClusterTree<T>,
    dirs: &DirectionFamily<T>,
    p: &Admissibility<T>,
    t: usize,
    s: usize,
) -> Result<Option<usize>> {
    let (ct, cs) = (tree.cluster(t), tree.cluster(s));
    let m = box_metrics(&ct.bbox, &cs.bbox)?;
    if !(m.dist > T::zero()) || m.mid_tau == m.mid_sigma {
        return Ok(None);
    }
    if p.kappa * m.max_diam() <= p.eta1 {
        return Ok(Some(0));
    }
    let ids = dirs.level(ct.level.min(cs.level));
    let cands: Vec<Direction<T>> = ids.iter().map(|&i| dirs.direction(i).clone()).collect();
    Ok(Some(ids[choose_direction(&ct.bbox, &cs.bbox, &cands)?]))
}
