use std::collections::HashMap;

use crate::direction::{nearest, Direction};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Level-wise direction sets with son maps.
///
/// Directions live in one pool; id 0 is always the zero direction. Each
/// level lists the pool ids of its set. The son map of level `l` is defined
/// for every pool id, not only for members of level `l`, because a block
/// pairing clusters on different levels hands a coarser level's direction
/// to the finer cluster.
#[derive(Debug, Clone)]
pub struct DirectionFamily<T> {
    pool: Vec<Direction<T>>,
    levels: Vec<Vec<usize>>,
    /// `son[l][id]`: nearest member of level `l + 1` (0 maps to 0).
    son: Vec<Vec<usize>>,
    grids: Vec<usize>,
}

/// Projected midpoints of a `g x g` subdivision of every face of `[-1,1]^3`.
pub fn cube_face_directions<T: Real>(g: usize) -> Vec<Direction<T>> {
    let mut out: Vec<Direction<T>> = Vec::with_capacity(6 * g * g);
    let gf = T::from_count(g);
    for axis in 0..3 {
        for sign in [T::one(), -T::one()] {
            for i in 0..g {
                for j in 0..g {
                    let mut p = [T::zero(); 3];
                    p[axis] = sign;
                    p[(axis + 1) % 3] = T::from_count(2 * i + 1) / gf - T::one();
                    p[(axis + 2) % 3] = T::from_count(2 * j + 1) / gf - T::one();
                    let d = Direction::new(&p);
                    let eps = T::lit(1e-12);
                    if !out.iter().any(|e| e.distance(&d) < eps) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out
}

impl<T: Real> DirectionFamily<T> {
    /// Directions per level for the given level diameters `delta`.
    pub fn build(kappa: T, eta1: T, delta: &[T]) -> Result<Self> {
        if !(kappa >= T::zero()) || !(eta1 > T::zero()) {
            return Err(Error::Config("requires kappa >= 0 and eta1 > 0".into()));
        }
        let mut pool = vec![Direction::zero(3)];
        let mut by_grid: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut levels = Vec::with_capacity(delta.len());
        let mut grids = Vec::with_capacity(delta.len());
        for &d in delta {
            let kd = kappa * d;
            if kd <= eta1 {
                levels.push(vec![0]);
                grids.push(0);
                continue;
            }
            // diagonal 2 sqrt(2) / g must not exceed 2 eta1 / (kappa delta)
            let g = (T::SQRT_2() * kd / eta1)
                .ceil()
                .to_usize()
                .unwrap_or(1)
                .max(1);
            let ids = by_grid
                .entry(g)
                .or_insert_with(|| {
                    let dirs = cube_face_directions(g);
                    let first = pool.len();
                    pool.extend(dirs);
                    (first..pool.len()).collect()
                })
                .clone();
            levels.push(ids);
            grids.push(g);
        }
        let mut son = Vec::with_capacity(levels.len());
        for l in 0..levels.len() {
            let next = levels.get(l + 1).unwrap_or(&levels[l]);
            let cands: Vec<Direction<T>> = next.iter().map(|&i| pool[i].clone()).collect();
            let map = pool
                .iter()
                .enumerate()
                .map(|(id, c)| {
                    if id == 0 {
                        0
                    } else {
                        next[nearest(c, &cands).expect("non-empty level")]
                    }
                })
                .collect();
            son.push(map);
        }
        Ok(Self {
            pool,
            levels,
            son,
            grids,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn direction(&self, id: usize) -> &Direction<T> {
        &self.pool[id]
    }

    pub fn pool(&self) -> &[Direction<T>] {
        &self.pool
    }

    /// Pool ids of the set on `level`.
    pub fn level(&self, level: usize) -> &[usize] {
        &self.levels[level]
    }

    /// Face subdivision used on `level` (0 for the zero-only set).
    pub fn grid(&self, level: usize) -> usize {
        self.grids[level]
    }

    /// Son map from `level` to `level + 1`.
    pub fn son(&self, level: usize, id: usize) -> usize {
        self.son[level][id]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_frequency_levels_are_zero() {
        let f = DirectionFamily::build(1.0, 10.0, &[4.0, 2.0]).unwrap();
        assert_eq!(f.level(0), &[0]);
        assert!(f.direction(0).is_zero());
    }

    #[test]
    fn one_square_per_face_gives_axes() {
        let d = cube_face_directions::<f64>(1);
        assert_eq!(d.len(), 6);
        for c in &d {
            let ones = c
                .components()
                .iter()
                .filter(|x| (x.abs() - 1.0).abs() < 1e-15)
                .count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn covering_radius_and_son_maps() {
        let kappa = 16.0;
        let eta1 = 2.0;
        let delta = [3.4, 1.8, 0.9, 0.45, 0.2, 0.1];
        let f = DirectionFamily::build(kappa, eta1, &delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (l, &d) in delta.iter().enumerate() {
            let set: Vec<_> = f.level(l).iter().map(|&i| f.direction(i).clone()).collect();
            if f.grid(l) == 0 {
                assert!(kappa * d <= eta1);
                continue;
            }
            for _ in 0..2000 {
                let v: [f64; 3] = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                let u = Direction::new(&v);
                let best = set
                    .iter()
                    .map(|c| u.distance(c))
                    .fold(f64::INFINITY, f64::min);
                assert!(best <= eta1 / (kappa * d), "level {l}: {best}");
            }
        }
        for l in 0..delta.len() - 1 {
            for &id in f.level(l) {
                let s = f.son(l, id);
                assert!(f.level(l + 1).contains(&s));
                let ds = f.direction(id).distance(f.direction(s));
                for &other in f.level(l + 1) {
                    assert!(ds <= f.direction(id).distance(f.direction(other)));
                }
            }
        }
        assert_eq!(f.son(0, 0), 0);
    }
}
