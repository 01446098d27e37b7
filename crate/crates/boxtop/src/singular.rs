//! Explicit disjoint covers of `{0,1}^N` driven by a ladder of segment
//! offsets and a partition of the prefix patterns.
//!
//! Each point `f` gets a cube fixing `f` on the prefix `[0, theta)` and on
//! the segments `[ladder[i], ladder[i] + ladder[i*])` for `i >= i*`, where
//! `i*` is the ladder index assigned to `f`'s prefix. Any two such cubes
//! are equal or disjoint, so deduplicating over all points yields a
//! disjoint cover. The companion [`regular_prefix_cover`] fixes just the
//! prefix, one cube per prefix pattern.

use crate::cube::{Cube, CubeFamily, Point};
use crate::error::{Error, Result};

/// Parameters for the segment-fixing cover.
#[derive(Clone, Debug)]
pub struct SingularParams {
    theta: usize,
    ladder: Vec<usize>,
    total_dim: usize,
    /// Ladder index per `theta`-bit prefix pattern, indexed by the prefix
    /// read as a big-endian number.
    partition: Vec<usize>,
}

impl SingularParams {
    pub fn new(
        theta: usize,
        ladder: Vec<usize>,
        total_dim: usize,
        partition: Vec<usize>,
    ) -> Result<Self> {
        if theta == 0 || theta > 16 {
            return Err(Error::Params {
                reason: format!("prefix length {theta} out of range"),
            });
        }
        if ladder.is_empty() {
            return Err(Error::LadderRange {
                reason: "ladder is empty".into(),
            });
        }
        for pair in ladder.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::LadderRange {
                    reason: "ladder is not strictly increasing".into(),
                });
            }
        }
        if theta > ladder[0] {
            return Err(Error::LadderRange {
                reason: format!("prefix length {theta} exceeds the first step {}", ladder[0]),
            });
        }
        let last = *ladder.last().unwrap();
        if total_dim < last + ladder[0] {
            return Err(Error::Params {
                reason: format!(
                    "dimension {total_dim} below {} (last step {last} plus first step {})",
                    last + ladder[0],
                    ladder[0]
                ),
            });
        }
        if partition.len() != 1 << theta {
            return Err(Error::Params {
                reason: format!(
                    "partition must assign all {} prefix patterns",
                    1usize << theta
                ),
            });
        }
        if partition.iter().any(|&i| i >= ladder.len()) {
            return Err(Error::Params {
                reason: "partition assigns a ladder index out of range".into(),
            });
        }
        Ok(SingularParams {
            theta,
            ladder,
            total_dim,
            partition,
        })
    }

    /// Balanced default partition: prefix pattern `p` goes to block
    /// `p * t / 2^theta`.
    pub fn with_auto_partition(theta: usize, ladder: Vec<usize>, total_dim: usize) -> Result<Self> {
        if theta == 0 || theta > 16 {
            return Err(Error::Params {
                reason: format!("prefix length {theta} out of range"),
            });
        }
        let blocks = ladder.len();
        let patterns = 1usize << theta;
        let partition = (0..patterns).map(|p| p * blocks / patterns).collect();
        SingularParams::new(theta, ladder, total_dim, partition)
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn ladder(&self) -> &[usize] {
        &self.ladder
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    fn prefix_class(&self, f: &Point) -> usize {
        let mut idx = 0usize;
        for i in 0..self.theta {
            idx = idx << 1 | f.bit(i) as usize;
        }
        self.partition[idx]
    }

    /// The coordinates fixed for a point in prefix class `i_star`: the
    /// prefix plus one segment per ladder step at or above the class,
    /// clipped to the dimension.
    fn fixed_coords(&self, i_star: usize) -> Vec<usize> {
        let mut coords: Vec<usize> = (0..self.theta).collect();
        let width = self.ladder[i_star];
        for &start in &self.ladder[i_star..] {
            for c in start..(start + width).min(self.total_dim) {
                if c >= self.theta && !coords.contains(&c) {
                    coords.push(c);
                }
            }
        }
        coords.sort();
        coords
    }
}

/// The cube assigned to one point: fix the prefix and the class segments.
pub fn singular_cover_cube(params: &SingularParams, f: &Point) -> Result<Cube> {
    if f.dim() != params.total_dim {
        return Err(Error::DimensionMismatch {
            left: params.total_dim,
            right: f.dim(),
        });
    }
    let i_star = params.prefix_class(f);
    let mut cube = Cube::free(params.total_dim)?;
    for c in params.fixed_coords(i_star) {
        cube.set(c, f.bit(c));
    }
    Ok(cube)
}

/// The deduplicated family `{U_f}` over every point of the space, sorted
/// canonically: a pairwise disjoint cover with at least `2^ladder[0]`
/// members.
pub fn singular_disjoint_cover(params: &SingularParams, limit: usize) -> Result<CubeFamily> {
    let dim = params.total_dim;
    if dim > limit.min(32) {
        return Err(Error::EnumerationLimit {
            dim,
            limit: limit.min(32),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for idx in 0u64..1u64 << dim {
        let f = Point::from_index(dim, idx);
        let cube = singular_cover_cube(params, &f)?;
        debug_assert!(cube.contains_point_unchecked(&f));
        seen.insert(cube);
    }
    let family = CubeFamily::new(dim, seen.into_iter().collect())?;
    debug_assert!(family.len() as u128 >= 1u128 << params.ladder[0]);
    Ok(family)
}

/// The cover fixing every pattern on the first `theta` coordinates.
pub fn regular_prefix_cover(theta: usize, total_dim: usize, limit: usize) -> Result<CubeFamily> {
    if theta == 0 || theta > total_dim {
        return Err(Error::Params {
            reason: format!("prefix length {theta} out of range for dimension {total_dim}"),
        });
    }
    if total_dim > limit.min(32) {
        return Err(Error::EnumerationLimit {
            dim: total_dim,
            limit: limit.min(32),
        });
    }
    let mut cubes = Vec::with_capacity(1 << theta);
    for pattern in 0u64..1u64 << theta {
        let mut cube = Cube::free(total_dim)?;
        for i in 0..theta {
            cube.set(i, pattern >> (theta - 1 - i) & 1 == 1);
        }
        cubes.push(cube);
    }
    CubeFamily::new(total_dim, cubes)
}
