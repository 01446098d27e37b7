//! Seeded instance generators. Every generator is a pure function of its
//! `ChaCha8Rng`, so a fixed seed reproduces the same instances on any
//! platform.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covers::{is_dense, DensityMode};
use crate::cube::{Cube, CubeFamily, Point};
use crate::metrisable::{ultrametric_to_witness, BaseFamily, MetrisabilityWitness, Ultrametric};
use crate::pointset::PointSet;
use crate::singular::SingularParams;
use crate::tailbox::{BasicFactor, IntervalBox, TailBoxCover, TailProfile};
use crate::Config;

pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_coords(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..dim).collect();
    pool.shuffle(rng);
    pool.truncate(count);
    pool
}

/// One cube with a uniform support size in `[0, budget]`, coordinates
/// sampled without replacement, bits uniform.
pub fn random_cube(rng: &mut ChaCha8Rng, dim: usize, budget: usize) -> Cube {
    let size = rng.random_range(0..=budget.min(dim));
    let mut cube = Cube::free(dim).expect("positive dimension");
    for c in sample_coords(rng, dim, size) {
        cube.set(c, rng.random());
    }
    cube
}

/// A family of `count` random cubes, no density guarantee.
pub fn random_family(rng: &mut ChaCha8Rng, dim: usize, count: usize, budget: usize) -> CubeFamily {
    let cubes = (0..count).map(|_| random_cube(rng, dim, budget)).collect();
    CubeFamily::new(dim, cubes).expect("uniform dimension")
}

/// A dense family: random cubes followed by a density repair that adds one
/// full-support cube per uncovered point found. Returns `None` when the
/// repair would push the family past `max_cubes`.
pub fn random_dense_family(
    rng: &mut ChaCha8Rng,
    dim: usize,
    count: usize,
    budget: usize,
    max_cubes: usize,
) -> Option<CubeFamily> {
    let mut cubes: Vec<Cube> = (0..count).map(|_| random_cube(rng, dim, budget)).collect();
    let cfg = Config::default();
    loop {
        let family = CubeFamily::new(dim, cubes.clone()).expect("uniform dimension");
        let check = is_dense(&family, DensityMode::Symbolic, &cfg).expect("symbolic density");
        match check.witness {
            None => return Some(family),
            Some(point) => {
                if cubes.len() >= max_cubes {
                    return None;
                }
                cubes.push(point.to_cube());
            }
        }
    }
}

/// A dense instance with dimension in `dims` and at most 64 cubes, sized
/// so the repair stays small; redraws parameters until the bound holds.
pub fn dense_instance(rng: &mut ChaCha8Rng, dims: std::ops::RangeInclusive<usize>) -> CubeFamily {
    loop {
        let dim = rng.random_range(dims.clone());
        let budget_cap = if dim <= 10 { 3 } else { 2 };
        let budget = rng.random_range(1..=budget_cap);
        // Enough cubes that the expected number of uncovered points is small.
        let count = match budget {
            1 => rng.random_range(dim + 2..=dim + 10),
            2 => rng.random_range(2 * dim..=(3 * dim).min(52)),
            _ => rng.random_range((4 * dim).min(40)..=52),
        };
        if let Some(family) = random_dense_family(rng, dim, count.min(52), budget, 64) {
            return family;
        }
    }
}

/// A point plus cubes around it, sized so a fresh coordinate always exists
/// for the diagonal construction.
pub fn diagonal_instance(rng: &mut ChaCha8Rng) -> (Point, Vec<Cube>) {
    let dim = rng.random_range(4..=14);
    let sets = rng.random_range(1..=dim / 2);
    let mut x = Point::zeros(dim);
    for i in 0..dim {
        x.set(i, rng.random());
    }
    let cubes = (0..sets)
        .map(|_| {
            let size = rng.random_range(0..=dim - sets);
            let mut c = Cube::free(dim).expect("positive dimension");
            for coord in sample_coords(rng, dim, size) {
                c.set(coord, x.bit(coord));
            }
            c
        })
        .collect();
    (x, cubes)
}

/// A hierarchical ultrametric: recursive random partition, cross-part
/// distance `1/(depth+1)`.
pub fn random_ultrametric(rng: &mut ChaCha8Rng, max_points: usize) -> Ultrametric {
    let n = rng.random_range(2..=max_points.max(2));
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut d = vec![vec![0.0; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    split(rng, &order, 1, &mut d);
    return Ultrametric::new(labels, d).expect("hierarchical construction is ultrametric");

    fn split(rng: &mut ChaCha8Rng, points: &[usize], depth: usize, d: &mut [Vec<f64>]) {
        if points.len() <= 1 {
            return;
        }
        let parts = rng.random_range(2..=points.len().min(3));
        // Random composition of the point list into nonempty parts.
        let mut cuts: Vec<usize> = (1..points.len()).collect();
        cuts.shuffle(rng);
        cuts.truncate(parts - 1);
        cuts.sort();
        cuts.push(points.len());
        let mut start = 0;
        let mut blocks: Vec<&[usize]> = Vec::new();
        for cut in cuts {
            blocks.push(&points[start..cut]);
            start = cut;
        }
        let value = 1.0 / depth as f64;
        for (bi, a) in blocks.iter().enumerate() {
            for b in blocks.iter().skip(bi + 1) {
                for &x in *a {
                    for &y in *b {
                        d[x][y] = value;
                        d[y][x] = value;
                    }
                }
            }
        }
        for block in blocks {
            split(rng, block, depth + 1, d);
        }
    }
}

/// A valid witness plus a cover it can refine: each point contributes one
/// of its own cells, plus some unions of cells as decoys.
pub fn witness_and_cover(
    rng: &mut ChaCha8Rng,
    max_points: usize,
) -> (MetrisabilityWitness, BaseFamily) {
    let witness = ultrametric_to_witness(&random_ultrametric(rng, max_points));
    let n = witness.point_count();
    let mut sets: Vec<PointSet> = Vec::new();
    for x in 0..n {
        let level = rng.random_range(0..witness.levels());
        let cell = witness.set(x, level).clone();
        if !sets.contains(&cell) {
            sets.push(cell);
        }
    }
    for _ in 0..rng.random_range(0..=3) {
        let mut decoy = PointSet::empty(n);
        for _ in 0..rng.random_range(1..=3) {
            let x = rng.random_range(0..n);
            let level = rng.random_range(0..witness.levels());
            decoy.union_with(witness.set(x, level));
        }
        if !sets.contains(&decoy) {
            sets.push(decoy);
        }
    }
    let base = BaseFamily::new(witness.labels().to_vec(), sets).expect("universes agree");
    (witness, base)
}

/// Factor witnesses for a product: `count` hierarchical witnesses trimmed
/// or padded to exactly `levels` levels, every factor of at least `levels`
/// points so each level strictly shrinks somewhere.
pub fn product_factors(
    rng: &mut ChaCha8Rng,
    count: usize,
    max_size: usize,
) -> Vec<MetrisabilityWitness> {
    let levels = count;
    (0..count)
        .map(|_| {
            let size = rng.random_range(levels.max(2)..=max_size.max(levels.max(2)));
            ladder_witness(rng, size, levels)
        })
        .collect()
}

/// A witness over `size` points with exactly `levels` levels whose cells
/// strictly shrink at every level, built from a random chain of nested
/// partitions.
fn ladder_witness(rng: &mut ChaCha8Rng, size: usize, levels: usize) -> MetrisabilityWitness {
    assert!(size + 1 >= levels, "not enough points to shrink every level");
    let labels: Vec<String> = (0..size).map(|i| format!("q{i}")).collect();
    // blocks[l] refines blocks[l-1]; level 0 is one block.
    let mut blocks: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels);
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    blocks.push(vec![order.clone()]);
    for level in 1..levels {
        let previous = blocks.last().expect("nonempty");
        let mut next: Vec<Vec<usize>> = Vec::new();
        // Split the largest block to guarantee strict shrinking, and keep
        // enough splittable blocks in reserve for the remaining levels.
        let reserve = levels - 1 - level;
        let mut budget = (size - reserve).saturating_sub(previous.len() + 1);
        let widest = (0..previous.len())
            .max_by_key(|&i| previous[i].len())
            .expect("nonempty");
        for (i, block) in previous.iter().enumerate() {
            let optional = block.len() >= 2 && budget > 0 && rng.random();
            if i == widest && block.len() >= 2 {
                let cut = rng.random_range(1..block.len());
                next.push(block[..cut].to_vec());
                next.push(block[cut..].to_vec());
            } else if optional {
                budget -= 1;
                let cut = rng.random_range(1..block.len());
                next.push(block[..cut].to_vec());
                next.push(block[cut..].to_vec());
            } else {
                next.push(block.clone());
            }
        }
        blocks.push(next);
    }
    let table: Vec<Vec<PointSet>> = (0..size)
        .map(|x| {
            blocks
                .iter()
                .map(|partition| {
                    let block = partition
                        .iter()
                        .find(|b| b.contains(&x))
                        .expect("partitions cover every point");
                    PointSet::from_indices(size, block.iter().copied())
                })
                .collect()
        })
        .collect();
    MetrisabilityWitness::new(labels, levels, table).expect("nested partitions form a witness")
}

/// Break condition (2)(b) of one factor at a level visible to the product:
/// grow some `U(x, level)` sideways while keeping the structural
/// invariants, at a level at least `factor_index`.
pub fn corrupt_factor(
    rng: &mut ChaCha8Rng,
    factor: &MetrisabilityWitness,
    factor_index: usize,
) -> Option<MetrisabilityWitness> {
    let n = factor.point_count();
    let levels = factor.levels();
    let mut candidates = Vec::new();
    for x in 0..n {
        for level in factor_index.max(1)..levels {
            for z in 0..n {
                let in_outer = factor.set(x, level - 1).contains(z);
                let in_cell = factor.set(x, level).contains(z);
                if in_outer && !in_cell {
                    candidates.push((x, level, z));
                }
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let &(x, level, z) = &candidates[rng.random_range(0..candidates.len())];
    let mut table: Vec<Vec<PointSet>> = (0..n)
        .map(|p| (0..levels).map(|l| factor.set(p, l).clone()).collect())
        .collect();
    table[x][level].insert(z);
    Some(
        MetrisabilityWitness::from_table_unchecked(factor.labels().to_vec(), levels, table)
            .expect("shape unchanged"),
    )
}

/// A random profile of up to `max_coords` coordinates of size up to
/// `max_size`, plus boxes repaired into a cover.
pub fn random_tailbox_cover(
    rng: &mut ChaCha8Rng,
    max_coords: usize,
    max_size: usize,
) -> TailBoxCover {
    let coords = rng.random_range(1..=max_coords);
    let sizes: Vec<usize> = (0..coords).map(|_| rng.random_range(1..=max_size)).collect();
    let profile = TailProfile::new(sizes.clone()).expect("positive sizes");
    let random_box = |rng: &mut ChaCha8Rng| {
        IntervalBox::new(
            sizes
                .iter()
                .map(|&m| {
                    if rng.random() {
                        BasicFactor::Singleton(rng.random_range(0..m))
                    } else {
                        BasicFactor::Tail(rng.random_range(0..m))
                    }
                })
                .collect(),
        )
    };
    let mut boxes: Vec<IntervalBox> = (0..rng.random_range(1..=5)).map(|_| random_box(rng)).collect();
    // Repair: every point must land in some box.
    for point in profile.points() {
        let covered = boxes.iter().any(|b| b.contains(&point).unwrap());
        if covered {
            continue;
        }
        let fix = IntervalBox::new(
            point
                .iter()
                .zip(&sizes)
                .map(|(&v, &m)| {
                    if v == m {
                        BasicFactor::Tail(rng.random_range(0..m))
                    } else if rng.random() {
                        BasicFactor::Singleton(v)
                    } else {
                        BasicFactor::Tail(rng.random_range(0..=v.min(m - 1)))
                    }
                })
                .collect(),
        );
        debug_assert!(fix.contains(&point).unwrap());
        boxes.push(fix);
    }
    TailBoxCover::new(profile, boxes).expect("repaired boxes fit the profile")
}

/// Random parameters with dimension at most `max_dim`.
pub fn random_singular_params(rng: &mut ChaCha8Rng, max_dim: usize) -> SingularParams {
    assert!(max_dim >= 4);
    let theta = rng.random_range(1..=3);
    let mut ladder = vec![rng.random_range(theta..=theta + 1)];
    let steps = rng.random_range(1..=3);
    for _ in 1..steps {
        let next = ladder.last().unwrap() + rng.random_range(1..=2);
        if next + ladder[0] > max_dim {
            break;
        }
        ladder.push(next);
    }
    let last = *ladder.last().unwrap();
    let total_dim = rng.random_range((last + ladder[0]).max(theta + 1)..=max_dim);
    let partition = (0..1usize << theta)
        .map(|_| rng.random_range(0..ladder.len()))
        .collect();
    SingularParams::new(theta, ladder, total_dim, partition).expect("parameters in range")
}
