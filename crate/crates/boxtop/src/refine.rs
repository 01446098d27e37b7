//! The two cube-refinement algorithms — prefix-ladder refinement and
//! enumeration-order disjointification — plus the diagonal construction
//! that defeats small would-be neighbourhood bases.
//!
//! Both refinement algorithms turn a family of cubes into an antichain
//! refining it with the same union of point sets; on dense inputs the
//! output is again dense, so it satisfies all three certificate properties
//! of [`crate::covers::certify_b_refinement`].

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::covers;
use crate::cube::{Cube, CubeFamily, Point};
use crate::error::{Error, Result};
use crate::Config;

/// The identity coordinate order `0, 1, ..., dim-1`.
pub fn identity_order(dim: usize) -> Vec<usize> {
    (0..dim).collect()
}

fn validate_order(order: &[usize], dim: usize) -> Result<()> {
    if order.len() != dim {
        return Err(Error::Params {
            reason: format!("order has {} entries for dimension {}", order.len(), dim),
        });
    }
    let mut seen = vec![false; dim];
    for &c in order {
        if c >= dim || seen[c] {
            return Err(Error::Params {
                reason: format!("order is not a permutation of 0..{dim}"),
            });
        }
        seen[c] = true;
    }
    Ok(())
}

/// Refine a dense family into an antichain of prefix cubes.
///
/// Walking the binary trie whose levels follow `order` breadth-first, a
/// prefix is emitted as soon as some member of the family sits fully inside
/// it, and is split otherwise. Emitted prefixes are therefore pairwise
/// disjoint, each extends a member, and together they cover the space.
///
/// Fails with an uncovered point when the family is not dense.
pub fn prefix_ladder_refine(family: &CubeFamily, order: &[usize]) -> Result<CubeFamily> {
    let dim = family.dim();
    validate_order(order, dim)?;

    // Depth at which each cube's support is fully inside the prefix.
    let mut position = vec![0usize; dim];
    for (pos, &coord) in order.iter().enumerate() {
        position[coord] = pos;
    }
    let need_depth: Vec<usize> = family
        .iter()
        .map(|c| {
            c.support()
                .iter()
                .map(|&coord| position[coord] + 1)
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out: Vec<Cube> = Vec::new();
    let mut queue: VecDeque<(Cube, Vec<usize>)> = VecDeque::new();
    queue.push_back((Cube::free(dim)?, (0..family.len()).collect()));

    while let Some((prefix, alive)) = queue.pop_front() {
        let depth = prefix.support_size();
        if alive.iter().any(|&i| need_depth[i] <= depth) {
            out.push(prefix);
            continue;
        }
        if alive.is_empty() || depth == dim {
            let witness = order_lex_least_uncovered(family, order)
                .expect("an undecidable prefix implies an uncovered point");
            return Err(Error::NotDense {
                witness: witness.to_string(),
            });
        }
        let coord = order[depth];
        for bit in [false, true] {
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&i| match family.cubes()[i].state(coord) {
                    Some(b) => b == bit,
                    None => true,
                })
                .collect();
            queue.push_back((prefix.with(coord, bit), next));
        }
    }
    CubeFamily::new(dim, out)
}

/// Least uncovered point where "least" reads the coordinates in the given
/// order, most significant first.
fn order_lex_least_uncovered(family: &CubeFamily, order: &[usize]) -> Option<Point> {
    fn descend(
        family: &CubeFamily,
        order: &[usize],
        alive: &[usize],
        depth: usize,
        point: &mut Point,
    ) -> Option<Point> {
        let covered = alive.iter().any(|&i| {
            family.cubes()[i]
                .support()
                .iter()
                .all(|&c| order[..depth].contains(&c))
        });
        if covered {
            return None;
        }
        if alive.is_empty() {
            let mut p = point.clone();
            for &c in &order[depth..] {
                p.set(c, false);
            }
            return Some(p);
        }
        debug_assert!(depth < order.len());
        let coord = order[depth];
        for bit in [false, true] {
            point.set(coord, bit);
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&i| match family.cubes()[i].state(coord) {
                    Some(b) => b == bit,
                    None => true,
                })
                .collect();
            if let Some(w) = descend(family, order, &next, depth + 1, point) {
                return Some(w);
            }
        }
        None
    }
    let alive: Vec<usize> = (0..family.len()).collect();
    let mut point = Point::zeros(family.dim());
    descend(family, order, &alive, 0, &mut point)
}

/// Disjointify a family in its enumeration order.
///
/// Member `α` contributes the cubes covering `[s_α]` minus the earlier
/// members' point sets, expanded over the accumulated support
/// `D_α = supp(s_0) ∪ … ∪ supp(s_α)`: every total assignment on `D_α`
/// extending `s_α` and differing from each earlier `s_β` somewhere on
/// `supp(s_β)`. The output is an antichain refining the input with exactly
/// the input's union of point sets; density is not required and is
/// preserved in both directions.
///
/// When `D_α` leaves more free coordinates than the configured threshold,
/// the expansion switches to products of complements, which yields coarser
/// cubes with the same union; only the hard cap on the cube count can fail
/// it.
pub fn disjointify(family: &CubeFamily, cfg: &Config) -> Result<CubeFamily> {
    let dim = family.dim();
    let mut out: Vec<Cube> = Vec::new();
    let mut accumulated = Cube::free(dim)?; // support only; values unused

    for (alpha, s_alpha) in family.iter().enumerate() {
        for i in s_alpha.support() {
            accumulated.set(i, false);
        }
        let earlier = &family.cubes()[..alpha];
        // An earlier subfunction of s_alpha forces every extension of
        // s_alpha to extend it too, so nothing survives.
        if earlier.iter().any(|s_beta| s_alpha.extends(s_beta)) {
            continue;
        }
        let extra: Vec<usize> = accumulated
            .support()
            .into_iter()
            .filter(|&i| s_alpha.state(i).is_none())
            .collect();
        if extra.len() <= cfg.expansion_threshold {
            expand_naive(s_alpha, &extra, earlier, cfg, &mut out)?;
        } else {
            expand_by_complements(s_alpha, earlier, cfg, &mut out)?;
        }
    }
    CubeFamily::new(dim, out)
}

fn expand_naive(
    s_alpha: &Cube,
    extra: &[usize],
    earlier: &[Cube],
    cfg: &Config,
    out: &mut Vec<Cube>,
) -> Result<()> {
    for combo in 0u64..1u64 << extra.len() {
        let mut candidate = s_alpha.clone();
        for (j, &coord) in extra.iter().enumerate() {
            candidate.set(coord, combo >> (extra.len() - 1 - j) & 1 == 1);
        }
        if earlier.iter().all(|s_beta| !candidate.extends(s_beta)) {
            if out.len() >= cfg.expansion_cap {
                return Err(Error::ExpansionCap {
                    cap: cfg.expansion_cap,
                });
            }
            out.push(candidate);
        }
    }
    Ok(())
}

fn expand_by_complements(
    s_alpha: &Cube,
    earlier: &[Cube],
    cfg: &Config,
    out: &mut Vec<Cube>,
) -> Result<()> {
    let mut pieces = vec![s_alpha.clone()];
    for s_beta in earlier {
        let mut next = Vec::with_capacity(pieces.len());
        for piece in &pieces {
            if !piece.compatible_unchecked(s_beta) {
                next.push(piece.clone());
                continue;
            }
            for comp in &s_beta.complement_cubes() {
                if let Some(m) = piece.meet(comp)? {
                    next.push(m);
                }
            }
            if next.len() > cfg.expansion_cap {
                return Err(Error::ExpansionCap {
                    cap: cfg.expansion_cap,
                });
            }
        }
        pieces = next;
        if pieces.is_empty() {
            return Ok(());
        }
    }
    if out.len() + pieces.len() > cfg.expansion_cap {
        return Err(Error::ExpansionCap {
            cap: cfg.expansion_cap,
        });
    }
    out.extend(pieces);
    Ok(())
}

/// Merge sibling cubes that differ in exactly one assigned coordinate,
/// repeating until stable. Preserves the union of point sets and keeps
/// antichains antichains.
pub fn coalesce(family: &CubeFamily) -> CubeFamily {
    let dim = family.dim();
    let mut cubes = family.cubes().to_vec();
    cubes.sort();
    loop {
        let mut merged: Vec<Cube> = Vec::with_capacity(cubes.len());
        let mut consumed = vec![false; cubes.len()];
        let mut index: BTreeMap<(String, usize), usize> = BTreeMap::new();
        for (i, cube) in cubes.iter().enumerate() {
            for coord in cube.support() {
                index.insert((sibling_key(cube, coord), coord), i);
            }
        }
        let mut any = false;
        for (i, cube) in cubes.iter().enumerate() {
            if consumed[i] {
                continue;
            }
            let mut partner = None;
            for coord in cube.support() {
                let key = (sibling_key(cube, coord), coord);
                if let Some(&j) = index.get(&key) {
                    if j != i && !consumed[j] && cubes[j].state(coord) != cube.state(coord) {
                        partner = Some((j, coord));
                        break;
                    }
                }
            }
            match partner {
                Some((j, coord)) => {
                    consumed[i] = true;
                    consumed[j] = true;
                    let mut m = cube.clone();
                    m.clear(coord);
                    merged.push(m);
                    any = true;
                }
                None => {
                    consumed[i] = true;
                    merged.push(cube.clone());
                }
            }
        }
        merged.sort();
        cubes = merged;
        if !any {
            break;
        }
    }
    CubeFamily::new(dim, cubes).expect("dimension unchanged")
}

/// Pattern with the given coordinate wildcarded, used to pair up siblings.
fn sibling_key(cube: &Cube, coord: usize) -> String {
    let mut c = cube.clone();
    c.clear(coord);
    c.pattern()
}

/// Restrict `x` to fresh coordinates outside the supports of the given
/// cubes, one per cube, greedily smallest first.
///
/// The returned cube `O` contains `x`, and no `[U_i]` is a subset of `[O]`:
/// flipping `x` at the coordinate picked for `U_i` gives a point of
/// `[U_i] \ [O]`. A list too greedy for the dimension fails naming the
/// first cube with no fresh coordinate left.
pub fn diagonal_witness(x: &Point, neighbourhoods: &[Cube]) -> Result<Cube> {
    let dim = x.dim();
    for u in neighbourhoods {
        if u.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: u.dim(),
            });
        }
        if !u.contains_point_unchecked(x) {
            return Err(Error::CentreOutside {
                pattern: u.pattern(),
            });
        }
    }
    let mut used = vec![false; dim];
    let mut picked = Vec::with_capacity(neighbourhoods.len());
    for (index, u) in neighbourhoods.iter().enumerate() {
        let fresh = (0..dim).find(|&c| !used[c] && u.state(c).is_none());
        match fresh {
            Some(c) => {
                used[c] = true;
                picked.push(c);
            }
            None => return Err(Error::PoolExhausted { index }),
        }
    }
    let mut witness = Cube::free(dim)?;
    for &c in &picked {
        witness.set(c, x.bit(c));
    }
    // Re-check the guarantee: x inside, and an escape point per input cube.
    assert!(witness.contains_point_unchecked(x));
    for (u, &c) in neighbourhoods.iter().zip(&picked) {
        let mut escape = x.clone();
        escape.set(c, !x.bit(c));
        assert!(u.contains_point_unchecked(&escape));
        assert!(!witness.contains_point_unchecked(&escape));
    }
    Ok(witness)
}

/// Convenience wrapper producing the certificate alongside a refinement.
pub fn certify_output(
    input: &CubeFamily,
    output: &CubeFamily,
    mode: covers::DensityMode,
    cfg: &Config,
) -> Result<covers::RefinementCertificate> {
    covers::certify_with_union(input, output, mode, cfg)
}
