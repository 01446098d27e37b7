//! Decision procedures for families of cubes: density (the cubes cover the
//! whole space), antichain (pairwise disjoint), refinement (every member
//! extends a member of a base family), and union preservation, each with an
//! explicit counterexample on failure. [`certify_b_refinement`] bundles the
//! three core checks into one machine-checkable certificate.

use serde::{Deserialize, Serialize};

use crate::cube::{Cube, CubeFamily, Point};
use crate::error::{Error, Result};
use crate::Config;

/// How density is decided.
///
/// Exhaustive mode enumerates `2^dim` points and needs the dimension under
/// the configured limit; symbolic mode recursively splits on the most
/// constrained coordinate and works at any dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityMode {
    Exhaustive,
    Symbolic,
}

/// Outcome of a density check.
#[derive(Clone, Debug)]
pub struct DensityCheck {
    pub dense: bool,
    /// An uncovered point when not dense: the lexicographically least one
    /// in exhaustive mode, the first found along the recursion path in
    /// symbolic mode.
    pub witness: Option<Point>,
    pub mode: DensityMode,
}

/// Outcome of an antichain check.
#[derive(Clone, Debug)]
pub struct AntichainCheck {
    pub antichain: bool,
    /// First compatible pair under canonical (pattern) order.
    pub witness: Option<(Cube, Cube)>,
}

/// Outcome of a refinement check.
#[derive(Clone, Debug)]
pub struct RefinesCheck {
    pub refines: bool,
    /// Canonically least member of the refinement that extends no member
    /// of the base family.
    pub witness: Option<Cube>,
}

/// Which union lost the witness point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnionSide {
    /// The point lies in the output's union but not the input's.
    Input,
    /// The point lies in the input's union but not the output's.
    Output,
}

#[derive(Clone, Debug)]
pub struct UnionCheck {
    pub preserved: bool,
    pub witness: Option<(Point, UnionSide)>,
}

/// A bit per point of `{0,1}^dim`, indexed lexicographically.
pub(crate) struct PointBitmap {
    dim: usize,
    words: Vec<u64>,
}

impl PointBitmap {
    pub(crate) fn empty(dim: usize) -> Self {
        assert!(dim <= 32, "bitmap dimension out of range");
        let bits = 1usize << dim;
        PointBitmap {
            dim,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub(crate) fn set(&mut self, index: u64) {
        self.words[(index / 64) as usize] |= 1 << (index % 64);
    }

    pub(crate) fn get(&self, index: u64) -> bool {
        self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub(crate) fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Least index whose bit is clear, if any.
    pub(crate) fn first_unset(&self) -> Option<u64> {
        let total = 1u64 << self.dim;
        for (w, &word) in self.words.iter().enumerate() {
            if word != !0 {
                let idx = w as u64 * 64 + word.trailing_ones() as u64;
                if idx < total {
                    return Some(idx);
                }
            }
        }
        None
    }

    /// Least index where the two bitmaps differ.
    pub(crate) fn first_diff(&self, other: &PointBitmap) -> Option<u64> {
        debug_assert_eq!(self.dim, other.dim);
        for (w, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            if a != b {
                return Some(w as u64 * 64 + (a ^ b).trailing_zeros() as u64);
            }
        }
        None
    }

    /// Mark every point of the cube. Cost is `2^(free coordinates)`.
    pub(crate) fn mark_cube(&mut self, cube: &Cube) {
        debug_assert_eq!(cube.dim(), self.dim);
        let mut base = 0u64;
        let mut free_mask = 0u64;
        for i in 0..self.dim {
            let sig = 1u64 << (self.dim - 1 - i);
            match cube.state(i) {
                Some(true) => base |= sig,
                Some(false) => {}
                None => free_mask |= sig,
            }
        }
        let mut sub = 0u64;
        loop {
            self.set(base | sub);
            sub = sub.wrapping_sub(free_mask) & free_mask;
            if sub == 0 {
                break;
            }
        }
    }
}

pub(crate) fn union_bitmap(family: &CubeFamily, limit: usize) -> Result<PointBitmap> {
    let effective = limit.min(32);
    if family.dim() > effective {
        return Err(Error::EnumerationLimit {
            dim: family.dim(),
            limit: effective,
        });
    }
    let mut bm = PointBitmap::empty(family.dim());
    for cube in family {
        bm.mark_cube(cube);
    }
    Ok(bm)
}

/// Decide whether every point of the space extends some member.
pub fn is_dense(family: &CubeFamily, mode: DensityMode, cfg: &Config) -> Result<DensityCheck> {
    match mode {
        DensityMode::Exhaustive => {
            let bm = union_bitmap(family, cfg.enum_limit)?;
            let witness = bm.first_unset().map(|idx| Point::from_index(family.dim(), idx));
            Ok(DensityCheck {
                dense: witness.is_none(),
                witness,
                mode,
            })
        }
        DensityMode::Symbolic => {
            let witness = symbolic_uncovered(family.cubes().to_vec(), family.dim());
            Ok(DensityCheck {
                dense: witness.is_none(),
                witness,
                mode,
            })
        }
    }
}

/// Recursive tautology check by splitting on the coordinate assigned in the
/// most cubes (ties to the lowest index), 0-branch first. Returns an
/// uncovered point or `None` when the cubes cover everything.
fn symbolic_uncovered(cubes: Vec<Cube>, dim: usize) -> Option<Point> {
    let mut path: Vec<(usize, bool)> = Vec::new();
    fn recurse(cubes: &[Cube], dim: usize, path: &mut Vec<(usize, bool)>) -> Option<Point> {
        if cubes.iter().any(Cube::is_free) {
            return None;
        }
        if cubes.is_empty() {
            let mut p = Point::zeros(dim);
            for &(coord, bit) in path.iter() {
                p.set(coord, bit);
            }
            return Some(p);
        }
        let mut counts = vec![0u32; dim];
        for c in cubes {
            for i in c.support() {
                counts[i] += 1;
            }
        }
        let split = (0..dim).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).unwrap();
        debug_assert!(counts[split] > 0);
        for bit in [false, true] {
            let reduced: Vec<Cube> = cubes
                .iter()
                .filter_map(|c| match c.state(split) {
                    Some(b) if b != bit => None,
                    Some(_) => {
                        let mut c = c.clone();
                        c.clear(split);
                        Some(c)
                    }
                    None => Some(c.clone()),
                })
                .collect();
            path.push((split, bit));
            if let Some(w) = recurse(&reduced, dim, path) {
                return Some(w);
            }
            path.pop();
        }
        None
    }
    recurse(&cubes, dim, &mut path)
}

/// Decide pairwise incompatibility.
pub fn is_antichain(family: &CubeFamily) -> AntichainCheck {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&a, &b| family.cubes()[a].cmp(&family.cubes()[b]));
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            let (ca, cb) = (&family.cubes()[a], &family.cubes()[b]);
            if ca.compatible_unchecked(cb) {
                return AntichainCheck {
                    antichain: false,
                    witness: Some((ca.clone(), cb.clone())),
                };
            }
        }
    }
    AntichainCheck {
        antichain: true,
        witness: None,
    }
}

/// Decide whether every member of `refinement` extends some member of
/// `base`.
pub fn refines(base: &CubeFamily, refinement: &CubeFamily) -> Result<RefinesCheck> {
    if base.dim() != refinement.dim() {
        return Err(Error::DimensionMismatch {
            left: base.dim(),
            right: refinement.dim(),
        });
    }
    let mut sorted: Vec<&Cube> = refinement.iter().collect();
    sorted.sort();
    for r in sorted {
        if !base.iter().any(|s| r.extends(s)) {
            return Ok(RefinesCheck {
                refines: false,
                witness: Some(r.clone()),
            });
        }
    }
    Ok(RefinesCheck {
        refines: true,
        witness: None,
    })
}

/// Whether the point set of `cube` sits inside the union of `family`,
/// decided symbolically; returns an escape point otherwise.
pub fn covered_by(cube: &Cube, family: &CubeFamily) -> Result<(bool, Option<Point>)> {
    if cube.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            left: cube.dim(),
            right: family.dim(),
        });
    }
    let reduced: Vec<Cube> = family
        .iter()
        .filter(|s| s.compatible_unchecked(cube))
        .map(|s| {
            let mut s = s.clone();
            for i in cube.support() {
                s.clear(i);
            }
            s
        })
        .collect();
    match symbolic_uncovered(reduced, cube.dim()) {
        None => Ok((true, None)),
        Some(mut p) => {
            for i in cube.support() {
                p.set(i, cube.state(i) == Some(true));
            }
            Ok((false, Some(p)))
        }
    }
}

/// Decide whether the two families cover the same point set.
pub fn union_preserved(
    input: &CubeFamily,
    output: &CubeFamily,
    mode: DensityMode,
    cfg: &Config,
) -> Result<UnionCheck> {
    if input.dim() != output.dim() {
        return Err(Error::DimensionMismatch {
            left: input.dim(),
            right: output.dim(),
        });
    }
    match mode {
        DensityMode::Exhaustive => {
            let in_bm = union_bitmap(input, cfg.enum_limit)?;
            let out_bm = union_bitmap(output, cfg.enum_limit)?;
            match in_bm.first_diff(&out_bm) {
                None => Ok(UnionCheck {
                    preserved: true,
                    witness: None,
                }),
                Some(idx) => {
                    let point = Point::from_index(input.dim(), idx);
                    let side = if in_bm.get(idx) {
                        UnionSide::Output
                    } else {
                        UnionSide::Input
                    };
                    Ok(UnionCheck {
                        preserved: false,
                        witness: Some((point, side)),
                    })
                }
            }
        }
        DensityMode::Symbolic => {
            let mut sorted: Vec<&Cube> = output.iter().collect();
            sorted.sort();
            for r in sorted {
                if let (false, Some(p)) = covered_by(r, input)? {
                    return Ok(UnionCheck {
                        preserved: false,
                        witness: Some((p, UnionSide::Input)),
                    });
                }
            }
            let mut sorted: Vec<&Cube> = input.iter().collect();
            sorted.sort();
            for s in sorted {
                if let (false, Some(p)) = covered_by(s, output)? {
                    return Ok(UnionCheck {
                        preserved: false,
                        witness: Some((p, UnionSide::Output)),
                    });
                }
            }
            Ok(UnionCheck {
                preserved: true,
                witness: None,
            })
        }
    }
}

/// Counterexamples attached to a certificate, as interchange strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateWitnesses {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dense: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub antichain: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refines: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub union: Option<UnionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionWitness {
    pub point: String,
    pub missing_from: UnionSide,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStats {
    pub input_cubes: usize,
    pub output_cubes: usize,
    pub max_output_support: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget_exceeded: Option<bool>,
}

/// Evidence that a family `R` is (or is not) a dense antichain refinement
/// of a family `S`. A witness is present exactly for the properties that
/// failed, and re-running the base checks reproduces the booleans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementCertificate {
    pub dense_ok: bool,
    pub antichain_ok: bool,
    pub refines_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub union_preserved_ok: Option<bool>,
    pub density_mode: DensityMode,
    pub witnesses: CertificateWitnesses,
    pub stats: CertificateStats,
}

impl RefinementCertificate {
    /// All recorded properties hold.
    pub fn all_ok(&self) -> bool {
        self.dense_ok
            && self.antichain_ok
            && self.refines_ok
            && self.union_preserved_ok.unwrap_or(true)
    }
}

/// Density and antichain report for a single family, mirroring the
/// certificate shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub dense_ok: bool,
    pub antichain_ok: bool,
    pub density_mode: DensityMode,
    pub witnesses: CertificateWitnesses,
}

pub fn check_family(family: &CubeFamily, mode: DensityMode, cfg: &Config) -> Result<FamilyCheck> {
    let density = is_dense(family, mode, cfg)?;
    let antichain = is_antichain(family);
    Ok(FamilyCheck {
        dense_ok: density.dense,
        antichain_ok: antichain.antichain,
        density_mode: mode,
        witnesses: CertificateWitnesses {
            dense: density.witness.as_ref().map(|p| p.to_string()),
            antichain: antichain
                .witness
                .as_ref()
                .map(|(a, b)| (a.pattern(), b.pattern())),
            refines: None,
            union: None,
        },
    })
}

/// Check that `refinement` is a dense antichain refining `base`.
pub fn certify_b_refinement(
    base: &CubeFamily,
    refinement: &CubeFamily,
    mode: DensityMode,
    cfg: &Config,
) -> Result<RefinementCertificate> {
    certify(base, refinement, mode, cfg, false)
}

/// Like [`certify_b_refinement`] but also records whether the two families
/// cover the same point set.
pub fn certify_with_union(
    base: &CubeFamily,
    refinement: &CubeFamily,
    mode: DensityMode,
    cfg: &Config,
) -> Result<RefinementCertificate> {
    certify(base, refinement, mode, cfg, true)
}

fn certify(
    base: &CubeFamily,
    refinement: &CubeFamily,
    mode: DensityMode,
    cfg: &Config,
    with_union: bool,
) -> Result<RefinementCertificate> {
    if base.dim() != refinement.dim() {
        return Err(Error::DimensionMismatch {
            left: base.dim(),
            right: refinement.dim(),
        });
    }
    let density = is_dense(refinement, mode, cfg)?;
    let antichain = is_antichain(refinement);
    let refinement_check = refines(base, refinement)?;
    let union = if with_union {
        Some(union_preserved(base, refinement, mode, cfg)?)
    } else {
        None
    };
    let witnesses = CertificateWitnesses {
        dense: density.witness.as_ref().map(|p| p.to_string()),
        antichain: antichain
            .witness
            .as_ref()
            .map(|(a, b)| (a.pattern(), b.pattern())),
        refines: refinement_check.witness.as_ref().map(Cube::pattern),
        union: union.as_ref().and_then(|u| {
            u.witness.as_ref().map(|(p, side)| UnionWitness {
                point: p.to_string(),
                missing_from: *side,
            })
        }),
    };
    Ok(RefinementCertificate {
        dense_ok: density.dense,
        antichain_ok: antichain.antichain,
        refines_ok: refinement_check.refines,
        union_preserved_ok: union.as_ref().map(|u| u.preserved),
        density_mode: mode,
        witnesses,
        stats: CertificateStats {
            input_cubes: base.len(),
            output_cubes: refinement.len(),
            max_output_support: refinement.max_support(),
            budget_exceeded: base
                .support_budget()
                .map(|k| refinement.max_support() > k),
        },
    })
}
