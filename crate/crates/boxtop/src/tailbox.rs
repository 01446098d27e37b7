//! Finite products of tail spaces and their interval-box partitions.
//!
//! Each coordinate is `{0, .., m-1}` plus a distinguished top point, with
//! the fiat base: singletons below the top, tails `[a, top]` for
//! `a <= m-1`. An [`IntervalBox`] constrains every coordinate to either a
//! singleton or a tail; [`rudin_refine`] iteratively splits the full box
//! against a cover of such boxes until every piece sits inside a cover
//! member, producing a pairwise disjoint cover refining the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sizes of the coordinates; coordinate `n` has points `0..sizes[n]` plus
/// a top point represented by the sentinel value `sizes[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailProfile {
    sizes: Vec<usize>,
}

impl TailProfile {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Params {
                reason: "profile needs at least one coordinate of positive size".into(),
            });
        }
        Ok(TailProfile { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn coords(&self) -> usize {
        self.sizes.len()
    }

    /// Sentinel value of the top point at coordinate `n`.
    pub fn top(&self, n: usize) -> usize {
        self.sizes[n]
    }

    /// Number of points in the product, tops included.
    pub fn point_count(&self) -> u64 {
        self.sizes.iter().map(|&m| m as u64 + 1).product()
    }

    /// All points in odometer order (last coordinate fastest).
    pub fn points(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut p = vec![0usize; self.coords()];
        loop {
            out.push(p.clone());
            let mut n = self.coords();
            loop {
                if n == 0 {
                    return out;
                }
                n -= 1;
                if p[n] < self.sizes[n] {
                    p[n] += 1;
                    break;
                }
                p[n] = 0;
            }
        }
    }

    pub fn point_label(&self, point: &[usize]) -> String {
        let parts: Vec<String> = point
            .iter()
            .enumerate()
            .map(|(n, &v)| {
                if v == self.top(n) {
                    "top".to_string()
                } else {
                    v.to_string()
                }
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// One coordinate of an interval box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicFactor {
    /// A single point `v < m`.
    Singleton(usize),
    /// The tail `[a, top]` with `a <= m-1`.
    Tail(usize),
}

impl BasicFactor {
    fn contains(&self, value: usize) -> bool {
        match *self {
            BasicFactor::Singleton(v) => value == v,
            BasicFactor::Tail(a) => value >= a,
        }
    }

    /// Symbolic subset test; a tail never fits inside a singleton.
    fn subset_of(&self, other: &BasicFactor) -> bool {
        match (*self, *other) {
            (BasicFactor::Singleton(v), BasicFactor::Singleton(w)) => v == w,
            (BasicFactor::Singleton(v), BasicFactor::Tail(a)) => v >= a,
            (BasicFactor::Tail(a), BasicFactor::Tail(b)) => a >= b,
            (BasicFactor::Tail(_), BasicFactor::Singleton(_)) => false,
        }
    }
}

/// A product of basic factors, one per coordinate: the interval `[x, y]`
/// where `y` is `x` at singleton coordinates and the top elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalBox {
    factors: Vec<BasicFactor>,
}

impl IntervalBox {
    pub fn new(factors: Vec<BasicFactor>) -> Self {
        IntervalBox { factors }
    }

    /// The full box: every coordinate the whole space.
    pub fn full(profile: &TailProfile) -> Self {
        IntervalBox {
            factors: vec![BasicFactor::Tail(0); profile.coords()],
        }
    }

    pub fn factors(&self) -> &[BasicFactor] {
        &self.factors
    }

    pub fn validate(&self, profile: &TailProfile) -> Result<()> {
        if self.factors.len() != profile.coords() {
            return Err(Error::ProfileMismatch);
        }
        for (n, f) in self.factors.iter().enumerate() {
            let ok = match *f {
                BasicFactor::Singleton(v) => v < profile.sizes()[n],
                BasicFactor::Tail(a) => a < profile.sizes()[n],
            };
            if !ok {
                return Err(Error::ProfileMismatch);
            }
        }
        Ok(())
    }

    /// Coordinatewise membership.
    pub fn contains(&self, point: &[usize]) -> Result<bool> {
        if point.len() != self.factors.len() {
            return Err(Error::ProfileMismatch);
        }
        Ok(self
            .factors
            .iter()
            .zip(point)
            .all(|(f, &v)| f.contains(v)))
    }

    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.subset_of(b))
    }

    /// The top corner `y` of `[x, y]`.
    fn top_corner(&self, profile: &TailProfile) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .map(|(n, f)| match *f {
                BasicFactor::Singleton(v) => v,
                BasicFactor::Tail(_) => profile.top(n),
            })
            .collect()
    }

    /// Sum of remaining tail widths, the per-member termination measure.
    pub fn rank(&self, profile: &TailProfile) -> u64 {
        self.factors
            .iter()
            .enumerate()
            .map(|(n, f)| match *f {
                BasicFactor::Singleton(_) => 0,
                BasicFactor::Tail(a) => (profile.sizes()[n] - a) as u64 + 1,
            })
            .sum()
    }

    pub fn display(&self, profile: &TailProfile) -> String {
        debug_assert_eq!(self.factors.len(), profile.coords());
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| match *f {
                BasicFactor::Singleton(v) => format!("{{{v}}}"),
                BasicFactor::Tail(a) => format!("[{a},top]"),
            })
            .collect();
        parts.join("x")
    }
}

/// A cover of the product by interval boxes, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBoxCover {
    profile: TailProfile,
    boxes: Vec<IntervalBox>,
}

impl TailBoxCover {
    pub fn new(profile: TailProfile, boxes: Vec<IntervalBox>) -> Result<Self> {
        for b in &boxes {
            b.validate(&profile)?;
        }
        Ok(TailBoxCover { profile, boxes })
    }

    pub fn profile(&self) -> &TailProfile {
        &self.profile
    }

    pub fn boxes(&self) -> &[IntervalBox] {
        &self.boxes
    }
}

/// Split one box against the cover.
///
/// A box inside some cover member is returned as is. Otherwise the first
/// cover member `G` containing the box's top corner determines a corner
/// `z` (coordinatewise max of the box's lower corner with `G`'s tail
/// bases) and the box shatters into `[z, y]` plus, for every subset `A` of
/// the tail coordinates moved by `z` and every choice of values below `z`
/// on `A`, the box keeping tails off `A` and pinning singletons on `A`.
/// The pieces partition the box and `[z, y]` lands inside `G`.
pub fn split_box(
    profile: &TailProfile,
    interval: &IntervalBox,
    cover: &TailBoxCover,
) -> Result<Vec<IntervalBox>> {
    interval.validate(profile)?;
    if cover.boxes().iter().any(|g| interval.subset_of(g)) {
        return Ok(vec![interval.clone()]);
    }
    let y = interval.top_corner(profile);
    let chosen = cover
        .boxes()
        .iter()
        .find(|g| g.contains(&y).unwrap_or(false))
        .ok_or_else(|| Error::NotACover {
            point: profile.point_label(&y),
        })?;

    // z: push each tail coordinate up to the chosen member's tail base.
    let mut moved: Vec<(usize, usize, usize)> = Vec::new(); // (coord, x_n, z_n)
    let mut template = interval.clone();
    for (n, f) in interval.factors().iter().enumerate() {
        if let BasicFactor::Tail(x_n) = *f {
            let base = match chosen.factors()[n] {
                BasicFactor::Tail(a) => a,
                // The chosen member contains the top corner, so it must be
                // a tail at every tail coordinate of the box.
                BasicFactor::Singleton(_) => {
                    unreachable!("cover member holding the top corner is singleton at a tail coordinate")
                }
            };
            let z_n = x_n.max(base);
            if z_n > x_n {
                moved.push((n, x_n, z_n));
                template.factors[n] = BasicFactor::Tail(z_n);
            }
        }
    }
    assert!(
        !moved.is_empty(),
        "no strict progress: the box would already sit inside the chosen member"
    );

    let mut pieces = Vec::new();
    for mask in 0u32..1u32 << moved.len() {
        let selected: Vec<&(usize, usize, usize)> = moved
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m)
            .collect();
        // Odometer over the singleton values on the selected coordinates.
        let mut values: Vec<usize> = selected.iter().map(|&&(_, x_n, _)| x_n).collect();
        loop {
            let mut piece = template.clone();
            for (&&(n, _, _), &v) in selected.iter().zip(&values) {
                piece.factors[n] = BasicFactor::Singleton(v);
            }
            pieces.push(piece);
            let mut i = selected.len();
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                let (_, x_n, z_n) = *selected[i];
                if values[i] + 1 < z_n {
                    values[i] += 1;
                    break false;
                }
                values[i] = x_n;
            };
            if done {
                break;
            }
        }
    }
    Ok(pieces)
}

/// Trace of the iterative refinement: the final partition plus the
/// strictly decreasing per-iteration rank.
#[derive(Clone, Debug)]
pub struct RudinTrace {
    pub family: Vec<IntervalBox>,
    pub iterations: usize,
    /// Max rank over the not-yet-decided members, one entry per iteration
    /// that performed any split.
    pub ranks: Vec<u64>,
}

/// Iteratively split the full box against the cover until every piece
/// sits inside a cover member.
pub fn rudin_refine(cover: &TailBoxCover) -> Result<Vec<IntervalBox>> {
    Ok(rudin_refine_trace(cover)?.family)
}

pub fn rudin_refine_trace(cover: &TailBoxCover) -> Result<RudinTrace> {
    let profile = cover.profile();
    let mut family = vec![IntervalBox::full(profile)];
    let mut ranks: Vec<u64> = Vec::new();
    let mut iterations = 0;
    loop {
        let undecided_rank = family
            .iter()
            .filter(|b| !cover.boxes().iter().any(|g| b.subset_of(g)))
            .map(|b| b.rank(profile))
            .max();
        let Some(rank) = undecided_rank else {
            break;
        };
        if let Some(&previous) = ranks.last() {
            assert!(rank < previous, "iteration rank must strictly decrease");
        }
        ranks.push(rank);
        let mut next = Vec::with_capacity(family.len());
        for b in &family {
            next.extend(split_box(profile, b, cover)?);
        }
        next.sort();
        family = next;
        iterations += 1;
    }
    Ok(RudinTrace {
        family,
        iterations,
        ranks,
    })
}

/// Certificate for a claimed disjoint cover refinement by interval boxes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxCertificate {
    pub disjoint_ok: bool,
    pub cover_ok: bool,
    pub refines_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub overlap_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uncovered_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unrefined_witness: Option<String>,
}

impl BoxCertificate {
    pub fn all_ok(&self) -> bool {
        self.disjoint_ok && self.cover_ok && self.refines_ok
    }
}

/// Check by full enumeration that `refinement` partitions the product and
/// symbolically that every member sits inside a cover member.
pub fn verify_box_refinement(
    cover: &TailBoxCover,
    refinement: &[IntervalBox],
) -> Result<BoxCertificate> {
    let profile = cover.profile();
    for b in refinement {
        b.validate(profile)?;
    }
    if profile.point_count() > 1 << 24 {
        return Err(Error::EnumerationLimit {
            dim: profile.coords(),
            limit: 24,
        });
    }
    let mut overlap = None;
    let mut uncovered = None;
    for p in profile.points() {
        let mut holders = refinement.iter().filter(|b| b.contains(&p).unwrap());
        match (holders.next(), holders.next()) {
            (None, _) if uncovered.is_none() => uncovered = Some(profile.point_label(&p)),
            (Some(a), Some(b)) if overlap.is_none() => {
                overlap = Some(format!(
                    "{} and {} share {}",
                    a.display(profile),
                    b.display(profile),
                    profile.point_label(&p)
                ));
            }
            _ => {}
        }
    }
    let unrefined = refinement
        .iter()
        .find(|b| !cover.boxes().iter().any(|g| b.subset_of(g)))
        .map(|b| b.display(profile));
    Ok(BoxCertificate {
        disjoint_ok: overlap.is_none(),
        cover_ok: uncovered.is_none(),
        refines_ok: unrefined.is_none(),
        overlap_witness: overlap,
        uncovered_witness: uncovered,
        unrefined_witness: unrefined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasicFactor::{Singleton as S, Tail as T};

    fn profile(sizes: &[usize]) -> TailProfile {
        TailProfile::new(sizes.to_vec()).unwrap()
    }

    fn bx(factors: &[BasicFactor]) -> IntervalBox {
        IntervalBox::new(factors.to_vec())
    }

    #[test]
    fn containment_examples() {
        let u = bx(&[T(1), S(0)]);
        assert!(u.contains(&[2, 0]).unwrap()); // 2 is the top of a size-2 coord
        assert!(!u.contains(&[0, 0]).unwrap());
        assert!(bx(&[T(0)]).contains(&[2]).unwrap());
        assert!(matches!(u.contains(&[0]), Err(Error::ProfileMismatch)));
    }

    #[test]
    fn validation_respects_the_fiat_base() {
        let p = profile(&[2]);
        assert!(bx(&[S(1)]).validate(&p).is_ok());
        assert!(bx(&[T(1)]).validate(&p).is_ok());
        // No singleton top, no pure-top tail.
        assert!(bx(&[S(2)]).validate(&p).is_err());
        assert!(bx(&[T(2)]).validate(&p).is_err());
    }

    #[test]
    fn split_one_coordinate() {
        let p = profile(&[2]);
        let cover = TailBoxCover::new(
            p.clone(),
            vec![bx(&[T(1)]), bx(&[S(0)]), bx(&[S(1)])],
        )
        .unwrap();
        let pieces = split_box(&p, &bx(&[T(0)]), &cover).unwrap();
        let mut sorted = pieces.clone();
        sorted.sort();
        assert_eq!(sorted, vec![bx(&[S(0)]), bx(&[T(1)])]);
    }

    #[test]
    fn split_keeps_decided_boxes() {
        let p = profile(&[3]);
        let cover = TailBoxCover::new(p.clone(), vec![bx(&[T(0)])]).unwrap();
        let pieces = split_box(&p, &bx(&[T(1)]), &cover).unwrap();
        assert_eq!(pieces, vec![bx(&[T(1)])]);
    }

    #[test]
    fn split_two_coordinates() {
        let p = profile(&[2, 2]);
        let mut boxes = vec![bx(&[T(1), T(1)])];
        for a in 0..2 {
            for b in 0..2 {
                boxes.push(bx(&[S(a), S(b)]));
            }
        }
        let cover = TailBoxCover::new(p.clone(), boxes).unwrap();
        let mut pieces = split_box(&p, &IntervalBox::full(&p), &cover).unwrap();
        pieces.sort();
        assert_eq!(
            pieces,
            vec![
                bx(&[S(0), S(0)]),
                bx(&[S(0), T(1)]),
                bx(&[T(1), S(0)]),
                bx(&[T(1), T(1)]),
            ]
        );
        // The pieces partition the 9 points.
        let mut count = 0;
        for point in p.points() {
            let holders = pieces.iter().filter(|b| b.contains(&point).unwrap()).count();
            assert_eq!(holders, 1, "point {:?}", point);
            count += 1;
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn split_requires_a_cover_at_the_top_corner() {
        let p = profile(&[2]);
        let cover = TailBoxCover::new(p.clone(), vec![bx(&[S(0)]), bx(&[S(1)])]).unwrap();
        match split_box(&p, &bx(&[T(0)]), &cover) {
            Err(Error::NotACover { point }) => assert_eq!(point, "(top)"),
            other => panic!("expected NotACover, got {other:?}"),
        }
    }

    #[test]
    fn rudin_single_coordinate() {
        let p = profile(&[2]);
        let cover = TailBoxCover::new(
            p.clone(),
            vec![bx(&[T(1)]), bx(&[S(0)]), bx(&[S(1)])],
        )
        .unwrap();
        let out = rudin_refine(&cover).unwrap();
        assert_eq!(out, vec![bx(&[S(0)]), bx(&[T(1)])]);
        assert!(verify_box_refinement(&cover, &out).unwrap().all_ok());
    }

    #[test]
    fn rudin_trivial_cover() {
        let p = profile(&[3, 4]);
        let cover = TailBoxCover::new(p.clone(), vec![IntervalBox::full(&p)]).unwrap();
        let trace = rudin_refine_trace(&cover).unwrap();
        assert_eq!(trace.iterations, 0);
        assert_eq!(trace.family, vec![IntervalBox::full(&p)]);
    }

    #[test]
    fn rudin_two_coordinates_size_three() {
        let p = profile(&[3, 3]);
        let mut boxes = vec![bx(&[T(2), T(2)])];
        for v in 0..3 {
            boxes.push(bx(&[S(v), T(0)]));
            boxes.push(bx(&[T(0), S(v)]));
        }
        let cover = TailBoxCover::new(p.clone(), boxes).unwrap();
        let trace = rudin_refine_trace(&cover).unwrap();
        assert!(trace.iterations <= 3, "iterations: {}", trace.iterations);
        for pair in trace.ranks.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        let cert = verify_box_refinement(&cover, &trace.family).unwrap();
        assert!(cert.all_ok(), "{cert:?}");
    }

    #[test]
    fn each_iteration_is_a_disjoint_cover_refining_the_previous() {
        let p = profile(&[3, 2]);
        let mut boxes = vec![bx(&[T(2), T(1)])];
        for v in 0..3 {
            boxes.push(bx(&[S(v), T(0)]));
        }
        for v in 0..2 {
            boxes.push(bx(&[T(0), S(v)]));
        }
        let cover = TailBoxCover::new(p.clone(), boxes).unwrap();
        let mut stage = vec![IntervalBox::full(&p)];
        for _ in 0..16 {
            let next: Vec<IntervalBox> = stage
                .iter()
                .flat_map(|b| split_box(&p, b, &cover).unwrap())
                .collect();
            // Refinement: every new box sits inside an old one.
            for b in &next {
                assert!(stage.iter().any(|old| b.subset_of(old)));
            }
            // Disjoint cover at every stage.
            for point in p.points() {
                let holders = next.iter().filter(|b| b.contains(&point).unwrap()).count();
                assert_eq!(holders, 1, "point {point:?}");
            }
            let done = next.len() == stage.len();
            stage = next;
            if done {
                break;
            }
        }
        let cert = verify_box_refinement(&cover, &stage).unwrap();
        assert!(cert.all_ok());
    }

    #[test]
    fn verify_catches_missing_and_duplicate_cells() {
        let p = profile(&[2]);
        let cover = TailBoxCover::new(
            p.clone(),
            vec![bx(&[T(1)]), bx(&[S(0)]), bx(&[S(1)])],
        )
        .unwrap();
        let good = rudin_refine(&cover).unwrap();

        let mut missing = good.clone();
        missing.remove(0);
        let cert = verify_box_refinement(&cover, &missing).unwrap();
        assert!(!cert.cover_ok);
        assert_eq!(cert.uncovered_witness.as_deref(), Some("(0)"));

        let mut duplicated = good.clone();
        duplicated.push(duplicated[0].clone());
        let cert = verify_box_refinement(&cover, &duplicated).unwrap();
        assert!(!cert.disjoint_ok);
        assert!(cert.overlap_witness.is_some());
    }
}
