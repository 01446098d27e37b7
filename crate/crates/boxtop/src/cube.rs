//! Cubes over `{0,1}^dim`: partial bit assignments and the basic clopen
//! sets they stand for.
//!
//! A [`Cube`] is a partial function from coordinates to bits; it denotes the
//! set of all total assignments ([`Point`]s) extending it. The textual form
//! is one character per coordinate, `0`/`1` for an assigned bit and `-` for
//! a free coordinate, so `0-1` constrains coordinates 0 and 2 of a
//! three-dimensional space.
//!
//! Cubes are stored as two bitmask vectors (assigned coordinates and their
//! values) so compatibility and extension tests cost a handful of word
//! operations regardless of how sparse the assignment is.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(dim: usize) -> usize {
    dim.div_ceil(WORD)
}

/// A partial assignment of bits to coordinates `0..dim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    dim: usize,
    assigned: Vec<u64>,
    // Invariant: value & !assigned == 0, word by word.
    value: Vec<u64>,
}

impl Cube {
    /// The cube with no assigned coordinate (the whole space).
    pub fn free(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let words = words_for(dim);
        Ok(Cube {
            dim,
            assigned: vec![0; words],
            value: vec![0; words],
        })
    }

    /// Parse a pattern string over `[01-]`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut cube = Cube::free(text.chars().count())?;
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '-' => {}
                '0' => cube.set(i, false),
                '1' => cube.set(i, true),
                _ => {
                    return Err(Error::InvalidChar {
                        text: text.to_string(),
                        position: i,
                        found: ch,
                    })
                }
            }
        }
        Ok(cube)
    }

    /// The canonical pattern string; `parse` round-trips it.
    pub fn pattern(&self) -> String {
        (0..self.dim)
            .map(|i| match self.state(i) {
                None => '-',
                Some(false) => '0',
                Some(true) => '1',
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value at coordinate `i`: `None` when free.
    pub fn state(&self, i: usize) -> Option<bool> {
        debug_assert!(i < self.dim);
        let (w, b) = (i / WORD, i % WORD);
        if self.assigned[w] >> b & 1 == 1 {
            Some(self.value[w] >> b & 1 == 1)
        } else {
            None
        }
    }

    /// Assign coordinate `i`.
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.dim);
        let (w, b) = (i / WORD, i % WORD);
        self.assigned[w] |= 1 << b;
        if bit {
            self.value[w] |= 1 << b;
        } else {
            self.value[w] &= !(1 << b);
        }
    }

    /// Free coordinate `i`.
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.dim);
        let (w, b) = (i / WORD, i % WORD);
        self.assigned[w] &= !(1 << b);
        self.value[w] &= !(1 << b);
    }

    /// Copy of `self` with coordinate `i` assigned to `bit`.
    pub fn with(&self, i: usize, bit: bool) -> Cube {
        let mut c = self.clone();
        c.set(i, bit);
        c
    }

    /// The assigned coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.support_size());
        for (w, &word) in self.assigned.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * WORD + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Number of assigned coordinates.
    pub fn support_size(&self) -> usize {
        self.assigned.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of free coordinates.
    pub fn free_count(&self) -> usize {
        self.dim - self.support_size()
    }

    pub fn is_free(&self) -> bool {
        self.assigned.iter().all(|&w| w == 0)
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim != other_dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other_dim,
            });
        }
        Ok(())
    }

    /// True when the two partial assignments agree on their common support,
    /// i.e. their union is again a function and the point sets intersect.
    pub fn is_compatible(&self, other: &Cube) -> Result<bool> {
        self.check_dim(other.dim)?;
        Ok(self.compatible_unchecked(other))
    }

    pub(crate) fn compatible_unchecked(&self, other: &Cube) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        self.assigned
            .iter()
            .zip(&other.assigned)
            .zip(self.value.iter().zip(&other.value))
            .all(|((&a1, &a2), (&v1, &v2))| a1 & a2 & (v1 ^ v2) == 0)
    }

    /// The union of the two assignments when compatible; its point set is
    /// the intersection of the two point sets.
    pub fn meet(&self, other: &Cube) -> Result<Option<Cube>> {
        self.check_dim(other.dim)?;
        if !self.compatible_unchecked(other) {
            return Ok(None);
        }
        let mut out = self.clone();
        for w in 0..out.assigned.len() {
            out.assigned[w] |= other.assigned[w];
            out.value[w] |= other.value[w];
        }
        Ok(Some(out))
    }

    /// True when `coarser` is a subfunction of `self` (so the point set of
    /// `self` sits inside the point set of `coarser`).
    pub fn extends(&self, coarser: &Cube) -> bool {
        assert_eq!(self.dim, coarser.dim, "cube dimensions differ");
        for w in 0..self.assigned.len() {
            if coarser.assigned[w] & !self.assigned[w] != 0 {
                return false;
            }
            if coarser.assigned[w] & (coarser.value[w] ^ self.value[w]) != 0 {
                return false;
            }
        }
        true
    }

    /// Membership of a total assignment.
    pub fn contains_point(&self, point: &Point) -> Result<bool> {
        self.check_dim(point.dim)?;
        Ok(self.contains_point_unchecked(point))
    }

    pub(crate) fn contains_point_unchecked(&self, point: &Point) -> bool {
        debug_assert_eq!(self.dim, point.dim);
        self.assigned
            .iter()
            .zip(self.value.iter().zip(&point.bits))
            .all(|(&a, (&v, &p))| a & (v ^ p) == 0)
    }

    /// All points extending the cube, in lexicographic order.
    ///
    /// Guarded by `limit` on the ambient dimension since the result has
    /// `2^(dim - support)` entries.
    pub fn points(&self, limit: usize) -> Result<Vec<Point>> {
        if self.dim > limit {
            return Err(Error::EnumerationLimit {
                dim: self.dim,
                limit,
            });
        }
        let free: Vec<usize> = (0..self.dim).filter(|&i| self.state(i).is_none()).collect();
        let mut base = Point::zeros(self.dim);
        for i in self.support() {
            base.set(i, self.state(i) == Some(true));
        }
        let mut out = Vec::with_capacity(1usize << free.len());
        for combo in 0u64..1u64 << free.len() {
            let mut p = base.clone();
            for (j, &coord) in free.iter().enumerate() {
                // Earlier free coordinate = more significant digit.
                let bit = combo >> (free.len() - 1 - j) & 1 == 1;
                p.set(coord, bit);
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Number of points extending the cube: `2^(dim - support)`.
    pub fn cardinality(&self) -> u128 {
        let free = self.free_count();
        assert!(free < 128, "cardinality overflows u128");
        1u128 << free
    }

    /// Pairwise incompatible cubes whose point sets partition the
    /// complement of `self`.
    ///
    /// One cube per assigned coordinate in ascending order: fix the earlier
    /// assigned coordinates, flip this one, free the rest.
    pub fn complement_cubes(&self) -> CubeFamily {
        let mut cubes = Vec::with_capacity(self.support_size());
        let mut prefix = Cube::free(self.dim).expect("dim is positive");
        for i in self.support() {
            let bit = self.state(i) == Some(true);
            cubes.push(prefix.with(i, !bit));
            prefix.set(i, bit);
        }
        CubeFamily::new(self.dim, cubes).expect("dimensions agree by construction")
    }

    /// Pattern-string order: `-` < `0` < `1` coordinate by coordinate.
    fn class(&self, i: usize) -> u8 {
        match self.state(i) {
            None => 0,
            Some(false) => 1,
            Some(true) => 2,
        }
    }
}

impl Ord for Cube {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.dim.min(other.dim);
        for i in 0..common {
            match self.class(i).cmp(&other.class(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.dim.cmp(&other.dim)
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube({})", self.pattern())
    }
}

/// A total assignment of bits to coordinates `0..dim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    dim: usize,
    bits: Vec<u64>,
}

impl Point {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Point {
            dim,
            bits: vec![0; words_for(dim)],
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut p = Point::zeros(text.chars().count());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => p.set(i, true),
                _ => {
                    return Err(Error::InvalidChar {
                        text: text.to_string(),
                        position: i,
                        found: ch,
                    })
                }
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.dim);
        self.bits[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.dim);
        let (w, b) = (i / WORD, i % WORD);
        if bit {
            self.bits[w] |= 1 << b;
        } else {
            self.bits[w] &= !(1 << b);
        }
    }

    /// Numeric index with coordinate 0 as the most significant digit, so
    /// ascending index is lexicographic order. Requires `dim <= 63`.
    pub fn index(&self) -> u64 {
        assert!(self.dim <= 63, "index only defined for dim <= 63");
        let mut idx = 0;
        for i in 0..self.dim {
            idx = idx << 1 | self.bit(i) as u64;
        }
        idx
    }

    pub fn from_index(dim: usize, index: u64) -> Self {
        assert!(dim <= 63, "from_index only defined for dim <= 63");
        let mut p = Point::zeros(dim);
        for i in 0..dim {
            p.set(i, index >> (dim - 1 - i) & 1 == 1);
        }
        p
    }

    /// The total cube fixing every coordinate of this point.
    pub fn to_cube(&self) -> Cube {
        let mut c = Cube::free(self.dim).expect("dim is positive");
        for i in 0..self.dim {
            c.set(i, self.bit(i));
        }
        c
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.dim.min(other.dim);
        for i in 0..common {
            match self.bit(i).cmp(&other.bit(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.dim.cmp(&other.dim)
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({})", self)
    }
}

/// An ordered family of cubes of one dimension, with an optional bound on
/// every member's support size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeFamily {
    dim: usize,
    support_budget: Option<usize>,
    cubes: Vec<Cube>,
}

impl CubeFamily {
    pub fn new(dim: usize, cubes: Vec<Cube>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for c in &cubes {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: c.dim(),
                });
            }
        }
        Ok(CubeFamily {
            dim,
            support_budget: None,
            cubes,
        })
    }

    pub fn with_budget(dim: usize, cubes: Vec<Cube>, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::Params {
                reason: "support budget must be positive".into(),
            });
        }
        let mut family = CubeFamily::new(dim, cubes)?;
        for c in &family.cubes {
            if c.support_size() > budget {
                return Err(Error::BudgetExceeded {
                    pattern: c.pattern(),
                    support: c.support_size(),
                    budget,
                });
            }
        }
        family.support_budget = Some(budget);
        Ok(family)
    }

    /// Parse a family from pattern strings; dimensions must agree.
    pub fn parse(patterns: &[&str]) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let cubes: Vec<Cube> = patterns.iter().map(|p| Cube::parse(p)).collect::<Result<_>>()?;
        let dim = cubes[0].dim();
        CubeFamily::new(dim, cubes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_budget(&self) -> Option<usize> {
        self.support_budget
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cube> {
        self.cubes.iter()
    }

    pub fn patterns(&self) -> Vec<String> {
        self.cubes.iter().map(Cube::pattern).collect()
    }

    /// Same cubes sorted into canonical (pattern string) order.
    pub fn canonical(&self) -> CubeFamily {
        let mut cubes = self.cubes.clone();
        cubes.sort();
        CubeFamily {
            dim: self.dim,
            support_budget: self.support_budget,
            cubes,
        }
    }

    /// Largest support size over the members, 0 for the empty family.
    pub fn max_support(&self) -> usize {
        self.cubes.iter().map(Cube::support_size).max().unwrap_or(0)
    }
}

impl<'a> IntoIterator for &'a CubeFamily {
    type Item = &'a Cube;
    type IntoIter = std::slice::Iter<'a, Cube>;
    fn into_iter(self) -> Self::IntoIter {
        self.cubes.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cube(p: &str) -> Cube {
        Cube::parse(p).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let c = cube("0-1");
        assert_eq!(c.dim(), 3);
        assert_eq!(c.state(0), Some(false));
        assert_eq!(c.state(1), None);
        assert_eq!(c.state(2), Some(true));
        assert_eq!(c.pattern(), "0-1");

        let free = cube("---");
        assert!(free.is_free());
        assert_eq!(free.support(), Vec::<usize>::new());
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(Cube::parse(""), Err(Error::EmptyPattern)));
        match Cube::parse("0-1x") {
            Err(Error::InvalidChar { position, found, .. }) => {
                assert_eq!(position, 3);
                assert_eq!(found, 'x');
            }
            other => panic!("expected invalid char, got {other:?}"),
        }
    }

    #[test]
    fn support_examples() {
        assert_eq!(cube("0-1").support(), vec![0, 2]);
        assert_eq!(cube("---").support(), Vec::<usize>::new());
        assert_eq!(cube("11").support(), vec![0, 1]);
    }

    #[test]
    fn compatibility_examples() {
        assert!(cube("0-").is_compatible(&cube("-1")).unwrap());
        assert!(!cube("0-").is_compatible(&cube("1-")).unwrap());
        // [01-] and [0-1] share the point 011.
        assert!(cube("01-").is_compatible(&cube("0-1")).unwrap());
        assert!(matches!(
            cube("0-").is_compatible(&cube("0--")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(cube("0-").meet(&cube("-1")).unwrap().unwrap(), cube("01"));
        assert_eq!(cube("0-").meet(&cube("1-")).unwrap(), None);
        assert_eq!(
            cube("0--").meet(&cube("--1")).unwrap().unwrap(),
            cube("0-1")
        );
    }

    #[test]
    fn contains_point_examples() {
        let c = cube("0-1");
        assert!(c.contains_point(&Point::parse("001").unwrap()).unwrap());
        assert!(!c.contains_point(&Point::parse("100").unwrap()).unwrap());
        let free = cube("---");
        for idx in 0..8 {
            assert!(free
                .contains_point(&Point::from_index(3, idx))
                .unwrap());
        }
    }

    #[test]
    fn points_in_lex_order() {
        let pts: Vec<String> = cube("0-").points(24).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(pts, ["00", "01"]);
        let pts: Vec<String> = cube("-0-").points(24).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(pts, ["000", "001", "100", "101"]);
        assert_eq!(cube("11").points(24).unwrap().len(), 1);
        assert!(matches!(
            Cube::free(30).unwrap().points(24),
            Err(Error::EnumerationLimit { .. })
        ));
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(cube("0-1").cardinality(), 2);
        assert_eq!(cube("---").cardinality(), 8);
        assert_eq!(cube("11").cardinality(), 1);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(cube("1-").complement_cubes().patterns(), ["0-"]);
        assert!(cube("---").complement_cubes().is_empty());
        assert_eq!(
            cube("1-0-").complement_cubes().patterns(),
            ["0---", "1-1-"]
        );
    }

    #[test]
    fn complement_partitions_the_outside() {
        // Exhaustive check of the three complement properties at small dim.
        for pattern in ["1-0-", "0-1", "11", "----", "01-0"] {
            let c = cube(pattern);
            let comp = c.complement_cubes();
            let mut seen = vec![false; 1 << c.dim()];
            for piece in &comp {
                assert!(!piece.is_compatible(&c).unwrap() || piece.meet(&c).unwrap().is_none());
                for p in piece.points(24).unwrap() {
                    let idx = p.index() as usize;
                    assert!(!seen[idx], "complement pieces overlap at {p}");
                    seen[idx] = true;
                }
            }
            for idx in 0..1u64 << c.dim() {
                let inside = c.contains_point(&Point::from_index(c.dim(), idx)).unwrap();
                assert_eq!(seen[idx as usize], !inside);
            }
            let total: u128 = comp.iter().map(Cube::cardinality).sum();
            assert_eq!(total, (1u128 << c.dim()) - c.cardinality());
        }
    }

    #[test]
    fn family_budget_enforced() {
        let cubes = vec![cube("01-"), cube("--1")];
        assert!(CubeFamily::with_budget(3, cubes.clone(), 2).is_ok());
        assert!(matches!(
            CubeFamily::with_budget(3, cubes.clone(), 1),
            Err(Error::BudgetExceeded { .. })
        ));
        // No budget: anything of matching dimension goes.
        assert!(CubeFamily::new(3, cubes).is_ok());
    }

    #[test]
    fn canonical_order_is_pattern_order() {
        let fam = CubeFamily::parse(&["1-", "-1", "00"]).unwrap().canonical();
        assert_eq!(fam.patterns(), ["-1", "00", "1-"]);
    }

    fn arb_cube(dim: usize) -> impl Strategy<Value = Cube> {
        proptest::collection::vec(proptest::option::of(any::<bool>()), dim).prop_map(
            move |states| {
                let mut c = Cube::free(dim).unwrap();
                for (i, s) in states.into_iter().enumerate() {
                    if let Some(bit) = s {
                        c.set(i, bit);
                    }
                }
                c
            },
        )
    }

    proptest! {
        #[test]
        fn roundtrip_pattern(c in arb_cube(9)) {
            prop_assert_eq!(Cube::parse(&c.pattern()).unwrap(), c);
        }

        #[test]
        fn compatible_iff_meet_iff_points_intersect(a in arb_cube(7), b in arb_cube(7)) {
            let compat = a.is_compatible(&b).unwrap();
            let meet = a.meet(&b).unwrap();
            prop_assert_eq!(compat, meet.is_some());
            let pts_a = a.points(24).unwrap();
            let pts_b = b.points(24).unwrap();
            let inter: Vec<&Point> = pts_a.iter().filter(|p| pts_b.contains(p)).collect();
            prop_assert_eq!(compat, !inter.is_empty());
            if let Some(m) = meet {
                let pts_m = m.points(24).unwrap();
                prop_assert_eq!(pts_m.len(), inter.len());
                for p in pts_m {
                    prop_assert!(inter.contains(&&p));
                }
            }
        }

        #[test]
        fn points_sorted_and_counted(c in arb_cube(8)) {
            let pts = c.points(24).unwrap();
            prop_assert_eq!(pts.len() as u128, c.cardinality());
            for pair in pts.windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }
    }
}
