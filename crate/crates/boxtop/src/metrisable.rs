//! Level-indexed neighbourhood witnesses over finite point sets.
//!
//! A [`MetrisabilityWitness`] is a table `U(x, level)` of point sets with
//! two structural duties (each set contains its centre, later levels
//! shrink) and two behavioural ones: at every level the cells around any
//! two points are nested-or-equal when one contains the other's centre
//! (condition 2a) and disjoint when it does not (condition 2b). Together
//! with a base-approximation property (condition 1, checked against an
//! explicit [`BaseFamily`]) this is what makes the one-line disjoint
//! refinement of [`sikorski_refine`] work: pick for each point the first
//! level that fits inside a cover member and the chosen cells partition
//! the space.
//!
//! The module also holds the conversions between witnesses and
//! ultrametrics (they are two presentations of the same structure), the
//! product construction that combines one witness per factor, and the two
//! concrete families of witnesses used throughout: ordinal surrogates with
//! a top point and bounded prefix cylinders on `{0,1}^n`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;

const MAX_VIOLATIONS: usize = 64;

/// A neighbourhood table over labelled points with ordered levels.
#[derive(Clone, Debug, PartialEq)]
pub struct MetrisabilityWitness {
    labels: Vec<String>,
    levels: usize,
    /// `table[x][level]`, every set over the `labels.len()` universe.
    table: Vec<Vec<PointSet>>,
}

impl MetrisabilityWitness {
    /// Build a witness, enforcing the structural invariants: every
    /// `U(x, level)` contains `x` and levels shrink monotonically.
    pub fn new(labels: Vec<String>, levels: usize, table: Vec<Vec<PointSet>>) -> Result<Self> {
        let w = Self::from_table_unchecked(labels, levels, table)?;
        for x in 0..w.point_count() {
            for level in 0..levels {
                if !w.table[x][level].contains(x) {
                    return Err(Error::Params {
                        reason: format!(
                            "U({}, {level}) does not contain its centre",
                            w.labels[x]
                        ),
                    });
                }
                if level + 1 < levels && !w.table[x][level + 1].is_subset(&w.table[x][level]) {
                    return Err(Error::Params {
                        reason: format!(
                            "U({}, {}) is not inside U({}, {level})",
                            w.labels[x],
                            level + 1,
                            w.labels[x]
                        ),
                    });
                }
            }
        }
        Ok(w)
    }

    /// Build a witness checking only well-formedness, not the structural
    /// invariants. Needed to represent broken tables so the checker has
    /// something to indict.
    pub fn from_table_unchecked(
        labels: Vec<String>,
        levels: usize,
        table: Vec<Vec<PointSet>>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 || levels == 0 {
            return Err(Error::Params {
                reason: "witness needs at least one point and one level".into(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Params {
                    reason: format!("duplicate point label {l:?}"),
                });
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != levels) {
            return Err(Error::Params {
                reason: "table shape does not match points x levels".into(),
            });
        }
        for row in &table {
            for set in row {
                if set.universe() != n {
                    return Err(Error::Params {
                        reason: "table entry over the wrong universe".into(),
                    });
                }
            }
        }
        Ok(MetrisabilityWitness {
            labels,
            levels,
            table,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn set(&self, x: usize, level: usize) -> &PointSet {
        &self.table[x][level]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// All distinct cells of the table as a base family.
    pub fn cell_base(&self) -> BaseFamily {
        let mut sets: Vec<PointSet> = Vec::new();
        for row in &self.table {
            for set in row {
                if !sets.contains(set) {
                    sets.push(set.clone());
                }
            }
        }
        BaseFamily::new(self.labels.clone(), sets).expect("universes agree")
    }
}

/// A reference family of subsets against which condition (1) is checked.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseFamily {
    labels: Vec<String>,
    sets: Vec<PointSet>,
}

impl BaseFamily {
    pub fn new(labels: Vec<String>, sets: Vec<PointSet>) -> Result<Self> {
        for s in &sets {
            if s.universe() != labels.len() {
                return Err(Error::Params {
                    reason: "base set over the wrong universe".into(),
                });
            }
        }
        Ok(BaseFamily { labels, sets })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }
}

/// One concrete way a table fails its conditions. Every reported tuple
/// re-checks against the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum WitnessViolation {
    /// Condition (1): no level of `point` fits inside base set `set`.
    NeighbourhoodBase { point: String, set: usize },
    /// `U(point, level)` does not contain `point`.
    Containment { point: String, level: usize },
    /// Condition (2)(a): `y` is in `U(x, alpha)` but `U(y, beta)` is not a
    /// subset of it.
    Nesting {
        x: String,
        y: String,
        alpha: usize,
        beta: usize,
    },
    /// Condition (2)(b): `y` is outside `U(x, alpha)` but `U(y, beta)`
    /// meets it.
    Separation {
        x: String,
        y: String,
        alpha: usize,
        beta: usize,
    },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessViolation::NeighbourhoodBase { point, set } => {
                write!(f, "(1) fails at {point} against base set #{set}")
            }
            WitnessViolation::Containment { point, level } => {
                write!(f, "U({point}, {level}) misses its centre")
            }
            WitnessViolation::Nesting { x, y, alpha, beta } => {
                write!(f, "(2)(a) fails at ({x}, {y}), levels ({alpha}, {beta})")
            }
            WitnessViolation::Separation { x, y, alpha, beta } => {
                write!(f, "(2)(b) fails at ({x}, {y}), levels ({alpha}, {beta})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub ok: bool,
    pub violations: Vec<WitnessViolation>,
    /// True when collection stopped at the cap.
    pub truncated: bool,
}

struct Collector {
    violations: Vec<WitnessViolation>,
    truncated: bool,
}

impl Collector {
    fn new() -> Self {
        Collector {
            violations: Vec::new(),
            truncated: false,
        }
    }

    fn push(&mut self, v: WitnessViolation) -> bool {
        if self.violations.len() >= MAX_VIOLATIONS {
            self.truncated = true;
            return false;
        }
        self.violations.push(v);
        true
    }

    fn full(&self) -> bool {
        self.truncated
    }

    fn into_report(self) -> WitnessReport {
        WitnessReport {
            ok: self.violations.is_empty() && !self.truncated,
            violations: self.violations,
            truncated: self.truncated,
        }
    }
}

/// Check conditions (2)(a) and (2)(b) — equivalently: centres are inside
/// their cells, levels shrink, and at each level the cells around any two
/// points are equal or disjoint.
pub fn check_witness_structure(witness: &MetrisabilityWitness) -> WitnessReport {
    let mut out = Collector::new();
    collect_structure(witness, &mut out);
    out.into_report()
}

/// Check condition (1) against `base` together with the structural
/// conditions (2)(a)/(2)(b).
pub fn check_witness(witness: &MetrisabilityWitness, base: &BaseFamily) -> Result<WitnessReport> {
    if witness.labels() != base.labels() {
        return Err(Error::PointSetMismatch);
    }
    let mut out = Collector::new();
    collect_structure(witness, &mut out);
    'sets: for (set_index, o) in base.sets().iter().enumerate() {
        for x in o.iter() {
            let fits = (0..witness.levels()).any(|level| witness.set(x, level).is_subset(o));
            if !fits {
                let pushed = out.push(WitnessViolation::NeighbourhoodBase {
                    point: witness.labels[x].clone(),
                    set: set_index,
                });
                if !pushed {
                    break 'sets;
                }
            }
        }
    }
    Ok(out.into_report())
}

fn collect_structure(w: &MetrisabilityWitness, out: &mut Collector) {
    let n = w.point_count();
    for x in 0..n {
        for level in 0..w.levels {
            if !w.table[x][level].contains(x)
                && !out.push(WitnessViolation::Containment {
                    point: w.labels[x].clone(),
                    level,
                })
            {
                return;
            }
        }
        for level in 0..w.levels - 1 {
            if !w.table[x][level + 1].is_subset(&w.table[x][level])
                && !out.push(WitnessViolation::Nesting {
                    x: w.labels[x].clone(),
                    y: w.labels[x].clone(),
                    alpha: level,
                    beta: level + 1,
                })
            {
                return;
            }
        }
    }
    // Per level, cells must look the same from every member. Interning the
    // sets makes the scan linear in the total cell mass.
    for level in 0..w.levels {
        let mut ids: HashMap<&PointSet, u32> = HashMap::new();
        let mut id_of = Vec::with_capacity(n);
        for x in 0..n {
            let next = ids.len() as u32;
            id_of.push(*ids.entry(&w.table[x][level]).or_insert(next));
        }
        for x in 0..n {
            for y in w.table[x][level].iter() {
                if id_of[y] == id_of[x] {
                    continue;
                }
                let ux = &w.table[x][level];
                let uy = &w.table[y][level];
                let violation = if !uy.is_subset(ux) {
                    WitnessViolation::Nesting {
                        x: w.labels[x].clone(),
                        y: w.labels[y].clone(),
                        alpha: level,
                        beta: level,
                    }
                } else if uy.contains(x) {
                    WitnessViolation::Nesting {
                        x: w.labels[y].clone(),
                        y: w.labels[x].clone(),
                        alpha: level,
                        beta: level,
                    }
                } else if !ux.is_disjoint(uy) {
                    WitnessViolation::Separation {
                        x: w.labels[y].clone(),
                        y: w.labels[x].clone(),
                        alpha: level,
                        beta: level,
                    }
                } else {
                    // U(y, level) is empty; the containment pass reported it.
                    continue;
                };
                if !out.push(violation) {
                    return;
                }
            }
        }
        if out.full() {
            return;
        }
    }
}

/// Refine an open cover: assign each point the first level whose cell fits
/// inside some cover member, and return the deduplicated cells.
///
/// Assumes the witness passes [`check_witness_structure`]; under that
/// assumption the result is pairwise disjoint, covers every point, and
/// each cell sits inside a cover member.
pub fn sikorski_refine(
    witness: &MetrisabilityWitness,
    cover: &BaseFamily,
) -> Result<Vec<PointSet>> {
    if witness.labels() != cover.labels() {
        return Err(Error::PointSetMismatch);
    }
    let mut cells: Vec<PointSet> = Vec::new();
    for x in 0..witness.point_count() {
        let rank = (0..witness.levels()).find(|&level| {
            cover
                .sets()
                .iter()
                .any(|o| witness.set(x, level).is_subset(o))
        });
        match rank {
            Some(level) => {
                let cell = witness.set(x, level);
                if !cells.contains(cell) {
                    cells.push(cell.clone());
                }
            }
            None => {
                return Err(Error::NotRefinable {
                    point: witness.labels[x].clone(),
                })
            }
        }
    }
    Ok(cells)
}

/// A finite ultrametric: symmetric, zero exactly on the diagonal, and
/// satisfying the strong triangle inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct Ultrametric {
    labels: Vec<String>,
    d: Vec<Vec<f64>>,
}

impl Ultrametric {
    pub fn new(labels: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Params {
                reason: "metric needs at least one point".into(),
            });
        }
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric {
                reason: "distance matrix is not square over the points".into(),
            });
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Error::InvalidMetric {
                    reason: format!("nonzero diagonal at {}", labels[i]),
                });
            }
            for j in 0..n {
                if d[i][j] < 0.0 || !d[i][j].is_finite() {
                    return Err(Error::InvalidMetric {
                        reason: format!("bad distance between {} and {}", labels[i], labels[j]),
                    });
                }
                if d[i][j] != d[j][i] {
                    return Err(Error::InvalidMetric {
                        reason: format!("asymmetry between {} and {}", labels[i], labels[j]),
                    });
                }
                if i != j && d[i][j] == 0.0 {
                    return Err(Error::InvalidMetric {
                        reason: format!(
                            "zero distance between distinct points {} and {}",
                            labels[i], labels[j]
                        ),
                    });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if d[i][j] > d[i][k].max(d[k][j]) {
                        return Err(Error::UltrametricTriple {
                            x: labels[i].clone(),
                            y: labels[j].clone(),
                            z: labels[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(Ultrametric { labels, d })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.d
    }
}

/// Turn an ultrametric into a witness: level 0 is the whole space, and
/// each following level takes closed balls at the next smaller distinct
/// distance (ending with radius 0, the singletons).
pub fn ultrametric_to_witness(metric: &Ultrametric) -> MetrisabilityWitness {
    let n = metric.point_count();
    let mut thresholds: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = metric.distance(i, j);
            if !thresholds.contains(&v) {
                thresholds.push(v);
            }
        }
    }
    thresholds.sort_by(|a, b| b.partial_cmp(a).expect("distances are finite"));
    // Closed-ball radii: one step below each separation threshold.
    let mut radii: Vec<f64> = thresholds.iter().skip(1).copied().collect();
    radii.push(0.0);
    let levels = radii.len() + 1;
    let table: Vec<Vec<PointSet>> = (0..n)
        .map(|x| {
            let mut row = vec![PointSet::full(n)];
            for &r in &radii {
                row.push(PointSet::from_indices(
                    n,
                    (0..n).filter(|&y| metric.distance(x, y) <= r),
                ));
            }
            row
        })
        .collect();
    MetrisabilityWitness::new(metric.labels().to_vec(), levels, table)
        .expect("balls of a valid ultrametric nest")
}

/// Recover an ultrametric from a witness: `d(x, y) = 1/n` for the first
/// level `n >= 1` separating `x` from `y`. Level 0 never separates.
pub fn witness_to_ultrametric(witness: &MetrisabilityWitness) -> Result<Ultrametric> {
    let n = witness.point_count();
    let mut d = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let first = (1..witness.levels())
                .find(|&level| witness.set(x, level).is_disjoint(witness.set(y, level)));
            match first {
                Some(level) => {
                    d[x][y] = 1.0 / level as f64;
                    d[y][x] = d[x][y];
                }
                None => {
                    return Err(Error::NoSeparation {
                        x: witness.labels[x].clone(),
                        y: witness.labels[y].clone(),
                    })
                }
            }
        }
    }
    Ultrametric::new(witness.labels().to_vec(), d)
}

fn validate_factors(factors: &[MetrisabilityWitness]) -> Result<usize> {
    if factors.is_empty() {
        return Err(Error::Params {
            reason: "product needs at least one factor".into(),
        });
    }
    let levels = factors[0].levels();
    for (index, f) in factors.iter().enumerate() {
        if f.levels() != levels {
            return Err(Error::FactorLevels {
                index,
                expected: levels,
                found: f.levels(),
            });
        }
    }
    if factors.len() != levels {
        return Err(Error::FactorCount {
            expected: levels,
            levels,
            found: factors.len(),
        });
    }
    Ok(levels)
}

fn product_points(factors: &[MetrisabilityWitness]) -> (Vec<String>, Vec<Vec<usize>>) {
    let mut labels = vec![String::new()];
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for f in factors {
        let mut next_labels = Vec::with_capacity(labels.len() * f.point_count());
        let mut next_tuples = Vec::with_capacity(tuples.len() * f.point_count());
        for (prefix, tuple) in labels.iter().zip(&tuples) {
            for (i, l) in f.labels().iter().enumerate() {
                let label = if prefix.is_empty() {
                    l.clone()
                } else {
                    format!("{prefix},{l}")
                };
                next_labels.push(label);
                let mut t = tuple.clone();
                t.push(i);
                next_tuples.push(t);
            }
        }
        labels = next_labels;
        tuples = next_tuples;
    }
    (labels, tuples)
}

/// Combine one witness per factor into a witness on the product points.
///
/// At level `i`, factor `a` contributes its own level-`i` cell when
/// `a <= i` and its whole point set otherwise; the number of factors must
/// equal the number of levels. The table is assembled mechanically, so
/// feeding in an invalid factor yields an invalid product for
/// [`check_witness`] to expose.
pub fn product_witness(factors: &[MetrisabilityWitness]) -> Result<MetrisabilityWitness> {
    let levels = validate_factors(factors)?;
    let (labels, tuples) = product_points(factors);
    let n = labels.len();
    let mut table: Vec<Vec<PointSet>> = Vec::with_capacity(n);
    for tuple in &tuples {
        let mut row = Vec::with_capacity(levels);
        for i in 0..levels {
            let members = (0..n).filter(|&q| {
                tuples[q]
                    .iter()
                    .enumerate()
                    .all(|(a, &qa)| a > i || factors[a].set(tuple[a], i).contains(qa))
            });
            row.push(PointSet::from_indices(n, members));
        }
        table.push(row);
    }
    MetrisabilityWitness::from_table_unchecked(labels, levels, table)
}

/// The box base generated by the factor witness sets: all products of one
/// level-`i` factor cell per coordinate, deduplicated.
pub fn product_box_base(factors: &[MetrisabilityWitness]) -> Result<BaseFamily> {
    let levels = validate_factors(factors)?;
    let (labels, tuples) = product_points(factors);
    let n = labels.len();
    let mut sets: Vec<PointSet> = Vec::new();
    for tuple in &tuples {
        for i in 0..levels {
            let members = (0..n).filter(|&q| {
                tuples[q]
                    .iter()
                    .enumerate()
                    .all(|(a, &qa)| factors[a].set(tuple[a], i).contains(qa))
            });
            let set = PointSet::from_indices(n, members);
            if !sets.contains(&set) {
                sets.push(set);
            }
        }
    }
    BaseFamily::new(labels, sets)
}

/// Witness for the ordinal surrogate `{0, .., m-1, top}`: below the level
/// you are a singleton, otherwise the tail from the level up.
pub fn ordinal_witness(m: usize) -> Result<MetrisabilityWitness> {
    if m == 0 {
        return Err(Error::Params {
            reason: "ordinal surrogate needs m >= 1".into(),
        });
    }
    let n = m + 1; // finite points plus the top
    let labels: Vec<String> = (0..m).map(|i| i.to_string()).chain(["top".into()]).collect();
    let levels = m + 1;
    let tail = |a: usize| PointSet::from_indices(n, a..n);
    let table: Vec<Vec<PointSet>> = (0..n)
        .map(|zeta| {
            (0..levels)
                .map(|alpha| {
                    if zeta < m && zeta < alpha {
                        PointSet::singleton(n, zeta)
                    } else {
                        tail(alpha)
                    }
                })
                .collect()
        })
        .collect();
    MetrisabilityWitness::new(labels, levels, table)
}

/// The tail-and-singleton base on `{0, .., m-1, top}`.
pub fn ordinal_base(m: usize) -> Result<BaseFamily> {
    if m == 0 {
        return Err(Error::Params {
            reason: "ordinal surrogate needs m >= 1".into(),
        });
    }
    let n = m + 1;
    let labels: Vec<String> = (0..m).map(|i| i.to_string()).chain(["top".into()]).collect();
    let mut sets: Vec<PointSet> = (0..m).map(|z| PointSet::singleton(n, z)).collect();
    sets.extend((0..=m).map(|a| PointSet::from_indices(n, a..n)));
    BaseFamily::new(labels, sets)
}

/// Witness on `{0,1}^n` whose level `i + 1` cell is the cylinder fixing
/// the first `ladder[i]` bits; level 0 is the whole space.
pub fn bounded_box_witness(n: usize, ladder: &[usize]) -> Result<MetrisabilityWitness> {
    validate_ladder(n, ladder)?;
    let count = 1usize << n;
    let labels: Vec<String> = (0..count).map(|v| bit_label(v, n)).collect();
    let levels = ladder.len() + 1;
    let table: Vec<Vec<PointSet>> = (0..count)
        .map(|f| {
            let mut row = vec![PointSet::full(count)];
            for &k in ladder {
                // Points sharing the first k bits of f.
                let shift = n - k;
                row.push(PointSet::from_indices(
                    count,
                    (0..count).filter(|&g| g >> shift == f >> shift),
                ));
            }
            row
        })
        .collect();
    MetrisabilityWitness::new(labels, levels, table)
}

/// Every cube over the first `ladder.last()` coordinates, as point sets of
/// `{0,1}^n`: the bounded-support cylinder base.
pub fn bounded_cylinder_base(n: usize, ladder: &[usize]) -> Result<BaseFamily> {
    validate_ladder(n, ladder)?;
    let count = 1usize << n;
    let labels: Vec<String> = (0..count).map(|v| bit_label(v, n)).collect();
    let width = *ladder.last().expect("ladder is nonempty");
    let mut sets = Vec::new();
    // Ternary enumeration of the patterns on the first `width` coordinates.
    let mut pattern = vec![2u8; width]; // 2 = free
    loop {
        let members = (0..count).filter(|&g| {
            pattern.iter().enumerate().all(|(i, &p)| {
                let bit = g >> (n - 1 - i) & 1;
                p == 2 || p as usize == bit
            })
        });
        sets.push(PointSet::from_indices(count, members));
        let mut i = 0;
        loop {
            if i == width {
                let labels2 = labels.clone();
                return BaseFamily::new(labels2, sets);
            }
            if pattern[i] == 0 {
                pattern[i] = 1;
                break;
            } else if pattern[i] == 1 {
                pattern[i] = 2;
                break;
            } else {
                pattern[i] = 0;
                i += 1;
            }
        }
    }
}

fn validate_ladder(n: usize, ladder: &[usize]) -> Result<()> {
    if n == 0 || n > 20 {
        return Err(Error::Params {
            reason: format!("dimension {n} out of range"),
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
    if ladder[0] == 0 || *ladder.last().unwrap() >= n {
        return Err(Error::LadderRange {
            reason: format!("ladder must stay within 1..{n}"),
        });
    }
    Ok(())
}

fn bit_label(value: usize, n: usize) -> String {
    (0..n)
        .map(|i| if value >> (n - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}
