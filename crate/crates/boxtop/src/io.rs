//! Interchange formats: pattern-string text files for cube families, JSON
//! for everything. Emission is canonical, so parse-emit round trips are
//! byte identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::{Cube, CubeFamily};
use crate::error::{Error, Result};
use crate::metrisable::{BaseFamily, MetrisabilityWitness, Ultrametric};
use crate::pointset::PointSet;
use crate::tailbox::{BasicFactor, IntervalBox, TailBoxCover, TailProfile};

/// Parse the line-oriented family format: one pattern per line, `#` starts
/// a comment, blank lines ignored. The dimension is the line length.
pub fn parse_family_text(text: &str) -> Result<CubeFamily> {
    let mut cubes: Vec<Cube> = Vec::new();
    for line in text.lines() {
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        cubes.push(Cube::parse(body)?);
    }
    if cubes.is_empty() {
        return Err(Error::Params {
            reason: "text family carries no cubes (dimension unknown); use JSON".into(),
        });
    }
    let dim = cubes[0].dim();
    CubeFamily::new(dim, cubes)
}

/// Canonical text emission: one pattern per line.
pub fn emit_family_text(family: &CubeFamily) -> String {
    let mut out = String::new();
    for cube in family {
        out.push_str(&cube.pattern());
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub lambda: usize,
    pub cubes: Vec<String>,
    pub support_budget: Option<usize>,
}

impl FamilyJson {
    pub fn from_family(family: &CubeFamily) -> Self {
        FamilyJson {
            lambda: family.dim(),
            cubes: family.patterns(),
            support_budget: family.support_budget(),
        }
    }

    pub fn into_family(self) -> Result<CubeFamily> {
        let cubes: Vec<Cube> = self
            .cubes
            .iter()
            .map(|p| Cube::parse(p))
            .collect::<Result<_>>()?;
        match self.support_budget {
            Some(k) => CubeFamily::with_budget(self.lambda, cubes, k),
            None => CubeFamily::new(self.lambda, cubes),
        }
    }
}

pub fn parse_family_json(text: &str) -> Result<CubeFamily> {
    let parsed: FamilyJson = serde_json::from_str(text)?;
    parsed.into_family()
}

pub fn emit_family_json(family: &CubeFamily) -> String {
    let mut out = serde_json::to_string(&FamilyJson::from_family(family))
        .expect("family serialization cannot fail");
    out.push('\n');
    out
}

/// Accept either format, keyed on the leading character.
pub fn parse_family_auto(text: &str) -> Result<CubeFamily> {
    if text.trim_start().starts_with('{') {
        parse_family_json(text)
    } else {
        parse_family_text(text)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub points: Vec<String>,
    pub levels: usize,
    #[serde(rename = "U")]
    pub table: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

impl WitnessJson {
    pub fn from_witness(witness: &MetrisabilityWitness) -> Self {
        let mut table = BTreeMap::new();
        for (x, label) in witness.labels().iter().enumerate() {
            let mut levels = BTreeMap::new();
            for level in 0..witness.levels() {
                levels.insert(
                    level.to_string(),
                    set_labels(witness.set(x, level), witness.labels()),
                );
            }
            table.insert(label.clone(), levels);
        }
        WitnessJson {
            points: witness.labels().to_vec(),
            levels: witness.levels(),
            table,
        }
    }

    pub fn into_witness(self) -> Result<MetrisabilityWitness> {
        let n = self.points.len();
        let mut rows = Vec::with_capacity(n);
        for label in &self.points {
            let levels = self.table.get(label).ok_or_else(|| Error::Params {
                reason: format!("missing table row for point {label:?}"),
            })?;
            let mut row = Vec::with_capacity(self.levels);
            for level in 0..self.levels {
                let members = levels.get(&level.to_string()).ok_or_else(|| Error::Params {
                    reason: format!("missing level {level} for point {label:?}"),
                })?;
                row.push(labels_to_set(members, &self.points)?);
            }
            rows.push(row);
        }
        // Re-validate the structural invariants on the way in.
        MetrisabilityWitness::new(self.points, self.levels, rows)
    }

    /// Like [`Self::into_witness`] but without the structural invariants,
    /// for loading deliberately broken tables.
    pub fn into_witness_unchecked(self) -> Result<MetrisabilityWitness> {
        let n = self.points.len();
        let mut rows = Vec::with_capacity(n);
        for label in &self.points {
            let levels = self.table.get(label).ok_or_else(|| Error::Params {
                reason: format!("missing table row for point {label:?}"),
            })?;
            let mut row = Vec::with_capacity(self.levels);
            for level in 0..self.levels {
                let members = levels.get(&level.to_string()).ok_or_else(|| Error::Params {
                    reason: format!("missing level {level} for point {label:?}"),
                })?;
                row.push(labels_to_set(members, &self.points)?);
            }
            rows.push(row);
        }
        MetrisabilityWitness::from_table_unchecked(self.points, self.levels, rows)
    }
}

fn set_labels(set: &PointSet, labels: &[String]) -> Vec<String> {
    set.iter().map(|i| labels[i].clone()).collect()
}

fn labels_to_set(members: &[String], labels: &[String]) -> Result<PointSet> {
    let mut set = PointSet::empty(labels.len());
    for m in members {
        let idx = labels.iter().position(|l| l == m).ok_or_else(|| Error::Params {
            reason: format!("unknown point label {m:?}"),
        })?;
        set.insert(idx);
    }
    Ok(set)
}

pub fn parse_witness_json(text: &str) -> Result<MetrisabilityWitness> {
    let parsed: WitnessJson = serde_json::from_str(text)?;
    parsed.into_witness()
}

pub fn emit_witness_json(witness: &MetrisabilityWitness) -> String {
    let mut out = serde_json::to_string(&WitnessJson::from_witness(witness))
        .expect("witness serialization cannot fail");
    out.push('\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UltrametricJson {
    pub points: Vec<String>,
    pub d: Vec<Vec<f64>>,
}

pub fn parse_ultrametric_json(text: &str) -> Result<Ultrametric> {
    let parsed: UltrametricJson = serde_json::from_str(text)?;
    Ultrametric::new(parsed.points, parsed.d)
}

pub fn emit_ultrametric_json(metric: &Ultrametric) -> String {
    let value = UltrametricJson {
        points: metric.labels().to_vec(),
        d: metric.matrix().to_vec(),
    };
    let mut out = serde_json::to_string(&value).expect("metric serialization cannot fail");
    out.push('\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BaseFamilyJson {
    pub points: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

pub fn parse_base_family_json(text: &str) -> Result<BaseFamily> {
    let parsed: BaseFamilyJson = serde_json::from_str(text)?;
    let sets = parsed
        .sets
        .iter()
        .map(|members| labels_to_set(members, &parsed.points))
        .collect::<Result<_>>()?;
    BaseFamily::new(parsed.points, sets)
}

pub fn emit_base_family_json(base: &BaseFamily) -> String {
    let value = BaseFamilyJson {
        points: base.labels().to_vec(),
        sets: base
            .sets()
            .iter()
            .map(|s| set_labels(s, base.labels()))
            .collect(),
    };
    let mut out = serde_json::to_string(&value).expect("base serialization cannot fail");
    out.push('\n');
    out
}

/// Disjoint refinement cells over labelled points.
#[derive(Debug, Serialize, Deserialize)]
pub struct CellsJson {
    pub points: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

pub fn emit_cells_json(labels: &[String], cells: &[PointSet]) -> String {
    let value = CellsJson {
        points: labels.to_vec(),
        cells: cells.iter().map(|c| set_labels(c, labels)).collect(),
    };
    let mut out = serde_json::to_string(&value).expect("cells serialization cannot fail");
    out.push('\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "t")]
pub enum FactorJson {
    S { v: usize },
    T { a: usize },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TailBoxesJson {
    pub coords: Vec<usize>,
    pub boxes: Vec<Vec<FactorJson>>,
}

impl TailBoxesJson {
    fn factor(f: &BasicFactor) -> FactorJson {
        match *f {
            BasicFactor::Singleton(v) => FactorJson::S { v },
            BasicFactor::Tail(a) => FactorJson::T { a },
        }
    }

    fn unfactor(f: &FactorJson) -> BasicFactor {
        match *f {
            FactorJson::S { v } => BasicFactor::Singleton(v),
            FactorJson::T { a } => BasicFactor::Tail(a),
        }
    }
}

pub fn parse_tailbox_json(text: &str) -> Result<TailBoxCover> {
    let parsed: TailBoxesJson = serde_json::from_str(text)?;
    let profile = TailProfile::new(parsed.coords)?;
    let boxes = parsed
        .boxes
        .iter()
        .map(|fs| IntervalBox::new(fs.iter().map(TailBoxesJson::unfactor).collect()))
        .collect();
    TailBoxCover::new(profile, boxes)
}

pub fn emit_tailbox_json(profile: &TailProfile, boxes: &[IntervalBox]) -> String {
    let value = TailBoxesJson {
        coords: profile.sizes().to_vec(),
        boxes: boxes
            .iter()
            .map(|b| b.factors().iter().map(TailBoxesJson::factor).collect())
            .collect(),
    };
    let mut out = serde_json::to_string(&value).expect("boxes serialization cannot fail");
    out.push('\n');
    out
}
