//! JSON input documents and their conversion into core types.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use leray_core::cell_site::{CellComplex, CellSet, CellSpec, CellularSheaf, FilteredSpace, Stalk};
use leray_core::filtered_complex::{CochainComplex, Filtration};
use leray_core::leray::CellularMap;
use leray_core::{IntMatrix, Subgroup};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// A malformed or inconsistent input file.
#[derive(Debug)]
pub struct InputError {
    pub path: Option<PathBuf>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError {
            path: None,
            message: message.into(),
        }
    }

    fn at(path: &Path, message: impl Into<String>) -> Self {
        InputError {
            path: Some(path.to_path_buf()),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(p) => write!(f, "{}: {}", p.display(), self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

impl From<leray_core::Error> for InputError {
    fn from(e: leray_core::Error) -> Self {
        InputError::new(e.to_string())
    }
}

pub type InputResult<T> = Result<T, InputError>;

/// Reads and parses a JSON document, reporting line and column on failure.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> InputResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::at(path, format!("cannot read: {e}")))?;
    serde_json::from_str(&text).map_err(|e| InputError::at(path, format!("parse error: {e}")))
}

/// Attaches the file name to errors raised while converting a parsed document.
pub fn in_file<T>(path: &Path, r: InputResult<T>) -> InputResult<T> {
    r.map_err(|e| InputError::at(path, e.message))
}

/// Row-major integer matrix with an explicit column count, so that empty
/// matrices keep their shape.
fn matrix(rows: &[Vec<i64>], cols: usize, what: &str) -> InputResult<IntMatrix> {
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(InputError::new(format!(
            "{what}: row {i} has {} entries, expected {cols}",
            r.len()
        )));
    }
    let big: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    IntMatrix::from_rows_with_cols(&big, cols).ok_or_else(|| InputError::new(format!("{what}: malformed matrix")))
}

fn shaped(rows: &[Vec<i64>], expected: (usize, usize), what: &str) -> InputResult<IntMatrix> {
    if rows.len() != expected.0 {
        return Err(InputError::new(format!(
            "{what}: {} rows, expected {}",
            rows.len(),
            expected.0
        )));
    }
    matrix(rows, expected.1, what)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub id: String,
    pub sign: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<FaceDoc>,
}

/// A cell complex: a list of cells with signed faces.
pub type ComplexDoc = Vec<CellDoc>;

pub fn cell_complex(doc: &[CellDoc]) -> InputResult<CellComplex> {
    let specs = doc
        .iter()
        .map(|c| {
            let faces: Vec<(&str, i64)> = c.faces.iter().map(|f| (f.id.as_str(), f.sign)).collect();
            CellSpec::new(c.id.clone(), c.dim, &faces)
        })
        .collect();
    Ok(CellComplex::new(specs)?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StalkDoc {
    pub gens: usize,
    /// `gens` rows, one column per relation.
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

impl StalkDoc {
    fn stalk(&self, what: &str) -> InputResult<Stalk> {
        if self.relations.is_empty() {
            return Ok(Stalk::free(self.gens));
        }
        let cols = self.relations[0].len();
        let m = shaped(&self.relations, (self.gens, cols), what)?;
        Ok(Stalk::new(self.gens, m)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionDoc {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<i64>>,
}

/// Either `{"constant": stalk}` or explicit stalks per cell and a list of
/// restrictions along face incidences.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafDoc {
    #[serde(default)]
    pub constant: Option<StalkDoc>,
    #[serde(default)]
    pub stalks: BTreeMap<String, StalkDoc>,
    #[serde(default)]
    pub restrictions: Vec<RestrictionDoc>,
}

pub fn sheaf(complex: &CellComplex, doc: Option<&SheafDoc>) -> InputResult<CellularSheaf> {
    let Some(doc) = doc else {
        return Ok(CellularSheaf::constant(complex));
    };
    if let Some(c) = &doc.constant {
        if !doc.stalks.is_empty() || !doc.restrictions.is_empty() {
            return Err(InputError::new("a constant sheaf takes no stalks or restrictions"));
        }
        return Ok(CellularSheaf::constant_with(complex, c.stalk("constant stalk")?));
    }
    let index = |id: &str| {
        complex
            .index_of(id)
            .ok_or_else(|| InputError::new(format!("unknown cell {id}")))
    };
    let mut stalks = vec![Stalk::free(0); complex.len()];
    for (id, s) in &doc.stalks {
        stalks[index(id)?] = s.stalk(&format!("stalk at {id}"))?;
    }
    let mut restrictions = BTreeMap::new();
    for r in &doc.restrictions {
        let (s, t) = (index(&r.from)?, index(&r.to)?);
        let what = format!("restriction {} -> {}", r.from, r.to);
        let m = shaped(&r.matrix, (stalks[t].gens(), stalks[s].gens()), &what)?;
        if restrictions.insert((s, t), m).is_some() {
            return Err(InputError::new(format!("{what} given twice")));
        }
    }
    Ok(CellularSheaf::new(complex, stalks, restrictions)?)
}

/// A filtration of a cell complex: `{"skeleta": true}` or a level per cell.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFiltrationDoc {
    #[serde(default)]
    pub skeleta: bool,
    #[serde(default)]
    pub levels: BTreeMap<String, usize>,
}

pub fn filtered_space(complex: &CellComplex, doc: Option<&SpaceFiltrationDoc>) -> InputResult<FilteredSpace> {
    match doc {
        None => Ok(FilteredSpace::dimension_skeleta(complex)),
        Some(d) if d.skeleta => {
            if !d.levels.is_empty() {
                return Err(InputError::new("give either skeleta or levels, not both"));
            }
            Ok(FilteredSpace::dimension_skeleta(complex))
        }
        Some(d) => {
            let mut levels = vec![None; complex.len()];
            for (id, &a) in &d.levels {
                let c = complex
                    .index_of(id)
                    .ok_or_else(|| InputError::new(format!("unknown cell {id}")))?;
                levels[c] = Some(a);
            }
            let levels = levels
                .into_iter()
                .enumerate()
                .map(|(c, a)| a.ok_or_else(|| InputError::new(format!("cell {} has no level", complex.id(c)))))
                .collect::<InputResult<Vec<_>>>()?;
            Ok(FilteredSpace::from_cell_levels(complex, &levels)?)
        }
    }
}

/// A cellular map with its source and target complexes inline.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: ComplexDoc,
    pub target: ComplexDoc,
    pub assignment: BTreeMap<String, String>,
}

pub fn cellular_map(doc: &MapDoc) -> InputResult<CellularMap> {
    let source = cell_complex(&doc.source).map_err(|e| InputError::new(format!("source: {}", e.message)))?;
    let target = cell_complex(&doc.target).map_err(|e| InputError::new(format!("target: {}", e.message)))?;
    let pairs: Vec<(&str, &str)> = doc.assignment.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(CellularMap::from_ids(source, target, &pairs)?)
}

pub fn cell_set(complex: &CellComplex, ids: &[String]) -> InputResult<CellSet> {
    Ok(complex.cell_set(ids)?)
}

/// A bounded cochain complex of free groups.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainComplexDoc {
    pub n_min: i64,
    pub dims: Vec<usize>,
    /// `differentials[i]` maps degree `n_min + i` to `n_min + i + 1`.
    pub differentials: Vec<Vec<Vec<i64>>>,
}

pub fn cochain_complex(doc: &CochainComplexDoc) -> InputResult<CochainComplex> {
    if doc.differentials.len() != doc.dims.len().saturating_sub(1) {
        return Err(InputError::new(format!(
            "{} differentials for {} degrees",
            doc.differentials.len(),
            doc.dims.len()
        )));
    }
    let diffs = doc
        .differentials
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let n = doc.n_min + i as i64;
            shaped(d, (doc.dims[i + 1], doc.dims[i]), &format!("differential in degree {n}"))
        })
        .collect::<InputResult<Vec<_>>>()?;
    Ok(CochainComplex::new(doc.n_min, doc.dims.clone(), diffs)?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsDoc {
    pub p: i64,
    pub n: i64,
    /// Columns span `F^p K^n`.
    pub matrix: Vec<Vec<i64>>,
}

/// A filtration of a cochain complex: a level per basis vector in each
/// degree, or generators of every `F^p K^n` for `p_min ≤ p ≤ p_max`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDoc {
    #[serde(default)]
    pub levels: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub p_min: Option<i64>,
    #[serde(default)]
    pub p_max: Option<i64>,
    #[serde(default)]
    pub generators: Vec<GeneratorsDoc>,
}

pub fn filtration(complex: &CochainComplex, doc: &FiltrationDoc) -> InputResult<Filtration> {
    if let Some(levels) = &doc.levels {
        if doc.p_min.is_some() || doc.p_max.is_some() || !doc.generators.is_empty() {
            return Err(InputError::new("give either levels or generators, not both"));
        }
        return Ok(Filtration::basis_aligned(complex, levels)?);
    }
    let (Some(p_min), Some(p_max)) = (doc.p_min, doc.p_max) else {
        return Err(InputError::new("explicit filtrations need p_min and p_max"));
    };
    let mut given = BTreeMap::new();
    for g in &doc.generators {
        let dim = complex.dim(g.n);
        let cols = g.matrix.first().map_or(0, Vec::len);
        let m = shaped(&g.matrix, (dim, cols), &format!("generators of F^{} in degree {}", g.p, g.n))?;
        if given.insert((g.p, g.n), Subgroup::new(dim, m)).is_some() {
            return Err(InputError::new(format!("generators of F^{} in degree {} given twice", g.p, g.n)));
        }
    }
    let mut levels = Vec::new();
    for n in complex.degrees() {
        let mut row = Vec::new();
        for p in p_min..=p_max {
            let s = given
                .remove(&(p, n))
                .ok_or_else(|| InputError::new(format!("missing generators of F^{p} in degree {n}")))?;
            row.push(s);
        }
        levels.push(row);
    }
    if let Some(((p, n), _)) = given.into_iter().next() {
        return Err(InputError::new(format!("generators of F^{p} in degree {n} are outside the range")));
    }
    Ok(Filtration::new(complex, p_min, p_max, levels)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse<T: DeserializeOwned>(s: &str) -> T {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn restriction_shapes_are_checked() {
        let x = CellComplex::interval();
        let doc: SheafDoc = parse(
            r#"{"stalks": {"v0": {"gens": 1}, "v1": {"gens": 1}, "e": {"gens": 2}},
                "restrictions": [{"from": "v0", "to": "e", "matrix": [[1]]}]}"#,
        );
        let err = sheaf(&x, Some(&doc)).unwrap_err();
        assert!(err.message.contains("restriction v0 -> e: 1 rows, expected 2"), "{err}");
    }

    #[test]
    fn explicit_filtrations_need_every_level() {
        let k = cochain_complex(&parse(r#"{"n_min": 0, "dims": [1, 1], "differentials": [[[1]]]}"#)).unwrap();
        let doc: FiltrationDoc = parse(r#"{"p_min": 0, "p_max": 0, "generators": [{"p": 0, "n": 0, "matrix": [[1]]}]}"#);
        let err = filtration(&k, &doc).unwrap_err();
        assert!(err.message.contains("missing generators of F^0 in degree 1"), "{err}");
    }

    #[test]
    fn every_cell_needs_a_level() {
        let x = CellComplex::interval();
        let doc: SpaceFiltrationDoc = parse(r#"{"levels": {"v0": 0, "v1": 0}}"#);
        let err = filtered_space(&x, Some(&doc)).unwrap_err();
        assert!(err.message.contains("cell e has no level"), "{err}");
    }
}
