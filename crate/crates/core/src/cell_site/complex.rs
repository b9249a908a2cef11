use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A set of cells, by index.
pub type CellSet = BTreeSet<usize>;

/// Input description of one cell: its codimension-one faces with incidence
/// numbers `[face : cell]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<(String, i64)>,
}

impl CellSpec {
    pub fn new(id: impl Into<String>, dim: usize, faces: &[(&str, i64)]) -> Self {
        CellSpec {
            id: id.into(),
            dim,
            faces: faces.iter().map(|(f, s)| (f.to_string(), *s)).collect(),
        }
    }
}

/// A finite regular cell complex, as a graded poset with incidence numbers
/// `[σ : τ] = ±1` between cells of consecutive dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    ids: Vec<String>,
    dims: Vec<usize>,
    index: BTreeMap<String, usize>,
    faces: Vec<Vec<(usize, i64)>>,
    cofaces: Vec<Vec<(usize, i64)>>,
    // closed cells: every face of every codimension, the cell included
    below: Vec<CellSet>,
    above: Vec<CellSet>,
}

impl CellComplex {
    pub fn new(cells: Vec<CellSpec>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::MalformedComplex(format!("duplicate cell id {}", c.id)));
            }
        }
        let n = cells.len();
        let mut faces = vec![Vec::new(); n];
        let mut cofaces = vec![Vec::new(); n];
        for (t, c) in cells.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (f, sign) in &c.faces {
                let s = *index.get(f).ok_or_else(|| {
                    Error::MalformedComplex(format!("cell {} lists unknown face {f}", c.id))
                })?;
                if cells[s].dim + 1 != c.dim {
                    return Err(Error::MalformedComplex(format!(
                        "face {f} of {} has dimension {}, expected {}",
                        c.id,
                        cells[s].dim,
                        c.dim as i64 - 1
                    )));
                }
                if sign.abs() != 1 {
                    return Err(Error::MalformedComplex(format!(
                        "incidence [{f} : {}] = {sign} is not ±1",
                        c.id
                    )));
                }
                if !seen.insert(s) {
                    return Err(Error::MalformedComplex(format!("face {f} listed twice for {}", c.id)));
                }
                faces[t].push((s, *sign));
                cofaces[s].push((t, *sign));
            }
            if c.dim == 0 && !c.faces.is_empty() {
                return Err(Error::MalformedComplex(format!("vertex {} has faces", c.id)));
            }
            if c.dim == 1 {
                let total: i64 = c.faces.iter().map(|(_, s)| s).sum();
                if c.faces.len() != 2 || total != 0 {
                    return Err(Error::MalformedComplex(format!(
                        "edge {} must have two endpoints of opposite sign",
                        c.id
                    )));
                }
            }
            if c.dim > 1 && c.faces.is_empty() {
                return Err(Error::MalformedComplex(format!("cell {} has empty boundary", c.id)));
            }
        }
        let ids: Vec<String> = cells.iter().map(|c| c.id.clone()).collect();
        let dims: Vec<usize> = cells.iter().map(|c| c.dim).collect();
        // d∘d = 0: for every τ and every σ two steps below, Σ_ρ [σ:ρ][ρ:τ] = 0.
        for t in 0..n {
            let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
            for &(r, a) in &faces[t] {
                for &(s, b) in &faces[r] {
                    *sums.entry(s).or_default() += a * b;
                }
            }
            if let Some((&s, &k)) = sums.iter().find(|(_, &k)| k != 0) {
                let through: Vec<&str> = faces[t]
                    .iter()
                    .filter(|(r, _)| faces[*r].iter().any(|(x, _)| *x == s))
                    .map(|(r, _)| ids[*r].as_str())
                    .collect();
                return Err(Error::MalformedComplex(format!(
                    "incidences from {} to {} through {} sum to {k}, not 0",
                    ids[s],
                    ids[t],
                    through.join(", ")
                )));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| dims[i]);
        let mut below: Vec<CellSet> = vec![CellSet::new(); n];
        for &t in &order {
            let mut set = CellSet::from([t]);
            for &(s, _) in &faces[t] {
                set.extend(below[s].iter().copied());
            }
            below[t] = set;
        }
        let mut above: Vec<CellSet> = vec![CellSet::new(); n];
        for (t, faces) in below.iter().enumerate() {
            for &s in faces {
                above[s].insert(t);
            }
        }
        Ok(CellComplex {
            ids,
            dims,
            index,
            faces,
            cofaces,
            below,
            above,
        })
    }

    /// The complex with no cells.
    pub fn empty() -> Self {
        CellComplex::new(Vec::new()).expect("empty complex")
    }

    /// Builds a simplicial complex from its facets (vertex lists). Cell ids
    /// are the sorted vertex labels joined by `.`; the face opposite the
    /// `i`-th vertex has incidence `(-1)^i`.
    pub fn from_simplices(facets: &[Vec<usize>]) -> Result<Self> {
        let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::MalformedComplex("empty simplex".into()));
            }
            for mask in 1u64..(1u64 << f.len()) {
                let face: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                simplices.insert(face);
            }
        }
        let name = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
        let mut sorted: Vec<&Vec<usize>> = simplices.iter().collect();
        sorted.sort_by_key(|s| (s.len(), (*s).clone()));
        let cells = sorted
            .into_iter()
            .map(|s| {
                let faces = if s.len() == 1 {
                    Vec::new()
                } else {
                    (0..s.len())
                        .map(|i| {
                            let mut f = s.clone();
                            f.remove(i);
                            (name(&f), if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                };
                CellSpec {
                    id: name(s),
                    dim: s.len() - 1,
                    faces,
                }
            })
            .collect();
        CellComplex::new(cells)
    }

    /// The product cell structure; cell `(σ, τ)` is named `σ*τ` and has
    /// incidences `[σ'×τ : σ×τ] = [σ':σ]` and `[σ×τ' : σ×τ] = (-1)^{dim σ}[τ':τ]`.
    pub fn product(&self, other: &CellComplex) -> Result<Self> {
        let name = |a: usize, b: usize| format!("{}*{}", self.ids[a], other.ids[b]);
        let mut cells = Vec::with_capacity(self.len() * other.len());
        for a in 0..self.len() {
            for b in 0..other.len() {
                let mut faces = Vec::new();
                for &(fa, s) in &self.faces[a] {
                    faces.push((name(fa, b), s));
                }
                let sign = if self.dims[a].is_multiple_of(2) { 1 } else { -1 };
                for &(fb, s) in &other.faces[b] {
                    faces.push((name(a, fb), sign * s));
                }
                cells.push(CellSpec {
                    id: name(a, b),
                    dim: self.dims[a] + other.dims[b],
                    faces,
                });
            }
        }
        CellComplex::new(cells)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.ids[cell]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    /// Largest cell dimension (0 for the empty complex).
    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn all_cells(&self) -> CellSet {
        (0..self.len()).collect()
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.dims[i] == k)
    }

    /// Codimension-one faces `σ` of `τ` with `[σ : τ]`.
    pub fn faces(&self, cell: usize) -> &[(usize, i64)] {
        &self.faces[cell]
    }

    /// Codimension-one cofaces `τ` of `σ` with `[σ : τ]`.
    pub fn cofaces(&self, cell: usize) -> &[(usize, i64)] {
        &self.cofaces[cell]
    }

    pub fn incidence(&self, face: usize, cell: usize) -> i64 {
        self.faces[cell].iter().find(|(f, _)| *f == face).map_or(0, |(_, s)| *s)
    }

    /// `σ ≤ τ` in the face order.
    pub fn leq(&self, sigma: usize, tau: usize) -> bool {
        self.below[tau].contains(&sigma)
    }

    /// The closed cell: `τ` and all its faces.
    pub fn closure_of(&self, cell: usize) -> &CellSet {
        &self.below[cell]
    }

    /// The open star: `σ` and all cells having it as a face.
    pub fn star(&self, cell: usize) -> &CellSet {
        &self.above[cell]
    }

    pub fn down_closure(&self, cells: &CellSet) -> CellSet {
        cells.iter().flat_map(|&c| self.below[c].iter().copied()).collect()
    }

    pub fn up_closure(&self, cells: &CellSet) -> CellSet {
        cells.iter().flat_map(|&c| self.above[c].iter().copied()).collect()
    }

    pub fn is_closed(&self, cells: &CellSet) -> bool {
        cells.iter().all(|&c| self.below[c].is_subset(cells))
    }

    pub fn is_open(&self, cells: &CellSet) -> bool {
        cells.iter().all(|&c| self.above[c].is_subset(cells))
    }

    pub fn complement(&self, cells: &CellSet) -> CellSet {
        (0..self.len()).filter(|c| !cells.contains(c)).collect()
    }

    /// Resolves cell ids to indices.
    pub fn cell_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<CellSet> {
        ids.iter()
            .map(|id| {
                self.index_of(id.as_ref())
                    .ok_or_else(|| Error::MalformedComplex(format!("unknown cell {}", id.as_ref())))
            })
            .collect()
    }

    pub fn describe(&self, cells: &CellSet) -> String {
        cells.iter().map(|&c| self.ids[c].as_str()).collect::<Vec<_>>().join(", ")
    }

    /// Checks downward closure.
    pub fn closed_subcomplex(&self, cells: CellSet) -> Result<ClosedSubcomplex> {
        if let Some(&c) = cells.iter().find(|&&c| !self.below[c].is_subset(&cells)) {
            let missing: CellSet = self.below[c].difference(&cells).copied().collect();
            return Err(Error::NotClosed(format!(
                "{} is included but its faces {} are not",
                self.ids[c],
                self.describe(&missing)
            )));
        }
        Ok(ClosedSubcomplex { cells })
    }

    pub fn the_point() -> Self {
        CellComplex::new(vec![CellSpec::new("v", 0, &[])]).expect("point")
    }

    /// Two vertices `v0`, `v1` joined by an edge `e` oriented from `v0` to `v1`.
    pub fn interval() -> Self {
        CellComplex::new(vec![
            CellSpec::new("v0", 0, &[]),
            CellSpec::new("v1", 0, &[]),
            CellSpec::new("e", 1, &[("v0", -1), ("v1", 1)]),
        ])
        .expect("interval")
    }

    /// A circle with `n ≥ 2` vertices `v_i` and edges `e_i` from `v_i` to `v_{i+1}`.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::MalformedComplex("a regular circle needs at least two vertices".into()));
        }
        let mut cells: Vec<CellSpec> = (0..n).map(|i| CellSpec::new(format!("v{i}"), 0, &[])).collect();
        for i in 0..n {
            let (a, b) = (format!("v{i}"), format!("v{}", (i + 1) % n));
            cells.push(CellSpec::new(format!("e{i}"), 1, &[(a.as_str(), -1), (b.as_str(), 1)]));
        }
        CellComplex::new(cells)
    }
}

/// A downward-closed set of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubcomplex {
    cells: CellSet,
}

impl ClosedSubcomplex {
    pub fn cells(&self) -> &CellSet {
        &self.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_incidences_are_named() {
        let cells = vec![
            CellSpec::new("a", 0, &[]),
            CellSpec::new("b", 0, &[]),
            CellSpec::new("x", 1, &[("a", -1), ("b", 1)]),
            CellSpec::new("y", 1, &[("a", -1), ("b", 1)]),
            CellSpec::new("f", 2, &[("x", 1), ("y", 1)]),
        ];
        let err = CellComplex::new(cells).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("from a to f through x, y"), "{msg}");
    }

    #[test]
    fn simplices_and_products() {
        let tri = CellComplex::from_simplices(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(tri.len(), 7);
        let e = tri.index_of("0.1").unwrap();
        let f = tri.index_of("0.1.2").unwrap();
        assert_eq!(tri.incidence(e, f), 1);
        assert_eq!(tri.star(tri.index_of("0").unwrap()).len(), 4);

        let torus = CellComplex::circle(2).unwrap().product(&CellComplex::circle(2).unwrap()).unwrap();
        assert_eq!(torus.len(), 16);
        assert_eq!(torus.max_dim(), 2);
    }

    #[test]
    fn closedness() {
        let i = CellComplex::interval();
        assert!(i.closed_subcomplex(i.cell_set(&["v0"]).unwrap()).is_ok());
        assert!(matches!(i.closed_subcomplex(i.cell_set(&["e"]).unwrap()), Err(Error::NotClosed(_))));
        assert!(i.is_open(&i.cell_set(&["e"]).unwrap()));
    }
}
