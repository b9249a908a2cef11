use crate::cell_site::{CellComplex, CellSet, FilteredSpace};
use crate::error::{Error, Result};

/// A cellular map `f: X → Y` given on cells: order-preserving for the face
/// order and dimension-nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularMap {
    source: CellComplex,
    target: CellComplex,
    assignment: Vec<usize>,
}

impl CellularMap {
    pub fn new(source: CellComplex, target: CellComplex, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "{} images for {} cells",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&t) = assignment.iter().find(|&&t| t >= target.len()) {
            return Err(Error::InvalidMap(format!("image index {t} is not a cell of the target")));
        }
        for c in 0..source.len() {
            let image = assignment[c];
            if target.dim(image) > source.dim(c) {
                return Err(Error::InvalidMap(format!(
                    "{} has dimension {} but its image {} has dimension {}",
                    source.id(c),
                    source.dim(c),
                    target.id(image),
                    target.dim(image)
                )));
            }
            for &(face, _) in source.faces(c) {
                if !target.leq(assignment[face], image) {
                    return Err(Error::InvalidMap(format!(
                        "{} is a face of {} but {} is not a face of {}",
                        source.id(face),
                        source.id(c),
                        target.id(assignment[face]),
                        target.id(image)
                    )));
                }
            }
        }
        Ok(CellularMap {
            source,
            target,
            assignment,
        })
    }

    /// Builds the map from `(source id, target id)` pairs covering every cell.
    pub fn from_ids<S: AsRef<str>>(source: CellComplex, target: CellComplex, pairs: &[(S, S)]) -> Result<Self> {
        let mut assignment = vec![None; source.len()];
        for (a, b) in pairs {
            let s = source
                .index_of(a.as_ref())
                .ok_or_else(|| Error::InvalidMap(format!("unknown source cell {}", a.as_ref())))?;
            let t = target
                .index_of(b.as_ref())
                .ok_or_else(|| Error::InvalidMap(format!("unknown target cell {}", b.as_ref())))?;
            if assignment[s].replace(t).is_some() {
                return Err(Error::InvalidMap(format!("cell {} is assigned twice", a.as_ref())));
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(c, t)| t.ok_or_else(|| Error::InvalidMap(format!("cell {} has no image", source.id(c)))))
            .collect::<Result<Vec<_>>>()?;
        CellularMap::new(source, target, assignment)
    }

    pub fn identity(complex: &CellComplex) -> Self {
        CellularMap {
            source: complex.clone(),
            target: complex.clone(),
            assignment: (0..complex.len()).collect(),
        }
    }

    /// The constant map to a point.
    pub fn to_point(complex: &CellComplex) -> Self {
        CellularMap {
            source: complex.clone(),
            target: CellComplex::the_point(),
            assignment: vec![0; complex.len()],
        }
    }

    pub fn source(&self) -> &CellComplex {
        &self.source
    }

    pub fn target(&self) -> &CellComplex {
        &self.target
    }

    pub fn image(&self, cell: usize) -> usize {
        self.assignment[cell]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn preimage(&self, cells: &CellSet) -> CellSet {
        (0..self.assignment.len())
            .filter(|c| cells.contains(&self.assignment[*c]))
            .collect()
    }

    /// `f⁻¹(↑σ)`, the preimage of the open star of `σ`.
    pub fn star_preimage(&self, sigma: usize) -> CellSet {
        self.preimage(self.target.star(sigma))
    }
}

/// `X_a = f⁻¹(Y_a)`.
pub fn preimage_filtration(map: &CellularMap, space: &FilteredSpace) -> Result<FilteredSpace> {
    let levels = space.levels().iter().map(|l| map.preimage(l)).collect();
    FilteredSpace::new(&map.source, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preimages_of_trivial_maps() {
        let x = CellComplex::circle(3).unwrap();
        let skeleta = FilteredSpace::dimension_skeleta(&x);
        let same = preimage_filtration(&CellularMap::identity(&x), &skeleta).unwrap();
        assert_eq!(same, skeleta);
        let p = CellularMap::to_point(&x);
        let point = FilteredSpace::dimension_skeleta(p.target());
        let one_step = preimage_filtration(&p, &point).unwrap();
        assert_eq!(one_step.len(), 1);
        assert_eq!(one_step.level(0), x.all_cells());
    }

    #[test]
    fn dimension_may_not_grow() {
        let i = CellComplex::interval();
        let r = CellularMap::new(CellComplex::the_point(), i.clone(), vec![i.index_of("e").unwrap()]);
        assert!(matches!(r, Err(Error::InvalidMap(_))));
    }
}
