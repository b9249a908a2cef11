use super::{CochainComplex, Filtration, SpectralSequence};
use crate::error::{Error, Result};
use crate::exact_algebra::{hom_between, is_exact_at, FgAbGroup, GroupHom, IntMatrix, Subgroup, Subquotient};

/// One node of a long exact sequence.
#[derive(Clone, Debug)]
pub struct SequenceTerm {
    pub label: String,
    pub group: FgAbGroup,
}

/// `... → H^n(A) → H^n(K) → H^n(K/A) → H^{n+1}(A) → ...`, starting and
/// ending at zero.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub terms: Vec<SequenceTerm>,
    // maps[i]: terms[i] → terms[i + 1]
    pub maps: Vec<GroupHom>,
}

impl LongExactSequence {
    /// The index of the first node where the image of the incoming map
    /// differs from the kernel of the outgoing one.
    pub fn first_inexact_node(&self) -> Option<usize> {
        (0..self.terms.len()).find(|&i| {
            let g = &self.terms[i].group;
            let incoming = if i == 0 {
                GroupHom::zero(&FgAbGroup::zero(), g)
            } else {
                self.maps[i - 1].clone()
            };
            let outgoing = self
                .maps
                .get(i)
                .cloned()
                .unwrap_or_else(|| GroupHom::zero(g, &FgAbGroup::zero()));
            !is_exact_at(&incoming, &outgoing)
        })
    }

    pub fn is_exact(&self) -> bool {
        self.first_inexact_node().is_none()
    }
}

struct Triple {
    sub: Subquotient,
    total: Subquotient,
    quotient: Subquotient,
}

fn assemble(
    complex: &CochainComplex,
    triples: &[(i64, Triple)],
    mut delta: impl FnMut(i64, &Subquotient, &Subquotient) -> Result<GroupHom>,
) -> Result<LongExactSequence> {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    for (idx, (n, t)) in triples.iter().enumerate() {
        let n = *n;
        let id = IntMatrix::identity(complex.dim(n));
        terms.push(SequenceTerm {
            label: format!("H^{n}(A)"),
            group: t.sub.group().clone(),
        });
        maps.push(hom_between(&id, &t.sub, &t.total)?);
        terms.push(SequenceTerm {
            label: format!("H^{n}(K)"),
            group: t.total.group().clone(),
        });
        maps.push(hom_between(&id, &t.total, &t.quotient)?);
        terms.push(SequenceTerm {
            label: format!("H^{n}(K/A)"),
            group: t.quotient.group().clone(),
        });
        if let Some((_, next)) = triples.get(idx + 1) {
            maps.push(delta(n, &t.quotient, &next.sub)?);
        }
    }
    Ok(LongExactSequence { terms, maps })
}

/// The long exact sequence of the pair `(K, A)` computed directly from a
/// subcomplex `A` given by one subgroup per degree.
pub fn pair_sequence(complex: &CochainComplex, sub: &[Subgroup]) -> Result<LongExactSequence> {
    if sub.len() != complex.dims().len() {
        return Err(Error::Shape("one subgroup per degree is required".into()));
    }
    let a = |n: i64| -> Subgroup {
        let i = n - complex.n_min();
        if i < 0 || i as usize >= sub.len() {
            Subgroup::zero(complex.dim(n))
        } else {
            sub[i as usize].clone()
        }
    };
    for n in complex.degrees() {
        if !a(n).image(&complex.differential(n)).is_subgroup_of(&a(n + 1)) {
            return Err(Error::InvalidFiltration(format!("subcomplex is not d-stable in degree {n}")));
        }
    }
    let triples = complex
        .degrees()
        .map(|n| {
            let d = complex.differential(n);
            let d_prev = complex.differential(n - 1);
            let cocycles = complex.cocycles(n);
            let coboundaries = complex.coboundaries(n);
            let sub = Subquotient::new(cocycles.intersect(&a(n)), a(n - 1).image(&d_prev))?;
            let quotient = Subquotient::new(
                Subgroup::preimage(&d, &a(n + 1)),
                a(n).sum(&coboundaries),
            )?;
            Ok((
                n,
                Triple {
                    sub,
                    total: complex.cohomology(n),
                    quotient,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(complex, &triples, |n, from, to| {
        hom_between(&complex.differential(n), from, to)
    })
}

/// Reassembles the `E_1` page and abutment of a two-step filtration
/// `0 ⊆ F^{p+1} ⊆ F^p = K` into the long exact sequence of the pair
/// `(K, F^{p+1})`, with `d_1` as the connecting map.
pub fn two_step_sequence(complex: &CochainComplex, filtration: &Filtration) -> Result<LongExactSequence> {
    if filtration.width() != 1 {
        return Err(Error::InvalidFiltration(format!(
            "a two-step filtration is required, got width {}",
            filtration.width()
        )));
    }
    let (bottom, top) = (filtration.p_min(), filtration.p_max());
    let mut ss = SpectralSequence::new(complex, filtration)?;
    let e1 = ss.page(1)?;
    let triples = complex
        .degrees()
        .map(|n| {
            let sub = ss.entry(1, top, n - top)?;
            let quotient = ss.entry(1, bottom, n - bottom)?;
            Ok((
                n,
                Triple {
                    sub,
                    total: complex.cohomology(n),
                    quotient,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(complex, &triples, |n, _, _| e1.page().differential(bottom, n - bottom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_of_interval_and_endpoints() {
        // Interval cochains: C^0 = Z^2 (vertices), C^1 = Z (edge), d = [-1, 1].
        // A = cochains on the open edge, so H(K, K/A) realizes H_c of the open interval.
        let k = CochainComplex::new(0, vec![2, 1], vec![IntMatrix::from_rows(&[vec![-1, 1]])]).unwrap();
        let a = vec![Subgroup::zero(2), Subgroup::full(1)];
        let les = pair_sequence(&k, &a).unwrap();
        assert!(les.is_exact());
        assert_eq!(les.terms[3].group, FgAbGroup::free(1));
        let f = Filtration::new(
            &k,
            0,
            1,
            vec![vec![Subgroup::full(2), Subgroup::zero(2)], vec![Subgroup::full(1), Subgroup::full(1)]],
        )
        .unwrap();
        let from_pages = two_step_sequence(&k, &f).unwrap();
        assert!(from_pages.is_exact());
        let groups: Vec<_> = from_pages.terms.iter().map(|t| t.group.clone()).collect();
        let direct: Vec<_> = les.terms.iter().map(|t| t.group.clone()).collect();
        assert_eq!(groups, direct);
    }
}
