use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::{CellComplex, CellSet, CellularSheaf};
use crate::error::{Error, Result};
use crate::exact_algebra::{solve, FgAbGroup, IntMatrix};
use crate::filtered_complex::{block_diagonal, CochainComplex, Filtration};

/// A free cochain complex computing the cohomology of a sheaf on some set
/// of cells, with every basis vector labelled by the cell it lives on.
///
/// When all stalks are free this is the complex of cochains itself. When
/// stalks carry relations `R`, the quotient complex `G / R` of generator
/// cochains is replaced by the quasi-isomorphic free complex
/// `Tot^n = G^n ⊕ Rel^{n+1}` with
/// `D(g, r) = (d̃g − R r, s g − h r)`, where `R h = d̃ R` and `R s = d̃²`;
/// relation coordinates in degree `0` sit in degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafCochains {
    complex: CochainComplex,
    labels: Vec<Vec<usize>>,
    keys: Vec<Vec<BasisKey>>,
}

/// Identifies a basis vector of [`SheafCochains`]: the chain of cells (a
/// single cell for cellular cochains) whose block it belongs to, whether it
/// is a generator or a relation coordinate, and its index within the stalk.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub chain: Vec<usize>,
    pub relation: bool,
    pub index: usize,
}

/// Generator-level cochain data: one block (a copy of a stalk) per entry of
/// `blocks[i]` in degree `n_min + i`, and maps `d̃` between generator spaces
/// which square to zero modulo relations.
struct Blocks {
    n_min: i64,
    blocks: Vec<Vec<usize>>,
    chains: Vec<Vec<Vec<usize>>>,
    d: Vec<IntMatrix>,
}

fn block_keys(sheaf: &CellularSheaf, data: &Blocks, i: usize, relation: bool) -> Vec<BasisKey> {
    data.blocks[i]
        .iter()
        .zip(&data.chains[i])
        .flat_map(|(&c, chain)| {
            let stalk = sheaf.stalk(c);
            let count = if relation { stalk.relations().cols() } else { stalk.gens() };
            (0..count).map(move |index| BasisKey {
                chain: chain.clone(),
                relation,
                index,
            })
        })
        .collect()
}

fn offsets(sheaf: &CellularSheaf, blocks: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &c in blocks {
        acc += sheaf.stalk(c).gens();
        out.push(acc);
    }
    out
}

fn solve_columns(r: &IntMatrix, m: &IntMatrix) -> Result<IntMatrix> {
    let cols = m
        .columns()
        .map(|c| {
            solve(r, &c).ok_or_else(|| Error::MalformedSheaf("coboundary leaves the relation lattice".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(r.cols(), &cols))
}

fn tot(sheaf: &CellularSheaf, data: Blocks) -> Result<SheafCochains> {
    let degrees = data.blocks.len();
    let gen_labels: Vec<Vec<usize>> = data
        .blocks
        .iter()
        .map(|b| b.iter().flat_map(|&c| std::iter::repeat_n(c, sheaf.stalk(c).gens())).collect())
        .collect();
    let gen_keys: Vec<Vec<BasisKey>> = (0..degrees).map(|i| block_keys(sheaf, &data, i, false)).collect();
    let presented = data.blocks.iter().any(|b| b.iter().any(|&c| !sheaf.stalk(c).is_free()));
    if !presented {
        let dims = gen_labels.iter().map(Vec::len).collect();
        let complex = CochainComplex::new(data.n_min, dims, data.d)?;
        return Ok(SheafCochains {
            complex,
            labels: gen_labels,
            keys: gen_keys,
        });
    }
    let rel: Vec<IntMatrix> = data
        .blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&c| sheaf.stalk(c).relations().clone())
                .fold(IntMatrix::zeros(0, 0), |acc, r| block_diagonal(&acc, &r))
        })
        .collect();
    let rel_labels: Vec<Vec<usize>> = data
        .blocks
        .iter()
        .map(|b| b.iter().flat_map(|&c| std::iter::repeat_n(c, sheaf.stalk(c).relations().cols())).collect())
        .collect();
    let g = |i: usize| gen_labels.get(i).map_or(0, Vec::len);
    let k = |i: usize| rel.get(i).map_or(0, IntMatrix::cols);
    let dt = |i: usize| -> IntMatrix {
        if i + 1 < degrees {
            data.d[i].clone()
        } else {
            IntMatrix::zeros(g(i + 1), g(i))
        }
    };
    // Tot in degree n_min - 1 + j consists of G^{j-1} ⊕ Rel^{j} for j = 0..=degrees.
    let tot_degrees = degrees + 1;
    let gj = |j: usize| if j == 0 { 0 } else { g(j - 1) };
    let dims: Vec<usize> = (0..tot_degrees).map(|j| gj(j) + k(j)).collect();
    let mut labels = Vec::with_capacity(tot_degrees);
    let mut keys = Vec::with_capacity(tot_degrees);
    for j in 0..tot_degrees {
        let mut l = if j == 0 { Vec::new() } else { gen_labels[j - 1].clone() };
        let mut kk = if j == 0 { Vec::new() } else { gen_keys[j - 1].clone() };
        if j < degrees {
            l.extend(rel_labels[j].iter().copied());
            kk.extend(block_keys(sheaf, &data, j, true));
        }
        labels.push(l);
        keys.push(kk);
    }
    let mut diffs = Vec::with_capacity(tot_degrees - 1);
    for j in 0..tot_degrees - 1 {
        // D: G^{j-1} ⊕ Rel^j → G^j ⊕ Rel^{j+1}
        let (g_src, k_src, g_tgt, k_tgt) = (gj(j), k(j), gj(j + 1), k(j + 1));
        let mut m = IntMatrix::zeros(g_tgt + k_tgt, g_src + k_src);
        let r_j = &rel[j];
        let h = if j + 1 < degrees && k_src > 0 {
            solve_columns(&rel[j + 1], &(&dt(j) * r_j))?
        } else {
            IntMatrix::zeros(k_tgt, k_src)
        };
        for (a, b) in (0..g_tgt).flat_map(|a| (0..k_src).map(move |b| (a, b))) {
            m[(a, g_src + b)] = -r_j[(a, b)].clone();
        }
        for (a, b) in (0..k_tgt).flat_map(|a| (0..k_src).map(move |b| (a, b))) {
            m[(g_tgt + a, g_src + b)] = -h[(a, b)].clone();
        }
        if j > 0 {
            let d = dt(j - 1);
            for (a, b) in (0..g_tgt).flat_map(|a| (0..g_src).map(move |b| (a, b))) {
                m[(a, b)] = d[(a, b)].clone();
            }
            if k_tgt > 0 && g_src > 0 {
                let s = solve_columns(&rel[j + 1], &(&dt(j) * &d))?;
                for (a, b) in (0..k_tgt).flat_map(|a| (0..g_src).map(move |b| (a, b))) {
                    m[(g_tgt + a, b)] = s[(a, b)].clone();
                }
            }
        }
        diffs.push(m);
    }
    let complex = CochainComplex::new(data.n_min - 1, dims, diffs)?;
    Ok(SheafCochains { complex, labels, keys })
}

impl SheafCochains {
    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    /// Cell carrying each basis vector of the complex in degree `n`.
    pub fn labels(&self, n: i64) -> &[usize] {
        let i = n - self.complex.n_min();
        if i < 0 || i as usize >= self.labels.len() {
            &[]
        } else {
            &self.labels[i as usize]
        }
    }

    /// Keys of the basis vectors in degree `n`.
    pub fn keys(&self, n: i64) -> &[BasisKey] {
        let i = n - self.complex.n_min();
        if i < 0 || i as usize >= self.keys.len() {
            &[]
        } else {
            &self.keys[i as usize]
        }
    }

    /// The matrix sending each basis vector of `self` in degree `n` to the
    /// basis vector of `other` with the same key, or to zero.
    pub fn projection_to(&self, other: &SheafCochains, n: i64) -> IntMatrix {
        let target: HashMap<&BasisKey, usize> = other.keys(n).iter().enumerate().map(|(i, k)| (k, i)).collect();
        let source = self.keys(n);
        let mut m = IntMatrix::zeros(other.keys(n).len(), source.len());
        for (j, k) in source.iter().enumerate() {
            if let Some(&i) = target.get(k) {
                m[(i, j)] = BigInt::from(1);
            }
        }
        m
    }

    pub fn cohomology(&self, n: i64) -> FgAbGroup {
        self.complex.cohomology(n).group().clone()
    }

    /// All cohomology groups, zero ones included, over the degree range.
    pub fn cohomology_table(&self) -> BTreeMap<i64, FgAbGroup> {
        self.complex.degrees().map(|n| (n, self.cohomology(n))).collect()
    }

    /// The basis-aligned filtration giving each basis vector the level of
    /// its cell.
    pub fn support_filtration(&self, level: impl Fn(usize) -> i64) -> Result<Filtration> {
        let levels: Vec<Vec<i64>> = self.labels.iter().map(|l| l.iter().map(|&c| level(c)).collect()).collect();
        Filtration::basis_aligned(&self.complex, &levels)
    }
}

/// Cellular cochains of `sheaf` on the cells of `cells`, using only the
/// incidences between those cells: `(dα)(τ) = Σ_{σ ⋖ τ} [σ:τ] ρ_{στ}(α_σ)`.
///
/// For an open set this computes cohomology with compact supports (the
/// cohomology of the extension by zero), for a closed set the cohomology of
/// the restriction, and for a stratum the cohomology of the corresponding
/// extension by zero from that stratum.
pub fn cochains_on(complex: &CellComplex, sheaf: &CellularSheaf, cells: &CellSet) -> Result<SheafCochains> {
    if sheaf.len() != complex.len() {
        return Err(Error::MalformedSheaf("sheaf and complex have different cell counts".into()));
    }
    let top = complex.max_dim();
    let blocks: Vec<Vec<usize>> = (0..=top)
        .map(|k| cells.iter().copied().filter(|&c| complex.dim(c) == k).collect())
        .collect();
    let mut d = Vec::with_capacity(top);
    for k in 0..top {
        let src = &blocks[k];
        let tgt = &blocks[k + 1];
        let so = offsets(sheaf, src);
        let to = offsets(sheaf, tgt);
        let mut m = IntMatrix::zeros(to[tgt.len()], so[src.len()]);
        let pos: HashMap<usize, usize> = src.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        for (ti, &t) in tgt.iter().enumerate() {
            for &(s, sign) in complex.faces(t) {
                let Some(&si) = pos.get(&s) else { continue };
                let r = sheaf.restriction(s, t).expect("restrictions exist for every incidence");
                for a in 0..r.rows() {
                    for b in 0..r.cols() {
                        m[(to[ti] + a, so[si] + b)] += &r[(a, b)] * BigInt::from(sign);
                    }
                }
            }
        }
        d.push(m);
    }
    let chains = blocks.iter().map(|b| b.iter().map(|&c| vec![c]).collect()).collect();
    tot(sheaf, Blocks { n_min: 0, blocks, chains, d })
}

/// Cellular cochains of `sheaf` on the whole complex.
pub fn cochain_complex(complex: &CellComplex, sheaf: &CellularSheaf) -> Result<SheafCochains> {
    cochains_on(complex, sheaf, &complex.all_cells())
}

/// `H^•(X, F)` by cellular cochains.
pub fn cohomology(complex: &CellComplex, sheaf: &CellularSheaf) -> Result<BTreeMap<i64, FgAbGroup>> {
    let c = cochain_complex(complex, sheaf)?;
    Ok(nonnegative(c.cohomology_table()))
}

pub(crate) fn nonnegative(table: BTreeMap<i64, FgAbGroup>) -> BTreeMap<i64, FgAbGroup> {
    table.into_iter().filter(|(n, _)| *n >= 0).collect()
}

/// Strict chains `σ_0 < ... < σ_k` of cells in `cells`, grouped by `k`.
fn chains(complex: &CellComplex, cells: &CellSet) -> Vec<Vec<Vec<usize>>> {
    let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = cells.iter().map(|&c| vec![c]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty chain");
        for &c in complex.star(last) {
            if c != last && cells.contains(&c) {
                let mut next = chain.clone();
                next.push(c);
                stack.push(next);
            }
        }
        let k = chain.len() - 1;
        if by_len.len() <= k {
            by_len.resize(k + 1, Vec::new());
        }
        by_len[k].push(chain);
    }
    for level in &mut by_len {
        level.sort();
    }
    by_len
}

/// Cochains of the order complex of `cells` (with the face order) with
/// coefficients in `sheaf`:
/// `C^k = ⊕_{σ_0 < ... < σ_k} F(σ_k)` and
/// `(δc)(σ_0..σ_{k+1}) = Σ_{i ≤ k} (-1)^i c(..σ̂_i..) + (-1)^{k+1} ρ c(σ_0..σ_k)`.
///
/// This computes the cohomology of `sheaf` restricted to `cells` viewed as
/// a subspace of the Alexandrov space of the poset; for an open set it is
/// ordinary (not compactly supported) sheaf cohomology.
pub fn poset_cochains(complex: &CellComplex, sheaf: &CellularSheaf, cells: &CellSet) -> Result<SheafCochains> {
    let chains = chains(complex, cells);
    let blocks: Vec<Vec<usize>> = chains
        .iter()
        .map(|level| level.iter().map(|c| *c.last().expect("nonempty")).collect())
        .collect();
    let mut d = Vec::with_capacity(chains.len().saturating_sub(1));
    for k in 0..chains.len().saturating_sub(1) {
        let src = &chains[k];
        let tgt = &chains[k + 1];
        let so = offsets(sheaf, &blocks[k]);
        let to = offsets(sheaf, &blocks[k + 1]);
        let pos: HashMap<&[usize], usize> = src.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut m = IntMatrix::zeros(to[tgt.len()], so[src.len()]);
        for (ti, chain) in tgt.iter().enumerate() {
            for i in 0..chain.len() {
                let mut face = chain.clone();
                face.remove(i);
                let si = pos[face.as_slice()];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let block = if i + 1 < chain.len() {
                    IntMatrix::identity(sheaf.stalk(*chain.last().expect("nonempty")).gens())
                } else {
                    sheaf
                        .map(chain[chain.len() - 2], chain[chain.len() - 1])
                        .expect("chain follows the face order")
                        .clone()
                };
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        m[(to[ti] + a, so[si] + b)] += &block[(a, b)] * BigInt::from(sign);
                    }
                }
            }
        }
        d.push(m);
    }
    tot(
        sheaf,
        Blocks {
            n_min: 0,
            blocks,
            chains,
            d,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_site::Stalk;

    #[test]
    fn circle_both_ways() {
        let x = CellComplex::circle(3).unwrap();
        let f = CellularSheaf::constant(&x);
        let cellular = cohomology(&x, &f).unwrap();
        let poset = nonnegative(poset_cochains(&x, &f, &x.all_cells()).unwrap().cohomology_table());
        assert_eq!(cellular[&0], FgAbGroup::free(1));
        assert_eq!(cellular[&1], FgAbGroup::free(1));
        for n in 0..=2 {
            assert_eq!(
                cellular.get(&n).cloned().unwrap_or_default(),
                poset.get(&n).cloned().unwrap_or_default(),
                "degree {n}"
            );
        }
    }

    #[test]
    fn open_arc_has_compact_cohomology() {
        // Circle minus one vertex: compactly supported Z in degree 1 only,
        // ordinary cohomology Z in degree 0 only.
        let x = CellComplex::circle(2).unwrap();
        let f = CellularSheaf::constant(&x);
        let u = x.cell_set(&["v1", "e0", "e1"]).unwrap();
        let c = cochains_on(&x, &f, &u).unwrap();
        assert!(c.cohomology(0).is_zero());
        assert_eq!(c.cohomology(1), FgAbGroup::free(1));
        let p = poset_cochains(&x, &f, &u).unwrap();
        assert_eq!(p.cohomology(0), FgAbGroup::free(1));
        assert!(p.cohomology(1).is_zero());
    }

    #[test]
    fn torsion_stalks() {
        // Constant Z/2 on the circle: H^0 = H^1 = Z/2.
        let x = CellComplex::circle(2).unwrap();
        let f = CellularSheaf::constant_with(&x, Stalk::cyclic(2));
        let c = cochain_complex(&x, &f).unwrap();
        assert_eq!(c.cohomology(-1), FgAbGroup::zero());
        assert_eq!(c.cohomology(0), FgAbGroup::cyclic(2));
        assert_eq!(c.cohomology(1), FgAbGroup::cyclic(2));
        let p = poset_cochains(&x, &f, &x.all_cells()).unwrap();
        assert_eq!(p.cohomology(0), FgAbGroup::cyclic(2));
        assert_eq!(p.cohomology(1), FgAbGroup::cyclic(2));
        assert!(p.cohomology(2).is_zero());
    }
}
