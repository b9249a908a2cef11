use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exact_algebra::{Coefficients, FgAbGroup, GroupHom};
use crate::filtered_complex::Page;

/// Finitely supported groups indexed by `(p, q)`, optionally with the
/// differentials of a page.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedTable {
    groups: BTreeMap<(i64, i64), FgAbGroup>,
    differentials: BTreeMap<(i64, i64), GroupHom>,
}

impl BigradedTable {
    /// Zero entries are dropped.
    pub fn new(groups: BTreeMap<(i64, i64), FgAbGroup>) -> Self {
        BigradedTable {
            groups: groups.into_iter().filter(|(_, g)| !g.is_zero()).collect(),
            differentials: BTreeMap::new(),
        }
    }

    /// The groups and nonzero differentials of a page.
    pub fn from_page(page: &Page) -> Self {
        let mut table = BigradedTable::new(page.groups().clone());
        for &(p, q) in page.differential_matrices().keys() {
            if let Ok(d) = page.differential(p, q) {
                if !d.is_zero() {
                    table.differentials.insert((p, q), d);
                }
            }
        }
        table
    }

    pub fn get(&self, p: i64, q: i64) -> FgAbGroup {
        self.groups.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), FgAbGroup> {
        &self.groups
    }

    pub fn differentials(&self) -> &BTreeMap<(i64, i64), GroupHom> {
        &self.differentials
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn with_coefficients(&self, c: Coefficients) -> Self {
        BigradedTable::new(self.groups.iter().map(|(k, g)| (*k, c.apply(g))).collect())
    }

    /// The first `(p, q)` where the groups differ.
    pub fn first_difference(&self, other: &BigradedTable) -> Option<((i64, i64), FgAbGroup, FgAbGroup)> {
        let keys: BTreeSet<_> = self.groups.keys().chain(other.groups.keys()).copied().collect();
        keys.into_iter()
            .map(|(p, q)| ((p, q), self.get(p, q), other.get(p, q)))
            .find(|(_, a, b)| a != b)
    }
}

impl fmt::Display for BigradedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return writeln!(f, "  (all zero)");
        }
        for ((p, q), g) in &self.groups {
            writeln!(f, "  ({p},{q}) {g}")?;
        }
        Ok(())
    }
}
