//! Machine-readable records and their human-readable rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use leray_core::filtered_complex::{Abutment, Page};
use leray_core::{Coefficients, FgAbGroup};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl GroupRecord {
    pub fn new(g: &FgAbGroup) -> Self {
        let torsion = g
            .torsion()
            .iter()
            .map(|t| t.to_i64().expect("torsion coefficients fit in 64 bits"))
            .collect();
        GroupRecord { rank: g.rank(), torsion }
    }

    pub fn group(&self) -> Option<FgAbGroup> {
        FgAbGroup::new(self.rank, self.torsion.iter().map(|&t| BigInt::from(t)).collect()).ok()
    }
}

impl std::fmt::Display for GroupRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.group() {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: i64,
    pub group: GroupRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub p: i64,
    pub q: i64,
    pub group: GroupRecord,
}

/// A nonzero `d_r: E_r^{p,q} → E_r^{p+r,q-r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub p: i64,
    pub q: i64,
    pub target_p: i64,
    pub target_q: i64,
    /// Rank of the image.
    pub rank: usize,
    pub image: GroupRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub r: usize,
    pub entries: Vec<EntryRecord>,
    pub differentials: Vec<DifferentialRecord>,
}

impl PageRecord {
    /// Nonzero entries and differentials of `page` over the given coefficients.
    pub fn new(page: &Page, coefficients: Coefficients) -> Self {
        let shown = page.with_coefficients(coefficients);
        let entries = shown
            .nonzero_entries()
            .map(|(&(p, q), g)| EntryRecord {
                p,
                q,
                group: GroupRecord::new(g),
            })
            .collect();
        let mut differentials = Vec::new();
        for &(p, q) in page.differential_matrices().keys() {
            let d = page.differential(p, q).expect("page differentials are well defined");
            let image = coefficients.apply(d.image().group());
            if image.is_zero() {
                continue;
            }
            let (target_p, target_q) = page.target(p, q);
            differentials.push(DifferentialRecord {
                p,
                q,
                target_p,
                target_q,
                rank: image.rank(),
                image: GroupRecord::new(&image),
            });
        }
        PageRecord {
            r: page.r(),
            entries,
            differentials,
        }
    }
}

pub fn entries(table: &BTreeMap<(i64, i64), FgAbGroup>, coefficients: Coefficients) -> Vec<EntryRecord> {
    table
        .iter()
        .map(|(&(p, q), g)| (p, q, coefficients.apply(g)))
        .filter(|(_, _, g)| !g.is_zero())
        .map(|(p, q, g)| EntryRecord {
            p,
            q,
            group: GroupRecord::new(&g),
        })
        .collect()
}

pub fn degrees(table: &BTreeMap<i64, FgAbGroup>, coefficients: Coefficients) -> Vec<DegreeRecord> {
    table
        .iter()
        .map(|(&degree, g)| DegreeRecord {
            degree,
            group: GroupRecord::new(&coefficients.apply(g)),
        })
        .collect()
}

/// `L^p H^n`, the abutment filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub degree: i64,
    pub p: i64,
    pub group: GroupRecord,
}

pub fn abutment_levels(abutment: &Abutment, top: i64, coefficients: Coefficients) -> Vec<LevelRecord> {
    let mut out = Vec::new();
    for n in 0..=top {
        for p in abutment.p_min()..=abutment.p_max() {
            out.push(LevelRecord {
                degree: n,
                p,
                group: GroupRecord::new(&coefficients.apply(&abutment.level(p, n))),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn of(passed: bool) -> Self {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// The outcome of `leray --verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub verdict: Verdict,
    pub failures: Vec<String>,
    /// `E_2, E_3, ...` of the preimage filtration.
    pub pages: Vec<PageRecord>,
    pub degenerates_at: usize,
    pub abutment: Vec<DegreeRecord>,
    pub abutment_filtration: Vec<LevelRecord>,
    pub edge_map_checked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecCaseRecord {
    pub name: String,
    pub entries_checked: usize,
    pub differentials_checked: usize,
    pub verdict: Verdict,
    pub failure: Option<String>,
}

/// Everything a command can print in records format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Cohomology {
        coefficients: String,
        rows: Vec<DegreeRecord>,
    },
    Pages {
        coefficients: String,
        stabilizes_at: usize,
        pages: Vec<PageRecord>,
    },
    Couple {
        coefficients: String,
        verdict: Verdict,
        mismatch: Option<String>,
        pages: Vec<PageRecord>,
    },
    Leray {
        coefficients: String,
        /// The closed subcomplex `Ỹ` for the relative sequence.
        pair: Option<Vec<String>>,
        /// `H^p(Y, R^q f_* F)`, or `H^p(Y, j_! R^q f_* F)` for a pair.
        e2: Vec<EntryRecord>,
        verification: Option<VerificationRecord>,
    },
    VerifyDec {
        verdict: Verdict,
        cases: Vec<DecCaseRecord>,
    },
}

impl Report {
    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            Report::Couple { verdict, .. } | Report::VerifyDec { verdict, .. } => Some(*verdict),
            Report::Leray { verification, .. } => verification.as_ref().map(|v| v.verdict),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    /// A plain-text rendering.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let rational = matches!(
            self,
            Report::Cohomology { coefficients, .. }
                | Report::Pages { coefficients, .. }
                | Report::Couple { coefficients, .. }
                | Report::Leray { coefficients, .. } if coefficients == "q"
        );
        match self {
            Report::Cohomology { coefficients, rows } => {
                let _ = writeln!(s, "cohomology over {}", ring(coefficients));
                if rows.is_empty() {
                    let _ = writeln!(s, "  (empty)");
                }
                for r in rows {
                    let _ = writeln!(s, "  H^{}  {}", r.degree, show(&r.group, rational));
                }
            }
            Report::Pages {
                coefficients,
                stabilizes_at,
                pages,
            } => {
                let _ = writeln!(s, "spectral sequence over {}, stable from E_{stabilizes_at}", ring(coefficients));
                for p in pages {
                    write_page(&mut s, p, rational);
                }
            }
            Report::Couple {
                coefficients,
                verdict,
                mismatch,
                pages,
            } => {
                let _ = writeln!(s, "derived couples over {}", ring(coefficients));
                for p in pages {
                    write_page(&mut s, p, rational);
                }
                let _ = writeln!(s, "agreement with the filtration pages: {}", verdict_word(*verdict));
                if let Some(m) = mismatch {
                    let _ = writeln!(s, "  first difference: {m}");
                }
            }
            Report::Leray {
                coefficients,
                pair,
                e2,
                verification,
            } => {
                match pair {
                    Some(ids) => {
                        let _ = writeln!(
                            s,
                            "relative Leray E_2 = H^p(Y, j_! R^q f_* F) over {}, relative to {{{}}}",
                            ring(coefficients),
                            ids.join(", ")
                        );
                    }
                    None => {
                        let _ = writeln!(s, "Leray E_2 = H^p(Y, R^q f_* F) over {}", ring(coefficients));
                    }
                }
                write_entries(&mut s, e2, rational);
                if let Some(v) = verification {
                    let _ = writeln!(s, "preimage filtration:");
                    for p in &v.pages {
                        write_page(&mut s, p, rational);
                    }
                    let _ = writeln!(s, "degenerates at E_{}", v.degenerates_at);
                    let _ = writeln!(s, "abutment:");
                    for d in &v.abutment {
                        let _ = writeln!(s, "  H^{}  {}", d.degree, show(&d.group, rational));
                    }
                    let _ = writeln!(s, "abutment filtration:");
                    for l in &v.abutment_filtration {
                        let _ = writeln!(s, "  L^{} H^{}  {}", l.p, l.degree, show(&l.group, rational));
                    }
                    let _ = writeln!(
                        s,
                        "edge map: {}",
                        if v.edge_map_checked { "checked" } else { "skipped (torsion stalks)" }
                    );
                    for f in &v.failures {
                        let _ = writeln!(s, "  mismatch: {f}");
                    }
                    let _ = writeln!(s, "{}", verdict_word(v.verdict));
                }
            }
            Report::VerifyDec { verdict, cases } => {
                for c in cases {
                    let _ = writeln!(
                        s,
                        "  {}  {}  ({} entries, {} differentials)",
                        verdict_word(c.verdict),
                        c.name,
                        c.entries_checked,
                        c.differentials_checked
                    );
                    if let Some(f) = &c.failure {
                        let _ = writeln!(s, "    {f}");
                    }
                }
                let _ = writeln!(s, "{}", verdict_word(*verdict));
            }
        }
        s
    }
}

fn ring(coefficients: &str) -> &'static str {
    if coefficients == "q" {
        "Q"
    } else {
        "Z"
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    }
}

/// Groups over Q are vector spaces and print as `Q^r`.
fn show(g: &GroupRecord, rational: bool) -> String {
    match (rational, g.rank) {
        (false, _) => g.to_string(),
        (true, 0) => "0".into(),
        (true, 1) => "Q".into(),
        (true, r) => format!("Q^{r}"),
    }
}

fn write_entries(s: &mut String, entries: &[EntryRecord], rational: bool) {
    if entries.is_empty() {
        let _ = writeln!(s, "  (all zero)");
    }
    for e in entries {
        let _ = writeln!(s, "  ({},{})  {}", e.p, e.q, show(&e.group, rational));
    }
}

fn write_page(s: &mut String, page: &PageRecord, rational: bool) {
    let _ = writeln!(s, "E_{}:", page.r);
    write_entries(s, &page.entries, rational);
    for d in &page.differentials {
        let _ = writeln!(
            s,
            "  d_{}: ({},{}) -> ({},{})  rank {}, image {}",
            page.r,
            d.p,
            d.q,
            d.target_p,
            d.target_q,
            d.rank,
            show(&d.image, rational)
        );
    }
}
