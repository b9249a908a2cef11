use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use leray_core::exact_couple::{couple_from_filtration, couple_pages};
use leray_core::filtered_complex::{dec, pages, verify_dec_shift, SpectralSequence};
use leray_core::fixtures::{random_corpus, RandomParams};
use leray_core::leray::{compare_leray, leray_e2, pair_leray, BigradedTable, LerayReport};
use leray_core::{Coefficients, Error};

use crate::input::{self, in_file, read_json, InputError, InputResult};
use crate::output::{self, DecCaseRecord, PageRecord, Report, Verdict, VerificationRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoefficientArg {
    Z,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "leray", version, about = "Exact spectral sequences, cellular sheaves and the Leray comparison")]
pub struct Cli {
    /// Report groups over the integers or tensored with Q.
    #[arg(long, value_enum, default_value = "z", global = true)]
    pub coefficients: CoefficientArg,
    /// Human-readable tables or JSON records.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cellular sheaf cohomology H^i(X, F).
    Cohomology {
        /// Cell complex (JSON list of cells).
        space: PathBuf,
        /// Sheaf on the complex; the constant sheaf Z when omitted.
        #[arg(long)]
        sheaf: Option<PathBuf>,
    },
    /// Pages of the spectral sequence of a filtered cochain complex.
    Pages {
        complex: PathBuf,
        filtration: PathBuf,
        /// Last page to print; defaults to the stabilization page.
        #[arg(long)]
        r_max: Option<usize>,
        /// Replace the filtration by its décalage first.
        #[arg(long)]
        dec: bool,
    },
    /// Pages of the derived couples of the exact couple of a filtered
    /// complex, checked against the filtration pages.
    Couple {
        complex: PathBuf,
        filtration: PathBuf,
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// The Leray E_2 table of a cellular map, optionally verified against
    /// the spectral sequence of the preimage filtration.
    Leray {
        /// Map document with inline source and target complexes.
        map: PathBuf,
        /// Sheaf on the source; the constant sheaf Z when omitted.
        #[arg(long)]
        sheaf: Option<PathBuf>,
        /// Cellular filtration of the target; dimension skeleta when omitted.
        #[arg(long)]
        filtration: Option<PathBuf>,
        /// Comma-separated cells of a closed subcomplex of the target for the
        /// relative sequence; an empty string means the empty subcomplex.
        #[arg(long)]
        pairs: Option<String>,
        /// Run the comparison and exit with 1 on any mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Checks E_r(Dec F) against E_{r+1}(F) with the index shift.
    VerifyDec {
        complex: Option<PathBuf>,
        filtration: Option<PathBuf>,
        /// Number of random filtered complexes to check.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Last page to compare; defaults to the stabilization page.
        #[arg(long)]
        r_max: Option<usize>,
    },
}

/// What a command produced, or why it could not run.
#[derive(Debug)]
pub enum Outcome {
    Report(Report),
    /// A well-formed input on which a verification failed outright.
    Failed(String),
    Invalid(InputError),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Report(r) if r.verdict() == Some(Verdict::Fail) => 1,
            Outcome::Report(_) => 0,
            Outcome::Failed(_) => 1,
            Outcome::Invalid(_) => 2,
        }
    }
}

fn coefficient_name(c: CoefficientArg) -> String {
    match c {
        CoefficientArg::Z => "z".into(),
        CoefficientArg::Q => "q".into(),
    }
}

fn ring(c: CoefficientArg) -> Coefficients {
    match c {
        CoefficientArg::Z => Coefficients::Integers,
        CoefficientArg::Q => Coefficients::Rationals,
    }
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> InputResult<T> {
    read_json(path)
}

fn load_complex(path: &Path) -> InputResult<leray_core::filtered_complex::CochainComplex> {
    let doc: input::CochainComplexDoc = load(path)?;
    in_file(path, input::cochain_complex(&doc))
}

fn load_filtered(
    complex: &Path,
    filtration: &Path,
) -> InputResult<(leray_core::filtered_complex::CochainComplex, leray_core::filtered_complex::Filtration)> {
    let k = load_complex(complex)?;
    let doc: input::FiltrationDoc = load(filtration)?;
    let f = in_file(filtration, input::filtration(&k, &doc))?;
    Ok((k, f))
}

fn page_records(pages: &[leray_core::filtered_complex::Page], c: CoefficientArg) -> Vec<PageRecord> {
    pages.iter().map(|p| PageRecord::new(p, ring(c))).collect()
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::Invalid(e),
    }
}

fn execute(cli: &Cli) -> InputResult<Outcome> {
    let c = cli.coefficients;
    let coefficients = coefficient_name(c);
    match &cli.command {
        Command::Cohomology { space, sheaf } => {
            let doc: input::ComplexDoc = load(space)?;
            let x = in_file(space, input::cell_complex(&doc))?;
            let sheaf = match sheaf {
                Some(path) => {
                    let doc: input::SheafDoc = load(path)?;
                    in_file(path, input::sheaf(&x, Some(&doc)))?
                }
                None => input::sheaf(&x, None)?,
            };
            let table = if x.is_empty() {
                Default::default()
            } else {
                leray_core::cell_site::cohomology(&x, &sheaf)?
            };
            Ok(Outcome::Report(Report::Cohomology {
                coefficients,
                rows: output::degrees(&table, ring(c)),
            }))
        }
        Command::Pages {
            complex,
            filtration,
            r_max,
            dec: use_dec,
        } => {
            let (k, mut f) = load_filtered(complex, filtration)?;
            if *use_dec {
                f = dec(&f, &k)?;
            }
            let ss = SpectralSequence::new(&k, &f)?;
            let stab = ss.stabilization_page();
            let list = pages(&k, &f, r_max.unwrap_or(stab))?;
            let list: Vec<_> = list.into_iter().map(|p| p.into_page()).collect();
            Ok(Outcome::Report(Report::Pages {
                coefficients,
                stabilizes_at: stab,
                pages: page_records(&list, c),
            }))
        }
        Command::Couple {
            complex,
            filtration,
            r_max,
        } => {
            let (k, f) = load_filtered(complex, filtration)?;
            let r_max = r_max.unwrap_or((f.width() + 2) as usize);
            let couple = couple_from_filtration(&k, &f)?;
            let derived = couple_pages(&couple, r_max)?;
            let direct = pages(&k, &f, r_max)?;
            let mut mismatch = None;
            for (a, b) in derived.iter().zip(&direct) {
                if let Some(m) = a.compare(b.page())? {
                    mismatch = Some(m);
                    break;
                }
            }
            Ok(Outcome::Report(Report::Couple {
                coefficients,
                verdict: Verdict::of(mismatch.is_none()),
                mismatch,
                pages: page_records(&derived, c),
            }))
        }
        Command::Leray {
            map,
            sheaf,
            filtration,
            pairs,
            verify,
        } => leray(c, map, sheaf.as_deref(), filtration.as_deref(), pairs.as_deref(), *verify),
        Command::VerifyDec {
            complex,
            filtration,
            random,
            seed,
            r_max,
        } => {
            let mut inputs = Vec::new();
            match (complex, filtration) {
                (Some(k), Some(f)) => {
                    let (kk, ff) = load_filtered(k, f)?;
                    inputs.push((k.display().to_string(), kk, ff));
                }
                (None, None) => {}
                _ => return Err(InputError::new("give both a complex and a filtration, or neither")),
            }
            if let Some(count) = random {
                for (i, (k, f)) in random_corpus(*seed, *count, RandomParams::default()).into_iter().enumerate() {
                    inputs.push((format!("random #{i} (seed {seed})"), k, f));
                }
            }
            if inputs.is_empty() {
                return Err(InputError::new("nothing to check: give input files or --random N"));
            }
            let mut cases = Vec::new();
            for (name, k, f) in &inputs {
                let r = r_max.unwrap_or((f.width() + 2) as usize);
                let report = verify_dec_shift(k, f, r)?;
                cases.push(DecCaseRecord {
                    name: name.clone(),
                    entries_checked: report.entries_checked,
                    differentials_checked: report.differentials_checked,
                    verdict: Verdict::of(report.passed()),
                    failure: report.first_failure.clone(),
                });
            }
            Ok(Outcome::Report(Report::VerifyDec {
                verdict: Verdict::of(cases.iter().all(|c| c.verdict == Verdict::Pass)),
                cases,
            }))
        }
    }
}

fn verification(report: &LerayReport, top: i64, c: CoefficientArg, extra: Vec<String>) -> VerificationRecord {
    let mut failures = report.failures();
    failures.extend(extra);
    let abutment = (0..=top).map(|n| (n, report.abutment.cohomology(n))).collect();
    VerificationRecord {
        verdict: Verdict::of(failures.is_empty()),
        failures,
        pages: page_records(&report.pages, c),
        degenerates_at: report.degenerates_at,
        abutment: output::degrees(&abutment, ring(c)),
        abutment_filtration: output::abutment_levels(&report.abutment, top, ring(c)),
        edge_map_checked: report.edge_map_checked(),
    }
}

fn leray(
    c: CoefficientArg,
    map_path: &Path,
    sheaf_path: Option<&Path>,
    filtration_path: Option<&Path>,
    pairs: Option<&str>,
    verify: bool,
) -> InputResult<Outcome> {
    let doc: input::MapDoc = load(map_path)?;
    let f = in_file(map_path, input::cellular_map(&doc))?;
    let sheaf = match sheaf_path {
        Some(path) => {
            let doc: input::SheafDoc = load(path)?;
            in_file(path, input::sheaf(f.source(), Some(&doc)))?
        }
        None => input::sheaf(f.source(), None)?,
    };
    let space = match filtration_path {
        Some(path) => {
            let doc: input::SpaceFiltrationDoc = load(path)?;
            in_file(path, input::filtered_space(f.target(), Some(&doc)))?
        }
        None => input::filtered_space(f.target(), None)?,
    };
    let top = f.source().max_dim() as i64;
    let coefficients = coefficient_name(c);
    let wrap = |e: Error| -> InputResult<Outcome> {
        match e {
            Error::Convergence(m) => Ok(Outcome::Failed(m)),
            other => Err(other.into()),
        }
    };
    match pairs {
        None => {
            let (e2, verification_record) = if verify {
                match compare_leray(&f, &sheaf, &space) {
                    Ok(r) => (r.leray_e2.clone(), Some(verification(&r, top, c, Vec::new()))),
                    Err(e) => return wrap(e),
                }
            } else {
                (leray_e2(&f, &sheaf)?, None)
            };
            Ok(Outcome::Report(Report::Leray {
                coefficients,
                pair: None,
                e2: table_records(&e2, c),
                verification: verification_record,
            }))
        }
        Some(list) => {
            let ids: Vec<String> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            let sub = input::cell_set(f.target(), &ids)?;
            let report = match pair_leray(&f, &sheaf, &sub, &space) {
                Ok(r) => r,
                Err(e) => return wrap(e),
            };
            let mut extra = Vec::new();
            for (what, m) in [
                ("j_!/J_! exchange", &report.exchange_mismatch),
                ("relative E_2", &report.e2_mismatch),
                ("relative cohomology", &report.relative_mismatch),
            ] {
                if let Some(m) = m {
                    extra.push(format!("{what}: {m}"));
                }
            }
            Ok(Outcome::Report(Report::Leray {
                coefficients,
                pair: Some(ids),
                e2: table_records(&report.pushed_e2, c),
                verification: verify.then(|| verification(&report.leray, top, c, extra)),
            }))
        }
    }
}

fn table_records(table: &BigradedTable, c: CoefficientArg) -> Vec<output::EntryRecord> {
    output::entries(table.entries(), ring(c))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let pass = Report::VerifyDec {
            verdict: Verdict::Pass,
            cases: Vec::new(),
        };
        let fail = Report::VerifyDec {
            verdict: Verdict::Fail,
            cases: Vec::new(),
        };
        let table = Report::Cohomology {
            coefficients: "z".into(),
            rows: Vec::new(),
        };
        assert_eq!(Outcome::Report(pass).exit_code(), 0);
        assert_eq!(Outcome::Report(table).exit_code(), 0);
        assert_eq!(Outcome::Report(fail).exit_code(), 1);
        assert_eq!(Outcome::Failed("E_∞ differs".into()).exit_code(), 1);
        assert_eq!(Outcome::Invalid(InputError::new("bad")).exit_code(), 2);
    }

    #[test]
    fn parses_global_flags_after_the_command() {
        let cli = Cli::try_parse_from(["leray", "cohomology", "x.json", "--coefficients", "q", "--format", "records"]).unwrap();
        assert_eq!(cli.coefficients, CoefficientArg::Q);
        assert_eq!(cli.format, Format::Records);
    }
}
