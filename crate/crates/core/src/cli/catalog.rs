//! The built-in group catalog and the sweep over it.

use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use super::analysis::{analyze_with_eta, Analysis, AnalyzeError, AnalyzeOptions};
use super::report::{write_summary, SummaryRow};
use super::spec::{parse_spec, GroupSpec};
use crate::numseries::{self, NumError};

/// Large enough for `S_6`.
pub const CATALOG_EXACT_CAP: usize = 720;

const SL_2_3: &str = "perm(8){(1 4 7)(2 8 5),(3 4 5)(6 8 7)}";

/// Catalog entries in their fixed order, as canonical spec strings.
pub fn catalog_specs() -> Vec<String> {
    let mut out: Vec<String> = (2..=30).map(|n| format!("C{n}")).collect();
    for p in [2, 3, 5] {
        for d in 1..=3 {
            out.push(format!("E({p},{d})"));
        }
    }
    out.extend((3..=15).map(|n| format!("D{n}")));
    out.push("Q8".into());
    out.extend((3..=6).map(|n| format!("S{n}")));
    out.extend((4..=6).map(|n| format!("A{n}")));
    out.push("E(2,2)*C3".into());
    out.push(SL_2_3.into());
    out.push("GD(1;3,5)".into());
    out.push("GD(1;3,5,7)".into());
    out.push("E(2,2)*E(3,2)".into());
    out
}

pub fn catalog() -> Vec<GroupSpec> {
    catalog_specs()
        .iter()
        .map(|s| parse_spec(s).expect("catalog specs parse"))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid filter pattern: {0}")]
    Filter(#[from] glob::PatternError),
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error("writing {path}: {source}")]
    Io { path: String, source: io::Error },
}

pub struct CatalogEntry {
    /// Position in the unfiltered catalog.
    pub index: usize,
    pub spec: GroupSpec,
    pub result: Result<Analysis, AnalyzeError>,
}

/// Analyzes every entry whose spec string matches `filter`, in parallel;
/// results come back in catalog order.
pub fn run_catalog(
    filter: Option<&str>,
    options: &AnalyzeOptions,
) -> Result<Vec<CatalogEntry>, CatalogError> {
    let pattern = filter.map(glob::Pattern::new).transpose()?;
    let eta = numseries::eta(options.prime_bound)?;
    let selected: Vec<(usize, GroupSpec)> = catalog()
        .into_iter()
        .enumerate()
        .filter(|(_, s)| pattern.as_ref().is_none_or(|p| p.matches(&s.to_string())))
        .collect();
    Ok(selected
        .into_par_iter()
        .map(|(index, spec)| {
            let result = analyze_with_eta(&spec, options, eta);
            CatalogEntry {
                index,
                spec,
                result,
            }
        })
        .collect())
}

pub fn summary_rows(entries: &[CatalogEntry]) -> Vec<SummaryRow> {
    entries
        .iter()
        .map(|e| match &e.result {
            Ok(a) => SummaryRow::from_report(&a.report()),
            Err(err) => SummaryRow::error(&e.spec.to_string(), e.spec.degree(), &err.to_string()),
        })
        .collect()
}

/// File name for an entry's report: catalog position plus the spec with
/// punctuation replaced.
pub fn report_file_name(index: usize, spec: &GroupSpec) -> String {
    let text: String = spec
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{index:03}_{text}.json")
}

/// Writes one JSON report per analyzed entry and `summary.csv`.
pub fn write_catalog(entries: &[CatalogEntry], dir: &Path) -> Result<Vec<SummaryRow>, CatalogError> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| CatalogError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for e in entries {
        if let Ok(a) = &e.result {
            let path = dir.join(report_file_name(e.index, &e.spec));
            fs::write(&path, a.report().to_json()).map_err(io_err(&path))?;
        }
    }
    let rows = summary_rows(entries);
    let path = dir.join("summary.csv");
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    write_summary(&rows, file).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        source: e.into(),
    })?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let specs = catalog_specs();
        assert_eq!(specs.len(), 64);
        for s in &specs {
            assert_eq!(&parse_spec(s).unwrap().to_string(), s);
        }
        let orders: Vec<u64> = catalog()
            .iter()
            .map(|s| s.build().unwrap().order_u64().unwrap())
            .collect();
        assert!(orders.iter().all(|&n| (2..=720).contains(&n)));
        let sl = parse_spec(SL_2_3).unwrap().build().unwrap();
        assert_eq!(sl.order_u64(), Some(24));
    }

    #[test]
    fn filter_selects_symmetric_groups() {
        let pattern = glob::Pattern::new("S*").unwrap();
        let hits: Vec<String> = catalog_specs()
            .into_iter()
            .filter(|s| pattern.matches(s))
            .collect();
        assert_eq!(hits, ["S3", "S4", "S5", "S6"]);
    }

    #[test]
    fn file_names() {
        let s = parse_spec("GD(1;3,5)").unwrap();
        assert_eq!(report_file_name(7, &s), "007_GD_1_3_5_.json");
    }
}
