//! Serialized reports. Exact rationals are written as `"numerator/denominator"`.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::numseries::Interval;
use crate::probgen::MonteCarloEstimate;
use crate::structure::MaximalRow;
use crate::verdict::Verdict;

pub const TOOL: &str = concat!("genwait ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub spec: String,
    pub degree: usize,
    pub order: String,
    pub e: Option<String>,
    pub e_decimal: Option<String>,
    pub exact: Option<ExactBlock>,
    pub eta: EtaBlock,
    pub seed: Option<u64>,
    pub montecarlo: Option<MonteCarloEstimate>,
    pub warnings: Vec<String>,
    pub passed: bool,
    pub failed: usize,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaBlock {
    pub prime_bound: u64,
    pub lower: f64,
    pub upper: f64,
    /// The rational value of `upper` used in the exact comparisons.
    pub upper_exact: String,
    pub tail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileBlock {
    pub d: u32,
    pub d_p: BTreeMap<u64, u32>,
    /// Keyed `"p^t"`.
    pub alpha: BTreeMap<String, u32>,
    pub alpha_p: BTreeMap<u64, u32>,
    pub beta: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiefFactorRow {
    pub order: u64,
    pub abelian: bool,
    pub complemented: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactBlock {
    pub subgroups: usize,
    pub maximal_subgroups: u64,
    pub min_generators: u32,
    pub profile: ProfileBlock,
    /// Bottom to top.
    pub chief_factors: Vec<ChiefFactorRow>,
    /// Keyed by index.
    pub maximals: BTreeMap<u64, MaximalRow>,
    /// `P_G(k)` for `k ≤ d + 2`.
    pub generation: BTreeMap<u32, String>,
    pub mu_p: BTreeMap<u64, String>,
    pub mu_star: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One row of the catalog summary. Column order is the CSV header.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub spec: String,
    pub degree: usize,
    pub order: String,
    pub d: Option<u32>,
    pub min_generators: Option<u32>,
    pub subgroups: Option<usize>,
    pub e: Option<String>,
    pub e_decimal: Option<String>,
    pub verdicts: usize,
    pub failed: usize,
    pub status: String,
}

pub const SUMMARY_HEADER: &str =
    "spec,degree,order,d,min_generators,subgroups,e,e_decimal,verdicts,failed,status";

impl SummaryRow {
    pub fn from_report(r: &Report) -> Self {
        SummaryRow {
            spec: r.spec.clone(),
            degree: r.degree,
            order: r.order.clone(),
            d: r.exact.as_ref().map(|x| x.profile.d),
            min_generators: r.exact.as_ref().map(|x| x.min_generators),
            subgroups: r.exact.as_ref().map(|x| x.subgroups),
            e: r.e.clone(),
            e_decimal: r.e_decimal.clone(),
            verdicts: r.verdicts.len(),
            failed: r.failed,
            status: if r.passed { "pass" } else { "fail" }.into(),
        }
    }

    /// A row for an entry whose analysis could not run.
    pub fn error(spec: &str, degree: usize, message: &str) -> Self {
        SummaryRow {
            spec: spec.into(),
            degree,
            order: String::new(),
            d: None,
            min_generators: None,
            subgroups: None,
            e: None,
            e_decimal: None,
            verdicts: 0,
            failed: 0,
            status: format!("error: {message}"),
        }
    }
}

pub fn write_summary<W: io::Write>(rows: &[SummaryRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Output of the `constants` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub tool: String,
    pub constant: String,
    pub parameters: BTreeMap<String, u64>,
    pub interval: Option<Interval>,
    pub value: Option<f64>,
    /// How the interval ends were obtained.
    pub derivation: String,
}
