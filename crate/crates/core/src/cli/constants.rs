//! The `constants` command: η, the abelian limits, and the product formulas.

use std::collections::BTreeMap;

use super::report::{ConstantReport, TOOL};
use crate::numseries::{self, NumError, SIGMA_INFINITE_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Constant {
    /// 5/2 + Σ_{p≥3} 1/(p−1)²
    Eta,
    /// lim_n e(∏_{p≤n} E(p,d)), an interval for d plus the excess
    Sigma,
    /// The excess above as d → ∞
    SigmaInfinite,
    /// (1 − 2^−k) ∏_{3≤p≤N} ∏_{i=1..d} (1 − p^(i−k))
    Gd,
    /// ∏_{p≤N} ∏_{i=0..d−1} (1 − p^(i−k))
    Abelian,
    /// e(∏_{p≤n} E(p,d))
    EAbelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantParams {
    pub prime_bound: u64,
    pub d: u32,
    pub k: u32,
    pub k_extra: u32,
}

pub fn constant_report(which: Constant, p: ConstantParams) -> Result<ConstantReport, NumError> {
    let mut parameters = BTreeMap::new();
    parameters.insert("prime_bound".to_string(), p.prime_bound);
    let (name, interval, value, derivation) = match which {
        Constant::Eta => (
            "eta",
            Some(numseries::eta(p.prime_bound)?),
            None,
            format!(
                "lower: 5/2 + sum over 3 <= p <= {0} of 1/(p-1)^2; upper: lower + 1/({0}-2), \
                 since sum over m > N of 1/(m-1)^2 < 1/(N-2); both ends padded by 2^-40",
                p.prime_bound
            ),
        ),
        Constant::Sigma => {
            parameters.insert("d".into(), p.d as u64);
            parameters.insert("k_extra".into(), p.k_extra as u64);
            (
                "sigma",
                Some(numseries::sigma_limit(p.d, p.prime_bound, p.k_extra)?),
                None,
                format!(
                    "interval for d + sigma_d: d + 1 + sum_(k=d+1..{last}) (1 - P_N(k)); \
                     upper end scales each P_N(k) by exp(-t/(1-t)), t = 2 N^(1-m)/(m-1) per factor, \
                     and adds 12 * 2^-(K-d+1) for k > K; padded by 2^-40",
                    last = p.d + 1 + p.k_extra
                ),
            )
        }
        Constant::SigmaInfinite => {
            parameters.insert("k_extra".into(), p.k_extra as u64);
            (
                "sigma_infinite",
                Some(numseries::sigma_infinite(p.prime_bound, p.k_extra)?),
                None,
                format!(
                    "sigma interval at d = {SIGMA_INFINITE_RANK} minus d, upper end raised by \
                     12 * 2^-d for the remaining growth in d"
                ),
            )
        }
        Constant::Gd => {
            parameters.insert("d".into(), p.d as u64);
            parameters.insert("k".into(), p.k as u64);
            (
                "gd",
                None,
                Some(numseries::gd_p(p.d, p.k, p.prime_bound)),
                "finite product over odd primes up to the bound, in log space".into(),
            )
        }
        Constant::Abelian => {
            parameters.insert("d".into(), p.d as u64);
            parameters.insert("k".into(), p.k as u64);
            (
                "abelian",
                None,
                Some(numseries::abelian_p(p.d, p.k, p.prime_bound)),
                "finite product over primes up to the bound, in log space".into(),
            )
        }
        Constant::EAbelian => {
            parameters.insert("d".into(), p.d as u64);
            let iv = numseries::e_abelian_interval(p.prime_bound, p.d)?;
            (
                "e_abelian",
                Some(iv),
                Some(iv.midpoint()),
                "sum over k <= d + 40 of 1 - P(k), plus 12 * 2^-41 for the rest".into(),
            )
        }
    };
    Ok(ConstantReport {
        tool: TOOL.into(),
        constant: name.into(),
        parameters,
        interval,
        value,
        derivation,
    })
}
