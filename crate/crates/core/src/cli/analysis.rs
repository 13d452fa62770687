//! Runs every exact check on one group and assembles its report.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

use super::report::{ChiefFactorRow, EtaBlock, ExactBlock, ProfileBlock, Report, TOOL};
use super::spec::GroupSpec;
use crate::lattice::{factorize, LatticeError, MoebiusTable, SubgroupLattice};
use crate::numseries::{self, Interval, NumError};
use crate::perm::{GroupHandle, PermError};
use crate::probgen::{self, GenPolynomial, MonteCarloEstimate, ProbGenError};
use crate::structure::{self, ChiefSeries, GenerationProfile, MaximalTable, StructureError};
use crate::verdict::Verdict;

pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;
/// Groups up to this order are also checked against tuple enumeration.
pub const BRUTE_FORCE_ORDER: usize = 12;
pub const BRUTE_FORCE_K: u32 = 3;
/// Truncation points for the series-vs-closed-form check.
pub const TRUNCATIONS: [u32; 3] = [0, 5, 20];

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("group order {order} exceeds the exact-mode cap {cap}; raise --exact-cap or use --montecarlo-only")]
    CapExceeded { order: BigUint, cap: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    ProbGen(#[from] ProbGenError),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

impl AnalyzeError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            AnalyzeError::CapExceeded { .. }
                | AnalyzeError::Perm(PermError::CapExceeded { .. })
                | AnalyzeError::Lattice(LatticeError::CapExceeded { .. })
                | AnalyzeError::Structure(StructureError::CapExceeded { .. })
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarloOptions {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub exact_cap: usize,
    /// Last `k` for the maximal-subgroup inequality; `d + 8` when absent.
    pub k_max: Option<u32>,
    pub prime_bound: u64,
    pub montecarlo: Option<MonteCarloOptions>,
    pub montecarlo_only: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            exact_cap: crate::lattice::DEFAULT_EXACT_CAP,
            k_max: None,
            prime_bound: DEFAULT_PRIME_BOUND,
            montecarlo: None,
            montecarlo_only: false,
        }
    }
}

/// Everything computed from the subgroup lattice.
pub struct ExactAnalysis {
    pub lattice: SubgroupLattice,
    pub moebius: MoebiusTable,
    pub profile: GenerationProfile,
    pub maximals: MaximalTable,
    pub chief: ChiefSeries,
    pub poly: GenPolynomial,
    pub e: BigRational,
    pub min_generators: u32,
    pub structural: Vec<Verdict>,
    pub inequality: Vec<Verdict>,
    pub mu_bounds: Vec<Verdict>,
    pub theorem: Vec<Verdict>,
    pub shape: Vec<Verdict>,
    pub bruteforce: Vec<Verdict>,
    pub truncation: Vec<Verdict>,
    pub guralnick: Vec<Verdict>,
}

impl ExactAnalysis {
    pub fn verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.theorem
            .iter()
            .chain(&self.structural)
            .chain(&self.inequality)
            .chain(&self.mu_bounds)
            .chain(&self.shape)
            .chain(&self.bruteforce)
            .chain(&self.truncation)
            .chain(&self.guralnick)
    }
}

pub struct Analysis {
    pub spec: GroupSpec,
    pub group: GroupHandle,
    pub prime_bound: u64,
    pub eta: Interval,
    pub exact: Option<ExactAnalysis>,
    pub montecarlo: Option<MonteCarloEstimate>,
    pub warnings: Vec<String>,
}

/// The exact rational just above a float; used for `η_upper`.
pub fn rational_upper(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn analyze(spec: &GroupSpec, options: &AnalyzeOptions) -> Result<Analysis, AnalyzeError> {
    let eta = numseries::eta(options.prime_bound)?;
    analyze_with_eta(spec, options, eta)
}

/// As [`analyze`] with a precomputed `η` interval for `options.prime_bound`.
pub fn analyze_with_eta(
    spec: &GroupSpec,
    options: &AnalyzeOptions,
    eta: Interval,
) -> Result<Analysis, AnalyzeError> {
    let group = spec.build()?;
    let mut warnings = Vec::new();
    let mut exact = None;
    if group.is_trivial() {
        warnings.push("trivial group: generated by the empty set, e(G) is reported as 1".into());
    } else if !options.montecarlo_only {
        if group.order() > &BigUint::from(options.exact_cap) {
            return Err(AnalyzeError::CapExceeded {
                order: group.order().clone(),
                cap: options.exact_cap,
            });
        }
        exact = Some(exact_analysis(&group, spec.degree(), options, &eta)?);
    }
    let montecarlo = match options.montecarlo {
        Some(mc) if !group.is_trivial() => {
            let d_bound = match &exact {
                Some(x) => x.profile.d as u64,
                None => spec.degree() as u64 / 2,
            };
            Some(probgen::montecarlo_e(
                &group,
                mc.trials,
                mc.seed,
                mc.workers,
                10 * (d_bound + 3),
            )?)
        }
        _ => None,
    };
    Ok(Analysis {
        spec: spec.clone(),
        group,
        prime_bound: options.prime_bound,
        eta,
        exact,
        montecarlo,
        warnings,
    })
}

fn exact_analysis(
    group: &GroupHandle,
    degree: usize,
    options: &AnalyzeOptions,
    eta: &Interval,
) -> Result<ExactAnalysis, AnalyzeError> {
    let lattice = SubgroupLattice::enumerate(group, options.exact_cap)?;
    let moebius = lattice.moebius();
    let profile = structure::profile(&lattice)?;
    let maximals = structure::classify_maximals(&lattice)?;
    let chief = structure::chief_series(&lattice)?;
    let poly = probgen::hall_polynomial(&lattice, &moebius);
    let e = probgen::expected_exact(&lattice, &moebius)?.value;
    let top = lattice.node(lattice.top()).elements.clone();
    let min_generators = structure::min_generators_in(lattice.table(), &top);
    let d = profile.d;
    let order = lattice.order() as u64;

    let structural = structure::structural_checks(&lattice, &profile, &maximals, Some(degree));
    let k_max = options.k_max.unwrap_or(d + 8);
    let inequality = probgen::mn_inequality_check(&maximals, &poly, k_max);
    let mu_bounds = probgen::mu_bound_checks(order, &profile, &maximals, &poly);
    let eta_upper = rational_upper(eta.upper);
    let theorem =
        probgen::theorem_check(order, &profile, &maximals, &poly, &eta_upper, Some(degree)).verdicts;
    let shape = probgen::probability_shape_checks(&poly, k_max.max(d + 2), Some(min_generators));

    let mut bruteforce = Vec::new();
    if lattice.order() <= BRUTE_FORCE_ORDER {
        for k in 0..=BRUTE_FORCE_K {
            let brute = probgen::p_gen_bruteforce(lattice.table(), k)?;
            bruteforce.push(Verdict::eq(
                format!("P_G(k) = tuple enumeration (k={k})"),
                poly.eval(k),
                brute,
            ));
        }
    }

    let mut truncation = Vec::new();
    for k in TRUNCATIONS {
        let (partial, tail) = probgen::expected_series_truncated(&lattice, &moebius, k);
        truncation.push(Verdict::le(format!("S_K <= e(G) (K={k})"), &partial, &e));
        truncation.push(Verdict::le(
            format!("e(G) <= S_K + tail_K (K={k})"),
            &e,
            &(partial + tail),
        ));
    }

    let guralnick = vec![Verdict::le_int(
        "d(G) <= max_p d_p + 1",
        min_generators as i64,
        d as i64 + 1,
    )];

    Ok(ExactAnalysis {
        lattice,
        moebius,
        profile,
        maximals,
        chief,
        poly,
        e,
        min_generators,
        structural,
        inequality,
        mu_bounds,
        theorem,
        shape,
        bruteforce,
        truncation,
        guralnick,
    })
}

impl Analysis {
    pub fn verdicts(&self) -> Vec<Verdict> {
        self.exact
            .iter()
            .flat_map(|x| x.verdicts())
            .cloned()
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.exact
            .as_ref()
            .is_none_or(|x| x.verdicts().all(|v| v.passed))
    }

    pub fn e(&self) -> Option<BigRational> {
        match &self.exact {
            Some(x) => Some(x.e.clone()),
            None if self.group.is_trivial() => Some(BigRational::from_integer(1.into())),
            None => None,
        }
    }

    pub fn report(&self) -> Report {
        let verdicts = self.verdicts();
        let failed = verdicts.iter().filter(|v| !v.passed).count();
        let e = self.e();
        Report {
            tool: TOOL.to_string(),
            spec: self.spec.to_string(),
            degree: self.spec.degree(),
            order: self.group.order().to_string(),
            e: e.as_ref().map(|r| r.to_string()),
            e_decimal: e.as_ref().map(|r| probgen::decimal(r, 12)),
            exact: self.exact.as_ref().map(exact_block),
            eta: EtaBlock {
                prime_bound: self.prime_bound,
                lower: self.eta.lower,
                upper: self.eta.upper,
                upper_exact: rational_upper(self.eta.upper).to_string(),
                tail: format!("1/(N-2) with N = {}", self.prime_bound),
            },
            seed: self.montecarlo.as_ref().map(|m| m.seed),
            montecarlo: self.montecarlo.clone(),
            warnings: self.warnings.clone(),
            passed: failed == 0,
            failed,
            verdicts,
        }
    }
}

fn exact_block(x: &ExactAnalysis) -> ExactBlock {
    let p = &x.profile;
    let d = p.d;
    let order = x.lattice.order() as u64;
    ExactBlock {
        subgroups: x.lattice.len(),
        maximal_subgroups: x.maximals.total(),
        min_generators: x.min_generators,
        profile: ProfileBlock {
            d,
            d_p: p.d_p.clone(),
            alpha: p
                .alpha
                .iter()
                .map(|(&(q, t), &a)| (format!("{q}^{t}"), a))
                .collect(),
            alpha_p: p.alpha_p.clone(),
            beta: p.beta,
        },
        chief_factors: x
            .chief
            .factors
            .iter()
            .map(|f| ChiefFactorRow {
                order: f.order,
                abelian: f.abelian,
                complemented: f.complemented,
            })
            .collect(),
        maximals: x.maximals.rows.clone(),
        generation: (0..=d + 2).map(|k| (k, x.poly.eval(k).to_string())).collect(),
        mu_p: factorize(order)
            .into_iter()
            .map(|(q, _)| (q, probgen::mu_p(&x.maximals, d, q).to_string()))
            .collect::<BTreeMap<_, _>>(),
        mu_star: probgen::mu_star(&x.maximals, d).to_string(),
    }
}
