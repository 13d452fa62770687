//! Generation probabilities and the waiting time `τ_G`.
//!
//! `P_G(k) = Σ_H μ(H, G) (|H|/|G|)^k` over the subgroup lattice. Since the
//! `H = G` term is 1, `1 − P_G(k) = −Σ_{H<G} μ(H, G) r_H^k` and every sum over
//! `k` below is a finite combination of geometric series, evaluated exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{factorize, MoebiusTable, SubgroupLattice};
use crate::perm::GroupHandle;
use crate::rng::RandomStream;
use crate::structure::{GenerationProfile, MaximalTable};
use crate::table::ElementTable;
use crate::verdict::Verdict;

/// Largest `|G|^k` that [`p_gen_bruteforce`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProbGenError {
    #[error("the trivial group needs no generators; e is reported as 1")]
    TrivialGroup,
    #[error("|G|^k = {0} exceeds the brute-force limit")]
    BruteForceLimit(u128),
    #[error("trials must be at least 1")]
    NoTrials,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// One aggregated term `coefficient · ratio^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTerm {
    pub coefficient: BigInt,
    pub ratio: BigRational,
}

/// `P_G(k)` as a signed sum of `k`-th powers, ratios in descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPolynomial {
    pub terms: Vec<GenTerm>,
}

impl GenPolynomial {
    pub fn eval(&self, k: u32) -> BigRational {
        self.terms
            .iter()
            .map(|t| BigRational::from_integer(t.coefficient.clone()) * pow(&t.ratio, k))
            .sum()
    }

    /// Terms with ratio below 1, i.e. those of `1 − P_G(k)` after a sign flip.
    fn proper_terms(&self) -> impl Iterator<Item = &GenTerm> {
        self.terms.iter().filter(|t| !t.ratio.is_one())
    }

    /// `Σ_{k≥from} (1 − P_G(k))` in closed form.
    pub fn tail_sum(&self, from: u32) -> BigRational {
        self.proper_terms()
            .map(|t| {
                -BigRational::from_integer(t.coefficient.clone()) * pow(&t.ratio, from)
                    / (BigRational::one() - &t.ratio)
            })
            .sum()
    }

    /// `Σ_{k=0}^{upto} (1 − P_G(k))`.
    pub fn partial_sum(&self, upto: u32) -> BigRational {
        (0..=upto).map(|k| BigRational::one() - self.eval(k)).sum()
    }
}

fn pow(r: &BigRational, k: u32) -> BigRational {
    num_traits::pow(r.clone(), k as usize)
}

/// Aggregates `μ(H, G)` by the ratio `|H|/|G|`; zero coefficients are dropped.
pub fn hall_polynomial(lattice: &SubgroupLattice, moebius: &MoebiusTable) -> GenPolynomial {
    let n = lattice.order();
    let mut by_order: BTreeMap<usize, i64> = BTreeMap::new();
    for (id, node) in lattice.nodes().iter().enumerate() {
        let mu = moebius.get(id);
        if mu != 0 {
            *by_order.entry(node.order).or_insert(0) += mu;
        }
    }
    let terms = by_order
        .into_iter()
        .rev()
        .filter(|&(_, c)| c != 0)
        .map(|(order, c)| GenTerm {
            coefficient: BigInt::from(c),
            ratio: BigRational::new(BigInt::from(order), BigInt::from(n)),
        })
        .collect();
    GenPolynomial { terms }
}

/// Fraction of `k`-tuples that generate `G`, by enumerating all of `G^k`.
pub fn p_gen_bruteforce(table: &ElementTable, k: u32) -> Result<BigRational, ProbGenError> {
    let n = table.order();
    let total = (n as u128).checked_pow(k).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_LIMIT {
        return Err(ProbGenError::BruteForceLimit(total));
    }
    let mut tuple = vec![0u32; k as usize];
    let mut hits: u64 = 0;
    loop {
        if table.closure(&tuple).len() == n {
            hits += 1;
        }
        let mut i = 0;
        while i < tuple.len() {
            tuple[i] += 1;
            if (tuple[i] as usize) < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(total as u64),
    ))
}

/// An exact rational value in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactValue {
    pub value: BigRational,
}

impl ExactValue {
    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }

    /// Decimal rendering with `digits` places, rounded half up.
    pub fn decimal(&self, digits: u32) -> String {
        decimal(&self.value, digits)
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    // Scale so both parts stay in f64 range for the magnitudes seen here.
    let scale = BigInt::from(10u64).pow(18);
    let scaled = (r.numer() * &scale) / r.denom();
    scaled.to_string().parse::<f64>().unwrap_or(f64::NAN) / 1e18
}

pub fn decimal(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u64).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone())).round();
    let int = scaled.to_integer();
    let negative = int.is_negative();
    let abs = int.abs();
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits as usize)
}

/// `e(G) = Σ_{H<G} −μ(H, G) · |G| / (|G| − |H|)`.
pub fn expected_exact(
    lattice: &SubgroupLattice,
    moebius: &MoebiusTable,
) -> Result<ExactValue, ProbGenError> {
    if lattice.order() == 1 {
        return Err(ProbGenError::TrivialGroup);
    }
    let n = lattice.order() as i64;
    let value = lattice
        .nodes()
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != lattice.top())
        .map(|(id, h)| {
            BigRational::new(
                BigInt::from(-moebius.get(id) * n),
                BigInt::from(n - h.order as i64),
            )
        })
        .sum();
    Ok(ExactValue { value })
}

/// `Σ_{k=0}^{K} (1 − P_G(k))` together with the tail majorant
/// `Σ_{H<G} |μ(H, G)| r_H^{K+1} / (1 − r_H)`.
pub fn expected_series_truncated(
    lattice: &SubgroupLattice,
    moebius: &MoebiusTable,
    upto: u32,
) -> (BigRational, BigRational) {
    let poly = hall_polynomial(lattice, moebius);
    let value = poly.partial_sum(upto);
    let n = lattice.order() as i64;
    let tail = lattice
        .nodes()
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != lattice.top())
        .map(|(id, h)| {
            let r = BigRational::new(BigInt::from(h.order as i64), BigInt::from(n));
            rat(moebius.get(id).abs()) * pow(&r, upto + 1) / (BigRational::one() - r)
        })
        .sum();
    (value, tail)
}

/// One draw of `τ_G`: uniform elements are added to a fresh stabilizer
/// chain until it reaches `|G|`.
pub fn tau_sample(group: &GroupHandle, rng: &mut RandomStream) -> Result<u64, ProbGenError> {
    if group.is_trivial() {
        return Err(ProbGenError::TrivialGroup);
    }
    let mut generated = GroupHandle::trivial(group.degree());
    let mut n = 0;
    loop {
        let x = group.uniform_element(rng);
        n += 1;
        generated
            .add_generator(&x)
            .expect("sampled elements share the group's degree");
        if generated.order() == group.order() {
            return Ok(n);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Absent for a single trial.
    pub stderr: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Counts per observed `τ` up to the cap.
    pub histogram: BTreeMap<u64, u64>,
    /// Samples above `tau_cap`.
    pub overflow: u64,
    pub tau_cap: u64,
}

#[derive(Default)]
struct Tally {
    sum: u128,
    sum_sq: u128,
    histogram: BTreeMap<u64, u64>,
    overflow: u64,
}

/// Monte Carlo estimate of `e(G)`. Trial `i` uses stream `i` of `seed`, so
/// the result does not depend on `workers`.
pub fn montecarlo_e(
    group: &GroupHandle,
    trials: u64,
    seed: u64,
    workers: usize,
    tau_cap: u64,
) -> Result<MonteCarloEstimate, ProbGenError> {
    if trials == 0 {
        return Err(ProbGenError::NoTrials);
    }
    if group.is_trivial() {
        return Err(ProbGenError::TrivialGroup);
    }
    let run = |worker: u64, stride: u64| {
        let mut t = Tally::default();
        let mut i = worker;
        while i < trials {
            let mut rng = RandomStream::new(seed, i);
            let tau = tau_sample(group, &mut rng).expect("nontrivial group");
            t.sum += tau as u128;
            t.sum_sq += (tau as u128) * (tau as u128);
            if tau > tau_cap {
                t.overflow += 1;
            } else {
                *t.histogram.entry(tau).or_insert(0) += 1;
            }
            i += stride;
        }
        t
    };
    let workers = workers.clamp(1, trials.min(1024) as usize);
    let tallies: Vec<Tally> = if workers == 1 {
        vec![run(0, 1)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| s.spawn(move || run(w, workers as u64)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        })
    };
    let mut total = Tally::default();
    for t in tallies {
        total.sum += t.sum;
        total.sum_sq += t.sum_sq;
        total.overflow += t.overflow;
        for (k, v) in t.histogram {
            *total.histogram.entry(k).or_insert(0) += v;
        }
    }
    let n = trials as f64;
    let mean = total.sum as f64 / n;
    let stderr = (trials > 1).then(|| {
        // (n Σx² − (Σx)²) / (n (n−1)), exact in integers before the division.
        let t = trials as i128;
        let numer = t * total.sum_sq as i128 - (total.sum as i128) * (total.sum as i128);
        let var = numer as f64 / (n * (n - 1.0));
        (var / n).sqrt()
    });
    Ok(MonteCarloEstimate {
        mean,
        stderr,
        trials,
        seed,
        histogram: total.histogram,
        overflow: total.overflow,
        tau_cap,
    })
}

/// `1 − P_G(k) ≤ Σ_n m_n / n^k` for `k = 0..=k_max`.
pub fn mn_inequality_check(
    maximals: &MaximalTable,
    poly: &GenPolynomial,
    k_max: u32,
) -> Vec<Verdict> {
    (0..=k_max)
        .map(|k| {
            let lhs = BigRational::one() - poly.eval(k);
            let rhs: BigRational = maximals
                .rows
                .iter()
                .map(|(&n, row)| {
                    BigRational::new(
                        BigInt::from(row.m),
                        num_traits::pow(BigInt::from(n), k as usize),
                    )
                })
                .sum();
            Verdict::le(format!("1 - P_G(k) <= sum_n m_n/n^k (k={k})"), &lhs, &rhs)
        })
        .collect()
}

/// `Σ_{k≥from} x^k = x^from / (1 − x)`.
fn geometric_from(x: &BigRational, from: u32) -> BigRational {
    pow(x, from) / (BigRational::one() - x)
}

/// `μ_p(G) = Σ_{k≥d+2} Σ_{t≥1} m^A_{p^t} / p^{tk}`.
pub fn mu_p(maximals: &MaximalTable, d: u32, p: u64) -> BigRational {
    maximals
        .rows
        .iter()
        .filter_map(|(&n, row)| {
            let (q, t) = crate::lattice::prime_power(n)?;
            (q == p && row.type_a != 0).then(|| {
                let x = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), t as usize));
                rat(row.type_a as i64) * geometric_from(&x, d + 2)
            })
        })
        .sum()
}

/// `μ*(G) = Σ_{k≥d+2} Σ_{n≥5} m^B_n / n^k`.
pub fn mu_star(maximals: &MaximalTable, d: u32) -> BigRational {
    maximals
        .rows
        .iter()
        .filter(|(_, row)| row.type_b != 0)
        .map(|(&n, row)| {
            let x = BigRational::new(BigInt::one(), BigInt::from(n));
            rat(row.type_b as i64) * geometric_from(&x, d + 2)
        })
        .sum()
}

/// `base^exp` for a possibly negative exponent.
fn signed_pow(base: i64, exp: i64) -> BigRational {
    let b = rat(base);
    if exp >= 0 {
        pow(&b, exp as u32)
    } else {
        BigRational::one() / pow(&b, (-exp) as u32)
    }
}

/// Bounds on `μ_p`, `μ*`, their combination, and the tail domination
/// `Σ_{k≥d+2} (1 − P_G(k)) ≤ Σ_p μ_p + μ*`.
pub fn mu_bound_checks(
    order: u64,
    profile: &GenerationProfile,
    maximals: &MaximalTable,
    poly: &GenPolynomial,
) -> Vec<Verdict> {
    let d = profile.d;
    let mut out = Vec::new();
    let mut sum_mu = BigRational::zero();
    let mut mu_2 = BigRational::zero();
    for (p, _) in factorize(order) {
        let mu = mu_p(maximals, d, p);
        let alpha = profile.alpha_p(p);
        if alpha == 0 {
            out.push(Verdict::eq(format!("alpha_p = 0 implies mu_p = 0 (p={p})"), mu.clone(), BigRational::zero()));
        }
        let excess = d as i64 - alpha as i64;
        if p == 2 {
            let refined = BigRational::one() / (signed_pow(2, excess) * rat(2));
            out.push(Verdict::le("mu_2 <= 1/(2^(d-alpha_2) 2)", &mu, &refined));
            out.push(Verdict::le("mu_2 <= 1/2", &mu, &BigRational::new(1.into(), 2.into())));
            mu_2 = mu.clone();
        } else {
            let sq = rat((p as i64 - 1) * (p as i64 - 1));
            let refined = BigRational::one() / (signed_pow(p as i64, excess) * &sq);
            out.push(Verdict::le(format!("mu_p <= 1/(p^(d-alpha_p) (p-1)^2) (p={p})"), &mu, &refined));
            out.push(Verdict::le(format!("mu_p <= 1/(p-1)^2 (p={p})"), &mu, &(BigRational::one() / sq)));
        }
        sum_mu += mu;
    }
    let star = mu_star(maximals, d);
    if profile.beta == 0 {
        out.push(Verdict::eq("beta = 0 implies mu* = 0", star.clone(), BigRational::zero()));
    } else {
        let excess = d as i64 - (profile.beta as i64 + 1);
        let refined = BigRational::one() / (rat(4) * signed_pow(5, excess));
        out.push(Verdict::le("mu* <= 1/(4 5^(d-(beta+1)))", &star, &refined));
        out.push(Verdict::le("mu* <= 1/4", &star, &BigRational::new(1.into(), 4.into())));
    }
    out.push(Verdict::le(
        "mu_2 + mu* <= 1/2",
        &(&mu_2 + &star),
        &BigRational::new(1.into(), 2.into()),
    ));
    out.push(Verdict::le(
        "sum_(k>=d+2) (1 - P_G(k)) <= sum_p mu_p + mu*",
        &poly.tail_sum(d + 2),
        &(sum_mu + star),
    ));
    out
}

/// The main bound and its proof chain for one group.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub d: u32,
    pub e: BigRational,
    pub eta_upper: BigRational,
    pub verdicts: Vec<Verdict>,
}

/// `e(G) ≤ d + η`, the chain `e(G) ≤ d + 2 + Σ_p μ_p + μ*`, and, when a
/// degree is declared, `e(G) ≤ ⌊n/2⌋ + η`.
pub fn theorem_check(
    order: u64,
    profile: &GenerationProfile,
    maximals: &MaximalTable,
    poly: &GenPolynomial,
    eta_upper: &BigRational,
    degree: Option<usize>,
) -> TheoremReport {
    let d = profile.d;
    let e = poly.tail_sum(0);
    let dr = rat(d as i64);
    let mut verdicts = vec![Verdict::le("e(G) <= d + eta", &e, &(&dr + eta_upper))];
    let head = poly.partial_sum(d + 1);
    verdicts.push(Verdict::le(
        "sum_(k<=d+1) (1 - P_G(k)) <= d + 2",
        &head,
        &rat(d as i64 + 2),
    ));
    let mus: BigRational = factorize(order)
        .into_iter()
        .map(|(p, _)| mu_p(maximals, d, p))
        .sum::<BigRational>()
        + mu_star(maximals, d);
    verdicts.push(Verdict::le(
        "e(G) <= d + 2 + sum_p mu_p + mu*",
        &e,
        &(rat(d as i64 + 2) + &mus),
    ));
    verdicts.push(Verdict::le(
        "d + 2 + sum_p mu_p + mu* <= d + eta",
        &(rat(d as i64 + 2) + &mus),
        &(&dr + eta_upper),
    ));
    if let Some(n) = degree {
        verdicts.push(Verdict::le(
            "e(G) <= floor(n/2) + eta",
            &e,
            &(rat((n / 2) as i64) + eta_upper),
        ));
    }
    TheoremReport {
        d,
        e,
        eta_upper: eta_upper.clone(),
        verdicts,
    }
}

/// Range and monotonicity of `P_G(k)` for `k ≤ k_max`, and positivity
/// exactly from the minimal generator count on.
pub fn probability_shape_checks(
    poly: &GenPolynomial,
    k_max: u32,
    min_generators: Option<u32>,
) -> Vec<Verdict> {
    let mut out = Vec::new();
    let values: Vec<BigRational> = (0..=k_max).map(|k| poly.eval(k)).collect();
    let in_range = values
        .iter()
        .all(|v| !v.is_negative() && v <= &BigRational::one());
    out.push(Verdict::holds(
        format!("0 <= P_G(k) <= 1 (k<={k_max})"),
        in_range,
        String::new(),
    ));
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    out.push(Verdict::holds(
        format!("P_G(k) nondecreasing (k<={k_max})"),
        monotone,
        String::new(),
    ));
    let ratio_one = poly
        .terms
        .iter()
        .find(|t| t.ratio.is_one())
        .map(|t| t.coefficient.clone());
    out.push(Verdict::holds(
        "coefficient of ratio 1 is 1",
        ratio_one == Some(BigInt::one()),
        String::new(),
    ));
    if let Some(dg) = min_generators {
        let first_positive = values
            .iter()
            .position(|v| v.is_positive())
            .map(|k| k as i64)
            .unwrap_or(-1);
        out.push(Verdict::eq(
            "least k with P_G(k) > 0 = d(G)",
            first_positive,
            dg as i64,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::structure::{classify_maximals, profile};

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn group(n: usize, gens: &[&[&[u32]]]) -> GroupHandle {
        let gens: Vec<Permutation> = gens.iter().map(|c| perm(n, c)).collect();
        GroupHandle::build(&gens, n).unwrap()
    }

    fn lattice(g: &GroupHandle) -> SubgroupLattice {
        SubgroupLattice::enumerate(g, 1000).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn c2() -> GroupHandle {
        group(2, &[&[&[0, 1]]])
    }
    fn s3() -> GroupHandle {
        group(3, &[&[&[0, 1]], &[&[0, 1, 2]]])
    }
    fn v4() -> GroupHandle {
        group(4, &[&[&[0, 1]], &[&[2, 3]]])
    }
    fn s4() -> GroupHandle {
        group(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]])
    }
    fn a5() -> GroupHandle {
        group(5, &[&[&[0, 1, 2]], &[&[0, 1, 2, 3, 4]]])
    }

    fn poly_of(g: &GroupHandle) -> GenPolynomial {
        let l = lattice(g);
        hall_polynomial(&l, &l.moebius())
    }

    #[test]
    fn polynomials() {
        let p = poly_of(&c2());
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.terms[1], GenTerm { coefficient: (-1).into(), ratio: q(1, 2) });
        for k in 0..6 {
            assert_eq!(p.eval(k), BigRational::one() - pow(&q(1, 2), k));
        }

        let p = poly_of(&s3());
        for k in 0..6 {
            let expect = BigRational::one() - pow(&q(1, 2), k) - rat(3) * pow(&q(1, 3), k)
                + rat(3) * pow(&q(1, 6), k);
            assert_eq!(p.eval(k), expect);
        }
        assert_eq!(p.eval(2), q(1, 2));

        let p = poly_of(&v4());
        for k in 0..6 {
            assert_eq!(
                p.eval(k),
                BigRational::one() - rat(3) * pow(&q(1, 2), k) + rat(2) * pow(&q(1, 4), k)
            );
        }
    }

    #[test]
    fn brute_force_matches() {
        let t = ElementTable::new(&s3(), 10).unwrap();
        assert_eq!(p_gen_bruteforce(&t, 2).unwrap(), q(1, 2));
        assert_eq!(p_gen_bruteforce(&t, 0).unwrap(), BigRational::zero());
        let c3 = ElementTable::new(&group(3, &[&[&[0, 1, 2]]]), 10).unwrap();
        assert_eq!(p_gen_bruteforce(&c3, 1).unwrap(), q(2, 3));
        let s5 = ElementTable::new(&group(5, &[&[&[0, 1]], &[&[0, 1, 2, 3, 4]]]), 200).unwrap();
        assert!(matches!(p_gen_bruteforce(&s5, 4), Err(ProbGenError::BruteForceLimit(_))));
        for g in [c2(), s3(), v4(), s4()] {
            let t = ElementTable::new(&g, 100).unwrap();
            let p = poly_of(&g);
            for k in 0..=3 {
                if (t.order() as u128).pow(k) <= 20_000 {
                    assert_eq!(p.eval(k), p_gen_bruteforce(&t, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn exact_expectations() {
        let e = |g: &GroupHandle| {
            let l = lattice(g);
            expected_exact(&l, &l.moebius()).unwrap().value
        };
        assert_eq!(e(&c2()), rat(2));
        assert_eq!(e(&s3()), q(29, 10));
        assert_eq!(e(&v4()), q(10, 3));
        for g in [c2(), s3(), v4(), s4(), a5()] {
            assert_eq!(e(&g), poly_of(&g).tail_sum(0));
        }
        let l = lattice(&GroupHandle::trivial(1));
        assert_eq!(expected_exact(&l, &l.moebius()), Err(ProbGenError::TrivialGroup));
    }

    #[test]
    fn truncated_series() {
        let l = lattice(&c2());
        let m = l.moebius();
        let (v, tail) = expected_series_truncated(&l, &m, 3);
        assert_eq!(v, q(15, 8));
        assert_eq!(tail, q(1, 8));
        let l = lattice(&s3());
        let m = l.moebius();
        assert_eq!(expected_series_truncated(&l, &m, 0).0, rat(1));
        let e = expected_exact(&l, &m).unwrap().value;
        let mut prev = BigRational::zero();
        for k in [0, 1, 2, 5, 20] {
            let (v, tail) = expected_series_truncated(&l, &m, k);
            assert!(v >= prev);
            assert!(v <= e && e <= &v + &tail);
            prev = v;
        }
    }

    #[test]
    fn tau_samples() {
        let mut rng = RandomStream::new(3, 0);
        let g = s4();
        for _ in 0..200 {
            assert!(tau_sample(&g, &mut rng).unwrap() >= 2);
        }
        assert_eq!(
            tau_sample(&GroupHandle::trivial(2), &mut rng),
            Err(ProbGenError::TrivialGroup)
        );
        let c2 = c2();
        let ones = (0..20_000)
            .filter(|_| tau_sample(&c2, &mut rng).unwrap() == 1)
            .count();
        assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.015);
    }

    #[test]
    fn montecarlo_is_worker_independent() {
        let g = s3();
        let a = montecarlo_e(&g, 2000, 9, 1, 100).unwrap();
        let b = montecarlo_e(&g, 2000, 9, 3, 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.histogram.values().sum::<u64>() + a.overflow, 2000);
        let weighted: u64 = a.histogram.iter().map(|(k, v)| k * v).sum();
        assert!((weighted as f64 / 2000.0 - a.mean).abs() < 1e-12);
        let one = montecarlo_e(&g, 1, 9, 4, 100).unwrap();
        assert_eq!(one.stderr, None);
        assert_eq!(montecarlo_e(&g, 0, 9, 1, 100), Err(ProbGenError::NoTrials));
    }

    #[test]
    fn montecarlo_agrees_with_exact() {
        for (g, exact) in [(c2(), 2.0), (s3(), 2.9)] {
            let est = montecarlo_e(&g, 100_000, 17, 2, 100).unwrap();
            let se = est.stderr.unwrap();
            assert!((est.mean - exact).abs() <= 3.0 * se, "{} vs {exact} (se {se})", est.mean);
        }
    }

    #[test]
    fn mn_inequality() {
        let g = c2();
        let l = lattice(&g);
        let t = classify_maximals(&l).unwrap();
        let p = poly_of(&g);
        let v = mn_inequality_check(&t, &p, 6);
        assert!(v.iter().all(|x| x.passed));
        assert_eq!(v[1].lhs, "1/2");
        assert_eq!(v[1].rhs, "1/2");
        for g in [s3(), s4(), a5()] {
            let l = lattice(&g);
            let t = classify_maximals(&l).unwrap();
            assert!(mn_inequality_check(&t, &poly_of(&g), 10).iter().all(|x| x.passed));
        }
    }

    #[test]
    fn mu_values() {
        let l = lattice(&c2());
        let t = classify_maximals(&l).unwrap();
        assert_eq!(mu_p(&t, 1, 2), q(1, 4));
        assert_eq!(mu_p(&t, 1, 3), BigRational::zero());

        let l = lattice(&s4());
        let t = classify_maximals(&l).unwrap();
        assert_eq!(mu_p(&t, 2, 3), q(1, 18));
        assert_eq!(mu_star(&t, 2), BigRational::zero());

        let l = lattice(&a5());
        let t = classify_maximals(&l).unwrap();
        let tail = |n: i64, m: i64| rat(m) * pow(&q(1, n), 4) / (BigRational::one() - q(1, n));
        let expect = tail(5, 5) + tail(6, 6) + tail(10, 10);
        assert_eq!(mu_star(&t, 2), expect);
        assert!(mu_star(&t, 2) <= q(1, 4));
    }

    #[test]
    fn bound_chains_hold() {
        let eta_upper = q(2875066, 1_000_000);
        for g in [c2(), s3(), v4(), s4(), a5()] {
            let l = lattice(&g);
            let pr = profile(&l).unwrap();
            let t = classify_maximals(&l).unwrap();
            let p = hall_polynomial(&l, &l.moebius());
            let order = l.order() as u64;
            let v = mu_bound_checks(order, &pr, &t, &p);
            assert!(v.iter().all(|x| x.passed), "{v:?}");
            let th = theorem_check(order, &pr, &t, &p, &eta_upper, Some(g.degree()));
            assert!(th.verdicts.iter().all(|x| x.passed), "{:?}", th.verdicts);
            let dg = crate::structure::min_generators(&g, 200).unwrap();
            assert!(probability_shape_checks(&p, pr.d + 10, Some(dg)).iter().all(|x| x.passed));
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&q(29, 10), 3), "2.900");
        assert_eq!(decimal(&q(10, 3), 4), "3.3333");
        assert_eq!(decimal(&q(2, 3), 2), "0.67");
        assert!((ratio_to_f64(&q(10, 3)) - 3.333333333333333).abs() < 1e-12);
    }
}
