//! Sylow ranks, chief series, complemented chief factors and the type A/B
//! classification of maximal subgroups.
//!
//! Everything here works inside the ambient lattice through the
//! correspondence theorem: normal subgroups of `G/N` are the normal nodes
//! above `N`, and subgroups of `G/K` are the nodes above `K`. The
//! `*_via_quotient` functions redo the same decisions on an explicit
//! quotient group and its own lattice; tests use them as a cross-check.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{factorize, prime_power, LatticeError, NodeId, SubgroupLattice};
use crate::perm::{GroupHandle, PermError};
use crate::table::{ElementSet, ElementTable};
use crate::verdict::Verdict;

/// Order cap for the exhaustive minimal-generator search.
pub const DEFAULT_MIN_GEN_CAP: usize = 2000;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("operation needs a nontrivial group")]
    TrivialGroup,
    #[error("nodes {lower} < {upper} do not form a chief factor")]
    NotChiefFactor { lower: NodeId, upper: NodeId },
    #[error("group order {order} exceeds the search cap {cap}")]
    CapExceeded { order: BigUint, cap: usize },
    #[error("chief series are inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl From<PermError> for StructureError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::CapExceeded { order, cap } => StructureError::CapExceeded { order, cap },
            other => StructureError::Lattice(LatticeError::Perm(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenerationProfile {
    /// Minimal generator count of a Sylow `p`-subgroup, for `p` dividing `|G|`.
    pub d_p: BTreeMap<u64, u32>,
    /// Complemented chief factors of order `p^t`, keyed by `(p, t)`.
    pub alpha: BTreeMap<(u64, u32), u32>,
    pub alpha_p: BTreeMap<u64, u32>,
    /// Nonabelian chief factors.
    pub beta: u32,
    /// `max_p d_p`.
    pub d: u32,
}

impl GenerationProfile {
    pub fn d_p(&self, p: u64) -> u32 {
        self.d_p.get(&p).copied().unwrap_or(0)
    }

    pub fn alpha_pt(&self, p: u64, t: u32) -> u32 {
        self.alpha.get(&(p, t)).copied().unwrap_or(0)
    }

    pub fn alpha_p(&self, p: u64) -> u32 {
        self.alpha_p.get(&p).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiefFactor {
    pub lower: NodeId,
    pub upper: NodeId,
    pub order: u64,
    pub abelian: bool,
    /// `(p, t)` with `order = p^t`; present iff abelian.
    pub prime_power: Option<(u64, u32)>,
    pub complemented: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiefSeries {
    pub factors: Vec<ChiefFactor>,
}

impl ChiefSeries {
    /// The series-independent data: complemented abelian factor types and
    /// the number of nonabelian factors.
    pub fn signature(&self) -> (BTreeMap<(u64, u32), u32>, u32) {
        let mut alpha = BTreeMap::new();
        let mut beta = 0;
        for f in &self.factors {
            match f.prime_power {
                Some(pt) if f.abelian => {
                    if f.complemented {
                        *alpha.entry(pt).or_insert(0) += 1;
                    }
                }
                _ => beta += 1,
            }
        }
        (alpha, beta)
    }
}

/// Which minimal normal subgroup to take when several are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Least order, then least element-id set.
    Least,
    /// Greatest order, then greatest element-id set.
    Greatest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MaximalRow {
    pub m: u64,
    pub type_a: u64,
    pub type_b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MaximalTable {
    /// Keyed by index `[G:M]`.
    pub rows: BTreeMap<u64, MaximalRow>,
}

impl MaximalTable {
    pub fn row(&self, index: u64) -> MaximalRow {
        self.rows.get(&index).copied().unwrap_or_default()
    }

    pub fn total(&self) -> u64 {
        self.rows.values().map(|r| r.m).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaximalType {
    A,
    B,
}

/// A Sylow `p`-subgroup (the first in node order), or the trivial node when
/// `p ∤ |G|`.
pub fn sylow_subgroup(lattice: &SubgroupLattice, p: u64) -> NodeId {
    let order = lattice.order() as u64;
    let mut pa = 1;
    while order.is_multiple_of(pa * p) {
        pa *= p;
    }
    lattice
        .nodes_of_order(pa as usize)
        .next()
        .expect("Sylow subgroups exist")
}

/// Intersection of the maximal subgroups of the node `h`.
pub fn frattini(lattice: &SubgroupLattice, h: NodeId) -> NodeId {
    lattice
        .maximal_subgroups_of(h)
        .into_iter()
        .fold(h, |acc, m| lattice.intersect(acc, m))
}

/// `d_p(G) = log_p [P : Φ(P)]` for a Sylow `p`-subgroup `P`.
pub fn d_p(lattice: &SubgroupLattice, p: u64) -> u32 {
    let sylow = sylow_subgroup(lattice, p);
    let order = lattice.node(sylow).order as u64;
    if order == 1 {
        return 0;
    }
    let phi = lattice.node(frattini(lattice, sylow)).order as u64;
    let mut quotient = order / phi;
    let mut d = 0;
    while quotient > 1 {
        quotient /= p;
        d += 1;
    }
    d
}

pub fn chief_series(lattice: &SubgroupLattice) -> Result<ChiefSeries, StructureError> {
    chief_series_with(lattice, TieBreak::Least)
}

pub fn chief_series_with(
    lattice: &SubgroupLattice,
    tie: TieBreak,
) -> Result<ChiefSeries, StructureError> {
    if lattice.order() == 1 {
        return Err(StructureError::TrivialGroup);
    }
    let mut factors = Vec::new();
    let mut current = lattice.bottom();
    while current != lattice.top() {
        let candidates = lattice.minimal_normal_over(current);
        // Node ids are sorted by (order, element ids).
        let next = match tie {
            TieBreak::Least => candidates.iter().min(),
            TieBreak::Greatest => candidates.iter().max(),
        }
        .copied()
        .expect("a proper normal subgroup has a minimal normal subgroup above it");
        factors.push(chief_factor(lattice, current, next)?);
        current = next;
    }
    Ok(ChiefSeries { factors })
}

fn chief_factor(
    lattice: &SubgroupLattice,
    lower: NodeId,
    upper: NodeId,
) -> Result<ChiefFactor, StructureError> {
    let order = (lattice.node(upper).order / lattice.node(lower).order) as u64;
    let abelian = lattice.is_abelian_section(upper, lower);
    let prime_power = if abelian { prime_power(order) } else { None };
    if abelian && prime_power.is_none() {
        return Err(StructureError::Inconsistent(format!(
            "abelian chief factor of non-prime-power order {order}"
        )));
    }
    Ok(ChiefFactor {
        lower,
        upper,
        order,
        abelian,
        prime_power,
        complemented: is_complemented(lattice, lower, upper)?,
    })
}

fn check_chief_factor(
    lattice: &SubgroupLattice,
    lower: NodeId,
    upper: NodeId,
) -> Result<(), StructureError> {
    let ok = lattice.node(lower).normal
        && lattice.node(upper).normal
        && lattice.minimal_normal_over(lower).contains(&upper);
    if ok {
        Ok(())
    } else {
        Err(StructureError::NotChiefFactor { lower, upper })
    }
}

/// Whether the chief factor `upper/lower` has a complement in `G/lower`:
/// some `C ≥ lower` with `C ∩ upper = lower` and `C·upper = G`.
pub fn is_complemented(
    lattice: &SubgroupLattice,
    lower: NodeId,
    upper: NodeId,
) -> Result<bool, StructureError> {
    check_chief_factor(lattice, lower, upper)?;
    let k = lattice.node(lower);
    let h = lattice.node(upper);
    let target = lattice.order() * k.order / h.order;
    Ok(lattice.nodes_of_order(target).any(|c| {
        let c = lattice.node(c);
        k.elements.is_subset(&c.elements) && c.elements.intersection(&h.elements) == k.elements
    }))
}

/// [`is_complemented`] decided in the explicit quotient `G/lower`.
pub fn is_complemented_via_quotient(
    lattice: &SubgroupLattice,
    lower: NodeId,
    upper: NodeId,
    cap: usize,
) -> Result<bool, StructureError> {
    check_chief_factor(lattice, lower, upper)?;
    let q = lattice.quotient_group(lower)?;
    let ql = SubgroupLattice::enumerate(&q.group, cap)?;
    let image = image_node(lattice, &q, &ql, upper);
    let target = ql.order() / ql.node(image).order;
    let found = ql
        .nodes_of_order(target)
        .any(|c| ql.intersect(c, image) == ql.bottom());
    Ok(found)
}

fn image_node(
    lattice: &SubgroupLattice,
    q: &crate::lattice::Quotient,
    ql: &SubgroupLattice,
    node: NodeId,
) -> NodeId {
    let ids: Vec<u32> = lattice
        .node(node)
        .generators
        .iter()
        .map(|&x| {
            ql.table()
                .id_of(&q.project(lattice.table(), x))
                .expect("projection lands in the quotient")
        })
        .collect();
    ql.node_of(&ql.table().closure(&ids)).expect("image is a subgroup")
}

pub fn profile(lattice: &SubgroupLattice) -> Result<GenerationProfile, StructureError> {
    let series = chief_series(lattice)?;
    let (alpha, beta) = series.signature();
    let mut alpha_p = BTreeMap::new();
    for (&(p, _), &count) in &alpha {
        *alpha_p.entry(p).or_insert(0) += count;
    }
    let d_p: BTreeMap<u64, u32> = factorize(lattice.order() as u64)
        .into_iter()
        .map(|(p, _)| (p, d_p(lattice, p)))
        .collect();
    let d = d_p.values().copied().max().unwrap_or(0);
    Ok(GenerationProfile {
        d_p,
        alpha,
        alpha_p,
        beta,
        d,
    })
}

/// Type of the maximal subgroup `m`: A when `soc(G/core_G(M))` is abelian.
///
/// The socle of `G/N` is the product of its minimal normal subgroups, so it
/// is abelian exactly when each minimal normal subgroup above `N` is abelian
/// modulo `N`.
pub fn maximal_type(lattice: &SubgroupLattice, m: NodeId) -> MaximalType {
    let core = lattice.core(m);
    let abelian = lattice
        .minimal_normal_over(core)
        .into_iter()
        .all(|k| lattice.is_abelian_section(k, core));
    if abelian {
        MaximalType::A
    } else {
        MaximalType::B
    }
}

/// [`maximal_type`] computed from the socle of an explicit quotient group.
pub fn maximal_type_via_quotient(
    lattice: &SubgroupLattice,
    m: NodeId,
    cap: usize,
) -> Result<MaximalType, StructureError> {
    let core = lattice.core(m);
    let q = lattice.quotient_group(core)?;
    let ql = SubgroupLattice::enumerate(&q.group, cap)?;
    let soc = ql.socle()?;
    Ok(if ql.is_abelian_section(soc, ql.bottom()) {
        MaximalType::A
    } else {
        MaximalType::B
    })
}

pub fn classify_maximals(lattice: &SubgroupLattice) -> Result<MaximalTable, StructureError> {
    let maximals = lattice.maximal_subgroups()?;
    let mut table = MaximalTable::default();
    for m in maximals {
        let index = (lattice.order() / lattice.node(m).order) as u64;
        let row = table.rows.entry(index).or_default();
        row.m += 1;
        match maximal_type(lattice, m) {
            MaximalType::A => row.type_a += 1,
            MaximalType::B => row.type_b += 1,
        }
    }
    Ok(table)
}

/// Least `k` such that some `k` elements generate `G`, for `|G| ≤ cap`.
pub fn min_generators(group: &GroupHandle, cap: usize) -> Result<u32, StructureError> {
    let table = ElementTable::new(group, cap)?;
    Ok(min_generators_in(&table, &table.closure(&table.generator_ids())))
}

/// Least number of elements generating the subgroup `target` of the table.
///
/// Breadth-first over the distinct subgroups generated by `k` elements;
/// `⟨H, x⟩` only depends on the coset `Hx`, so one `x` per coset is tried.
pub fn min_generators_in(table: &ElementTable, target: &ElementSet) -> u32 {
    let n = target.len();
    if n == 1 {
        return 0;
    }
    let mut level: HashMap<ElementSet, Vec<u32>> = HashMap::new();
    level.insert(table.trivial_set(), Vec::new());
    let mut k = 0;
    loop {
        k += 1;
        let mut next: HashMap<ElementSet, Vec<u32>> = HashMap::new();
        let mut current: Vec<(ElementSet, Vec<u32>)> = level.into_iter().collect();
        current.sort_by_key(|(_, g)| g.clone());
        for (h, gens) in &current {
            let members = h.to_ids();
            let mut covered = h.clone();
            for x in target.iter() {
                if covered.contains(x) {
                    continue;
                }
                for &m in &members {
                    covered.insert(table.mul(m, x));
                }
                let joined = table.join_with(h, gens, &[x]);
                if joined.len() == n {
                    return k;
                }
                next.entry(joined).or_insert_with(|| {
                    let mut g = gens.clone();
                    g.push(x);
                    g
                });
            }
        }
        level = next;
    }
}

/// The `Lemma`-level structural checks for one group.
///
/// `degree` enables the degree-dependent Sylow rank bound `d_p ≤ ⌊n/p⌋`.
pub fn structural_checks(
    lattice: &SubgroupLattice,
    profile: &GenerationProfile,
    maximals: &MaximalTable,
    degree: Option<usize>,
) -> Vec<Verdict> {
    let mut out = Vec::new();
    for (&p, &dp) in &profile.d_p {
        out.push(Verdict::le_int(
            format!("alpha_p <= d_p (p={p})"),
            profile.alpha_p(p) as i64,
            dp as i64,
        ));
        if let Some(n) = degree {
            out.push(Verdict::le_int(
                format!("d_p <= floor(n/p) (p={p})"),
                dp as i64,
                (n as u64 / p) as i64,
            ));
        }
    }
    out.push(Verdict::le_int(
        "alpha_2 + beta <= d_2",
        (profile.alpha_p(2) + profile.beta) as i64,
        profile.d_p(2) as i64,
    ));
    if profile.beta != 0 {
        out.push(Verdict::le_int(
            "beta <= d_2 - 1",
            profile.beta as i64,
            profile.d_p(2) as i64 - 1,
        ));
    }
    // A nonabelian simple group has a noncyclic Sylow 2-subgroup.
    if profile.beta == 1 && is_simple(lattice) {
        out.push(Verdict::holds(
            "simple group has noncyclic Sylow 2-subgroup",
            profile.d_p(2) >= 2,
            format!("d_2 = {}", profile.d_p(2)),
        ));
    }
    let mut total = 0;
    for (&n, row) in &maximals.rows {
        total += row.m;
        out.push(Verdict::eq(
            format!("m_n = m_n^A + m_n^B (n={n})"),
            row.m,
            row.type_a + row.type_b,
        ));
        if n < 5 {
            out.push(Verdict::eq(format!("m_n^B = 0 for n < 5 (n={n})"), row.type_b, 0));
        }
        if row.type_b != 0 {
            out.push(Verdict::holds(
                format!("m_n^B != 0 implies beta != 0 (n={n})"),
                profile.beta != 0,
                format!("beta = {}", profile.beta),
            ));
            let beta = BigRational::from_integer(profile.beta.into());
            let bound = &beta * (&beta + BigRational::from_integer(1.into()))
                * BigRational::from_integer((n * n).into())
                / BigRational::from_integer(2.into());
            out.push(Verdict::le(
                format!("m_n^B <= beta(beta+1)n^2/2 (n={n})"),
                &BigRational::from_integer(row.type_b.into()),
                &bound,
            ));
        }
        if row.type_a != 0 {
            match prime_power(n) {
                Some((p, t)) => {
                    let a = profile.alpha_pt(p, t);
                    out.push(Verdict::holds(
                        format!("m_n^A != 0 implies alpha_(p,t) != 0 (n={p}^{t})"),
                        a != 0,
                        format!("alpha_({p},{t}) = {a}"),
                    ));
                    let bound = BigRational::new(
                        num_bigint::BigInt::from(n).pow(a + 1),
                        num_bigint::BigInt::from(p - 1),
                    );
                    out.push(Verdict::le(
                        format!("m_n^A <= n^(alpha_(p,t)+1)/(p-1) (n={p}^{t})"),
                        &BigRational::from_integer(row.type_a.into()),
                        &bound,
                    ));
                }
                None => out.push(Verdict::holds(
                    format!("type A maximal has prime-power index (n={n})"),
                    false,
                    format!("index {n}"),
                )),
            }
        }
    }
    out.push(Verdict::eq(
        "sum_n m_n = number of maximal subgroups",
        total,
        lattice
            .maximal_subgroups()
            .map(|m| m.len() as u64)
            .unwrap_or(0),
    ));
    out
}

/// Whether the ambient group is simple (nontrivial with only trivial normal subgroups).
pub fn is_simple(lattice: &SubgroupLattice) -> bool {
    lattice.order() > 1
        && lattice
            .nodes()
            .iter()
            .filter(|n| n.normal)
            .count()
            == 2
}
