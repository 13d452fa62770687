//! Subgroup lattices of small groups.
//!
//! Subgroups are stored as bitsets over the element ids of an
//! [`ElementTable`]. Enumeration seeds every cyclic subgroup and then closes
//! the collection under joins with cyclic subgroups of prime-power order,
//! which generate every subgroup. Nodes are sorted by `(order, element ids)`
//! so node ids are reproducible; node 0 is the trivial subgroup and the last
//! node is the whole group.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use thiserror::Error;

use crate::perm::{GroupHandle, PermError, Permutation};
use crate::table::{ElementSet, ElementTable};

/// Default order cap for exact (lattice) mode.
pub const DEFAULT_EXACT_CAP: usize = 500;
/// Caps above this are refused; the element tables would not fit comfortably.
pub const HARD_EXACT_CAP: usize = 10_000;

pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("group order {order} exceeds the exact-mode cap {cap}; use Monte Carlo mode")]
    CapExceeded { order: BigUint, cap: usize },
    #[error("operation needs a nontrivial group")]
    TrivialGroup,
    #[error("subgroup node {0} is not normal")]
    NotNormal(NodeId),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub elements: ElementSet,
    pub order: usize,
    pub normal: bool,
    /// Element ids generating this subgroup.
    pub generators: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    table: ElementTable,
    nodes: Vec<Subgroup>,
    lookup: HashMap<ElementSet, NodeId>,
}

/// `μ(H, G)` for every node `H`, relative to the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusTable {
    pub values: Vec<i64>,
}

impl MoebiusTable {
    pub fn get(&self, node: NodeId) -> i64 {
        self.values[node]
    }
}

/// `G/N` as a permutation group on the right cosets of `N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupHandle,
    /// Coset index of every ambient element id.
    pub coset_of: Vec<u32>,
    /// A representative element id per coset.
    pub representatives: Vec<u32>,
}

impl Quotient {
    /// Image of the ambient element `x` under the natural projection.
    pub fn project(&self, table: &ElementTable, x: u32) -> Permutation {
        let images = self
            .representatives
            .iter()
            .map(|&r| self.coset_of[table.mul(r, x) as usize])
            .collect();
        Permutation::from_images(images).expect("coset action is a permutation")
    }
}

impl SubgroupLattice {
    pub fn enumerate(group: &GroupHandle, cap: usize) -> Result<Self, LatticeError> {
        let cap = cap.min(HARD_EXACT_CAP);
        let table = ElementTable::new(group, cap).map_err(|e| match e {
            PermError::CapExceeded { order, cap } => LatticeError::CapExceeded { order, cap },
            other => LatticeError::Perm(other),
        })?;
        Ok(Self::from_table(table))
    }

    pub fn from_table(table: ElementTable) -> Self {
        let n = table.order();
        let mut b = Builder::default();
        b.insert(table.trivial_set(), Vec::new());
        let mut prime_power_gens = Vec::new();
        for x in 1..n as u32 {
            let before = b.nodes.len();
            let id = b.insert(table.closure(&[x]), vec![x]);
            if b.nodes.len() > before && is_prime_power(b.nodes[id].order) {
                prime_power_gens.push(x);
            }
        }

        while let Some(id) = b.queue.pop_front() {
            for &c in &prime_power_gens {
                let node = &b.nodes[id];
                if node.elements.contains(c) {
                    continue;
                }
                let set = table.join_with(&node.elements, &node.generators, &[c]);
                if b.lookup.contains_key(&set) {
                    continue;
                }
                let mut gens = node.generators.clone();
                gens.push(c);
                b.insert(set, gens);
            }
        }
        let nodes = b.nodes;

        // Canonical order: by order, then by sorted element ids.
        let mut keyed: Vec<(usize, Vec<u32>, Subgroup)> = nodes
            .into_iter()
            .map(|s| (s.order, s.elements.to_ids(), s))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut nodes: Vec<Subgroup> = keyed.into_iter().map(|(_, _, s)| s).collect();
        let gens = table.generator_ids();
        for node in &mut nodes {
            node.normal = gens.iter().all(|&g| {
                node.elements
                    .iter()
                    .all(|h| node.elements.contains(table.conjugate(h, g)))
            });
        }
        let lookup = nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elements.clone(), i))
            .collect();
        SubgroupLattice {
            table,
            nodes,
            lookup,
        }
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn ambient(&self) -> &GroupHandle {
        self.table.group()
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Subgroup] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Subgroup {
        &self.nodes[id]
    }

    pub fn top(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn bottom(&self) -> NodeId {
        0
    }

    pub fn node_of(&self, set: &ElementSet) -> Option<NodeId> {
        self.lookup.get(set).copied()
    }

    /// `h ≤ k`.
    pub fn is_subgroup(&self, h: NodeId, k: NodeId) -> bool {
        let (a, b) = (&self.nodes[h], &self.nodes[k]);
        a.order <= b.order && b.order % a.order == 0 && a.elements.is_subset(&b.elements)
    }

    /// `h < k`.
    pub fn is_proper_subgroup(&self, h: NodeId, k: NodeId) -> bool {
        h != k && self.is_subgroup(h, k)
    }

    pub fn join(&self, h: NodeId, k: NodeId) -> NodeId {
        let a = &self.nodes[h];
        let set = self
            .table
            .join_with(&a.elements, &a.generators, &self.nodes[k].generators);
        self.lookup[&set]
    }

    pub fn intersect(&self, h: NodeId, k: NodeId) -> NodeId {
        self.lookup[&self.nodes[h].elements.intersection(&self.nodes[k].elements)]
    }

    /// `μ(H, G)` by top-down recursion `μ(H) = −Σ_{H<K≤G} μ(K)`.
    pub fn moebius(&self) -> MoebiusTable {
        let n = self.nodes.len();
        let mut values = vec![0i64; n];
        values[n - 1] = 1;
        for h in (0..n - 1).rev() {
            let sum: i64 = (h + 1..n)
                .filter(|&k| values[k] != 0 && self.is_proper_subgroup(h, k))
                .map(|k| values[k])
                .sum();
            values[h] = -sum;
        }
        MoebiusTable { values }
    }

    /// Node of `g⁻¹ H g`.
    pub fn conjugate(&self, h: NodeId, g: u32) -> NodeId {
        let mut set = ElementSet::empty(self.order());
        for x in self.nodes[h].elements.iter() {
            set.insert(self.table.conjugate(x, g));
        }
        self.lookup[&set]
    }

    /// Largest normal subgroup contained in `h`: the intersection of its conjugates.
    pub fn core(&self, h: NodeId) -> NodeId {
        if self.nodes[h].normal {
            return h;
        }
        let gens = self.table.generator_ids();
        let mut orbit = vec![h];
        let mut i = 0;
        while i < orbit.len() {
            for &g in &gens {
                let c = self.conjugate(orbit[i], g);
                if !orbit.contains(&c) {
                    orbit.push(c);
                }
            }
            i += 1;
        }
        let mut set = self.nodes[h].elements.clone();
        for &c in &orbit {
            set = set.intersection(&self.nodes[c].elements);
        }
        self.lookup[&set]
    }

    /// `G/N` acting on right cosets of `N`.
    pub fn quotient_group(&self, n: NodeId) -> Result<Quotient, LatticeError> {
        let node = &self.nodes[n];
        if !node.normal {
            return Err(LatticeError::NotNormal(n));
        }
        let members = node.elements.to_ids();
        let mut coset_of = vec![u32::MAX; self.order()];
        let mut representatives = Vec::new();
        for x in 0..self.order() as u32 {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = representatives.len() as u32;
            representatives.push(x);
            for &m in &members {
                coset_of[self.table.mul(m, x) as usize] = c;
            }
        }
        let mut q = Quotient {
            group: GroupHandle::trivial(representatives.len()),
            coset_of,
            representatives,
        };
        let gens: Vec<Permutation> = self
            .table
            .generator_ids()
            .into_iter()
            .map(|g| q.project(&self.table, g))
            .collect();
        q.group = GroupHandle::build(&gens, q.representatives.len())?;
        Ok(q)
    }

    /// Normal subgroups `K > n` with no normal subgroup strictly between.
    ///
    /// These correspond to the minimal normal subgroups of `G/n`.
    pub fn minimal_normal_over(&self, n: NodeId) -> Vec<NodeId> {
        let above: Vec<NodeId> = (0..self.nodes.len())
            .filter(|&k| self.nodes[k].normal && self.is_proper_subgroup(n, k))
            .collect();
        above
            .iter()
            .copied()
            .filter(|&k| !above.iter().any(|&l| self.is_proper_subgroup(l, k)))
            .collect()
    }

    pub fn minimal_normal_subgroups(&self) -> Result<Vec<NodeId>, LatticeError> {
        if self.order() == 1 {
            return Err(LatticeError::TrivialGroup);
        }
        Ok(self.minimal_normal_over(self.bottom()))
    }

    /// Join of all minimal normal subgroups.
    pub fn socle(&self) -> Result<NodeId, LatticeError> {
        let mins = self.minimal_normal_subgroups()?;
        Ok(mins
            .into_iter()
            .fold(self.bottom(), |acc, m| self.join(acc, m)))
    }

    /// Maximal proper subgroups of the node `h`.
    pub fn maximal_subgroups_of(&self, h: NodeId) -> Vec<NodeId> {
        let below: Vec<NodeId> = (0..self.nodes.len())
            .filter(|&k| self.is_proper_subgroup(k, h))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&k| !below.iter().any(|&l| self.is_proper_subgroup(k, l)))
            .collect()
    }

    pub fn maximal_subgroups(&self) -> Result<Vec<NodeId>, LatticeError> {
        if self.order() == 1 {
            return Err(LatticeError::TrivialGroup);
        }
        Ok(self.maximal_subgroups_of(self.top()))
    }

    pub fn nodes_of_order(&self, order: usize) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&k| self.nodes[k].order == order)
    }

    /// Whether `upper/lower` is abelian, for `lower` normal in `upper`.
    pub fn is_abelian_section(&self, upper: NodeId, lower: NodeId) -> bool {
        let gens = &self.nodes[upper].generators;
        let low = &self.nodes[lower].elements;
        gens.iter().all(|&x| {
            gens.iter()
                .all(|&y| low.contains(self.table.commutator(x, y)))
        })
    }
}

#[derive(Default)]
struct Builder {
    nodes: Vec<Subgroup>,
    lookup: HashMap<ElementSet, NodeId>,
    queue: VecDeque<NodeId>,
}

impl Builder {
    fn insert(&mut self, set: ElementSet, generators: Vec<u32>) -> NodeId {
        if let Some(&id) = self.lookup.get(&set) {
            return id;
        }
        let id = self.nodes.len();
        self.lookup.insert(set.clone(), id);
        self.nodes.push(Subgroup {
            order: set.len(),
            elements: set,
            normal: false,
            generators,
        });
        self.queue.push_back(id);
        id
    }
}

pub fn is_prime_power(n: usize) -> bool {
    prime_power(n as u64).is_some()
}

/// `(p, t)` with `n = p^t`, `t ≥ 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut t = 0;
    while m.is_multiple_of(p) {
        m /= p;
        t += 1;
    }
    (m == 1).then_some((p, t))
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// Prime factorisation as ascending `(p, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        let mut t = 0;
        while n.is_multiple_of(p) {
            n /= p;
            t += 1;
        }
        out.push((p, t));
    }
    out
}
