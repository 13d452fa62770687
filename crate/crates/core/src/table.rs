//! Cayley tables and element bitsets for groups small enough to enumerate.

use std::collections::HashMap;

use crate::perm::{GroupHandle, PermError, Permutation};

/// Fixed-width bitset over element ids.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.words[(id / 64) as usize] >> (id % 64) & 1 == 1
    }

    /// Returns whether `id` was newly inserted.
    #[inline]
    pub fn insert(&mut self, id: u32) -> bool {
        let w = &mut self.words[(id / 64) as usize];
        let bit = 1u64 << (id % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + tz)
            })
        })
    }

    pub fn to_ids(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

/// All elements of a group in canonical (ascending image) order together with
/// the multiplication and inversion tables over element ids.
///
/// The identity is always id 0.
#[derive(Clone, Debug)]
pub struct ElementTable {
    group: GroupHandle,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl ElementTable {
    pub fn new(group: &GroupHandle, cap: usize) -> Result<Self, PermError> {
        let elements = group.elements(cap)?;
        let n = elements.len();
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&a.compose(b)];
            }
        }
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        Ok(ElementTable {
            group: group.clone(),
            elements,
            index,
            mul,
            inv,
        })
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// `g⁻¹ x g`.
    #[inline]
    pub fn conjugate(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x⁻¹ y⁻¹ x y`.
    #[inline]
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element(&self, id: u32) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn id_of(&self, p: &Permutation) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Ids of the ambient group's generators, skipping the identity.
    pub fn generator_ids(&self) -> Vec<u32> {
        self.group
            .generators()
            .iter()
            .map(|g| self.index[g])
            .filter(|&g| g != 0)
            .collect()
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn trivial_set(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.order());
        s.insert(0);
        s
    }

    /// `⟨base, extra⟩` where `base` is a subgroup generated by `base_gens`.
    ///
    /// The result is grown as a union of right cosets `H·r` of `H = base`,
    /// closed under right multiplication by every generator.
    pub fn join_with(&self, base: &ElementSet, base_gens: &[u32], extra: &[u32]) -> ElementSet {
        let base_ids = base.to_ids();
        let gens: Vec<u32> = base_gens.iter().chain(extra).copied().collect();
        let mut set = base.clone();
        let mut reps = vec![0u32];
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            for &g in &gens {
                let y = self.mul(r, g);
                if !set.contains(y) {
                    for &h in &base_ids {
                        set.insert(self.mul(h, y));
                    }
                    reps.push(y);
                }
            }
            i += 1;
        }
        set
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> ElementSet {
        self.join_with(&self.trivial_set(), &[], gens)
    }
}
