//! Permutations and stabilizer chains.
//!
//! Permutations act on the right: `p.compose(q)` applies `p` first and then
//! `q`, so the image of `x` under `pq` is `q[p[x]]`. Points are 0-indexed.
//!
//! A [`GroupHandle`] carries a base and strong generating set built by the
//! deterministic Schreier–Sims algorithm. Every group element factors
//! uniquely as `u_m ⋯ u_1 u_0` with `u_i` taken from the transversal of
//! level `i`, which gives exact orders, sifting membership tests, full
//! enumeration and exactly uniform sampling.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use thiserror::Error;

use crate::rng::RandomStream;

/// Enumeration cap for [`GroupHandle::elements`] unless the caller asks for more.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image sequence is not a bijection on 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in a cycle")]
    RepeatedPoint(usize),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: BigUint, cap: usize },
}

/// A permutation of `{0, …, n-1}` stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijective(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint 0-indexed cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                let x = x as usize;
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if used[x] {
                    return Err(PermError::RepeatedPoint(x));
                }
                used[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Places `self` on the points `offset..offset+degree()` of a larger set.
    pub fn shifted(&self, offset: usize, total_degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..total_degree as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// 1-indexed cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    generators: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
    inverse_transversal: Vec<Option<Permutation>>,
    /// Schreier generators for orbit positions `< checked_orbit` and
    /// generator positions `< checked_gens` are known to sift.
    checked_orbit: usize,
    checked_gens: usize,
}

impl Level {
    fn new(base_point: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut inverse_transversal = vec![None; degree];
        transversal[base_point as usize] = Some(Permutation::identity(degree));
        inverse_transversal[base_point as usize] = Some(Permutation::identity(degree));
        Level {
            base_point,
            generators: Vec::new(),
            orbit: vec![base_point],
            transversal,
            inverse_transversal,
            checked_orbit: 0,
            checked_gens: 0,
        }
    }

    /// Adds a generator and extends the orbit, keeping existing representatives.
    fn add_generator(&mut self, g: Permutation) {
        self.generators.push(g);
        let mut i = 0;
        // Existing points only need the new generator; new points need all.
        let old_len = self.orbit.len();
        while i < self.orbit.len() {
            let b = self.orbit[i];
            let range = if i < old_len {
                self.generators.len() - 1..self.generators.len()
            } else {
                0..self.generators.len()
            };
            for gi in range {
                let c = self.generators[gi].image(b);
                if self.transversal[c as usize].is_none() {
                    let rep = self.transversal[b as usize]
                        .as_ref()
                        .expect("orbit point has a representative")
                        .compose(&self.generators[gi]);
                    self.inverse_transversal[c as usize] = Some(rep.inverse());
                    self.transversal[c as usize] = Some(rep);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group with a complete stabilizer chain.
///
/// Immutable once built; [`GroupHandle::extend`] returns a new handle.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl GroupHandle {
    pub fn trivial(degree: usize) -> Self {
        GroupHandle {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        }
    }

    /// Builds `⟨generators⟩` on `degree` points.
    pub fn build(generators: &[Permutation], degree: usize) -> Result<Self, PermError> {
        let mut g = GroupHandle::trivial(degree);
        for p in generators {
            g.add_generator(p)?;
        }
        Ok(g)
    }

    /// Returns `⟨G, p⟩`.
    pub fn extend(&self, p: &Permutation) -> Result<Self, PermError> {
        let mut g = self.clone();
        g.add_generator(p)?;
        Ok(g)
    }

    /// Adds `p` in place. Returns whether the group grew.
    pub fn add_generator(&mut self, p: &Permutation) -> Result<bool, PermError> {
        self.check_degree(p)?;
        // Recorded even when redundant so the generator list matches the input.
        self.generators.push(p.clone());
        let (residue, level) = self.strip(p.clone(), 0);
        if residue.is_identity() {
            return Ok(false);
        }
        self.insert_strong_generator(residue, 0, level);
        self.complete(level);
        self.order = self
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        Ok(true)
    }

    fn check_degree(&self, p: &Permutation) -> Result<(), PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(())
    }

    /// Sifts `g` from level `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it ran through the whole chain).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.image(level.base_point);
            match &level.inverse_transversal[b as usize] {
                Some(u_inv) => g = g.compose(u_inv),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    /// Adds `h` (which fixes the base points before `to`) to levels `from..=to`.
    fn insert_strong_generator(&mut self, h: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let point = h
                .smallest_moved_point()
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(point, self.degree));
        }
        for level in &mut self.levels[from..=to] {
            level.add_generator(h.clone());
        }
    }

    /// Schreier–Sims completion, assuming levels deeper than `start` are complete.
    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        'outer: while i >= 0 {
            let lvl = i as usize;
            let orbit_len = self.levels[lvl].orbit.len();
            let gens_len = self.levels[lvl].generators.len();
            let (co, cg) = (
                self.levels[lvl].checked_orbit,
                self.levels[lvl].checked_gens,
            );
            for bi in 0..orbit_len {
                for si in 0..gens_len {
                    if bi < co && si < cg {
                        continue;
                    }
                    let level = &self.levels[lvl];
                    let b = level.orbit[bi];
                    let s = &level.generators[si];
                    let c = s.image(b);
                    let u_b = level.transversal[b as usize].as_ref().unwrap();
                    let u_c_inv = level.inverse_transversal[c as usize].as_ref().unwrap();
                    let schreier = u_b.compose(s).compose(u_c_inv);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(schreier, lvl + 1);
                    if !h.is_identity() {
                        self.insert_strong_generator(h, lvl + 1, j);
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            self.levels[lvl].checked_orbit = orbit_len;
            self.levels[lvl].checked_gens = gens_len;
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Fundamental orbit sizes, one per base point.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Orbit points of each level in discovery order.
    pub fn fundamental_orbits(&self) -> Vec<Vec<u32>> {
        self.levels.iter().map(|l| l.orbit.clone()).collect()
    }

    /// Transversal representative taking base point `level` to `point`.
    pub fn transversal_rep(&self, level: usize, point: u32) -> Option<&Permutation> {
        self.levels
            .get(level)
            .and_then(|l| l.transversal[point as usize].as_ref())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        self.check_degree(p)?;
        Ok(self.strip(p.clone(), 0).0.is_identity())
    }

    /// An exactly uniform random element: one uniform transversal
    /// representative per level, multiplied deepest level first.
    pub fn uniform_element(&self, rng: &mut RandomStream) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.compose(level.transversal[b as usize].as_ref().unwrap());
        }
        g
    }

    /// The element with transversal choice `choice[i]` (an orbit position) at level `i`.
    pub fn element_from_choice(&self, choice: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for (level, &c) in self.levels.iter().zip(choice).rev() {
            let b = level.orbit[c];
            g = g.compose(level.transversal[b as usize].as_ref().unwrap());
        }
        g
    }

    /// All elements in ascending image-sequence order.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>, PermError> {
        match self.order_u64() {
            Some(n) if n as u128 <= cap as u128 => {}
            _ => {
                return Err(PermError::CapExceeded {
                    order: self.order.clone(),
                    cap,
                })
            }
        }
        let mut out = vec![Permutation::identity(self.degree)];
        // Right-multiply from the deepest level upward: each element is u_m ⋯ u_0.
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for &b in &level.orbit {
                    next.push(g.compose(level.transversal[b as usize].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    /// Closure of a generator set by breadth-first multiplication.
    fn closure(gens: &[Permutation], n: usize) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(n);
        let mut queue = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    fn s5() -> GroupHandle {
        GroupHandle::build(&[cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])], 5).unwrap()
    }

    fn a4() -> GroupHandle {
        GroupHandle::build(&[cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[0, 1], &[2, 3]])], 4).unwrap()
    }

    #[test]
    fn composition_acts_on_the_right() {
        let p = cyc(3, &[&[0, 1]]);
        let q = cyc(3, &[&[1, 2]]);
        // 0 -p-> 1 -q-> 2
        assert_eq!(p.compose(&q).image(0), 2);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn rejects_bad_images() {
        assert_eq!(
            Permutation::from_images(vec![0, 0, 1]),
            Err(PermError::NotBijective(3))
        );
        assert!(Permutation::from_images(vec![0, 3]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn display_is_one_indexed() {
        assert_eq!(cyc(4, &[&[0, 1], &[2, 3]]).to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn build_orders() {
        assert_eq!(s5().order(), &BigUint::from(120u32));
        let trivial = GroupHandle::build(&[], 3).unwrap();
        assert_eq!(trivial.order(), &BigUint::one());
        let a4 = a4();
        let oracle = closure(a4.generators(), 4);
        assert_eq!(oracle.len(), 12);
        assert_eq!(a4.order_u64(), Some(12));
    }

    #[test]
    fn build_rejects_degree_mismatch() {
        let err = GroupHandle::build(&[Permutation::identity(3)], 4).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn membership() {
        let a4 = a4();
        assert!(!a4.contains(&cyc(4, &[&[0, 1]])).unwrap());
        assert!(a4.contains(&Permutation::identity(4)).unwrap());
        let s5 = s5();
        let p = cyc(5, &[&[0, 4], &[1, 3]]);
        assert!(closure(s5.generators(), 5).contains(&p));
        assert!(s5.contains(&p).unwrap());
        assert!(s5.contains(&Permutation::identity(4)).is_err());
        let c5 = GroupHandle::build(&[cyc(5, &[&[0, 1, 2, 3, 4]])], 5).unwrap();
        assert!(!c5.contains(&cyc(5, &[&[0, 1]])).unwrap());
    }

    #[test]
    fn elements_and_extension() {
        let s4 = GroupHandle::build(&[cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])], 4).unwrap();
        let els = s4.elements(100).unwrap();
        assert_eq!(els.len(), 24);
        let set: HashSet<_> = els.iter().cloned().collect();
        for a in &els {
            for b in &els {
                assert!(set.contains(&a.compose(b)));
            }
        }
        assert!(s4.elements(10).is_err());

        let t = GroupHandle::trivial(2).extend(&cyc(2, &[&[0, 1]])).unwrap();
        assert_eq!(t.order_u64(), Some(2));
        let a4 = a4();
        let same = a4.extend(&cyc(4, &[&[0, 2], &[1, 3]])).unwrap();
        assert_eq!(same.order_u64(), Some(12));
        let c5 = GroupHandle::build(&[cyc(5, &[&[0, 1, 2, 3, 4]])], 5).unwrap();
        assert_eq!(c5.extend(&cyc(5, &[&[0, 1]])).unwrap().order_u64(), Some(120));
    }

    #[test]
    fn transversal_products_are_bijective() {
        for g in [s5(), a4()] {
            let sizes = g.transversal_sizes();
            let mut all = HashSet::new();
            let mut choice = vec![0usize; sizes.len()];
            loop {
                assert!(all.insert(g.element_from_choice(&choice)));
                let mut i = 0;
                while i < sizes.len() {
                    choice[i] += 1;
                    if choice[i] < sizes[i] {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == sizes.len() {
                    break;
                }
            }
            assert_eq!(all.len() as u64, g.order_u64().unwrap());
            assert_eq!(all, closure(g.generators(), g.degree()));
        }
    }

    #[test]
    fn deterministic_builds() {
        let a = s5();
        let b = s5();
        assert_eq!(a.base(), b.base());
        assert_eq!(a.fundamental_orbits(), b.fundamental_orbits());
        assert_eq!(a.order(), b.order());
        // Smallest-moved-point base rule.
        assert_eq!(a.base()[0], 0);
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let c2 = GroupHandle::build(&[cyc(2, &[&[0, 1]])], 2).unwrap();
        let mut rng = RandomStream::new(11, 0);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| !c2.uniform_element(&mut rng).is_identity())
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() < 5e-3, "freq {freq}");

        let trivial = GroupHandle::trivial(3);
        assert!(trivial.uniform_element(&mut rng).is_identity());

        let s3 = GroupHandle::build(&[cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])], 3).unwrap();
        let els = s3.elements(10).unwrap();
        let mut counts = [0u64; 6];
        for _ in 0..n {
            let x = s3.uniform_element(&mut rng);
            counts[els.binary_search(&x).unwrap()] += 1;
        }
        let expected = n as f64 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 5 degrees of freedom, upper 1e-3 quantile.
        assert!(chi2 < 20.515, "chi2 {chi2}");
    }
}
