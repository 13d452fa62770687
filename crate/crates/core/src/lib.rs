//! Expected number of uniformly random elements needed to generate a finite
//! permutation group, computed exactly through the subgroup lattice and
//! approximately by Monte Carlo, together with exact checks of the
//! generation-probability inequalities that bound it.

pub mod cli;
pub mod lattice;
pub mod numseries;
pub mod perm;
pub mod probgen;
pub mod rng;
pub mod table;
pub mod structure;
pub mod verdict;
