//! Brute-force ground truth over an explicitly listed group.
//!
//! Everything here is exponential on purpose. It exists to check the
//! polynomial and FPT algorithms at small degree.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::bsgs::StabilizerChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default element cap for [`enumerate_group`].
pub const DEFAULT_CAP: u64 = 1_000_000;

/// All elements of a group: identity first, the rest sorted by image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    degree: usize,
    elements: Vec<Permutation>,
}

impl GroupTable {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.is_identity() && p.degree() == self.degree || self.elements[1..].binary_search(p).is_ok()
    }

    /// Number of orbits, from the equivalence `i ~ g(i)` over all listed
    /// elements.
    pub fn orbit_count(&self) -> usize {
        let n = self.degree;
        let mut seen = vec![false; n];
        let mut count = 0;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            count += 1;
            for g in &self.elements {
                seen[g.image(i + 1) - 1] = true;
            }
        }
        count
    }

    /// Whether `b` is a base: no non-identity element fixes all of `b`.
    pub fn is_base(&self, b: &[usize]) -> bool {
        self.elements[1..]
            .iter()
            .all(|g| b.iter().any(|&p| g.image(p) != p))
    }
}

/// Lists every element of the chain's group, refusing before allocating when
/// the order exceeds `cap`.
pub fn enumerate_group(chain: &StabilizerChain, cap: &BigUint) -> Result<GroupTable> {
    let order = chain.order();
    if &order > cap {
        return Err(Error::Resource(format!(
            "group order {order} exceeds enumeration cap {cap}"
        )));
    }
    let size = order.to_usize().expect("order is below the cap");
    let mut elements: Vec<Permutation> = Vec::with_capacity(size);
    elements.extend(chain.elements().filter(|g| !g.is_identity()));
    elements.sort_unstable();
    elements.dedup();
    elements.insert(0, Permutation::identity(chain.degree()));
    Ok(GroupTable {
        degree: chain.degree(),
        elements,
    })
}

/// Exhaustive statistics over the coset `G·π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub fpf_count: BigUint,
    pub sum_move: BigUint,
    pub max_move: usize,
    /// Only computed when `π` is the identity.
    pub min_base_size: Option<usize>,
}

pub fn stats(table: &GroupTable, pi: &Permutation) -> Result<Stats> {
    if pi.degree() != table.degree {
        return Err(Error::DegreeMismatch {
            left: table.degree,
            right: pi.degree(),
        });
    }
    let mut fpf_count = BigUint::zero();
    let mut sum_move = BigUint::zero();
    let mut max_move = 0;
    for g in &table.elements {
        let moved = g.compose(pi)?.move_count();
        if moved == table.degree {
            fpf_count += 1u32;
        }
        sum_move += moved;
        max_move = max_move.max(moved);
    }
    let min_base_size = pi.is_identity().then(|| min_base(table).len());
    Ok(Stats {
        fpf_count,
        sum_move,
        max_move,
        min_base_size,
    })
}

/// The lexicographically smallest base of minimum size, by trying every
/// subset of sizes `0, 1, …, n`.
pub fn min_base(table: &GroupTable) -> Vec<usize> {
    (0..=table.degree)
        .find_map(|size| (1..=table.degree).combinations(size).find(|b| table.is_base(b)))
        .expect("the full point set is always a base")
}

/// Elements of `G·π` with no fixed point.
pub fn derangements(table: &GroupTable, pi: &Permutation) -> Vec<Permutation> {
    table
        .elements
        .iter()
        .map(|g| g.mul(pi))
        .filter(|x| x.fix_count() == 0)
        .collect()
}

/// Elements of `G·π` with at least one fixed point.
pub fn count_with_fixed_point(table: &GroupTable, pi: &Permutation) -> usize {
    table
        .elements
        .iter()
        .filter(|g| g.mul(pi).fix_count() > 0)
        .count()
}

/// Largest number of points moved by an element of `G·π`.
pub fn max_move(table: &GroupTable, pi: &Permutation) -> usize {
    table
        .elements
        .iter()
        .map(|g| g.mul(pi).move_count())
        .max()
        .unwrap_or(0)
}
