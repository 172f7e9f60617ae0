//! Small bases: a brute-force baseline, and two parameterized solvers that
//! reduce k-BASE to a budgeted hitting-set problem.
//!
//! For a cyclic group, split into prime-power parts `H_1 × … × H_ℓ` with
//! generators `g_i`, a point set is a base iff it meets, for every `i`, some
//! cycle of `g_i` of full length `p_i^{e_i}`. For a group whose orbits are
//! bounded by `b`, a base of size `k` forces `|G| ≤ b^k`, so the group can be
//! listed and a base must meet the support of every non-identity element.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bsgs::{check_points, GroupInput, StabilizerChain};
use crate::error::{Error, Result};
use crate::oracle::enumerate_group;
use crate::perm::Permutation;

/// Largest trial divisor used when factoring a group order.
const TRIAL_DIVISION_CAP: u64 = 1_000_000_000;

/// `B` is a base iff its pointwise stabilizer is trivial.
pub fn is_base(chain: &StabilizerChain, points: &[usize]) -> Result<bool> {
    Ok(chain.pointwise_stabilizer(points)?.is_trivial())
}

/// The lexicographically smallest base of the smallest size `≤ k`.
pub fn brute_force_kbase(chain: &StabilizerChain, k: usize) -> Option<Vec<usize>> {
    let n = chain.degree();
    (0..=k.min(n)).find_map(|size| {
        (1..=n)
            .combinations(size)
            .find(|b| is_base(chain, b).expect("points are in range"))
    })
}

/// One prime-power part of a cyclic group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFactor {
    pub generator: Permutation,
    pub prime: u64,
    pub exponent: u32,
}

/// A cyclic group as a product of cyclic groups of coprime prime-power
/// orders, sorted by prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    degree: usize,
    factors: Vec<CyclicFactor>,
}

impl CyclicDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    /// `Π p^e`.
    pub fn order(&self) -> BigUint {
        self.factors
            .iter()
            .map(|f| BigUint::from(f.prime).pow(f.exponent))
            .product()
    }

    /// The product of the factor generators, which generates the group.
    pub fn generator(&self) -> Permutation {
        self.factors
            .iter()
            .fold(Permutation::identity(self.degree), |acc, f| acc.mul(&f.generator))
    }
}

/// Prime factorization by trial division, ascending primes.
fn factorize(order: &BigUint) -> Result<Vec<(u64, u32)>> {
    let mut rest = order.clone();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while BigUint::from(d) * BigUint::from(d) <= rest {
        if d > TRIAL_DIVISION_CAP {
            return Err(Error::Resource(format!(
                "cannot factor group order {order} with trial division up to {TRIAL_DIVISION_CAP}"
            )));
        }
        let mut e = 0;
        while (&rest % d).is_zero() {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        let p = rest
            .to_u64()
            .ok_or_else(|| Error::Resource(format!("prime factor of {order} does not fit in 64 bits")))?;
        out.push((p, 1));
    }
    Ok(out)
}

/// Splits a cyclic group into prime-power parts, certifying cyclicity.
///
/// For each `p^e ‖ |G|` the part generator is the power `s^{|G|/p^e}` of
/// largest order among the input generators `s`; it must have order exactly
/// `p^e`. The product of the part generators must have order `|G|`.
pub fn cyclic_decompose(group: &GroupInput) -> Result<CyclicDecomposition> {
    let gens = group.generators();
    for (a, b) in gens.iter().tuple_combinations() {
        if a.mul(b) != b.mul(a) {
            return Err(Error::NotCyclic);
        }
    }
    let order = StabilizerChain::build(group).order();
    let mut factors = Vec::new();
    for (prime, exponent) in factorize(&order)? {
        let part = BigUint::from(prime).pow(exponent);
        let cofactor = &order / &part;
        let best = gens
            .iter()
            .map(|s| s.pow(&cofactor))
            .max_by(|x, y| x.order().cmp(&y.order()).then_with(|| y.cmp(x)))
            .expect("a nontrivial group has a generator");
        if best.order() != part {
            return Err(Error::NotCyclic);
        }
        factors.push(CyclicFactor {
            generator: best,
            prime,
            exponent,
        });
    }
    let d = CyclicDecomposition {
        degree: group.degree(),
        factors,
    };
    if d.generator().order() != order || d.order() != order {
        return Err(Error::NotCyclic);
    }
    if order > BigUint::one() && d.factors.len() as u64 > order.bits() {
        return Err(Error::Internal(
            "more prime factors than bits in the order".into(),
        ));
    }
    Ok(d)
}

/// For each part, the points on a cycle of its generator of full length
/// `p^e`, ascending and 1-based.
pub fn critical_sets(d: &CyclicDecomposition, n: usize) -> Result<Vec<Vec<usize>>> {
    if n != d.degree {
        return Err(Error::DegreeMismatch {
            left: d.degree,
            right: n,
        });
    }
    d.factors
        .iter()
        .map(|f| {
            let full = BigUint::from(f.prime).pow(f.exponent);
            let mut set: Vec<usize> = f
                .generator
                .cycles()
                .cycles
                .into_iter()
                .filter(|c| BigUint::from(c.len()) == full)
                .flatten()
                .collect();
            set.sort_unstable();
            if set.is_empty() {
                return Err(Error::Internal(format!(
                    "generator {} has no cycle of length {full}",
                    f.generator
                )));
            }
            Ok(set)
        })
        .collect()
}

/// A family of nonempty point sets over `{1..n}` and a budget `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
    budget: usize,
}

impl HittingInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::Invalid("hitting-set budget must be at least 1".into()));
        }
        if sets.is_empty() {
            return Err(Error::Invalid("hitting-set family is empty".into()));
        }
        let mut clean = Vec::with_capacity(sets.len());
        for s in sets {
            if s.is_empty() {
                return Err(Error::Invalid("hitting-set family contains an empty set".into()));
            }
            check_points(&s, universe)?;
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            clean.push(s);
        }
        Ok(HittingInstance {
            universe,
            sets: clean,
            budget,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Whether `points` meets every set.
    pub fn is_hit_by(&self, points: &[usize]) -> bool {
        self.sets.iter().all(|s| s.iter().any(|p| points.contains(p)))
    }
}

/// Fixed-width bitset over the points `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_points(points: &[usize], n: usize) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &p in points {
            words[(p - 1) / 64] |= 1 << ((p - 1) % 64);
        }
        Bits(words)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, 1-based.
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize + 1)
    }
}

/// A set of at most `budget` points meeting every set, or `None`.
///
/// The sets are assigned in order to at most `budget` groups whose running
/// intersections must stay nonempty; each group then contributes its smallest
/// common point. Sets that contain another set are dropped first, since any
/// point hitting the smaller set hits them too.
pub fn hitting_set_k(inst: &HittingInstance) -> Option<Vec<usize>> {
    let n = inst.universe;
    let mut bits: Vec<Bits> = Vec::new();
    for s in &inst.sets {
        let b = Bits::from_points(s, n);
        if !bits.contains(&b) {
            bits.push(b);
        }
    }
    let minimal: Vec<Bits> = bits
        .iter()
        .filter(|b| !bits.iter().any(|c| c != *b && c.is_subset_of(b)))
        .cloned()
        .collect();

    let mut groups: Vec<Bits> = Vec::with_capacity(inst.budget);
    if !assign(&minimal, 0, inst.budget, &mut groups) {
        return None;
    }
    let mut picked: Vec<usize> = groups
        .iter()
        .map(|g| g.first().expect("nonempty group"))
        .collect();
    picked.sort_unstable();
    picked.dedup();
    Some(picked)
}

fn assign(sets: &[Bits], next: usize, budget: usize, groups: &mut Vec<Bits>) -> bool {
    let Some(set) = sets.get(next) else {
        return true;
    };
    for g in 0..groups.len() {
        let meet = groups[g].and(set);
        if meet.is_empty() {
            continue;
        }
        let saved = std::mem::replace(&mut groups[g], meet);
        if assign(sets, next + 1, budget, groups) {
            return true;
        }
        groups[g] = saved;
    }
    if groups.len() < budget {
        groups.push(set.clone());
        if assign(sets, next + 1, budget, groups) {
            return true;
        }
        groups.pop();
    }
    false
}

/// `base ≤ k` for a cyclic group via its critical sets.
pub fn cyclic_kbase(group: &GroupInput, k: usize) -> Result<Option<Vec<usize>>> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let d = cyclic_decompose(group)?;
    let n = group.degree();
    // Distinct elements of G differ on some base point, so |G| ≤ n^k.
    if d.order() > BigUint::from(n).pow(k as u32) {
        return Ok(None);
    }
    if d.factors.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let sets = critical_sets(&d, n)?;
    let found = hitting_set_k(&HittingInstance::new(n, sets, k)?);
    checked_base(group, k, found)
}

/// `base ≤ k` for a group whose orbits all have size at most `b`.
pub fn bounded_orbit_kbase(group: &GroupInput, k: usize, b: usize) -> Result<Option<Vec<usize>>> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let chain = StabilizerChain::build(group);
    if let Some(size) = chain.orbits().iter().map(Vec::len).find(|&s| s > b) {
        return Err(Error::OrbitBound { size, bound: b });
    }
    // A base point has at most b images, so |G| ≤ b^k.
    let cap = BigUint::from(b).pow(k as u32);
    if chain.order() > cap {
        return Ok(None);
    }
    let table = enumerate_group(&chain, &cap)?;
    let sets: Vec<Vec<usize>> = table.elements()[1..].iter().map(Permutation::support).collect();
    if sets.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let found = hitting_set_k(&HittingInstance::new(group.degree(), sets, k)?);
    checked_base(group, k, found)
}

fn checked_base(group: &GroupInput, k: usize, found: Option<Vec<usize>>) -> Result<Option<Vec<usize>>> {
    if let Some(b) = &found {
        let chain = StabilizerChain::build(group);
        if b.len() > k || !is_base(&chain, b)? {
            return Err(Error::Internal(format!(
                "hitting set {b:?} is not a base of size at most {k}"
            )));
        }
    }
    Ok(found)
}
