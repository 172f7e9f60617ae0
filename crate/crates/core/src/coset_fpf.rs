//! Fixed-point-free elements of a coset `G·π`.
//!
//! `(Gπ)_i`, the part of the coset fixing `i`, is a right coset of the
//! stabilizer `G_i`. An element of `Gπ` has a fixed point iff it lies in the
//! union of the `(Gπ)_i`, and the size of that union follows from
//! inclusion-exclusion over the intersections `⋂_{i∈I} (Gπ)_i`, each of which
//! is again a right coset (or empty).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::bsgs::{check_points, orbits0, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest degree accepted by the exponential routines unless configured
/// otherwise.
pub const DEFAULT_DEGREE_CAP: usize = 24;

/// The right coset `H·σ = {h·σ : h ∈ H}`.
#[derive(Clone, Debug)]
pub struct RightCoset {
    subgroup: StabilizerChain,
    rep: Permutation,
}

impl RightCoset {
    pub fn new(subgroup: StabilizerChain, rep: Permutation) -> Result<Self> {
        subgroup.check_degree(&rep)?;
        Ok(RightCoset { subgroup, rep })
    }

    pub fn subgroup(&self) -> &StabilizerChain {
        &self.subgroup
    }

    pub fn rep(&self) -> &Permutation {
        &self.rep
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    /// `|H·σ| = |H|`.
    pub fn size(&self) -> BigUint {
        self.subgroup.order()
    }

    /// `x ∈ H·σ` iff `x·σ⁻¹ ∈ H`.
    pub fn contains(&self, x: &Permutation) -> Result<bool> {
        self.subgroup.check_degree(x)?;
        self.subgroup.contains(&x.mul(&self.rep.inverse()))
    }

    /// Same set of permutations.
    pub fn same_as(&self, other: &RightCoset) -> Result<bool> {
        if self.degree() != other.degree() || self.size() != other.size() {
            return Ok(false);
        }
        for g in other.subgroup.strong_generators() {
            if !self.subgroup.contains(g)? {
                return Ok(false);
            }
        }
        self.contains(&other.rep)
    }

    /// Every member `h·σ`.
    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        self.subgroup.elements().map(|h| h.mul(&self.rep))
    }

    /// `{x ∈ H·σ : x(a) = b}`, 0-based.
    fn mapping0(&self, a: usize, b: usize) -> Option<RightCoset> {
        let c = self.rep.img0(a);
        if c == b && self.subgroup.level_count() == 0 {
            return Some(self.clone());
        }
        let chain = self.subgroup.with_prefix0(&[b]);
        // transversal[c] maps b to c; its inverse carries σ(a) to b.
        let to_c = chain.level_rep(0, c)?;
        Some(RightCoset {
            subgroup: chain.suffix(1),
            rep: to_c.inverse().mul(&self.rep),
        })
    }

    /// Whether some member maps `a` to `b` (0-based); an orbit test, no chain
    /// rebuild.
    fn can_map0(&self, a: usize, b: usize, orbit_of: &[usize]) -> bool {
        orbit_of[self.rep.img0(a)] == orbit_of[b]
    }

    fn orbit_labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.degree()];
        for (id, block) in orbits0(self.degree(), self.subgroup.strong_generators())
            .iter()
            .enumerate()
        {
            for &x in block {
                label[x] = id;
            }
        }
        label
    }
}

/// `(Gπ)_i = {g·π : g·π(i) = i}`, or `None` when `π(i)` and `i` lie in
/// different orbits of `G`.
///
/// With products applied right to left this is `G_i·τ_i·π` where
/// `τ_i(π(i)) = i`.
pub fn subcoset_fixing(g: &StabilizerChain, pi: &Permutation, i: usize) -> Result<Option<RightCoset>> {
    let coset = RightCoset::new(g.clone(), pi.clone())?;
    subcoset_mapping(&coset, i, i)
}

/// `{x ∈ H·σ : x(a) = b}`, or `None` if empty.
pub fn subcoset_mapping(cs: &RightCoset, a: usize, b: usize) -> Result<Option<RightCoset>> {
    let pts = check_points(&[a, b], cs.degree())?;
    Ok(cs.mapping0(pts[0], pts[1]))
}

/// `H1·σ1 ∩ H2·σ2`: empty, or a right coset of `H1 ∩ H2`.
///
/// Both the intersection subgroup and a common element are found by
/// depth-first search over the images of `H1`'s base points, pruning a
/// partial assignment as soon as no element of the second coset agrees with
/// it.
pub fn coset_intersect(a: &RightCoset, b: &RightCoset) -> Result<Option<RightCoset>> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    // x = h·σ1 with h ∈ H1 and h ∈ H2·ρ, ρ = σ2·σ1⁻¹.
    let rho = b.rep.mul(&a.rep.inverse());
    let Some(h) = first_common_element(&a.subgroup, &b.subgroup, &rho) else {
        return Ok(None);
    };
    let subgroup = intersect_subgroups(&a.subgroup, &b.subgroup);
    Ok(Some(RightCoset {
        subgroup,
        rep: h.mul(&a.rep),
    }))
}

/// Partial state of the backtrack: the product of chosen `H1`
/// representatives and the matching product on the `H2·ρ` side.
struct Backtrack<'a> {
    h1: &'a StabilizerChain,
    /// `H2` with base `ρ(b_1), ρ(b_2), …` where `b` is `H1`'s base.
    h2: StabilizerChain,
    rho_inv: Permutation,
}

impl Backtrack<'_> {
    /// Extends `prefix` (product of `H1` reps for levels `< level`) and
    /// `t_inv` (inverse of the matching `H2` product) depth-first.
    fn search(
        &self,
        level: usize,
        prefix: &Permutation,
        t_inv: &Permutation,
        forced: Option<usize>,
    ) -> Option<Permutation> {
        if level == self.h1.level_count() {
            let candidate = prefix.mul(&self.rho_inv);
            return self
                .h2
                .contains(&candidate)
                .expect("degrees agree")
                .then(|| prefix.clone());
        }
        let mut orbit = self.h1.level_orbit(level).to_vec();
        orbit.sort_unstable();
        for delta in orbit {
            let u = self.h1.level_rep(level, delta).expect("orbit point");
            let image = prefix.img0(delta);
            if let Some(f) = forced {
                if image != f {
                    continue;
                }
            }
            // Need k ∈ H2 with k(ρ(b_level)) = image given the earlier levels.
            let Some(v) = self.h2.level_rep(level, t_inv.img0(image)) else {
                continue;
            };
            let next_t_inv = v.inverse().mul(t_inv);
            if let Some(found) = self.search(level + 1, &prefix.mul(u), &next_t_inv, None) {
                return Some(found);
            }
        }
        None
    }
}

fn backtrack<'a>(h1: &'a StabilizerChain, h2: &StabilizerChain, rho: &Permutation) -> Backtrack<'a> {
    let target: Vec<usize> = h1.base0().iter().map(|&b| rho.img0(b)).collect();
    Backtrack {
        h1,
        h2: h2.with_prefix0(&target),
        rho_inv: rho.inverse(),
    }
}

/// Some `h ∈ H1 ∩ H2·ρ`.
fn first_common_element(
    h1: &StabilizerChain,
    h2: &StabilizerChain,
    rho: &Permutation,
) -> Option<Permutation> {
    let bt = backtrack(h1, h2, rho);
    let id = Permutation::identity(h1.degree());
    bt.search(0, &id, &id, None)
}

/// `H1 ∩ H2`, built bottom-up: at level `j`, every point of the `H1`-orbit of
/// `b_j` not yet reached by the generators found so far is tested for an
/// element of `H1^(j) ∩ H2` sending `b_j` there.
fn intersect_subgroups(h1: &StabilizerChain, h2: &StabilizerChain) -> StabilizerChain {
    let n = h1.degree();
    let id = Permutation::identity(n);
    let bt = backtrack(h1, h2, &id);
    let base = h1.base0();
    let mut gens: Vec<Permutation> = Vec::new();
    for level in (0..h1.level_count()).rev() {
        let b = base[level];
        let mut reached = orbit_of(b, &gens, n);
        let mut orbit = h1.level_orbit(level).to_vec();
        orbit.sort_unstable();
        for gamma in orbit {
            if reached[gamma] {
                continue;
            }
            // The H2 side starts at the same level because the element fixes
            // the earlier base points.
            if let Some(g) = bt.search_from(level, gamma) {
                gens.push(g);
                reached = orbit_of(b, &gens, n);
            }
        }
    }
    StabilizerChain::schreier_sims(n, &gens, &base)
}

impl Backtrack<'_> {
    fn search_from(&self, level: usize, gamma: usize) -> Option<Permutation> {
        let id = Permutation::identity(self.h1.degree());
        self.search(level, &id, &id, Some(gamma))
    }
}

fn orbit_of(point: usize, gens: &[Permutation], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.img0(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Tuning for the exponential inclusion-exclusion routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpfOptions {
    /// Largest degree accepted before returning a resource error.
    pub degree_cap: usize,
    /// Skip supersets of empty intersections. Turning this off evaluates
    /// every one of the `2^n − 1` terms independently, which is only useful
    /// as a cross-check.
    pub prune: bool,
}

impl Default for FpfOptions {
    fn default() -> Self {
        FpfOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
            prune: true,
        }
    }
}

/// Number of elements of `G·π` with at least one fixed point.
pub fn count_non_fpf(g: &StabilizerChain, pi: &Permutation) -> Result<BigUint> {
    count_non_fpf_with(&RightCoset::new(g.clone(), pi.clone())?, FpfOptions::default())
}

/// `|⋃_i (Hσ)_i|` by inclusion-exclusion over `I ⊆ {1..n}`.
pub fn count_non_fpf_with(cs: &RightCoset, opts: FpfOptions) -> Result<BigUint> {
    check_cap(cs.degree(), opts)?;
    let signed = if opts.prune {
        let labels = cs.orbit_labels();
        let fixable: Vec<usize> = (0..cs.degree()).filter(|&i| cs.can_map0(i, i, &labels)).collect();
        // The recursion includes the I = ∅ term, −|Hσ|.
        subtree_sum(cs, 0, &fixable)? + BigInt::from(cs.size())
    } else {
        unpruned_sum(cs)?
    };
    if signed.is_negative() {
        return Err(Error::Internal(
            "inclusion-exclusion produced a negative count".into(),
        ));
    }
    Ok(signed.magnitude().clone())
}

fn check_cap(degree: usize, opts: FpfOptions) -> Result<()> {
    if degree > opts.degree_cap {
        return Err(Error::Resource(format!(
            "degree {degree} exceeds the inclusion-exclusion cap {}",
            opts.degree_cap
        )));
    }
    Ok(())
}

/// Sum of `(−1)^{|J|+1}·|⋂_{i∈J}(Hσ)_i|` over all `J` that extend the current
/// index set (of size `depth`, with intersection `cs`) by points from
/// `candidates`.
///
/// `candidates` holds the larger points that some member of `cs` fixes;
/// every other extension is empty, and so is every superset of it.
fn subtree_sum(cs: &RightCoset, depth: usize, candidates: &[usize]) -> Result<BigInt> {
    let sign = if depth % 2 == 1 {
        BigInt::one()
    } else {
        -BigInt::one()
    };

    if cs.subgroup.is_trivial() {
        // A single element x: the extensions are the subsets of the points x
        // fixes, whose alternating sum vanishes unless there are none.
        return Ok(if candidates.is_empty() {
            sign
        } else {
            BigInt::zero()
        });
    }

    let mut total = &sign * BigInt::from(cs.size());
    for (k, &j) in candidates.iter().enumerate() {
        let child = cs
            .mapping0(j, j)
            .ok_or_else(|| Error::Internal("candidate point is not fixable".into()))?;
        if child.rep.img0(j) != j {
            return Err(Error::Internal(
                "intersection representative moves a fixed index".into(),
            ));
        }
        let labels = child.orbit_labels();
        let next: Vec<usize> = candidates[k + 1..]
            .iter()
            .copied()
            .filter(|&i| child.can_map0(i, i, &labels))
            .collect();
        total += subtree_sum(&child, depth + 1, &next)?;
    }
    Ok(total)
}

/// Evaluates every term from scratch with [`coset_intersect`].
fn unpruned_sum(cs: &RightCoset) -> Result<BigInt> {
    let n = cs.degree();
    let fixing: Vec<Option<RightCoset>> = (0..n).map(|i| cs.mapping0(i, i)).collect();
    let mut total = BigInt::zero();
    for mask in 1u64..(1u64 << n) {
        let mut acc: Option<RightCoset> = Some(cs.clone());
        for (i, part) in fixing.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            acc = match (acc, part) {
                (Some(x), Some(y)) => coset_intersect(&x, y)?,
                _ => None,
            };
        }
        if let Some(term) = acc {
            if mask.count_ones() % 2 == 1 {
                total += BigInt::from(term.size());
            } else {
                total -= BigInt::from(term.size());
            }
        }
    }
    Ok(total)
}

/// Whether `G·π` contains a derangement.
pub fn has_fpf(g: &StabilizerChain, pi: &Permutation) -> Result<bool> {
    has_fpf_with(&RightCoset::new(g.clone(), pi.clone())?, FpfOptions::default())
}

/// `count_non_fpf < |Hσ|`. A point fixed by every member answers `false`
/// without counting.
pub fn has_fpf_with(cs: &RightCoset, opts: FpfOptions) -> Result<bool> {
    check_cap(cs.degree(), opts)?;
    let labels = cs.orbit_labels();
    let sizes = orbit_sizes(&labels);
    if (0..cs.degree()).any(|i| cs.rep.img0(i) == i && sizes[labels[i]] == 1) {
        return Ok(false);
    }
    Ok(count_non_fpf_with(cs, opts)? < cs.size())
}

fn orbit_sizes(labels: &[usize]) -> Vec<usize> {
    let mut sizes = vec![0; labels.len()];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

/// A derangement in `G·π`, if any.
pub fn find_fpf(g: &StabilizerChain, pi: &Permutation) -> Result<Option<Permutation>> {
    find_fpf_with(&RightCoset::new(g.clone(), pi.clone())?, FpfOptions::default())
}

/// Descends through the subcosets mapping point `a` to `b` for
/// `a = 1, 2, …`, taking the smallest `b` whose subcoset still contains a
/// derangement.
pub fn find_fpf_with(cs: &RightCoset, opts: FpfOptions) -> Result<Option<Permutation>> {
    if !has_fpf_with(cs, opts)? {
        return Ok(None);
    }
    let n = cs.degree();
    let mut current = cs.clone();
    for a in 0..n {
        if current.subgroup.is_trivial() {
            break;
        }
        let labels = current.orbit_labels();
        let mut next = None;
        for b in (0..n).filter(|&b| b != a) {
            if !current.can_map0(a, b, &labels) {
                continue;
            }
            let sub = current.mapping0(a, b).expect("orbit test passed");
            if has_fpf_with(&sub, opts)? {
                next = Some(sub);
                break;
            }
        }
        current = next
            .ok_or_else(|| Error::Internal(format!("no subcoset mapping {} keeps a derangement", a + 1)))?;
    }
    let x = current.rep;
    if x.fix_count() != 0 || !cs.contains(&x)? {
        return Err(Error::Internal(format!("derangement search returned {x}")));
    }
    Ok(Some(x))
}

/// `|G| − count_non_fpf(G, id)`: the number of derangements in `G`.
pub fn fpf_count(g: &StabilizerChain) -> Result<BigUint> {
    let id = Permutation::identity(g.degree());
    Ok(g.order() - count_non_fpf(g, &id)?)
}
