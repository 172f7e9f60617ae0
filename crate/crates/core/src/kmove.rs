//! Deciding whether some group element moves at least `k` points.
//!
//! If the group moves at least `2k` points overall, the average element
//! already moves `k`, and the descent of [`crate::move_opt`] finds one.
//! Otherwise every point outside the support can be dropped, leaving an
//! instance on fewer than `2k` points. There a witness moving exactly
//! `Ω∖Δ` is a derangement of the pointwise stabilizer `G_Δ` acting on
//! `Ω∖Δ`, which [`crate::coset_fpf`] searches for.

use itertools::Itertools;

use crate::bsgs::{GroupInput, StabilizerChain};
use crate::coset_fpf::{find_fpf_with, FpfOptions, RightCoset};
use crate::error::{Error, Result};
use crate::move_opt::max_move_element;
use crate::perm::Permutation;

/// A group together with the threshold `k ≥ 1`.
#[derive(Clone, Debug)]
pub struct KMoveInstance {
    group: GroupInput,
    k: usize,
}

impl KMoveInstance {
    pub fn new(group: GroupInput, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        Ok(KMoveInstance { group, k })
    }

    pub fn group(&self) -> &GroupInput {
        &self.group
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// The group restricted to its support and relabelled onto `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    /// `points[j]` is the original point relabelled to `j + 1`.
    points: Vec<usize>,
    /// Generators on `m` points; empty when `m = 0`.
    generators: Vec<Permutation>,
}

impl Kernel {
    /// `m = |Ω|`. Zero when the group is trivial.
    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// The relabelling: entry `j` is the original point sent to `j + 1`.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The reduced group, or `None` on zero points.
    pub fn group(&self) -> Option<GroupInput> {
        let m = self.degree();
        if m == 0 {
            return None;
        }
        let gens = if self.generators.is_empty() {
            vec![Permutation::identity(m)]
        } else {
            self.generators.clone()
        };
        Some(GroupInput::new(m, gens).expect("kernel generators have the kernel degree"))
    }

    /// Carries a kernel permutation back to the original `degree` points,
    /// fixing everything outside the support.
    pub fn lift(&self, x: &Permutation, degree: usize) -> Permutation {
        let mut images: Vec<usize> = (0..degree).collect();
        for (j, &p) in self.points.iter().enumerate() {
            images[p - 1] = self.points[x.img0(j)] - 1;
        }
        Permutation::from_images0(images)
    }
}

/// Outcome of [`kernelize`].
#[derive(Clone, Debug)]
pub enum KernelResult {
    /// The group moves at least `2k` points; this element moves at least `k`.
    Witness(Permutation),
    /// An equivalent instance on fewer than `2k` points.
    Kernel(Kernel),
}

/// Points moved by some element of the group, ascending.
pub fn support(group: &GroupInput) -> Vec<usize> {
    group.support()
}

/// Either an immediate witness or a reduced instance of degree `< 2k` with at
/// most `k(2k−1)` generators.
pub fn kernelize(inst: &KMoveInstance) -> Result<KernelResult> {
    let group = &inst.group;
    let omega = support(group);
    let chain = StabilizerChain::build(group);
    if omega.len() >= 2 * inst.k {
        let g = max_move_element(&chain, &Permutation::identity(group.degree()))?;
        if g.move_count() < inst.k {
            return Err(Error::Internal(format!(
                "element {g} moves fewer than {} points although the support has {}",
                inst.k,
                omega.len()
            )));
        }
        return Ok(KernelResult::Witness(g));
    }

    // The non-identity transversal elements generate the group; level j has
    // at most m − j − 1 of them, so there are at most m(m−1)/2 in total.
    let m = omega.len();
    let mut label = vec![usize::MAX; group.degree()];
    for (j, &p) in omega.iter().enumerate() {
        label[p - 1] = j;
    }
    let mut generators: Vec<Permutation> = Vec::new();
    for level in 0..chain.level_count() {
        for &gamma in chain.level_orbit(level) {
            let rep = chain.level_rep(level, gamma).expect("orbit point");
            if rep.is_identity() {
                continue;
            }
            let images = omega.iter().map(|&p| label[rep.img0(p - 1)]).collect();
            let restricted = Permutation::from_images0(images);
            if !generators.contains(&restricted) {
                generators.push(restricted);
            }
        }
    }
    if generators.len() > inst.k * (2 * inst.k - 1) {
        return Err(Error::Internal(format!(
            "kernel has {} generators, above the bound {}",
            generators.len(),
            inst.k * (2 * inst.k - 1)
        )));
    }
    debug_assert!(m < 2 * inst.k);
    Ok(KernelResult::Kernel(Kernel {
        points: omega,
        generators,
    }))
}

/// Some `g ∈ G` with `move(g) ≥ k`, on the original points, or `None`.
pub fn solve_kmove(inst: &KMoveInstance) -> Result<Option<Permutation>> {
    let degree = inst.group.degree();
    let found = match kernelize(inst)? {
        KernelResult::Witness(g) => Some(g),
        KernelResult::Kernel(kernel) => match kernel.group() {
            None => None,
            Some(reduced) => {
                let chain = StabilizerChain::build(&reduced);
                search_deltas(&chain, inst.k)?.map(|x| kernel.lift(&x, degree))
            }
        },
    };
    verify(inst, found)
}

/// The same search run on the whole support without the `move(G) ≥ 2k`
/// shortcut, for checking that kernelization preserves the answer.
pub fn solve_kmove_unreduced(inst: &KMoveInstance) -> Result<Option<Permutation>> {
    let chain = StabilizerChain::build(&inst.group);
    verify(inst, search_deltas(&chain, inst.k)?)
}

fn verify(inst: &KMoveInstance, found: Option<Permutation>) -> Result<Option<Permutation>> {
    if let Some(g) = &found {
        let chain = StabilizerChain::build(&inst.group);
        if g.move_count() < inst.k || !chain.contains(g)? {
            return Err(Error::Internal(format!(
                "k-move search returned invalid witness {g}"
            )));
        }
    }
    Ok(found)
}

/// Tries `Δ ⊆ Ω` by increasing size, then lexicographically, with
/// `|Ω∖Δ| ≥ k`. A derangement of `G_Δ` on `Ω∖Δ` moves exactly `|Ω∖Δ|`
/// points.
fn search_deltas(chain: &StabilizerChain, k: usize) -> Result<Option<Permutation>> {
    let n = chain.degree();
    let moved: Vec<usize> = (0..n)
        .filter(|&i| chain.strong_generators().iter().any(|g| g.img0(i) != i))
        .collect();
    if moved.len() < k {
        return Ok(None);
    }
    for size in 0..=moved.len() - k {
        for delta in moved.iter().copied().combinations(size) {
            let stab = chain.pointwise_stabilizer0(&delta);
            let rest: Vec<usize> = moved.iter().copied().filter(|p| !delta.contains(p)).collect();
            let gens = stab.strong_generators();
            if rest.iter().any(|&p| gens.iter().all(|g| g.img0(p) == p)) {
                continue;
            }
            if let Some(x) = derangement_on(&stab, &rest)? {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// A derangement of `H` restricted to the `H`-invariant set `rest`, extended
/// by the identity elsewhere.
fn derangement_on(h: &StabilizerChain, rest: &[usize]) -> Result<Option<Permutation>> {
    let n = h.degree();
    let mut label = vec![usize::MAX; n];
    for (j, &p) in rest.iter().enumerate() {
        label[p] = j;
    }
    let gens: Vec<Permutation> = h
        .strong_generators()
        .iter()
        .map(|g| Permutation::from_images0(rest.iter().map(|&p| label[g.img0(p)]).collect()))
        .collect();
    let r = rest.len();
    let restricted = StabilizerChain::schreier_sims(r, &gens, &[]);
    let coset = RightCoset::new(restricted, Permutation::identity(r))?;
    let Some(x) = find_fpf_with(&coset, FpfOptions::default())? else {
        return Ok(None);
    };
    let mut images: Vec<usize> = (0..n).collect();
    for (j, &p) in rest.iter().enumerate() {
        images[p] = rest[x.img0(j)];
    }
    Ok(Some(Permutation::from_images0(images)))
}
