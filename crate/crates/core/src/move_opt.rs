//! Average number of moved points over a coset, and an element that moves at
//! least that many.
//!
//! For a coset `G·π` the column-count argument gives
//!
//! ```text
//! Σ_{g∈G} move(g·π) = Σ_i N_i,   N_i = |G| − |G_i| if π(i) ∈ i^G, else |G|
//! ```
//!
//! so the average needs only the orbits of `G` and `|G|`. The descent walks
//! the stabilizer tower `G ≥ G_1 ≥ G_{1,2} ≥ …`, splitting the current coset
//! into right cosets of the next stabilizer and keeping one whose average is
//! largest.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::bsgs::{orbits0, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::ExactRational;

/// `E_{g∈G}[move(g·π)]` as an exact rational. Never enumerates `G`.
pub fn expected_move(chain: &StabilizerChain, pi: &Permutation) -> Result<ExactRational> {
    chain.check_degree(pi)?;
    Ok(expected_move_over(chain, pi))
}

fn expected_move_over(chain: &StabilizerChain, pi: &Permutation) -> ExactRational {
    let order = chain.order();
    let n = chain.degree();
    let mut orbit_size = vec![0usize; n];
    let mut orbit_id = vec![0usize; n];
    for (id, block) in orbits0(n, chain.strong_generators()).iter().enumerate() {
        for &x in block {
            orbit_size[x] = block.len();
            orbit_id[x] = id;
        }
    }
    let mut total = BigUint::zero();
    for i in 0..n {
        if orbit_id[pi.img0(i)] == orbit_id[i] {
            let stabilizer_order = &order / orbit_size[i];
            total += &order - stabilizer_order;
        } else {
            total += &order;
        }
    }
    ExactRational::new(BigInt::from(total), BigInt::from(order))
}

/// One step of the descent, kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    /// Point whose stabilizer the coset was refined by (1-based).
    pub point: usize,
    /// Average over the coset before this step.
    pub before: ExactRational,
    /// Average over the chosen subcoset.
    pub after: ExactRational,
    /// Number of subcosets compared.
    pub branches: usize,
}

/// Result of [`max_move_descent`]: the element reached and the average
/// at every refinement step.
#[derive(Clone, Debug)]
pub struct Descent {
    pub element: Permutation,
    pub initial: ExactRational,
    pub steps: Vec<DescentStep>,
}

/// An element `τ ∈ G·π` with `move(τ) ≥ E_{g∈G}[move(g·π)]`.
pub fn max_move_element(chain: &StabilizerChain, pi: &Permutation) -> Result<Permutation> {
    max_move_descent(chain, pi).map(|d| d.element)
}

/// Runs the conditional-expectation descent over points `1, 2, …, n−1` and
/// reports every step.
///
/// At step `j` the current coset is `H·σ` with `H = G_{1..j-1}`. It splits
/// into the right cosets `H_j·u_γ⁻¹·σ`, one per point `γ` of the `H`-orbit of
/// `j`, where `u_γ` maps `j` to `γ`. The subcoset with the largest average is
/// kept; ties go to the smallest `γ`.
pub fn max_move_descent(chain: &StabilizerChain, pi: &Permutation) -> Result<Descent> {
    chain.check_degree(pi)?;
    let n = chain.degree();
    let tower = chain.with_prefix0(&(0..n).collect::<Vec<_>>());

    let initial = expected_move_over(chain, pi);
    let mut current = initial.clone();
    let mut sigma = pi.clone();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));

    for j in 0..n.saturating_sub(1) {
        let next = tower.suffix(j + 1);
        let mut orbit = tower.level_orbit(j).to_vec();
        orbit.sort_unstable();

        let mut best: Option<(ExactRational, Permutation)> = None;
        let mut sum = ExactRational::zero();
        for &gamma in &orbit {
            let rep = tower
                .level_rep(j, gamma)
                .expect("orbit point has a representative");
            let candidate = rep.inverse().mul(&sigma);
            let mu = expected_move_over(&next, &candidate);
            sum += &mu;
            if best.as_ref().is_none_or(|(m, _)| mu > *m) {
                best = Some((mu, candidate));
            }
        }
        let (mu_best, chosen) = best.expect("an orbit is never empty");

        // The subcosets have equal size, so their averages average to the
        // parent's; the maximum can only be at least as large.
        let branches = orbit.len();
        if sum / ExactRational::from_integer(BigInt::from(branches)) != current {
            return Err(Error::Internal(format!(
                "subcoset averages do not average to the coset average at point {}",
                j + 1
            )));
        }
        if mu_best < current {
            return Err(Error::Internal(format!(
                "descent average decreased at point {}",
                j + 1
            )));
        }
        steps.push(DescentStep {
            point: j + 1,
            before: current.clone(),
            after: mu_best.clone(),
            branches,
        });
        current = mu_best;
        sigma = chosen;
    }

    // The final coset is a single element, so its average is its move count.
    if ExactRational::from_integer(BigInt::from(sigma.move_count())) != current {
        return Err(Error::Internal(
            "descent ended on a coset with more than one element".into(),
        ));
    }
    Ok(Descent {
        element: sigma,
        initial,
        steps,
    })
}

/// A fixed-point-free element of a transitive group.
///
/// The average move over a transitive `G` is `n − 1`, while over `G_1` it is
/// at most `n − 2`, so some other subcoset averages strictly more than `n − 1`
/// and the descent must end on a derangement.
pub fn fpf_transitive(chain: &StabilizerChain) -> Result<Permutation> {
    if chain.degree() < 2 {
        return Err(Error::Invalid(
            "a group of degree 1 has no fixed-point-free element".into(),
        ));
    }
    if !chain.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let g = max_move_element(chain, &Permutation::identity(chain.degree()))?;
    if g.fix_count() != 0 {
        return Err(Error::Internal(format!(
            "descent on a transitive group returned {g}, which has a fixed point"
        )));
    }
    Ok(g)
}

/// `n − orb(G)`, the average number of moved points over `G`.
pub fn n_minus_orbits(chain: &StabilizerChain) -> ExactRational {
    let n = chain.degree();
    let orbits = chain.orbits0().len();
    ExactRational::from_integer(BigInt::from(n - orbits))
}
