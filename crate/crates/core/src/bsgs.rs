//! Orbits and deterministic Schreier–Sims stabilizer chains.
//!
//! A [`StabilizerChain`] stores, for each base point `b_j`, the strong
//! generators of `G^(j)` (the subgroup fixing `b_1..b_{j-1}`), the orbit of
//! `b_j` under them and an explicit transversal: `transversal[γ]` maps `b_j`
//! to `γ`.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A permutation group given by generators.
///
/// The identity and repeated generators are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInput {
    degree: usize,
    generators: Vec<Permutation>,
}

impl GroupInput {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("group degree must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(Error::Invalid("a group needs at least one generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(GroupInput {
            degree,
            generators: normalize(generators),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The normalized generators (no identity, no duplicates, input order).
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Points moved by at least one generator, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&i| self.generators.iter().any(|g| g.img0(i) != i))
            .map(|i| i + 1)
            .collect()
    }
}

fn normalize(generators: Vec<Permutation>) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::with_capacity(generators.len());
    for g in generators {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Orbits of the group generated by `generators`, as 0-based blocks sorted by
/// their minimum element, each block ascending.
pub(crate) fn orbits0(degree: usize, generators: &[Permutation]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut blocks = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        label[start] = id;
        let mut block = vec![start];
        let mut head = 0;
        while head < block.len() {
            let x = block[head];
            head += 1;
            for g in generators {
                let y = g.img0(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    block.push(y);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// Orbits of `⟨S⟩` on `{1..n}`: blocks sorted by minimum element.
pub fn orbits(group: &GroupInput) -> Vec<Vec<usize>> {
    to_one_based(orbits0(group.degree, &group.generators))
}

fn to_one_based(blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    blocks
        .into_iter()
        .map(|b| b.into_iter().map(|x| x + 1).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Level {
    base: usize,
    generators: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base: usize, generators: Vec<Permutation>) -> Self {
        let mut level = Level {
            base,
            generators,
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[self.base] = Some(Permutation::identity(degree));
        let mut orbit = vec![self.base];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &self.generators {
                let y = s.img0(x);
                if transversal[y].is_none() {
                    let rep = s.mul(transversal[x].as_ref().expect("orbit point has a representative"));
                    transversal[y] = Some(rep);
                    orbit.push(y);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }

    #[inline]
    fn rep(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref()
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn build(group: &GroupInput) -> Self {
        Self::schreier_sims(group.degree, &group.generators, &[])
    }

    /// Builds a chain whose base starts with `prefix` (1-based, in the given
    /// order). Points fixed by the whole group give levels with a trivial
    /// orbit.
    pub fn build_with_prefix(group: &GroupInput, prefix: &[usize]) -> Result<Self> {
        let prefix0 = check_points(prefix, group.degree)?;
        Ok(Self::schreier_sims(group.degree, &group.generators, &prefix0))
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        StabilizerChain {
            degree,
            levels: Vec::new(),
        }
    }

    pub(crate) fn schreier_sims(degree: usize, generators: &[Permutation], prefix: &[usize]) -> Self {
        let strong = normalize(generators.to_vec());
        let mut base: Vec<usize> = Vec::with_capacity(prefix.len());
        for &b in prefix {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for s in &strong {
            if base.iter().all(|&b| s.img0(b) == b) {
                base.push(s.first_moved0().expect("identity was normalized away"));
            }
        }

        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                let gens = strong
                    .iter()
                    .filter(|s| base[..j].iter().all(|&c| s.img0(c) == c))
                    .cloned()
                    .collect();
                Level::new(degree, b, gens)
            })
            .collect();

        let mut i = levels.len();
        while i > 0 {
            let cur = i - 1;
            match first_failing_schreier_generator(&levels, cur) {
                None => i -= 1,
                Some((residue, depth)) => {
                    if depth == levels.len() {
                        let point = residue.first_moved0().expect("residue is not the identity");
                        levels.push(Level::new(degree, point, Vec::new()));
                    }
                    for level in &mut levels[cur + 1..=depth] {
                        level.generators.push(residue.clone());
                        level.rebuild_orbit(degree);
                    }
                    i = depth + 1;
                }
            }
        }
        StabilizerChain { degree, levels }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Base points, 1-based, in chain order.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    pub(crate) fn base0(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strong generators of the whole group.
    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels.first().map_or(&[], |l| &l.generators)
    }

    /// Transversal sizes, one per level.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Orbits of the group on `{1..n}`, blocks sorted by minimum element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        to_one_based(self.orbits0())
    }

    pub(crate) fn orbits0(&self) -> Vec<Vec<usize>> {
        orbits0(self.degree, self.strong_generators())
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits0().len() == 1
    }

    /// Points moved by some element of the group, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&i| self.strong_generators().iter().any(|g| g.img0(i) != i))
            .map(|i| i + 1)
            .collect()
    }

    /// Membership by sifting through the transversals.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        self.check_degree(p)?;
        let (residue, depth) = sift0(&self.levels, p.clone());
        Ok(depth == self.levels.len() && residue.is_identity())
    }

    pub(crate) fn check_degree(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(())
    }

    /// Chain for the same group with the given 0-based base prefix. Reuses
    /// `self` when the base already starts with it.
    pub(crate) fn with_prefix0(&self, prefix: &[usize]) -> StabilizerChain {
        let base = self.base0();
        if base.len() >= prefix.len() && base[..prefix.len()] == *prefix {
            return self.clone();
        }
        Self::schreier_sims(self.degree, self.strong_generators(), prefix)
    }

    /// The chain formed by levels `from..`, i.e. the pointwise stabilizer of
    /// the first `from` base points.
    pub(crate) fn suffix(&self, from: usize) -> StabilizerChain {
        StabilizerChain {
            degree: self.degree,
            levels: self.levels[from.min(self.levels.len())..].to_vec(),
        }
    }

    pub(crate) fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Orbit of a level's base point, 0-based, in discovery order.
    pub(crate) fn level_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub(crate) fn level_rep(&self, level: usize, point: usize) -> Option<&Permutation> {
        self.levels[level].rep(point)
    }

    /// Stabilizer `G_i` of a single point.
    pub fn point_stabilizer(&self, point: usize) -> Result<StabilizerChain> {
        self.pointwise_stabilizer(&[point])
    }

    /// Pointwise stabilizer `G_Δ`, obtained by forcing the points of `Δ`
    /// (ascending) as a base prefix.
    pub fn pointwise_stabilizer(&self, delta: &[usize]) -> Result<StabilizerChain> {
        let mut prefix = check_points(delta, self.degree)?;
        prefix.sort_unstable();
        prefix.dedup();
        Ok(self.pointwise_stabilizer0(&prefix))
    }

    pub(crate) fn pointwise_stabilizer0(&self, prefix: &[usize]) -> StabilizerChain {
        if prefix.is_empty() {
            return self.clone();
        }
        self.with_prefix0(prefix).suffix(prefix.len())
    }

    /// Representatives `g_γ`, one per point `γ` of the orbit of `point`, with
    /// `g_γ(point) = γ`, sorted by `γ`. The left cosets `g_γ·G_point`
    /// partition the group.
    pub fn coset_reps(&self, point: usize) -> Result<Vec<Permutation>> {
        let p0 = check_points(&[point], self.degree)?[0];
        if self.levels.is_empty() {
            return Ok(vec![Permutation::identity(self.degree)]);
        }
        let chain = self.with_prefix0(&[p0]);
        let mut orbit = chain.levels[0].orbit.clone();
        orbit.sort_unstable();
        Ok(orbit
            .into_iter()
            .map(|g| chain.levels[0].rep(g).expect("orbit point").clone())
            .collect())
    }

    /// Some `τ ∈ G` with `τ(a) = b`, or `None` when `a` and `b` lie in
    /// different orbits.
    pub fn transporter(&self, a: usize, b: usize) -> Result<Option<Permutation>> {
        let pts = check_points(&[a, b], self.degree)?;
        Ok(self.transporter0(pts[0], pts[1]))
    }

    pub(crate) fn transporter0(&self, a: usize, b: usize) -> Option<Permutation> {
        if a == b {
            return Some(Permutation::identity(self.degree));
        }
        if self.levels.is_empty() {
            return None;
        }
        let chain = self.with_prefix0(&[a]);
        chain.levels[0].rep(b).cloned()
    }

    /// A uniformly random element: one uniformly chosen representative per
    /// level, multiplied together. Deterministic in `seed`.
    pub fn random_element(&self, seed: u64) -> Permutation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let pick = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.mul(level.rep(pick).expect("orbit point"));
        }
        g
    }

    /// Every group element exactly once, as `u_1·u_2·…·u_m` over all choices
    /// of one transversal element per level.
    pub fn elements(&self) -> Elements<'_> {
        let mut prefix = Vec::with_capacity(self.levels.len() + 1);
        prefix.push(Permutation::identity(self.degree));
        Elements {
            chain: self,
            index: vec![0; self.levels.len()],
            prefix,
            done: false,
        }
    }
}

/// Iterator over all elements of a [`StabilizerChain`].
pub struct Elements<'a> {
    chain: &'a StabilizerChain,
    index: Vec<usize>,
    // prefix[l] = product of the chosen representatives of levels 0..l
    prefix: Vec<Permutation>,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let levels = &self.chain.levels;
        while self.prefix.len() <= levels.len() {
            let l = self.prefix.len() - 1;
            let level = &levels[l];
            let rep = level.rep(level.orbit[self.index[l]]).expect("orbit point");
            let next = self.prefix[l].mul(rep);
            self.prefix.push(next);
        }
        let item = self.prefix.last().cloned();

        // advance the odometer, last level fastest
        let mut l = levels.len();
        loop {
            if l == 0 {
                self.done = true;
                break;
            }
            l -= 1;
            self.index[l] += 1;
            if self.index[l] < levels[l].orbit.len() {
                self.prefix.truncate(l + 1);
                break;
            }
            self.index[l] = 0;
        }
        item
    }
}

/// Sifts every Schreier generator of level `cur` through the levels below it
/// and returns the first non-trivial residue with the depth where sifting
/// stopped (`levels.len()` if it passed every level).
fn first_failing_schreier_generator(levels: &[Level], cur: usize) -> Option<(Permutation, usize)> {
    let level = &levels[cur];
    for &beta in &level.orbit {
        let u_beta = level.rep(beta).expect("orbit point has a representative");
        for s in &level.generators {
            let u_image = level.rep(s.img0(beta)).expect("orbit is closed");
            let schreier = u_image.inverse().mul(&s.mul(u_beta));
            if schreier.is_identity() {
                continue;
            }
            let (residue, depth) = sift0(&levels[cur + 1..], schreier);
            let depth = depth + cur + 1;
            if depth < levels.len() || !residue.is_identity() {
                return Some((residue, depth));
            }
        }
    }
    None
}

fn sift0(levels: &[Level], mut g: Permutation) -> (Permutation, usize) {
    for (depth, level) in levels.iter().enumerate() {
        let beta = g.img0(level.base);
        match level.rep(beta) {
            Some(u) => g = u.inverse().mul(&g),
            None => return (g, depth),
        }
    }
    (g, levels.len())
}

pub(crate) fn check_points(points: &[usize], degree: usize) -> Result<Vec<usize>> {
    points
        .iter()
        .map(|&p| {
            if p == 0 || p > degree {
                Err(Error::PointOutOfRange { point: p, degree })
            } else {
                Ok(p - 1)
            }
        })
        .collect()
}
