//! End-to-end acceptance run: eleven criteria over the bundled fixture
//! catalog and seeded random groups, each checked exactly and against its
//! time budget. Prints one PASS/FAIL line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use permkit::group_file;
use permkit_core::coset_fpf::{count_non_fpf, find_fpf, has_fpf};
use permkit_core::kbase::{
    bounded_orbit_kbase, brute_force_kbase, critical_sets, cyclic_decompose, cyclic_kbase, is_base,
};
use permkit_core::kmove::{kernelize, solve_kmove, solve_kmove_unreduced, KMoveInstance, KernelResult};
use permkit_core::move_opt::{expected_move, fpf_transitive, max_move_element};
use permkit_core::oracle::{self, enumerate_group, GroupTable, DEFAULT_CAP};
use permkit_core::{ExactRational, GroupInput, Permutation, StabilizerChain};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Entry {
    name: String,
    path: PathBuf,
    group: GroupInput,
    chain: StabilizerChain,
    declared_order: Option<BigUint>,
}

impl Entry {
    fn n(&self) -> usize {
        self.group.degree()
    }

    fn table(&self) -> GroupTable {
        enumerate_group(&self.chain, &BigUint::from(DEFAULT_CAP)).unwrap()
    }
}

fn catalog() -> Vec<Entry> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "grp"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).unwrap();
            let declared_order = text
                .lines()
                .find_map(|l| l.strip_prefix("# order "))
                .and_then(|v| v.trim().parse().ok());
            let group = group_file::parse(&text).unwrap().group;
            Entry {
                name: path.file_stem().unwrap().to_string_lossy().into_owned(),
                chain: StabilizerChain::build(&group),
                path,
                group,
                declared_order,
            }
        })
        .collect()
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).unwrap()
}

fn ratio(num: &BigUint, den: usize) -> ExactRational {
    ExactRational::new(BigInt::from(num.clone()), BigInt::from(den))
}

/// Outcome of one criterion: failures collected as messages.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(msg());
        }
    }
}

fn orbit_counting(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let eligible: Vec<&Entry> = cat
        .iter()
        .filter(|e| e.n() <= 12 && e.chain.order() <= BigUint::from(5000u32))
        .collect();
    c.require(eligible.len() >= 30, || {
        format!("only {} catalog groups", eligible.len())
    });
    for e in eligible {
        let t = e.table();
        c.require(Some(e.chain.order()) == e.declared_order, || {
            format!(
                "{}: order {} differs from the declared order",
                e.name,
                e.chain.order()
            )
        });
        let fixed: usize = t.elements().iter().map(Permutation::fix_count).sum();
        let orbits = e.chain.orbits().len();
        c.require(orbits * t.len() == fixed, || {
            format!("{}: {orbits}·{} ≠ {fixed}", e.name, t.len())
        });
    }
    c
}

fn expected_move_exact(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    for e in cat {
        let t = e.table();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let pi = random_perm(e.n(), &mut rng);
            let st = oracle::stats(&t, &pi).unwrap();
            let got = expected_move(&e.chain, &pi).unwrap();
            c.require(got == ratio(&st.sum_move, t.len()), || {
                format!("{}: π = {pi}: {got}", e.name)
            });
        }
    }
    c
}

fn derandomization(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let (mut transitive, mut optimal) = (0, 0);
    for e in cat {
        let t = e.table();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for round in 0..21 {
            let pi = if round == 0 {
                Permutation::identity(e.n())
            } else {
                random_perm(e.n(), &mut rng)
            };
            let expected = expected_move(&e.chain, &pi).unwrap();
            let x = max_move_element(&e.chain, &pi).unwrap();
            let in_coset = e.chain.contains(&x.compose(&pi.inverse()).unwrap()).unwrap();
            let moved = ExactRational::from_integer(BigInt::from(x.move_count()));
            c.require(in_coset && moved >= expected, || {
                format!("{}: π = {pi}: {x}", e.name)
            });
            if e.chain.is_transitive() {
                transitive += 1;
                if x.move_count() == oracle::max_move(&t, &pi) {
                    optimal += 1;
                }
            }
        }
    }
    c.notes.push(format!(
        "reached the maximum on {optimal}/{transitive} transitive instances"
    ));
    c
}

fn transitive_derangements(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let mut count = 0;
    for e in cat.iter().filter(|e| e.n() >= 2 && e.chain.is_transitive()) {
        count += 1;
        match fpf_transitive(&e.chain) {
            Ok(x) => c.require(x.fix_count() == 0 && e.chain.contains(&x).unwrap(), || {
                format!("{}: {x} is not a derangement of the group", e.name)
            }),
            Err(err) => c.require(false, || format!("{}: {err}", e.name)),
        }
    }
    c.notes.push(format!("{count} transitive groups"));
    c
}

fn derangement_density(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    for e in cat.iter().filter(|e| e.chain.is_transitive()) {
        let t = e.table();
        let st = oracle::stats(&t, &Permutation::identity(e.n())).unwrap();
        c.require(st.fpf_count.clone() * e.n() >= BigUint::from(t.len()), || {
            format!("{}: {} derangements, |G| = {}", e.name, st.fpf_count, t.len())
        });
    }
    c
}

fn inclusion_exclusion(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let mut without = 0;
    for e in cat.iter().filter(|e| e.n() <= 10) {
        let t = e.table();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for round in 0..11 {
            let pi = if round == 0 {
                Permutation::identity(e.n())
            } else {
                random_perm(e.n(), &mut rng)
            };
            let want = oracle::count_with_fixed_point(&t, &pi);
            let got = count_non_fpf(&e.chain, &pi).unwrap();
            c.require(got == BigUint::from(want), || {
                format!("{}: π = {pi}: {got} vs {want}", e.name)
            });
            let has = has_fpf(&e.chain, &pi).unwrap();
            c.require(has == (want < t.len()), || {
                format!("{}: has_fpf wrong for π = {pi}", e.name)
            });
            if !has {
                without += 1;
            }
            let found = find_fpf(&e.chain, &pi).unwrap();
            c.require(found.is_some() == has, || {
                format!("{}: find_fpf disagrees for π = {pi}", e.name)
            });
            if let Some(x) = found {
                let ok = x.fix_count() == 0 && e.chain.contains(&x.compose(&pi.inverse()).unwrap()).unwrap();
                c.require(ok, || format!("{}: bad derangement {x}", e.name));
            }
        }
    }
    c.require(without > 0, || {
        "no instance without a derangement was exercised".into()
    });
    c.notes.push(format!("{without} cosets without a derangement"));
    c
}

fn kmove_completeness(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    for e in cat.iter().filter(|e| e.n() <= 12) {
        let best = oracle::max_move(&e.table(), &Permutation::identity(e.n()));
        for k in 1..=e.n() {
            let inst = KMoveInstance::new(e.group.clone(), k).unwrap();
            let got = solve_kmove(&inst).unwrap();
            c.require(got.is_some() == (best >= k), || {
                format!("{}: k = {k}, oracle max {best}", e.name)
            });
            if let Some(w) = got {
                c.require(w.move_count() >= k && e.chain.contains(&w).unwrap(), || {
                    format!("{}: k = {k}: bad witness {w}", e.name)
                });
            }
        }
    }
    c
}

fn kernel(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let mut taken = 0;
    for e in cat.iter().filter(|e| e.n() <= 12) {
        for k in 1..=e.n() {
            let inst = KMoveInstance::new(e.group.clone(), k).unwrap();
            if let KernelResult::Kernel(kern) = kernelize(&inst).unwrap() {
                taken += 1;
                c.require(kern.degree() < 2 * k, || {
                    format!("{}: k = {k}: degree {}", e.name, kern.degree())
                });
                c.require(kern.generators().len() <= k * (2 * k - 1), || {
                    format!("{}: k = {k}: {} generators", e.name, kern.generators().len())
                });
                let direct = solve_kmove_unreduced(&inst).unwrap().is_some();
                let reduced = solve_kmove(&inst).unwrap().is_some();
                c.require(direct == reduced, || {
                    format!("{}: k = {k}: kernel changed the answer", e.name)
                });
            }
        }
    }
    c.require(taken > 0, || "kernel branch never taken".into());
    c.notes.push(format!("kernel branch taken {taken} times"));
    c
}

/// A cyclic group: one permutation with random cycle lengths, given by
/// one or two of its powers.
fn random_cyclic(rng: &mut ChaCha8Rng, max_n: usize) -> GroupInput {
    loop {
        let n = rng.gen_range(2..=max_n);
        let mut lengths = Vec::new();
        let mut left = n;
        while left > 0 {
            let l = rng.gen_range(1..=left.min(7));
            lengths.push(l);
            left -= l;
        }
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(rng);
        let mut images: Vec<usize> = (1..=n).collect();
        let mut start = 0;
        for &l in &lengths {
            for j in 0..l {
                images[pts[start + j]] = pts[start + (j + 1) % l] + 1;
            }
            start += l;
        }
        let g = Permutation::from_images(&images).unwrap();
        let order = g.order();
        if order > BigUint::from(10_000u32) || g.is_identity() {
            continue;
        }
        let gens = if rng.gen_bool(0.5) {
            vec![g]
        } else {
            vec![
                g.pow(&BigUint::from(rng.gen_range(1u32..6))),
                g.pow(&BigUint::from(rng.gen_range(1u32..6))),
            ]
        };
        return GroupInput::new(n, gens).unwrap();
    }
}

fn cyclic_kbase_check() -> Check {
    let mut c = Check::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut exhaustive = 0;
    for _ in 0..30 {
        let g = random_cyclic(&mut rng, 15);
        let chain = StabilizerChain::build(&g);
        for k in 1..=4 {
            let got = cyclic_kbase(&g, k).unwrap();
            let brute = brute_force_kbase(&chain, k);
            c.require(got.is_some() == brute.is_some(), || {
                format!("{:?}: k = {k}", g.generators())
            });
            if let Some(b) = got {
                c.require(b.len() <= k && is_base(&chain, &b).unwrap(), || {
                    format!("{b:?} is not a base")
                });
            }
        }
        let n = g.degree();
        if n <= 10 {
            exhaustive += 1;
            let sets = critical_sets(&cyclic_decompose(&g).unwrap(), n).unwrap();
            for mask in 0u32..(1 << n) {
                let b: Vec<usize> = (1..=n).filter(|&p| mask & (1 << (p - 1)) != 0).collect();
                let hits = sets.iter().all(|s| s.iter().any(|p| b.contains(p)));
                c.require(hits == is_base(&chain, &b).unwrap(), || {
                    format!(
                        "{:?}: B = {b:?} breaks the critical-set equivalence",
                        g.generators()
                    )
                });
            }
        }
    }
    c.require(exhaustive > 0, || {
        "no group small enough for the exhaustive check".into()
    });
    c.notes.push(format!(
        "30 random cyclic groups, {exhaustive} checked over all subsets"
    ));
    c
}

/// Random group whose orbits lie inside blocks of size at most `b`.
fn random_bounded(rng: &mut ChaCha8Rng, b: usize) -> GroupInput {
    let n = rng.gen_range(2..=12);
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let mut blocks = Vec::new();
    let mut rest = &pts[..];
    while !rest.is_empty() {
        let size = rng.gen_range(1..=b.min(rest.len()));
        blocks.push(rest[..size].to_vec());
        rest = &rest[size..];
    }
    let gens = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut images: Vec<usize> = (1..=n).collect();
            for block in &blocks {
                if rng.gen_bool(0.6) {
                    let mut shuffled = block.clone();
                    shuffled.shuffle(rng);
                    for (from, to) in block.iter().zip(&shuffled) {
                        images[*from] = to + 1;
                    }
                }
            }
            Permutation::from_images(&images).unwrap()
        })
        .collect();
    GroupInput::new(n, gens).unwrap()
}

fn bounded_kbase_check(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cases: Vec<(GroupInput, usize)> = Vec::new();
    for i in 0..30 {
        let b = 2 + i % 3;
        cases.push((random_bounded(&mut rng, b), b));
    }
    for e in cat.iter().filter(|e| e.n() <= 12) {
        let widest = e.chain.orbits().iter().map(Vec::len).max().unwrap();
        if (2..=4).contains(&widest) {
            cases.push((e.group.clone(), widest));
        }
    }
    let mut rejected = 0;
    for (g, b) in &cases {
        let chain = StabilizerChain::build(g);
        for k in 1..=4 {
            if chain.order() > BigUint::from(*b).pow(k as u32) {
                rejected += 1;
            }
            let got = bounded_orbit_kbase(g, k, *b).unwrap();
            let brute = brute_force_kbase(&chain, k);
            c.require(got.is_some() == brute.is_some(), || {
                format!("{:?}, b = {b}, k = {k}", g.generators())
            });
            if let Some(base) = got {
                c.require(base.len() <= k && is_base(&chain, &base).unwrap(), || {
                    format!("{base:?} is not a base")
                });
            }
        }
    }
    c.require(cases.len() >= 20, || format!("only {} groups", cases.len()));
    c.require(rejected > 0, || "the |G| > b^k branch was never taken".into());
    c.notes
        .push(format!("{} groups, {rejected} rejections by order", cases.len()));
    c
}

fn cli_args(e: &Entry) -> Vec<Vec<String>> {
    let g = e.path.display().to_string();
    let widest = e.chain.orbits().iter().map(Vec::len).max().unwrap().to_string();
    let with = |cmd: &str, extra: &[&str]| {
        let mut v = vec![cmd.to_string(), "--group".into(), g.clone()];
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    vec![
        with("orbits", &[]),
        with("order", &["--json"]),
        with("member", &["--pi", "(1 2)"]),
        with("stab", &["--point", "1"]),
        with("expected-move", &["--seed", "5"]),
        with("max-move", &["--seed", "5", "--json"]),
        with("fpf-transitive", &[]),
        with("fpf-coset", &["--seed", "5"]),
        with("count-nonfpf", &["--seed", "5", "--json"]),
        with("k-move", &["--k", "3"]),
        with("kernel", &["--k", "3", "--json"]),
        with("k-base-brute", &["--k", "2"]),
        with("k-base-cyclic", &["--k", "2"]),
        with("k-base-bounded", &["--k", "2", "--b", &widest]),
        with("oracle-stats", &["--json"]),
    ]
}

fn determinism(cat: &[Entry]) -> Check {
    let mut c = Check::default();
    let bin = env!("CARGO_BIN_EXE_permkit");
    let mut runs = 0;
    for e in cat {
        for args in cli_args(e) {
            let a = Command::new(bin).args(&args).output().unwrap();
            let b = Command::new(bin).args(&args).output().unwrap();
            runs += 2;
            c.require(
                a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status,
                || format!("{}: {} differs between runs", e.name, args[0]),
            );
            c.require(matches!(a.status.code(), Some(0..=3)), || {
                format!("{}: {} exited with {:?}", e.name, args[0], a.status.code())
            });
        }
    }
    c.notes.push(format!("{runs} runs"));
    c
}

/// Name, time budget in seconds, and the check itself.
type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let start = Instant::now();
    let cat = catalog();
    let criteria: Vec<Criterion> = vec![
        ("orbit-counting identity", 10, Box::new(|| orbit_counting(&cat))),
        (
            "expected move is exact",
            30,
            Box::new(|| expected_move_exact(&cat)),
        ),
        (
            "descent reaches the average",
            30,
            Box::new(|| derandomization(&cat)),
        ),
        (
            "derangements of transitive groups",
            10,
            Box::new(|| transitive_derangements(&cat)),
        ),
        (
            "derangement density |G|/n",
            10,
            Box::new(|| derangement_density(&cat)),
        ),
        (
            "inclusion-exclusion counts",
            60,
            Box::new(|| inclusion_exclusion(&cat)),
        ),
        ("k-move completeness", 120, Box::new(|| kmove_completeness(&cat))),
        ("kernel size and answer", 30, Box::new(|| kernel(&cat))),
        ("cyclic k-base", 120, Box::new(cyclic_kbase_check)),
        (
            "bounded-orbit k-base",
            120,
            Box::new(|| bounded_kbase_check(&cat)),
        ),
        ("CLI determinism", 60, Box::new(|| determinism(&cat))),
    ];

    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut check = run();
        let elapsed = t.elapsed();
        if elapsed > Duration::from_secs(*budget) {
            check
                .failures
                .push(format!("took {elapsed:.1?}, budget {budget} s"));
        }
        let status = if check.failures.is_empty() { "PASS" } else { "FAIL" };
        let notes = if check.notes.is_empty() {
            String::new()
        } else {
            format!("; {}", check.notes.join("; "))
        };
        println!("{status} criterion {:>2}: {name} ({elapsed:.2?}{notes})", i + 1);
        for f in &check.failures {
            println!("    {f}");
        }
        if !check.failures.is_empty() {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
