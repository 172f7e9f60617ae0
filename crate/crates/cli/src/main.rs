//! `permkit`: run permutation-group algorithms on `.grp` files.
//!
//! Exit status: 0 for a positive answer or a computed value, 1 for a correct
//! negative answer, 2 for usage and input errors, 3 when a resource cap is
//! hit, 4 when an internal check fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use permkit_core::coset_fpf::{count_non_fpf, find_fpf};
use permkit_core::kbase::{bounded_orbit_kbase, brute_force_kbase, cyclic_kbase, is_base};
use permkit_core::kmove::{kernelize, solve_kmove, KMoveInstance, KernelResult};
use permkit_core::move_opt::{expected_move, fpf_transitive, max_move_element};
use permkit_core::oracle::{self, enumerate_group, DEFAULT_CAP};
use permkit_core::{Error, ExactRational, Permutation, StabilizerChain};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use permkit::group_file::{self, GroupFile};
use permkit::report::{CliError, Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "permkit",
    version,
    about = "Permutation group algorithms on .grp files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Group file: `degree: <n>` then one generator per line.
    #[arg(long, value_name = "PATH")]
    group: PathBuf,
    /// Emit a single JSON object instead of text.
    #[arg(long)]
    json: bool,
}

/// Selects the coset representative π; identity when neither flag is given.
#[derive(Args, Debug)]
struct CosetArgs {
    /// π in cycle notation, e.g. "(1 2)(3 4)".
    #[arg(long, value_name = "CYCLES", conflicts_with = "seed")]
    pi: Option<String>,
    /// Use a pseudo-random π from S_n derived from this seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct KArg {
    /// Threshold or budget, at least 1.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbits of the group.
    Orbits(Common),
    /// Group order.
    Order(Common),
    /// Whether --pi lies in the group.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "CYCLES")]
        pi: String,
    },
    /// Pointwise stabilizer of --point or --delta.
    Stab {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
        point: Option<usize>,
        /// Comma-separated points, e.g. "1,2,3".
        #[arg(long)]
        delta: Option<String>,
    },
    /// Exact average number of points moved over the coset G·π.
    ExpectedMove {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coset: CosetArgs,
    },
    /// An element of G·π moving at least the average number of points.
    MaxMove {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coset: CosetArgs,
    },
    /// A fixed-point-free element of a transitive group.
    FpfTransitive(Common),
    /// A fixed-point-free element of the coset G·π, if any.
    FpfCoset {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coset: CosetArgs,
    },
    /// Number of elements of G·π with a fixed point.
    CountNonfpf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coset: CosetArgs,
    },
    /// An element moving at least --k points, if any.
    KMove {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        k: KArg,
    },
    /// The reduced instance for --k, or an immediate witness.
    Kernel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        k: KArg,
    },
    /// Smallest base of size at most --k by exhaustive search.
    KBaseBrute {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        k: KArg,
    },
    /// Base of size at most --k for a cyclic group.
    KBaseCyclic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        k: KArg,
    },
    /// Base of size at most --k for a group with orbits of size at most --b.
    KBaseBounded {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        k: KArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        b: u64,
    },
    /// Exhaustive statistics over G·π by enumeration.
    OracleStats {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coset: CosetArgs,
        /// Refuse groups larger than this.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Orbits(_) => "orbits",
            Command::Order(_) => "order",
            Command::Member { .. } => "member",
            Command::Stab { .. } => "stab",
            Command::ExpectedMove { .. } => "expected-move",
            Command::MaxMove { .. } => "max-move",
            Command::FpfTransitive(_) => "fpf-transitive",
            Command::FpfCoset { .. } => "fpf-coset",
            Command::CountNonfpf { .. } => "count-nonfpf",
            Command::KMove { .. } => "k-move",
            Command::Kernel { .. } => "kernel",
            Command::KBaseBrute { .. } => "k-base-brute",
            Command::KBaseCyclic { .. } => "k-base-cyclic",
            Command::KBaseBounded { .. } => "k-base-bounded",
            Command::OracleStats { .. } => "oracle-stats",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Orbits(c) | Command::Order(c) | Command::FpfTransitive(c) => c,
            Command::Member { common, .. }
            | Command::Stab { common, .. }
            | Command::ExpectedMove { common, .. }
            | Command::MaxMove { common, .. }
            | Command::FpfCoset { common, .. }
            | Command::CountNonfpf { common, .. }
            | Command::KMove { common, .. }
            | Command::Kernel { common, .. }
            | Command::KBaseBrute { common, .. }
            | Command::KBaseCyclic { common, .. }
            | Command::KBaseBounded { common, .. }
            | Command::OracleStats { common, .. } => common,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.command.common().json));
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn load(common: &Common) -> Result<GroupFile, CliError> {
    let text = std::fs::read_to_string(&common.group)
        .map_err(|e| CliError::usage(format!("--group {}: {e}", common.group.display())))?;
    group_file::parse(&text).map_err(|e| CliError::usage(format!("--group {}: {e}", common.group.display())))
}

/// Attaches the offending flag to a library error.
fn flag(name: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::from_core(e, Some(name))
}

fn core(e: Error) -> CliError {
    CliError::from_core(e, None)
}

fn parse_pi(text: &str, n: usize) -> Result<Permutation, CliError> {
    Permutation::parse_cycles(text, n).map_err(flag("--pi"))
}

fn coset_pi(args: &CosetArgs, n: usize) -> Result<Permutation, CliError> {
    if let Some(text) = &args.pi {
        return parse_pi(text, n);
    }
    let Some(seed) = args.seed else {
        return Ok(Permutation::identity(n));
    };
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::from_images(&images).map_err(core)
}

fn parse_delta(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::usage(format!("--delta: `{t}` is not a point")))
        })
        .collect()
}

fn rational(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn decimal(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

fn points(p: &[usize]) -> Value {
    json!(p)
}

/// Fails with exit 4 unless `ok`.
fn verified(ok: bool, what: &str, witness: &Permutation) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::internal(format!(
            "{what} check failed for witness {witness}"
        )))
    }
}

fn in_coset(chain: &StabilizerChain, x: &Permutation, pi: &Permutation) -> Result<bool, CliError> {
    chain
        .contains(&x.compose(&pi.inverse()).map_err(core)?)
        .map_err(core)
}

fn run(command: &Command) -> Result<Report, CliError> {
    let file = load(command.common())?;
    let group = &file.group;
    let n = group.degree();
    let chain = StabilizerChain::build(group);
    let mut out = Report::new(command.name(), file.digest());

    match command {
        Command::Orbits(_) => {
            let orbits = chain.orbits();
            let text: Vec<String> = orbits
                .iter()
                .map(|o| {
                    format!(
                        "{{{}}}",
                        o.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            out.headline(Outcome::Value(text.join(" ")));
            out.field("count", json!(orbits.len()));
            out.field("orbits", json!(orbits));
        }
        Command::Order(_) => {
            out.headline(Outcome::Value(chain.order().to_string()));
            out.field("order", decimal(&chain.order()));
            out.field("base", points(&chain.base()));
        }
        Command::Member { pi, .. } => {
            let p = parse_pi(pi, n)?;
            out.headline(Outcome::decide(chain.contains(&p).map_err(core)?));
            out.field("pi", json!(p.to_string()));
        }
        Command::Stab { point, delta, .. } => {
            let delta = match (point, delta) {
                (Some(p), _) => vec![*p],
                (None, Some(d)) => parse_delta(d)?,
                (None, None) => return Err(CliError::usage("one of --point or --delta is required".into())),
            };
            let flag_name = if point.is_some() { "--point" } else { "--delta" };
            let stab = chain.pointwise_stabilizer(&delta).map_err(flag(flag_name))?;
            let mut sorted = delta.clone();
            sorted.sort_unstable();
            sorted.dedup();
            out.headline(Outcome::Value(stab.order().to_string()));
            out.field("delta", points(&sorted));
            out.field("order", decimal(&stab.order()));
            out.field(
                "generators",
                json!(stab
                    .strong_generators()
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()),
            );
        }
        Command::ExpectedMove { coset, .. } => {
            let pi = coset_pi(coset, n)?;
            let e = expected_move(&chain, &pi).map_err(core)?;
            out.headline(Outcome::Value(rational(&e)));
            out.field("pi", json!(pi.to_string()));
            out.field("expected-move", json!(rational(&e)));
        }
        Command::MaxMove { coset, .. } => {
            let pi = coset_pi(coset, n)?;
            let e = expected_move(&chain, &pi).map_err(core)?;
            let w = max_move_element(&chain, &pi).map_err(core)?;
            let moved = ExactRational::from_integer(BigInt::from(w.move_count()));
            verified(
                in_coset(&chain, &w, &pi)? && moved >= e,
                "coset membership and move",
                &w,
            )?;
            out.headline(Outcome::Value(w.to_string()));
            out.field("pi", json!(pi.to_string()));
            out.field("witness", json!(w.to_string()));
            out.field("moved", json!(w.move_count()));
            out.field("expected-move", json!(rational(&e)));
        }
        Command::FpfTransitive(_) => {
            let w = fpf_transitive(&chain).map_err(flag("--group"))?;
            verified(
                chain.contains(&w).map_err(core)? && w.fix_count() == 0,
                "fixed-point-free",
                &w,
            )?;
            out.headline(Outcome::Value(w.to_string()));
            out.field("witness", json!(w.to_string()));
            out.field("moved", json!(w.move_count()));
        }
        Command::FpfCoset { coset, .. } => {
            let pi = coset_pi(coset, n)?;
            let found = find_fpf(&chain, &pi).map_err(core)?;
            out.headline(Outcome::decide(found.is_some()));
            out.field("pi", json!(pi.to_string()));
            if let Some(w) = found {
                verified(
                    in_coset(&chain, &w, &pi)? && w.fix_count() == 0,
                    "fixed-point-free",
                    &w,
                )?;
                out.field("witness", json!(w.to_string()));
            }
        }
        Command::CountNonfpf { coset, .. } => {
            let pi = coset_pi(coset, n)?;
            let count = count_non_fpf(&chain, &pi).map_err(core)?;
            let order = chain.order();
            out.headline(Outcome::Value(count.to_string()));
            out.field("pi", json!(pi.to_string()));
            out.field("count-nonfpf", decimal(&count));
            out.field("fpf-count", decimal(&(&order - &count)));
            out.field("order", decimal(&order));
        }
        Command::KMove { k, .. } => {
            let k = usize_flag(k.k, "--k")?;
            let inst = KMoveInstance::new(group.clone(), k).map_err(flag("--k"))?;
            let found = solve_kmove(&inst).map_err(core)?;
            out.headline(Outcome::decide(found.is_some()));
            if let Some(w) = found {
                verified(
                    chain.contains(&w).map_err(core)? && w.move_count() >= k,
                    "k-move",
                    &w,
                )?;
                out.field("witness", json!(w.to_string()));
                out.field("moved", json!(w.move_count()));
            }
        }
        Command::Kernel { k, .. } => {
            let k = usize_flag(k.k, "--k")?;
            let inst = KMoveInstance::new(group.clone(), k).map_err(flag("--k"))?;
            match kernelize(&inst).map_err(core)? {
                KernelResult::Witness(w) => {
                    verified(
                        chain.contains(&w).map_err(core)? && w.move_count() >= k,
                        "k-move",
                        &w,
                    )?;
                    out.headline(Outcome::Value("witness".into()));
                    out.field("witness", json!(w.to_string()));
                    out.field("moved", json!(w.move_count()));
                }
                KernelResult::Kernel(kernel) => {
                    let bounded = kernel.degree() < 2 * k && kernel.generators().len() <= k * (2 * k - 1);
                    let lifted_ok = kernel
                        .generators()
                        .iter()
                        .all(|g| chain.contains(&kernel.lift(g, n)).unwrap_or(false));
                    if !bounded || !lifted_ok {
                        return Err(CliError::internal(
                            "kernel failed its size or membership check".into(),
                        ));
                    }
                    out.headline(Outcome::Value("kernel".into()));
                    out.field("degree", json!(kernel.degree()));
                    out.field("points", points(kernel.points()));
                    out.field(
                        "generators",
                        json!(kernel
                            .generators()
                            .iter()
                            .map(|g| g.to_string())
                            .collect::<Vec<_>>()),
                    );
                }
            }
        }
        Command::KBaseBrute { k, .. } => {
            let k = usize_flag(k.k, "--k")?;
            let found = brute_force_kbase(&chain, k);
            base_answer(&mut out, &chain, k, found)?;
        }
        Command::KBaseCyclic { k, .. } => {
            let k = usize_flag(k.k, "--k")?;
            let found = cyclic_kbase(group, k).map_err(flag("--group"))?;
            base_answer(&mut out, &chain, k, found)?;
        }
        Command::KBaseBounded { k, b, .. } => {
            let k = usize_flag(k.k, "--k")?;
            let b = usize_flag(*b, "--b")?;
            let found = bounded_orbit_kbase(group, k, b).map_err(flag("--b"))?;
            base_answer(&mut out, &chain, k, found)?;
        }
        Command::OracleStats { coset, cap, .. } => {
            let pi = coset_pi(coset, n)?;
            let table = enumerate_group(&chain, &BigUint::from(*cap)).map_err(flag("--cap"))?;
            let st = oracle::stats(&table, &pi).map_err(core)?;
            let order = BigUint::from(table.len());
            let avg = ExactRational::new(BigInt::from(st.sum_move.clone()), BigInt::from(order.clone()));
            out.headline(Outcome::Value(st.fpf_count.to_string()));
            out.field("pi", json!(pi.to_string()));
            out.field("order", decimal(&order));
            out.field("fpf-count", decimal(&st.fpf_count));
            out.field("sum-move", decimal(&st.sum_move));
            out.field("expected-move", json!(rational(&avg)));
            out.field("max-move", json!(st.max_move));
            if let Some(size) = st.min_base_size {
                out.field("min-base-size", json!(size));
            }
        }
    }
    Ok(out)
}

fn usize_flag(v: u64, name: &str) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::usage(format!("{name}: {v} is too large")))
}

fn base_answer(
    out: &mut Report,
    chain: &StabilizerChain,
    k: usize,
    found: Option<Vec<usize>>,
) -> Result<(), CliError> {
    out.headline(Outcome::decide(found.is_some()));
    if let Some(base) = found {
        if base.len() > k || !is_base(chain, &base).map_err(core)? {
            return Err(CliError::internal(format!(
                "{base:?} is not a base of size at most {k}"
            )));
        }
        out.field("base", points(&base));
        out.field("size", json!(base.len()));
    }
    Ok(())
}
