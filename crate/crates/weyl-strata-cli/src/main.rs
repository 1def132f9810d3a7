//! Command-line interface: enumerate piece tables, export closure posets,
//! inspect the twisted-class partition, print multiplicity tables, and run
//! the verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails on an
//! implementation invariant, 2 on usage or configuration errors, 3 when a
//! mathematical identity under test is falsified (the witness is printed).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weyl_strata::admissible::{self, AdmissibleTriple, TwistAut};
use weyl_strata::compact::{self, ClosurePoset, PieceIndex};
use weyl_strata::export::{self, ClassDoc, CosetDoc, Report, SteinbergRow};
use weyl_strata::parabolic;
use weyl_strata::steinberg;
use weyl_strata::verify;
use weyl_strata::{
    CartanMatrix, DiagramAut, Error, NodeSet, Result, TypeName, WeylGroup, DEFAULT_RANK_CAP,
};

#[derive(Parser)]
#[command(
    name = "weyl-strata",
    about = "Weyl group combinatorics: stable-piece indexing, closure posets, twisted classes, and multiplicity tables",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a piece index table.
    Enumerate(EnumerateArgs),
    /// Export the closure downset of one piece as a poset.
    Closure(ClosureArgs),
    /// Run verification suites and report pass/fail per suite.
    Verify(VerifyArgs),
    /// Partition pieces, distinguished cosets, or twisted classes for the
    /// triple induced by delta on a stable subset K.
    TwistedClasses(TwistedArgs),
    /// Multiplicity report: signed counts per (J, T) against the expected
    /// sign.
    SteinbergTable(SteinbergArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Named Cartan type, e.g. A2, B3, G2.
    #[arg(long = "type", value_name = "NAME", conflicts_with = "matrix")]
    type_name: Option<String>,

    /// Explicit Cartan matrix, e.g. "[[2,-1],[-1,2]]".
    #[arg(long, value_name = "ROWS")]
    matrix: Option<String>,

    /// Diagram automorphism as the image list of the nodes, e.g. "1,0".
    /// Defaults to the identity.
    #[arg(long, value_name = "IMAGES")]
    delta: Option<String>,

    /// Write output to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Fmt {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    group: GroupArgs,

    /// All pieces [J, w, v] of the K-family, over every J.
    #[arg(long, group = "what")]
    pieces: bool,

    /// The semi-stable pieces [J, e, e] of the full-K family.
    #[arg(long, group = "what")]
    semistable: bool,

    /// The index pieces of the closure of P_K in the semi-stable locus.
    #[arg(long = "parabolic-closure", group = "what")]
    parabolic_closure: bool,

    /// The isolated-boundary index pairs (J, w) for K.
    #[arg(long = "isolated-boundary", group = "what")]
    isolated_boundary: bool,

    /// Node subset K: comma-separated indices, "" for the empty set,
    /// "all" for every node.
    #[arg(long = "K", value_name = "SET", default_value = "")]
    k: String,

    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
}

#[derive(Args)]
struct ClosureArgs {
    #[command(flatten)]
    group: GroupArgs,

    /// Node subset K of the piece family.
    #[arg(long = "K", value_name = "SET", default_value = "")]
    k: String,

    /// Node subset J of the piece.
    #[arg(long = "J", value_name = "SET", default_value = "")]
    j: String,

    /// Word for the w component; normalized to the minimal coset
    /// representative.
    #[arg(long, value_name = "WORD", default_value = "[]")]
    w: String,

    /// Word for the v component; normalized to the minimal coset
    /// representative.
    #[arg(long, value_name = "WORD", default_value = "[]")]
    v: String,

    /// Output format.
    #[arg(long, value_enum, default_value = "dot")]
    format: Fmt,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    group: GroupArgs,

    /// Suite to run, or "all": partition, bruhat-oracle, closure-poset,
    /// boundary-profile, lemma7, theorem-pp, steinberg, condition-equiv,
    /// twisted-classes.
    #[arg(long, value_name = "NAME", default_value = "all")]
    suite: String,

    /// Worker threads to fan suites across; results merge in canonical
    /// order regardless.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TwistedMode {
    /// One record per index pair (w1, w2) of the partition.
    Pieces,
    /// One record per distinguished double coset.
    Cosets,
    /// Twisted conjugacy classes of W_K under w -> x w delta(x)^{-1}.
    Classes,
}

#[derive(Args)]
struct TwistedArgs {
    #[command(flatten)]
    group: GroupArgs,

    /// Delta-stable node subset K carrying the triple (K, delta(K)).
    #[arg(long = "K", value_name = "SET", default_value = "all")]
    k: String,

    /// What to list.
    #[arg(long, value_enum, default_value = "pieces")]
    mode: TwistedMode,

    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Signs {
    /// Expected sign (-1)^|T| with node-count signs in the sum.
    Nodes,
    /// Expected sign (-1)^orb(T) with delta-orbit-count signs in the sum.
    Orbits,
}

#[derive(Args)]
struct SteinbergArgs {
    #[command(flatten)]
    group: GroupArgs,

    /// Node subset J, or "all" to iterate every subset.
    #[arg(long = "J", value_name = "SET", default_value = "all")]
    j: String,

    /// Sign convention for the sum and the expected column.
    #[arg(long, value_enum, default_value = "nodes")]
    signs: Signs,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Fmt,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_consistency() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Closure(args) => cmd_closure(args),
        Command::Verify(args) => cmd_verify(args),
        Command::TwistedClasses(args) => cmd_twisted(args),
        Command::SteinbergTable(args) => cmd_steinberg(args),
    }
}

fn rank_cap() -> Result<usize> {
    match std::env::var("WEYL_STRATA_RANK_CAP") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad WEYL_STRATA_RANK_CAP value {text:?}"))),
        Err(_) => Ok(DEFAULT_RANK_CAP),
    }
}

fn resolve_group(args: &GroupArgs) -> Result<(WeylGroup, DiagramAut)> {
    let cap = rank_cap()?;
    let cartan = match (&args.type_name, &args.matrix) {
        (Some(name), None) => CartanMatrix::of_type(TypeName::parse(name)?, cap)?,
        (None, Some(rows)) => CartanMatrix::parse_matrix(rows, cap)?,
        (None, None) => {
            return Err(Error::Parse("one of --type or --matrix is required".into()))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let group = WeylGroup::build(cartan)?;
    let delta = match &args.delta {
        None => DiagramAut::identity(group.cartan()),
        Some(text) => {
            let images = export::parse_word(text)?;
            DiagramAut::new(group.cartan(), images)?
        }
    };
    Ok((group, delta))
}

fn parse_nodes(group: &WeylGroup, text: &str) -> Result<NodeSet> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(NodeSet::EMPTY);
    }
    if trimmed == "all" {
        return Ok(group.all_nodes());
    }
    let mut set = NodeSet::EMPTY;
    for part in trimmed.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad node index {part:?}")))?;
        if i >= group.rank() {
            return Err(Error::Parse(format!(
                "node {i} is out of range for rank {}",
                group.rank()
            )));
        }
        set = set.union(NodeSet::singleton(i));
    }
    Ok(set)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    let body = if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    };
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Export(e.to_string())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn reject_format(fmt: Fmt, allowed: &[Fmt], what: &str) -> Result<()> {
    if allowed.contains(&fmt) {
        Ok(())
    } else {
        Err(Error::Parse(format!("unsupported format for {what}")))
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<ExitCode> {
    let (group, delta) = resolve_group(&args.group)?;
    let k = parse_nodes(&group, &args.k)?;
    if args.isolated_boundary {
        reject_format(args.format, &[Fmt::Json, Fmt::Csv], "isolated boundary")?;
        let items = parabolic::isolated_boundary_index(&group, &delta, k)?;
        let text = match args.format {
            Fmt::Json => export::boundary_to_json(&group, &items)?,
            _ => export::boundary_to_csv(&group, &items)?,
        };
        emit(args.group.out.as_ref(), &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    let mut pieces = if args.semistable {
        compact::semistable_pieces(&group, &delta)?
    } else if args.parabolic_closure {
        parabolic::bp_index(&group, &delta, k)?
    } else if args.pieces {
        compact::enumerate_pieces(&group, &delta, k)?
    } else {
        return Err(Error::Parse(
            "pick one of --pieces, --semistable, --parabolic-closure, --isolated-boundary".into(),
        ));
    };
    parabolic::canonical_sort(&group, &mut pieces);
    reject_format(args.format, &[Fmt::Json, Fmt::Csv], "piece tables")?;
    let text = match args.format {
        Fmt::Json => export::pieces_to_json(&group, &delta, &pieces)?,
        _ => export::pieces_to_csv(&group, &pieces)?,
    };
    emit(args.group.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_closure(args: ClosureArgs) -> Result<ExitCode> {
    let (group, delta) = resolve_group(&args.group)?;
    let k = parse_nodes(&group, &args.k)?;
    let j = parse_nodes(&group, &args.j)?;
    let w = export::parse_element(&group, &args.w)?;
    let v = export::parse_element(&group, &args.v)?;
    let w_min = group.min_coset_rep(w, NodeSet::EMPTY, delta.apply_set(j));
    let v_min = group.min_coset_rep(v, k, NodeSet::EMPTY);
    let piece = PieceIndex::new(&group, &delta, k, j, w_min, v_min)?;
    let poset = ClosurePoset::new(&group, &delta, k)?;
    let position = poset
        .position(&piece)
        .ok_or_else(|| Error::InvalidIndex(format!("{} is not in the K={k} family", piece.label(&group))))?;
    let selection = poset.downset(position);
    reject_format(args.format, &[Fmt::Dot, Fmt::Json], "poset export")?;
    let text = match args.format {
        Fmt::Json => export::poset_to_json(&group, &poset, &selection)?,
        _ => export::to_dot(&group, &poset, &selection)?,
    };
    emit(args.group.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Run suites across a worker pool, merging results in input order.
fn run_pool(
    group: &WeylGroup,
    delta: &DiagramAut,
    names: &[&str],
    jobs: usize,
) -> Result<Vec<Report>> {
    if jobs <= 1 || names.len() <= 1 {
        return names
            .iter()
            .map(|name| verify::run_suite(group, delta, name))
            .collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Report>>>> =
        names.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(names.len()) {
            scope.spawn(|| loop {
                let ix = next.fetch_add(1, Ordering::Relaxed);
                if ix >= names.len() {
                    break;
                }
                let report = verify::run_suite(group, delta, names[ix]);
                *slots[ix].lock().expect("result slot") = Some(report);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("result slot").expect("worker filled slot"))
        .collect()
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (group, delta) = resolve_group(&args.group)?;
    if args.jobs == 0 {
        return Err(Error::Parse("--jobs must be at least 1".into()));
    }
    let names: Vec<&str> = if args.suite == "all" {
        verify::SUITE_NAMES.to_vec()
    } else if verify::SUITE_NAMES.contains(&args.suite.as_str()) {
        vec![verify::SUITE_NAMES
            .iter()
            .find(|&&n| n == args.suite)
            .expect("name present")]
    } else {
        return Err(Error::Parse(format!(
            "unknown suite {:?}; known suites: all, {}",
            args.suite,
            verify::SUITE_NAMES.join(", ")
        )));
    };
    let reports = run_pool(&group, &delta, &names, args.jobs)?;
    for report in &reports {
        eprintln!("{} finished in {} ms", report.suite, report.wall_ms);
    }
    emit(args.group.out.as_ref(), &export::render_reports(&reports))?;
    if reports.iter().any(|r| r.has_falsification()) {
        Ok(ExitCode::from(3))
    } else if reports.iter().any(|r| !r.pass()) {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn delta_triple(group: &WeylGroup, delta: &DiagramAut, k: NodeSet) -> Result<AdmissibleTriple> {
    if !delta.is_stable(k) {
        return Err(Error::KNotDeltaStable(format!(
            "K={k} is not stable under delta={delta}"
        )));
    }
    let pairs: Vec<(usize, usize)> = k.iter().map(|i| (i, delta.apply(i))).collect();
    AdmissibleTriple::new(group.cartan(), &pairs)
}

fn cmd_twisted(args: TwistedArgs) -> Result<ExitCode> {
    let (group, delta) = resolve_group(&args.group)?;
    let k = parse_nodes(&group, &args.k)?;
    reject_format(args.format, &[Fmt::Json, Fmt::Csv], "twisted classes")?;
    if args.mode == TwistedMode::Classes {
        if !delta.is_stable(k) {
            return Err(Error::KNotDeltaStable(format!(
                "K={k} is not stable under delta={delta}"
            )));
        }
        let pairs: Vec<(usize, usize)> = k.iter().map(|i| (i, delta.apply(i))).collect();
        let sigma = TwistAut::new(k, &pairs)?;
        let docs: Vec<ClassDoc> = admissible::twisted_classes(&group, &sigma)
            .into_iter()
            .map(|class| ClassDoc {
                rep: group.reduced_word(class[0]),
                size: class.len(),
            })
            .collect();
        let text = match args.format {
            Fmt::Json => export::classes_to_json(&docs)?,
            _ => export::classes_to_csv(&docs)?,
        };
        emit(args.group.out.as_ref(), &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    let c = delta_triple(&group, &delta, k)?;
    let docs = match args.mode {
        TwistedMode::Pieces => {
            let mut docs = Vec::new();
            for &w1 in &group.quotient_reps(c.j1()) {
                for &w2 in &group.k_quotient_reps(c.j2()) {
                    let i_set = admissible::compute_i(&group, w1, w2, &c, &c)?;
                    let size = admissible::piece(&group, w1, w2, &c, &c)?.len();
                    docs.push(CosetDoc {
                        w1: group.reduced_word(w1),
                        w2: group.reduced_word(w2),
                        i: i_set.0,
                        size,
                    });
                }
            }
            docs
        }
        TwistedMode::Cosets => {
            let mut docs = Vec::new();
            for coset in admissible::double_cosets(&group, &c, &c)? {
                let Some((w1, w2)) = coset.distinguished_pair() else {
                    continue;
                };
                let i_set = admissible::compute_i(&group, w1, w2, &c, &c)?;
                docs.push(CosetDoc {
                    w1: group.reduced_word(w1),
                    w2: group.reduced_word(w2),
                    i: i_set.0,
                    size: coset.len(),
                });
            }
            docs
        }
        TwistedMode::Classes => unreachable!("handled above"),
    };
    let text = match args.format {
        Fmt::Json => export::cosets_to_json(&docs)?,
        _ => export::cosets_to_csv(&docs)?,
    };
    emit(args.group.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_steinberg(args: SteinbergArgs) -> Result<ExitCode> {
    let (group, delta) = resolve_group(&args.group)?;
    reject_format(args.format, &[Fmt::Csv, Fmt::Json], "multiplicity report")?;
    let js: Vec<NodeSet> = if args.j.trim() == "all" {
        group.all_nodes().subsets().collect()
    } else {
        vec![parse_nodes(&group, &args.j)?]
    };
    let mut rows = Vec::new();
    for &j in &js {
        for row in steinberg::multiplicity_table(&group, &delta, j)? {
            let (multiplicity, expected) = match args.signs {
                Signs::Nodes => (row.node_sum, row.node_expected),
                Signs::Orbits => (row.orbit_sum, row.orbit_expected),
            };
            rows.push(SteinbergRow {
                type_label: group.cartan().label(),
                delta_label: delta.short_label(),
                j,
                t: row.t,
                multiplicity,
                expected,
            });
        }
    }
    let text = match args.format {
        Fmt::Json => export::steinberg_to_json(&rows)?,
        _ => export::steinberg_to_csv(&rows)?,
    };
    emit(args.group.out.as_ref(), &text)?;
    if rows.iter().any(|r| r.multiplicity != r.expected) {
        Ok(ExitCode::from(3))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
