//! Verification suites: exhaustive checks of every identity the library
//! implements, on one (type, delta) configuration at a time.
//!
//! Each suite walks its configuration space in a fixed order and records
//! one case per elementary check, so two runs over the same input produce
//! byte-identical reports. Failures carry a witness with the indices and
//! the elements involved, as reduced words. A failure is recorded as a
//! falsification when a mathematical identity under test is wrong, and as
//! an implementation failure when two of our own constructions disagree.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::admissible::{self, AdmissibleTriple};
use crate::aut::DiagramAut;
use crate::compact::{self, ClosurePoset};
use crate::error::{Error, Result};
use crate::export::{Failure, FailureKind, Report};
use crate::parabolic;
use crate::steinberg;
use crate::subset::NodeSet;
use crate::weyl::{BruhatMatrix, Elt, WeylGroup};

/// Suite names in canonical order, as accepted by `run_suite`.
pub const SUITE_NAMES: &[&str] = &[
    "partition",
    "bruhat-oracle",
    "closure-poset",
    "boundary-profile",
    "lemma7",
    "theorem-pp",
    "steinberg",
    "condition-equiv",
    "twisted-classes",
];

/// Witnesses recorded per report before the rest are only counted.
const MAX_WITNESSES: usize = 64;

struct Recorder {
    cases: usize,
    failures: Vec<Failure>,
    suppressed_impl: usize,
    suppressed_fals: usize,
}

impl Recorder {
    fn new() -> Recorder {
        Recorder {
            cases: 0,
            failures: Vec::new(),
            suppressed_impl: 0,
            suppressed_fals: 0,
        }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, kind: FailureKind, witness: String) {
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(Failure { kind, witness });
        } else {
            match kind {
                FailureKind::Implementation => self.suppressed_impl += 1,
                FailureKind::Falsification => self.suppressed_fals += 1,
            }
        }
    }

    fn fail_error(&mut self, context: &str, err: &Error) {
        let kind = if err.is_consistency() {
            FailureKind::Falsification
        } else {
            FailureKind::Implementation
        };
        self.fail(kind, format!("{context}: {err}"));
    }

    fn finish(mut self, suite: &str, group: &WeylGroup, delta: &DiagramAut, start: Instant) -> Report {
        let suppressed = self.suppressed_impl + self.suppressed_fals;
        if suppressed > 0 {
            let kind = if self.suppressed_fals > 0 {
                FailureKind::Falsification
            } else {
                FailureKind::Implementation
            };
            self.failures.push(Failure {
                kind,
                witness: format!("{suppressed} further failures not shown"),
            });
        }
        Report {
            suite: suite.to_string(),
            type_label: group.cartan().label(),
            delta_label: delta.short_label(),
            cases: self.cases,
            failures: self.failures,
            wall_ms: start.elapsed().as_millis() as u64,
        }
    }
}

fn word(group: &WeylGroup, w: Elt) -> String {
    crate::export::format_word(&group.reduced_word(w))
}

/// Admissible triples the partition and twisted-class suites run over: all
/// of them at rank 1 and 2, and a fixed representative family at rank 3
/// (the empty triple, the identity triple on node 0, and every triple on
/// the full node set).
fn triple_family(group: &WeylGroup) -> Vec<AdmissibleTriple> {
    let all_nodes = group.all_nodes();
    let triples = admissible::enumerate_triples(group.cartan());
    if all_nodes.len() <= 2 {
        return triples;
    }
    triples
        .into_iter()
        .filter(|c| {
            c.j1().is_empty()
                || c.j1() == all_nodes
                || (c.j1() == NodeSet::singleton(0) && c.j2() == NodeSet::singleton(0))
        })
        .collect()
}

/// The pieces [w1, w2, c, c'] over distinguished index pairs are pairwise
/// disjoint and cover W x W.
fn suite_partition(group: &WeylGroup, rec: &mut Recorder) {
    let n = group.order();
    let triples = triple_family(group);
    for c in &triples {
        for cp in &triples {
            let pair_label = format!("c={} c'={}", c.label(), cp.label());
            let w1s = group.quotient_reps(c.j1());
            let w2s = group.k_quotient_reps(cp.j2());
            let mut cover: Vec<u32> = vec![u32::MAX; n * n];
            let mut owners: Vec<(Elt, Elt)> = Vec::new();
            for &w1 in &w1s {
                for &w2 in &w2s {
                    rec.case();
                    let cells = match admissible::piece(group, w1, w2, c, cp) {
                        Ok(cells) => cells,
                        Err(e) => {
                            rec.fail_error(
                                &format!(
                                    "piece w1={} w2={} {pair_label}",
                                    word(group, w1),
                                    word(group, w2)
                                ),
                                &e,
                            );
                            continue;
                        }
                    };
                    let owner = owners.len() as u32;
                    owners.push((w1, w2));
                    for (x, y) in cells {
                        let ix = x.id() * n + y.id();
                        if cover[ix] == u32::MAX {
                            cover[ix] = owner;
                        } else {
                            let (p1, p2) = owners[cover[ix] as usize];
                            rec.fail(
                                FailureKind::Falsification,
                                format!(
                                    "pieces ({},{}) and ({},{}) overlap at ({},{}) for {pair_label}",
                                    word(group, p1),
                                    word(group, p2),
                                    word(group, w1),
                                    word(group, w2),
                                    word(group, x),
                                    word(group, y)
                                ),
                            );
                        }
                    }
                }
            }
            let missing = cover.iter().filter(|&&o| o == u32::MAX).count();
            if missing > 0 {
                let first = cover.iter().position(|&o| o == u32::MAX).expect("missing cell");
                rec.fail(
                    FailureKind::Falsification,
                    format!(
                        "{missing} pairs uncovered for {pair_label}, first ({},{})",
                        word(group, group.elt(first / n)),
                        word(group, group.elt(first % n))
                    ),
                );
            }
        }
    }
}

/// The lifting-property implementation of Bruhat order, the subword
/// dynamic program, and the cached matrix agree on all |W|^2 pairs.
fn suite_bruhat_oracle(group: &WeylGroup, rec: &mut Recorder) {
    let matrix = match BruhatMatrix::new(group) {
        Ok(m) => m,
        Err(e) => {
            rec.fail_error("bruhat matrix construction", &e);
            return;
        }
    };
    let elements: Vec<Elt> = group.elements_shortlex().collect();
    for &y in &elements {
        let bits = group.bruhat_downset_bits(y);
        for &x in &elements {
            rec.case();
            let oracle = bits[x.id() / 64] >> (x.id() % 64) & 1 == 1;
            let lifting = match group.bruhat_leq(x, y) {
                Ok(b) => b,
                Err(e) => {
                    rec.fail_error(&format!("bruhat_leq x={} y={}", word(group, x), word(group, y)), &e);
                    continue;
                }
            };
            let cached = matrix.leq(x, y);
            if oracle != lifting || oracle != cached {
                rec.fail(
                    FailureKind::Implementation,
                    format!(
                        "bruhat order disagrees at x={} y={}: subword={oracle} lifting={lifting} matrix={cached}",
                        word(group, x),
                        word(group, y)
                    ),
                );
            }
        }
    }
}

/// The closure relation is a partial order for every K, and the bitset
/// poset agrees with the pairwise relation at rank 2 and below.
fn suite_closure_poset(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    let small = group.all_nodes().len() <= 2;
    for k in group.all_nodes().subsets() {
        let poset = match ClosurePoset::new(group, delta, k) {
            Ok(p) => p,
            Err(e) => {
                rec.fail_error(&format!("closure poset K={k}"), &e);
                continue;
            }
        };
        rec.case();
        if let Err(witness) = poset.verify_partial_order() {
            rec.fail(FailureKind::Falsification, format!("K={k}: {witness}"));
        }
        if small {
            let pieces = poset.pieces();
            for (qi, q) in pieces.iter().enumerate() {
                for (pi, p) in pieces.iter().enumerate() {
                    rec.case();
                    match compact::closure_leq(group, q, p) {
                        Ok(pairwise) => {
                            if pairwise != poset.leq_at(qi, pi) {
                                rec.fail(
                                    FailureKind::Implementation,
                                    format!(
                                        "poset row disagrees with closure_leq at {} vs {} for K={k}",
                                        q.label(group),
                                        p.label(group)
                                    ),
                                );
                            }
                        }
                        Err(e) => rec.fail_error(
                            &format!("closure_leq {} vs {} for K={k}", q.label(group), p.label(group)),
                            &e,
                        ),
                    }
                }
            }
        }
    }
}

/// For every piece and every J' inside its J, the maximal dimension of
/// closure pieces over J' is dim - |J| + |J'|.
fn suite_boundary_profile(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    for k in group.all_nodes().subsets() {
        let poset = match ClosurePoset::new(group, delta, k) {
            Ok(p) => p,
            Err(e) => {
                rec.fail_error(&format!("closure poset K={k}"), &e);
                continue;
            }
        };
        for pi in 0..poset.len() {
            let piece = &poset.pieces()[pi];
            for j_prime in piece.j().subsets() {
                rec.case();
                match compact::boundary_profile(group, &poset, pi, j_prime) {
                    Ok(profile) => {
                        if profile.max_dim != Some(profile.expected_dim) {
                            rec.fail(
                                FailureKind::Falsification,
                                format!(
                                    "boundary of {} over J'={j_prime} has max dim {:?}, formula gives {} (K={k})",
                                    piece.label(group),
                                    profile.max_dim,
                                    profile.expected_dim
                                ),
                            );
                        }
                    }
                    Err(e) => rec.fail_error(
                        &format!("boundary profile of {} over J'={j_prime} (K={k})", piece.label(group)),
                        &e,
                    ),
                }
            }
        }
    }
}

/// The epsilon map is a bijection onto its stated image and the K1 formula
/// K cap w(J_delta) holds on every epsilon domain.
fn suite_lemma7(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    for k in group.all_nodes().subsets().filter(|&k| delta.is_stable(k)) {
        for j in group.all_nodes().subsets() {
            rec.case();
            if let Err(e) = parabolic::epsilon(group, delta, k, j) {
                rec.fail_error(&format!("epsilon K={k} J={j}"), &e);
            }
            let domain = match parabolic::epsilon_domain(group, delta, k, j) {
                Ok(d) => d,
                Err(e) => {
                    rec.fail_error(&format!("epsilon domain K={k} J={j}"), &e);
                    continue;
                }
            };
            for w in domain {
                rec.case();
                if let Err(e) = parabolic::lemma7_k1(group, delta, k, j, w) {
                    rec.fail_error(&format!("K1 at K={k} J={j} w={}", word(group, w)), &e);
                }
            }
        }
    }
}

fn first_difference(group: &WeylGroup, a: &[compact::PieceIndex], b: &[compact::PieceIndex]) -> String {
    for (pa, pb) in a.iter().zip(b.iter()) {
        if pa != pb {
            return format!("{} vs {}", pa.label(group), pb.label(group));
        }
    }
    format!("{} vs {} pieces", a.len(), b.len())
}

/// The closure of P_K in the semi-stable locus has the same index set
/// under all four descriptions, and for K = I it is the semi-stable set.
fn suite_theorem_pp(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    for k in group.all_nodes().subsets().filter(|&k| delta.is_stable(k)) {
        let mut bp = match parabolic::bp_index(group, delta, k) {
            Ok(v) => v,
            Err(e) => {
                rec.fail_error(&format!("bp index K={k}"), &e);
                continue;
            }
        };
        let pp = match parabolic::pp_descriptions(group, delta, k) {
            Ok(v) => v,
            Err(e) => {
                rec.fail_error(&format!("pp descriptions K={k}"), &e);
                continue;
            }
        };
        parabolic::canonical_sort(group, &mut bp);
        let mut named = [
            ("epsilon description", pp.by_epsilon),
            ("J-outer description", pp.by_j_outer),
            ("w-outer description", pp.by_w_outer),
        ];
        for (name, desc) in &mut named {
            rec.case();
            parabolic::canonical_sort(group, desc);
            if *desc != bp {
                rec.fail(
                    FailureKind::Falsification,
                    format!(
                        "{name} differs from the bp index at K={k}: {}",
                        first_difference(group, desc, &bp)
                    ),
                );
            }
        }
        if k == group.all_nodes() {
            rec.case();
            match compact::semistable_pieces(group, delta) {
                Ok(mut semi) => {
                    parabolic::canonical_sort(group, &mut semi);
                    if semi != bp {
                        rec.fail(
                            FailureKind::Falsification,
                            format!(
                                "closure of P_I differs from the semi-stable set: {}",
                                first_difference(group, &semi, &bp)
                            ),
                        );
                    }
                }
                Err(e) => rec.fail_error("semi-stable pieces", &e),
            }
        }
    }
}

/// Walk (J, w) with w in W^{J_delta} cap W^delta, yielding the full index
/// set I(J, I, w, delta) for each.
fn for_each_scope(
    group: &WeylGroup,
    delta: &DiagramAut,
    mut visit: impl FnMut(NodeSet, Elt, NodeSet) -> Result<()>,
) -> Result<()> {
    for j in group.all_nodes().subsets() {
        let jd = parabolic::j_delta(delta, j);
        for w in group.quotient_reps(jd) {
            if !group.is_fixed_by(delta, w)? {
                continue;
            }
            let w_inv = group.inverse(w)?;
            let i_full = group.nodes_mapped_from(w_inv, group.all_nodes()).intersection(jd);
            visit(j, w, i_full)?;
        }
    }
    Ok(())
}

/// The multiplicity identity (node-signed sum = (-1)^{|T|}) and the printed
/// closed form of the inner signed sum.
fn suite_steinberg(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    for j in group.all_nodes().subsets() {
        match steinberg::multiplicity_table(group, delta, j) {
            Ok(rows) => {
                for row in rows {
                    rec.case();
                    if row.node_sum != row.node_expected {
                        rec.fail(
                            FailureKind::Falsification,
                            format!(
                                "multiplicity of T={} at J={j} is {}, identity requires {}",
                                row.t, row.node_sum, row.node_expected
                            ),
                        );
                    }
                }
            }
            Err(e) => rec.fail_error(&format!("multiplicity table J={j}"), &e),
        }
    }
    let walked = for_each_scope(group, delta, |j, w, i_full| {
        for k in i_full.subsets().filter(|&k| delta.is_stable(k)) {
            rec.case();
            if let Err(e) = steinberg::signed_sum(group, delta, j, k, w) {
                rec.fail_error(&format!("signed sum at J={j} K={k} w={}", word(group, w)), &e);
            }
        }
        Ok(())
    });
    if let Err(e) = walked {
        rec.fail_error("scope walk", &e);
    }
}

/// Conditions (1) and (2) from the regrouping agree for every delta-stable
/// K', and the degenerate case forces w = w0 w0^{J_delta}.
fn suite_condition_equiv(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    let stable_kp: Vec<NodeSet> = group
        .all_nodes()
        .subsets()
        .filter(|&kp| delta.is_stable(kp))
        .collect();
    let walked = for_each_scope(group, delta, |j, w, i_full| {
        rec.case();
        if let Err(e) = steinberg::degenerate_case_holds(group, delta, j, w) {
            rec.fail_error(&format!("degenerate case at J={j} w={}", word(group, w)), &e);
        }
        for k in i_full.subsets().filter(|&k| delta.is_stable(k)) {
            for &kp in &stable_kp {
                rec.case();
                match steinberg::condition_equiv(group, delta, j, k, w, kp) {
                    Ok((one, two)) => {
                        if one != two {
                            rec.fail(
                                FailureKind::Falsification,
                                format!(
                                    "conditions disagree at J={j} K={k} w={} K'={kp}: (1)={one} (2)={two}",
                                    word(group, w)
                                ),
                            );
                        }
                    }
                    Err(e) => rec.fail_error(
                        &format!("condition pair at J={j} K={k} w={} K'={kp}", word(group, w)),
                        &e,
                    ),
                }
            }
        }
        Ok(())
    });
    if let Err(e) = walked {
        rec.fail_error("scope walk", &e);
    }
}

/// Distinguished double cosets are unique per coset, their order is a
/// partial order at rank 2 and below, and sigma-twisted classes of
/// W_{I(w1,w2,c,c')} biject with the double cosets inside each piece.
fn suite_twisted_classes(group: &WeylGroup, delta: &DiagramAut, rec: &mut Recorder) {
    let _ = delta;
    let n = group.order();
    let small = group.all_nodes().len() <= 2;
    let triples = triple_family(group);
    for c in &triples {
        for cp in &triples {
            let pair_label = format!("c={} c'={}", c.label(), cp.label());
            let cosets = match admissible::double_cosets(group, c, cp) {
                Ok(v) => v,
                Err(e) => {
                    rec.fail_error(&format!("double cosets for {pair_label}"), &e);
                    continue;
                }
            };
            for _ in &cosets {
                rec.case();
            }
            let mut coset_of: Vec<u32> = vec![u32::MAX; n * n];
            for (ci, coset) in cosets.iter().enumerate() {
                for &(a, b) in coset.pairs() {
                    coset_of[a.id() * n + b.id()] = ci as u32;
                }
            }
            if small {
                verify_coset_order(group, &cosets, &pair_label, rec);
            }
            for &w1 in &group.quotient_reps(c.j1()) {
                for &w2 in &group.k_quotient_reps(cp.j2()) {
                    rec.case();
                    if let Err(e) = check_class_bijection(group, w1, w2, c, cp, &coset_of, &pair_label) {
                        rec.fail_error(
                            &format!("twisted classes at w1={} w2={} {pair_label}", word(group, w1), word(group, w2)),
                            &e,
                        );
                    }
                }
            }
        }
    }
}

/// Reflexivity, antisymmetry, and transitivity of coset_leq on the
/// distinguished cosets.
fn verify_coset_order(
    group: &WeylGroup,
    cosets: &[admissible::DoubleCoset],
    pair_label: &str,
    rec: &mut Recorder,
) {
    let dist: Vec<&admissible::DoubleCoset> =
        cosets.iter().filter(|o| o.is_distinguished()).collect();
    let m = dist.len();
    let mut leq = vec![false; m * m];
    for (a, oa) in dist.iter().enumerate() {
        for (b, ob) in dist.iter().enumerate() {
            match admissible::coset_leq(group, oa, ob) {
                Ok(v) => leq[a * m + b] = v,
                Err(e) => {
                    rec.fail_error(&format!("coset_leq for {pair_label}"), &e);
                    return;
                }
            }
        }
    }
    let rep = |o: &admissible::DoubleCoset| {
        let (a, b) = o.distinguished_pair().expect("distinguished");
        format!("({},{})", word(group, a), word(group, b))
    };
    for a in 0..m {
        rec.case();
        if !leq[a * m + a] {
            rec.fail(
                FailureKind::Falsification,
                format!("coset order is not reflexive at {} for {pair_label}", rep(dist[a])),
            );
        }
        for b in 0..m {
            if a != b && leq[a * m + b] && leq[b * m + a] {
                rec.fail(
                    FailureKind::Falsification,
                    format!(
                        "coset order is not antisymmetric between {} and {} for {pair_label}",
                        rep(dist[a]),
                        rep(dist[b])
                    ),
                );
            }
            for t in 0..m {
                if leq[a * m + b] && leq[b * m + t] && !leq[a * m + t] {
                    rec.fail(
                        FailureKind::Falsification,
                        format!(
                            "coset order is not transitive through {} for {pair_label}",
                            rep(dist[b])
                        ),
                    );
                }
            }
        }
    }
}

/// w -> (w1 w, w2) sends distinct twisted classes to distinct double
/// cosets and hits exactly the cosets inside the piece [w1, w2, c, c'].
fn check_class_bijection(
    group: &WeylGroup,
    w1: Elt,
    w2: Elt,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
    coset_of: &[u32],
    pair_label: &str,
) -> Result<()> {
    let n = group.order();
    let sigma = admissible::sigma_of_piece(group, w1, w2, c, cp)?;
    let classes = admissible::twisted_classes(group, &sigma);
    let mut hit = BTreeSet::new();
    for class in &classes {
        let pair = (group.multiply(w1, class[0])?, w2);
        let cid = coset_of[pair.0.id() * n + pair.1.id()];
        if !hit.insert(cid) {
            return Err(Error::Consistency(format!(
                "two twisted classes map into one double coset at w1={} w2={} class rep {} for {pair_label}",
                word(group, w1),
                word(group, w2),
                word(group, class[0])
            )));
        }
    }
    let contained: BTreeSet<u32> = admissible::piece(group, w1, w2, c, cp)?
        .into_iter()
        .map(|(x, y)| coset_of[x.id() * n + y.id()])
        .collect();
    if hit != contained {
        return Err(Error::Consistency(format!(
            "twisted classes hit {} cosets but the piece contains {} at w1={} w2={} for {pair_label}",
            hit.len(),
            contained.len(),
            word(group, w1),
            word(group, w2)
        )));
    }
    Ok(())
}

/// Run one suite by name.
pub fn run_suite(group: &WeylGroup, delta: &DiagramAut, name: &str) -> Result<Report> {
    let start = Instant::now();
    let mut rec = Recorder::new();
    match name {
        "partition" => suite_partition(group, &mut rec),
        "bruhat-oracle" => suite_bruhat_oracle(group, &mut rec),
        "closure-poset" => suite_closure_poset(group, delta, &mut rec),
        "boundary-profile" => suite_boundary_profile(group, delta, &mut rec),
        "lemma7" => suite_lemma7(group, delta, &mut rec),
        "theorem-pp" => suite_theorem_pp(group, delta, &mut rec),
        "steinberg" => suite_steinberg(group, delta, &mut rec),
        "condition-equiv" => suite_condition_equiv(group, delta, &mut rec),
        "twisted-classes" => suite_twisted_classes(group, delta, &mut rec),
        other => {
            return Err(Error::Parse(format!(
                "unknown suite {other:?}; known suites: {}",
                SUITE_NAMES.join(", ")
            )))
        }
    }
    Ok(rec.finish(name, group, delta, start))
}

/// Run every suite in canonical order.
pub fn run_all(group: &WeylGroup, delta: &DiagramAut) -> Result<Vec<Report>> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(group, delta, name))
        .collect()
}
