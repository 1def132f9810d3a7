//! Serialization of pieces, posets, and verification reports.
//!
//! Words are serialized as the shortlex-minimal reduced word of the
//! element ("[]" for the identity, "[0,1,0]" for the longest element of
//! A2); the parser accepts any word, reduced or not, and renormalizes.
//! All output is deterministic: identical inputs produce byte-identical
//! text.

use serde::{Deserialize, Serialize};

use crate::aut::DiagramAut;
use crate::compact::{ClosurePoset, PieceIndex};
use crate::error::{Error, Result};
use crate::subset::NodeSet;
use crate::weyl::{Elt, WeylGroup};

/// Cap on the number of nodes a DOT or edge-list export will reduce.
pub const DOT_SIZE_LIMIT: usize = 2048;

/// Render a word as "[i,j,...]".
pub fn format_word(word: &[usize]) -> String {
    let inner: Vec<String> = word.iter().map(|i| i.to_string()).collect();
    format!("[{}]", inner.join(","))
}

/// Parse "[0,1,0]", "0,1,0", "[]", "" or "e" into a word.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .unwrap_or(trimmed);
    if inner.is_empty() || inner == "e" {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad word component {part:?} in {s:?}")))
        })
        .collect()
}

/// Parse a word and normalize it through the group.
pub fn parse_element(group: &WeylGroup, s: &str) -> Result<Elt> {
    group.element_from_word(&parse_word(s)?)
}

fn word_of(group: &WeylGroup, w: Elt) -> Vec<usize> {
    group.reduced_word(w)
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    #[serde(rename = "J")]
    j: u16,
    w: Vec<usize>,
    v: Vec<usize>,
    #[serde(rename = "K")]
    k: u16,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct PieceTableDoc {
    #[serde(rename = "type")]
    type_label: String,
    delta: Vec<usize>,
    pieces: Vec<PieceDoc>,
}

/// Serialize a piece table to JSON:
/// {"type": ..., "delta": [...], "pieces": [{"J","w","v","K","dim"}]}.
pub fn pieces_to_json(group: &WeylGroup, delta: &DiagramAut, pieces: &[PieceIndex]) -> Result<String> {
    let doc = PieceTableDoc {
        type_label: group.cartan().label(),
        delta: delta.images().to_vec(),
        pieces: pieces
            .iter()
            .map(|p| {
                Ok(PieceDoc {
                    j: p.j().0,
                    w: word_of(group, p.w()),
                    v: word_of(group, p.v()),
                    k: p.k().0,
                    dim: p.dimension(group)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Export(e.to_string()))
}

/// Parse a piece table back; every record is validated against the group
/// and the automorphism it declares.
pub fn pieces_from_json(group: &WeylGroup, text: &str) -> Result<(DiagramAut, Vec<PieceIndex>)> {
    let doc: PieceTableDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.type_label != group.cartan().label() {
        return Err(Error::Parse(format!(
            "table is for type {} but the group is {}",
            doc.type_label,
            group.cartan().label()
        )));
    }
    let delta = DiagramAut::new(group.cartan(), doc.delta.clone())?;
    let all = group.all_nodes().0;
    let mut pieces = Vec::with_capacity(doc.pieces.len());
    for rec in &doc.pieces {
        if rec.j & !all != 0 || rec.k & !all != 0 {
            return Err(Error::Parse(format!(
                "node mask out of range in record J={} K={}",
                rec.j, rec.k
            )));
        }
        let piece = PieceIndex::new(
            group,
            &delta,
            NodeSet(rec.k),
            NodeSet(rec.j),
            group.element_from_word(&rec.w)?,
            group.element_from_word(&rec.v)?,
        )?;
        let dim = piece.dimension(group)?;
        if dim != rec.dim {
            return Err(Error::Parse(format!(
                "record {} declares dim={} but the formula gives {dim}",
                piece.label(group),
                rec.dim
            )));
        }
        pieces.push(piece);
    }
    Ok((delta, pieces))
}

/// Serialize a piece table to CSV with columns (J, w_word, v_word, K, dim).
pub fn pieces_to_csv(group: &WeylGroup, pieces: &[PieceIndex]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["J", "w_word", "v_word", "K", "dim"])
        .map_err(|e| Error::Export(e.to_string()))?;
    for p in pieces {
        writer
            .write_record([
                p.j().0.to_string(),
                format_word(&word_of(group, p.w())),
                format_word(&word_of(group, p.v())),
                p.k().0.to_string(),
                p.dimension(group)?.to_string(),
            ])
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    finish_csv(writer)
}

/// One partition piece or double coset of W x W:
/// {"w1": word, "w2": word, "I": bitmask, "size": n}.
#[derive(Serialize, Deserialize)]
pub struct CosetDoc {
    pub w1: Vec<usize>,
    pub w2: Vec<usize>,
    #[serde(rename = "I")]
    pub i: u16,
    pub size: usize,
}

pub fn cosets_to_json(docs: &[CosetDoc]) -> Result<String> {
    serde_json::to_string_pretty(docs).map_err(|e| Error::Export(e.to_string()))
}

/// CSV rendering of coset docs with columns (w1, w2, I, size).
pub fn cosets_to_csv(docs: &[CosetDoc]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["w1", "w2", "I", "size"])
        .map_err(|e| Error::Export(e.to_string()))?;
    for doc in docs {
        writer
            .write_record([
                format_word(&doc.w1),
                format_word(&doc.w2),
                doc.i.to_string(),
                doc.size.to_string(),
            ])
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    finish_csv(writer)
}

/// One twisted conjugacy class, by its shortlex-minimal representative.
#[derive(Serialize)]
pub struct ClassDoc {
    pub rep: Vec<usize>,
    pub size: usize,
}

pub fn classes_to_json(docs: &[ClassDoc]) -> Result<String> {
    serde_json::to_string_pretty(docs).map_err(|e| Error::Export(e.to_string()))
}

pub fn classes_to_csv(docs: &[ClassDoc]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["rep", "size"])
        .map_err(|e| Error::Export(e.to_string()))?;
    for doc in docs {
        writer
            .write_record([format_word(&doc.rep), doc.size.to_string()])
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    finish_csv(writer)
}

#[derive(Serialize)]
struct BoundaryDoc {
    #[serde(rename = "J")]
    j: u16,
    w: Vec<usize>,
}

/// JSON list of isolated-boundary index pairs (J, w).
pub fn boundary_to_json(group: &WeylGroup, items: &[(NodeSet, Elt)]) -> Result<String> {
    let docs: Vec<BoundaryDoc> = items
        .iter()
        .map(|&(j, w)| BoundaryDoc {
            j: j.0,
            w: word_of(group, w),
        })
        .collect();
    serde_json::to_string_pretty(&docs).map_err(|e| Error::Export(e.to_string()))
}

/// CSV list of isolated-boundary index pairs with columns (J, w_word).
pub fn boundary_to_csv(group: &WeylGroup, items: &[(NodeSet, Elt)]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["J", "w_word"])
        .map_err(|e| Error::Export(e.to_string()))?;
    for &(j, w) in items {
        writer
            .write_record([j.0.to_string(), format_word(&word_of(group, w))])
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    finish_csv(writer)
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Export(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Export(e.to_string()))
}

fn piece_node_label(group: &WeylGroup, p: &PieceIndex) -> Result<String> {
    Ok(format!(
        "J={};w={};v={};dim={}",
        p.j(),
        format_word(&word_of(group, p.w())),
        format_word(&word_of(group, p.v())),
        p.dimension(group)?
    ))
}

/// Covering pairs (q, p) of the closure order restricted to `selection`,
/// by transitive reduction. Rejects antisymmetry violations.
fn reduced_edges(
    poset: &ClosurePoset,
    selection: &[usize],
) -> Result<Vec<(usize, usize)>> {
    if selection.len() > DOT_SIZE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} nodes exceed the export limit {DOT_SIZE_LIMIT}",
            selection.len()
        )));
    }
    for (a, &pa) in selection.iter().enumerate() {
        for &pb in &selection[a + 1..] {
            if poset.leq_at(pa, pb) && poset.leq_at(pb, pa) {
                return Err(Error::NotAPoset(format!(
                    "pieces {pa} and {pb} are related in both directions"
                )));
            }
        }
    }
    let mut edges = Vec::new();
    for (qi, &q) in selection.iter().enumerate() {
        for (pi, &p) in selection.iter().enumerate() {
            if qi == pi || !poset.leq_at(q, p) {
                continue;
            }
            let has_mid = selection
                .iter()
                .enumerate()
                .any(|(ri, &r)| ri != qi && ri != pi && poset.leq_at(q, r) && poset.leq_at(r, p));
            if !has_mid {
                edges.push((qi, pi));
            }
        }
    }
    Ok(edges)
}

/// DOT text for the covering relation of the closure order restricted to
/// `selection` (positions into the poset, in display order).
pub fn to_dot(group: &WeylGroup, poset: &ClosurePoset, selection: &[usize]) -> Result<String> {
    let edges = reduced_edges(poset, selection)?;
    let mut out = String::from("digraph {\n");
    for (ix, &p) in selection.iter().enumerate() {
        out.push_str(&format!(
            "  n{ix} [label=\"{}\"];\n",
            piece_node_label(group, &poset.pieces()[p])?
        ));
    }
    for (q, p) in edges {
        out.push_str(&format!("  n{q} -> n{p};\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Serialize)]
struct PosetNodeDoc {
    #[serde(rename = "J")]
    j: u16,
    w: Vec<usize>,
    v: Vec<usize>,
    dim: usize,
}

#[derive(Serialize)]
struct PosetDoc {
    #[serde(rename = "K")]
    k: u16,
    delta: Vec<usize>,
    nodes: Vec<PosetNodeDoc>,
    /// Covering pairs [q, p] as positions into `nodes`.
    edges: Vec<[usize; 2]>,
}

/// JSON edge list of the covering relation restricted to `selection`.
pub fn poset_to_json(
    group: &WeylGroup,
    poset: &ClosurePoset,
    selection: &[usize],
) -> Result<String> {
    let edges = reduced_edges(poset, selection)?;
    let first = selection.first().map(|&p| &poset.pieces()[p]);
    let doc = PosetDoc {
        k: first.map_or(0, |p| p.k().0),
        delta: first.map_or_else(Vec::new, |p| p.delta().images().to_vec()),
        nodes: selection
            .iter()
            .map(|&p| {
                let piece = &poset.pieces()[p];
                Ok(PosetNodeDoc {
                    j: piece.j().0,
                    w: word_of(group, piece.w()),
                    v: word_of(group, piece.v()),
                    dim: piece.dimension(group)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        edges: edges.into_iter().map(|(q, p)| [q, p]).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Export(e.to_string()))
}

/// One row of the Steinberg multiplicity report.
pub struct SteinbergRow {
    pub type_label: String,
    pub delta_label: String,
    pub j: NodeSet,
    pub t: NodeSet,
    pub multiplicity: i64,
    pub expected: i64,
}

/// CSV rows (type, delta, J, T, multiplicity, expected, pass).
pub fn steinberg_to_csv(rows: &[SteinbergRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["type", "delta", "J", "T", "multiplicity", "expected", "pass"])
        .map_err(|e| Error::Export(e.to_string()))?;
    for row in rows {
        writer
            .write_record([
                row.type_label.clone(),
                row.delta_label.clone(),
                row.j.0.to_string(),
                row.t.0.to_string(),
                row.multiplicity.to_string(),
                row.expected.to_string(),
                (row.multiplicity == row.expected).to_string(),
            ])
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    finish_csv(writer)
}

#[derive(Serialize)]
struct SteinbergDoc<'a> {
    #[serde(rename = "type")]
    type_label: &'a str,
    delta: &'a str,
    #[serde(rename = "J")]
    j: u16,
    #[serde(rename = "T")]
    t: u16,
    multiplicity: i64,
    expected: i64,
    pass: bool,
}

/// JSON rendering of the multiplicity report, same fields as the CSV.
pub fn steinberg_to_json(rows: &[SteinbergRow]) -> Result<String> {
    let docs: Vec<SteinbergDoc> = rows
        .iter()
        .map(|row| SteinbergDoc {
            type_label: &row.type_label,
            delta: &row.delta_label,
            j: row.j.0,
            t: row.t.0,
            multiplicity: row.multiplicity,
            expected: row.expected,
            pass: row.multiplicity == row.expected,
        })
        .collect();
    serde_json::to_string_pretty(&docs).map_err(|e| Error::Export(e.to_string()))
}

/// How a verification case failed: a broken implementation invariant, or
/// a falsified identity of the underlying mathematics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Implementation,
    Falsification,
}

impl FailureKind {
    fn label(self) -> &'static str {
        match self {
            FailureKind::Implementation => "implementation",
            FailureKind::Falsification => "falsification",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub witness: String,
}

/// Outcome of one suite on one (type, delta) configuration. Wall time is
/// carried for the caller's stderr diagnostics and never serialized, so
/// that reports are byte-identical across runs.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub type_label: String,
    pub delta_label: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_ms: u64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_falsification(&self) -> bool {
        self.failures
            .iter()
            .any(|f| f.kind == FailureKind::Falsification)
    }
}

/// Deterministic text rendering of a batch of reports, one line per
/// report plus indented witness lines, with a trailing summary.
pub fn render_reports(reports: &[Report]) -> String {
    let mut out = String::new();
    for report in reports {
        let state = if report.pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "[{state}] {} type={} delta={} cases={}",
            report.suite, report.type_label, report.delta_label, report.cases
        ));
        if !report.pass() {
            out.push_str(&format!(" failures={}", report.failures.len()));
        }
        out.push('\n');
        for failure in &report.failures {
            out.push_str(&format!(
                "  [{}] {}\n",
                failure.kind.label(),
                failure.witness
            ));
        }
    }
    let passed = reports.iter().filter(|r| r.pass()).count();
    out.push_str(&format!("summary: {passed}/{} suites passed\n", reports.len()));
    out
}
