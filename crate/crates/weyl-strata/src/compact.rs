//! Stable-piece indexing of the wonderful compactification.
//!
//! For a diagram automorphism delta and a node set K, the compactification
//! decomposes into pieces [J, w, v] indexed by J inside I, w in W^{delta(J)}
//! and v in {}^K W. This module carries the combinatorial shadow of that
//! geometry: dimensions, the closure order between pieces, saturation of
//! K = empty pieces into larger families, the K_1 normalization of a piece,
//! and the semi-stable sublist.

use crate::aut::DiagramAut;
use crate::error::{Error, Result};
use crate::subset::NodeSet;
use crate::weyl::{BruhatMatrix, Elt, WeylGroup};

/// Cap on the number of pieces a dense closure poset will materialize.
pub const POSET_SIZE_LIMIT: usize = 65536;

/// Index of one piece [J, w, v] within the family determined by (K, delta).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PieceIndex {
    j: NodeSet,
    w: Elt,
    v: Elt,
    k: NodeSet,
    delta: DiagramAut,
}

impl PieceIndex {
    /// Validate an index: w must be minimal in w W_{delta(J)} and v minimal
    /// in W_K v.
    pub fn new(
        group: &WeylGroup,
        delta: &DiagramAut,
        k: NodeSet,
        j: NodeSet,
        w: Elt,
        v: Elt,
    ) -> Result<PieceIndex> {
        if delta.fingerprint() != group.fingerprint() {
            return Err(Error::AutMismatch(
                "automorphism was built for a different Cartan matrix".into(),
            ));
        }
        group.check(w)?;
        group.check(v)?;
        let all = group.all_nodes();
        if !j.is_subset_of(all) || !k.is_subset_of(all) {
            return Err(Error::InvalidIndex(format!(
                "node sets J={j} K={k} exceed the diagram"
            )));
        }
        let dj = delta.apply_set(j);
        if !group.right_descents(w).intersection(dj).is_empty() {
            return Err(Error::InvalidIndex(format!(
                "w={:?} is not minimal modulo W_{dj}",
                group.reduced_word(w)
            )));
        }
        if !group.left_descents(v).intersection(k).is_empty() {
            return Err(Error::InvalidIndex(format!(
                "v={:?} is not minimal modulo left W_{k}",
                group.reduced_word(v)
            )));
        }
        Ok(PieceIndex {
            j,
            w,
            v,
            k,
            delta: delta.clone(),
        })
    }

    pub fn j(&self) -> NodeSet {
        self.j
    }

    pub fn w(&self) -> Elt {
        self.w
    }

    pub fn v(&self) -> Elt {
        self.v
    }

    pub fn k(&self) -> NodeSet {
        self.k
    }

    pub fn delta(&self) -> &DiagramAut {
        &self.delta
    }

    fn same_family(&self, other: &PieceIndex) -> bool {
        self.k == other.k && self.delta == other.delta
    }

    /// Dimension of the piece: l(w0) + |J| + l(v) - l(w) + l(w0^K).
    pub fn dimension(&self, group: &WeylGroup) -> Result<usize> {
        if self.delta.fingerprint() != group.fingerprint() {
            return Err(Error::AutMismatch(
                "automorphism was built for a different Cartan matrix".into(),
            ));
        }
        let total = group.length(group.longest_element()) as i64 + self.j.len() as i64
            + group.length(self.v) as i64
            - group.length(self.w) as i64
            + group.length(group.longest_element_in(self.k)) as i64;
        usize::try_from(total)
            .map_err(|_| Error::InvalidIndex(format!("negative dimension for {self:?}")))
    }

    pub fn label(&self, group: &WeylGroup) -> String {
        format!(
            "[J={};w={:?};v={:?}]",
            self.j,
            group.reduced_word(self.w),
            group.reduced_word(self.v)
        )
    }
}

/// All pieces of the (K, delta) family in canonical order: J ascending as a
/// bitmask, then w shortlex within W^{delta(J)}, then v shortlex within
/// {}^K W.
pub fn enumerate_pieces(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
) -> Result<Vec<PieceIndex>> {
    if delta.fingerprint() != group.fingerprint() {
        return Err(Error::AutMismatch(
            "automorphism was built for a different Cartan matrix".into(),
        ));
    }
    let k_reps = group.k_quotient_reps(k);
    let mut out = Vec::new();
    for j in group.all_nodes().subsets() {
        let dj = delta.apply_set(j);
        for w in group.quotient_reps(dj) {
            for &v in &k_reps {
                out.push(PieceIndex {
                    j,
                    w,
                    v,
                    k,
                    delta: delta.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// The semi-stable locus: within the K = I family, the pieces [J, e, e].
pub fn semistable_pieces(group: &WeylGroup, delta: &DiagramAut) -> Result<Vec<PieceIndex>> {
    let e = group.identity();
    group
        .all_nodes()
        .subsets()
        .map(|j| PieceIndex::new(group, delta, group.all_nodes(), j, e, e))
        .collect()
}

/// The closure order: a <= b exactly when the piece of a lies in the
/// closure of the piece of b, which holds when a.J is inside b.J and some
/// x in W_K, y in W_{b.J} satisfy x a.w >= b.w delta(y) and x a.v <= b.v y.
pub fn closure_leq(group: &WeylGroup, a: &PieceIndex, b: &PieceIndex) -> Result<bool> {
    if !a.same_family(b) {
        return Err(Error::IndexMismatch(
            "pieces come from different (K, delta) families".into(),
        ));
    }
    if a.delta.fingerprint() != group.fingerprint() {
        return Err(Error::AutMismatch(
            "automorphism was built for a different Cartan matrix".into(),
        ));
    }
    if !a.j.is_subset_of(b.j) {
        return Ok(false);
    }
    let j_elems = group.parabolic_elements(b.j);
    for x in group.parabolic_elements(a.k) {
        let xw = group.multiply(x, a.w)?;
        let xv = group.multiply(x, a.v)?;
        for &y in &j_elems {
            let wdy = group.multiply(b.w, group.apply_aut(&b.delta, y)?)?;
            let vy = group.multiply(b.v, y)?;
            if group.bruhat_leq(wdy, xw)? && group.bruhat_leq(xv, vy)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Dense closure order over one whole (K, delta) family.
///
/// Rows are bitsets over the pieces, laid out in (J, w)-major blocks whose
/// v-span is padded to whole 64-bit words, so that the per-(x, y) union of
/// a w-set with a v-set is a word-aligned blit.
pub struct ClosurePoset {
    pieces: Vec<PieceIndex>,
    /// Block index of each (J, w) pair in enumeration order.
    piece_block: Vec<usize>,
    piece_voffset: Vec<usize>,
    blk_words: usize,
    n_blocks: usize,
    rows: Vec<u64>,
}

impl ClosurePoset {
    pub fn new(group: &WeylGroup, delta: &DiagramAut, k: NodeSet) -> Result<ClosurePoset> {
        let pieces = enumerate_pieces(group, delta, k)?;
        if pieces.len() > POSET_SIZE_LIMIT {
            return Err(Error::TooLarge(format!(
                "{} pieces exceed the poset limit {POSET_SIZE_LIMIT}",
                pieces.len()
            )));
        }
        let bruhat = BruhatMatrix::new(group)?;
        let k_reps = group.k_quotient_reps(k);
        let n_v = k_reps.len();
        let blk_words = n_v.div_ceil(64);
        let order = group.order();

        // Position of each v among the K-minimal representatives, and of
        // each (J, w) among the blocks.
        let mut v_pos: Vec<usize> = vec![usize::MAX; order];
        for (pos, &v) in k_reps.iter().enumerate() {
            v_pos[v.id()] = pos;
        }
        let mut piece_block = Vec::with_capacity(pieces.len());
        let mut piece_voffset = Vec::with_capacity(pieces.len());
        let mut block_of_jw: Vec<(NodeSet, Elt, usize)> = Vec::new();
        for piece in &pieces {
            let need_new = match block_of_jw.last() {
                Some(&(j, w, _)) => j != piece.j || w != piece.w,
                None => true,
            };
            if need_new {
                block_of_jw.push((piece.j, piece.w, block_of_jw.len()));
            }
            piece_block.push(block_of_jw.len() - 1);
            piece_voffset.push(v_pos[piece.v.id()]);
        }
        let n_blocks = block_of_jw.len();
        let row_words = n_blocks * blk_words;
        let mut rows = vec![0u64; pieces.len() * row_words];

        // Blocks grouped by J for the inner loop, with each w's id.
        let mut blocks_by_j: Vec<(NodeSet, Vec<(usize, usize)>)> = Vec::new();
        for &(j, w, b) in &block_of_jw {
            match blocks_by_j.last_mut() {
                Some((jj, list)) if *jj == j => list.push((b, w.id())),
                _ => blocks_by_j.push((j, vec![(b, w.id())])),
            }
        }

        let k_elems = group.parabolic_elements(k);
        let mut xw_at = vec![0u64; order.div_ceil(64)];
        let mut v_mask = vec![0u64; blk_words];
        for (pi, piece) in pieces.iter().enumerate() {
            let row = &mut rows[pi * row_words..(pi + 1) * row_words];
            let j_elems = group.parabolic_elements(piece.j);
            for &x in &k_elems {
                let x_inv = group.inverse(x)?;
                for &y in &j_elems {
                    let t = group.multiply(piece.w, group.apply_aut(delta, y)?)?;
                    let m = group.multiply(piece.v, y)?;
                    // xw_at holds {w' : x w' >= t} = x^{-1} (up-set of t).
                    xw_at.iter_mut().for_each(|word| *word = 0);
                    for_each_bit(bruhat.up_row(t.id() as u32), |b| {
                        let a = group.mul_ids(x_inv.id() as u32, b as u32) as usize;
                        xw_at[a / 64] |= 1 << (a % 64);
                    });
                    // v_mask holds {v' in {}^K W : x v' <= m} over v slots.
                    v_mask.iter_mut().for_each(|word| *word = 0);
                    let down = bruhat.down_row(m.id() as u32);
                    for (pos, &v) in k_reps.iter().enumerate() {
                        let xv = group.mul_ids(x.id() as u32, v.id() as u32) as usize;
                        if down[xv / 64] >> (xv % 64) & 1 == 1 {
                            v_mask[pos / 64] |= 1 << (pos % 64);
                        }
                    }
                    for (j_prime, blocks) in &blocks_by_j {
                        if !j_prime.is_subset_of(piece.j) {
                            continue;
                        }
                        for &(b, wid) in blocks {
                            if xw_at[wid / 64] >> (wid % 64) & 1 == 1 {
                                let dst = &mut row[b * blk_words..(b + 1) * blk_words];
                                for (d, &s) in dst.iter_mut().zip(&v_mask) {
                                    *d |= s;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(ClosurePoset {
            pieces,
            piece_block,
            piece_voffset,
            blk_words,
            n_blocks,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[PieceIndex] {
        &self.pieces
    }

    pub fn position(&self, piece: &PieceIndex) -> Option<usize> {
        self.pieces.iter().position(|p| p == piece)
    }

    /// Whether pieces[qi] <= pieces[pi] in the closure order.
    pub fn leq_at(&self, qi: usize, pi: usize) -> bool {
        let row = self.row(pi);
        let bit = self.piece_block[qi] * self.blk_words * 64 + self.piece_voffset[qi];
        row[bit / 64] >> (bit % 64) & 1 == 1
    }

    /// All positions q with pieces[q] <= pieces[pi].
    pub fn downset(&self, pi: usize) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&qi| self.leq_at(qi, pi)).collect()
    }

    fn row(&self, pi: usize) -> &[u64] {
        let w = self.n_blocks * self.blk_words;
        &self.rows[pi * w..(pi + 1) * w]
    }

    /// Check the partial order axioms, returning a description of the
    /// first violation.
    pub fn verify_partial_order(&self) -> std::result::Result<(), String> {
        let n = self.pieces.len();
        for p in 0..n {
            if !self.leq_at(p, p) {
                return Err(format!("relation is not reflexive at piece {p}"));
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q && self.leq_at(q, p) && self.leq_at(p, q) {
                    return Err(format!("antisymmetry fails between pieces {q} and {p}"));
                }
            }
        }
        // Transitivity: the row of every member of a downset must be a
        // subset of that downset, checked word-wise.
        for p in 0..n {
            let row_p = self.row(p);
            for q in 0..n {
                if !self.leq_at(q, p) {
                    continue;
                }
                let row_q = self.row(q);
                for (wq, wp) in row_q.iter().zip(row_p) {
                    if wq & !wp != 0 {
                        let r = find_extra_bit(row_q, row_p);
                        return Err(format!(
                            "transitivity fails: piece {r} <= {q} <= {p} but not {r} <= {p}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Covering pairs (q, p) with q < p and nothing strictly between, for
    /// rendering. Quadratic in the downset sizes; intended for small
    /// posets.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.pieces.len();
        let mut covers = Vec::new();
        for p in 0..n {
            let below: Vec<usize> = (0..n).filter(|&q| q != p && self.leq_at(q, p)).collect();
            for &q in &below {
                let has_mid = below
                    .iter()
                    .any(|&r| r != q && self.leq_at(q, r));
                if !has_mid {
                    covers.push((q, p));
                }
            }
        }
        covers
    }
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (ix, &word) in words.iter().enumerate() {
        let mut b = word;
        while b != 0 {
            let off = b.trailing_zeros() as usize;
            b &= b - 1;
            f(ix * 64 + off);
        }
    }
}

fn find_extra_bit(sub: &[u64], sup: &[u64]) -> usize {
    for (ix, (&a, &b)) in sub.iter().zip(sup).enumerate() {
        if a & !b != 0 {
            return ix * 64 + (a & !b).trailing_zeros() as usize;
        }
    }
    unreachable!("caller established a strict extra bit");
}

/// Dimensions along the boundary of one piece: the maximal dimension of a
/// smaller piece over each orbit J', against the expected linear drop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub j_prime: NodeSet,
    /// max{dim q : q <= p, q.J = J'}; None when no piece of the closure
    /// lies over J'.
    pub max_dim: Option<usize>,
    /// dim(p) - |J| + |J'|.
    pub expected_dim: usize,
}

/// The profile of piece `pi` over the orbit J'. J' must lie inside the
/// piece's J.
pub fn boundary_profile(
    group: &WeylGroup,
    poset: &ClosurePoset,
    pi: usize,
    j_prime: NodeSet,
) -> Result<BoundaryProfile> {
    let piece = &poset.pieces()[pi];
    if !j_prime.is_subset_of(piece.j()) {
        return Err(Error::InvalidIndex(format!(
            "J'={j_prime} is not a subset of J={}",
            piece.j()
        )));
    }
    let expected = piece.dimension(group)? - piece.j().len() + j_prime.len();
    let mut max_dim = None;
    for qi in 0..poset.len() {
        let q = &poset.pieces()[qi];
        if q.j() == j_prime && poset.leq_at(qi, pi) {
            let d = q.dimension(group)?;
            max_dim = Some(max_dim.map_or(d, |m: usize| m.max(d)));
        }
    }
    Ok(BoundaryProfile {
        j_prime,
        max_dim,
        expected_dim: expected,
    })
}

/// K_1 of a piece: the largest K' inside K with w^{-1}(K') simple inside J
/// and w^{-1}(K') = delta(v^{-1}(K')) as node sets. Qualifying subsets are
/// union-closed, which is re-checked.
pub fn k1_of(group: &WeylGroup, piece: &PieceIndex) -> Result<NodeSet> {
    if piece.delta.fingerprint() != group.fingerprint() {
        return Err(Error::AutMismatch(
            "automorphism was built for a different Cartan matrix".into(),
        ));
    }
    let w_inv = group.inverse(piece.w)?;
    let v_inv = group.inverse(piece.v)?;
    let qualifies = |kp: NodeSet| -> bool {
        let wk = match group.maps_into_simples(w_inv, kp) {
            Some(s) if s.is_subset_of(piece.j) => s,
            _ => return false,
        };
        match group.maps_into_simples(v_inv, kp) {
            Some(s) => piece.delta.apply_set(s) == wk,
            None => false,
        }
    };
    let mut union = NodeSet::EMPTY;
    for kp in piece.k.subsets() {
        if qualifies(kp) {
            union = union.union(kp);
        }
    }
    if !qualifies(union) {
        return Err(Error::Consistency(format!(
            "qualifying subsets are not union-closed for K1 at {}",
            piece.label(group)
        )));
    }
    Ok(union)
}

/// Saturate a K = empty piece [J, x, y] into the (K, delta) family: find
/// the unique (w, v, a, b) with x = a w delta(b), y = a v b and
/// l(y) - l(x) = l(v) - l(w), and return [J, w, v].
pub fn saturate(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
    j: NodeSet,
    x: Elt,
    y: Elt,
) -> Result<PieceIndex> {
    let source = PieceIndex::new(group, delta, NodeSet::EMPTY, j, x, y)?;
    let want: i64 = group.length(y) as i64 - group.length(x) as i64;
    let dj = delta.apply_set(j);
    let mut found: Option<(Elt, Elt)> = None;
    let j_elems = group.parabolic_elements(j);
    for a in group.parabolic_elements(k) {
        let a_inv = group.inverse(a)?;
        for &b in &j_elems {
            let db_inv = group.inverse(group.apply_aut(delta, b)?)?;
            let w = group.multiply(group.multiply(a_inv, x)?, db_inv)?;
            if !group.right_descents(w).intersection(dj).is_empty() {
                continue;
            }
            let v = group.multiply(group.multiply(a_inv, y)?, group.inverse(b)?)?;
            if !group.left_descents(v).intersection(k).is_empty() {
                continue;
            }
            if group.length(v) as i64 - group.length(w) as i64 != want {
                continue;
            }
            match found {
                None => found = Some((w, v)),
                Some(prev) if prev != (w, v) => {
                    return Err(Error::Consistency(format!(
                        "saturation of {} is not unique: both ({:?},{:?}) and ({:?},{:?}) qualify",
                        source.label(group),
                        group.reduced_word(prev.0),
                        group.reduced_word(prev.1),
                        group.reduced_word(w),
                        group.reduced_word(v),
                    )));
                }
                Some(_) => {}
            }
        }
    }
    match found {
        Some((w, v)) => PieceIndex::new(group, delta, k, j, w, v),
        None => Err(Error::NoNormalization(format!(
            "no normalized factorization of {} into the K={k} family",
            source.label(group)
        ))),
    }
}

/// The pieces of the (K, delta) family met by the closure of the
/// K-saturation of the piece [J, x, y] within its orbit: all (w, v) such
/// that some a in W_K, b in W_J satisfy
/// a w delta(b) w0^{delta(J)} w0 <= x w0^{delta(J)} w0, a v b <= y and
/// l(a w delta(b) w0^{delta(J)} w0) + l(a v b) = l(w w0^{delta(J)} w0) + l(v).
pub fn saturation_union(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
    j: NodeSet,
    x: Elt,
    y: Elt,
) -> Result<Vec<PieceIndex>> {
    PieceIndex::new(group, delta, NodeSet::EMPTY, j, x, y)?;
    let dj = delta.apply_set(j);
    let twist = group.multiply(
        group.longest_element_in(dj),
        group.longest_element(),
    )?;
    let bound_w = group.multiply(x, twist)?;
    let j_elems = group.parabolic_elements(j);
    let k_elems = group.parabolic_elements(k);
    let k_reps = group.k_quotient_reps(k);
    let mut out = Vec::new();
    for w in group.quotient_reps(dj) {
        let w_twist = group.multiply(w, twist)?;
        let target = group.length(w_twist);
        for &v in &k_reps {
            let target = target + group.length(v);
            let mut hit = false;
            'search: for &a in &k_elems {
                let aw = group.multiply(a, w)?;
                let av = group.multiply(a, v)?;
                for &b in &j_elems {
                    let lhs_w = group.multiply(group.multiply(aw, group.apply_aut(delta, b)?)?, twist)?;
                    let lhs_v = group.multiply(av, b)?;
                    if group.length(lhs_w) + group.length(lhs_v) == target
                        && group.bruhat_leq(lhs_w, bound_w)?
                        && group.bruhat_leq(lhs_v, y)?
                    {
                        hit = true;
                        break 'search;
                    }
                }
            }
            if hit {
                out.push(PieceIndex::new(group, delta, k, j, w, v)?);
            }
        }
    }
    Ok(out)
}
