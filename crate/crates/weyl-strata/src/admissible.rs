//! Admissible triples and the induced decomposition of W x W.
//!
//! An admissible triple c = (J1, J2, delta) is a Cartan-preserving
//! bijection delta: J1 -> J2 between two node subsets; it extends to an
//! isomorphism W_{J1} -> W_{J2} and carves W x W into graphs
//! W_c = {(w, delta(w))}. A pair of triples (c, c') partitions W x W into
//! pieces indexed by (w1, w2) in W^{J1} x {}^{J'2}W, each piece a union of
//! (W_{c'}, W_c) double cosets classified by twisted conjugacy classes of a
//! parabolic subgroup W_{I(w1, w2, c, c')}.

use crate::cartan::CartanMatrix;
use crate::error::{Error, Result};
use crate::subset::NodeSet;
use crate::weyl::{Elt, WeylGroup};

const NO_IMAGE: u8 = u8::MAX;

/// An admissible triple: a Cartan-preserving bijection between node sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleTriple {
    j1: NodeSet,
    j2: NodeSet,
    images: [u8; 16],
    fp: u64,
}

impl AdmissibleTriple {
    /// Build from explicit node pairs (i, delta(i)).
    pub fn new(cartan: &CartanMatrix, pairs: &[(usize, usize)]) -> Result<AdmissibleTriple> {
        let rank = cartan.rank();
        let mut images = [NO_IMAGE; 16];
        let mut j1 = NodeSet::EMPTY;
        let mut j2 = NodeSet::EMPTY;
        for &(i, im) in pairs {
            if i >= rank || im >= rank {
                return Err(Error::NotAdmissible(format!(
                    "node pair ({i},{im}) out of range for rank {rank}"
                )));
            }
            if j1.contains(i) || j2.contains(im) {
                return Err(Error::NotAdmissible(format!(
                    "pairs {pairs:?} are not a bijection"
                )));
            }
            j1.insert(i);
            j2.insert(im);
            images[i] = im as u8;
        }
        for i in j1.iter() {
            for j in j1.iter() {
                let (a, b) = (images[i] as usize, images[j] as usize);
                if cartan.entry(a, b) != cartan.entry(i, j) {
                    return Err(Error::NotAdmissible(format!(
                        "map {pairs:?} does not preserve the Cartan matrix at ({i},{j})"
                    )));
                }
            }
        }
        Ok(AdmissibleTriple {
            j1,
            j2,
            images,
            fp: cartan.fingerprint(),
        })
    }

    /// The identity triple (J, J, id).
    pub fn identity(cartan: &CartanMatrix, j: NodeSet) -> AdmissibleTriple {
        let pairs: Vec<(usize, usize)> = j.iter().map(|i| (i, i)).collect();
        AdmissibleTriple::new(cartan, &pairs).expect("identity map preserves the Cartan matrix")
    }

    pub fn j1(&self) -> NodeSet {
        self.j1
    }

    pub fn j2(&self) -> NodeSet {
        self.j2
    }

    pub fn fingerprint(&self) -> u64 {
        self.fp
    }

    pub fn apply(&self, i: usize) -> usize {
        debug_assert!(self.j1.contains(i), "node {i} outside the triple domain");
        self.images[i] as usize
    }

    pub fn apply_set(&self, s: NodeSet) -> NodeSet {
        debug_assert!(s.is_subset_of(self.j1));
        s.iter().map(|i| self.images[i] as usize).collect()
    }

    pub fn preimage(&self, im: usize) -> usize {
        self.j1
            .iter()
            .find(|&i| self.images[i] as usize == im)
            .expect("node outside the triple codomain")
    }

    pub fn inverse_triple(&self) -> AdmissibleTriple {
        let mut images = [NO_IMAGE; 16];
        for i in self.j1.iter() {
            images[self.images[i] as usize] = i as u8;
        }
        AdmissibleTriple {
            j1: self.j2,
            j2: self.j1,
            images,
            fp: self.fp,
        }
    }

    /// The extension to W_{J1} -> W_{J2} applied to one element.
    pub fn apply_elt(&self, group: &WeylGroup, w: Elt) -> Result<Elt> {
        if self.fp != group.fingerprint() {
            return Err(Error::GroupMismatch);
        }
        group.check(w)?;
        if !group.in_parabolic(w, self.j1) {
            return Err(Error::DomainMismatch(format!(
                "element with support {} is outside W_{}",
                group.support(w),
                self.j1
            )));
        }
        let word: Vec<usize> = group
            .reduced_word(w)
            .into_iter()
            .map(|i| self.images[i] as usize)
            .collect();
        group.element_from_word(&word)
    }

    /// Label such as "0>1,1>0" for reports; "-" for the empty triple.
    pub fn label(&self) -> String {
        if self.j1.is_empty() {
            return "-".into();
        }
        self.j1
            .iter()
            .map(|i| format!("{i}>{}", self.images[i]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Every admissible triple of the diagram, ordered by (J1 mask, J2 mask,
/// image vector).
pub fn enumerate_triples(cartan: &CartanMatrix) -> Vec<AdmissibleTriple> {
    let full = NodeSet::full(cartan.rank());
    let mut out = Vec::new();
    for j1 in full.subsets() {
        let sources: Vec<usize> = j1.iter().collect();
        for j2 in full.subsets() {
            if j2.len() != j1.len() {
                continue;
            }
            let targets: Vec<usize> = j2.iter().collect();
            let mut assignment = vec![usize::MAX; sources.len()];
            let mut used = vec![false; targets.len()];
            collect_bijections(
                cartan,
                &sources,
                &targets,
                &mut assignment,
                &mut used,
                0,
                &mut out,
            );
        }
    }
    out
}

fn collect_bijections(
    cartan: &CartanMatrix,
    sources: &[usize],
    targets: &[usize],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
    out: &mut Vec<AdmissibleTriple>,
) {
    if depth == sources.len() {
        let pairs: Vec<(usize, usize)> = sources
            .iter()
            .zip(assignment.iter())
            .map(|(&s, &t)| (s, t))
            .collect();
        out.push(AdmissibleTriple::new(cartan, &pairs).expect("checked during search"));
        return;
    }
    for (ti, &t) in targets.iter().enumerate() {
        if used[ti] {
            continue;
        }
        let ok = (0..depth).all(|k| {
            cartan.entry(t, assignment[k]) == cartan.entry(sources[depth], sources[k])
                && cartan.entry(assignment[k], t) == cartan.entry(sources[k], sources[depth])
        });
        if ok {
            assignment[depth] = t;
            used[ti] = true;
            collect_bijections(cartan, sources, targets, assignment, used, depth + 1, out);
            used[ti] = false;
        }
    }
}

fn require_min_left(group: &WeylGroup, w: Elt, j: NodeSet, role: &str) -> Result<()> {
    if !group.right_descents(w).intersection(j).is_empty() {
        return Err(Error::RepNotMinimal(format!(
            "{role} is not minimal in its coset modulo W_{j}"
        )));
    }
    Ok(())
}

fn require_min_right(group: &WeylGroup, w: Elt, j: NodeSet, role: &str) -> Result<()> {
    if !group.left_descents(w).intersection(j).is_empty() {
        return Err(Error::RepNotMinimal(format!(
            "{role} is not minimal in its coset modulo left W_{j}"
        )));
    }
    Ok(())
}

fn check_triple_pair(
    group: &WeylGroup,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
) -> Result<()> {
    if c.fp != group.fingerprint() || cp.fp != group.fingerprint() {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// I(w1, w2, c, c'): the largest K inside J1 with w1(K) simple inside J'1
/// and delta'(w1(K)) = w2(delta(K)) as node sets. Qualifying subsets are
/// closed under union, which the computation re-checks.
pub fn compute_i(
    group: &WeylGroup,
    w1: Elt,
    w2: Elt,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
) -> Result<NodeSet> {
    check_triple_pair(group, c, cp)?;
    require_min_left(group, w1, c.j1, "w1")?;
    require_min_right(group, w2, cp.j2, "w2")?;
    let qualifies = |k: NodeSet| -> bool {
        let im1 = match group.maps_into_simples(w1, k) {
            Some(s) if s.is_subset_of(cp.j1) => s,
            _ => return false,
        };
        let im2 = match group.maps_into_simples(w2, c.apply_set(k)) {
            Some(s) => s,
            None => return false,
        };
        cp.apply_set(im1) == im2
    };
    let mut union = NodeSet::EMPTY;
    for k in c.j1.subsets() {
        if qualifies(k) {
            union = union.union(k);
        }
    }
    if !qualifies(union) {
        return Err(Error::Consistency(format!(
            "qualifying subsets are not union-closed at w1={:?} w2={:?}: union {union} fails",
            group.reduced_word(w1),
            group.reduced_word(w2)
        )));
    }
    Ok(union)
}

/// The piece [w1, w2, c, c'] = W_{c'} (w1 W_{I(..)}, w2) W_c as an explicit
/// sorted list of pairs.
pub fn piece(
    group: &WeylGroup,
    w1: Elt,
    w2: Elt,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
) -> Result<Vec<(Elt, Elt)>> {
    let i_set = compute_i(group, w1, w2, c, cp)?;
    let n = group.order();
    let mut visited = vec![false; n * n];
    let mut stack: Vec<(Elt, Elt)> = Vec::new();
    for u in group.parabolic_elements(i_set) {
        let seed = (group.multiply(w1, u)?, w2);
        let ix = seed.0.id() * n + seed.1.id();
        if !visited[ix] {
            visited[ix] = true;
            stack.push(seed);
        }
    }
    let mut members = Vec::new();
    while let Some((x, y)) = stack.pop() {
        members.push((x, y));
        let push = |pair: (Elt, Elt), visited: &mut Vec<bool>, stack: &mut Vec<(Elt, Elt)>| {
            let ix = pair.0.id() * n + pair.1.id();
            if !visited[ix] {
                visited[ix] = true;
                stack.push(pair);
            }
        };
        for p in cp.j1.iter() {
            let pair = (group.left_mul(p, x), group.left_mul(cp.apply(p), y));
            push(pair, &mut visited, &mut stack);
        }
        for r in c.j1.iter() {
            let pair = (group.right_mul(x, r), group.right_mul(y, c.apply(r)));
            push(pair, &mut visited, &mut stack);
        }
    }
    sort_pairs(group, &mut members);
    Ok(members)
}

fn sort_pairs(group: &WeylGroup, pairs: &mut [(Elt, Elt)]) {
    pairs.sort_by_key(|&(x, y)| (group.shortlex_rank(x), group.shortlex_rank(y)));
}

/// A node-level twisting of a parabolic subgroup: a bijection of K used to
/// twist conjugation on W_K.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistAut {
    domain: NodeSet,
    images: [u8; 16],
}

impl TwistAut {
    pub fn new(domain: NodeSet, pairs: &[(usize, usize)]) -> Result<TwistAut> {
        let mut images = [NO_IMAGE; 16];
        let mut covered = NodeSet::EMPTY;
        let mut hit = NodeSet::EMPTY;
        for &(i, im) in pairs {
            if !domain.contains(i) || !domain.contains(im) || covered.contains(i) || hit.contains(im)
            {
                return Err(Error::DomainMismatch(format!(
                    "pairs {pairs:?} are not a bijection of {domain}"
                )));
            }
            covered.insert(i);
            hit.insert(im);
            images[i] = im as u8;
        }
        if covered != domain {
            return Err(Error::DomainMismatch(format!(
                "pairs {pairs:?} do not cover {domain}"
            )));
        }
        Ok(TwistAut { domain, images })
    }

    pub fn identity(domain: NodeSet) -> TwistAut {
        let pairs: Vec<(usize, usize)> = domain.iter().map(|i| (i, i)).collect();
        TwistAut::new(domain, &pairs).expect("identity is a bijection")
    }

    pub fn domain(&self) -> NodeSet {
        self.domain
    }

    pub fn apply(&self, i: usize) -> usize {
        debug_assert!(self.domain.contains(i));
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.domain.iter().all(|i| self.apply(i) == i)
    }
}

/// The twisting automorphism sigma of W_{I(w1, w2, c, c')} attached to a
/// piece: sigma = delta^{-1} after conjugation by w2^{-1} after delta'
/// after conjugation by w1, which on nodes of the index set is a bijection.
pub fn sigma_of_piece(
    group: &WeylGroup,
    w1: Elt,
    w2: Elt,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
) -> Result<TwistAut> {
    let k = compute_i(group, w1, w2, c, cp)?;
    let w2_inv = group.inverse(w2)?;
    let mut pairs = Vec::with_capacity(k.len());
    for node in k.iter() {
        let a = group
            .maps_into_simples(w1, NodeSet::singleton(node))
            .and_then(|s| s.iter().next())
            .ok_or_else(|| {
                Error::Consistency(format!("w1 image of node {node} is not simple on the index set"))
            })?;
        let b = cp.apply(a);
        let c_node = group
            .maps_into_simples(w2_inv, NodeSet::singleton(b))
            .and_then(|s| s.iter().next())
            .filter(|&x| c.j2.contains(x))
            .ok_or_else(|| {
                Error::Consistency(format!(
                    "w2 does not align the twisted images over node {node}"
                ))
            })?;
        pairs.push((node, c.inverse_triple().apply(c_node)));
    }
    TwistAut::new(k, &pairs)
}

/// Twisted conjugacy classes of W_K under w -> s_k w s_{sigma(k)}. Classes
/// are listed by their shortlex-minimal member, members sorted shortlex.
pub fn twisted_classes(group: &WeylGroup, sigma: &TwistAut) -> Vec<Vec<Elt>> {
    let k = sigma.domain();
    let members = group.parabolic_elements(k);
    let mut class_of: Vec<Option<usize>> = vec![None; group.order()];
    let mut classes: Vec<Vec<Elt>> = Vec::new();
    for &start in &members {
        if class_of[start.id()].is_some() {
            continue;
        }
        let cid = classes.len();
        class_of[start.id()] = Some(cid);
        let mut orbit = vec![start];
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for i in k.iter() {
                let tw = group.left_mul(i, group.right_mul(w, sigma.apply(i)));
                if class_of[tw.id()].is_none() {
                    class_of[tw.id()] = Some(cid);
                    orbit.push(tw);
                    stack.push(tw);
                }
            }
        }
        orbit.sort_by_key(|&w| group.shortlex_rank(w));
        classes.push(orbit);
    }
    classes
}

/// One double coset of W_{c'} \ (W x W) / W_c.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pairs: Vec<(Elt, Elt)>,
    min_pairs: Vec<(Elt, Elt)>,
    distinguished: Option<(Elt, Elt)>,
}

impl DoubleCoset {
    pub fn pairs(&self) -> &[(Elt, Elt)] {
        &self.pairs
    }

    /// Pairs of minimal total length, shortlex sorted.
    pub fn min_pairs(&self) -> &[(Elt, Elt)] {
        &self.min_pairs
    }

    /// The unique pair in W^{J1} x {}^{J'2}W when the coset is
    /// distinguished.
    pub fn distinguished_pair(&self) -> Option<(Elt, Elt)> {
        self.distinguished
    }

    pub fn is_distinguished(&self) -> bool {
        self.distinguished.is_some()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// All (W_{c'}, W_c) double cosets of W x W, sorted by their minimal pair.
/// Cosets meeting W^{J1} x {}^{J'2}W more than once are a contradiction
/// with the classification and reported as a consistency error.
pub fn double_cosets(
    group: &WeylGroup,
    c: &AdmissibleTriple,
    cp: &AdmissibleTriple,
) -> Result<Vec<DoubleCoset>> {
    check_triple_pair(group, c, cp)?;
    let n = group.order();
    let mut coset_of: Vec<u32> = vec![u32::MAX; n * n];
    let mut cosets: Vec<DoubleCoset> = Vec::new();
    for x in group.elements_shortlex().collect::<Vec<_>>() {
        for y in group.elements_shortlex().collect::<Vec<_>>() {
            if coset_of[x.id() * n + y.id()] != u32::MAX {
                continue;
            }
            let cid = cosets.len() as u32;
            coset_of[x.id() * n + y.id()] = cid;
            let mut pairs = vec![(x, y)];
            let mut stack = vec![(x, y)];
            while let Some((a, b)) = stack.pop() {
                let mut visit =
                    |pair: (Elt, Elt), stack: &mut Vec<(Elt, Elt)>, pairs: &mut Vec<(Elt, Elt)>| {
                        let ix = pair.0.id() * n + pair.1.id();
                        if coset_of[ix] == u32::MAX {
                            coset_of[ix] = cid;
                            pairs.push(pair);
                            stack.push(pair);
                        }
                    };
                for p in cp.j1.iter() {
                    visit(
                        (group.left_mul(p, a), group.left_mul(cp.apply(p), b)),
                        &mut stack,
                        &mut pairs,
                    );
                }
                for r in c.j1.iter() {
                    visit(
                        (group.right_mul(a, r), group.right_mul(b, c.apply(r))),
                        &mut stack,
                        &mut pairs,
                    );
                }
            }
            sort_pairs(group, &mut pairs);
            let min_len = pairs
                .iter()
                .map(|&(a, b)| group.length(a) + group.length(b))
                .min()
                .expect("coset is nonempty");
            let min_pairs: Vec<(Elt, Elt)> = pairs
                .iter()
                .copied()
                .filter(|&(a, b)| group.length(a) + group.length(b) == min_len)
                .collect();
            let hits: Vec<(Elt, Elt)> = pairs
                .iter()
                .copied()
                .filter(|&(a, b)| {
                    group.right_descents(a).intersection(c.j1).is_empty()
                        && group.left_descents(b).intersection(cp.j2).is_empty()
                })
                .collect();
            if hits.len() > 1 {
                return Err(Error::Consistency(format!(
                    "double coset meets the minimal quotient {} times: {:?}",
                    hits.len(),
                    hits.iter()
                        .map(|&(a, b)| (group.reduced_word(a), group.reduced_word(b)))
                        .collect::<Vec<_>>()
                )));
            }
            cosets.push(DoubleCoset {
                pairs,
                min_pairs,
                distinguished: hits.first().copied(),
            });
        }
    }
    cosets.sort_by_key(|o| {
        let &(a, b) = &o.min_pairs[0];
        (
            group.length(a) + group.length(b),
            group.shortlex_rank(a),
            group.shortlex_rank(b),
        )
    });
    Ok(cosets)
}

/// The partial order on distinguished double cosets: O <= O' when every
/// minimal pair of O' dominates some minimal pair of O componentwise in
/// Bruhat order. The definition promises "some or equivalently any"; the
/// implementation quantifies over all minimal pairs of O' and reports a
/// consistency error if they disagree.
pub fn coset_leq(group: &WeylGroup, o: &DoubleCoset, op: &DoubleCoset) -> Result<bool> {
    if !o.is_distinguished() || !op.is_distinguished() {
        return Err(Error::NotDistinguished);
    }
    let mut verdict: Option<bool> = None;
    for &(a2, b2) in op.min_pairs() {
        let mut found = false;
        for &(a1, b1) in o.min_pairs() {
            if group.bruhat_leq(a1, a2)? && group.bruhat_leq(b1, b2)? {
                found = true;
                break;
            }
        }
        match verdict {
            None => verdict = Some(found),
            Some(v) if v != found => {
                return Err(Error::Consistency(format!(
                    "coset order disagrees across minimal pairs at {:?}",
                    (group.reduced_word(a2), group.reduced_word(b2))
                )));
            }
            _ => {}
        }
    }
    Ok(verdict.expect("distinguished coset has a minimal pair"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::TypeName;

    fn setup(t: TypeName) -> WeylGroup {
        WeylGroup::of_type(t, 8).unwrap()
    }

    #[test]
    fn triple_validation() {
        let a2 = setup(TypeName::A(2));
        assert!(AdmissibleTriple::new(a2.cartan(), &[(0, 1)]).is_ok());
        assert!(AdmissibleTriple::new(a2.cartan(), &[(0, 1), (1, 0)]).is_ok());
        let b2 = setup(TypeName::B(2));
        let err = AdmissibleTriple::new(b2.cartan(), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible(_)));
        let g2 = setup(TypeName::G2);
        assert!(AdmissibleTriple::new(g2.cartan(), &[(0, 1)]).is_ok());
        assert!(AdmissibleTriple::new(g2.cartan(), &[(0, 0), (1, 1)]).is_ok());
    }

    #[test]
    fn triple_counts() {
        assert_eq!(enumerate_triples(setup(TypeName::A(1)).cartan()).len(), 2);
        assert_eq!(enumerate_triples(setup(TypeName::A(2)).cartan()).len(), 7);
        assert_eq!(enumerate_triples(setup(TypeName::B(2)).cartan()).len(), 6);
        assert_eq!(enumerate_triples(setup(TypeName::G2).cartan()).len(), 6);
    }

    #[test]
    fn triple_group_action() {
        let g = setup(TypeName::A(2));
        let c = AdmissibleTriple::new(g.cartan(), &[(0, 1), (1, 0)]).unwrap();
        let w = g.element_from_word(&[0, 1]).unwrap();
        let im = c.apply_elt(&g, w).unwrap();
        assert_eq!(g.reduced_word(im), vec![1, 0]);
        let outside = AdmissibleTriple::new(g.cartan(), &[(0, 0)]).unwrap();
        assert!(matches!(
            outside.apply_elt(&g, g.simple(1)),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn compute_i_examples() {
        let g = setup(TypeName::A(2));
        let e = g.identity();
        let empty = AdmissibleTriple::identity(g.cartan(), NodeSet::EMPTY);
        assert_eq!(compute_i(&g, e, e, &empty, &empty).unwrap(), NodeSet::EMPTY);
        let c0 = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(0));
        assert_eq!(
            compute_i(&g, e, e, &c0, &c0).unwrap(),
            NodeSet::singleton(0)
        );
        let full = AdmissibleTriple::identity(g.cartan(), g.all_nodes());
        assert_eq!(compute_i(&g, e, e, &full, &full).unwrap(), g.all_nodes());
    }

    #[test]
    fn compute_i_rejects_nonminimal_reps() {
        let g = setup(TypeName::A(2));
        let c0 = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(0));
        let err = compute_i(&g, g.simple(0), g.identity(), &c0, &c0).unwrap_err();
        assert!(matches!(err, Error::RepNotMinimal(_)));
    }

    #[test]
    fn piece_sizes() {
        let a1 = setup(TypeName::A(1));
        let full = AdmissibleTriple::identity(a1.cartan(), a1.all_nodes());
        let p = piece(&a1, a1.identity(), a1.identity(), &full, &full).unwrap();
        assert_eq!(p.len(), 4);

        let a2 = setup(TypeName::A(2));
        let full = AdmissibleTriple::identity(a2.cartan(), a2.all_nodes());
        let p = piece(&a2, a2.identity(), a2.identity(), &full, &full).unwrap();
        assert_eq!(p.len(), 36);
    }

    #[test]
    fn pieces_partition_a2_identity_triples() {
        let g = setup(TypeName::A(2));
        let c = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(0));
        let cp = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(1));
        let mut covered = vec![false; g.order() * g.order()];
        for w1 in g.quotient_reps(c.j1()) {
            for w2 in g.k_quotient_reps(cp.j2()) {
                for (x, y) in piece(&g, w1, w2, &c, &cp).unwrap() {
                    let ix = x.id() * g.order() + y.id();
                    assert!(!covered[ix], "pieces overlap");
                    covered[ix] = true;
                }
            }
        }
        assert!(covered.iter().all(|&b| b), "pieces do not cover W x W");
    }

    #[test]
    fn twisted_class_counts_match_a2() {
        let g = setup(TypeName::A(2));
        let id = TwistAut::identity(g.all_nodes());
        let classes = twisted_classes(&g, &id);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);

        let flip = TwistAut::new(g.all_nodes(), &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(twisted_classes(&g, &flip).len(), 3);
    }

    #[test]
    fn sigma_is_identity_for_identity_data() {
        let g = setup(TypeName::A(2));
        let full = AdmissibleTriple::identity(g.cartan(), g.all_nodes());
        let sigma = sigma_of_piece(&g, g.identity(), g.identity(), &full, &full).unwrap();
        assert!(sigma.is_identity());
        assert_eq!(sigma.domain(), g.all_nodes());
    }

    #[test]
    fn distinguished_cosets_and_order() {
        let g = setup(TypeName::A(2));
        let c = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(0));
        let cosets = double_cosets(&g, &c, &c).unwrap();
        let total: usize = cosets.iter().map(|o| o.len()).sum();
        assert_eq!(total, g.order() * g.order());
        let distinguished: Vec<&DoubleCoset> =
            cosets.iter().filter(|o| o.is_distinguished()).collect();
        assert!(!distinguished.is_empty());
        // The coset of (e, e) is below every distinguished coset.
        let bottom = distinguished
            .iter()
            .find(|o| {
                o.distinguished_pair()
                    .map(|(a, b)| a == g.identity() && b == g.identity())
                    .unwrap_or(false)
            })
            .expect("identity coset is distinguished");
        for o in &distinguished {
            assert!(coset_leq(&g, bottom, o).unwrap());
        }
        let err = cosets
            .iter()
            .find(|o| !o.is_distinguished())
            .map(|o| coset_leq(&g, o, bottom).unwrap_err());
        if let Some(err) = err {
            assert!(matches!(err, Error::NotDistinguished));
        }
    }

    #[test]
    fn coset_pairs_stay_within_piece() {
        let g = setup(TypeName::B(2));
        let c = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(0));
        let cp = AdmissibleTriple::identity(g.cartan(), NodeSet::singleton(1));
        for w1 in g.quotient_reps(c.j1()) {
            for w2 in g.k_quotient_reps(cp.j2()) {
                let p = piece(&g, w1, w2, &c, &cp).unwrap();
                assert!(p.contains(&(w1, w2)));
                let i_set = compute_i(&g, w1, w2, &c, &cp).unwrap();
                let sigma = sigma_of_piece(&g, w1, w2, &c, &cp).unwrap();
                assert_eq!(sigma.domain(), i_set);
            }
        }
    }
}
