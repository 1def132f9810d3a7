//! The closure of a parabolic subgroup inside the semi-stable locus.
//!
//! For a delta-stable K, the closure of P_K meets the semi-stable locus in
//! a disjoint union of pieces [J, delta(w), w] indexed by w in {}^K W^J
//! whose coset w W_J contains a delta-fixed element. The epsilon map turns
//! that coset condition into a clean index set over {}^K W^{J_delta} cap
//! W^delta, and the isolated strata of L_K contribute the further slice
//! where w^{-1}(K) lands inside J_delta.

use crate::aut::DiagramAut;
use crate::compact::PieceIndex;
use crate::error::{Error, Result};
use crate::subset::NodeSet;
use crate::weyl::{Elt, WeylGroup};

/// The largest delta-stable subset of J: the union of the delta-orbits
/// contained in J.
pub fn j_delta(delta: &DiagramAut, j: NodeSet) -> NodeSet {
    delta
        .orbits()
        .into_iter()
        .filter(|orbit| orbit.iter().all(|&i| j.contains(i)))
        .flatten()
        .collect()
}

fn require_stable(delta: &DiagramAut, k: NodeSet) -> Result<()> {
    if delta.is_stable(k) {
        Ok(())
    } else {
        Err(Error::KNotDeltaStable(format!(
            "K={k} is not stable under delta={delta}"
        )))
    }
}

/// The elements of {}^K W^{J_delta} cap W^delta in shortlex order.
pub fn epsilon_domain(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
    j: NodeSet,
) -> Result<Vec<Elt>> {
    require_stable(delta, k)?;
    let jd = j_delta(delta, j);
    let mut out = Vec::new();
    for w in group.double_quotient_reps(k, jd) {
        if group.is_fixed_by(delta, w)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// The index pieces of the closure of P_K in the semi-stable locus:
/// [J, delta(w), w] over J inside I and w in {}^K W^J with
/// w W_J cap W^delta nonempty.
pub fn bp_index(group: &WeylGroup, delta: &DiagramAut, k: NodeSet) -> Result<Vec<PieceIndex>> {
    require_stable(delta, k)?;
    let mut out = Vec::new();
    for j in group.all_nodes().subsets() {
        let j_elems = group.parabolic_elements(j);
        for w in group.double_quotient_reps(k, j) {
            let mut meets_fixed = false;
            for &u in &j_elems {
                if group.is_fixed_by(delta, group.multiply(w, u)?)? {
                    meets_fixed = true;
                    break;
                }
            }
            if meets_fixed {
                out.push(PieceIndex::new(
                    group,
                    delta,
                    k,
                    j,
                    group.apply_aut(delta, w)?,
                    w,
                )?);
            }
        }
    }
    Ok(out)
}

/// The verified bijection w -> min(w W_J) from {}^K W^{J_delta} cap
/// W^delta onto {x in {}^K W^J : x W_J cap W^delta nonempty}.
#[derive(Clone, Debug)]
pub struct EpsilonMap {
    pub j: NodeSet,
    pub k: NodeSet,
    /// (w, epsilon(w)) with w running over the domain in shortlex order.
    pub pairs: Vec<(Elt, Elt)>,
}

impl EpsilonMap {
    pub fn apply(&self, w: Elt) -> Option<Elt> {
        self.pairs.iter().find(|&&(d, _)| d == w).map(|&(_, x)| x)
    }
}

pub fn epsilon(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
    j: NodeSet,
) -> Result<EpsilonMap> {
    let domain = epsilon_domain(group, delta, k, j)?;
    let pairs: Vec<(Elt, Elt)> = domain
        .iter()
        .map(|&w| (w, group.min_coset_rep(w, NodeSet::EMPTY, j)))
        .collect();

    // Independent computation of the claimed target.
    let j_elems = group.parabolic_elements(j);
    let mut target = Vec::new();
    for x in group.double_quotient_reps(k, j) {
        for &u in &j_elems {
            if group.is_fixed_by(delta, group.multiply(x, u)?)? {
                target.push(x);
                break;
            }
        }
    }

    let mut image: Vec<Elt> = pairs.iter().map(|&(_, x)| x).collect();
    image.sort_by_key(|&x| group.shortlex_rank(x));
    image.dedup();
    if image.len() != pairs.len() {
        return Err(Error::BijectionFailure(format!(
            "epsilon is not injective on K={k} J={j}: {} domain elements, {} images",
            pairs.len(),
            image.len()
        )));
    }
    if image != target {
        return Err(Error::BijectionFailure(format!(
            "epsilon does not surject onto the coset condition set for K={k} J={j}"
        )));
    }
    Ok(EpsilonMap { j, k, pairs })
}

/// The largest delta-stable K' inside K with epsilon(w)^{-1}(K') simple
/// inside J, verified against the closed form K cap w(J_delta).
pub fn lemma7_k1(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
    j: NodeSet,
    w: Elt,
) -> Result<NodeSet> {
    require_stable(delta, k)?;
    let jd = j_delta(delta, j);
    if group.min_coset_rep(w, k, jd) != w || !group.is_fixed_by(delta, w)? {
        return Err(Error::PreconditionFailure(format!(
            "w={:?} is not in the epsilon domain for K={k} J={j}",
            group.reduced_word(w)
        )));
    }
    let eps_inv = group.inverse(group.min_coset_rep(w, NodeSet::EMPTY, j))?;
    let qualifies = |kp: NodeSet| -> bool {
        delta.is_stable(kp)
            && matches!(group.maps_into_simples(eps_inv, kp), Some(s) if s.is_subset_of(j))
    };
    let mut union = NodeSet::EMPTY;
    for kp in k.subsets() {
        if qualifies(kp) {
            union = union.union(kp);
        }
    }
    if !qualifies(union) {
        return Err(Error::Consistency(format!(
            "qualifying subsets are not union-closed for K={k} J={j} w={:?}",
            group.reduced_word(w)
        )));
    }
    let closed_form = k.intersection(group.nodes_mapped_from(w, jd));
    if union != closed_form {
        return Err(Error::Consistency(format!(
            "max subset {union} disagrees with K cap w(J_delta) = {closed_form} \
             for K={k} J={j} w={:?}",
            group.reduced_word(w)
        )));
    }
    Ok(union)
}

/// The three descriptions of the closure of P_K in the semi-stable locus,
/// each as a list of pieces in canonical order. The first is a disjoint
/// union indexed by (J, w in the epsilon domain); the other two run w over
/// {}^K W cap W^delta with J outermost and innermost respectively, and
/// deduplicate.
#[derive(Clone, Debug)]
pub struct PpDescriptions {
    pub by_epsilon: Vec<PieceIndex>,
    pub by_j_outer: Vec<PieceIndex>,
    pub by_w_outer: Vec<PieceIndex>,
}

pub fn pp_descriptions(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
) -> Result<PpDescriptions> {
    require_stable(delta, k)?;
    let fixed_k_reps: Vec<Elt> = {
        let mut out = Vec::new();
        for w in group.k_quotient_reps(k) {
            if group.is_fixed_by(delta, w)? {
                out.push(w);
            }
        }
        out
    };

    let piece_of = |j: NodeSet, w: Elt| -> Result<PieceIndex> {
        let x = group.min_coset_rep(w, NodeSet::EMPTY, j);
        PieceIndex::new(group, delta, k, j, group.apply_aut(delta, x)?, x)
    };

    let mut by_epsilon = Vec::new();
    for j in group.all_nodes().subsets() {
        for w in epsilon_domain(group, delta, k, j)? {
            by_epsilon.push(piece_of(j, w)?);
        }
    }

    let mut by_j_outer = Vec::new();
    for j in group.all_nodes().subsets() {
        let mut slice = Vec::new();
        for &w in &fixed_k_reps {
            let piece = piece_of(j, w)?;
            if !slice.contains(&piece) {
                slice.push(piece);
            }
        }
        by_j_outer.extend(slice);
    }

    let mut by_w_outer = Vec::new();
    for &w in &fixed_k_reps {
        for j in group.all_nodes().subsets() {
            let piece = piece_of(j, w)?;
            if !by_w_outer.contains(&piece) {
                by_w_outer.push(piece);
            }
        }
    }

    Ok(PpDescriptions {
        by_epsilon,
        by_j_outer,
        by_w_outer,
    })
}

/// Sort pieces into the canonical order (J ascending as a bitmask, then w
/// and v by shortlex), for set comparison between descriptions.
pub fn canonical_sort(group: &WeylGroup, pieces: &mut [PieceIndex]) {
    pieces.sort_by_key(|p| {
        (
            p.j().0,
            group.shortlex_rank(p.w()),
            group.shortlex_rank(p.v()),
        )
    });
}

/// The index set of the boundary of an isolated stratum of L_K: pairs
/// (J, w) with w in {}^K W^{J_delta} cap W^delta and w^{-1}(K) simple
/// inside J_delta.
pub fn isolated_boundary_index(
    group: &WeylGroup,
    delta: &DiagramAut,
    k: NodeSet,
) -> Result<Vec<(NodeSet, Elt)>> {
    require_stable(delta, k)?;
    let mut out = Vec::new();
    for j in group.all_nodes().subsets() {
        let jd = j_delta(delta, j);
        for w in epsilon_domain(group, delta, k, j)? {
            let w_inv = group.inverse(w)?;
            if matches!(group.maps_into_simples(w_inv, k), Some(s) if s.is_subset_of(jd)) {
                out.push((j, w));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::TypeName;
    use crate::compact::semistable_pieces;

    fn setup(t: TypeName) -> WeylGroup {
        WeylGroup::of_type(t, 8).unwrap()
    }

    #[test]
    fn j_delta_flip_examples() {
        let g = setup(TypeName::A(2));
        let flip = DiagramAut::flip(g.cartan()).unwrap();
        assert_eq!(j_delta(&flip, NodeSet::singleton(0)), NodeSet::EMPTY);
        assert_eq!(j_delta(&flip, g.all_nodes()), g.all_nodes());
        let id = DiagramAut::identity(g.cartan());
        for j in g.all_nodes().subsets() {
            assert_eq!(j_delta(&id, j), j);
        }
    }

    #[test]
    fn epsilon_flip_example() {
        let g = setup(TypeName::A(2));
        let flip = DiagramAut::flip(g.cartan()).unwrap();
        let map = epsilon(&g, &flip, NodeSet::EMPTY, NodeSet::singleton(0)).unwrap();
        let words: Vec<(Vec<usize>, Vec<usize>)> = map
            .pairs
            .iter()
            .map(|&(w, x)| (g.reduced_word(w), g.reduced_word(x)))
            .collect();
        assert_eq!(
            words,
            vec![(vec![], vec![]), (vec![0, 1, 0], vec![0, 1])]
        );
    }

    #[test]
    fn epsilon_is_a_bijection_everywhere_small() {
        for t in [TypeName::A(2), TypeName::B(2), TypeName::G2] {
            let g = setup(t);
            for delta in DiagramAut::enumerate(g.cartan()) {
                for k in g.all_nodes().subsets().filter(|&k| delta.is_stable(k)) {
                    for j in g.all_nodes().subsets() {
                        epsilon(&g, &delta, k, j).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn lemma7_closed_form_holds_small() {
        for t in [TypeName::A(2), TypeName::B(2)] {
            let g = setup(t);
            for delta in DiagramAut::enumerate(g.cartan()) {
                for k in g.all_nodes().subsets().filter(|&k| delta.is_stable(k)) {
                    for j in g.all_nodes().subsets() {
                        for w in epsilon_domain(&g, &delta, k, j).unwrap() {
                            lemma7_k1(&g, &delta, k, j, w).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lemma7_rejects_misplaced_representatives() {
        let g = setup(TypeName::A(2));
        let id = DiagramAut::identity(g.cartan());
        let err = lemma7_k1(&g, &id, NodeSet::EMPTY, g.all_nodes(), g.simple(0)).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailure(_)));
    }

    #[test]
    fn bp_index_a1_both_k() {
        let g = setup(TypeName::A(1));
        let id = DiagramAut::identity(g.cartan());
        let pieces = bp_index(&g, &id, NodeSet::EMPTY).unwrap();
        let labels: Vec<String> = pieces.iter().map(|p| p.label(&g)).collect();
        assert_eq!(labels, vec!["[J={};w=[];v=[]]", "[J={};w=[0];v=[0]]", "[J={0};w=[];v=[]]"]);
        let pieces = bp_index(&g, &id, g.all_nodes()).unwrap();
        assert_eq!(pieces.len(), 2);
    }

    #[test]
    fn pp_descriptions_agree_small() {
        for t in [TypeName::A(2), TypeName::B(2)] {
            let g = setup(t);
            for delta in DiagramAut::enumerate(g.cartan()) {
                for k in g.all_nodes().subsets().filter(|&k| delta.is_stable(k)) {
                    let descs = pp_descriptions(&g, &delta, k).unwrap();
                    let mut a = descs.by_epsilon.clone();
                    let mut b = descs.by_j_outer.clone();
                    let mut c = descs.by_w_outer.clone();
                    assert_eq!(a.len(), b.len(), "{t} K={k}: epsilon indexing is disjoint");
                    canonical_sort(&g, &mut a);
                    canonical_sort(&g, &mut b);
                    canonical_sort(&g, &mut c);
                    assert_eq!(a, b, "{t} K={k}");
                    assert_eq!(b, c, "{t} K={k}");
                }
            }
        }
    }

    #[test]
    fn pp_full_k_is_semistable() {
        for t in [TypeName::A(1), TypeName::A(2)] {
            let g = setup(t);
            let id = DiagramAut::identity(g.cartan());
            let descs = pp_descriptions(&g, &id, g.all_nodes()).unwrap();
            let mut got = descs.by_epsilon.clone();
            canonical_sort(&g, &mut got);
            let mut want = semistable_pieces(&g, &id).unwrap();
            canonical_sort(&g, &mut want);
            assert_eq!(got, want, "{t}");
        }
    }

    #[test]
    fn isolated_boundary_examples() {
        let g = setup(TypeName::A(1));
        let id = DiagramAut::identity(g.cartan());
        let idx = isolated_boundary_index(&g, &id, g.all_nodes()).unwrap();
        assert_eq!(idx, vec![(g.all_nodes(), g.identity())]);

        let g = setup(TypeName::A(2));
        let flip = DiagramAut::flip(g.cartan()).unwrap();
        let idx = isolated_boundary_index(&g, &flip, g.all_nodes()).unwrap();
        assert_eq!(idx, vec![(g.all_nodes(), g.identity())]);

        // With K empty the membership condition is vacuous: every (J, w)
        // with w in W^J appears.
        let g = setup(TypeName::A(2));
        let id = DiagramAut::identity(g.cartan());
        let idx = isolated_boundary_index(&g, &id, NodeSet::EMPTY).unwrap();
        let expect: usize = g
            .all_nodes()
            .subsets()
            .map(|j| g.quotient_reps(j).len())
            .sum();
        assert_eq!(idx.len(), expect);
    }

    #[test]
    fn non_stable_k_is_rejected() {
        let g = setup(TypeName::A(2));
        let flip = DiagramAut::flip(g.cartan()).unwrap();
        let err = bp_index(&g, &flip, NodeSet::singleton(0)).unwrap_err();
        assert!(matches!(err, Error::KNotDeltaStable(_)));
    }
}
