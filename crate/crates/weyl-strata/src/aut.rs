//! Diagram automorphisms.
//!
//! A diagram automorphism is a permutation delta of the nodes with
//! a[delta(i)][delta(j)] = a[i][j]. The identity always qualifies; the
//! diagram flip exists for A_n (n >= 2), D_n and E6.

use crate::cartan::CartanMatrix;
use crate::error::{Error, Result};
use crate::subset::NodeSet;
use std::fmt;

/// A Cartan-preserving node permutation, pinned to one matrix by
/// fingerprint so cross-group use fails fast.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramAut {
    images: Vec<usize>,
    fingerprint: u64,
}

impl DiagramAut {
    /// Validate `images` as a diagram automorphism of `cartan`.
    pub fn new(cartan: &CartanMatrix, images: Vec<usize>) -> Result<DiagramAut> {
        let n = cartan.rank();
        if images.len() != n {
            return Err(Error::AutMismatch(format!(
                "permutation has {} entries, diagram has {n} nodes",
                images.len()
            )));
        }
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n || seen[im] {
                return Err(Error::AutMismatch(format!("images {images:?} are not a permutation")));
            }
            seen[im] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if cartan.entry(images[i], images[j]) != cartan.entry(i, j) {
                    return Err(Error::AutMismatch(format!(
                        "images {images:?} do not preserve the Cartan matrix at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DiagramAut { images, fingerprint: cartan.fingerprint() })
    }

    pub fn identity(cartan: &CartanMatrix) -> DiagramAut {
        DiagramAut {
            images: (0..cartan.rank()).collect(),
            fingerprint: cartan.fingerprint(),
        }
    }

    /// The order-reversing flip i -> n-1-i, when it is an automorphism.
    pub fn flip(cartan: &CartanMatrix) -> Result<DiagramAut> {
        let n = cartan.rank();
        DiagramAut::new(cartan, (0..n).rev().collect())
    }

    /// Every diagram automorphism of `cartan`, identity first, then the
    /// rest in lexicographic order of their image vectors.
    pub fn enumerate(cartan: &CartanMatrix) -> Vec<DiagramAut> {
        let n = cartan.rank();
        let mut found = Vec::new();
        let mut images = vec![0usize; n];
        let mut used = vec![false; n];
        // Backtracking over partial node assignments; the Cartan check
        // prunes immediately, so this is fast at any rank we allow.
        fn rec(
            cartan: &CartanMatrix,
            images: &mut Vec<usize>,
            used: &mut Vec<bool>,
            depth: usize,
            found: &mut Vec<Vec<usize>>,
        ) {
            let n = cartan.rank();
            if depth == n {
                found.push(images.clone());
                return;
            }
            for im in 0..n {
                if used[im] {
                    continue;
                }
                let ok = (0..depth).all(|j| {
                    cartan.entry(im, images[j]) == cartan.entry(depth, j)
                        && cartan.entry(images[j], im) == cartan.entry(j, depth)
                }) && cartan.entry(im, im) == cartan.entry(depth, depth);
                if ok {
                    images[depth] = im;
                    used[im] = true;
                    rec(cartan, images, used, depth + 1, found);
                    used[im] = false;
                }
            }
        }
        let mut raw = Vec::new();
        rec(cartan, &mut images, &mut used, 0, &mut raw);
        raw.sort();
        let fp = cartan.fingerprint();
        let id: Vec<usize> = (0..n).collect();
        found.push(DiagramAut { images: id.clone(), fingerprint: fp });
        for im in raw {
            if im != id {
                found.push(DiagramAut { images: im, fingerprint: fp });
            }
        }
        found
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply_set(&self, s: NodeSet) -> NodeSet {
        s.iter().map(|i| self.images[i]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    pub fn inverse(&self) -> DiagramAut {
        let mut inv = vec![0usize; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        DiagramAut { images: inv, fingerprint: self.fingerprint }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Whether `s` is a union of orbits.
    pub fn is_stable(&self, s: NodeSet) -> bool {
        self.apply_set(s) == s
    }

    /// Orbits on the nodes, each sorted, listed by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                orbit.push(cur);
                cur = self.images[cur];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Number of orbits meeting `s`; callers use this on stable sets, where
    /// it counts the orbits inside `s`.
    pub fn orbit_count_in(&self, s: NodeSet) -> usize {
        self.orbits()
            .iter()
            .filter(|orbit| orbit.iter().any(|&i| s.contains(i)))
            .count()
    }

    /// Render as "id" or as comma-joined images, e.g. "1,0" for the A2 flip.
    pub fn short_label(&self) -> String {
        if self.is_identity() {
            "id".into()
        } else {
            self.images
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parse a label produced by `short_label`, validating against `cartan`.
    pub fn parse(cartan: &CartanMatrix, text: &str) -> Result<DiagramAut> {
        let text = text.trim();
        if text.is_empty() || text == "id" {
            return Ok(DiagramAut::identity(cartan));
        }
        if text == "flip" {
            return DiagramAut::flip(cartan);
        }
        let images: Vec<usize> = text
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad automorphism {text:?}")))?;
        DiagramAut::new(cartan, images)
    }
}

impl fmt::Display for DiagramAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short_label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::TypeName;

    fn cm(t: TypeName) -> CartanMatrix {
        CartanMatrix::of_type(t, 8).unwrap()
    }

    #[test]
    fn a2_has_flip() {
        let c = cm(TypeName::A(2));
        let auts = DiagramAut::enumerate(&c);
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
        assert_eq!(auts[1].images(), &[1, 0]);
    }

    #[test]
    fn b2_has_only_identity() {
        // The two B2 nodes have asymmetric bond entries, so the swap is not
        // Cartan-preserving.
        let c = cm(TypeName::B(2));
        let auts = DiagramAut::enumerate(&c);
        assert_eq!(auts.len(), 1);
        assert!(DiagramAut::flip(&c).is_err());
    }

    #[test]
    fn d4_triality() {
        let c = cm(TypeName::D(4));
        let auts = DiagramAut::enumerate(&c);
        // The three outer nodes 0, 2, 3 permute freely: S3 has 6 elements.
        assert_eq!(auts.len(), 6);
    }

    #[test]
    fn flip_orbits_and_stability() {
        let c = cm(TypeName::A(3));
        let d = DiagramAut::flip(&c).unwrap();
        assert_eq!(d.orbits(), vec![vec![0, 2], vec![1]]);
        assert!(d.is_stable(NodeSet::from_iter([0, 2])));
        assert!(!d.is_stable(NodeSet::singleton(0)));
        assert_eq!(d.orbit_count_in(NodeSet::from_iter([0, 1, 2])), 2);
        assert_eq!(d.short_label(), "2,1,0");
    }

    #[test]
    fn parse_round_trip() {
        let c = cm(TypeName::A(2));
        let d = DiagramAut::parse(&c, "flip").unwrap();
        assert_eq!(DiagramAut::parse(&c, &d.short_label()).unwrap(), d);
        assert!(DiagramAut::parse(&c, "0,0").is_err());
        assert!(DiagramAut::parse(&cm(TypeName::B(2)), "1,0").is_err());
    }
}
