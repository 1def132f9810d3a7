//! Cartan matrices of finite type.
//!
//! The convention throughout: `a[i][j]` is the pairing of the j-th simple
//! root against the i-th simple coroot, so the simple reflection acts by
//! s_i(alpha_j) = alpha_j - a[i][j] alpha_i. A generalized Cartan matrix is
//! of finite type exactly when all leading principal minors are positive;
//! we check that exactly with Bareiss elimination over i128.

use crate::error::{Error, Result};
use std::fmt;

/// Default cap on the number of diagram nodes. Callers can raise it
/// explicitly; the CLI reads an environment override.
pub const DEFAULT_RANK_CAP: usize = 6;

/// Hard cap imposed by the NodeSet representation.
pub const ABSOLUTE_RANK_CAP: usize = 16;

/// The named finite types.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TypeName {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl TypeName {
    pub fn rank(self) -> usize {
        match self {
            TypeName::A(n) | TypeName::B(n) | TypeName::C(n) | TypeName::D(n) | TypeName::E(n) => n,
            TypeName::F4 => 4,
            TypeName::G2 => 2,
        }
    }

    /// Parse "A2", "B3", "G2", ...
    pub fn parse(s: &str) -> Result<TypeName> {
        let s = s.trim();
        let (letter, digits) = s.split_at(1.min(s.len()));
        let n: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad type name {s:?}")))?;
        let t = match (letter, n) {
            ("A" | "a", n) if n >= 1 => TypeName::A(n),
            ("B" | "b", n) if n >= 2 => TypeName::B(n),
            ("C" | "c", n) if n >= 2 => TypeName::C(n),
            ("D" | "d", n) if n >= 3 => TypeName::D(n),
            ("E" | "e", n) if (6..=8).contains(&n) => TypeName::E(n),
            ("F" | "f", 4) => TypeName::F4,
            ("G" | "g", 2) => TypeName::G2,
            _ => return Err(Error::Parse(format!("unknown or out-of-range type {s:?}"))),
        };
        Ok(t)
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeName::A(n) => write!(f, "A{n}"),
            TypeName::B(n) => write!(f, "B{n}"),
            TypeName::C(n) => write!(f, "C{n}"),
            TypeName::D(n) => write!(f, "D{n}"),
            TypeName::E(n) => write!(f, "E{n}"),
            TypeName::F4 => write!(f, "F4"),
            TypeName::G2 => write!(f, "G2"),
        }
    }
}

/// A validated finite-type Cartan matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    name: Option<TypeName>,
}

impl CartanMatrix {
    /// Validate an arbitrary square integer matrix as a finite-type
    /// generalized Cartan matrix under the cap `rank_cap`.
    pub fn from_entries(entries: Vec<Vec<i64>>, rank_cap: usize) -> Result<CartanMatrix> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::NotFiniteType("empty matrix".into()));
        }
        let cap = rank_cap.min(ABSOLUTE_RANK_CAP);
        if n > cap {
            return Err(Error::RankCapExceeded { rank: n, cap });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotFiniteType(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::NotFiniteType(format!("diagonal entry a[{i}][{i}] = {a}, expected 2")));
                }
                if i != j {
                    if a > 0 {
                        return Err(Error::NotFiniteType(format!(
                            "off-diagonal entry a[{i}][{j}] = {a} is positive"
                        )));
                    }
                    if (a == 0) != (entries[j][i] == 0) {
                        return Err(Error::NotFiniteType(format!(
                            "a[{i}][{j}] = {a} but a[{j}][{i}] = {}; zeros must be symmetric",
                            entries[j][i]
                        )));
                    }
                }
            }
        }
        if !all_leading_minors_positive(&entries) {
            return Err(Error::NotFiniteType(
                "a leading principal minor is not positive".into(),
            ));
        }
        Ok(CartanMatrix { entries, name: None })
    }

    /// The Cartan matrix of a named type.
    pub fn of_type(name: TypeName, rank_cap: usize) -> Result<CartanMatrix> {
        let n = name.rank();
        let cap = rank_cap.min(ABSOLUTE_RANK_CAP);
        if n > cap {
            return Err(Error::RankCapExceeded { rank: n, cap });
        }
        let floor_ok = match name {
            TypeName::A(n) => n >= 1,
            TypeName::B(n) | TypeName::C(n) => n >= 2,
            TypeName::D(n) => n >= 3,
            TypeName::E(n) => (6..=8).contains(&n),
            TypeName::F4 | TypeName::G2 => true,
        };
        if !floor_ok {
            return Err(Error::NotFiniteType(format!("rank {n} is out of range for series {name}")));
        }
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |a: &mut Vec<Vec<i64>>, len: usize| {
            for i in 0..len.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        };
        match name {
            TypeName::A(_) | TypeName::B(_) | TypeName::C(_) => chain(&mut a, n),
            TypeName::D(_) => {
                chain(&mut a, n - 1);
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
            }
            TypeName::E(_) => {
                // Bourbaki numbering shifted to 0-based: the chain is
                // 0-2-3-4-..-(n-1) and node 1 hangs off node 3.
                a[0][2] = -1;
                a[2][0] = -1;
                a[1][3] = -1;
                a[3][1] = -1;
                for i in 2..n - 1 {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            TypeName::F4 | TypeName::G2 => chain(&mut a, n),
        }
        match name {
            // Last simple root short: the double bond points from the short
            // root's row.
            TypeName::B(_) => a[n - 1][n - 2] = -2,
            TypeName::C(_) => a[n - 2][n - 1] = -2,
            TypeName::F4 => a[2][1] = -2,
            TypeName::G2 => a[1][0] = -3,
            _ => {}
        }
        let m = CartanMatrix::from_entries(a, cap)?;
        Ok(CartanMatrix { name: Some(name), ..m })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn name(&self) -> Option<TypeName> {
        self.name
    }

    /// Short label for reports: the type name when known, otherwise the
    /// matrix written out.
    pub fn label(&self) -> String {
        match self.name {
            Some(t) => t.to_string(),
            None => format!("custom{:?}", self.entries),
        }
    }

    /// A fingerprint such that two equal matrices always get equal values.
    /// Used for cheap mismatch detection between groups and automorphisms.
    pub fn fingerprint(&self) -> u64 {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut h = DefaultHasher::new();
        self.entries.hash(&mut h);
        h.finish()
    }

    /// Parse "[[2,-1],[-1,2]]" style matrix text.
    pub fn parse_matrix(text: &str, rank_cap: usize) -> Result<CartanMatrix> {
        let rows: Vec<Vec<i64>> = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("bad matrix literal: {e}")))?;
        CartanMatrix::from_entries(rows, rank_cap)
    }
}

/// Exact sign test for all leading principal minors via fraction-free
/// Bareiss elimination over i128. Entries stay tiny at the ranks we allow,
/// so overflow is not a concern.
fn all_leading_minors_positive(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut prev: i128 = 1;
    for k in 0..n {
        // After k elimination steps, m[k][k] equals the (k+1)-st leading
        // principal minor.
        if m[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_types_validate() {
        for t in [
            TypeName::A(1),
            TypeName::A(3),
            TypeName::B(2),
            TypeName::B(3),
            TypeName::C(3),
            TypeName::D(4),
            TypeName::G2,
            TypeName::F4,
            TypeName::E(6),
        ] {
            let m = CartanMatrix::of_type(t, 8).unwrap();
            assert_eq!(m.rank(), t.rank(), "{t}");
        }
    }

    #[test]
    fn b_and_c_are_transposes() {
        let b = CartanMatrix::of_type(TypeName::B(3), 6).unwrap();
        let c = CartanMatrix::of_type(TypeName::C(3), 6).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.entry(i, j), c.entry(j, i));
            }
        }
        assert_eq!(b.entry(2, 1), -2);
    }

    #[test]
    fn g2_matrix() {
        let g = CartanMatrix::of_type(TypeName::G2, 6).unwrap();
        assert_eq!(g.entries(), &[vec![2, -1], vec![-3, 2]]);
    }

    #[test]
    fn affine_matrix_rejected() {
        // The rank-2 affine matrix has determinant 0.
        let err = CartanMatrix::from_entries(vec![vec![2, -2], vec![-2, 2]], 6).unwrap_err();
        assert!(matches!(err, Error::NotFiniteType(_)));
        // And an indefinite one.
        let err = CartanMatrix::from_entries(vec![vec![2, -3], vec![-3, 2]], 6).unwrap_err();
        assert!(matches!(err, Error::NotFiniteType(_)));
    }

    #[test]
    fn rank_cap_enforced() {
        let err = CartanMatrix::of_type(TypeName::A(7), 6).unwrap_err();
        assert!(matches!(err, Error::RankCapExceeded { rank: 7, cap: 6 }));
    }

    #[test]
    fn asymmetric_zero_rejected() {
        let err =
            CartanMatrix::from_entries(vec![vec![2, -1], vec![0, 2]], 6).unwrap_err();
        assert!(matches!(err, Error::NotFiniteType(_)));
    }

    #[test]
    fn type_parsing() {
        assert_eq!(TypeName::parse("A3").unwrap(), TypeName::A(3));
        assert_eq!(TypeName::parse("g2").unwrap(), TypeName::G2);
        assert!(TypeName::parse("H3").is_err());
        assert!(TypeName::parse("B1").is_err());
    }
}
