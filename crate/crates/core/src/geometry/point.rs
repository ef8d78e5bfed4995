use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Exponents of the positive (`a_plus`) and negative (`a_minus`) terms.
///
/// Both lists are kept sorted lexicographically. `all()` lists `a_plus`
/// first, which is the canonical term order used throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedSupport {
    a_plus: Vec<LatticePoint>,
    a_minus: Vec<LatticePoint>,
}

impl SignedSupport {
    pub fn new(mut a_plus: Vec<LatticePoint>, mut a_minus: Vec<LatticePoint>) -> Result<Self> {
        if a_plus.is_empty() {
            return Err(Error::Input("support has no positive terms".into()));
        }
        let n = a_plus[0].dim();
        if a_plus.iter().chain(&a_minus).any(|p| p.dim() != n) {
            return Err(Error::Input("exponent vectors of different lengths".into()));
        }
        a_plus.sort();
        a_minus.sort();
        let mut all: Vec<&LatticePoint> = a_plus.iter().chain(&a_minus).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("duplicate exponent {}", w[0])));
        }
        Ok(SignedSupport { a_plus, a_minus })
    }

    pub fn a_plus(&self) -> &[LatticePoint] {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &[LatticePoint] {
        &self.a_minus
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.a_plus[0].dim()
    }

    pub fn len(&self) -> usize {
        self.a_plus.len() + self.a_minus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_plus` followed by `a_minus`.
    pub fn all(&self) -> Vec<LatticePoint> {
        self.a_plus.iter().chain(&self.a_minus).cloned().collect()
    }

    /// Whether the canonical index `i` refers to a negative term.
    pub fn is_minus(&self, i: usize) -> bool {
        i >= self.a_plus.len()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        if let Ok(i) = self.a_plus.binary_search(p) {
            return Some(i);
        }
        self.a_minus.binary_search(p).ok().map(|i| i + self.a_plus.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_duplicates() {
        let s = SignedSupport::new(
            vec![[2, 0].into(), [0, 0].into(), [0, 2].into()],
            vec![[1, 1].into()],
        )
        .unwrap();
        assert_eq!(s.a_plus()[0], LatticePoint::from([0, 0]));
        assert_eq!(s.index_of(&[1, 1].into()), Some(3));
        assert!(s.is_minus(3));
        assert!(SignedSupport::new(vec![[1, 1].into()], vec![[1, 1].into()]).is_err());
        assert!(SignedSupport::new(vec![], vec![[1, 1].into()]).is_err());
        assert_eq!(LatticePoint::from([1, -2]).to_string(), "(1,-2)");
    }
}
