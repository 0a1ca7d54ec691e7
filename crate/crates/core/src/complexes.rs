//! Based cochain complexes over F2.
//!
//! A [`BasedComplex`] stores one labeled basis per degree `0..=top` and the
//! coboundary `δ^p` from degree `p` to `p+1` as a `dims[p+1] × dims[p]`
//! matrix acting on column vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{image_basis, kernel_basis, quotient_basis, rank, BitMatrix, BitVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("expected {expected} coboundary maps, got {got}")]
    WrongMapCount { expected: usize, got: usize },
    #[error("duplicate label {label} in degree {degree}")]
    DuplicateLabel { degree: usize, label: String },
    #[error("complex failed validation: {0}")]
    Invalid(Violation),
}

/// Why a complex failed [`BasedComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `δ^degree` has the wrong shape.
    Shape {
        degree: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// `δ^{degree+1} δ^degree` does not vanish on basis element `basis`.
    NotNilpotent { degree: usize, basis: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape {
                degree,
                expected,
                got,
            } => write!(
                f,
                "coboundary in degree {degree} has shape {}x{}, expected {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            Violation::NotNilpotent { degree, basis } => write!(
                f,
                "δδ ≠ 0 starting in degree {degree} at basis element {basis}"
            ),
        }
    }
}

/// Label of a basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    Atom(String),
    /// Element of a product basis, one entry per factor.
    Tuple(Vec<BasisLabel>),
    /// Group orbit, named by its least member.
    Orbit(Box<BasisLabel>),
}

impl BasisLabel {
    pub fn atom(s: impl Into<String>) -> Self {
        BasisLabel::Atom(s.into())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Atom(s) => f.write_str(s),
            BasisLabel::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            BasisLabel::Orbit(rep) => match rep.as_ref() {
                BasisLabel::Tuple(parts) => {
                    f.write_str("[")?;
                    for (i, p) in parts.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{p}")?;
                    }
                    f.write_str("]")
                }
                other => write!(f, "[{other}]"),
            },
        }
    }
}

/// A bounded cochain complex `C^0 → C^1 → … → C^top` with labeled bases.
#[derive(Clone, Debug)]
pub struct BasedComplex {
    labels: Vec<Vec<BasisLabel>>,
    coboundaries: Vec<BitMatrix>,
    lookup: Vec<HashMap<String, usize>>,
    cohomology: Vec<OnceLock<Vec<BitVector>>>,
}

impl BasedComplex {
    /// Builds a complex from its bases and coboundary maps.
    ///
    /// Shapes and `δδ = 0` are not checked here; call [`Self::validate`].
    ///
    /// # Errors
    /// If the number of maps is not one less than the number of degrees, or a
    /// label repeats within a degree.
    pub fn new(
        labels: Vec<Vec<BasisLabel>>,
        coboundaries: Vec<BitMatrix>,
    ) -> Result<Self, ComplexError> {
        let expected = labels.len().saturating_sub(1);
        if coboundaries.len() != expected || labels.is_empty() {
            return Err(ComplexError::WrongMapCount {
                expected,
                got: coboundaries.len(),
            });
        }
        let mut lookup = Vec::with_capacity(labels.len());
        for (degree, ls) in labels.iter().enumerate() {
            let mut map = HashMap::with_capacity(ls.len());
            for (i, l) in ls.iter().enumerate() {
                if map.insert(l.to_string(), i).is_some() {
                    return Err(ComplexError::DuplicateLabel {
                        degree,
                        label: l.to_string(),
                    });
                }
            }
            lookup.push(map);
        }
        let cohomology = (0..labels.len()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            labels,
            coboundaries,
            lookup,
            cohomology,
        })
    }

    /// Two-term complex `C^0 → C^1`.
    ///
    /// # Errors
    /// As [`Self::new`].
    pub fn two_term(
        checks: Vec<BasisLabel>,
        bits: Vec<BasisLabel>,
        delta: BitMatrix,
    ) -> Result<Self, ComplexError> {
        Self::new(vec![checks, bits], vec![delta])
    }

    #[must_use]
    pub fn top_degree(&self) -> usize {
        self.labels.len() - 1
    }

    /// Basis size in degree `p`; zero outside the range.
    #[must_use]
    pub fn dim(&self, p: usize) -> usize {
        self.labels.get(p).map_or(0, Vec::len)
    }

    #[must_use]
    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    #[must_use]
    pub fn labels(&self, p: usize) -> &[BasisLabel] {
        self.labels.get(p).map_or(&[], Vec::as_slice)
    }

    #[must_use]
    pub fn label(&self, p: usize, i: usize) -> &BasisLabel {
        &self.labels[p][i]
    }

    /// Index of a label in degree `p`, compared by its rendered form.
    #[must_use]
    pub fn index_of(&self, p: usize, label: &BasisLabel) -> Option<usize> {
        self.index_of_str(p, &label.to_string())
    }

    #[must_use]
    pub fn index_of_str(&self, p: usize, label: &str) -> Option<usize> {
        self.lookup.get(p)?.get(label).copied()
    }

    /// `δ^p`, or `None` when `p >= top`.
    #[must_use]
    pub fn coboundary(&self, p: usize) -> Option<&BitMatrix> {
        self.coboundaries.get(p)
    }

    /// `δ^p(v)`; the zero vector of length `dim(p+1)` at the top degree.
    ///
    /// # Panics
    /// If `v` has the wrong length.
    #[must_use]
    pub fn apply(&self, p: usize, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.dim(p), "cochain length mismatch in degree {p}");
        match self.coboundary(p) {
            Some(m) => m.mul_vec(v),
            None => BitVector::zeros(self.dim(p + 1)),
        }
    }

    /// Checks shapes, then `δ^{p+1} δ^p = 0` for every `p`.
    ///
    /// # Errors
    /// The first violation found, scanning degrees upwards.
    pub fn validate(&self) -> Result<(), Violation> {
        for (p, m) in self.coboundaries.iter().enumerate() {
            let expected = (self.dim(p + 1), self.dim(p));
            if (m.rows(), m.cols()) != expected {
                return Err(Violation::Shape {
                    degree: p,
                    expected,
                    got: (m.rows(), m.cols()),
                });
            }
        }
        for p in 0..self.coboundaries.len().saturating_sub(1) {
            let prod = self.coboundaries[p + 1].mul(&self.coboundaries[p]);
            if let Some((_, basis)) = prod.first_nonzero_by_column() {
                return Err(Violation::NotNilpotent { degree: p, basis });
            }
        }
        Ok(())
    }

    fn check_degree(&self, p: usize) -> Result<(), ComplexError> {
        if p > self.top_degree() {
            Err(ComplexError::DegreeOutOfRange {
                degree: p,
                top: self.top_degree(),
            })
        } else {
            Ok(())
        }
    }

    /// Basis of the cocycles `Z^p = ker δ^p`.
    ///
    /// # Errors
    /// If `p` is out of range.
    pub fn cocycle_basis(&self, p: usize) -> Result<Vec<BitVector>, ComplexError> {
        self.check_degree(p)?;
        Ok(match self.coboundary(p) {
            Some(m) => kernel_basis(m),
            None => (0..self.dim(p)).map(|i| BitVector::unit(self.dim(p), i)).collect(),
        })
    }

    /// Basis of the coboundaries `B^p = im δ^{p-1}`.
    ///
    /// # Errors
    /// If `p` is out of range.
    pub fn coboundary_basis(&self, p: usize) -> Result<Vec<BitVector>, ComplexError> {
        self.check_degree(p)?;
        Ok(if p == 0 {
            Vec::new()
        } else {
            image_basis(&self.coboundaries[p - 1])
        })
    }

    /// Cocycle representatives of a basis of `H^p`, memoized.
    ///
    /// # Errors
    /// If `p` is out of range or `δδ ≠ 0`.
    pub fn cohomology_basis(&self, p: usize) -> Result<Vec<BitVector>, ComplexError> {
        self.check_degree(p)?;
        if let Some(v) = self.cohomology[p].get() {
            return Ok(v.clone());
        }
        let z = self.cocycle_basis(p)?;
        let b = self.coboundary_basis(p)?;
        let reps = quotient_basis(&z, &b).map_err(|_| {
            ComplexError::Invalid(self.validate().err().unwrap_or(Violation::NotNilpotent {
                degree: p.saturating_sub(1),
                basis: 0,
            }))
        })?;
        Ok(self.cohomology[p].get_or_init(|| reps).clone())
    }

    /// `dim H^p = dim C^p − rank δ^p − rank δ^{p-1}`.
    ///
    /// # Errors
    /// If `p` is out of range.
    pub fn betti(&self, p: usize) -> Result<usize, ComplexError> {
        self.check_degree(p)?;
        let out = self.coboundary(p).map_or(0, rank);
        let inc = if p == 0 { 0 } else { rank(&self.coboundaries[p - 1]) };
        Ok(self.dim(p) - out - inc)
    }
}

/// JSON form of a complex: labels per degree (rendered) and, per map, the
/// support of `δ^p` applied to each basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub labels: Vec<Vec<String>>,
    pub coboundaries: Vec<Vec<Vec<usize>>>,
}

impl BasedComplex {
    #[must_use]
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            labels: self
                .labels
                .iter()
                .map(|ls| ls.iter().map(ToString::to_string).collect())
                .collect(),
            coboundaries: self.coboundaries.iter().map(BitMatrix::column_supports).collect(),
        }
    }

    /// Rebuilds a complex with atomic labels and validates it.
    ///
    /// # Errors
    /// On repeated labels, out-of-range indices or `δδ ≠ 0`.
    pub fn from_json(j: &ComplexJson) -> Result<Self, ComplexError> {
        let mut maps = Vec::with_capacity(j.coboundaries.len());
        for (p, cols) in j.coboundaries.iter().enumerate() {
            let (rows, ncols) = (j.labels.get(p + 1).map_or(0, Vec::len), j.labels[p].len());
            if cols.len() != ncols {
                return Err(ComplexError::Invalid(Violation::Shape {
                    degree: p,
                    expected: (rows, ncols),
                    got: (rows, cols.len()),
                }));
            }
            let mut m = BitMatrix::zeros(rows, ncols);
            for (c, supp) in cols.iter().enumerate() {
                for &r in supp {
                    if r >= rows {
                        return Err(ComplexError::Invalid(Violation::Shape {
                            degree: p,
                            expected: (rows, ncols),
                            got: (r + 1, ncols),
                        }));
                    }
                    m.flip(r, c);
                }
            }
            maps.push(m);
        }
        let labels = j
            .labels
            .iter()
            .map(|ls| ls.iter().map(|s| BasisLabel::atom(s.clone())).collect())
            .collect();
        let c = Self::new(labels, maps)?;
        c.validate().map_err(ComplexError::Invalid)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2linalg::in_span;

    fn circle(n: usize) -> BasedComplex {
        let mut d = BitMatrix::zeros(n, n);
        for v in 0..n {
            d.flip((v + n - 1) % n, v);
            d.flip(v, v);
        }
        BasedComplex::two_term(
            (0..n).map(|i| BasisLabel::atom(format!("v{i}"))).collect(),
            (0..n).map(|i| BasisLabel::atom(format!("e{i}"))).collect(),
            d,
        )
        .unwrap()
    }

    #[test]
    fn single_term_is_valid() {
        let c = BasedComplex::new(vec![vec![BasisLabel::atom("a")]], vec![]).unwrap();
        assert_eq!(c.validate(), Ok(()));
        assert_eq!(c.betti(0).unwrap(), 1);
    }

    #[test]
    fn identity_squared_is_flagged() {
        let l = |s: &str| vec![BasisLabel::atom(s)];
        let c = BasedComplex::new(
            vec![l("a"), l("b"), l("c")],
            vec![BitMatrix::identity(1), BitMatrix::identity(1)],
        )
        .unwrap();
        assert_eq!(
            c.validate(),
            Err(Violation::NotNilpotent {
                degree: 0,
                basis: 0
            })
        );
    }

    #[test]
    fn shape_is_reported_separately() {
        let l = |s: &str| vec![BasisLabel::atom(s)];
        let c = BasedComplex::new(vec![l("a"), l("b")], vec![BitMatrix::zeros(2, 1)]).unwrap();
        assert!(matches!(c.validate(), Err(Violation::Shape { degree: 0, .. })));
    }

    #[test]
    fn circle_cohomology() {
        let c = circle(4);
        let h = c.cohomology_basis(1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(c.betti(1).unwrap(), 1);
        assert_eq!(c.betti(0).unwrap(), 1);
        // exhaustive: exactly the odd cochains are nontrivial classes
        let b = c.coboundary_basis(1).unwrap();
        for mask in 0u32..16 {
            let v = BitVector::from_bools(&(0..4).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            assert_eq!(in_span(&v, &b).unwrap(), v.weight().is_multiple_of(2));
        }
        assert!(!in_span(&h[0], &b).unwrap());
    }

    #[test]
    fn one_by_one_identity_has_no_h1() {
        let c = BasedComplex::two_term(
            vec![BasisLabel::atom("a")],
            vec![BasisLabel::atom("x")],
            BitMatrix::identity(1),
        )
        .unwrap();
        assert!(c.cohomology_basis(1).unwrap().is_empty());
        assert!(c.cohomology_basis(2).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = BasedComplex::new(
            vec![vec![BasisLabel::atom("a"), BasisLabel::atom("a")]],
            vec![],
        );
        assert!(matches!(r, Err(ComplexError::DuplicateLabel { .. })));
    }

    #[test]
    fn json_round_trip() {
        let c = circle(5);
        let j = c.to_json();
        let back = BasedComplex::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        assert_eq!(back.betti(1).unwrap(), 1);
        let mut bad = j.clone();
        bad.coboundaries[0][0].push(7);
        assert!(BasedComplex::from_json(&bad).is_err());
    }

    #[test]
    fn label_rendering() {
        let t = BasisLabel::Tuple(vec![BasisLabel::atom("e0"), BasisLabel::atom("v1")]);
        assert_eq!(t.to_string(), "(e0,v1)");
        assert_eq!(BasisLabel::Orbit(Box::new(t)).to_string(), "[e0,v1]");
    }
}
