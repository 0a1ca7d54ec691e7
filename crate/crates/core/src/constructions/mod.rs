//! Code families: oriented cycles and tori, plaquette Ising and the
//! anisotropic lineon code, group-algebra and bivariate bicycle codes, and
//! Sipser-Spielman codes.

mod group_algebra;
mod sipser_spielman;

pub use group_algebra::*;
pub use sipser_spielman::*;

use thiserror::Error;

use crate::complexes::{BasedComplex, BasisLabel, ComplexError};
use crate::css::{CssCode, CssError};
use crate::f2linalg::BitMatrix;
use crate::group::GroupError;
use crate::orientation::{CupStructure, OrientationError, Partition, PreOrientation};
use crate::products::{CupAlgebra, ProductError, TensorComplex};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("hypotheses violated: {0:?}")]
    Hypotheses(Vec<String>),
    #[error("invalid splitting: {0:?}")]
    Splitting(SplittingReport),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Css(#[from] CssError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A quantum code together with the cup algebra it was built from.
#[derive(Clone, Debug)]
pub struct CupCode<A> {
    pub algebra: A,
    pub code: CssCode,
}

impl<A: CupAlgebra> CupCode<A> {
    /// # Errors
    /// If the algebra's complex does not define a CSS code.
    pub fn new(algebra: A) -> Result<Self, ConstructionError> {
        let code = CssCode::from_complex(algebra.complex())?;
        Ok(Self { algebra, code })
    }
}

/// Builds a classical code from per-check partitions, taking `δ(a)` to be the
/// union of the three classes.
///
/// # Errors
/// If a bit index is out of range or labels repeat.
pub fn classical_from_partitions(
    check_labels: Vec<String>,
    bit_labels: Vec<String>,
    parts: Vec<Partition>,
) -> Result<CupStructure, ConstructionError> {
    let n1 = bit_labels.len();
    let mut d = BitMatrix::zeros(n1, check_labels.len());
    for (a, p) in parts.iter().enumerate() {
        for &x in p.incoming.iter().chain(&p.outgoing).chain(&p.free) {
            if x >= n1 {
                return Err(ConstructionError::Parameter(format!("bit {x} of check {a} out of range")));
            }
            d.flip(x, a);
        }
    }
    let c = BasedComplex::two_term(
        check_labels.into_iter().map(BasisLabel::Atom).collect(),
        bit_labels.into_iter().map(BasisLabel::Atom).collect(),
        d,
    )?;
    Ok(CupStructure::new(c, PreOrientation::new(parts))?)
}

/// Oriented `n`-cycle: vertex `v_i`, edge `e_i` from `v_i` to `v_{i+1}`, so
/// `in(v_i) = {e_{i-1}}` and `out(v_i) = {e_i}`.
///
/// # Errors
/// If `n < 2`.
pub fn repetition_circle(n: usize) -> Result<CupStructure, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::Parameter(format!("circle needs n >= 2, got {n}")));
    }
    let parts = (0..n)
        .map(|i| Partition::new(vec![(i + n - 1) % n], vec![i], vec![]))
        .collect();
    classical_from_partitions(
        (0..n).map(|i| format!("v{i}")).collect(),
        (0..n).map(|i| format!("e{i}")).collect(),
        parts,
    )
}

/// `Λ`-fold tensor power of the oriented `L`-cycle: the `Λ`-dimensional torus
/// with qubits on edges.
///
/// # Errors
/// If `Λ < 2` or `L < 2`.
pub fn torus_code(lambda: usize, l: usize) -> Result<CupCode<TensorComplex>, ConstructionError> {
    if lambda < 2 {
        return Err(ConstructionError::Parameter(format!("torus needs Λ >= 2, got {lambda}")));
    }
    let circle = repetition_circle(l)?;
    CupCode::new(TensorComplex::new(vec![circle; lambda])?)
}

/// Plaquette Ising code on the periodic `L × L` grid. Bit `s{i}_{j}` sits at
/// vertex `(i, j)`, check `p{i}_{j}` is the plaquette with south-west corner
/// `(i, j)`; in = SW, out = NE, free = {NW, SE}.
///
/// # Errors
/// If `L < 2`.
pub fn plaquette_ising(l: usize) -> Result<CupStructure, ConstructionError> {
    if l < 2 {
        return Err(ConstructionError::Parameter(format!("plaquette Ising needs L >= 2, got {l}")));
    }
    let bit = |i: usize, j: usize| (i % l) * l + (j % l);
    let mut parts = Vec::with_capacity(l * l);
    let mut checks = Vec::with_capacity(l * l);
    let mut bits = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            checks.push(format!("p{i}_{j}"));
            bits.push(format!("s{i}_{j}"));
            parts.push(Partition::new(
                vec![bit(i, j)],
                vec![bit(i + 1, j + 1)],
                vec![bit(i, j + 1), bit(i + 1, j)],
            ));
        }
    }
    classical_from_partitions(checks, bits, parts)
}

/// Plaquette Ising code tensored with the oriented `L`-cycle.
///
/// # Errors
/// If `L < 2`.
pub fn anisotropic_lineon(l: usize) -> Result<CupCode<TensorComplex>, ConstructionError> {
    CupCode::new(TensorComplex::new(vec![plaquette_ising(l)?, repetition_circle(l)?])?)
}
