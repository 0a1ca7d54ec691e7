//! CSS codes read off the degrees 0, 1, 2 of a based complex, and distances.
//!
//! Qubits sit in degree 1. X checks are the rows of `(δ⁰)ᵀ`, Z checks the rows
//! of `δ¹`, and the X logicals are cocycle representatives of `H¹`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{BasedComplex, BasisLabel, ComplexError};
use crate::f2linalg::{image_basis, kernel_basis, BitMatrix, BitVector, Echelon};

#[derive(Debug, Error)]
pub enum CssError {
    #[error("complex has no degree 1 to host qubits")]
    DegreeSpan,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug)]
pub struct CssCode {
    complex: BasedComplex,
    pub n: usize,
    pub k: usize,
    pub x_checks: BitMatrix,
    pub z_checks: BitMatrix,
    pub x_logicals: Vec<BitVector>,
}

impl CssCode {
    /// Reads the code off degrees 0, 1, 2. Higher degrees are ignored; a
    /// missing degree 2 means there are no Z checks.
    ///
    /// # Errors
    /// If the complex stops at degree 0 or fails validation.
    pub fn from_complex(c: &BasedComplex) -> Result<Self, CssError> {
        if c.top_degree() < 1 {
            return Err(CssError::DegreeSpan);
        }
        c.validate()
            .map_err(|v| CssError::Complex(ComplexError::Invalid(v)))?;
        let n = c.dim(1);
        let x_checks = c.coboundary(0).expect("degree 1 exists").transpose();
        let z_checks = c
            .coboundary(1)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(0, n));
        let x_logicals = c.cohomology_basis(1)?;
        let k = x_logicals.len();
        Ok(Self {
            complex: c.clone(),
            n,
            k,
            x_checks,
            z_checks,
            x_logicals,
        })
    }

    #[must_use]
    pub fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    #[must_use]
    pub fn qubit_label(&self, q: usize) -> &BasisLabel {
        self.complex.label(1, q)
    }

    /// Z logicals: homology representatives, `ker (δ⁰)ᵀ` modulo `im (δ¹)ᵀ`.
    #[must_use]
    pub fn z_logicals(&self) -> Vec<BitVector> {
        let cycles = kernel_basis(&self.x_checks);
        let boundaries = image_basis(&self.z_checks.transpose());
        crate::f2linalg::quotient_basis(&cycles, &boundaries).expect("validated complex")
    }

    fn x_side(&self) -> DistanceProblem {
        DistanceProblem::new(&self.z_checks, image_basis(self.complex.coboundary(0).expect("degree 1")))
    }

    fn z_side(&self) -> DistanceProblem {
        DistanceProblem::new(&self.x_checks, image_basis(&self.z_checks.transpose()))
    }

    /// Exact distance if some logical has weight at most `weight_cap`,
    /// otherwise the lower bound `weight_cap + 1`.
    #[must_use]
    pub fn distance_exhaustive(&self, weight_cap: usize) -> Distance {
        distance_of_sides(&[self.x_side(), self.z_side()], weight_cap)
    }

    /// Distance of one side only.
    #[must_use]
    pub fn distance_side(&self, side: PauliSide, weight_cap: usize) -> Distance {
        let p = match side {
            PauliSide::X => self.x_side(),
            PauliSide::Z => self.z_side(),
        };
        distance_of_sides(&[p], weight_cap)
    }

    /// Lowest-weight logical found by randomized information-set sampling on
    /// both sides.
    #[must_use]
    pub fn distance_upper_bound(&self, trials: usize, seed: u64) -> Option<(usize, BitVector)> {
        let x = self.x_side().random_search(trials, seed);
        let z = self.z_side().random_search(trials, seed.wrapping_add(1));
        match (x, z) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        }
    }

    /// `[[n, k, d]]` with `d` from [`Self::distance_exhaustive`].
    #[must_use]
    pub fn parameters(&self, weight_cap: usize) -> CodeParameters {
        CodeParameters::new(self.n, self.k, self.distance_exhaustive(weight_cap))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliSide {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distance {
    Exact { d: usize },
    Bounds { lower: usize, upper: Option<usize> },
}

impl Distance {
    #[must_use]
    pub fn exact(&self) -> Option<usize> {
        match self {
            Distance::Exact { d } => Some(*d),
            Distance::Bounds { .. } => None,
        }
    }

    #[must_use]
    pub fn lower(&self) -> usize {
        match self {
            Distance::Exact { d } => *d,
            Distance::Bounds { lower, .. } => *lower,
        }
    }

    /// Combines a bound with a weight found by some other search.
    #[must_use]
    pub fn with_upper(self, found: usize) -> Distance {
        match self {
            Distance::Exact { d } => Distance::Exact { d },
            Distance::Bounds { lower, upper } => {
                let upper = upper.map_or(found, |u| u.min(found));
                if upper <= lower {
                    Distance::Exact { d: upper }
                } else {
                    Distance::Bounds {
                        lower,
                        upper: Some(upper),
                    }
                }
            }
        }
    }
}

/// The JSON record `{n, k, d_exact?, d_lower?, d_upper?, method}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_lower: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_upper: Option<usize>,
    pub method: String,
    /// Printed as `[n, k, d]` rather than `[[n, k, d]]`.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub classical: bool,
}

impl CodeParameters {
    #[must_use]
    pub fn new(n: usize, k: usize, d: Distance) -> Self {
        match d {
            Distance::Exact { d } => Self {
                n,
                k,
                d_exact: Some(d),
                d_lower: None,
                d_upper: None,
                method: "exhaustive".into(),
                classical: false,
            },
            Distance::Bounds { lower, upper } => Self {
                n,
                k,
                d_exact: None,
                d_lower: Some(lower),
                d_upper: upper,
                method: if upper.is_some() {
                    "weight-capped search + randomized upper bound".into()
                } else {
                    "weight-capped search".into()
                },
                classical: false,
            },
        }
    }
}

impl std::fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (open, close) = if self.classical { ("[", "]") } else { ("[[", "]]") };
        let d = match (self.d_exact, self.d_lower, self.d_upper) {
            (Some(d), _, _) => d.to_string(),
            (None, Some(l), Some(u)) => format!("{l}..={u}"),
            (None, Some(l), None) => format!(">={l}"),
            _ => "?".into(),
        };
        write!(f, "{open}{}, {}, {d}{close}", self.n, self.k)
    }
}

/// Classical distance of `C^0 → C^1`: min weight of a nonzero bit string
/// orthogonal to every check.
#[must_use]
pub fn classical_distance(c: &BasedComplex, weight_cap: usize) -> Distance {
    let Some(delta) = c.coboundary(0) else {
        return Distance::Bounds {
            lower: weight_cap + 1,
            upper: None,
        };
    };
    let p = DistanceProblem::new(&delta.transpose(), Vec::new());
    distance_of_sides(&[p], weight_cap)
}

/// `[n, k, d]` of a classical code `C^0 → C^1`, with `k = dim ker δᵀ`.
#[must_use]
pub fn classical_parameters(c: &BasedComplex, weight_cap: usize) -> CodeParameters {
    let n = c.dim(1);
    let r = c.coboundary(0).map_or(0, crate::f2linalg::rank);
    CodeParameters {
        classical: true,
        ..CodeParameters::new(n, n - r, classical_distance(c, weight_cap))
    }
}

/// Syndrome tables of supports, keyed by weight.
type WeightTables = HashMap<usize, HashMap<BitVector, Vec<Vec<usize>>>>;

/// Minimum weight of `v` with `H v = 0` and `v ∉ span(stabilizers)`.
struct DistanceProblem {
    n: usize,
    column_syndromes: Vec<BitVector>,
    stabilizers: Echelon,
    kernel: Vec<BitVector>,
}

impl DistanceProblem {
    fn new(h: &BitMatrix, stabilizers: Vec<BitVector>) -> Self {
        let n = h.cols();
        Self {
            n,
            column_syndromes: (0..n).map(|c| h.column(c)).collect(),
            stabilizers: Echelon::from_vectors(n, &stabilizers),
            kernel: kernel_basis(h),
        }
    }

    fn has_logicals(&self) -> bool {
        self.kernel.iter().any(|v| !self.stabilizers.contains(v))
    }

    fn syndrome(&self, subset: &[usize]) -> BitVector {
        let mut s = BitVector::zeros(self.column_syndromes.first().map_or(0, BitVector::len));
        for &i in subset {
            s.xor_assign(&self.column_syndromes[i]);
        }
        s
    }

    /// All `size`-subsets of `0..n` in lexicographic order.
    fn subsets(&self, size: usize, mut f: impl FnMut(&[usize]) -> bool) {
        if size > self.n {
            return;
        }
        let mut s: Vec<usize> = (0..size).collect();
        loop {
            if !f(&s) {
                return;
            }
            let mut i = size;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if s[i] < self.n - size + i {
                    s[i] += 1;
                    for j in i + 1..size {
                        s[j] = s[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// A logical of weight exactly `w`, found by splitting each candidate
    /// support into its `⌈w/2⌉` smallest indices and the rest.
    fn logical_of_weight(
        &self,
        w: usize,
        tables: &mut WeightTables,
    ) -> Option<BitVector> {
        if w == 0 || w > self.n {
            return None;
        }
        let a = w.div_ceil(2);
        let b = w - a;
        let table = tables.entry(a).or_insert_with(|| {
            let mut t: HashMap<BitVector, Vec<Vec<usize>>> = HashMap::new();
            self.subsets(a, |s| {
                t.entry(self.syndrome(s)).or_default().push(s.to_vec());
                true
            });
            t
        });
        let mut found = None;
        let mut visit = |right: &[usize]| {
            let min_right = right.first().copied().unwrap_or(self.n);
            if let Some(lefts) = table.get(&self.syndrome(right)) {
                for left in lefts {
                    if *left.last().expect("a >= 1") >= min_right {
                        continue;
                    }
                    let support: Vec<usize> = left.iter().chain(right).copied().collect();
                    let v = BitVector::from_support(self.n, &support);
                    if !self.stabilizers.contains(&v) {
                        found = Some(v);
                        return false;
                    }
                }
            }
            true
        };
        if b == 0 {
            visit(&[]);
        } else {
            self.subsets(b, visit);
        }
        found
    }

    fn random_search(&self, trials: usize, seed: u64) -> Option<(usize, BitVector)> {
        if self.kernel.is_empty() || !self.has_logicals() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best: Option<(usize, BitVector)> = None;
        let consider = |v: &BitVector, best: &mut Option<(usize, BitVector)>| {
            let w = v.weight();
            if w > 0 && best.as_ref().is_none_or(|b| w < b.0) && !self.stabilizers.contains(v) {
                *best = Some((w, v.clone()));
            }
        };
        for _ in 0..trials {
            perm.shuffle(&mut rng);
            let permuted: Vec<BitVector> = self
                .kernel
                .iter()
                .map(|v| BitVector::from_support(self.n, &v.iter_ones().map(|i| perm[i]).collect::<Vec<_>>()))
                .collect();
            let mut m = BitMatrix::from_rows(self.n, &permuted);
            let pivots = m.rref_in_place();
            let mut inv = vec![0usize; self.n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            let rows: Vec<BitVector> = (0..pivots.len())
                .map(|r| {
                    let row = m.row(r);
                    BitVector::from_support(self.n, &row.iter_ones().map(|j| inv[j]).collect::<Vec<_>>())
                })
                .collect();
            for (i, r) in rows.iter().enumerate() {
                consider(r, &mut best);
                for s in &rows[i + 1..] {
                    consider(&r.xor(s), &mut best);
                }
            }
        }
        best
    }
}

fn distance_of_sides(sides: &[DistanceProblem], weight_cap: usize) -> Distance {
    if sides.iter().all(|s| !s.has_logicals()) {
        // no logical qubits; report the cap as a vacuous bound
        return Distance::Bounds {
            lower: weight_cap + 1,
            upper: None,
        };
    }
    let mut tables: Vec<WeightTables> = sides.iter().map(|_| HashMap::new()).collect();
    for w in 1..=weight_cap {
        for (side, table) in sides.iter().zip(tables.iter_mut()) {
            if side.logical_of_weight(w, table).is_some() {
                return Distance::Exact { d: w };
            }
        }
    }
    Distance::Bounds {
        lower: weight_cap + 1,
        upper: None,
    }
}
