//! Tensor and balanced products of classical codes with their inherited cup
//! products and integrals.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{BasedComplex, BasisLabel, ComplexError};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::group::AbelianGroup;
use crate::orientation::{Cell, Cochain, CupStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("a product needs at least one factor")]
    NoFactors,
    #[error("action has {got} factor tables for {expected} factors")]
    FactorCount { expected: usize, got: usize },
    #[error("action is not free: {label} in degree {degree} has a stabilizer")]
    NonFree { degree: usize, label: String },
    #[error("action not compatible with factor {factor}: {report:?}")]
    NotCompatible {
        factor: usize,
        report: CompatibilityReport,
    },
    #[error("integral undefined on factor {factor}: check {check} has odd support")]
    IntegralUndefined { factor: usize, check: usize },
    #[error("cochain degree {0} out of range")]
    Degree(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A complex with a cup product given on basis elements and the mod-2
/// weight integral in its top degree.
pub trait CupAlgebra {
    fn complex(&self) -> &BasedComplex;

    /// Degree carrying the integral.
    fn top_degree(&self) -> usize {
        self.complex().top_degree()
    }

    /// Every degree-`q` basis element `v` with `u ∪ v ≠ 0` for the degree-`p`
    /// basis element `u`, paired with the support of `u ∪ v`.
    fn cup_partners(&self, p: usize, u: usize, q: usize) -> Vec<(usize, Vec<usize>)>;

    /// Whether the top-degree integral is defined.
    fn integral_defined(&self) -> bool;

    /// Support of `u ∪ v` for basis elements.
    fn cup_basis(&self, p: usize, u: usize, q: usize, v: usize) -> Vec<usize> {
        self.cup_partners(p, u, q)
            .into_iter()
            .find(|(w, _)| *w == v)
            .map(|(_, r)| r)
            .unwrap_or_default()
    }

    /// Bilinear cup product of homogeneous cochains.
    ///
    /// # Errors
    /// If a degree exceeds the top or a length is wrong.
    fn cup(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, ProductError> {
        let c = self.complex();
        for h in [f, g] {
            if h.degree > self.top_degree() || h.values.len() != c.dim(h.degree) {
                return Err(ProductError::Degree(h.degree));
            }
        }
        let degree = f.degree + g.degree;
        let mut out = BitVector::zeros(c.dim(degree));
        if degree > self.top_degree() {
            return Ok(Cochain::new(degree, out));
        }
        for u in f.values.iter_ones() {
            for (v, res) in self.cup_partners(f.degree, u, g.degree) {
                if g.values.get(v) {
                    for w in res {
                        out.flip(w);
                    }
                }
            }
        }
        Ok(Cochain::new(degree, out))
    }

    /// Left-nested `Λ`-fold product.
    ///
    /// # Errors
    /// As [`Self::cup`], or on an empty argument list.
    fn lambda_cup(&self, args: &[Cochain]) -> Result<Cochain, ProductError> {
        let Some((first, rest)) = args.split_first() else {
            return Err(ProductError::NoFactors);
        };
        let mut acc = first.clone();
        for g in rest {
            if acc.degree + g.degree > self.top_degree() {
                let d = acc.degree + g.degree;
                acc = Cochain::new(d, BitVector::zeros(self.complex().dim(d)));
            } else {
                acc = self.cup(&acc, g)?;
            }
        }
        Ok(acc)
    }

    /// `∫ f = |supp f| mod 2` on the top degree.
    ///
    /// # Errors
    /// If the integral is undefined or `f` is not top-degree.
    fn integral(&self, f: &Cochain) -> Result<bool, ProductError> {
        if !self.integral_defined() {
            return Err(ProductError::IntegralUndefined {
                factor: 0,
                check: 0,
            });
        }
        if f.degree != self.top_degree() {
            return Err(ProductError::Degree(f.degree));
        }
        Ok(f.values.weight() % 2 == 1)
    }
}

impl CupAlgebra for CupStructure {
    fn complex(&self) -> &BasedComplex {
        CupStructure::complex(self)
    }

    fn cup_partners(&self, p: usize, u: usize, q: usize) -> Vec<(usize, Vec<usize>)> {
        match (p, q) {
            (0, 0) => vec![(u, vec![u])],
            (0, 1) => self.part(u).outgoing.iter().map(|&x| (x, vec![x])).collect(),
            (1, 0) => self.checks_with_in(u).iter().map(|&a| (a, vec![u])).collect(),
            _ => Vec::new(),
        }
    }

    fn integral_defined(&self) -> bool {
        CupStructure::integral_defined(self)
    }
}

fn factor_partners(f: &CupStructure, u: Cell) -> Vec<(Cell, Cell)> {
    let mut out = Vec::new();
    for q in 0..=1 - u.degree {
        for (v, r) in CupAlgebra::cup_partners(f, u.degree, u.index, q) {
            out.push((
                Cell { degree: q, index: v },
                Cell {
                    degree: u.degree + q,
                    index: r[0],
                },
            ));
        }
    }
    out
}

/// The `Λ`-fold tensor product of classical codes.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    factors: Vec<CupStructure>,
    complex: BasedComplex,
    cells: Vec<Vec<Vec<Cell>>>,
    strides: Vec<usize>,
    position: Vec<(usize, usize)>,
}

impl TensorComplex {
    /// Builds `C_1 ⊗ … ⊗ C_Λ` with cells ordered lexicographically within
    /// each degree (checks before bits in every slot).
    ///
    /// # Errors
    /// On an empty factor list.
    pub fn new(factors: Vec<CupStructure>) -> Result<Self, ProductError> {
        if factors.is_empty() {
            return Err(ProductError::NoFactors);
        }
        let lam = factors.len();
        let sizes: Vec<usize> = factors.iter().map(|f| f.num_checks() + f.num_bits()).collect();
        let mut strides = vec![1usize; lam];
        for i in (0..lam.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        let total: usize = sizes.iter().product();
        let mut cells: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); lam + 1];
        let mut position = vec![(0, 0); total];
        for (flat, pos) in position.iter_mut().enumerate() {
            let tuple: Vec<Cell> = (0..lam)
                .map(|i| {
                    let k = (flat / strides[i]) % sizes[i];
                    let n0 = factors[i].num_checks();
                    if k < n0 {
                        Cell::check(k)
                    } else {
                        Cell::bit(k - n0)
                    }
                })
                .collect();
            let d: usize = tuple.iter().map(|c| c.degree).sum();
            *pos = (d, cells[d].len());
            cells[d].push(tuple);
        }
        let labels: Vec<Vec<BasisLabel>> = cells
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|t| {
                        BasisLabel::Tuple(
                            t.iter()
                                .zip(&factors)
                                .map(|(c, f)| f.complex().label(c.degree, c.index).clone())
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut deltas = Vec::with_capacity(lam);
        for d in 0..lam {
            let mut m = BitMatrix::zeros(cells[d + 1].len(), cells[d].len());
            for (col, t) in cells[d].iter().enumerate() {
                for j in 0..lam {
                    if t[j].degree != 0 {
                        continue;
                    }
                    let n0 = factors[j].num_checks();
                    let base = flat_of(&strides, &factors, t) - t[j].index * strides[j];
                    for &x in factors[j].delta(t[j].index) {
                        let (_, row) = position[base + (n0 + x) * strides[j]];
                        m.flip(row, col);
                    }
                }
            }
            deltas.push(m);
        }
        let complex = BasedComplex::new(labels, deltas)?;
        Ok(Self {
            factors,
            complex,
            cells,
            strides,
            position,
        })
    }

    #[must_use]
    pub fn factors(&self) -> &[CupStructure] {
        &self.factors
    }

    /// Factor cells of basis element `i` in degree `p`.
    #[must_use]
    pub fn cell(&self, p: usize, i: usize) -> &[Cell] {
        &self.cells[p][i]
    }

    /// `(degree, index)` of a tuple of factor cells.
    #[must_use]
    pub fn locate(&self, tuple: &[Cell]) -> (usize, usize) {
        self.position[flat_of(&self.strides, &self.factors, tuple)]
    }

    /// Tensor product of factor cochains.
    ///
    /// # Panics
    /// If the number of parts differs from the number of factors.
    #[must_use]
    pub fn tensor_cochain(&self, parts: &[Cochain]) -> Cochain {
        assert_eq!(parts.len(), self.factors.len());
        let degree: usize = parts.iter().map(|c| c.degree).sum();
        let mut out = BitVector::zeros(self.complex.dim(degree));
        let supports: Vec<Vec<usize>> = parts.iter().map(|c| c.values.support()).collect();
        let mut idx = vec![0usize; parts.len()];
        if supports.iter().any(Vec::is_empty) {
            return Cochain::new(degree, out);
        }
        loop {
            let tuple: Vec<Cell> = idx
                .iter()
                .zip(parts)
                .zip(&supports)
                .map(|((&k, c), s)| Cell {
                    degree: c.degree,
                    index: s[k],
                })
                .collect();
            out.flip(self.locate(&tuple).1);
            let mut j = parts.len();
            loop {
                if j == 0 {
                    return Cochain::new(degree, out);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < supports[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// Künneth basis of `H¹`: for each slot `j`, each `H¹` class of factor
    /// `j` tensored with `H⁰` classes of all other factors. Entries are
    /// `(slot, representative)`.
    ///
    /// # Errors
    /// If some factor's cohomology cannot be computed.
    pub fn kunneth_h1_basis(&self) -> Result<Vec<(usize, Cochain)>, ProductError> {
        let lam = self.factors.len();
        let mut h0 = Vec::with_capacity(lam);
        let mut h1 = Vec::with_capacity(lam);
        for f in &self.factors {
            h0.push(f.complex().cohomology_basis(0)?);
            h1.push(f.complex().cohomology_basis(1)?);
        }
        let mut out = Vec::new();
        for j in 0..lam {
            let choices: Vec<Vec<Cochain>> = (0..lam)
                .map(|i| {
                    let (d, reps) = if i == j { (1, &h1[i]) } else { (0, &h0[i]) };
                    reps.iter().map(|v| Cochain::new(d, v.clone())).collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; lam];
            'outer: loop {
                let parts: Vec<Cochain> = idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
                out.push((j, self.tensor_cochain(&parts)));
                let mut i = lam;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < choices[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        Ok(out)
    }
}

fn flat_of(strides: &[usize], factors: &[CupStructure], tuple: &[Cell]) -> usize {
    tuple
        .iter()
        .zip(factors)
        .zip(strides)
        .map(|((c, f), s)| (if c.degree == 0 { c.index } else { f.num_checks() + c.index }) * s)
        .sum()
}

impl CupAlgebra for TensorComplex {
    fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    fn cup_partners(&self, p: usize, u: usize, q: usize) -> Vec<(usize, Vec<usize>)> {
        let tuple = &self.cells[p][u];
        let lists: Vec<Vec<(Cell, Cell)>> = tuple
            .iter()
            .zip(&self.factors)
            .map(|(&c, f)| factor_partners(f, c))
            .collect();
        let mut out = Vec::new();
        if lists.iter().any(Vec::is_empty) {
            return out;
        }
        let lam = tuple.len();
        let mut idx = vec![0usize; lam];
        let mut v = vec![Cell::check(0); lam];
        let mut r = vec![Cell::check(0); lam];
        loop {
            let deg: usize = idx.iter().zip(&lists).map(|(&k, l)| l[k].0.degree).sum();
            if deg == q {
                for i in 0..lam {
                    (v[i], r[i]) = lists[i][idx[i]];
                }
                let (_, vi) = self.locate(&v);
                let (_, ri) = self.locate(&r);
                out.push((vi, vec![ri]));
            }
            let mut i = lam;
            loop {
                if i == 0 {
                    out.sort_unstable();
                    return out;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < lists[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn integral_defined(&self) -> bool {
        self.factors.iter().all(CupStructure::integral_defined)
    }
}

/// Integral of a top-degree tensor cochain: the sum over its support of the
/// product of factor integrals, which is `|supp f| mod 2`.
///
/// # Errors
/// If a factor has a check of odd support, or `f` is not top-degree.
pub fn tensor_integral(t: &TensorComplex, f: &Cochain) -> Result<bool, ProductError> {
    for (i, fac) in t.factors.iter().enumerate() {
        if let Some(a) = (0..fac.num_checks()).find(|&a| fac.delta(a).len() % 2 == 1) {
            return Err(ProductError::IntegralUndefined { factor: i, check: a });
        }
    }
    if f.degree != t.factors.len() || f.values.len() != t.complex.dim(f.degree) {
        return Err(ProductError::Degree(f.degree));
    }
    let mut acc = false;
    for i in f.values.iter_ones() {
        // each factor integral of a single bit is 1
        acc ^= t.cells[f.degree][i].iter().all(|c| c.degree == 1);
    }
    Ok(acc)
}

// ============================================================================
// Group actions and balanced products
// ============================================================================

/// Basis permutations of one factor: `perms[degree][h][i]` is `h · i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorAction {
    pub perms: Vec<Vec<Vec<usize>>>,
}

impl FactorAction {
    /// Every element acts as the identity.
    #[must_use]
    pub fn trivial(group_order: usize, dims: [usize; 2]) -> Self {
        Self {
            perms: dims
                .iter()
                .map(|&n| vec![(0..n).collect(); group_order])
                .collect(),
        }
    }

    /// Tables from a rule `(degree, h, i) ↦ h · i`.
    #[must_use]
    pub fn from_fn(group_order: usize, dims: [usize; 2], f: impl Fn(usize, usize, usize) -> usize) -> Self {
        Self {
            perms: (0..2)
                .map(|d| {
                    (0..group_order)
                        .map(|h| (0..dims[d]).map(|i| f(d, h, i)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    #[must_use]
    pub fn apply(&self, h: usize, c: Cell) -> Cell {
        Cell {
            degree: c.degree,
            index: self.perms[c.degree][h][c.index],
        }
    }
}

/// An abelian group acting diagonally on a tensor product, factor by factor.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: AbelianGroup,
    pub factors: Vec<FactorAction>,
}

impl GroupAction {
    #[must_use]
    pub fn new(group: AbelianGroup, factors: Vec<FactorAction>) -> Self {
        Self { group, factors }
    }

    /// Trivial group acting on `t`.
    #[must_use]
    pub fn trivial(t: &TensorComplex) -> Self {
        let group = AbelianGroup::cyclic(1);
        let factors = t
            .factors
            .iter()
            .map(|f| FactorAction::trivial(1, [f.num_checks(), f.num_bits()]))
            .collect();
        Self { group, factors }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompatibilityReport {
    /// Table shape does not match the factor.
    Shape { degree: usize },
    NotPermutation { degree: usize, element: usize },
    /// `perm(g h) ≠ perm(g) ∘ perm(h)`.
    NotHomomorphism { degree: usize, g: usize, h: usize },
    /// `h · δ(a) ≠ δ(h · a)`.
    Coboundary { element: usize, check: usize },
    /// `h · class(a) ≠ class(h · a)` for class `in`, `out` or `free`.
    Orientation {
        element: usize,
        check: usize,
        class: String,
    },
}

/// Verifies that a factor action is a group action by complex automorphisms
/// preserving the pre-orientation. The integral is a weight parity and is
/// preserved by any basis permutation.
///
/// # Errors
/// The first violation found.
pub fn check_action_compatibility(
    factor: &CupStructure,
    group: &AbelianGroup,
    action: &FactorAction,
) -> Result<(), CompatibilityReport> {
    let dims = [factor.num_checks(), factor.num_bits()];
    let order = group.order();
    if action.perms.len() != 2 {
        return Err(CompatibilityReport::Shape { degree: action.perms.len().min(1) });
    }
    for (d, &dim) in dims.iter().enumerate() {
        if action.perms[d].len() != order || action.perms[d].iter().any(|p| p.len() != dim) {
            return Err(CompatibilityReport::Shape { degree: d });
        }
        for (h, p) in action.perms[d].iter().enumerate() {
            let mut seen = vec![false; dim];
            for &i in p {
                if i >= dim || std::mem::replace(&mut seen[i], true) {
                    return Err(CompatibilityReport::NotPermutation { degree: d, element: h });
                }
            }
        }
        for g in 0..order {
            for h in 0..order {
                let gh = group.mul(g, h);
                let ok = (0..dim).all(|i| action.perms[d][gh][i] == action.perms[d][g][action.perms[d][h][i]]);
                if !ok {
                    return Err(CompatibilityReport::NotHomomorphism { degree: d, g, h });
                }
            }
        }
    }
    let moved = |h: usize, s: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&x| action.perms[1][h][x]).collect();
        v.sort_unstable();
        v
    };
    for h in 0..order {
        for a in 0..dims[0] {
            let ha = action.perms[0][h][a];
            if moved(h, factor.delta(a)) != factor.delta(ha) {
                return Err(CompatibilityReport::Coboundary { element: h, check: a });
            }
            let (pa, pha) = (factor.part(a), factor.part(ha));
            for (class, x, y) in [
                ("in", &pa.incoming, &pha.incoming),
                ("out", &pa.outgoing, &pha.outgoing),
                ("free", &pa.free, &pha.free),
            ] {
                if moved(h, x) != *y {
                    return Err(CompatibilityReport::Orientation {
                        element: h,
                        check: a,
                        class: class.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Coinvariants `(C_1 ⊗ … ⊗ C_Λ)_H` of a free diagonal action, on the orbit
/// basis named by least representatives.
#[derive(Clone, Debug)]
pub struct BalancedComplex {
    tensor: TensorComplex,
    action: GroupAction,
    complex: BasedComplex,
    reps: Vec<Vec<usize>>,
    orbit_of: Vec<Vec<usize>>,
}

impl BalancedComplex {
    /// # Errors
    /// `NotCompatible` if some factor action fails
    /// [`check_action_compatibility`], `NonFree` if some product basis element
    /// has a nontrivial stabilizer.
    pub fn new(tensor: TensorComplex, action: GroupAction) -> Result<Self, ProductError> {
        if action.factors.len() != tensor.factors.len() {
            return Err(ProductError::FactorCount {
                expected: tensor.factors.len(),
                got: action.factors.len(),
            });
        }
        for (i, (f, a)) in tensor.factors.iter().zip(&action.factors).enumerate() {
            check_action_compatibility(f, &action.group, a)
                .map_err(|report| ProductError::NotCompatible { factor: i, report })?;
        }
        let order = action.group.order();
        let top = tensor.complex.top_degree();
        let mut reps = vec![Vec::new(); top + 1];
        let mut orbit_of = vec![Vec::new(); top + 1];
        for d in 0..=top {
            let n = tensor.complex.dim(d);
            orbit_of[d] = vec![usize::MAX; n];
            for i in 0..n {
                if orbit_of[d][i] != usize::MAX {
                    continue;
                }
                let o = reps[d].len();
                reps[d].push(i);
                let mut members = Vec::with_capacity(order);
                for h in 0..order {
                    let j = act_on_tuple(&tensor, &action, h, d, i);
                    members.push(j);
                }
                members.sort_unstable();
                members.dedup();
                if members.len() != order {
                    return Err(ProductError::NonFree {
                        degree: d,
                        label: tensor.complex.label(d, i).to_string(),
                    });
                }
                for j in members {
                    orbit_of[d][j] = o;
                }
            }
        }
        let labels: Vec<Vec<BasisLabel>> = (0..=top)
            .map(|d| {
                reps[d]
                    .iter()
                    .map(|&i| BasisLabel::Orbit(Box::new(tensor.complex.label(d, i).clone())))
                    .collect()
            })
            .collect();
        let mut deltas = Vec::with_capacity(top);
        for d in 0..top {
            let big = tensor.complex.coboundary(d).expect("d < top");
            let mut m = BitMatrix::zeros(reps[d + 1].len(), reps[d].len());
            for (o, &i) in reps[d].iter().enumerate() {
                for j in big.column(i).iter_ones() {
                    m.flip(orbit_of[d + 1][j], o);
                }
            }
            deltas.push(m);
        }
        let complex = BasedComplex::new(labels, deltas)?;
        Ok(Self {
            tensor,
            action,
            complex,
            reps,
            orbit_of,
        })
    }

    #[must_use]
    pub fn tensor(&self) -> &TensorComplex {
        &self.tensor
    }

    #[must_use]
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// Tensor index of the representative of orbit `o` in degree `p`.
    #[must_use]
    pub fn representative(&self, p: usize, o: usize) -> usize {
        self.reps[p][o]
    }

    /// Orbit of tensor basis element `i` in degree `p`.
    #[must_use]
    pub fn orbit(&self, p: usize, i: usize) -> usize {
        self.orbit_of[p][i]
    }

    /// `(degree, orbit)` of a tuple of factor cells.
    #[must_use]
    pub fn orbit_of_tuple(&self, tuple: &[Cell]) -> (usize, usize) {
        let (d, i) = self.tensor.locate(tuple);
        (d, self.orbit_of[d][i])
    }

    /// Projection of a tensor cochain onto the orbit basis.
    #[must_use]
    pub fn project(&self, f: &Cochain) -> Cochain {
        let mut out = BitVector::zeros(self.complex.dim(f.degree));
        for i in f.values.iter_ones() {
            out.flip(self.orbit_of[f.degree][i]);
        }
        Cochain::new(f.degree, out)
    }

    /// `[u] ∪ [v] = Σ_{h ∈ H} [u ∪ h·v]` evaluated term by term on the
    /// representatives `u`, `v`.
    #[must_use]
    pub fn cup_by_group_sum(&self, p: usize, o1: usize, q: usize, o2: usize) -> Vec<usize> {
        let degree = p + q;
        let mut out = BitVector::zeros(self.complex.dim(degree));
        if degree > self.complex.top_degree() {
            return Vec::new();
        }
        let u = self.reps[p][o1];
        let v = self.reps[q][o2];
        for h in 0..self.action.group.order() {
            let hv = act_on_tuple(&self.tensor, &self.action, h, q, v);
            for w in self.tensor.cup_basis(p, u, q, hv) {
                out.flip(self.orbit_of[degree][w]);
            }
        }
        out.support()
    }
}

fn act_on_tuple(t: &TensorComplex, a: &GroupAction, h: usize, d: usize, i: usize) -> usize {
    let moved: Vec<Cell> = t.cells[d][i]
        .iter()
        .zip(&a.factors)
        .map(|(&c, fa)| fa.apply(h, c))
        .collect();
    t.locate(&moved).1
}

impl CupAlgebra for BalancedComplex {
    fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    fn cup_partners(&self, p: usize, u: usize, q: usize) -> Vec<(usize, Vec<usize>)> {
        let rep = self.reps[p][u];
        let mut grouped: BTreeMap<usize, BTreeMap<usize, bool>> = BTreeMap::new();
        for (v, res) in self.tensor.cup_partners(p, rep, q) {
            let ov = self.orbit_of[q][v];
            let entry = grouped.entry(ov).or_default();
            for w in res {
                let ow = self.orbit_of[p + q][w];
                let bit = entry.entry(ow).or_insert(false);
                *bit = !*bit;
            }
        }
        grouped
            .into_iter()
            .map(|(v, res)| (v, res.into_iter().filter(|(_, b)| *b).map(|(w, _)| w).collect::<Vec<_>>()))
            .filter(|(_, r)| !r.is_empty())
            .collect()
    }

    fn integral_defined(&self) -> bool {
        self.tensor.integral_defined()
    }
}

/// Counts basis elements per degree, for quick summaries.
#[must_use]
pub fn degree_counts(c: &BasedComplex) -> HashMap<usize, usize> {
    c.dims().into_iter().enumerate().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::{Partition, PreOrientation};

    fn circle(n: usize) -> CupStructure {
        let mut d = BitMatrix::zeros(n, n);
        let mut parts = Vec::new();
        for v in 0..n {
            d.flip(v, v);
            d.flip((v + n - 1) % n, v);
            parts.push(Partition::new(vec![(v + n - 1) % n], vec![v], vec![]));
        }
        let c = BasedComplex::two_term(
            (0..n).map(|i| BasisLabel::atom(format!("v{i}"))).collect(),
            (0..n).map(|i| BasisLabel::atom(format!("e{i}"))).collect(),
            d,
        )
        .unwrap();
        CupStructure::new(c, PreOrientation::new(parts)).unwrap()
    }

    fn rotation(n: usize, shift: usize) -> FactorAction {
        FactorAction::from_fn(n / shift, [n, n], |_, h, i| (i + h * shift) % n)
    }

    #[test]
    fn torus_counts_and_validity() {
        let t = TensorComplex::new(vec![circle(2), circle(2)]).unwrap();
        assert_eq!(t.complex().dims(), vec![4, 8, 4]);
        assert!(t.complex().validate().is_ok());
        assert_eq!(t.complex().betti(1).unwrap(), 2);
        let t4 = TensorComplex::new(vec![circle(4), circle(4)]).unwrap();
        assert_eq!(t4.complex().dim(1), 32);
        assert_eq!(t4.kunneth_h1_basis().unwrap().len(), 2);
    }

    #[test]
    fn consecutive_edges_cup_to_face() {
        let t = TensorComplex::new(vec![circle(3), circle(3)]).unwrap();
        let c = t.complex();
        let h = c.index_of_str(1, "(e0,v0)").unwrap();
        let v = c.index_of_str(1, "(v1,e0)").unwrap();
        let face = c.index_of_str(2, "(e0,e0)").unwrap();
        assert_eq!(t.cup_basis(1, h, 1, v), vec![face]);
        let h2 = c.index_of_str(1, "(e1,v0)").unwrap();
        assert!(t.cup_basis(1, h, 1, h2).is_empty());
        assert!(t.cup_basis(1, v, 1, h).is_empty());
    }

    #[test]
    fn tensor_integral_basics() {
        let t = TensorComplex::new(vec![circle(3), circle(3)]).unwrap();
        let n2 = t.complex().dim(2);
        assert!(tensor_integral(&t, &Cochain::new(2, BitVector::unit(n2, 4))).unwrap());
        assert!(!tensor_integral(&t, &Cochain::new(2, BitVector::from_support(n2, &[1, 4]))).unwrap());
        for i in 0..t.complex().dim(1) {
            let b = t.complex().apply(1, &BitVector::unit(t.complex().dim(1), i));
            assert!(!tensor_integral(&t, &Cochain::new(2, b)).unwrap());
        }
    }

    #[test]
    fn trivial_group_is_identity() {
        let t = TensorComplex::new(vec![circle(3), circle(3)]).unwrap();
        let a = GroupAction::trivial(&t);
        let b = BalancedComplex::new(t.clone(), a).unwrap();
        assert_eq!(b.complex().dims(), t.complex().dims());
        for p in 0..=2 {
            for u in 0..t.complex().dim(p) {
                for q in 0..=2 - p {
                    assert_eq!(b.cup_partners(p, u, q), t.cup_partners(p, u, q));
                }
            }
        }
    }

    #[test]
    fn free_z2_halves_dims() {
        let t = TensorComplex::new(vec![circle(4), circle(4)]).unwrap();
        let g = AbelianGroup::cyclic(2);
        let a = GroupAction::new(g, vec![rotation(4, 2), rotation(4, 2)]);
        let b = BalancedComplex::new(t.clone(), a).unwrap();
        let half: Vec<usize> = t.complex().dims().iter().map(|d| d / 2).collect();
        assert_eq!(b.complex().dims(), half);
        assert!(b.complex().validate().is_ok());
    }

    #[test]
    fn non_free_and_incompatible_are_distinct() {
        let t = TensorComplex::new(vec![circle(4), circle(4)]).unwrap();
        let g = AbelianGroup::cyclic(2);
        let fixed = FactorAction::trivial(2, [4, 4]);
        let err = BalancedComplex::new(t.clone(), GroupAction::new(g.clone(), vec![fixed.clone(), fixed])).unwrap_err();
        assert!(matches!(err, ProductError::NonFree { .. }));
        // reflection sends in-edges to out-edges
        let reflect = FactorAction::from_fn(2, [4, 4], |d, h, i| match (h, d) {
            (0, _) => i,
            (_, 0) => (4 - i) % 4,
            (_, _) => (3 + 4 - i) % 4,
        });
        let report = check_action_compatibility(&circle(4), &g, &reflect).unwrap_err();
        assert!(matches!(report, CompatibilityReport::Orientation { .. }));
        let err = BalancedComplex::new(t, GroupAction::new(g, vec![reflect, rotation(4, 2)])).unwrap_err();
        assert!(matches!(err, ProductError::NotCompatible { factor: 0, .. }));
    }

    #[test]
    fn group_sum_matches_partner_projection() {
        for (n, shift) in [(4, 2), (6, 2), (6, 3), (4, 1)] {
            let t = TensorComplex::new(vec![circle(n), circle(n)]).unwrap();
            let g = AbelianGroup::cyclic(u32::try_from(n / shift).unwrap());
            let b = BalancedComplex::new(t, GroupAction::new(g, vec![rotation(n, shift), rotation(n, shift)])).unwrap();
            for p in 0..=2 {
                for q in 0..=2 - p {
                    for u in 0..b.complex().dim(p) {
                        for v in 0..b.complex().dim(q) {
                            assert_eq!(b.cup_basis(p, u, q, v), b.cup_by_group_sum(p, u, q, v));
                        }
                    }
                }
            }
        }
    }
}
