//! Pre-orientations on classical codes and the cup product they induce.
//!
//! A classical code is a two-term complex `C^0 → C^1` (checks → bits). A
//! pre-orientation splits every `supp δ(a)` into `in`, `out` and `free` bits,
//! and defines a bilinear cup product on basis elements:
//!
//! * `a ∪ a = a` for a check `a`,
//! * `a ∪ x = x` when `x ∈ out(a)`,
//! * `x ∪ a = x` when `x ∈ in(a)`,
//!
//! with every other basis product zero. Iterated products are left-nested.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::BasedComplex;
use crate::f2linalg::BitVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("complex must have exactly two terms (degrees 0 and 1), top degree is {0}")]
    NotTwoTerm(usize),
    #[error("invalid pre-orientation: {0:?}")]
    Partition(PartitionReport),
    #[error("cochain degree {0} is outside 0..=1")]
    Degree(usize),
    #[error("cochain of degree {degree} has length {got}, expected {expected}")]
    Length {
        degree: usize,
        expected: usize,
        got: usize,
    },
    #[error("integral undefined: check {0} has odd support")]
    IntegralUndefined(usize),
}

/// The in/out/free split of one check's coboundary, as sorted bit indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    #[serde(rename = "in")]
    pub incoming: Vec<usize>,
    #[serde(rename = "out")]
    pub outgoing: Vec<usize>,
    pub free: Vec<usize>,
}

impl Partition {
    #[must_use]
    pub fn new(mut incoming: Vec<usize>, mut outgoing: Vec<usize>, mut free: Vec<usize>) -> Self {
        incoming.sort_unstable();
        outgoing.sort_unstable();
        free.sort_unstable();
        Self {
            incoming,
            outgoing,
            free,
        }
    }

    /// Everything free.
    #[must_use]
    pub fn all_free(support: Vec<usize>) -> Self {
        Self::new(Vec::new(), Vec::new(), support)
    }
}

/// One [`Partition`] per check, indexed like the degree-0 basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreOrientation {
    pub parts: Vec<Partition>,
}

impl PreOrientation {
    #[must_use]
    pub fn new(parts: Vec<Partition>) -> Self {
        Self { parts }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// First check whose partition is not a partition of `supp δ(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub check: usize,
    /// Bits listed in more than one class.
    pub overlapping: Vec<usize>,
    /// Bits of `δ(a)` listed in no class.
    pub missing: Vec<usize>,
    /// Listed bits outside `δ(a)`.
    pub extra: Vec<usize>,
}

/// A basis element: `(degree, index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub degree: usize,
    pub index: usize,
}

impl Cell {
    #[must_use]
    pub fn check(index: usize) -> Self {
        Self { degree: 0, index }
    }

    #[must_use]
    pub fn bit(index: usize) -> Self {
        Self { degree: 1, index }
    }
}

/// A homogeneous cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub values: BitVector,
}

impl Cochain {
    #[must_use]
    pub fn new(degree: usize, values: BitVector) -> Self {
        Self { degree, values }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }
}

/// Checks that every check's classes partition `supp δ(a)`.
///
/// # Errors
/// A report for the first offending check.
pub fn validate_preorientation(c: &BasedComplex, o: &PreOrientation) -> Result<(), PartitionReport> {
    let n0 = c.dim(0);
    let n1 = c.dim(1);
    let supports = c
        .coboundary(0)
        .map(|m| m.column_supports())
        .unwrap_or_else(|| vec![Vec::new(); n0]);
    for a in 0..n0.max(o.len()) {
        let Some(part) = o.parts.get(a) else {
            return Err(PartitionReport {
                check: a,
                overlapping: Vec::new(),
                missing: supports.get(a).cloned().unwrap_or_default(),
                extra: Vec::new(),
            });
        };
        let Some(support) = supports.get(a) else {
            let mut extra: Vec<usize> = part
                .incoming
                .iter()
                .chain(&part.outgoing)
                .chain(&part.free)
                .copied()
                .collect();
            extra.sort_unstable();
            extra.dedup();
            return Err(PartitionReport {
                check: a,
                overlapping: Vec::new(),
                missing: Vec::new(),
                extra,
            });
        };
        let mut count = std::collections::BTreeMap::new();
        for &x in part.incoming.iter().chain(&part.outgoing).chain(&part.free) {
            *count.entry(x).or_insert(0usize) += 1;
        }
        let overlapping: Vec<usize> = count.iter().filter(|(_, &k)| k > 1).map(|(&x, _)| x).collect();
        let missing: Vec<usize> = support.iter().copied().filter(|x| !count.contains_key(x)).collect();
        let extra: Vec<usize> = count
            .keys()
            .copied()
            .filter(|x| *x >= n1 || support.binary_search(x).is_err())
            .collect();
        if !(overlapping.is_empty() && missing.is_empty() && extra.is_empty()) {
            return Err(PartitionReport {
                check: a,
                overlapping,
                missing,
                extra,
            });
        }
    }
    Ok(())
}

/// A classical code with a validated pre-orientation.
#[derive(Clone, Debug)]
pub struct CupStructure {
    complex: BasedComplex,
    orientation: PreOrientation,
    delta: Vec<Vec<usize>>,
    in_checks: Vec<Vec<usize>>,
    out_checks: Vec<Vec<usize>>,
    integral_defined: bool,
}

impl CupStructure {
    /// # Errors
    /// If the complex is not two-term or the pre-orientation is invalid.
    pub fn new(complex: BasedComplex, orientation: PreOrientation) -> Result<Self, OrientationError> {
        if complex.top_degree() != 1 {
            return Err(OrientationError::NotTwoTerm(complex.top_degree()));
        }
        validate_preorientation(&complex, &orientation).map_err(OrientationError::Partition)?;
        let delta = complex.coboundary(0).expect("two-term").column_supports();
        let n1 = complex.dim(1);
        let mut in_checks = vec![Vec::new(); n1];
        let mut out_checks = vec![Vec::new(); n1];
        for (a, p) in orientation.parts.iter().enumerate() {
            for &x in &p.incoming {
                in_checks[x].push(a);
            }
            for &x in &p.outgoing {
                out_checks[x].push(a);
            }
        }
        let integral_defined = delta.iter().all(|s| s.len() % 2 == 0);
        Ok(Self {
            complex,
            orientation,
            delta,
            in_checks,
            out_checks,
            integral_defined,
        })
    }

    #[must_use]
    pub fn complex(&self) -> &BasedComplex {
        &self.complex
    }

    #[must_use]
    pub fn orientation(&self) -> &PreOrientation {
        &self.orientation
    }

    #[must_use]
    pub fn num_checks(&self) -> usize {
        self.complex.dim(0)
    }

    #[must_use]
    pub fn num_bits(&self) -> usize {
        self.complex.dim(1)
    }

    #[must_use]
    pub fn integral_defined(&self) -> bool {
        self.integral_defined
    }

    /// `supp δ(a)`.
    #[must_use]
    pub fn delta(&self, a: usize) -> &[usize] {
        &self.delta[a]
    }

    #[must_use]
    pub fn part(&self, a: usize) -> &Partition {
        &self.orientation.parts[a]
    }

    /// Checks `a` with `x ∈ in(a)`.
    #[must_use]
    pub fn checks_with_in(&self, x: usize) -> &[usize] {
        &self.in_checks[x]
    }

    /// Checks `a` with `x ∈ out(a)`.
    #[must_use]
    pub fn checks_with_out(&self, x: usize) -> &[usize] {
        &self.out_checks[x]
    }

    /// Product of two basis elements, `None` when it vanishes.
    #[must_use]
    pub fn cup_cell(&self, u: Cell, v: Cell) -> Option<Cell> {
        match (u.degree, v.degree) {
            (0, 0) => (u.index == v.index).then_some(u),
            (0, 1) => self.part(u.index).outgoing.binary_search(&v.index).is_ok().then_some(v),
            (1, 0) => self.part(v.index).incoming.binary_search(&u.index).is_ok().then_some(u),
            _ => None,
        }
    }

    fn zero(&self, degree: usize) -> Cochain {
        Cochain::new(degree, BitVector::zeros(self.complex.dim(degree)))
    }

    fn check_cochain(&self, f: &Cochain) -> Result<(), OrientationError> {
        if f.degree > 1 {
            return Err(OrientationError::Degree(f.degree));
        }
        let expected = self.complex.dim(f.degree);
        if f.values.len() != expected {
            return Err(OrientationError::Length {
                degree: f.degree,
                expected,
                got: f.values.len(),
            });
        }
        Ok(())
    }

    /// Cup product of two basis elements as a cochain.
    ///
    /// # Errors
    /// If a cell is out of range.
    pub fn cup_basis(&self, u: Cell, v: Cell) -> Result<Cochain, OrientationError> {
        for c in [u, v] {
            if c.degree > 1 {
                return Err(OrientationError::Degree(c.degree));
            }
            if c.index >= self.complex.dim(c.degree) {
                return Err(OrientationError::Length {
                    degree: c.degree,
                    expected: self.complex.dim(c.degree),
                    got: c.index,
                });
            }
        }
        let mut out = self.zero(u.degree + v.degree);
        if let Some(w) = self.cup_cell(u, v) {
            out.values.set(w.index, true);
        }
        Ok(out)
    }

    /// Bilinear cup product. Products landing in degree 2 are zero.
    ///
    /// # Errors
    /// If a degree is outside `0..=1` or a length is wrong.
    pub fn cup(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, OrientationError> {
        self.check_cochain(f)?;
        self.check_cochain(g)?;
        let mut out = self.zero(f.degree + g.degree);
        match (f.degree, g.degree) {
            (0, 0) => out.values = f.values.and(&g.values),
            (0, 1) => {
                for x in g.values.iter_ones() {
                    let n = self.out_checks[x].iter().filter(|&&a| f.values.get(a)).count();
                    if n % 2 == 1 {
                        out.values.flip(x);
                    }
                }
            }
            (1, 0) => {
                for x in f.values.iter_ones() {
                    let n = self.in_checks[x].iter().filter(|&&a| g.values.get(a)).count();
                    if n % 2 == 1 {
                        out.values.flip(x);
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }

    /// Left-nested product `((a1 ∪ a2) ∪ a3) ∪ …`.
    ///
    /// # Errors
    /// As [`Self::cup`]; an intermediate degree above 1 yields zero.
    pub fn lambda_cup(&self, args: &[Cochain]) -> Result<Cochain, OrientationError> {
        let Some((first, rest)) = args.split_first() else {
            return Err(OrientationError::Degree(usize::MAX));
        };
        self.check_cochain(first)?;
        let mut acc = first.clone();
        for g in rest {
            if acc.degree > 1 {
                self.check_cochain(g)?;
                acc = Cochain::new(acc.degree + g.degree, BitVector::zeros(0));
                continue;
            }
            acc = self.cup(&acc, g)?;
        }
        Ok(acc)
    }

    /// `∫₁ f = |supp f| mod 2`.
    ///
    /// # Errors
    /// If some check has odd support, or `f` is not a 1-cochain.
    pub fn integral1(&self, f: &Cochain) -> Result<bool, OrientationError> {
        if let Some(a) = self.delta.iter().position(|s| s.len() % 2 == 1) {
            return Err(OrientationError::IntegralUndefined(a));
        }
        if f.degree != 1 {
            return Err(OrientationError::Degree(f.degree));
        }
        self.check_cochain(f)?;
        Ok(f.values.weight() % 2 == 1)
    }

    /// `δ(f)` for a cochain of degree 0 or 1.
    #[must_use]
    pub fn coboundary_of(&self, f: &Cochain) -> Cochain {
        match f.degree {
            0 => Cochain::new(1, self.complex.apply(0, &f.values)),
            d => Cochain::new(d + 1, BitVector::zeros(0)),
        }
    }
}

// ============================================================================
// Non-overlap and associativity
// ============================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    In,
    Out,
}

/// Two checks sharing an in-bit or an out-bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapViolation {
    pub first: usize,
    pub second: usize,
    pub bit: usize,
    pub side: Side,
}

/// Verifies `in(a) ∩ in(a') = ∅` and `out(a) ∩ out(a') = ∅` for `a ≠ a'`.
///
/// # Errors
/// The lexicographically least violating `(a, a', bit)`.
pub fn check_nonoverlap(s: &CupStructure) -> Result<(), OverlapViolation> {
    let mut best: Option<OverlapViolation> = None;
    for (side, table) in [(Side::In, &s.in_checks), (Side::Out, &s.out_checks)] {
        for (bit, checks) in table.iter().enumerate() {
            if checks.len() >= 2 {
                let mut cs = checks.clone();
                cs.sort_unstable();
                let cand = OverlapViolation {
                    first: cs[0],
                    second: cs[1],
                    bit,
                    side,
                };
                let better = best
                    .as_ref()
                    .is_none_or(|b| (cand.first, cand.second, cand.bit) < (b.first, b.second, b.bit));
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    best.map_or(Ok(()), Err)
}

fn cup_opt(s: &CupStructure, u: Option<Cell>, v: Option<Cell>) -> Option<Cell> {
    s.cup_cell(u?, v?)
}

/// Exhaustively compares `(u∪v)∪w` with `u∪(v∪w)` on basis triples.
///
/// # Errors
/// The first failing triple in lexicographic order (checks before bits).
pub fn check_associativity(s: &CupStructure) -> Result<(), [Cell; 3]> {
    let cells: Vec<Cell> = (0..s.num_checks())
        .map(Cell::check)
        .chain((0..s.num_bits()).map(Cell::bit))
        .collect();
    for &u in &cells {
        for &v in &cells {
            let uv = s.cup_cell(u, v);
            for &w in &cells {
                let left = cup_opt(s, uv, Some(w));
                let right = cup_opt(s, Some(u), s.cup_cell(v, w));
                if left != right {
                    return Err([u, v, w]);
                }
            }
        }
    }
    Ok(())
}

// ============================================================================
// Integrated Leibniz conditions
// ============================================================================

/// A tuple of checks on which an integrated Leibniz condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeibnizViolation {
    pub tuple: Vec<usize>,
    pub condition: String,
}

struct CheckSets {
    delta: Vec<BitVector>,
    r#in: Vec<BitVector>,
    out: Vec<BitVector>,
    free: Vec<BitVector>,
}

impl CheckSets {
    fn new(s: &CupStructure) -> Self {
        let n1 = s.num_bits();
        let mk = |f: &dyn Fn(usize) -> Vec<usize>| -> Vec<BitVector> {
            (0..s.num_checks())
                .map(|a| BitVector::from_support(n1, &f(a)))
                .collect()
        };
        Self {
            delta: mk(&|a| s.delta(a).to_vec()),
            r#in: mk(&|a| s.part(a).incoming.clone()),
            out: mk(&|a| s.part(a).outgoing.clone()),
            free: mk(&|a| s.part(a).free.clone()),
        }
    }
}

fn odd_and(a: &BitVector, b: &BitVector) -> bool {
    a.dot(b)
}

fn odd_and3(a: &BitVector, b: &BitVector, c: &BitVector) -> bool {
    a.and(b).dot(c)
}

/// Parity of `Σ_j ∫₁ a_1 ∪ … ∪ δ(a_j) ∪ … ∪ a_Λ` for a tuple of checks,
/// evaluated through the in/out/free sets.
///
/// The prefix `a_1 ∪ … ∪ a_{j-1}` of checks is `a_1` when all of them coincide
/// and zero otherwise, so term `j` is
/// `|out(a_1) ∩ δ(a_j) ∩ in(a_{j+1}) ∩ … ∩ in(a_Λ)|` in the first case, with the
/// `out` factor absent for `j = 1` and the `in` factors absent for `j = Λ`.
#[must_use]
pub fn leibniz_tuple_parity(s: &CupStructure, tuple: &[usize]) -> bool {
    tuple_parity(&CheckSets::new(s), tuple)
}

fn tuple_parity(sets: &CheckSets, tuple: &[usize]) -> bool {
    let lam = tuple.len();
    // suffix[j] = ∩_{k >= j} in(a_k); None stands for "no constraint"
    let mut suffix: Vec<Option<BitVector>> = vec![None; lam + 1];
    for j in (0..lam).rev() {
        let here = &sets.r#in[tuple[j]];
        suffix[j] = Some(match &suffix[j + 1] {
            Some(s) => s.and(here),
            None => here.clone(),
        });
    }
    let mut total = false;
    for j in 0..lam {
        if j >= 2 && tuple[j - 1] != tuple[0] {
            break;
        }
        let mut set = sets.delta[tuple[j]].clone();
        if j >= 1 {
            set = set.and(&sets.out[tuple[0]]);
        }
        if let Some(s) = &suffix[j + 1] {
            set = set.and(s);
        }
        total ^= set.weight() % 2 == 1;
    }
    total
}

fn for_each_tuple(n: usize, lam: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if n == 0 || lam == 0 {
        return;
    }
    let mut t = vec![0usize; lam];
    loop {
        if !f(&t) {
            return;
        }
        let mut k = lam;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

/// Exact tuple-by-tuple check over all `|X_0|^Λ` tuples of checks.
///
/// # Errors
/// The lexicographically least violating tuple.
pub fn check_integrated_leibniz_exhaustive(
    s: &CupStructure,
    lambda: usize,
) -> Result<(), LeibnizViolation> {
    let sets = CheckSets::new(s);
    let mut bad = None;
    for_each_tuple(s.num_checks(), lambda, |t| {
        if tuple_parity(&sets, t) {
            bad = Some(t.to_vec());
            false
        } else {
            true
        }
    });
    match bad {
        Some(tuple) => Err(LeibnizViolation {
            tuple,
            condition: format!("integrated Leibniz sum for Λ={lambda}"),
        }),
        None => Ok(()),
    }
}

fn fail(tuple: Vec<usize>, condition: &str) -> Result<(), LeibnizViolation> {
    Err(LeibnizViolation {
        tuple,
        condition: condition.to_string(),
    })
}

/// `|in(a)| + |out(a)|` even for every check.
fn even_in_out(sets: &CheckSets, lam: usize) -> Result<(), LeibnizViolation> {
    for a in 0..sets.delta.len() {
        if (sets.r#in[a].weight() + sets.out[a].weight()) % 2 == 1 {
            return fail(vec![a; lam], "|in(a)|+|out(a)| odd");
        }
    }
    Ok(())
}

/// The two conditions for `Λ = 2`.
///
/// # Errors
/// The first violated condition with its witness pair.
pub fn lambda2_conditions(s: &CupStructure) -> Result<(), LeibnizViolation> {
    let sets = CheckSets::new(s);
    let n = s.num_checks();
    for a1 in 0..n {
        for a2 in 0..n {
            if a1 == a2 {
                if (sets.r#in[a1].weight() + sets.out[a1].weight()) % 2 == 1 {
                    return fail(vec![a1, a1], "|in(a)|+|out(a)| odd");
                }
                continue;
            }
            let p = odd_and(&sets.r#in[a1], &sets.r#in[a2])
                ^ odd_and(&sets.out[a1], &sets.out[a2])
                ^ odd_and(&sets.out[a1], &sets.free[a2])
                ^ odd_and(&sets.free[a1], &sets.r#in[a2]);
            if p {
                return fail(
                    vec![a1, a2],
                    "|in1∩in2|+|out1∩out2|+|out1∩free2|+|free1∩in2| odd",
                );
            }
        }
    }
    Ok(())
}

/// The four `Λ = 3` conditions in the form usually quoted for this setting.
///
/// On their own they do not cover tuples `(a1, a2, a1)`, whose term is
/// `|in(a1) ∩ in(a2)|`; [`lambda3_conditions`] adds that parity.
///
/// # Errors
/// The first violated condition with its witness tuple.
pub fn lambda3_quoted_conditions(s: &CupStructure) -> Result<(), LeibnizViolation> {
    let sets = CheckSets::new(s);
    let n = s.num_checks();
    even_in_out(&sets, 3)?;
    for a1 in 0..n {
        for a2 in (0..n).filter(|&a2| a2 != a1) {
            if odd_and(&sets.r#in[a1], &sets.r#in[a2]) ^ odd_and(&sets.free[a1], &sets.r#in[a2]) {
                return fail(vec![a1, a2, a2], "|in1∩in2|+|free1∩in2| odd");
            }
            if odd_and(&sets.out[a1], &sets.out[a2]) ^ odd_and(&sets.out[a1], &sets.free[a2]) {
                return fail(vec![a1, a1, a2], "|out1∩out2|+|out1∩free2| odd");
            }
        }
    }
    for a1 in 0..n {
        for a2 in (0..n).filter(|&a2| a2 != a1) {
            for a3 in (0..n).filter(|&a3| a3 != a1 && a3 != a2) {
                let p = odd_and3(&sets.delta[a1], &sets.r#in[a2], &sets.r#in[a3])
                    ^ odd_and3(&sets.out[a1], &sets.delta[a2], &sets.r#in[a3]);
                if p {
                    return fail(vec![a1, a2, a3], "|δ1∩in2∩in3|+|out1∩δ2∩in3| odd");
                }
            }
        }
    }
    Ok(())
}

/// Exact `Λ = 3` conditions: the quoted four plus `|in(a1) ∩ in(a2)|` even.
///
/// # Errors
/// The first violated condition with its witness tuple.
pub fn lambda3_conditions(s: &CupStructure) -> Result<(), LeibnizViolation> {
    lambda3_quoted_conditions(s)?;
    let sets = CheckSets::new(s);
    let n = s.num_checks();
    for a1 in 0..n {
        for a2 in (0..n).filter(|&a2| a2 != a1) {
            if odd_and(&sets.r#in[a1], &sets.r#in[a2]) {
                return fail(vec![a1, a2, a1], "|in1∩in2| odd");
            }
        }
    }
    Ok(())
}

/// Conditions for `Λ ≥ 3` under non-overlap; they do not depend on `Λ`.
///
/// # Errors
/// The first violated condition with a witness tuple of length `lambda`.
pub fn nonoverlap_conditions(s: &CupStructure, lambda: usize) -> Result<(), LeibnizViolation> {
    let lam = lambda.max(3);
    let sets = CheckSets::new(s);
    let n = s.num_checks();
    even_in_out(&sets, lam)?;
    for a1 in 0..n {
        for a2 in (0..n).filter(|&a2| a2 != a1) {
            if odd_and(&sets.free[a1], &sets.r#in[a2]) {
                let mut t = vec![a2; lam];
                t[0] = a1;
                return fail(t, "|free1∩in2| odd");
            }
            if odd_and(&sets.out[a1], &sets.free[a2]) {
                let mut t = vec![a1; lam];
                t[lam - 1] = a2;
                return fail(t, "|out1∩free2| odd");
            }
        }
    }
    for a1 in 0..n {
        for a2 in (0..n).filter(|&a2| a2 != a1) {
            for a3 in (0..n).filter(|&a3| a3 != a1 && a3 != a2) {
                if odd_and3(&sets.out[a1], &sets.free[a2], &sets.r#in[a3]) {
                    let mut t = vec![a1; lam];
                    t[lam - 2] = a2;
                    t[lam - 1] = a3;
                    return fail(t, "|out1∩free2∩in3| odd");
                }
            }
        }
    }
    Ok(())
}

const EXHAUSTIVE_LIMIT: usize = 20_000_000;

/// Whether the `Λ`-fold cup product satisfies the integrated Leibniz rule.
///
/// Uses the closed-form conditions where they apply (`Λ = 2`; `Λ ≥ 3` under
/// non-overlap; `Λ = 3` in general) and the tuple sum otherwise. A failure is
/// reported on the lexicographically least violating tuple when the tuple
/// space is small enough to scan.
///
/// # Errors
/// A violating tuple of checks.
pub fn check_integrated_leibniz(s: &CupStructure, lambda: usize) -> Result<(), LeibnizViolation> {
    let sets = CheckSets::new(s);
    let fast = match lambda {
        0 => Ok(()),
        1 => (0..s.num_checks())
            .find(|&a| sets.delta[a].weight() % 2 == 1)
            .map_or(Ok(()), |a| fail(vec![a], "|δ(a)| odd")),
        2 => lambda2_conditions(s),
        _ if check_nonoverlap(s).is_ok() => nonoverlap_conditions(s, lambda),
        3 => lambda3_conditions(s),
        _ => return check_integrated_leibniz_exhaustive(s, lambda),
    };
    match fast {
        Ok(()) => Ok(()),
        Err(witness) => {
            let space = s.num_checks().checked_pow(u32::try_from(lambda).unwrap_or(u32::MAX));
            if space.is_some_and(|k| k <= EXHAUSTIVE_LIMIT) {
                match check_integrated_leibniz_exhaustive(s, lambda) {
                    Err(mut least) => {
                        least.condition = witness.condition;
                        Err(least)
                    }
                    Ok(()) => Err(witness),
                }
            } else {
                Err(witness)
            }
        }
    }
}

// ============================================================================
// Direct oracle
// ============================================================================

/// How [`brute_leibniz_oracle`] chooses tuples.
#[derive(Clone, Copy, Debug)]
pub enum OracleMode {
    /// All tuples of basis elements of both degrees.
    Exhaustive,
    /// Uniformly random tuples.
    Sampled { trials: usize, seed: u64 },
}

fn unit_cochain(s: &CupStructure, c: Cell) -> Cochain {
    Cochain::new(c.degree, BitVector::unit(s.complex().dim(c.degree), c.index))
}

/// `Σ_j ∫₁ a_1 ∪ … ∪ δ(a_j) ∪ … ∪ a_Λ` computed with the cup product itself.
#[must_use]
pub fn leibniz_direct_sum(s: &CupStructure, tuple: &[Cell]) -> bool {
    let args: Vec<Cochain> = tuple.iter().map(|&c| unit_cochain(s, c)).collect();
    let mut total = false;
    for j in 0..args.len() {
        let mut t = args.clone();
        t[j] = s.coboundary_of(&args[j]);
        if t[j].degree > 1 {
            continue;
        }
        let prod = s.lambda_cup(&t).expect("degrees in range");
        if prod.degree == 1 {
            total ^= prod.values.weight() % 2 == 1;
        }
    }
    total
}

/// Evaluates the integrated Leibniz sum directly on tuples of basis elements
/// mixed across degrees.
///
/// # Errors
/// The first tuple with a nonzero sum.
pub fn brute_leibniz_oracle(
    s: &CupStructure,
    lambda: usize,
    mode: OracleMode,
) -> Result<(), Vec<Cell>> {
    let cells: Vec<Cell> = (0..s.num_checks())
        .map(Cell::check)
        .chain((0..s.num_bits()).map(Cell::bit))
        .collect();
    match mode {
        OracleMode::Exhaustive => {
            let mut bad = None;
            for_each_tuple(cells.len(), lambda, |idx| {
                let t: Vec<Cell> = idx.iter().map(|&i| cells[i]).collect();
                if leibniz_direct_sum(s, &t) {
                    bad = Some(t);
                    false
                } else {
                    true
                }
            });
            bad.map_or(Ok(()), Err)
        }
        OracleMode::Sampled { trials, seed } => {
            if cells.is_empty() {
                return Ok(());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let t: Vec<Cell> = (0..lambda)
                    .map(|_| cells[rng.random_range(0..cells.len())])
                    .collect();
                if leibniz_direct_sum(s, &t) {
                    return Err(t);
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::BasisLabel;
    use crate::f2linalg::BitMatrix;
    use proptest::prelude::*;
    use rand::Rng;

    /// Builds a classical code from per-check (in, out, free) lists.
    pub(crate) fn from_parts(n_bits: usize, parts: Vec<Partition>) -> CupStructure {
        let n0 = parts.len();
        let mut d = BitMatrix::zeros(n_bits, n0);
        for (a, p) in parts.iter().enumerate() {
            for &x in p.incoming.iter().chain(&p.outgoing).chain(&p.free) {
                d.set(x, a, true);
            }
        }
        let c = BasedComplex::two_term(
            (0..n0).map(|i| BasisLabel::atom(format!("a{i}"))).collect(),
            (0..n_bits).map(|i| BasisLabel::atom(format!("x{i}"))).collect(),
            d,
        )
        .unwrap();
        CupStructure::new(c, PreOrientation::new(parts)).unwrap()
    }

    fn oriented_cycle(n: usize) -> CupStructure {
        from_parts(
            n,
            (0..n)
                .map(|v| Partition::new(vec![(v + n - 1) % n], vec![v], vec![]))
                .collect(),
        )
    }

    #[test]
    fn cycle_orientation_is_valid() {
        let s = oriented_cycle(4);
        assert!(check_nonoverlap(&s).is_ok());
        assert!(check_associativity(&s).is_ok());
        for lam in 1..=4 {
            assert!(check_integrated_leibniz(&s, lam).is_ok(), "Λ={lam}");
        }
    }

    #[test]
    fn partition_overlap_reported() {
        let s = oriented_cycle(3);
        let mut o = s.orientation().clone();
        o.parts[1].outgoing.push(0);
        o.parts[1].outgoing.sort_unstable();
        let err = validate_preorientation(s.complex(), &o).unwrap_err();
        assert_eq!(err.check, 1);
        assert_eq!(err.overlapping, vec![0]);
    }

    #[test]
    fn basis_cup_rules() {
        // check 0 → bit 0 (out), check 1 ← bit 0 (in)
        let s = from_parts(
            1,
            vec![
                Partition::new(vec![], vec![0], vec![]),
                Partition::new(vec![0], vec![], vec![]),
            ],
        );
        assert_eq!(s.cup_cell(Cell::check(0), Cell::bit(0)), Some(Cell::bit(0)));
        assert_eq!(s.cup_cell(Cell::check(0), Cell::check(0)), Some(Cell::check(0)));
        assert_eq!(s.cup_cell(Cell::check(0), Cell::check(1)), None);
        assert_eq!(s.cup_cell(Cell::bit(0), Cell::check(1)), Some(Cell::bit(0)));
        assert_eq!(s.cup_cell(Cell::bit(0), Cell::check(0)), None);
        assert_eq!(s.cup_cell(Cell::bit(0), Cell::bit(0)), None);
        let x = s.cup_basis(Cell::bit(0), Cell::bit(0)).unwrap();
        assert_eq!(x.degree, 2);
        assert!(x.is_zero());
        // [a, x, b] with x ∈ out(a) ∩ in(b)
        let a = unit_cochain(&s, Cell::check(0));
        let xb = unit_cochain(&s, Cell::bit(0));
        let b = unit_cochain(&s, Cell::check(1));
        let r = s.lambda_cup(&[a.clone(), xb.clone(), b]).unwrap();
        assert_eq!(r.values.support(), vec![0]);
        assert_eq!(s.lambda_cup(&[a.clone(), a.clone(), a.clone()]).unwrap(), a);
    }

    #[test]
    fn shared_out_bit_cancels_in_sum() {
        let s = from_parts(
            1,
            vec![
                Partition::new(vec![], vec![0], vec![]),
                Partition::new(vec![], vec![0], vec![]),
            ],
        );
        let both = Cochain::new(0, BitVector::from_support(2, &[0, 1]));
        let x = Cochain::new(1, BitVector::unit(1, 0));
        assert!(s.cup(&both, &x).unwrap().is_zero());
        let one = Cochain::new(0, BitVector::unit(2, 0));
        assert_eq!(s.cup(&one, &x).unwrap().values.support(), vec![0]);
        assert!(check_nonoverlap(&s).is_err());
    }

    #[test]
    fn overlapping_in_bits_break_associativity() {
        // x1 ∈ out(a) ∩ out(b): (a∪b)∪x1 = 0 but a∪(b∪x1) = x1
        let s = from_parts(
            2,
            vec![
                Partition::new(vec![0], vec![1], vec![]),
                Partition::new(vec![0], vec![1], vec![]),
            ],
        );
        assert_eq!(
            check_associativity(&s),
            Err([Cell::check(0), Cell::check(1), Cell::bit(1)])
        );
        let empty = from_parts(0, vec![]);
        assert!(check_associativity(&empty).is_ok());
    }

    #[test]
    fn integral_examples() {
        let s = oriented_cycle(4);
        let f = Cochain::new(1, BitVector::from_support(4, &[0, 1, 2, 3]));
        assert!(!s.integral1(&f).unwrap());
        assert!(s.integral1(&Cochain::new(1, BitVector::unit(4, 2))).unwrap());
        for a in 0..4 {
            let da = s.coboundary_of(&unit_cochain(&s, Cell::check(a)));
            assert!(!s.integral1(&da).unwrap());
        }
        let odd = from_parts(1, vec![Partition::new(vec![0], vec![], vec![])]);
        assert_eq!(
            odd.integral1(&Cochain::new(1, BitVector::unit(1, 0))),
            Err(OrientationError::IntegralUndefined(0))
        );
    }

    #[test]
    fn odd_in_out_found_by_oracle() {
        let s = from_parts(2, vec![Partition::new(vec![0], vec![], vec![1])]);
        assert!(check_integrated_leibniz(&s, 2).is_err());
        let ce = brute_leibniz_oracle(&s, 2, OracleMode::Exhaustive).unwrap_err();
        assert!(ce.iter().all(|c| *c == Cell::check(0)));
    }

    #[test]
    fn lambda_one_is_even_support() {
        let even = oriented_cycle(3);
        assert!(brute_leibniz_oracle(&even, 1, OracleMode::Exhaustive).is_ok());
        let odd = from_parts(3, vec![Partition::new(vec![0], vec![1], vec![2])]);
        assert!(!odd.integral_defined());
        assert!(brute_leibniz_oracle(&odd, 1, OracleMode::Exhaustive).is_err());
        assert!(check_integrated_leibniz(&odd, 1).is_err());
    }

    #[test]
    fn quoted_lambda3_form_misses_shared_in_bit() {
        // a: in {x,q}, free {p,r}; b: in {x,p}, free {q,s}
        let s = from_parts(
            5,
            vec![
                Partition::new(vec![0, 1], vec![], vec![2, 3]),
                Partition::new(vec![0, 2], vec![], vec![1, 4]),
            ],
        );
        assert!(lambda3_quoted_conditions(&s).is_ok());
        let err = lambda3_conditions(&s).unwrap_err();
        assert_eq!(err.tuple, vec![0, 1, 0]);
        assert!(brute_leibniz_oracle(&s, 3, OracleMode::Exhaustive).is_err());
        assert!(check_integrated_leibniz(&s, 3).is_err());
    }

    fn arb_structure(max_checks: usize, max_bits: usize) -> impl Strategy<Value = CupStructure> {
        (1..=max_checks, 1..=max_bits).prop_flat_map(|(c, b)| {
            proptest::collection::vec(0u8..4, c * b).prop_map(move |cls| {
                let parts = (0..c)
                    .map(|a| {
                        let mut p = Partition::default();
                        for x in 0..b {
                            match cls[a * b + x] {
                                1 => p.incoming.push(x),
                                2 => p.outgoing.push(x),
                                3 => p.free.push(x),
                                _ => {}
                            }
                        }
                        p
                    })
                    .collect();
                from_parts(b, parts)
            })
        })
    }

    fn nonoverlapping(s: &CupStructure) -> CupStructure {
        let mut used_in = std::collections::HashSet::new();
        let mut used_out = std::collections::HashSet::new();
        let parts = s
            .orientation()
            .parts
            .iter()
            .map(|p| {
                let mut q = p.clone();
                let mut moved = Vec::new();
                q.incoming.retain(|x| used_in.insert(*x) || {
                    moved.push(*x);
                    false
                });
                q.outgoing.retain(|x| used_out.insert(*x) || {
                    moved.push(*x);
                    false
                });
                q.free.extend(moved);
                Partition::new(q.incoming, q.outgoing, q.free)
            })
            .collect();
        from_parts(s.num_bits(), parts)
    }

    proptest! {
        #[test]
        fn cup_is_bilinear(s in arb_structure(4, 6), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rand_cochain = |d: usize| {
                let n = s.complex().dim(d);
                Cochain::new(d, BitVector::from_bools(&(0..n).map(|_| rng.random::<bool>()).collect::<Vec<_>>()))
            };
            for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let f = rand_cochain(p);
                let f2 = rand_cochain(p);
                let g = rand_cochain(q);
                let sum = Cochain::new(p, f.values.xor(&f2.values));
                let lhs = s.cup(&sum, &g).unwrap();
                let r1 = s.cup(&f, &g).unwrap();
                let r2 = s.cup(&f2, &g).unwrap();
                prop_assert_eq!(lhs.values, r1.values.xor(&r2.values));
                let g2 = rand_cochain(q);
                let gsum = Cochain::new(q, g.values.xor(&g2.values));
                let lhs = s.cup(&f, &gsum).unwrap();
                let r3 = s.cup(&f, &g2).unwrap();
                prop_assert_eq!(lhs.values, s.cup(&f, &g).unwrap().values.xor(&r3.values));
            }
        }

        #[test]
        fn closed_forms_match_tuple_sum(s in arb_structure(4, 6)) {
            for lam in 1..=3 {
                prop_assert_eq!(
                    check_integrated_leibniz(&s, lam).is_ok(),
                    check_integrated_leibniz_exhaustive(&s, lam).is_ok()
                );
            }
            prop_assert_eq!(lambda2_conditions(&s).is_ok(), check_integrated_leibniz_exhaustive(&s, 2).is_ok());
            prop_assert_eq!(lambda3_conditions(&s).is_ok(), check_integrated_leibniz_exhaustive(&s, 3).is_ok());
        }

        #[test]
        fn nonoverlap_form_is_lambda_independent(s in arb_structure(4, 6)) {
            let s = nonoverlapping(&s);
            prop_assert!(check_nonoverlap(&s).is_ok());
            prop_assert!(check_associativity(&s).is_ok());
            let form = nonoverlap_conditions(&s, 3).is_ok();
            for lam in 3..=4 {
                prop_assert_eq!(form, check_integrated_leibniz_exhaustive(&s, lam).is_ok());
            }
        }

        #[test]
        fn tuple_sum_matches_direct_oracle(s in arb_structure(3, 5)) {
            for lam in 1..=3 {
                prop_assert_eq!(
                    check_integrated_leibniz(&s, lam).is_ok(),
                    brute_leibniz_oracle(&s, lam, OracleMode::Exhaustive).is_ok()
                );
            }
        }

        #[test]
        fn lambda3_implies_lambda2(s in arb_structure(4, 6)) {
            if lambda3_conditions(&s).is_ok() {
                prop_assert!(lambda2_conditions(&s).is_ok());
            }
            if lambda3_quoted_conditions(&s).is_ok() {
                prop_assert!(lambda2_conditions(&s).is_ok());
            }
        }

        #[test]
        fn integral_kills_coboundaries(s in arb_structure(4, 6)) {
            if s.integral_defined() {
                for a in 0..s.num_checks() {
                    let da = s.coboundary_of(&unit_cochain(&s, Cell::check(a)));
                    prop_assert!(!s.integral1(&da).unwrap());
                }
            }
        }
    }
}
