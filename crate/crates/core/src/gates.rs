//! Copy-cup gates: the phase polynomial `Ψ(c_1, …, c_Λ) = ∫ c_1 ∪ ⋯ ∪ c_Λ`
//! on `Λ` copies of a code, its multi-controlled-Z circuit, invariance
//! checks, logical action and addressable lower-level gates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{BasisLabel, ComplexError};
use crate::f2linalg::{kernel_basis, BitMatrix, BitVector};
use crate::orientation::Cochain;
use crate::products::{CupAlgebra, ProductError};

#[derive(Debug, Error)]
pub enum GateError {
    #[error("expected a degree-1 cochain of length {expected}, got degree {degree} and length {len}")]
    Degree { expected: usize, degree: usize, len: usize },
    #[error("Λ = {lambda} does not match the top degree {top}")]
    Lambda { lambda: usize, top: usize },
    #[error("cohomology invariance fails: {0}")]
    Invariance(Box<InvarianceCounterexample>),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `Ψ` as a sum of monomials `c_1[q_1] ⋯ c_Λ[q_Λ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePolynomial {
    /// Original copy ids (0-based) of the variables, in order.
    pub copies: Vec<usize>,
    /// Qubits per copy.
    pub n: usize,
    /// Sorted and distinct, one qubit per copy.
    pub monomials: Vec<Vec<usize>>,
}

impl PhasePolynomial {
    #[must_use]
    pub fn lambda(&self) -> usize {
        self.copies.len()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// # Panics
    /// If the argument count differs from the number of copies.
    #[must_use]
    pub fn eval(&self, args: &[BitVector]) -> bool {
        assert_eq!(args.len(), self.lambda(), "one argument per copy");
        self.monomials
            .iter()
            .filter(|m| m.iter().zip(args).all(|(&q, c)| c.get(q)))
            .count()
            % 2
            == 1
    }

    fn from_terms(copies: Vec<usize>, n: usize, terms: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut count: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
        for t in terms {
            *count.entry(t).or_insert(false) ^= true;
        }
        Self {
            copies,
            n,
            monomials: count.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect(),
        }
    }
}

fn check_args<A: CupAlgebra + ?Sized>(alg: &A, lambda: usize) -> Result<(), GateError> {
    let top = alg.top_degree();
    if lambda != top || lambda == 0 {
        return Err(GateError::Lambda { lambda, top });
    }
    Ok(())
}

/// `∫ c_1 ∪ ⋯ ∪ c_Λ` (left-nested).
///
/// # Errors
/// If an argument is not a degree-1 cochain, `Λ` differs from the top
/// degree, or the integral is undefined.
pub fn psi_eval<A: CupAlgebra + ?Sized>(alg: &A, args: &[Cochain]) -> Result<bool, GateError> {
    check_args(alg, args.len())?;
    let n = alg.complex().dim(1);
    for a in args {
        if a.degree != 1 || a.values.len() != n {
            return Err(GateError::Degree {
                expected: n,
                degree: a.degree,
                len: a.values.len(),
            });
        }
    }
    let prod = alg.lambda_cup(args)?;
    Ok(alg.integral(&prod)?)
}

/// All basis tuples `(q_1, …, q_Λ)` with `Ψ(e_{q_1}, …, e_{q_Λ}) = 1`.
///
/// # Errors
/// If `Λ` differs from the top degree or the integral is undefined.
pub fn psi_polynomial<A: CupAlgebra + ?Sized>(alg: &A, lambda: usize) -> Result<PhasePolynomial, GateError> {
    check_args(alg, lambda)?;
    if !alg.integral_defined() {
        return Err(ProductError::IntegralUndefined { factor: 0, check: 0 }.into());
    }
    let n = alg.complex().dim(1);
    let mut monomials = Vec::new();
    let mut prefix = Vec::with_capacity(lambda);
    for q in 0..n {
        prefix.push(q);
        extend(alg, lambda, &mut prefix, vec![q], 1, &mut monomials);
        prefix.pop();
    }
    Ok(PhasePolynomial::from_terms((0..lambda).collect(), n, monomials))
}

fn extend<A: CupAlgebra + ?Sized>(
    alg: &A,
    lambda: usize,
    prefix: &mut Vec<usize>,
    support: Vec<usize>,
    degree: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if degree == lambda {
        if support.len() % 2 == 1 {
            out.push(prefix.clone());
        }
        return;
    }
    let mut next: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &w in &support {
        for (q, res) in alg.cup_partners(degree, w, 1) {
            let acc = next.entry(q).or_default();
            for r in res {
                if let Some(i) = acc.iter().position(|&x| x == r) {
                    acc.swap_remove(i);
                } else {
                    acc.push(r);
                }
            }
        }
    }
    for (q, s) in next {
        if !s.is_empty() {
            prefix.push(q);
            extend(alg, lambda, prefix, s, degree + 1, out);
            prefix.pop();
        }
    }
}

/// A multi-controlled-Z circuit; each gate lists `(copy, qubit)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub lambda: usize,
    pub gates: Vec<Vec<(usize, usize)>>,
}

/// One `C^{Λ-1}Z` per monomial, in lexicographic order.
#[must_use]
pub fn synth_circuit(p: &PhasePolynomial) -> Circuit {
    Circuit {
        lambda: p.lambda(),
        gates: p
            .monomials
            .iter()
            .map(|m| p.copies.iter().copied().zip(m.iter().copied()).collect())
            .collect(),
    }
}

fn gate_name(arity: usize) -> String {
    match arity {
        1 => "Z".into(),
        2 => "CZ".into(),
        3 => "CCZ".into(),
        k => format!("C{}Z", k - 1),
    }
}

impl Circuit {
    /// Whether the circuit applies phase `-1` to `|c_1, …, c_Λ⟩`, where
    /// `states` is indexed by copy id.
    #[must_use]
    pub fn phase(&self, states: &[BitVector]) -> bool {
        self.gates
            .iter()
            .filter(|g| g.iter().all(|&(c, q)| states[c].get(q)))
            .count()
            % 2
            == 1
    }

    /// One gate per line, e.g. `CZ 1:(e0,v0) 2:(v1,e0)`; copies are 1-based.
    #[must_use]
    pub fn to_text(&self, labels: &[BasisLabel]) -> String {
        let mut s = String::new();
        for g in &self.gates {
            s.push_str(&gate_name(g.len()));
            for &(c, q) in g {
                s.push_str(&format!(" {}:{}", c + 1, labels[q]));
            }
            s.push('\n');
        }
        s
    }
}

/// Greedy first-fit layering of a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCertificate {
    /// Number of layers used.
    pub depth: usize,
    /// `1 + max_g Σ_{x ∈ g} (deg x − 1)`, an upper bound on `depth`.
    pub bound: usize,
    /// Gate indices per layer.
    pub layers: Vec<Vec<usize>>,
}

#[must_use]
pub fn circuit_depth_certificate(c: &Circuit) -> DepthCertificate {
    let mut degree: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for g in &c.gates {
        for x in g {
            *degree.entry(*x).or_default() += 1;
        }
    }
    let bound = c
        .gates
        .iter()
        .map(|g| 1 + g.iter().map(|x| degree[x] - 1).sum::<usize>())
        .max()
        .unwrap_or(0);
    let mut busy: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, g) in c.gates.iter().enumerate() {
        let layer = (0..)
            .find(|l| g.iter().all(|x| busy.get(x).is_none_or(|ls| !ls.contains(l))))
            .expect("unbounded search");
        for x in g {
            busy.entry(*x).or_default().push(layer);
        }
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(i);
    }
    DepthCertificate {
        depth: layers.len(),
        bound,
        layers,
    }
}

/// Where invariance fails: adding `δ(check)` in `slot` changes `Ψ` at the
/// given arguments of the other slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCounterexample {
    pub slot: usize,
    /// Basis indices of the other slots when the failure is on a basis tuple.
    pub tuple: Option<Vec<usize>>,
    /// Supports of the other-slot cocycles, in slot order.
    pub others: Vec<Vec<usize>>,
    pub check: usize,
}

impl std::fmt::Display for InvarianceCounterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "slot {} check {}", self.slot, self.check)?;
        if let Some(t) = &self.tuple {
            write!(f, " basis tuple {t:?}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InvarianceCounterexample {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Basis tuples checked across all slots.
    pub basis_tuples: usize,
    /// Cocycle tuples checked across all slots.
    pub cocycle_tuples: usize,
    /// Whether the cocycle tuples ranged over a full basis of `Z¹`, which
    /// makes the check exact.
    pub cocycles_exhaustive: bool,
}

/// Cocycle-basis tuple budget above which general cocycles are sampled.
pub const EXHAUSTIVE_COCYCLE_LIMIT: usize = 200_000;

/// `Ψ` restricted to slot `s` with the other slots fixed, as a vector `ℓ`
/// with `Ψ(…, c_s, …) = ℓ · c_s`.
fn slot_form(p: &PhasePolynomial, s: usize, others: &[&BitVector]) -> BitVector {
    let mut l = BitVector::zeros(p.n);
    'mono: for m in &p.monomials {
        let mut k = 0;
        for (j, &q) in m.iter().enumerate() {
            if j == s {
                continue;
            }
            if !others[k].get(q) {
                continue 'mono;
            }
            k += 1;
        }
        l.flip(m[s]);
    }
    l
}

fn odometer(idx: &mut [usize], radix: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < radix {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Checks `Ψ(…, z_s + δ(a), …) = Ψ(…, z_s, …)` for every slot, every check
/// `a`, and the other slots ranging over tuples of `basis`, then over tuples
/// of a `Z¹` basis (exhaustive up to [`EXHAUSTIVE_COCYCLE_LIMIT`], otherwise
/// `samples` random cocycle tuples).
///
/// `x_checks` has the coboundaries `δ(a)` as rows and `cocycles` spans `Z¹`.
///
/// # Errors
/// The first counterexample found.
pub fn verify_invariance(
    p: &PhasePolynomial,
    x_checks: &BitMatrix,
    basis: &[BitVector],
    cocycles: &[BitVector],
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, Box<InvarianceCounterexample>> {
    let lam = p.lambda();
    let columns = x_checks.transpose();
    let test = |s: usize, others: &[&BitVector], tuple: Option<Vec<usize>>| {
        let l = slot_form(p, s, others);
        let mut syn = BitVector::zeros(x_checks.rows());
        for q in l.iter_ones() {
            syn.xor_assign(&columns.row(q));
        }
        match syn.first_one() {
            None => Ok(()),
            Some(check) => Err(Box::new(InvarianceCounterexample {
                slot: s,
                tuple,
                others: others.iter().map(|v| v.support()).collect(),
                check,
            })),
        }
    };
    let mut report = InvarianceReport {
        basis_tuples: 0,
        cocycle_tuples: 0,
        cocycles_exhaustive: false,
    };
    if !basis.is_empty() || lam == 1 {
        for s in 0..lam {
            let mut idx = vec![0usize; lam - 1];
            loop {
                let others: Vec<&BitVector> = idx.iter().map(|&i| &basis[i]).collect();
                test(s, &others, Some(idx.clone()))?;
                report.basis_tuples += 1;
                if !odometer(&mut idx, basis.len()) {
                    break;
                }
            }
        }
    }
    let exhaustive_count = u32::try_from(lam - 1)
        .ok()
        .and_then(|e| cocycles.len().checked_pow(e))
        .and_then(|c| c.checked_mul(lam));
    if exhaustive_count.is_some_and(|c| c <= EXHAUSTIVE_COCYCLE_LIMIT) && (!cocycles.is_empty() || lam == 1) {
        for s in 0..lam {
            let mut idx = vec![0usize; lam - 1];
            loop {
                let others: Vec<&BitVector> = idx.iter().map(|&i| &cocycles[i]).collect();
                test(s, &others, None)?;
                report.cocycle_tuples += 1;
                if !odometer(&mut idx, cocycles.len()) {
                    break;
                }
            }
        }
        report.cocycles_exhaustive = true;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let s = rng.random_range(0..lam);
            let others: Vec<BitVector> = (1..lam)
                .map(|_| {
                    let mut z = BitVector::zeros(p.n);
                    for v in cocycles {
                        if rng.random::<bool>() {
                            z.xor_assign(v);
                        }
                    }
                    z
                })
                .collect();
            let refs: Vec<&BitVector> = others.iter().collect();
            test(s, &refs, None)?;
            report.cocycle_tuples += 1;
        }
    }
    Ok(report)
}

/// The logical operator `∏ C^{Λ-1}Z̄` over the basis tuples with `Ψ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalAction {
    pub lambda: usize,
    /// Tuples of per-copy basis indices, sorted.
    pub terms: Vec<Vec<usize>>,
    pub level: usize,
    /// Set when `Ψ` vanishes on cohomology.
    pub diagnostic: Option<String>,
}

/// Evaluates `Ψ` on every tuple of per-copy cohomology representatives,
/// after checking invariance.
///
/// # Errors
/// [`GateError::Invariance`] if `Ψ` is not a cohomology invariant.
///
/// # Panics
/// If `bases` does not have one entry per copy.
pub fn logical_action(
    p: &PhasePolynomial,
    x_checks: &BitMatrix,
    bases: &[Vec<BitVector>],
    cocycles: &[BitVector],
) -> Result<LogicalAction, GateError> {
    let lam = p.lambda();
    assert_eq!(bases.len(), lam, "one basis per copy");
    for (i, b) in bases.iter().enumerate() {
        if !bases[..i].contains(b) {
            verify_invariance(p, x_checks, b, cocycles, 200, 0).map_err(GateError::Invariance)?;
        }
    }
    let mut terms = Vec::new();
    let monos: Vec<&[usize]> = p.monomials.iter().map(Vec::as_slice).collect();
    let mut idx = Vec::with_capacity(lam);
    collect_terms(&monos, bases, &mut idx, &mut terms);
    let mut a = LogicalAction {
        lambda: lam,
        terms,
        level: 0,
        diagnostic: None,
    };
    a.level = hierarchy_level(&a);
    if a.level == 0 {
        a.diagnostic = Some("Ψ vanishes on cohomology".into());
    }
    Ok(a)
}

/// Restricts the monomials copy by copy to those supported on the chosen
/// basis vector; a tuple is a term when an odd number survive.
fn collect_terms(monos: &[&[usize]], bases: &[Vec<BitVector>], idx: &mut Vec<usize>, terms: &mut Vec<Vec<usize>>) {
    let j = idx.len();
    if j == bases.len() {
        if monos.len() % 2 == 1 {
            terms.push(idx.clone());
        }
        return;
    }
    for (i, g) in bases[j].iter().enumerate() {
        let kept: Vec<&[usize]> = monos.iter().copied().filter(|m| g.get(m[j])).collect();
        if kept.is_empty() {
            continue;
        }
        idx.push(i);
        collect_terms(&kept, bases, idx, terms);
        idx.pop();
    }
}

/// `Λ` when the action is nontrivial, otherwise 0.
#[must_use]
pub fn hierarchy_level(a: &LogicalAction) -> usize {
    if a.terms.is_empty() {
        0
    } else {
        a.lambda
    }
}

/// For `Λ = 2`, re-bases the two copies so that the pairing
/// `M_ij = Ψ(γ_i, γ_j)` becomes `diag(1, …, 1, 0, …, 0)`; the action then has
/// exactly `rank M` terms `(i, i)`.
///
/// # Panics
/// If `p` is not bilinear.
#[must_use]
pub fn dual_bases(p: &PhasePolynomial, basis: &[BitVector]) -> (Vec<BitVector>, Vec<BitVector>) {
    assert_eq!(p.lambda(), 2, "dual bases need a bilinear Ψ");
    let k = basis.len();
    // [M | I] row-reduced gives A·M = R with A the right block
    let mut aug = BitMatrix::zeros(k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            if p.eval(&[basis[i].clone(), basis[j].clone()]) {
                aug.set(i, j, true);
            }
        }
        aug.set(i, k + i, true);
    }
    let pivots_all = aug.rref_in_place();
    let pivots: Vec<usize> = pivots_all.into_iter().filter(|&c| c < k).collect();
    let combine = |coeffs: &BitVector| {
        let mut v = BitVector::zeros(p.n);
        for i in coeffs.iter_ones() {
            v.xor_assign(&basis[i]);
        }
        v
    };
    let first: Vec<BitVector> = (0..k)
        .map(|r| {
            let row = aug.row(r);
            combine(&BitVector::from_support(k, &(0..k).filter(|&j| row.get(k + j)).collect::<Vec<_>>()))
        })
        .collect();
    let mut r = BitMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if aug.get(i, j) {
                r.set(i, j, true);
            }
        }
    }
    let mut second: Vec<BitVector> = pivots.iter().map(|&c| basis[c].clone()).collect();
    second.extend(kernel_basis(&r).iter().map(combine));
    (first, second)
}

/// The commutator polynomial `Ψ(…, c_i + γ, …) + Ψ(…, c_i, …)` with the
/// variables of position `i` eliminated.
///
/// # Panics
/// If `i` is out of range.
#[must_use]
pub fn address_gate(p: &PhasePolynomial, i: usize, gamma: &BitVector) -> PhasePolynomial {
    assert!(i < p.lambda(), "copy position out of range");
    let mut copies = p.copies.clone();
    copies.remove(i);
    let terms = p.monomials.iter().filter(|m| gamma.get(m[i])).map(|m| {
        let mut t = m.clone();
        t.remove(i);
        t
    });
    PhasePolynomial::from_terms(copies, p.n, terms)
}

/// Serializable bundle of a synthesized gate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitExport {
    pub lambda: usize,
    pub n: usize,
    /// Gates as `copy:label` strings with 1-based copies.
    pub gates: Vec<Vec<String>>,
    pub monomials: Vec<Vec<usize>>,
    pub depth: DepthCertificate,
    pub logical_action: Option<LogicalAction>,
}

impl CircuitExport {
    #[must_use]
    pub fn new(p: &PhasePolynomial, labels: &[BasisLabel], action: Option<LogicalAction>) -> Self {
        let c = synth_circuit(p);
        Self {
            lambda: p.lambda(),
            n: p.n,
            gates: c
                .gates
                .iter()
                .map(|g| g.iter().map(|&(c, q)| format!("{}:{}", c + 1, labels[q])).collect())
                .collect(),
            monomials: p.monomials.clone(),
            depth: circuit_depth_certificate(&c),
            logical_action: action,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::torus_code;
    use crate::f2linalg::BitVector;

    fn cochain(v: BitVector) -> Cochain {
        Cochain::new(1, v)
    }

    #[test]
    fn zero_argument_gives_zero() {
        let t = torus_code(2, 3).unwrap();
        let n = t.code.n;
        let a = cochain(BitVector::from_support(n, &[0, 1, 5]));
        let z = cochain(BitVector::zeros(n));
        assert!(!psi_eval(&t.algebra, &[a.clone(), z.clone()]).unwrap());
        assert!(!psi_eval(&t.algebra, &[z, a]).unwrap());
    }

    #[test]
    fn torus_loops_pair() {
        let t = torus_code(2, 2).unwrap();
        let basis = t.algebra.kunneth_h1_basis().unwrap();
        let (h, v) = (&basis[0].1, &basis[1].1);
        assert!(psi_eval(&t.algebra, &[h.clone(), v.clone()]).unwrap());
        assert!(!psi_eval(&t.algebra, &[h.clone(), h.clone()]).unwrap());
    }

    #[test]
    fn lambda_mismatch_rejected() {
        let t = torus_code(2, 2).unwrap();
        let n = t.code.n;
        let a = cochain(BitVector::zeros(n));
        assert!(matches!(psi_eval(&t.algebra, std::slice::from_ref(&a)), Err(GateError::Lambda { .. })));
        assert!(matches!(psi_polynomial(&t.algebra, 3), Err(GateError::Lambda { .. })));
        let bad = Cochain::new(0, BitVector::zeros(t.algebra.complex().dim(0)));
        assert!(matches!(psi_eval(&t.algebra, &[a, bad]), Err(GateError::Degree { .. })));
    }

    #[test]
    fn empty_polynomial_and_circuit() {
        let p = PhasePolynomial::from_terms(vec![0, 1], 4, Vec::new());
        let c = synth_circuit(&p);
        assert!(c.gates.is_empty());
        let cert = circuit_depth_certificate(&c);
        assert_eq!((cert.depth, cert.bound), (0, 0));
        let single = PhasePolynomial::from_terms(vec![0, 1], 4, vec![vec![1, 2]]);
        let cert = circuit_depth_certificate(&synth_circuit(&single));
        assert_eq!((cert.depth, cert.bound), (1, 1));
    }

    #[test]
    fn duplicate_terms_cancel() {
        let p = PhasePolynomial::from_terms(vec![0, 1], 3, vec![vec![0, 1], vec![0, 1], vec![2, 2]]);
        assert_eq!(p.monomials, vec![vec![2, 2]]);
    }

    #[test]
    fn circuit_text_format() {
        let p = PhasePolynomial::from_terms(vec![0, 1, 2], 2, vec![vec![0, 1, 0]]);
        let labels = vec![BasisLabel::atom("a"), BasisLabel::atom("b")];
        assert_eq!(synth_circuit(&p).to_text(&labels), "CCZ 1:a 2:b 3:a\n");
        let p4 = PhasePolynomial::from_terms(vec![0, 1, 2, 3], 1, vec![vec![0, 0, 0, 0]]);
        assert!(synth_circuit(&p4).to_text(&labels[..1]).starts_with("C3Z "));
    }

    #[test]
    fn address_with_zero_is_zero() {
        let t = torus_code(2, 2).unwrap();
        let p = psi_polynomial(&t.algebra, 2).unwrap();
        let a = address_gate(&p, 0, &BitVector::zeros(p.n));
        assert!(a.is_zero());
        assert_eq!(a.copies, vec![1]);
    }

    #[test]
    fn hierarchy_of_empty_is_zero() {
        let a = LogicalAction {
            lambda: 3,
            terms: Vec::new(),
            level: 0,
            diagnostic: None,
        };
        assert_eq!(hierarchy_level(&a), 0);
    }

    #[test]
    fn dual_bases_diagonalize() {
        let t = torus_code(2, 3).unwrap();
        let p = psi_polynomial(&t.algebra, 2).unwrap();
        let basis = t.code.x_logicals.clone();
        let (b1, b2) = dual_bases(&p, &basis);
        for (i, x) in b1.iter().enumerate() {
            for (j, y) in b2.iter().enumerate() {
                assert_eq!(p.eval(&[x.clone(), y.clone()]), i == j, "{i} {j}");
            }
        }
    }
}
