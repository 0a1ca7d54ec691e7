//! Group-algebra codes `F2[G] → F2[G]`, `δ(g) = c·g`, their splittings, and
//! balanced products of them (bivariate bicycle codes for `Λ = 2`).

use serde::{Deserialize, Serialize};

use super::{classical_from_partitions, ConstructionError, CupCode};
use crate::group::{AbelianGroup, GroupError};
use crate::orientation::{
    check_integrated_leibniz, Cell, CupStructure, LeibnizViolation, Partition, PreOrientation,
};
use crate::products::{BalancedComplex, FactorAction, GroupAction, TensorComplex};

/// An element of `F2[G]` given by its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub group: AbelianGroup,
    pub support: Vec<usize>,
}

impl GroupAlgebraElement {
    /// # Errors
    /// If a term fails to parse.
    pub fn parse(group: &AbelianGroup, text: &str) -> Result<Self, GroupError> {
        Ok(Self {
            group: group.clone(),
            support: group.parse_polynomial(text)?,
        })
    }

    #[must_use]
    pub fn render(&self) -> String {
        if self.support.is_empty() {
            return "0".into();
        }
        self.support
            .iter()
            .map(|&g| self.group.render(g))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `c = c_in + c_out + c_free` as sorted supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Splitting {
    pub c_in: Vec<usize>,
    pub c_out: Vec<usize>,
    pub c_free: Vec<usize>,
}

impl Splitting {
    #[must_use]
    pub fn new(mut c_in: Vec<usize>, mut c_out: Vec<usize>, mut c_free: Vec<usize>) -> Self {
        c_in.sort_unstable();
        c_out.sort_unstable();
        c_free.sort_unstable();
        Self { c_in, c_out, c_free }
    }

    /// # Errors
    /// If a monomial fails to parse.
    pub fn parse(g: &AbelianGroup, c_in: &str, c_out: &str, c_free: &str) -> Result<Self, GroupError> {
        Ok(Self::new(
            g.parse_polynomial(c_in)?,
            g.parse_polynomial(c_out)?,
            g.parse_polynomial(c_free)?,
        ))
    }

    #[must_use]
    pub fn render(&self, g: &AbelianGroup) -> String {
        let r = |s: &[usize]| {
            if s.is_empty() {
                "0".to_string()
            } else {
                s.iter().map(|&x| g.render(x)).collect::<Vec<_>>().join(" + ")
            }
        };
        format!("in: {}; out: {}; free: {}", r(&self.c_in), r(&self.c_out), r(&self.c_free))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplittingHypothesis {
    /// The three parts are not a partition of `supp c`.
    Partition,
    /// `|c_in| ≠ 1`.
    SingleIn { size: usize },
    /// `c_in ≠ inv(c_out)`.
    InverseInOut,
    /// `c_free ≠ inv(c_free)`.
    SymmetricFree,
    /// Some translation fixes a basis element.
    FreeAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub failures: Vec<SplittingHypothesis>,
}

/// `δ(g) = c·g` with checks `c:<g>` and bits `b:<g>`, oriented by the
/// splitting: `in(g) = c_in·g` and likewise for out and free.
///
/// # Errors
/// If `c` is empty or the splitting parts overlap or miss `c`.
pub fn group_algebra_cup(
    g: &AbelianGroup,
    c: &[usize],
    s: &Splitting,
) -> Result<CupStructure, ConstructionError> {
    if c.is_empty() {
        return Err(ConstructionError::Parameter("group algebra element must be nonzero".into()));
    }
    if !is_partition(c, s) {
        return Err(ConstructionError::Splitting(SplittingReport {
            failures: vec![SplittingHypothesis::Partition],
        }));
    }
    let parts = (0..g.order())
        .map(|h| Partition::new(g.translate(&s.c_in, h), g.translate(&s.c_out, h), g.translate(&s.c_free, h)))
        .collect();
    classical_from_partitions(
        (0..g.order()).map(|h| format!("c:{}", g.render(h))).collect(),
        (0..g.order()).map(|h| format!("b:{}", g.render(h))).collect(),
        parts,
    )
}

/// The group-algebra code with every bit free.
///
/// # Errors
/// If `c` is empty.
pub fn group_algebra_code(g: &AbelianGroup, c: &[usize]) -> Result<CupStructure, ConstructionError> {
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    group_algebra_cup(g, &c, &Splitting::new(Vec::new(), Vec::new(), c.clone()))
}

fn is_partition(c: &[usize], s: &Splitting) -> bool {
    let mut all: Vec<usize> = s.c_in.iter().chain(&s.c_out).chain(&s.c_free).copied().collect();
    all.sort_unstable();
    let mut want = c.to_vec();
    want.sort_unstable();
    want.dedup();
    all == want
}

/// Checks the four splitting hypotheses and returns the induced
/// pre-orientation.
///
/// # Errors
/// Every failed hypothesis.
pub fn validate_splitting(
    g: &AbelianGroup,
    c: &[usize],
    s: &Splitting,
) -> Result<PreOrientation, SplittingReport> {
    let mut failures = Vec::new();
    if !is_partition(c, s) {
        failures.push(SplittingHypothesis::Partition);
    }
    if s.c_in.len() != 1 {
        failures.push(SplittingHypothesis::SingleIn { size: s.c_in.len() });
    }
    if g.inverse_set(&s.c_out) != s.c_in {
        failures.push(SplittingHypothesis::InverseInOut);
    }
    if g.inverse_set(&s.c_free) != s.c_free {
        failures.push(SplittingHypothesis::SymmetricFree);
    }
    let free = (1..g.order()).all(|h| (0..g.order()).all(|x| g.mul(x, h) != x));
    if !free {
        failures.push(SplittingHypothesis::FreeAction);
    }
    if !failures.is_empty() {
        return Err(SplittingReport { failures });
    }
    group_algebra_cup(g, c, s)
        .map(|cs| cs.orientation().clone())
        .map_err(|_| SplittingReport {
            failures: vec![SplittingHypothesis::Partition],
        })
}

/// All splittings meeting the four hypotheses, ordered by `c_in`.
///
/// They are exactly `c_in = {t}`, `c_out = {t⁻¹}` with `t ≠ t⁻¹` both in
/// `supp c`, and the remainder closed under inversion.
#[must_use]
pub fn search_splittings(g: &AbelianGroup, c: &[usize]) -> Vec<Splitting> {
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    let mut out = Vec::new();
    for &t in &c {
        let ti = g.inv(t);
        if ti == t || c.binary_search(&ti).is_err() {
            continue;
        }
        let rest: Vec<usize> = c.iter().copied().filter(|&x| x != t && x != ti).collect();
        if g.inverse_set(&rest) == rest {
            out.push(Splitting::new(vec![t], vec![ti], rest));
        }
    }
    out
}

/// Whether the splitting's group-algebra code satisfies the integrated
/// Leibniz rule for `Λ`.
///
/// # Errors
/// If the splitting is malformed, or the violating tuple otherwise.
pub fn check_splitting_lambda(
    g: &AbelianGroup,
    c: &[usize],
    s: &Splitting,
    lambda: usize,
) -> Result<Result<(), LeibnizViolation>, ConstructionError> {
    let cs = group_algebra_cup(g, c, s)?;
    Ok(check_integrated_leibniz(&cs, lambda))
}

/// Every partition of `supp c` into in/out/free, translated to a
/// pre-orientation, that satisfies the integrated Leibniz rule for `Λ`.
/// Enumerates `3^|c|` colorings.
#[must_use]
pub fn search_splittings_lambda(g: &AbelianGroup, c: &[usize], lambda: usize) -> Vec<Splitting> {
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    let total = 3usize.pow(u32::try_from(c.len()).unwrap_or(u32::MAX));
    let mut out = Vec::new();
    for code in 0..total {
        let mut parts: [Vec<usize>; 3] = Default::default();
        let mut k = code;
        for &x in &c {
            parts[k % 3].push(x);
            k /= 3;
        }
        let [i, o, f] = parts;
        let s = Splitting::new(i, o, f);
        if matches!(check_splitting_lambda(g, &c, &s, lambda), Ok(Ok(()))) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// `H = G^{m-1}` acting on an `m`-fold product of group-algebra codes;
/// `(g_1, …, g_{m-1})` sends slot `i` by `x ↦ g_{i-1} · x · g_i⁻¹` with
/// `g_0 = g_m = 1`.
#[must_use]
pub fn translation_chain_action(g: &AbelianGroup, m: usize) -> GroupAction {
    let mut h = AbelianGroup::cyclic(1);
    for k in 0..m.saturating_sub(1) {
        h = if k == 0 { g.clone() } else { h.product(g) };
    }
    let r = g.rank();
    let components = |e: usize| -> Vec<usize> {
        if m <= 1 {
            return Vec::new();
        }
        let exps = h.exponents(e);
        exps.chunks(r)
            .map(|ch| g.element(&ch.iter().map(|&x| i64::from(x)).collect::<Vec<_>>()))
            .collect()
    };
    let table: Vec<Vec<usize>> = (0..h.order()).map(components).collect();
    let n = g.order();
    let factors = (0..m)
        .map(|i| {
            FactorAction::from_fn(h.order(), [n, n], |_, e, x| {
                let comps = &table[e];
                let mut y = x;
                if i >= 1 {
                    y = g.mul(comps[i - 1], y);
                }
                if i + 1 < m {
                    y = g.div(y, comps[i]);
                }
                y
            })
        })
        .collect();
    GroupAction::new(h, factors)
}

/// Balanced product over `G` of group-algebra codes with the given splittings.
///
/// # Errors
/// If a splitting is malformed or the action is not free.
pub fn ga_balanced_product(
    g: &AbelianGroup,
    factors: &[(Vec<usize>, Splitting)],
) -> Result<CupCode<BalancedComplex>, ConstructionError> {
    let structures = factors
        .iter()
        .map(|(c, s)| group_algebra_cup(g, c, s))
        .collect::<Result<Vec<_>, _>>()?;
    let tensor = TensorComplex::new(structures)?;
    let action = translation_chain_action(g, factors.len());
    CupCode::new(BalancedComplex::new(tensor, action)?)
}

/// Bivariate bicycle code `C(c1) ⊗_G C(c2)` after validating both splittings.
///
/// # Errors
/// If a splitting fails its hypotheses or the product cannot be formed.
pub fn bivariate_bicycle(
    g: &AbelianGroup,
    c1: &[usize],
    c2: &[usize],
    s1: &Splitting,
    s2: &Splitting,
) -> Result<CupCode<BalancedComplex>, ConstructionError> {
    validate_splitting(g, c1, s1).map_err(ConstructionError::Splitting)?;
    validate_splitting(g, c2, s2).map_err(ConstructionError::Splitting)?;
    ga_balanced_product(g, &[(c1.to_vec(), s1.clone()), (c2.to_vec(), s2.clone())])
}

/// Inputs of the `[[144, 8, 12]]` example over `Z_6 × Z_12`.
#[derive(Clone, Debug)]
pub struct BbExample {
    pub group: AbelianGroup,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub s1: Splitting,
    pub s2: Splitting,
}

#[must_use]
pub fn bb_example_inputs() -> BbExample {
    let g = AbelianGroup::new(&[6, 12]).expect("positive orders");
    let s1 = Splitting::parse(&g, "x^3y^2", "x^-3y^-2", "x^2y + x^-2y^-1").expect("valid monomials");
    let s2 = Splitting::parse(&g, "x", "x^-1", "xy + x^-1y^-1").expect("valid monomials");
    let c1 = g.parse_polynomial("x^3y^2 + x^-3y^-2 + x^2y + x^-2y^-1").expect("valid monomials");
    let c2 = g.parse_polynomial("x + x^-1 + xy + x^-1y^-1").expect("valid monomials");
    BbExample {
        group: g,
        c1,
        c2,
        s1,
        s2,
    }
}

/// The `[[144, 8, 12]]` bivariate bicycle code with its cup product.
///
/// # Errors
/// Never for the bundled inputs; kept fallible for uniformity.
pub fn bb_example() -> Result<CupCode<BalancedComplex>, ConstructionError> {
    let e = bb_example_inputs();
    bivariate_bicycle(&e.group, &e.c1, &e.c2, &e.s1, &e.s2)
}

/// Orbit-basis indices for the identification of a two-factor
/// group-algebra balanced product with `F2[G] → F2[G]² → F2[G]`.
pub struct TwoBlockIndex<'a> {
    pub complex: &'a BalancedComplex,
    pub group: &'a AbelianGroup,
}

impl TwoBlockIndex<'_> {
    /// `q_v = [1, q]`.
    #[must_use]
    pub fn vertical(&self, q: usize) -> usize {
        self.complex.orbit_of_tuple(&[Cell::check(self.group.identity()), Cell::bit(q)]).1
    }

    /// `p_h = [p, 1]`.
    #[must_use]
    pub fn horizontal(&self, p: usize) -> usize {
        self.complex.orbit_of_tuple(&[Cell::bit(p), Cell::check(self.group.identity())]).1
    }

    /// The face `[m, 1]`, which the multiplication map sends to `m`.
    #[must_use]
    pub fn face(&self, m: usize) -> usize {
        self.complex.orbit_of_tuple(&[Cell::bit(m), Cell::bit(self.group.identity())]).1
    }
}

fn toggle(out: &mut Vec<usize>, x: usize) {
    if let Some(i) = out.iter().position(|&y| y == x) {
        out.swap_remove(i);
    } else {
        out.push(x);
    }
}

/// `q_v ∪ p_h = Σ_{h ∈ p⁻¹c⁽¹⁾_out ∩ q⁻¹c⁽²⁾_in} p·h·q`, as a sorted support
/// in `G`.
#[must_use]
pub fn bb_cup_closed(g: &AbelianGroup, s1: &Splitting, s2: &Splitting, q: usize, p: usize) -> Vec<usize> {
    let a = g.translate(&s1.c_out, g.inv(p));
    let b = g.translate(&s2.c_in, g.inv(q));
    let mut out = Vec::new();
    for h in a.iter().filter(|h| b.contains(h)) {
        toggle(&mut out, g.mul(g.mul(p, *h), q));
    }
    out.sort_unstable();
    out
}

/// `p_v ∪ q_h ∪ r_d = Σ p·g·q·h·r` over `g ∈ p⁻¹c⁽ᵛ⁾_in ∩ q⁻¹c⁽ʰ⁾_out` and
/// `h ∈ q⁻¹c⁽ʰ⁾_in ∩ r⁻¹c⁽ᵈ⁾_out`, as a sorted support in `G`.
#[must_use]
pub fn ga_cup_lambda3(
    g: &AbelianGroup,
    splits: [&Splitting; 3],
    p: usize,
    q: usize,
    r: usize,
) -> Vec<usize> {
    let [sv, sh, sd] = splits;
    let inter = |x: Vec<usize>, y: Vec<usize>| -> Vec<usize> { x.into_iter().filter(|e| y.contains(e)).collect() };
    let gs = inter(g.translate(&sv.c_in, g.inv(p)), g.translate(&sh.c_out, g.inv(q)));
    let hs = inter(g.translate(&sh.c_in, g.inv(q)), g.translate(&sd.c_out, g.inv(r)));
    let mut out = Vec::new();
    for &a in &gs {
        for &b in &hs {
            let m = [p, a, q, b, r].into_iter().fold(g.identity(), |acc, x| g.mul(acc, x));
            toggle(&mut out, m);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::{check_associativity, check_nonoverlap, lambda2_conditions, Cochain};
    use crate::products::CupAlgebra;
    use crate::f2linalg::BitVector;

    fn unit(b: &BalancedComplex, d: usize, i: usize) -> Cochain {
        Cochain::new(d, BitVector::unit(b.complex().dim(d), i))
    }

    #[test]
    fn identity_element_code() {
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        let cs = group_algebra_code(&g, &[0]).unwrap();
        assert_eq!(cs.complex().betti(1).unwrap(), 0);
        assert!(group_algebra_code(&g, &[]).is_err());
    }

    #[test]
    fn example_splittings_validate() {
        let e = bb_example_inputs();
        assert_eq!(e.c1.len(), 4);
        for (c, s) in [(&e.c1, &e.s1), (&e.c2, &e.s2)] {
            let o = validate_splitting(&e.group, c, s).unwrap();
            let cs = group_algebra_cup(&e.group, c, s).unwrap();
            assert_eq!(cs.orientation(), &o);
            assert!(cs.integral_defined());
            assert!(check_nonoverlap(&cs).is_ok());
            assert!(lambda2_conditions(&cs).is_ok());
            assert!(check_integrated_leibniz(&cs, 2).is_ok());
        }
    }

    #[test]
    fn splitting_failures_itemized() {
        let e = bb_example_inputs();
        let g = &e.group;
        let two_in = Splitting::parse(g, "x + x^-1", "", "xy + x^-1y^-1").unwrap();
        let r = validate_splitting(g, &e.c2, &two_in).unwrap_err();
        assert!(r.failures.contains(&SplittingHypothesis::SingleIn { size: 2 }));
        let asym = Splitting::parse(g, "x", "x^-1y^-1", "xy + x^-1").unwrap();
        let r = validate_splitting(g, &e.c2, &asym).unwrap_err();
        assert!(r.failures.contains(&SplittingHypothesis::SymmetricFree));
        assert!(r.failures.contains(&SplittingHypothesis::InverseInOut));
    }

    fn brute_splittings(g: &AbelianGroup, c: &[usize]) -> Vec<Splitting> {
        let mut out = Vec::new();
        for code in 0..3usize.pow(c.len() as u32) {
            let mut parts: [Vec<usize>; 3] = Default::default();
            let mut k = code;
            for &x in c {
                parts[k % 3].push(x);
                k /= 3;
            }
            let [i, o, f] = parts;
            let s = Splitting::new(i, o, f);
            if validate_splitting(g, c, &s).is_ok() {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn splitting_search_matches_brute_force() {
        let e = bb_example_inputs();
        let found = search_splittings(&e.group, &e.c2);
        assert_eq!(found.len(), 4);
        assert!(found.contains(&e.s2));
        let mut sorted = found.clone();
        sorted.sort();
        assert_eq!(sorted, brute_splittings(&e.group, &e.c2));
        let mut f1 = search_splittings(&e.group, &e.c1);
        f1.sort();
        assert_eq!(f1, brute_splittings(&e.group, &e.c1));
        // no inverse pair
        let lonely = e.group.parse_polynomial("x + y").unwrap();
        assert!(search_splittings(&e.group, &lonely).is_empty());
    }

    #[test]
    fn trivial_group_bb() {
        let g = AbelianGroup::cyclic(1);
        let b = ga_balanced_product(&g, &vec![(vec![0], Splitting::new(vec![], vec![], vec![0])); 2]).unwrap();
        assert_eq!((b.code.n, b.code.k), (2, 0));
    }

    #[test]
    fn closed_bb_cup_matches_generic() {
        let g = AbelianGroup::new(&[2, 2]).unwrap();
        let c1 = g.parse_polynomial("x + y").unwrap();
        let c2 = g.parse_polynomial("x + xy").unwrap();
        for s1 in [Splitting::parse(&g, "x", "y", "").unwrap(), Splitting::parse(&g, "y", "", "x").unwrap()] {
            for s2 in [Splitting::parse(&g, "x", "xy", "").unwrap(), Splitting::parse(&g, "", "x", "xy").unwrap()] {
                let b = ga_balanced_product(&g, &[(c1.clone(), s1.clone()), (c2.clone(), s2.clone())]).unwrap();
                let idx = TwoBlockIndex { complex: &b.algebra, group: &g };
                for q in 0..g.order() {
                    for p in 0..g.order() {
                        let generic = b.algebra.cup(&unit(&b.algebra, 1, idx.vertical(q)), &unit(&b.algebra, 1, idx.horizontal(p))).unwrap();
                        let mut closed: Vec<usize> = bb_cup_closed(&g, &s1, &s2, q, p).into_iter().map(|m| idx.face(m)).collect();
                        closed.sort_unstable();
                        assert_eq!(generic.values.support(), closed);
                    }
                }
            }
        }
    }

    #[test]
    fn lambda3_closed_cup() {
        // singleton intersections on Z_4
        let g = AbelianGroup::cyclic(4);
        let s = Splitting::new(vec![1], vec![3], vec![]);
        let one = ga_cup_lambda3(&g, [&s, &s, &s], 0, 2, 0);
        assert_eq!(one.len(), 1);
        let empty = Splitting::new(vec![], vec![], vec![1, 3]);
        assert!(ga_cup_lambda3(&g, [&empty, &s, &s], 0, 2, 0).is_empty());

        for (order, cs) in [
            (4u32, ["x + x^3", "x + x^3", "x + x^3"]),
            (6, ["x + x^5", "x^2 + x^4", "x + x^5"]),
            (8, ["x + x^7", "x^3 + x^5", "x^2 + x^6"]),
        ] {
            let g = AbelianGroup::cyclic(order);
            let mut factors = Vec::new();
            for c in cs {
                let c = g.parse_polynomial(c).unwrap();
                let s = Splitting::new(vec![c[0]], vec![c[1]], vec![]);
                factors.push((c, s));
            }
            let b = ga_balanced_product(&g, &factors).unwrap();
            let bc = &b.algebra;
            for f in bc.tensor().factors() {
                assert!(check_associativity(f).is_ok());
            }
            let id = g.identity();
            let slot = |k: usize, x: usize| {
                let mut t = [Cell::check(id); 3];
                t[k] = Cell::bit(x);
                bc.orbit_of_tuple(&t).1
            };
            for p in 0..g.order() {
                for q in 0..g.order() {
                    for r in 0..g.order() {
                        let args = [unit(bc, 1, slot(0, p)), unit(bc, 1, slot(1, q)), unit(bc, 1, slot(2, r))];
                        let generic = bc.lambda_cup(&args).unwrap();
                        let mut closed: Vec<usize> = ga_cup_lambda3(&g, [&factors[0].1, &factors[1].1, &factors[2].1], p, q, r)
                            .into_iter()
                            .map(|m| bc.orbit_of_tuple(&[Cell::bit(m), Cell::bit(id), Cell::bit(id)]).1)
                            .collect();
                        closed.sort_unstable();
                        assert_eq!(generic.values.support(), closed, "p={p} q={q} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_splitting_search_runs() {
        let g = AbelianGroup::cyclic(6);
        let c = g.parse_polynomial("x + x^5").unwrap();
        let l2 = search_splittings_lambda(&g, &c, 2);
        assert!(l2.contains(&Splitting::new(vec![1], vec![5], vec![])));
        for s in search_splittings_lambda(&g, &c, 3) {
            assert!(l2.contains(&s));
        }
    }
}
