//! Sipser-Spielman codes: a local code attached at every vertex of a regular
//! graph, `δ(v ⊗ c) = φ_v(δ_L(c))`.

use serde::{Deserialize, Serialize};

use super::{ConstructionError, CupCode};
use crate::complexes::{BasedComplex, BasisLabel};
use crate::f2linalg::{BitMatrix, BitVector, Echelon};
use crate::group::AbelianGroup;
use crate::orientation::{lambda2_conditions, Cell, Cochain, CupStructure, Partition, PreOrientation};
use crate::products::TensorComplex;

/// Directed multigraph; edge `k` runs from `edges[k].0` to `edges[k].1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl OrientedGraph {
    /// Edges incident to `v`, sorted.
    #[must_use]
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&k| self.edges[k].0 == v || self.edges[k].1 == v)
            .collect()
    }
}

/// A local code and, per vertex, a bijection from its bits to the incident
/// edges: `phi[v][b]` is the edge carrying local bit `b` at `v`.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub local: BasedComplex,
    pub phi: Vec<Vec<usize>>,
}

/// `Cay(G, T ⊎ T⁻¹)` with edges `(g, g·t)` for `t ∈ T`. Such an edge is
/// labeled `t` at `g` and `t⁻¹` at `g·t`.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub group: AbelianGroup,
    /// `T` followed by `T⁻¹` in the same order.
    pub generators: Vec<usize>,
    pub graph: OrientedGraph,
    /// `edge_at[v][k]`: the edge labeled `generators[k]` at `v`.
    pub edge_at: Vec<Vec<usize>>,
}

/// # Errors
/// If `T` contains the identity or an involution, or meets `T⁻¹`.
pub fn cayley_graph(g: &AbelianGroup, t: &[usize]) -> Result<CayleyGraph, ConstructionError> {
    let inv: Vec<usize> = t.iter().map(|&x| g.inv(x)).collect();
    let mut all: Vec<usize> = t.iter().chain(&inv).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != 2 * t.len() || t.contains(&g.identity()) {
        return Err(ConstructionError::Parameter(
            "T and T⁻¹ must be disjoint and avoid the identity".into(),
        ));
    }
    let n = g.order();
    let s = t.len();
    let mut edges = Vec::with_capacity(n * s);
    let mut edge_at = vec![vec![usize::MAX; 2 * s]; n];
    for v in 0..n {
        for (k, &x) in t.iter().enumerate() {
            let w = g.mul(v, x);
            edge_at[v][k] = edges.len();
            edge_at[w][s + k] = edges.len();
            edges.push((v, w));
        }
    }
    let mut generators = t.to_vec();
    generators.extend(inv);
    Ok(CayleyGraph {
        group: g.clone(),
        generators,
        graph: OrientedGraph {
            num_vertices: n,
            edges,
        },
        edge_at,
    })
}

impl CayleyGraph {
    /// Local system with `φ_v(b) = ` the edge labeled `generators[labels[b]]`.
    ///
    /// # Errors
    /// If `labels` is not a permutation of the generator positions.
    pub fn local_system(&self, local: BasedComplex, labels: &[usize]) -> Result<LocalSystem, ConstructionError> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.generators.len()).collect::<Vec<_>>() || local.dim(1) != labels.len() {
            return Err(ConstructionError::Parameter(
                "local bits must be in bijection with the generators".into(),
            ));
        }
        let phi = self
            .edge_at
            .iter()
            .map(|at| labels.iter().map(|&k| at[k]).collect())
            .collect();
        Ok(LocalSystem { local, phi })
    }
}

/// The Sipser-Spielman complex with checks `v{v}.{c}` and bits `e{k}`.
///
/// # Errors
/// If the graph is not `|L_1|`-regular, has a loop, or some `φ_v` is not a
/// bijection onto the edges at `v`.
pub fn sipser_spielman(x: &OrientedGraph, sys: &LocalSystem) -> Result<BasedComplex, ConstructionError> {
    let l = &sys.local;
    if l.top_degree() != 1 {
        return Err(ConstructionError::Parameter("local code must be two-term".into()));
    }
    if sys.phi.len() != x.num_vertices {
        return Err(ConstructionError::Parameter("one bijection per vertex required".into()));
    }
    if x.edges.iter().any(|(a, b)| a == b) {
        return Err(ConstructionError::Parameter("loops are not supported".into()));
    }
    let s = l.dim(1);
    let mut problems = Vec::new();
    for v in 0..x.num_vertices {
        let inc = x.incident(v);
        if inc.len() != s {
            problems.push(format!("vertex {v} has degree {}, local code has {s} bits", inc.len()));
            continue;
        }
        let mut img = sys.phi[v].clone();
        img.sort_unstable();
        if img != inc {
            problems.push(format!("φ_{v} is not a bijection onto the edges at {v}"));
        }
    }
    if !problems.is_empty() {
        return Err(ConstructionError::Hypotheses(problems));
    }
    let n0 = l.dim(0);
    let dl = l.coboundary(0).expect("two-term").column_supports();
    let mut d = BitMatrix::zeros(x.edges.len(), x.num_vertices * n0);
    for v in 0..x.num_vertices {
        for (c, supp) in dl.iter().enumerate() {
            for &b in supp {
                d.flip(sys.phi[v][b], v * n0 + c);
            }
        }
    }
    let checks = (0..x.num_vertices)
        .flat_map(|v| (0..n0).map(move |c| (v, c)))
        .map(|(v, c)| BasisLabel::atom(format!("v{v}.{}", l.label(0, c))))
        .collect();
    let bits = (0..x.edges.len()).map(|k| BasisLabel::atom(format!("e{k}"))).collect();
    Ok(BasedComplex::two_term(checks, bits, d)?)
}

/// Pre-orientation from a partition `L_1 = L_in ⊎ L_out` of the local bits:
/// `in(v ⊗ c) = φ_v(δ_L(c) ∩ L_in)`, `out(v ⊗ c) = φ_v(δ_L(c) ∩ L_out)`.
///
/// # Errors
/// Itemized hypothesis failures: `φ_v(L_in)` must be incoming at `v`,
/// `φ_v(L_out)` outgoing, and the local pre-orientation must satisfy the
/// `Λ = 2` conditions.
pub fn ss_preorientation_lambda2(
    x: &OrientedGraph,
    sys: &LocalSystem,
    local_in: &[bool],
) -> Result<PreOrientation, ConstructionError> {
    let l = &sys.local;
    let s = l.dim(1);
    if local_in.len() != s {
        return Err(ConstructionError::Parameter("partition must cover every local bit".into()));
    }
    let mut problems = Vec::new();
    for v in 0..x.num_vertices {
        for (b, &is_in) in local_in.iter().enumerate() {
            let (tail, head) = x.edges[sys.phi[v][b]];
            if is_in && head != v {
                problems.push(format!("φ_{v}(bit {b}) in L_in is not incoming at {v}"));
            }
            if !is_in && tail != v {
                problems.push(format!("φ_{v}(bit {b}) in L_out is not outgoing at {v}"));
            }
        }
    }
    let dl = l.coboundary(0).expect("two-term").column_supports();
    let local_parts: Vec<Partition> = dl
        .iter()
        .map(|supp| {
            let (i, o): (Vec<usize>, Vec<usize>) = supp.iter().partition(|&&b| local_in[b]);
            Partition::new(i, o, Vec::new())
        })
        .collect();
    let local_cup = CupStructure::new(l.clone(), PreOrientation::new(local_parts.clone()))?;
    if let Err(v) = lambda2_conditions(&local_cup) {
        problems.push(format!("local code fails Λ=2 conditions at {:?}: {}", v.tuple, v.condition));
    }
    if !problems.is_empty() {
        return Err(ConstructionError::Hypotheses(problems));
    }
    Ok(lift(x.num_vertices, sys, &local_parts))
}

fn lift(num_vertices: usize, sys: &LocalSystem, local_parts: &[Partition]) -> PreOrientation {
    let mut parts = Vec::with_capacity(num_vertices * local_parts.len());
    for v in 0..num_vertices {
        let phi = &sys.phi[v];
        for p in local_parts {
            let m = |s: &[usize]| s.iter().map(|&b| phi[b]).collect::<Vec<_>>();
            parts.push(Partition::new(m(&p.incoming), m(&p.outgoing), m(&p.free)));
        }
    }
    PreOrientation::new(parts)
}

/// Pre-orientation for all `Λ ≥ 2`: `in(v ⊗ ĉ)` is the edge labeled `t̂` at
/// `v`, `out(v ⊗ ĉ)` the edge labeled `t̂⁻¹`, everything else free.
///
/// Requires `φ(δ_L(ĉ)) ⊇ {t̂, t̂⁻¹}` and `φ(δ_L(c)) ∩ {t̂, t̂⁻¹} = ∅` for every
/// other local check `c`.
///
/// # Errors
/// Itemized hypothesis failures.
pub fn ss_preorientation_lambda3(
    cay: &CayleyGraph,
    sys: &LocalSystem,
    labels: &[usize],
    c_hat: usize,
    t_hat: usize,
) -> Result<PreOrientation, ConstructionError> {
    let l = &sys.local;
    let s = cay.generators.len() / 2;
    let Some(k) = cay.generators[..s].iter().position(|&x| x == t_hat) else {
        return Err(ConstructionError::Hypotheses(vec!["t̂ is not in T".into()]));
    };
    let (pos_t, pos_ti) = (k, s + k);
    let bit_of = |pos: usize| labels.iter().position(|&p| p == pos).expect("bijective labels");
    let (b_t, b_ti) = (bit_of(pos_t), bit_of(pos_ti));
    let dl = l.coboundary(0).expect("two-term").column_supports();
    if c_hat >= dl.len() {
        return Err(ConstructionError::Parameter(format!("no local check {c_hat}")));
    }
    let mut problems = Vec::new();
    if !(dl[c_hat].contains(&b_t) && dl[c_hat].contains(&b_ti)) {
        problems.push("δ_L(ĉ) does not contain both t̂ and t̂⁻¹".to_string());
    }
    for (c, supp) in dl.iter().enumerate() {
        if c != c_hat && (supp.contains(&b_t) || supp.contains(&b_ti)) {
            problems.push(format!("local check {c} touches t̂ or t̂⁻¹"));
        }
    }
    if !problems.is_empty() {
        return Err(ConstructionError::Hypotheses(problems));
    }
    let local_parts: Vec<Partition> = dl
        .iter()
        .enumerate()
        .map(|(c, supp)| {
            if c == c_hat {
                let free = supp.iter().copied().filter(|&b| b != b_t && b != b_ti).collect();
                Partition::new(vec![b_t], vec![b_ti], free)
            } else {
                Partition::all_free(supp.clone())
            }
        })
        .collect();
    Ok(lift(cay.graph.num_vertices, sys, &local_parts))
}

/// Outcome of each item of the nontriviality statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsWitnessReport {
    /// `e_v ∪ c̲ = e_v`, `c̲ ∪ e'_v = e'_v`, `c̲ ∪ c̲ = c̲`, and no other
    /// mixed-degree basis product is nonzero.
    pub cup_identities: bool,
    /// `δ(c̲) = 0`.
    pub c_is_cocycle: bool,
    /// Every `e_v` and `e'_v` is outside `im δ`.
    pub edges_nontrivial: bool,
    /// `∫ e_v ∪ c̲ ∪ … ∪ c̲` for `Λ = 1, 2, …`.
    pub integrals: Vec<(usize, bool)>,
}

impl SsWitnessReport {
    #[must_use]
    pub fn all_hold(&self) -> bool {
        self.cup_identities && self.c_is_cocycle && self.edges_nontrivial && self.integrals.iter().all(|(_, v)| *v)
    }
}

/// Checks the four nontriviality items on a code built with
/// [`ss_preorientation_lambda3`] and a full local check `ĉ`.
#[must_use]
pub fn ss_nontriviality_witness(
    cs: &CupStructure,
    cay: &CayleyGraph,
    n_local_checks: usize,
    c_hat: usize,
    t_hat: usize,
    max_lambda: usize,
) -> SsWitnessReport {
    let s = cay.generators.len() / 2;
    let k = cay.generators[..s].iter().position(|&x| x == t_hat).unwrap_or(0);
    let n = cay.graph.num_vertices;
    let hat = |v: usize| v * n_local_checks + c_hat;
    let e: Vec<usize> = (0..n).map(|v| cay.edge_at[v][k]).collect();
    let e_prime: Vec<usize> = (0..n).map(|v| cay.edge_at[v][s + k]).collect();
    let mut c_bar = BitVector::zeros(cs.num_checks());
    for v in 0..n {
        c_bar.set(hat(v), true);
    }
    let c_bar = Cochain::new(0, c_bar);
    let unit_bit = |x: usize| Cochain::new(1, BitVector::unit(cs.num_bits(), x));

    let mut ok = cs.cup(&c_bar, &c_bar).is_ok_and(|r| r == c_bar);
    for v in 0..n {
        ok &= cs.cup(&unit_bit(e[v]), &c_bar).is_ok_and(|r| r == unit_bit(e[v]));
        ok &= cs.cup(&c_bar, &unit_bit(e_prime[v])).is_ok_and(|r| r == unit_bit(e_prime[v]));
    }
    for a in 0..cs.num_checks() {
        for x in 0..cs.num_bits() {
            let hat_check = a % n_local_checks == c_hat;
            if cs.cup_cell(Cell::check(a), Cell::bit(x)).is_some() && !(hat_check && e_prime.contains(&x)) {
                ok = false;
            }
            if cs.cup_cell(Cell::bit(x), Cell::check(a)).is_some() && !(hat_check && e.contains(&x)) {
                ok = false;
            }
        }
    }

    let c_is_cocycle = cs.coboundary_of(&c_bar).values.is_zero();

    let boundaries = Echelon::from_vectors(cs.num_bits(), &cs.complex().coboundary_basis(1).unwrap_or_default());
    let edges_nontrivial = e
        .iter()
        .chain(&e_prime)
        .all(|&x| !boundaries.contains(&BitVector::unit(cs.num_bits(), x)));

    let integrals = (1..=max_lambda)
        .map(|lam| {
            let mut args = vec![unit_bit(e[0])];
            args.extend(std::iter::repeat_n(c_bar.clone(), lam - 1));
            let v = cs
                .lambda_cup(&args)
                .ok()
                .and_then(|r| cs.integral1(&r).ok())
                .unwrap_or(false);
            (lam, v)
        })
        .collect();
    SsWitnessReport {
        cup_identities: ok,
        c_is_cocycle,
        edges_nontrivial,
        integrals,
    }
}

/// Toy instance: `Cay(Z_6, {x, x²})` with local bits labeled
/// `x, x², x⁻¹, x⁻²`, a full check `ĉ`, optionally a second check on the
/// `x^{±2}` bits, and `t̂ = x`.
#[derive(Clone, Debug)]
pub struct SsToy {
    pub cayley: CayleyGraph,
    pub system: LocalSystem,
    pub labels: Vec<usize>,
    pub c_hat: usize,
    pub t_hat: usize,
    pub structure: CupStructure,
}

/// # Errors
/// Never for the bundled instance.
pub fn ss_toy(second_check: bool) -> Result<SsToy, ConstructionError> {
    let g = AbelianGroup::cyclic(6);
    let cay = cayley_graph(&g, &[g.generator(0), g.element(&[2])])?;
    let labels = vec![0, 1, 2, 3];
    let mut checks = vec![BasisLabel::atom("chat")];
    let mut cols = vec![BitVector::from_support(4, &[0, 1, 2, 3])];
    if second_check {
        checks.push(BasisLabel::atom("c2"));
        cols.push(BitVector::from_support(4, &[1, 3]));
    }
    let local = BasedComplex::two_term(
        checks,
        ["x", "x^2", "x^-1", "x^-2"].iter().map(|s| BasisLabel::atom(*s)).collect(),
        BitMatrix::from_columns(4, &cols),
    )?;
    let system = cay.local_system(local, &labels)?;
    let t_hat = g.generator(0);
    let o = ss_preorientation_lambda3(&cay, &system, &labels, 0, t_hat)?;
    let complex = sipser_spielman(&cay.graph, &system)?;
    let structure = CupStructure::new(complex, o)?;
    Ok(SsToy {
        cayley: cay,
        system,
        labels,
        c_hat: 0,
        t_hat,
        structure,
    })
}

/// `Λ`-fold tensor power of a classical code as a quantum code.
///
/// # Errors
/// If `Λ = 0`.
pub fn tensor_power(cs: &CupStructure, lambda: usize) -> Result<CupCode<TensorComplex>, ConstructionError> {
    if lambda == 0 {
        return Err(ConstructionError::Parameter("Λ must be positive".into()));
    }
    CupCode::new(TensorComplex::new(vec![cs.clone(); lambda])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::{check_integrated_leibniz, check_nonoverlap};

    #[test]
    fn full_parity_local_code_gives_graph_code() {
        let g = AbelianGroup::cyclic(8);
        let cay = cayley_graph(&g, &[1, 2]).unwrap();
        let local = BasedComplex::two_term(
            vec![BasisLabel::atom("c")],
            (0..4).map(|i| BasisLabel::atom(format!("l{i}"))).collect(),
            BitMatrix::from_strs(&["1", "1", "1", "1"]),
        )
        .unwrap();
        let sys = cay.local_system(local, &[0, 1, 2, 3]).unwrap();
        let c = sipser_spielman(&cay.graph, &sys).unwrap();
        assert!(c.validate().is_ok());
        for v in 0..8 {
            let col = c.coboundary(0).unwrap().column(v).support();
            assert_eq!(col, cay.graph.incident(v));
        }
    }

    #[test]
    fn cycle_with_two_bit_local_code() {
        let g = AbelianGroup::cyclic(5);
        let cay = cayley_graph(&g, &[1]).unwrap();
        let local = BasedComplex::two_term(
            vec![BasisLabel::atom("c")],
            vec![BasisLabel::atom("a"), BasisLabel::atom("b")],
            BitMatrix::from_strs(&["1", "1"]),
        )
        .unwrap();
        let sys = cay.local_system(local, &[0, 1]).unwrap();
        let c = sipser_spielman(&cay.graph, &sys).unwrap();
        assert_eq!(c.betti(1).unwrap(), 1);
        assert_eq!(c.betti(0).unwrap(), 1);
    }

    #[test]
    fn lambda2_example() {
        let toy = ss_toy(true).unwrap();
        // L_in = the T⁻¹ bits, which are incoming edges
        let o = ss_preorientation_lambda2(&toy.cayley.graph, &toy.system, &[false, false, true, true]).unwrap();
        let cs = CupStructure::new(toy.structure.complex().clone(), o).unwrap();
        assert!(check_integrated_leibniz(&cs, 2).is_ok());
        let bad = ss_preorientation_lambda2(&toy.cayley.graph, &toy.system, &[true, false, true, false]);
        assert!(matches!(bad, Err(ConstructionError::Hypotheses(_))));
    }

    #[test]
    fn lambda3_preorientation() {
        for second in [false, true] {
            let toy = ss_toy(second).unwrap();
            assert!(check_nonoverlap(&toy.structure).is_ok());
            for lam in 2..=4 {
                assert!(check_integrated_leibniz(&toy.structure, lam).is_ok());
            }
            let r = ss_nontriviality_witness(&toy.structure, &toy.cayley, if second { 2 } else { 1 }, 0, toy.t_hat, 4);
            assert!(r.all_hold(), "{r:?}");
        }
    }

    #[test]
    fn lambda3_hypothesis_violation() {
        let g = AbelianGroup::cyclic(6);
        let cay = cayley_graph(&g, &[1, 2]).unwrap();
        let local = BasedComplex::two_term(
            vec![BasisLabel::atom("a"), BasisLabel::atom("b")],
            (0..4).map(|i| BasisLabel::atom(format!("l{i}"))).collect(),
            BitMatrix::from_columns(4, &[BitVector::from_support(4, &[0, 2, 1]), BitVector::from_support(4, &[0, 3])]),
        )
        .unwrap();
        let sys = cay.local_system(local, &[0, 1, 2, 3]).unwrap();
        let r = ss_preorientation_lambda3(&cay, &sys, &[0, 1, 2, 3], 0, 1);
        assert!(matches!(r, Err(ConstructionError::Hypotheses(_))));
    }
}
