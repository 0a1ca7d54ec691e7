use cupforge::constructions::{bb_example, repetition_circle, torus_code};
use cupforge::f2linalg::BitVector;
use cupforge::gates::{
    address_gate, circuit_depth_certificate, hierarchy_level, logical_action, psi_eval, psi_polynomial,
    synth_circuit, verify_invariance,
};
use cupforge::orientation::{Cochain, CupStructure, Partition};
use cupforge::products::{CupAlgebra, TensorComplex};
use proptest::prelude::*;

fn kunneth(t: &TensorComplex) -> Vec<BitVector> {
    t.kunneth_h1_basis().unwrap().into_iter().map(|(_, c)| c.values).collect()
}

fn bits(n: usize, seed: &[bool]) -> BitVector {
    BitVector::from_bools(&(0..n).map(|i| seed[i % seed.len()] ^ (i % 3 == 0 && seed[0])).collect::<Vec<_>>())
}

#[test]
fn circuit_phase_matches_psi_exhaustively_on_small_torus() {
    let t = torus_code(2, 2).unwrap();
    let p = psi_polynomial(&t.algebra, 2).unwrap();
    let c = synth_circuit(&p);
    let n = t.code.n;
    assert!(2 * n <= 20);
    for state in 0u32..(1 << (2 * n)) {
        let a = BitVector::from_bools(&(0..n).map(|i| state >> i & 1 == 1).collect::<Vec<_>>());
        let b = BitVector::from_bools(&(0..n).map(|i| state >> (n + i) & 1 == 1).collect::<Vec<_>>());
        let direct = psi_eval(&t.algebra, &[Cochain::new(1, a.clone()), Cochain::new(1, b.clone())]).unwrap();
        assert_eq!(c.phase(&[a, b]), direct, "state {state:#x}");
    }
}

#[test]
fn tori_are_invariant() {
    for (lam, l) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let t = torus_code(lam, l).unwrap();
        let p = psi_polynomial(&t.algebra, lam).unwrap();
        let coc = t.algebra.complex().cocycle_basis(1).unwrap();
        let r = verify_invariance(&p, &t.code.x_checks, &kunneth(&t.algebra), &coc, 200, 1).unwrap();
        assert!(r.basis_tuples > 0);
    }
}

#[test]
fn bivariate_bicycle_is_invariant() {
    let b = bb_example().unwrap();
    let p = psi_polynomial(&b.algebra, 2).unwrap();
    let coc = b.algebra.complex().cocycle_basis(1).unwrap();
    let r = verify_invariance(&p, &b.code.x_checks, &b.code.x_logicals, &coc, 200, 1).unwrap();
    assert!(r.cocycles_exhaustive);
}

#[test]
fn swapped_orientation_gives_counterexample() {
    let circle = repetition_circle(3).unwrap();
    let mut o = circle.orientation().clone();
    let p0 = o.parts[1].clone();
    o.parts[1] = Partition::new(p0.outgoing, p0.incoming, p0.free);
    let bad = CupStructure::new(circle.complex().clone(), o).unwrap();
    let t = TensorComplex::new(vec![bad, circle]).unwrap();
    let code = cupforge::css::CssCode::from_complex(t.complex()).unwrap();
    let p = psi_polynomial(&t, 2).unwrap();
    let coc = t.complex().cocycle_basis(1).unwrap();
    let err = verify_invariance(&p, &code.x_checks, &code.x_logicals, &coc, 200, 1).unwrap_err();
    assert!(err.slot < 2);
    let err = logical_action(&p, &code.x_checks, &vec![code.x_logicals.clone(); 2], &coc);
    assert!(err.is_err());
}

#[test]
fn x_logical_addresses_a_cz_between_the_other_copies() {
    let t = torus_code(3, 2).unwrap();
    let p = psi_polynomial(&t.algebra, 3).unwrap();
    let basis = kunneth(&t.algebra);
    let coc = t.algebra.complex().cocycle_basis(1).unwrap();
    for (k, gamma) in basis.iter().enumerate() {
        let q = address_gate(&p, 0, gamma);
        assert_eq!(q.copies, vec![1, 2]);
        let a = logical_action(&q, &t.code.x_checks, &vec![basis.clone(); 2], &coc).unwrap();
        assert_eq!(a.level, 2);
        let mut others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
        let mut want = vec![others.clone()];
        others.reverse();
        want.push(others);
        want.sort();
        assert_eq!(a.terms, want);
    }
}

#[test]
fn x_stabilizer_addresses_a_trivial_gate() {
    let t = torus_code(2, 3).unwrap();
    let p = psi_polynomial(&t.algebra, 2).unwrap();
    let coc = t.algebra.complex().cocycle_basis(1).unwrap();
    let basis = kunneth(&t.algebra);
    for v in 0..t.algebra.complex().dim(0) {
        let gamma = t.code.x_checks.row(v);
        let q = address_gate(&p, 0, &gamma);
        assert_eq!(q.lambda(), 1);
        let a = logical_action(&q, &t.code.x_checks, std::slice::from_ref(&basis), &coc).unwrap();
        assert!(a.terms.is_empty(), "vertex {v}");
        assert_eq!(hierarchy_level(&a), 0);
    }
}

#[test]
fn depth_within_bound() {
    for (lam, l) in [(2, 5), (3, 4)] {
        let t = torus_code(lam, l).unwrap();
        let c = synth_circuit(&psi_polynomial(&t.algebra, lam).unwrap());
        let cert = circuit_depth_certificate(&c);
        assert!(cert.depth <= cert.bound);
        let mut seen = 0;
        for layer in &cert.layers {
            let mut used = std::collections::BTreeSet::new();
            for &g in layer {
                for x in &c.gates[g] {
                    assert!(used.insert(*x), "qubit reused in a layer");
                }
            }
            seen += layer.len();
        }
        assert_eq!(seen, c.gates.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_matches_direct_evaluation(
        l in 2usize..=4,
        lam in 2usize..=3,
        seeds in prop::collection::vec(prop::collection::vec(any::<bool>(), 1..40), 3),
    ) {
        let l = if lam == 3 { l.min(3) } else { l };
        let t = torus_code(lam, l).unwrap();
        let p = psi_polynomial(&t.algebra, lam).unwrap();
        let n = t.code.n;
        let args: Vec<BitVector> = seeds.iter().take(lam).map(|s| bits(n, s)).collect();
        let cochains: Vec<Cochain> = args.iter().map(|a| Cochain::new(1, a.clone())).collect();
        prop_assert_eq!(p.eval(&args), psi_eval(&t.algebra, &cochains).unwrap());
    }

    #[test]
    fn action_independent_of_representatives(
        l in 2usize..=4,
        shifts in prop::collection::vec(prop::collection::vec(any::<bool>(), 1..40), 2),
    ) {
        let t = torus_code(2, l).unwrap();
        let p = psi_polynomial(&t.algebra, 2).unwrap();
        let coc = t.algebra.complex().cocycle_basis(1).unwrap();
        let basis = kunneth(&t.algebra);
        let base = logical_action(&p, &t.code.x_checks, &[basis.clone(), basis.clone()], &coc).unwrap();
        let moved: Vec<BitVector> = basis
            .iter()
            .zip(&shifts)
            .map(|(g, s)| {
                let a = bits(t.algebra.complex().dim(0), s);
                g.xor(&t.algebra.complex().apply(0, &a))
            })
            .collect();
        let a = logical_action(&p, &t.code.x_checks, &[moved.clone(), moved], &coc).unwrap();
        prop_assert_eq!(a.level, base.level);
        prop_assert_eq!(a.terms, base.terms);
    }

    #[test]
    fn addressing_removes_one_copy(
        k in 0usize..3,
        seed in prop::collection::vec(any::<bool>(), 1..30),
    ) {
        let t = torus_code(3, 2).unwrap();
        let p = psi_polynomial(&t.algebra, 3).unwrap();
        let gamma = bits(t.code.n, &seed);
        prop_assume!(!gamma.is_zero());
        let q = address_gate(&p, k, &gamma);
        prop_assert_eq!(q.lambda(), 2);
        prop_assert!(!q.copies.contains(&k));
        for m in &q.monomials {
            prop_assert_eq!(m.len(), 2);
        }
    }
}
