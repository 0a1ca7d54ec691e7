//! The [[144, 8, 12]] bivariate bicycle code and its logical CZ.

use cupforge::constructions::bb_example;
use cupforge::gates::{circuit_depth_certificate, logical_action, psi_polynomial, synth_circuit, verify_invariance};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = bb_example()?;
    let d = b.code.distance_exhaustive(5);
    let upper = b.code.distance_upper_bound(200, 7).map(|(w, _)| w);
    println!("n = {}, k = {}, distance in [{}, {:?}]", b.code.n, b.code.k, d.lower(), upper);

    let p = psi_polynomial(&b.algebra, 2)?;
    let c = synth_circuit(&p);
    let cert = circuit_depth_certificate(&c);
    println!("{} CZ gates, depth {} (bound {})", c.gates.len(), cert.depth, cert.bound);

    let cocycles = b.algebra.complex().cocycle_basis(1)?;
    let r = verify_invariance(&p, &b.code.x_checks, &b.code.x_logicals, &cocycles, 200, 1)?;
    println!("invariant on {} basis tuples and {} cocycle tuples", r.basis_tuples, r.cocycle_tuples);
    let basis = b.code.x_logicals.clone();
    let a = logical_action(&p, &b.code.x_checks, &[basis.clone(), basis], &cocycles)?;
    println!("logical action: {} CZ terms, level {}", a.terms.len(), a.level);
    for t in &a.terms {
        println!("  CZ(1:{}, 2:{})", t[0], t[1]);
    }
    Ok(())
}
