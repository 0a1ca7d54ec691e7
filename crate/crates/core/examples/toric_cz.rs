//! Transversal CZ between two copies of the 2D toric code.

use cupforge::constructions::torus_code;
use cupforge::gates::{circuit_depth_certificate, logical_action, psi_polynomial, synth_circuit};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    let t = torus_code(2, l)?;
    let p = psi_polynomial(&t.algebra, 2)?;
    let c = synth_circuit(&p);
    let cert = circuit_depth_certificate(&c);
    println!("n = {}, k = {}", t.code.n, t.code.k);
    println!("{} CZ gates, depth {} (bound {})", c.gates.len(), cert.depth, cert.bound);

    let basis: Vec<_> = t.algebra.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
    let cocycles = t.algebra.complex().cocycle_basis(1)?;
    let a = logical_action(&p, &t.code.x_checks, &[basis.clone(), basis], &cocycles)?;
    println!("logical action (level {}):", a.level);
    for term in &a.terms {
        println!("  CZ(1:{}, 2:{})", term[0], term[1]);
    }
    print!("{}", c.to_text(t.algebra.complex().labels(1)).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n  ...");
    Ok(())
}
