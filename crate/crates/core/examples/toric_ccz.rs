//! Transversal CCZ on three copies of the 3D toric code, with constant depth.

use cupforge::constructions::torus_code;
use cupforge::gates::{circuit_depth_certificate, logical_action, psi_polynomial, synth_circuit};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for l in 2..=4 {
        let t = torus_code(3, l)?;
        let p = psi_polynomial(&t.algebra, 3)?;
        let c = synth_circuit(&p);
        let cert = circuit_depth_certificate(&c);
        let basis: Vec<_> = t.algebra.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
        let cocycles = t.algebra.complex().cocycle_basis(1)?;
        let a = logical_action(&p, &t.code.x_checks, &vec![basis; 3], &cocycles)?;
        println!(
            "L = {l}: n = {}, k = {}, {} CCZ gates, depth {} (bound {}), {} logical CCZ terms, level {}",
            t.code.n,
            t.code.k,
            c.gates.len(),
            cert.depth,
            cert.bound,
            a.terms.len(),
            a.level
        );
    }
    Ok(())
}
