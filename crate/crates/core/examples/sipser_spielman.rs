//! Sipser-Spielman code on a Cayley graph of Z6 and its tensor powers.

use cupforge::constructions::{ss_nontriviality_witness, ss_toy, tensor_power};
use cupforge::gates::{hierarchy_level, logical_action, psi_polynomial};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for second in [false, true] {
        let toy = ss_toy(second)?;
        let checks = if second { 2 } else { 1 };
        let w = ss_nontriviality_witness(&toy.structure, &toy.cayley, checks, toy.c_hat, toy.t_hat, 3);
        println!("local checks {checks}: witness {}", if w.all_hold() { "holds" } else { "fails" });
        for lambda in 2..=3 {
            let t = tensor_power(&toy.structure, lambda)?;
            let p = psi_polynomial(&t.algebra, lambda)?;
            let basis: Vec<_> = t.algebra.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
            let cocycles = t.algebra.complex().cocycle_basis(1)?;
            let a = logical_action(&p, &t.code.x_checks, &vec![basis; lambda], &cocycles)?;
            println!(
                "  Λ = {lambda}: n = {}, k = {}, {} terms, level {}",
                t.code.n,
                t.code.k,
                a.terms.len(),
                hierarchy_level(&a)
            );
        }
    }
    Ok(())
}
