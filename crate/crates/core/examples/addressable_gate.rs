//! Fixing one copy to an X-logical addresses a gate on the remaining copies.

use cupforge::constructions::torus_code;
use cupforge::gates::{address_gate, logical_action, psi_polynomial};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = torus_code(3, 3)?;
    let p = psi_polynomial(&t.algebra, 3)?;
    let basis: Vec<_> = t.algebra.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
    let cocycles = t.algebra.complex().cocycle_basis(1)?;
    for (i, gamma) in basis.iter().enumerate() {
        let q = address_gate(&p, 0, gamma);
        let a = logical_action(&q, &t.code.x_checks, &[basis.clone(), basis.clone()], &cocycles)?;
        let terms: Vec<String> = a.terms.iter().map(|t| format!("CZ({}, {})", t[0], t[1])).collect();
        println!("copy 1 = logical {i}: {} physical CZs -> {}", q.monomials.len(), terms.join(" "));
    }
    let stab = t.code.x_checks.row(0);
    let q = address_gate(&p, 0, &stab);
    let a = logical_action(&q, &t.code.x_checks, &[basis.clone(), basis], &cocycles)?;
    println!("copy 1 = X stabilizer: {} physical CZs -> {} logical terms", q.monomials.len(), a.terms.len());
    Ok(())
}
