//! Anisotropic lineon code: the logical CZ action in the Künneth and dual bases.

use cupforge::constructions::anisotropic_lineon;
use cupforge::gates::{dual_bases, logical_action, psi_polynomial};
use cupforge::products::CupAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for l in 2..=4 {
        let t = anisotropic_lineon(l)?;
        let p = psi_polynomial(&t.algebra, 2)?;
        let basis: Vec<_> = t.algebra.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
        let cocycles = t.algebra.complex().cocycle_basis(1)?;
        let plain = logical_action(&p, &t.code.x_checks, &[basis.clone(), basis.clone()], &cocycles)?;
        let (b1, b2) = dual_bases(&p, &basis);
        let dual = logical_action(&p, &t.code.x_checks, &[b1, b2], &cocycles)?;
        println!(
            "L = {l}: n = {}, k = {}, Künneth basis {} terms, dual basis {} terms",
            t.code.n,
            t.code.k,
            plain.terms.len(),
            dual.terms.len()
        );
    }
    Ok(())
}
