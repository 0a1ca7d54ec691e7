//! Code parameters for the bundled constructions.

use cupforge::constructions::{anisotropic_lineon, plaquette_ising, tensor_power, torus_code};
use cupforge::css::classical_parameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (lam, l) in [(2, 3), (2, 4), (3, 2), (3, 3)] {
        let t = torus_code(lam, l)?;
        println!("torus Λ={lam} L={l}: {}", t.code.parameters(6));
    }
    let p = plaquette_ising(3)?;
    println!("plaquette Ising L=3 (classical): {}", classical_parameters(p.complex(), 6));
    println!("plaquette Ising L=3 squared: {}", tensor_power(&p, 2)?.code.parameters(4));
    println!("lineon L=3: {}", anisotropic_lineon(3)?.code.parameters(4));
    Ok(())
}
