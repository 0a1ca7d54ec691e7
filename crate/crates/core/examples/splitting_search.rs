//! Enumerates splittings of a group-algebra check polynomial.

use cupforge::constructions::{search_splittings, search_splittings_lambda};
use cupforge::group::AbelianGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = AbelianGroup::cyclic(6);
    for text in ["x + x^5 + x^2 + x^4", "1 + x + x^5", "x + x^5"] {
        let c = g.parse_polynomial(text)?;
        println!("c = {text}");
        for s in search_splittings(&g, &c) {
            println!("  {}", s.render(&g));
        }
        for lambda in 2..=3 {
            println!("  Λ = {lambda}: {} splittings", search_splittings_lambda(&g, &c, lambda).len());
        }
    }
    Ok(())
}
