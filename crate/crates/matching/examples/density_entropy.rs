//! Exact invariant density and metric entropy at a single parameter.
//!
//!     cargo run --example density_entropy -- 7/10

use matching_entropy::dynamics::{SlopeSpec, DEFAULT_BUDGET};
use matching_entropy::spectral::{metric_entropy, transition_matrices};

fn main() {
    let slope = SlopeSpec::integer(2);
    let arg = std::env::args().nth(1).unwrap_or_else(|| "7/10".into());
    let gamma = slope.parse_value(&arg).expect("a rational parameter");

    let (part, dp, h) = metric_entropy(&slope, &gamma, DEFAULT_BUDGET).expect("density");
    let td = transition_matrices(&slope, &gamma, &part).unwrap();
    let masses = dp.masses(&part);
    println!("gamma = {gamma}, {} atoms", part.len());
    for i in 0..part.len() {
        let (a, b) = part.atom(i);
        let row: Vec<String> = td.pi[i].iter().map(|x| x.to_string()).collect();
        println!("  [{a}, {b}]  density {}  mass {}  Pi row [{}]", dp.values[i], masses[i], row.join(" "));
    }
    println!("h_mu = {} log 2 = {:.12}", h.coeff.unwrap(), h.value);
}
