//! Matching intervals generated by a few pseudocenters, with their words.
//!
//!     cargo run --example pseudocenter_table

use matching_entropy::exact::rat;
use matching_entropy::symbolic::{interval_from_pseudocenter, is_pseudocenter, PseudocenterCheck};

fn main() {
    println!("{:>8}  {:>10} {:>10}  {:>10} {:>10}  delta", "xi", "w", "v", "xiL", "xiR");
    for (p, q) in [(1, 2), (1, 4), (3, 8), (5, 16), (7, 16), (9, 32), (13, 64)] {
        let xi = rat(p, q);
        if let PseudocenterCheck::No(k) = is_pseudocenter(2, &xi).unwrap() {
            println!("{xi:>8}  not a pseudocenter (g^{k} falls below it)");
            continue;
        }
        let r = interval_from_pseudocenter(2, &xi).unwrap();
        println!("{:>8}  {:>10} {:>10}  {:>10} {:>10}  {}", r.xi, r.w.to_string(), r.v.to_string(), r.xi_l, r.xi_r, r.delta);
    }
}
