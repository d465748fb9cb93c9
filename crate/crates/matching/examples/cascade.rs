//! Period-doubling cascade below a matching interval: each child interval
//! abuts its parent on the left and is neutral.
//!
//!     cargo run --example cascade -- 5/16

use matching_entropy::exact::parse_rational;
use matching_entropy::symbolic::{cascade, interval_from_pseudocenter};

fn main() {
    let xi = parse_rational(&std::env::args().nth(1).unwrap_or_else(|| "1/2".into())).unwrap();
    let seed = interval_from_pseudocenter(2, &xi).expect("a pseudocenter");
    println!("seed {}  w = {}  ({}, {})  Delta {}", seed.xi, seed.w, seed.xi_l, seed.xi_r, seed.delta);
    for (n, c) in cascade(2, &xi, 4).unwrap().iter().enumerate() {
        println!("gen {}: |w| = {:>3}  ({}, {})  Delta {}", n + 1, c.w.len(), c.xi_l, c.xi_r, c.delta);
    }
}
