//! Matching for the non-integer slope 1 + sqrt(5): grid search finds
//! certificates whose intervals have endpoints in Q(sqrt 5).
//!
//!     cargo run --release --example quadratic_slope

use matching_entropy::dynamics::{grid_search, SlopeSpec, DEFAULT_BUDGET};
use matching_entropy::exact::rat;

fn main() {
    let slope = SlopeSpec::parse("quad:1+1*sqrt(5)").unwrap();
    let found = grid_search(&slope, &rat(0, 1), &rat(3, 4), 200, DEFAULT_BUDGET);
    for (g, c) in &found {
        println!(
            "({}, {})  kappa ({}, {})  Delta {:>3}  found at {g}",
            c.lo, c.hi, c.kappa_minus, c.kappa_plus, c.delta
        );
    }
    println!("{} distinct intervals", found.len());
}
