//! Follow both one-sided orbits of the discontinuity until they meet, and
//! read off the interval on which the same matching holds.
//!
//!     cargo run --example detect_matching -- 7/10 -1/5 1/3

use matching_entropy::dynamics::{detect_matching, prematching_points, SlopeSpec, DEFAULT_BUDGET};

fn main() {
    let slope = SlopeSpec::integer(2);
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["7/10", "-1/5", "1/2", "1/3"].map(String::from).to_vec();
    }
    for a in &args {
        let gamma = slope.parse_value(a).expect("a rational parameter");
        match detect_matching(&slope, &gamma, DEFAULT_BUDGET) {
            Ok(c) => {
                println!(
                    "gamma = {gamma}: match after ({}, {}) steps, Delta = {}, interval ({}, {})",
                    c.kappa_minus,
                    c.kappa_plus,
                    c.delta,
                    c.lo,
                    c.hi
                );
                let pm = prematching_points(&c, &gamma);
                let pts: Vec<String> = pm.points.iter().map(|f| f.to_string()).collect();
                println!("    prematching points: {}", pts.join(", "));
            }
            Err(e) => println!("gamma = {gamma}: {e}"),
        }
    }
}
