//! Parameters where the orbits never match are exactly those in the
//! bifurcation set. Checks this for every p/q below a bound.
//!
//!     cargo run --release --example bifurcation_set -- 60

use matching_entropy::dynamics::{bifurcation_member, detect_matching, Membership, SlopeSpec};
use matching_entropy::exact::{rat, FieldElement};

fn main() {
    let qmax: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(60);
    let slope = SlopeSpec::integer(2);
    let (mut members, mut total, mut bad) = (Vec::new(), 0, 0);
    for q in 2..=qmax {
        for p in 1..q {
            if num_integer::gcd(p, q) != 1 || 3 * p >= 2 * q {
                continue;
            }
            let g = rat(p, q);
            total += 1;
            let member = bifurcation_member(2, &g).unwrap() == Membership::Member;
            let matched = detect_matching(&slope, &FieldElement::Rational(g.clone()), 2000).is_ok();
            if member == matched {
                bad += 1;
                println!("disagreement at {g}");
            }
            if member {
                members.push(g.to_string());
            }
        }
    }
    println!("{total} parameters in (0, 2/3), {} in the bifurcation set, {bad} disagreements", members.len());
    println!("members: {}", members.join(" "));
}
