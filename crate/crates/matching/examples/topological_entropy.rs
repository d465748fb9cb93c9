//! Topological entropy from the Markov partition against the metric entropy
//! at the same parameters.
//!
//!     cargo run --release --example topological_entropy

use matching_entropy::dynamics::{SlopeSpec, DEFAULT_BUDGET};
use matching_entropy::exact::FieldElement;
use matching_entropy::spectral::{metric_entropy, topological_entropy_markov};

fn main() {
    let slope = SlopeSpec::integer(2);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    println!("log phi = {:.15}", phi.ln());
    for (p, q) in [(1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (5, 7), (3, 4)] {
        let g = FieldElement::ratio(p, q);
        let ht = topological_entropy_markov(&slope, &g, DEFAULT_BUDGET);
        let hm = metric_entropy(&slope, &g, DEFAULT_BUDGET).map(|(_, _, h)| h.value);
        match (ht, hm) {
            (Ok(t), Ok(m)) => println!("gamma {g:>5}: h_top {:.15}  h_mu {:.15}", t.value, m),
            (t, m) => println!("gamma {g:>5}: {t:?} {m:?}"),
        }
    }
}
