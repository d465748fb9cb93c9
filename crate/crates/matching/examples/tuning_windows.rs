//! The tuning window of a matching interval and the pseudocenters inside
//! it, generated from exponent sequences.
//!
//!     cargo run --example tuning_windows

use matching_entropy::exact::rat;
use matching_entropy::symbolic::{interval_from_pseudocenter, is_pseudocenter};
use matching_entropy::windows::{check_cyclic_minimal, tuning_index, tuning_window, window_pseudocenter_word};

fn main() {
    let seed = interval_from_pseudocenter(2, &rat(1, 2)).unwrap();
    let win = tuning_window(&seed);
    println!("seed {}: window [{}, {}]", seed.xi, win.xi_t, win.xi_r);
    for n in [vec![1, 0], vec![2, 0], vec![2, 1], vec![1, 2], vec![3, 1, 2, 1], vec![2, 1, 2, 1]] {
        if let Err(e) = check_cyclic_minimal(&n) {
            println!("{n:?}: {e}");
            continue;
        }
        let word = window_pseudocenter_word(&seed, &n).unwrap();
        let xi = word.value();
        println!(
            "{n:?}: {word} = {xi}, index {}, pseudocenter {:?}, inside {}",
            tuning_index(&seed, &n).unwrap(),
            is_pseudocenter(2, &xi).unwrap(),
            win.contains(&xi)
        );
    }
}
