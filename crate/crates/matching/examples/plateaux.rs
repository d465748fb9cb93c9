//! Candidate plateaux of the metric entropy: runs of neutral matching
//! intervals, snapped to tuning windows.
//!
//!     cargo run --release --example plateaux -- 9

use matching_entropy::exact::rat;
use matching_entropy::windows::plateau_scan;

fn main() {
    let depth: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    let found = plateau_scan(2, &rat(0, 1), &rat(2, 3), depth, 1).unwrap();
    for p in &found {
        let seed = p.seed.as_ref().map(|s| s.to_string()).unwrap_or_default();
        println!("[{}, {}]  {}  depth {}  {seed}", p.lo, p.hi, p.kind, p.depth);
    }
    println!("{} candidates at depth {depth}", found.len());
}
