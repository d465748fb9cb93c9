//! A parameter sweep through the command-line front end, written as CSV.
//!
//!     cargo run --release --example entropy_sweep -- sweep.csv

use matching_entropy::cli::main_with_args;

fn main() {
    let out = std::env::args().nth(1);
    let mut args = vec!["matching", "sweep", "--range", "-1/2,1", "--samples", "25"];
    if let Some(path) = out.as_deref() {
        args.extend(["--out", path]);
    }
    let code = main_with_args(args, &mut std::io::stdout());
    std::process::exit(code as i32);
}
