// Runs every identity check at one order and prints a line per suite.
//
// cargo run --release --example verify_identities -- 10

use krichever::cli::{run_suite, Suite};

pub fn main() {
    let order: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let reports = run_suite(Suite::All, order, None);
    for r in &reports {
        println!("{}", r.to_text());
    }
    if reports.iter().any(|r| !r.pass) {
        std::process::exit(1);
    }
}
