// Graded quotients of the Lazard ring by the ideal of the A_ij with i, j >= 3.
//
// cargo run --release --example lazard_quotient -- 13

use krichever::lazard::{quotient_reports, DEFAULT_CEILING};

pub fn main() {
    let max_weight: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let reports = match quotient_reports(max_weight, DEFAULT_CEILING) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    for r in &reports {
        println!("{}", r.to_text());
    }
}
