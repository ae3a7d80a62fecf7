// Prints the psi, kappa, kappa^{-1} and Krichever-Hoehn tables.
//
// cargo run --example genus_tables -- 5

use krichever::genus;

pub fn main() {
    let order: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for table in [
        genus::psi_table(order),
        genus::kappa_table(order),
        genus::kappa_inverse_table(order),
        genus::phi_kh_table(order),
    ] {
        print!("{}", table.to_text());
        println!();
    }
}
