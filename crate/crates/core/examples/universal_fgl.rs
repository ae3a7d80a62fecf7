// Builds the universal law over ℤ[b] and lists the low coefficients a_ij and A_ij.
//
// cargo run --example universal_fgl -- 6

use krichever::fgl;

pub fn main() {
    let weight: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let data = fgl::build_with_a(weight);
    let vars = data.vars().clone();
    println!("weight {weight}, integral: {}", fgl::is_integral(&data));
    for s in 2..=weight.min(4) + 1 {
        for i in 1..=s / 2 {
            println!("a_{i}{} = {}", s - i, data.a_coeff(i, s - i).to_text(&vars));
        }
    }
    for s in 7..=weight + 2 {
        for i in 3..=(s - 1) / 2 {
            println!("A_{i}{} = {}", s - i, data.big_a(i, s - i).to_text(&vars));
        }
    }
}
