// Reverts x - x^2 over ℚ and checks the result against its composition inverse.
//
// cargo run --example series_reversion -- 8

use std::sync::Arc;

use krichever::{Poly, Series1, VarTable};

pub fn main() {
    let order: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let vars = Arc::new(VarTable::new(Vec::<(String, u32)>::new()).expect("empty table"));
    let f = Series1::from_fn(vars.clone(), order, |k| match k {
        1 => Poly::one(),
        2 => Poly::from_int(-1),
        _ => Poly::zero(),
    });
    let g = f.revert().expect("x - x^2 is a strict isomorphism");
    let coeffs: Vec<String> = g.coeffs().iter().map(|c| c.to_text(&vars)).collect();
    println!("revert(x - x^2) = [{}]", coeffs.join(", "));
    assert_eq!(g, f.revert_newton().expect("strict"));
    assert_eq!(f.compose(&g).expect("same table"), Series1::x(vars.clone(), order));
    println!("Newton reversion agrees and f(g(x)) = x through x^{order}");
}
