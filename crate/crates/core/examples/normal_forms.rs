// Hermite and Smith normal forms of a small integer matrix.

use krichever::normal_form::{hnf, snf, IntMatrix};

pub fn main() {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![6, 8, 0], vec![0, 6, 12]]);
    let (h, u) = hnf(&m);
    assert_eq!(m.mul(&u), h);
    for i in 0..h.rows() {
        let row: Vec<String> = (0..h.cols()).map(|j| h[(i, j)].to_string()).collect();
        println!("[{}]", row.join(", "));
    }
    let s = snf(&m);
    let factors: Vec<String> = s.factors.iter().map(ToString::to_string).collect();
    println!("invariant factors: [{}]", factors.join(", "));
    println!("cokernel: {s}");
}
