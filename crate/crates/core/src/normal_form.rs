//! Hermite and Smith normal forms over ℤ with exact big-integer pivoting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `(g, s, t)` with `g = gcd(a, b) ≥ 0` and `s·a + t·b = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn first_nonzero(v: &[BigInt], limit: usize) -> Option<usize> {
    v[..limit].iter().position(|x| !x.is_zero())
}

fn axpy(v: &mut [BigInt], q: &BigInt, b: &[BigInt]) {
    // v -= q * b
    for (x, y) in v.iter_mut().zip(b) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Column-echelon basis of a lattice, built by inserting generators one at a time.
///
/// Vectors may carry trailing bookkeeping entries beyond `pivot_len`; pivots are only
/// searched in the first `pivot_len` entries and every operation is unimodular.
#[derive(Debug, Clone)]
pub struct Echelon {
    pivot_len: usize,
    // slots[p] holds the basis vector whose first nonzero entry is at p
    slots: Vec<Option<Vec<BigInt>>>,
    kernel: Vec<Vec<BigInt>>,
}

impl Echelon {
    pub fn new(pivot_len: usize) -> Self {
        Echelon { pivot_len, slots: vec![None; pivot_len], kernel: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        loop {
            let Some(p) = first_nonzero(&v, self.pivot_len) else {
                if v.len() > self.pivot_len {
                    self.kernel.push(v);
                }
                return;
            };
            match &mut self.slots[p] {
                slot @ None => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    *slot = Some(v);
                    self.reduce_slot(p);
                    return;
                }
                Some(b) => {
                    if (&v[p] % &b[p]).is_zero() {
                        let q = &v[p] / &b[p];
                        axpy(&mut v, &q, b);
                    } else {
                        let (g, s, t) = extended_gcd(&b[p], &v[p]);
                        let bp = &b[p] / &g;
                        let vp = &v[p] / &g;
                        let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &s * x + &t * y).collect();
                        let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &bp * y - &vp * x).collect();
                        *b = new_b;
                        v = new_v;
                        self.reduce_slot(p);
                    }
                }
            }
        }
    }

    // keeps the entries of slot `p` below its pivot reduced, which bounds coefficient growth
    fn reduce_slot(&mut self, p: usize) {
        let mut b = self.slots[p].take().expect("filled slot");
        for q in p + 1..self.pivot_len {
            if let Some(c) = &self.slots[q] {
                if !b[q].is_zero() {
                    let k = b[q].div_floor(&c[q]);
                    if !k.is_zero() {
                        axpy(&mut b, &k, c);
                    }
                }
            }
        }
        self.slots[p] = Some(b);
    }

    /// Reduces each basis vector against the later pivots so the result is the unique HNF.
    pub fn reduce(&mut self) {
        let pivots: Vec<usize> = (0..self.pivot_len).filter(|&p| self.slots[p].is_some()).collect();
        for (k, &p) in pivots.iter().enumerate() {
            let pivot_vec = self.slots[p].clone().expect("pivot");
            let d = pivot_vec[p].clone();
            for &earlier in &pivots[..k] {
                let b = self.slots[earlier].as_mut().expect("pivot");
                let q = b[p].div_floor(&d);
                if !q.is_zero() {
                    axpy(b, &q, &pivot_vec);
                }
            }
        }
    }

    /// Basis vectors ordered by pivot position.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.slots.iter().flatten().cloned().collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.pivot_len).filter(|&p| self.slots[p].is_some()).collect()
    }

    /// Vectors whose first `pivot_len` entries were reduced to zero.
    pub fn kernel(&self) -> &[Vec<BigInt>] {
        &self.kernel
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v: Vec<BigInt> = v[..self.pivot_len].to_vec();
        let mut coords = Vec::new();
        for b in self.slots.iter().flatten() {
            let p = first_nonzero(b, self.pivot_len).expect("basis vectors are nonzero");
            let (q, r) = v[p].div_rem(&b[p]);
            if !r.is_zero() {
                return None;
            }
            axpy(&mut v, &q, &b[..self.pivot_len]);
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `U` unimodular and `M·U = H`.
///
/// `H` is lower echelon: column `k` has its first nonzero entry, which is positive,
/// in a row strictly below that of column `k − 1`; entries to the left of a pivot
/// lie in `[0, pivot)`; zero columns come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut ech = Echelon::new(r);
    for j in 0..c {
        let mut v = m.column(j);
        v.extend((0..c).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
        ech.insert(v);
    }
    ech.reduce();
    let mut cols = ech.basis();
    cols.extend(ech.kernel().iter().cloned());
    debug_assert_eq!(cols.len(), c);
    let mut h = IntMatrix::zeros(r, c);
    let mut u = IntMatrix::zeros(c, c);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..r {
            h[(i, j)] = col[i].clone();
        }
        for i in 0..c {
            u[(i, j)] = col[r + i].clone();
        }
    }
    (h, u)
}

/// HNF of the column span only, without the transform.
pub fn hnf_basis(rows: usize, generators: impl IntoIterator<Item = Vec<BigInt>>) -> Echelon {
    let mut ech = Echelon::new(rows);
    for g in generators {
        ech.insert(g);
    }
    ech.reduce();
    ech
}

/// Invariant factors of the cokernel `ℤ^rows / (column span)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantFactors {
    /// The nonzero Smith diagonal `d_1 | d_2 | …`, units included.
    pub factors: Vec<BigInt>,
    /// `rows − rank`.
    pub free_rank: usize,
}

impl InvariantFactors {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion().is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion().len() <= 1
    }

    /// Exponent of a finite group (the largest invariant factor); `None` if infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion().last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Order of a finite group; `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion().iter().product())
    }

    pub fn is_divisibility_chain(&self) -> bool {
        self.factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()) && self.factors.iter().all(|d| d.is_positive())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion().iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Smith normal form diagonal of `m`.
pub fn snf(m: &IntMatrix) -> InvariantFactors {
    let rows = m.rows();
    // shrink to a basis of the column span first; the cokernel is unchanged
    let ech = hnf_basis(rows, m.columns());
    let basis = ech.basis();
    let mut a = IntMatrix::from_columns(rows, &basis);
    let factors = smith_diagonal(&mut a);
    InvariantFactors { free_rank: rows - factors.len(), factors }
}

fn smith_diagonal(a: &mut IntMatrix) -> Vec<BigInt> {
    let (r, c) = (a.rows(), a.cols());
    let mut diag = Vec::new();
    for t in 0..r.min(c) {
        let Some((pi, pj)) = min_abs_entry(a, t) else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                for j in t..c {
                    let delta = &q * &a[(t, j)];
                    a[(i, j)] -= delta;
                }
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                for i in t..r {
                    let delta = &q * &a[(i, t)];
                    a[(i, j)] -= delta;
                }
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // row and column t are clear; enforce d_t | every remaining entry
                let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..c {
                            let v = a[(i, j)].clone();
                            a[(t, j)] += v;
                        }
                    }
                }
            }
            let (pi, pj) = min_abs_entry(a, t).expect("pivot row is nonzero");
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
        }
        diag.push(a[(t, t)].abs());
    }
    diag
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
