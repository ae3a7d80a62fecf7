//! Truncated bivariate power series, `Σ c_ij x^i y^j` over `i + j ≤ N`.

use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::poly::{Poly, Rational, VarTable};
use crate::series::{same_table, Series1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series2 {
    vars: Arc<VarTable>,
    order: usize,
    // rows[i][j] = c_ij, rows[i].len() == order - i + 1
    rows: Vec<Vec<Poly>>,
}

impl Series2 {
    pub fn zero(vars: Arc<VarTable>, order: usize) -> Self {
        let rows = (0..=order).map(|i| vec![Poly::zero(); order - i + 1]).collect();
        Series2 { vars, order, rows }
    }

    pub fn one(vars: Arc<VarTable>, order: usize) -> Self {
        let mut s = Series2::zero(vars, order);
        s.rows[0][0] = Poly::one();
        s
    }

    pub fn from_fn(vars: Arc<VarTable>, order: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let rows = (0..=order).map(|i| (0..=order - i).map(|j| f(i, j)).collect()).collect();
        Series2 { vars, order, rows }
    }

    /// Embeds `f(x)`.
    pub fn from_x(f: &Series1) -> Self {
        Series2::from_fn(f.vars().clone(), f.order(), |i, j| if j == 0 { f.coeff(i).clone() } else { Poly::zero() })
    }

    /// Embeds `f(y)`.
    pub fn from_y(f: &Series1) -> Self {
        Series2::from_fn(f.vars().clone(), f.order(), |i, j| if i == 0 { f.coeff(j).clone() } else { Poly::zero() })
    }

    /// The monomial `c·x^a y^b`, truncated at `order`.
    pub fn monomial(vars: Arc<VarTable>, order: usize, a: usize, b: usize, c: Poly) -> Self {
        let mut s = Series2::zero(vars, order);
        if a + b <= order {
            s.rows[a][b] = c;
        }
        s
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, p: Poly) {
        self.rows[i][j] = p;
    }

    /// All `(i, j, c_ij)` by total degree, then by decreasing power of `x`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Poly)> + '_ {
        (0..=self.order).flat_map(move |d| (0..=d).rev().map(move |i| (i, d - i, &self.rows[i][d - i])))
    }

    /// Raises the order, filling the new coefficients with zero. Only sound when the
    /// caller knows those coefficients cannot contribute, e.g. a product of two
    /// series without constant term padded by one degree.
    pub fn pad(&self, order: usize) -> Series2 {
        Series2::from_fn(self.vars.clone(), order.max(self.order), |i, j| {
            if i + j <= self.order {
                self.rows[i][j].clone()
            } else {
                Poly::zero()
            }
        })
    }

    pub fn truncate(&self, order: usize) -> Series2 {
        let order = order.min(self.order);
        Series2::from_fn(self.vars.clone(), order, |i, j| self.rows[i][j].clone())
    }

    pub fn map_coeffs(&self, vars: Arc<VarTable>, mut f: impl FnMut(&Poly) -> Poly) -> Series2 {
        Series2::from_fn(vars, self.order, |i, j| f(&self.rows[i][j]))
    }

    pub fn add(&self, other: &Series2) -> Result<Series2> {
        same_table(&self.vars, &other.vars)?;
        let n = self.order.min(other.order);
        Ok(Series2::from_fn(self.vars.clone(), n, |i, j| &self.rows[i][j] + &other.rows[i][j]))
    }

    pub fn sub(&self, other: &Series2) -> Result<Series2> {
        same_table(&self.vars, &other.vars)?;
        let n = self.order.min(other.order);
        Ok(Series2::from_fn(self.vars.clone(), n, |i, j| &self.rows[i][j] - &other.rows[i][j]))
    }

    pub fn neg(&self) -> Series2 {
        self.map_coeffs(self.vars.clone(), |c| -c)
    }

    pub fn scale(&self, p: &Poly) -> Series2 {
        self.map_coeffs(self.vars.clone(), |c| c * p)
    }

    pub fn scale_rational(&self, q: &Rational) -> Series2 {
        self.map_coeffs(self.vars.clone(), |c| c.scale(q))
    }

    pub fn mul(&self, other: &Series2) -> Result<Series2> {
        same_table(&self.vars, &other.vars)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Series2) -> Series2 {
        let n = self.order.min(other.order);
        let mut out = Series2::zero(self.vars.clone(), n);
        for (i1, j1, a) in self.iter() {
            if a.is_zero() || i1 + j1 > n {
                continue;
            }
            let rest = n - i1 - j1;
            for (i2, j2, b) in other.iter() {
                if i2 + j2 > rest {
                    break;
                }
                if !b.is_zero() {
                    out.rows[i1 + i2][j1 + j2] += &(a * b);
                }
            }
        }
        out
    }

    /// Multiplies by `x^a y^b`, keeping the order.
    pub fn shift(&self, a: usize, b: usize) -> Series2 {
        Series2::from_fn(self.vars.clone(), self.order, |i, j| {
            if i >= a && j >= b {
                self.rows[i - a][j - b].clone()
            } else {
                Poly::zero()
            }
        })
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> Series2 {
        Series2::from_fn(self.vars.clone(), self.order, |i, j| self.rows[j][i].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.swap() == *self
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.swap() == self.neg()
    }

    /// `∂/∂y` evaluated at `y = 0`, i.e. `Σ_i c_{i1} x^i`, of order `N − 1`.
    pub fn d_dy_at_zero(&self) -> Series1 {
        let n = self.order.saturating_sub(1);
        Series1::from_fn(self.vars.clone(), n, |i| {
            if self.order == 0 {
                Poly::zero()
            } else {
                self.rows[i][1].clone()
            }
        })
    }

    /// `Σ_i c_{i0} x^i`.
    pub fn at_y_zero(&self) -> Series1 {
        Series1::from_fn(self.vars.clone(), self.order, |i| self.rows[i][0].clone())
    }

    /// Outer composition `f(self(x, y))`; `self` must vanish at the origin.
    pub fn compose_into(&self, f: &Series1) -> Result<Series2> {
        same_table(&self.vars, f.vars())?;
        if !self.rows[0][0].is_zero() {
            return Err(AlgebraError::NonzeroConstant);
        }
        let n = self.order.min(f.order());
        let inner = self.truncate(n);
        let mut acc = Series2::monomial(self.vars.clone(), n, 0, 0, f.coeff(n).clone());
        for k in (0..n).rev() {
            acc = acc.mul_unchecked(&inner);
            let c = &acc.rows[0][0] + f.coeff(k);
            acc.rows[0][0] = c;
        }
        Ok(acc)
    }

    /// Substitution `self(u(x), v(y))`; both `u` and `v` must vanish at 0.
    pub fn compose_pair(&self, u: &Series1, v: &Series1) -> Result<Series2> {
        same_table(&self.vars, u.vars())?;
        same_table(&self.vars, v.vars())?;
        if !u.coeff(0).is_zero() || !v.coeff(0).is_zero() {
            return Err(AlgebraError::NonzeroConstant);
        }
        let n = self.order.min(u.order()).min(v.order());
        let u = u.truncate(n);
        let v = v.truncate(n);
        let mut upow = vec![Series1::one(self.vars.clone(), n)];
        let mut vpow = vec![Series1::one(self.vars.clone(), n)];
        for k in 1..=n {
            upow.push(upow[k - 1].mul(&u)?);
            vpow.push(vpow[k - 1].mul(&v)?);
        }
        let mut out = Series2::zero(self.vars.clone(), n);
        for (i, j, c) in self.iter() {
            if c.is_zero() || i + j > n {
                continue;
            }
            // u^i starts at x^i and v^j at y^j
            for a in i..=n - j {
                let ua = upow[i].coeff(a);
                if ua.is_zero() {
                    continue;
                }
                let cu = c * ua;
                for b in j..=n - a {
                    let vb = vpow[j].coeff(b);
                    if !vb.is_zero() {
                        out.rows[a][b] += &(&cu * vb);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse when the constant term is 1.
    pub fn reciprocal(&self) -> Result<Series2> {
        if !self.rows[0][0].is_one() {
            return Err(AlgebraError::NonUnitConstant);
        }
        let n = self.order;
        let mut out = Series2::zero(self.vars.clone(), n);
        out.rows[0][0] = Poly::one();
        for d in 1..=n {
            for i in 0..=d {
                let j = d - i;
                let mut acc = Poly::zero();
                for a in 0..=i {
                    for b in 0..=j {
                        if a + b == 0 {
                            continue;
                        }
                        let s = &self.rows[a][b];
                        let r = &out.rows[i - a][j - b];
                        if !s.is_zero() && !r.is_zero() {
                            acc -= &(s * r);
                        }
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Exact quotient by `x − y`. Each homogeneous part must vanish on the diagonal;
    /// the quotient has order `N − 1`.
    pub fn div_x_minus_y(&self) -> Result<Series2> {
        let n = self.order;
        if n == 0 {
            return if self.rows[0][0].is_zero() {
                Ok(Series2::zero(self.vars.clone(), 0))
            } else {
                Err(AlgebraError::NotDivisibleByDiagonal)
            };
        }
        let mut out = Series2::zero(self.vars.clone(), n - 1);
        if !self.rows[0][0].is_zero() {
            return Err(AlgebraError::NotDivisibleByDiagonal);
        }
        for d in 1..=n {
            // P_d = (x − y) Q_{d−1}: c_{d,0} = q_{d−1,0}, c_{i,d−i} = q_{i−1,d−i} − q_{i,d−i−1}
            let mut carry = Poly::zero();
            for i in (1..=d).rev() {
                let q = &self.rows[i][d - i] + &carry;
                carry = q.clone();
                out.rows[i - 1][d - i] = q;
            }
            if !(&self.rows[0][d] + &carry).is_zero() {
                return Err(AlgebraError::NotDivisibleByDiagonal);
            }
        }
        Ok(out)
    }

    /// First `(i, j)` in degree order where the series differ.
    pub fn first_difference(&self, other: &Series2) -> Option<(usize, usize)> {
        let n = self.order.min(other.order);
        self.truncate(n)
            .iter()
            .zip(other.truncate(n).iter())
            .find(|((_, _, a), (_, _, b))| a != b)
            .map(|((i, j, _), _)| (i, j))
    }

    /// Whether `c_ij` is homogeneous of weight `i + j + shift` throughout.
    pub fn is_graded(&self, shift: i64) -> bool {
        self.iter().all(|(i, j, c)| {
            let w = (i + j) as i64 + shift;
            if w < 0 {
                c.is_zero()
            } else {
                c.is_homogeneous_of(w as u32, &self.vars)
            }
        })
    }

    pub fn is_integral(&self) -> bool {
        self.iter().all(|(_, _, c)| c.is_integral())
    }

    /// Sum of the coefficients of the degree-`d` part (its value on the diagonal `x = y = 1`).
    pub fn diagonal_sum(&self, d: usize) -> Poly {
        let mut acc = Poly::zero();
        for i in 0..=d {
            acc += &self.rows[i][d - i];
        }
        acc
    }
}

impl Series2 {
    /// Zeroes every coefficient whose position fails `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Series2 {
        Series2::from_fn(self.vars.clone(), self.order, |i, j| {
            if keep(i, j) {
                self.rows[i][j].clone()
            } else {
                Poly::zero()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.iter().all(|(_, _, c)| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VarTable> {
        Arc::new(VarTable::indexed("b", 2))
    }

    fn ints(t: &Arc<VarTable>, order: usize, terms: &[(usize, usize, i64)]) -> Series2 {
        let mut s = Series2::zero(t.clone(), order);
        for &(i, j, c) in terms {
            s.set_coeff(i, j, Poly::from_int(c));
        }
        s
    }

    #[test]
    fn product_and_symmetry() {
        let t = table();
        let a = ints(&t, 3, &[(1, 0, 1), (0, 1, 1)]);
        let b = ints(&t, 3, &[(1, 0, 1), (0, 1, -1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, ints(&t, 3, &[(2, 0, 1), (0, 2, -1)]));
        assert!(p.is_antisymmetric());
        assert!(a.is_symmetric());
    }

    #[test]
    fn division_by_diagonal() {
        let t = table();
        // x^3 - y^3 = (x - y)(x^2 + xy + y^2)
        let p = ints(&t, 4, &[(3, 0, 1), (0, 3, -1)]);
        let q = p.div_x_minus_y().unwrap();
        assert_eq!(q, ints(&t, 3, &[(2, 0, 1), (1, 1, 1), (0, 2, 1)]));
        let r = ints(&t, 3, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(r.div_x_minus_y(), Err(AlgebraError::NotDivisibleByDiagonal));
    }

    #[test]
    fn reciprocal_inverts() {
        let t = table();
        let mut s = ints(&t, 4, &[(0, 0, 1), (1, 0, 2), (1, 1, -3)]);
        s.set_coeff(0, 2, Poly::var(1));
        let r = s.reciprocal().unwrap();
        assert_eq!(s.mul(&r).unwrap(), Series2::one(t.clone(), 4));
        assert!(ints(&t, 2, &[(1, 0, 1)]).reciprocal().is_err());
    }

    #[test]
    fn compositions() {
        let t = table();
        // f(u) = u + u^2 applied to x + y
        let f = Series1::new(t.clone(), 3, vec![Poly::zero(), Poly::one(), Poly::one()]);
        let s = ints(&t, 3, &[(1, 0, 1), (0, 1, 1)]);
        let fs = s.compose_into(&f).unwrap();
        assert_eq!(fs, ints(&t, 3, &[(1, 0, 1), (0, 1, 1), (2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        // (x + y)(u, v) with u = x + x^2, v = y
        let u = f.clone();
        let v = Series1::x(t.clone(), 3);
        let g = s.compose_pair(&u, &v).unwrap();
        assert_eq!(g, ints(&t, 3, &[(1, 0, 1), (2, 0, 1), (0, 1, 1)]));
        assert_eq!(s.d_dy_at_zero().coeff(0), &Poly::one());
    }
}
