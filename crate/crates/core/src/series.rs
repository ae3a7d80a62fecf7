//! Truncated univariate power series with polynomial coefficients.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::poly::{Poly, Rational, VarTable};

/// `c_0 + c_1 x + … + c_N x^N + O(x^{N+1})` with coefficients in `ℚ[vars]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series1 {
    vars: Arc<VarTable>,
    coeffs: Vec<Poly>,
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(AlgebraError::VarTableMismatch)
    }
}

impl Series1 {
    /// Builds a series of the given order; missing coefficients are zero, extra ones are dropped.
    pub fn new(vars: Arc<VarTable>, order: usize, mut coeffs: Vec<Poly>) -> Self {
        coeffs.resize(order + 1, Poly::zero());
        Series1 { vars, coeffs }
    }

    pub fn from_fn(vars: Arc<VarTable>, order: usize, f: impl FnMut(usize) -> Poly) -> Self {
        Series1 { vars, coeffs: (0..=order).map(f).collect() }
    }

    pub fn zero(vars: Arc<VarTable>, order: usize) -> Self {
        Series1::new(vars, order, Vec::new())
    }

    pub fn one(vars: Arc<VarTable>, order: usize) -> Self {
        Series1::new(vars, order, vec![Poly::one()])
    }

    /// The identity series `x`.
    pub fn x(vars: Arc<VarTable>, order: usize) -> Self {
        Series1::new(vars, order, vec![Poly::zero(), Poly::one()])
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, p: Poly) {
        self.coeffs[k] = p;
    }

    pub fn truncate(&self, order: usize) -> Series1 {
        let order = order.min(self.order());
        Series1 { vars: self.vars.clone(), coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Applies `f` to each coefficient and rehomes the result in `vars`.
    pub fn map_coeffs(&self, vars: Arc<VarTable>, f: impl FnMut(&Poly) -> Poly) -> Series1 {
        Series1 { vars, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map_coeffs(
        &self,
        vars: Arc<VarTable>,
        f: impl FnMut(&Poly) -> Result<Poly>,
    ) -> Result<Series1> {
        Ok(Series1 { vars, coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn add(&self, other: &Series1) -> Result<Series1> {
        same_table(&self.vars, &other.vars)?;
        let n = self.order().min(other.order());
        Ok(Series1::from_fn(self.vars.clone(), n, |k| &self.coeffs[k] + &other.coeffs[k]))
    }

    pub fn sub(&self, other: &Series1) -> Result<Series1> {
        same_table(&self.vars, &other.vars)?;
        let n = self.order().min(other.order());
        Ok(Series1::from_fn(self.vars.clone(), n, |k| &self.coeffs[k] - &other.coeffs[k]))
    }

    pub fn neg(&self) -> Series1 {
        self.map_coeffs(self.vars.clone(), |c| -c)
    }

    pub fn scale(&self, p: &Poly) -> Series1 {
        self.map_coeffs(self.vars.clone(), |c| c * p)
    }

    pub fn scale_rational(&self, q: &Rational) -> Series1 {
        self.map_coeffs(self.vars.clone(), |c| c.scale(q))
    }

    /// Truncated product; the result has the smaller of the two orders.
    pub fn mul(&self, other: &Series1) -> Result<Series1> {
        same_table(&self.vars, &other.vars)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Series1) -> Series1 {
        let n = self.order().min(other.order());
        let mut out = vec![Poly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Series1 { vars: self.vars.clone(), coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Series1 {
        let mut acc = Series1::one(self.vars.clone(), self.order());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    fn require_unit_constant(&self) -> Result<()> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(AlgebraError::NonUnitConstant)
        }
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn reciprocal(&self) -> Result<Series1> {
        self.require_unit_constant()?;
        let n = self.order();
        let mut g: Vec<Poly> = Vec::with_capacity(n + 1);
        g.push(Poly::one());
        for k in 1..=n {
            let mut acc = Poly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc -= &(&self.coeffs[j] * &g[k - j]);
                }
            }
            g.push(acc);
        }
        Ok(Series1 { vars: self.vars.clone(), coeffs: g })
    }

    /// `self^alpha` for a series with constant term 1, from the recurrence
    /// implied by `f·g' = alpha·f'·g`.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Series1> {
        self.require_unit_constant()?;
        let n = self.order();
        let mut g: Vec<Poly> = Vec::with_capacity(n + 1);
        g.push(Poly::one());
        for k in 1..=n {
            let mut acc = Poly::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = alpha * Rational::from_integer(BigInt::from(j))
                    - Rational::from_integer(BigInt::from(k - j));
                if !w.is_zero() {
                    acc += &(&self.coeffs[j] * &g[k - j]).scale(&w);
                }
            }
            g.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
        }
        Ok(Series1 { vars: self.vars.clone(), coeffs: g })
    }

    pub fn inv_sqrt(&self) -> Result<Series1> {
        self.pow_rational(&Rational::new(BigInt::from(-1), BigInt::from(2)))
    }

    /// `self ∘ inner`; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Series1) -> Result<Series1> {
        same_table(&self.vars, &inner.vars)?;
        if !inner.coeffs[0].is_zero() {
            return Err(AlgebraError::NonzeroConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series1::new(self.vars.clone(), n, vec![self.coeffs[n].clone()]);
        for k in (0..n).rev() {
            acc = acc.mul_unchecked(&inner);
            let c = &acc.coeffs[0] + &self.coeffs[k];
            acc.coeffs[0] = c;
        }
        Ok(acc)
    }

    fn require_strict(&self) -> Result<()> {
        if self.order() >= 1 && self.coeffs[0].is_zero() && self.coeffs[1].is_one() {
            Ok(())
        } else {
            Err(AlgebraError::NotStrictIsomorphism)
        }
    }

    /// Compositional inverse of `x + O(x^2)` by solving for one coefficient at a time.
    ///
    /// With `g = x + g_2 x^2 + …`, the coefficient of `x^k` in `f(g)` is `g_k` plus
    /// terms in `g_2 … g_{k-1}` only, so each `g_k` is read off from powers of the
    /// partial inverse, which are themselves extended one coefficient per step.
    pub fn revert(&self) -> Result<Series1> {
        self.require_strict()?;
        let n = self.order();
        let mut g = vec![Poly::zero(); n + 1];
        g[1] = Poly::one();
        // powers[m][k] = [x^k] g^m, for m >= 2
        let mut powers = vec![vec![Poly::zero(); n + 1]; n + 1];
        for k in 2..=n {
            for m in 2..=k {
                let mut acc = Poly::zero();
                for j in 1..=(k + 1 - m) {
                    let prev = if m == 2 { &g[k - j] } else { &powers[m - 1][k - j] };
                    if !g[j].is_zero() && !prev.is_zero() {
                        acc += &(&g[j] * prev);
                    }
                }
                powers[m][k] = acc;
            }
            let mut gk = Poly::zero();
            for m in 2..=k {
                if !self.coeffs[m].is_zero() {
                    gk -= &(&self.coeffs[m] * &powers[m][k]);
                }
            }
            g[k] = gk;
        }
        Ok(Series1 { vars: self.vars.clone(), coeffs: g })
    }

    /// Compositional inverse by Newton iteration `g ← g − (f(g) − x)/f'(g)`.
    /// Produces the same exact series as [`Series1::revert`].
    pub fn revert_newton(&self) -> Result<Series1> {
        self.require_strict()?;
        let n = self.order();
        let x = Series1::x(self.vars.clone(), n);
        let fprime = self.derivative();
        let mut g = x.clone();
        let mut precision = 1usize;
        while precision < n {
            precision = (2 * precision).min(n);
            let gp = g.truncate(precision);
            let residual = self.truncate(precision).compose(&gp)?.sub(&x.truncate(precision))?;
            // f' is one order short; the residual vanishes through x^2, so the
            // missing top coefficient of 1/f'(g) never reaches x^precision.
            let slope = fprime.truncate(precision).compose(&gp)?.reciprocal()?;
            let slope = Series1::new(self.vars.clone(), precision, slope.coeffs);
            let step = residual.mul(&slope)?;
            g = Series1::new(self.vars.clone(), n, gp.sub(&step)?.coeffs);
        }
        Ok(g)
    }

    /// Term-wise derivative, one order shorter.
    pub fn derivative(&self) -> Series1 {
        let n = self.order();
        if n == 0 {
            return Series1::zero(self.vars.clone(), 0);
        }
        Series1::from_fn(self.vars.clone(), n - 1, |k| {
            self.coeffs[k + 1].scale(&Rational::from_integer(BigInt::from(k + 1)))
        })
    }

    /// Antiderivative with zero constant term, one order longer.
    pub fn integral(&self) -> Series1 {
        let n = self.order();
        Series1::from_fn(self.vars.clone(), n + 1, |k| {
            if k == 0 {
                Poly::zero()
            } else {
                self.coeffs[k - 1].scale(&Rational::new(BigInt::one(), BigInt::from(k)))
            }
        })
    }

    /// Multiplies by `x`, one order longer.
    pub fn mul_x(&self) -> Series1 {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Poly::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series1 { vars: self.vars.clone(), coeffs }
    }

    /// Divides by `x`, one order shorter; the constant term must vanish.
    pub fn div_x(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::NonzeroConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Series1::zero(self.vars.clone(), 0));
        }
        Ok(Series1 { vars: self.vars.clone(), coeffs: self.coeffs[1..].to_vec() })
    }

    /// Lowest index where the two series differ, comparing up to the shorter order.
    pub fn first_difference(&self, other: &Series1) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    /// Whether the coefficient of `x^k` is homogeneous of weight `k + shift` for every `k`
    /// (coefficients that would need a negative weight must vanish).
    pub fn is_graded(&self, shift: i64) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| {
            let w = k as i64 + shift;
            if w < 0 {
                c.is_zero()
            } else {
                c.is_homogeneous_of(w as u32, &self.vars)
            }
        })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Poly::is_integral)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn cp(n: usize) -> Arc<VarTable> {
        Arc::new(VarTable::indexed("CP", n))
    }

    fn ints(vars: &Arc<VarTable>, order: usize, cs: &[i64]) -> Series1 {
        Series1::new(vars.clone(), order, cs.iter().map(|&c| Poly::from_int(c)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let t = cp(1);
        let a = ints(&t, 2, &[1, 1]);
        let b = ints(&t, 2, &[1, -1]);
        assert_eq!(a.mul(&b).unwrap(), ints(&t, 2, &[1, 0, -1]));
        assert_eq!(a.mul(&Series1::one(t.clone(), 2)).unwrap(), a);
    }

    #[test]
    fn product_truncates_cubic_remainder() {
        let t = Arc::new(VarTable::indexed("p", 1));
        let p1 = Poly::var(0);
        let a = Series1::new(t.clone(), 2, vec![Poly::one(), p1.clone()]);
        let b = Series1::new(t.clone(), 2, vec![Poly::one(), -&p1, p1.pow(2)]);
        assert_eq!(a.mul(&b).unwrap(), Series1::one(t, 2));
    }

    #[test]
    fn mismatched_tables() {
        let a = Series1::one(cp(2), 3);
        let b = Series1::one(Arc::new(VarTable::indexed("p", 2)), 3);
        assert_eq!(a.mul(&b), Err(AlgebraError::VarTableMismatch));
        assert_eq!(a.compose(&Series1::x(cp(3), 3)), Err(AlgebraError::VarTableMismatch));
    }

    #[test]
    fn reciprocal_examples() {
        let t = cp(2);
        assert_eq!(ints(&t, 4, &[1, 1]).reciprocal().unwrap(), ints(&t, 4, &[1, -1, 1, -1, 1]));
        assert_eq!(Series1::one(t.clone(), 3).reciprocal().unwrap(), Series1::one(t.clone(), 3));
        let f = Series1::new(t.clone(), 2, vec![Poly::one(), Poly::var(0), Poly::var(1)]);
        let g = f.reciprocal().unwrap();
        assert_eq!(g.coeff(1).to_text(&t), "-CP1");
        assert_eq!(g.coeff(2).to_text(&t), "CP1^2 - CP2");
        assert_eq!(f.mul(&g).unwrap(), Series1::one(t.clone(), 2));
        assert_eq!(ints(&t, 2, &[2, 1]).reciprocal(), Err(AlgebraError::NonUnitConstant));
    }

    #[test]
    fn compose_examples() {
        let t = cp(1);
        let f = ints(&t, 4, &[0, 1, 1]);
        assert_eq!(f.compose(&f).unwrap(), ints(&t, 4, &[0, 1, 2, 2, 1]));
        assert_eq!(f.compose(&Series1::x(t.clone(), 4)).unwrap(), f);
        assert_eq!(f.compose(&ints(&t, 4, &[1, 1])), Err(AlgebraError::NonzeroConstant));
    }

    #[test]
    fn revert_examples() {
        let t = cp(1);
        assert_eq!(Series1::x(t.clone(), 5).revert().unwrap(), Series1::x(t.clone(), 5));
        let f = ints(&t, 6, &[0, 1, 1]);
        let g = f.revert().unwrap();
        assert_eq!(g, ints(&t, 6, &[0, 1, -1, 2, -5, 14, -42]));
        assert_eq!(f.compose(&g).unwrap(), Series1::x(t.clone(), 6));
        assert_eq!(g.compose(&f).unwrap(), Series1::x(t.clone(), 6));
        assert_eq!(f.revert_newton().unwrap(), g);
        assert_eq!(ints(&t, 3, &[0, 2, 1]).revert(), Err(AlgebraError::NotStrictIsomorphism));
        assert_eq!(ints(&t, 3, &[1, 1]).revert(), Err(AlgebraError::NotStrictIsomorphism));
    }

    #[test]
    fn inv_sqrt_examples() {
        let t = Arc::new(VarTable::indexed("p", 4));
        assert_eq!(Series1::one(t.clone(), 4).inv_sqrt().unwrap(), Series1::one(t.clone(), 4));
        let f = Series1::new(t.clone(), 3, vec![Poly::one(), Poly::var(0)]);
        let g = f.inv_sqrt().unwrap();
        assert_eq!(g.coeff(1).to_text(&t), "-1/2*p1");
        assert_eq!(g.coeff(2).to_text(&t), "3/8*p1^2");
        assert_eq!(g.coeff(3).to_text(&t), "-5/16*p1^3");
        assert_eq!(g.mul(&g).unwrap().mul(&f).unwrap(), Series1::one(t.clone(), 3));
        assert_eq!(ints(&t, 2, &[0, 1]).inv_sqrt(), Err(AlgebraError::NonUnitConstant));
    }

    #[test]
    fn pow_rational_matches_integer_power() {
        let t = cp(2);
        let f = Series1::new(t.clone(), 5, vec![Poly::one(), Poly::var(0), Poly::var(1)]);
        assert_eq!(f.pow_rational(&rat(3, 1)).unwrap(), f.pow(3));
        assert_eq!(f.pow_rational(&rat(-1, 1)).unwrap(), f.reciprocal().unwrap());
    }

    #[test]
    fn derivative_and_integral() {
        let t = cp(1);
        assert_eq!(ints(&t, 3, &[0, 0, 1]).derivative(), ints(&t, 2, &[0, 2]));
        assert_eq!(ints(&t, 3, &[7]).derivative(), Series1::zero(t.clone(), 2));
        let f = ints(&t, 3, &[1, 2, 3, 4]);
        assert_eq!(f.integral().derivative(), f);
    }
}
