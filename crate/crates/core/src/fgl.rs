//! The universal formal group law in the Hurewicz coordinates `ℤ[b_1, b_2, …]`.
//!
//! The law is `F(x, y) = exp_b(log_b(x) + log_b(y))` with
//! `exp_b(x) = x + Σ b_i x^{i+1}`. Its coefficients generate a copy of the Lazard
//! ring inside `ℤ[b]`, so every integrality statement can be checked directly.
//!
//! From `F` we form the invariant differential `ω(x) = ∂F/∂y(x, 0)`,
//! `ω̂(x) = (ω'(x) − ω'(0)) / 2x` and the antisymmetric series
//! `A(x, y) = F(x, y)·(x ω(y) − y ω(x))`, whose coefficients `A_ij` with
//! `i, j ≥ 3` generate the Krichever ideal.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::poly::{Monomial, Poly, Rational, VarTable};
use crate::report::Report;
use crate::series::Series1;
use crate::series2::Series2;

pub const DEFAULT_WEIGHT: usize = 10;

/// The formal group law with the given logarithm, to the order of `log`.
pub fn law_from_logarithm(log: &Series1) -> Result<Series2> {
    let exp = log.revert()?;
    let sum = Series2::from_x(log).add(&Series2::from_y(log))?;
    sum.compose_into(&exp)
}

/// `x·f(y) − y·f(x)`, one order above `f`.
fn cross_difference(f: &Series1) -> Result<Series2> {
    let n = f.order() + 1;
    let fx = Series2::from_x(f).pad(n);
    let fy = Series2::from_y(f).pad(n);
    fy.shift(1, 0).sub(&fx.shift(0, 1))
}

/// `x·f(y) + y·f(x)`, one order above `f`.
fn cross_sum(f: &Series1) -> Result<Series2> {
    let n = f.order() + 1;
    let fx = Series2::from_x(f).pad(n);
    let fy = Series2::from_y(f).pad(n);
    fy.shift(1, 0).add(&fx.shift(0, 1))
}

/// `exp_b` and `log_b` over `ℤ[b_1 … b_W]`, both of order `W + 1`.
#[derive(Debug, Clone)]
pub struct BModel {
    weight: usize,
    vars: Arc<VarTable>,
    exp: Series1,
    log: Series1,
}

impl BModel {
    pub fn new(weight: usize) -> Self {
        let vars = Arc::new(VarTable::indexed("b", weight));
        let exp = Series1::from_fn(vars.clone(), weight + 1, |k| match k {
            0 => Poly::zero(),
            1 => Poly::one(),
            _ => Poly::var(k - 2),
        });
        let log = exp.revert().expect("exp_b is x + O(x^2)");
        BModel { weight, vars, exp, log }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn exp(&self) -> &Series1 {
        &self.exp
    }

    pub fn log(&self) -> &Series1 {
        &self.log
    }

    /// Image of `CP_i` in `ℤ[b]`: `(i+1)·[x^{i+1}] log_b`.
    pub fn cp_image(&self, i: usize) -> Poly {
        self.log.coeff(i + 1).scale(&Rational::from_integer(BigInt::from(i + 1)))
    }
}

/// The universal law with its invariant differential and the series `A(x, y)`.
#[derive(Debug, Clone)]
pub struct FglData {
    pub model: BModel,
    /// `F(x, y)`, order `W + 1`.
    pub f: Series2,
    /// `ω(x) = ∂F/∂y(x, 0)`, order `W`.
    pub omega: Series1,
    /// `(ω'(x) − ω'(0)) / 2x`, order `W − 2`.
    pub omega_hat: Series1,
    /// `F(x, y)(x ω(y) − y ω(x))`, order `W + 2`; empty until [`compute_a`] runs.
    pub a: Option<Series2>,
}

impl FglData {
    pub fn weight(&self) -> usize {
        self.model.weight
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.model.vars
    }

    /// `a_ij = [x^i y^j] F`, weight `i + j − 1`.
    pub fn a_coeff(&self, i: usize, j: usize) -> &Poly {
        self.f.coeff(i, j)
    }

    /// `A_ij`, weight `i + j − 2`. Panics if [`compute_a`] has not run.
    pub fn big_a(&self, i: usize, j: usize) -> &Poly {
        self.a.as_ref().expect("A computed").coeff(i, j)
    }

    /// `ω'(0)`, the coefficient of `x` in `ω`.
    pub fn omega_prime_zero(&self) -> Poly {
        self.omega.coeff(1).clone()
    }
}

/// Builds `F` to total degree `W + 1` and `ω`, cross-checking `ω` against `exp_b'(log_b(x))`.
pub fn build_universal_fgl(weight: usize) -> FglData {
    assert!(weight >= 1, "weight must be positive");
    let model = BModel::new(weight);
    let f = law_from_logarithm(&model.log).expect("log_b is strict");
    let omega = f.d_dy_at_zero();
    let via_chain = model.exp.derivative().compose(&model.log).expect("same table");
    assert_eq!(omega, via_chain.truncate(omega.order()), "∂F/∂y(x,0) must equal exp'(log x)");
    let omega_hat = omega_hat_of(&omega);
    FglData { model, f, omega, omega_hat, a: None }
}

/// `(ω'(x) − ω'(0)) / 2x`.
pub fn omega_hat_of(omega: &Series1) -> Series1 {
    let mut d = omega.derivative();
    d.set_coeff(0, Poly::zero());
    d.div_x()
        .expect("constant term removed")
        .scale_rational(&Rational::new(BigInt::one(), BigInt::from(2)))
}

/// Fills `A(x, y) = F(x, y)(x ω(y) − y ω(x))` to total degree `W + 2`.
pub fn compute_a(mut fgl: FglData) -> FglData {
    let n = fgl.weight() + 2;
    // both factors vanish at the origin, so padding each by one degree is exact
    let g = cross_difference(&fgl.omega).expect("same table").pad(n);
    let a = fgl.f.pad(n).mul(&g).expect("same table");
    assert!(a.is_antisymmetric(), "A(x, y) must be antisymmetric");
    fgl.a = Some(a);
    fgl
}

pub fn build_with_a(weight: usize) -> FglData {
    compute_a(build_universal_fgl(weight))
}

/// Evenness of `ω'(x) − ω'(0)` over `ℤ[b]`, integrality of `ω̂`, and the identity
/// `ω'ω − ω'(0)ω = 2 Σ a_{i2} x^i` coming from `∂²F/∂y²(x, 0)`.
pub fn verify_proposition_i(fgl: &FglData) -> Report {
    const SUITE: &str = "proposition-i";
    let w = fgl.weight();
    let vars = fgl.vars();
    let mut d = fgl.omega.derivative();
    d.set_coeff(0, Poly::zero());
    for (k, c) in d.coeffs().iter().enumerate() {
        if !c.is_divisible_by(2) {
            return Report::failure_text(SUITE, w, format!("omega' - omega'(0): x^{k}"), &c.to_text(vars), "even");
        }
    }
    for (k, c) in fgl.omega_hat.coeffs().iter().enumerate() {
        if !c.is_integral() {
            return Report::failure_text(SUITE, w, format!("omega^: x^{k}"), &c.to_text(vars), "integral");
        }
    }
    let dw = fgl.omega.derivative();
    let lhs = dw
        .mul(&fgl.omega)
        .and_then(|p| p.sub(&fgl.omega.scale(&fgl.omega_prime_zero())))
        .expect("same table");
    let rhs = Series1::from_fn(vars.clone(), lhs.order(), |i| {
        fgl.a_coeff(i, 2).scale(&Rational::from_integer(BigInt::from(2)))
    });
    Report::compare1(SUITE, w, "d2F/dy2(x,0)", &lhs, &rhs, lhs.order())
}

/// The right-hand side `(xω(y) + yω(x) − ω'(0)xy)(xω(y) − yω(x)) + (ω(x)ω̂(x) − ω(y)ω̂(y))x²y²`,
/// to total degree `W + 2`. `with_linear_term = false` drops the `ω'(0)xy` summand.
pub fn proposition_ii_rhs(fgl: &FglData, with_linear_term: bool) -> Series2 {
    let n = fgl.weight() + 2;
    let mut first = cross_sum(&fgl.omega).expect("same table");
    if with_linear_term {
        let xy = Series2::monomial(fgl.vars().clone(), first.order(), 1, 1, fgl.omega_prime_zero());
        first = first.sub(&xy).expect("same table");
    }
    let second = cross_difference(&fgl.omega).expect("same table");
    let prod = first.pad(n).mul(&second.pad(n)).expect("same table");
    let wh = fgl.omega.mul(&fgl.omega_hat).expect("same table");
    let diff = Series2::from_x(&wh).sub(&Series2::from_y(&wh)).expect("same table");
    let tail = diff.pad(n).shift(2, 2);
    prod.add(&tail).expect("same table")
}

/// `A_ij` agrees with the Proposition-ii right-hand side wherever `min(i, j) ≤ 2`.
pub fn verify_proposition_ii(fgl: &FglData) -> Report {
    verify_proposition_ii_against(fgl, &proposition_ii_rhs(fgl, true))
}

pub fn verify_proposition_ii_against(fgl: &FglData, rhs: &Series2) -> Report {
    const SUITE: &str = "proposition-ii";
    let a = fgl.a.as_ref().expect("A computed");
    let low = |i: usize, j: usize| i.min(j) <= 2;
    Report::compare2(SUITE, fgl.weight(), "", &a.restrict(low), &rhs.restrict(low), a.order())
}

/// Numerator of the Krichever form: `(xb(y) + yb(x) − b'(0)xy)(xb(y) − yb(x)) + (b(x)β(x) − b(y)β(y))x²y²`.
pub fn krichever_numerator(b: &Series1, beta: &Series1, order: usize) -> Result<Series2> {
    let b0 = b.coeff(1).clone();
    let first = cross_sum(b)?.sub(&Series2::monomial(b.vars().clone(), b.order() + 1, 1, 1, b0))?;
    let prod = first.pad(order).mul(&cross_difference(b)?.pad(order))?;
    let bb = b.mul(beta)?;
    let tail = Series2::from_x(&bb).sub(&Series2::from_y(&bb))?.pad(order).shift(2, 2);
    prod.add(&tail)
}

/// Numerator of the two-series form `u c(v) + v c(u) − a uv − (d(u) − d(v))/(u c(v) − v c(u)) u²v²`
/// after multiplying through by `u c(v) − v c(u)`.
pub fn two_series_numerator(c: &Series1, d: &Series1, a: &Poly, order: usize) -> Result<Series2> {
    let first = cross_sum(c)?.sub(&Series2::monomial(c.vars().clone(), c.order() + 1, 1, 1, a.clone()))?;
    let prod = first.pad(order).mul(&cross_difference(c)?.pad(order))?;
    let tail = Series2::from_x(d).sub(&Series2::from_y(d))?.pad(order).shift(2, 2);
    prod.sub(&tail)
}

/// `F·(xb(y) − yb(x))` minus the Krichever numerator must be `Σ_{i,j≥3} A_ij x^i y^j`.
/// Also checks that the Krichever quotient is a genuine power series, that the law
/// it defines differs from `F` by exactly the `A_ij` with `i, j ≥ 3`, and that the
/// two-series form with `c = b`, `d = −bβ`, `a = c'(0)` has the same numerator.
pub fn verify_krichever_form(fgl: &FglData) -> Report {
    const SUITE: &str = "krichever-form";
    let w = fgl.weight();
    let n = w + 2;
    let a = fgl.a.as_ref().expect("A computed");
    let b = &fgl.omega;
    let beta = &fgl.omega_hat;

    let q = cross_difference(b).expect("same table");
    let lhs = fgl.f.pad(n).mul(&q.pad(n)).expect("same table");
    let num = krichever_numerator(b, beta, n).expect("same table");
    if !num.is_antisymmetric() {
        return Report::failure_text(SUITE, w, "numerator antisymmetry".into(), "not antisymmetric", "antisymmetric");
    }
    let residual = lhs.sub(&num).expect("same table");
    let high = |i: usize, j: usize| i >= 3 && j >= 3;
    let expected = a.restrict(high);
    let main = Report::compare2(SUITE, w, "residual", &residual, &expected, n);
    if !main.pass {
        return main;
    }

    // c := b, d := −bβ, a := c'(0)
    let d = b.mul(beta).expect("same table").neg();
    let alt = two_series_numerator(b, &d, &b.coeff(1).clone(), n).expect("same table");
    let alt_report = Report::compare2(SUITE, w, "two-series numerator", &alt, &num, n);
    if !alt_report.pass {
        return alt_report;
    }

    // (b(x)β(x) − b(y)β(y)) / (xb(y) − yb(x)) as a power series
    let bb = b.mul(beta).expect("same table");
    let p = Series2::from_x(&bb).sub(&Series2::from_y(&bb)).expect("same table");
    let (p_red, q_red) = match (p.div_x_minus_y(), q.div_x_minus_y()) {
        (Ok(p), Ok(q)) => (p, q),
        _ => {
            return Report::failure_text(SUITE, w, "divisibility by x - y".into(), "not divisible", "divisible");
        }
    };
    let quotient = p_red.mul(&q_red.reciprocal().expect("Q/(x-y) = 1 + ...")).expect("same table");
    let f_kr = cross_sum(b)
        .and_then(|s| s.sub(&Series2::monomial(b.vars().clone(), w + 1, 1, 1, b.coeff(1).clone())))
        .and_then(|s| s.add(&quotient.pad(w + 1).shift(2, 2)))
        .expect("same table");
    let order = f_kr.order().min(fgl.f.order());
    // (F − F_Kr)·Q = Σ_{i,j≥3} A_ij x^i y^j, both sides to total degree `order + 1`
    let gap = fgl.f.truncate(order).sub(&f_kr.truncate(order)).expect("same table");
    let gap_q = gap.pad(order + 1).mul(&q.truncate(order + 1).pad(order + 1)).expect("same table");
    Report::compare2(SUITE, w, "F - F_Kr", &gap_q, &expected.truncate(order + 1), order + 1)
}

/// `F(F(x, y), z) = F(x, F(y, z))` to total degree `degree`, computed in `ℤ[b][x, y, z]`.
pub fn verify_associativity(fgl: &FglData, degree: usize) -> Report {
    const SUITE: &str = "associativity";
    let w = fgl.weight();
    let degree = degree.min(fgl.f.order());
    let nb = fgl.vars().len();
    let (x, y, z) = (nb, nb + 1, nb + 2);
    let series_deg = move |m: &Monomial| (m.exponent(x) + m.exponent(y) + m.exponent(z)) as usize;
    let keep = move |m: &Monomial| series_deg(m) <= degree;

    let eval = |u: &Poly, v: &Poly| -> Poly {
        let mut upow = vec![Poly::one()];
        let mut vpow = vec![Poly::one()];
        for k in 1..=degree {
            upow.push(upow[k - 1].mul_filtered(u, keep));
            vpow.push(vpow[k - 1].mul_filtered(v, keep));
        }
        let mut out = Poly::zero();
        for (i, j, c) in fgl.f.truncate(degree).iter() {
            if c.is_zero() {
                continue;
            }
            let t = upow[i].mul_filtered(&vpow[j], keep);
            out += &t.mul_filtered(c, keep);
        }
        out
    };
    let (px, py, pz) = (Poly::var(x), Poly::var(y), Poly::var(z));
    let left = eval(&eval(&px, &py), &pz);
    let right = eval(&px, &eval(&py, &pz));
    if left == right {
        return Report::pass(SUITE, w);
    }
    let diff = &left - &right;
    let (m, _) = diff.terms().min_by_key(|(m, _)| series_deg(m)).expect("nonzero");
    let pick = |p: &Poly| {
        p.filter(|t| {
            (t.exponent(x), t.exponent(y), t.exponent(z)) == (m.exponent(x), m.exponent(y), m.exponent(z))
        })
    };
    let mut names: Vec<(String, u32)> = fgl.vars().vars().iter().map(|v| (v.name.clone(), v.weight)).collect();
    names.extend([("x".to_string(), 1), ("y".to_string(), 1), ("z".to_string(), 1)]);
    let ext = VarTable::new(names).expect("distinct names");
    Report::failure_text(
        SUITE,
        w,
        format!("x^{}*y^{}*z^{}", m.exponent(x), m.exponent(y), m.exponent(z)),
        &pick(&left).to_text(&ext),
        &pick(&right).to_text(&ext),
    )
}

/// Sets every `b_i` to zero, giving the additive law.
pub fn specialize_additive(fgl: &FglData) -> (Series2, Series1) {
    let zero = |p: &Poly| Poly::constant(p.constant_term());
    let f = fgl.f.map_coeffs(fgl.vars().clone(), zero);
    let omega = fgl.omega.map_coeffs(fgl.vars().clone(), zero);
    (f, omega)
}

/// Whether every coefficient of `F`, `ω`, `ω̂` and (if present) `A` is an integer polynomial.
pub fn is_integral(fgl: &FglData) -> bool {
    fgl.f.is_integral()
        && fgl.omega.is_integral()
        && fgl.omega_hat.is_integral()
        && fgl.a.as_ref().is_none_or(Series2::is_integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_coefficients() {
        let fgl = build_with_a(3);
        let t = fgl.vars().clone();
        assert_eq!(fgl.a_coeff(1, 1).to_text(&t), "2*b1");
        assert_eq!(fgl.a_coeff(1, 0), &Poly::one());
        assert!(fgl.f.is_symmetric());
        assert_eq!(fgl.omega.coeff(1).to_text(&t), "2*b1");
        let one = fgl.omega.mul(&fgl.model.log().derivative()).unwrap();
        assert_eq!(one, Series1::one(t.clone(), one.order()));
        assert!(is_integral(&fgl));
    }

    #[test]
    fn additive_specialization() {
        let fgl = build_with_a(4);
        let (f, omega) = specialize_additive(&fgl);
        for (i, j, c) in f.iter() {
            let expect = if i + j == 1 { Poly::one() } else { Poly::zero() };
            assert_eq!(c, &expect, "({i},{j})");
        }
        assert!(omega.coeffs()[1..].iter().all(Poly::is_zero));
        let a = fgl.a.as_ref().unwrap();
        let zero = |p: &Poly| Poly::constant(p.constant_term());
        let a0 = a.map_coeffs(a.vars().clone(), zero);
        for (i, j, c) in a0.iter() {
            let expect = match (i, j) {
                (2, 0) => Poly::one(),
                (0, 2) => Poly::from_int(-1),
                _ => Poly::zero(),
            };
            assert_eq!(c, &expect, "({i},{j})");
        }
    }

    #[test]
    fn a_is_antisymmetric_with_vanishing_diagonal() {
        let fgl = build_with_a(5);
        for i in 0..=3 {
            assert!(fgl.big_a(i, i).is_zero());
        }
        assert_eq!(fgl.big_a(1, 2), &-fgl.big_a(2, 1));
        assert!(fgl.a.as_ref().unwrap().is_graded(-2));
        assert!(fgl.f.is_graded(-1));
    }

    #[test]
    fn identities_at_small_weight() {
        let fgl = build_with_a(5);
        assert!(verify_proposition_i(&fgl).pass);
        assert!(verify_proposition_ii(&fgl).pass, "{:?}", verify_proposition_ii(&fgl));
        assert!(verify_krichever_form(&fgl).pass, "{:?}", verify_krichever_form(&fgl));
        assert!(verify_associativity(&fgl, 5).pass);
    }

    #[test]
    fn dropping_linear_term_fails_at_2_1() {
        let fgl = build_with_a(4);
        let r = verify_proposition_ii_against(&fgl, &proposition_ii_rhs(&fgl, false));
        assert!(!r.pass);
        assert_eq!(r.first_failure.unwrap().monomial, "x^2*y^1");
    }
}
