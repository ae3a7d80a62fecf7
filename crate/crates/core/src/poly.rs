//! Sparse multivariate polynomials over exact rationals.
//!
//! A [`Poly`] stores its terms keyed by a [`Monomial`], an exponent vector
//! indexed by variable position with trailing zeros trimmed. Polynomials do
//! not carry their variable table; names and weights live in a shared
//! [`VarTable`] that is consulted for grading, printing and parsing.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

pub type Rational = num_rational::BigRational;

/// A named variable with a positive grading weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub weight: u32,
}

/// Ordered list of variables. Index `k` of a [`Monomial`] refers to entry `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    vars: Vec<Var>,
}

impl VarTable {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut out: Vec<Var> = Vec::new();
        for (name, weight) in vars {
            let name = name.into();
            if weight == 0 {
                return Err(AlgebraError::ZeroWeight(name));
            }
            if out.iter().any(|v| v.name == name) {
                return Err(AlgebraError::DuplicateVariable(name));
            }
            out.push(Var { name, weight });
        }
        Ok(VarTable { vars: out })
    }

    /// `prefix1, …, prefixN` with weight of `prefix i` equal to `i`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        VarTable {
            vars: (1..=n)
                .map(|i| Var { name: format!("{prefix}{i}"), weight: i as u32 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.vars[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }
}

/// Exponent vector with trailing zeros removed, so equal monomials compare equal
/// regardless of table length. The derived order is lexicographic by variable index.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Monomial::from_exponents(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weighted degree; panics if the monomial uses a variable outside `table`.
    pub fn weight(&self, table: &VarTable) -> u32 {
        self.0.iter().enumerate().map(|(i, &e)| e * table.weight(i)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut v = long.clone();
        for (a, b) in v.iter_mut().zip(short.iter()) {
            *a += b;
        }
        Monomial(v)
    }

    /// Exponent vector padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn to_text(&self, table: &VarTable) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(table.name(i).to_string()),
                _ => parts.push(format!("{}^{}", table.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial with rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(index: usize) -> Self {
        Poly::term(Rational::one(), Monomial::var(index, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Number of variable slots used (one past the highest variable index).
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// True when every coefficient is an integer divisible by `d`.
    pub fn is_divisible_by(&self, d: i64) -> bool {
        let d = BigInt::from(d);
        self.terms.values().all(|c| c.is_integer() && (c.numer() % &d).is_zero())
    }

    /// `Some(w)` if all terms have weight `w`; `None` for mixed weights.
    /// The zero polynomial reports `None` as well; use [`Poly::is_homogeneous_of`].
    pub fn weight(&self, table: &VarTable) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.weight(table));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, w: u32, table: &VarTable) -> bool {
        self.terms.keys().all(|m| m.weight(table) == w)
    }

    pub fn fits(&self, table: &VarTable) -> bool {
        self.arity() <= table.len()
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product with terms failing `keep` dropped as they are formed.
    pub fn mul_filtered(&self, other: &Poly, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Substitutes `images[k]` for variable `k`. Variables without an image are an error.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if self.arity() > images.len() {
            return Err(AlgebraError::RingMapArity { expected: self.arity(), found: images.len() });
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(), p.clone()]).collect();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out += &t;
        }
        Ok(out)
    }

    /// Terms sorted by the canonical order: weight descending, then exponent
    /// vectors lexicographically descending.
    pub fn canonical_terms(&self, table: &VarTable) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.weight(table).cmp(&a.0.weight(table)).then_with(|| b.0.cmp(a.0)));
        v
    }

    /// Canonical text form, e.g. `3/8*p1^2 - 1/2*p2`.
    pub fn to_text(&self, table: &VarTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.canonical_terms(table).into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&m.to_text(table));
            } else {
                s.push_str(&format!("{}*{}", a, m.to_text(table)));
            }
        }
        s
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, table }
    }

    /// Parses the canonical text form (whitespace-insensitive, any term order).
    pub fn parse(text: &str, table: &VarTable) -> Result<Poly> {
        Parser { src: text.as_bytes(), pos: 0, table }.parse()
    }

    /// JSON form: one entry per term with the coefficient as a string and the
    /// exponent vector padded to the table length, in canonical order.
    pub fn to_json_terms(&self, table: &VarTable) -> Vec<JsonTerm> {
        self.canonical_terms(table)
            .into_iter()
            .map(|(m, c)| JsonTerm { coeff: c.to_string(), exps: m.padded(table.len()) })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm], table: &VarTable) -> Result<Poly> {
        let mut out = Poly::zero();
        for t in terms {
            if t.exps.len() != table.len() {
                return Err(AlgebraError::ExponentLength { expected: table.len(), found: t.exps.len() });
            }
            let c: Rational = t.coeff.trim().parse().map_err(|_| AlgebraError::Parse {
                pos: 0,
                msg: format!("bad coefficient `{}`", t.coeff),
            })?;
            out.add_term(Monomial::from_exponents(t.exps.clone()), c);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exps: Vec<u32>,
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    table: &'a VarTable,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.to_text(self.table))
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 && self.constant_term().is_one() {
            return rhs.clone();
        }
        if rhs.terms.len() == 1 && rhs.constant_term().is_one() {
            return self.clone();
        }
        self.mul_filtered(rhs, |_| true)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a VarTable,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly> {
        let mut out = Poly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty expression"),
                None => break,
                Some(b'+') if !first => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
            };
            first = false;
            let (c, m) = self.term()?;
            out.add_term(m, if sign < 0 { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut coeff = Rational::one();
        let mut exps: Vec<u32> = Vec::new();
        let mut expect_factor = true;
        while expect_factor {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    let mut q = Rational::from_integer(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let d = self.integer()?;
                        if d.is_zero() {
                            return self.err("zero denominator");
                        }
                        q /= Rational::from_integer(d);
                    }
                    coeff *= q;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    let Some(idx) = self.table.index_of(name) else {
                        return Err(AlgebraError::UnknownVariable(name.to_string()));
                    };
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let n = self.integer()?;
                        e = u32::try_from(n).or_else(|_| self.err("exponent out of range"))?;
                    }
                    if exps.len() <= idx {
                        exps.resize(idx + 1, 0);
                    }
                    exps[idx] += e;
                }
                _ => return self.err("expected a coefficient or variable"),
            }
            expect_factor = self.peek() == Some(b'*');
            if expect_factor {
                self.pos += 1;
            }
        }
        Ok((coeff, Monomial::from_exponents(exps)))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_table() -> VarTable {
        VarTable::indexed("p", 4)
    }

    #[test]
    fn var_table_rejects_duplicates_and_zero_weight() {
        assert_eq!(
            VarTable::new([("a", 1), ("a", 2)]),
            Err(AlgebraError::DuplicateVariable("a".into()))
        );
        assert_eq!(VarTable::new([("a", 0)]), Err(AlgebraError::ZeroWeight("a".into())));
    }

    #[test]
    fn canonical_text() {
        let t = p_table();
        let p1 = Poly::var(0);
        let p2 = Poly::var(1);
        let f = &p1.pow(2).scale(&rat(3, 8)) - &p2.scale(&rat(1, 2));
        assert_eq!(f.to_text(&t), "3/8*p1^2 - 1/2*p2");
        assert_eq!((-&p1).to_text(&t), "-p1");
        assert_eq!(Poly::zero().to_text(&t), "0");
        assert_eq!((&Poly::from_int(-2) + &p1).to_text(&t), "p1 - 2");
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let t = p_table();
        let s = "35/128*p1^4 - 15/16*p1^2*p2 + 3/4*p1*p3 + 3/8*p2^2 - 1/2*p4";
        let f = Poly::parse(s, &t).unwrap();
        assert_eq!(f.to_text(&t), s);
        assert_eq!(Poly::parse("p2 * 2 + 1", &t).unwrap(), Poly::parse("2*p2+1", &t).unwrap());
        assert!(matches!(Poly::parse("x1", &t), Err(AlgebraError::UnknownVariable(_))));
        assert!(matches!(Poly::parse("", &t), Err(AlgebraError::Parse { .. })));
        assert!(matches!(Poly::parse("1/0", &t), Err(AlgebraError::Parse { .. })));
        assert!(matches!(Poly::parse("p1 p2", &t), Err(AlgebraError::Parse { .. })));
    }

    #[test]
    fn json_roundtrip_checks_length() {
        let t = p_table();
        let f = Poly::parse("-5/16*p1^3 + 3/4*p1*p2 - 1/2*p3", &t).unwrap();
        let j = f.to_json_terms(&t);
        assert_eq!(j[0], JsonTerm { coeff: "-5/16".into(), exps: vec![3, 0, 0, 0] });
        assert_eq!(Poly::from_json_terms(&j, &t).unwrap(), f);
        let bad = vec![JsonTerm { coeff: "1".into(), exps: vec![1] }];
        assert!(matches!(
            Poly::from_json_terms(&bad, &t),
            Err(AlgebraError::ExponentLength { expected: 4, found: 1 })
        ));
    }

    #[test]
    fn arithmetic_and_weight() {
        let t = p_table();
        let a = &Poly::var(0) + &Poly::one();
        let b = &Poly::var(0) - &Poly::one();
        assert_eq!((&a * &b).to_text(&t), "p1^2 - 1");
        assert_eq!(Poly::parse("p1^2 + p2", &t).unwrap().weight(&t), Some(2));
        assert_eq!(Poly::parse("p1 + p2", &t).unwrap().weight(&t), None);
        assert!(Poly::zero().is_homogeneous_of(7, &t));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitution() {
        let t = p_table();
        let f = Poly::parse("p1^2 + 2*p2", &t).unwrap();
        let images = vec![Poly::parse("p1 + 1", &t).unwrap(), Poly::parse("p3", &t).unwrap()];
        let g = f.substitute(&images).unwrap();
        assert_eq!(g.to_text(&t), "2*p3 + p1^2 + 2*p1 + 1");
        assert!(f.substitute(&images[..1]).is_err());
    }
}
