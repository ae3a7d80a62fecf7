//! Graded pieces of the Lazard ring inside `ℤ[b]`, the ideal generated by the
//! `A_ij` with `i, j ≥ 3`, and the resulting quotients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::fgl::{build_with_a, FglData};
use crate::normal_form::{hnf_basis, snf, Echelon, IntMatrix, InvariantFactors};
use crate::poly::{Monomial, Poly, Rational, VarTable};

pub const DEFAULT_MAX_WEIGHT: usize = 8;
pub const DEFAULT_CEILING: usize = 13;

/// Upper bound on the exponent of `Indec_n` for `n = 5 … 13`.
pub fn expected_indec_exponent(n: usize) -> Option<u64> {
    const TABLE: [u64; 9] = [5, 2, 7, 2, 3, 1, 11, 1, 13];
    n.checked_sub(5).and_then(|k| TABLE.get(k).copied())
}

/// Number of partitions of `n`.
pub fn partition_count(n: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p[n]
}

/// The b-monomials of weight `n`, i.e. the partitions of `n`, in descending lex order.
#[derive(Debug, Clone)]
pub struct BasisIndex {
    weight: usize,
    monomials: Vec<Monomial>,
    position: BTreeMap<Monomial, usize>,
}

impl BasisIndex {
    pub fn new(n: usize) -> Self {
        let mut monomials = Vec::new();
        let mut exps = vec![0u32; n];
        partitions(n, n, &mut exps, &mut monomials);
        monomials.sort_by_key(|m| std::cmp::Reverse(m.padded(n)));
        let position = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        BasisIndex { weight: n, monomials, position }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Integer coordinates of a homogeneous weight-`n` integral polynomial.
    pub fn coordinates(&self, p: &Poly) -> Result<Vec<BigInt>, LatticeError> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (m, c) in p.terms() {
            let idx = self.position.get(m).ok_or(LatticeError::NotInAmbient(self.weight))?;
            if !c.is_integer() {
                return Err(LatticeError::NotInAmbient(self.weight));
            }
            v[*idx] = c.to_integer();
        }
        Ok(v)
    }

    pub fn to_poly(&self, v: &[BigInt]) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in self.monomials.iter().zip(v) {
            if !c.is_zero() {
                p.add_term(m.clone(), Rational::from_integer(c.clone()));
            }
        }
        p
    }
}

// fills exponent vectors for partitions of `rest` into parts of size ≤ `max_part`
fn partitions(rest: usize, max_part: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if rest == 0 {
        out.push(Monomial::from_exponents(exps.clone()));
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        exps[part - 1] += 1;
        partitions(rest - part, part, exps, out);
        exps[part - 1] -= 1;
    }
}

/// A sublattice of `ℤ[b]_n`, kept in Hermite normal form.
#[derive(Debug, Clone)]
pub struct Lattice {
    index: Arc<BasisIndex>,
    echelon: Echelon,
    generators: usize,
}

impl Lattice {
    pub fn from_vectors(index: Arc<BasisIndex>, vectors: Vec<Vec<BigInt>>) -> Self {
        let generators = vectors.len();
        let echelon = hnf_basis(index.len(), vectors);
        Lattice { index, echelon, generators }
    }

    pub fn from_polys<'a>(
        index: Arc<BasisIndex>,
        polys: impl IntoIterator<Item = &'a Poly>,
    ) -> Result<Self, LatticeError> {
        let vectors = polys.into_iter().map(|p| index.coordinates(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Lattice::from_vectors(index, vectors))
    }

    pub fn index(&self) -> &Arc<BasisIndex> {
        &self.index
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Number of generators the lattice was built from.
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// HNF basis vectors.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.echelon.basis()
    }

    pub fn basis_polys(&self) -> Vec<Poly> {
        self.basis().iter().map(|v| self.index.to_poly(v)).collect()
    }

    pub fn hnf_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.index.len(), &self.basis())
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.index.coordinates(p).is_ok_and(|v| self.echelon.coordinates(&v).is_some())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|v| self.echelon.coordinates(v).is_some())
    }

    /// Coordinates of a lattice element in the HNF basis.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.echelon.coordinates(v)
    }
}

/// Graded pieces `L_0 … L_W` built from a universal law computed to weight `W`.
pub struct LazardPieces {
    fgl: FglData,
    indices: Vec<Arc<BasisIndex>>,
    pieces: Vec<Lattice>,
}

impl LazardPieces {
    /// Builds the b-model to weight `max_weight` and every `L_n` up to it.
    pub fn new(max_weight: usize) -> Self {
        LazardPieces::from_fgl(build_with_a(max_weight.max(1)), max_weight)
    }

    pub fn from_fgl(fgl: FglData, max_weight: usize) -> Self {
        assert!(fgl.weight() >= max_weight, "b-model too small");
        let indices: Vec<Arc<BasisIndex>> = (0..=max_weight).map(|n| Arc::new(BasisIndex::new(n))).collect();
        let mut pieces: Vec<Lattice> = Vec::with_capacity(max_weight + 1);
        pieces.push(Lattice::from_polys(indices[0].clone(), [&Poly::one()]).expect("unit"));
        for n in 1..=max_weight {
            // a single a_ij of weight n, or a product with a factor of weight k ≤ n/2
            let mut gens: Vec<Poly> = (1..=n.div_ceil(2)).map(|i| fgl.a_coeff(i, n + 1 - i).clone()).collect();
            gens.extend(products(&pieces, n));
            let lattice = Lattice::from_polys(indices[n].clone(), &gens).expect("a_ij are integral and homogeneous");
            pieces.push(lattice);
        }
        LazardPieces { fgl, indices, pieces }
    }

    pub fn max_weight(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn fgl(&self) -> &FglData {
        &self.fgl
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.fgl.vars()
    }

    pub fn basis_index(&self, n: usize) -> &Arc<BasisIndex> {
        &self.indices[n]
    }

    /// `L_n`.
    pub fn lazard_piece(&self, n: usize) -> &Lattice {
        &self.pieces[n]
    }

    /// `(L⁺·L⁺)_n`, the decomposables of weight `n`.
    pub fn decomposables(&self, n: usize) -> Lattice {
        let gens = products(&self.pieces, n);
        Lattice::from_polys(self.indices[n].clone(), &gens).expect("products are integral")
    }

    /// `I_n`, spanned by `A_ij · L_{n − (i + j − 2)}` for `3 ≤ i ≤ j`.
    pub fn ideal_piece(&self, n: usize) -> Lattice {
        let mut gens = Vec::new();
        for s in 6..=n + 2 {
            let m = n + 2 - s;
            for i in 3..=s / 2 {
                let a = self.fgl.big_a(i, s - i);
                if a.is_zero() {
                    continue;
                }
                gens.extend(self.pieces[m].basis_polys().iter().map(|b| a * b));
            }
        }
        Lattice::from_polys(self.indices[n].clone(), &gens).expect("A_ij are integral and homogeneous")
    }

    /// `Q_n = L_n / I_n` and `Indec_n = L_n / (I_n + D_n)`.
    pub fn quotient_report(&self, n: usize) -> QuotientReport {
        let l = &self.pieces[n];
        let ideal = self.ideal_piece(n);
        let dec = self.decomposables(n);
        let coords = |lat: &Lattice| -> Vec<Vec<BigInt>> {
            lat.basis().iter().map(|v| l.coordinates_of(v).expect("sublattice of L_n")).collect()
        };
        let ideal_coords = coords(&ideal);
        let q = snf(&IntMatrix::from_columns(l.rank(), &ideal_coords));
        let mut both = ideal_coords;
        both.extend(coords(&dec));
        let indec = snf(&IntMatrix::from_columns(l.rank(), &both));
        QuotientReport {
            n,
            rank_l: l.rank(),
            rank_i: ideal.rank(),
            q: GroupSummary::from(&q),
            indec: GroupSummary::from(&indec),
            expected_indec_exponent: expected_indec_exponent(n),
        }
    }

    /// Reports for weights `1 ..= max_weight`, computed in parallel; order is by weight.
    pub fn quotient_reports(&self) -> Vec<QuotientReport> {
        (1..=self.max_weight()).into_par_iter().map(|n| self.quotient_report(n)).collect()
    }
}

fn products(pieces: &[Lattice], n: usize) -> Vec<Poly> {
    let mut gens = Vec::new();
    for k in 1..=n / 2 {
        let left = pieces[k].basis_polys();
        let right = pieces[n - k].basis_polys();
        for a in &left {
            for b in &right {
                gens.push(a * b);
            }
        }
    }
    gens
}

/// Checks the ceiling and computes reports for weights `1 ..= max_weight`.
pub fn quotient_reports(max_weight: usize, ceiling: usize) -> Result<Vec<QuotientReport>, LatticeError> {
    if max_weight > ceiling {
        return Err(LatticeError::CeilingExceeded { n: max_weight, ceiling });
    }
    Ok(LazardPieces::new(max_weight).quotient_reports())
}

/// Free rank and torsion of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub free: usize,
    #[serde(with = "json_ints")]
    pub torsion: Vec<BigInt>,
}

impl From<&InvariantFactors> for GroupSummary {
    fn from(f: &InvariantFactors) -> Self {
        GroupSummary { free: f.free_rank, torsion: f.torsion() }
    }
}

impl GroupSummary {
    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free + self.torsion.len() <= 1
    }

    /// Largest invariant factor of a finite group; `None` if the group is infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        if self.free > 0 {
            return None;
        }
        Some(self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = InvariantFactors { factors: self.torsion.clone(), free_rank: self.free };
        inv.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub n: usize,
    #[serde(rename = "rank_L")]
    pub rank_l: usize,
    #[serde(rename = "rank_I")]
    pub rank_i: usize,
    #[serde(rename = "Q")]
    pub q: GroupSummary,
    #[serde(rename = "Indec")]
    pub indec: GroupSummary,
    pub expected_indec_exponent: Option<u64>,
}

impl QuotientReport {
    /// Cyclic `Indec_n`, and where a bound is known, its exponent divides it.
    pub fn meets_expectation(&self) -> bool {
        if !self.indec.is_cyclic() {
            return false;
        }
        match self.expected_indec_exponent {
            None => true,
            Some(bound) => self
                .indec
                .exponent()
                .is_some_and(|e| (BigInt::from(bound) % e).is_zero()),
        }
    }

    pub fn to_text(&self) -> String {
        let expected = match self.expected_indec_exponent {
            Some(e) => format!(" (expected exponent | {e})"),
            None => String::new(),
        };
        format!(
            "n={}: rank_L={} rank_I={} Q={} Indec={}{}",
            self.n, self.rank_l, self.rank_i, self.q, self.indec, expected
        )
    }
}

/// Rank of a set of integer vectors over ℚ by plain Gaussian elimination.
pub fn rational_rank(vectors: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<Rational>> =
        vectors.iter().map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        let pivot_row = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot;
            for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank of `Q_n` recomputed as `p(n) − rank_ℚ(I_n generators)`.
pub fn rational_quotient_rank(pieces: &LazardPieces, n: usize) -> usize {
    let ideal = pieces.ideal_piece(n);
    partition_count(n) - rational_rank(&ideal.basis())
}

mod json_ints {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<serde_json::Number> = v
            .iter()
            .map(|x| serde_json::Number::from_str(&x.to_string()).expect("integer literal"))
            .collect();
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        nums.iter()
            .map(|n| BigInt::from_str(&n.to_string()).map_err(D::Error::custom))
            .collect()
    }
}

/// Torsion summary as plain machine integers, for display.
pub fn small_torsion(g: &GroupSummary) -> Vec<i64> {
    g.torsion.iter().map(|d| d.abs().to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let p: Vec<usize> = (0..=13).map(partition_count).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101]);
        for n in 0..=8 {
            assert_eq!(BasisIndex::new(n).len(), partition_count(n));
        }
    }

    #[test]
    fn basis_order_and_coordinates() {
        let idx = BasisIndex::new(3);
        let vars = VarTable::indexed("b", 3);
        let names: Vec<String> = idx.monomials().iter().map(|m| m.to_text(&vars)).collect();
        assert_eq!(names, ["b1^3", "b1*b2", "b3"]);
        let p = Poly::parse("2*b1*b2 - b3", &vars).unwrap();
        let v = idx.coordinates(&p).unwrap();
        assert_eq!(v, vec![BigInt::zero(), BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(idx.to_poly(&v), p);
        let half = Poly::parse("1/2*b3", &vars).unwrap();
        assert_eq!(idx.coordinates(&half), Err(LatticeError::NotInAmbient(3)));
    }

    #[test]
    fn low_weight_pieces() {
        let lp = LazardPieces::new(6);
        assert_eq!(lp.lazard_piece(0).rank(), 1);
        assert_eq!(lp.lazard_piece(1).rank(), 1);
        for n in 0..=6 {
            assert_eq!(lp.lazard_piece(n).rank(), partition_count(n), "rank L_{n}");
        }
        for n in 0..=3 {
            assert_eq!(lp.ideal_piece(n).rank(), 0);
        }
        // A_33 vanishes by antisymmetry, so nothing lives in weight 4 either
        assert!(lp.fgl().big_a(3, 3).is_zero());
        assert_eq!(lp.ideal_piece(4).rank(), 0);
        assert!(lp.ideal_piece(5).rank() > 0);
        for n in 0..=6 {
            assert!(lp.lazard_piece(n).contains_lattice(&lp.ideal_piece(n)));
        }
    }

    #[test]
    fn lazard_indecomposables_are_cyclic_of_rank_one() {
        // without the ideal, L_n / D_n ≅ ℤ in every positive weight
        let lp = LazardPieces::new(7);
        for n in 1..=7 {
            let l = lp.lazard_piece(n);
            let dec = lp.decomposables(n);
            let coords: Vec<Vec<BigInt>> = dec.basis().iter().map(|v| l.coordinates_of(v).unwrap()).collect();
            let g = snf(&IntMatrix::from_columns(l.rank(), &coords));
            assert_eq!(g.free_rank, 1, "n={n}");
            assert!(g.torsion().is_empty(), "n={n}");
        }
    }

    #[test]
    fn small_quotients() {
        let lp = LazardPieces::new(6);
        let reports = lp.quotient_reports();
        for r in &reports[..3] {
            assert_eq!(r.indec.free, 1);
            assert!(r.indec.torsion.is_empty());
            assert_eq!(r.rank_i, 0);
        }
        let six = &reports[5];
        assert_eq!(six.indec.free, 0);
        assert_eq!(small_torsion(&six.indec), vec![2]);
        for r in &reports {
            assert!(r.meets_expectation(), "{}", r.to_text());
            assert_eq!(r.q.free, rational_quotient_rank(&lp, r.n));
        }
    }

    #[test]
    fn ceiling_guard() {
        assert_eq!(quotient_reports(14, 13), Err(LatticeError::CeilingExceeded { n: 14, ceiling: 13 }));
    }

    #[test]
    fn report_json_round_trip() {
        let r = QuotientReport {
            n: 6,
            rank_l: 11,
            rank_i: 3,
            q: GroupSummary { free: 8, torsion: vec![BigInt::from(2)] },
            indec: GroupSummary { free: 0, torsion: vec![BigInt::from(2)] },
            expected_indec_exponent: Some(2),
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"n":6,"rank_L":11,"rank_I":3,"Q":{"free":8,"torsion":[2]},"Indec":{"free":0,"torsion":[2]},"expected_indec_exponent":2}"#
        );
        assert_eq!(serde_json::from_str::<QuotientReport>(&s).unwrap(), r);
    }
}
