use std::sync::Arc;

use krichever::fgl::law_from_logarithm;
use krichever::lazard::{BasisIndex, LazardPieces};
use krichever::normal_form::{hnf, snf, IntMatrix};
use krichever::poly::rat;
use krichever::{Poly, Series1, VarTable};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn scalars() -> Arc<VarTable> {
    Arc::new(VarTable::new(Vec::<(String, u32)>::new()).unwrap())
}

fn bvars() -> Arc<VarTable> {
    Arc::new(VarTable::indexed("b", 4))
}

fn constant(n: i64, d: i64) -> Poly {
    Poly::constant(rat(n, d))
}

/// `x + c_2 x² + … + c_N x^N` with small rational coefficients.
fn strict_series() -> impl Strategy<Value = Series1> {
    (2usize..8)
        .prop_flat_map(|order| prop::collection::vec((-6i64..=6, 1i64..=3), order - 1))
        .prop_map(|cs| {
            let order = cs.len() + 1;
            Series1::from_fn(scalars(), order, |k| match k {
                0 => Poly::zero(),
                1 => Poly::one(),
                _ => constant(cs[k - 2].0, cs[k - 2].1),
            })
        })
}

fn unit_series() -> impl Strategy<Value = Series1> {
    strict_series().prop_map(|f| {
        let mut g = f.div_x().unwrap();
        g.set_coeff(0, Poly::one());
        g
    })
}

/// `x + Σ_k (random integer combination of weight-(k−1) b-monomials) x^k`.
fn graded_series() -> impl Strategy<Value = Series1> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 4).prop_map(|rows| {
        let vars = bvars();
        Series1::from_fn(vars, 5, |k| match k {
            0 => Poly::zero(),
            1 => Poly::one(),
            _ => {
                let idx = BasisIndex::new(k - 1);
                let v: Vec<BigInt> = (0..idx.len()).map(|i| BigInt::from(rows[k - 2][i])).collect();
                idx.to_poly(&v)
            }
        })
    })
}

fn poly_over(vars: Arc<VarTable>) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0u32..3, n), -9i64..=9, 1i64..=4), 0..6).prop_map(move |terms| {
        let mut p = Poly::zero();
        for (exps, num, den) in terms {
            p.add_term(krichever::Monomial::from_exponents(exps), rat(num, den));
        }
        p
    })
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

/// Random unimodular matrix as a product of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (a, b, k, negate) in ops {
            if a != b {
                for i in 0..n {
                    let add = &u[(i, b)] * BigInt::from(k);
                    u[(i, a)] += add;
                }
            } else if negate {
                for i in 0..n {
                    u[(i, a)] = -u[(i, a)].clone();
                }
            }
        }
        u
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn revert_is_a_two_sided_inverse(f in strict_series()) {
        let g = f.revert().unwrap();
        let x = Series1::x(f.vars().clone(), f.order());
        prop_assert_eq!(f.compose(&g).unwrap(), x.clone());
        prop_assert_eq!(g.compose(&f).unwrap(), x);
        prop_assert_eq!(g.revert().unwrap(), f.clone());
        prop_assert_eq!(f.revert_newton().unwrap(), g);
    }

    #[test]
    fn reciprocal_inverts(f in unit_series()) {
        let r = f.reciprocal().unwrap();
        prop_assert_eq!(f.mul(&r).unwrap(), Series1::one(f.vars().clone(), f.order()));
        prop_assert_eq!(r.reciprocal().unwrap(), f);
    }

    #[test]
    fn composition_is_associative(f in strict_series(), g in strict_series(), h in strict_series()) {
        let n = f.order().min(g.order()).min(h.order());
        let (f, g, h) = (f.truncate(n), g.truncate(n), h.truncate(n));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn truncation_commutes_with_operations(f in strict_series(), g in unit_series(), k in 1usize..7) {
        let n = f.order().min(g.order());
        let k = k.min(n);
        let (f, g) = (f.truncate(n), g.truncate(n));
        prop_assert_eq!(f.mul(&g).unwrap().truncate(k), f.truncate(k).mul(&g.truncate(k)).unwrap());
        prop_assert_eq!(f.revert().unwrap().truncate(k), f.truncate(k).revert().unwrap());
        prop_assert_eq!(g.reciprocal().unwrap().truncate(k), g.truncate(k).reciprocal().unwrap());
        prop_assert_eq!(g.compose(&f).unwrap().truncate(k), g.truncate(k).compose(&f.truncate(k)).unwrap());
    }

    #[test]
    fn grading_is_preserved(f in graded_series()) {
        prop_assert!(f.is_graded(-1));
        let g = f.revert().unwrap();
        prop_assert!(g.is_graded(-1));
        prop_assert!(g.is_integral());
        prop_assert!(f.derivative().is_graded(0));
        prop_assert!(f.mul(&g).unwrap().is_graded(-2));
        let law = law_from_logarithm(&g).unwrap();
        prop_assert!(law.is_graded(-1));
        prop_assert!(law.is_symmetric());
        prop_assert!(law.is_integral());
    }

    #[test]
    fn poly_text_and_json_round_trip(p in poly_over(bvars())) {
        let vars = bvars();
        let text = p.to_text(&vars);
        prop_assert_eq!(Poly::parse(&text, &vars).unwrap(), p.clone());
        let terms = p.to_json_terms(&vars);
        let json = serde_json::to_string(&terms).unwrap();
        let back: Vec<krichever::poly::JsonTerm> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Poly::from_json_terms(&back, &vars).unwrap(), p);
    }

    #[test]
    fn hnf_is_a_unimodular_transform(m in small_matrix()) {
        let (h, u) = hnf(&m);
        prop_assert_eq!(m.mul(&u), h.clone());
        let su = snf(&u);
        prop_assert_eq!(su.free_rank, 0);
        prop_assert!(su.factors.iter().all(One::is_one));
        // lower echelon with positive pivots, entries left of a pivot reduced
        let mut last: Option<usize> = None;
        for j in 0..h.cols() {
            let Some(p) = (0..h.rows()).find(|&i| h[(i, j)] != BigInt::from(0)) else {
                prop_assert!((j..h.cols()).all(|k| (0..h.rows()).all(|i| h[(i, k)] == BigInt::from(0))));
                break;
            };
            prop_assert!(last.is_none_or(|l| p > l));
            prop_assert!(h[(p, j)].is_positive());
            for k in 0..j {
                prop_assert!(!h[(p, k)].is_negative() && h[(p, k)] < h[(p, j)]);
            }
            last = Some(p);
        }
    }

    #[test]
    fn hnf_depends_only_on_the_column_span(m in small_matrix(), seed in unimodular(3)) {
        let c = m.cols();
        let v = IntMatrix::from_rows(&(0..c).map(|i| (0..c).map(|j| seed[(i, j)].clone()).collect::<Vec<_>>()).collect::<Vec<_>>());
        // the top-left block of a product of elementary operations need not be unimodular
        prop_assume!(snf(&v).factors.iter().all(One::is_one) && snf(&v).free_rank == 0);
        prop_assert_eq!(hnf(&m).0, hnf(&m.mul(&v)).0);
        prop_assert_eq!(snf(&m), snf(&m.mul(&v)));
    }

    #[test]
    fn snf_is_a_divisibility_chain(m in small_matrix()) {
        let s = snf(&m);
        prop_assert!(s.is_divisibility_chain());
        if m.rows() == m.cols() && s.free_rank == 0 {
            let prod: BigInt = s.factors.iter().product();
            prop_assert_eq!(prod, rational_det(&m).abs());
        }
    }
}

fn rational_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<krichever::Rational>> =
        (0..n).map(|i| (0..n).map(|j| krichever::Rational::from_integer(m[(i, j)].clone())).collect()).collect();
    let mut det = krichever::Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != krichever::Rational::from_integer(BigInt::from(0))) else {
            return BigInt::from(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det.to_integer()
}

#[test]
fn quotient_reports_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&LazardPieces::new(9).quotient_reports()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(2));
}
