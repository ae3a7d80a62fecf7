//! The genera ψ, κ, κ⁻¹ and φ_KH on the generators `CP_i` of `MU_* ⊗ ℚ`, with
//! checks of the identities that tie them together.
//!
//! Conventions used throughout:
//!
//! * the universal logarithm is `log(x) = x + Σ CP_i x^{i+1}/(i+1)`;
//! * `ν(x) = x·CP(x)` and `mog = log ∘ ν⁻¹` is the logarithm of the twisted law,
//!   so `κ(CP_i) = (i+1)·[x^{i+1}] mog`;
//! * `ψ(CP_i) = [x^i] (1 + p_1 x + p_2 x² + p_3 x³ + p_4 x⁴)^{-1/2}`;
//! * `φ_KH = t ∘ ψ ∘ κ⁻¹`, with `t` renaming `p_i` to `q_i`.
//!
//! Weights are complex dimensions: `|CP_i| = |p_i| = |q_i| = i`.

use std::sync::Arc;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::fgl::law_from_logarithm;
use crate::poly::{Monomial, Poly, Rational, VarTable};
use crate::report::Report;
use crate::series::Series1;

pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenusKind {
    Psi,
    Kappa,
    KappaInv,
    PhiKh,
}

impl GenusKind {
    pub fn label(self) -> &'static str {
        match self {
            GenusKind::Psi => "psi",
            GenusKind::Kappa => "kappa",
            GenusKind::KappaInv => "kappa_inv",
            GenusKind::PhiKh => "phi_kh",
        }
    }
}

pub fn cp_table(n: usize) -> Arc<VarTable> {
    Arc::new(VarTable::indexed("CP", n))
}

pub fn p_table() -> Arc<VarTable> {
    Arc::new(VarTable::indexed("p", 4))
}

pub fn q_table() -> Arc<VarTable> {
    Arc::new(VarTable::indexed("q", 4))
}

/// `CP_i` as a key in tables and JSON.
pub fn generator_name(i: usize) -> String {
    format!("CP_{i}")
}

/// A ring homomorphism given by the images of the source generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    source: Arc<VarTable>,
    target: Arc<VarTable>,
    images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: Arc<VarTable>, target: Arc<VarTable>, images: Vec<Poly>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(AlgebraError::RingMapArity { expected: source.len(), found: images.len() });
        }
        Ok(RingMap { source, target, images })
    }

    /// Index-preserving renaming between tables of equal length, e.g. `t: p_i ↦ q_i`.
    pub fn rename(source: Arc<VarTable>, target: Arc<VarTable>) -> Result<Self> {
        let images = (0..source.len()).map(Poly::var).collect();
        RingMap::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<VarTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarTable> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        p.substitute(&self.images)
    }

    pub fn apply_series(&self, s: &Series1) -> Result<Series1> {
        crate::series::same_table(s.vars(), &self.source)?;
        s.try_map_coeffs(self.target.clone(), |c| self.apply(c))
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        crate::series::same_table(&self.target, &next.source)?;
        let images = self.images.iter().map(|p| next.apply(p)).collect::<Result<_>>()?;
        RingMap::new(self.source.clone(), next.target.clone(), images)
    }

    /// Whether every image is homogeneous of the weight of its generator.
    pub fn is_weight_preserving(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, p)| p.is_homogeneous_of(self.source.weight(k), &self.target))
    }
}

/// Values of a genus on `CP_1 … CP_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusTable {
    kind: GenusKind,
    vars: Arc<VarTable>,
    entries: Vec<Poly>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TableJson {
    genus: GenusKind,
    order: usize,
    target_vars: VarTable,
    entries: IndexMap<String, String>,
}

impl GenusTable {
    pub fn new(kind: GenusKind, vars: Arc<VarTable>, entries: Vec<Poly>) -> Self {
        GenusTable { kind, vars, entries }
    }

    pub fn kind(&self) -> GenusKind {
        self.kind
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn max_index(&self) -> usize {
        self.entries.len()
    }

    /// Value on `CP_i`, `1 ≤ i ≤ N`.
    pub fn entry(&self, i: usize) -> &Poly {
        &self.entries[i - 1]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn set_entry(&mut self, i: usize, p: Poly) {
        self.entries[i - 1] = p;
    }

    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().enumerate().all(|(k, p)| p.is_homogeneous_of(k as u32 + 1, &self.vars))
    }

    /// The table as a ring map out of `ℚ[CP_1 … CP_N]`.
    pub fn ring_map(&self) -> RingMap {
        RingMap {
            source: cp_table(self.max_index()),
            target: self.vars.clone(),
            images: self.entries.clone(),
        }
    }

    /// Image of the universal logarithm: `x + Σ g(CP_i) x^{i+1}/(i+1)`, order `N + 1`.
    pub fn logarithm(&self) -> Series1 {
        let n = self.max_index();
        Series1::from_fn(self.vars.clone(), n + 1, |k| match k {
            0 => Poly::zero(),
            1 => Poly::one(),
            _ => self.entry(k - 1).scale(&Rational::new(BigInt::one(), BigInt::from(k))),
        })
    }

    /// Image of `ν(x) = x·CP(x)`: `Σ_{i≥0} g(CP_i) x^{i+1}` with `CP_0 = 1`, order `N + 1`.
    pub fn twist_series(&self) -> Series1 {
        let n = self.max_index();
        Series1::from_fn(self.vars.clone(), n + 1, |k| match k {
            0 => Poly::zero(),
            1 => Poly::one(),
            _ => self.entry(k - 1).clone(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, p) in self.entries.iter().enumerate() {
            s.push_str(&format!("{}({}) = {}\n", self.kind.label(), generator_name(k + 1), p.to_text(&self.vars)));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, p)| (generator_name(k + 1), p.to_text(&self.vars)))
            .collect();
        serde_json::to_value(TableJson {
            genus: self.kind,
            order: self.max_index(),
            target_vars: (*self.vars).clone(),
            entries,
        })
        .expect("table serializes")
    }

    /// Reads back the output of [`GenusTable::to_json`] through the text parser.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(value.clone())
            .map_err(|e| AlgebraError::Parse { pos: 0, msg: e.to_string() })?;
        let vars = Arc::new(raw.target_vars);
        let mut entries = Vec::with_capacity(raw.order);
        for i in 1..=raw.order {
            let key = generator_name(i);
            let text = raw.entries.get(&key).ok_or_else(|| AlgebraError::Parse {
                pos: 0,
                msg: format!("missing entry {key}"),
            })?;
            entries.push(Poly::parse(text, &vars)?);
        }
        Ok(GenusTable { kind: raw.genus, vars, entries })
    }
}

/// `1 + p_1 x + p_2 x² + p_3 x³ + p_4 x⁴` over the given four-variable table.
pub fn generic_quartic(vars: Arc<VarTable>, order: usize) -> Series1 {
    Series1::from_fn(vars, order, |k| match k {
        0 => Poly::one(),
        1..=4 => Poly::var(k - 1),
        _ => Poly::zero(),
    })
}

pub fn psi_table(n: usize) -> GenusTable {
    let vars = p_table();
    let dlog = generic_quartic(vars.clone(), n).inv_sqrt().expect("constant term is 1");
    GenusTable::new(GenusKind::Psi, vars, dlog.coeffs()[1..].to_vec())
}

/// `log(x) = x + Σ CP_i x^{i+1}/(i+1)` over `ℚ[CP_1 … CP_N]`, order `N + 1`.
pub fn mishchenko_log(n: usize) -> Series1 {
    identity_table(n).logarithm()
}

/// `ν(x) = x·CP(x)` over `ℚ[CP_1 … CP_N]`, order `N + 1`.
pub fn nu(n: usize) -> Series1 {
    identity_table(n).twist_series()
}

/// The identity genus: `CP_i ↦ CP_i`.
fn identity_table(n: usize) -> GenusTable {
    let vars = cp_table(n);
    GenusTable::new(GenusKind::Kappa, vars, (0..n).map(Poly::var).collect())
}

/// Logarithm of the twisted law, `log ∘ ν⁻¹`, order `N + 1`.
pub fn mog(n: usize) -> Series1 {
    let nu_inv = nu(n).revert().expect("ν is a strict isomorphism");
    mishchenko_log(n).compose(&nu_inv).expect("same table")
}

pub fn kappa_table(n: usize) -> GenusTable {
    let m = mog(n);
    let entries = (1..=n)
        .map(|i| m.coeff(i + 1).scale(&Rational::from_integer(BigInt::from(i + 1))))
        .collect();
    GenusTable::new(GenusKind::Kappa, cp_table(n), entries)
}

/// Inverts a weight-preserving endomorphism of `ℚ[CP_1 … CP_N]` whose image of
/// `CP_i` is `c_i·CP_i` plus a polynomial in `CP_1 … CP_{i−1}`, one weight at a time.
pub fn invert_triangular(table: &GenusTable) -> Result<GenusTable> {
    let n = table.max_index();
    let mut inv: Vec<Poly> = Vec::with_capacity(n);
    for i in 1..=n {
        let image = table.entry(i);
        let lead = image.coeff(&Monomial::var(i - 1, 1));
        if lead.is_zero() {
            return Err(AlgebraError::SingularTriangularStep(i));
        }
        let rest = image.filter(|m| *m != Monomial::var(i - 1, 1));
        // κ(CP_i) = c·CP_i + D_i(CP_<i)  ⇒  κ⁻¹(CP_i) = (CP_i − D_i(κ⁻¹(CP_<i))) / c
        let mut images = inv.clone();
        images.push(Poly::zero());
        let d = rest.substitute(&images)?;
        let value = (&Poly::var(i - 1) - &d).scale(&(Rational::one() / lead));
        inv.push(value);
    }
    Ok(GenusTable::new(GenusKind::KappaInv, table.vars.clone(), inv))
}

pub fn kappa_inverse_table(n: usize) -> GenusTable {
    invert_triangular(&kappa_table(n)).expect("κ(CP_i) has leading coefficient −i")
}

/// `φ_KH = t ∘ ψ ∘ κ⁻¹` on `CP_1 … CP_N`.
pub fn phi_kh_table(n: usize) -> GenusTable {
    let kinv = kappa_inverse_table(n);
    let psi = psi_table(n).ring_map();
    let t = RingMap::rename(p_table(), q_table()).expect("equal arity");
    let composite = psi.then(&t).expect("ψ lands in ℚ[p]");
    let entries = kinv.entries().iter().map(|p| composite.apply(p).expect("arity")).collect();
    GenusTable::new(GenusKind::PhiKh, q_table(), entries)
}

/// `t ∘ ψ`, the ψ table with `p_i` renamed to `q_i`.
pub fn t_psi_table(n: usize) -> GenusTable {
    let psi = psi_table(n);
    GenusTable::new(GenusKind::Psi, q_table(), psi.entries)
}

/// Checks `(u')² = 1 + q_1 u + q_2 u² + q_3 u³ + q_4 u⁴` for `u = f/f'`, `f` the
/// exponential of `phi`'s logarithm. This is the pole-free form of `(h')² = S(h)`
/// with `h = f'/f = 1/u`, and it never uses the composition formula for `φ_KH`.
pub fn verify_krichever_ode_for(phi: &GenusTable, n: usize) -> Report {
    const SUITE: &str = "krichever-ode";
    let n = n.min(phi.max_index());
    let log = phi.logarithm().truncate(n + 1);
    let f = log.revert().expect("logarithm is x + O(x^2)");
    let u = f.mul(&f.derivative().reciprocal().expect("f'(0) = 1")).expect("same table");
    let du = u.derivative();
    let lhs = du.mul(&du).expect("same table");
    let quartic = generic_quartic(phi.vars.clone(), 4);
    let mut rhs = Series1::one(phi.vars.clone(), lhs.order());
    let mut upow = Series1::one(phi.vars.clone(), lhs.order());
    let u = u.truncate(lhs.order());
    for k in 1..=4 {
        upow = upow.mul(&u).expect("same table");
        rhs = rhs.add(&upow.scale(quartic.coeff(k))).expect("same table");
    }
    Report::compare1(SUITE, n, "", &lhs, &rhs, n.saturating_sub(1))
}

pub fn verify_krichever_ode(n: usize) -> Report {
    verify_krichever_ode_for(&phi_kh_table(n), n)
}

/// Checks that the compositional inverse of `exp/exp'` is `log ∘ ν⁻¹`, with `nu`
/// standing in for the twist `x·CP(x)`.
pub fn verify_lemma1_with(n: usize, nu_series: &Series1) -> Report {
    const SUITE: &str = "lemma1";
    let log = mishchenko_log(n);
    let exp = log.revert().expect("strict");
    let u = exp.mul(&exp.derivative().reciprocal().expect("unit")).expect("same table");
    let j = u.revert().expect("exp/exp' = x + O(x^2)");
    let mog = match nu_series.revert() {
        Ok(inv) => log.compose(&inv).expect("same table"),
        Err(e) => {
            return Report::failure_text(SUITE, n, "x^1".into(), "strict isomorphism", &e.to_string());
        }
    };
    Report::compare1(SUITE, n, "", &j, &mog, n)
}

pub fn verify_lemma1(n: usize) -> Report {
    verify_lemma1_with(n, &nu(n))
}

/// The invariant differential of the twisted law pushed through `φ_KH` squares to
/// `1 + q_1 x + q_2 x² + q_3 x³ + q_4 x⁴`, with every higher coefficient zero.
pub fn verify_lemma2(n: usize) -> Report {
    verify_lemma2_for(&phi_kh_table(n), n)
}

pub fn verify_lemma2_for(phi: &GenusTable, n: usize) -> Report {
    let pushed = phi.ring_map().apply_series(&mog(phi.max_index())).expect("arity");
    let omega = pushed.derivative().reciprocal().expect("mog'(0) = 1");
    let sq = omega.mul(&omega).expect("same table");
    let quartic = generic_quartic(phi.vars.clone(), sq.order());
    Report::compare1("lemma2", n, "omega~^2", &sq, &quartic, n)
}

/// `s(F_φ(x, y)) = F_tψ(s(x), s(y))` for `s = Σ_{i≥0} φ_KH(CP_i) x^{i+1}`, to total degree `n`.
pub fn verify_theorem1_iso(n: usize) -> Report {
    verify_theorem1_iso_for(&phi_kh_table(n), &t_psi_table(n), n)
}

pub fn verify_theorem1_iso_for(phi: &GenusTable, t_psi: &GenusTable, n: usize) -> Report {
    const SUITE: &str = "theorem1-iso";
    let f_phi = law_from_logarithm(&phi.logarithm().truncate(n)).expect("strict");
    let f_tpsi = law_from_logarithm(&t_psi.logarithm().truncate(n)).expect("strict");
    let s = phi.twist_series().truncate(n);
    let lhs = f_phi.compose_into(&s).expect("same table");
    let rhs = f_tpsi.compose_pair(&s, &s).expect("same table");
    Report::compare2(SUITE, n, "", &lhs, &rhs, n)
}

/// Lemma 2 (ω̃² is the quartic) and Theorem 1 i) (the strict isomorphism), both at `n`.
pub fn verify_lemma2_theorem1(n: usize) -> Report {
    let phi = phi_kh_table(n);
    let a = verify_lemma2_for(&phi, n);
    let b = verify_theorem1_iso_for(&phi, &t_psi_table(n), n);
    Report::all("lemma2-theorem1", n, [a, b])
}
