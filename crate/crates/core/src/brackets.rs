//! Invariant bivectors on `G/G_Γ` and the quadratic bracket equations.
//!
//! An invariant bivector is `v = Σ_{ᾱ>0} c(ᾱ) Σ_{α∈ᾱ} E_α∧E_{−α}`. The
//! conditions `[[v,v]] = K²φ_M` and `[[f,v_λ]] = 0` reduce to per-pair
//! relations between the coefficients; every solver here is cross-checked
//! against the Schouten bracket.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chevalley::ChevalleyBasis;
use crate::error::{Error, Result};
use crate::levi::{lattice_label, LeviDatum};
use crate::multivec::{ad_action, phi, project_to_m, r_matrix, schouten, theta, Multivector};
use crate::roots::LieType;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn of(f: i64) -> Sign {
        if f > 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `λ` on the simple quasiroots, nonzero on every quasiroot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    values: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(levi: &LeviDatum, values: Vec<Scalar>) -> Result<Self> {
        let k = levi.complement().len();
        if values.len() != k {
            return Err(Error::InvalidLinearForm(format!(
                "expected {k} values (one per simple quasiroot), got {}",
                values.len()
            )));
        }
        let form = LinearForm { values };
        for q in 0..levi.num_positive() {
            if form.at(levi, q).is_zero() {
                return Err(Error::InvalidLinearForm(format!(
                    "vanishes on quasiroot {}",
                    levi.label(q)
                )));
            }
        }
        Ok(form)
    }

    /// A deterministic pseudo-random valid form with small rational values.
    pub fn random(levi: &LeviDatum, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let values = (0..levi.complement().len())
                .map(|_| {
                    let mut p = 0;
                    while p == 0 {
                        p = rng.gen_range(-40i64..=40);
                    }
                    Scalar::ratio(p, rng.gen_range(1i64..=7))
                })
                .collect();
            if let Ok(f) = LinearForm::new(levi, values) {
                return f;
            }
        }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// `λ(v)` for a lattice vector on the complement positions.
    pub fn eval(&self, v: &[i64]) -> Scalar {
        self.values
            .iter()
            .zip(v)
            .fold(Scalar::zero(), |acc, (x, &c)| acc + x * &Scalar::from(c))
    }

    pub fn at(&self, levi: &LeviDatum, q: usize) -> Scalar {
        let v: Vec<i64> = levi.quasiroot(q).iter().map(|&x| x as i64).collect();
        self.eval(&v)
    }
}

/// `Σ c(ᾱ) Σ_{α∈ᾱ} E_α∧E_{−α}`, one coefficient per positive quasiroot.
#[derive(Clone, Debug)]
pub struct InvariantBivector {
    levi: Arc<LeviDatum>,
    coeffs: Vec<Scalar>,
}

impl PartialEq for InvariantBivector {
    fn eq(&self, other: &Self) -> bool {
        self.levi.gamma() == other.levi.gamma() && self.coeffs == other.coeffs
    }
}

impl InvariantBivector {
    pub fn new(levi: Arc<LeviDatum>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != levi.num_positive() {
            return Err(Error::Precondition(format!(
                "expected {} coefficients, got {}",
                levi.num_positive(),
                coeffs.len()
            )));
        }
        Ok(InvariantBivector { levi, coeffs })
    }

    pub fn levi(&self) -> &Arc<LeviDatum> {
        &self.levi
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, q: usize) -> &Scalar {
        &self.coeffs[q]
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        InvariantBivector {
            levi: self.levi.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        InvariantBivector {
            levi: self.levi.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    fn multivector(&self, basis: &ChevalleyBasis) -> Multivector {
        let rs = basis.root_system();
        let mut v = Multivector::zero(2);
        for (q, c) in self.coeffs.iter().enumerate() {
            for &a in self.levi.class(q) {
                v.add_term(vec![a, rs.negative(a)], c);
            }
        }
        v
    }
}

/// Lattice witness: the quasiroot (or primitive lattice vector) on which
/// `λ` or a denominator is forced to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vector: Vec<i64>,
    pub label: String,
    pub reason: String,
}

impl Witness {
    fn new(levi: &LeviDatum, vector: Vec<i64>, reason: impl Into<String>) -> Self {
        let v32: Vec<i32> = vector.iter().map(|&x| x as i32).collect();
        Witness {
            label: lattice_label(levi.complement(), &v32),
            vector,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub bivector: InvariantBivector,
    pub k: Scalar,
    pub sign: Option<Sign>,
    pub seeds: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolverOutcome {
    Solved(Solution),
    Inconsistent(Witness),
}

impl SolverOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolverOutcome::Solved(s) => Some(s),
            SolverOutcome::Inconsistent(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolverOutcome::Solved(_) => None,
            SolverOutcome::Inconsistent(w) => Some(w),
        }
    }
}

/// Whether `u` is killed by `ad E_{±γ}` for every simple `γ ∈ Γ`.
pub fn is_g_gamma_invariant(basis: &ChevalleyBasis, levi: &LeviDatum, u: &Multivector) -> bool {
    let rs = basis.root_system();
    levi.gamma().iter().all(|&g| {
        let e = rs.simple(g);
        [e, rs.negative(e)]
            .iter()
            .all(|&x| ad_action(basis, &basis.basis_element(x), u).is_zero())
    })
}

/// The `Λ²m` element of an invariant bivector, checked for `g_Γ`-invariance.
pub fn realize(basis: &ChevalleyBasis, b: &InvariantBivector) -> Result<Multivector> {
    let v = b.multivector(basis);
    if !is_g_gamma_invariant(basis, &b.levi, &v) {
        return Err(Error::Internal("realized bivector is not g_Γ-invariant".into()));
    }
    Ok(v)
}

/// `φ_M`: projection of `[[r,r]]` onto `Λ³m`.
pub fn phi_m(basis: &ChevalleyBasis, levi: &LeviDatum) -> Multivector {
    project_to_m(&phi(basis), levi)
}

fn nonzero_seeds(levi: &LeviDatum, seeds: &[Scalar]) -> std::result::Result<(), Witness> {
    for (j, s) in seeds.iter().enumerate() {
        if s.is_zero() {
            let q = levi.simple(j);
            return Err(Witness::new(levi, coords(levi, q), "zero seed"));
        }
    }
    Ok(())
}

fn coords(levi: &LeviDatum, q: usize) -> Vec<i64> {
    levi.quasiroot(q).iter().map(|&x| x as i64).collect()
}

/// Coefficients for `[[v,v]] = K²φ_M` from values at the simple quasiroots.
pub fn solve_recursion(levi: Arc<LeviDatum>, seeds: &[Scalar], k: &Scalar) -> Result<SolverOutcome> {
    if seeds.len() != levi.complement().len() {
        return Err(Error::Precondition(format!(
            "expected {} seeds, got {}",
            levi.complement().len(),
            seeds.len()
        )));
    }
    if let Err(w) = nonzero_seeds(&levi, seeds) {
        return Ok(SolverOutcome::Inconsistent(w));
    }
    let mut coeffs = Vec::with_capacity(levi.num_positive());
    for q in 0..levi.num_positive() {
        let a = levi.quasiroot(q);
        let value = if k.is_zero() {
            let s = a
                .iter()
                .zip(seeds)
                .fold(Scalar::zero(), |acc, (&ai, ci)| acc + &Scalar::from(ai as i64) / ci);
            s.checked_inv()
        } else {
            let (mut plus, mut minus) = (Scalar::one(), Scalar::one());
            for (&ai, ci) in a.iter().zip(seeds) {
                plus *= &(ci + k).pow(ai as u32);
                minus *= &(ci - k).pow(ai as u32);
            }
            (k * &(&plus + &minus)).checked_div(&(&plus - &minus))
        };
        match value {
            Some(c) => coeffs.push(c),
            None => {
                return Ok(SolverOutcome::Inconsistent(Witness::new(
                    &levi,
                    coords(&levi, q),
                    "vanishing denominator",
                )))
            }
        }
    }
    Ok(SolverOutcome::Solved(Solution {
        bivector: InvariantBivector::new(levi, coeffs)?,
        k: k.clone(),
        sign: None,
        seeds: seeds.to_vec(),
    }))
}

/// `c(ᾱ+β̄)` from `c(ᾱ)`, `c(β̄)` via `c(ᾱ+β̄)(c(ᾱ)+c(β̄)) = c(ᾱ)c(β̄)+K²`.
pub fn combine(ca: &Scalar, cb: &Scalar, k: &Scalar) -> Option<Scalar> {
    (ca * cb + k * k).checked_div(&(ca + cb))
}

/// Admissible triples on which the two association orders of the pairwise
/// rule disagree with each other or with the stored coefficient.
pub fn association_failures(b: &InvariantBivector, k: &Scalar) -> Vec<(usize, usize, usize)> {
    let levi = &b.levi;
    let mut out = Vec::new();
    for (x, y, z) in levi.admissible_triples() {
        let xy = levi.sum(x, y).unwrap();
        let yz = levi.sum(y, z).unwrap();
        let xyz = levi.sum(xy, z).unwrap();
        let left = combine(b.coeff(xy), b.coeff(z), k);
        let right = combine(b.coeff(x), b.coeff(yz), k);
        if let (Some(l), Some(r)) = (left, right) {
            if l != r || &l != b.coeff(xyz) {
                out.push((x, y, z));
            }
        }
    }
    out
}

/// The KKS bivector `c(ᾱ) = 1/λ(ᾱ)`.
pub fn kks(levi: Arc<LeviDatum>, lambda: &LinearForm) -> InvariantBivector {
    let coeffs = (0..levi.num_positive()).map(|q| lambda.at(&levi, q).inv()).collect();
    InvariantBivector { levi, coeffs }
}

#[derive(Clone, Debug)]
pub struct SquareReport {
    /// `project([[v,v]]) − K²φ_M`.
    pub residual: Multivector,
    /// Admissible pairs `(ᾱ, β̄)`, `ᾱ ≤ β̄`, violating the pairwise relation.
    pub pair_failures: Vec<(usize, usize)>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && self.pair_failures.is_empty()
    }

    /// The multivector check and the pairwise check agree.
    pub fn consistent(&self) -> bool {
        self.residual.is_zero() == self.pair_failures.is_empty()
    }
}

pub fn pair_failures(b: &InvariantBivector, k: &Scalar) -> Vec<(usize, usize)> {
    let k2 = k * k;
    b.levi
        .admissible_pairs()
        .into_iter()
        .filter(|&(x, y)| x <= y)
        .filter(|&(x, y)| {
            let s = b.levi.sum(x, y).unwrap();
            let (cx, cy) = (b.coeff(x), b.coeff(y));
            b.coeff(s) * &(cx + cy) != &(cx * cy) + &k2
        })
        .collect()
}

pub fn verify_square(basis: &ChevalleyBasis, b: &InvariantBivector, k: &Scalar) -> Result<SquareReport> {
    let v = realize(basis, b)?;
    let vv = project_to_m(&schouten(basis, &v, &v), &b.levi);
    let residual = &vv - &phi_m(basis, &b.levi).scale(&(k * k));
    Ok(SquareReport {
        residual,
        pair_failures: pair_failures(b, k),
    })
}

/// Closed-form `[[v,w]]` for diagonal bivectors `v = Σ c_α E_α∧E_{−α}`,
/// `w = Σ d_α E_α∧E_{−α}` (coefficients per positive root):
/// each `E_{α+β}∧E_{−α}∧E_{−β}` carries
/// `N_{α,β}(c_α(d_β−d_{α+β}) + c_β(d_α−d_{α+β}) − c_{α+β}(d_α+d_β))`,
/// the θ-image supplies the mirrored terms and `2c_αd_α t_α∧E_α∧E_{−α}`
/// the Cartan part.
pub fn predicted_bracket(basis: &ChevalleyBasis, c: &[Scalar], d: &[Scalar]) -> Multivector {
    let rs = basis.root_system();
    let np = rs.num_positive();
    let mut x = Multivector::zero(3);
    for a in 0..np {
        for b in a + 1..np {
            let n = basis.structure_constant(a, b);
            if n.is_zero() {
                continue;
            }
            let sum: Vec<i32> = rs.root(a).iter().zip(rs.root(b)).map(|(p, q)| p + q).collect();
            let g = rs.index_of(&sum).expect("nonzero N implies a root");
            let coeff = &c[a] * &(&d[b] - &d[g]) + &c[b] * &(&d[a] - &d[g]) - &c[g] * &(&d[a] + &d[b]);
            x.add_term(vec![g, rs.negative(a), rs.negative(b)], &coeff.scale(n));
        }
    }
    let mut out = &x + &theta(basis, &x);
    for a in 0..np {
        let cd = &c[a] * &d[a];
        if cd.is_zero() {
            continue;
        }
        let two_cd = &cd + &cd;
        let t = Multivector::from_element(&basis.cartan_dual_element(a));
        let ef = Multivector::blade(&[a, rs.negative(a)], two_cd);
        out = &out + &t.wedge(&ef);
    }
    out
}

/// Expands class coefficients to per-positive-root coefficients.
pub fn root_coefficients(basis: &ChevalleyBasis, b: &InvariantBivector) -> Vec<Scalar> {
    let np = basis.root_system().num_positive();
    (0..np)
        .map(|a| match b.levi.class_of(a) {
            Some(q) => b.coeff(q).clone(),
            None => Scalar::zero(),
        })
        .collect()
}

/// Per-pair compatibility `[[f, v_λ]] = 0` in coefficient form.
fn compatible_pair_failures(f: &InvariantBivector, v: &InvariantBivector) -> Vec<(usize, usize)> {
    let levi = &f.levi;
    levi.admissible_pairs()
        .into_iter()
        .filter(|&(x, y)| x <= y)
        .filter(|&(x, y)| {
            let s = levi.sum(x, y).unwrap();
            let (c, d) = (f.coeffs(), v.coeffs());
            let val = &c[x] * &(&d[y] - &d[s]) + &c[y] * &(&d[x] - &d[s]) - &c[s] * &(&d[x] + &d[y]);
            !val.is_zero()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CompatibleReport {
    pub square: SquareReport,
    /// `project([[f, v_λ]])`.
    pub cross: Multivector,
    pub cross_pair_failures: Vec<(usize, usize)>,
    /// Sign recovered from the first chain relation at each ordered
    /// admissible pair, relative to chain orientation (A_k systems only).
    pub pair_signs: Vec<Option<Sign>>,
    /// Admissible triples violating the chain identity.
    pub triple_failures: Vec<(usize, usize, usize)>,
}

impl CompatibleReport {
    pub fn global_sign(&self) -> Option<Sign> {
        let first = (*self.pair_signs.first()?)?;
        self.pair_signs.iter().all(|s| *s == Some(first)).then_some(first)
    }

    pub fn passed(&self) -> bool {
        self.square.passed()
            && self.cross.is_zero()
            && self.cross_pair_failures.is_empty()
            && (self.pair_signs.is_empty() || self.global_sign().is_some())
            && self.triple_failures.is_empty()
    }
}

/// Interval `[i, j)` of a quasiroot in chain order, for `A_k` systems.
fn chain_interval(levi: &LeviDatum, chain: &[usize], q: usize) -> Option<(usize, usize)> {
    let v = levi.quasiroot(q);
    let ones: Vec<usize> = (0..chain.len()).filter(|&m| v[chain[m]] != 0).collect();
    let (&i, &j) = (ones.first()?, ones.last()?);
    Some((i, j + 1))
}

/// `+1` when the interval of `a` lies left of that of `b` along the chain.
fn orientation(levi: &LeviDatum, chain: &[usize], a: usize, b: usize) -> Option<i64> {
    let (ia, _) = chain_interval(levi, chain, a)?;
    let (ib, _) = chain_interval(levi, chain, b)?;
    Some(if ia < ib { 1 } else { -1 })
}

/// Full exact check of a candidate `f` against `K` and `v_λ`.
pub fn verify_compatible(
    basis: &ChevalleyBasis,
    f: &InvariantBivector,
    lambda: &LinearForm,
    k: &Scalar,
) -> Result<CompatibleReport> {
    let levi = f.levi.clone();
    let v = kks(levi.clone(), lambda);
    let square = verify_square(basis, f, k)?;
    let fm = realize(basis, f)?;
    let vm = realize(basis, &v)?;
    let cross = project_to_m(&schouten(basis, &fm, &vm), &levi);
    let cross_pair_failures = compatible_pair_failures(f, &v);
    let mu: Vec<Scalar> = (0..levi.num_positive())
        .map(|q| f.coeff(q) * &lambda.at(&levi, q))
        .collect();
    let lam = |q: usize| lambda.at(&levi, q);
    let mut pair_signs = Vec::new();
    let mut triple_failures = Vec::new();
    if let Some(chain) = levi.a_type_chain() {
        for (a, b) in levi.admissible_pairs() {
            let s = levi.sum(a, b).unwrap();
            let o = orientation(&levi, &chain, a, b).unwrap();
            let diff = &mu[b] - &mu[a];
            let unit = k * &lam(s);
            let sign = [1i64, -1].into_iter().find(|&e| {
                let se = Scalar::from(e);
                diff == &unit * &se && &mu[s] - &mu[a] == k * &lam(b) * se
            });
            pair_signs.push(sign.map(|e| Sign::of(e * o)));
        }
        if let Some(Some(sign)) = pair_signs.first() {
            for (a, b, c) in levi.admissible_triples() {
                let o = orientation(&levi, &chain, a, b).unwrap();
                let ab = levi.sum(a, b).unwrap();
                let bc = levi.sum(b, c).unwrap();
                let rhs = &mu[a] + &(k * &(&lam(ab) + &lam(bc))).scale(&int(sign.factor() * o));
                if mu[c] != rhs {
                    triple_failures.push((a, b, c));
                }
            }
        }
    }
    Ok(CompatibleReport {
        square,
        cross,
        cross_pair_failures,
        pair_signs,
        triple_failures,
    })
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves `[[f,f]] = K²φ_M`, `[[f,v_λ]] = 0` by propagation along the
/// `A_k` chain; returns the search witness on other quasiroot systems.
pub fn solve_compatible(
    basis: &ChevalleyBasis,
    levi: Arc<LeviDatum>,
    lambda: &LinearForm,
    k: &Scalar,
    sign: Sign,
    seed: &Scalar,
) -> Result<SolverOutcome> {
    if k.is_zero() {
        return Err(Error::Precondition("K must be nonzero".into()));
    }
    let Some(chain) = levi.a_type_chain() else {
        return match search_lattice(&levi) {
            Err(w) => Ok(SolverOutcome::Inconsistent(w)),
            Ok(_) => Err(Error::Internal(
                "lattice system solvable on a non-A_k quasiroot system".into(),
            )),
        };
    };
    let lam = |v: &[i64]| lambda.eval(v);
    let interval = |i: usize, j: usize| -> Vec<i64> {
        let mut v = vec![0i64; chain.len()];
        for &p in &chain[i..j] {
            v[p] = 1;
        }
        v
    };
    let sk = k * &Scalar::from(sign.factor());
    // μ on simple quasiroots along the chain.
    let mut mu_simple = vec![seed * &lam(&interval(0, 1))];
    for m in 1..chain.len() {
        let prev = mu_simple[m - 1].clone();
        mu_simple.push(prev + &sk * &lam(&interval(m - 1, m + 1)));
    }
    let mut coeffs = Vec::with_capacity(levi.num_positive());
    for q in 0..levi.num_positive() {
        let (i, j) = chain_interval(&levi, &chain, q).expect("positive quasiroot");
        let mu = if j == i + 1 {
            mu_simple[i].clone()
        } else {
            &mu_simple[i] + &(&sk * &lam(&interval(i + 1, j)))
        };
        coeffs.push(&mu / &lambda.at(&levi, q));
    }
    let f = InvariantBivector::new(levi, coeffs)?;
    let report = verify_compatible(basis, &f, lambda, k)?;
    if !report.passed() {
        return Err(Error::Internal("chain propagation failed exact verification".into()));
    }
    if report.global_sign().is_some_and(|s| s != sign) && !report.pair_signs.is_empty() {
        return Err(Error::Internal("recovered sign differs from requested sign".into()));
    }
    Ok(SolverOutcome::Solved(Solution {
        bivector: f,
        k: k.clone(),
        sign: Some(sign),
        seeds: vec![seed.clone()],
    }))
}

/// Symbolic solution of the compatible-pair system for generic `λ`.
///
/// Writing `c(ᾱ)λ(ᾱ) = μ₀ + K·λ(ℓ_ᾱ)` with lattice vectors `ℓ_ᾱ`, each
/// admissible pair `{ᾱ, β̄}` (sign `σ = ±1`) demands
/// `ℓ_β̄ − ℓ_ᾱ = σ(ᾱ+β̄)` and `ℓ_{ᾱ+β̄} − ℓ_ᾱ = σβ̄`. A contradiction forces
/// `λ` to vanish on a lattice vector, which is returned as the witness.
pub fn search_lattice(levi: &LeviDatum) -> std::result::Result<Vec<Vec<i64>>, Witness> {
    let np = levi.num_positive();
    let pairs: Vec<(usize, usize, usize)> = levi
        .admissible_pairs()
        .into_iter()
        .filter(|&(a, b)| a <= b)
        .map(|(a, b)| (a, b, levi.sum(a, b).unwrap()))
        .collect();
    if let Some(&(a, _, _)) = pairs.iter().find(|(a, b, _)| a == b) {
        return Err(Witness::new(levi, coords(levi, a), "doubled quasiroot forces λ = 0"));
    }
    let vecs: Vec<Vec<i64>> = (0..np).map(|q| coords(levi, q)).collect();
    let start = levi.a_type_chain().map_or(0, |c| c[0]);
    let mut ell: Vec<Option<Vec<i64>>> = vec![None; np];
    ell[levi.simple(start)] = Some(vec![0; levi.complement().len()]);
    let state = SearchState {
        ell,
        done: vec![false; pairs.len()],
    };
    let solved = search(levi, &pairs, &vecs, state)?;
    Ok(solved
        .into_iter()
        .map(|l| l.unwrap_or_else(|| vec![0; levi.complement().len()]))
        .collect())
}

#[derive(Clone)]
struct SearchState {
    ell: Vec<Option<Vec<i64>>>,
    done: Vec<bool>,
}

fn axpy(x: &[i64], s: i64, y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + s * b).collect()
}

fn primitive_witness(levi: &LeviDatum, v: &[i64]) -> Witness {
    use num_integer::Integer;
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x)).max(1);
    let mut w: Vec<i64> = v.iter().map(|x| x / g).collect();
    if w.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    Witness::new(levi, w, "λ forced to vanish")
}

/// Applies pair `(a, b, c)` with sign `s`; `Err` carries the residual of the
/// first violated relation.
fn apply_pair(
    st: &mut SearchState,
    vecs: &[Vec<i64>],
    (a, b, c): (usize, usize, usize),
    s: i64,
) -> std::result::Result<(), Vec<i64>> {
    let ab = axpy(&vecs[a], 1, &vecs[b]);
    // Offsets relative to ℓ_a.
    let rel = [(a, vec![0; ab.len()]), (b, axpy(&vec![0; ab.len()], s, &ab)), (c, axpy(&vec![0; ab.len()], s, &vecs[b]))];
    let base = rel.iter().find_map(|(q, off)| st.ell[*q].as_ref().map(|l| axpy(l, -1, off)));
    let Some(base) = base else { return Ok(()) };
    for (q, off) in &rel {
        let want = axpy(&base, 1, off);
        match &st.ell[*q] {
            Some(have) if *have != want => return Err(axpy(have, -1, &want)),
            Some(_) => {}
            None => st.ell[*q] = Some(want),
        }
    }
    Ok(())
}

fn search(
    levi: &LeviDatum,
    pairs: &[(usize, usize, usize)],
    vecs: &[Vec<i64>],
    mut st: SearchState,
) -> std::result::Result<Vec<Option<Vec<i64>>>, Witness> {
    loop {
        let known = |st: &SearchState, p: &(usize, usize, usize)| {
            [p.0, p.1, p.2].iter().filter(|q| st.ell[**q].is_some()).count()
        };
        // Forced pairs: at least two of the three values known.
        if let Some(i) = (0..pairs.len()).find(|&i| !st.done[i] && known(&st, &pairs[i]) >= 2) {
            let mut trial = st.clone();
            match apply_pair(&mut trial, vecs, pairs[i], 1) {
                Ok(()) => st = trial,
                Err(res) => {
                    let mut alt = st.clone();
                    apply_pair(&mut alt, vecs, pairs[i], -1).map_err(|_| primitive_witness(levi, &res))?;
                    st = alt;
                }
            }
            st.done[i] = true;
            continue;
        }
        let Some(i) = (0..pairs.len())
            .filter(|&i| !st.done[i])
            .max_by_key(|&i| (known(&st, &pairs[i]), std::cmp::Reverse(i)))
        else {
            return Ok(st.ell);
        };
        if known(&st, &pairs[i]) == 0 {
            // New component: anchor it arbitrarily.
            st.ell[pairs[i].0] = Some(vec![0; vecs[0].len()]);
            continue;
        }
        let mut plus = st.clone();
        plus.done[i] = true;
        apply_pair(&mut plus, vecs, pairs[i], 1).expect("one known value cannot conflict");
        let first = match search(levi, pairs, vecs, plus) {
            Ok(sol) => return Ok(sol),
            Err(w) => w,
        };
        let mut minus = st;
        minus.done[i] = true;
        apply_pair(&mut minus, vecs, pairs[i], -1).expect("one known value cannot conflict");
        return search(levi, pairs, vecs, minus).map_err(|_| first);
    }
}

/// Instantiates a lattice solution: `c(ᾱ) = (seed·λ(ᾱ_first) + K·λ(ℓ_ᾱ)) / λ(ᾱ)`.
pub fn instantiate_lattice(
    levi: Arc<LeviDatum>,
    ell: &[Vec<i64>],
    lambda: &LinearForm,
    k: &Scalar,
    seed: &Scalar,
) -> Result<InvariantBivector> {
    let start = levi.a_type_chain().map_or(0, |c| c[0]);
    let mu0 = seed * &lambda.at(&levi, levi.simple(start));
    let coeffs = (0..levi.num_positive())
        .map(|q| (&mu0 + &(k * &lambda.eval(&ell[q]))) / lambda.at(&levi, q))
        .collect();
    InvariantBivector::new(levi, coeffs)
}

/// Lattice search followed by exact verification with the given data.
pub fn compatible_by_search(
    basis: &ChevalleyBasis,
    levi: Arc<LeviDatum>,
    lambda: &LinearForm,
    k: &Scalar,
    seed: &Scalar,
) -> Result<SolverOutcome> {
    let ell = match search_lattice(&levi) {
        Ok(ell) => ell,
        Err(w) => return Ok(SolverOutcome::Inconsistent(w)),
    };
    let f = instantiate_lattice(levi, &ell, lambda, k, seed)?;
    let report = verify_compatible(basis, &f, lambda, k)?;
    if !report.passed() {
        return Err(Error::Internal("lattice solution failed exact verification".into()));
    }
    Ok(SolverOutcome::Solved(Solution {
        sign: report.global_sign(),
        bivector: f,
        k: k.clone(),
        seeds: vec![seed.clone()],
    }))
}

#[derive(Clone, Debug)]
pub struct Classification {
    /// Verdict from the highest-root criterion.
    pub closed_form: bool,
    /// Chain order of the simple quasiroots when the system is `A_k`.
    pub a_type_chain: Option<Vec<usize>>,
    /// Verdict from solving the compatible-pair system directly.
    pub solved: bool,
    pub witness: Option<Witness>,
    pub lambda: LinearForm,
}

impl Classification {
    pub fn good(&self) -> bool {
        self.closed_form
    }

    pub fn agree(&self) -> bool {
        self.closed_form == self.a_type_chain.is_some() && self.closed_form == self.solved
    }
}

/// Highest-root criterion for good orbits.
pub fn closed_form_good(levi: &LeviDatum) -> bool {
    let rs = levi.root_system();
    if rs.label() == LieType::A {
        return true;
    }
    let coeff = rs.highest_root_coefficients();
    let removed = levi.complement();
    (1..=2).contains(&removed.len()) && removed.iter().all(|&i| coeff[i] == 1)
}

/// Three independent good-orbit verdicts; `seed` drives the random `λ`.
pub fn classify_good(basis: &ChevalleyBasis, levi: Arc<LeviDatum>, seed: u64) -> Result<Classification> {
    if levi.complement().is_empty() {
        return Err(Error::InvalidGamma("Γ = Π gives a one-point orbit".into()));
    }
    let lambda = LinearForm::random(&levi, seed);
    let outcome = compatible_by_search(basis, levi.clone(), &lambda, &Scalar::one(), &Scalar::one())?;
    Ok(Classification {
        closed_form: closed_form_good(&levi),
        a_type_chain: levi.a_type_chain(),
        solved: outcome.solution().is_some(),
        witness: outcome.witness().cloned(),
        lambda,
    })
}

/// `±f₀ + s·v`.
pub fn pencil(f0: &InvariantBivector, v: &InvariantBivector, s: &Scalar, sign: Sign) -> InvariantBivector {
    f0.scale(&Scalar::from(sign.factor())).add(&v.scale(s))
}

#[derive(Clone, Debug)]
pub struct QuasiclassicalReport {
    /// `project([[f,f]]) + φ_M`; zero iff `[[f,f]] = −φ_M`.
    pub square_defect: Multivector,
    /// `f` is `g_Γ`-invariant, so `[[f, ρ(r)]] = 0` for the action-map
    /// image `ρ(r)` of the r-matrix.
    pub invariant: bool,
    /// `project([[p,p]])` for `p = f ∓ ρ(r)`, expanded as
    /// `[[f,f]]_M ∓ 2[[f,ρ(r)]] + ρ(φ)`; entries for `−` then `+`.
    pub poisson: [Multivector; 2],
    /// `project([[f, r̃]])` with the truncated `r̃`; generally nonzero, kept
    /// for diagnostics.
    pub truncated_cross: Multivector,
}

impl QuasiclassicalReport {
    pub fn passed(&self) -> bool {
        self.square_defect.is_zero() && self.invariant && self.poisson.iter().all(Multivector::is_zero)
    }
}

/// Poisson check of `{a,b} = f(a,b) ∓ {a,b}_r` on the orbit.
pub fn quasiclassical_poisson_check(basis: &ChevalleyBasis, f: &InvariantBivector) -> Result<QuasiclassicalReport> {
    let levi = &f.levi;
    let fm = realize(basis, f)?;
    let ff = project_to_m(&schouten(basis, &fm, &fm), levi);
    let phim = phi_m(basis, levi);
    let invariant = is_g_gamma_invariant(basis, levi, &fm);
    // [[ρr,ρr]] = ρ(φ) is φ_M at the base point; the cross term vanishes
    // because fundamental fields preserve the invariant f (checked above).
    let cross = Multivector::zero(3);
    let poisson = [&(&ff - &cross) + &phim, &(&ff + &cross) + &phim];
    let rt = r_matrix(basis, Some(levi));
    Ok(QuasiclassicalReport {
        square_defect: &ff + &phim,
        invariant,
        poisson,
        truncated_cross: project_to_m(&schouten(basis, &fm, &rt), levi),
    })
}

/// Map from positive quasiroot to coefficient, for reports.
pub fn labelled_coeffs(b: &InvariantBivector) -> BTreeMap<String, Scalar> {
    (0..b.levi.num_positive()).map(|q| (b.levi.label(q), b.coeff(q).clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_chevalley_basis;
    use crate::levi::build_levi;
    use crate::roots::build_root_system;

    fn setup(l: LieType, n: usize, gamma: &[usize]) -> (ChevalleyBasis, Arc<LeviDatum>) {
        let rs = Arc::new(build_root_system(l, n).unwrap());
        let basis = build_chevalley_basis(rs.clone());
        (basis, Arc::new(build_levi(rs, gamma).unwrap()))
    }

    fn sc(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn recursion_examples() {
        let (_, lv) = setup(LieType::A, 2, &[]);
        let top = lv.index_of(&[1, 1]).unwrap();
        let out = solve_recursion(lv.clone(), &sc(&[1, 1]), &Scalar::zero()).unwrap();
        assert_eq!(out.solution().unwrap().bivector.coeff(top), &Scalar::ratio(1, 2));
        let out = solve_recursion(lv.clone(), &sc(&[2, 3]), &Scalar::one()).unwrap();
        assert_eq!(out.solution().unwrap().bivector.coeff(top), &Scalar::ratio(7, 5));
        let out = solve_recursion(lv, &sc(&[0, 3]), &Scalar::one()).unwrap();
        assert_eq!(out.witness().unwrap().label, "a1");
    }

    #[test]
    fn recursion_a3_associativity() {
        let (b, lv) = setup(LieType::A, 3, &[]);
        let out = solve_recursion(lv.clone(), &sc(&[1, 1, 1]), &Scalar::one()).unwrap();
        let f = &out.solution().unwrap().bivector;
        assert_eq!(f.coeff(lv.index_of(&[1, 1, 1]).unwrap()), &Scalar::one());
        assert!(association_failures(f, &Scalar::one()).is_empty());
        assert!(verify_square(&b, f, &Scalar::one()).unwrap().passed());
    }

    #[test]
    fn recursion_vanishing_denominator() {
        // c1 = c2 = K gives P₋ = 0 on the sum … use c2 = −c1 with K = 0.
        let (_, lv) = setup(LieType::A, 2, &[]);
        let out = solve_recursion(lv, &sc(&[1, -1]), &Scalar::zero()).unwrap();
        assert_eq!(out.witness().unwrap().label, "a1+a2");
    }

    #[test]
    fn kks_a2() {
        let (b, lv) = setup(LieType::A, 2, &[]);
        let lam = LinearForm::new(&lv, sc(&[1, 2])).unwrap();
        let v = kks(lv.clone(), &lam);
        assert_eq!(v.coeffs(), &[Scalar::one(), Scalar::ratio(1, 2), Scalar::ratio(1, 3)]);
        assert!(verify_square(&b, &v, &Scalar::zero()).unwrap().passed());
    }

    #[test]
    fn linear_form_rejects_zero_on_quasiroot() {
        let (_, lv) = setup(LieType::A, 2, &[]);
        assert!(LinearForm::new(&lv, sc(&[1, -1])).is_err());
        assert!(LinearForm::new(&lv, sc(&[1])).is_err());
    }

    #[test]
    fn b2_constant_fails_at_simple_pair() {
        let (b, lv) = setup(LieType::B, 2, &[]);
        let f = InvariantBivector::new(lv.clone(), sc(&[1, 1, 1, 1])).unwrap();
        let rep = verify_square(&b, &f, &Scalar::zero()).unwrap();
        assert!(!rep.passed() && rep.consistent());
        assert!(rep.pair_failures.contains(&(lv.simple(0), lv.simple(1))));
    }

    #[test]
    fn compatible_a2_example() {
        let (b, lv) = setup(LieType::A, 2, &[]);
        let lam = LinearForm::new(&lv, sc(&[1, 1])).unwrap();
        let out = solve_compatible(&b, lv.clone(), &lam, &Scalar::one(), Sign::Plus, &Scalar::zero()).unwrap();
        let f = &out.solution().unwrap().bivector;
        assert_eq!(f.coeff(lv.simple(1)), &Scalar::from(2));
        assert_eq!(f.coeff(lv.index_of(&[1, 1]).unwrap()), &Scalar::ratio(1, 2));
        let minus = solve_compatible(&b, lv, &lam, &Scalar::one(), Sign::Minus, &Scalar::one()).unwrap();
        assert!(minus.solution().is_some());
    }

    #[test]
    fn b2_witness_is_sum_of_simples() {
        let (b, lv) = setup(LieType::B, 2, &[]);
        let lam = LinearForm::random(&lv, 7);
        let out = solve_compatible(&b, lv, &lam, &Scalar::one(), Sign::Plus, &Scalar::one()).unwrap();
        assert_eq!(out.witness().unwrap().label, "a1+a2");
    }

    #[test]
    fn search_agrees_with_chain_on_a3() {
        let (b, lv) = setup(LieType::A, 3, &[]);
        let lam = LinearForm::random(&lv, 3);
        let out = compatible_by_search(&b, lv, &lam, &Scalar::from(2), &Scalar::ratio(1, 3)).unwrap();
        assert!(out.solution().is_some());
    }

    #[test]
    fn classify_small_cases() {
        let (b, lv) = setup(LieType::D, 4, &[0, 1]);
        let c = classify_good(&b, lv, 1).unwrap();
        assert!(c.good() && c.agree());
        let (b, lv) = setup(LieType::D, 4, &[1]);
        let c = classify_good(&b, lv, 1).unwrap();
        assert!(!c.good() && c.agree());
        let (b, lv) = setup(LieType::A, 2, &[0, 1]);
        assert!(classify_good(&b, lv, 1).is_err());
    }

    #[test]
    fn predicted_bracket_matches_schouten_b2() {
        let (b, lv) = setup(LieType::B, 2, &[]);
        let c = InvariantBivector::new(lv.clone(), sc(&[2, -3, 5, 7])).unwrap();
        let d = InvariantBivector::new(lv, sc(&[1, 4, -2, 3])).unwrap();
        let (vc, vd) = (realize(&b, &c).unwrap(), realize(&b, &d).unwrap());
        let pred = predicted_bracket(&b, &root_coefficients(&b, &c), &root_coefficients(&b, &d));
        assert_eq!(schouten(&b, &vc, &vd), pred);
    }

    #[test]
    fn pencil_and_quantization() {
        let (b, lv) = setup(LieType::A, 2, &[]);
        let lam = LinearForm::new(&lv, sc(&[1, 1])).unwrap();
        let f0 = solve_compatible(&b, lv.clone(), &lam, &Scalar::one(), Sign::Plus, &Scalar::zero())
            .unwrap()
            .solution()
            .unwrap()
            .bivector
            .clone();
        let v = kks(lv.clone(), &lam);
        assert_eq!(pencil(&f0, &v, &Scalar::zero(), Sign::Plus), f0);
        let p = pencil(&f0, &v, &Scalar::one(), Sign::Plus);
        assert!(verify_square(&b, &p, &Scalar::one()).unwrap().passed());
        let f = f0.scale(&Scalar::i());
        assert!(verify_square(&b, &f, &Scalar::i()).unwrap().passed());
        let rep = quasiclassical_poisson_check(&b, &f).unwrap();
        assert!(rep.passed());
        // The literal truncated r-matrix is not compatible with f.
        assert!(!rep.truncated_cross.is_zero());
    }

    #[test]
    fn symmetric_orbit_trivial() {
        let (b, lv) = setup(LieType::C, 3, &[0, 1]);
        assert!(phi_m(&b, &lv).is_zero());
        let f = InvariantBivector::new(lv, sc(&[0])).unwrap();
        assert!(realize(&b, &f).unwrap().is_zero());
        let rep = quasiclassical_poisson_check(&b, &f).unwrap();
        assert!(rep.passed());
    }
}
