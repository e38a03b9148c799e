//! Chevalley-type basis of a simple Lie algebra, rescaled to the Killing
//! normalization `K(E_α, E_{-α}) = 1`.
//!
//! Basis indices: `0..|Ω|` are the root vectors `E_α` in the order of
//! [`RootSystem::roots`], and `|Ω|..|Ω|+rank` are the simple coroots
//! `h_i = α_i^∨` spanning the Cartan subalgebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::roots::RootSystem;
use crate::scalar::Scalar;

/// A Lie algebra element as a sparse coordinate vector.
pub type Element = BTreeMap<usize, Scalar>;

/// `[b_i, b_j] = Σ coeff · b_k` for two basis vectors.
pub type BasisBracket = Vec<(usize, BigRational)>;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    roots: Arc<RootSystem>,
    /// Integral structure constants of the unnormalized Chevalley basis
    /// `e_α`, indexed `[a * |Ω| + b]`.
    chevalley_n: Vec<i64>,
    /// `K(e_α, e_{-α})` per root (symmetric under negation).
    kappa: Vec<BigRational>,
    /// Structure constants `N_{α,β}` of the normalized basis `E_α`.
    n: Vec<BigRational>,
    /// `t_α = [E_α, E_{-α}]` in coroot coordinates.
    t: Vec<Vec<BigRational>>,
    killing: Vec<Vec<BigRational>>,
}

impl ChevalleyBasis {
    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.roots
    }

    /// `dim g = |Ω| + rank`.
    pub fn dim(&self) -> usize {
        self.roots.len() + self.roots.rank()
    }

    pub fn is_cartan(&self, idx: usize) -> bool {
        idx >= self.roots.len()
    }

    pub fn cartan_index(&self, i: usize) -> usize {
        self.roots.len() + i
    }

    /// Weight of a basis vector in simple-root coordinates (zero for Cartan).
    pub fn weight(&self, idx: usize) -> Vec<i32> {
        if self.is_cartan(idx) {
            vec![0; self.roots.rank()]
        } else {
            self.roots.root(idx).clone()
        }
    }

    /// `N_{α,β}` in the Killing-normalized basis, zero when `α+β` is not a root.
    pub fn structure_constant(&self, a: usize, b: usize) -> &BigRational {
        &self.n[a * self.roots.len() + b]
    }

    /// Structure constant of the integral Chevalley basis before rescaling.
    pub fn chevalley_structure_constant(&self, a: usize, b: usize) -> i64 {
        self.chevalley_n[a * self.roots.len() + b]
    }

    /// `K(e_α, e_{-α})` in the integral Chevalley basis.
    pub fn chevalley_killing(&self, a: usize) -> &BigRational {
        &self.kappa[a]
    }

    /// `t_α` in coroot coordinates.
    pub fn cartan_dual(&self, a: usize) -> &[BigRational] {
        &self.t[a]
    }

    /// `t_α` as an element.
    pub fn cartan_dual_element(&self, a: usize) -> Element {
        self.t[a]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.cartan_index(i), Scalar::from(c.clone())))
            .collect()
    }

    /// Gram matrix of the Killing form on the full basis.
    pub fn killing_gram(&self) -> &[Vec<BigRational>] {
        &self.killing
    }

    /// `α(h)` for a Cartan element given in coroot coordinates.
    pub fn evaluate_root(&self, a: usize, h: &[BigRational]) -> BigRational {
        let root = self.roots.root(a);
        h.iter()
            .enumerate()
            .map(|(i, c)| c * int(self.roots.pairing_with_coroot(root, i) as i64))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Bracket of two basis vectors.
    pub fn bracket_basis(&self, i: usize, j: usize) -> BasisBracket {
        let nr = self.roots.len();
        match (i < nr, j < nr) {
            (true, true) => {
                if self.roots.negative(i) == j {
                    self.t[i]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (nr + k, c.clone()))
                        .collect()
                } else {
                    let c = &self.n[i * nr + j];
                    if c.is_zero() {
                        Vec::new()
                    } else {
                        let sum: Vec<i32> = self
                            .roots
                            .root(i)
                            .iter()
                            .zip(self.roots.root(j))
                            .map(|(x, y)| x + y)
                            .collect();
                        vec![(self.roots.index_of(&sum).expect("root sum"), c.clone())]
                    }
                }
            }
            (false, true) => {
                let k = self.roots.pairing_with_coroot(self.roots.root(j), i - nr);
                if k == 0 {
                    Vec::new()
                } else {
                    vec![(j, int(k as i64))]
                }
            }
            (true, false) => {
                let k = self.roots.pairing_with_coroot(self.roots.root(i), j - nr);
                if k == 0 {
                    Vec::new()
                } else {
                    vec![(i, int(-k as i64))]
                }
            }
            (false, false) => Vec::new(),
        }
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let ab = a * b;
                for (k, c) in self.bracket_basis(i, j) {
                    *out.entry(k).or_default() += &ab.scale(&c);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Cartan involution on a basis vector: `θ(b_i) = coeff · b_j`.
    pub fn theta_basis(&self, i: usize) -> (usize, BigRational) {
        if self.is_cartan(i) {
            (i, -BigRational::one())
        } else if self.roots.is_positive(i) {
            (self.roots.negative(i), -self.kappa[i].clone())
        } else {
            (self.roots.negative(i), -self.kappa[i].recip())
        }
    }

    pub fn cartan_involution(&self, x: &Element) -> Element {
        x.iter()
            .map(|(&i, a)| {
                let (j, c) = self.theta_basis(i);
                (j, a.scale(&c))
            })
            .collect()
    }

    /// `K(x, y) = tr(ad x ∘ ad y)` by direct summation over the basis.
    pub fn killing_trace(&self, x: &Element, y: &Element) -> Scalar {
        let mut acc = Scalar::zero();
        for b in 0..self.dim() {
            let unit: Element = [(b, Scalar::one())].into_iter().collect();
            let inner = self.bracket(y, &unit);
            if let Some(c) = self.bracket(x, &inner).get(&b) {
                acc += c;
            }
        }
        acc
    }

    pub fn basis_element(&self, i: usize) -> Element {
        [(i, Scalar::one())].into_iter().collect()
    }

    /// Number of basis triples `i < j < k` violating the Jacobi identity.
    pub fn jacobi_violations(&self) -> usize {
        let dim = self.dim();
        let e: Vec<Element> = (0..dim).map(|i| self.basis_element(i)).collect();
        let mut bad = 0;
        for i in 0..dim {
            for j in i + 1..dim {
                let ij = self.bracket(&e[i], &e[j]);
                for k in j + 1..dim {
                    let mut sum = self.bracket(&e[k], &ij);
                    let jk = self.bracket(&e[j], &e[k]);
                    let ki = self.bracket(&e[k], &e[i]);
                    for (idx, v) in self.bracket(&e[i], &jk).into_iter().chain(self.bracket(&e[j], &ki)) {
                        *sum.entry(idx).or_default() += &v;
                    }
                    if sum.values().any(|v| !v.is_zero()) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// Root triples `α+β+γ = 0` with `N_{α,β} = N_{β,γ} = N_{γ,α}` failing.
    pub fn cyclic_violations(&self) -> usize {
        let rs = &self.roots;
        let mut bad = 0;
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                let s: Vec<i32> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| -(x + y)).collect();
                let Some(c) = rs.index_of(&s) else { continue };
                let n = self.structure_constant(a, b);
                if n != self.structure_constant(b, c) || n != self.structure_constant(c, a) {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Roots with `tr(ad E_α ad E_{−α}) ≠ 1`, computed from the bracket.
    pub fn killing_violations(&self) -> usize {
        (0..self.roots.len())
            .filter(|&a| {
                let k = self.killing_trace(&self.basis_element(a), &self.basis_element(self.roots.negative(a)));
                k != Scalar::one()
            })
            .count()
    }
}

/// Integral structure constants from extraspecial pairs with positive sign.
fn chevalley_constants(rs: &RootSystem) -> Vec<i64> {
    let nr = rs.len();
    let np = rs.num_positive();
    let len2: Vec<BigRational> = rs.roots().iter().map(|r| rs.inner(r, r)).collect();
    let add = |a: usize, b: usize| -> Option<usize> {
        let s: Vec<i32> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| x + y).collect();
        rs.index_of(&s)
    };
    let string_p = |a: usize, b: usize| -> i64 {
        let mut p = 0;
        let mut v = rs.root(b).clone();
        loop {
            for (x, y) in v.iter_mut().zip(rs.root(a)) {
                *x -= y;
            }
            if rs.is_root(&v) {
                p += 1;
            } else {
                return p;
            }
        }
    };

    // positive pairs (a, b) with a < b; filled by increasing height of a + b
    let mut table: HashMap<(usize, usize), i64> = HashMap::new();

    fn general(
        rs: &RootSystem,
        table: &HashMap<(usize, usize), i64>,
        len2: &[BigRational],
        a: usize,
        b: usize,
    ) -> i64 {
        let s: Vec<i32> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| x + y).collect();
        let Some(c) = rs.index_of(&s) else {
            return 0;
        };
        let (pa, pb, pc) = (rs.is_positive(a), rs.is_positive(b), rs.is_positive(c));
        let scaled = |num: &BigRational, den: &BigRational, v: i64| -> i64 {
            (num / den * int(v)).to_integer().to_i64().expect("integral N")
        };
        match (pa, pb) {
            (true, true) => {
                if a < b {
                    table[&(a, b)]
                } else {
                    -table[&(b, a)]
                }
            }
            (false, false) => -general(rs, table, len2, rs.negative(a), rs.negative(b)),
            (true, false) => {
                let nc = rs.negative(c);
                if pc {
                    scaled(&len2[c], &len2[a], general(rs, table, len2, b, nc))
                } else {
                    scaled(&len2[c], &len2[b], general(rs, table, len2, nc, a))
                }
            }
            (false, true) => {
                let nc = rs.negative(c);
                if pc {
                    scaled(&len2[c], &len2[b], general(rs, table, len2, nc, a))
                } else {
                    scaled(&len2[c], &len2[a], general(rs, table, len2, b, nc))
                }
            }
        }
    }

    for xi in 0..np {
        let decomps: Vec<(usize, usize)> = (0..xi)
            .filter_map(|z| {
                let d: Vec<i32> = rs.root(xi).iter().zip(rs.root(z)).map(|(x, y)| x - y).collect();
                rs.index_of(&d).filter(|&e| e > z && e < np).map(|e| (z, e))
            })
            .collect();
        let Some(&(alpha, beta)) = decomps.first() else {
            continue;
        };
        let n_ab = string_p(alpha, beta) + 1;
        table.insert((alpha, beta), n_ab);
        for &(zeta, eta) in &decomps[1..] {
            let mut acc = BigRational::zero();
            let nz = rs.negative(zeta);
            let ne = rs.negative(eta);
            let bz = general(rs, &table, &len2, beta, nz);
            if bz != 0 {
                let d = add(beta, nz).unwrap();
                acc += int(bz * general(rs, &table, &len2, alpha, ne)) / &len2[d];
            }
            let za = general(rs, &table, &len2, nz, alpha);
            if za != 0 {
                let d = add(alpha, nz).unwrap();
                acc += int(za * general(rs, &table, &len2, beta, ne)) / &len2[d];
            }
            let v = (&len2[xi] / int(n_ab) * acc).to_integer().to_i64().expect("integral N");
            table.insert((zeta, eta), v);
        }
    }

    let mut out = vec![0i64; nr * nr];
    for a in 0..nr {
        for b in 0..nr {
            out[a * nr + b] = general(rs, &table, &len2, a, b);
        }
    }
    out
}

/// Builds the Killing-normalized basis.
pub fn build_chevalley_basis(roots: Arc<RootSystem>) -> ChevalleyBasis {
    let rs = &*roots;
    let nr = rs.len();
    let rank = rs.rank();
    let chevalley_n = chevalley_constants(rs);
    let coroots: Vec<Vec<BigRational>> = (0..nr).map(|a| rs.coroot(a)).collect();

    // unnormalized basis: [e_a, e_{-a}] = h_a, N from the table
    let mut raw = ChevalleyBasis {
        roots: roots.clone(),
        chevalley_n: chevalley_n.clone(),
        kappa: vec![BigRational::one(); nr],
        n: chevalley_n.iter().map(|&v| int(v)).collect(),
        t: coroots.clone(),
        killing: Vec::new(),
    };
    let kappa: Vec<BigRational> = (0..nr)
        .map(|a| {
            let x = raw.basis_element(a);
            let y = raw.basis_element(rs.negative(a));
            raw.killing_trace(&x, &y).re().clone()
        })
        .collect();
    raw.kappa = kappa.clone();

    // E_a = e_a for a > 0, E_{-a} = e_{-a} / kappa_a
    let scale = |a: usize| -> BigRational {
        if rs.is_positive(a) {
            BigRational::one()
        } else {
            kappa[a].recip()
        }
    };
    let mut n = vec![BigRational::zero(); nr * nr];
    for a in 0..nr {
        for b in 0..nr {
            let v = chevalley_n[a * nr + b];
            if v == 0 {
                continue;
            }
            let s: Vec<i32> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| x + y).collect();
            let c = rs.index_of(&s).unwrap();
            n[a * nr + b] = int(v) * scale(a) * scale(b) / scale(c);
        }
    }
    let t: Vec<Vec<BigRational>> = (0..nr)
        .map(|a| coroots[a].iter().map(|c| c / &kappa[a]).collect())
        .collect();
    let mut basis = ChevalleyBasis {
        roots: roots.clone(),
        chevalley_n,
        kappa,
        n,
        t,
        killing: Vec::new(),
    };

    let dim = nr + rank;
    let mut gram = vec![vec![BigRational::zero(); dim]; dim];
    for a in 0..nr {
        let x = basis.basis_element(a);
        let y = basis.basis_element(rs.negative(a));
        gram[a][rs.negative(a)] = basis.killing_trace(&x, &y).re().clone();
    }
    for i in 0..rank {
        for j in i..rank {
            let x = basis.basis_element(nr + i);
            let y = basis.basis_element(nr + j);
            let v = basis.killing_trace(&x, &y).re().clone();
            gram[nr + i][nr + j] = v.clone();
            gram[nr + j][nr + i] = v;
        }
    }
    basis.killing = gram;
    debug_assert!(basis.kappa.iter().all(|k| k.is_positive()));
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, LieType};

    fn basis(l: char, n: usize) -> ChevalleyBasis {
        build_chevalley_basis(Arc::new(
            build_root_system(LieType::from_char(l).unwrap(), n).unwrap(),
        ))
    }

    #[test]
    fn a1_cartan_dual_pairing() {
        let b = basis('A', 1);
        let v = b.evaluate_root(0, b.cartan_dual(0));
        assert_eq!(v, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn unnormalized_constants_are_string_lengths() {
        for (l, n) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('F', 4), ('D', 4)] {
            let b = basis(l, n);
            let rs = b.root_system().clone();
            for a in 0..rs.len() {
                for c in 0..rs.len() {
                    let v = b.chevalley_structure_constant(a, c);
                    let s: Vec<i32> = rs.root(a).iter().zip(rs.root(c)).map(|(x, y)| x + y).collect();
                    if !rs.is_root(&s) {
                        assert_eq!(v, 0);
                        continue;
                    }
                    let mut p = 0;
                    let mut w = rs.root(c).clone();
                    loop {
                        for (x, y) in w.iter_mut().zip(rs.root(a)) {
                            *x -= y;
                        }
                        if !rs.is_root(&w) {
                            break;
                        }
                        p += 1;
                    }
                    assert_eq!(v.abs(), p + 1, "{l}{n}");
                }
            }
        }
    }

    #[test]
    fn a2_simple_pair_and_cyclic_triple() {
        let b = basis('A', 2);
        let rs = b.root_system();
        let a1 = rs.simple(0);
        let a2 = rs.simple(1);
        let top = rs.index_of(&[1, 1]).unwrap();
        assert_eq!(b.chevalley_structure_constant(a1, a2).abs(), 1);
        let g = rs.negative(top);
        let n_ab = b.structure_constant(a1, a2);
        assert_eq!(n_ab, b.structure_constant(a2, g));
        assert_eq!(n_ab, b.structure_constant(g, a1));
    }

    #[test]
    fn killing_normalization_and_theta_squares() {
        let b = basis('B', 3);
        let rs = b.root_system().clone();
        for a in 0..rs.len() {
            assert!(b.killing_gram()[a][rs.negative(a)].is_one());
            let (j, c) = b.theta_basis(a);
            let (k, d) = b.theta_basis(j);
            assert_eq!(k, a);
            assert!((c * d).is_one());
        }
    }

    #[test]
    fn jacobi_small_types() {
        for (l, n) in [('A', 1), ('A', 2), ('B', 2), ('G', 2), ('C', 3)] {
            assert_eq!(basis(l, n).jacobi_violations(), 0, "{l}{n}");
        }
    }

    #[test]
    fn theta_is_automorphism_on_a2() {
        let b = basis('A', 2);
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let x = b.basis_element(i);
                let y = b.basis_element(j);
                let lhs = b.cartan_involution(&b.bracket(&x, &y));
                let rhs = b.bracket(&b.cartan_involution(&x), &b.cartan_involution(&y));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
