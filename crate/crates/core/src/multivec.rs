//! Sparse exterior algebra `Λ•g` over ℚ(i) and the Schouten bracket.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::chevalley::{ChevalleyBasis, Element};
use crate::levi::LeviDatum;
use crate::scalar::Scalar;

/// Index tuple of a basis blade, strictly increasing.
pub type Blade = Vec<usize>;

/// A homogeneous element of `Λ^k g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Multivector {
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats (the blade vanishes).
pub fn normalize_blade(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(negative)
}

impl Multivector {
    pub fn zero(degree: usize) -> Self {
        Multivector {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar `c` in degree zero.
    pub fn scalar(c: Scalar) -> Self {
        let mut m = Multivector::zero(0);
        m.add_term(Vec::new(), &c);
        m
    }

    pub fn from_element(x: &Element) -> Self {
        let mut m = Multivector::zero(1);
        for (&i, c) in x {
            m.add_term(vec![i], c);
        }
        m
    }

    /// `c · b_{i_1} ∧ … ∧ b_{i_k}` for an arbitrary index order.
    pub fn blade(indices: &[usize], c: Scalar) -> Self {
        let mut m = Multivector::zero(indices.len());
        m.add_term(indices.to_vec(), &c);
        m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Coefficient of the blade with the given (sorted) indices.
    pub fn coeff(&self, blade: &[usize]) -> Scalar {
        self.terms.get(blade).cloned().unwrap_or_default()
    }

    /// Adds `c · b_{idx}` with sign normalization.
    pub fn add_term(&mut self, mut idx: Blade, c: &Scalar) {
        assert_eq!(idx.len(), self.degree, "degree mismatch");
        let Some(neg) = normalize_blade(&mut idx) else {
            return;
        };
        self.add_sorted(idx, if neg { -c } else { c.clone() });
    }

    fn add_sorted(&mut self, idx: Blade, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Multivector::zero(self.degree);
        }
        Multivector {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn retain(&self, mut keep: impl FnMut(&[usize]) -> bool) -> Self {
        Multivector {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Multivector) -> Multivector {
        let mut out = Multivector::zero(self.degree + other.degree);
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                let mut idx = x.clone();
                idx.extend_from_slice(y);
                let Some(neg) = normalize_blade(&mut idx) else {
                    continue;
                };
                let c = a * b;
                out.add_sorted(idx, if neg { -c } else { c });
            }
        }
        out
    }

    /// Human-readable form using basis labels.
    pub fn display<'a>(&'a self, basis: &'a ChevalleyBasis) -> impl fmt::Display + 'a {
        DisplayMv { mv: self, basis }
    }
}

struct DisplayMv<'a> {
    mv: &'a Multivector,
    basis: &'a ChevalleyBasis,
}

impl fmt::Display for DisplayMv<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mv.is_zero() {
            return write!(f, "0");
        }
        for (n, (blade, c)) in self.mv.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for &i in blade {
                write!(f, "·{}", basis_label(self.basis, i))?;
            }
        }
        Ok(())
    }
}

/// `E[1,0,1]` for root vectors, `h2` for simple coroots (1-based).
pub fn basis_label(basis: &ChevalleyBasis, idx: usize) -> String {
    if basis.is_cartan(idx) {
        format!("h{}", idx - basis.root_system().len() + 1)
    } else {
        let r = basis.root_system().root(idx);
        let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        format!("E[{}]", parts.join(","))
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_sorted(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

/// Schouten bracket
/// `[[X_1∧…∧X_k, Y_1∧…∧Y_l]] = Σ (-1)^{i+j} [X_i,Y_j] ∧ X_1…X̂_i…X_k ∧ Y_1…Ŷ_j…Y_l`.
pub fn schouten(basis: &ChevalleyBasis, u: &Multivector, v: &Multivector) -> Multivector {
    schouten_filtered(basis, u, v, |_| true)
}

/// `project_to_m([[u, v]])` for `u, v ∈ Λ•m`, skipping discarded terms early.
pub fn schouten_m(basis: &ChevalleyBasis, levi: &LeviDatum, u: &Multivector, v: &Multivector) -> Multivector {
    let keep = |z: usize| levi.is_m_index(z);
    if u.terms.keys().chain(v.terms.keys()).flatten().all(|&i| keep(i)) {
        schouten_filtered(basis, u, v, keep)
    } else {
        project_to_m(&schouten(basis, u, v), levi)
    }
}

fn schouten_filtered(
    basis: &ChevalleyBasis,
    u: &Multivector,
    v: &Multivector,
    keep: impl Fn(usize) -> bool,
) -> Multivector {
    let (k, l) = (u.degree, v.degree);
    if k == 0 || l == 0 {
        return Multivector::zero((k + l).saturating_sub(1));
    }
    let mut out = Multivector::zero(k + l - 1);
    let mut idx = Vec::with_capacity(k + l - 1);
    for (x, a) in &u.terms {
        for (y, b) in &v.terms {
            let ab = a * b;
            for i in 0..k {
                for j in 0..l {
                    let odd = (i + j) % 2 == 1;
                    for (z, c) in basis.bracket_basis(x[i], y[j]) {
                        if !keep(z) {
                            continue;
                        }
                        idx.clear();
                        idx.push(z);
                        idx.extend(x.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &q)| q));
                        idx.extend(y.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &q)| q));
                        let Some(neg) = normalize_blade(&mut idx) else {
                            continue;
                        };
                        let term = ab.scale(&c);
                        out.add_sorted(idx.clone(), if neg != odd { -term } else { term });
                    }
                }
            }
        }
    }
    out
}

/// Derivation extension of `ad x` to `Λ•g`.
pub fn ad_action(basis: &ChevalleyBasis, x: &Element, u: &Multivector) -> Multivector {
    let mut out = Multivector::zero(u.degree);
    for (&p, a) in x {
        for (blade, b) in &u.terms {
            let ab = a * b;
            for j in 0..blade.len() {
                for (z, c) in basis.bracket_basis(p, blade[j]) {
                    let mut idx = blade.clone();
                    idx[j] = z;
                    let Some(neg) = normalize_blade(&mut idx) else {
                        continue;
                    };
                    let term = ab.scale(&c);
                    out.add_sorted(idx, if neg { -term } else { term });
                }
            }
        }
    }
    out
}

/// Cartan involution extended multiplicatively.
pub fn theta(basis: &ChevalleyBasis, u: &Multivector) -> Multivector {
    let mut out = Multivector::zero(u.degree);
    for (blade, a) in &u.terms {
        let mut idx = Vec::with_capacity(blade.len());
        let mut c = a.clone();
        for &i in blade {
            let (j, s) = basis.theta_basis(i);
            idx.push(j);
            c = c.scale(&s);
        }
        out.add_term(idx, &c);
    }
    out
}

/// Drops every term with a factor in `g_Γ`.
pub fn project_to_m(u: &Multivector, levi: &LeviDatum) -> Multivector {
    u.retain(|blade| blade.iter().all(|&i| levi.is_m_index(i)))
}

/// `r = Σ_{α>0} E_α ∧ E_{-α}`, or the truncation to `α ∉ Ω_Γ`.
pub fn r_matrix(basis: &ChevalleyBasis, levi: Option<&LeviDatum>) -> Multivector {
    let rs = basis.root_system();
    let mut r = Multivector::zero(2);
    for a in 0..rs.num_positive() {
        if levi.is_some_and(|l| !l.is_m_index(a)) {
            continue;
        }
        r.add_term(vec![a, rs.negative(a)], &Scalar::one());
    }
    r
}

/// `φ = [[r, r]]`.
pub fn phi(basis: &ChevalleyBasis) -> Multivector {
    let r = r_matrix(basis, None);
    schouten(basis, &r, &r)
}
