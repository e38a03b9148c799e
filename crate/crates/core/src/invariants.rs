//! The complex `(Λ•m)^{g_Γ}` with differential `δ_v = project ∘ [[v, ·]]`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::brackets::{realize, InvariantBivector};
use crate::chevalley::ChevalleyBasis;
use crate::error::{Error, Result};
use crate::levi::LeviDatum;
use crate::linalg::{nullspace, nullspace_with_free, rref, SparseEchelon, SparseVec};
use crate::multivec::{ad_action, normalize_blade, schouten_m, theta, Blade, Multivector};
use crate::scalar::Scalar;

/// Weight-zero blades of `Λ^k m`, grouped by the multiset of quasiroot
/// classes (which `g_Γ` preserves).
fn weight_zero_blocks(basis: &ChevalleyBasis, levi: &LeviDatum, k: usize) -> BTreeMap<Vec<usize>, Vec<Blade>> {
    let rs = basis.root_system();
    let m = levi.m_basis();
    let bound: Vec<i32> = rs.highest_root_coefficients();
    let mut blocks: BTreeMap<Vec<usize>, Vec<Blade>> = BTreeMap::new();
    let mut current = Vec::with_capacity(k);
    let mut sum = vec![0i32; rs.rank()];

    #[allow(clippy::too_many_arguments)]
    fn walk(
        start: usize,
        k: usize,
        m: &[usize],
        rs: &crate::roots::RootSystem,
        bound: &[i32],
        current: &mut Vec<usize>,
        sum: &mut Vec<i32>,
        out: &mut Vec<Blade>,
    ) {
        let left = k - current.len();
        if left == 0 {
            if sum.iter().all(|&x| x == 0) {
                out.push(current.clone());
            }
            return;
        }
        if sum.iter().zip(bound).any(|(s, b)| s.abs() > left as i32 * b) {
            return;
        }
        for p in start..m.len() {
            if m.len() - p < left {
                break;
            }
            let r = rs.root(m[p]);
            sum.iter_mut().zip(r).for_each(|(s, x)| *s += x);
            current.push(m[p]);
            walk(p + 1, k, m, rs, bound, current, sum, out);
            current.pop();
            sum.iter_mut().zip(r).for_each(|(s, x)| *s -= x);
        }
    }

    let mut all = Vec::new();
    walk(0, k, &m, rs, &bound, &mut current, &mut sum, &mut all);
    for blade in all {
        let mut key: Vec<usize> = blade.iter().map(|&i| levi.class_of(i).unwrap()).collect();
        key.sort_unstable();
        blocks.entry(key).or_default().push(blade);
    }
    blocks
}

fn to_sparse(u: &Multivector) -> SparseVec<Blade> {
    u.terms().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// Kernel of the stacked operators on the span of `columns`, with the free
/// column of each kernel vector.
fn kernel(columns: &[Multivector], ops: impl Fn(&Multivector) -> Vec<Multivector>) -> (Vec<usize>, Vec<Vec<Scalar>>) {
    let images: Vec<Vec<Multivector>> = columns.iter().map(&ops).collect();
    let mut rows: HashMap<(usize, Blade), usize> = HashMap::new();
    for img in &images {
        for (o, mv) in img.iter().enumerate() {
            for b in mv.terms().keys() {
                let n = rows.len();
                rows.entry((o, b.clone())).or_insert(n);
            }
        }
    }
    let mut dense = vec![vec![Scalar::zero(); columns.len()]; rows.len()];
    for (c, img) in images.iter().enumerate() {
        for (o, mv) in img.iter().enumerate() {
            for (b, x) in mv.terms() {
                dense[rows[&(o, b.clone())]][c] = x.clone();
            }
        }
    }
    nullspace_with_free(dense, columns.len())
}

fn combine(columns: &[Multivector], coeffs: &[Scalar], degree: usize) -> Multivector {
    let mut out = Multivector::zero(degree);
    for (col, c) in columns.iter().zip(coeffs) {
        if !c.is_zero() {
            out = &out + &col.scale(c);
        }
    }
    out
}

fn gamma_generators(basis: &ChevalleyBasis, levi: &LeviDatum) -> Vec<crate::chevalley::Element> {
    let rs = basis.root_system();
    levi.gamma()
        .iter()
        .flat_map(|&g| {
            let e = rs.simple(g);
            [basis.basis_element(e), basis.basis_element(rs.negative(e))]
        })
        .collect()
}

/// A basis of `(Λ^k m)^{g_Γ}`.
pub fn invariant_basis(basis: &ChevalleyBasis, levi: &LeviDatum, k: usize) -> Vec<Multivector> {
    pivoted_basis(basis, levi, k).into_iter().map(|(m, _)| m).collect()
}

/// Basis vectors paired with a blade on which that vector has coefficient 1
/// and every other basis vector has coefficient 0.
fn pivoted_basis(basis: &ChevalleyBasis, levi: &LeviDatum, k: usize) -> Vec<(Multivector, Blade)> {
    if k == 0 {
        return vec![(Multivector::scalar(Scalar::one()), Vec::new())];
    }
    let gens = gamma_generators(basis, levi);
    let mut out = Vec::new();
    for blades in weight_zero_blocks(basis, levi, k).into_values() {
        let cols: Vec<Multivector> = blades.iter().map(|b| Multivector::blade(b, Scalar::one())).collect();
        if gens.is_empty() {
            out.extend(cols.into_iter().zip(blades));
            continue;
        }
        let (free, vecs) = kernel(&cols, |u| gens.iter().map(|g| ad_action(basis, g, u)).collect());
        for (f, x) in free.into_iter().zip(vecs) {
            out.push((combine(&cols, &x, k), blades[f].clone()));
        }
    }
    out
}

/// `(θ-invariant, θ-anti-invariant)` bases of the span of `family`.
pub fn theta_split(basis: &ChevalleyBasis, family: &[Multivector]) -> (Vec<Multivector>, Vec<Multivector>) {
    let Some(first) = family.first() else {
        return (Vec::new(), Vec::new());
    };
    let degree = first.degree();
    let split = |sign: i64| -> Vec<Multivector> {
        let s = Scalar::from(sign);
        kernel(family, |u| vec![&theta(basis, u) - &u.scale(&s)])
            .1
            .iter()
            .map(|x| combine(family, x, degree))
            .filter(|m| !m.is_zero())
            .collect()
    };
    (split(1), split(-1))
}

/// Whether `u` lies in the span of `family`.
pub fn in_span(family: &[Multivector], u: &Multivector) -> bool {
    let mut e = SparseEchelon::new();
    for f in family {
        e.insert(to_sparse(f));
    }
    e.contains(to_sparse(u))
}

/// Invariant polyvectors of every degree `0..=dim m`.
#[derive(Clone, Debug)]
pub struct InvariantComplex {
    levi: Arc<LeviDatum>,
    bases: Vec<Vec<Multivector>>,
    pivots: Vec<Vec<Blade>>,
}

/// Cohomology of `δ_v` on an invariant complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub betti: Vec<usize>,
}

impl InvariantComplex {
    pub fn build(basis: &ChevalleyBasis, levi: Arc<LeviDatum>) -> Self {
        let (bases, pivots) = (0..=levi.dim_m())
            .map(|k| pivoted_basis(basis, &levi, k).into_iter().unzip())
            .unzip();
        InvariantComplex { levi, bases, pivots }
    }

    pub fn levi(&self) -> &Arc<LeviDatum> {
        &self.levi
    }

    pub fn basis(&self, k: usize) -> &[Multivector] {
        &self.bases[k]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    /// `δ_v u = project([[v, u]])`.
    pub fn differential(&self, basis: &ChevalleyBasis, v: &Multivector, u: &Multivector) -> Multivector {
        schouten_m(basis, &self.levi, v, u)
    }

    /// Coordinates of an invariant `w ∈ C_k` in the stored basis; `None`
    /// if `w` is not in the span.
    pub fn coordinates(&self, k: usize, w: &Multivector) -> Option<Vec<Scalar>> {
        let x: Vec<Scalar> = self.pivots[k].iter().map(|p| w.coeff(p)).collect();
        (combine(&self.bases[k], &x, k) == *w).then_some(x)
    }

    /// Matrix of `δ_v: C_k → C_{k+1}`, one row per source basis vector.
    pub fn differential_matrix(&self, basis: &ChevalleyBasis, v: &Multivector, k: usize) -> Result<Vec<Vec<Scalar>>> {
        if k + 1 >= self.bases.len() {
            return Ok(vec![Vec::new(); self.bases[k].len()]);
        }
        self.bases[k]
            .iter()
            .map(|u| {
                let img = self.differential(basis, v, u);
                self.coordinates(k + 1, &img)
                    .ok_or_else(|| Error::Internal(format!("δ leaves the invariant complex in degree {k}")))
            })
            .collect()
    }

    /// Betti numbers of `δ_v`; fails if `δ_v² ≠ 0`.
    pub fn cohomology(&self, basis: &ChevalleyBasis, v: &InvariantBivector) -> Result<Cohomology> {
        let vm = realize(basis, v)?;
        let dims = self.dims();
        let mats: Vec<Vec<Vec<Scalar>>> = (0..dims.len())
            .map(|k| self.differential_matrix(basis, &vm, k))
            .collect::<Result<_>>()?;
        for k in 0..dims.len().saturating_sub(1) {
            for row in &mats[k] {
                for col in 0..dims.get(k + 2).copied().unwrap_or(0) {
                    let s = row
                        .iter()
                        .zip(&mats[k + 1])
                        .fold(Scalar::zero(), |acc, (a, r)| if a.is_zero() { acc } else { acc + a * &r[col] });
                    if !s.is_zero() {
                        return Err(Error::Internal(format!("δ² ≠ 0 in degree {k}")));
                    }
                }
            }
        }
        let ranks: Vec<usize> = mats
            .into_iter()
            .enumerate()
            .map(|(k, mut m)| {
                let ncols = dims.get(k + 1).copied().unwrap_or(0);
                rref(&mut m, ncols).len()
            })
            .collect();
        let betti = (0..dims.len())
            .map(|k| dims[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
            .collect();
        Ok(Cohomology { dims, ranks, betti })
    }
}

/// Betti numbers of `δ_v` on the full invariant complex.
pub fn betti_numbers(basis: &ChevalleyBasis, v: &InvariantBivector) -> Result<Vec<usize>> {
    let complex = InvariantComplex::build(basis, v.levi().clone());
    Ok(complex.cohomology(basis, v)?.betti)
}

/// Dimension of `g_Γ`-invariants in `m_ᾱ ⊗ m_β̄ ⊗ m_{−(ᾱ+β̄)}`, i.e. the
/// multiplicity of `m_{ᾱ+β̄}` in `m_ᾱ ⊗ m_β̄`.
pub fn tensor_multiplicity(basis: &ChevalleyBasis, levi: &LeviDatum, a: usize, b: usize) -> Result<usize> {
    let s = levi
        .sum(a, b)
        .ok_or_else(|| Error::Precondition(format!("{} + {} is not a quasiroot", levi.label(a), levi.label(b))))?;
    let rs = basis.root_system();
    let neg = levi.negative(s);
    let mut tuples: Vec<[usize; 3]> = Vec::new();
    for &x in levi.class(a) {
        for &y in levi.class(b) {
            for &z in levi.class(neg) {
                let zero = (0..rs.rank()).all(|i| rs.root(x)[i] + rs.root(y)[i] + rs.root(z)[i] == 0);
                if zero {
                    tuples.push([x, y, z]);
                }
            }
        }
    }
    let gens = gamma_generators(basis, levi);
    if gens.is_empty() {
        return Ok(tuples.len());
    }
    // Ordered tensors: ad acts as a derivation without reordering.
    let mut rows: HashMap<(usize, [usize; 3]), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    for (c, t) in tuples.iter().enumerate() {
        for (o, g) in gens.iter().enumerate() {
            for (&p, gc) in g {
                for slot in 0..3 {
                    for (z, coeff) in basis.bracket_basis(p, t[slot]) {
                        let mut img = *t;
                        img[slot] = z;
                        let n = rows.len();
                        let r = *rows.entry((o, img)).or_insert(n);
                        entries.push((r, c, gc.scale(&coeff)));
                    }
                }
            }
        }
    }
    let mut dense = vec![vec![Scalar::zero(); tuples.len()]; rows.len()];
    for (r, c, x) in entries {
        dense[r][c] += &x;
    }
    Ok(nullspace(dense, tuples.len()).len())
}

/// Sorted-blade helper for callers building polyvectors by hand.
pub fn blade_of(indices: &[usize]) -> Option<(Blade, bool)> {
    let mut b = indices.to_vec();
    normalize_blade(&mut b).map(|neg| (b, neg))
}
