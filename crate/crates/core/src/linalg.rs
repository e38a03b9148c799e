//! Exact linear algebra over ℚ(i).

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// A sparse vector keyed by coordinate.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for a dense `rows × ncols` matrix.
pub fn nullspace(rows: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    nullspace_with_free(rows, ncols).1
}

/// Kernel basis together with the free column of each vector; vector `j`
/// is 1 on its own free column and 0 on every other free column.
pub fn nullspace_with_free(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<usize>, Vec<Vec<Scalar>>) {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect();
    (free, basis)
}

/// Incremental echelon basis of sparse vectors; rank is the number of
/// accepted vectors.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        // Pivots are the leading keys of each stored row; eliminate in key order.
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => v
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(k) = next else { break };
            let f = v[&k].clone();
            for (kk, x) in &self.rows[&k] {
                let e = v.entry(kk.clone()).or_insert_with(Scalar::zero);
                *e -= &(&f * x);
                if e.is_zero() {
                    v.remove(kk);
                }
            }
            cursor = Some(k);
        }
        v
    }

    /// Adds `v`; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let v = self.reduce(v);
        let Some((lead, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv();
        let v: SparseVec<K> = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(lead, v);
        true
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<K: Ord + Clone>(vectors: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut e = SparseEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from(x)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for r in &rows {
                let dot = r.iter().zip(&v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn complex_pivot() {
        let rows = vec![vec![Scalar::i(), s(1)]];
        let ns = nullspace(rows, 2);
        assert_eq!(ns, vec![vec![Scalar::i(), s(1)]]);
    }

    #[test]
    fn sparse_rank_detects_dependence() {
        let v = |pairs: &[(u32, i64)]| -> SparseVec<u32> { pairs.iter().map(|&(k, x)| (k, s(x))).collect() };
        let fam = vec![v(&[(1, 1), (3, 2)]), v(&[(3, 1), (5, 1)]), v(&[(1, 1), (3, 4), (5, 2)])];
        assert_eq!(sparse_rank(fam), 2);
        let mut e = SparseEchelon::new();
        e.insert(v(&[(2, 1)]));
        assert!(e.contains(v(&[(2, 5)])));
        assert!(!e.contains(v(&[(1, 5)])));
    }
}
