//! Weyl group enumeration and the de Rham Betti numbers of `G/G_Γ`.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::levi::LeviDatum;
use crate::roots::{Root, RootSystem};

pub const DEFAULT_WEYL_BOUND: usize = 100_000;

/// An element stored as the images of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub images: Vec<Root>,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, v: &[i32]) -> Root {
        let n = self.images.len();
        let mut out = vec![0; n];
        for (c, img) in v.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        out
    }
}

fn positive(v: &[i32]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

/// All of `W`, by breadth-first closure under right multiplication by simple
/// reflections; BFS depth equals Coxeter length.
pub fn weyl_group(rs: &RootSystem, bound: usize) -> Result<Vec<WeylElement>> {
    let n = rs.rank();
    let two_rho: Root = rs
        .positive_roots()
        .iter()
        .fold(vec![0; n], |acc, r| acc.iter().zip(r).map(|(a, b)| a + b).collect());
    let id = WeylElement {
        images: (0..n).map(|i| (0..n).map(|j| i32::from(i == j)).collect()).collect(),
        length: 0,
    };
    let mut seen: HashSet<Root> = HashSet::from([two_rho.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    let cartan = rs.cartan_matrix();
    while let Some(w) = queue.pop_front() {
        for (i, row) in cartan.iter().enumerate() {
            // (w s_i)(α_j) = w(α_j) − ⟨α_j, α_i^∨⟩ w(α_i)
            let images: Vec<Root> = (0..n)
                .map(|j| {
                    let a = row[j];
                    w.images[j].iter().zip(&w.images[i]).map(|(x, y)| x - a * y).collect()
                })
                .collect();
            let next = WeylElement {
                images,
                length: w.length + 1,
            };
            if seen.insert(next.apply(&two_rho)) {
                if seen.len() > bound {
                    return Err(Error::WeylBoundExceeded { bound });
                }
                queue.push_back(next);
            }
        }
        out.push(w);
    }
    Ok(out)
}

/// Betti numbers `b_0, …, b_{dim m}` of `G/G_Γ` from the lengths of minimal
/// coset representatives (`w(γ) > 0` for all `γ ∈ Γ`).
pub fn de_rham_betti(levi: &LeviDatum, bound: usize) -> Result<Vec<usize>> {
    let rs = levi.root_system();
    let group = weyl_group(rs, bound)?;
    let mut betti = vec![0; levi.dim_m() + 1];
    for w in &group {
        let minimal = levi.gamma().iter().all(|&g| positive(&w.images[g]));
        if minimal {
            betti[2 * w.length] += 1;
        }
    }
    Ok(betti)
}
