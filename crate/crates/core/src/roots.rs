//! Root systems of the simple Lie algebras, generated by closure from the
//! Cartan matrix. Simple roots use Bourbaki numbering; coordinates are
//! always taken in the simple-root basis.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coordinates of a root (or any element of the root lattice) in the
/// simple-root basis.
pub type Root = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl LieType {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => LieType::A,
            'B' => LieType::B,
            'C' => LieType::C,
            'D' => LieType::D,
            'E' => LieType::E,
            'F' => LieType::F,
            'G' => LieType::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::E => 'E',
            LieType::F => 'F',
            LieType::G => 'G',
        }
    }

    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            LieType::A => rank >= 1,
            LieType::B => rank >= 2,
            LieType::C => rank >= 3,
            LieType::D => rank >= 4,
            LieType::E => (6..=8).contains(&rank),
            LieType::F => rank == 4,
            LieType::G => rank == 2,
        }
    }

    /// Closed-form number of roots.
    pub fn root_count(self, n: usize) -> usize {
        match self {
            LieType::A => n * (n + 1),
            LieType::B | LieType::C => 2 * n * n,
            LieType::D => 2 * n * (n - 1),
            LieType::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            LieType::F => 48,
            LieType::G => 12,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Gram matrix of the simple roots, long roots of squared length 2.
fn simple_root_form(label: LieType, n: usize) -> Vec<Vec<BigRational>> {
    let mut b = vec![vec![BigRational::zero(); n]; n];
    let mut link = |i: usize, j: usize, v: BigRational| {
        b[i][j] = v.clone();
        b[j][i] = v;
    };
    match label {
        LieType::A => {
            for i in 0..n.saturating_sub(1) {
                link(i, i + 1, q(-1, 1));
            }
        }
        LieType::B => {
            for i in 0..n - 1 {
                link(i, i + 1, q(-1, 1));
            }
        }
        LieType::C => {
            for i in 0..n - 2 {
                link(i, i + 1, q(-1, 2));
            }
            link(n - 2, n - 1, q(-1, 1));
        }
        LieType::D => {
            for i in 0..n - 2 {
                link(i, i + 1, q(-1, 1));
            }
            link(n - 3, n - 1, q(-1, 1));
        }
        LieType::E => {
            link(0, 2, q(-1, 1));
            link(1, 3, q(-1, 1));
            for i in 2..n - 1 {
                link(i, i + 1, q(-1, 1));
            }
        }
        LieType::F => {
            link(0, 1, q(-1, 1));
            link(1, 2, q(-1, 1));
            link(2, 3, q(-1, 2));
        }
        LieType::G => link(0, 1, q(-1, 1)),
    }
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = match label {
            LieType::B if i == n - 1 => q(1, 1),
            LieType::C if i < n - 1 => q(1, 1),
            LieType::F if i >= 2 => q(1, 1),
            LieType::G if i == 0 => q(2, 3),
            _ => q(2, 1),
        };
    }
    b
}

/// A finite root system with exact inner products.
#[derive(Clone, Debug)]
pub struct RootSystem {
    label: LieType,
    rank: usize,
    form: Vec<Vec<BigRational>>,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
    n_pos: usize,
}

impl RootSystem {
    pub fn label(&self) -> LieType {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `"D4"`-style name.
    pub fn name(&self) -> String {
        format!("{}{}", self.label, self.rank)
    }

    /// All roots: positive roots in the total order (height, then reverse
    /// lexicographic), followed by their negatives in the same order.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.n_pos]
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_pos
    }

    /// Index of `-root(idx)`.
    pub fn negative(&self, idx: usize) -> usize {
        if idx < self.n_pos {
            idx + self.n_pos
        } else {
            idx - self.n_pos
        }
    }

    pub fn index_of(&self, v: &[i32]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i32]) -> bool {
        self.index.contains_key(v)
    }

    /// Index of the `i`-th simple root (0-based Bourbaki position).
    pub fn simple(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        self.index[&v]
    }

    pub fn height(&self, idx: usize) -> i32 {
        self.roots[idx].iter().sum()
    }

    /// Gram matrix of the simple roots.
    pub fn bilinear_form(&self) -> &[Vec<BigRational>] {
        &self.form
    }

    /// Cartan matrix `A[i][j] = <α_j, α_i^∨>`.
    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn inner(&self, a: &[i32], b: &[i32]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc += &self.form[i][j] * BigRational::from_integer(BigInt::from(x * y));
                }
            }
        }
        acc
    }

    /// `<v, α_i^∨> = 2(v, α_i)/(α_i, α_i)`.
    pub fn pairing_with_coroot(&self, v: &[i32], i: usize) -> i32 {
        v.iter().zip(&self.cartan[i]).map(|(a, c)| a * c).sum()
    }

    /// Coordinates of the coroot `α^∨` in the basis of simple coroots.
    pub fn coroot(&self, idx: usize) -> Vec<BigRational> {
        let a = &self.roots[idx];
        let len = self.inner(a, a);
        a.iter()
            .enumerate()
            .map(|(j, &c)| BigRational::from_integer(BigInt::from(c)) * &self.form[j][j] / &len)
            .collect()
    }

    pub fn highest_root(&self) -> &Root {
        &self.roots[self.n_pos - 1]
    }

    /// Coefficients of the highest root in the simple-root basis.
    pub fn highest_root_coefficients(&self) -> Vec<i32> {
        self.highest_root().clone()
    }

    /// Simple reflection `s_i` applied to a lattice vector.
    pub fn reflect(&self, i: usize, v: &[i32]) -> Root {
        let k = self.pairing_with_coroot(v, i);
        let mut out = v.to_vec();
        out[i] -= k;
        out
    }
}

fn sort_key(r: &Root) -> (i32, Reverse<Root>) {
    (r.iter().sum(), Reverse(r.clone()))
}

/// Builds the full root system of the given simple type.
pub fn build_root_system(label: LieType, rank: usize) -> Result<RootSystem> {
    if !label.valid_rank(rank) {
        return Err(Error::InvalidAlgebra {
            label: label.as_char(),
            rank,
        });
    }
    let n = rank;
    let form = simple_root_form(label, n);
    let cartan: Vec<Vec<i32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (BigRational::from_integer(BigInt::from(2)) * &form[i][j] / &form[i][i])
                        .to_integer()
                        .to_i32()
                        .expect("Cartan entry")
                })
                .collect()
        })
        .collect();

    let mut positive: Vec<Root> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut known: HashMap<Root, ()> = positive.iter().map(|r| (r.clone(), ())).collect();
    let mut layer = positive.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let mut up = beta.clone();
                up[i] += 1;
                if known.contains_key(&up) {
                    continue;
                }
                // alpha_i string through beta: p steps down, q steps up
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i32 = beta.iter().zip(&cartan[i]).map(|(a, c)| a * c).sum();
                if p - pair > 0 {
                    known.insert(up.clone(), ());
                    next.push(up);
                }
            }
        }
        positive.extend(next.iter().cloned());
        layer = next;
    }
    positive.sort_by_key(sort_key);
    let n_pos = positive.len();
    let mut roots = positive.clone();
    roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Root>()));
    let index = roots.iter().enumerate().map(|(k, r)| (r.clone(), k)).collect();
    Ok(RootSystem {
        label,
        rank,
        form,
        cartan,
        roots,
        index,
        n_pos,
    })
}
