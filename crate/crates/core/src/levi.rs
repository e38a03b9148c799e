//! Quasiroot combinatorics for a Levi subset `Γ ⊆ Π`.
//!
//! Quasiroots are roots with their `Γ` coordinates deleted; they live on the
//! positions of `Π∖Γ`. Simple-root positions are 0-based here (Bourbaki
//! label minus one).

use std::cmp::Reverse;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::roots::{Root, RootSystem};

#[derive(Clone, Debug)]
pub struct LeviDatum {
    roots: Arc<RootSystem>,
    gamma: Vec<usize>,
    complement: Vec<usize>,
    in_gamma: Vec<bool>,
    quasiroots: Vec<Root>,
    quasi_index: HashMap<Root, usize>,
    n_pos: usize,
    class_of: Vec<Option<usize>>,
    classes: Vec<Vec<usize>>,
}

/// Connecting chains inside quasiroot classes and representatives of
/// additive quasiroot relations.
#[derive(Clone, Debug, Default)]
pub struct ChainReport {
    /// `(β, β', [γ_1, …, γ_k])` with `β + γ_1 + … + γ_k = β'` and every
    /// partial sum a root; all indices are root indices.
    pub chains: Vec<(usize, usize, Vec<usize>)>,
    /// Quasiroot relations `β̄ = β̄_1 + … + β̄_k` with root representatives.
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
    /// Pairs or relations for which the search failed.
    pub failures: Vec<String>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sort_key(r: &Root) -> (i32, Reverse<Root>) {
    (r.iter().sum(), Reverse(r.clone()))
}

pub fn build_levi(roots: Arc<RootSystem>, gamma: &[usize]) -> Result<LeviDatum> {
    let rank = roots.rank();
    let mut g: Vec<usize> = gamma.to_vec();
    g.sort_unstable();
    if g.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidGamma(format!("repeated index in {gamma:?}")));
    }
    if let Some(&bad) = g.iter().find(|&&i| i >= rank) {
        return Err(Error::InvalidGamma(format!(
            "simple root {} out of range for rank {rank}",
            bad + 1
        )));
    }
    let complement: Vec<usize> = (0..rank).filter(|i| !g.contains(i)).collect();
    let project = |r: &Root| -> Root { complement.iter().map(|&i| r[i]).collect() };

    let mut in_gamma = vec![false; roots.len()];
    let mut seen: HashSet<Root> = HashSet::new();
    let mut positive = Vec::new();
    for (k, r) in roots.roots().iter().enumerate() {
        let p = project(r);
        if p.iter().all(|&x| x == 0) {
            in_gamma[k] = true;
        } else if roots.is_positive(k) && seen.insert(p.clone()) {
            positive.push(p);
        }
    }
    positive.sort_by_key(sort_key);
    let n_pos = positive.len();
    let mut quasiroots = positive.clone();
    quasiroots.extend(positive.iter().map(|q| q.iter().map(|x| -x).collect::<Root>()));
    let quasi_index: HashMap<Root, usize> =
        quasiroots.iter().enumerate().map(|(k, q)| (q.clone(), k)).collect();
    let mut classes = vec![Vec::new(); quasiroots.len()];
    let class_of: Vec<Option<usize>> = roots
        .roots()
        .iter()
        .enumerate()
        .map(|(k, r)| {
            if in_gamma[k] {
                return None;
            }
            let c = quasi_index[&project(r)];
            classes[c].push(k);
            Some(c)
        })
        .collect();
    Ok(LeviDatum {
        roots,
        gamma: g,
        complement,
        in_gamma,
        quasiroots,
        quasi_index,
        n_pos,
        class_of,
        classes,
    })
}

impl LeviDatum {
    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.roots
    }

    /// Positions of `Γ` (0-based, sorted).
    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// Positions of `Π∖Γ`; quasiroot coordinates follow this order.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Whether root `idx` lies in `Ω_Γ`.
    pub fn in_omega_gamma(&self, idx: usize) -> bool {
        self.in_gamma[idx]
    }

    /// Whether a basis index of `g` belongs to `m` (a root vector outside `Ω_Γ`).
    pub fn is_m_index(&self, idx: usize) -> bool {
        idx < self.roots.len() && !self.in_gamma[idx]
    }

    /// Root indices spanning `m`.
    pub fn m_basis(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&k| !self.in_gamma[k]).collect()
    }

    pub fn dim_m(&self) -> usize {
        self.in_gamma.iter().filter(|x| !**x).count()
    }

    /// Root indices of `Ω_Γ`.
    pub fn omega_gamma(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&k| self.in_gamma[k]).collect()
    }

    /// All quasiroots: positive ones first, then their negatives.
    pub fn quasiroots(&self) -> &[Root] {
        &self.quasiroots
    }

    pub fn quasiroot(&self, q: usize) -> &Root {
        &self.quasiroots[q]
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn positive_quasiroots(&self) -> &[Root] {
        &self.quasiroots[..self.n_pos]
    }

    pub fn negative(&self, q: usize) -> usize {
        if q < self.n_pos {
            q + self.n_pos
        } else {
            q - self.n_pos
        }
    }

    pub fn index_of(&self, v: &[i32]) -> Option<usize> {
        self.quasi_index.get(v).copied()
    }

    /// Index of the simple quasiroot on complement position `j`.
    pub fn simple(&self, j: usize) -> usize {
        let mut v = vec![0; self.complement.len()];
        v[j] = 1;
        self.quasi_index[&v]
    }

    pub fn height(&self, q: usize) -> i32 {
        self.quasiroots[q].iter().sum()
    }

    /// Quasiroot class of a root (`None` on `Ω_Γ`).
    pub fn class_of(&self, root: usize) -> Option<usize> {
        self.class_of[root]
    }

    /// Roots projecting onto quasiroot `q`.
    pub fn class(&self, q: usize) -> &[usize] {
        &self.classes[q]
    }

    pub fn project(&self, r: &[i32]) -> Root {
        self.complement.iter().map(|&i| r[i]).collect()
    }

    /// Index of `q1 + q2` when it is a quasiroot.
    pub fn sum(&self, q1: usize, q2: usize) -> Option<usize> {
        let s: Root = self.quasiroots[q1]
            .iter()
            .zip(&self.quasiroots[q2])
            .map(|(a, b)| a + b)
            .collect();
        self.index_of(&s)
    }

    /// `a1+2*a3`-style label using Bourbaki numbering of `Π∖Γ`.
    pub fn label(&self, q: usize) -> String {
        lattice_label(&self.complement, &self.quasiroots[q])
    }

    /// Ordered pairs of positive quasiroots whose sum is a quasiroot.
    pub fn admissible_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n_pos {
            for b in 0..self.n_pos {
                if self.sum(a, b).is_some() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Ordered triples (repetition allowed) with `a+b`, `b+c`, `a+b+c`
    /// all quasiroots.
    pub fn admissible_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, b) in self.admissible_pairs() {
            let ab = self.sum(a, b).unwrap();
            for c in 0..self.n_pos {
                if self.sum(b, c).is_some() && self.sum(ab, c).is_some() {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// Searches connecting chains within every class and representatives
    /// for all two- and three-term quasiroot relations.
    pub fn verify_connecting_chains(&self) -> ChainReport {
        let rs = &*self.roots;
        let gamma_roots = self.omega_gamma();
        let mut report = ChainReport::default();
        for class in &self.classes {
            for (n, &start) in class.iter().enumerate() {
                for &target in &class[n + 1..] {
                    match self.chain(start, target, &gamma_roots) {
                        Some(steps) => report.chains.push((start, target, steps)),
                        None => report.failures.push(format!(
                            "no chain from {:?} to {:?}",
                            rs.root(start),
                            rs.root(target)
                        )),
                    }
                }
            }
        }
        let add = |a: &Root, b: &Root| -> Root { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        for q1 in 0..self.quasiroots.len() {
            for q2 in 0..self.quasiroots.len() {
                let Some(s) = self.sum(q1, q2) else { continue };
                let found = self.classes[q1].iter().find_map(|&b1| {
                    self.classes[q2]
                        .iter()
                        .find(|&&b2| rs.is_root(&add(rs.root(b1), rs.root(b2))))
                        .map(|&b2| vec![b1, b2])
                });
                match found {
                    Some(reps) => report.relations.push((vec![q1, q2, s], reps)),
                    None => report
                        .failures
                        .push(format!("no representatives for {} + {}", self.label(q1), self.label(q2))),
                }
            }
        }
        for (a, b, c) in self.admissible_triples() {
            let abc = self.sum(self.sum(a, b).unwrap(), c).unwrap();
            let mut found = None;
            'outer: for &r1 in &self.classes[a] {
                for &r2 in &self.classes[b] {
                    let s12 = add(rs.root(r1), rs.root(r2));
                    for &r3 in &self.classes[c] {
                        if rs.is_root(&add(&s12, rs.root(r3))) {
                            found = Some(vec![r1, r2, r3]);
                            break 'outer;
                        }
                    }
                }
            }
            match found {
                Some(reps) => report.relations.push((vec![a, b, c, abc], reps)),
                None => report.failures.push(format!(
                    "no representatives for {} + {} + {}",
                    self.label(a),
                    self.label(b),
                    self.label(c)
                )),
            }
        }
        report
    }

    /// Breadth-first search for `γ_1, …, γ_k ∈ Ω_Γ` taking `from` to `to`.
    fn chain(&self, from: usize, to: usize, gamma_roots: &[usize]) -> Option<Vec<usize>> {
        let rs = &*self.roots;
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut visited = HashSet::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut steps = Vec::new();
                let mut node = to;
                while node != from {
                    let (p, g) = prev[&node];
                    steps.push(g);
                    node = p;
                }
                steps.reverse();
                return Some(steps);
            }
            for &g in gamma_roots {
                let s: Root = rs.root(cur).iter().zip(rs.root(g)).map(|(x, y)| x + y).collect();
                if let Some(next) = rs.index_of(&s) {
                    if visited.insert(next) {
                        prev.insert(next, (cur, g));
                        queue.push_back(next);
                    }
                }
            }
        }
        None
    }

    /// If the quasiroot system has type `A_k`, returns the simple quasiroots
    /// (as complement positions) in chain order, starting from the endpoint
    /// with the lowest Bourbaki index.
    pub fn a_type_chain(&self) -> Option<Vec<usize>> {
        let k = self.complement.len();
        if k == 0 || self.n_pos != k * (k + 1) / 2 {
            return None;
        }
        let adjacent = |i: usize, j: usize| self.sum(self.simple(i), self.simple(j)).is_some();
        let neighbours: Vec<Vec<usize>> =
            (0..k).map(|i| (0..k).filter(|&j| j != i && adjacent(i, j)).collect()).collect();
        if neighbours.iter().any(|n| n.len() > 2) {
            return None;
        }
        let start = (0..k).find(|&i| neighbours[i].len() <= 1)?;
        let mut chain = vec![start];
        while chain.len() < k {
            let last = *chain.last().unwrap();
            let next = neighbours[last].iter().find(|j| !chain.contains(j))?;
            chain.push(*next);
        }
        for i in 0..k {
            let mut v = vec![0; k];
            for &p in &chain[i..] {
                v[p] += 1;
                self.index_of(&v)?;
            }
        }
        Some(chain)
    }

    /// Whether the quasiroot system is isomorphic to an `A_k` root system.
    pub fn quasiroot_system_type(&self) -> bool {
        self.a_type_chain().is_some()
    }
}

/// `a1+2*a3`-style label for a lattice vector on the given simple positions.
pub fn lattice_label(positions: &[usize], v: &[i32]) -> String {
    let mut out = String::new();
    for (&p, &c) in positions.iter().zip(v) {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&format!("{}*", c.abs()));
        }
        out.push_str(&format!("a{}", p + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, LieType};

    fn levi(l: LieType, n: usize, gamma: &[usize]) -> LeviDatum {
        build_levi(Arc::new(build_root_system(l, n).unwrap()), gamma).unwrap()
    }

    #[test]
    fn a2_empty_gamma() {
        let lv = levi(LieType::A, 2, &[]);
        assert_eq!(lv.num_positive(), 3);
        assert!(lv.positive_quasiroots().iter().enumerate().all(|(q, _)| lv.class(q).len() == 1));
        assert_eq!(lv.admissible_pairs(), vec![(0, 1), (1, 0)]);
        assert_eq!(lv.label(2), "a1+a2");
    }

    #[test]
    fn d4_gamma_12() {
        let lv = levi(LieType::D, 4, &[0, 1]);
        assert_eq!(lv.num_positive(), 3);
        assert_eq!(lv.dim_m(), 18);
        for q in 0..lv.quasiroots().len() {
            assert_eq!(lv.class(q).len(), 3);
        }
        assert_eq!(lv.a_type_chain(), Some(vec![0, 1]));
        assert!(lv.verify_connecting_chains().ok());
    }

    #[test]
    fn b2_cases() {
        let sym = levi(LieType::B, 2, &[1]);
        assert_eq!(sym.num_positive(), 1);
        assert!(sym.admissible_pairs().is_empty());
        assert!(sym.quasiroot_system_type());
        let full = levi(LieType::B, 2, &[]);
        assert!(!full.quasiroot_system_type());
        let a1 = full.simple(0);
        let a2 = full.simple(1);
        assert!(full.admissible_pairs().contains(&(a1, a2)));
        // 2·a2 is not a root of B2, so (a2, a2) is not admissible without Γ
        assert!(!full.admissible_pairs().contains(&(a2, a2)));
        let long = levi(LieType::B, 2, &[0]);
        let q = long.simple(0);
        assert!(long.admissible_pairs().contains(&(q, q)));
    }

    #[test]
    fn a2_chain_single_addition() {
        let lv = levi(LieType::A, 2, &[0]);
        let rep = lv.verify_connecting_chains();
        assert!(rep.ok());
        let rs = lv.root_system();
        let a2 = rs.simple(1);
        let top = rs.index_of(&[1, 1]).unwrap();
        let (_, _, steps) = rep.chains.iter().find(|(s, t, _)| *s == a2 && *t == top).unwrap();
        assert_eq!(steps, &vec![rs.simple(0)]);
    }

    #[test]
    fn empty_gamma_has_trivial_chains() {
        let lv = levi(LieType::C, 3, &[]);
        let rep = lv.verify_connecting_chains();
        assert!(rep.ok());
        assert!(rep.chains.is_empty());
    }

    #[test]
    fn rejects_bad_gamma() {
        let rs = Arc::new(build_root_system(LieType::A, 2).unwrap());
        assert!(build_levi(rs.clone(), &[2]).is_err());
        assert!(build_levi(rs, &[0, 0]).is_err());
    }

    #[test]
    fn a_type_for_all_a_subsets() {
        for n in 1..=4 {
            for mask in 0..(1u32 << n) - 1 {
                let gamma: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                assert!(levi(LieType::A, n, &gamma).quasiroot_system_type(), "A{n} {gamma:?}");
            }
        }
    }
}
