//! Rotation-matrix propagation of generator expectations.
//!
//! A quadratic element `S = Σ_{j<k} h_jk g_j g_k` acts on the span of the
//! generators by `[S, g_a] = Σ_b A_ba g_b`, so `Û = exp(τS)` conjugates
//! `Û g_j Û† = Σ_k R_kj g_k` with `R = exp(τA)`. Expectations then evolve as
//! `v′ = R v` and covariances as `M′ = R M Rᵀ`.
//!
//! Expectations are stored for the Hermitian words `P_k = -i g_k`, and the
//! covariance as `M_jk = ⟨i g_j g_k⟩` with a zero diagonal, so both are real.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};

use crate::dense::{exp_hamiltonian, expectation, DenseOperator, StateVector, C64};
use crate::error::{Error, Result};
use crate::fermion::FermionEncoding;
use crate::generators::GeneratorSet;
use crate::pauli::{Letter, PauliTerm};
use crate::tree::QubitTree;

const ANTISYMMETRY_TOL: f64 = 1e-12;

/// `Σ_{j<k} h_jk g_j g_k` over a generator set, with duration `τ`.
///
/// Indices are 0-based positions in the generator list.
#[derive(Clone, Debug)]
pub struct QuadraticHamiltonian<'a> {
    basis: &'a GeneratorSet,
    first: usize,
    terms: BTreeMap<(usize, usize), f64>,
    tau: f64,
}

impl<'a> QuadraticHamiltonian<'a> {
    /// Empty Hamiltonian over all `2m + 1` generators.
    pub fn new(basis: &'a GeneratorSet, tau: f64) -> Self {
        QuadraticHamiltonian {
            basis,
            first: 0,
            terms: BTreeMap::new(),
            tau,
        }
    }

    /// Empty Hamiltonian that may not touch the first generator.
    pub fn without_first(basis: &'a GeneratorSet, tau: f64) -> Self {
        QuadraticHamiltonian {
            first: 1,
            ..Self::new(basis, tau)
        }
    }

    /// Builds from a full antisymmetric array.
    pub fn from_matrix(basis: &'a GeneratorSet, h: &DMatrix<f64>, tau: f64) -> Result<Self> {
        let n = basis.len();
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: h.nrows().max(h.ncols()),
            });
        }
        let mut out = Self::new(basis, tau);
        for j in 0..n {
            for k in j..n {
                if (h[(j, k)] + h[(k, j)]).abs() > ANTISYMMETRY_TOL {
                    return Err(Error::NotAntisymmetric(j, k));
                }
                if k > j && h[(j, k)] != 0.0 {
                    out.terms.insert((j, k), h[(j, k)]);
                }
            }
        }
        Ok(out)
    }

    /// Adds `value · g_j g_k`.
    pub fn add_term(&mut self, j: usize, k: usize, value: f64) -> Result<()> {
        let n = self.basis.len();
        if j == k || j.max(k) >= n || j.min(k) < self.first {
            return Err(Error::InvalidArgument(format!(
                "pair ({j}, {k}) not allowed for {n} generators starting at {}",
                self.first
            )));
        }
        let (key, v) = if j < k {
            ((j, k), value)
        } else {
            ((k, j), -value)
        };
        *self.terms.entry(key).or_insert(0.0) += v;
        Ok(())
    }

    pub fn basis(&self) -> &GeneratorSet {
        self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Nonzero `(j, k, h_jk)` with `j < k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.terms
            .iter()
            .filter(|(_, &v)| v != 0.0)
            .map(|(&(j, k), &v)| (j, k, v))
    }

    /// Nonzero entries `A_ba` of the structure array, from Pauli products.
    pub fn structure_constants(&self) -> Result<BTreeMap<(usize, usize), f64>> {
        let lookup: HashMap<PauliTerm, usize> = self
            .basis
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.word(), i))
            .collect();
        let g = self.basis.generators();
        let mut a = BTreeMap::new();
        for (j, k, h) in self.terms() {
            let p = g[j].multiply(&g[k])?;
            for col in [j, k] {
                let left = p.multiply(&g[col])?;
                let right = g[col].multiply(&p)?;
                if left.phase() == right.phase() {
                    continue;
                }
                let row = *lookup.get(&left.word()).ok_or_else(|| {
                    Error::InvalidArgument("commutator left the generator span".into())
                })?;
                // [P, g] = 2 P g = 2 i^(q - q_row) g_row
                let rel = (4 + left.phase() - g[row].phase()) % 4;
                let c = match rel {
                    0 => 2.0,
                    2 => -2.0,
                    _ => {
                        return Err(Error::InvalidArgument(
                            "imaginary structure constant".into(),
                        ))
                    }
                };
                *a.entry((row, col)).or_insert(0.0) += c * h;
            }
        }
        Ok(a)
    }

    /// Dense `Ĥ = iS`, so that `exp(-iĤτ) = exp(τS)`.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let m = self.basis.width();
        let mut acc = DenseOperator::zeros(m)?;
        let g = self.basis.generators();
        for (j, k, h) in self.terms() {
            let t = g[j].multiply(&g[k])?.times_i(1);
            acc = &acc + &t.to_dense()?.scale(C64::new(h, 0.0));
        }
        Ok(acc)
    }

    /// Dense `exp(τS)`.
    pub fn dense_unitary(&self) -> Result<DenseOperator> {
        exp_hamiltonian(&self.to_dense()?, self.tau)
    }
}

/// Orthogonal matrix stored as disjoint dense blocks; the identity elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationMatrix {
    n: usize,
    blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq)]
struct Block {
    indices: Vec<usize>,
    mat: DMatrix<f64>,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Groups of indices connected through `links`, each sorted.
fn connected_groups(n: usize, links: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut touched = BTreeSet::new();
    for (a, b) in links {
        touched.insert(a);
        touched.insert(b);
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        parent[x] = y;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in touched {
        groups.entry(find(&mut parent, j)).or_default().push(j);
    }
    groups.into_values().collect()
}

impl RotationMatrix {
    pub fn identity(n: usize) -> Self {
        RotationMatrix {
            n,
            blocks: Vec::new(),
        }
    }

    pub fn from_dense(r: DMatrix<f64>) -> Result<Self> {
        if !r.is_square() {
            return Err(Error::InvalidArgument("rotation must be square".into()));
        }
        let n = r.nrows();
        Ok(RotationMatrix {
            n,
            blocks: vec![Block {
                indices: (0..n).collect(),
                mat: r,
            }],
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Indices where the matrix may differ from the identity, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .blocks
            .iter()
            .flat_map(|b| b.indices.iter().copied())
            .collect();
        s.sort_unstable();
        s
    }

    /// Sizes of the independent blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        for b in &self.blocks {
            if let Ok(x) = b.indices.binary_search(&j) {
                return b.indices.binary_search(&k).map_or(0.0, |y| b.mat[(x, y)]);
            }
        }
        (j == k) as u8 as f64
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut r = DMatrix::identity(self.n, self.n);
        for b in &self.blocks {
            for (x, &j) in b.indices.iter().enumerate() {
                for (y, &k) in b.indices.iter().enumerate() {
                    r[(j, k)] = b.mat[(x, y)];
                }
            }
        }
        r
    }

    /// The matrix restricted to `group`, which must be a union of whole blocks or untouched indices.
    fn restricted(&self, group: &[usize]) -> DMatrix<f64> {
        let s = group.len();
        let mut r = DMatrix::identity(s, s);
        for b in &self.blocks {
            if group.binary_search(&b.indices[0]).is_err() {
                continue;
            }
            let at: Vec<usize> = b
                .indices
                .iter()
                .map(|j| group.binary_search(j).unwrap())
                .collect();
            for (x, &px) in at.iter().enumerate() {
                for (y, &py) in at.iter().enumerate() {
                    r[(px, py)] = b.mat[(x, y)];
                }
            }
        }
        r
    }

    /// `after · self`: the rotation of `self` followed by `after`.
    pub fn then(&self, after: &RotationMatrix) -> Result<RotationMatrix> {
        self.check(after.n)?;
        let links = self.blocks.iter().chain(&after.blocks).flat_map(|b| {
            let first = b.indices[0];
            b.indices.iter().map(move |&j| (first, j))
        });
        let blocks = connected_groups(self.n, links)
            .into_iter()
            .map(|indices| {
                let mat = after.restricted(&indices) * self.restricted(&indices);
                Block { indices, mat }
            })
            .collect();
        Ok(RotationMatrix { n: self.n, blocks })
    }

    /// `max |RᵀR - 1|`.
    pub fn orthogonality_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let s = b.indices.len();
                (b.mat.transpose() * &b.mat - DMatrix::identity(s, s)).amax()
            })
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> f64 {
        self.blocks.iter().map(|b| b.mat.determinant()).product()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: n,
            });
        }
        Ok(())
    }

    /// `v ← R v`.
    pub fn apply_to_vector(&self, v: &mut [f64]) -> Result<()> {
        self.check(v.len())?;
        for b in &self.blocks {
            let sub = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&j| v[j]));
            let out = &b.mat * sub;
            for (x, &j) in b.indices.iter().enumerate() {
                v[j] = out[x];
            }
        }
        Ok(())
    }

    /// `M ← R M Rᵀ` with the diagonal reset to zero.
    pub fn apply_to_covariance(&self, m: &mut DMatrix<f64>) -> Result<()> {
        self.check(m.nrows())?;
        self.check(m.ncols())?;
        for b in &self.blocks {
            let s = &b.indices;
            let rows = &b.mat * DMatrix::from_fn(s.len(), self.n, |x, c| m[(s[x], c)]);
            for (x, &j) in s.iter().enumerate() {
                m.row_mut(j).copy_from(&rows.row(x));
            }
        }
        for b in &self.blocks {
            let s = &b.indices;
            let cols = DMatrix::from_fn(self.n, s.len(), |r, y| m[(r, s[y])]) * b.mat.transpose();
            for (y, &k) in s.iter().enumerate() {
                m.column_mut(k).copy_from(&cols.column(y));
            }
        }
        m.fill_diagonal(0.0);
        Ok(())
    }
}

/// `R = exp(τA)`, exponentiated separately on each connected group of indices.
pub fn adjoint_rotation(h: &QuadraticHamiltonian) -> Result<RotationMatrix> {
    let n = h.dimension();
    let a = h.structure_constants()?;
    let blocks = connected_groups(n, a.keys().copied())
        .into_iter()
        .map(|indices| {
            let local = |j: usize| indices.binary_search(&j).unwrap();
            let mut sub = DMatrix::zeros(indices.len(), indices.len());
            for (&(r, c), &v) in &a {
                if indices.binary_search(&r).is_ok() {
                    sub[(local(r), local(c))] = v * h.tau();
                }
            }
            Block {
                mat: sub.exp(),
                indices,
            }
        })
        .collect();
    Ok(RotationMatrix { n, blocks })
}

/// `v′ = R v`.
pub fn propagate_expectations(r: &RotationMatrix, v: &[f64]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    r.apply_to_vector(&mut out)?;
    Ok(out)
}

/// `M′ = R M Rᵀ` with a zero diagonal.
pub fn propagate_covariance(r: &RotationMatrix, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut out = m.clone();
    r.apply_to_covariance(&mut out)?;
    Ok(out)
}

struct BitMask(Vec<u64>);

impl BitMask {
    fn new(bits: &[bool]) -> Self {
        let mut w = vec![0u64; bits.len().div_ceil(64)];
        for (p, &b) in bits.iter().enumerate() {
            if b {
                w[p / 64] |= 1 << (p % 64);
            }
        }
        BitMask(w)
    }

    /// `⟨b|T|b⟩` for a z-only term `T`.
    fn diagonal(&self, t: &PauliTerm) -> f64 {
        let flips: u32 = t
            .z_words()
            .iter()
            .zip(&self.0)
            .map(|(z, b)| (z & b).count_ones())
            .sum();
        let sign = if flips.is_multiple_of(2) { 1.0 } else { -1.0 };
        match t.phase() {
            0 => sign,
            2 => -sign,
            _ => 0.0,
        }
    }
}

fn check_bits(basis: &GeneratorSet, bits: &[bool]) -> Result<()> {
    if bits.len() != basis.width() {
        return Err(Error::LengthMismatch {
            expected: basis.width(),
            got: bits.len(),
        });
    }
    Ok(())
}

/// `⟨b|P_k|b⟩` for a computational basis state, at any width.
pub fn basis_expectations(basis: &GeneratorSet, bits: &[bool]) -> Result<Vec<f64>> {
    check_bits(basis, bits)?;
    let mask = BitMask::new(bits);
    Ok(basis
        .generators()
        .iter()
        .map(|g| {
            if g.is_z_only() {
                mask.diagonal(&g.clone().times_i(3))
            } else {
                0.0
            }
        })
        .collect())
}

/// `⟨b|i g_j g_k|b⟩` for a computational basis state, at any width.
///
/// Only pairs sharing their x part give z-only products, so generators are
/// grouped by x part first.
pub fn basis_covariance(basis: &GeneratorSet, bits: &[bool]) -> Result<DMatrix<f64>> {
    check_bits(basis, bits)?;
    let mask = BitMask::new(bits);
    let g = basis.generators();
    let mut groups: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for (i, t) in g.iter().enumerate() {
        groups.entry(t.x_words()).or_default().push(i);
    }
    let n = g.len();
    let mut m = DMatrix::zeros(n, n);
    for members in groups.values() {
        for &j in members {
            for &k in members {
                if j != k {
                    m[(j, k)] = mask.diagonal(&g[j].multiply(&g[k])?.times_i(1));
                }
            }
        }
    }
    Ok(m)
}

/// `⟨s|P_k|s⟩` through the dense oracle.
pub fn state_expectations(basis: &GeneratorSet, s: &StateVector) -> Result<Vec<f64>> {
    basis
        .generators()
        .iter()
        .map(|g| Ok(expectation(s, &g.clone().times_i(3))?.re))
        .collect()
}

/// `⟨s|i g_j g_k|s⟩` through the dense oracle.
pub fn state_covariance(basis: &GeneratorSet, s: &StateVector) -> Result<DMatrix<f64>> {
    let g = basis.generators();
    let n = g.len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in j + 1..n {
            let v = expectation(s, &g[j].multiply(&g[k])?.times_i(1))?.re;
            m[(j, k)] = v;
            m[(k, j)] = -v;
        }
    }
    Ok(m)
}

/// `⟨ň_j⟩ = (1 - M_{e′e″})/2` for every mode of `encoding`, read from a covariance
/// over the encoding's own generator list.
pub fn mean_occupations(encoding: &FermionEncoding, cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let index: HashMap<&PauliTerm, usize> = encoding
        .generators()
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    if cov.nrows() != index.len() {
        return Err(Error::LengthMismatch {
            expected: index.len(),
            got: cov.nrows(),
        });
    }
    encoding
        .ladders()
        .iter()
        .map(|l| {
            let find = |t: &PauliTerm| {
                index.get(t).copied().ok_or_else(|| {
                    Error::InvalidArgument(format!("mode {} uses a foreign term", l.mode()))
                })
            };
            let (a, b) = (find(l.e_prime())?, find(l.e_dprime())?);
            Ok((1.0 - cov[(a, b)]) / 2.0)
        })
        .collect()
}

/// The 15 products of two terminal-triple generators that leave the parent
/// qubit untouched (identity or `σ^z` there), as Hermitian words.
pub fn terminal_pair_su4_set(tree: &QubitTree, j: u32) -> Result<Vec<PauliTerm>> {
    if tree.cf_binary_levels().is_none() {
        return Err(Error::InvalidArgument(
            "expected a complete binary x-y tree".into(),
        ));
    }
    let (c0, c1) = (tree.child(j, Letter::X)?, tree.child(j, Letter::Y)?);
    match (c0, c1) {
        (Some(a), Some(b)) if tree.is_leaf(a)? && tree.is_leaf(b)? => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "node {j} is not the parent of two terminal nodes"
            )))
        }
    }
    let gs = GeneratorSet::from_tree(tree);
    let g = gs.generators();
    let j = j as usize;
    let idx = [j, 2 * j, 2 * j + 1, 4 * j, 4 * j + 1, 4 * j + 2, 4 * j + 3];
    let parent = tree.position(j as u32)?;
    let mut out = Vec::new();
    for (a, &ia) in idx.iter().enumerate() {
        for &ib in &idx[a + 1..] {
            let w = g[ia - 1].multiply(&g[ib - 1])?.word();
            if matches!(w.letter(parent), Letter::I | Letter::Z) {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Dimension of the real Lie algebra generated by `i·terms` under commutators.
pub fn lie_closure_dimension(terms: &[PauliTerm]) -> Result<usize> {
    const TOL: f64 = 1e-9;
    let mut basis: Vec<DMatrix<C64>> = Vec::new();
    let mut orth: Vec<DVector<C64>> = Vec::new();
    let mut add = |mat: DMatrix<C64>, basis: &mut Vec<DMatrix<C64>>| {
        let mut v = DVector::from_column_slice(mat.as_slice());
        for q in orth.iter() {
            let c = q.dotc(&v);
            v -= q * c;
        }
        let norm = v.norm();
        if norm > TOL * mat.norm().max(1.0) {
            orth.push(v / C64::new(norm, 0.0));
            basis.push(mat);
            true
        } else {
            false
        }
    };
    for t in terms {
        add(t.to_dense()?.into_matrix(), &mut basis);
    }
    let mut start = 0;
    while start < basis.len() {
        let end = basis.len();
        for a in 0..end {
            for b in start.max(a + 1)..end {
                let c = &basis[a] * &basis[b] - &basis[b] * &basis[a];
                add(c, &mut basis);
            }
        }
        start = end;
    }
    Ok(basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseOperator;

    fn binary(levels: u32) -> GeneratorSet {
        GeneratorSet::from_tree(&QubitTree::cf_binary(levels).unwrap())
    }

    /// `Σ_k R_kj g_k` against `Û g_j Û†`.
    fn conjugation_error(h: &QuadraticHamiltonian, r: &RotationMatrix) -> f64 {
        let u = h.dense_unitary().unwrap();
        let g: Vec<DenseOperator> = h
            .basis()
            .generators()
            .iter()
            .map(|g| g.to_dense().unwrap())
            .collect();
        let mut worst = 0.0f64;
        for j in 0..g.len() {
            let lhs = &(&u * &g[j]) * &u.adjoint();
            let mut rhs = DenseOperator::zeros(h.basis().width()).unwrap();
            for (k, gk) in g.iter().enumerate() {
                rhs = &rhs + &gk.scale(C64::new(r.entry(k, j), 0.0));
            }
            worst = worst.max(lhs.max_deviation(&rhs));
        }
        worst
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let gs = binary(2);
        let h = QuadraticHamiltonian::new(&gs, 1.0);
        let r = adjoint_rotation(&h).unwrap();
        assert!((r.to_dense() - DMatrix::identity(7, 7)).amax() < 1e-15);
    }

    #[test]
    fn single_plane_rotation() {
        let gs = binary(2);
        let mut h = QuadraticHamiltonian::new(&gs, 0.1);
        h.add_term(1, 2, 0.7).unwrap();
        let r = adjoint_rotation(&h).unwrap();
        let th: f64 = 2.0 * 0.1 * 0.7;
        assert_eq!(r.support(), vec![1, 2]);
        assert!((r.entry(1, 1) - th.cos()).abs() < 1e-12);
        assert!((r.entry(2, 1) - th.sin()).abs() < 1e-12);
        assert!((r.entry(1, 2) + th.sin()).abs() < 1e-12);
        assert!(conjugation_error(&h, &r) < 1e-10);
    }

    #[test]
    fn dense_conjugation_random() {
        let gs = binary(2);
        let mut h = QuadraticHamiltonian::new(&gs, 0.37);
        let vals = [0.3, -1.1, 0.5, 0.9, -0.2, 0.4, 1.3];
        let mut t = 0;
        for j in 0..7 {
            for k in j + 1..7 {
                h.add_term(j, k, vals[t % 7] * (1.0 + t as f64 / 10.0))
                    .unwrap();
                t += 1;
            }
        }
        let r = adjoint_rotation(&h).unwrap();
        assert!(conjugation_error(&h, &r) < 1e-9);
        assert!(r.orthogonality_error() < 1e-10);
        assert!((r.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn antisymmetry_enforced() {
        let gs = binary(2);
        let mut h = DMatrix::zeros(7, 7);
        h[(0, 1)] = 1.0;
        assert!(matches!(
            QuadraticHamiltonian::from_matrix(&gs, &h, 1.0),
            Err(Error::NotAntisymmetric(0, 1))
        ));
        h[(1, 0)] = -1.0;
        assert_eq!(
            QuadraticHamiltonian::from_matrix(&gs, &h, 1.0)
                .unwrap()
                .terms()
                .count(),
            1
        );
        let mut q = QuadraticHamiltonian::without_first(&gs, 1.0);
        assert!(q.add_term(0, 3, 1.0).is_err());
        assert!(q.add_term(2, 2, 1.0).is_err());
    }

    #[test]
    fn basis_state_closed_form_matches_oracle() {
        let gs = binary(2);
        for idx in 0..8 {
            let s = StateVector::basis(3, idx).unwrap();
            let bits = crate::dense::index_to_bits(idx, 3);
            let v = basis_expectations(&gs, &bits).unwrap();
            let vo = state_expectations(&gs, &s).unwrap();
            let m = basis_covariance(&gs, &bits).unwrap();
            let mo = state_covariance(&gs, &s).unwrap();
            for j in 0..7 {
                assert!((v[j] - vo[j]).abs() < 1e-12);
                for k in 0..7 {
                    assert!((m[(j, k)] - mo[(j, k)]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn composition() {
        let gs = binary(2);
        let mut h1 = QuadraticHamiltonian::new(&gs, 0.4);
        h1.add_term(0, 3, 1.0).unwrap();
        let mut h2 = QuadraticHamiltonian::new(&gs, 0.9);
        h2.add_term(3, 5, -0.6).unwrap();
        let r1 = adjoint_rotation(&h1).unwrap();
        let r2 = adjoint_rotation(&h2).unwrap();
        let v: Vec<f64> = (0..7).map(|k| k as f64 - 2.5).collect();
        let seq = propagate_expectations(&r2, &propagate_expectations(&r1, &v).unwrap()).unwrap();
        let once = propagate_expectations(&r1.then(&r2).unwrap(), &v).unwrap();
        for k in 0..7 {
            assert!((seq[k] - once[k]).abs() < 1e-12);
        }
        assert!(propagate_expectations(&r1, &v[..3]).is_err());
    }

    #[test]
    fn su4_set_small() {
        let t = QubitTree::cf_binary(2).unwrap();
        let set = terminal_pair_su4_set(&t, 1).unwrap();
        let strs: BTreeSet<String> = set.iter().map(|w| w.to_string()).collect();
        assert_eq!(strs.len(), 15);
        for s in ["+IXI", "+IIY", "+ZXY"] {
            assert!(strs.contains(s), "{s}");
        }
        assert_eq!(lie_closure_dimension(&set).unwrap(), 15);
        assert!(terminal_pair_su4_set(&QubitTree::cf_binary(3).unwrap(), 1).is_err());
    }
}
