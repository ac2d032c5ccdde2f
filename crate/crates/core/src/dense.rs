//! Exponential-cost reference: dense operators and statevectors.
//!
//! Everything here scales as `2^m` (vectors) or `4^m` (operators) and is capped
//! accordingly. The rest of the crate is checked against these routines.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliTerm;

/// Largest qubit count realized as a dense operator.
pub const MAX_OPERATOR_QUBITS: usize = 10;
/// Largest qubit count for statevector-only Pauli application.
pub const MAX_STATE_QUBITS: usize = 14;

pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn i_pow(q: u32) -> C64 {
    match q % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

fn check_operator_width(width: usize) -> Result<()> {
    if width > MAX_OPERATOR_QUBITS {
        return Err(Error::OracleTooLarge {
            width,
            limit: MAX_OPERATOR_QUBITS,
        });
    }
    Ok(())
}

/// A `2^m × 2^m` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    qubits: usize,
    mat: DMatrix<C64>,
}

impl DenseOperator {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if dim != mat.ncols() || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "dense operator must be square with power-of-two size, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        check_operator_width(qubits)?;
        Ok(DenseOperator { qubits, mat })
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        check_operator_width(qubits)?;
        let dim = 1 << qubits;
        Ok(DenseOperator {
            qubits,
            mat: DMatrix::identity(dim, dim),
        })
    }

    pub fn zeros(qubits: usize) -> Result<Self> {
        check_operator_width(qubits)?;
        let dim = 1 << qubits;
        Ok(DenseOperator {
            qubits,
            mat: DMatrix::zeros(dim, dim),
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn scale(&self, c: C64) -> DenseOperator {
        DenseOperator {
            qubits: self.qubits,
            mat: &self.mat * c,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            qubits: self.qubits,
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, other: &DenseOperator) -> DenseOperator {
        &(self * other) + &(other * self)
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &DenseOperator) -> DenseOperator {
        &(self * other) - &(other * self)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_deviation(&self, other: &DenseOperator) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_deviation(&self.adjoint())
    }

    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.adjoint() * self;
        prod.max_deviation(&DenseOperator::identity(self.qubits).unwrap())
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if s.qubits() != self.qubits {
            return Err(Error::WidthMismatch {
                left: self.qubits,
                right: s.qubits(),
            });
        }
        Ok(StateVector {
            qubits: self.qubits,
            amp: &self.mat * &s.amp,
        })
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.qubits, rhs.qubits, "dense operator size mismatch");
        DenseOperator {
            qubits: self.qubits,
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.qubits, rhs.qubits, "dense operator size mismatch");
        DenseOperator {
            qubits: self.qubits,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.qubits, rhs.qubits, "dense operator size mismatch");
        DenseOperator {
            qubits: self.qubits,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl PauliTerm {
    /// Kronecker-product realization, qubit 0 as the most significant tensor factor.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        check_operator_width(self.width())?;
        let dim = 1usize << self.width();
        let (xm, zm) = self.basis_masks();
        let base = self.phase() as u32 + self.y_count();
        let mut mat = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let sign = 2 * ((col as u64 & zm).count_ones() % 2);
            mat[(col ^ xm as usize, col)] = i_pow(base + sign);
        }
        Ok(DenseOperator {
            qubits: self.width(),
            mat,
        })
    }
}

/// Complex amplitudes over the `2^m` computational basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amp: DVector<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn vacuum(qubits: usize) -> Result<Self> {
        StateVector::basis(qubits, 0)
    }

    /// Basis state with index `index` (qubit 0 is the most significant bit).
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits > MAX_STATE_QUBITS {
            return Err(Error::OracleTooLarge {
                width: qubits,
                limit: MAX_STATE_QUBITS,
            });
        }
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range"
            )));
        }
        let mut amp = DVector::zeros(dim);
        amp[index] = C64::new(1.0, 0.0);
        Ok(StateVector { qubits, amp })
    }

    /// Basis state `|n_1 … n_m⟩` from per-qubit bits.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        StateVector::basis(bits.len(), bits_to_index(bits))
    }

    pub fn from_amplitudes(amp: DVector<C64>) -> Result<Self> {
        let dim = amp.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state length {dim} is not a power of two"
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        if qubits > MAX_STATE_QUBITS {
            return Err(Error::OracleTooLarge {
                width: qubits,
                limit: MAX_STATE_QUBITS,
            });
        }
        Ok(StateVector { qubits, amp })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    pub fn normalized(&self) -> StateVector {
        StateVector {
            qubits: self.qubits,
            amp: &self.amp / C64::new(self.norm(), 0.0),
        }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amp.dotc(&other.amp)
    }

    pub fn scale(&self, c: C64) -> StateVector {
        StateVector {
            qubits: self.qubits,
            amp: &self.amp * c,
        }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        StateVector {
            qubits: self.qubits,
            amp: &self.amp + &other.amp,
        }
    }

    /// Largest amplitude modulus of `self - other`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        (&self.amp - &other.amp)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// If `self = c·other` for a unit-modulus `c`, returns `c`.
    pub fn phase_relative_to(&self, other: &StateVector, tol: f64) -> Option<C64> {
        let c = other.inner(self) / other.inner(other);
        if (c.norm() - 1.0).abs() > tol {
            return None;
        }
        (self.max_deviation(&other.scale(c)) <= tol).then_some(c)
    }

    /// Index of the single basis state carrying all the weight, if any.
    pub fn as_basis_state(&self, tol: f64) -> Option<usize> {
        let mut found = None;
        for (k, a) in self.amp.iter().enumerate() {
            let n = a.norm();
            if (n - 1.0).abs() <= tol {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            } else if n > tol {
                return None;
            }
        }
        found
    }
}

impl StateVector {
    /// Probability that the XOR of the bits at `positions` is 1.
    pub fn parity_probability(&self, positions: &[usize]) -> Result<f64> {
        let mut mask = 0usize;
        for &p in positions {
            if p >= self.qubits {
                return Err(Error::InvalidArgument(format!("qubit {p} out of range")));
            }
            mask |= 1 << (self.qubits - 1 - p);
        }
        Ok(self
            .amp
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & mask).count_ones() % 2 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}

/// Basis index of `|n_1 … n_m⟩`.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Per-qubit bits of basis index `index`.
pub fn index_to_bits(index: usize, qubits: usize) -> Vec<bool> {
    (0..qubits)
        .map(|k| index >> (qubits - 1 - k) & 1 == 1)
        .collect()
}

/// Applies a Pauli term to a statevector without building a matrix.
pub fn apply_pauli(term: &PauliTerm, s: &StateVector) -> Result<StateVector> {
    if term.width() != s.qubits {
        return Err(Error::WidthMismatch {
            left: term.width(),
            right: s.qubits,
        });
    }
    if term.width() > MAX_STATE_QUBITS {
        return Err(Error::OracleTooLarge {
            width: term.width(),
            limit: MAX_STATE_QUBITS,
        });
    }
    let (xm, zm) = term.basis_masks();
    let base = term.phase() as u32 + term.y_count();
    let mut out = DVector::zeros(s.amp.len());
    for (col, a) in s.amp.iter().enumerate() {
        let sign = 2 * ((col as u64 & zm).count_ones() % 2);
        out[col ^ xm as usize] = a * i_pow(base + sign);
    }
    Ok(StateVector {
        qubits: s.qubits,
        amp: out,
    })
}

/// `exp(-i H τ)` for Hermitian `H`, via the Hermitian eigendecomposition.
pub fn exp_hamiltonian(h: &DenseOperator, tau: f64) -> Result<DenseOperator> {
    let herr = h.hermiticity_error();
    if herr > 1e-10 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(herr));
    }
    let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| (-I * e * tau).exp()),
    );
    let v = &eig.eigenvectors;
    let mat = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    Ok(DenseOperator {
        qubits: h.qubits(),
        mat,
    })
}

/// Any operator whose expectation can be evaluated on a statevector.
pub trait Observable {
    fn expectation_in(&self, s: &StateVector) -> Result<C64>;
}

impl Observable for PauliTerm {
    fn expectation_in(&self, s: &StateVector) -> Result<C64> {
        Ok(s.inner(&apply_pauli(self, s)?))
    }
}

impl Observable for DenseOperator {
    fn expectation_in(&self, s: &StateVector) -> Result<C64> {
        Ok(s.inner(&self.apply(s)?))
    }
}

/// `⟨s|O|s⟩`.
pub fn expectation<O: Observable + ?Sized>(s: &StateVector, op: &O) -> Result<C64> {
    op.expectation_in(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_z_matrix() {
        let z = p("Z").to_dense().unwrap();
        assert_eq!(z.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(z.matrix()[(1, 1)], c(-1.0, 0.0));
        assert_eq!(z.matrix()[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn pauli_y_matrix() {
        let y = p("Y").to_dense().unwrap();
        assert_eq!(y.matrix()[(0, 1)], c(0.0, -1.0));
        assert_eq!(y.matrix()[(1, 0)], c(0.0, 1.0));
    }

    #[test]
    fn identity_two_qubits() {
        assert_eq!(
            p("II").to_dense().unwrap(),
            DenseOperator::identity(2).unwrap()
        );
    }

    #[test]
    fn phased_xy_is_kronecker_product() {
        let xy = p("+iXY").to_dense().unwrap();
        let x = p("X").to_dense().unwrap().into_matrix();
        let y = p("Y").to_dense().unwrap().into_matrix();
        let kron = x.kronecker(&y) * c(0.0, 1.0);
        assert!((xy.matrix() - kron).iter().all(|e| e.norm() < 1e-15));
        assert!(xy.unitarity_error() < 1e-14);
        assert!(xy.trace().norm() < 1e-15);
    }

    #[test]
    fn oversize_operator_rejected() {
        let t = PauliTerm::identity(11);
        assert!(matches!(
            t.to_dense(),
            Err(Error::OracleTooLarge { width: 11, .. })
        ));
    }

    #[test]
    fn apply_pauli_examples() {
        let z0 = apply_pauli(&p("Z"), &StateVector::vacuum(1).unwrap()).unwrap();
        assert_eq!(z0, StateVector::vacuum(1).unwrap());
        let out = apply_pauli(&p("+iXZ"), &StateVector::vacuum(2).unwrap()).unwrap();
        let expect = StateVector::basis(2, 0b10).unwrap().scale(c(0.0, 1.0));
        assert!(out.max_deviation(&expect) < 1e-15);
    }

    #[test]
    fn exp_of_zero_and_z() {
        let zero = DenseOperator::zeros(2).unwrap();
        let u = exp_hamiltonian(&zero, 0.7).unwrap();
        assert!(u.max_deviation(&DenseOperator::identity(2).unwrap()) < 1e-14);
        let z = p("Z").to_dense().unwrap();
        let u = exp_hamiltonian(&z, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(u.matrix()[(0, 0)].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u.matrix()[(1, 1)].im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn exp_matches_pade_and_composes() {
        let h = &(&p("XZ").to_dense().unwrap() + &p("YY").to_dense().unwrap().scale(c(0.3, 0.0)))
            + &p("IZ").to_dense().unwrap().scale(c(-0.7, 0.0));
        let u = exp_hamiltonian(&h, 0.83).unwrap();
        let pade = (h.matrix() * c(0.0, -0.83)).exp();
        assert!((u.matrix() - pade).camax() < 1e-9);
        assert!(u.unitarity_error() < 1e-9);
        let u12 = &exp_hamiltonian(&h, 0.3).unwrap() * &exp_hamiltonian(&h, 0.53).unwrap();
        assert!(u12.max_deviation(&u) < 1e-8);
    }

    #[test]
    fn parity_probability_of_basis_state() {
        let s = StateVector::from_bits(&[true, false, true]).unwrap();
        assert_abs_diff_eq!(s.parity_probability(&[0]).unwrap(), 1.0);
        assert_abs_diff_eq!(s.parity_probability(&[0, 2]).unwrap(), 0.0);
        assert_abs_diff_eq!(s.parity_probability(&[]).unwrap(), 0.0);
        assert!(s.parity_probability(&[3]).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = p("+iX").to_dense().unwrap();
        assert!(matches!(
            exp_hamiltonian(&h, 1.0),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn expectation_of_z_in_vacuum() {
        let vac = StateVector::vacuum(3).unwrap();
        let e = expectation(&vac, &p("IZI")).unwrap();
        assert_abs_diff_eq!(e.re, 1.0);
        let dense = p("IZI").to_dense().unwrap();
        assert_abs_diff_eq!(expectation(&vac, &dense).unwrap().re, 1.0);
    }

    #[test]
    fn bit_index_round_trip() {
        for i in 0..32 {
            assert_eq!(bits_to_index(&index_to_bits(i, 5)), i);
        }
        assert_eq!(bits_to_index(&[true, false, false]), 4);
    }
}
