//! Ladder-form evolution: `Ĥ = Σ hm_jk a_j† a_k` acting on path-state amplitudes.
//!
//! With `Û = exp(-iĤτ)` the annihilators transform as `Û a_k Û† = Σ_j U_kj a_j`
//! for `U = exp(+i·hm·τ)`, and path-state amplitudes as `χ′ = U†χ`.

use nalgebra::{DMatrix, DVector};

use crate::dense::{exp_hamiltonian, DenseOperator, StateVector, C64};
use crate::error::{Error, Result};
use crate::fermion::FermionEncoding;

const HERMITIAN_TOL: f64 = 1e-10;

/// Hermitian `m × m` coefficients, assembled from `Σ̌`/`Λ̌` terms or directly.
///
/// Mode indices are 0-based positions in the encoding's ladder list.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeHamiltonian {
    hm: DMatrix<C64>,
}

impl ModeHamiltonian {
    pub fn zeros(m: usize) -> Self {
        ModeHamiltonian {
            hm: DMatrix::zeros(m, m),
        }
    }

    pub fn from_matrix(hm: DMatrix<C64>) -> Result<Self> {
        if !hm.is_square() {
            return Err(Error::InvalidArgument(
                "coefficient array must be square".into(),
            ));
        }
        let err = (&hm - hm.adjoint()).camax();
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        Ok(ModeHamiltonian { hm })
    }

    pub fn modes(&self) -> usize {
        self.hm.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.hm
    }

    fn check(&self, j: usize, k: usize) -> Result<()> {
        if j.max(k) >= self.modes() {
            return Err(Error::InvalidArgument(format!(
                "mode index out of range: ({j}, {k})"
            )));
        }
        Ok(())
    }

    /// Adds `c a_j† a_k + c̄ a_k† a_j` (or `Re c · a_j† a_j` when `j == k`).
    pub fn add_hopping(&mut self, j: usize, k: usize, c: C64) -> Result<()> {
        self.check(j, k)?;
        if j == k {
            self.hm[(j, j)] += C64::new(c.re, 0.0);
        } else {
            self.hm[(j, k)] += c;
            self.hm[(k, j)] += c.conj();
        }
        Ok(())
    }

    /// Adds `s · (a_j†a_k + a_k†a_j)/2`.
    pub fn add_sigma(&mut self, j: usize, k: usize, s: f64) -> Result<()> {
        self.add_hopping(j, k, C64::new(if j == k { s } else { s / 2.0 }, 0.0))
    }

    /// Adds `l · (a_j†a_k - a_k†a_j)/(2i)`.
    pub fn add_lambda(&mut self, j: usize, k: usize, l: f64) -> Result<()> {
        if j == k {
            self.check(j, k)?;
            return Ok(());
        }
        self.add_hopping(j, k, C64::new(0.0, -l / 2.0))
    }

    /// Dense `Σ hm_jk a_j† a_k` on the encoding's qubits.
    pub fn to_dense(&self, encoding: &FermionEncoding) -> Result<DenseOperator> {
        let m = encoding.width();
        if m != self.modes() {
            return Err(Error::LengthMismatch {
                expected: m,
                got: self.modes(),
            });
        }
        let a: Vec<DenseOperator> = encoding
            .ladders()
            .iter()
            .map(|l| l.annihilator())
            .collect::<Result<_>>()?;
        let mut acc = DenseOperator::zeros(m)?;
        for (j, aj) in a.iter().enumerate() {
            let aj_dag = aj.adjoint();
            for (k, ak) in a.iter().enumerate() {
                let c = self.hm[(j, k)];
                if c != C64::new(0.0, 0.0) {
                    acc = &acc + &(&aj_dag * ak).scale(c);
                }
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    u: DMatrix<C64>,
}

impl ModeUnitary {
    pub fn identity(m: usize) -> Self {
        ModeUnitary {
            u: DMatrix::identity(m, m),
        }
    }

    pub fn from_matrix(u: DMatrix<C64>) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::InvalidArgument("mode unitary must be square".into()));
        }
        let out = ModeUnitary { u };
        let err = out.unitarity_error();
        if err > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (error {err:.3e})"
            )));
        }
        Ok(out)
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.u
    }

    pub fn unitarity_error(&self) -> f64 {
        let m = self.modes();
        (self.u.adjoint() * &self.u - DMatrix::<C64>::identity(m, m)).camax()
    }

    /// `self` followed by `after`. Since `Û₂Û₁ a Û₁†Û₂† = U₁ U₂ a`, the product is `U₁U₂`.
    pub fn then(&self, after: &ModeUnitary) -> Result<ModeUnitary> {
        if self.modes() != after.modes() {
            return Err(Error::LengthMismatch {
                expected: self.modes(),
                got: after.modes(),
            });
        }
        Ok(ModeUnitary {
            u: &self.u * &after.u,
        })
    }
}

/// `U = exp(+i·hm·τ)`, the matrix in `Û a_k Û† = Σ_j U_kj a_j` for `Û = exp(-iĤτ)`.
pub fn mode_unitary(h: &ModeHamiltonian, tau: f64) -> Result<ModeUnitary> {
    let m = h.modes();
    let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let phases = DVector::from_iterator(
        m,
        eig.eigenvalues
            .iter()
            .map(|&e| C64::new(0.0, e * tau).exp()),
    );
    let v = &eig.eigenvectors;
    Ok(ModeUnitary {
        u: v * DMatrix::from_diagonal(&phases) * v.adjoint(),
    })
}

/// Amplitudes `χ_k` of `Σ_k χ_k ǎ_k†|∅⟩`, ordered like the encoding's ladders.
#[derive(Clone, Debug, PartialEq)]
pub struct PathStateVector {
    chi: DVector<C64>,
}

impl PathStateVector {
    pub fn new(chi: DVector<C64>) -> Self {
        PathStateVector { chi }
    }

    /// `ǎ_k†|∅⟩` for mode position `k`.
    pub fn unit(m: usize, k: usize) -> Result<Self> {
        if k >= m {
            return Err(Error::InvalidArgument(format!(
                "mode {k} out of range for {m} modes"
            )));
        }
        let mut chi = DVector::zeros(m);
        chi[k] = C64::new(1.0, 0.0);
        Ok(PathStateVector { chi })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.chi
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.chi.norm()
    }

    /// Dense `Σ_k χ_k ǎ_k†|∅⟩`.
    pub fn to_dense(&self, encoding: &FermionEncoding) -> Result<StateVector> {
        if encoding.width() != self.len() {
            return Err(Error::LengthMismatch {
                expected: encoding.width(),
                got: self.len(),
            });
        }
        let vac = StateVector::vacuum(self.len())?;
        let mut acc = vac.scale(C64::new(0.0, 0.0));
        for (l, &c) in encoding.ladders().iter().zip(self.chi.iter()) {
            if c != C64::new(0.0, 0.0) {
                acc = acc.add(&l.creator()?.apply(&vac)?.scale(c));
            }
        }
        Ok(acc)
    }
}

/// `χ′ = U†χ`.
pub fn propagate_path_state(u: &ModeUnitary, chi: &PathStateVector) -> Result<PathStateVector> {
    if u.modes() != chi.len() {
        return Err(Error::LengthMismatch {
            expected: u.modes(),
            got: chi.len(),
        });
    }
    Ok(PathStateVector {
        chi: u.matrix().adjoint() * &chi.chi,
    })
}

/// Dense `exp(-iĤτ)` for a ladder-form Hamiltonian.
pub fn dense_mode_evolution(
    encoding: &FermionEncoding,
    h: &ModeHamiltonian,
    tau: f64,
) -> Result<DenseOperator> {
    exp_hamiltonian(&h.to_dense(encoding)?, tau)
}

/// Result of checking `|U_jk| = |U_{2j,2k}| = |U_{2j+1,2k+1}| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferCheck {
    pub magnitudes: [f64; 3],
    pub perfect: bool,
}

/// Perfect-transfer test for modes `j → k`, with 1-based mode numbers.
pub fn perfect_transfer_check(u: &ModeUnitary, j: usize, k: usize) -> Result<TransferCheck> {
    let m = u.modes();
    if j == 0 || k == 0 || 2 * j.max(k) + 1 > m {
        return Err(Error::InvalidArgument(format!(
            "modes ({j}, {k}) need children 2j+1, 2k+1 within 1..={m}"
        )));
    }
    let at = |a: usize, b: usize| u.matrix()[(a - 1, b - 1)].norm();
    let magnitudes = [at(j, k), at(2 * j, 2 * k), at(2 * j + 1, 2 * k + 1)];
    Ok(TransferCheck {
        magnitudes,
        perfect: magnitudes.iter().all(|x| (x - 1.0).abs() <= 1e-8),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::ladder_binary_xy;
    use crate::tree::QubitTree;

    fn enc2() -> FermionEncoding {
        ladder_binary_xy(&QubitTree::cf_binary(2).unwrap()).unwrap()
    }

    fn random_h() -> ModeHamiltonian {
        let mut h = ModeHamiltonian::zeros(3);
        h.add_sigma(0, 1, 0.7).unwrap();
        h.add_lambda(1, 2, -0.4).unwrap();
        h.add_hopping(0, 2, C64::new(0.2, 0.5)).unwrap();
        h.add_sigma(1, 1, 0.9).unwrap();
        h
    }

    #[test]
    fn zero_is_identity() {
        let u = mode_unitary(&ModeHamiltonian::zeros(3), 1.0).unwrap();
        assert!((u.matrix() - DMatrix::<C64>::identity(3, 3)).camax() < 1e-15);
    }

    #[test]
    fn conjugation_contract() {
        let enc = enc2();
        let h = random_h();
        let tau = 0.61;
        let uhat = dense_mode_evolution(&enc, &h, tau).unwrap();
        let u = mode_unitary(&h, tau).unwrap();
        let a: Vec<DenseOperator> = enc
            .ladders()
            .iter()
            .map(|l| l.annihilator().unwrap())
            .collect();
        for k in 0..3 {
            let lhs = &(&uhat * &a[k]) * &uhat.adjoint();
            let mut rhs = DenseOperator::zeros(3).unwrap();
            for (j, aj) in a.iter().enumerate() {
                rhs = &rhs + &aj.scale(u.matrix()[(k, j)]);
            }
            assert!(lhs.max_deviation(&rhs) < 1e-10);
        }
        let vac = StateVector::vacuum(3).unwrap();
        assert!(uhat.apply(&vac).unwrap().max_deviation(&vac) < 1e-12);
    }

    #[test]
    fn path_state_propagation() {
        let enc = enc2();
        let h = random_h();
        let u = mode_unitary(&h, 0.8).unwrap();
        let uhat = dense_mode_evolution(&enc, &h, 0.8).unwrap();
        let chi = PathStateVector::new(DVector::from_vec(vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
        ]));
        let out = propagate_path_state(&u, &chi).unwrap();
        assert!((out.norm() - chi.norm()).abs() < 1e-12);
        let dense = uhat.apply(&chi.to_dense(&enc).unwrap()).unwrap();
        assert!(out.to_dense(&enc).unwrap().max_deviation(&dense) < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            ModeHamiltonian::from_matrix(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn transfer_checks() {
        let id = ModeUnitary::identity(7);
        assert!(perfect_transfer_check(&id, 1, 1).unwrap().perfect);
        let mut p = DMatrix::<C64>::zeros(7, 7);
        let perm = [0, 2, 1, 5, 6, 3, 4];
        for (a, &b) in perm.iter().enumerate() {
            p[(a, b)] = C64::new(1.0, 0.0);
        }
        let p = ModeUnitary::from_matrix(p).unwrap();
        let c = perfect_transfer_check(&p, 2, 3).unwrap();
        assert!(c.perfect, "{:?}", c.magnitudes);
        assert!(perfect_transfer_check(&id, 4, 1).is_err());
    }
}
