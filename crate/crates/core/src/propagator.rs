//! Unitary evolution `U(z) = exp(-iHz)` via the real-symmetric
//! eigendecomposition `H = V diag(lambda) V^T`, plus the single-photon
//! observables derived from it.
//!
//! The spectral route is exact for Hermitian `H` up to the orthogonality
//! error of the eigenvectors, so unitarity holds to ~1e-14 at the lattice
//! sizes used here; a series-expansion exponential exists only as a test
//! oracle.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

/// `exp(-iHz)` together with the spectral factorization it came from.
#[derive(Debug, Clone)]
pub struct UnitaryPropagator {
    matrix: DMatrix<Complex64>,
    z_mm: f64,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

/// Diagonalize `H` and evolve over length `z` in millimeters.
///
/// `z = 0` returns the exact identity. Fails only if the symmetric
/// eigensolver does not converge, which signals pathological input.
pub fn evolve(h: &Hamiltonian, z_mm: f64) -> Result<UnitaryPropagator> {
    assert!(z_mm >= 0.0, "evolution length must be non-negative");
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure)?;
    Ok(UnitaryPropagator::from_spectral(eig.eigenvalues, eig.eigenvectors, z_mm))
}

impl UnitaryPropagator {
    fn from_spectral(
        eigenvalues: DVector<f64>,
        eigenvectors: DMatrix<f64>,
        z_mm: f64,
    ) -> UnitaryPropagator {
        let n = eigenvalues.len();
        let matrix = if z_mm == 0.0 {
            DMatrix::identity(n, n)
        } else {
            let vc = eigenvectors.map(|x| Complex64::new(x, 0.0));
            let phases = DVector::from_iterator(
                n,
                eigenvalues.iter().map(|&l| (-Complex64::i() * l * z_mm).exp()),
            );
            &vc * DMatrix::from_diagonal(&phases) * vc.transpose()
        };
        UnitaryPropagator { matrix, z_mm, eigenvalues, eigenvectors }
    }

    /// Re-evolve to a different length reusing the cached eigenpairs.
    pub fn at_z(&self, z_mm: f64) -> UnitaryPropagator {
        assert!(z_mm >= 0.0, "evolution length must be non-negative");
        Self::from_spectral(self.eigenvalues.clone(), self.eigenvectors.clone(), z_mm)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn z_mm(&self) -> f64 {
        self.z_mm
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Transition amplitude into site `to` from site `from`.
    pub fn entry(&self, to: usize, from: usize) -> Complex64 {
        self.matrix[(to, from)]
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Max-entry deviation of `U^dag U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.size();
        let gram = self.matrix.adjoint() * &self.matrix;
        let mut err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                err = err.max((gram[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        err
    }
}

/// Single-photon output distribution over the lattice sites.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    values: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Wrap raw non-negative values. No normalization is applied.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        Ok(ProbabilityDistribution { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Apply an index permutation: `out[perm[i]] = in[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ProbabilityDistribution {
        let mut values = vec![0.0; self.values.len()];
        for (i, &p) in self.values.iter().enumerate() {
            values[perm[i]] = p;
        }
        ProbabilityDistribution { values }
    }
}

/// `p_j = |U_{j,input}|^2`; sums to one by unitarity, no renormalization.
pub fn single_photon_probabilities(
    u: &UnitaryPropagator,
    input_site: usize,
) -> Result<ProbabilityDistribution> {
    let n = u.size();
    if input_site >= n {
        return Err(Error::IndexOutOfRange { index: input_site, size: n });
    }
    let values = (0..n).map(|j| u.entry(j, input_site).norm_sqr()).collect();
    Ok(ProbabilityDistribution { values })
}

/// Similarity `S = (sum_j sqrt(p_j q_j))^2 / (sum_j p_j sum_j q_j)`,
/// equal to one iff the distributions are proportional.
pub fn distribution_similarity(
    p_exp: &ProbabilityDistribution,
    p_th: &ProbabilityDistribution,
) -> Result<f64> {
    if p_exp.len() != p_th.len() {
        return Err(Error::LengthMismatch { expected: p_exp.len(), actual: p_th.len() });
    }
    let cross: f64 = p_exp
        .values
        .iter()
        .zip(&p_th.values)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum();
    let mass = p_exp.total() * p_th.total();
    if mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(cross * cross / mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Hamiltonian;
    use crate::lattice::build_hexagonal_lattice;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn two_site(coupling: f64) -> Hamiltonian {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = coupling;
        m[(1, 0)] = coupling;
        Hamiltonian::from_matrix(m).unwrap()
    }

    #[test]
    fn zero_length_is_exact_identity() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.3, 0.2);
        let u = evolve(&h, 0.0).unwrap();
        let n = u.size();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(u.entry(i, j), Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn two_site_cosine_law() {
        let c = 0.8;
        let h = two_site(c);
        for &z in &[0.1, 0.5, 1.3, 2.7] {
            let u = evolve(&h, z).unwrap();
            assert_relative_eq!(
                u.entry(0, 0).norm_sqr(),
                (c * z).cos().powi(2),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                u.entry(1, 0).norm_sqr(),
                (c * z).sin().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn lattice_evolution_is_unitary() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 11.0).unwrap();
        assert!(u.unitarity_error() < 1e-10);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 11.0).unwrap();
        let p = single_photon_probabilities(&u, lat.port_site(-1).unwrap()).unwrap();
        assert_relative_eq!(p.total(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_length_gives_delta_distribution() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 0.0).unwrap();
        let p = single_photon_probabilities(&u, 5).unwrap();
        for (j, &v) in p.values().iter().enumerate() {
            assert_eq!(v, if j == 5 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn input_site_bounds_checked() {
        let h = two_site(1.0);
        let u = evolve(&h, 1.0).unwrap();
        assert!(matches!(
            single_photon_probabilities(&u, 2),
            Err(Error::IndexOutOfRange { index: 2, size: 2 })
        ));
    }

    #[test]
    fn uniform_beta_is_a_global_phase() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let z = 11.0;
        let base = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let p0 = single_photon_probabilities(
            &evolve(&base, z).unwrap(),
            lat.port_site(1).unwrap(),
        )
        .unwrap();
        for &delta in &[0.5, -1.0, 3.25, 10.0, 0.001] {
            let shifted = Hamiltonian::assemble_uniform(&lat, delta, 0.2);
            let p = single_photon_probabilities(
                &evolve(&shifted, z).unwrap(),
                lat.port_site(1).unwrap(),
            )
            .unwrap();
            for (a, b) in p.values().iter().zip(p0.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mirror_ports_give_mirror_distributions() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 11.0).unwrap();
        let p_minus =
            single_photon_probabilities(&u, lat.port_site(-1).unwrap()).unwrap();
        let p_plus = single_photon_probabilities(&u, lat.port_site(1).unwrap()).unwrap();
        let mirrored = p_minus.permuted(&lat.mirror_permutation());
        for (a, b) in mirrored.values().iter().zip(p_plus.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn at_z_matches_fresh_evolution() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.1, 0.3);
        let u1 = evolve(&h, 4.0).unwrap();
        let u2 = evolve(&h, 9.0).unwrap();
        let diff = (u1.at_z(9.0).matrix() - u2.matrix()).map(|c| c.norm()).max();
        assert!(diff < 1e-12);
    }

    #[test]
    fn similarity_identity_and_disjoint() {
        let p = ProbabilityDistribution::from_values(vec![0.25, 0.5, 0.25]).unwrap();
        assert_relative_eq!(distribution_similarity(&p, &p).unwrap(), 1.0);

        let a = ProbabilityDistribution::from_values(vec![1.0, 0.0]).unwrap();
        let b = ProbabilityDistribution::from_values(vec![0.0, 1.0]).unwrap();
        assert_eq!(distribution_similarity(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn similarity_is_scale_invariant() {
        let p = ProbabilityDistribution::from_values(vec![0.1, 0.6, 0.3]).unwrap();
        let q = ProbabilityDistribution::from_values(vec![0.3, 1.8, 0.9]).unwrap();
        assert_relative_eq!(distribution_similarity(&p, &q).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_mass_similarity_rejected() {
        let p = ProbabilityDistribution::from_values(vec![0.0, 0.0]).unwrap();
        let q = ProbabilityDistribution::from_values(vec![0.5, 0.5]).unwrap();
        assert!(matches!(distribution_similarity(&p, &q), Err(Error::ZeroMass)));
    }
}
