//! Tight-binding Hamiltonian of the lattice: propagation constants on the
//! diagonal, nearest-neighbor couplings off the diagonal.
//!
//! Entries carry units of 1/mm so that the evolution phase `C * z` is
//! dimensionless with `z` in millimeters.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::TriangularLattice;

/// Real symmetric N x N matrix with nonzero off-diagonal entries only on
/// adjacent site pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    /// Uniform device: every site at propagation constant `beta`, every
    /// adjacent pair coupled with the same strength.
    pub fn assemble_uniform(
        lattice: &TriangularLattice,
        beta_per_mm: f64,
        coupling_per_mm: f64,
    ) -> Hamiltonian {
        assert!(coupling_per_mm >= 0.0, "coupling must be non-negative");
        let n = lattice.site_count();
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            matrix[(i, i)] = beta_per_mm;
        }
        for (i, j) in lattice.edges() {
            matrix[(i, j)] = coupling_per_mm;
            matrix[(j, i)] = coupling_per_mm;
        }
        Hamiltonian { matrix }
    }

    /// Fabrication-disorder variant: per-site propagation constants and
    /// per-edge couplings. Edge keys are unordered pairs of site indices;
    /// an adjacent edge absent from the map takes `fill_coupling` when one
    /// is given and is an error otherwise.
    pub fn assemble_disordered(
        lattice: &TriangularLattice,
        beta_per_site: &[f64],
        coupling_per_edge: &BTreeMap<(usize, usize), f64>,
        fill_coupling: Option<f64>,
    ) -> Result<Hamiltonian> {
        let n = lattice.site_count();
        if beta_per_site.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: beta_per_site.len() });
        }
        for (&(a, b), _) in coupling_per_edge {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), size: n });
            }
            if !lattice.is_adjacent(a, b) {
                return Err(Error::EdgeNotAdjacent { a, b });
            }
        }

        let mut matrix = DMatrix::zeros(n, n);
        for (i, &beta) in beta_per_site.iter().enumerate() {
            matrix[(i, i)] = beta;
        }
        for (i, j) in lattice.edges() {
            let c = coupling_per_edge
                .get(&(i, j))
                .or_else(|| coupling_per_edge.get(&(j, i)))
                .copied();
            let c = match (c, fill_coupling) {
                (Some(c), _) => c,
                (None, Some(fill)) => fill,
                (None, None) => return Err(Error::MissingEdgeCoupling { a: i, b: j }),
            };
            matrix[(i, j)] = c;
            matrix[(j, i)] = c;
        }
        Ok(Hamiltonian { matrix })
    }

    /// Wrap an arbitrary symmetric matrix (an adjacency-like graph
    /// Hamiltonian not tied to a triangular lattice). Symmetry is checked
    /// exactly.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Hamiltonian> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::LengthMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let mut max_asym = 0.0f64;
        for i in 0..matrix.nrows() {
            for j in (i + 1)..matrix.ncols() {
                max_asym = max_asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
            }
        }
        if max_asym > 0.0 {
            return Err(Error::NotSymmetric { max_asymmetry: max_asym });
        }
        Ok(Hamiltonian { matrix })
    }

    pub fn site_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Nonzero off-diagonal entries as unordered `(i, j, value)` triples.
    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        let n = self.site_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.matrix[(i, j)] != 0.0 {
                    out.push((i, j, self.matrix[(i, j)]));
                }
            }
        }
        out
    }
}
