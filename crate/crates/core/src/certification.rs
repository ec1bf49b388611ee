//! Cauchy-Schwarz witness `V_{i,j} = 2/3 sqrt(G_ii G_jj) - G_ij` and its
//! Poissonian significance.
//!
//! Classical intensity correlations obey `V <= 0`; a positive entry
//! certifies non-classical correlations. Applied to measured counts, the
//! witness variance follows from first-order propagation with independent
//! Poisson entries (`sigma_N = sqrt(N)`), and pairs touching an empty bin
//! are left undefined instead of being certified from no data.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::sampling::CountMatrix;
use crate::twophoton::CorrelationMatrix;

/// Where the violation map came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationSource {
    ExactCorrelations,
    Counts,
}

/// Witness values `V_{i,j}` for all site pairs `i != j`, optionally with
/// `V / sigma_V` significances when computed from counts.
///
/// Diagonal entries and pairs with an empty underlying bin are `NaN`.
#[derive(Debug, Clone)]
pub struct ViolationMap {
    violation: DMatrix<f64>,
    sigma: Option<DMatrix<f64>>,
    significance: Option<DMatrix<f64>>,
    source: ViolationSource,
}

impl ViolationMap {
    pub fn violation(&self) -> &DMatrix<f64> {
        &self.violation
    }

    /// Propagated standard deviation of each witness entry, when counts
    /// were the source.
    pub fn sigma(&self) -> Option<&DMatrix<f64>> {
        self.sigma.as_ref()
    }

    pub fn significance(&self) -> Option<&DMatrix<f64>> {
        self.significance.as_ref()
    }

    pub fn source(&self) -> ViolationSource {
        self.source
    }

    pub fn size(&self) -> usize {
        self.violation.nrows()
    }

    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        !self.violation[(i, j)].is_nan()
    }

    /// Unordered pairs `i < j` with a defined, strictly positive witness.
    pub fn positive_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.violation[(i, j)] > 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Unordered pairs whose significance exceeds `threshold`.
    pub fn certified_pairs(&self, threshold: f64) -> Vec<(usize, usize)> {
        let Some(sig) = &self.significance else {
            return Vec::new();
        };
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if sig[(i, j)] > threshold {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Largest defined significance, if any.
    pub fn max_significance(&self) -> Option<f64> {
        let sig = self.significance.as_ref()?;
        sig.iter().filter(|v| !v.is_nan()).cloned().reduce(f64::max)
    }

    /// Largest defined witness value among pairs `i != j`.
    pub fn max_violation(&self) -> Option<f64> {
        let n = self.size();
        let mut best: Option<f64> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.violation[(i, j)];
                if !v.is_nan() {
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
            }
        }
        best
    }
}

/// Witness map from exact correlation values; no significance attached.
pub fn violation_map(g: &CorrelationMatrix) -> ViolationMap {
    let n = g.size();
    let values = g.values();
    let mut violation = DMatrix::from_element(n, n, f64::NAN);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                violation[(i, j)] =
                    (2.0 / 3.0) * (values[(i, i)] * values[(j, j)]).sqrt() - values[(i, j)];
            }
        }
    }
    ViolationMap {
        violation,
        sigma: None,
        significance: None,
        source: ViolationSource::ExactCorrelations,
    }
}

/// Witness map from raw coincidence counts with Poissonian significances.
///
/// For pair `(i, j)` with counts `N_ii`, `N_jj`, `N_ij` all positive,
/// `V = 2/3 sqrt(N_ii N_jj) - N_ij` and
/// `sigma_V^2 = N_ii / 9 + N_jj / 9 + N_ij`; pairs touching a zero count
/// stay undefined.
pub fn violation_significance(counts: &CountMatrix) -> Result<ViolationMap> {
    let n = counts.size();
    let mut violation = DMatrix::from_element(n, n, f64::NAN);
    let mut sigma = DMatrix::from_element(n, n, f64::NAN);
    let mut significance = DMatrix::from_element(n, n, f64::NAN);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let n_ii = counts.get(i, i) as f64;
            let n_jj = counts.get(j, j) as f64;
            let n_ij = counts.get(i, j) as f64;
            if n_ii == 0.0 || n_jj == 0.0 || n_ij == 0.0 {
                continue;
            }
            let v = (2.0 / 3.0) * (n_ii * n_jj).sqrt() - n_ij;
            let s = (n_ii / 9.0 + n_jj / 9.0 + n_ij).sqrt();
            violation[(i, j)] = v;
            sigma[(i, j)] = s;
            significance[(i, j)] = v / s;
        }
    }
    Ok(ViolationMap {
        violation,
        sigma: Some(sigma),
        significance: Some(significance),
        source: ViolationSource::Counts,
    })
}
