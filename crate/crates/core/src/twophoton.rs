//! Two-photon observables: quantum, classical, and partially
//! distinguishable correlation matrices, delay (HOM) scans, the enlarged
//! two-photon product graph, and the matrix similarity measure.
//!
//! For input sites `i, j` and output sites `a, b` the quantum correlation
//! is
//!
//! ```text
//! G_{a,b} = 1/(1 + delta_{a,b}) |U_{a,i} U_{b,j} + U_{a,j} U_{b,i}|^2
//! ```
//!
//! normalized so that the sum over unordered output pairs is one. The
//! classical counterpart `G^c_{a,b} = p_{a,i} p_{b,j} + p_{a,j} p_{b,i}`
//! is kept verbatim, including its doubled diagonal `2 p p`; the physical
//! distinguishable limit (diagonal `1 p p`) is reached through
//! [`partial_correlation`] at indistinguishability zero. Both conventions
//! are deliberate: the first feeds the Cauchy-Schwarz witness, the second
//! is what a delay line actually produces.


use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::TriangularLattice;
use crate::propagator::UnitaryPropagator;

/// Normalization/diagonal convention carried by a correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Symmetrized two-photon amplitudes, unit mass over unordered pairs.
    Quantum,
    /// Literal product formula with doubled diagonal; not normalized.
    ClassicalPaper,
    /// Convex quantum/distinguishable mixture, unit mass over unordered pairs.
    PhysicalPartial,
}

/// Symmetric non-negative matrix of pair-detection probabilities for one
/// fixed input pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    values: DMatrix<f64>,
    convention: Convention,
}

impl CorrelationMatrix {
    /// Wrap an externally produced matrix; must be square, symmetric and
    /// non-negative.
    pub fn from_values(values: DMatrix<f64>, convention: Convention) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::LengthMismatch {
                expected: values.nrows(),
                actual: values.ncols(),
            });
        }
        let mut max_asym = 0.0f64;
        for i in 0..values.nrows() {
            for j in (i + 1)..values.ncols() {
                max_asym = max_asym.max((values[(i, j)] - values[(j, i)]).abs());
            }
        }
        if max_asym > 0.0 {
            return Err(Error::NotSymmetric { max_asymmetry: max_asym });
        }
        if values.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "correlation entries must be finite and non-negative".into(),
            ));
        }
        Ok(CorrelationMatrix { values, convention })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    /// Sum over unordered pairs `a <= b`.
    pub fn unordered_sum(&self) -> f64 {
        let n = self.size();
        let mut total = 0.0;
        for a in 0..n {
            for b in a..n {
                total += self.values[(a, b)];
            }
        }
        total
    }

    /// Rescale to unit mass over unordered pairs, keeping the convention
    /// tag. A matrix already normalized to within 1e-12 is returned
    /// unchanged, so the division never injects rounding noise into
    /// matrices that are exact up to unitarity error.
    pub fn normalized(&self) -> Result<CorrelationMatrix> {
        let total = self.unordered_sum();
        if total <= 0.0 {
            return Err(Error::ZeroMass);
        }
        if (total - 1.0).abs() <= 1e-12 {
            return Ok(self.clone());
        }
        Ok(CorrelationMatrix {
            values: &self.values / total,
            convention: self.convention,
        })
    }
}

/// A two-photon input: two port labels plus the photons' wavepacket
/// overlap (1 = identical, 0 = fully distinguishable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonPairInput {
    pub port_a: i32,
    pub port_b: i32,
    pub indistinguishability: f64,
}

impl PhotonPairInput {
    pub fn new(port_a: i32, port_b: i32, indistinguishability: f64) -> Result<Self> {
        check_indistinguishability(indistinguishability)?;
        Ok(PhotonPairInput { port_a, port_b, indistinguishability })
    }

    /// Resolve the port labels to site indices on a concrete lattice.
    pub fn sites(&self, lattice: &TriangularLattice) -> Result<(usize, usize)> {
        Ok((lattice.port_site(self.port_a)?, lattice.port_site(self.port_b)?))
    }
}

fn check_indistinguishability(i: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&i) || !i.is_finite() {
        return Err(Error::IndistinguishabilityOutOfRange(i));
    }
    Ok(())
}

fn check_site(u: &UnitaryPropagator, site: usize) -> Result<()> {
    if site >= u.size() {
        return Err(Error::IndexOutOfRange { index: site, size: u.size() });
    }
    Ok(())
}

/// Correlation matrix of two indistinguishable photons entering at sites
/// `input_a`, `input_b` (equal sites give a two-photon Fock input).
pub fn quantum_correlation(
    u: &UnitaryPropagator,
    input_a: usize,
    input_b: usize,
) -> Result<CorrelationMatrix> {
    check_site(u, input_a)?;
    check_site(u, input_b)?;
    let n = u.size();
    let mut values = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let amp = u.entry(a, input_a) * u.entry(b, input_b)
                + u.entry(a, input_b) * u.entry(b, input_a);
            let weight = if a == b { 0.5 } else { 1.0 };
            let v = weight * amp.norm_sqr();
            values[(a, b)] = v;
            values[(b, a)] = v;
        }
    }
    CorrelationMatrix { values, convention: Convention::Quantum }.normalized()
}

/// Classical intensity-correlation matrix
/// `G^c_{a,b} = p_{a,i} p_{b,j} + p_{a,j} p_{b,i}`, evaluated literally.
pub fn classical_correlation(
    u: &UnitaryPropagator,
    input_a: usize,
    input_b: usize,
) -> Result<CorrelationMatrix> {
    check_site(u, input_a)?;
    check_site(u, input_b)?;
    let n = u.size();
    let p = |to: usize, from: usize| u.entry(to, from).norm_sqr();
    let mut values = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = p(a, input_a) * p(b, input_b) + p(a, input_b) * p(b, input_a);
            values[(a, b)] = v;
            values[(b, a)] = v;
        }
    }
    Ok(CorrelationMatrix { values, convention: Convention::ClassicalPaper })
}

/// Correlation matrix for partial wavepacket overlap `indist` in `[0, 1]`.
///
/// Off-diagonal entries are `|A|^2 + |B|^2 + 2 I Re(A conj(B))` with
/// `A = U_{a,i} U_{b,j}`, `B = U_{a,j} U_{b,i}`; diagonal entries are
/// `(1 + I) |U_{a,i} U_{a,j}|^2`. Equivalent to the convex mixture
/// `I * quantum + (1 - I) * distinguishable`, normalized over unordered
/// pairs.
pub fn partial_correlation(
    u: &UnitaryPropagator,
    input_a: usize,
    input_b: usize,
    indist: f64,
) -> Result<CorrelationMatrix> {
    check_indistinguishability(indist)?;
    check_site(u, input_a)?;
    check_site(u, input_b)?;
    let n = u.size();
    let mut values = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = if a == b {
                let amp = u.entry(a, input_a) * u.entry(a, input_b);
                (1.0 + indist) * amp.norm_sqr()
            } else {
                let big_a = u.entry(a, input_a) * u.entry(b, input_b);
                let big_b = u.entry(a, input_b) * u.entry(b, input_a);
                let v = big_a.norm_sqr()
                    + big_b.norm_sqr()
                    + 2.0 * indist * (big_a * big_b.conj()).re;
                // Exact cancellation can dip below zero by rounding.
                v.max(0.0)
            };
            values[(a, b)] = v;
            values[(b, a)] = v;
        }
    }
    CorrelationMatrix { values, convention: Convention::PhysicalPartial }.normalized()
}

/// Wavepacket overlap of two photons after a relative delay, for a
/// transform-limited Gaussian spectrum: `I(tau) = exp(-tau^2 / 2 sigma^2)`.
pub fn indistinguishability_at_delay(delay_fs: f64, coherence_time_fs: f64) -> f64 {
    let x = delay_fs / coherence_time_fs;
    (-0.5 * x * x).exp()
}

/// Coherence time (fs) of a Gaussian wavepacket from its spectral FWHM.
///
/// For a bandpass of FWHM `bandwidth_fwhm_nm` centered on
/// `center_wavelength_nm`, the overlap of two copies delayed by `tau`
/// is `exp(-sigma_w^2 tau^2)`; this returns the matching `sigma_tau` of
/// [`indistinguishability_at_delay`], i.e. `1 / (sqrt(2) sigma_w)`.
pub fn coherence_time_from_bandwidth(center_wavelength_nm: f64, bandwidth_fwhm_nm: f64) -> f64 {
    assert!(center_wavelength_nm > 0.0 && bandwidth_fwhm_nm > 0.0);
    const C_NM_PER_FS: f64 = 299.792458;
    let fwhm_nu = C_NM_PER_FS * bandwidth_fwhm_nm
        / (center_wavelength_nm * center_wavelength_nm); // 1/fs
    let sigma_omega =
        std::f64::consts::TAU * fwhm_nu / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    1.0 / (std::f64::consts::SQRT_2 * sigma_omega)
}

/// One correlation matrix per delay of a HOM-style scan.
#[derive(Debug, Clone)]
pub struct HomCurve {
    delays_fs: Vec<f64>,
    matrices: Vec<CorrelationMatrix>,
    coherence_time_fs: f64,
}

impl HomCurve {
    pub fn delays_fs(&self) -> &[f64] {
        &self.delays_fs
    }

    pub fn matrices(&self) -> &[CorrelationMatrix] {
        &self.matrices
    }

    pub fn coherence_time_fs(&self) -> f64 {
        self.coherence_time_fs
    }

    /// Values of one matrix entry along the scan.
    pub fn entry_curve(&self, site_a: usize, site_b: usize) -> Result<Vec<f64>> {
        let n = self.matrices.first().map_or(0, |m| m.size());
        if site_a >= n || site_b >= n {
            return Err(Error::IndexOutOfRange { index: site_a.max(site_b), size: n });
        }
        Ok(self.matrices.iter().map(|m| m.values()[(site_a, site_b)]).collect())
    }
}

/// Sweep the relative delay, mapping each delay to an indistinguishability
/// through the Gaussian overlap and evaluating [`partial_correlation`].
pub fn hom_scan(
    u: &UnitaryPropagator,
    input_a: usize,
    input_b: usize,
    delays_fs: &[f64],
    coherence_time_fs: f64,
) -> Result<HomCurve> {
    if coherence_time_fs <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coherence time must be positive, got {coherence_time_fs}"
        )));
    }
    let matrices = delays_fs
        .iter()
        .map(|&tau| {
            let i = indistinguishability_at_delay(tau, coherence_time_fs);
            partial_correlation(u, input_a, input_b, i)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomCurve { delays_fs: delays_fs.to_vec(), matrices, coherence_time_fs })
}

/// Peak-over-baseline visibility of one entry of a delay scan:
/// `(value at zero delay - baseline) / baseline` where the baseline is the
/// mean over samples at `|delay| >= 5` coherence times.
pub fn visibility(curve: &HomCurve, entry: (usize, usize)) -> Result<f64> {
    let values = curve.entry_curve(entry.0, entry.1)?;
    let sigma = curve.coherence_time_fs();

    let zero_idx = curve
        .delays_fs
        .iter()
        .position(|&tau| tau.abs() <= 1e-6 * sigma)
        .ok_or(Error::MissingZeroDelay)?;

    let baseline_values: Vec<f64> = curve
        .delays_fs
        .iter()
        .zip(&values)
        .filter(|(tau, _)| tau.abs() >= 5.0 * sigma)
        .map(|(_, &v)| v)
        .collect();
    if baseline_values.is_empty() {
        return Err(Error::NoBaseline);
    }
    let baseline = baseline_values.iter().sum::<f64>() / baseline_values.len() as f64;
    if baseline == 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok((values[zero_idx] - baseline) / baseline)
}

/// Graph on ordered site pairs whose edges are single-photon hops on
/// either coordinate; vertices `(a, a)` are the bunching states.
#[derive(Debug, Clone)]
pub struct TwoPhotonGraph {
    site_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TwoPhotonGraph {
    pub fn vertex_count(&self) -> usize {
        self.site_count * self.site_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as pairs of vertex ids, where vertex `(a, b)` has id
    /// `a * N + b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_id(&self, a: usize, b: usize) -> usize {
        a * self.site_count + b
    }

    pub fn vertex_sites(&self, id: usize) -> (usize, usize) {
        (id / self.site_count, id % self.site_count)
    }

    pub fn is_bunching(&self, id: usize) -> bool {
        let (a, b) = self.vertex_sites(id);
        a == b
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|&&(u, v)| u == id || v == id).count()
    }
}

/// Build the ordered-pair product graph of the lattice: `N^2` vertices,
/// one edge per single-photon hop on either coordinate.
pub fn two_photon_graph(lattice: &TriangularLattice) -> TwoPhotonGraph {
    let n = lattice.site_count();
    let lattice_edges = lattice.edges();
    let mut edges = Vec::with_capacity(2 * n * lattice_edges.len());
    for &(a, a2) in &lattice_edges {
        for b in 0..n {
            edges.push((a * n + b, a2 * n + b));
        }
    }
    for &(b, b2) in &lattice_edges {
        for a in 0..n {
            edges.push((a * n + b, a * n + b2));
        }
    }
    TwoPhotonGraph { site_count: n, edges }
}

/// Matrix similarity
/// `S = (sum sqrt(G_exp G_th))^2 / (sum G_exp sum G_th)` over all entries;
/// one iff the matrices are proportional.
pub fn matrix_similarity(g_exp: &CorrelationMatrix, g_th: &CorrelationMatrix) -> Result<f64> {
    if g_exp.size() != g_th.size() {
        return Err(Error::LengthMismatch { expected: g_exp.size(), actual: g_th.size() });
    }
    let cross: f64 = g_exp
        .values
        .iter()
        .zip(g_th.values.iter())
        .map(|(&a, &b)| (a * b).sqrt())
        .sum();
    let mass = g_exp.values.sum() * g_th.values.sum();
    if mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(cross * cross / mass)
}

/// Number of unordered output pairs including diagonals, `n(n+1)/2`.
pub fn unordered_pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Number of strictly off-diagonal unordered pairs, `n(n-1)/2`.
pub fn off_diagonal_pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Hamiltonian;
    use crate::lattice::build_hexagonal_lattice;
    use crate::propagator::evolve;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn two_site_coupler(cz: f64) -> UnitaryPropagator {
        let mut m = nalgebra::DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        evolve(&Hamiltonian::from_matrix(m).unwrap(), cz).unwrap()
    }

    #[test]
    fn identity_propagator_pins_the_input_pair() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 0.0).unwrap();
        let (a, b) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());
        let g = quantum_correlation(&u, a, b).unwrap();
        assert_eq!(g.values()[(a, b)], 1.0);
        let nonzero = g.values().iter().filter(|&&v| v != 0.0).count();
        assert_eq!(nonzero, 2); // symmetric pair of cells
    }

    #[test]
    fn fifty_fifty_coupler_bunches_perfectly() {
        let u = two_site_coupler(PI / 4.0);
        let g = quantum_correlation(&u, 0, 1).unwrap();
        assert_relative_eq!(g.values()[(0, 0)], 0.5, epsilon = 1e-12);
        assert_relative_eq!(g.values()[(1, 1)], 0.5, epsilon = 1e-12);
        assert!(g.values()[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn classical_identity_propagator() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 0.0).unwrap();
        let (a, b) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());
        let g = classical_correlation(&u, a, b).unwrap();
        assert_eq!(g.values()[(a, b)], 1.0);
        assert_eq!(g.values()[(a, a)], 0.0);
    }

    #[test]
    fn classical_coupler_is_flat_one_half() {
        let u = two_site_coupler(PI / 4.0);
        let g = classical_correlation(&u, 0, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_relative_eq!(g.values()[(a, b)], 0.5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn partial_endpoints_match_quantum_and_classical() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.2);
        let u = evolve(&h, 11.0).unwrap();
        let (i, j) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());

        let q = quantum_correlation(&u, i, j).unwrap();
        let p1 = partial_correlation(&u, i, j, 1.0).unwrap();
        let diff = (q.values() - p1.values()).map(f64::abs).max();
        assert!(diff < 1e-12);

        let c = classical_correlation(&u, i, j).unwrap();
        let p0 = partial_correlation(&u, i, j, 0.0).unwrap();
        for a in 0..u.size() {
            for b in 0..u.size() {
                if a != b {
                    assert!((c.values()[(a, b)] - p0.values()[(a, b)]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn half_overlap_on_the_coupler() {
        let u = two_site_coupler(PI / 4.0);
        let g = partial_correlation(&u, 0, 1, 0.5).unwrap();
        assert_relative_eq!(g.values()[(0, 0)], 0.375, epsilon = 1e-12);
        assert_relative_eq!(g.values()[(1, 1)], 0.375, epsilon = 1e-12);
        assert_relative_eq!(g.values()[(0, 1)], 0.25, epsilon = 1e-12);
    }

    #[test]
    fn indistinguishability_out_of_range_is_rejected() {
        let u = two_site_coupler(0.3);
        assert!(matches!(
            partial_correlation(&u, 0, 1, 1.5),
            Err(Error::IndistinguishabilityOutOfRange(_))
        ));
        assert!(PhotonPairInput::new(0, 1, -0.1).is_err());
    }

    #[test]
    fn exchange_symmetry_of_inputs() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.25);
        let u = evolve(&h, 7.0).unwrap();
        let (i, j) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());
        for indist in [0.0, 0.3, 1.0] {
            let ab = partial_correlation(&u, i, j, indist).unwrap();
            let ba = partial_correlation(&u, j, i, indist).unwrap();
            let diff = (ab.values() - ba.values()).map(f64::abs).max();
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn hom_scan_endpoints() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.25);
        let u = evolve(&h, 8.0).unwrap();
        let (i, j) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());
        let sigma = 100.0;
        let curve = hom_scan(&u, i, j, &[0.0, 10.0 * sigma], sigma).unwrap();

        let q = quantum_correlation(&u, i, j).unwrap();
        let d0 = (curve.matrices()[0].values() - q.values()).map(f64::abs).max();
        assert!(d0 < 1e-12);

        let p0 = partial_correlation(&u, i, j, 0.0).unwrap();
        let dinf = (curve.matrices()[1].values() - p0.values()).map(f64::abs).max();
        assert!(dinf < 1e-6);
    }

    #[test]
    fn ideal_bunching_visibility_is_one() {
        let lat = build_hexagonal_lattice(2, 15.0);
        let h = Hamiltonian::assemble_uniform(&lat, 0.0, 0.25);
        let u = evolve(&h, 8.0).unwrap();
        let (i, j) = (lat.port_site(-1).unwrap(), lat.port_site(1).unwrap());
        let sigma = 150.0;
        let mut delays: Vec<f64> = (-20..=20).map(|k| k as f64 * sigma / 5.0).collect();
        delays.retain(|t| t.abs() < 4.9 * sigma);
        delays.extend([-12.0 * sigma, -11.0 * sigma, 11.0 * sigma, 12.0 * sigma]);
        let curve = hom_scan(&u, i, j, &delays, sigma).unwrap();
        let center = lat.port_site(0).unwrap();
        let v = visibility(&curve, (center, center)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn constant_curve_has_zero_visibility() {
        let u = two_site_coupler(0.0);
        let sigma = 50.0;
        let delays = [0.0, 6.0 * sigma, -6.0 * sigma];
        let curve = hom_scan(&u, 0, 1, &delays, sigma).unwrap();
        let v = visibility(&curve, (0, 1)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn missing_baseline_is_reported() {
        let u = two_site_coupler(PI / 4.0);
        let sigma = 50.0;
        let curve = hom_scan(&u, 0, 1, &[0.0, sigma, 2.0 * sigma], sigma).unwrap();
        assert!(matches!(visibility(&curve, (0, 0)), Err(Error::NoBaseline)));
    }

    #[test]
    fn missing_zero_delay_is_reported() {
        let u = two_site_coupler(PI / 4.0);
        let sigma = 50.0;
        let curve = hom_scan(&u, 0, 1, &[sigma, 6.0 * sigma], sigma).unwrap();
        assert!(matches!(visibility(&curve, (0, 0)), Err(Error::MissingZeroDelay)));
    }

    #[test]
    fn product_graph_counts() {
        let lat3 = build_hexagonal_lattice(3, 15.0);
        let g3 = two_photon_graph(&lat3);
        assert_eq!(g3.vertex_count(), 1369);
        assert_eq!(g3.edge_count(), 2 * 37 * lat3.edge_count());

        let lat0 = build_hexagonal_lattice(0, 15.0);
        let g0 = two_photon_graph(&lat0);
        assert_eq!(g0.vertex_count(), 1);
        assert_eq!(g0.edge_count(), 0);
    }

    #[test]
    fn bunching_vertices_are_the_diagonal() {
        let lat = build_hexagonal_lattice(1, 15.0);
        let g = two_photon_graph(&lat);
        let bunching = (0..g.vertex_count()).filter(|&v| g.is_bunching(v)).count();
        assert_eq!(bunching, lat.site_count());
    }

    #[test]
    fn similarity_identity_and_scale_invariance() {
        let u = two_site_coupler(0.4);
        let g = quantum_correlation(&u, 0, 1).unwrap();
        assert_relative_eq!(matrix_similarity(&g, &g).unwrap(), 1.0, epsilon = 1e-14);
        let scaled =
            CorrelationMatrix::from_values(g.values() * 3.0, Convention::Quantum).unwrap();
        assert_relative_eq!(matrix_similarity(&g, &scaled).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pair_counts_for_the_device() {
        assert_eq!(off_diagonal_pair_count(37), 666);
        assert_eq!(unordered_pair_count(37), 703);
    }

    #[test]
    fn coherence_time_of_the_filter() {
        // 3 nm FWHM at 780 nm comes out near 179 fs.
        let sigma = coherence_time_from_bandwidth(780.0, 3.0);
        assert!((sigma - 179.28).abs() < 0.1, "sigma = {sigma}");
    }

    #[test]
    fn port_resolution_errors_surface() {
        let lat = build_hexagonal_lattice(3, 15.0);
        let input = PhotonPairInput::new(-4, 1, 1.0).unwrap();
        assert!(matches!(input.sites(&lat), Err(Error::UnknownPort { port: -4, .. })));
    }
}
