//! Continuous-time quantum walks of one and two photons on 2D triangular
//! photonic lattices.
//!
//! The crate covers the full pipeline of a two-photon walk experiment:
//!
//! * [`lattice`] — hexagonally layered triangular lattices, adjacency,
//!   and port labels;
//! * [`coupling`] — the exponential coupling-versus-separation model;
//! * [`hamiltonian`] — tight-binding Hamiltonian assembly;
//! * [`propagator`] — `U(z) = exp(-iHz)` by spectral decomposition and
//!   single-photon observables;
//! * [`twophoton`] — quantum/classical/partially-distinguishable
//!   correlation matrices, delay scans, and the two-photon product graph;
//! * [`certification`] — the Cauchy-Schwarz witness with Poissonian
//!   significance;
//! * [`sampling`] — synthetic coincidence counts through a detector
//!   model, the inverse estimator, and the zero-delay fit;
//! * [`export`] / [`svg`] — the CSV and figure formats shared with the
//!   command-line front end.

pub mod certification;
pub mod coupling;
pub mod device;
pub mod error;
pub mod export;
pub mod hamiltonian;
pub mod lattice;
pub mod propagator;
pub mod sampling;
pub mod svg;
pub mod twophoton;

pub use certification::{violation_map, violation_significance, ViolationMap, ViolationSource};
pub use coupling::{fit_exponential, CouplingModel};
pub use error::{Error, Result};
pub use hamiltonian::Hamiltonian;
pub use lattice::{build_hexagonal_lattice, LatticeDocument, SiteCoord, TriangularLattice};
pub use propagator::{
    distribution_similarity, evolve, single_photon_probabilities, ProbabilityDistribution,
    UnitaryPropagator,
};
pub use sampling::{
    estimate_correlation, fit_zero_delay, sample_counts, CountMatrix, DetectionModel,
    ZeroDelayFit,
};
pub use twophoton::{
    classical_correlation, coherence_time_from_bandwidth, hom_scan,
    indistinguishability_at_delay, matrix_similarity, partial_correlation, quantum_correlation,
    two_photon_graph, visibility, Convention, CorrelationMatrix, HomCurve, PhotonPairInput,
    TwoPhotonGraph,
};
