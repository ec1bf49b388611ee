//! Parameters and measured benchmark values of the fabricated 37-site
//! device this simulator models.
//!
//! The measured values are retained for comparison in reports and tests;
//! they depend on experimental efficiencies and source quality and are
//! not targets the ideal simulation reproduces.

/// Site pitch inside the coupling zone, micrometers.
pub const COUPLING_ZONE_SPACING_UM: f64 = 15.0;

/// Pitch after the adiabatic expansion to the fanout, micrometers. Far
/// enough apart that hopping is negligible; the expansion is modeled as
/// zero additional coupling.
pub const FANOUT_SPACING_UM: f64 = 35.0;

/// Length of the coupling zone, millimeters.
pub const EVOLUTION_LENGTH_MM: f64 = 11.0;

/// Length of the adiabatic fanout expansion, millimeters (metadata only).
pub const FANOUT_LENGTH_MM: f64 = 4.0;

/// Input port pitch at the facet, micrometers (metadata only).
pub const INPUT_PORT_PITCH_UM: f64 = 130.0;

/// Waveguide bend radius at the input, millimeters (metadata only).
pub const INPUT_BEND_RADIUS_MM: f64 = 30.0;

/// Center wavelength of the photon pairs, nanometers.
pub const CENTER_WAVELENGTH_NM: f64 = 780.0;

/// FWHM of the bandpass filters defining the photon spectrum, nanometers.
pub const FILTER_BANDWIDTH_FWHM_NM: f64 = 3.0;

/// Integration time of the zero-delay correlation measurement, seconds.
pub const COLLECTION_DURATION_S: f64 = 2000.0;

/// Measured single-photon pattern similarities for ports -1 and +1.
pub const MEASURED_SINGLE_PHOTON_SIMILARITY: [f64; 2] = [0.996, 0.984];

/// Measured two-photon correlation-matrix similarity to theory.
pub const MEASURED_CORRELATION_SIMILARITY: f64 = 0.918;

/// Measured bunching visibility at the center site, with uncertainty.
pub const MEASURED_HOM_VISIBILITY: f64 = 0.92;
pub const MEASURED_HOM_VISIBILITY_UNCERTAINTY: f64 = 0.035;

/// Largest measured Cauchy-Schwarz violation, in standard deviations.
pub const MEASURED_MAX_VIOLATION_SIGMAS: f64 = 57.0;

/// Two-photon graph edge tally as reported for the device; independent
/// enumeration of the ordered-pair product graph gives 2 * N * E = 6660,
/// and tests record both numbers.
pub const REPORTED_TWO_PHOTON_GRAPH_EDGES: usize = 6600;
