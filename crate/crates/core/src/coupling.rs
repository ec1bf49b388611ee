//! Coupling-strength-versus-separation model for evanescently coupled
//! waveguides: `C(d) = A * exp(-d / d0)`, fit in log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponential decay model for the inter-waveguide coupling strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingModel {
    /// Coupling at zero separation, 1/mm.
    pub amplitude_per_mm: f64,
    /// Decay length of the evanescent overlap, micrometers.
    pub decay_length_um: f64,
}

impl CouplingModel {
    pub fn new(amplitude_per_mm: f64, decay_length_um: f64) -> Result<Self> {
        if amplitude_per_mm <= 0.0 || !amplitude_per_mm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling amplitude must be positive, got {amplitude_per_mm}"
            )));
        }
        if decay_length_um <= 0.0 || !decay_length_um.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "decay length must be positive, got {decay_length_um}"
            )));
        }
        Ok(CouplingModel { amplitude_per_mm, decay_length_um })
    }

    /// Coupling strength in 1/mm at the given separation in micrometers.
    pub fn coupling_at(&self, separation_um: f64) -> f64 {
        self.amplitude_per_mm * (-separation_um / self.decay_length_um).exp()
    }
}

/// Least-squares fit of `ln C = ln A - d / d0` to measured
/// `(separation_um, coupling_per_mm)` samples.
///
/// Linear regression in log space keeps the fit closed-form; couplings must
/// be strictly positive and at least two distinct separations are required.
pub fn fit_exponential(samples: &[(f64, f64)]) -> Result<CouplingModel> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: samples.len() });
    }
    for &(d, c) in samples {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NonPositiveSample(format!("separation {d}")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::NonPositiveSample(format!(
                "coupling {c} at separation {d}"
            )));
        }
    }

    let n = samples.len() as f64;
    let mean_d = samples.iter().map(|&(d, _)| d).sum::<f64>() / n;
    let mean_y = samples.iter().map(|&(_, c)| c.ln()).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(d, c) in samples {
        let dx = d - mean_d;
        sxx += dx * dx;
        sxy += dx * (c.ln() - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all separations are equal".into()));
    }

    let slope = sxy / sxx;
    if slope >= 0.0 {
        return Err(Error::DegenerateFit(
            "coupling does not decay with separation".into(),
        ));
    }
    let intercept = mean_y - slope * mean_d;
    CouplingModel::new(intercept.exp(), -1.0 / slope)
}
