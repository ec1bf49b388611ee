//! Synthetic coincidence counting through a detector model, the inverse
//! estimator, and the zero-delay HOM fit.
//!
//! Counts are independent Poisson draws, one per unordered output pair.
//! The seed-to-stream mapping is fixed and documented: entry `(a, b)` with
//! `a <= b` takes a single draw from `ChaCha8Rng::seed_from_u64(seed)`
//! switched to stream `a * N + b`. Results are therefore identical no
//! matter how the entry space is partitioned across threads.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::twophoton::{Convention, CorrelationMatrix};

/// Per-channel detection efficiencies, pair flux, and the balanced
/// splitter used to resolve same-site bunching events.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionModel {
    efficiency: Vec<f64>,
    pair_rate_hz: f64,
    diagonal_splitter: bool,
}

impl DetectionModel {
    pub fn new(efficiency: Vec<f64>, pair_rate_hz: f64, diagonal_splitter: bool) -> Result<Self> {
        for (channel, &eta) in efficiency.iter().enumerate() {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidEfficiency { channel });
            }
        }
        if !(pair_rate_hz > 0.0) || !pair_rate_hz.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pair rate must be positive, got {pair_rate_hz}"
            )));
        }
        Ok(DetectionModel { efficiency, pair_rate_hz, diagonal_splitter })
    }

    /// All channels at the same efficiency.
    pub fn uniform(
        channels: usize,
        efficiency: f64,
        pair_rate_hz: f64,
        diagonal_splitter: bool,
    ) -> Result<Self> {
        Self::new(vec![efficiency; channels], pair_rate_hz, diagonal_splitter)
    }

    pub fn efficiency(&self) -> &[f64] {
        &self.efficiency
    }

    pub fn pair_rate_hz(&self) -> f64 {
        self.pair_rate_hz
    }

    pub fn diagonal_splitter(&self) -> bool {
        self.diagonal_splitter
    }

    pub fn channels(&self) -> usize {
        self.efficiency.len()
    }

    /// Coincidences from two photons in one site pass the balanced
    /// splitter to opposite outputs half the time.
    fn pair_factor(&self, a: usize, b: usize) -> f64 {
        if a == b && self.diagonal_splitter {
            0.5
        } else {
            1.0
        }
    }

    /// Stable FNV-1a hash of the model parameters, for file headers.
    pub fn hash(&self) -> String {
        let mut canonical = format!(
            "rate={:e};splitter={};eta=",
            self.pair_rate_hz, self.diagonal_splitter
        );
        for eta in &self.efficiency {
            canonical.push_str(&format!("{e:e},", e = eta));
        }
        format!("{:016x}", fnv1a(canonical.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Integer coincidence counts per output pair; diagonal entries are the
/// splitter coincidences of same-site events.
#[derive(Debug, Clone, PartialEq)]
pub struct CountMatrix {
    counts: DMatrix<u64>,
    duration_s: f64,
    seed: u64,
}

impl CountMatrix {
    pub fn from_counts(counts: DMatrix<u64>, duration_s: f64, seed: u64) -> Result<Self> {
        if counts.nrows() != counts.ncols() {
            return Err(Error::LengthMismatch {
                expected: counts.nrows(),
                actual: counts.ncols(),
            });
        }
        for i in 0..counts.nrows() {
            for j in (i + 1)..counts.ncols() {
                if counts[(i, j)] != counts[(j, i)] {
                    return Err(Error::NotSymmetric {
                        max_asymmetry: (counts[(i, j)] as f64 - counts[(j, i)] as f64).abs(),
                    });
                }
            }
        }
        Ok(CountMatrix { counts, duration_s, seed })
    }

    pub fn size(&self) -> usize {
        self.counts.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[(i, j)]
    }

    pub fn counts(&self) -> &DMatrix<u64> {
        &self.counts
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn total(&self) -> u64 {
        let n = self.size();
        let mut total = 0;
        for a in 0..n {
            for b in a..n {
                total += self.counts[(a, b)];
            }
        }
        total
    }
}

/// Draw a Poisson coincidence matrix from a normalized correlation matrix.
///
/// Entry `(a, b)` has mean
/// `pair_rate * duration * G_{a,b} * eta_a * eta_b * pair_factor` and is
/// sampled on its own deterministic RNG stream, so the output is
/// bit-identical for a fixed `(G, model, duration, seed)`.
pub fn sample_counts(
    g: &CorrelationMatrix,
    model: &DetectionModel,
    duration_s: f64,
    seed: u64,
) -> Result<CountMatrix> {
    let n = g.size();
    if model.channels() != n {
        return Err(Error::LengthMismatch { expected: n, actual: model.channels() });
    }
    if duration_s < 0.0 || !duration_s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "duration must be non-negative, got {duration_s}"
        )));
    }
    let total = g.unordered_sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::UnnormalizedInput { sum: total });
    }

    let eta = model.efficiency();
    let mut counts = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let mu = model.pair_rate_hz()
                * duration_s
                * g.values()[(a, b)]
                * eta[a]
                * eta[b]
                * model.pair_factor(a, b);
            let c = if mu > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((a * n + b) as u64);
                Poisson::new(mu)
                    .map_err(|e| Error::InvalidParameter(format!("poisson mean {mu}: {e}")))?
                    .sample(&mut rng) as u64
            } else {
                0
            };
            counts[(a, b)] = c;
            counts[(b, a)] = c;
        }
    }
    Ok(CountMatrix { counts, duration_s, seed })
}

/// Invert the detection map: divide counts by the efficiency and splitter
/// factors, then renormalize over unordered pairs.
pub fn estimate_correlation(
    counts: &CountMatrix,
    model: &DetectionModel,
) -> Result<CorrelationMatrix> {
    let n = counts.size();
    if model.channels() != n {
        return Err(Error::LengthMismatch { expected: n, actual: model.channels() });
    }
    let eta = model.efficiency();
    for (channel, &e) in eta.iter().enumerate() {
        if e == 0.0 {
            return Err(Error::InvalidEfficiency { channel });
        }
    }
    let mut values = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = counts.get(a, b) as f64 / (eta[a] * eta[b] * model.pair_factor(a, b));
            values[(a, b)] = v;
            values[(b, a)] = v;
        }
    }
    CorrelationMatrix::from_values(values, Convention::Quantum)?.normalized()
}

/// Result of fitting `count(tau) = B (1 + V exp(-(tau - tau0)^2 / 2 s^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroDelayFit {
    pub zero_delay_fs: f64,
    pub visibility: f64,
    pub baseline: f64,
    pub width_fs: f64,
    pub zero_delay_err_fs: f64,
    pub visibility_err: f64,
}

/// Least-squares fit of a Gaussian-plus-baseline model to a delay scan of
/// `(delay_fs, counts)` points; the standard errors come from the local
/// curvature at the optimum.
///
/// Needs at least 7 points spanning the peak. A scan with no resolvable
/// peak surfaces as a fit failure rather than a silent zero-visibility
/// result. Dips fit with negative `V`.
pub fn fit_zero_delay(scan: &[(f64, f64)]) -> Result<ZeroDelayFit> {
    if scan.len() < 7 {
        return Err(Error::TooFewSamples { needed: 7, got: scan.len() });
    }
    for &(tau, y) in scan {
        if !tau.is_finite() || !y.is_finite() {
            return Err(Error::NonPositiveSample(format!("scan point ({tau}, {y})")));
        }
    }

    let params = levenberg_marquardt(scan)?;
    let (cov, ssr) = fit_covariance(scan, &params)?;
    let dof = (scan.len() - 4).max(1) as f64;
    let scale = ssr / dof;
    Ok(ZeroDelayFit {
        baseline: params[0],
        visibility: params[1],
        zero_delay_fs: params[2],
        width_fs: params[3].abs(),
        visibility_err: (cov[(1, 1)] * scale).sqrt(),
        zero_delay_err_fs: (cov[(2, 2)] * scale).sqrt(),
    })
}

fn gaussian_model(p: &[f64; 4], tau: f64) -> f64 {
    let (b, v, tau0, s) = (p[0], p[1], p[2], p[3]);
    let arg = (tau - tau0) / s;
    b * (1.0 + v * (-0.5 * arg * arg).exp())
}

fn jacobian_row(p: &[f64; 4], tau: f64) -> [f64; 4] {
    let (b, v, tau0, s) = (p[0], p[1], p[2], p[3]);
    let arg = (tau - tau0) / s;
    let g = (-0.5 * arg * arg).exp();
    [
        1.0 + v * g,
        b * g,
        b * v * g * (tau - tau0) / (s * s),
        b * v * g * (tau - tau0) * (tau - tau0) / (s * s * s),
    ]
}

fn sum_sq_residuals(scan: &[(f64, f64)], p: &[f64; 4]) -> f64 {
    scan.iter().map(|&(tau, y)| (y - gaussian_model(p, tau)).powi(2)).sum()
}

fn initial_guess(scan: &[(f64, f64)]) -> [f64; 4] {
    let mut sorted: Vec<(f64, f64)> = scan.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = (sorted.len() / 4).max(1);
    let tail: Vec<f64> = sorted[..k]
        .iter()
        .chain(&sorted[sorted.len() - k..])
        .map(|&(_, y)| y)
        .collect();
    let mut baseline = tail.iter().sum::<f64>() / tail.len() as f64;
    if baseline <= 0.0 {
        baseline = scan.iter().map(|&(_, y)| y).sum::<f64>() / scan.len() as f64;
    }
    let peak = scan
        .iter()
        .cloned()
        .max_by(|a, b| (a.1 - baseline).abs().total_cmp(&(b.1 - baseline).abs()))
        .unwrap();
    let span = sorted.last().unwrap().0 - sorted[0].0;
    [
        baseline,
        (peak.1 - baseline) / baseline.max(f64::MIN_POSITIVE),
        peak.0,
        (span / 8.0).max(f64::MIN_POSITIVE),
    ]
}

fn levenberg_marquardt(scan: &[(f64, f64)]) -> Result<[f64; 4]> {
    let mut p = initial_guess(scan);
    let mut ssr = sum_sq_residuals(scan, &p);
    let mut lambda: f64 = 1e-3;

    for _ in 0..200 {
        let mut jtj: DMatrix<f64> = DMatrix::zeros(4, 4);
        let mut jtr: nalgebra::DVector<f64> = nalgebra::DVector::zeros(4);
        for &(tau, y) in scan {
            let row = jacobian_row(&p, tau);
            let r = y - gaussian_model(&p, tau);
            for i in 0..4 {
                jtr[i] += row[i] * r;
                for j in 0..4 {
                    jtj[(i, j)] += row[i] * row[j];
                }
            }
        }

        let mut stepped = false;
        while lambda < 1e12 {
            let mut damped = jtj.clone();
            for i in 0..4 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(delta) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let mut candidate = p;
            for i in 0..4 {
                candidate[i] += delta[i];
            }
            let candidate_ssr = sum_sq_residuals(scan, &candidate);
            if candidate_ssr.is_finite() && candidate_ssr < ssr {
                let improvement = ssr - candidate_ssr;
                p = candidate;
                ssr = candidate_ssr;
                lambda = (lambda / 10.0).max(1e-12);
                stepped = true;
                if improvement <= 1e-12 * ssr.max(1e-300) {
                    return Ok(p);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !stepped {
            // Residual decrease stalled before convergence: no peak to fit.
            if ssr <= 1e-20 {
                return Ok(p);
            }
            return Err(Error::FitFailure(
                "residual decrease stalled; scan shows no resolvable peak".into(),
            ));
        }
    }
    Ok(p)
}

fn fit_covariance(scan: &[(f64, f64)], p: &[f64; 4]) -> Result<(DMatrix<f64>, f64)> {
    let mut jtj: DMatrix<f64> = DMatrix::zeros(4, 4);
    for &(tau, _) in scan {
        let row = jacobian_row(p, tau);
        for i in 0..4 {
            for j in 0..4 {
                jtj[(i, j)] += row[i] * row[j];
            }
        }
    }
    let cov = jtj
        .try_inverse()
        .ok_or_else(|| Error::FitFailure("singular curvature at the optimum".into()))?;
    Ok((cov, sum_sq_residuals(scan, p)))
}
