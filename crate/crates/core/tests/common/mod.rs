//! Independent oracles used to cross-check the library, computed by
//! routes the implementation never takes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triwalk_core::lattice::{hex_distance, TriangularLattice};

/// Matrix exponential `exp(-iHz)` by scaling-and-squaring a plain Taylor
/// series; slow and simple on purpose.
pub fn taylor_expm(h: &DMatrix<f64>, z: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let a = h.map(|x| Complex64::new(0.0, -x * z));

    // Max column sum, scaled down below 1/4 before the series.
    let norm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let scaled = a / Complex64::new(2.0f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=30 {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Two-photon output probabilities by expanding the input state in the
/// ordered N^2 product basis, applying `U (x) U`, and projecting onto
/// unordered outcomes.
pub fn product_basis_correlation(
    u: &DMatrix<Complex64>,
    input_a: usize,
    input_b: usize,
) -> DMatrix<f64> {
    let n = u.nrows();
    let mut psi = DMatrix::<Complex64>::zeros(n, n);
    if input_a == input_b {
        psi[(input_a, input_b)] = Complex64::new(1.0, 0.0);
    } else {
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi[(input_a, input_b)] = amp;
        psi[(input_b, input_a)] = amp;
    }

    // psi'_{ab} = sum_{cd} U_{ac} U_{bd} psi_{cd}
    let psi_out = u * psi * u.transpose();

    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let p = if a == b {
                psi_out[(a, a)].norm_sqr()
            } else {
                psi_out[(a, b)].norm_sqr() + psi_out[(b, a)].norm_sqr()
            };
            g[(a, b)] = p;
            g[(b, a)] = p;
        }
    }
    g
}

/// Output probabilities of two fully distinguishable photons: independent
/// single-photon transits, unordered outcomes.
pub fn distinguishable_correlation(
    u: &DMatrix<Complex64>,
    input_a: usize,
    input_b: usize,
) -> DMatrix<f64> {
    let n = u.nrows();
    let p = |to: usize, from: usize| u[(to, from)].norm_sqr();
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = if a == b {
                p(a, input_a) * p(a, input_b)
            } else {
                p(a, input_a) * p(b, input_b) + p(a, input_b) * p(b, input_a)
            };
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    g
}

/// Adjacency by the unit-hexagonal-distance predicate over all site
/// pairs, independent of the neighbor-offset construction.
pub fn brute_force_adjacency(lattice: &TriangularLattice) -> Vec<Vec<bool>> {
    let sites = lattice.sites();
    let n = sites.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            adj[i][j] = i != j
                && hex_distance((sites[i].q, sites[i].r), (sites[j].q, sites[j].r)) == 1;
        }
    }
    adj
}

/// Dense random symmetric matrix with entries in [-1, 1].
pub fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Random sparse graph Hamiltonian: Erdos-Renyi edges with positive
/// couplings and small random diagonal.
pub fn random_graph_hamiltonian(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = rng.random_range(-0.5..0.5);
        for j in (i + 1)..n {
            if rng.random_bool(0.5) {
                let c = rng.random_range(0.2..1.0);
                m[(i, j)] = c;
                m[(j, i)] = c;
            }
        }
    }
    m
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).map(f64::abs).max()
}

pub fn max_complex_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).map(|c| c.norm()).max()
}
