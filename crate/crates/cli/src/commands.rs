//! Subcommand implementations. Each command computes fully before writing
//! any file, so a failing run leaves no partial outputs, and every file
//! carries the config hash in its header.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use triwalk_core::certification::{violation_map, violation_significance, ViolationMap};
use triwalk_core::coupling::fit_exponential;
use triwalk_core::export;
use triwalk_core::hamiltonian::Hamiltonian;
use triwalk_core::lattice::TriangularLattice;
use triwalk_core::propagator::{evolve, single_photon_probabilities, UnitaryPropagator};
use triwalk_core::sampling::{fit_zero_delay, sample_counts, CountMatrix};
use triwalk_core::svg;
use triwalk_core::twophoton::{
    classical_correlation, hom_scan, partial_correlation, quantum_correlation, visibility,
    CorrelationMatrix,
};

use crate::config::{content_hash, ExperimentConfig, OutputFormat};
use crate::error::{CliError, Result};

/// A resolved run: config, its hash, and the effective output options.
pub struct RunContext {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
}

impl RunContext {
    pub fn new(
        config: ExperimentConfig,
        config_hash: String,
        out: Option<PathBuf>,
        format: Option<OutputFormat>,
        seed: Option<u64>,
    ) -> RunContext {
        let out_dir = out.unwrap_or_else(|| PathBuf::from(&config.output.dir));
        let format = format.unwrap_or(config.output.format);
        let seed = seed.unwrap_or(config.seed);
        RunContext { config, config_hash, out_dir, format, seed }
    }

    fn meta(&self) -> Vec<(&'static str, String)> {
        vec![("config_hash", self.config_hash.clone())]
    }

    fn propagator(&self) -> Result<(TriangularLattice, UnitaryPropagator)> {
        let lattice = self.config.build_lattice();
        let coupling = self.config.effective_coupling()?;
        let h = Hamiltonian::assemble_uniform(
            &lattice,
            self.config.hamiltonian.beta_per_mm,
            coupling,
        );
        let u = evolve(&h, self.config.evolution.z_mm)?;
        Ok((lattice, u))
    }

    fn input_sites(&self, lattice: &TriangularLattice) -> Result<(usize, usize)> {
        let [pa, pb] = self.config.input.ports;
        Ok((lattice.port_site(pa)?, lattice.port_site(pb)?))
    }
}

/// Files written by a command, for reporting.
pub type Written = Vec<PathBuf>;

fn write_file(out_dir: &Path, name: &str, content: &str, written: &mut Written) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    fs::write(&path, content)?;
    written.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))
}

// ---------------------------------------------------------------------
// lattice
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct LatticeFile {
    config_hash: String,
    lattice: triwalk_core::LatticeDocument,
}

pub fn cmd_lattice(ctx: &RunContext) -> Result<Written> {
    let lattice = ctx.config.build_lattice();
    let json = to_json(&LatticeFile {
        config_hash: ctx.config_hash.clone(),
        lattice: lattice.to_document(),
    })?;
    let drawing = svg::lattice_svg(&lattice, &ctx.meta());

    let mut written = Vec::new();
    write_file(&ctx.out_dir, "lattice.json", &json, &mut written)?;
    write_file(&ctx.out_dir, "lattice.svg", &drawing, &mut written)?;
    Ok(written)
}

// ---------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct DistributionFile {
    config_hash: String,
    port: i32,
    z_mm: f64,
    sites: Vec<DistributionRow>,
}

#[derive(Serialize)]
struct DistributionRow {
    site: usize,
    q: i32,
    r: i32,
    probability: f64,
}

pub fn cmd_evolve(ctx: &RunContext) -> Result<Written> {
    let (lattice, u) = ctx.propagator()?;
    let mut ports: Vec<i32> = ctx.config.input.ports.to_vec();
    ports.dedup();

    let mut outputs = Vec::new();
    for port in ports {
        let site = lattice.port_site(port)?;
        let dist = single_photon_probabilities(&u, site)?;
        let table = match ctx.format {
            OutputFormat::Csv => export::distribution_csv(&lattice, &dist, &ctx.meta())?,
            OutputFormat::Json => to_json(&DistributionFile {
                config_hash: ctx.config_hash.clone(),
                port,
                z_mm: u.z_mm(),
                sites: dist
                    .values()
                    .iter()
                    .zip(lattice.sites())
                    .enumerate()
                    .map(|(site, (&probability, coord))| DistributionRow {
                        site,
                        q: coord.q,
                        r: coord.r,
                        probability,
                    })
                    .collect(),
            })?,
        };
        let heatmap = svg::distribution_svg(&lattice, &dist, &ctx.meta());
        outputs.push((port, table, heatmap));
    }

    let ext = table_ext(ctx.format);
    let mut written = Vec::new();
    for (port, table, heatmap) in outputs {
        write_file(&ctx.out_dir, &format!("evolve_port{port}.{ext}"), &table, &mut written)?;
        write_file(&ctx.out_dir, &format!("evolve_port{port}.svg"), &heatmap, &mut written)?;
    }
    Ok(written)
}

fn table_ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

// ---------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct CorrelationFile {
    config_hash: String,
    convention: String,
    entries: Vec<CorrelationRow>,
}

#[derive(Serialize)]
struct CorrelationRow {
    i: usize,
    j: usize,
    value: f64,
}

fn correlation_table(ctx: &RunContext, g: &CorrelationMatrix, convention: &str) -> Result<String> {
    match ctx.format {
        OutputFormat::Csv => Ok(export::correlation_csv(g, &ctx.meta())),
        OutputFormat::Json => {
            let n = g.size();
            let mut entries = Vec::new();
            for i in 0..n {
                for j in i..n {
                    entries.push(CorrelationRow { i, j, value: g.values()[(i, j)] });
                }
            }
            to_json(&CorrelationFile {
                config_hash: ctx.config_hash.clone(),
                convention: convention.into(),
                entries,
            })
        }
    }
}

pub fn cmd_correlate(ctx: &RunContext) -> Result<Written> {
    let (lattice, u) = ctx.propagator()?;
    let (a, b) = ctx.input_sites(&lattice)?;
    let indist = ctx.config.input.indistinguishability;

    let quantum = quantum_correlation(&u, a, b)?;
    let classical = classical_correlation(&u, a, b)?;
    let partial = partial_correlation(&u, a, b, indist)?;

    let ext = table_ext(ctx.format);
    let mut written = Vec::new();
    for (name, g) in
        [("quantum", &quantum), ("classical", &classical), ("partial", &partial)]
    {
        let table = correlation_table(ctx, g, name)?;
        write_file(&ctx.out_dir, &format!("correlation_{name}.{ext}"), &table, &mut written)?;
        let heat = svg::correlation_svg(g, &ctx.meta());
        write_file(&ctx.out_dir, &format!("correlation_{name}.svg"), &heat, &mut written)?;
    }
    Ok(written)
}

// ---------------------------------------------------------------------
// hom
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct HomScanFile {
    config_hash: String,
    entry_ports: [i32; 2],
    coherence_time_fs: f64,
    points: Vec<HomRow>,
}

#[derive(Serialize)]
struct HomRow {
    delay_fs: f64,
    value: f64,
}

#[derive(Serialize)]
struct VisibilityReport {
    config_hash: String,
    entry_ports: [i32; 2],
    coherence_time_fs: f64,
    ideal_visibility: f64,
    fitted_visibility: f64,
    fitted_visibility_err: f64,
    fitted_zero_delay_fs: f64,
    fitted_zero_delay_err_fs: f64,
}

pub fn cmd_hom(ctx: &RunContext) -> Result<Written> {
    let (lattice, u) = ctx.propagator()?;
    let (a, b) = ctx.input_sites(&lattice)?;
    let [ea, eb] = ctx.config.hom.entry_ports;
    let entry = (lattice.port_site(ea)?, lattice.port_site(eb)?);
    let sigma = ctx.config.coherence_time_fs();
    let delays = ctx.config.delay_scan_fs();

    let curve = hom_scan(&u, a, b, &delays, sigma)?;
    let ideal = visibility(&curve, entry)?;
    let entry_values = curve.entry_curve(entry.0, entry.1)?;

    // Synthetic counts along the scan through the detection model, then
    // the zero-delay fit, mirroring how a measured curve is reduced.
    let model = ctx.config.detection_model(lattice.site_count())?;
    let duration = ctx.config.detection.duration_s;
    let mut scan_counts = Vec::with_capacity(delays.len());
    for (k, matrix) in curve.matrices().iter().enumerate() {
        let counts = sample_counts(matrix, &model, duration, ctx.seed.wrapping_add(k as u64))?;
        scan_counts.push((delays[k], counts.get(entry.0, entry.1) as f64));
    }
    let fit = fit_zero_delay(&scan_counts)?;

    let scan_table = match ctx.format {
        OutputFormat::Csv => export::hom_csv(&curve, entry, &ctx.meta())?,
        OutputFormat::Json => to_json(&HomScanFile {
            config_hash: ctx.config_hash.clone(),
            entry_ports: [ea, eb],
            coherence_time_fs: sigma,
            points: delays
                .iter()
                .zip(&entry_values)
                .map(|(&delay_fs, &value)| HomRow { delay_fs, value })
                .collect(),
        })?,
    };
    let counts_table = {
        let mut out = String::new();
        use std::fmt::Write as _;
        let _ = writeln!(out, "# config_hash: {}", ctx.config_hash);
        let _ = writeln!(out, "# duration_s: {duration}");
        let _ = writeln!(out, "# seed: {}", ctx.seed);
        let _ = writeln!(out, "# model_hash: {}", model.hash());
        out.push_str("delay_fs,counts\n");
        for (tau, c) in &scan_counts {
            let _ = writeln!(out, "{tau},{c}");
        }
        out
    };
    let report = to_json(&VisibilityReport {
        config_hash: ctx.config_hash.clone(),
        entry_ports: [ea, eb],
        coherence_time_fs: sigma,
        ideal_visibility: ideal,
        fitted_visibility: fit.visibility,
        fitted_visibility_err: fit.visibility_err,
        fitted_zero_delay_fs: fit.zero_delay_fs,
        fitted_zero_delay_err_fs: fit.zero_delay_err_fs,
    })?;

    let ext = table_ext(ctx.format);
    let mut written = Vec::new();
    write_file(&ctx.out_dir, &format!("hom_scan.{ext}"), &scan_table, &mut written)?;
    write_file(&ctx.out_dir, "hom_counts.csv", &counts_table, &mut written)?;
    write_file(&ctx.out_dir, "hom_visibility.json", &report, &mut written)?;
    Ok(written)
}

// ---------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------

pub fn cmd_sample(ctx: &RunContext) -> Result<Written> {
    let (lattice, u) = ctx.propagator()?;
    let (a, b) = ctx.input_sites(&lattice)?;
    let g = partial_correlation(&u, a, b, ctx.config.input.indistinguishability)?;
    let model = ctx.config.detection_model(lattice.site_count())?;
    let counts = sample_counts(&g, &model, ctx.config.detection.duration_s, ctx.seed)?;

    let table = match ctx.format {
        OutputFormat::Csv => export::count_matrix_csv(&counts, &model, &ctx.meta()),
        OutputFormat::Json => to_json(&CountsFile::new(ctx, &counts, &model))?,
    };
    let mut written = Vec::new();
    write_file(&ctx.out_dir, &format!("counts.{}", table_ext(ctx.format)), &table, &mut written)?;
    Ok(written)
}

#[derive(Serialize)]
struct CountsFile {
    config_hash: String,
    duration_s: f64,
    seed: u64,
    model_hash: String,
    sites: usize,
    entries: Vec<CountRow>,
}

#[derive(Serialize)]
struct CountRow {
    i: usize,
    j: usize,
    count: u64,
}

impl CountsFile {
    fn new(
        ctx: &RunContext,
        counts: &CountMatrix,
        model: &triwalk_core::sampling::DetectionModel,
    ) -> CountsFile {
        let n = counts.size();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                entries.push(CountRow { i, j, count: counts.get(i, j) });
            }
        }
        CountsFile {
            config_hash: ctx.config_hash.clone(),
            duration_s: counts.duration_s(),
            seed: counts.seed(),
            model_hash: model.hash(),
            sites: n,
            entries,
        }
    }
}

// ---------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct ViolationFile {
    config_hash: String,
    source: String,
    positive_pairs: usize,
    max_significance: Option<f64>,
    entries: Vec<ViolationRow>,
}

#[derive(Serialize)]
struct ViolationRow {
    i: usize,
    j: usize,
    violation: Option<f64>,
    sigma: Option<f64>,
    significance: Option<f64>,
}

fn violation_table(ctx: &RunContext, map: &ViolationMap, source: &str) -> Result<String> {
    match ctx.format {
        OutputFormat::Csv => Ok(export::violation_csv(map, &ctx.meta())),
        OutputFormat::Json => {
            let n = map.size();
            let mut entries = Vec::new();
            let keep = |v: f64| (!v.is_nan()).then_some(v);
            for i in 0..n {
                for j in (i + 1)..n {
                    entries.push(ViolationRow {
                        i,
                        j,
                        violation: keep(map.violation()[(i, j)]),
                        sigma: map.sigma().and_then(|m| keep(m[(i, j)])),
                        significance: map.significance().and_then(|m| keep(m[(i, j)])),
                    });
                }
            }
            to_json(&ViolationFile {
                config_hash: ctx.config_hash.clone(),
                source: source.into(),
                positive_pairs: map.positive_pairs().len(),
                max_significance: map.max_significance(),
                entries,
            })
        }
    }
}

/// Certify from a sampled counts file when one is given, otherwise from
/// the exact quantum correlations of the configured walk.
///
/// Significances always come from raw counts; efficiency corrections
/// apply only to correlation estimates, never to the witness statistics.
pub fn cmd_certify(ctx: &RunContext, counts_path: Option<&Path>) -> Result<Written> {
    let (map, source) = match counts_path {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let counts = export::count_matrix_from_csv(&text)?;
            (violation_significance(&counts)?, "counts")
        }
        None => {
            let (lattice, u) = ctx.propagator()?;
            let (a, b) = ctx.input_sites(&lattice)?;
            let g = quantum_correlation(&u, a, b)?;
            (violation_map(&g), "exact-correlations")
        }
    };

    let table = violation_table(ctx, &map, source)?;
    let chart = svg::violation_svg(&map, &ctx.meta());

    let mut written = Vec::new();
    write_file(&ctx.out_dir, &format!("certify.{}", table_ext(ctx.format)), &table, &mut written)?;
    write_file(&ctx.out_dir, "certify.svg", &chart, &mut written)?;
    Ok(written)
}

// ---------------------------------------------------------------------
// fit-coupling
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct CouplingFitFile {
    input_hash: String,
    samples: usize,
    amplitude_per_mm: f64,
    decay_length_um: f64,
}

/// Fit the exponential coupling model to a `separation_um,coupling_per_mm`
/// CSV; stamped with the hash of the input samples instead of a config.
pub fn cmd_fit_coupling(samples_path: &Path, out_dir: &Path) -> Result<Written> {
    let bytes = fs::read(samples_path)?;
    let input_hash = content_hash(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::config(format!("{} is not UTF-8", samples_path.display())))?;
    let samples = export::coupling_samples_from_csv(&text)?;
    let model = fit_exponential(&samples)?;

    let json = to_json(&CouplingFitFile {
        input_hash,
        samples: samples.len(),
        amplitude_per_mm: model.amplitude_per_mm,
        decay_length_um: model.decay_length_um,
    })?;
    let mut written = Vec::new();
    write_file(out_dir, "coupling_model.json", &json, &mut written)?;
    Ok(written)
}
