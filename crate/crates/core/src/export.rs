//! Plain-text emitters and parsers for the simulator's file formats.
//!
//! Every CSV starts with `# key: value` comment lines (run metadata such
//! as the config hash), then a header row, then data. Floats are written
//! with their shortest round-trip representation, so identical inputs
//! always produce byte-identical files.

use std::fmt::Write as _;

use crate::certification::ViolationMap;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::lattice::TriangularLattice;
use crate::propagator::ProbabilityDistribution;
use crate::sampling::{CountMatrix, DetectionModel};
use crate::twophoton::{CorrelationMatrix, HomCurve};

/// Key/value metadata rendered as leading `#` comment lines.
pub type Meta<'a> = &'a [(&'a str, String)];

fn write_meta(out: &mut String, meta: Meta) {
    for (key, value) in meta {
        let _ = writeln!(out, "# {key}: {value}");
    }
}

/// Single-photon distribution as `site,q,r,probability` rows.
pub fn distribution_csv(
    lattice: &TriangularLattice,
    dist: &ProbabilityDistribution,
    meta: Meta,
) -> Result<String> {
    if dist.len() != lattice.site_count() {
        return Err(Error::LengthMismatch {
            expected: lattice.site_count(),
            actual: dist.len(),
        });
    }
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("site,q,r,probability\n");
    for (i, (&p, s)) in dist.values().iter().zip(lattice.sites()).enumerate() {
        let _ = writeln!(out, "{i},{},{},{p}", s.q, s.r);
    }
    Ok(out)
}

/// Dense Hamiltonian matrix, one CSV row per site.
pub fn hamiltonian_dense_csv(h: &Hamiltonian, meta: Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    let m = h.matrix();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Hamiltonian as an `i,j,coupling` edge list plus `i,i,beta` diagonal
/// rows, for graph tooling.
pub fn hamiltonian_edges_csv(h: &Hamiltonian, meta: Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("i,j,value\n");
    let m = h.matrix();
    for i in 0..m.nrows() {
        if m[(i, i)] != 0.0 {
            let _ = writeln!(out, "{i},{i},{}", m[(i, i)]);
        }
    }
    for (i, j, c) in h.edge_list() {
        let _ = writeln!(out, "{i},{j},{c}");
    }
    out
}

/// Correlation matrix as `i,j,value` rows over unordered pairs `i <= j`.
pub fn correlation_csv(g: &CorrelationMatrix, meta: Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("i,j,value\n");
    let n = g.size();
    for i in 0..n {
        for j in i..n {
            let _ = writeln!(out, "{i},{j},{}", g.values()[(i, j)]);
        }
    }
    out
}

/// One entry of a delay scan as `delay_fs,value` rows.
pub fn hom_csv(curve: &HomCurve, entry: (usize, usize), meta: Meta) -> Result<String> {
    let values = curve.entry_curve(entry.0, entry.1)?;
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("delay_fs,value\n");
    for (tau, v) in curve.delays_fs().iter().zip(values) {
        let _ = writeln!(out, "{tau},{v}");
    }
    Ok(out)
}

/// Coincidence counts as `i,j,count` rows over unordered pairs, with
/// duration, seed, and detection-model hash recorded in the header.
pub fn count_matrix_csv(counts: &CountMatrix, model: &DetectionModel, meta: Meta) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# duration_s: {}", counts.duration_s());
    let _ = writeln!(out, "# seed: {}", counts.seed());
    let _ = writeln!(out, "# model_hash: {}", model.hash());
    let _ = writeln!(out, "# sites: {}", counts.size());
    write_meta(&mut out, meta);
    out.push_str("i,j,count\n");
    let n = counts.size();
    for i in 0..n {
        for j in i..n {
            let _ = writeln!(out, "{i},{j},{}", counts.get(i, j));
        }
    }
    out
}

/// Parse a count-matrix CSV produced by [`count_matrix_csv`].
pub fn count_matrix_from_csv(text: &str) -> Result<CountMatrix> {
    let mut duration_s = 0.0;
    let mut seed = 0u64;
    let mut sites: Option<usize> = None;
    let mut triples: Vec<(usize, usize, u64)> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "duration_s" => {
                        duration_s = value
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad duration: {value}")))?;
                    }
                    "seed" => {
                        seed = value
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad seed: {value}")))?;
                    }
                    "sites" => {
                        sites = Some(
                            value
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad sites: {value}")))?,
                        );
                    }
                    _ => {}
                }
            }
            continue;
        }
        if line == "i,j,count" {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected i,j,count", lineno + 1)));
        }
        let parse = |s: &str| -> Result<usize> {
            s.trim().parse().map_err(|_| Error::Parse(format!("line {}: {s}", lineno + 1)))
        };
        let i = parse(fields[0])?;
        let j = parse(fields[1])?;
        let c: u64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: {}", lineno + 1, fields[2])))?;
        triples.push((i, j, c));
    }

    if triples.is_empty() {
        return Err(Error::Parse("no count rows found".into()));
    }
    let max_index = triples.iter().map(|&(i, j, _)| i.max(j)).max().unwrap();
    let n = sites.unwrap_or(max_index + 1).max(max_index + 1);
    let mut matrix = nalgebra::DMatrix::zeros(n, n);
    for (i, j, c) in triples {
        matrix[(i, j)] = c;
        matrix[(j, i)] = c;
    }
    CountMatrix::from_counts(matrix, duration_s, seed)
}

/// Violation map as `i,j,violation,sigma,significance` rows over pairs
/// `i < j`; undefined values are written as `nan`, absent ones (exact
/// source) as empty fields.
pub fn violation_csv(map: &ViolationMap, meta: Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("i,j,violation,sigma,significance\n");
    let n = map.size();
    let fmt = |v: f64| if v.is_nan() { "nan".to_string() } else { v.to_string() };
    for i in 0..n {
        for j in (i + 1)..n {
            let v = fmt(map.violation()[(i, j)]);
            let s = map.sigma().map(|m| fmt(m[(i, j)])).unwrap_or_default();
            let z = map.significance().map(|m| fmt(m[(i, j)])).unwrap_or_default();
            let _ = writeln!(out, "{i},{j},{v},{s},{z}");
        }
    }
    out
}

/// Parse `separation_um,coupling_per_mm` samples; `#` comments and an
/// optional header row are skipped.
pub fn coupling_samples_from_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut samples = Vec::new();
    let mut header_allowed = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected separation_um,coupling_per_mm",
                lineno + 1
            )));
        }
        let parsed = fields[0]
            .trim()
            .parse::<f64>()
            .and_then(|d| fields[1].trim().parse::<f64>().map(|c| (d, c)));
        match parsed {
            Ok(sample) => {
                samples.push(sample);
                header_allowed = false;
            }
            Err(_) if header_allowed => header_allowed = false, // one header row
            Err(_) => {
                return Err(Error::Parse(format!("line {}: {line}", lineno + 1)));
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::Parse("no samples found".into()));
    }
    Ok(samples)
}
