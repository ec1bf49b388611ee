//! End-to-end behavior of the `triwalk` binary: exit codes, file
//! contracts, and pipeline closure between subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use triwalk_core::export;
use triwalk_core::lattice::build_hexagonal_lattice;

fn triwalk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triwalk"))
}

fn run(args: &[&str]) -> Output {
    triwalk().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL_CONFIG: &str = "\
seed = 5
[lattice]
rings = 2
[hamiltonian]
coupling_per_mm = 0.2
[detection]
duration_s = 200.0
[hom]
delay_steps = 21
";

#[test]
fn missing_config_flag_exits_two() {
    let out = run(&["lattice"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config"));
}

#[test]
fn malformed_config_exits_two_without_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[lattice]\nring = 3\n");
    let out_dir = dir.path().join("out");
    let out = run(&[
        "lattice",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists(), "no partial files on config errors");
}

#[test]
fn invalid_port_in_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[lattice]\nrings = 1\n[hamiltonian]\ncoupling_per_mm = 0.2\n[input]\nports = [-3, 1]\n",
    );
    let out = run(&["correlate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_json_matches_library_document() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "lattice",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let text = std::fs::read_to_string(out_dir.join("lattice.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["config_hash"].is_string());
    let doc: triwalk_core::LatticeDocument =
        serde_json::from_value(value["lattice"].clone()).unwrap();
    assert_eq!(doc.sites.len(), 19);
    assert_eq!(doc.edges.len(), build_hexagonal_lattice(2, 15.0).edge_count());
    assert_eq!(doc.port_map.len(), 5);
}

#[test]
fn evolve_outputs_are_mirror_permutations() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_dir = dir.path().join("out");
    assert_eq!(
        run(&[
            "evolve",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status
        .code(),
        Some(0)
    );

    let parse = |name: &str| -> Vec<f64> {
        let text = std::fs::read_to_string(out_dir.join(name)).unwrap();
        text.lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("site"))
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect()
    };
    let p_minus = parse("evolve_port-1.csv");
    let p_plus = parse("evolve_port1.csv");

    let lattice = build_hexagonal_lattice(2, 15.0);
    let mirror = lattice.mirror_permutation();
    for i in 0..lattice.site_count() {
        assert!((p_minus[i] - p_plus[mirror[i]]).abs() < 1e-12);
    }
}

#[test]
fn zero_length_walk_emits_delta_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[lattice]\nrings = 1\n[hamiltonian]\ncoupling_per_mm = 0.2\n[evolution]\nz_mm = 0.0\n",
    );
    let out_dir = dir.path().join("out");
    assert_eq!(
        run(&[
            "evolve",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status
        .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(out_dir.join("evolve_port1.csv")).unwrap();
    let lattice = build_hexagonal_lattice(1, 15.0);
    let expected_site = lattice.port_site(1).unwrap();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("site")) {
        let mut fields = line.split(',');
        let site: usize = fields.next().unwrap().parse().unwrap();
        let p: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(p, if site == expected_site { 1.0 } else { 0.0 });
    }
}

#[test]
fn quantum_and_classical_differ_exactly_where_interference_lives() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_dir = dir.path().join("out");
    assert_eq!(
        run(&[
            "correlate",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status
        .code(),
        Some(0)
    );

    let parse = |name: &str| -> Vec<(usize, usize, f64)> {
        std::fs::read_to_string(out_dir.join(name))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("i,"))
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect()
    };
    let quantum = parse("correlation_quantum.csv");
    let classical = parse("correlation_classical.csv");

    // Interference term straight from the propagator.
    let lattice = build_hexagonal_lattice(2, 15.0);
    let h = triwalk_core::Hamiltonian::assemble_uniform(&lattice, 0.0, 0.2);
    let u = triwalk_core::evolve(&h, 11.0).unwrap();
    let (ia, ib) = (lattice.port_site(-1).unwrap(), lattice.port_site(1).unwrap());

    for ((i, j, q), (_, _, c)) in quantum.iter().zip(&classical) {
        if i == j {
            continue; // conventions differ on the diagonal by design
        }
        let big_a = u.entry(*i, ia) * u.entry(*j, ib);
        let big_b = u.entry(*i, ib) * u.entry(*j, ia);
        let interference = 2.0 * (big_a * big_b.conj()).re;
        if interference.abs() > 1e-12 {
            assert!((q - c).abs() > 1e-13, "({i},{j}) should differ");
        } else {
            assert!((q - c).abs() < 1e-12, "({i},{j}) should agree");
        }
    }
}

#[test]
fn sample_feeds_certify_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_dir = dir.path().join("out");
    assert_eq!(
        run(&[
            "sample",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status
        .code(),
        Some(0)
    );
    let counts_path = out_dir.join("counts.csv");
    assert!(counts_path.exists());

    let out = run(&[
        "certify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--counts",
        counts_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let certify = std::fs::read_to_string(out_dir.join("certify.csv")).unwrap();
    assert!(certify.lines().any(|l| l.starts_with("i,j,violation")));
    // Counts-based certification carries significances.
    let data_row = certify.lines().find(|l| l.ends_with(|c: char| c.is_ascii_digit())
        && !l.starts_with('#')
        && !l.starts_with("i,"));
    assert!(data_row.is_some());
}

#[test]
fn exact_certification_flags_violations() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_dir = dir.path().join("out");
    assert_eq!(
        run(&[
            "certify",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--format",
            "json",
        ])
        .status
        .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(out_dir.join("certify.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["source"], "exact-correlations");
    assert!(value["positive_pairs"].as_u64().unwrap() >= 1);
    assert!(value["max_significance"].is_null());
}

#[test]
fn fit_coupling_recovers_the_synthetic_model() {
    let dir = tempfile::tempdir().unwrap();
    let samples = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/coupling_synthetic.csv");
    let out = run(&[
        "fit-coupling",
        "--samples",
        samples.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("coupling_model.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    // The file documents its generating parameters: A = 12/mm, d0 = 3.7um,
    // 1% multiplicative noise.
    let amplitude = value["amplitude_per_mm"].as_f64().unwrap();
    let decay = value["decay_length_um"].as_f64().unwrap();
    assert!((amplitude / 12.0 - 1.0).abs() < 0.05, "amplitude {amplitude}");
    assert!((decay / 3.7 - 1.0).abs() < 0.05, "decay {decay}");
}

#[test]
fn fit_coupling_on_garbage_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("flat.csv");
    // All separations equal: degenerate fit, a numerical failure.
    std::fs::write(&bad, "separation_um,coupling_per_mm\n10.0,1.0\n10.0,0.9\n").unwrap();
    let out = run(&[
        "fit-coupling",
        "--samples",
        bad.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL_CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let out_c = dir.path().join("c");
    for (out, seed) in [(&out_a, "5"), (&out_b, "6"), (&out_c, "6")] {
        assert_eq!(
            run(&[
                "sample",
                "--config",
                config.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                seed,
            ])
            .status
            .code(),
            Some(0)
        );
    }
    let a = std::fs::read(out_a.join("counts.csv")).unwrap();
    let b = std::fs::read(out_b.join("counts.csv")).unwrap();
    let c = std::fs::read(out_c.join("counts.csv")).unwrap();
    assert_ne!(a, b);
    assert_eq!(b, c);
}

#[test]
fn golden_counts_file_stays_stable() {
    // Freezes the seed-to-count mapping of the sampler and the CSV
    // byte format; regenerate deliberately if either ever changes.
    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_counts.csv");
    let golden = std::fs::read_to_string(&golden_path).unwrap();

    let lattice = build_hexagonal_lattice(1, 15.0);
    let h = triwalk_core::Hamiltonian::assemble_uniform(&lattice, 0.0, 0.2);
    let u = triwalk_core::evolve(&h, 11.0).unwrap();
    let g = triwalk_core::quantum_correlation(
        &u,
        lattice.port_site(-1).unwrap(),
        lattice.port_site(1).unwrap(),
    )
    .unwrap();
    let model =
        triwalk_core::DetectionModel::uniform(lattice.site_count(), 0.9, 50.0, true).unwrap();
    let counts = triwalk_core::sample_counts(&g, &model, 2000.0, 42).unwrap();
    let produced = export::count_matrix_csv(&counts, &model, &[]);
    assert_eq!(produced, golden, "sampler stream or CSV format drifted");

    // And the parser inverts the emitter.
    let parsed = export::count_matrix_from_csv(&golden).unwrap();
    assert_eq!(&parsed, &counts);
}
