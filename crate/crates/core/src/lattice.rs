//! Hexagonally layered triangular lattices.
//!
//! Sites live on axial coordinates `(q, r)` with the six unit neighbors
//! `(±1,0)`, `(0,±1)`, `(1,-1)`, `(-1,1)`. A lattice with `k` rings holds
//! `N = 3k(k+1) + 1` sites ordered ring-major, counterclockwise from the
//! `+q` axis, center first. Input/output ports are the sites of the central
//! row `r = 0`, labeled by their signed offset from the center.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six axial neighbor offsets in counterclockwise order, starting from
/// the `+q` axis.
pub const NEIGHBOR_OFFSETS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Axial coordinate of a lattice site plus its ring index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiteCoord {
    pub q: i32,
    pub r: i32,
    /// Hexagonal ring distance from the center, `max(|q|, |r|, |q + r|)`.
    pub layer: u32,
}

impl SiteCoord {
    pub fn new(q: i32, r: i32) -> Self {
        SiteCoord { q, r, layer: ring_of(q, r) }
    }
}

/// Ring index of an axial coordinate.
pub fn ring_of(q: i32, r: i32) -> u32 {
    q.abs().max(r.abs()).max((q + r).abs()) as u32
}

/// Hexagonal graph distance between two axial coordinates.
pub fn hex_distance(a: (i32, i32), b: (i32, i32)) -> u32 {
    let dq = a.0 - b.0;
    let dr = a.1 - b.1;
    ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
}

/// A hexagonally layered triangular lattice: sites, nearest-neighbor
/// adjacency, physical pitch, and port labels along the central row.
///
/// Immutable after construction; all accessors take `&self`.
#[derive(Debug, Clone)]
pub struct TriangularLattice {
    sites: Vec<SiteCoord>,
    adjacency: Vec<bool>,
    rings: u32,
    spacing_um: f64,
    port_map: BTreeMap<i32, usize>,
    coord_index: HashMap<(i32, i32), usize>,
}

/// Build the lattice with the given number of rings and site pitch.
///
/// Site ordering is deterministic: center first, then each ring swept
/// counterclockwise starting at `(k, 0)`. Port label `m` maps to the site
/// at `(m, 0)` for `m` in `-rings..=rings`.
pub fn build_hexagonal_lattice(rings: u32, spacing_um: f64) -> TriangularLattice {
    assert!(spacing_um > 0.0, "lattice spacing must be positive");

    let mut sites = vec![SiteCoord::new(0, 0)];
    for k in 1..=rings as i32 {
        // Walk the ring counterclockwise from the +q corner; the step
        // directions are the neighbor offsets rotated by 120 degrees.
        let mut pos = (k, 0);
        for step in [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)] {
            for _ in 0..k {
                sites.push(SiteCoord::new(pos.0, pos.1));
                pos = (pos.0 + step.0, pos.1 + step.1);
            }
        }
        debug_assert_eq!(pos, (k, 0));
    }

    let n = sites.len();
    let coord_index: HashMap<(i32, i32), usize> =
        sites.iter().enumerate().map(|(i, s)| ((s.q, s.r), i)).collect();

    let mut adjacency = vec![false; n * n];
    for (i, s) in sites.iter().enumerate() {
        for (dq, dr) in NEIGHBOR_OFFSETS {
            if let Some(&j) = coord_index.get(&(s.q + dq, s.r + dr)) {
                adjacency[i * n + j] = true;
                adjacency[j * n + i] = true;
            }
        }
    }

    let mut port_map = BTreeMap::new();
    for m in -(rings as i32)..=rings as i32 {
        port_map.insert(m, coord_index[&(m, 0)]);
    }

    TriangularLattice { sites, adjacency, rings, spacing_um, port_map, coord_index }
}

impl TriangularLattice {
    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteCoord] {
        &self.sites
    }

    pub fn rings(&self) -> u32 {
        self.rings
    }

    pub fn spacing_um(&self) -> f64 {
        self.spacing_um
    }

    pub fn port_map(&self) -> &BTreeMap<i32, usize> {
        &self.port_map
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.sites.len() + b]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.sites.len();
        (0..n).filter(move |&j| self.adjacency[i * n + j])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Number of unordered adjacent pairs.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() / 2
    }

    /// All unordered edges `(i, j)` with `i < j`, in index order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.sites.len();
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adjacency[i * n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Site index for a signed port label on the central row.
    pub fn port_site(&self, port: i32) -> Result<usize> {
        self.port_map
            .get(&port)
            .copied()
            .ok_or(Error::UnknownPort { port, rings: self.rings })
    }

    /// Index of the site at the given axial coordinate, if present.
    pub fn site_index(&self, q: i32, r: i32) -> Option<usize> {
        self.coord_index.get(&(q, r)).copied()
    }

    /// Cartesian position of a site in micrometers, with the `+q` axis
    /// horizontal: `x = s(q + r/2)`, `y = s * sqrt(3)/2 * r`.
    pub fn cartesian_um(&self, i: usize) -> (f64, f64) {
        let s = &self.sites[i];
        let x = self.spacing_um * (s.q as f64 + s.r as f64 / 2.0);
        let y = self.spacing_um * (3.0f64.sqrt() / 2.0) * s.r as f64;
        (x, y)
    }

    /// Index permutation realizing the mirror reflection about the vertical
    /// axis through the center, `(q, r) -> (-q - r, r)`. It swaps ports
    /// `m` and `-m` and is a lattice automorphism.
    pub fn mirror_permutation(&self) -> Vec<usize> {
        self.sites
            .iter()
            .map(|s| self.coord_index[&(-s.q - s.r, s.r)])
            .collect()
    }

    /// Serializable snapshot: sites, adjacency edge list, pitch, port map.
    pub fn to_document(&self) -> LatticeDocument {
        LatticeDocument {
            rings: self.rings,
            spacing_um: self.spacing_um,
            sites: self.sites.clone(),
            edges: self.edges(),
            port_map: self.port_map.clone(),
        }
    }
}

/// JSON-shaped lattice description consumed by the CLI and golden tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub rings: u32,
    pub spacing_um: f64,
    pub sites: Vec<SiteCoord>,
    pub edges: Vec<(usize, usize)>,
    pub port_map: BTreeMap<i32, usize>,
}

/// `N(k) = 3k(k+1) + 1`, the number of sites in a `k`-ring lattice.
pub fn site_count_for_rings(rings: u32) -> usize {
    let k = rings as usize;
    3 * k * (k + 1) + 1
}
