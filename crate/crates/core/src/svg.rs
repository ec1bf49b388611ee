//! SVG figure emitters: lattice diagrams, hexagonal site heatmaps, and
//! matrix heat charts.
//!
//! Sites are drawn in the pointy-top axial embedding used by
//! `TriangularLattice::cartesian_um` (the `+q` axis horizontal, `r`
//! increasing upward); heatmap cells are the Voronoi hexagons of that
//! embedding, so adjacent cells tile exactly. Metadata appears as XML
//! comments right after the opening tag.

use std::fmt::Write as _;

use crate::certification::ViolationMap;
use crate::export::Meta;
use crate::lattice::TriangularLattice;
use crate::propagator::ProbabilityDistribution;
use crate::twophoton::CorrelationMatrix;

// Eight viridis anchor colors, linearly interpolated.
const VIRIDIS: [(u8, u8, u8); 8] = [
    (68, 1, 84),
    (70, 50, 127),
    (54, 92, 141),
    (39, 127, 142),
    (31, 161, 135),
    (74, 194, 109),
    (159, 218, 58),
    (253, 231, 37),
];

fn viridis(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let lo = t.floor() as usize;
    let hi = (lo + 1).min(VIRIDIS.len() - 1);
    let f = t - lo as f64;
    let lerp = |a: u8, b: u8| (a as f64 + f * (b as f64 - a as f64)).round() as u8;
    (
        lerp(VIRIDIS[lo].0, VIRIDIS[hi].0),
        lerp(VIRIDIS[lo].1, VIRIDIS[hi].1),
        lerp(VIRIDIS[lo].2, VIRIDIS[hi].2),
    )
}

// Blue-white-red diverging map for signed data, t in [-1, 1].
fn diverging(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(-1.0, 1.0);
    let lerp = |a: f64, b: f64, f: f64| (a + f * (b - a)).round() as u8;
    if t < 0.0 {
        let f = t + 1.0;
        (lerp(33.0, 247.0, f), lerp(102.0, 247.0, f), lerp(172.0, 247.0, f))
    } else {
        (lerp(247.0, 178.0, t), lerp(247.0, 24.0, t), lerp(247.0, 43.0, t))
    }
}

fn rgb((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

struct Canvas {
    body: String,
    width: f64,
}

impl Canvas {
    fn new(width: f64, height: f64, meta: Meta) -> Canvas {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"##
        );
        for (key, value) in meta {
            let _ = writeln!(body, "<!-- {key}: {value} -->");
        }
        let _ = writeln!(body, r##"<rect width="100%" height="100%" fill="white"/>"##);
        Canvas { body, width }
    }

    fn finish(mut self) -> String {
        let _ = writeln!(self.body, "</svg>");
        self.body
    }
}

/// Map lattice micrometer coordinates onto the canvas, y flipped so that
/// +r points up on screen.
struct SiteLayout {
    scale: f64,
    x0: f64,
    y0: f64,
}

impl SiteLayout {
    fn new(lattice: &TriangularLattice, size: f64, margin: f64) -> SiteLayout {
        let positions: Vec<(f64, f64)> =
            (0..lattice.site_count()).map(|i| lattice.cartesian_um(i)).collect();
        let min_x = positions.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = positions.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = positions.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = positions.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let span = (max_x - min_x).max(max_y - min_y).max(lattice.spacing_um());
        let scale = (size - 2.0 * margin) / span;
        SiteLayout {
            scale,
            x0: margin - min_x * scale + (span - (max_x - min_x)) * scale / 2.0,
            y0: margin + max_y * scale + (span - (max_y - min_y)) * scale / 2.0,
        }
    }

    fn place(&self, lattice: &TriangularLattice, i: usize) -> (f64, f64) {
        let (x, y) = lattice.cartesian_um(i);
        (self.x0 + x * self.scale, self.y0 - y * self.scale)
    }
}

/// Lattice diagram: edges, sites, and port labels on the central row.
pub fn lattice_svg(lattice: &TriangularLattice, meta: Meta) -> String {
    let size = 560.0;
    let mut canvas = Canvas::new(size, size, meta);
    let layout = SiteLayout::new(lattice, size, 40.0);

    for (i, j) in lattice.edges() {
        let (x1, y1) = layout.place(lattice, i);
        let (x2, y2) = layout.place(lattice, j);
        let _ = writeln!(
            canvas.body,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#8899aa" stroke-width="1.2"/>"##
        );
    }
    let r = (lattice.spacing_um() * layout.scale * 0.22).max(3.0);
    for i in 0..lattice.site_count() {
        let (x, y) = layout.place(lattice, i);
        let _ = writeln!(
            canvas.body,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="#1f4e79" stroke="white" stroke-width="1"/>"##
        );
    }
    for (&port, &i) in lattice.port_map() {
        let (x, y) = layout.place(lattice, i);
        let _ = writeln!(
            canvas.body,
            r##"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle" fill="#b03030">{port}</text>"##,
            y - r - 4.0
        );
    }
    canvas.finish()
}

/// Hexagonal heatmap of a per-site distribution.
pub fn distribution_svg(
    lattice: &TriangularLattice,
    dist: &ProbabilityDistribution,
    meta: Meta,
) -> String {
    let size = 560.0;
    let mut canvas = Canvas::new(size, size, meta);
    let layout = SiteLayout::new(lattice, size, 40.0);
    let max = dist.values().iter().cloned().fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    // Voronoi cell of the triangular lattice: hexagon with circumradius
    // spacing / sqrt(3), vertices at 30 + 60k degrees.
    let cell_r = lattice.spacing_um() * layout.scale / 3.0f64.sqrt();

    for (i, &p) in dist.values().iter().enumerate() {
        let (cx, cy) = layout.place(lattice, i);
        let mut points = String::new();
        for k in 0..6 {
            let angle = (30.0 + 60.0 * k as f64).to_radians();
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                cx + cell_r * angle.cos(),
                cy - cell_r * angle.sin()
            );
        }
        let fill = rgb(viridis(p / max));
        let _ = writeln!(
            canvas.body,
            r##"<polygon points="{}" fill="{fill}" stroke="#30303040" stroke-width="0.5"/>"##,
            points.trim_end()
        );
    }
    let _ = writeln!(
        canvas.body,
        r##"<text x="12" y="{:.0}" font-size="11" fill="#303030">max p = {max:.4}</text>"##,
        size - 12.0
    );
    canvas.finish()
}

fn matrix_grid(
    canvas: &mut Canvas,
    n: usize,
    mut cell_fill: impl FnMut(usize, usize) -> (String, Option<String>),
) {
    let margin = 46.0;
    let area = canvas.width - 2.0 * margin;
    let cell = area / n as f64;
    // Row index increases downward so (0, 0) sits at the top-left.
    for i in 0..n {
        for j in 0..n {
            let x = margin + j as f64 * cell;
            let y = margin + i as f64 * cell;
            let (fill, stroke) = cell_fill(i, j);
            let stroke_attr = stroke
                .map(|s| format!(r##" stroke="{s}" stroke-width="1.2""##))
                .unwrap_or_default();
            let _ = writeln!(
                canvas.body,
                r##"<rect x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{fill}"{stroke_attr}/>"##
            );
        }
    }
    let step = (n / 6).max(1);
    for k in (0..n).step_by(step) {
        let pos = margin + (k as f64 + 0.5) * cell;
        let _ = writeln!(
            canvas.body,
            r##"<text x="{pos:.2}" y="{:.2}" font-size="10" text-anchor="middle" fill="#303030">{k}</text>"##,
            margin - 8.0
        );
        let _ = writeln!(
            canvas.body,
            r##"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end" fill="#303030">{k}</text>"##,
            margin - 8.0,
            pos + 3.0
        );
    }
}

/// Square heatmap of a correlation matrix over output site indices.
pub fn correlation_svg(g: &CorrelationMatrix, meta: Meta) -> String {
    let mut canvas = Canvas::new(560.0, 560.0, meta);
    let n = g.size();
    let max = g.values().iter().cloned().fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    matrix_grid(&mut canvas, n, |i, j| (rgb(viridis(g.values()[(i, j)] / max)), None));
    let _ = writeln!(
        canvas.body,
        r##"<text x="12" y="548" font-size="11" fill="#303030">max = {max:.5}</text>"##
    );
    canvas.finish()
}

/// Diverging heatmap of the witness map; violating pairs (positive
/// entries) are outlined, undefined pairs drawn grey.
pub fn violation_svg(map: &ViolationMap, meta: Meta) -> String {
    let mut canvas = Canvas::new(560.0, 560.0, meta);
    let n = map.size();
    let amax = map
        .violation()
        .iter()
        .filter(|v| !v.is_nan())
        .map(|v| v.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    matrix_grid(&mut canvas, n, |i, j| {
        let v = map.violation()[(i, j)];
        if v.is_nan() {
            ("#d8d8d8".to_string(), None)
        } else {
            let stroke = (v > 0.0).then(|| "#7a0010".to_string());
            (rgb(diverging(v / amax)), stroke)
        }
    });
    let positive = map.positive_pairs().len();
    let _ = writeln!(
        canvas.body,
        r##"<text x="12" y="548" font-size="11" fill="#303030">{positive} violating pairs, |V|max = {amax:.4}</text>"##
    );
    canvas.finish()
}
