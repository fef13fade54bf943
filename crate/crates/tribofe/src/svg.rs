//! Minimal self-contained SVG rendering: line plots for the emitted CSV
//! quantities and deformed-mesh snapshots of the contact zone. Output is
//! deterministic for identical inputs.

use crate::mesh::Mesh;
use std::fmt::Write as _;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Dashed series render with a dash pattern (used for experiment data).
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            dashed: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Horizontal reference lines `(y, label)`.
    pub hlines: Vec<(f64, String)>,
    /// Marked points `(x, y)` drawn as squares (e.g. sliding onsets).
    pub markers: Vec<(f64, f64)>,
}

impl LinePlot {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            hlines: Vec::new(),
            markers: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 440.0;
        const ML: f64 = 70.0; // margins
        const MR: f64 = 20.0;
        const MT: f64 = 36.0;
        const MB: f64 = 52.0;

        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                if x.is_finite() && y.is_finite() {
                    xs.push(x);
                    ys.push(y);
                }
            }
        }
        for &(y, _) in &self.hlines {
            ys.push(y);
        }
        let (x0, x1) = padded_range(&xs);
        let (y0, y1) = padded_range(&ys);
        let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
        let py = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
        );
        let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>",
            W / 2.0,
            escape(&self.title)
        );

        // axes with ticks
        let _ = writeln!(
            out,
            "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            W - ML - MR,
            H - MT - MB
        );
        for (t, x) in ticks(x0, x1) {
            let _ = writeln!(
                out,
                "<line x1=\"{0:.2}\" y1=\"{1}\" x2=\"{0:.2}\" y2=\"{2}\" stroke=\"black\"/>",
                px(x),
                H - MB,
                H - MB + 5.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                px(x),
                H - MB + 18.0,
                t
            );
        }
        for (t, y) in ticks(y0, y1) {
            let _ = writeln!(
                out,
                "<line x1=\"{0}\" y1=\"{1:.2}\" x2=\"{2}\" y2=\"{1:.2}\" stroke=\"black\"/>",
                ML - 5.0,
                py(y),
                ML
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                ML - 8.0,
                py(y) + 4.0,
                t
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            (ML + W - MR) / 2.0,
            H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 {})\">{}</text>",
            (MT + H - MB) / 2.0,
            (MT + H - MB) / 2.0,
            escape(&self.y_label)
        );

        for (y, label) in &self.hlines {
            let _ = writeln!(
                out,
                "<line x1=\"{ML}\" y1=\"{0:.2}\" x2=\"{1}\" y2=\"{0:.2}\" stroke=\"gray\" stroke-dasharray=\"6 3\"/>",
                py(*y),
                W - MR
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">{}</text>",
                W - MR - 4.0,
                py(*y) - 4.0,
                escape(label)
            );
        }

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut path = String::new();
            for (k, &(x, y)) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).enumerate() {
                let _ = write!(
                    path,
                    "{}{:.2},{:.2} ",
                    if k == 0 { "M" } else { "L" },
                    px(x),
                    py(y)
                );
            }
            let dash = if s.dashed {
                " stroke-dasharray=\"5 3\""
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"{dash}/>",
                path.trim_end()
            );
            // legend entry
            let ly = MT + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{ly:.2}\" x2=\"{}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
                ML + 8.0,
                ML + 30.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                ML + 34.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        for &(x, y) in &self.markers {
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"black\" stroke-width=\"1.4\"/>",
                px(x) - 3.5,
                py(y) - 3.5
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn padded_range(vals: &[f64]) -> (f64, f64) {
    let mut lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64) -> Vec<(String, f64)> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|s| s * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(mag * 10.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        let label = if step >= 1.0 && t.abs() < 1e6 {
            format!("{t:.0}")
        } else if step >= 0.01 {
            format!("{t:.2}")
        } else {
            format!("{t:.3e}")
        };
        out.push((label, t));
        t += step;
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Deformed-configuration snapshot of the contact zone: elements filled by
/// the first invariant of the Cauchy stress, the rigid line below, and the
/// undeformed surface contour for reference.
///
/// `element_i1` holds one stress invariant per element (units of E). The
/// vertical axis is exaggerated by `stretch`.
pub fn mesh_snapshot(
    mesh: &Mesh,
    u: &[f64],
    plate_height: f64,
    element_i1: &[f64],
    view: [f64; 4], // x_min, x_max, y_min, y_max (world units, unstretched)
    stretch: f64,
    title: &str,
) -> String {
    const W: f64 = 760.0;
    let [vx0, vx1, vy0, vy1] = view;
    let h = (W - 40.0) * (vy1 - vy0) * stretch / (vx1 - vx0) + 50.0;
    let px = |x: f64| 20.0 + (x - vx0) / (vx1 - vx0) * (W - 40.0);
    let py = |y: f64| h - 30.0 - (y - vy0) * stretch / (vx1 - vx0) * (W - 40.0);

    let smax = element_i1
        .iter()
        .fold(1e-12f64, |m, v| m.max(v.abs()));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{h:.0}\" viewBox=\"0 0 {W} {h:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{h:.0}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        W / 2.0,
        escape(title)
    );

    for (e, quad) in mesh.quads.iter().enumerate() {
        // cull elements entirely outside the view
        let pts: Vec<[f64; 2]> = quad
            .iter()
            .map(|&n| {
                [
                    mesh.coords[n][0] + u[2 * n],
                    mesh.coords[n][1] + u[2 * n + 1],
                ]
            })
            .collect();
        if pts.iter().all(|p| p[0] < vx0)
            || pts.iter().all(|p| p[0] > vx1)
            || pts.iter().all(|p| p[1] > vy1)
            || pts.iter().all(|p| p[1] < vy0)
        {
            continue;
        }
        let mut poly = String::new();
        for p in &pts {
            let _ = write!(poly, "{:.2},{:.2} ", px(p[0]), py(p[1]));
        }
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"#444\" stroke-width=\"0.3\"/>",
            poly.trim_end(),
            diverging_color(element_i1.get(e).copied().unwrap_or(0.0) / smax)
        );
    }

    // undeformed surface contour
    if let Ok(facets) = mesh.boundary_facets("contact") {
        let mut path = String::new();
        let mut first = true;
        for f in facets {
            let a = mesh.coords[f[0]];
            let b = mesh.coords[f[1]];
            let _ = write!(
                path,
                "{}{:.2},{:.2} L{:.2},{:.2} ",
                if first { "M" } else { "M" },
                px(a[0]),
                py(a[1]),
                px(b[0]),
                py(b[1])
            );
            first = false;
        }
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#e69500\" stroke-width=\"1.2\" stroke-dasharray=\"4 3\"/>",
            path.trim_end()
        );
    }

    // rigid line
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{:.2}\" x2=\"{}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"2.5\"/>",
        px(vx0),
        py(plate_height),
        px(vx1),
        py(plate_height)
    );
    out.push_str("</svg>\n");
    out
}

/// Symmetric blue-white-red map for `v` in [-1, 1].
fn diverging_color(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v >= 0.0 {
        (255.0, 255.0 * (1.0 - v), 255.0 * (1.0 - v))
    } else {
        (255.0 * (1.0 + v), 255.0 * (1.0 + v), 255.0)
    };
    format!("rgb({},{},{})", r as u8, g as u8, b as u8)
}
