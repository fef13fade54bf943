//! Structured mesh generator for the circular-segment cap.
//!
//! The cap is a circular segment of radius `R` and height (sagitta) `H`,
//! apex at the origin facing down toward the rigid surface, chord at `y = H`
//! forming the clamped base. Columns are graded fine near the apex where
//! contact happens and coarsen outboard; rows are graded toward the contact
//! surface. The two chord-arc corners taper to zero thickness, so the mesh is
//! trimmed where the segment becomes thinner than a tenth of `H`; the trimmed
//! slivers are a fraction of a percent of the segment area.

use crate::mesh::Mesh;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CapMeshError {
    #[error("cap geometry requires R > H > 0, got R = {radius}, H = {height}")]
    BadGeometry { radius: f64, height: f64 },
    #[error("mesh density must lie in [0.05, 16], got {0}")]
    BadDensity(f64),
}

/// Circular-segment geometry in simulation length units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapGeometry {
    pub radius: f64,
    pub height: f64,
}

impl CapGeometry {
    pub fn new(radius: f64, height: f64) -> Result<Self, CapMeshError> {
        if !(radius > height && height > 0.0) {
            return Err(CapMeshError::BadGeometry { radius, height });
        }
        Ok(Self { radius, height })
    }

    /// Chord half-width `sqrt(2RH - H^2)`.
    pub fn half_width(&self) -> f64 {
        (2.0 * self.radius * self.height - self.height * self.height).sqrt()
    }

    /// Exact segment area `R^2 acos(1 - H/R) - (R - H) sqrt(2RH - H^2)`.
    pub fn area(&self) -> f64 {
        let (r, h) = (self.radius, self.height);
        r * r * (1.0 - h / r).acos() - (r - h) * self.half_width()
    }

    /// Height of the arc above the apex at horizontal position `x`.
    pub fn arc_height(&self, x: f64) -> f64 {
        self.radius - (self.radius * self.radius - x * x).sqrt()
    }
}

/// Builds the cap mesh. `density = 1` gives roughly 3000 elements; element
/// counts scale with `density^2` and the apex resolution with `density`.
///
/// Boundary sets: `contact` along the arc (bottom), `base` along the chord.
pub fn generate_cap_mesh(geom: &CapGeometry, density: f64) -> Result<Mesh, CapMeshError> {
    if !(0.05..=16.0).contains(&density) {
        return Err(CapMeshError::BadDensity(density));
    }
    let h_corner = 0.1 * geom.height;
    let y_trim = geom.height - h_corner;
    // x where the segment thickness drops to h_corner
    let x_cut = {
        let q = geom.radius - y_trim;
        (geom.radius * geom.radius - q * q).sqrt()
    };
    let x_fine = 0.3 * geom.half_width();

    let n_fine = ((42.0 * density).round() as usize).max(2);
    let n_coarse = ((24.0 * density).round() as usize).max(2);
    let ny = ((24.0 * density).round() as usize).max(2);

    // half-axis column coordinates: uniform inside x_fine, geometric outside
    let dx_fine = x_fine / n_fine as f64;
    let ratio = geometric_ratio(x_cut - x_fine, dx_fine, n_coarse);
    let mut xs_half = Vec::with_capacity(n_fine + n_coarse + 1);
    for i in 0..=n_fine {
        xs_half.push(dx_fine * i as f64);
    }
    let mut x = x_fine;
    let mut step = dx_fine;
    for k in 0..n_coarse {
        step *= ratio;
        x += step;
        if k + 1 == n_coarse {
            x = x_cut; // close the accumulated rounding
        }
        xs_half.push(x);
    }

    // full axis, symmetric about zero
    let mut xs: Vec<f64> = xs_half.iter().rev().map(|&v| -v).collect();
    xs.extend(xs_half.iter().skip(1));
    let n_cols = xs.len();

    // nodes column by column; row grading blends to uniform where the
    // column is short so corner elements stay reasonably shaped
    let q0 = 1.6;
    let mut coords = Vec::with_capacity(n_cols * (ny + 1));
    for &xc in &xs {
        let y_bot = geom.arc_height(xc);
        let h_col = geom.height - y_bot;
        let q = 1.0 + (q0 - 1.0) * (h_col / geom.height).max(0.0).powf(1.5);
        for j in 0..=ny {
            let t = (j as f64 / ny as f64).powf(q);
            coords.push([xc, y_bot + t * h_col]);
        }
    }

    let id = |i: usize, j: usize| i * (ny + 1) + j;
    let mut quads = Vec::with_capacity((n_cols - 1) * ny);
    for i in 0..n_cols - 1 {
        for j in 0..ny {
            quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }

    let mut sets = BTreeMap::new();
    sets.insert(
        "contact".to_string(),
        (0..n_cols).map(|i| id(i, 0)).collect::<Vec<_>>(),
    );
    sets.insert(
        "base".to_string(),
        (0..n_cols).map(|i| id(i, ny)).collect::<Vec<_>>(),
    );
    sets.insert(
        "free".to_string(),
        (1..ny)
            .flat_map(|j| [id(0, j), id(n_cols - 1, j)])
            .collect::<Vec<_>>(),
    );

    let mesh = Mesh::new(coords, quads, sets).expect("generated connectivity is valid");
    debug_assert!(all_jacobians_positive(&mesh));
    Ok(mesh)
}

/// Solves `dx * sum_{k=1..n} r^k = span` for the growth ratio `r` by
/// bisection.
fn geometric_ratio(span: f64, dx: f64, n: usize) -> f64 {
    let total = |r: f64| -> f64 {
        let mut s = 0.0;
        let mut step = dx;
        for _ in 0..n {
            step *= r;
            s += step;
        }
        s
    };
    let (mut lo, mut hi) = (1.0 + 1e-9, 4.0);
    if total(hi) < span {
        return hi;
    }
    if total(lo) > span {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < span {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positivity of the bilinear Jacobian over a quad is equivalent to all four
/// corner triangles having positive signed area.
pub fn all_jacobians_positive(mesh: &Mesh) -> bool {
    mesh.quads.iter().all(|q| {
        (0..4).all(|k| {
            let a = mesh.coords[q[k]];
            let b = mesh.coords[q[(k + 1) % 4]];
            let d = mesh.coords[q[(k + 3) % 4]];
            (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]) > 0.0
        })
    })
}
