//! Gap kinematics between deformable-surface points and a rigid
//! counter-surface: closest-point projection, signed normal gap, incremental
//! tangential slip, and local surface stretch.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KinematicsError {
    #[error("facet length must be positive, got {0}")]
    NonPositiveLength(f64),
}

/// Rigid counter-surface geometry. Only the flat line is implemented; the
/// enum leaves room for curved kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceKind {
    FlatLine,
}

/// A rigid surface with its motion state: vertical position of the line and
/// the accumulated horizontal offset `u_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidSurface {
    pub kind: SurfaceKind,
    /// Current height of the line; the outward normal points in +y toward
    /// the deformable body.
    pub height: f64,
    /// Prescribed horizontal displacement of the surface.
    pub offset: f64,
}

impl RigidSurface {
    pub fn flat_line(height: f64) -> Self {
        Self {
            kind: SurfaceKind::FlatLine,
            height,
            offset: 0.0,
        }
    }

    /// Outward unit normal at the projection point.
    pub fn normal(&self) -> [f64; 2] {
        [0.0, 1.0]
    }

    /// Unit tangent, oriented along +x.
    pub fn tangent(&self) -> [f64; 2] {
        [1.0, 0.0]
    }
}

/// Closest-point projection of `x_k` onto the surface; returns the projection
/// point and the outward unit normal there.
pub fn project(x_k: [f64; 2], surf: &RigidSurface) -> ([f64; 2], [f64; 2]) {
    match surf.kind {
        SurfaceKind::FlatLine => ([x_k[0], surf.height], surf.normal()),
    }
}

/// Signed normal gap `(x_k - x_p) . n_p`; negative means penetration.
pub fn signed_gap(x_k: [f64; 2], surf: &RigidSurface) -> f64 {
    let (x_p, n_p) = project(x_k, surf);
    (x_k[0] - x_p[0]) * n_p[0] + (x_k[1] - x_p[1]) * n_p[1]
}

/// Per-point gap state carried across a load step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapState {
    /// Signed normal gap.
    pub g_n: f64,
    /// Projection point on the rigid surface.
    pub x_p: [f64; 2],
    /// Relative tangential displacement of the point against its attached
    /// projection point over the step (scalar in 2D).
    pub g_t_increment: f64,
    /// Committed accumulated slip.
    pub g_t_accumulated: f64,
    /// Local surface stretch of the deformable contact facet.
    pub j_cl: f64,
    /// Surface offset at which this state was formed; anchors the slip
    /// increment of the following step.
    pub surf_offset: f64,
}

impl GapState {
    pub fn at_point(x_k: [f64; 2], surf: &RigidSurface) -> Self {
        let (x_p, _) = project(x_k, surf);
        Self {
            g_n: signed_gap(x_k, surf),
            x_p,
            g_t_increment: 0.0,
            g_t_accumulated: 0.0,
            j_cl: 1.0,
            surf_offset: surf.offset,
        }
    }
}

/// Re-evaluates the gap state at a moved point against a moved surface.
///
/// The slip increment is the relative tangential displacement
/// `(dx_k - dx_surface) . t_p` accumulated since `prev` was formed; for the
/// flat line the tangential coordinate of the projection point equals that of
/// the surface point, so the previous point position is recovered from the
/// stored projection. Accumulated slip is carried over unchanged; committing
/// it is the contact solver's job at step convergence.
pub fn update_slip(prev: &GapState, x_k_new: [f64; 2], surf_new: &RigidSurface) -> GapState {
    let (x_p, _) = project(x_k_new, surf_new);
    let t_p = surf_new.tangent();
    let dx_point = (x_k_new[0] - prev.x_p[0]) * t_p[0] + (x_k_new[1] - prev.x_p[1]) * t_p[1];
    let dx_surf = surf_new.offset - prev.surf_offset;
    GapState {
        g_n: signed_gap(x_k_new, surf_new),
        x_p,
        g_t_increment: dx_point - dx_surf,
        g_t_accumulated: prev.g_t_accumulated,
        j_cl: prev.j_cl,
        surf_offset: prev.surf_offset,
    }
}

/// Local surface stretch of a 2D contact facet: current over reference length.
pub fn surface_stretch(reference_length: f64, current_length: f64) -> Result<f64, KinematicsError> {
    if !(reference_length > 0.0) {
        return Err(KinematicsError::NonPositiveLength(reference_length));
    }
    if !(current_length > 0.0) {
        return Err(KinematicsError::NonPositiveLength(current_length));
    }
    Ok(current_length / reference_length)
}
