//! Enforcement of the adhesion and friction laws at contact integration
//! points: normal traction application, stick/slide return mapping against
//! the sliding threshold, and integration of tractions into nodal forces with
//! the correct area conventions (distance-independent thresholds act per
//! current area, extended-Amontons thresholds per reference area, normal
//! tractions per reference area).

use crate::kinematics::RigidSurface;
use crate::traction::{
    derived_constants, normal_traction_reg, normal_traction_reg_derivative, sliding_threshold,
    AdhesionParams, AreaConvention, DerivedAdhesionConstants, FrictionLaw, LawError,
    RegularizationConfig,
};

/// Everything the contact evaluation needs besides geometry.
#[derive(Debug, Clone, Copy)]
pub struct ContactParams {
    pub adhesion: AdhesionParams,
    pub law: FrictionLaw,
    pub reg: RegularizationConfig,
    /// Tangential penalty stiffness of the stick regime (traction per length).
    pub eps_t: f64,
    pub derived: DerivedAdhesionConstants,
}

impl ContactParams {
    /// Default penalty stiffness `50 t_max / r0`: stick is slightly compliant
    /// on the scale of the molecular length.
    pub fn new(adhesion: AdhesionParams, law: FrictionLaw, reg: RegularizationConfig) -> Self {
        let derived = derived_constants(&adhesion);
        Self {
            adhesion,
            law,
            reg,
            eps_t: 50.0 * derived.t_max / adhesion.r0,
            derived,
        }
    }

    /// Threshold magnitude below which a point counts as separated.
    pub fn threshold_floor(&self) -> f64 {
        1e-12 * self.derived.t_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Stick,
    Slide,
    Separated,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Stick => "stick",
            Regime::Slide => "slide",
            Regime::Separated => "separated",
        }
    }
}

/// Committed history of one contact integration point, updated only when a
/// load step converges.
#[derive(Debug, Clone, Copy)]
pub struct CommittedPoint {
    /// Tangential traction at the last committed state (in the law's own
    /// area convention).
    pub t_t: f64,
    /// Accumulated (plastic) slip of the counter-surface relative to the
    /// point.
    pub slip: f64,
    /// Horizontal position of the integration point at commit.
    pub x: f64,
    /// Surface offset at commit; anchors the next step's slip increment.
    pub surf_offset: f64,
    pub regime: Regime,
}

impl CommittedPoint {
    pub fn initial(x: f64) -> Self {
        Self {
            t_t: 0.0,
            slip: 0.0,
            x,
            surf_offset: 0.0,
            regime: Regime::Separated,
        }
    }
}

/// Outcome of the tangential predictor/corrector at one point.
#[derive(Debug, Clone, Copy)]
pub struct ReturnMap {
    pub t_t: f64,
    pub regime: Regime,
    /// d t_t / d (slip increment); `eps_t` while sticking, zero while sliding.
    pub dt_dslip: f64,
    /// d t_t / d threshold; `sign(t_trial)` while sliding, zero while sticking.
    pub dt_dthreshold: f64,
    /// Plastic slip increment absorbed by sliding this step.
    pub plastic_increment: f64,
    /// `threshold * |plastic increment|`, non-negative by construction.
    pub dissipation_increment: f64,
}

/// Elastic-predictor return map: `t_trial = t_committed + eps_t * delta_slip`,
/// capped at the sliding threshold.
///
/// `delta_slip` is the tangential displacement of the counter-surface
/// relative to the material point accumulated over the step (the negative of
/// the kinematic `g_t` increment), so a surface dragging the body forward
/// builds positive traction on the body.
pub fn friction_return_map(
    committed_t_t: f64,
    eps_t: f64,
    delta_slip: f64,
    threshold: f64,
    threshold_floor: f64,
) -> ReturnMap {
    debug_assert!(threshold >= 0.0);
    let t_trial = committed_t_t + eps_t * delta_slip;
    if t_trial.abs() < threshold {
        ReturnMap {
            t_t: t_trial,
            regime: Regime::Stick,
            dt_dslip: eps_t,
            dt_dthreshold: 0.0,
            plastic_increment: 0.0,
            dissipation_increment: 0.0,
        }
    } else {
        let sign = if t_trial >= 0.0 { 1.0 } else { -1.0 };
        let plastic = sign * (t_trial.abs() - threshold) / eps_t;
        ReturnMap {
            t_t: sign * threshold,
            regime: if threshold <= threshold_floor {
                Regime::Separated
            } else {
                Regime::Slide
            },
            dt_dslip: 0.0,
            dt_dthreshold: sign,
            plastic_increment: plastic,
            dissipation_increment: threshold * plastic.abs(),
        }
    }
}

/// Snapshot of one integration point after a contact evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PointEval {
    /// Current horizontal position of the point.
    pub x: f64,
    pub g_n: f64,
    pub j_cl: f64,
    /// Normal traction (reference-area convention), positive in repulsion.
    pub t_n: f64,
    /// Tangential traction in the law's area convention.
    pub t_t: f64,
    pub threshold: f64,
    pub regime: Regime,
    /// Reference integration weight `w * L_ref / 2`.
    pub weight_ref: f64,
    /// Current integration weight `w * l_cur / 2`.
    pub weight_cur: f64,
    pub plastic_increment: f64,
    pub dissipation_increment: f64,
}

/// Forces and tangent blocks of one two-node contact facet.
///
/// Local dof order: `[ax, ay, bx, by, plate_height]`. `force` holds the
/// contact force on the cap nodes, `plate_normal_force` the facet's
/// contribution to the total normal contact force (used by the plate
/// equilibrium equation), and `tangent` the derivative rows
/// `d force / d dof` (rows 0..4) and `d plate_normal_force / d dof` (row 4).
#[derive(Debug, Clone)]
pub struct FacetContribution {
    pub force: [f64; 4],
    pub plate_normal_force: f64,
    pub tangent: [[f64; 5]; 5],
    pub evals: [PointEval; 2],
}

const GAUSS: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Evaluates one contact facet against the rigid surface.
///
/// `x_ref`/`x_cur` are reference and current endpoint coordinates,
/// `committed` the per-point history of the facet's two Gauss points.
pub fn evaluate_facet(
    x_ref: &[[f64; 2]; 2],
    x_cur: &[[f64; 2]; 2],
    committed: &[CommittedPoint; 2],
    surf: &RigidSurface,
    params: &ContactParams,
) -> Result<FacetContribution, LawError> {
    let l_ref = length(x_ref);
    let l_cur = length(x_cur);
    debug_assert!(l_ref > 0.0);
    let j_cl = l_cur / l_ref;

    // current unit tangent and the derivative of l_cur w.r.t. local dofs
    let tx = (x_cur[1][0] - x_cur[0][0]) / l_cur;
    let ty = (x_cur[1][1] - x_cur[0][1]) / l_cur;
    let dl = [-tx, -ty, tx, ty];

    let mut out = FacetContribution {
        force: [0.0; 4],
        plate_normal_force: 0.0,
        tangent: [[0.0; 5]; 5],
        evals: [PointEval::zeroed(); 2],
    };

    for (gp, &xi) in GAUSS.iter().enumerate() {
        let shape = [0.5 * (1.0 - xi), 0.5 * (1.0 + xi)];
        let w_ref = l_ref / 2.0; // unit Gauss weight times Jacobian
        let w_cur = l_cur / 2.0;

        let x_gp = [
            shape[0] * x_cur[0][0] + shape[1] * x_cur[1][0],
            shape[0] * x_cur[0][1] + shape[1] * x_cur[1][1],
        ];
        let g_n = x_gp[1] - surf.height;

        // normal traction, reference-area convention
        let t_n = normal_traction_reg(g_n, &params.adhesion, &params.reg);
        let dt_n = normal_traction_reg_derivative(g_n, &params.adhesion, &params.reg);

        // sliding threshold and return map
        let thr = sliding_threshold(g_n, &params.law, j_cl, &params.adhesion, &params.reg)?;
        let delta_slip = (surf.offset - committed[gp].surf_offset) - (x_gp[0] - committed[gp].x);
        let rm = friction_return_map(
            committed[gp].t_t,
            params.eps_t,
            delta_slip,
            thr.value,
            params.threshold_floor(),
        );

        // d t_t / d(local dof) and d t_t / d(plate height)
        let mut dtt = [0.0; 4];
        let mut dtt_plate = 0.0;
        for n in 0..2 {
            // slip depends on the horizontal dofs
            dtt[2 * n] += rm.dt_dslip * (-shape[n]);
            // threshold depends on the gap (vertical dofs) and the stretch
            dtt[2 * n + 1] += rm.dt_dthreshold * thr.d_gap * shape[n];
        }
        for k in 0..4 {
            dtt[k] += rm.dt_dthreshold * thr.d_stretch * dl[k] / l_ref;
        }
        dtt_plate += rm.dt_dthreshold * thr.d_gap * (-1.0);

        // normal contribution: rows ay, by and the plate equation
        for n in 0..2 {
            let row = 2 * n + 1;
            out.force[row] += w_ref * shape[n] * t_n;
            for c in 0..2 {
                out.tangent[row][2 * c + 1] += w_ref * shape[n] * dt_n * shape[c];
            }
            out.tangent[row][4] += w_ref * shape[n] * dt_n * (-1.0);
        }
        out.plate_normal_force += w_ref * t_n;
        for c in 0..2 {
            out.tangent[4][2 * c + 1] += w_ref * dt_n * shape[c];
        }
        out.tangent[4][4] += w_ref * dt_n * (-1.0);

        // tangential contribution: rows ax, bx, in the law's area convention
        let (w_t, geometric) = match thr.area {
            AreaConvention::Reference => (w_ref, false),
            AreaConvention::Current => (w_cur, true),
        };
        for n in 0..2 {
            let row = 2 * n;
            out.force[row] += w_t * shape[n] * rm.t_t;
            for (k, dtk) in dtt.iter().enumerate() {
                out.tangent[row][k] += w_t * shape[n] * dtk;
            }
            out.tangent[row][4] += w_t * shape[n] * dtt_plate;
            if geometric {
                // w_cur varies with the facet length
                for (k, dlk) in dl.iter().enumerate() {
                    out.tangent[row][k] += 0.5 * shape[n] * rm.t_t * dlk;
                }
            }
        }

        out.evals[gp] = PointEval {
            x: x_gp[0],
            g_n,
            j_cl,
            t_n,
            t_t: rm.t_t,
            threshold: thr.value,
            regime: rm.regime,
            weight_ref: w_ref,
            weight_cur: w_cur,
            plastic_increment: rm.plastic_increment,
            dissipation_increment: rm.dissipation_increment,
        };
    }
    Ok(out)
}

impl PointEval {
    fn zeroed() -> Self {
        Self {
            x: 0.0,
            g_n: 0.0,
            j_cl: 1.0,
            t_n: 0.0,
            t_t: 0.0,
            threshold: 0.0,
            regime: Regime::Separated,
            weight_ref: 0.0,
            weight_cur: 0.0,
            plastic_increment: 0.0,
            dissipation_increment: 0.0,
        }
    }
}

fn length(x: &[[f64; 2]; 2]) -> f64 {
    ((x[1][0] - x[0][0]).powi(2) + (x[1][1] - x[0][1]).powi(2)).sqrt()
}

/// Contact area observable: thickness times the summed current lengths of the
/// integration weights whose gap lies inside the law's cutoff.
pub fn contact_area(evals: &[PointEval], cutoff: f64, thickness: f64) -> f64 {
    evals
        .iter()
        .filter(|e| e.g_n <= cutoff)
        .map(|e| e.weight_cur)
        .sum::<f64>()
        * thickness
}

/// Fraction of in-cutoff points that currently stick.
pub fn stick_fraction(evals: &[PointEval], cutoff: f64) -> f64 {
    let active: Vec<&PointEval> = evals.iter().filter(|e| e.g_n <= cutoff).collect();
    if active.is_empty() {
        return 0.0;
    }
    active
        .iter()
        .filter(|e| e.regime == Regime::Stick)
        .count() as f64
        / active.len() as f64
}

/// Total tangential contact force on the body (the measured friction force),
/// each point integrated in its own area convention.
pub fn tangential_force(evals: &[PointEval], law: &FrictionLaw, thickness: f64) -> f64 {
    let current = matches!(law, FrictionLaw::DistanceIndependent(_));
    evals
        .iter()
        .map(|e| e.t_t * if current { e.weight_cur } else { e.weight_ref })
        .sum::<f64>()
        * thickness
}
