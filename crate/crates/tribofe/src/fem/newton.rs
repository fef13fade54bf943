//! Quasi-static Newton solver with backtracking line search and
//! pseudo-transient continuation.
//!
//! Adhesive snap-in and snap-out are genuine fold instabilities: near the
//! fold no equilibrium exists close to the previous state and a monotone
//! line search gets trapped at a local minimum of the residual norm. When
//! that happens the solver adds an adaptive diagonal shift to the tangent
//! (equivalent to integrating the damped gradient flow) and crawls across
//! the barrier; the shift decays to zero again as the residual drops, so the
//! converged states are exact equilibria.

use super::{inf_norm, Assembled, FemError, History, LinearSolver, PlateControl, State, System};
use crate::material::MaterialError;

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Relative residual tolerance against the internal/contact force scale.
    pub rel_tol: f64,
    pub max_iterations: usize,
    pub max_backtracks: u32,
    /// Load-step halvings available to the outer controller.
    pub max_halvings: u32,
    /// Smooth steps before the controller doubles the increment again.
    pub grow_after: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            // snap-in traverses on fine meshes take several hundred damped
            // iterations; plain steps use only a handful
            max_iterations: 1000,
            max_backtracks: 8,
            max_halvings: 8,
            grow_after: 3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonReport {
    /// Linear solves performed; zero when the initial residual already
    /// satisfies the tolerance.
    pub solves: usize,
    pub residual: f64,
    pub scale: f64,
}

fn force_scale(asm: &Assembled, control: PlateControl) -> f64 {
    let target = match control {
        PlateControl::Force(t) => t.abs(),
        PlateControl::Height(_) => 0.0,
    };
    asm.f_int_norm.max(asm.f_contact_norm).max(target)
}

/// Positions of the diagonal entries in the CSC storage, and the mean
/// magnitude of the unconstrained diagonal as the damping reference.
fn diagonal_info(asm: &Assembled, free: &[bool]) -> (Vec<Option<usize>>, f64) {
    let n = asm.residual.len();
    let (sym, vals) = asm.matrix.parts();
    let mut idx = vec![None; n];
    let mut d_ref = 0.0;
    let mut count = 0usize;
    for col in 0..n {
        for k in sym.col_ptr()[col]..sym.col_ptr()[col + 1] {
            if sym.row_idx()[k] == col {
                idx[col] = Some(k);
                if free[col] {
                    d_ref += vals[k].abs();
                    count += 1;
                }
            }
        }
    }
    (idx, if count > 0 { d_ref / count as f64 } else { 1.0 })
}

/// Solves the nonlinear system at fixed load parameters. On success the
/// converged `Assembled` is returned alongside the report so callers can
/// commit history and extract observables without re-assembling.
pub fn newton_solve(
    system: &System,
    state: &mut State,
    history: &History,
    control: PlateControl,
    cfg: &SolverConfig,
    solver: &mut LinearSolver,
) -> Result<(NewtonReport, Assembled), FemError> {
    system.apply_dirichlet(state, control);
    let mut asm = system.assemble(state, history, control)?;
    let mut r_norm = inf_norm(&asm.residual);

    let n = asm.residual.len();
    let mut free = vec![true; n];
    for &(d, _) in &system.dirichlet {
        free[d] = false;
    }
    if matches!(control, PlateControl::Height(_)) {
        free[system.plate_dof()] = false;
    }
    let (diag_idx, _) = diagonal_info(&asm, &free);

    let mut ptc = 0.0f64;
    // Residual norm when the damped flow was engaged. The flow stays on
    // (with a damping floor) until the residual undercuts a fraction of this
    // value: switching back to plain Newton too early lets it retreat to the
    // pre-fold ghost and orbit.
    let mut flow_enter: Option<f64> = None;
    let mut solves = 0usize;
    let mut best_seen = r_norm;
    let mut since_best = 0usize;

    while solves < cfg.max_iterations {
        let scale = force_scale(&asm, control);
        if r_norm <= cfg.rel_tol * scale {
            return Ok((
                NewtonReport {
                    solves,
                    residual: r_norm,
                    scale,
                },
                asm,
            ));
        }

        // damped tangent: K + ptc * d_ref on the free diagonal
        let matrix = if ptc > 0.0 {
            let (_, d_ref) = diagonal_info(&asm, &free);
            let mut damped = asm.matrix.clone();
            let vals = damped.val_mut();
            for (col, slot) in diag_idx.iter().enumerate() {
                if free[col] {
                    if let Some(k) = slot {
                        vals[*k] += ptc * d_ref;
                    }
                }
            }
            damped
        } else {
            asm.matrix.clone()
        };

        let rhs: Vec<f64> = asm.residual.iter().map(|v| -v).collect();
        let delta = solver.solve(&matrix, &rhs)?;
        solves += 1;

        let try_step = |alpha: f64| -> Result<Option<(State, Assembled, f64)>, FemError> {
            let mut trial = state.clone();
            for (t, d) in trial.u.iter_mut().zip(&delta) {
                *t += alpha * d;
            }
            if !matches!(control, PlateControl::Height(_)) {
                trial.plate_height += alpha * delta[system.plate_dof()];
            }
            match system.assemble(&trial, history, control) {
                Ok(trial_asm) => {
                    let trial_norm = inf_norm(&trial_asm.residual);
                    Ok(Some((trial, trial_asm, trial_norm)))
                }
                // element inversion counts as an unusable trial
                Err(FemError::Material(MaterialError::ElementInversion(_))) => Ok(None),
                Err(e) => Err(e),
            }
        };

        if ptc == 0.0 {
            // plain Newton with a backtracking line search on the residual
            let mut alpha = 1.0f64;
            let mut best: Option<(State, Assembled, f64)> = None;
            for _ in 0..=cfg.max_backtracks {
                if let Some((trial, trial_asm, trial_norm)) = try_step(alpha)? {
                    let sufficient = trial_norm <= r_norm * (1.0 - 1e-4 * alpha);
                    if best.as_ref().is_none_or(|(_, _, nrm)| trial_norm < *nrm) {
                        best = Some((trial, trial_asm, trial_norm));
                    }
                    if sufficient {
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match best {
                Some((trial, trial_asm, trial_norm)) if trial_norm < r_norm => {
                    *state = trial;
                    asm = trial_asm;
                    r_norm = trial_norm;
                }
                // no progress possible: switch to the damped flow
                _ => {
                    ptc = 2.0;
                    flow_enter = Some(r_norm);
                }
            }
        } else {
            // pseudo-transient step: take the full damped increment. The
            // residual may grow transiently while crossing a fold; bounded
            // growth is accepted and the damping adapts to the ratio.
            let mut alpha = 1.0f64;
            let mut taken = None;
            for _ in 0..=cfg.max_backtracks {
                if let Some((trial, trial_asm, trial_norm)) = try_step(alpha)? {
                    if trial_norm <= 3.0 * r_norm {
                        taken = Some((trial, trial_asm, trial_norm));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match taken {
                Some((trial, trial_asm, trial_norm)) => {
                    let ratio = trial_norm / r_norm.max(f64::MIN_POSITIVE);
                    *state = trial;
                    asm = trial_asm;
                    r_norm = trial_norm;
                    // accelerate while the flow is tame, damp harder when the
                    // residual climbs fast
                    ptc *= (0.8 * ratio * ratio).clamp(0.25, 2.0);
                    let escaped = flow_enter.is_none_or(|r0| r_norm < 0.3 * r0);
                    if escaped {
                        if ptc < 0.05 {
                            ptc = 0.0;
                            flow_enter = None;
                        }
                    } else {
                        // still traversing: keep a damping floor
                        ptc = ptc.max(0.02);
                    }
                }
                None => {
                    ptc = (ptc * 8.0).min(1e9);
                }
            }
        }

        if std::env::var_os("TRIBOFE_NEWTON_TRACE").is_some() {
            let ming = asm
                .evals
                .iter()
                .map(|e| e.g_n)
                .fold(f64::INFINITY, f64::min);
            let stick = asm
                .evals
                .iter()
                .filter(|e| matches!(e.regime, crate::contact::Regime::Stick))
                .count();
            let slide = asm
                .evals
                .iter()
                .filter(|e| matches!(e.regime, crate::contact::Regime::Slide))
                .count();
            eprintln!(
                "    it {solves}: r={r_norm:.4e} ptc={ptc:.2e} min_g={ming:.4} fy={:.5} stick={stick} slide={slide}",
                asm.f_contact[1]
            );
        }
        // A pseudo-transient traverse legitimately spends long stretches
        // without lowering the residual, so the stall cutoff only counts
        // consecutive undamped iterations; the iteration budget is the hard
        // bound either way.
        if ptc > 0.0 || r_norm < 0.99 * best_seen {
            best_seen = best_seen.min(r_norm);
            since_best = 0;
        } else {
            since_best += 1;
        }
        if ptc == 0.0 && since_best > 25 {
            return Err(FemError::NonConvergence(format!(
                "stalled at residual {r_norm:.3e} (best {best_seen:.3e})"
            )));
        }
    }

    Err(FemError::NonConvergence(format!(
        "residual {r_norm:.3e} after {} iterations",
        cfg.max_iterations
    )))
}
