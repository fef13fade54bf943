//! Quasi-static load program: approach the plate under displacement control,
//! ramp to the target normal force under force control, hold, then slide
//! horizontally at constant normal force. Step increments halve on
//! non-convergence and grow back after a run of smooth steps.

use super::newton::{newton_solve, NewtonReport, SolverConfig};
use super::{FemError, History, LinearSolver, PlateControl, State, System};
use crate::contact::{contact_area, stick_fraction, PointEval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    Approach,
    Ramp,
    Hold,
    Slide,
}

impl PhaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseKind::Approach => "approach",
            PhaseKind::Ramp => "ramp",
            PhaseKind::Hold => "hold",
            PhaseKind::Slide => "slide",
        }
    }
}

/// The full quasi-static loading sequence.
#[derive(Debug, Clone, Copy)]
pub struct LoadProgram {
    /// Target normal force on the plate; negative is compression.
    pub preload: f64,
    /// Initial gap between the body's lowest contact node and the plate.
    pub approach_standoff: f64,
    /// Nominal plate raise per approach step.
    pub approach_step: f64,
    /// Compressive margin past the target at which control switches from
    /// prescribed height to prescribed force.
    pub handoff_margin: f64,
    pub ramp_steps: usize,
    pub hold_steps: usize,
    pub slide_distance: f64,
    pub slide_increment: f64,
}

/// Observables of one converged load step.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    pub step: usize,
    pub phase: PhaseKind,
    pub u_bar: f64,
    /// Normal force on the plate, negative in compression.
    pub f_n: f64,
    /// Tangential (friction) force transmitted through the interface.
    pub f_t: f64,
    pub contact_area: f64,
    pub stick_fraction: f64,
    pub newton_iters: usize,
    pub plate_height: f64,
    /// Cumulative frictional dissipation.
    pub dissipation: f64,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub records: Vec<StepRecord>,
    pub completed: bool,
    pub failure: Option<String>,
}

fn retryable(err: &FemError) -> bool {
    matches!(
        err,
        FemError::NonConvergence(_) | FemError::LinearSolve(_) | FemError::Material(_)
    )
}

struct Driver<'a, F: FnMut(&State, &StepRecord, &[PointEval])> {
    system: &'a System,
    cfg: &'a SolverConfig,
    solver: LinearSolver,
    state: State,
    history: History,
    step: usize,
    dissipation: f64,
    records: Vec<StepRecord>,
    sink: F,
}

impl<'a, F: FnMut(&State, &StepRecord, &[PointEval])> Driver<'a, F> {
    /// One converged solve at the given control: commits history, records
    /// observables, feeds the sink. Returns the normal force on the body.
    fn converged_step(
        &mut self,
        control: PlateControl,
        phase: PhaseKind,
    ) -> Result<f64, FemError> {
        let (report, asm) = newton_solve(
            self.system,
            &mut self.state,
            &self.history,
            control,
            self.cfg,
            &mut self.solver,
        )?;
        self.system.commit(&mut self.history, &self.state, &asm.evals);
        self.record(&report, &asm.evals, asm.f_contact, phase);
        Ok(asm.f_contact[1])
    }

    fn record(
        &mut self,
        report: &NewtonReport,
        evals: &[PointEval],
        f_contact: [f64; 2],
        phase: PhaseKind,
    ) {
        let thk = self.system.thickness;
        let (cutoff, current_area) = match &self.system.contact {
            Some(c) => (
                c.params.law.area_cutoff(&c.params.derived),
                matches!(
                    c.params.law,
                    crate::traction::FrictionLaw::DistanceIndependent(_)
                ),
            ),
            None => (0.0, false),
        };
        let diss_step: f64 = evals
            .iter()
            .map(|e| {
                e.dissipation_increment * if current_area { e.weight_cur } else { e.weight_ref }
            })
            .sum::<f64>()
            * thk;
        self.dissipation += diss_step;
        self.step += 1;
        let rec = StepRecord {
            step: self.step,
            phase,
            u_bar: self.state.plate_offset,
            f_n: -f_contact[1] * thk,
            f_t: f_contact[0] * thk,
            contact_area: contact_area(evals, cutoff, thk),
            stick_fraction: stick_fraction(evals, cutoff),
            newton_iters: report.solves,
            plate_height: self.state.plate_height,
            dissipation: self.dissipation,
        };
        (self.sink)(&self.state, &rec, evals);
        self.records.push(rec);
    }

    /// Adaptive march of a scalar load parameter from `from` to `to`:
    /// halves the increment (down to `nominal / 2^max_halvings`) when a step
    /// fails and doubles back to the nominal after `grow_after` smooth steps.
    /// When even the smallest increment fails the march tries larger jumps
    /// instead: a fold in the equilibrium path has no nearby solution, and
    /// landing just past the critical point leaves the solver in the
    /// slowest part of the post-fold transient, while a bolder jump clears it.
    fn march(
        &mut self,
        from: f64,
        to: f64,
        nominal: f64,
        phase: PhaseKind,
        mut solve_at: impl FnMut(&mut Self, f64, PhaseKind) -> Result<f64, FemError>,
    ) -> Result<(), FemError> {
        debug_assert!(nominal > 0.0);
        let dir = if to >= from { 1.0 } else { -1.0 };
        let total = (to - from).abs();
        if total == 0.0 {
            return Ok(());
        }
        let min_step = nominal / 2f64.powi(self.cfg.max_halvings as i32);
        let mut s = 0.0;
        let mut step = nominal;
        let mut smooth = 0u32;
        // previous converged point for the secant predictor
        let mut prev: Option<(f64, State)> = None;
        while s < total {
            let saved_state = self.state.clone();
            let saved_history = self.history.clone();
            let mut attempt = step;
            let mut growing = false;
            let mut extrapolate = true;
            loop {
                let trial = (s + attempt).min(total);
                // secant predictor: start Newton from the last increment
                // extrapolated to the new load parameter
                if extrapolate {
                    if let Some((s_prev, state_prev)) = &prev {
                        let span = s - s_prev;
                        if span > 0.0 {
                            let factor = (trial - s) / span;
                            for (u, u_prev) in
                                self.state.u.iter_mut().zip(&state_prev.u)
                            {
                                *u += factor * (*u - u_prev);
                            }
                            self.state.plate_height += factor
                                * (self.state.plate_height - state_prev.plate_height);
                        }
                    }
                }
                match solve_at(self, from + dir * trial, phase) {
                    Ok(_) => {
                        prev = Some((s, saved_state));
                        s = trial;
                        // stay cautious after a jump, otherwise grow back
                        if growing || attempt < step {
                            step = (attempt).clamp(min_step, nominal);
                            smooth = 0;
                        } else {
                            smooth += 1;
                            if smooth >= self.cfg.grow_after && step < nominal {
                                step = (2.0 * step).min(nominal);
                                smooth = 0;
                            }
                        }
                        break;
                    }
                    Err(e) if retryable(&e) => {
                        self.state = saved_state.clone();
                        self.history = saved_history.clone();
                        smooth = 0;
                        if extrapolate {
                            // retry this increment from the unextrapolated state
                            extrapolate = false;
                            continue;
                        }
                        if !growing {
                            attempt *= 0.5;
                            if attempt < min_step {
                                // halvings exhausted: try jumping past the fold
                                growing = true;
                                attempt = 2.0 * nominal;
                            }
                        } else {
                            attempt *= 2.0;
                            if attempt > 16.0 * nominal {
                                return Err(FemError::NonConvergence(format!(
                                    "{} phase: no increment in [{min_step:.3e}, {:.3e}] converged: {e}",
                                    phase.as_str(),
                                    8.0 * nominal
                                )));
                            }
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }
}

/// Runs the full program. The sink sees every converged step (after history
/// commit) together with the per-point contact evaluations. On failure the
/// last converged state is kept and reported; records collected so far are
/// returned either way.
pub fn run_load_program(
    system: &System,
    program: &LoadProgram,
    cfg: &SolverConfig,
    sink: impl FnMut(&State, &StepRecord, &[PointEval]),
) -> (State, History, RunOutcome) {
    let contact_nodes: Vec<usize> = system
        .contact
        .iter()
        .flat_map(|c| c.facets.iter().flatten().copied())
        .collect();
    let apex_y = contact_nodes
        .iter()
        .map(|&n| system.mesh.coords[n][1])
        .fold(f64::INFINITY, f64::min);
    let body_height = {
        let ys: Vec<f64> = system.mesh.coords.iter().map(|c| c[1]).collect();
        ys.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
            - ys.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    };

    let mut driver = Driver {
        system,
        cfg,
        solver: LinearSolver::new(),
        state: State::zeros(system.mesh.n_nodes(), apex_y - program.approach_standoff),
        history: system.initial_history(),
        step: 0,
        dissipation: 0.0,
        records: Vec::new(),
        sink,
    };
    let thk = system.thickness;

    let result = (|| -> Result<(), FemError> {
        // approach under displacement control until firmly loaded past the
        // handoff force
        let handoff = (-program.preload).max(0.0) + program.handoff_margin;
        let start_height = driver.state.plate_height;
        let travel_max = program.approach_standoff + 0.9 * body_height;
        let mut handoff_force = None;
        let mut travel = 0.0;
        while handoff_force.is_none() {
            if travel >= travel_max {
                return Err(FemError::NonConvergence(
                    "approach travel exhausted before reaching the handoff force".into(),
                ));
            }
            let next = (travel + program.approach_step).min(travel_max);
            driver.march(
                travel,
                next,
                program.approach_step,
                PhaseKind::Approach,
                |d, h, phase| {
                    let f_y = d.converged_step(PlateControl::Height(start_height + h), phase)?;
                    Ok(f_y)
                },
            )?;
            travel = next;
            let f_y = -driver.records.last().expect("approach recorded").f_n / thk;
            if f_y * thk >= handoff {
                handoff_force = Some(f_y);
            }
        }

        // ramp the normal force to the preload under force control
        let f0 = -handoff_force.expect("handoff reached") * thk;
        let ramp_nominal = 1.0 / (program.ramp_steps.max(1) as f64);
        driver.march(0.0, 1.0, ramp_nominal, PhaseKind::Ramp, |d, s, phase| {
            let target = f0 + (program.preload - f0) * s;
            d.converged_step(PlateControl::Force(target / thk), phase)
        })?;

        // hold
        let target = PlateControl::Force(program.preload / thk);
        for _ in 0..program.hold_steps {
            driver.converged_step(target, PhaseKind::Hold)?;
        }

        // slide at constant normal force; the distance may be negative
        if program.slide_distance != 0.0 {
            driver.march(
                0.0,
                program.slide_distance,
                program.slide_increment,
                PhaseKind::Slide,
                |d, u, phase| {
                    d.state.plate_offset = u;
                    d.converged_step(target, phase)
                },
            )?;
        }
        Ok(())
    })();

    let outcome = RunOutcome {
        completed: result.is_ok(),
        failure: result.err().map(|e| e.to_string()),
        records: driver.records,
    };
    (driver.state, driver.history, outcome)
}
