//! θ-scheme time stepping of the homogeneous slab problem.
//!
//! With the weak operator `L` (`UᵀLU = 𝒜₁(S,S) ≥ 0`) and mass matrix `M`,
//! one step solves `(M/Δt + ϑL) Uⁿ⁺¹ = (M/Δt − (1−ϑ)L) Uⁿ`. The pressure
//! zero-mean constraint of the steady problems is not imposed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::linalg::{SparseLu, TripletBuilder};

use super::assembly::Assembly;
use super::mesh::{Formulation, WallData};
use super::state::{monitors, DiscreteState, SolveMonitors};

/// Relative residual required of every transient linear solve.
pub const TRANSIENT_RESIDUAL_TOL: f64 = 1e-8;

/// Time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// `ϑ = 1`.
    ImplicitEuler,
    /// `ϑ = ½`.
    CrankNicolson,
}

impl Scheme {
    /// Implicitness parameter `ϑ`.
    pub fn theta(&self) -> f64 {
        match self {
            Scheme::ImplicitEuler => 1.0,
            Scheme::CrankNicolson => 0.5,
        }
    }
}

/// Factorized stepper for a fixed `Δt`.
pub struct TransientStepper<'a> {
    asm: &'a Assembly,
    lu: SparseLu,
    explicit: TripletBuilder,
    dt: f64,
    scheme: Scheme,
}

impl<'a> TransientStepper<'a> {
    /// Builds and factorizes the step matrices.
    pub fn new(asm: &'a Assembly, dt: f64, scheme: Scheme) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(R13Error::Config(format!("time step must be positive, got {dt}")));
        }
        let l = asm.transient_operator()?;
        let th = scheme.theta();
        let n = asm.n_dofs();
        let mut lhs = TripletBuilder::new(n, n);
        lhs.extend_scaled(&asm.mass, 1.0 / dt);
        lhs.extend_scaled(&l, th);
        let mut explicit = TripletBuilder::new(n, n);
        explicit.extend_scaled(&asm.mass, 1.0 / dt);
        explicit.extend_scaled(&l, -(1.0 - th));
        let lu = SparseLu::new(&lhs)?;
        Ok(TransientStepper { asm, lu, explicit, dt, scheme })
    }

    /// Time step.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Scheme.
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Advances one step; returns the new state and the relative residual.
    pub fn step(&self, state: &DiscreteState) -> Result<(DiscreteState, f64)> {
        let rhs = self.explicit.matvec(&state.coeffs);
        if rhs.iter().all(|v| *v == 0.0) {
            return Ok((DiscreteState::zeros(self.asm.layout.clone()), 0.0));
        }
        let out = self.lu.solve(&rhs, TRANSIENT_RESIDUAL_TOL)?;
        Ok((DiscreteState { layout: self.asm.layout.clone(), coeffs: out.x }, out.relative_residual))
    }
}

/// One step from `state` (factorizes on every call; use
/// [`TransientStepper`] for runs).
pub fn step_transient(
    state: &DiscreteState,
    dt: f64,
    scheme: Scheme,
    asm: &Assembly,
) -> Result<(DiscreteState, SolveMonitors)> {
    let stepper = TransientStepper::new(asm, dt, scheme)?;
    let (next, res) = stepper.step(state)?;
    let mon = monitors(&next, asm, &WallData::ZERO, res);
    Ok((next, mon))
}

/// Monitor trace of a run; entry 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientRun {
    /// Time step.
    pub dt: f64,
    /// Scheme.
    pub scheme: Scheme,
    /// Monitors per time level.
    pub monitors: Vec<SolveMonitors>,
    /// Final state.
    pub final_state: DiscreteState,
}

impl TransientRun {
    /// Largest energy increase between consecutive levels (negative when
    /// strictly decreasing).
    pub fn max_energy_increase(&self) -> f64 {
        self.monitors
            .windows(2)
            .map(|w| w[1].energy - w[0].energy)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|∫ρⁿ − ∫ρ⁰|`.
    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.monitors[0].mass;
        self.monitors.iter().map(|m| (m.mass - m0).abs()).fold(0.0, f64::max)
    }

    /// Largest `𝒲₁` over all levels.
    pub fn max_w1(&self) -> f64 {
        self.monitors.iter().map(|m| m.w1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest `I_bdry` over all levels.
    pub fn min_i_bdry(&self) -> f64 {
        self.monitors.iter().map(|m| m.i_bdry).fold(f64::INFINITY, f64::min)
    }

    /// Monitor table as CSV text.
    pub fn monitors_csv(&self) -> String {
        let mut out = String::from("step,time,energy,w1,i_bdry,i_bdry_raw,entropy,mass,residual\n");
        for (i, m) in self.monitors.iter().enumerate() {
            out.push_str(&format!(
                "{i},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                i as f64 * self.dt,
                m.energy,
                m.w1,
                m.i_bdry,
                m.i_bdry_raw,
                m.entropy,
                m.mass,
                m.residual
            ));
        }
        out
    }
}

/// Runs `n_steps` steps from `initial` with homogeneous wall data.
pub fn run_transient(
    asm: &Assembly,
    initial: &DiscreteState,
    dt: f64,
    scheme: Scheme,
    n_steps: usize,
) -> Result<TransientRun> {
    if initial.layout != asm.layout {
        return Err(R13Error::InvalidArgument("initial state does not match the assembly layout".into()));
    }
    let stepper = TransientStepper::new(asm, dt, scheme)?;
    let mut mons = vec![monitors(initial, asm, &WallData::ZERO, 0.0)];
    let mut state = initial.clone();
    for _ in 0..n_steps {
        let (next, res) = stepper.step(&state)?;
        mons.push(monitors(&next, asm, &WallData::ZERO, res));
        state = next;
    }
    Ok(TransientRun { dt, scheme, monitors: mons, final_state: state })
}

/// Random initial state: every dof uniform in `[−1, 1]`.
pub fn random_state<R: Rng + ?Sized>(asm: &Assembly, rng: &mut R) -> Result<DiscreteState> {
    if asm.layout.formulation != Formulation::Transient {
        return Err(R13Error::InvalidArgument("random initial states need the transient layout".into()));
    }
    let coeffs = (0..asm.n_dofs()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Ok(DiscreteState { layout: asm.layout.clone(), coeffs })
}
