//! Steady and transient solution of the linearized R13 system in a slab
//! between two parallel walls.
//!
//! Fields depend on the wall-normal coordinate `x ∈ [0, 1]` only. The
//! weak forms are evaluated in their three-dimensional definitions through
//! the slab gradient operators, the wall integrals become point evaluations
//! in the outward wall frames, and the resulting saddle-point systems are
//! solved by a sparse direct factorization.
//!
//! - [`mesh`]: geometry, wall data, spaces and dof layouts;
//! - [`forms`]: pointwise integrands of every form, load and monitor;
//! - [`assembly`]: form matrices and composed operators;
//! - [`steady`]: non-Maxwell and Maxwell steady solves with the energy
//!   identity check;
//! - [`transient`]: θ-scheme time stepping with monitor traces;
//! - [`probes`]: coercivity and inf-sup spectra;
//! - [`convergence`]: self-convergence studies;
//! - [`state`]: discrete states, monitors and profile output.

pub mod assembly;
pub mod convergence;
pub mod forms;
pub mod mesh;
pub mod probes;
pub mod state;
pub mod steady;
pub mod transient;

#[cfg(test)]
mod tests;

pub use assembly::{assemble_blocks, Assembly, LoadVectors};
pub use convergence::{convergence_study, ConvergenceLevel, ConvergenceReport};
pub use forms::{FormKind, PointFields, WallCoefficients, WallTrace};
pub use mesh::{Comp, DofLayout, Formulation, Group, SlabMesh, SpaceKind, WallData};
pub use probes::{coercivity_probe, inf_sup_probe, CoercivityReport, InfSupReport};
pub use state::{monitors, profile, profile_csv, DiscreteState, ProfileRow, SolveMonitors};
pub use steady::{solve_steady, solve_steady_maxwell, solve_steady_nonmaxwell, EnergyIdentity, SteadySolution};
pub use transient::{random_state, run_transient, step_transient, Scheme, TransientRun, TransientStepper};
