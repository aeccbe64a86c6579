//! End-to-end checks of the slab solvers on the bundled models.

use crate::catalog::bundled_model;
use crate::onsager_coefficients::boundary_coefficients;
use crate::slab::{
    assemble_blocks, coercivity_probe, convergence_study, inf_sup_probe, random_state, run_transient,
    solve_steady, Comp, Formulation, Scheme, SlabMesh, WallData,
};
use rand::SeedableRng;

fn setup(name: &str) -> (crate::model_params::MolecularModel, crate::onsager_coefficients::BoundaryCoeffs) {
    let m = bundled_model(name).unwrap();
    let c = boundary_coefficients(&m).unwrap();
    (m, c)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

#[test]
fn equilibrium_is_reproduced_exactly() {
    for name in ["eta7", "eta_inf", "maxwell"] {
        let (m, c) = setup(name);
        let wall = WallData::uniform_temperature(0.3);
        let (_, sol) = solve_steady(SlabMesh::new(6, 2).unwrap(), &m, &c, 0.1, &wall).unwrap();
        let s = &sol.state;
        let theta = s.component(Comp::Theta).unwrap();
        assert!(theta.iter().all(|t| (t - 0.3).abs() < 1e-10), "{name}: theta {theta:?}");
        for comp in [Comp::U(0), Comp::U(1), Comp::U(2), Comp::S(0), Comp::S(1), Comp::S(2), Comp::P] {
            let v = s.component(comp).unwrap();
            assert!(max_abs(v) < 1e-10, "{name}: {} = {}", comp.name(), max_abs(v));
        }
        for i in 0..5 {
            assert!(max_abs(s.component(Comp::Sigma(i)).unwrap()) < 1e-10, "{name}: sigma{i}");
        }
    }
}

#[test]
fn energy_identity_and_zero_mean_pressure() {
    for name in ["eta7", "eta10", "eta17", "eta_inf", "maxwell"] {
        let (m, c) = setup(name);
        for wall in [WallData::couette(1.0), WallData::fourier(-0.5, 0.5), WallData::uniform_temperature(0.2)] {
            let (_, sol) = solve_steady(SlabMesh::new(8, 2).unwrap(), &m, &c, 0.1, &wall).unwrap();
            let id = sol.identity;
            let e = sol.monitors.energy;
            assert!(id.defect <= 1e-8 * (1.0 + e), "{name}: defect {:e}", id.defect);
            let mon = sol.monitors;
            assert!(mon.pressure_mean.abs() <= 1e-12 * mon.pressure_norm.max(1e-300) + 1e-300, "{name}: {:e} vs {:e}", mon.pressure_mean, mon.pressure_norm);
        }
    }
}

#[test]
fn shear_and_heat_decouple() {
    let (m, c) = setup("eta10");
    let (_, sol) = solve_steady(SlabMesh::new(8, 2).unwrap(), &m, &c, 0.1, &WallData::couette(1.0)).unwrap();
    let s = &sol.state;
    let mut worst = 0.0f64;
    for comp in [Comp::Theta, Comp::S(0), Comp::Sigma(0), Comp::Sigma(3), Comp::P] {
        worst = worst.max(max_abs(s.component(comp).unwrap()));
    }
    assert!(worst <= 1e-10);
    assert!(max_abs(s.component(Comp::U(1)).unwrap()) > 1e-3);
}

#[test]
fn couette_matches_refined_reference() {
    let (m, c) = setup("eta10");
    let wall = WallData::couette(1.0);
    let (_, coarse) = solve_steady(SlabMesh::new(8, 2).unwrap(), &m, &c, 0.1, &wall).unwrap();
    let (_, fine) = solve_steady(SlabMesh::new(32, 2).unwrap(), &m, &c, 0.1, &wall).unwrap();
    let d = crate::slab::convergence::l2_difference(&coarse.state, &fine.state);
    let zero = crate::slab::DiscreteState::zeros(fine.state.layout.clone());
    let n = crate::slab::convergence::l2_difference(&fine.state, &zero);
    let rel = d.iter().map(|v| v * v).sum::<f64>().sqrt() / n.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(rel < 0.02);
}

#[test]
fn transient_energy_decay() {
    for (name, scheme, slack) in [("eta7", Scheme::ImplicitEuler, 1e-12), ("eta_inf", Scheme::CrankNicolson, 1e-10)] {
        let (m, c) = setup(name);
        let asm = assemble_blocks(SlabMesh::new(8, 2).unwrap(), Formulation::Transient, &m, &c, 0.1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let u0 = random_state(&asm, &mut rng).unwrap();
        let run = run_transient(&asm, &u0, 1e-2, scheme, 200).unwrap();
        let e0 = run.monitors[0].energy;
        assert!(run.max_energy_increase() <= slack * e0);
        assert!(run.max_w1() <= 1e-12);
        assert!(run.min_i_bdry() >= -1e-12 * e0);
        assert!(run.max_mass_drift() <= 1e-10);
    }
}

#[test]
fn coercivity_contrast() {
    let (m7, c7) = setup("eta7");
    let asm = assemble_blocks(SlabMesh::new(4, 2).unwrap(), Formulation::NonMaxwell, &m7, &c7, 0.1).unwrap();
    let r = coercivity_probe(&asm, 5).unwrap();
    assert!(r.lambda_min > 0.0);
    let (mm, cm) = setup("maxwell");
    let asm = assemble_blocks(SlabMesh::new(4, 2).unwrap(), Formulation::NonMaxwell, &mm, &cm, 0.1).unwrap();
    let r = coercivity_probe(&asm, 5).unwrap();
    assert_eq!(r.bubble_value, 0.0);
    let inf = inf_sup_probe(&asm).unwrap();
    assert!(inf.beta > 0.0);
}

#[test]
fn couette_ladder_converges() {
    let (m, c) = setup("eta10");
    let rep = convergence_study(&m, &c, 0.1, &WallData::couette(1.0), 2, &[16, 32, 64, 128]).unwrap();
    assert!(rep.monotone());
    assert!(rep.min_ratio().unwrap() >= 1.5);
}

#[test]
fn heat_conduction_dissipation_of_a_sine_profile() {
    let (m, c) = setup("eta10");
    let kn = 0.1;
    let asm = assemble_blocks(SlabMesh::new(64, 2).unwrap(), Formulation::Transient, &m, &c, kn).unwrap();
    let l = &asm.layout;
    let fi = l.field_of(Comp::Theta).unwrap();
    let f = l.fields[fi];
    let mut state = crate::slab::DiscreteState::zeros(l.clone());
    for dof in f.offset..f.offset + f.n {
        state.coeffs[dof] = (std::f64::consts::PI * l.dof_position(fi, dof)).sin();
    }
    let mon = crate::slab::monitors(&state, &asm, &WallData::ZERO, 0.0);
    let exact = -0.75 * m.k[1] * kn * std::f64::consts::PI.powi(2);
    assert!((mon.w1 - exact).abs() <= 1e-4 * exact.abs(), "{} vs {exact}", mon.w1);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn wall() -> impl Strategy<Value = WallData> {
        (prop::array::uniform2(-1.0..1.0f64), prop::array::uniform4(-1.0..1.0f64))
            .prop_map(|(theta, u)| WallData { theta, u_t: [[u[0], u[1]], [u[2], u[3]]] })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn energy_identity_holds_for_arbitrary_wall_data(
            w in wall(),
            kn in 0.02..1.0f64,
            which in 0..5usize,
        ) {
            let name = ["eta7", "eta10", "eta17", "eta_inf", "maxwell"][which];
            let (m, c) = setup(name);
            let (_, sol) = solve_steady(SlabMesh::new(6, 2).unwrap(), &m, &c, kn, &w).unwrap();
            let e = sol.monitors.energy;
            prop_assert!(sol.identity.defect <= 1e-8 * (1.0 + e), "{}: defect {:e}", name, sol.identity.defect);
        }
    }
}
