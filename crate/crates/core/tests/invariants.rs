use hubbath_core::bath::{bath_prep_state, step_collision_circuit};
use hubbath_core::hubbard::trotter_step_circuit;
use hubbath_core::{
    circuit_unitary, run_experiment, BathSpec, BathState, BathTopology, Coupling, DensityMatrix,
    ExperimentConfig, InitialState, ModelSpec, NoiseModel, PopulationTrace, ReadoutFlip,
    ResetMode,
};
use proptest::prelude::*;

fn exact_config(model: ModelSpec, init: InitialState, bath: BathSpec) -> ExperimentConfig {
    ExperimentConfig::new(model)
        .with_init(init)
        .with_bath(bath)
        .with_shots(0)
}

/// Trotter unitary, then the bath attached as explicit qubits and traced out.
fn dilation_oracle(cfg: &ExperimentConfig) -> Vec<Vec<f64>> {
    let k = cfg.model.num_qubits();
    let u = circuit_unitary(&trotter_step_circuit(&cfg.model).unwrap()).unwrap();
    let collision = step_collision_circuit(&cfg.bath, k, cfg.bath.g_dt).unwrap();
    let v = circuit_unitary(&collision).unwrap();
    let ancillas = collision.num_qubits() - k;
    let prep = bath_prep_state(&cfg.bath).unwrap();
    let bath_qubits: Vec<usize> = (k..k + ancillas).collect();

    let mut rho = cfg.initial_density().unwrap();
    let mut rows = vec![rho.populations()];
    for _ in 0..cfg.model.steps {
        rho = DensityMatrix::new(u.conjugate(rho.as_operator())).unwrap();
        let mut joint = rho.clone();
        for _ in 0..ancillas {
            joint = joint.tensor(&prep).unwrap();
        }
        let joint = DensityMatrix::new(v.conjugate(joint.as_operator())).unwrap();
        rho = joint.partial_trace(&bath_qubits).unwrap();
        rows.push(rho.populations());
    }
    rows
}

fn max_row_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn figure_configs() -> Vec<ExperimentConfig> {
    let fig4 = ModelSpec::one_electron(0.2, 0.1, 25);
    let fig5 = ModelSpec::one_electron(0.0, 0.1, 25);
    let fig6 = ModelSpec::two_electron(0.1, 0.4, 30);
    vec![
        exact_config(fig4.clone(), InitialState::Site2, BathSpec::new(Coupling::Xy, 0.5)),
        exact_config(fig5, InitialState::Site2, BathSpec::new(Coupling::Zz, 0.5)),
        exact_config(fig6.clone(), InitialState::DoubleSite2, BathSpec::new(Coupling::Xy, 0.5)),
        exact_config(
            fig6,
            InitialState::DoubleSite2,
            BathSpec::new(Coupling::Zz, 0.5).with_topology(BathTopology::Common),
        ),
        exact_config(
            fig4,
            InitialState::Site1,
            BathSpec::new(Coupling::Zz, 0.3).with_state(BathState::Thermal { beta_omega: 0.4 }),
        ),
    ]
}

#[test]
fn engine_matches_trotter_then_dilated_bath() {
    for cfg in figure_configs() {
        let engine = run_experiment(&cfg).unwrap();
        let oracle = dilation_oracle(&cfg);
        let diff = max_row_diff(engine.rows(), &oracle);
        assert!(diff <= 1e-10, "{:?}: {diff:e}", cfg.bath);
    }
}

#[test]
fn fresh_and_reset_ancillas_agree() {
    for cfg in figure_configs() {
        let mut fresh = cfg.clone();
        fresh.bath = fresh.bath.with_mode(ResetMode::Fresh);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&fresh).unwrap();
        assert!(max_row_diff(a.rows(), b.rows()) <= 1e-12);
    }
}

#[test]
fn zz_bath_mixes_within_six_dephasing_lengths() {
    let g = 0.5f64;
    let steps = (6.0 / -(g.cos().ln())).ceil() as usize;
    let cfg = exact_config(
        ModelSpec::one_electron(0.0, 0.1, steps),
        InitialState::Site2,
        BathSpec::new(Coupling::Zz, g),
    );
    let trace = run_experiment(&cfg).unwrap();
    let last = trace.rows().last().unwrap();
    let dev = last.iter().map(|p| (p - 0.5).abs()).fold(0.0, f64::max);
    assert!(dev <= 0.01, "populations {last:?} after {steps} steps");
}

#[test]
fn sampled_run_is_reproducible_and_seed_dependent() {
    let cfg = ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 12))
        .with_init(InitialState::DoubleSite2)
        .with_bath(BathSpec::new(Coupling::Xy, 0.5))
        .with_seed(3);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    let c = run_experiment(&cfg.clone().with_seed(4)).unwrap();
    assert_eq!(a.counts(), b.counts());
    assert_ne!(a.counts(), c.counts());
}

fn physical(trace: &PopulationTrace) -> bool {
    trace.rows().iter().all(|r| {
        (r.iter().sum::<f64>() - 1.0).abs() <= 1e-9 && r.iter().all(|&p| p >= -1e-12)
    })
}

fn coupling() -> impl Strategy<Value = Coupling> {
    prop_oneof![Just(Coupling::None), Just(Coupling::Zz), Just(Coupling::Xy)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_run_is_a_distribution(
        two in any::<bool>(),
        eps in -0.5f64..0.5,
        t in 0.0f64..0.5,
        u in 0.0f64..1.0,
        c in coupling(),
        g in 0.0f64..3.0,
        common in any::<bool>(),
        p in 0.0f64..0.1,
        gamma in 0.0f64..0.1,
        shots in prop_oneof![Just(0u64), Just(256u64)],
        seed in 0u64..1000,
    ) {
        let (model, init) = if two {
            (ModelSpec::two_electron(t, u, 6), InitialState::DoubleSite2)
        } else {
            (ModelSpec::one_electron(eps, t, 6), InitialState::Site2)
        };
        let topology = if common { BathTopology::Common } else { BathTopology::PerQubit };
        let bath = if c == Coupling::None {
            BathSpec::default()
        } else {
            BathSpec::new(c, g).with_topology(topology)
        };
        let cfg = ExperimentConfig::new(model)
            .with_init(init)
            .with_bath(bath)
            .with_noise(NoiseModel {
                gate_depolarizing: p,
                amplitude_decay_per_step: gamma,
                readout: vec![ReadoutFlip::new(0.02, 0.05)],
                ..NoiseModel::default()
            })
            .with_shots(shots)
            .with_seed(seed);
        let trace = run_experiment(&cfg).unwrap();
        prop_assert_eq!(trace.rows().len(), 7);
        prop_assert!(physical(&trace));
    }
}
