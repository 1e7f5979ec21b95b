use proptest::prelude::*;
use zeno_cli::config::{BathKind, Format, OracleTarget, SchemeChoice, Task};
use zeno_cli::presets::Preset;
use zeno_cli::{emit_config, parse_config, RunConfig};

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-300..1e300f64, 1e-6..10.0f64]
}

fn increasing(lo: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..10.0f64, 0..6).prop_map(move |steps| {
        let mut acc = lo;
        steps
            .into_iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    })
}

prop_compose! {
    fn any_config()(
        kind in prop_oneof![Just(BathKind::Lorentzian), Just(BathKind::Ohmic)],
        alpha in prop_oneof![Just(0.0), positive()],
        lambda in positive(),
        omega_c in positive(),
        omega_max in 100.0..1e4f64,
        tols in prop::array::uniform6(1e-16..1e-2f64),
        damping in 0.01..1.0f64,
        ints in prop::array::uniform3(2usize..100_000),
        modes in 2usize..10_000,
        oracle_cut in positive(),
        scheme in prop_oneof![Just(SchemeChoice::Auto), Just(SchemeChoice::Linear), Just(SchemeChoice::Logarithmic)],
        target in prop_oneof![Just(OracleTarget::Dynamics), Just(OracleTarget::Zeno)],
        ode_check in any::<bool>(),
        alphas in prop::collection::vec(0.0..1.0f64, 0..4),
        scales in prop::collection::vec(1e-3..100.0f64, 0..4),
        tau in increasing(0.0),
        t in increasing(-1e-3),
        omega in increasing(0.0),
        task in prop_oneof![Just(Task::Eta), Just(Task::Spectrum), Just(Task::Dynamics), Just(Task::Zeno), Just(Task::Oracle)],
        preset in prop::option::of(prop::sample::select(Preset::ALL.to_vec())),
        path in prop::option::of("[a-z][a-z0-9_/.]{0,20}"),
        json in any::<bool>(),
        jobs in 0usize..64,
    ) -> RunConfig {
        let mut c = RunConfig::default();
        c.task = task;
        c.preset = preset;
        c.bath.kind = kind;
        c.bath.alpha = alpha;
        c.bath.lambda = lambda;
        c.bath.omega_c = omega_c;
        c.numerics.omega_max = omega_max;
        c.numerics.eta_tol = tols[0];
        c.numerics.pv_delta_rel = tols[1];
        c.numerics.pv_rel_tol = tols[2];
        c.numerics.dynamics_rel_tol = tols[3];
        c.numerics.zeno_abs_tol = tols[4];
        c.numerics.zeno_rel_tol = tols[5];
        c.numerics.eta_damping = damping;
        c.numerics.eta_max_iter = ints[0];
        c.numerics.eta_scan_samples = ints[1];
        c.numerics.max_intervals = ints[2];
        c.oracle.modes = modes;
        c.oracle.omega_max = oracle_cut;
        c.oracle.scheme = scheme;
        c.oracle.target = target;
        c.oracle.ode_check = ode_check;
        c.grid.alpha = alphas;
        match kind {
            BathKind::Lorentzian => c.grid.lambda = scales,
            BathKind::Ohmic => c.grid.omega_c = scales,
        }
        c.grid.tau = tau;
        c.grid.t = t.into_iter().map(|x| x.max(0.0)).collect();
        c.grid.t.dedup();
        c.grid.omega = omega;
        c.output.path = path.map(Into::into);
        c.output.format = if json { Format::Json } else { Format::Csv };
        c.jobs = jobs;
        c
    }
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(c in any_config()) {
        prop_assert!(c.validate().is_ok(), "{:?}", c.validate());
        let text = emit_config(&c);
        prop_assert_eq!(parse_config(&text).unwrap(), c);
    }
}
