use zeno_core::bath::BathSpec;
use zeno_core::renorm::solve_eta;
use zeno_core::zeno::{default_taus, gamma_0, gamma_rwa_tau, gamma_tau, zeno_scan, Regime};
use zeno_core::Numerics;

#[test]
fn counter_rotating_terms_suppress_ohmic_decay_at_short_intervals() {
    let n = Numerics::default();
    for alpha in [0.01, 0.1] {
        let bath = BathSpec::ohmic(alpha, 10.0).unwrap();
        let eta = solve_eta(&bath, 1e-12).unwrap().eta;
        for tau in [0.01, 0.05, 0.2, 0.5, 0.9] {
            let g = gamma_tau(&bath, eta, tau, &n).unwrap();
            let r = gamma_rwa_tau(&bath, tau, &n).unwrap();
            assert!(g < r, "alpha {alpha}, tau {tau}: {g} vs {r}");
        }
    }
}

#[test]
fn curve_shapes() {
    let n = Numerics::default();
    let taus = default_taus();
    for bath in [BathSpec::lorentzian(0.01, 0.09).unwrap(), BathSpec::lorentzian(0.1, 0.3).unwrap()] {
        let c = zeno_scan(&bath, &taus, &n).unwrap();
        assert!(c.regime.contains(&Regime::AntiZeno));
        assert!(c.gamma.iter().chain(&c.gamma_rwa).all(|g| *g >= 0.0));
        assert_eq!(c.regime[0], Regime::Zeno);
    }
    for bath in [BathSpec::ohmic(0.01, 10.0).unwrap(), BathSpec::ohmic(0.1, 10.0).unwrap()] {
        let c = zeno_scan(&bath, &taus, &n).unwrap();
        assert!(c.regime.iter().all(|r| *r == Regime::Zeno), "{bath:?}");
        assert!(c.gamma0 > 0.0 && c.gamma0 == gamma_0(&bath));
    }
}
