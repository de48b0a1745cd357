use thermowork::protocol::run_protocol;
use thermowork::quantum::Operator;
use thermowork::rabi::{
    exact_diag_oracle, g_function, ground_energy, ground_state, ground_state_with, jc_ground, rabi_matrix,
    work_report, BraakSeries, Parity, RabiParams, SolveMethod, SolveOptions, WorkReport,
};
use thermowork::thermo::Temperature;
use thermowork::Error;

fn params(detuning: f64, g: f64) -> RabiParams {
    RabiParams::from_detuning(detuning, g).unwrap()
}

// Frozen from an independent 60-digit evaluation of the same closed forms.
const W_G6_RESONANT: f64 = 36.494730179;
const ETA_G6_RESONANT: f64 = 0.5068960445;

#[test]
fn deep_strong_coupling_frozen_values() {
    let r = work_report(params(0.0, 6.0)).unwrap();
    assert!((r.work - W_G6_RESONANT).abs() < 1e-8, "{}", r.work);
    assert!((r.eta.unwrap() - ETA_G6_RESONANT).abs() < 1e-9, "{:?}", r.eta);
}

#[test]
fn weak_coupling_matches_perturbation_theory() {
    for (d, g) in [(0.5, 0.01), (0.25, 0.02), (1.0, 0.005)] {
        let p = RabiParams::new(d, g).unwrap();
        // second order: the |e,1> admixture at energy gap 1 + 2 Delta
        let e2 = -d - g * g / (1.0 + 2.0 * d);
        assert!((ground_energy(p).unwrap() - e2).abs() < 10.0 * g.powi(4), "{d} {g}");
    }
    let eta = work_report(params(0.0, 0.1)).unwrap().eta.unwrap();
    assert!((eta - 0.50125).abs() < 1e-5);
}

#[test]
fn uncoupled_threshold_is_continuous() {
    let d = 0.5;
    let below = ground_energy(RabiParams::new(d, 1e-6).unwrap()).unwrap();
    assert_eq!(below, -d);
    let g: f64 = 2e-6;
    let above = ground_energy(RabiParams::new(d, g).unwrap()).unwrap();
    assert!((above - (-d - g * g / (1.0 + 2.0 * d))).abs() < 1e-13);
}

#[test]
fn root_is_a_zero_of_the_minus_sector_only() {
    let p = params(0.0, 1.3);
    let e0 = ground_energy(p).unwrap();
    let s = BraakSeries::new(p, e0).unwrap();
    assert!(s.value(Parity::Minus).abs() < 1e-10 * s.scale(Parity::Minus));
    assert!(s.value(Parity::Plus).abs() > 1e-3 * s.scale(Parity::Plus));
    assert_eq!(g_function(p, e0, Parity::Plus).unwrap(), s.value(Parity::Plus));
}

#[test]
fn state_invariants() {
    for (d, g) in [(-0.5, 0.3), (0.0, 1.0), (1.0, 2.5), (0.0, 5.0)] {
        let gs = ground_state(params(d, g)).unwrap();
        assert_eq!(gs.method, SolveMethod::Braak);
        let norm: f64 = gs.c.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(gs.c[0] > 0.0);
        for (c, phi) in gs.c.iter().zip(&gs.phi1) {
            assert!((c * gs.norm.sqrt() - phi).abs() <= 1e-12 * phi.abs().max(1e-300).max(gs.norm.sqrt() * 1e-300));
        }
        assert!(gs.parity_residual <= 1e-6);
        assert_eq!(gs.c.len(), gs.n_fock + 1);
    }
}

#[test]
fn degenerate_doublet_matches_projected_oracle() {
    let p = params(0.0, 5.0);
    let gs = ground_state(p).unwrap();
    let ed = exact_diag_oracle(p, 150).unwrap();
    assert!(ed.near_degenerate);
    assert!((gs.e0 - ed.energy).abs() < 1e-9);
    let overlap = gs.to_composite(150).dot(&ed.vector).abs();
    assert!(1.0 - overlap < 1e-10, "{overlap}");
}

#[test]
fn generic_protocol_on_truncated_model_agrees() {
    for (d, g) in [(0.0, 0.3), (0.5, 1.0), (-0.5, 0.7)] {
        let p = params(d, g);
        let sys = p.truncated_system(40).unwrap();
        let h = sys.total();
        let direct = rabi_matrix(p, 40);
        assert!(h.matrix().iter().zip(direct.iter()).all(|(a, b)| (a.re - b).abs() < 1e-14 && a.im == 0.0));
        let ledger = run_protocol(&sys, Temperature::Zero).unwrap();
        let r: WorkReport = work_report(p).unwrap();
        assert!((ledger.work - r.work).abs() < 1e-8, "{} vs {}", ledger.work, r.work);
        assert!((ledger.eta.unwrap() - r.eta.unwrap()).abs() < 1e-8);
        assert!((ledger.h_i_t3 - r.h_i).abs() < 1e-8);
        assert_eq!(ledger.h_i_t2, 0.0);
    }
}

#[test]
fn efficiency_splits_into_qubit_and_oscillator_parts() {
    let r = work_report(params(0.5, 0.8)).unwrap();
    assert!((r.eta_a.unwrap() + r.eta_b.unwrap() - r.eta.unwrap()).abs() < 1e-14);
    assert!((r.work_a + r.work_b - r.work).abs() < 1e-14);
    assert!((r.h_a + r.h_b + r.h_i - r.e0).abs() < 1e-9);
}

#[test]
fn jaynes_cummings_limit_at_vanishing_coupling() {
    let p = params(0.0, 1e-3);
    let c = ground_state(p).unwrap().c;
    let jc = jc_ground(p).unwrap();
    assert!((c[0] - jc[0]).abs() < 1e-6);
    assert!(c.iter().skip(1).all(|v| v.abs() < 1e-3));
}

#[test]
fn precision_escalates_when_too_low() {
    let opts = SolveOptions { precision_bits: Some(64), ..Default::default() };
    let gs = ground_state_with(params(0.0, 6.0), &opts).unwrap();
    assert!(gs.precision_bits > 64);
    let reference = ground_state(params(0.0, 6.0)).unwrap();
    assert!((gs.e0 - reference.e0).abs() < 1e-12);
}

#[test]
fn oracle_check_option() {
    let opts = SolveOptions { oracle_check: true, ..Default::default() };
    assert!(ground_state_with(params(0.0, 1.5), &opts).is_ok());
}

#[test]
fn fock_cap_is_an_explicit_failure() {
    let opts = SolveOptions { fock_cap: 10, ..Default::default() };
    assert!(matches!(ground_state_with(params(0.0, 3.0), &opts), Err(Error::SeriesDivergence(_))));
}

#[test]
fn invalid_parameters() {
    assert!(RabiParams::new(0.0, 1.0).is_err());
    assert!(RabiParams::new(0.5, -0.1).is_err());
    assert!(RabiParams::from_detuning(-1.0, 0.5).is_err());
    assert!((params(0.5, 0.1).half_gap() - 0.75).abs() < 1e-15);
    assert_eq!(params(0.5, 0.1).detuning(), 0.5);
}

#[test]
fn deep_strong_coupling_trends() {
    let reports: Vec<WorkReport> = [2.0, 4.0, 6.0].iter().map(|&g| work_report(params(0.0, g)).unwrap()).collect();
    let w_dev: Vec<f64> = reports.iter().map(|r| (r.work - r.params.coupling().powi(2) - 0.5) / r.work).collect();
    let eta_dev: Vec<f64> = reports.iter().map(|r| (r.eta.unwrap() - 0.5).abs()).collect();
    let hi_dev: Vec<f64> = reports.iter().map(|r| ((r.h_i + 2.0 * r.params.coupling().powi(2)) / r.h_i).abs()).collect();
    for dev in [&w_dev, &eta_dev, &hi_dev] {
        assert!(dev.windows(2).all(|w| w[1].abs() < w[0].abs()), "{dev:?}");
    }
    assert!(w_dev[0].abs() < 0.05);
}
