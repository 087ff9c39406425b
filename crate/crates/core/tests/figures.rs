use wgdp_core::figures::{reference_cavity, FigurePreset};
use wgdp_core::sweep::{line_scan_fig6, AtomCavityCoupling, AxisSpec, Execution};
use wgdp_core::units::to_angular;
use wgdp_core::{cavity_dp, Param};

#[test]
fn fig3_grid_peaks_at_resonant_optimum() {
    let res = FigurePreset::for_figure(3).unwrap().run().unwrap();
    assert_eq!(res.cells.len(), 201 * 201);
    let bound = 1.0 / (1.0 + 2.0 * to_angular(0.16));
    let best = res.max_eta_cell().unwrap();
    let eta = best.outcome.report().unwrap().eta;
    assert_eq!(best.coords[0], 0.0);
    assert!((best.coords[1] - 0.16).abs() < 1e-12);
    assert!((eta - 0.3322).abs() < 1e-4);
    assert!(res.reports().all(|r| r.eta <= bound + 1e-9));
}

#[test]
fn fig3_symmetric_in_detuning() {
    let res = FigurePreset::for_figure(3)
        .unwrap()
        .with_count(41)
        .run()
        .unwrap();
    let n = 41;
    for i in 0..n {
        for j in 0..n {
            let a = res.cells[i * n + j].outcome.report().unwrap().eta;
            let b = res.cells[(n - 1 - i) * n + j].outcome.report().unwrap().eta;
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn fig4_grid_maximum_near_weak_direct_coupling() {
    let res = FigurePreset::for_figure(4).unwrap().run().unwrap();
    let best = res.max_eta_cell().unwrap();
    let eta = best.outcome.report().unwrap().eta;
    assert_eq!(best.coords[0], 0.0);
    assert!((best.coords[1] - 0.61).abs() < 0.05, "{:?}", best.coords);
    assert!((eta - 0.5439).abs() < 1e-3);
    // the cavity-enhanced region exceeds the bare-detector ceiling
    assert!(res.reports().filter(|r| r.eta >= 0.34).count() > 100);
}

#[test]
fn fig5_grid_is_deterministic_across_execution_modes() {
    let preset = FigurePreset::for_figure(5).unwrap().with_count(61);
    let serial = preset.run_with(Execution::Serial).unwrap();
    let parallel = preset.run_with(Execution::Parallel).unwrap();
    assert!(serial.same_grid(&parallel));
    for (a, b) in serial.cells.iter().zip(&parallel.cells) {
        let (a, b) = (a.outcome.report().unwrap(), b.outcome.report().unwrap());
        assert_eq!(a.eta.to_bits(), b.eta.to_bits());
    }
}

#[test]
fn fig6_scan_budget() {
    let res = FigurePreset::for_figure(6).unwrap().run().unwrap();
    assert_eq!(res.cells.len(), 2001);
    let first = res.cells[0].outcome.report().unwrap();
    assert_eq!(first.p_t, 1.0);
    assert_eq!(first.eta, 0.0);

    let at = res
        .cells
        .iter()
        .find(|c| (c.coords[0] - 0.61).abs() < 1e-12)
        .unwrap();
    let s = at.outcome.report().unwrap().shares();
    assert!((at.derived.unwrap() - 0.288).abs() < 5e-3);
    assert!((s.r - 0.18).abs() < 5e-3);
    assert!((s.a - 0.2681).abs() < 5e-3);
    assert!(s.t < 1e-20);
}

#[test]
fn fig6_fixed_coupling_matches_direct_evaluation() {
    let base = reference_cavity(0.0, 0.0, 1.82);
    let axis = AxisSpec::new(Param::V, 0.0, 2.0, 101);
    let res = line_scan_fig6(&base, &axis, AtomCavityCoupling::Fixed).unwrap();
    assert!(res.derived.is_none());
    for c in &res.cells {
        let direct = cavity_dp(&reference_cavity(0.0, to_angular(c.coords[0]), 1.82)).unwrap();
        assert_eq!(c.outcome.report(), Some(&direct));
    }
}
