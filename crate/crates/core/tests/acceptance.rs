//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wgdp_core::figures::{reference_cavity, FigurePreset, GAMMA_Q_USER, G_USER};
use wgdp_core::optimize::{
    optimize_bare, optimize_cavity, optimize_matched, Bounds, FreeParameter, OptimizationProblem,
};
use wgdp_core::oracle::solve_cavity;
use wgdp_core::units::{to_angular, to_user};
use wgdp_core::verify::verify_oracle_equivalence;
use wgdp_core::{
    bare_amplitudes, bare_dp, cavity_amplitudes, optimal_atom_cavity_coupling, BareParams,
    CavityParams, Param, SystemParams,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn c1_bare_maximum() -> Outcome {
    let opt = optimize_bare(GAMMA_Q_USER, 0.0, Bounds::new(1e-3, 2.0)).unwrap();
    let gamma_q = to_angular(GAMMA_Q_USER);
    let analytic = 1.0 / (1.0 + 2.0 * gamma_q);
    let g1 = opt.get(Param::Gamma1).unwrap();
    let g1_rel = (g1 - GAMMA_Q_USER).abs() / GAMMA_Q_USER;
    let passed = within(opt.eta_max, 0.3322, 1e-4)
        && g1_rel <= 1e-4
        && (opt.eta_max - analytic).abs() / analytic <= 1e-6;
    Outcome {
        passed,
        detail: format!(
            "eta_max={:.6} (target 0.3322±0.0001, analytic {:.6}), Gamma1/2pi={:.8} (rel err {:.1e})",
            opt.eta_max, analytic, g1, g1_rel
        ),
    }
}

fn reference_vg_problem() -> OptimizationProblem {
    OptimizationProblem::new(
        SystemParams::Cavity(reference_cavity(0.0, 0.0, 0.0)),
        vec![
            FreeParameter {
                param: Param::V,
                bounds: Bounds::new(0.0, 2.0),
            },
            FreeParameter {
                param: Param::G,
                bounds: Bounds::new(0.0, 1.0),
            },
        ],
    )
}

fn c2_cavity_maximum() -> Outcome {
    let opt = optimize_cavity(&reference_vg_problem()).unwrap();
    let v = opt.get(Param::V).unwrap();
    let g = opt.get(Param::G).unwrap();
    let checks = [
        ("eta", within(opt.eta_max, 0.5439, 1e-3)),
        ("V", within(v, 0.61, 0.01)),
        ("g", within(g, 0.29, 0.01)),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        passed: failed.is_empty(),
        detail: format!(
            "eta_max={:.6} (0.5439±0.001) at V/2pi={:.4} (0.61±0.01), g/2pi={:.4} (0.29±0.01); out of tolerance: {:?}",
            opt.eta_max, v, g, failed
        ),
    }
}

fn c3_budget() -> Outcome {
    let opt = optimize_matched(&reference_cavity(0.0, 0.0, 0.0), Bounds::new(0.0, 2.0)).unwrap();
    let s = opt.report.shares();
    let checks = [
        ("|r|^2", within(s.r, 0.18, 5e-3)),
        ("|e_a|^2", within(s.a, 0.2681, 5e-3)),
        ("|e_b|^2", within(s.b, 0.0165, 2e-3)),
        ("conversion", within(s.conversion, 0.82, 1e-2)),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        passed: failed.is_empty(),
        detail: format!(
            "at V/2pi={:.4}, g/2pi={:.4}: |r|^2={:.4} (0.18±0.005), |e_a|^2={:.4} (0.2681±0.005), |e_b|^2={:.4} (0.0165±0.002), conversion={:.4} (0.82±0.01); out of tolerance: {:?}",
            opt.get(Param::V).unwrap(),
            opt.get(Param::G).unwrap(),
            s.r,
            s.a,
            s.b,
            s.conversion,
            failed
        ),
    }
}

fn c4_g_opt() -> Outcome {
    let p = reference_cavity(0.0, to_angular(0.61), 0.0);
    let g = optimal_atom_cavity_coupling(&p).unwrap();
    Outcome {
        passed: within(to_user(g), 0.288, 5e-3),
        detail: format!(
            "g_opt={:.4} rad*MHz, g_opt/2pi={:.5} (0.288±0.005)",
            g,
            to_user(g)
        ),
    }
}

fn c5_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let report = verify_oracle_equivalence(1000).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    Outcome {
        passed: report.max_deviation() < 1e-10 && elapsed < 10.0,
        detail: format!(
            "{} draws: max deviation bare {:.2e}, cavity {:.2e}; max residual {:.2e}; {:.3}s",
            report.draws,
            report.max_bare_deviation,
            report.max_cavity_deviation,
            report.max_relative_residual,
            elapsed
        ),
    }
}

fn c6_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut unitarity = 0.0_f64;
    let mut symmetry = 0.0_f64;
    let mut reduction = 0.0_f64;
    for _ in 0..1000 {
        let delta = rng.gen_range(-10.0..10.0);
        let h = rng.gen_range(0.01..5.0);
        let gamma_q = rng.gen_range(0.0..5.0);

        let s = bare_amplitudes(&BareParams::new(delta, 0.0, h)).unwrap();
        unitarity = unitarity.max((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs());

        let lossless = CavityParams {
            delta,
            delta_c: rng.gen_range(-10.0..10.0),
            gamma_q: 0.0,
            gamma_c: 0.0,
            h,
            v: rng.gen_range(0.0..5.0),
            g: rng.gen_range(0.0..5.0),
            v_g: 1.0,
        };
        if let Ok((s, _)) = solve_cavity(&lossless) {
            unitarity = unitarity.max((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs());
        }

        let plus = bare_dp(&BareParams::new(delta, gamma_q, h)).unwrap().eta;
        let minus = bare_dp(&BareParams::new(-delta, gamma_q, h)).unwrap().eta;
        symmetry = symmetry.max((plus - minus).abs());

        let bare = BareParams::new(delta, gamma_q, h);
        let cav = cavity_amplitudes(&CavityParams::decoupled(bare, 0.3, rng.gen_range(0.1..5.0)))
            .unwrap();
        reduction = reduction.max(cav.relative_deviation(&bare_amplitudes(&bare).unwrap()));
    }
    if unitarity > 1e-10 {
        failures.push("unitarity");
    }
    if symmetry > 1e-12 {
        failures.push("detuning symmetry");
    }
    if reduction > 1e-12 {
        failures.push("reduction");
    }

    let full = bare_amplitudes(&BareParams::new(0.0, 0.0, 1.3)).unwrap();
    if !(full.t.norm() < 1e-12 && within(full.r.norm_sqr(), 1.0, 1e-12) && full.e_q.norm() > 0.0) {
        failures.push("full reflection");
    }

    let mut grid_cells = 0;
    for f in 2..=6 {
        let res = FigurePreset::for_figure(f).unwrap().run().unwrap();
        grid_cells += res.cells.len();
        let ok = res.degenerate_count() == 0 && res.reports().all(|r| (0.0..=1.0).contains(&r.eta));
        if !ok {
            failures.push("eta bounds on figure grids");
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "unitarity dev {unitarity:.1e}, symmetry dev {symmetry:.1e}, reduction dev {reduction:.1e}, {grid_cells} figure cells in [0,1]; failures: {failures:?}"
        ),
    }
}

fn c7_v_zero_plateau() -> Outcome {
    let problem = OptimizationProblem::new(
        SystemParams::Cavity(reference_cavity(0.0, 0.0, to_angular(G_USER))),
        vec![FreeParameter {
            param: Param::H,
            bounds: Bounds::new(0.0, 2.0),
        }],
    );
    let opt = optimize_cavity(&problem).unwrap();
    Outcome {
        passed: within(opt.eta_max, 0.2, 0.05),
        detail: format!(
            "max eta_c={:.4} (0.2±0.05) at h/2pi={:.4}",
            opt.eta_max,
            opt.get(Param::H).unwrap()
        ),
    }
}

fn c8_monotone_tail() -> Outcome {
    let res = FigurePreset::for_figure(6).unwrap().run().unwrap();
    let tail: Vec<(f64, f64)> = res
        .cells
        .iter()
        .filter(|c| c.coords[0] >= 0.61 - 1e-12)
        .map(|c| (c.coords[0], c.outcome.report().unwrap().eta))
        .collect();
    let rise = tail.windows(2).find(|w| w[1].1 > w[0].1);
    Outcome {
        passed: rise.is_none() && tail.len() > 1,
        detail: match rise {
            None => format!(
                "{} cells on V/2pi in [{:.3}, {:.3}], eta {:.4} -> {:.4} non-increasing (g matched to V)",
                tail.len(),
                tail[0].0,
                tail[tail.len() - 1].0,
                tail[0].1,
                tail[tail.len() - 1].1
            ),
            Some(w) => format!("eta rises from {:.6} to {:.6} at V/2pi={:.4}", w[0].1, w[1].1, w[1].0),
        },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("C1 bare maximum", c1_bare_maximum),
        ("C2 cavity maximum", c2_cavity_maximum),
        ("C3 budget at the optimum", c3_budget),
        ("C4 g_opt formula", c4_g_opt),
        ("C5 oracle equivalence", c5_oracle_equivalence),
        ("C6 property suite", c6_properties),
        ("C7 V=0 plateau", c7_v_zero_plateau),
        ("C8 monotone tail", c8_monotone_tail),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "[{}] {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
