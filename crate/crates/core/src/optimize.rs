//! Maximization of the detection probability over the couplings.
//!
//! Locations and bounds are in `/2π` user units, like sweep axes; the full
//! parameter snapshot at the optimum is angular.
//!
//! The bare problem is one-dimensional and unimodal in `Γ₁`, so it uses a
//! golden-section search. The cavity problem runs a 41-per-axis grid, then a
//! bounded Nelder–Mead refinement from the best cell and from the best
//! matching-condition seed, keeping whichever probe scored highest.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{
    matched_coupling, matching_report, optimal_atom_cavity_coupling, MatchingReport,
};
use crate::params::{BareParams, CavityParams, Param, SystemParams};
use crate::solution::DetectionReport;
use crate::units::{to_angular, to_user};

pub const GRID_POINTS_PER_AXIS: usize = 41;
pub const DOMAIN_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;

/// Closed interval in user units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn pinned(value: f64) -> Self {
        Self::new(value, value)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    fn validate(&self, param: Param) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite()) || self.lower > self.upper {
            return Err(Error::InvalidProblem(format!(
                "{param}: bounds [{}, {}] must be finite and ordered",
                self.lower, self.upper
            )));
        }
        if self.lower < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "{param}: lower bound {} is negative",
                self.lower
            )));
        }
        Ok(())
    }

    fn at_edge(&self, x: f64) -> bool {
        self.width() > 0.0
            && ((x - self.lower).abs() <= 1e-8 * self.width().max(1.0)
                || (self.upper - x).abs() <= 1e-8 * self.width().max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParameter {
    pub param: Param,
    pub bounds: Bounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    /// Values for everything that is not free. Its flavor is the problem's flavor.
    pub fixed: SystemParams,
    pub free: Vec<FreeParameter>,
}

impl OptimizationProblem {
    pub fn new(fixed: SystemParams, free: Vec<FreeParameter>) -> Self {
        Self { fixed, free }
    }

    pub fn validate(&self) -> Result<()> {
        self.fixed.validate()?;
        if self.free.is_empty() {
            return Err(Error::InvalidProblem("no free parameters".into()));
        }
        for (k, f) in self.free.iter().enumerate() {
            if !matches!(f.param, Param::H | Param::V | Param::G | Param::Gamma1) {
                return Err(Error::InvalidProblem(format!(
                    "`{}` cannot be optimized; free parameters are h, V, g, Gamma1",
                    f.param
                )));
            }
            if f.param.is_cavity_only() && self.fixed.flavor() == crate::Flavor::Bare {
                return Err(Error::InvalidProblem(format!(
                    "`{}` does not apply to a bare detector",
                    f.param
                )));
            }
            f.bounds.validate(f.param)?;
            if self.free[..k]
                .iter()
                .any(|o| o.param.conflicts_with(f.param))
            {
                return Err(Error::InvalidProblem(format!(
                    "`{}` is listed twice or conflicts with another free parameter",
                    f.param
                )));
            }
        }
        Ok(())
    }

    fn params_at(&self, x: &[f64]) -> SystemParams {
        let mut p = self.fixed;
        for (f, &v) in self.free.iter().zip(x) {
            p.set(f.param, v).expect("problem validated");
        }
        p
    }

    fn objective(&self, x: &[f64]) -> f64 {
        match crate::evaluate(&self.params_at(x)) {
            Ok(s) => s.report().eta,
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Search interval or simplex shrank below the domain tolerance.
    Converged,
    IterationCap,
    /// The best point sits on a bound; no interior maximum in the box.
    NoInteriorMaximum,
    /// Every free parameter was pinned by its bounds.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    /// Free parameter values in user units.
    pub location: Vec<(Param, f64)>,
    pub params: SystemParams,
    pub eta_max: f64,
    pub report: DetectionReport,
    pub iterations: usize,
    pub evaluations: usize,
    pub matching: Option<MatchingReport>,
    pub stop: StopReason,
}

impl Optimum {
    pub fn get(&self, param: Param) -> Option<f64> {
        self.location
            .iter()
            .find(|(p, _)| *p == param)
            .map(|&(_, v)| v)
    }

    pub fn converged(&self) -> bool {
        matches!(self.stop, StopReason::Converged | StopReason::Pinned)
    }
}

/// Best point seen by a search, with the bookkeeping every method shares.
#[derive(Debug, Clone)]
struct Tracker {
    best_x: Vec<f64>,
    best_f: f64,
    evaluations: usize,
}

impl Tracker {
    fn new(dim: usize) -> Self {
        Self {
            best_x: vec![f64::NAN; dim],
            best_f: f64::NEG_INFINITY,
            evaluations: 0,
        }
    }

    fn probe<F: Fn(&[f64]) -> f64>(&mut self, f: &F, x: &[f64]) -> f64 {
        let fx = f(x);
        self.offer(x, fx);
        fx
    }

    fn offer(&mut self, x: &[f64], fx: f64) {
        self.evaluations += 1;
        if fx > self.best_f {
            self.best_f = fx;
            self.best_x = x.to_vec();
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScalarMaximum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns the best probe, which may be an end point.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> ScalarMaximum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let g = |x: &[f64]| f(x[0]);
    let mut tracker = Tracker::new(1);
    tracker.probe(&g, &[lo]);
    if hi > lo {
        tracker.probe(&g, &[hi]);
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = tracker.probe(&g, &[c]);
    let mut fd = tracker.probe(&g, &[d]);
    let mut iterations = 0;
    while (b - a) > tol && iterations < 10 * MAX_ITERATIONS {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = tracker.probe(&g, &[c]);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = tracker.probe(&g, &[d]);
        }
    }
    ScalarMaximum {
        x: tracker.best_x[0],
        value: tracker.best_f,
        iterations,
        evaluations: tracker.evaluations,
    }
}

#[derive(Debug, Clone)]
pub struct SimplexMaximum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead maximization inside the box `[lower, upper]` with reflection
/// 1, expansion 2, contraction ½ and shrink ½. Trial points are clamped into
/// the box. Stops once every vertex is within `tol` of the best one.
pub fn nelder_mead_max<F: Fn(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    tol: f64,
    max_iterations: usize,
) -> SimplexMaximum {
    let n = start.len();
    let clamp = |x: &mut Vec<f64>| {
        for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
            *v = v.clamp(*lo, *hi);
        }
    };
    let mut tracker = Tracker::new(n);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    let f0 = tracker.probe(&f, &x0);
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        let step = 0.05 * (upper[i] - lower[i]);
        let mut xi = x0.clone();
        xi[i] = if x0[i] + step <= upper[i] {
            x0[i] + step
        } else {
            x0[i] - step
        };
        let fi = tracker.probe(&f, &xi);
        simplex.push((xi, fi));
    }

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
    };
    let spread = |s: &[(Vec<f64>, f64)]| {
        s[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&s[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    let mut iterations = 0;
    let mut converged = false;
    loop {
        order(&mut simplex);
        if spread(&simplex) < tol {
            converged = true;
            break;
        }
        if iterations >= max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let toward = |coef: f64| {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp(&mut x);
            x
        };

        let xr = toward(1.0);
        let fr = tracker.probe(&f, &xr);
        if fr > simplex[0].1 {
            let xe = toward(2.0);
            let fe = tracker.probe(&f, &xe);
            simplex[n] = if fe > fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr > simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        // outside contraction must beat the reflected point, inside
        // contraction only the worst vertex
        let (coef, bar) = if fr > simplex[n].1 {
            (0.5, fr)
        } else {
            (-0.5, simplex[n].1)
        };
        let xc = toward(coef);
        let fc = tracker.probe(&f, &xc);
        if fc > bar {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = vertex
                .0
                .iter()
                .zip(&best)
                .map(|(v, b)| b + 0.5 * (v - b))
                .collect();
            let fx = tracker.probe(&f, &x);
            *vertex = (x, fx);
        }
    }

    SimplexMaximum {
        x: tracker.best_x,
        value: tracker.best_f,
        iterations,
        evaluations: tracker.evaluations,
        converged,
    }
}

fn finish(
    problem: &OptimizationProblem,
    x: &[f64],
    iterations: usize,
    evaluations: usize,
    mut stop: StopReason,
) -> Result<Optimum> {
    let params = problem.params_at(x);
    let report = crate::evaluate(&params)?.report();
    if stop == StopReason::Converged
        && problem
            .free
            .iter()
            .zip(x)
            .any(|(f, &v)| f.bounds.at_edge(v))
    {
        stop = StopReason::NoInteriorMaximum;
    }
    let matching = match params {
        SystemParams::Cavity(c) => Some(matching_report(&c)),
        SystemParams::Bare(_) => None,
    };
    Ok(Optimum {
        location: problem
            .free
            .iter()
            .map(|f| f.param)
            .zip(x.iter().copied())
            .collect(),
        params,
        eta_max: report.eta,
        report,
        iterations,
        evaluations,
        matching,
        stop,
    })
}

/// Maximizes the bare DP over `Γ₁` (user units, `Γ₁/2π`) at fixed `γ_q/2π`
/// and `Δ/2π`. At resonance the maximizer is `Γ₁ = γ_q`.
pub fn optimize_bare(gamma_q: f64, delta: f64, gamma_1_bounds: Bounds) -> Result<Optimum> {
    let fixed = SystemParams::Bare(BareParams::new(to_angular(delta), to_angular(gamma_q), 0.0));
    let problem = OptimizationProblem::new(
        fixed,
        vec![FreeParameter {
            param: Param::Gamma1,
            bounds: gamma_1_bounds,
        }],
    );
    problem.validate()?;
    let Bounds { lower, upper } = gamma_1_bounds;
    if lower == upper {
        return finish(&problem, &[lower], 0, 1, StopReason::Pinned);
    }
    let best = golden_section_max(|x| problem.objective(&[x]), lower, upper, DOMAIN_TOLERANCE);
    finish(
        &problem,
        &[best.x],
        best.iterations,
        best.evaluations,
        StopReason::Converged,
    )
}

/// `(h = 0, V, g_opt(V))` on a grid of `count` points over `v_range`
/// (user units), keeping only points where `g_opt` is defined.
pub fn seed_from_matching(
    v_range: Bounds,
    count: usize,
    fixed: &CavityParams,
) -> Vec<CavityParams> {
    let count = count.max(2);
    (0..count)
        .filter_map(|k| {
            let v_user = v_range.lower + v_range.width() * k as f64 / (count - 1) as f64;
            let mut p = CavityParams {
                h: 0.0,
                v: to_angular(v_user),
                ..*fixed
            };
            p.g = optimal_atom_cavity_coupling(&p).ok()?;
            Some(p)
        })
        .collect()
}

/// Lexicographic tie-break on the grid: smaller V, then g, then h / Gamma1.
fn tie_break_key(problem: &OptimizationProblem, x: &[f64]) -> [f64; 3] {
    let mut key = [0.0; 3];
    for (f, &v) in problem.free.iter().zip(x) {
        let slot = match f.param {
            Param::V => 0,
            Param::G => 1,
            _ => 2,
        };
        key[slot] = v;
    }
    key
}

fn grid_axis(bounds: Bounds) -> Vec<f64> {
    if bounds.width() == 0.0 {
        return vec![bounds.lower];
    }
    let n = GRID_POINTS_PER_AXIS;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                bounds.upper
            } else {
                bounds.lower + bounds.width() * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn grid_points(problem: &OptimizationProblem) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for f in &problem.free {
        let axis = grid_axis(f.bounds);
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

/// Best cell of the coarse grid, as `(point, eta)`.
pub fn coarse_grid_best(problem: &OptimizationProblem) -> Result<(Vec<f64>, f64)> {
    problem.validate()?;
    let points = grid_points(problem);
    let values: Vec<f64> = points.par_iter().map(|x| problem.objective(x)).collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, &v) in values.iter().enumerate() {
        best = match best {
            None => Some((k, v)),
            Some((b, bv)) => {
                let better = v > bv
                    || (v == bv
                        && tie_break_key(problem, &points[k])
                            .partial_cmp(&tie_break_key(problem, &points[b]))
                            == Some(Ordering::Less));
                Some(if better { (k, v) } else { (b, bv) })
            }
        };
    }
    let (k, v) = best.expect("grid is non-empty");
    Ok((points[k].clone(), v))
}

fn matching_seed_point(problem: &OptimizationProblem) -> Option<Vec<f64>> {
    let SystemParams::Cavity(fixed) = problem.fixed else {
        return None;
    };
    let find = |param: Param| problem.free.iter().find(|f| f.param == param);
    let (v_free, g_free) = (find(Param::V)?, find(Param::G)?);
    let h_ok = match problem
        .free
        .iter()
        .find(|f| matches!(f.param, Param::H | Param::Gamma1))
    {
        Some(f) => f.bounds.lower == 0.0,
        None => fixed.h == 0.0,
    };
    if !h_ok {
        return None;
    }
    let seeds = seed_from_matching(v_free.bounds, GRID_POINTS_PER_AXIS, &fixed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in seeds {
        let g_user = to_user(s.g);
        if g_user < g_free.bounds.lower || g_user > g_free.bounds.upper {
            continue;
        }
        let x: Vec<f64> = problem
            .free
            .iter()
            .map(|f| match f.param {
                Param::V => to_user(s.v),
                Param::G => g_user,
                _ => 0.0,
            })
            .collect();
        let eta = problem.objective(&x);
        if best.as_ref().is_none_or(|(_, b)| eta > *b) {
            best = Some((x, eta));
        }
    }
    best.map(|(x, _)| x)
}

pub fn optimize_cavity(problem: &OptimizationProblem) -> Result<Optimum> {
    problem.validate()?;
    let grid_size: usize = problem
        .free
        .iter()
        .map(|f| grid_axis(f.bounds).len())
        .product();
    let (grid_best, _) = coarse_grid_best(problem)?;

    let active: Vec<usize> = (0..problem.free.len())
        .filter(|&k| problem.free[k].bounds.width() > 0.0)
        .collect();
    if active.is_empty() {
        return finish(problem, &grid_best, 0, grid_size, StopReason::Pinned);
    }

    let lower: Vec<f64> = active
        .iter()
        .map(|&k| problem.free[k].bounds.lower)
        .collect();
    let upper: Vec<f64> = active
        .iter()
        .map(|&k| problem.free[k].bounds.upper)
        .collect();
    let refine = |start: &[f64]| {
        let embed = |y: &[f64]| {
            let mut x = start.to_vec();
            for (&k, &v) in active.iter().zip(y) {
                x[k] = v;
            }
            x
        };
        let y0: Vec<f64> = active.iter().map(|&k| start[k]).collect();
        let run = nelder_mead_max(
            |y| problem.objective(&embed(y)),
            &y0,
            &lower,
            &upper,
            DOMAIN_TOLERANCE,
            MAX_ITERATIONS,
        );
        (embed(&run.x), run)
    };

    let mut best = refine(&grid_best);
    let mut evaluations = grid_size + best.1.evaluations;
    if let Some(seed) = matching_seed_point(problem) {
        let seeded = refine(&seed);
        evaluations += GRID_POINTS_PER_AXIS + seeded.1.evaluations;
        if seeded.1.value > best.1.value {
            best = seeded;
        }
    }
    let (x, run) = best;
    let stop = if run.converged {
        StopReason::Converged
    } else {
        StopReason::IterationCap
    };
    finish(problem, &x, run.iterations, evaluations, stop)
}

/// Maximizes the cavity DP along the matching curve `h = 0`, `g = g_opt(V)`
/// over `V/2π` in `v_bounds`. On this curve the transmission vanishes.
pub fn optimize_matched(fixed: &CavityParams, v_bounds: Bounds) -> Result<Optimum> {
    let base = CavityParams { h: 0.0, ..*fixed };
    base.validate()?;
    v_bounds.validate(Param::V)?;
    if base.gamma_c <= 0.0 {
        return Err(Error::InvalidProblem(
            "matching curve needs gamma_c > 0".into(),
        ));
    }
    // Γ₂ = γ_c at V = √(2 γ_c v_g).
    let threshold = to_user((2.0 * base.gamma_c * base.v_g).sqrt());
    let lower = v_bounds.lower.max(threshold);
    if lower > v_bounds.upper {
        return Err(Error::GOptUndefined {
            gamma_2: CavityParams {
                v: to_angular(v_bounds.upper),
                ..base
            }
            .gamma_2(),
            gamma_c: base.gamma_c,
        });
    }
    let at = |v_user: f64| {
        let mut p = CavityParams {
            v: to_angular(v_user),
            ..base
        };
        p.g = matched_coupling(&p);
        p
    };
    let objective = |v_user: f64| match crate::cavity_dp(&at(v_user)) {
        Ok(r) => r.eta,
        Err(_) => f64::NEG_INFINITY,
    };
    let best = golden_section_max(objective, lower, v_bounds.upper, DOMAIN_TOLERANCE);
    let p = at(best.x);
    let report = crate::cavity_dp(&p)?;
    let edge = Bounds::new(lower, v_bounds.upper).at_edge(best.x);
    Ok(Optimum {
        location: vec![(Param::V, best.x), (Param::G, to_user(p.g))],
        params: SystemParams::Cavity(p),
        eta_max: report.eta,
        report,
        iterations: best.iterations,
        evaluations: best.evaluations,
        matching: Some(matching_report(&p)),
        stop: if edge {
            StopReason::NoInteriorMaximum
        } else {
            StopReason::Converged
        },
    })
}
