use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::Flavor;

/// Stationary scattering amplitudes for a single photon incident from the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterSolution {
    pub t: Complex64,
    pub r: Complex64,
    pub e_q: Complex64,
    /// Zero for the bare detector.
    pub e_a: Complex64,
    pub e_b: Complex64,
    pub flavor: Flavor,
}

impl ScatterSolution {
    pub fn bare(t: Complex64, r: Complex64, e_q: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            t,
            r,
            e_q,
            e_a: zero,
            e_b: zero,
            flavor: Flavor::Bare,
        }
    }

    /// Amplitudes in the canonical order `(t, r, e_q, e_a, e_b)`, truncated
    /// to three for the bare flavor.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let mut v = vec![self.t, self.r, self.e_q];
        if self.flavor == Flavor::Cavity {
            v.extend([self.e_a, self.e_b]);
        }
        v
    }

    pub fn is_finite(&self) -> bool {
        [self.t, self.r, self.e_q, self.e_a, self.e_b]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest component deviation from `reference`, relative to the largest
    /// reference amplitude.
    pub fn relative_deviation(&self, reference: &ScatterSolution) -> f64 {
        let ours = self.amplitudes();
        let theirs = reference.amplitudes();
        let scale = theirs
            .iter()
            .map(|z| z.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        ours.iter()
            .zip(&theirs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn report(&self) -> DetectionReport {
        DetectionReport::from_solution(self)
    }
}

/// Detection probability together with the squared outcome amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    /// `|e_q|²` over the sum of all squared outcome amplitudes.
    pub eta: f64,
    pub p_t: f64,
    pub p_r: f64,
    pub p_q: f64,
    pub p_a: f64,
    pub p_b: f64,
    /// `1 − |t|² − |r|²`: flux removed from the waveguide.
    pub conversion: f64,
}

impl DetectionReport {
    pub fn from_solution(s: &ScatterSolution) -> Self {
        let p_t = s.t.norm_sqr();
        let p_r = s.r.norm_sqr();
        let p_q = s.e_q.norm_sqr();
        let p_a = s.e_a.norm_sqr();
        let p_b = s.e_b.norm_sqr();
        let total = p_t + p_r + p_q + p_a + p_b;
        let eta = if total > 0.0 { p_q / total } else { 0.0 };
        Self {
            eta,
            p_t,
            p_r,
            p_q,
            p_a,
            p_b,
            conversion: 1.0 - p_t - p_r,
        }
    }

    pub fn total(&self) -> f64 {
        self.p_t + self.p_r + self.p_q + self.p_a + self.p_b
    }

    /// Each outcome as a fraction of the same total that normalizes `eta`.
    /// Outcome budgets (reflection, mode occupations, converted fraction) are
    /// usually quoted on this scale.
    pub fn shares(&self) -> OutcomeShares {
        let total = self.total();
        let f = |p: f64| if total > 0.0 { p / total } else { 0.0 };
        let (t, r) = (f(self.p_t), f(self.p_r));
        OutcomeShares {
            t,
            r,
            q: self.eta,
            a: f(self.p_a),
            b: f(self.p_b),
            conversion: 1.0 - t - r,
        }
    }
}

/// Normalized outcome fractions; `t + r + q + a + b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeShares {
    pub t: f64,
    pub r: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub conversion: f64,
}
