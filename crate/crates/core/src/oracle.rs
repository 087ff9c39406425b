//! Direct numerical solution of the stationary scattering conditions.
//!
//! The closed forms in [`crate::bare`] and [`crate::cavity`] are checked
//! against the systems built here. The delta-coupled field is evaluated at
//! the origin as the average of its one-sided limits, `φ_R(0) = (1 + t)/2`
//! and `φ_L(0) = r/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BareParams, CavityParams, Flavor};
use crate::solution::ScatterSolution;

/// Pivots below this fraction of their row scale are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

const BARE_LABELS: [&str; 3] = ["t", "r", "e_q"];
const CAVITY_LABELS: [&str; 5] = ["t", "r", "e_q", "e_a", "e_b"];

/// Dense `A x = b` with labelled unknowns. `a` is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrixSystem {
    n: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    labels: &'static [&'static str],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// `max_i |(A x − b)_i|`.
    pub residual_norm: f64,
    pub pivot_min: f64,
    /// Ratio of the largest to the smallest pivot magnitude.
    pub condition_estimate: f64,
}

impl ComplexMatrixSystem {
    /// Accepts only the two physical shapes: 3 unknowns `(t, r, e_q)` or 5
    /// unknowns `(t, r, e_q, e_a, e_b)`.
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        let n = b.len();
        let labels: &'static [&'static str] = match n {
            3 => &BARE_LABELS,
            5 => &CAVITY_LABELS,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "system dimension must be 3 or 5, got {n}"
                )))
            }
        };
        if a.len() != n * n {
            return Err(Error::InvalidParams(format!(
                "coefficient matrix has {} entries, expected {}",
                a.len(),
                n * n
            )));
        }
        if !a
            .iter()
            .chain(&b)
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::InvalidParams("system entries must be finite".into()));
        }
        Ok(Self { n, a, b, labels })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn unknown_labels(&self) -> &'static [&'static str] {
        self.labels
    }

    pub fn coefficient(&self, row: usize, col: usize) -> Complex64 {
        self.a[row * self.n + col]
    }

    pub fn rhs(&self) -> &[Complex64] {
        &self.b
    }

    pub fn max_coefficient(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The same equations listed in a different order; `order[k]` is the
    /// original row placed at position `k`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n
            || order
                .iter()
                .any(|&k| k >= self.n || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::InvalidParams(
                "row order must be a permutation".into(),
            ));
        }
        let mut a = Vec::with_capacity(self.a.len());
        for &k in order {
            a.extend_from_slice(&self.a[k * self.n..(k + 1) * self.n]);
        }
        let b = order.iter().map(|&k| self.b[k]).collect();
        Ok(Self {
            a,
            b,
            ..self.clone()
        })
    }

    /// `max_i |(A x − b)_i|`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        (0..self.n)
            .map(|i| {
                let ax: Complex64 = (0..self.n).map(|j| self.coefficient(i, j) * x[j]).sum();
                (ax - self.b[i]).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn build_bare_system(p: &BareParams) -> ComplexMatrixSystem {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    let vg = p.v_g;
    let h = Complex64::new(p.h, 0.0);
    let half_h = h / 2.0;
    let atom = Complex64::new(-p.delta, -p.gamma_q);
    #[rustfmt::skip]
    let a = vec![
        -i * vg, z,       h,
        z,       -i * vg, h,
        half_h,  half_h,  atom,
    ];
    let b = vec![-i * vg, z, -half_h];
    ComplexMatrixSystem {
        n: 3,
        a,
        b,
        labels: &BARE_LABELS,
    }
}

pub fn build_cavity_system(p: &CavityParams) -> ComplexMatrixSystem {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    let vg = p.v_g;
    let h = Complex64::new(p.h, 0.0);
    let v = Complex64::new(p.v, 0.0);
    let g = Complex64::new(p.g, 0.0);
    let (half_h, half_v) = (h / 2.0, v / 2.0);
    let atom = Complex64::new(-p.delta, -p.gamma_q);
    let mode = Complex64::new(-p.delta_c, -p.gamma_c);
    #[rustfmt::skip]
    let a = vec![
        -i * vg, z,       h,    v,    z,
        z,       -i * vg, h,    z,    v,
        half_v,  z,       g,    mode, z,
        z,       half_v,  g,    z,    mode,
        half_h,  half_h,  atom, g,    g,
    ];
    let b = vec![-i * vg, z, -half_v, z, -half_h];
    ComplexMatrixSystem {
        n: 5,
        a,
        b,
        labels: &CAVITY_LABELS,
    }
}

/// Gaussian elimination with partial pivoting on magnitude.
pub fn solve(sys: &ComplexMatrixSystem) -> Result<(ScatterSolution, SolveDiagnostics)> {
    let n = sys.n;
    let mut a = sys.a.clone();
    let mut b = sys.b.clone();
    let mut row_scale: Vec<f64> = (0..n)
        .map(|i| {
            a[i * n..(i + 1) * n]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut pivot_min = f64::INFINITY;
    let mut pivot_max = 0.0_f64;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .expect("non-empty pivot range");
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
            row_scale.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        let magnitude = pivot.norm();
        let scale = row_scale[col];
        if magnitude == 0.0 || magnitude < PIVOT_TOLERANCE * scale {
            return Err(Error::SingularSystem {
                column: col,
                pivot: magnitude,
                scale,
            });
        }
        pivot_min = pivot_min.min(magnitude);
        pivot_max = pivot_max.max(magnitude);

        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let upper = a[col * n + j];
                a[row * n + j] -= factor * upper;
            }
            let upper_b = b[col];
            b[row] -= factor * upper_b;
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: Complex64 = (row + 1..n).map(|j| a[row * n + j] * x[j]).sum();
        x[row] = (b[row] - tail) / a[row * n + row];
    }

    let diagnostics = SolveDiagnostics {
        residual_norm: sys.residual(&x),
        pivot_min,
        condition_estimate: pivot_max / pivot_min,
    };
    let solution = if n == 3 {
        ScatterSolution::bare(x[0], x[1], x[2])
    } else {
        ScatterSolution {
            t: x[0],
            r: x[1],
            e_q: x[2],
            e_a: x[3],
            e_b: x[4],
            flavor: Flavor::Cavity,
        }
    };
    Ok((solution, diagnostics))
}

pub fn solve_bare(p: &BareParams) -> Result<(ScatterSolution, SolveDiagnostics)> {
    p.validate()?;
    solve(&build_bare_system(p))
}

pub fn solve_cavity(p: &CavityParams) -> Result<(ScatterSolution, SolveDiagnostics)> {
    p.validate()?;
    solve(&build_cavity_system(p))
}
