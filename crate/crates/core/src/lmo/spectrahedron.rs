use super::LinearMinimizationOracle;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_POWER_ITERATIONS: usize = 200_000;
const SYMMETRY_TOLERANCE: f64 = 1e-10;
const RESIDUAL_TOLERANCE: f64 = 1e-8;

struct PowerRun {
    u: Vec<f64>,
    rayleigh: f64,
    residual: f64,
    converged: bool,
    iterations: usize,
}

/// Power iteration on `s I - G` from `start`, stopping once
/// `||G u - (u^T G u) u|| <= tol`.
fn shifted_power(g: &[f64], n: usize, shift: f64, start: Vec<f64>, tol: f64, cap: usize) -> PowerRun {
    let mut u = start;
    let norm = linalg::norm(&u);
    u.iter_mut().for_each(|x| *x /= norm);
    let mut gu = vec![0.0; n];
    let mut iterations = 0;
    loop {
        linalg::mat_vec(g, n, &u, &mut gu);
        let rayleigh = linalg::dot(&u, &gu);
        let residual = u
            .iter()
            .zip(&gu)
            .map(|(ui, gi)| (gi - rayleigh * ui).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol || iterations >= cap {
            return PowerRun { u, rayleigh, residual, converged: residual <= tol, iterations };
        }
        // u <- (s I - G) u, normalized
        for (ui, gi) in u.iter_mut().zip(&gu) {
            *ui = shift * *ui - gi;
        }
        let norm = linalg::norm(&u);
        if norm == 0.0 {
            return PowerRun { u: gu, rayleigh, residual, converged: false, iterations };
        }
        u.iter_mut().for_each(|x| *x /= norm);
        iterations += 1;
    }
}

/// Unit vector `u` approximating the eigenvector of the smallest
/// eigenvalue of the symmetric matrix `G`, so that `u u^T` minimizes
/// `<G, X>` over the spectrahedron.
///
/// Two deterministic starts are run: `e_1`, and a dense vector that is not
/// orthogonal to any coordinate eigenspace. The lower Rayleigh quotient wins,
/// with `e_1` kept on ties.
pub fn spectrahedron_lmo(g: &[f64], n: usize, max_iterations: usize) -> Result<Atom> {
    if g.len() != n * n || n == 0 {
        return Err(Error::NotSquare { rows: n, cols: if n == 0 { 0 } else { g.len() / n } });
    }
    if !linalg::all_finite(g) {
        return Err(Error::NonFinite("spectrahedron direction"));
    }
    let asym = linalg::max_asymmetry(g, n);
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }
    let frob = linalg::norm(g);
    if frob == 0.0 {
        return Atom::factor(unit(n, 0));
    }
    let tol = RESIDUAL_TOLERANCE * frob;
    let first = shifted_power(g, n, frob, unit(n, 0), tol, max_iterations);
    let dense_start: Vec<f64> = (0..n).map(|i| 1.0 + 1.0 / (i as f64 + 2.0).sqrt()).collect();
    let second = shifted_power(g, n, frob, dense_start, tol, max_iterations);

    let margin = 1e-12 * frob;
    let best = match (first.converged, second.converged) {
        (true, true) => {
            if second.rayleigh < first.rayleigh - margin {
                second
            } else {
                first
            }
        }
        (true, false) if first.rayleigh <= second.rayleigh + margin => first,
        (false, true) => second,
        (_, _) => {
            let worst = if first.converged { second } else { first };
            return Err(Error::EigenNotConverged { iterations: worst.iterations, residual: worst.residual });
        }
    };
    Atom::factor(best.u)
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// `{ X >= 0 : tr X = 1 }` in `n x n` symmetric matrices.
#[derive(Debug, Clone)]
pub struct Spectrahedron {
    n: usize,
    max_iterations: usize,
}

impl Spectrahedron {
    pub fn new(n: usize) -> Self {
        Spectrahedron { n, max_iterations: DEFAULT_POWER_ITERATIONS }
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn side(&self) -> usize {
        self.n
    }
}

impl LinearMinimizationOracle for Spectrahedron {
    fn name(&self) -> &str {
        "spectrahedron"
    }

    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn minimize(&self, direction: &[f64]) -> Result<Atom> {
        spectrahedron_lmo(direction, self.n, self.max_iterations)
    }

    /// `||u u^T - v v^T||_F <= sqrt(2)` for unit `u`, `v`.
    fn diameter(&self) -> f64 {
        2f64.sqrt()
    }

    fn symmetric_matrices(&self) -> bool {
        true
    }
}
