use super::LinearMinimizationOracle;
use crate::atom::Atom;
use crate::error::{Error, Result};

/// Unit `l_p` sphere point minimizing `<c, v>`:
/// `v_i = -sign(c_i) |c_i|^{1/(p-1)} / ||(|c_j|^{1/(p-1)})_j||_p`.
pub fn lp_ball_lmo(c: &[f64], p: f64) -> Result<Atom> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::config(format!("l_p ball needs 1 < p < inf, got {p}")));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("l_p direction"));
    }
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let q = 1.0 / (p - 1.0);
    let mags: Vec<f64> = c.iter().map(|v| (v.abs() / scale).powf(q)).collect();
    let norm = mags.iter().map(|m| m.powf(p)).sum::<f64>().powf(1.0 / p);
    let v = c
        .iter()
        .zip(&mags)
        .map(|(ci, m)| if *ci > 0.0 { -m / norm } else if *ci < 0.0 { m / norm } else { 0.0 })
        .collect();
    Atom::dense(v)
}

/// `{ x : ||x||_p <= 1 }` in `R^n`.
#[derive(Debug, Clone)]
pub struct LpBall {
    n: usize,
    p: f64,
}

impl LpBall {
    pub fn new(n: usize, p: f64) -> Self {
        LpBall { n, p }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl LinearMinimizationOracle for LpBall {
    fn name(&self) -> &str {
        "lp-ball"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn minimize(&self, direction: &[f64]) -> Result<Atom> {
        if direction.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: direction.len() });
        }
        lp_ball_lmo(direction, self.p)
    }

    /// Between antipodal points: `2 n^{1/2 - 1/p}` for `p > 2`, else 2.
    fn diameter(&self) -> f64 {
        2.0 * (self.n as f64).powf((0.5 - 1.0 / self.p).max(0.0))
    }
}
