//! Brute-force reference implementations used to certify the production
//! code. None of them shares a code path with what it checks: projections
//! are sort-based, assignments exhaustive, eigenpairs come from Jacobi
//! rotations and quadrature rules from the Golub-Welsch eigenproblem.

use crate::herding::{DiscreteMeasure, Kernel, Measure};

/// Euclidean projection onto the probability simplex (sort and threshold).
pub fn simplex_projection_oracle(x0: &[f64]) -> Vec<f64> {
    let mut u = x0.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumulative += uj;
        let t = (cumulative - 1.0) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    x0.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Minimum-cost permutation by enumerating all `n!` permutations (`n <= 8`).
/// Ties keep the lexicographically first permutation in Heap's order.
pub fn assignment_bruteforce(cost: &[f64], n: usize) -> Vec<usize> {
    assert!(n <= 8, "exhaustive assignment limited to n <= 8");
    assert_eq!(cost.len(), n * n);
    let mut perm: Vec<usize> = (0..n).collect();
    let total = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum::<f64>();
    let mut best = perm.clone();
    let mut best_cost = total(&perm);
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let t = total(&perm);
            if t < best_cost {
                best_cost = t;
                best = perm.clone();
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending and the matching unit eigenvectors.
pub fn dense_symmetric_eigen(g: &[f64], n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(g.len(), n * n);
    let mut a = g.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k * n + i]).collect()).collect();
    (values, vectors)
}

/// Smallest eigenvalue of a symmetric matrix and a unit eigenvector.
pub fn dense_min_eigenpair(g: &[f64], n: usize) -> (f64, Vec<f64>) {
    let (values, mut vectors) = dense_symmetric_eigen(g, n);
    (values[0], vectors.swap_remove(0))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` from the eigenpairs of the
/// Jacobi matrix of the Legendre recurrence: nodes are the eigenvalues and
/// weights twice the squared first eigenvector components.
pub fn gauss_legendre_golub_welsch(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut diag = vec![0.0; n];
    let mut off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    off.push(0.0);
    let mut first = vec![0.0; n];
    if n > 0 {
        first[0] = 1.0;
    }
    tridiagonal_ql(&mut diag, &mut off, &mut first);
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first.into_iter().map(|v| 2.0 * v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix
/// (`d` diagonal, `e[i]` coupling `i` and `i + 1`, `e[n - 1]` unused).
/// Eigenvalues overwrite `d`; `z` is a row of the eigenvector matrix,
/// updated by the same rotations.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        for _iter in 0..200 {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Squared discrepancy by plain tensor quadrature of the given order per
/// axis for both the embedding and its double integral. The double
/// integral costs `order^(2d)` kernel evaluations.
pub fn mmd_numeric_oracle_with_order(kernel: &dyn Kernel, measure: &Measure, xi: &DiscreteMeasure, order: usize) -> f64 {
    let (t, w) = gauss_legendre_golub_welsch(order);
    let d = measure.dim();
    let mut grid: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..d {
        grid = grid
            .into_iter()
            .flat_map(|(p, pw)| {
                t.iter().zip(&w).map(move |(&ti, &wi)| {
                    let mut q = p.clone();
                    q.push(ti);
                    (q, pw * wi)
                })
            })
            .collect();
    }
    let weighted: Vec<(Vec<f64>, f64)> = grid.into_iter().map(|(y, wy)| {
        let dens = measure.density(&y);
        (y, wy * dens)
    }).collect();
    let z = |x: &[f64]| weighted.iter().map(|(y, wy)| wy * kernel.eval(x, y)).sum::<f64>();
    let c_mu: f64 = weighted.iter().map(|(y, wy)| wy * z(y)).sum();
    let mut total = c_mu;
    for (xi_i, wi) in xi.nodes.iter().zip(&xi.weights) {
        total -= 2.0 * wi * z(xi_i);
        for (xj, wj) in xi.nodes.iter().zip(&xi.weights) {
            total += wi * wj * kernel.eval(xi_i, xj);
        }
    }
    total
}

/// [`mmd_numeric_oracle_with_order`] at order 256.
pub fn mmd_numeric_oracle(kernel: &dyn Kernel, measure: &Measure, xi: &DiscreteMeasure) -> f64 {
    mmd_numeric_oracle_with_order(kernel, measure, xi, 256)
}

/// Matérn kernel from its modified-Bessel definition
/// `2^{1-nu} / Gamma(nu) s^nu K_nu(s)`, `s = sqrt(2 nu) r / rho`, with
/// `K_nu(s) = ∫_0^∞ exp(-s cosh t) cosh(nu t) dt` by the trapezoid rule.
/// `nu` must be a positive multiple of 1/2.
pub fn matern_bessel_form(nu: f64, rho: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let s = (2.0 * nu).sqrt() * r / rho;
    let upper = (60.0 / s).max(1.0).acosh() + 1.0;
    let h = 1e-3;
    let steps = (upper / h).ceil() as usize;
    let f = |t: f64| (-s * t.cosh()).exp() * (nu * t).cosh();
    let mut k_nu = 0.5 * (f(0.0) + f(steps as f64 * h));
    for i in 1..steps {
        k_nu += f(i as f64 * h);
    }
    k_nu *= h;
    2f64.powf(1.0 - nu) / gamma_half_integer(nu) * s.powf(nu) * k_nu
}

fn gamma_half_integer(x: f64) -> f64 {
    let twice = (2.0 * x).round();
    assert!(twice >= 1.0 && (2.0 * x - twice).abs() < 1e-12, "gamma only for positive half-integers");
    let (mut g, mut a) = if twice as u64 % 2 == 1 { (std::f64::consts::PI.sqrt(), 0.5) } else { (1.0, 1.0) };
    while a < x - 1e-9 {
        g *= a;
        a += 1.0;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herding::{GaussLegendre, KernelKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_examples() {
        assert_eq!(simplex_projection_oracle(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
        assert_eq!(simplex_projection_oracle(&[2.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn projection_matches_grid_search() {
        let x0 = [0.6, 0.6, -0.2];
        let p = simplex_projection_oracle(&x0);
        let dist = |v: [f64; 3]| v.iter().zip(&x0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let m = 1000;
        let mut best = f64::INFINITY;
        for i in 0..=m {
            for j in 0..=(m - i) {
                let v = [i as f64 / m as f64, j as f64 / m as f64, (m - i - j) as f64 / m as f64];
                best = best.min(dist(v));
            }
        }
        assert!((dist([p[0], p[1], p[2]]) - best).abs() < 1e-5);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn assignment_small_cases() {
        assert_eq!(assignment_bruteforce(&[0.0, 1.0, 1.0, 0.0], 2), vec![0, 1]);
        assert_eq!(assignment_bruteforce(&[1.0, 0.0, 0.0, 1.0], 2), vec![1, 0]);
        assert_eq!(assignment_bruteforce(&[3.0], 1), vec![0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cost: Vec<f64> = (0..16).map(|_| rng.random::<f64>()).collect();
        let p = assignment_bruteforce(&cost, 4);
        let mut sorted = p.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn eigen_examples() {
        let (l, v) = dense_min_eigenpair(&[1.0, 0.0, 0.0, -2.0], 2);
        assert_eq!(l, -2.0);
        assert!(v[0].abs() < 1e-15 && (v[1].abs() - 1.0).abs() < 1e-15);
        let (l, v) = dense_min_eigenpair(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], 3);
        assert_eq!(l, 1.0);
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 7;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = rng.random_range(-1.0..1.0);
                g[i * n + j] = x;
                g[j * n + i] = x;
            }
        }
        let (values, vectors) = dense_symmetric_eigen(&g, n);
        for (l, v) in values.iter().zip(&vectors) {
            for i in 0..n {
                let gv: f64 = (0..n).map(|j| g[i * n + j] * v[j]).sum();
                assert!((gv - l * v[i]).abs() < 1e-12);
            }
        }
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn golub_welsch_matches_newton_rule() {
        let (nodes, weights) = gauss_legendre_golub_welsch(20);
        let rule = GaussLegendre::new(20);
        for i in 0..20 {
            assert!((nodes[i] - rule.nodes[i]).abs() < 1e-13);
            assert!((weights[i] - rule.weights[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn numeric_mmd_reference_and_convergence() {
        let k = KernelKind::Gaussian.kernel();
        let m = Measure::uniform(1).unwrap();
        let xi = DiscreteMeasure::dirac(vec![0.0]);
        let v = mmd_numeric_oracle(k.as_ref(), &m, &xi);
        assert!((v - 0.143013).abs() < 1e-6, "{v}");
        let doubled = mmd_numeric_oracle_with_order(k.as_ref(), &m, &xi, 512);
        assert!((v - doubled).abs() < 1e-9);
    }

    #[test]
    fn bessel_form_limits() {
        assert_eq!(matern_bessel_form(1.5, 3f64.sqrt(), 0.0), 1.0);
        assert!((gamma_half_integer(1.5) - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half_integer(3.0) - 2.0).abs() < 1e-15);
    }
}
