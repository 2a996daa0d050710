use nalgebra::{DMatrix, DVector};

use super::LearnError;

/// Options for [`solve_nnls_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct NnlsOptions {
    /// Dual-feasibility tolerance; defaults to `10·ε·max(G_ii)·max(m,n)`.
    pub tolerance: Option<f64>,
    /// Iteration cap; defaults to `3·n + 30`.
    pub max_iterations: Option<usize>,
}

/// A non-negative least squares solution.
#[derive(Debug, Clone)]
pub struct NnlsSolution {
    /// `K ≥ 0` minimising `‖A·K − b‖₂`.
    pub coefficients: DVector<f64>,
    /// `‖A·K − b‖₂` at the solution.
    pub residual: f64,
    pub iterations: usize,
    /// Tolerance the KKT conditions were enforced at: positive coefficients
    /// have `|∇_i| ≤ tol`, zero coefficients have `∇_i ≥ −tol` where
    /// `∇ = Aᵀ(A·K − b)`.
    pub kkt_tolerance: f64,
}

/// Lawson–Hanson active-set non-negative least squares with default options.
pub fn solve_nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<NnlsSolution, LearnError> {
    solve_nnls_with(a, b, &NnlsOptions::default())
}

/// Lawson–Hanson active-set NNLS.
///
/// Works off the Gram system `G = AᵀA`, `c = Aᵀb`; the passive-set
/// least-squares subproblems are solved by SVD pseudo-inverse, which keeps
/// the iteration stable when the library contains collinear columns. Any
/// matrix shape is accepted (more columns than rows included).
pub fn solve_nnls_with(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    options: &NnlsOptions,
) -> Result<NnlsSolution, LearnError> {
    let (m, n) = a.shape();
    if n == 0 || m == 0 {
        return Ok(NnlsSolution {
            coefficients: DVector::zeros(n),
            residual: b.norm(),
            iterations: 0,
            kkt_tolerance: 0.0,
        });
    }
    let gram = a.transpose() * a;
    let atb = a.transpose() * b;

    let max_diag = (0..n).map(|i| gram[(i, i)]).fold(0.0_f64, f64::max);
    let tol = options
        .tolerance
        .unwrap_or(10.0 * f64::EPSILON * max_diag * m.max(n) as f64);
    let max_iter = options.max_iterations.unwrap_or(3 * n + 30);

    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let mut banned = vec![false; n];
    let mut w = atb.clone();
    let mut iterations = 0;

    loop {
        // most positive dual among candidate columns
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if passive[i] || banned[i] {
                continue;
            }
            if w[i] > tol && best.is_none_or(|(_, wv)| w[i] > wv) {
                best = Some((i, w[i]));
            }
        }
        let Some((enter, _)) = best else {
            break;
        };
        passive[enter] = true;

        loop {
            iterations += 1;
            if iterations > max_iter {
                let residual = (a * &x - b).norm();
                return Err(LearnError::IterationCap {
                    cap: max_iter,
                    residual,
                    best: x.iter().copied().collect(),
                });
            }
            let support: Vec<usize> =
                (0..n).filter(|&i| passive[i]).collect();
            let z = passive_solve(&gram, &atb, &support);

            if z.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (slot, &i) in support.iter().enumerate() {
                    x[i] = z[slot];
                }
                banned.fill(false);
                break;
            }

            // interpolate towards z until the first coefficient hits zero
            let mut alpha = f64::INFINITY;
            let mut pivot = usize::MAX;
            for (slot, &i) in support.iter().enumerate() {
                if z[slot] <= 0.0 {
                    let t = x[i] / (x[i] - z[slot]);
                    if t < alpha {
                        alpha = t;
                        pivot = i;
                    }
                }
            }
            if pivot == usize::MAX || !alpha.is_finite() {
                // non-finite subproblem solution; drop the entering column
                passive[enter] = false;
                banned[enter] = true;
                break;
            }
            let no_progress = alpha <= 0.0;
            for (slot, &i) in support.iter().enumerate() {
                x[i] += alpha * (z[slot] - x[i]);
            }
            x[pivot] = 0.0;
            passive[pivot] = false;
            for &i in &support {
                if passive[i] && x[i] <= 0.0 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if no_progress && pivot == enter {
                // the entering column was ejected without moving x: a
                // numerically degenerate candidate, skip it until x changes
                banned[enter] = true;
                break;
            }
        }
        w = &atb - &gram * &x;
    }

    let residual = (a * &x - b).norm();
    Ok(NnlsSolution { coefficients: x, residual, iterations, kkt_tolerance: tol })
}

/// Least-squares solution of the passive subproblem `A_P z ≈ b` through the
/// Gram system, by SVD pseudo-inverse.
fn passive_solve(gram: &DMatrix<f64>, atb: &DVector<f64>, support: &[usize]) -> Vec<f64> {
    let p = support.len();
    let mut gpp = DMatrix::<f64>::zeros(p, p);
    let mut cp = DVector::<f64>::zeros(p);
    for (ri, &i) in support.iter().enumerate() {
        cp[ri] = atb[i];
        for (ci, &j) in support.iter().enumerate() {
            gpp[(ri, ci)] = gram[(i, j)];
        }
    }
    let svd = gpp.svd(true, true);
    let max_sv = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let eps = (max_sv * 1e-12).max(f64::MIN_POSITIVE);
    match svd.solve(&cp, eps) {
        Ok(z) => z.iter().copied().collect(),
        Err(_) => vec![0.0; p],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn clamps_negative_unconstrained_solution() {
        // A = I, b = (1, −1): K = (1, 0)
        let a = DMatrix::identity(2, 2);
        let b = DVector::from_vec(vec![1.0, -1.0]);
        let sol = solve_nnls(&a, &b).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-12);
        assert_eq!(sol.coefficients[1], 0.0);
        assert!((sol.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exactly_solvable_system() {
        let a = mat(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![2.0, 1.0]);
        let sol = solve_nnls(&a, &b).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((sol.coefficients[1] - 1.0).abs() < 1e-10);
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn zero_target_gives_zero_solution() {
        let a = mat(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = DVector::zeros(3);
        let sol = solve_nnls(&a, &b).unwrap();
        assert!(sol.coefficients.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn wide_matrix_is_accepted() {
        let a = mat(2, 4, &[1.0, 0.0, 1.0, 0.5, 0.0, 1.0, 1.0, 0.5]);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        let sol = solve_nnls(&a, &b).unwrap();
        assert!(sol.residual < 1e-10);
        assert!(sol.coefficients.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn collinear_columns_converge() {
        // two identical columns: any non-negative split is optimal
        let a = mat(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let b = DVector::from_vec(vec![2.0, 4.0, 6.0]);
        let sol = solve_nnls(&a, &b).unwrap();
        assert!(sol.residual < 1e-9);
        let total = sol.coefficients[0] + sol.coefficients[1];
        assert!((total - 2.0).abs() < 1e-9);
    }

    fn kkt_holds(a: &DMatrix<f64>, b: &DVector<f64>, sol: &NnlsSolution) -> bool {
        let grad = a.transpose() * (a * &sol.coefficients - b);
        let tol = sol.kkt_tolerance.max(1e-9);
        sol.coefficients.iter().zip(grad.iter()).all(|(&x, &g)| {
            if x > 0.0 {
                g.abs() <= tol
            } else {
                g >= -tol
            }
        })
    }

    #[test]
    fn kkt_conditions_hold_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        for trial in 0..100 {
            let m = rng.random_range(1..=6);
            let n = rng.random_range(1..=4);
            let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
            let b = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
            let sol = solve_nnls(&a, &b).unwrap();
            assert!(sol.coefficients.iter().all(|&v| v >= 0.0), "trial {trial}");
            assert!(kkt_holds(&a, &b, &sol), "trial {trial}: KKT violated");
        }
    }

    #[test]
    fn column_permutation_permutes_solution() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let a = DMatrix::from_fn(6, 4, |_, _| rng.random_range(-1.0..1.0));
        let b = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
        let perm = [2_usize, 0, 3, 1];
        let mut ap = DMatrix::zeros(6, 4);
        for (new_col, &old_col) in perm.iter().enumerate() {
            ap.set_column(new_col, &a.column(old_col));
        }
        let sol = solve_nnls(&a, &b).unwrap();
        let sol_p = solve_nnls(&ap, &b).unwrap();
        for (new_col, &old_col) in perm.iter().enumerate() {
            assert!(
                (sol.coefficients[old_col] - sol_p.coefficients[new_col]).abs() < 1e-9,
                "column {old_col} vs permuted {new_col}"
            );
        }
    }
}
