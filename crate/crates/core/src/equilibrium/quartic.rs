use num_complex::Complex64;

use super::EquilibriumError;

/// One root of the equilibrium polynomial with its backward error.
#[derive(Debug, Clone, Copy)]
pub struct QuarticRoot {
    pub value: Complex64,
    /// `|p(root)|` on the original (untrimmed) coefficients.
    pub residual: f64,
}

/// All complex roots of `E₀ + E₁C + E₂C² + E₃C³ + E₄C⁴`.
///
/// Leading zeros are trimmed (an `E₄ = 0` quartic is solved as a cubic, and
/// so on); the roots are found by Durand–Kerner simultaneous iteration and
/// each is refined by one Newton step. An identically-zero polynomial is an
/// error; a (nonzero) constant has no roots.
pub fn solve_quartic(coefficients: &[f64; 5]) -> Result<Vec<QuarticRoot>, EquilibriumError> {
    let scale = coefficients.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(EquilibriumError::ZeroPolynomial);
    }
    // trim leading zeros relative to the coefficient scale
    let mut degree = 4;
    while degree > 0 && coefficients[degree].abs() <= scale * 1e-300 {
        degree -= 1;
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<f64> =
        coefficients[..=degree].iter().map(|c| c / coefficients[degree]).collect();

    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(monic[degree], 0.0);
        for k in (0..degree).rev() {
            acc = acc * z + monic[k];
        }
        acc
    };
    let eval_derivative = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(degree as f64 * monic[degree], 0.0);
        for k in (1..degree).rev() {
            acc = acc * z + k as f64 * monic[k];
        }
        acc
    };

    // Durand–Kerner from points spread on a circle enclosing all roots
    let radius = 1.0 + monic[..degree].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let mut converged = false;
    for _ in 0..500 {
        let mut max_shift = 0.0_f64;
        for k in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge apart and continue
                roots[k] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_shift = f64::INFINITY;
                continue;
            }
            let shift = eval(roots[k]) / denom;
            roots[k] -= shift;
            max_shift = max_shift.max(shift.norm() / (1.0 + roots[k].norm()));
        }
        if max_shift < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged || roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(EquilibriumError::RootsDiverged);
    }

    // one Newton step per root, then report the backward error on the
    // original coefficients
    let eval_original = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(coefficients[degree], 0.0);
        for k in (0..degree).rev() {
            acc = acc * z + coefficients[k];
        }
        acc
    };
    Ok(roots
        .into_iter()
        .map(|mut z| {
            let dp = eval_derivative(z);
            if dp.norm() > 1e-300 {
                z -= eval(z) / dp;
            }
            QuarticRoot { value: z, residual: eval_original(z).norm() }
        })
        .collect())
}

/// True when the root counts match and every root of one set has a partner
/// within `tol` in the other (symmetric Hausdorff check).
pub fn roots_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let one_sided = |from: &[Complex64], to: &[Complex64]| {
        from.iter().all(|x| to.iter().any(|y| (x - y).norm() <= tol))
    };
    one_sided(a, b) && one_sided(b, a)
}
