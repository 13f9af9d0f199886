//! Small real-polynomial utilities (coefficients stored by ascending power).

/// Evaluate by Horner's rule.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of p(x+1) via binomial expansion.
pub fn shift_by_one(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut out = vec![0.0; n];
    for (k, &c) in coeffs.iter().enumerate() {
        // (x+1)^k = Σ_j C(k,j) x^j
        let mut binom = 1.0_f64;
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot += c * binom;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

/// Coefficients of p(x+1) − p(x).
pub fn difference(coeffs: &[f64]) -> Vec<f64> {
    let shifted = shift_by_one(coeffs);
    shifted
        .iter()
        .zip(coeffs.iter().chain(std::iter::repeat(&0.0)))
        .map(|(a, b)| a - b)
        .collect()
}

/// Antiderivative with zero constant term.
pub fn antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        out[k + 1] = c / (k + 1) as f64;
    }
    out
}

/// Derivative.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs[1..]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (k + 1) as f64)
        .collect()
}

/// Degree after trimming trailing coefficients below `threshold`.
pub fn trimmed_degree(coeffs: &[f64], threshold: f64) -> usize {
    coeffs
        .iter()
        .rposition(|c| c.abs() > threshold)
        .unwrap_or(0)
}

/// Unique interpolating polynomial through the given nodes, as monomial
/// coefficients (Newton divided differences, expanded incrementally).
pub fn newton_interpolate(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let n = xs.len();

    // Divided-difference table, in place.
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }

    // Expand Newton form into monomial coefficients; after step i the
    // basis polynomial (x − x₀)⋯(x − x_{i−1}) occupies basis[..=i].
    let mut coeffs = vec![0.0; n];
    let mut basis = vec![0.0; n];
    basis[0] = 1.0;
    coeffs[0] = dd[0];
    for i in 1..n {
        for k in (1..=i).rev() {
            basis[k] = basis[k - 1] - xs[i - 1] * basis[k];
        }
        basis[0] *= -xs[i - 1];
        for k in 0..=i {
            coeffs[k] += dd[i] * basis[k];
        }
    }
    coeffs
}

/// Falling factorial x(x−1)⋯(x−k+1).
pub fn falling(x: f64, k: usize) -> f64 {
    (0..k).map(|t| x - t as f64).product()
}
