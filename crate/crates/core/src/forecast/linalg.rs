//! Small dense least-squares solver used by the forecasting estimators.

// Index loops mirror the textbook rotation updates more directly than
// iterator chains would.
#![allow(clippy::needless_range_loop)]

/// Solve min ||X·beta - y||2 through the normal equations XᵀX·beta = Xᵀy.
/// Singular systems (e.g. a constant series) get the minimum-norm solution
/// via an eigendecomposition of the symmetric matrix XᵀX.
pub(crate) fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    assert_eq!(rows.len(), y.len(), "one response per row");
    assert!(!rows.is_empty(), "least squares needs at least one row");
    let n = rows[0].len();

    let mut gram = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for (row, &target) in rows.iter().zip(y) {
        debug_assert_eq!(row.len(), n);
        for i in 0..n {
            rhs[i] += row[i] * target;
            for j in 0..n {
                gram[i][j] += row[i] * row[j];
            }
        }
    }
    symmetric_pseudo_solve(gram, &rhs)
}

/// Residual 2-norm of a fitted system.
pub(crate) fn residual_norm(rows: &[Vec<f64>], y: &[f64], beta: &[f64]) -> f64 {
    rows.iter()
        .zip(y)
        .map(|(row, &target)| {
            let predicted: f64 = row.iter().zip(beta).map(|(x, b)| x * b).sum();
            (target - predicted).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// x = V Λ⁺ Vᵀ b for a symmetric positive semi-definite matrix; eigenvalues
/// below a relative tolerance are treated as zero, which yields the
/// minimum-norm solution on rank-deficient systems.
fn symmetric_pseudo_solve(matrix: Vec<Vec<f64>>, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let (eigenvalues, eigenvectors) = jacobi_eigen(matrix);
    let max_eigen = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = max_eigen * 1e-12;

    // Vᵀ b
    let mut projected = vec![0.0; n];
    for (k, slot) in projected.iter_mut().enumerate() {
        for i in 0..n {
            *slot += eigenvectors[i][k] * b[i];
        }
    }
    // Λ⁺
    for (value, slot) in eigenvalues.iter().zip(projected.iter_mut()) {
        if value.abs() > tolerance && *value != 0.0 {
            *slot /= value;
        } else {
            *slot = 0.0;
        }
    }
    // V (Λ⁺ Vᵀ b)
    let mut x = vec![0.0; n];
    for (i, slot) in x.iter_mut().enumerate() {
        for k in 0..n {
            *slot += eigenvectors[i][k] * projected[k];
        }
    }
    x
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues and the matrix of eigenvectors (as columns), so that
/// A = V Λ Vᵀ. Converges quadratically; matrices here are tiny (p+1 ≤ ~10).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n <= 1 {
        return (a.iter().enumerate().map(|(i, row)| row.get(i).copied().unwrap_or(0.0)).collect(), v);
    }

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < 1e-300_f64.max(frobenius(&a) * 1e-15) {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/columns p and q of A.
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                // Accumulate the rotation into V.
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flat_map(|row| row.iter()).map(|x| x * x).sum::<f64>().sqrt()
}
