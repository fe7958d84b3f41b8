//! Cyclic Jacobi eigensolver for real symmetric matrices. Used on Gramians,
//! where the orthogonality of the eigenbasis matters more than speed.

use super::{ensure_finite_real, RMat};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Returns (eigenvalues descending, orthogonal V) with `A = V diag(w) V^T`.
pub fn sym_eig(a: &RMat) -> Result<(Vec<f64>, RMat)> {
    ensure_finite_real(a, "sym_eig input")?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("sym_eig: matrix is {}x{}", n, a.ncols())));
    }
    let sym_res = (a - a.transpose()).norm();
    if sym_res > 1e-10 * a.norm().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "sym_eig: matrix is not symmetric (residual {:.3e})",
            sym_res
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), RMat::zeros(0, 0)));
    }

    let mut m = (a + a.transpose()) * 0.5;
    let mut v = RMat::identity(n, n);
    let mut converged = false;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                if apq.abs() <= 1e-15 * (app.abs() * aqq.abs()).sqrt().max(f64::MIN_POSITIVE) {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = cs * mkp - sn * mkq;
                    m[(k, q)] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = cs * mpk - sn * mqk;
                    m[(q, k)] = sn * mpk + cs * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { op: "jacobi sym_eig", iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap());
    let w: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vs = RMat::zeros(n, n);
    for (pos, &idx) in order.iter().enumerate() {
        vs.set_column(pos, &v.column(idx));
    }
    Ok((w, vs))
}
