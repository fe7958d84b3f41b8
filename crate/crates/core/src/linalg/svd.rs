//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! Jacobi is slower than bidiagonalization but computes small singular values
//! with high relative accuracy, which matters because rank decisions downstream
//! cut at 1e-10 relative. Works on the transposed problem when rows < cols so
//! the rotation sweep always runs over the short side.

use nalgebra::DVector;
use num_complex::Complex64;

use super::{ensure_finite, CMat, RMat};
use crate::error::{Error, Result};

pub struct SvdResult {
    /// Left singular vectors, unitary, rows x rows.
    pub u: CMat,
    /// Singular values, descending, length min(rows, cols).
    pub singular_values: Vec<f64>,
    /// Right singular vectors, unitary, cols x cols. `A = U diag(s) V^H`.
    pub v: CMat,
}

const MAX_SWEEPS: usize = 64;
const ORTH_TOL: f64 = 1e-14;

pub fn svd(a: &CMat) -> Result<SvdResult> {
    ensure_finite(a, "svd input")?;
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension("svd: empty matrix".into()));
    }
    if rows < cols {
        let t = svd(&a.adjoint())?;
        return Ok(SvdResult { u: t.v, singular_values: t.singular_values, v: t.u });
    }

    let mut g = a.clone();
    let mut v = CMat::identity(cols, cols);
    let mut converged = false;

    for _ in 0..MAX_SWEEPS {
        // cached squared column norms, refreshed each sweep to kill drift
        let mut nsq: Vec<f64> = (0..cols).map(|i| g.column(i).norm_squared()).collect();
        // Columns this far below the largest hold only roundoff. Rotating
        // them against each other chases noise and never converges, so they
        // are flushed to exact zero instead; rank-deficient inputs need this.
        let zero_cut = nsq.iter().cloned().fold(0.0f64, f64::max) * 1e-28;
        for i in 0..cols {
            if nsq[i] <= zero_cut && nsq[i] > 0.0 {
                for k in 0..rows {
                    g[(k, i)] = Complex64::ZERO;
                }
                nsq[i] = 0.0;
            }
        }
        let mut rotated = false;

        for i in 0..cols.saturating_sub(1) {
            for j in i + 1..cols {
                if nsq[i] <= zero_cut || nsq[j] <= zero_cut {
                    continue;
                }
                let apq: Complex64 = g.column(i).dotc(&g.column(j));
                let (app, aqq) = (nsq[i], nsq[j]);
                let off = apq.norm();
                if off <= ORTH_TOL * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;

                // diagonalize the 2x2 Gram block [[app, apq], [conj(apq), aqq]]
                let unit = apq / off;
                let tau = (aqq - app) / (2.0 * off);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let phase = unit.conj();

                for k in 0..rows {
                    let gi = g[(k, i)];
                    let gj = phase * g[(k, j)];
                    g[(k, i)] = cs * gi - sn * gj;
                    g[(k, j)] = sn * gi + cs * gj;
                }
                for k in 0..cols {
                    let vi = v[(k, i)];
                    let vj = phase * v[(k, j)];
                    v[(k, i)] = cs * vi - sn * vj;
                    v[(k, j)] = sn * vi + cs * vj;
                }
                nsq[i] = cs * cs * app + sn * sn * aqq - 2.0 * cs * sn * off;
                nsq[j] = sn * sn * app + cs * cs * aqq + 2.0 * cs * sn * off;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { op: "jacobi svd", iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|i| g.column(i).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut singular_values = Vec::with_capacity(cols);
    let mut u_cols: Vec<DVector<Complex64>> = Vec::with_capacity(cols);
    let mut v_sorted = CMat::zeros(cols, cols);
    for (pos, &idx) in order.iter().enumerate() {
        singular_values.push(norms[idx]);
        v_sorted.set_column(pos, &v.column(idx));
        if norms[idx] > 0.0 {
            u_cols.push(g.column(idx).clone_owned() / Complex64::new(norms[idx], 0.0));
        }
    }

    let u = complete_unitary(u_cols, rows);
    Ok(SvdResult { u, singular_values, v: v_sorted })
}

/// SVD of a real matrix. The rotations preserve exact zero imaginary parts,
/// so the factors come back real.
pub fn svd_real(a: &RMat) -> Result<(RMat, Vec<f64>, RMat)> {
    let dec = svd(&super::to_complex(a))?;
    let u = super::real_of(&dec.u, 1e-12, "svd_real U")?;
    let v = super::real_of(&dec.v, 1e-12, "svd_real V")?;
    Ok((u, dec.singular_values, v))
}

/// Extends a set of orthonormal columns to a full unitary basis of C^n.
/// Works on the complement projector applied to the identity, peeling off its
/// largest residual column each round.
fn complete_unitary(cols: Vec<DVector<Complex64>>, n: usize) -> CMat {
    let k = cols.len();
    let mut u = CMat::zeros(n, n);
    for (i, c) in cols.iter().enumerate() {
        u.set_column(i, c);
    }
    if k == n {
        return u;
    }

    let mut w = CMat::identity(n, n);
    for c in &cols {
        let coeffs = c.adjoint() * &w;
        w -= c * coeffs;
    }
    for have in k..n {
        let best = (0..n)
            .max_by(|&i, &j| {
                w.column(i).norm().partial_cmp(&w.column(j).norm()).unwrap()
            })
            .expect("n > 0");
        let mut q = w.column(best).clone_owned();
        // one re-orthogonalization pass against what we already have
        for i in 0..have {
            let c = u.column(i).clone_owned();
            let proj = c.dotc(&q);
            q -= c * proj;
        }
        let norm = q.norm();
        debug_assert!(norm > 1e-8, "projector complement degenerate");
        q = q.unscale(norm);
        u.set_column(have, &q);
        let coeffs = q.adjoint() * &w;
        w -= &q * coeffs;
    }
    u
}
