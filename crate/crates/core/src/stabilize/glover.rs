//! Glover's optimal Hankel-norm construction, applied to the Nehari problem:
//! find the stable system closest in the L-infinity norm to a given antistable
//! one. The discrete problem is transported to continuous time by an exact
//! Möbius map, solved there at truncation index zero, and mapped back.


use crate::error::{Error, Result};
use crate::linalg::{
    schur, solve_lyapunov_real, solve_real, svd_real, to_complex, LyapunovKind, RMat,
};
use crate::models::{ContinuousStateSpace, DiscreteStateSpace};

/// Relative gap under which Hankel values are grouped with the largest one.
pub(crate) const MULTIPLICITY_TOL: f64 = 1e-8;

/// Exact bilinear map z = (alpha + s)/(alpha - s), taking the exterior of the
/// unit disk onto the open right half-plane. State-space form of G_d(z(s)).
pub(crate) fn d2c(g: &DiscreteStateSpace, alpha: f64) -> Result<ContinuousStateSpace> {
    check_alpha(alpha)?;
    let n = g.order();
    if n == 0 {
        return ContinuousStateSpace::new(
            RMat::zeros(0, 0),
            RMat::zeros(0, g.b.ncols()),
            RMat::zeros(g.c.nrows(), 0),
            g.d.clone(),
        );
    }
    let eye = RMat::identity(n, n);
    let p = &eye + &g.a;
    let rhs = {
        let mut m = RMat::zeros(n, n + g.b.ncols());
        m.view_mut((0, 0), (n, n)).copy_from(&(&g.a - &eye));
        m.view_mut((0, n), (n, g.b.ncols())).copy_from(&g.b);
        m
    };
    let sol = solve_real(&p, &rhs).map_err(|_| Error::NumericFailure {
        op: "bilinear d2c",
        detail: "discrete pole at -1 has no finite image under the map".into(),
    })?;
    let pinv_shift = sol.view((0, 0), (n, n)).clone_owned();
    let pinv_b = sol.view((0, n), (n, g.b.ncols())).clone_owned();
    let ac = pinv_shift * alpha;
    let bc = (&eye * alpha - &ac) * &pinv_b;
    let dc = &g.d - &g.c * &pinv_b;
    ContinuousStateSpace::new(ac, bc, g.c.clone(), dc)
}

/// Inverse map s = alpha (z - 1)/(z + 1), returning a discrete model with the
/// given sampling period.
pub(crate) fn c2d(g: &ContinuousStateSpace, alpha: f64, h: f64) -> Result<DiscreteStateSpace> {
    check_alpha(alpha)?;
    let n = g.order();
    if n == 0 {
        return DiscreteStateSpace::new(
            RMat::zeros(0, 0),
            RMat::zeros(0, g.b.ncols()),
            RMat::zeros(g.c.nrows(), 0),
            g.d.clone(),
            h,
        );
    }
    let eye = RMat::identity(n, n);
    let pz = &eye * alpha - &g.a;
    let rhs = {
        let mut m = RMat::zeros(n, n + g.b.ncols());
        m.view_mut((0, 0), (n, n)).copy_from(&(&eye * alpha + &g.a));
        m.view_mut((0, n), (n, g.b.ncols())).copy_from(&g.b);
        m
    };
    let sol = solve_real(&pz, &rhs).map_err(|_| Error::NumericFailure {
        op: "bilinear c2d",
        detail: "continuous pole at alpha has no finite image under the map".into(),
    })?;
    let ad = sol.view((0, 0), (n, n)).clone_owned();
    let pzinv_b = sol.view((0, n), (n, g.b.ncols())).clone_owned();
    let bd = (&eye + &ad) * &pzinv_b;
    let dd = &g.d + &g.c * &pzinv_b;
    DiscreteStateSpace::new(ad, bd, g.c.clone(), dd, h)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("bilinear parameter alpha = {alpha}")))
    }
}

/// Hankel values this far below the largest mark numerically uncontrollable
/// or unobservable states; they are truncated rather than inverted.
const MINIMALITY_CUT: f64 = 1e-12;

/// Balanced realization of a stable continuous system by the square-root
/// method: projection matrices are assembled from Gramian factors, so no
/// near-singular eigenvalue is ever inverted. States with Hankel values below
/// `MINIMALITY_CUT` relative are dropped, which perturbs the transfer by at
/// most twice their sum. Returns (A, B, C) balanced and the kept Hankel
/// values, descending.
fn balance_stable(a: &RMat, b: &RMat, c: &RMat) -> Result<(RMat, RMat, RMat, Vec<f64>)> {
    let p = solve_lyapunov_real(a, &(b * b.transpose()), LyapunovKind::Continuous)?;
    let q = solve_lyapunov_real(&a.transpose(), &(c.transpose() * c), LyapunovKind::Continuous)?;
    let lp = super::gramian_factor(&p)?;
    let lq = super::gramian_factor(&q)?;
    let (u, sv, v) = svd_real(&(lq.transpose() * &lp))?;
    let top = sv.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(Error::NumericFailure {
            op: "glover balance",
            detail: "Hankel spectrum is identically zero".into(),
        });
    }
    let keep = sv.iter().take_while(|&&s| s > top * MINIMALITY_CUT).count();
    let sigma = sv[..keep].to_vec();
    let inv_sqrt = RMat::from_diagonal(&nalgebra::DVector::from_vec(
        sigma.iter().map(|&s| 1.0 / s.sqrt()).collect(),
    ));
    let w = &lq * u.columns(0, keep) * &inv_sqrt;
    let t = &lp * v.columns(0, keep) * &inv_sqrt;
    let bi_residual = (w.transpose() * &t - RMat::identity(keep, keep)).norm();
    if bi_residual > 1e-6 * (keep as f64).sqrt() {
        return Err(Error::NumericFailure {
            op: "glover balance",
            detail: format!("projection lost bi-orthogonality, residual {bi_residual:.3e}"),
        });
    }
    Ok((w.transpose() * a * &t, w.transpose() * b, c * &t, sigma))
}

/// Hankel singular values of the stable continuous system (A, B, C), used by
/// tests to confirm Möbius invariance against the discrete-side spectrum.
#[cfg(test)]
pub(crate) fn continuous_hankel_values(a: &RMat, b: &RMat, c: &RMat) -> Result<Vec<f64>> {
    balance_stable(a, b, c).map(|(_, _, _, s)| s)
}

/// Optimal Nehari extension of an antistable discrete SISO model: the stable
/// model closest to it in L-infinity on the unit circle. The achieved error
/// equals the largest Hankel singular value of the reflected system, and the
/// output order drops by the multiplicity of that value.
pub(crate) fn glover_nehari(gu: &DiscreteStateSpace, alpha: f64) -> Result<DiscreteStateSpace> {
    gu.require_siso()?;
    let n = gu.order();
    if n == 0 {
        return Ok(gu.clone());
    }

    // Continuous antistable image, then conjugate to a stable system H(s) =
    // G_c(-s) on which the Hankel-norm machinery operates.
    let gc = d2c(gu, alpha)?;
    let (ah, bh, ch, dh) = (-&gc.a, -&gc.b, gc.c.clone(), gc.d.clone());
    let (ab, bb, cb, sigma) = balance_stable(&ah, &bh, &ch)?;
    let nb = sigma.len();

    let sigma1 = sigma[0];
    let q = sigma.iter().take_while(|&&s| s >= sigma1 * (1.0 - MULTIPLICITY_TOL)).count();
    let n1 = nb - q;

    // Reorder the balanced states so the sigma1 block sits last.
    let idx: Vec<usize> = (q..nb).chain(0..q).collect();
    let mut a2 = RMat::zeros(nb, nb);
    let mut b2 = RMat::zeros(nb, 1);
    let mut c2 = RMat::zeros(1, nb);
    for i in 0..nb {
        b2[(i, 0)] = bb[(idx[i], 0)];
        c2[(0, i)] = cb[(0, idx[i])];
        for j in 0..nb {
            a2[(i, j)] = ab[(idx[i], idx[j])];
        }
    }
    let sig1: Vec<f64> = (0..n1).map(|i| sigma[idx[i]]).collect();

    let b_tail = b2.view((n1, 0), (q, 1)).clone_owned();
    let c_tail = c2.view((0, n1), (1, q)).clone_owned();
    let c_tail_norm2 = (&c_tail * c_tail.transpose())[(0, 0)];
    if c_tail_norm2 <= 0.0 {
        return Err(Error::NumericFailure {
            op: "glover construction",
            detail: "vanishing C block at the largest Hankel value".into(),
        });
    }
    let u = -(&c_tail * &b_tail)[(0, 0)] / c_tail_norm2;
    // Balancing forces B2 = -C2^T u at sigma1; a large residual means the
    // Gramians were not resolved well enough to trust the construction.
    let structure_residual = (&b_tail + c_tail.transpose() * u).norm();
    if structure_residual > 1e-6 * b_tail.norm().max(1e-300) {
        return Err(Error::NumericFailure {
            op: "glover construction",
            detail: format!("B2 = -C2^T u violated, residual {structure_residual:.3e}"),
        });
    }

    let (w_a, w_b, w_c, w_d);
    if n1 == 0 {
        w_a = RMat::zeros(0, 0);
        w_b = RMat::zeros(0, 1);
        w_c = RMat::zeros(1, 0);
        w_d = &dh - RMat::from_element(1, 1, sigma1 * u);
    } else {
        let a11 = a2.view((0, 0), (n1, n1)).clone_owned();
        let b1 = b2.view((0, 0), (n1, 1)).clone_owned();
        let c1 = c2.view((0, 0), (1, n1)).clone_owned();
        let s1 = RMat::from_diagonal(&nalgebra::DVector::from_vec(sig1.clone()));
        let gamma_inv = RMat::from_diagonal(&nalgebra::DVector::from_vec(
            sig1.iter().map(|&s| 1.0 / (s * s - sigma1 * sigma1)).collect(),
        ));
        w_a = &gamma_inv
            * (a11.transpose() * sigma1 * sigma1 + &s1 * &a11 * &s1
                - c1.transpose() * (sigma1 * u) * b1.transpose());
        w_b = &gamma_inv * (&s1 * &b1 + c1.transpose() * (sigma1 * u));
        w_c = &c1 * &s1 + b1.transpose() * (sigma1 * u);
        w_d = &dh - RMat::from_element(1, 1, sigma1 * u);
    }

    // For truncation index zero the construction must come out all-antistable;
    // its conjugate is then stable, and maps back inside the unit circle.
    if n1 > 0 {
        let dec = schur(&to_complex(&w_a))?;
        for i in 0..n1 {
            if dec.t[(i, i)].re <= 0.0 {
                return Err(Error::NumericFailure {
                    op: "glover construction",
                    detail: format!(
                        "expected antistable correction, found eigenvalue {}",
                        dec.t[(i, i)]
                    ),
                });
            }
        }
    }

    let q_c = ContinuousStateSpace::new(-w_a, -w_b, w_c, w_d)?;
    let q_d = c2d(&q_c, alpha, gu.h)?;
    if !q_d.is_stable()? {
        return Err(Error::NumericFailure {
            op: "glover construction",
            detail: "projected model failed the final stability check".into(),
        });
    }
    Ok(q_d)
}
