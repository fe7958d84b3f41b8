//! Lyapunov, Stein and triangular Sylvester solvers via Schur reduction and
//! column back-substitution.

use num_complex::Complex64;

use super::{ensure_finite, real_of, schur, to_complex, CMat, RMat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LyapunovKind {
    /// `A X + X A^H + Q = 0`
    Continuous,
    /// `A X A^H - X + Q = 0`
    Discrete,
}

pub fn solve_lyapunov(a: &CMat, q: &CMat, kind: LyapunovKind) -> Result<CMat> {
    ensure_finite(a, "lyapunov A")?;
    ensure_finite(q, "lyapunov Q")?;
    let n = a.nrows();
    if a.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(Error::Dimension(format!(
            "lyapunov: A is {}x{}, Q is {}x{}",
            n,
            a.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }

    let dec = schur(a)?;
    let t = &dec.t;
    let qt = dec.q.adjoint() * q * &dec.q;
    let scale = t.norm().max(1.0);

    // T Y + Y T^H + Q~ = 0  (continuous), columns solved from the right:
    //   (T + conj(t_jj) I) y_j = -q_j - sum_{k>j} conj(t_jk) y_k
    // T Y T^H - Y + Q~ = 0  (discrete):
    //   (conj(t_jj) T - I) y_j = -q_j - T sum_{k>j} conj(t_jk) y_k
    let mut y = CMat::zeros(n, n);
    for j in (0..n).rev() {
        let mut rhs = -qt.column(j).clone_owned();
        let mut acc = nalgebra::DVector::<Complex64>::zeros(n);
        for k in j + 1..n {
            let w = t[(j, k)].conj();
            if w.norm() != 0.0 {
                acc += y.column(k) * w;
            }
        }
        let tjj = t[(j, j)].conj();
        match kind {
            LyapunovKind::Continuous => {
                rhs -= acc;
                let col = triangular_shift_solve(t, tjj, Complex64::new(1.0, 0.0), &rhs, scale)?;
                y.set_column(j, &col);
            }
            LyapunovKind::Discrete => {
                rhs -= t * acc;
                // (tjj * T - I) y_j = rhs
                let col = triangular_shift_solve_scaled(t, tjj, &rhs, scale)?;
                y.set_column(j, &col);
            }
        }
    }
    Ok(&dec.q * y * dec.q.adjoint())
}

/// Solves `(T + shift * mul I) x = b` with `T` upper triangular; here `mul`
/// keeps the continuous form `(T + conj(t_jj) I)`.
fn triangular_shift_solve(
    t: &CMat,
    shift: Complex64,
    mul: Complex64,
    b: &nalgebra::DVector<Complex64>,
    scale: f64,
) -> Result<nalgebra::DVector<Complex64>> {
    let n = t.nrows();
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= t[(i, k)] * x[k];
        }
        let d = t[(i, i)] + shift * mul;
        if d.norm() <= 1e-14 * scale {
            return Err(Error::SingularEquation(format!(
                "lyapunov spectral condition violated: |t_ii + shift| = {:.3e}",
                d.norm()
            )));
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// Solves `(w T - I) x = b` with `T` upper triangular.
fn triangular_shift_solve_scaled(
    t: &CMat,
    w: Complex64,
    b: &nalgebra::DVector<Complex64>,
    scale: f64,
) -> Result<nalgebra::DVector<Complex64>> {
    let n = t.nrows();
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= w * t[(i, k)] * x[k];
        }
        let d = w * t[(i, i)] - Complex64::ONE;
        if d.norm() <= 1e-14 * scale.max(1.0) {
            return Err(Error::SingularEquation(format!(
                "stein spectral condition violated: |w t_ii - 1| = {:.3e}",
                d.norm()
            )));
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// Real-coefficient convenience wrapper. The exact solution of a real
/// Lyapunov equation is real; roundoff from the complex Schur path is dropped
/// after an explicit residue check, and the result is symmetrized.
pub fn solve_lyapunov_real(a: &RMat, q: &RMat, kind: LyapunovKind) -> Result<RMat> {
    let x = solve_lyapunov(&to_complex(a), &to_complex(q), kind)?;
    let x = real_of(&x, 1e-7, "lyapunov solution")?;
    Ok((&x + x.transpose()) * 0.5)
}

/// Solves `T11 Z - Z T22 = C` with both coefficient blocks upper triangular,
/// as produced by an ordered Schur decomposition. Used to decouple spectral
/// blocks; requires the spectra of T11 and T22 to be disjoint.
pub fn solve_sylvester_triangular(t11: &CMat, t22: &CMat, c: &CMat) -> Result<CMat> {
    let (p, q) = (t11.nrows(), t22.nrows());
    if t11.ncols() != p || t22.ncols() != q || c.nrows() != p || c.ncols() != q {
        return Err(Error::Dimension("sylvester: inconsistent block sizes".into()));
    }
    let scale = (t11.norm() + t22.norm()).max(1.0);
    let mut z = CMat::zeros(p, q);
    for j in 0..q {
        // (T11 - t22_jj I) z_j = c_j + sum_{k<j} z_k t22_kj
        let mut rhs = c.column(j).clone_owned();
        for k in 0..j {
            let w = t22[(k, j)];
            if w.norm() != 0.0 {
                rhs += z.column(k) * w;
            }
        }
        let col = triangular_shift_solve(t11, -t22[(j, j)], Complex64::ONE, &rhs, scale)?;
        z.set_column(j, &col);
    }
    Ok(z)
}
