//! Dense linear algebra kernels the rest of the crate is built on.
//!
//! nalgebra supplies storage, arithmetic and LU; the decompositions that the
//! pipeline's accuracy hinges on (SVD with reliable small singular values,
//! complex Schur with eigenvalue reordering, matrix exponential, Lyapunov and
//! Stein solvers) are implemented here so their tolerances and failure modes
//! are under our control.

mod expm;
mod lyapunov;
mod schur;
mod svd;
mod symeig;

pub use expm::expm;
pub use lyapunov::{solve_lyapunov, solve_lyapunov_real, solve_sylvester_triangular, LyapunovKind};
pub use schur::{ordered_schur, schur, SchurResult};
pub use svd::{svd, svd_real, SvdResult};
pub use symeig::sym_eig;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

pub fn ensure_finite(a: &CMat, what: &str) -> Result<()> {
    if a.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn ensure_finite_real(a: &RMat, what: &str) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Drops an imaginary part that should only hold roundoff. Errors when the
/// relative imaginary residue exceeds `tol`.
pub fn real_of(a: &CMat, tol: f64, what: &str) -> Result<RMat> {
    let scale = a.norm().max(1e-300);
    let imag_norm = a.map(|x| x.im).norm();
    if imag_norm > tol * scale {
        return Err(Error::NumericFailure {
            op: "real_of",
            detail: format!("{what}: imaginary residue {:.3e} (relative)", imag_norm / scale),
        });
    }
    Ok(a.map(|x| x.re))
}

/// LU solve of `A X = B`, complex square `A`.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "solve: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::SingularEquation("LU solve: singular matrix".into()))
}

pub fn solve_real(a: &RMat, b: &RMat) -> Result<RMat> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "solve_real: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::SingularEquation("LU solve: singular matrix".into()))
}

/// 2-norm condition number, via the Jacobi SVD.
pub fn cond2(a: &CMat) -> Result<f64> {
    let dec = svd(a)?;
    let max = dec.singular_values.first().copied().unwrap_or(0.0);
    let min = dec.singular_values.last().copied().unwrap_or(0.0);
    if min == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(max / min)
    }
}

/// `||Q^H Q - I||_F`, for checking unitarity in tests and guards.
pub fn unitary_residual(q: &CMat) -> f64 {
    let n = q.ncols();
    (q.adjoint() * q - CMat::identity(n, n)).norm()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n).map(|i| a + step * i as f64).collect()
        }
    }
}

pub fn logspace(exp_lo: f64, exp_hi: f64, n: usize) -> Vec<f64> {
    linspace(exp_lo, exp_hi, n).into_iter().map(|e| 10f64.powf(e)).collect()
}
