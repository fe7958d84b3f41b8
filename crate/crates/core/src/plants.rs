//! Bundled example plants, also reachable from the command line by name.

use crate::linalg::RMat;
use crate::models::{ContinuousStateSpace, TimeDelayModel};

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// Fourth-order plant with two lightly damped resonances (CLI name
/// `paper-ex1`):
///
/// ```text
/// G(s) = (1 + 0.05 s / sqrt 2 + s^2 / 2)
///        / ((1 + 0.1 s + s^2)(1 + 0.05 s / sqrt 5 + s^2 / 5))
/// ```
pub fn paper_ex1() -> ContinuousStateSpace {
    let num = [1.0, 0.05 / 2f64.sqrt(), 0.5];
    let den = poly_mul(&[1.0, 0.1, 1.0], &[1.0, 0.05 / 5f64.sqrt(), 0.2]);
    ContinuousStateSpace::from_transfer_function(&num, &den)
        .expect("fixed coefficients are valid")
}

/// Two-state network with two internal delays (CLI name `paper-tds`):
/// `x' = A0 x + A1 x(t - 1.2) + A2 x(t - 1.5) + B u`, `y = x_2`.
pub fn paper_tds() -> TimeDelayModel {
    let a0 = RMat::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    let a1 = a0.transpose() * -2.0;
    let a2 = a0.transpose() * -1.75;
    let b = RMat::from_column_slice(2, 1, &[1.0, 0.0]);
    let c = RMat::from_row_slice(1, 2, &[0.0, 1.0]);
    TimeDelayModel::new(a0, a1, a2, b, c, 1.2, 0.3).expect("fixed matrices are valid")
}
