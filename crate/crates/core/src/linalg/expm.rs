//! Matrix exponential by Pade [13/13] approximation with scaling and squaring.

use super::{ensure_finite_real, solve_real, RMat};
use crate::error::{Error, Result};

const THETA_13: f64 = 5.371920351148152;

#[rustfmt::skip]
const B: [f64; 14] = [
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
    33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
];

pub fn expm(a: &RMat) -> Result<RMat> {
    ensure_finite_real(a, "expm input")?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("expm: matrix is {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(RMat::zeros(0, 0));
    }

    // 1-norm controls the scaling power
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let s = if norm1 > THETA_13 {
        (norm1 / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = a / 2f64.powi(s as i32);

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let eye = RMat::identity(n, n);

    let u_inner = &a6 * (B[13] * &a6 + B[11] * &a4 + B[9] * &a2)
        + B[7] * &a6
        + B[5] * &a4
        + B[3] * &a2
        + B[1] * &eye;
    let u = &a * u_inner;
    let v = &a6 * (B[12] * &a6 + B[10] * &a4 + B[8] * &a2)
        + B[6] * &a6
        + B[4] * &a4
        + B[2] * &a2
        + B[0] * &eye;

    let mut r = solve_real(&(&v - &u), &(&v + &u))
        .map_err(|_| Error::NumericFailure { op: "expm", detail: "Pade denominator singular".into() })?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
