//! Classical discretisation rules, used as comparison baselines: zero-order
//! hold, Tustin (bilinear), and the impulse-invariant map.

use crate::error::{Error, Result};
use crate::linalg::{expm, solve_real, RMat};
use crate::models::{zoh_matrices, ContinuousStateSpace, DiscreteStateSpace};

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("sampling period h = {h}")))
    }
}

/// Zero-order-hold discretisation: exact for inputs constant over each
/// sampling interval. `A_d = e^{Ah}`, `B_d` the held-input integral, `C` and
/// `D` unchanged.
pub fn zoh(g: &ContinuousStateSpace, h: f64) -> Result<DiscreteStateSpace> {
    check_h(h)?;
    let (ad, bd) = zoh_matrices(&g.a, &g.b, h)?;
    DiscreteStateSpace::new(ad, bd, g.c.clone(), g.d.clone(), h)
}

/// Tustin (bilinear) discretisation: `G_d(z) = G((2/h)(z-1)/(z+1))` exactly.
/// Requires `2/h` to not be an eigenvalue of `A`.
pub fn tustin(g: &ContinuousStateSpace, h: f64) -> Result<DiscreteStateSpace> {
    check_h(h)?;
    let n = g.order();
    let eye = RMat::identity(n, n);
    let alpha = 2.0 / h;
    // s = alpha (z-1)/(z+1): A_d = (alpha I - A)^-1 (alpha I + A),
    // B_d = (I + A_d)(alpha I - A)^-1 B, C_d = C, D_d = D + C (alpha I - A)^-1 B
    let pz = &eye * alpha - &g.a;
    let ad = solve_real(&pz, &(&eye * alpha + &g.a)).map_err(|_| {
        Error::SingularEquation("tustin: 2/h is an eigenvalue of A".into())
    })?;
    let pb = solve_real(&pz, &g.b)
        .map_err(|_| Error::SingularEquation("tustin: 2/h is an eigenvalue of A".into()))?;
    let bd = (&eye + &ad) * &pb;
    let dd = &g.d + &g.c * &pb;
    DiscreteStateSpace::new(ad, bd, g.c.clone(), dd, h)
}

/// Impulse-invariant discretisation: the discrete impulse response matches
/// `h g(kh)` for all `k >= 0`. Only defined for strictly proper models.
pub fn impulse_invariant(g: &ContinuousStateSpace, h: f64) -> Result<DiscreteStateSpace> {
    check_h(h)?;
    if g.d.iter().any(|&x| x != 0.0) {
        return Err(Error::NotStrictlyProper(
            "impulse-invariant discretisation requires D = 0".into(),
        ));
    }
    let ad = expm(&(&g.a * h))?;
    let cd = &g.c * &ad * h;
    let dd = &g.c * &g.b * h;
    DiscreteStateSpace::new(ad, g.b.clone(), cd, dd, h)
}
