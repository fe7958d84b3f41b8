//! Time-domain responses: matrix-exponential stepping for state-space models
//! and a fixed-step RK4 integrator with delayed-state lookup for the delay
//! network. All grids are uniform.

use nalgebra::DVector;

use super::{ContinuousStateSpace, DiscreteStateSpace, TimeDelayModel};
use crate::error::{Error, Result};
use crate::linalg::{expm, RMat};

/// Exact one-step transition pair under a zero-order hold: `x+ = Ad x + Bd u`
/// with `Ad = e^{Ah}`, `Bd = int_0^h e^{At} dt B`, via the augmented block
/// exponential.
pub(crate) fn zoh_matrices(a: &RMat, b: &RMat, h: f64) -> Result<(RMat, RMat)> {
    let n = a.nrows();
    let m = b.ncols();
    let mut aug = RMat::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(a);
    aug.view_mut((0, n), (n, m)).copy_from(b);
    let e = expm(&(aug * h))?;
    Ok((e.view((0, 0), (n, n)).clone_owned(), e.view((0, n), (n, m)).clone_owned()))
}

fn uniform_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("grid t_end={t_end}, dt={dt}")));
    }
    let steps = (t_end / dt).round() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// `y(t_k) = C e^{A t_k} B` on a uniform grid, strictly proper models only.
pub fn impulse_response_continuous(
    g: &ContinuousStateSpace,
    t_end: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    g.require_siso()?;
    if g.d[(0, 0)] != 0.0 {
        return Err(Error::NotStrictlyProper(
            "impulse response would contain a Dirac term".into(),
        ));
    }
    let t = uniform_grid(t_end, dt)?;
    let step = expm(&(&g.a * dt))?;
    let mut x: DVector<f64> = g.b.column(0).clone_owned();
    let mut y = Vec::with_capacity(t.len());
    for _ in &t {
        y.push((&g.c * &x)[(0, 0)]);
        x = &step * x;
    }
    Ok((t, y))
}

/// Unit step response of a state-space model on a uniform grid; exact at the
/// grid points because the input is constant between them.
pub fn step_response_continuous(
    g: &ContinuousStateSpace,
    t_end: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    g.require_siso()?;
    let t = uniform_grid(t_end, dt)?;
    let (ad, bd) = zoh_matrices(&g.a, &g.b, dt)?;
    let mut x = DVector::<f64>::zeros(g.order());
    let mut y = Vec::with_capacity(t.len());
    for _ in &t {
        y.push((&g.c * &x)[(0, 0)] + g.d[(0, 0)]);
        x = &ad * x + bd.column(0);
    }
    Ok((t, y))
}

/// Response to the discrete unit impulse: `y[0] = D`, `y[k] = C A^{k-1} B`.
pub fn impulse_response_discrete(g: &DiscreteStateSpace, k_max: usize) -> Result<Vec<f64>> {
    g.require_siso()?;
    let mut y = Vec::with_capacity(k_max + 1);
    y.push(g.d[(0, 0)]);
    let mut x: DVector<f64> = g.b.column(0).clone_owned();
    for _ in 1..=k_max {
        y.push((&g.c * &x)[(0, 0)]);
        x = &g.a * x;
    }
    Ok(y)
}

/// Sampler, discrete model, zero-order hold in series: samples `u` at the
/// model period `h`, runs the recursion, holds the output on the fine grid.
/// `dt` must subdivide `h` evenly.
pub fn sample_and_hold_output(
    g: &DiscreteStateSpace,
    u: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    g.require_siso()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!("dt = {dt}")));
    }
    let ratio = g.h / dt;
    let q = ratio.round();
    if q < 1.0 || (ratio - q).abs() > 1e-9 * ratio {
        return Err(Error::InvalidInput(format!(
            "dt = {dt} does not evenly subdivide h = {} (ratio {ratio})",
            g.h
        )));
    }
    let q = q as usize;
    if !u.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("input signal".into()));
    }

    let mut x = DVector::<f64>::zeros(g.order());
    let mut y = Vec::with_capacity(u.len());
    let mut held = 0.0;
    for (i, _) in u.iter().enumerate() {
        if i % q == 0 {
            let uk = u[i];
            held = (&g.c * &x)[(0, 0)] + g.d[(0, 0)] * uk;
            x = &g.a * x + g.b.column(0) * uk;
        }
        y.push(held);
    }
    Ok(y)
}

/// Unit step response of the delay network by fixed-step RK4. The delays must
/// be grid-aligned and at least ten steps long; delayed states between nodes
/// come from cubic Hermite interpolation of the stored trajectory and its
/// derivatives. History is zero, the input steps at t = 0.
///
/// Linear interpolation of the delayed state would cap the integrator at
/// second order; the Hermite dense output keeps the full fourth order.
pub fn step_response_tds(
    g: &TimeDelayModel,
    t_end: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !g.is_siso() {
        return Err(Error::NotSiso { outputs: g.c.nrows(), inputs: g.b.ncols() });
    }
    let t = uniform_grid(t_end, dt)?;
    let n_tau = check_aligned(g.tau, dt, "tau")?;
    let _ = check_aligned(g.tau + g.gamma, dt, "tau + gamma")?;
    if n_tau == 0 {
        return Err(Error::InvalidInput("dt must not exceed the delay tau".into()));
    }
    let shortest = if g.gamma > 0.0 { g.tau.min(g.gamma) } else { g.tau };
    if dt > shortest / 10.0 + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "dt = {dt} must not exceed a tenth of the shortest delay {shortest}"
        )));
    }

    let n = g.state_dim();
    let mut traj: Vec<DVector<f64>> = Vec::with_capacity(t.len());
    let mut ders: Vec<DVector<f64>> = Vec::with_capacity(t.len());
    traj.push(DVector::zeros(n));

    let b = g.b.column(0).clone_owned();
    let lookup = |traj: &Vec<DVector<f64>>, ders: &Vec<DVector<f64>>, tq: f64| -> DVector<f64> {
        if tq <= 0.0 {
            return DVector::zeros(n);
        }
        let pos = tq / dt;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        if frac < 1e-12 || i + 1 >= traj.len() {
            traj[i.min(traj.len() - 1)].clone()
        } else {
            let (f2, f3) = (frac * frac, frac * frac * frac);
            let h00 = 2.0 * f3 - 3.0 * f2 + 1.0;
            let h10 = f3 - 2.0 * f2 + frac;
            let h01 = -2.0 * f3 + 3.0 * f2;
            let h11 = f3 - f2;
            &traj[i] * h00
                + &ders[i] * (h10 * dt)
                + &traj[i + 1] * h01
                + &ders[i + 1] * (h11 * dt)
        }
    };
    let deriv = |x: &DVector<f64>, x1: &DVector<f64>, x2: &DVector<f64>| -> DVector<f64> {
        &g.a0 * x + &g.a1 * x1 + &g.a2 * x2 + &b
    };

    let d1 = g.tau;
    let d2 = g.tau + g.gamma;
    let node_der = |traj: &Vec<DVector<f64>>, ders: &Vec<DVector<f64>>, k: usize| {
        // delayed arguments of a node are themselves nodes, no interpolation
        deriv(
            &traj[k],
            &lookup(traj, ders, t[k] - d1),
            &lookup(traj, ders, t[k] - d2),
        )
    };
    let first = node_der(&traj, &ders, 0);
    ders.push(first);

    for k in 0..t.len() - 1 {
        let tk = t[k];
        let x = traj[k].clone();

        let k1 = ders[k].clone();
        let xm1 = &x + &k1 * (dt / 2.0);
        let k2 = deriv(
            &xm1,
            &lookup(&traj, &ders, tk + dt / 2.0 - d1),
            &lookup(&traj, &ders, tk + dt / 2.0 - d2),
        );
        let xm2 = &x + &k2 * (dt / 2.0);
        let k3 = deriv(
            &xm2,
            &lookup(&traj, &ders, tk + dt / 2.0 - d1),
            &lookup(&traj, &ders, tk + dt / 2.0 - d2),
        );
        let xe = &x + &k3 * dt;
        let k4 = deriv(
            &xe,
            &lookup(&traj, &ders, tk + dt - d1),
            &lookup(&traj, &ders, tk + dt - d2),
        );

        traj.push(&x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0));
        let der = node_der(&traj, &ders, k + 1);
        ders.push(der);
    }

    let y = traj.iter().map(|x| (&g.c * x)[(0, 0)]).collect();
    Ok((t, y))
}

fn check_aligned(delay: f64, dt: f64, name: &str) -> Result<usize> {
    let ratio = delay / dt;
    let k = ratio.round();
    if (ratio - k).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "{name} = {delay} is not an integer multiple of dt = {dt}"
        )));
    }
    Ok(k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RMat;

    fn lag() -> ContinuousStateSpace {
        ContinuousStateSpace::new(
            RMat::from_element(1, 1, -1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::zeros(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn continuous_impulse_of_lag_is_decaying_exponential() {
        let (t, y) = impulse_response_continuous(&lag(), 3.0, 0.05).unwrap();
        for (ti, yi) in t.iter().zip(y.iter()) {
            assert!((yi - (-ti).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn continuous_step_of_lag_saturates() {
        let (t, y) = impulse_response_continuous(&lag(), 0.0, 0.1).unwrap();
        assert_eq!(t, vec![0.0]);
        assert_eq!(y.len(), 1);

        let (t, y) = step_response_continuous(&lag(), 8.0, 0.01).unwrap();
        for (ti, yi) in t.iter().zip(y.iter()) {
            assert!((yi - (1.0 - (-ti).exp())).abs() < 1e-11, "t={ti}");
        }
    }

    #[test]
    fn impulse_with_feedthrough_is_rejected() {
        let mut g = lag();
        g.d[(0, 0)] = 2.0;
        assert!(matches!(
            impulse_response_continuous(&g, 1.0, 0.1),
            Err(Error::NotStrictlyProper(_))
        ));
    }

    #[test]
    fn discrete_impulse_recursion() {
        // G_d(z) = 1/(z - 0.5): y = [0, 1, 0.5, 0.25, ...]
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, 0.5),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::zeros(1, 1),
            1.0,
        )
        .unwrap();
        let y = impulse_response_discrete(&g, 5).unwrap();
        assert_eq!(y[0], 0.0);
        for k in 1..=5 {
            assert!((y[k] - 0.5f64.powi(k as i32 - 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn hold_replicates_each_sample_q_times() {
        // memoryless unit gain: y_d[k] = u[kq], held q fine steps
        let g = DiscreteStateSpace::new(
            RMat::zeros(0, 0),
            RMat::zeros(0, 1),
            RMat::zeros(1, 0),
            RMat::from_element(1, 1, 1.0),
            0.4,
        )
        .unwrap();
        let u: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let y = sample_and_hold_output(&g, &u, 0.1).unwrap();
        assert_eq!(y, vec![0.0, 0.0, 0.0, 0.0, 4.0, 4.0, 4.0, 4.0, 8.0, 8.0, 8.0, 8.0]);
    }

    #[test]
    fn hold_rejects_misaligned_grid() {
        let g = DiscreteStateSpace::new(
            RMat::zeros(0, 0),
            RMat::zeros(0, 1),
            RMat::zeros(1, 0),
            RMat::from_element(1, 1, 1.0),
            0.4,
        )
        .unwrap();
        assert!(sample_and_hold_output(&g, &[0.0; 4], 0.3).is_err());
    }

    #[test]
    fn tds_without_delay_terms_reduces_to_double_integrator() {
        // A1 = A2 = 0 keeps only x1' = u, x2' = x1: step response y = t^2/2
        let g = TimeDelayModel::new(
            RMat::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]),
            RMat::zeros(2, 2),
            RMat::zeros(2, 2),
            RMat::from_column_slice(2, 1, &[1.0, 0.0]),
            RMat::from_row_slice(1, 2, &[0.0, 1.0]),
            1.2,
            0.6,
        )
        .unwrap();
        let (t, y) = step_response_tds(&g, 6.0, 0.05).unwrap();
        for (ti, yi) in t.iter().zip(y.iter()) {
            // RK4 integrates the quadratic exactly
            assert!((yi - ti * ti / 2.0).abs() < 1e-10, "t={ti}");
        }
    }

    #[test]
    fn tds_matches_method_of_steps_closed_form() {
        // scalar DDE x' = -x(t-1) + 1, zero history: piecewise polynomial by
        // the method of steps, evaluated here on [0, 4]
        let g = TimeDelayModel::new(
            RMat::zeros(1, 1),
            RMat::from_element(1, 1, -1.0),
            RMat::zeros(1, 1),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            1.0,
            0.5,
        )
        .unwrap();
        let dt = 0.0125;
        let (t, y) = step_response_tds(&g, 4.0, dt).unwrap();
        let exact = |t: f64| -> f64 {
            if t <= 1.0 {
                t
            } else if t <= 2.0 {
                let s = t - 1.0;
                1.0 + s - s * s / 2.0
            } else if t <= 3.0 {
                let s = t - 2.0;
                1.5 - s * s / 2.0 + s * s * s / 6.0
            } else {
                let s = t - 3.0;
                7.0 / 6.0 - s / 2.0 + s * s * s / 6.0 - s * s * s * s / 24.0
            }
        };
        for (ti, yi) in t.iter().zip(y.iter()) {
            assert!((yi - exact(*ti)).abs() < 1e-9, "t = {ti}: {yi} vs {}", exact(*ti));
        }
    }

    #[test]
    fn tds_example_model_is_unstable_with_known_growth_rate() {
        // the characteristic function s^2 + 2 e^{-1.2 s} + 1.75 e^{-1.5 s}
        // has one right-half-plane conjugate pair, near 0.7131 +- 0.9629j
        // (argument-principle count and Newton refinement), so the step
        // response grows like e^{0.7131 t} with period 2 pi / 0.9629
        let g = crate::plants::paper_tds();
        let (t, y) = step_response_tds(&g, 20.0, 0.002).unwrap();
        let window_max = |lo: f64, hi: f64| -> f64 {
            t.iter()
                .zip(y.iter())
                .filter(|(ti, _)| **ti >= lo && **ti < hi)
                .map(|(_, yi)| yi.abs())
                .fold(0.0f64, f64::max)
        };
        let period = 2.0 * std::f64::consts::PI / 0.9629;
        let w1 = window_max(4.0, 4.0 + period);
        let w2 = window_max(4.0 + period, 4.0 + 2.0 * period);
        let expected = (0.7131 * period).exp();
        assert!(
            (w2 / w1 / expected - 1.0).abs() < 0.05,
            "growth per period {} vs {expected}",
            w2 / w1
        );
    }

    #[test]
    fn tds_halving_dt_changes_little() {
        // fourth-order convergence: the horizon is kept moderate because the
        // example model is genuinely unstable and the response grows fast
        let g = crate::plants::paper_tds();
        let (_, y1) = step_response_tds(&g, 12.0, 0.002).unwrap();
        let (_, y2) = step_response_tds(&g, 12.0, 0.001).unwrap();
        let diff = y1
            .iter()
            .enumerate()
            .map(|(i, a)| (a - y2[2 * i]).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-5, "uniform difference {diff}");
    }

    #[test]
    fn tds_misaligned_delay_is_rejected() {
        let g = crate::plants::paper_tds(); // tau = 1.2
        assert!(step_response_tds(&g, 5.0, 0.07).is_err());
    }

    #[test]
    fn tds_overlong_dt_is_rejected() {
        // gamma = 0.3 caps dt at 0.03 even though it divides the delays
        let g = crate::plants::paper_tds();
        assert!(step_response_tds(&g, 5.0, 0.05).is_err());
        assert!(step_response_tds(&g, 5.0, 0.03).is_ok());
    }
}
