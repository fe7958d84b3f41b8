//! Projection of a possibly unstable discrete model onto the stable subspace:
//! additive stable/antistable decomposition, the cheap L2 truncation that
//! simply discards the antistable term, and the optimal L-infinity (Nehari)
//! projection built on Glover's Hankel-norm construction.

mod glover;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    ordered_schur, solve_lyapunov_real, solve_real, solve_sylvester_triangular, svd_real, sym_eig,
    to_complex, CMat, LyapunovKind, RMat,
};
use crate::models::DiscreteStateSpace;

/// Poles with |p| within this distance of the unit circle make the additive
/// split ill-posed and are rejected.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Bilinear parameters tried in turn when the Nehari construction fails its
/// own optimality certificate.
const ALPHA_RETRIES: [f64; 5] = [1.0, 2.0, 0.5, 4.0, 0.25];

/// Relative tolerance on the internal certificate `achieved error = sigma1`.
const CERTIFICATE_TOL: f64 = 1e-6;

/// Points on the upper unit semicircle used to evaluate the certificate.
const CERTIFICATE_GRID: usize = 4096;

/// Additive decomposition G = G_s + G_u with the feedthrough kept on the
/// stable side and the antistable side strictly proper.
#[derive(Clone, Debug)]
pub struct AdditiveSplit {
    /// All poles strictly inside the unit circle; carries D.
    pub stable: DiscreteStateSpace,
    /// All poles strictly outside the unit circle; D = 0.
    pub antistable: DiscreteStateSpace,
}

/// Hankel singular values of the reflected antistable part, descending, with
/// the multiplicity of the largest value resolved at a fixed tolerance.
#[derive(Clone, Debug)]
pub struct HankelSpectrum {
    /// Non-negative, descending.
    pub values: Vec<f64>,
    /// Number of leading values within relative tolerance 1e-8 of the first.
    pub q: usize,
}

/// Splits a discrete model into its stable and antistable parts by reordering
/// a Schur form and decoupling the off-diagonal block through a Sylvester
/// equation. Fails when any pole sits within `BOUNDARY_TOL` of the circle.
pub fn split_stable_antistable(g: &DiscreteStateSpace) -> Result<AdditiveSplit> {
    let n = g.order();
    let (p_out, m_in) = (g.c.nrows(), g.b.ncols());
    let empty = |d: RMat| {
        DiscreteStateSpace::new(RMat::zeros(0, 0), RMat::zeros(0, m_in), RMat::zeros(p_out, 0), d, g.h)
    };
    if n == 0 {
        return Ok(AdditiveSplit {
            stable: g.clone(),
            antistable: empty(RMat::zeros(p_out, m_in))?,
        });
    }
    for p in g.poles()? {
        if (p.norm() - 1.0).abs() <= BOUNDARY_TOL {
            return Err(Error::BoundaryPole { pole: p, tol: BOUNDARY_TOL });
        }
    }
    let (dec, ks) = ordered_schur(&to_complex(&g.a), |z| z.norm() < 1.0)?;
    if ks == n {
        return Ok(AdditiveSplit {
            stable: g.clone(),
            antistable: empty(RMat::zeros(p_out, m_in))?,
        });
    }
    if ks == 0 {
        return Ok(AdditiveSplit {
            stable: empty(g.d.clone())?,
            antistable: DiscreteStateSpace::new(
                g.a.clone(),
                g.b.clone(),
                g.c.clone(),
                RMat::zeros(p_out, m_in),
                g.h,
            )?,
        });
    }

    let ku = n - ks;
    let t11 = dec.t.view((0, 0), (ks, ks)).clone_owned();
    let t22 = dec.t.view((ks, ks), (ku, ku)).clone_owned();
    let t12 = dec.t.view((0, ks), (ks, ku)).clone_owned();
    // [T11 T12; 0 T22] [Z; I] = [Z; I] T22 reduces to T11 Z - Z T22 = -T12,
    // giving the antistable invariant subspace in Schur coordinates.
    let z = solve_sylvester_triangular(&t11, &t22, &(-&t12))?;
    let q1 = dec.q.columns(0, ks).clone_owned();
    let q2 = dec.q.columns(ks, ku).clone_owned();
    let vs = real_basis(&q1)?;
    let vu = real_basis(&(&q1 * &z + &q2))?;

    let mut p = RMat::zeros(n, n);
    p.view_mut((0, 0), (n, ks)).copy_from(&vs);
    p.view_mut((0, ks), (n, ku)).copy_from(&vu);
    let a_sim = solve_real(&p, &(&g.a * &p))?;
    let off = a_sim.view((ks, 0), (ku, ks)).norm().hypot(a_sim.view((0, ks), (ks, ku)).norm());
    if off > 1e-7 * g.a.norm().max(1.0) {
        return Err(Error::NumericFailure {
            op: "stable split",
            detail: format!("block decoupling residual {off:.3e}"),
        });
    }
    let bp = solve_real(&p, &g.b)?;
    let cp = &g.c * &p;

    Ok(AdditiveSplit {
        stable: DiscreteStateSpace::new(
            a_sim.view((0, 0), (ks, ks)).clone_owned(),
            bp.view((0, 0), (ks, m_in)).clone_owned(),
            cp.view((0, 0), (p_out, ks)).clone_owned(),
            g.d.clone(),
            g.h,
        )?,
        antistable: DiscreteStateSpace::new(
            a_sim.view((ks, ks), (ku, ku)).clone_owned(),
            bp.view((ks, 0), (ku, m_in)).clone_owned(),
            cp.view((0, ks), (p_out, ku)).clone_owned(),
            RMat::zeros(p_out, m_in),
            g.h,
        )?,
    })
}

/// Real orthonormal basis of a conjugation-closed complex subspace, from the
/// SVD of the stacked real and imaginary parts. The rank must come out equal
/// to the complex dimension; anything else means the subspace was not closed.
fn real_basis(w: &CMat) -> Result<RMat> {
    let (n, k) = (w.nrows(), w.ncols());
    if k == 0 {
        return Ok(RMat::zeros(n, 0));
    }
    let mut m = RMat::zeros(n, 2 * k);
    for j in 0..k {
        for i in 0..n {
            m[(i, j)] = w[(i, j)].re;
            m[(i, j + k)] = w[(i, j)].im;
        }
    }
    let (u, s, _) = svd_real(&m)?;
    let top = s[0].max(1e-300);
    let rank = s.iter().filter(|&&x| x > 1e-8 * top).count();
    if rank != k {
        return Err(Error::NumericFailure {
            op: "real subspace basis",
            detail: format!("expected rank {k}, measured {rank}"),
        });
    }
    Ok(u.columns(0, k).clone_owned())
}

/// Stable part of the additive split; the antistable term is discarded
/// outright. Cheap, but with no optimality in any norm.
pub fn l2_truncate(g: &DiscreteStateSpace) -> Result<DiscreteStateSpace> {
    let split = split_stable_antistable(g)?;
    if split.antistable.order() == 0 {
        return Ok(g.clone());
    }
    Ok(split.stable)
}

/// Hankel singular values of the reflection G~(z) = G_u(1/z) of an antistable
/// model, the quantity that prices the Nehari projection: the optimal error
/// equals the largest value and the output order drops by its multiplicity.
pub fn hankel_spectrum_antistable(gu: &DiscreteStateSpace) -> Result<HankelSpectrum> {
    let n = gu.order();
    if n == 0 {
        return Ok(HankelSpectrum { values: Vec::new(), q: 0 });
    }
    for p in gu.poles()? {
        if p.norm() <= 1.0 {
            return Err(Error::InvalidInput(format!(
                "antistable part has a pole at {p} inside the closed unit disk"
            )));
        }
    }
    // Reflection z -> 1/z in state space: (A^-1, A^-1 B, -C A^-1), with the
    // poles now strictly inside the disk. The feedthrough does not matter.
    let sol = solve_real(&gu.a, &{
        let mut m = RMat::zeros(n, n + gu.b.ncols());
        m.view_mut((0, 0), (n, n)).copy_from(&RMat::identity(n, n));
        m.view_mut((0, n), (n, gu.b.ncols())).copy_from(&gu.b);
        m
    })?;
    let ar = sol.view((0, 0), (n, n)).clone_owned();
    let br = sol.view((0, n), (n, gu.b.ncols())).clone_owned();
    let cr = -(&gu.c * &ar);

    let p = solve_lyapunov_real(&ar, &(&br * br.transpose()), LyapunovKind::Discrete)?;
    let q = solve_lyapunov_real(&ar.transpose(), &(cr.transpose() * &cr), LyapunovKind::Discrete)?;

    let lp = gramian_factor(&p)?;
    let lq = gramian_factor(&q)?;
    let (_, values, _) = svd_real(&(lq.transpose() * &lp))?;
    let top = values.first().copied().unwrap_or(0.0);
    let q_mult =
        values.iter().take_while(|&&s| s >= top * (1.0 - glover::MULTIPLICITY_TOL)).count();
    Ok(HankelSpectrum { values, q: q_mult })
}

/// Symmetric square root factor L with X = L L^T, eigenvalues clamped at zero
/// so Gramians that are PSD up to roundoff stay usable.
fn gramian_factor(x: &RMat) -> Result<RMat> {
    let (w, v) = sym_eig(x)?;
    let sqrt = nalgebra::DVector::from_vec(w.iter().map(|&e| e.max(0.0).sqrt()).collect());
    Ok(&v * RMat::from_diagonal(&sqrt))
}

/// Optimal stable projection: returns `G_s + Q` where Q solves the Nehari
/// problem for the antistable part. The L-infinity error of the projection
/// equals the largest Hankel value of the reflected antistable part; the
/// construction certifies that equality on a dense circle grid before
/// returning, retrying over a fixed list of bilinear parameters.
pub fn nehari_project(g: &DiscreteStateSpace) -> Result<DiscreteStateSpace> {
    g.require_siso()?;
    let split = split_stable_antistable(g)?;
    if split.antistable.order() == 0 {
        return Ok(g.clone());
    }
    let spectrum = hankel_spectrum_antistable(&split.antistable)?;
    let sigma1 = spectrum.values[0];

    let mut best: Option<(f64, DiscreteStateSpace)> = None;
    for alpha in ALPHA_RETRIES {
        let q_d = match glover::glover_nehari(&split.antistable, alpha) {
            Ok(q) => q,
            Err(_) => continue,
        };
        let achieved = match sup_error_on_circle(&split.antistable, &q_d, CERTIFICATE_GRID) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let rel = (achieved - sigma1).abs() / sigma1.max(1e-300);
        if rel <= CERTIFICATE_TOL {
            return parallel(&split.stable, &q_d);
        }
        if best.as_ref().is_none_or(|(r, _)| rel < *r) {
            best = Some((rel, q_d));
        }
    }
    let detail = match best {
        Some((rel, _)) => format!(
            "certificate missed for every alpha in {ALPHA_RETRIES:?}; best relative gap {rel:.3e}"
        ),
        None => format!("construction failed for every alpha in {ALPHA_RETRIES:?}"),
    };
    Err(Error::NumericFailure { op: "nehari projection", detail })
}

/// Largest pointwise gap `|G1 - G2|` over a uniform grid on the upper unit
/// semicircle (conjugate symmetry covers the lower half).
pub fn sup_error_on_circle(
    g1: &DiscreteStateSpace,
    g2: &DiscreteStateSpace,
    points: usize,
) -> Result<f64> {
    if points < 2 {
        return Err(Error::InvalidInput("circle grid needs at least 2 points".into()));
    }
    let mut sup: f64 = 0.0;
    for k in 0..points {
        let theta = std::f64::consts::PI * k as f64 / (points - 1) as f64;
        let z = Complex64::new(0.0, theta).exp();
        let d = (g1.eval_siso(z)? - g2.eval_siso(z)?).norm();
        sup = sup.max(d);
    }
    Ok(sup)
}

/// Parallel interconnection G1 + G2 as a block-diagonal realization.
fn parallel(g1: &DiscreteStateSpace, g2: &DiscreteStateSpace) -> Result<DiscreteStateSpace> {
    if g1.c.nrows() != g2.c.nrows() || g1.b.ncols() != g2.b.ncols() {
        return Err(Error::Dimension("parallel sum needs matching I/O dimensions".into()));
    }
    let (n1, n2) = (g1.order(), g2.order());
    let mut a = RMat::zeros(n1 + n2, n1 + n2);
    a.view_mut((0, 0), (n1, n1)).copy_from(&g1.a);
    a.view_mut((n1, n1), (n2, n2)).copy_from(&g2.a);
    let mut b = RMat::zeros(n1 + n2, g1.b.ncols());
    b.view_mut((0, 0), (n1, g1.b.ncols())).copy_from(&g1.b);
    b.view_mut((n1, 0), (n2, g2.b.ncols())).copy_from(&g2.b);
    let mut c = RMat::zeros(g1.c.nrows(), n1 + n2);
    c.view_mut((0, 0), (g1.c.nrows(), n1)).copy_from(&g1.c);
    c.view_mut((0, n1), (g2.c.nrows(), n2)).copy_from(&g2.c);
    DiscreteStateSpace::new(a, b, c, &g1.d + &g2.d, g1.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eval(g: &DiscreteStateSpace, z: Complex64) -> Complex64 {
        g.eval_siso(z).unwrap()
    }

    fn diag_mixed_example() -> DiscreteStateSpace {
        // G(z) = 1/(z - 0.5) + 1/(z - 2) by partial fractions
        DiscreteStateSpace::new(
            RMat::from_fn(2, 2, |i, j| if i == j { [0.5, 2.0][i] } else { 0.0 }),
            RMat::from_element(2, 1, 1.0),
            RMat::from_element(1, 2, 1.0),
            RMat::zeros(1, 1),
            1.0,
        )
        .unwrap()
    }

    /// Random model with ns poles inside and nu outside the circle, hidden
    /// behind a moderately conditioned similarity.
    fn random_mixed(rng: &mut ChaCha8Rng, ns: usize, nu: usize) -> DiscreteStateSpace {
        let n = ns + nu;
        let mut a = RMat::zeros(n, n);
        for i in 0..ns {
            a[(i, i)] = rng.gen_range(-0.85..0.85);
        }
        for i in ns..n {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            a[(i, i)] = sign * rng.gen_range(1.15..3.0);
        }
        for i in 0..n {
            for j in i + 1..n {
                a[(i, j)] = rng.gen_range(-0.4..0.4);
            }
        }
        let t = RMat::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else {
                0.3 * rng.gen_range(-1.0..1.0)
            }
        });
        let a = solve_real(&t, &(&a * &t)).unwrap();
        let b = RMat::from_fn(n, 1, |_, _| rng.gen_range(-1.0..1.0));
        let c = RMat::from_fn(1, n, |_, _| rng.gen_range(-1.0..1.0));
        let d = RMat::from_element(1, 1, rng.gen_range(-1.0..1.0));
        DiscreteStateSpace::new(a, b, c, d, 0.5).unwrap()
    }

    fn circle_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|_| Complex64::new(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp())
            .collect()
    }

    #[test]
    fn split_of_the_diagonal_example_matches_partial_fractions() {
        let split = split_stable_antistable(&diag_mixed_example()).unwrap();
        assert_eq!(split.stable.order(), 1);
        assert_eq!(split.antistable.order(), 1);
        for z in [Complex64::new(0.3, 0.9), Complex64::new(-1.2, 0.4), Complex64::new(0.0, -1.0)]
        {
            let gs = eval(&split.stable, z);
            let gu = eval(&split.antistable, z);
            let s_exact = Complex64::ONE / (z - 0.5);
            let u_exact = Complex64::ONE / (z - 2.0);
            assert!((gs - s_exact).norm() < 1e-12 * s_exact.norm().max(1.0));
            assert!((gu - u_exact).norm() < 1e-12 * u_exact.norm().max(1.0));
        }
    }

    #[test]
    fn split_is_additive_on_random_mixed_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let ns = rng.gen_range(1..4);
            let nu = rng.gen_range(1..4);
            let g = random_mixed(&mut rng, ns, nu);
            let split = split_stable_antistable(&g).unwrap();
            assert_eq!(split.stable.order() + split.antistable.order(), g.order());
            for z in circle_points(&mut rng, 20) {
                let whole = eval(&g, z);
                let sum = eval(&split.stable, z) + eval(&split.antistable, z);
                assert!(
                    (whole - sum).norm() <= 1e-8 * whole.norm().max(1.0),
                    "trial {trial}: additivity residual {:.3e}",
                    (whole - sum).norm()
                );
            }
        }
    }

    #[test]
    fn split_separates_the_pole_sets_strictly() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let g = random_mixed(&mut rng, 2, 2);
            let split = split_stable_antistable(&g).unwrap();
            for p in split.stable.poles().unwrap() {
                assert!(p.norm() < 1.0, "stable pole at {p}");
            }
            for p in split.antistable.poles().unwrap() {
                assert!(p.norm() > 1.0, "antistable pole at {p}");
            }
        }
    }

    #[test]
    fn already_stable_models_split_trivially() {
        let g = DiscreteStateSpace::new(
            RMat::from_fn(2, 2, |i, j| if i == j { [0.4, -0.7][i] } else { 0.1 }),
            RMat::from_element(2, 1, 1.0),
            RMat::from_element(1, 2, 1.0),
            RMat::from_element(1, 1, 0.25),
            1.0,
        )
        .unwrap();
        let split = split_stable_antistable(&g).unwrap();
        assert_eq!(split.antistable.order(), 0);
        assert_eq!(split.antistable.d[(0, 0)], 0.0);
        assert_eq!(split.stable.order(), 2);
        let z = Complex64::new(0.2, 0.9);
        assert_eq!(eval(&split.antistable, z), Complex64::ZERO);
    }

    #[test]
    fn purely_antistable_models_put_everything_in_the_antistable_part() {
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, 2.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 0.5),
            1.0,
        )
        .unwrap();
        let split = split_stable_antistable(&g).unwrap();
        assert_eq!(split.stable.order(), 0);
        assert_eq!(split.stable.d[(0, 0)], 0.5);
        assert_eq!(split.antistable.order(), 1);
        assert_eq!(split.antistable.d[(0, 0)], 0.0);
    }

    #[test]
    fn boundary_poles_are_rejected() {
        for r in [1.0, 1.0 + 5e-9, 1.0 - 5e-9] {
            let g = DiscreteStateSpace::new(
                RMat::from_fn(2, 2, |i, j| if i == j { [r, 0.3][i] } else { 0.0 }),
                RMat::from_element(2, 1, 1.0),
                RMat::from_element(1, 2, 1.0),
                RMat::zeros(1, 1),
                1.0,
            )
            .unwrap();
            match split_stable_antistable(&g) {
                Err(Error::BoundaryPole { pole, .. }) => {
                    assert_relative_eq!(pole.norm(), r, epsilon = 1e-7);
                }
                other => panic!("expected a boundary pole error, got {other:?}"),
            }
        }
    }

    #[test]
    fn l2_truncation_keeps_only_the_stable_term() {
        let g = diag_mixed_example();
        let t = l2_truncate(&g).unwrap();
        assert_eq!(t.order(), 1);
        for z in [Complex64::new(0.1, 1.1), Complex64::new(-0.6, -0.9)] {
            let exact = Complex64::ONE / (z - 0.5);
            assert!((eval(&t, z) - exact).norm() < 1e-12 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn l2_truncation_is_the_identity_on_stable_models() {
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, -0.3),
            RMat::from_element(1, 1, 2.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 0.7),
            0.25,
        )
        .unwrap();
        let t = l2_truncate(&g).unwrap();
        assert_eq!(t.order(), 1);
        let z = Complex64::new(0.4, 0.7);
        assert_eq!(eval(&t, z), eval(&g, z));
    }

    #[test]
    fn l2_truncation_of_a_purely_antistable_model_is_its_feedthrough() {
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, 3.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, -0.4),
            1.0,
        )
        .unwrap();
        let t = l2_truncate(&g).unwrap();
        assert_eq!(t.order(), 0);
        assert_eq!(t.d[(0, 0)], -0.4);
    }

    #[test]
    fn scalar_hankel_value_matches_the_closed_form() {
        // g(z) = c b/(z - a): the reflection has the single Hankel value
        // |c b|/(|a|^2 - 1).
        for (a, b, c) in [(2.0, 3.0, 0.5), (-1.5, 1.0, 1.0), (4.0, -2.0, 0.25)] {
            let g = DiscreteStateSpace::new(
                RMat::from_element(1, 1, a),
                RMat::from_element(1, 1, b),
                RMat::from_element(1, 1, c),
                RMat::zeros(1, 1),
                1.0,
            )
            .unwrap();
            let spec = hankel_spectrum_antistable(&g).unwrap();
            assert_eq!(spec.values.len(), 1);
            assert_eq!(spec.q, 1);
            let expected = (c * b).abs() / (a * a - 1.0);
            assert_relative_eq!(spec.values[0], expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn hankel_values_match_the_truncated_hankel_matrix_oracle() {
        // Independent oracle: singular values of the Hankel matrix built from
        // impulse-response coefficients of the reflected system.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = RMat::from_fn(3, 3, |i, j| {
            if i == j {
                [1.8, 2.5, -1.6][i]
            } else if j > i {
                rng.gen_range(-0.2..0.2)
            } else {
                0.0
            }
        });
        let b = RMat::from_fn(3, 1, |_, _| rng.gen_range(-1.0..1.0));
        let c = RMat::from_fn(1, 3, |_, _| rng.gen_range(-1.0..1.0));
        let g = DiscreteStateSpace::new(a.clone(), b.clone(), c.clone(), RMat::zeros(1, 1), 1.0)
            .unwrap();
        let spec = hankel_spectrum_antistable(&g).unwrap();

        let ainv = solve_real(&a, &RMat::identity(3, 3)).unwrap();
        let br = &ainv * &b;
        let cr = -(&c * &ainv);
        let mut coeff = Vec::with_capacity(200);
        let mut state = br.clone();
        for _ in 0..200 {
            coeff.push((&cr * &state)[(0, 0)]);
            state = &ainv * &state;
        }
        let hankel = RMat::from_fn(100, 100, |i, j| coeff[i + j]);
        let (_, sv, _) = svd_real(&hankel).unwrap();

        assert_eq!(spec.values.len(), 3);
        for (i, v) in spec.values.iter().enumerate() {
            assert_relative_eq!(v, &sv[i], max_relative = 1e-6);
        }
    }

    #[test]
    fn empty_antistable_part_has_an_empty_spectrum() {
        let g = DiscreteStateSpace::new(
            RMat::zeros(0, 0),
            RMat::zeros(0, 1),
            RMat::zeros(1, 0),
            RMat::zeros(1, 1),
            1.0,
        )
        .unwrap();
        let spec = hankel_spectrum_antistable(&g).unwrap();
        assert!(spec.values.is_empty());
        assert_eq!(spec.q, 0);
    }

    #[test]
    fn hankel_spectrum_rejects_stable_input() {
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, 0.5),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::zeros(1, 1),
            1.0,
        )
        .unwrap();
        assert!(matches!(hankel_spectrum_antistable(&g), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn nehari_on_the_scalar_example_gives_the_closed_form_constant() {
        // G(z) = 1/(z - 2): k_s = 0, k_u = 1, q = 1, so the projection has
        // order 0, value -2/3, and optimal error 1/3.
        let g = DiscreteStateSpace::new(
            RMat::from_element(1, 1, 2.0),
            RMat::from_element(1, 1, 1.0),
            RMat::from_element(1, 1, 1.0),
            RMat::zeros(1, 1),
            1.0,
        )
        .unwrap();
        let p = nehari_project(&g).unwrap();
        assert_eq!(p.order(), 0);
        assert_relative_eq!(p.d[(0, 0)], -2.0 / 3.0, epsilon = 1e-10);
        let err = sup_error_on_circle(&g, &p, 1024).unwrap();
        assert_relative_eq!(err, 1.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn nehari_returns_stable_input_unchanged() {
        let g = DiscreteStateSpace::new(
            RMat::from_fn(2, 2, |i, j| if i == j { [0.6, -0.2][i] } else { 0.05 }),
            RMat::from_element(2, 1, 1.0),
            RMat::from_element(1, 2, 1.0),
            RMat::from_element(1, 1, 0.3),
            0.5,
        )
        .unwrap();
        let p = nehari_project(&g).unwrap();
        assert_eq!(p.order(), 2);
        let z = Complex64::new(0.3, 0.8);
        assert_eq!(eval(&p, z), eval(&g, z));
    }

    #[test]
    fn nehari_certificate_holds_on_random_mixed_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for trial in 0..20 {
            let ns = rng.gen_range(1..6);
            let nu = rng.gen_range(1..4);
            let g = random_mixed(&mut rng, ns, nu);
            let split = split_stable_antistable(&g).unwrap();
            let sigma1 = hankel_spectrum_antistable(&split.antistable).unwrap().values[0];
            let p = nehari_project(&g).unwrap();
            assert!(p.is_stable().unwrap(), "trial {trial}: projection not stable");
            let err = sup_error_on_circle(&g, &p, 4096).unwrap();
            assert!(
                (err - sigma1).abs() <= 1e-5 * sigma1,
                "trial {trial}: error {err:.12e} vs sigma1 {sigma1:.12e}"
            );
        }
    }

    #[test]
    fn nehari_order_follows_the_multiplicity_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for _ in 0..20 {
            let ns = rng.gen_range(1..5);
            let nu = rng.gen_range(1..4);
            let g = random_mixed(&mut rng, ns, nu);
            let split = split_stable_antistable(&g).unwrap();
            let spec = hankel_spectrum_antistable(&split.antistable).unwrap();
            // Random instances have simple Hankel values.
            assert_eq!(spec.q, 1);
            let p = nehari_project(&g).unwrap();
            assert_eq!(p.order(), split.stable.order() + split.antistable.order() - spec.q);
        }
    }

    #[test]
    fn l2_truncation_never_beats_the_nehari_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(173);
        for _ in 0..20 {
            let (ns, nu) = (rng.gen_range(1..4), rng.gen_range(1..4));
            let g = random_mixed(&mut rng, ns, nu);
            let l2 = l2_truncate(&g).unwrap();
            let ne = nehari_project(&g).unwrap();
            let e_l2 = sup_error_on_circle(&g, &l2, 2048).unwrap();
            let e_ne = sup_error_on_circle(&g, &ne, 2048).unwrap();
            assert!(e_l2 >= e_ne - 1e-9, "l2 error {e_l2:.6e} below nehari {e_ne:.6e}");
        }
    }
}
