//! Complex Schur decomposition: Householder reduction to Hessenberg form
//! followed by implicit single-shift QR with Wilkinson shifts, plus
//! eigenvalue reordering through chains of unitary 2x2 swaps.

use num_complex::Complex64;

use super::{ensure_finite, CMat};
use crate::error::{Error, Result};

pub struct SchurResult {
    /// Unitary transformation, `A = Q T Q^H`.
    pub q: CMat,
    /// Upper triangular factor; its diagonal is the spectrum of `A`.
    pub t: CMat,
}

/// Unitary 2x2 acting on coordinates (i, i+1), rows stored flat.
#[derive(Clone, Copy)]
struct Rot {
    g11: Complex64,
    g12: Complex64,
    g21: Complex64,
    g22: Complex64,
}

/// Rotation with `G [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> Rot {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 || y.norm() == 0.0 {
        return Rot { g11: Complex64::ONE, g12: Complex64::ZERO, g21: Complex64::ZERO, g22: Complex64::ONE };
    }
    Rot {
        g11: x.conj() / r,
        g12: y.conj() / r,
        g21: -y / r,
        g22: x / r,
    }
}

fn apply_left(t: &mut CMat, rot: &Rot, i: usize, col_lo: usize) {
    let n = t.ncols();
    for c in col_lo..n {
        let a = t[(i, c)];
        let b = t[(i + 1, c)];
        t[(i, c)] = rot.g11 * a + rot.g12 * b;
        t[(i + 1, c)] = rot.g21 * a + rot.g22 * b;
    }
}

fn apply_right(t: &mut CMat, rot: &Rot, i: usize, row_hi: usize) {
    // multiply by G^H on the right
    for r in 0..row_hi {
        let a = t[(r, i)];
        let b = t[(r, i + 1)];
        t[(r, i)] = a * rot.g11.conj() + b * rot.g12.conj();
        t[(r, i + 1)] = a * rot.g21.conj() + b * rot.g22.conj();
    }
}

pub fn schur(a: &CMat) -> Result<SchurResult> {
    ensure_finite(a, "schur input")?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("schur: matrix is {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(SchurResult { q: CMat::zeros(0, 0), t: CMat::zeros(0, 0) });
    }

    let (mut t, mut q) = hessenberg(a);
    let scale = t.norm().max(f64::MIN_POSITIVE);

    let max_total = 60 * n.max(4);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut stall = 0usize;

    while hi > 0 {
        // deflate negligible subdiagonal entries from the bottom
        let mut lo = hi;
        while lo > 0 {
            let local = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            let threshold = f64::EPSILON * if local > 0.0 { local } else { scale };
            if t[(lo, lo - 1)].norm() <= threshold {
                t[(lo, lo - 1)] = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stall = 0;
            continue;
        }

        total += 1;
        stall += 1;
        if total > max_total {
            return Err(Error::NonConvergence { op: "qr iteration", iterations: max_total });
        }

        let mu = if stall % 12 == 0 {
            // exceptional shift to break rare cycles
            t[(hi, hi)] + Complex64::new(1.5 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&t, hi)
        };

        // implicit single-shift bulge chase over [lo, hi]
        let mut x = t[(lo, lo)] - mu;
        let mut y = t[(lo + 1, lo)];
        for k in lo..hi {
            let rot = givens(x, y);
            apply_left(&mut t, &rot, k, k.saturating_sub(1));
            apply_right(&mut t, &rot, k, (k + 3).min(n));
            apply_right(&mut q, &rot, k, n);
            if k + 2 <= hi {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
    }

    // remove roundoff dust below the subdiagonal structure
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = Complex64::ZERO;
        }
    }
    Ok(SchurResult { q, t })
}

fn wilkinson_shift(t: &CMat, hi: usize) -> Complex64 {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let c = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let tr = a + d;
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = CMat::identity(n, n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        // Householder vector for column k below the subdiagonal
        let m = n - k - 1;
        let mut v = vec![Complex64::ZERO; m];
        for i in 0..m {
            v[i] = h[(k + 1 + i, k)];
        }
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let alpha = v[0];
        let beta = if alpha.norm() == 0.0 {
            Complex64::new(-xnorm, 0.0)
        } else {
            -(alpha / alpha.norm()) * xnorm
        };
        v[0] -= beta;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm < f64::EPSILON * xnorm {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // H <- P H P with P = I - 2 v v^H acting on rows/cols k+1..
        for c in k..n {
            let mut dot = Complex64::ZERO;
            for i in 0..m {
                dot += v[i].conj() * h[(k + 1 + i, c)];
            }
            let dot = dot * 2.0;
            for i in 0..m {
                h[(k + 1 + i, c)] -= dot * v[i];
            }
        }
        for r in 0..n {
            let mut dot = Complex64::ZERO;
            for i in 0..m {
                dot += h[(r, k + 1 + i)] * v[i];
            }
            let dot = dot * 2.0;
            for i in 0..m {
                h[(r, k + 1 + i)] -= dot * v[i].conj();
            }
        }
        for r in 0..n {
            let mut dot = Complex64::ZERO;
            for i in 0..m {
                dot += q[(r, k + 1 + i)] * v[i];
            }
            let dot = dot * 2.0;
            for i in 0..m {
                q[(r, k + 1 + i)] -= dot * v[i].conj();
            }
        }
        for i in 2..=m {
            h[(k + i, k)] = Complex64::ZERO;
        }
        h[(k + 1, k)] = beta;
    }
    (h, q)
}

/// Schur form with the eigenvalues satisfying `select` moved to the leading
/// diagonal block. Returns the decomposition and the number selected.
pub fn ordered_schur<F>(a: &CMat, select: F) -> Result<(SchurResult, usize)>
where
    F: Fn(Complex64) -> bool,
{
    let SchurResult { mut q, mut t } = schur(a)?;
    let n = t.nrows();
    let mut flags: Vec<bool> = (0..n).map(|i| select(t[(i, i)])).collect();
    let count = flags.iter().filter(|f| **f).count();

    let mut front = 0;
    for i in 0..n {
        if flags[i] {
            let mut j = i;
            while j > front {
                swap_adjacent(&mut t, &mut q, j - 1);
                flags.swap(j - 1, j);
                j -= 1;
            }
            front += 1;
        }
    }
    Ok((SchurResult { q, t }, count))
}

/// Swaps the eigenvalues at diagonal positions i and i+1 of a triangular T by
/// a unitary similarity, updating Q accordingly.
fn swap_adjacent(t: &mut CMat, q: &mut CMat, i: usize) {
    let n = t.nrows();
    let a = t[(i, i)];
    let b = t[(i, i + 1)];
    let d = t[(i + 1, i + 1)];
    // eigenvector of the 2x2 block for eigenvalue d
    let vx = b;
    let vy = d - a;
    if vy.norm() <= f64::EPSILON * (a.norm() + d.norm()) && vx.norm() == 0.0 {
        return; // equal eigenvalues, nothing to move
    }
    let rot = givens(vx, vy);
    apply_left(t, &rot, i, 0);
    apply_right(t, &rot, i, n);
    apply_right(q, &rot, i, n);
    t[(i + 1, i)] = Complex64::ZERO;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{solve, to_complex, unitary_residual, RMat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn residuals(a: &CMat, s: &SchurResult) -> (f64, f64, f64) {
        let recon = (a - &s.q * &s.t * s.q.adjoint()).norm();
        let unit = unitary_residual(&s.q);
        let mut lower = 0.0f64;
        for i in 0..s.t.nrows() {
            for j in 0..i {
                lower = lower.max(s.t[(i, j)].norm());
            }
        }
        (recon, unit, lower)
    }

    fn sorted_diag(t: &CMat) -> Vec<Complex64> {
        let mut d: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
        d.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        d
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let a = to_complex(&RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            3.0, -1.0, 0.5,
        ])));
        let s = schur(&a).unwrap();
        let (recon, unit, lower) = residuals(&a, &s);
        assert!(recon < 1e-13 && unit < 1e-13 && lower == 0.0);
    }

    #[test]
    fn known_spectrum_is_recovered() {
        // A = S diag(lambda) S^-1 with a fixed well-conditioned S
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        let lambda: Vec<Complex64> = vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(-1.0, -1.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 2.5),
            Complex64::new(-4.0, 0.1),
        ];
        let s = CMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }) + CMat::identity(n, n) * Complex64::new(3.0, 0.0);
        let d = CMat::from_fn(n, n, |i, j| if i == j { lambda[i] } else { Complex64::ZERO });
        let a = &s * d * solve(&s, &CMat::identity(n, n)).unwrap();

        let dec = schur(&a).unwrap();
        let (recon, unit, lower) = residuals(&a, &dec);
        assert!(recon < 1e-10 * a.norm(), "reconstruction {recon}");
        assert!(unit < 1e-12);
        assert!(lower < 1e-12 * a.norm());

        let mut want = lambda.clone();
        want.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        for (got, want) in sorted_diag(&dec.t).iter().zip(want.iter()) {
            assert!((got - want).norm() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn ordering_moves_selected_inside_unit_circle_first() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let lambda = [0.5, 1.8, 0.9, 2.5, 0.2];
        let n = lambda.len();
        let s = CMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }) + CMat::identity(n, n) * Complex64::new(2.5, 0.0);
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(lambda[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let a = &s * d * solve(&s, &CMat::identity(n, n)).unwrap();

        let (dec, k) = ordered_schur(&a, |z| z.norm() < 1.0).unwrap();
        assert_eq!(k, 3);
        let (recon, unit, lower) = residuals(&a, &dec);
        assert!(recon < 1e-9 * a.norm());
        assert!(unit < 1e-12);
        assert!(lower < 1e-10 * a.norm());
        for i in 0..k {
            assert!(dec.t[(i, i)].norm() < 1.0, "position {i}: {}", dec.t[(i, i)]);
        }
        for i in k..n {
            assert!(dec.t[(i, i)].norm() > 1.0);
        }
    }

    #[test]
    fn empty_and_scalar_cases() {
        let a0 = CMat::zeros(0, 0);
        let s0 = schur(&a0).unwrap();
        assert_eq!(s0.t.nrows(), 0);

        let a1 = CMat::from_element(1, 1, Complex64::new(4.0, -2.0));
        let s1 = schur(&a1).unwrap();
        assert_eq!(s1.t[(0, 0)], Complex64::new(4.0, -2.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn schur_invariants_random(seed in 0u64..500, n in 1usize..10) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = CMat::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            });
            let dec = schur(&a).unwrap();
            let (recon, unit, lower) = residuals(&a, &dec);
            let scale = a.norm().max(1.0);
            prop_assert!(recon < 1e-10 * scale, "recon {}", recon);
            prop_assert!(unit < 1e-11);
            prop_assert!(lower < 1e-10 * scale);
        }

        #[test]
        fn ordered_schur_preserves_spectrum(seed in 0u64..500, n in 2usize..8) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(9000));
            let a = CMat::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            });
            let plain = schur(&a).unwrap();
            let (ord, k) = ordered_schur(&a, |z| z.norm() < 1.0).unwrap();
            let (recon, unit, _) = residuals(&a, &ord);
            let scale = a.norm().max(1.0);
            prop_assert!(recon < 1e-9 * scale);
            prop_assert!(unit < 1e-10);
            // same multiset of eigenvalues before and after ordering
            let d1 = sorted_diag(&plain.t);
            let d2 = sorted_diag(&ord.t);
            for (x, y) in d1.iter().zip(d2.iter()) {
                prop_assert!((x - y).norm() < 1e-7 * scale, "{} vs {}", x, y);
            }
            // selected block leads
            for i in 0..k {
                prop_assert!(ord.t[(i, i)].norm() < 1.0 + 1e-9);
            }
            for i in k..n {
                prop_assert!(ord.t[(i, i)].norm() >= 1.0 - 1e-9);
            }
        }
    }
}
