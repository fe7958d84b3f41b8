//! Loewner pencil assembly, rank detection, projection, and realification.

use num_complex::Complex64;

use super::Partition;
use crate::error::{Error, Result};
use crate::linalg::{self, solve_real, svd_real, CMat, RMat};
use crate::models::DiscreteStateSpace;

/// The raw Loewner pencil over complex interpolation data.
///
/// Rows are indexed by the `mu` points, columns by the `lambda` points. The
/// descriptor realization `(E, A, B, C) = (-L, -Ls, w_mu, w_lambda^T)`
/// interpolates both point sets whenever the pencil is regular.
#[derive(Clone, Debug)]
pub struct LoewnerPencil {
    /// Loewner matrix, `[(w(mu_i) - w(lambda_j)) / (mu_i - lambda_j)]`.
    pub l: CMat,
    /// Shifted Loewner matrix, `[(mu_i w(mu_i) - lambda_j w(lambda_j)) / (mu_i - lambda_j)]`.
    pub ls: CMat,
    pub w_mu: CMat,
    pub w_lambda: CMat,
    pub mu: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
    pub h: f64,
}

/// A possibly complex descriptor realization `y = C (zE - A)^{-1} B u`.
#[derive(Clone, Debug)]
pub struct DescriptorModel {
    pub e: CMat,
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub h: f64,
}

impl DescriptorModel {
    pub fn dim(&self) -> usize {
        self.e.nrows()
    }

    /// Evaluates the transfer function at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let resolvent = {
            let mut m = self.e.clone() * z;
            m -= &self.a;
            m
        };
        let x = linalg::solve(&resolvent, &self.b).map_err(|_| Error::PoleHit(z))?;
        Ok((&self.c * x)[(0, 0)])
    }
}

/// Builds the Loewner and shifted Loewner matrices from a partition.
pub fn build_pencil(p: &Partition) -> Result<LoewnerPencil> {
    let n = p.mu.len();
    if n == 0 || p.lambda.len() != n || p.w_mu.len() != n || p.w_lambda.len() != n {
        return Err(Error::Dimension(format!(
            "partition sizes mu {} / lambda {} / w_mu {} / w_lambda {}",
            p.mu.len(),
            p.lambda.len(),
            p.w_mu.len(),
            p.w_lambda.len()
        )));
    }
    let mut l = CMat::zeros(n, n);
    let mut ls = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let gap = p.mu[i] - p.lambda[j];
            if gap.norm() < 1e-14 {
                return Err(Error::CoincidentPoints { i, j });
            }
            l[(i, j)] = (p.w_mu[i] - p.w_lambda[j]) / gap;
            ls[(i, j)] = (p.mu[i] * p.w_mu[i] - p.lambda[j] * p.w_lambda[j]) / gap;
        }
    }
    let w_mu = CMat::from_fn(n, 1, |i, _| p.w_mu[i]);
    let w_lambda = CMat::from_fn(1, n, |_, j| p.w_lambda[j]);
    linalg::ensure_finite(&l, "Loewner matrix")?;
    linalg::ensure_finite(&ls, "shifted Loewner matrix")?;
    Ok(LoewnerPencil {
        l,
        ls,
        w_mu,
        w_lambda,
        mu: p.mu.clone(),
        lambda: p.lambda.clone(),
        h: p.h,
    })
}

impl LoewnerPencil {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// The unprojected complex descriptor `(E, A, B, C) = (-L, -Ls, w_mu, w_lambda^T)`.
    pub fn descriptor(&self) -> DescriptorModel {
        DescriptorModel {
            e: -self.l.clone(),
            a: -self.ls.clone(),
            b: self.w_mu.clone(),
            c: self.w_lambda.clone(),
            h: self.h,
        }
    }
}

/// Outcome of the singular value rank tests on the concatenated pencils.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RankReport {
    /// The working rank, taken from the row concatenation `[L Ls]`.
    pub r: usize,
    pub r_row: usize,
    pub r_col: usize,
    /// Set when the two concatenations disagree; the data is then too noisy
    /// for a clean order decision and `r` should be treated as a hint.
    pub disagreement: bool,
    pub sigma_row: Vec<f64>,
    pub sigma_col: Vec<f64>,
    pub tol: f64,
}

/// Shared SVD workspace over a realified pencil.
///
/// Construction realifies the pencil through the unitary map that pairs each
/// point with its conjugate, then factors `[L Ls]` and `[L; Ls]` once. Rank
/// queries and projections at any order reuse the two factorizations.
pub struct PencilDecomposition {
    h: f64,
    lr: RMat,
    lsr: RMat,
    br: RMat,
    cr: RMat,
    row_u: RMat,
    sigma_row: Vec<f64>,
    col_v: RMat,
    sigma_col: Vec<f64>,
}

impl PencilDecomposition {
    pub fn new(pencil: &LoewnerPencil) -> Result<Self> {
        let (lr, lsr, br, cr) = realify_pencil(pencil)?;
        let dim = lr.nrows();

        let mut row_cat = RMat::zeros(dim, 2 * dim);
        row_cat.view_mut((0, 0), (dim, dim)).copy_from(&lr);
        row_cat.view_mut((0, dim), (dim, dim)).copy_from(&lsr);
        let (row_u, sigma_row, _) = svd_real(&row_cat)?;

        let mut col_cat = RMat::zeros(2 * dim, dim);
        col_cat.view_mut((0, 0), (dim, dim)).copy_from(&lr);
        col_cat.view_mut((dim, 0), (dim, dim)).copy_from(&lsr);
        let (_, sigma_col, col_v) = svd_real(&col_cat)?;

        Ok(Self { h: pencil.h, lr, lsr, br, cr, row_u, sigma_row, col_v, sigma_col })
    }

    pub fn dim(&self) -> usize {
        self.lr.nrows()
    }

    /// Counts singular values above `tol` relative to the largest, for both
    /// concatenations. The row count is the working rank.
    pub fn rank(&self, tol: f64) -> RankReport {
        let count = |s: &[f64]| {
            let top = s.first().copied().unwrap_or(0.0);
            if top <= 0.0 {
                return 0;
            }
            s.iter().take_while(|&&x| x > tol * top).count()
        };
        let r_row = count(&self.sigma_row);
        let r_col = count(&self.sigma_col);
        RankReport {
            r: r_row,
            r_row,
            r_col,
            disagreement: r_row != r_col,
            sigma_row: self.sigma_row.clone(),
            sigma_col: self.sigma_col.clone(),
            tol,
        }
    }

    /// Petrov-Galerkin projection onto the leading `k` left singular vectors
    /// of `[L Ls]` and right singular vectors of `[L; Ls]`.
    ///
    /// The result is real and is returned through the complex descriptor type
    /// with zero imaginary parts.
    pub fn project(&self, k: usize) -> Result<DescriptorModel> {
        let dim = self.dim();
        if k == 0 || k > dim {
            return Err(Error::InvalidInput(format!(
                "projection order {k} outside 1..={dim}"
            )));
        }
        let y = self.row_u.columns(0, k).into_owned();
        let x = self.col_v.columns(0, k).into_owned();
        let yt = y.transpose();
        let e = -(&yt * &self.lr * &x);
        let a = -(&yt * &self.lsr * &x);
        let b = &yt * &self.br;
        let c = &self.cr * &x;
        Ok(DescriptorModel {
            e: linalg::to_complex(&e),
            a: linalg::to_complex(&a),
            b: linalg::to_complex(&b),
            c: linalg::to_complex(&c),
            h: self.h,
        })
    }
}

/// One-shot rank report; builds a full decomposition internally. Use
/// [`PencilDecomposition`] directly when sweeping several orders.
pub fn numerical_rank(pencil: &LoewnerPencil, tol: f64) -> Result<RankReport> {
    Ok(PencilDecomposition::new(pencil)?.rank(tol))
}

/// One-shot projection at order `k`; builds a full decomposition internally.
pub fn project(pencil: &LoewnerPencil, k: usize) -> Result<DescriptorModel> {
    PencilDecomposition::new(pencil)?.project(k)
}

/// Converts a descriptor model to an explicit real state-space model.
///
/// A model with nontrivial imaginary parts is first passed through the
/// conjugate-pairing unitary; if imaginary parts survive that, the data was
/// not conjugate-closed. A nearly singular `E` means the interpolant has a
/// polynomial part and no state-space form exists.
pub fn realify(model: &DescriptorModel) -> Result<DiscreteStateSpace> {
    let scale = [&model.e, &model.a, &model.b, &model.c]
        .iter()
        .map(|m| m.iter().map(|x| x.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
        .max(1e-300);
    let residue_of = |e: &CMat, a: &CMat, b: &CMat, c: &CMat| {
        [e, a, b, c]
            .iter()
            .map(|m| m.iter().map(|x| x.im.abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };

    let tol = 1e-6 * scale;
    let raw_residue = residue_of(&model.e, &model.a, &model.b, &model.c);
    let (e, a, b, c) = if raw_residue <= tol {
        (re_part(&model.e), re_part(&model.a), re_part(&model.b), re_part(&model.c))
    } else {
        if model.dim() % 2 != 0 {
            return Err(Error::ConjugateInconsistency { residue: raw_residue / scale });
        }
        let er = j_both(&model.e);
        let ar = j_both(&model.a);
        let br = j_left(&model.b);
        let cr = j_right(&model.c);
        let res = residue_of(&er, &ar, &br, &cr);
        if res > tol {
            return Err(Error::ConjugateInconsistency { residue: res / scale });
        }
        (re_part(&er), re_part(&ar), re_part(&br), re_part(&cr))
    };

    let (_, sig_e, _) = svd_real(&e)?;
    let smax = sig_e.first().copied().unwrap_or(0.0);
    let smin = sig_e.last().copied().unwrap_or(0.0);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < 1e12) {
        return Err(Error::PolynomialPart { cond });
    }

    let a_std = solve_real(&e, &a)?;
    let b_std = solve_real(&e, &b)?;
    let d = RMat::zeros(1, 1);
    DiscreteStateSpace::new(a_std, b_std, c, d, model.h)
}

fn re_part(m: &CMat) -> RMat {
    RMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

/// Left action of the conjugate-pairing unitary: rows `[p; conj p]` combine to
/// `[(p + conj p); j(conj p - p)] / sqrt(2)`.
fn j_left(m: &CMat) -> CMat {
    let q = m.nrows() / 2;
    let inv = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let jim = Complex64::new(0.0, 1.0);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for i in 0..q {
        for c in 0..m.ncols() {
            let top = m[(i, c)];
            let bot = m[(i + q, c)];
            out[(i, c)] = (top + bot) * inv;
            out[(i + q, c)] = jim * (bot - top) * inv;
        }
    }
    out
}

/// Right action of the pairing unitary on columns `[p, conj p]`.
fn j_right(m: &CMat) -> CMat {
    let q = m.ncols() / 2;
    let inv = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let jim = Complex64::new(0.0, 1.0);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        for j in 0..q {
            let left = m[(r, j)];
            let right = m[(r, j + q)];
            out[(r, j)] = (left + right) * inv;
            out[(r, j + q)] = jim * (left - right) * inv;
        }
    }
    out
}

fn j_both(m: &CMat) -> CMat {
    j_left(&j_right(m))
}

/// Realifies a conjugate-structured pencil. The point sets must hold each
/// conjugate at offset `dim/2` from its partner.
fn realify_pencil(p: &LoewnerPencil) -> Result<(RMat, RMat, RMat, RMat)> {
    let dim = p.dim();
    if dim % 2 != 0 {
        return Err(Error::ConjugateInconsistency { residue: f64::NAN });
    }
    let q = dim / 2;
    for i in 0..q {
        let pairs = [
            (p.mu[i], p.mu[i + q]),
            (p.lambda[i], p.lambda[i + q]),
            (p.w_mu[(i, 0)], p.w_mu[(i + q, 0)]),
            (p.w_lambda[(0, i)], p.w_lambda[(0, i + q)]),
        ];
        for (a, b) in pairs {
            let res = (a.conj() - b).norm();
            if res > 1e-12 * (1.0 + a.norm()) {
                return Err(Error::ConjugateInconsistency { residue: res });
            }
        }
    }

    let lr = j_both(&p.l);
    let lsr = j_both(&p.ls);
    let br = j_left(&p.w_mu);
    let cr = j_right(&p.w_lambda);
    let residue = [&lr, &lsr, &br, &cr]
        .iter()
        .map(|m| m.iter().map(|x| x.im.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let scale = p.l.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    if residue > 1e-9 * scale {
        return Err(Error::ConjugateInconsistency { residue: residue / scale });
    }
    Ok((re_part(&lr), re_part(&lsr), re_part(&br), re_part(&cr)))
}
