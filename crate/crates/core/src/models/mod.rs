//! Model types: continuous and discrete state space, and continuous-time
//! networks with two internal delays. Evaluation is exact up to the linear
//! solve; nothing here approximates.

mod io;
mod response;

pub use io::{load_model, save_discrete_model, LoadedModel, ModelFile};
pub use response::{
    impulse_response_continuous, impulse_response_discrete, sample_and_hold_output,
    step_response_continuous, step_response_tds,
};
pub(crate) use response::zoh_matrices;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, schur, to_complex, CMat, RMat};

/// Continuous-time LTI model `G(s) = C (sI - A)^-1 B + D`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousStateSpace {
    pub a: RMat,
    pub b: RMat,
    pub c: RMat,
    pub d: RMat,
}

/// Delay network `x' = A0 x + A1 x(t - tau) + A2 x(t - tau - gamma) + B u`,
/// `y = C x`. Irrational transfer function; only frequency evaluation and
/// time simulation are available, no finite realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeDelayModel {
    pub a0: RMat,
    pub a1: RMat,
    pub a2: RMat,
    pub b: RMat,
    pub c: RMat,
    pub tau: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContinuousModel {
    StateSpace(ContinuousStateSpace),
    TimeDelay(TimeDelayModel),
}

/// Discrete-time model `G_d(z) = C (zI - A)^-1 B + D` at sampling period `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteStateSpace {
    pub a: RMat,
    pub b: RMat,
    pub c: RMat,
    pub d: RMat,
    pub h: f64,
}

fn check_dims(a: &RMat, b: &RMat, c: &RMat, d: &RMat) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension(format!("A is {}x{}", n, a.ncols())));
    }
    if b.nrows() != n {
        return Err(Error::Dimension(format!("B has {} rows, expected {}", b.nrows(), n)));
    }
    if c.ncols() != n {
        return Err(Error::Dimension(format!("C has {} columns, expected {}", c.ncols(), n)));
    }
    if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
        return Err(Error::Dimension(format!(
            "D is {}x{}, expected {}x{}",
            d.nrows(),
            d.ncols(),
            c.nrows(),
            b.ncols()
        )));
    }
    for (m, name) in [(a, "A"), (b, "B"), (c, "C"), (d, "D")] {
        linalg::ensure_finite_real(m, name)?;
    }
    Ok(())
}

impl ContinuousStateSpace {
    pub fn new(a: RMat, b: RMat, c: RMat, d: RMat) -> Result<Self> {
        check_dims(&a, &b, &c, &d)?;
        Ok(Self { a, b, c, d })
    }

    /// Controllable canonical realization of `num(s)/den(s)`, coefficients in
    /// ascending powers of `s`. `deg num <= deg den` required; the quotient
    /// lands in `D` when degrees are equal.
    pub fn from_transfer_function(num: &[f64], den: &[f64]) -> Result<Self> {
        let den: Vec<f64> = {
            let mut v = den.to_vec();
            while v.last() == Some(&0.0) && v.len() > 1 {
                v.pop();
            }
            v
        };
        let n = den.len() - 1;
        if n == 0 {
            return Err(Error::InvalidInput("denominator must have degree >= 1".into()));
        }
        if num.len() > n + 1 {
            return Err(Error::InvalidInput(format!(
                "numerator degree {} exceeds denominator degree {}",
                num.len() - 1,
                n
            )));
        }
        let lead = den[n];
        if lead == 0.0 || !den.iter().all(|x| x.is_finite()) || !num.iter().all(|x| x.is_finite())
        {
            return Err(Error::InvalidInput("invalid polynomial coefficients".into()));
        }
        let an: Vec<f64> = den.iter().map(|x| x / lead).collect();
        let mut bn = vec![0.0; n + 1];
        for (i, &x) in num.iter().enumerate() {
            bn[i] = x / lead;
        }

        let mut a = RMat::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i + 1)] = 1.0;
        }
        for j in 0..n {
            a[(n - 1, j)] = -an[j];
        }
        let mut b = RMat::zeros(n, 1);
        b[(n - 1, 0)] = 1.0;
        let d = bn[n];
        let mut c = RMat::zeros(1, n);
        for j in 0..n {
            c[(0, j)] = bn[j] - d * an[j];
        }
        Self::new(a, b, c, RMat::from_element(1, 1, d))
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.b.ncols() == 1 && self.c.nrows() == 1
    }

    /// `G(s)` as an output-by-input matrix.
    pub fn eval(&self, s: Complex64) -> Result<CMat> {
        let n = self.order();
        let m = to_complex(&self.a);
        let zi = CMat::identity(n, n) * s - m;
        let x = linalg::solve(&zi, &to_complex(&self.b)).map_err(|_| Error::PoleHit(s))?;
        Ok(to_complex(&self.c) * x + to_complex(&self.d))
    }

    pub fn eval_siso(&self, s: Complex64) -> Result<Complex64> {
        self.require_siso()?;
        Ok(self.eval(s)?[(0, 0)])
    }

    pub fn require_siso(&self) -> Result<()> {
        if self.is_siso() {
            Ok(())
        } else {
            Err(Error::NotSiso { outputs: self.c.nrows(), inputs: self.b.ncols() })
        }
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        spectrum(&self.a)
    }
}

impl TimeDelayModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a0: RMat,
        a1: RMat,
        a2: RMat,
        b: RMat,
        c: RMat,
        tau: f64,
        gamma: f64,
    ) -> Result<Self> {
        let n = a0.nrows();
        for (m, name) in [(&a0, "A0"), (&a1, "A1"), (&a2, "A2")] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!("{name} is {}x{}", m.nrows(), m.ncols())));
            }
            linalg::ensure_finite_real(m, name)?;
        }
        if b.nrows() != n || c.ncols() != n {
            return Err(Error::Dimension("B or C does not match the state dimension".into()));
        }
        linalg::ensure_finite_real(&b, "B")?;
        linalg::ensure_finite_real(&c, "C")?;
        if !(tau > 0.0 && tau.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!("delays tau={tau}, gamma={gamma}")));
        }
        Ok(Self { a0, a1, a2, b, c, tau, gamma })
    }

    pub fn state_dim(&self) -> usize {
        self.a0.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.b.ncols() == 1 && self.c.nrows() == 1
    }

    /// `G(s) = C (sI - A0 - A1 e^{-tau s} - A2 e^{-(tau+gamma) s})^-1 B`.
    pub fn eval(&self, s: Complex64) -> Result<CMat> {
        let n = self.state_dim();
        let e1 = (-self.tau * s).exp();
        let e2 = (-(self.tau + self.gamma) * s).exp();
        let m = CMat::identity(n, n) * s
            - to_complex(&self.a0)
            - to_complex(&self.a1) * e1
            - to_complex(&self.a2) * e2;
        let x = linalg::solve(&m, &to_complex(&self.b)).map_err(|_| Error::PoleHit(s))?;
        Ok(to_complex(&self.c) * x)
    }

    pub fn eval_siso(&self, s: Complex64) -> Result<Complex64> {
        if !self.is_siso() {
            return Err(Error::NotSiso { outputs: self.c.nrows(), inputs: self.b.ncols() });
        }
        Ok(self.eval(s)?[(0, 0)])
    }
}

impl ContinuousModel {
    pub fn eval(&self, s: Complex64) -> Result<CMat> {
        match self {
            ContinuousModel::StateSpace(g) => g.eval(s),
            ContinuousModel::TimeDelay(g) => g.eval(s),
        }
    }

    pub fn eval_siso(&self, s: Complex64) -> Result<Complex64> {
        match self {
            ContinuousModel::StateSpace(g) => g.eval_siso(s),
            ContinuousModel::TimeDelay(g) => g.eval_siso(s),
        }
    }

    pub fn is_siso(&self) -> bool {
        match self {
            ContinuousModel::StateSpace(g) => g.is_siso(),
            ContinuousModel::TimeDelay(g) => g.is_siso(),
        }
    }
}

impl DiscreteStateSpace {
    pub fn new(a: RMat, b: RMat, c: RMat, d: RMat, h: f64) -> Result<Self> {
        check_dims(&a, &b, &c, &d)?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!("sampling period h = {h}")));
        }
        Ok(Self { a, b, c, d, h })
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.b.ncols() == 1 && self.c.nrows() == 1
    }

    pub fn require_siso(&self) -> Result<()> {
        if self.is_siso() {
            Ok(())
        } else {
            Err(Error::NotSiso { outputs: self.c.nrows(), inputs: self.b.ncols() })
        }
    }

    /// `G_d(z)`; an order-0 model is its feedthrough.
    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        let n = self.order();
        if n == 0 {
            return Ok(to_complex(&self.d));
        }
        let zi = CMat::identity(n, n) * z - to_complex(&self.a);
        let x = linalg::solve(&zi, &to_complex(&self.b)).map_err(|_| Error::PoleHit(z))?;
        Ok(to_complex(&self.c) * x + to_complex(&self.d))
    }

    pub fn eval_siso(&self, z: Complex64) -> Result<Complex64> {
        self.require_siso()?;
        Ok(self.eval(z)?[(0, 0)])
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        spectrum(&self.a)
    }

    /// All poles strictly inside the unit circle, with an optional margin:
    /// `|p| < 1 - margin` for every pole.
    pub fn is_stable_with_margin(&self, margin: f64) -> Result<bool> {
        Ok(self.poles()?.iter().all(|p| p.norm() < 1.0 - margin))
    }

    pub fn is_stable(&self) -> Result<bool> {
        self.is_stable_with_margin(0.0)
    }
}

fn spectrum(a: &RMat) -> Result<Vec<Complex64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let dec = schur(&to_complex(a))?;
    Ok((0..a.nrows()).map(|i| dec.t[(i, i)]).collect())
}
