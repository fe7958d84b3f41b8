//! Loewner interpolation of holder-weighted frequency data.
//!
//! The continuous model is sampled at frequencies `0 < w_1 < ... < w_2m` below
//! Nyquist; each sample is weighted by the inverse of the zero-order-hold
//! transfer so that a discrete interpolant of the weighted data reproduces the
//! held response of the continuous model. The samples, closed under
//! conjugation, feed a Loewner matrix pencil whose singular structure reveals
//! the minimal interpolant order.

mod csv;
mod pencil;

pub use pencil::{
    build_pencil, numerical_rank, project, realify, DescriptorModel, LoewnerPencil,
    PencilDecomposition, RankReport,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::linspace;
use crate::models::ContinuousModel;

/// Zero-order-hold transfer `R(jw) = (1 - e^{-jwh})/(jwh)`, the frequency
/// response of hold-then-sample reconstruction. `R(0) = 1`.
///
/// Computed through the cancellation-free product form
/// `sinc(wh/2) e^{-j wh/2}`.
pub fn holder_transfer(omega: f64, h: f64) -> Complex64 {
    let half = 0.5 * omega * h;
    let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
    Complex64::new(0.0, -half).exp() * sinc
}

/// Frequency sampling strategies for [`build_dataset`].
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingGrid {
    /// `2m` points linearly spaced over `[omega_min, pi/h - omega_margin]`.
    Linear { omega_min: f64, omega_margin: f64 },
    /// Explicit frequencies, strictly increasing, inside `(0, pi/h)`; the
    /// length must be `2m`.
    Explicit(Vec<f64>),
}

impl Default for SamplingGrid {
    fn default() -> Self {
        SamplingGrid::Linear { omega_min: 1e-3, omega_margin: 1e-3 }
    }
}

impl SamplingGrid {
    fn points(&self, h: f64, m: usize) -> Result<Vec<f64>> {
        let nyquist = std::f64::consts::PI / h;
        match self {
            SamplingGrid::Linear { omega_min, omega_margin } => {
                let hi = nyquist - omega_margin;
                if !(*omega_min > 0.0 && *omega_min < hi) {
                    return Err(Error::InvalidInput(format!(
                        "sampling grid [{omega_min}, {hi}] is empty or negative"
                    )));
                }
                Ok(linspace(*omega_min, hi, 2 * m))
            }
            SamplingGrid::Explicit(w) => {
                if w.len() != 2 * m {
                    return Err(Error::InvalidInput(format!(
                        "explicit grid has {} points, expected 2m = {}",
                        w.len(),
                        2 * m
                    )));
                }
                if !w.windows(2).all(|p| p[0] < p[1]) {
                    return Err(Error::InvalidInput("explicit grid must be strictly increasing".into()));
                }
                if w.first().copied().unwrap_or(0.0) <= 0.0
                    || w.last().copied().unwrap_or(f64::INFINITY) >= nyquist
                {
                    return Err(Error::InvalidInput(format!(
                        "explicit grid must lie strictly inside (0, {nyquist})"
                    )));
                }
                Ok(w.clone())
            }
        }
    }
}

/// Holder-weighted frequency samples, closed under conjugation.
///
/// Entries are ordered `[positive frequencies ascending | their conjugates in
/// the same order]`; the conjugate half is exact by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyDataSet {
    pub h: f64,
    /// Signed angular frequencies.
    pub omegas: Vec<f64>,
    /// Interpolation nodes `e^{j w h}` on the unit circle.
    pub nodes: Vec<Complex64>,
    /// Weighted samples `R(jw)^-1 G(jw)`.
    pub values: Vec<Complex64>,
}

impl FrequencyDataSet {
    /// Builds the conjugate-closed set from samples at positive frequencies.
    pub fn from_values(omegas: Vec<f64>, values: Vec<Complex64>, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!("sampling period h = {h}")));
        }
        if omegas.len() != values.len() || omegas.is_empty() {
            return Err(Error::Dimension(format!(
                "{} frequencies vs {} values",
                omegas.len(),
                values.len()
            )));
        }
        let nyquist = std::f64::consts::PI / h;
        if !omegas.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::InvalidInput("frequencies must be strictly increasing".into()));
        }
        if omegas[0] <= 0.0 || *omegas.last().unwrap() >= nyquist {
            return Err(Error::InvalidInput(format!(
                "frequencies must lie strictly inside (0, {nyquist})"
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("frequency samples".into()));
        }

        let n = omegas.len();
        let mut all_omegas = Vec::with_capacity(2 * n);
        let mut nodes = Vec::with_capacity(2 * n);
        let mut all_values = Vec::with_capacity(2 * n);
        for (&w, &v) in omegas.iter().zip(values.iter()) {
            all_omegas.push(w);
            nodes.push(Complex64::new(0.0, w * h).exp());
            all_values.push(v);
        }
        for i in 0..n {
            all_omegas.push(-all_omegas[i]);
            nodes.push(nodes[i].conj());
            all_values.push(all_values[i].conj());
        }
        Ok(Self { h, omegas: all_omegas, nodes, values: all_values })
    }

    /// Number of stored pairs (twice the positive-frequency count).
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.omegas.len() / 2
    }

    pub fn to_csv(&self) -> String {
        csv::to_csv(self)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        csv::from_csv(text)
    }
}

/// Samples `R(jw)^-1 G(jw)` at `2m` grid frequencies and closes the set under
/// conjugation, yielding `4m` stored pairs.
pub fn build_dataset(
    g: &ContinuousModel,
    h: f64,
    m: usize,
    grid: &SamplingGrid,
) -> Result<FrequencyDataSet> {
    if !g.is_siso() {
        return Err(Error::Unsupported("the interpolation pipeline is SISO only".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("sampling period h = {h}")));
    }
    let omegas = grid.points(h, m)?;
    let mut values = Vec::with_capacity(omegas.len());
    for &w in &omegas {
        let gv = g.eval_siso(Complex64::new(0.0, w))?;
        let r = holder_transfer(w, h);
        values.push(gv / r);
    }
    FrequencyDataSet::from_values(omegas, values, h)
}

/// The two interpolation point sets of the Loewner construction, row points
/// `mu` and column points `lambda`, each conjugate-closed and of equal size.
#[derive(Clone, Debug)]
pub struct Partition {
    pub mu: Vec<Complex64>,
    pub w_mu: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
    pub w_lambda: Vec<Complex64>,
    pub h: f64,
}

/// Splits the dataset by alternating along increasing frequency, keeping each
/// conjugate with its positive partner so both sets stay conjugate-closed.
pub fn partition(ds: &FrequencyDataSet) -> Result<Partition> {
    let p = ds.positive_count();
    if p == 0 || p % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "partition needs an even positive-frequency count, got {p}"
        )));
    }
    let mut mu_pos = Vec::with_capacity(p / 2);
    let mut lam_pos = Vec::with_capacity(p / 2);
    for i in 0..p {
        if i % 2 == 0 {
            mu_pos.push(i);
        } else {
            lam_pos.push(i);
        }
    }
    let collect = |idx: &[usize]| {
        let mut pts = Vec::with_capacity(2 * idx.len());
        let mut vals = Vec::with_capacity(2 * idx.len());
        for &i in idx {
            pts.push(ds.nodes[i]);
            vals.push(ds.values[i]);
        }
        for &i in idx {
            pts.push(ds.nodes[i + p]);
            vals.push(ds.values[i + p]);
        }
        (pts, vals)
    };
    let (mu, w_mu) = collect(&mu_pos);
    let (lambda, w_lambda) = collect(&lam_pos);
    Ok(Partition { mu, w_mu, lambda, w_lambda, h: ds.h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ContinuousModel, ContinuousStateSpace};
    use crate::linalg::RMat;
    use std::f64::consts::PI;

    #[test]
    fn holder_endpoints() {
        let h = 0.4;
        assert!((holder_transfer(0.0, h) - Complex64::ONE).norm() < 1e-15);
        // R(j pi/h) = 2/(j pi), magnitude 2/pi
        let at_nyquist = holder_transfer(PI / h, h);
        assert!((at_nyquist.norm() - 2.0 / PI).abs() < 1e-14);
        assert!((at_nyquist - Complex64::new(0.0, -2.0 / PI)).norm() < 1e-14);
    }

    #[test]
    fn holder_magnitude_is_sinc() {
        let h = 0.7;
        for i in 1..50 {
            let w = i as f64 * 0.9 * PI / h / 50.0;
            let r = holder_transfer(w, h);
            let sinc = (w * h / 2.0).sin() / (w * h / 2.0);
            assert!((r.norm() - sinc.abs()).abs() < 1e-13, "w = {w}");
        }
    }

    #[test]
    fn holder_matches_the_defining_formula() {
        let h = 0.8;
        for i in 1..40 {
            let w = 0.05 + 0.09 * i as f64;
            let x = Complex64::new(0.0, w * h);
            let direct = (Complex64::ONE - (-x).exp()) / x;
            assert!((holder_transfer(w, h) - direct).norm() < 1e-14, "w = {w}");
        }
        // negative frequencies conjugate
        assert!((holder_transfer(-1.3, h) - holder_transfer(1.3, h).conj()).norm() < 1e-15);
    }

    fn unit_plant() -> ContinuousModel {
        // G(s) = 1 exactly: x' = -x, y = 0 x + u
        ContinuousModel::StateSpace(
            ContinuousStateSpace::new(
                RMat::from_element(1, 1, -1.0),
                RMat::from_element(1, 1, 1.0),
                RMat::zeros(1, 1),
                RMat::from_element(1, 1, 1.0),
            )
            .unwrap(),
        )
    }

    #[test]
    fn dataset_of_unit_plant_is_inverse_holder() {
        let h = 0.5;
        let ds = build_dataset(&unit_plant(), h, 4, &SamplingGrid::default()).unwrap();
        assert_eq!(ds.len(), 16);
        for i in 0..ds.len() {
            let w = ds.omegas[i];
            let want = Complex64::ONE / holder_transfer(w, h);
            assert!((ds.values[i] - want).norm() < 1e-13);
            assert!((ds.nodes[i] - Complex64::new(0.0, w * h).exp()).norm() < 1e-14);
            assert!((ds.nodes[i].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dataset_is_conjugate_closed_by_construction() {
        let g = ContinuousModel::StateSpace(crate::plants::paper_ex1());
        let ds = build_dataset(&g, 0.4, 5, &SamplingGrid::default()).unwrap();
        let p = ds.positive_count();
        for i in 0..p {
            assert_eq!(ds.omegas[i + p], -ds.omegas[i]);
            assert_eq!(ds.nodes[i + p], ds.nodes[i].conj());
            assert_eq!(ds.values[i + p], ds.values[i].conj());
        }
    }

    #[test]
    fn explicit_grid_is_validated() {
        let g = unit_plant();
        // wrong length
        assert!(build_dataset(&g, 1.0, 2, &SamplingGrid::Explicit(vec![0.1, 0.2])).is_err());
        // out of band
        assert!(build_dataset(
            &g,
            1.0,
            1,
            &SamplingGrid::Explicit(vec![0.5, 4.0])
        )
        .is_err());
        // valid
        let ds =
            build_dataset(&g, 1.0, 1, &SamplingGrid::Explicit(vec![0.5, 1.5])).unwrap();
        assert_eq!(ds.positive_count(), 2);
    }

    #[test]
    fn partition_alternates_and_stays_conjugate_closed() {
        let g = ContinuousModel::StateSpace(crate::plants::paper_ex1());
        let ds = build_dataset(&g, 0.4, 3, &SamplingGrid::default()).unwrap();
        let part = partition(&ds).unwrap();
        assert_eq!(part.mu.len(), 6);
        assert_eq!(part.lambda.len(), 6);
        // positive halves interleave: mu holds w_1, w_3, w_5
        assert_eq!(part.mu[0], ds.nodes[0]);
        assert_eq!(part.lambda[0], ds.nodes[1]);
        assert_eq!(part.mu[1], ds.nodes[2]);
        // conjugates trail their positive partners
        for i in 0..3 {
            assert_eq!(part.mu[i + 3], part.mu[i].conj());
            assert_eq!(part.w_mu[i + 3], part.w_mu[i].conj());
            assert_eq!(part.lambda[i + 3], part.lambda[i].conj());
            assert_eq!(part.w_lambda[i + 3], part.w_lambda[i].conj());
        }
        // disjoint point sets
        for m in &part.mu {
            for l in &part.lambda {
                assert!((m - l).norm() > 1e-12);
            }
        }
    }

    #[test]
    fn partition_rejects_odd_positive_count() {
        let ds = FrequencyDataSet::from_values(
            vec![0.3, 0.5, 0.9],
            vec![Complex64::ONE; 3],
            1.0,
        )
        .unwrap();
        assert!(partition(&ds).is_err());
    }
}
