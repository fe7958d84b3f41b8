//! Quantitative comparison of a continuous model and a discrete candidate.
//!
//! The central measure is the holder-weighted frequency error
//! `e_inf = max |G(jw) - R(jw) G_d(e^{jwh})|` over a grid below Nyquist,
//! reported both absolutely and relative to the peak gain of `G`. Time-domain
//! comparisons use the relative l2 distance between sampled responses.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{linspace, logspace};
use crate::loewner::holder_transfer;
use crate::models::{ContinuousModel, DiscreteStateSpace};

/// The comparison grid used throughout: `n` points linearly spaced over
/// `[1e-3, pi/h - 1e-3]`.
pub fn eval_grid(h: f64, n: usize) -> Vec<f64> {
    linspace(1e-3, std::f64::consts::PI / h - 1e-3, n)
}

/// Frequency-domain error measurements, serializable for report files.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    /// Peak of `|G(jw) - R(jw) G_d(e^{jwh})|` over the grid.
    pub e_inf: f64,
    /// `e_inf` as a percentage of the normalizer.
    pub e_inf_rel: f64,
    /// Frequency attaining the peak, rad/s.
    pub argmax_omega: f64,
    /// Peak gain of `G`, searched over a dense log grid unioned with the
    /// evaluation grid. For stable models this approximates the H-infinity
    /// norm; for unstable ones it is still the peak magnitude on the axis.
    pub h_inf_norm: f64,
    pub grid: GridInfo,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridInfo {
    pub points: usize,
    pub omega_min: f64,
    pub omega_max: f64,
}

/// Peak `|G(jw)|` over `[1e-4, 1e3]` log-spaced (4096 points) unioned with
/// the given grid.
pub fn peak_gain(g: &ContinuousModel, grid: &[f64]) -> Result<f64> {
    let mut peak = 0.0f64;
    for &w in logspace(1e-4, 1e3, 4096).iter().chain(grid.iter()) {
        let gv = g.eval_siso(Complex64::new(0.0, w))?;
        peak = peak.max(gv.norm());
    }
    if peak <= 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(peak)
}

/// Measures the holder-weighted frequency error of `gd` against `g` over the
/// given grid, which must lie strictly inside `(0, pi/h)`.
pub fn freq_error(
    g: &ContinuousModel,
    gd: &DiscreteStateSpace,
    grid: &[f64],
) -> Result<ErrorReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty frequency grid".into()));
    }
    let h = gd.h;
    let nyquist = std::f64::consts::PI / h;
    if grid.iter().any(|&w| w <= 0.0 || w >= nyquist) {
        return Err(Error::InvalidInput(format!(
            "grid must lie strictly inside (0, {nyquist})"
        )));
    }
    let mut e_inf = -1.0f64;
    let mut argmax = grid[0];
    for &w in grid {
        let gv = g.eval_siso(Complex64::new(0.0, w))?;
        let zd = Complex64::new(0.0, w * h).exp();
        let dv = gd.eval_siso(zd)?;
        let err = (gv - holder_transfer(w, h) * dv).norm();
        if err > e_inf {
            e_inf = err;
            argmax = w;
        }
    }
    let h_inf_norm = peak_gain(g, grid)?;
    Ok(ErrorReport {
        e_inf,
        e_inf_rel: 100.0 * e_inf / h_inf_norm,
        argmax_omega: argmax,
        h_inf_norm,
        grid: GridInfo {
            points: grid.len(),
            omega_min: grid[0],
            omega_max: *grid.last().unwrap(),
        },
    })
}

/// Relative l2 distance between two equal-length sampled signals, in percent.
pub fn time_error_l2(y_ref: &[f64], y_test: &[f64]) -> Result<f64> {
    if y_ref.len() != y_test.len() {
        return Err(Error::Dimension(format!(
            "reference has {} samples, candidate {}",
            y_ref.len(),
            y_test.len()
        )));
    }
    let dot = |a: &[f64]| a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let refn = dot(y_ref);
    if refn <= 0.0 {
        return Err(Error::ZeroReference);
    }
    let diff: f64 = y_ref
        .iter()
        .zip(y_test.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(100.0 * diff / refn)
}

/// Test input for a time-domain comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TestSignal {
    /// Continuous Dirac impulse; the sampled system receives a single pulse
    /// of height `1/h` at t = 0, whose held reconstruction has unit area.
    #[serde(rename = "impulse")]
    Impulse,
    /// Unit step at t = 0.
    #[serde(rename = "step")]
    Step,
}

/// A continuous reference response and a held discrete response on one grid.
#[derive(Clone, Debug)]
pub struct ResponseComparison {
    pub t: Vec<f64>,
    pub y_ref: Vec<f64>,
    pub y_held: Vec<f64>,
    /// Relative l2 distance between the two, in percent.
    pub e2_pct: f64,
}

/// Simulates `g` and the sampler / `gd` / hold loop side by side
/// on a grid of step `dt` (which must evenly subdivide the sampling period)
/// and measures the relative l2 error between the outputs.
///
/// The impulse reference needs a state-space model; a delay network only
/// supports the step input.
pub fn response_comparison(
    g: &ContinuousModel,
    gd: &DiscreteStateSpace,
    signal: TestSignal,
    t_end: f64,
    dt: f64,
) -> Result<ResponseComparison> {
    use crate::models as m;
    let (t, y_ref) = match (signal, g) {
        (TestSignal::Impulse, ContinuousModel::StateSpace(ss)) => {
            m::impulse_response_continuous(ss, t_end, dt)?
        }
        (TestSignal::Impulse, ContinuousModel::TimeDelay(_)) => {
            return Err(Error::Unsupported(
                "impulse reference for a delay network; use the step signal".into(),
            ));
        }
        (TestSignal::Step, ContinuousModel::StateSpace(ss)) => {
            m::step_response_continuous(ss, t_end, dt)?
        }
        (TestSignal::Step, ContinuousModel::TimeDelay(tds)) => {
            m::step_response_tds(tds, t_end, dt)?
        }
    };
    let u: Vec<f64> = match signal {
        TestSignal::Impulse => {
            let mut u = vec![0.0; t.len()];
            u[0] = 1.0 / gd.h;
            u
        }
        TestSignal::Step => vec![1.0; t.len()],
    };
    let y_held = m::sample_and_hold_output(gd, &u, dt)?;
    let e2_pct = time_error_l2(&y_ref, &y_held)?;
    Ok(ResponseComparison { t, y_ref, y_held, e2_pct })
}

/// One order in a sweep. Fields that a per-order failure prevented from being
/// measured hold NaN (or None for the stability flag); `failure` records why.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub k: usize,
    /// Relative frequency error of the raw order-k interpolant, percent.
    pub e_rel_unproj: f64,
    /// Relative frequency error after the stable projection, percent.
    pub e_rel_proj: f64,
    /// Stability of the raw interpolant; None when it was never built.
    pub stable_unproj: Option<bool>,
    /// Order of the projected model (k_s + k_u - q when projection ran).
    pub order_proj: usize,
    /// `max |G_d^r - G_d^k|` against the full-rank interpolant, over the
    /// evaluation grid mapped onto the unit circle, an internal estimate of
    /// the truncation error.
    pub gap_to_exact: f64,
    pub failure: Option<String>,
}

/// Sweeps the truncation order over `k_range` (all of `[1, r]` when None):
/// for each k the pencil is projected and realified, measured against `g`,
/// then stabilized with the Nehari projection and measured again. A failure
/// at one order marks that row and the sweep continues.
pub fn order_sweep(
    g: &ContinuousModel,
    h: f64,
    m: usize,
    k_range: Option<std::ops::RangeInclusive<usize>>,
) -> Result<Vec<SweepRow>> {
    let ds = crate::loewner::build_dataset(g, h, m, &crate::loewner::SamplingGrid::default())?;
    let part = crate::loewner::partition(&ds)?;
    let pencil = crate::loewner::build_pencil(&part)?;
    let decomp = crate::loewner::PencilDecomposition::new(&pencil)?;
    let r = decomp.rank(1e-10).r;
    if r == 0 {
        return Err(Error::InvalidInput("data has numerical rank 0".into()));
    }
    let range = k_range.unwrap_or(1..=r);
    if *range.start() < 1 || *range.end() > r || range.is_empty() {
        return Err(Error::InvalidInput(format!(
            "sweep range [{}, {}] must sit inside [1, {r}]",
            range.start(),
            range.end()
        )));
    }
    let exact = crate::loewner::realify(&decomp.project(r)?)?;
    let grid = eval_grid(h, 5000);

    let mut rows = Vec::new();
    for k in range {
        rows.push(sweep_one(g, &decomp, &exact, &grid, k));
    }
    Ok(rows)
}

/// Largest unweighted gap between two discrete models over the evaluation
/// frequencies mapped onto the unit circle. Staying on the measurement band
/// keeps spurious near-circle poles outside it from dominating the estimate.
pub(crate) fn circle_gap(
    g1: &DiscreteStateSpace,
    g2: &DiscreteStateSpace,
    grid: &[f64],
) -> Result<f64> {
    let mut gap = 0.0f64;
    for &w in grid {
        let z = Complex64::new(0.0, w * g1.h).exp();
        gap = gap.max((g1.eval_siso(z)? - g2.eval_siso(z)?).norm());
    }
    Ok(gap)
}

fn sweep_one(
    g: &ContinuousModel,
    decomp: &crate::loewner::PencilDecomposition,
    exact: &DiscreteStateSpace,
    grid: &[f64],
    k: usize,
) -> SweepRow {
    let mut row = SweepRow {
        k,
        e_rel_unproj: f64::NAN,
        e_rel_proj: f64::NAN,
        stable_unproj: None,
        order_proj: 0,
        gap_to_exact: f64::NAN,
        failure: None,
    };
    let fail = |mut row: SweepRow, e: Error| {
        row.failure = Some(e.to_string());
        row
    };
    let gdk = match decomp.project(k).and_then(|d| crate::loewner::realify(&d)) {
        Ok(m) => m,
        Err(e) => return fail(row, e),
    };
    match freq_error(g, &gdk, grid) {
        Ok(rep) => row.e_rel_unproj = rep.e_inf_rel,
        Err(e) => return fail(row, e),
    }
    match gdk.is_stable() {
        Ok(s) => row.stable_unproj = Some(s),
        Err(e) => return fail(row, e),
    }
    match circle_gap(exact, &gdk, grid) {
        Ok(gap) => row.gap_to_exact = gap,
        Err(e) => return fail(row, e),
    }
    let projected = match crate::stabilize::nehari_project(&gdk) {
        Ok(p) => p,
        Err(e) => return fail(row, e),
    };
    row.order_proj = projected.order();
    match freq_error(g, &projected, grid) {
        Ok(rep) => row.e_rel_proj = rep.e_inf_rel,
        Err(e) => return fail(row, e),
    }
    row
}
