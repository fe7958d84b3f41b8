//! Plain-text serialization of frequency datasets.
//!
//! Format: a comment line `# h=<period>`, a header line, then one row per
//! stored pair with columns `omega,re_node,im_node,re_value,im_value`. Numbers
//! carry 17 significant digits so a roundtrip is bit-exact.

use num_complex::Complex64;

use super::FrequencyDataSet;
use crate::error::{Error, Result};

pub const HEADER: &str = "omega,re_node,im_node,re_value,im_value";

pub fn to_csv(ds: &FrequencyDataSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("# h={:.16e}\n", ds.h));
    out.push_str(HEADER);
    out.push('\n');
    for i in 0..ds.len() {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            ds.omegas[i], ds.nodes[i].re, ds.nodes[i].im, ds.values[i].re, ds.values[i].im
        ));
    }
    out
}

pub fn from_csv(text: &str) -> Result<FrequencyDataSet> {
    let mut h: Option<f64> = None;
    let mut rows: Vec<(f64, Complex64, Complex64)> = Vec::new();
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(val) = rest.strip_prefix("h=") {
                let parsed: f64 = val
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad h value {val:?}", lineno + 1)))?;
                h = Some(parsed);
            }
            continue;
        }
        if line == HEADER {
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "line {}: expected 5 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut nums = [0.0f64; 5];
        for (k, f) in fields.iter().enumerate() {
            nums[k] = f
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {f:?}", lineno + 1)))?;
        }
        rows.push((
            nums[0],
            Complex64::new(nums[1], nums[2]),
            Complex64::new(nums[3], nums[4]),
        ));
    }

    let h = h.ok_or_else(|| Error::Parse("missing `# h=` line".into()))?;
    if !saw_header {
        return Err(Error::Parse(format!("missing header line {HEADER:?}")));
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }

    // Positive rows rebuild the set; negative rows must match their partner's
    // conjugate so a hand-edited file cannot smuggle in an inconsistent half.
    let mut pos: Vec<(f64, Complex64, Complex64)> = Vec::new();
    let mut neg: Vec<(f64, Complex64, Complex64)> = Vec::new();
    for row in rows {
        if row.0 > 0.0 {
            pos.push(row);
        } else if row.0 < 0.0 {
            neg.push(row);
        } else {
            return Err(Error::Parse("omega = 0 is not a valid sample".into()));
        }
    }
    if !neg.is_empty() && neg.len() != pos.len() {
        return Err(Error::Parse(format!(
            "{} positive rows vs {} negative rows",
            pos.len(),
            neg.len()
        )));
    }
    pos.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(w, node, value) in &neg {
        let partner = pos
            .iter()
            .find(|p| rel_close(p.0, -w, 1e-12))
            .ok_or_else(|| Error::Parse(format!("omega = {w} has no positive partner")))?;
        if (node - partner.1.conj()).norm() > 1e-9 * (1.0 + partner.1.norm())
            || (value - partner.2.conj()).norm() > 1e-9 * (1.0 + partner.2.norm())
        {
            return Err(Error::ConjugateInconsistency {
                residue: (value - partner.2.conj()).norm(),
            });
        }
    }

    // Node column is redundant with omega and h; verify instead of trusting it.
    for &(w, node, _) in &pos {
        let expect = Complex64::new(0.0, w * h).exp();
        if (node - expect).norm() > 1e-6 {
            return Err(Error::Parse(format!(
                "node for omega = {w} is {node}, expected e^(j omega h) = {expect}"
            )));
        }
    }

    let omegas: Vec<f64> = pos.iter().map(|p| p.0).collect();
    let values: Vec<Complex64> = pos.iter().map(|p| p.2).collect();
    FrequencyDataSet::from_values(omegas, values, h)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
