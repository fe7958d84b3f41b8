//! Model files: a small JSON format with a `type` tag (`css`, `dss`, `tds`)
//! and row-major nested arrays for the matrices.

use serde::{Deserialize, Serialize};

use super::{ContinuousModel, ContinuousStateSpace, DiscreteStateSpace, TimeDelayModel};
use crate::error::{Error, Result};
use crate::linalg::RMat;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ModelFile {
    #[serde(rename = "css")]
    Css {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
        #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
        d: Option<Vec<Vec<f64>>>,
    },
    #[serde(rename = "dss")]
    Dss {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
        #[serde(rename = "D")]
        d: Vec<Vec<f64>>,
        h: f64,
        /// Resolved run configuration, embedded for provenance when the file
        /// was produced by this crate. Ignored on load.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        config: Option<serde_json::Value>,
    },
    #[serde(rename = "tds")]
    Tds {
        #[serde(rename = "A0")]
        a0: Vec<Vec<f64>>,
        #[serde(rename = "A1")]
        a1: Vec<Vec<f64>>,
        #[serde(rename = "A2")]
        a2: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
        tau: f64,
        gamma: f64,
    },
}

#[derive(Clone, Debug)]
pub enum LoadedModel {
    Continuous(ContinuousModel),
    Discrete(DiscreteStateSpace),
}

fn to_matrix(rows: &[Vec<f64>], name: &str) -> Result<RMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Parse(format!("{name}: ragged rows")));
    }
    let mut m = RMat::zeros(nr, nc);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m)
}

fn from_matrix(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl ModelFile {
    pub fn into_model(self) -> Result<LoadedModel> {
        match self {
            ModelFile::Css { a, b, c, d } => {
                let a = to_matrix(&a, "A")?;
                let b = to_matrix(&b, "B")?;
                let c = to_matrix(&c, "C")?;
                let d = match d {
                    Some(rows) => to_matrix(&rows, "D")?,
                    None => RMat::zeros(c.nrows(), b.ncols()),
                };
                Ok(LoadedModel::Continuous(ContinuousModel::StateSpace(
                    ContinuousStateSpace::new(a, b, c, d)?,
                )))
            }
            ModelFile::Dss { a, b, c, d, h, .. } => {
                let g = DiscreteStateSpace::new(
                    to_matrix(&a, "A")?,
                    to_matrix(&b, "B")?,
                    to_matrix(&c, "C")?,
                    to_matrix(&d, "D")?,
                    h,
                )?;
                Ok(LoadedModel::Discrete(g))
            }
            ModelFile::Tds { a0, a1, a2, b, c, tau, gamma } => {
                let g = TimeDelayModel::new(
                    to_matrix(&a0, "A0")?,
                    to_matrix(&a1, "A1")?,
                    to_matrix(&a2, "A2")?,
                    to_matrix(&b, "B")?,
                    to_matrix(&c, "C")?,
                    tau,
                    gamma,
                )?;
                Ok(LoadedModel::Continuous(ContinuousModel::TimeDelay(g)))
            }
        }
    }

    pub fn from_discrete(g: &DiscreteStateSpace, config: Option<serde_json::Value>) -> Self {
        ModelFile::Dss {
            a: from_matrix(&g.a),
            b: from_matrix(&g.b),
            c: from_matrix(&g.c),
            d: from_matrix(&g.d),
            h: g.h,
            config,
        }
    }
}

pub fn load_model(path: &std::path::Path) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.into_model()
}

pub fn save_discrete_model(
    g: &DiscreteStateSpace,
    config: Option<serde_json::Value>,
    path: &std::path::Path,
) -> Result<()> {
    let file = ModelFile::from_discrete(g, config);
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
