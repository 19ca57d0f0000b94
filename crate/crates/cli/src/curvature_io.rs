//! Curvature files.
//!
//! ```json
//! { "schema_version": 1, "n": 2, "r": 1,
//!   "theta": [[ { "entries": [ { "j": 1, "k": 1, "re": 1.0, "im": 0.0 } ] } ]] }
//! ```
//!
//! `theta[α][β]` holds `Θ_{αβ} = Σ (re + i·im) e_j^∨∧ē_k^∨`; `j`, `k`, `α`, `β`
//! are 1-based in the sense that `theta[0][0]` is `Θ_{11}`.

use std::path::Path;

use chern_positivity::exterior::{ExteriorForm, MultiIndex};
use chern_positivity::{Complex64, CurvaturePoint};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub j: usize,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureJson {
    pub schema_version: u32,
    pub n: usize,
    pub r: usize,
    pub theta: Vec<Vec<FormJson>>,
}

impl CurvatureJson {
    pub fn from_curvature(c: &CurvaturePoint) -> Self {
        let theta = (0..c.r())
            .map(|a| {
                (0..c.r())
                    .map(|b| FormJson {
                        entries: c
                            .entry(a, b)
                            .terms()
                            .map(|(&(i, j), z)| EntryJson { j: i.indices()[0], k: j.indices()[0], re: z.re, im: z.im })
                            .collect(),
                    })
                    .collect()
            })
            .collect();
        CurvatureJson { schema_version: SCHEMA_VERSION, n: c.n(), r: c.r(), theta }
    }

    /// Builds the curvature; structural errors and Hermitian-symmetry
    /// violations name the offending entry.
    pub fn to_curvature(&self) -> Result<CurvaturePoint, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!("unsupported schema_version {}", self.schema_version)));
        }
        let (n, r) = (self.n, self.r);
        if r == 0 || self.theta.len() != r || self.theta.iter().any(|row| row.len() != r) {
            return Err(CliError::Input(format!("theta must be a {r} x {r} array")));
        }
        let mut forms = Vec::with_capacity(r * r);
        for (a, row) in self.theta.iter().enumerate() {
            for (b, f) in row.iter().enumerate() {
                let mut terms = Vec::with_capacity(f.entries.len());
                for e in &f.entries {
                    if e.j == 0 || e.k == 0 || e.j > n || e.k > n {
                        return Err(CliError::Input(format!(
                            "entry ({},{}): index pair ({},{}) outside 1..={n}",
                            a + 1,
                            b + 1,
                            e.j,
                            e.k
                        )));
                    }
                    if !(e.re.is_finite() && e.im.is_finite()) {
                        return Err(CliError::Input(format!("entry ({},{}): non-finite coefficient", a + 1, b + 1)));
                    }
                    terms.push(((MultiIndex::single(e.j), MultiIndex::single(e.k)), Complex64::new(e.re, e.im)));
                }
                let form = ExteriorForm::from_terms(n, 1, 1, terms)
                    .map_err(|e| CliError::Input(format!("entry ({},{}): {e}", a + 1, b + 1)))?;
                forms.push(form);
            }
        }
        let cp = CurvaturePoint::new(n, r, forms).map_err(|e| CliError::Input(e.to_string()))?;
        let violations = cp.validate();
        if let Some(v) = violations.first() {
            return Err(CliError::Input(v.to_string()));
        }
        Ok(cp)
    }
}

pub fn read_curvature(path: &Path) -> Result<CurvaturePoint, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    let json: CurvatureJson =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    json.to_curvature()
}

pub fn write_curvature(path: &Path, c: &CurvaturePoint) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&CurvatureJson::from_curvature(c)).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}
