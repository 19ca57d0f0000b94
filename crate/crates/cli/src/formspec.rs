//! Names of the forms a report can refer to.
//!
//! Grammar: a product of factors joined by `*`, each factor one of `c<k>`
//! (Chern), `s<k>` (Segre), `S(σ)` (Schur, σ a partition) or `s(σ)`
//! (generalized Schur, any integers). Examples: `c2`, `c1*s2`,
//! `S(2,1,0)`, `s(-2,1,4)`.

use std::fmt;
use std::str::FromStr;

use chern_positivity::exterior::ExteriorForm;
use chern_positivity::symbolic::IntSequence;
use chern_positivity::CurvaturePoint;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Chern(usize),
    Segre(usize),
    Schur(IntSequence),
    GenSchur(IntSequence),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpec(pub Vec<Factor>);

fn parse_seq(body: &str) -> Result<IntSequence, CliError> {
    let inner = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| CliError::Usage(format!("expected (a,b,...) in {body:?}")))?;
    let entries: Result<Vec<i64>, _> =
        inner.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse::<i64>()).collect();
    entries.map(IntSequence::new).map_err(|e| CliError::Usage(format!("bad sequence {body:?}: {e}")))
}

impl FromStr for FormSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut factors = Vec::new();
        for raw in s.split('*') {
            let f = raw.trim();
            let factor = if let Some(rest) = f.strip_prefix("S(") {
                Factor::Schur(parse_seq(&format!("({rest}"))?)
            } else if let Some(rest) = f.strip_prefix("s(") {
                Factor::GenSchur(parse_seq(&format!("({rest}"))?)
            } else if let Some(k) = f.strip_prefix('c') {
                Factor::Chern(k.parse().map_err(|_| CliError::Usage(format!("bad factor {f:?}")))?)
            } else if let Some(k) = f.strip_prefix('s') {
                Factor::Segre(k.parse().map_err(|_| CliError::Usage(format!("bad factor {f:?}")))?)
            } else {
                return Err(CliError::Usage(format!("unknown form {f:?}")));
            };
            factors.push(factor);
        }
        Ok(FormSpec(factors))
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| match x {
                Factor::Chern(k) => format!("c{k}"),
                Factor::Segre(k) => format!("s{k}"),
                Factor::Schur(s) => format!("S{s}"),
                Factor::GenSchur(s) => format!("s{s}"),
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

const ROUNDING_FLOOR: f64 = 1e-12;

/// `(max|Θ|/2π)^p`, the natural size of a degree-`p` characteristic form.
pub fn curvature_scale(c: &CurvaturePoint, p: i32) -> f64 {
    (c.max_abs() / (2.0 * std::f64::consts::PI)).powi(p)
}

impl FormSpec {
    pub fn evaluate(&self, c: &CurvaturePoint) -> Result<ExteriorForm, CliError> {
        let mut acc = ExteriorForm::one(c.n());
        for factor in &self.0 {
            let f = match factor {
                Factor::Chern(k) => c.chern_form(*k),
                Factor::Segre(k) => c.segre_form(*k),
                Factor::Schur(s) => c.schur_form(s),
                Factor::GenSchur(s) => Ok(c.generalized_schur_form(s)),
            }
            .map_err(|e| CliError::Input(format!("{self}: {e}")))?;
            acc = &acc ^ &f;
        }
        Ok(acc)
    }

    /// [`Self::evaluate`] followed by projection onto real forms and removal of
    /// coefficients below `1e-12` times the curvature scale. Reality is
    /// judged against the curvature scale `(max|Θ|/2π)^p`, so forms that
    /// vanish up to rounding pass as the zero they are.
    pub fn evaluate_real(&self, c: &CurvaturePoint) -> Result<ExteriorForm, CliError> {
        let u = self.evaluate(c)?;
        let p = u.bidegree().0 as i32;
        let scale = u.max_abs().max(curvature_scale(c, p));
        let residual = u.reality_residual();
        if residual > 1e-9 * scale {
            return Err(CliError::Input(format!("{self}: form is not real (residual {residual:e})")));
        }
        let u = u.real_part().map_err(|e| CliError::Input(format!("{self}: {e}")))?;
        // below the rounding floor a coefficient is indistinguishable from 0
        let floor = ROUNDING_FLOOR * curvature_scale(c, p);
        let (p, q) = u.bidegree();
        let kept: Vec<_> = u.terms().filter(|(_, z)| z.norm() > floor).map(|(&k, &z)| (k, z)).collect();
        ExteriorForm::from_terms(u.n(), p, q, kept).map_err(|e| CliError::Input(format!("{self}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["c2", "c1*s2", "S(2,1,0)", "s(-2,1,4)", "c1*c1*c1"] {
            assert_eq!(s.parse::<FormSpec>().unwrap().to_string(), s);
        }
        assert!("x2".parse::<FormSpec>().is_err());
        assert!("S(2,1".parse::<FormSpec>().is_err());
    }
}
