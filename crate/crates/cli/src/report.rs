//! Report documents: full JSON plus a flat CSV view.

use std::io::Write;
use std::path::Path;

use chern_positivity::exterior::{ExteriorForm, MultiIndex};
use chern_positivity::positivity::{PositivityVerdict, SpCertificate, Witness};
use chern_positivity::{Complex64, Covector};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::curvature_io::CurvatureJson;
use crate::CliError;

pub const TOOL: &str = "chernpos";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormTerm {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub terms: Vec<FormTerm>,
}

impl FormJson {
    pub fn from_form(u: &ExteriorForm) -> Self {
        let (p, q) = u.bidegree();
        FormJson {
            n: u.n(),
            p,
            q,
            terms: u
                .terms()
                .map(|(&(i, j), c)| FormTerm { i: i.indices(), j: j.indices(), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<ExteriorForm, CliError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let i = MultiIndex::new(&t.i, self.n).map_err(|e| CliError::Input(e.to_string()))?;
            let j = MultiIndex::new(&t.j, self.n).map_err(|e| CliError::Input(e.to_string()))?;
            terms.push(((i, j), Complex64::new(t.re, t.im)));
        }
        ExteriorForm::from_terms(self.n, self.p, self.q, terms).map_err(|e| CliError::Input(e.to_string()))
    }
}

type Components = Vec<[f64; 2]>;

fn covector_json(c: &Covector) -> Components {
    c.components().iter().map(|z| [z.re, z.im]).collect()
}

fn covector_from(c: &Components) -> Covector {
    Covector::new(c.iter().map(|z| Complex64::new(z[0], z[1])).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub weight: f64,
    pub factors: Vec<Components>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Vectors { vectors: Vec<Components> },
    TestForm { form: FormJson },
    Pairing { form: FormJson },
    Certificate { n: usize, p: usize, atoms: Vec<AtomJson> },
}

impl WitnessJson {
    pub fn from_witness(w: &Witness) -> Self {
        match w {
            Witness::Vectors(v) => WitnessJson::Vectors { vectors: v.iter().map(covector_json).collect() },
            Witness::TestForm(f) => WitnessJson::TestForm { form: FormJson::from_form(f) },
            Witness::Pairing(f) => WitnessJson::Pairing { form: FormJson::from_form(f) },
            Witness::Certificate(c) => WitnessJson::Certificate {
                n: c.n,
                p: c.p,
                atoms: c
                    .atoms
                    .iter()
                    .map(|(w, fs)| AtomJson { weight: *w, factors: fs.iter().map(covector_json).collect() })
                    .collect(),
            },
        }
    }

    pub fn to_witness(&self) -> Result<Witness, CliError> {
        Ok(match self {
            WitnessJson::Vectors { vectors } => Witness::Vectors(vectors.iter().map(covector_from).collect()),
            WitnessJson::TestForm { form } => Witness::TestForm(form.to_form()?),
            WitnessJson::Pairing { form } => Witness::Pairing(form.to_form()?),
            WitnessJson::Certificate { n, p, atoms } => Witness::Certificate(SpCertificate {
                n: *n,
                p: *p,
                atoms: atoms.iter().map(|a| (a.weight, a.factors.iter().map(covector_from).collect())).collect(),
            }),
        })
    }
}

/// Which cone a check tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    Weak,
    Hermitian,
    Strong,
}

impl std::str::FromStr for Cone {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "weak" => Ok(Cone::Weak),
            "hermitian" => Ok(Cone::Hermitian),
            "strong" => Ok(Cone::Strong),
            _ => Err(CliError::Usage(format!("unknown cone {s:?} (weak, hermitian, strong)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Form specification, see [`crate::formspec`].
    pub form: String,
    pub cone: Cone,
    pub status: String,
    pub margin: Option<f64>,
    pub threshold: f64,
    pub heuristic: bool,
    /// Whether a refutation would contradict the expected outcome.
    pub expect_positive: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessJson>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl CheckRecord {
    pub fn new(form: &str, cone: Cone, v: &PositivityVerdict, expect_positive: bool) -> Self {
        // certificates can be large; only refutations keep their witness
        let witness = if v.is_refuted() { v.witness.as_ref().map(WitnessJson::from_witness) } else { None };
        CheckRecord {
            form: form.to_string(),
            cone,
            status: v.status.to_string(),
            margin: finite(v.margin),
            threshold: v.threshold,
            heuristic: v.heuristic,
            expect_positive,
            witness,
        }
    }

    pub fn is_refuted(&self) -> bool {
        self.status == "refuted"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl IdentityRecord {
    pub fn numeric(name: &str, residual: f64, tol: f64) -> Self {
        IdentityRecord { name: name.to_string(), residual, tol, pass: residual <= tol, detail: None }
    }

    pub fn exact(name: &str, pass: bool, detail: Option<String>) -> Self {
        IdentityRecord { name: name.to_string(), residual: if pass { 0.0 } else { 1.0 }, tol: 0.0, pass, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEcho {
    pub kind: String,
    pub seed: u64,
    pub negative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub n: usize,
    pub r: usize,
    pub generator: GeneratorEcho,
    pub checks: Vec<CheckRecord>,
    pub identities: Vec<IdentityRecord>,
    /// Present whenever a check was refuted, so the witness can be replayed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curvature: Option<CurvatureJson>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub forms: Vec<(String, FormJson)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub samples: usize,
    pub checks: usize,
    pub certified: usize,
    pub refuted: usize,
    pub unknown: usize,
    pub unexpected_refutations: usize,
    pub identities: usize,
    pub identity_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub timestamp: u64,
    pub config: RunConfig,
    pub records: Vec<SampleRecord>,
    /// Identities not tied to a sample (the symbolic suite).
    pub identities: Vec<IdentityRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &RunConfig, mut records: Vec<SampleRecord>, identities: Vec<IdentityRecord>) -> Self {
        records.sort_by_key(|r| r.index);
        let mut s = Summary { samples: records.len(), identities: identities.len(), ..Summary::default() };
        s.identity_failures = identities.iter().filter(|i| !i.pass).count();
        for rec in &records {
            for c in &rec.checks {
                s.checks += 1;
                match c.status.as_str() {
                    "certified" => s.certified += 1,
                    "refuted" => {
                        s.refuted += 1;
                        if c.expect_positive {
                            s.unexpected_refutations += 1;
                        }
                    }
                    _ => s.unknown += 1,
                }
            }
            s.identities += rec.identities.len();
            s.identity_failures += rec.identities.iter().filter(|i| !i.pass).count();
        }
        let timestamp =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.name().to_string(),
            timestamp,
            config: config.clone(),
            records,
            identities,
            summary: s,
        }
    }

    pub fn success(&self) -> bool {
        self.summary.unexpected_refutations == 0 && self.summary.identity_failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// The JSON text with the timestamp zeroed; equal for equal runs.
    pub fn canonical_json(&self) -> String {
        Report { timestamp: 0, ..self.clone() }.to_json()
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
    }

    /// One row per check and per identity.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| CliError::Io("csv".into(), e.to_string());
        out.write_record([
            "index",
            "n",
            "r",
            "generator",
            "seed",
            "kind",
            "name",
            "status",
            "margin",
            "threshold",
            "heuristic",
        ])
        .map_err(csv_err)?;
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        for rec in &self.records {
            let head = [
                rec.index.to_string(),
                rec.n.to_string(),
                rec.r.to_string(),
                rec.generator.kind.clone(),
                rec.generator.seed.to_string(),
            ];
            for c in &rec.checks {
                let mut row = head.to_vec();
                row.extend([
                    "check".to_string(),
                    format!("{}[{:?}]", c.form, c.cone).to_lowercase(),
                    c.status.clone(),
                    opt(c.margin),
                    format!("{:e}", c.threshold),
                    c.heuristic.to_string(),
                ]);
                out.write_record(&row).map_err(csv_err)?;
            }
            for i in &rec.identities {
                let mut row = head.to_vec();
                row.extend(identity_cells(i));
                out.write_record(&row).map_err(csv_err)?;
            }
        }
        for i in &self.identities {
            let mut row = vec![String::new(); 5];
            row.extend(identity_cells(i));
            out.write_record(&row).map_err(csv_err)?;
        }
        out.flush().map_err(|e| CliError::Io("csv".into(), e.to_string()))
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<(), CliError> {
        let f = std::fs::File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
        self.write_csv(f)
    }
}

fn identity_cells(i: &IdentityRecord) -> [String; 6] {
    [
        "identity".to_string(),
        i.name.clone(),
        if i.pass { "pass" } else { "fail" }.to_string(),
        format!("{:e}", i.residual),
        format!("{:e}", i.tol),
        "false".to_string(),
    ]
}
