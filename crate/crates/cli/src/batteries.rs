//! Randomized verification batteries over generated curvatures.

use chern_positivity::exterior::ExteriorForm;
use chern_positivity::generators::{derive_seed, indefinite_control, GeneratorKind, GeneratorSpec};
use chern_positivity::positivity::{check_hermitian_positive, check_positive, check_strongly_positive};
use chern_positivity::{CurvaturePoint, SearchBudget};
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::curvature_io::{read_curvature, CurvatureJson};
use crate::formspec::{curvature_scale, FormSpec};
use crate::report::{CheckRecord, Cone, FormJson, GeneratorEcho, IdentityRecord, Report, SampleRecord};
use crate::symbolic_suite;
use crate::CliError;

/// One sample slot of a battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub index: u64,
    pub n: usize,
    pub r: usize,
}

/// Slots in `(r, n, i)` order; the position is the sample index.
pub fn slots(cfg: &RunConfig) -> Vec<Slot> {
    let mut out = Vec::new();
    for &r in &cfg.ranks {
        for &n in &cfg.dims {
            for _ in 0..cfg.samples {
                out.push(Slot { index: out.len() as u64, n, r });
            }
        }
    }
    out
}

fn kind_name(kind: &GeneratorKind) -> String {
    match kind {
        GeneratorKind::DualNakano { m } => format!("dual-nakano(m={m})"),
        GeneratorKind::LineSum => "line-sum".into(),
        GeneratorKind::PsdTensor => "psd-tensor".into(),
        GeneratorKind::ConvexMix { parts } => format!("convex-mix(parts={parts})"),
        GeneratorKind::Indefinite => "indefinite".into(),
    }
}

/// The curvature of a slot together with its generator echo.
pub fn sample(cfg: &RunConfig, slot: Slot) -> (CurvaturePoint, GeneratorEcho) {
    if cfg.negative {
        let seed = derive_seed(cfg.seed, slot.index);
        let echo = GeneratorEcho { kind: kind_name(&GeneratorKind::Indefinite), seed, negative: true };
        (indefinite_control(slot.n, slot.r, seed), echo)
    } else {
        let spec = GeneratorSpec::positive_control(slot.n, slot.r, slot.index, cfg.seed);
        let echo = GeneratorEcho { kind: kind_name(&spec.kind), seed: spec.seed, negative: false };
        (spec.generate(), echo)
    }
}

/// Distance relative to the larger form, floored at the curvature scale so
/// that two roundings of a vanishing form compare equal.
fn relative_distance(a: &ExteriorForm, b: &ExteriorForm, c: &CurvaturePoint) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(curvature_scale(c, a.bidegree().0 as i32));
    if scale == 0.0 {
        return 0.0;
    }
    a.distance(b).expect("same shape") / scale
}

fn run_check(
    form_name: &str,
    u: &ExteriorForm,
    cone: Cone,
    budget: &SearchBudget,
    expect_positive: bool,
) -> Result<CheckRecord, CliError> {
    let v = match cone {
        Cone::Weak => check_positive(u, budget),
        Cone::Hermitian => check_hermitian_positive(u, budget.tol),
        Cone::Strong => check_strongly_positive(u, budget),
    }
    .map_err(|e| CliError::Input(format!("{form_name}: {e}")))?;
    Ok(CheckRecord::new(form_name, cone, &v, expect_positive))
}

fn eval(spec: &str, c: &CurvaturePoint) -> ExteriorForm {
    spec.parse::<FormSpec>().expect("built-in form spec").evaluate_real(c).expect("valid built-in form")
}

/// Checks of one sample for the battery commands.
fn sample_record(cfg: &RunConfig, slot: Slot) -> Result<SampleRecord, CliError> {
    let (c, generator) = sample(cfg, slot);
    let budget = cfg.search_budget(slot.index);
    let expect = !cfg.negative;
    let tol = cfg.identity_tol;
    let mut checks = Vec::new();
    let mut identities = Vec::new();
    match cfg.command {
        Command::VerifyMain => {
            let chern_route = eval("S(2,1,0)", &c);
            let segre_route = eval("s(-2,1,4)", &c);
            identities.push(IdentityRecord::numeric(
                "S(2,1,0) = s(-2,1,4)",
                relative_distance(&chern_route, &segre_route, &c),
                tol,
            ));
            checks.push(run_check("S(2,1,0)", &chern_route, Cone::Weak, &budget, expect)?);
        }
        Command::VerifyC2 => {
            let c2 = eval("c2", &c);
            identities.push(IdentityRecord::numeric(
                "c2 = 2x2 minor sum",
                relative_distance(&c2, &c.c2_minor_sum(), &c),
                tol,
            ));
            checks.push(run_check("c2", &c2, Cone::Weak, &budget, expect)?);
            if slot.n == 2 {
                checks.push(run_check("c2", &c2, Cone::Hermitian, &budget, expect)?);
            }
        }
        Command::VerifyIneq => {
            let c1 = eval("c1", &c);
            let c1c2 = eval("c1*c2", &c);
            let top = &c1.wedge_power(3) - &c1c2;
            let c1s2 = eval("c1*s2", &c);
            identities.push(IdentityRecord::numeric("c1^3 - c1*c2 = c1*s2", relative_distance(&top, &c1s2, &c), tol));
            let bottom = &c1c2 - &eval("c3", &c);
            let s210 = eval("S(2,1,0)", &c);
            identities.push(IdentityRecord::numeric(
                "c1*c2 - c3 = S(2,1,0)",
                relative_distance(&bottom, &s210, &c),
                tol,
            ));
            checks.push(run_check("c1*s2", &c1s2, Cone::Weak, &budget, expect)?);
            checks.push(run_check("S(2,1,0)", &s210, Cone::Weak, &budget, expect)?);
            checks.push(run_check("s2", &eval("s2", &c), Cone::Weak, &budget, expect)?);
        }
        Command::VerifyPushforwards | Command::CheckForm => unreachable!("not a sampled battery"),
    }
    let curvature = checks.iter().any(CheckRecord::is_refuted).then(|| CurvatureJson::from_curvature(&c));
    Ok(SampleRecord {
        index: slot.index,
        n: slot.n,
        r: slot.r,
        generator,
        checks,
        identities,
        curvature,
        forms: Vec::new(),
    })
}

fn check_form(cfg: &RunConfig) -> Result<SampleRecord, CliError> {
    let path = cfg.input.as_ref().expect("validated");
    let c = read_curvature(path)?;
    let budget = cfg.search_budget(0);
    let specs: Vec<String> = if cfg.forms.is_empty() { vec!["c2".into()] } else { cfg.forms.clone() };
    let cones = if cfg.cones.is_empty() { vec![Cone::Weak] } else { cfg.cones.clone() };
    let mut checks = Vec::new();
    let mut forms = Vec::new();
    for s in &specs {
        let spec: FormSpec = s.parse()?;
        let u = spec.evaluate_real(&c)?;
        for &cone in &cones {
            checks.push(run_check(s, &u, cone, &budget, cfg.expect_positive)?);
        }
        forms.push((s.clone(), FormJson::from_form(&u)));
    }
    let curvature = checks.iter().any(CheckRecord::is_refuted).then(|| CurvatureJson::from_curvature(&c));
    Ok(SampleRecord {
        index: 0,
        n: c.n(),
        r: c.r(),
        generator: GeneratorEcho { kind: format!("file:{}", path.display()), seed: 0, negative: false },
        checks,
        identities: Vec::new(),
        curvature,
        forms,
    })
}

/// Runs the configured command on the current rayon pool.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::VerifyPushforwards => Ok(Report::new(cfg, Vec::new(), symbolic_suite::run_all())),
        Command::CheckForm => Ok(Report::new(cfg, vec![check_form(cfg)?], Vec::new())),
        _ => {
            let records: Result<Vec<SampleRecord>, CliError> =
                slots(cfg).into_par_iter().map(|slot| sample_record(cfg, slot)).collect();
            Ok(Report::new(cfg, records?, Vec::new()))
        }
    }
}

/// Re-evaluates every refuted check of a record from the record alone and
/// returns the replayed values.
pub fn replay_refutations(rec: &SampleRecord) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for check in rec.checks.iter().filter(|c| c.is_refuted()) {
        let curvature = rec
            .curvature
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("record {} lacks its curvature", rec.index)))?
            .to_curvature()?;
        let witness = check
            .witness
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("record {} lacks a witness", rec.index)))?
            .to_witness()?;
        let u = check.form.parse::<FormSpec>()?.evaluate_real(&curvature)?;
        out.push(witness.replay(&u).map_err(|e| CliError::Input(e.to_string()))?);
    }
    Ok(out)
}
