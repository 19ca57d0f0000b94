use std::path::PathBuf;

use chern_positivity::SearchBudget;
use serde::{Deserialize, Serialize};

use crate::report::Cone;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyMain,
    VerifyC2,
    VerifyIneq,
    VerifyPushforwards,
    CheckForm,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyMain => "verify-main",
            Command::VerifyC2 => "verify-c2",
            Command::VerifyIneq => "verify-ineq",
            Command::VerifyPushforwards => "verify-pushforwards",
            Command::CheckForm => "check-form",
        }
    }

    fn default_ranks(self) -> Vec<usize> {
        match self {
            Command::VerifyC2 => vec![2, 3, 4, 5],
            _ => vec![3],
        }
    }

    fn default_dims(self) -> Vec<usize> {
        match self {
            Command::VerifyC2 => vec![2, 3, 4, 5],
            Command::VerifyIneq => vec![3, 4],
            _ => vec![3, 4, 5],
        }
    }
}

/// `SearchBudget` mirror with a stable serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetEcho {
    pub starts: usize,
    pub iters: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Samples per `(r, n)` pair.
    pub samples: usize,
    pub seed: u64,
    pub budget: BudgetEcho,
    /// Relative tolerance of numeric identities.
    pub identity_tol: f64,
    /// Draw from the indefinite negative-control generator instead.
    pub negative: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub forms: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub cones: Vec<Cone>,
    pub expect_positive: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            dims: command.default_dims(),
            ranks: command.default_ranks(),
            samples: 100,
            seed: 0,
            budget: BudgetEcho { starts: 64, iters: 200, tol: 1e-9 },
            identity_tol: 1e-10,
            negative: false,
            input: None,
            forms: Vec::new(),
            cones: Vec::new(),
            expect_positive: false,
        }
    }

    /// Budget for the sample with the given index.
    pub fn search_budget(&self, index: u64) -> SearchBudget {
        SearchBudget {
            random_starts: self.budget.starts,
            local_iters: self.budget.iters,
            tol: self.budget.tol,
            rng_seed: chern_positivity::generators::derive_seed(self.seed, index),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.search_budget(0).validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if !(self.identity_tol >= 0.0) {
            return Err(CliError::Usage("identity tolerance must be nonnegative".into()));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| n == 0 || n > 8) {
            return Err(CliError::Usage(format!("dimension {n} outside 1..=8")));
        }
        if let Some(&r) = self.ranks.iter().find(|&&r| r == 0 || r > 8) {
            return Err(CliError::Usage(format!("rank {r} outside 1..=8")));
        }
        match self.command {
            Command::VerifyMain | Command::VerifyIneq => {
                if self.ranks != [3] {
                    return Err(CliError::Usage(format!("{} needs rank 3", self.command.name())));
                }
                if self.dims.iter().any(|&n| n < 3) {
                    return Err(CliError::Usage(format!("{} needs n >= 3", self.command.name())));
                }
            }
            Command::VerifyC2 => {
                if self.ranks.iter().any(|&r| r < 2) || self.dims.iter().any(|&n| n < 2) {
                    return Err(CliError::Usage("verify-c2 needs r >= 2 and n >= 2".into()));
                }
            }
            Command::CheckForm => {
                if self.input.is_none() {
                    return Err(CliError::Usage("check-form needs --input".into()));
                }
            }
            Command::VerifyPushforwards => {}
        }
        Ok(())
    }
}
