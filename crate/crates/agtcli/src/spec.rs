use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckName {
    Voprop,
    Dpfprop,
    Mainprop,
    Mainthm,
    Agt,
    Identities,
    Tragt,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Voprop => "voprop",
            CheckName::Dpfprop => "dpfprop",
            CheckName::Mainprop => "mainprop",
            CheckName::Mainthm => "mainthm",
            CheckName::Agt => "agt",
            CheckName::Identities => "identities",
            CheckName::Tragt => "tragt",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `t1 + t2 = 0` with `a_i = k_i + 1/4`.
    #[default]
    Special,
    /// Random rational `t1, t2, a, m`.
    Generic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// What to run. Unset bounds fall back to per-check defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSpec {
    pub check: CheckName,
    pub rank: Option<usize>,
    pub points: Option<usize>,
    pub order: Option<u32>,
    pub degree: Option<u32>,
    pub seed: u64,
    pub mode: Mode,
    pub charges: Option<Vec<i64>>,
    pub format: Format,
}

impl CheckSpec {
    pub fn new(check: CheckName) -> Self {
        CheckSpec {
            check,
            rank: None,
            points: None,
            order: None,
            degree: None,
            seed: 0,
            mode: Mode::default(),
            charges: None,
            format: Format::default(),
        }
    }

    pub fn rank(mut self, r: usize) -> Self {
        self.rank = Some(r);
        self
    }

    pub fn points(mut self, n: usize) -> Self {
        self.points = Some(n);
        self
    }

    pub fn order(mut self, q: u32) -> Self {
        self.order = Some(q);
        self
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn mode(mut self, m: Mode) -> Self {
        self.mode = m;
        self
    }

    pub fn charges(mut self, ks: Vec<i64>) -> Self {
        self.charges = Some(ks);
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.rank == Some(0) {
            return Err(CliError::InvalidSpec("rank must be positive".into()));
        }
        if self.points == Some(0) {
            return Err(CliError::InvalidSpec("number of punctures must be positive".into()));
        }
        if self.mode == Mode::Generic && self.charges.is_some() {
            return Err(CliError::InvalidSpec("charges only apply to special mode".into()));
        }
        Ok(())
    }
}
