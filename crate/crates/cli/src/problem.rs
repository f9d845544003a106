//! Problem files: one JSON object per invocation, validated against the
//! subcommand before anything is computed.

use std::fmt;

use clap::ValueEnum;
use di_core::cycles::{InclusionInput, PairInput};
use di_core::polyring::{Field, OrderKind};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Tor,
    Excess,
    Ak,
    Formality,
    Split,
    Diag,
    GradedSplit,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Tor => "tor",
            Kind::Excess => "excess",
            Kind::Ak => "ak",
            Kind::Formality => "formality",
            Kind::Split => "split",
            Kind::Diag => "diag",
            Kind::GradedSplit => "graded-split",
        }
    }

    fn allowed(self) -> &'static [&'static str] {
        match self {
            Kind::Tor | Kind::Excess | Kind::Formality | Kind::Split => &["ambient", "X", "Y"],
            Kind::Ak => &["ambient", "X", "Y", "phi"],
            Kind::Diag => &["ambient", "X"],
            Kind::GradedSplit => &["proj_dim", "source_twists", "target_twists", "matrix", "variables"],
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Kind::Tor | Kind::Excess | Kind::Formality | Kind::Split | Kind::Ak => &["ambient", "X", "Y"],
            Kind::Diag => &["ambient", "X"],
            Kind::GradedSplit => &["proj_dim", "source_twists", "target_twists", "matrix"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// `qq`, `fp:<p>`, or `fp` together with `prime`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verbosity: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<i64>>>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_twists: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_twists: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid problem file: {e}"))
    }

    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |name, set: bool| {
            if set {
                out.push(name);
            }
        };
        mark("ambient", self.ambient.is_some());
        mark("X", self.x.is_some());
        mark("Y", self.y.is_some());
        mark("phi", self.phi.is_some());
        mark("proj_dim", self.proj_dim.is_some());
        mark("source_twists", self.source_twists.is_some());
        mark("target_twists", self.target_twists.is_some());
        mark("matrix", self.matrix.is_some());
        mark("variables", self.variables.is_some());
        out
    }

    /// Checks the version, the kind tag and that exactly the payload fields
    /// of `kind` are used.
    pub fn validate(&self, kind: Kind) -> Result<(), String> {
        if self.version != SCHEMA_VERSION {
            return Err(format!("unsupported version {} (expected {SCHEMA_VERSION})", self.version));
        }
        if let Some(k) = self.kind {
            if k != kind {
                return Err(format!("problem file is of kind `{k}`, invoked as `{kind}`"));
            }
        }
        let present = self.present();
        for name in &present {
            if !kind.allowed().contains(name) {
                return Err(format!("field `{name}` is not used by `{kind}` problems"));
            }
        }
        for name in kind.required() {
            if !present.contains(name) {
                return Err(format!("`{kind}` problems need the field `{name}`"));
            }
        }
        Ok(())
    }

    pub fn pair_input(&self) -> PairInput {
        PairInput {
            ambient: self.ambient.unwrap_or(0),
            x: self.x.clone().unwrap_or_default(),
            y: self.y.clone().unwrap_or_default(),
            phi: self.phi.clone(),
        }
    }

    pub fn inclusion_input(&self) -> InclusionInput {
        InclusionInput { ambient: self.ambient.unwrap_or(0), x: self.x.clone().unwrap_or_default() }
    }

    /// Flag, then file option, then `qq`.
    pub fn field(&self, flag: Option<&str>) -> Result<Field, String> {
        let opts = self.options.clone().unwrap_or_default();
        let spec = match (flag, opts.field.as_deref(), opts.prime) {
            (Some(f), _, _) => f.to_string(),
            (None, Some("fp"), Some(p)) => format!("fp:{p}"),
            (None, Some("fp"), None) => return Err("options.field `fp` needs options.prime".into()),
            (None, Some(f), Some(_)) => return Err(format!("options.prime given with field `{f}`")),
            (None, Some(f), None) => f.to_string(),
            (None, None, Some(p)) => format!("fp:{p}"),
            (None, None, None) => "qq".into(),
        };
        Field::parse(&spec).map_err(|e| e.to_string())
    }

    pub fn order(&self, flag: Option<&str>) -> Result<OrderKind, String> {
        let opts = self.options.as_ref();
        let name = flag.or(opts.and_then(|o| o.order.as_deref())).unwrap_or("degrevlex");
        OrderKind::parse(name).map_err(|e| e.to_string())
    }
}
