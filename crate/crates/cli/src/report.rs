//! Report schema. Everything here deserializes back, so a report can be
//! re-validated by parsing it.

use di_core::cycles::{ExactnessReport, PairSummary};
use di_core::graded_split::NonSplitCertificate;
use di_core::homalg::{PresentedMapCheck, QuasiIsoReport};
use di_core::ak::ResolutionCheck;
use di_core::koszul::TorComparison;
use serde::{Deserialize, Serialize};

use crate::problem::{Kind, ProblemFile};

pub const ENGINE: &str = concat!("derived-intersect ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The computation finished and the answer is no.
    Negative,
    InputError,
    InternalError,
    /// Stopped by `DI_MAX_DEGREE`.
    DegreeCap,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Negative => "negative",
            Status::InputError => "input_error",
            Status::InternalError => "internal_error",
            Status::DegreeCap => "degree_cap",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::InputError => 2,
            Status::InternalError | Status::DegreeCap => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub engine: String,
    pub command: Kind,
    pub status: Status,
    pub verdict: String,
    pub field: Option<String>,
    pub order: Option<String>,
    pub seed: Option<u64>,
    pub degree_cap: Option<u32>,
    pub input: Option<ProblemFile>,
    /// Stages that finished, in order; on failure, the partial computation.
    pub stages: Vec<String>,
    pub error: Option<String>,
    pub result: Option<CommandResult>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandResult {
    Tor(TorResult),
    Excess(ExcessResult),
    Ak(AkResult),
    Formality(FormalityResult),
    Split(SplitResult),
    Diag(DiagResult),
    GradedSplit(GradedSplitResult),
}

pub type Matrix = Vec<Vec<String>>;

/// Alternating sums of term ranks and of generic homology ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerCheck {
    pub terms: i64,
    pub homology: i64,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorDegree {
    pub k: usize,
    pub generators: usize,
    pub generic_rank: usize,
    /// `C(r, k)`.
    pub expected_rank: usize,
    pub killed_by_x: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorResult {
    pub pair: PairSummary,
    pub complex_ranks: Vec<usize>,
    pub tor: Vec<TorDegree>,
    pub tor_ranks: Vec<usize>,
    pub ambient_tor_ranks: Vec<usize>,
    pub comparison: TorComparison,
    pub euler: EulerCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SplitJson {
    Split { section: Matrix, retraction: Matrix, verified: bool },
    NonSplit { column: usize, remainder: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceJson {
    pub e: Vec<String>,
    pub nhat: Vec<String>,
    pub nty: Vec<String>,
    pub alpha: Matrix,
    pub pi: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcessResult {
    pub pair: PairSummary,
    pub sequence: SequenceJson,
    pub exactness: ExactnessReport,
    pub splitting: SplitJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitResult {
    pub pair: PairSummary,
    /// Seed of the random frame change applied to `N̂*`, if any.
    pub sheared_by: Option<u64>,
    pub change_of_basis: Matrix,
    pub sequence: SequenceJson,
    pub splitting: SplitJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeJson {
    pub is_chain_map: bool,
    pub inverse_is_identity: bool,
    pub intertwines_actions: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionJson {
    pub ranks: Vec<usize>,
    pub expected_ranks: Vec<usize>,
    pub quotient_ranks: Vec<usize>,
    pub quotient_matches: bool,
    pub differential_matches: bool,
    /// Ranks of the graded pieces of the Leray filtration, one row per `k`.
    pub leray_graded_ranks: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AkResult {
    pub pair: PairSummary,
    pub codim: usize,
    pub phi: Matrix,
    pub canonical: bool,
    /// Degree `0` first.
    pub term_ranks: Vec<usize>,
    pub expected_ranks: Vec<usize>,
    pub squares_to_zero: bool,
    pub equivariant: bool,
    pub action_is_module: bool,
    pub resolution: ResolutionCheck,
    /// From the coordinate quantization to the given one.
    pub change: ChangeJson,
    pub restriction: RestrictionJson,
    pub euler: EulerCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaJson {
    pub rho: Matrix,
    pub chain_map: bool,
    pub quasi_iso: QuasiIsoReport,
    pub psi_is_chain_map: bool,
    pub q_is_chain_map: bool,
    pub factorization: bool,
    pub filtration: QuasiIsoReport,
    pub filtration_linear_over_y: Vec<(i32, bool)>,
    pub restriction_holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtiyahJson {
    pub matrix: Matrix,
    pub on_homology: PresentedMapCheck,
    pub agrees_with_theta: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractionJson {
    pub unit: String,
    pub section: Matrix,
    pub retraction: Matrix,
    pub rho_canonical: Matrix,
    pub classes_are_cycles: bool,
    pub boundaries_killed: bool,
    pub square_one: bool,
    pub square_two: bool,
    pub rho_alpha_is_identity: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalityResult {
    pub pair: PairSummary,
    pub sheared_by: Option<u64>,
    pub tor_ranks: Vec<usize>,
    pub splitting: SplitJson,
    pub theta: ThetaJson,
    pub atiyah: AtiyahJson,
    pub extraction: ExtractionJson,
    pub euler: Vec<EulerCheck>,
    pub formal: bool,
    pub roundtrip: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagResult {
    pub codim: usize,
    pub dim_x: usize,
    pub excess_rank: usize,
    pub excess_rank_matches: bool,
    pub tor_ranks_match: bool,
    pub tor: TorResult,
    pub formality: FormalityResult,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum GradedOutcome {
    Section { matrix: Matrix, verified: bool },
    NonSplit(NonSplitCertificate),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedSplitResult {
    pub proj_dim: usize,
    pub variables: Vec<String>,
    pub source_twists: Vec<i64>,
    pub target_twists: Vec<i64>,
    /// Dimension of the space of candidate sections.
    pub hom_dimension: usize,
    pub outcome: GradedOutcome,
}
