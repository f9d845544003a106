use di_core::ak::{
    ak_complex, atiyah_morphism, change_quantization_iso, excess_complex, extract_splitting_from_formality,
    leray_graded_ranks, psi_theta, restrict_ak, QuantizedCycle,
};
use di_core::cycles::{
    excess_sequence, find_module_splitting, reduction_to_diagonal, verify_splitting, ExcessSequence, LinearCyclePair,
    SplitOutcome, SplittingWitness,
};
use di_core::graded_split::{
    default_variables, find_graded_section, hom_dimension, GradedBundleMap, LineBundleSum, SectionOutcome,
};
use di_core::groebner::PolyMatrix;
use di_core::homalg::ChainComplex;
use di_core::koszul::{ambient_tor_ranks, binomial, derived_restriction, tor_excess_compare, tor_modules};
use di_core::polyring::{Field, OrderKind, PolyRing};
use di_core::Result;

use crate::problem::ProblemFile;
use crate::report::{
    AkResult, AtiyahJson, ChangeJson, CommandResult, DiagResult, EulerCheck, ExcessResult, ExtractionJson,
    FormalityResult, GradedOutcome, GradedSplitResult, Matrix, RestrictionJson, SequenceJson, SplitJson, SplitResult,
    ThetaJson, TorDegree, TorResult,
};

/// Names of finished stages, kept for partial reports.
#[derive(Debug, Default)]
pub struct Trace {
    pub stages: Vec<String>,
}

impl Trace {
    fn done(&mut self, stage: &str) {
        self.stages.push(stage.to_string());
    }
}

pub struct Setup {
    pub field: Field,
    pub order: OrderKind,
    pub seed: Option<u64>,
}

/// A finished computation: its result and whether the answer was positive.
pub struct Computed {
    pub result: CommandResult,
    pub positive: bool,
    pub verdict: String,
}

fn strings(m: &PolyMatrix) -> Matrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(|f| f.to_string()).collect()).collect()
}

fn euler(c: &ChainComplex) -> Result<EulerCheck> {
    let (terms, homology) = c.euler_characteristics()?;
    Ok(EulerCheck { terms, homology, agrees: terms == homology })
}

fn load_pair(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<LinearCyclePair> {
    let pair = LinearCyclePair::from_input(&problem.pair_input(), setup.field, setup.order)?;
    trace.done("adapted coordinates");
    Ok(pair)
}

fn sequence_json(ses: &ExcessSequence) -> SequenceJson {
    let (e, nhat, nty) = ses.labels();
    SequenceJson {
        e: e.to_vec(),
        nhat: nhat.to_vec(),
        nty: nty.to_vec(),
        alpha: strings(ses.alpha()),
        pi: strings(ses.pi()),
    }
}

fn split_json(ses: &ExcessSequence, outcome: &SplitOutcome) -> SplitJson {
    match outcome {
        SplitOutcome::Split(w) => SplitJson::Split {
            section: strings(&w.section),
            retraction: strings(&w.retraction),
            verified: verify_splitting(ses, w),
        },
        SplitOutcome::NonSplit { column, remainder } => {
            SplitJson::NonSplit { column: *column, remainder: remainder.clone() }
        }
    }
}

fn sequence_for(pair: &LinearCyclePair, seed: Option<u64>) -> Result<ExcessSequence> {
    let ses = excess_sequence(pair);
    match seed {
        Some(s) => ses.sheared(s),
        None => Ok(ses),
    }
}

pub fn tor_result(pair: &LinearCyclePair, trace: &mut Trace) -> Result<TorResult> {
    let dr = derived_restriction(pair)?;
    trace.done("derived restriction");
    let tors = tor_modules(&dr)?;
    trace.done("tor modules");
    let comparison = tor_excess_compare(&dr, &tors)?;
    trace.done("excess comparison");
    let ambient = ambient_tor_ranks(pair)?;
    trace.done("ambient tor ranks");
    let euler = euler(dr.complex())?;
    trace.done("euler characteristic");
    let r = pair.excess_rank();
    Ok(TorResult {
        pair: pair.summary(),
        complex_ranks: dr.complex().ranks().to_vec(),
        tor: tors
            .iter()
            .map(|t| TorDegree {
                k: t.k,
                generators: t.homology.presentation.rank(),
                generic_rank: t.generic_rank,
                expected_rank: binomial(r, t.k),
                killed_by_x: t.killed_by_x,
            })
            .collect(),
        tor_ranks: tors.iter().map(|t| t.generic_rank).collect(),
        ambient_tor_ranks: ambient,
        comparison,
        euler,
    })
}

fn tor_positive(t: &TorResult) -> bool {
    t.comparison.verdict
        && t.euler.agrees
        && t.tor.iter().all(|d| d.killed_by_x && d.generic_rank == d.expected_rank)
        && t.ambient_tor_ranks == t.tor_ranks
}

pub fn tor(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let pair = load_pair(problem, setup, trace)?;
    let t = tor_result(&pair, trace)?;
    let positive = tor_positive(&t);
    Ok(Computed {
        verdict: format!("excess-match: {}", t.comparison.verdict),
        positive,
        result: CommandResult::Tor(t),
    })
}

pub fn excess(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let pair = load_pair(problem, setup, trace)?;
    let ses = excess_sequence(&pair);
    let exactness = ses.verify()?;
    trace.done("excess sequence");
    let outcome = find_module_splitting(&ses)?;
    trace.done("splitting");
    let splitting = split_json(&ses, &outcome);
    let split = matches!(splitting, SplitJson::Split { verified: true, .. });
    let exact = exactness.holds();
    Ok(Computed {
        verdict: format!("exact: {exact}, split: {split}"),
        positive: exact && split,
        result: CommandResult::Excess(ExcessResult {
            pair: pair.summary(),
            sequence: sequence_json(&ses),
            exactness,
            splitting,
        }),
    })
}

pub fn split(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let pair = load_pair(problem, setup, trace)?;
    let ses = sequence_for(&pair, setup.seed)?;
    trace.done("excess sequence");
    let outcome = find_module_splitting(&ses)?;
    trace.done("splitting");
    let splitting = split_json(&ses, &outcome);
    let split = matches!(splitting, SplitJson::Split { verified: true, .. });
    Ok(Computed {
        verdict: format!("split: {split}"),
        positive: split,
        result: CommandResult::Split(SplitResult {
            pair: pair.summary(),
            sheared_by: setup.seed,
            change_of_basis: strings(ses.change_of_basis().0),
            sequence: sequence_json(&ses),
            splitting,
        }),
    })
}

pub fn ak(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let pair = load_pair(problem, setup, trace)?;
    let qc = match &problem.phi {
        Some(rows) => QuantizedCycle::parse(&pair, rows)?,
        None => QuantizedCycle::canonical(&pair),
    };
    let data = ak_complex(&qc)?;
    trace.done("ak complex");
    let change = change_quantization_iso(&QuantizedCycle::canonical(&pair), qc.phi())?;
    trace.done("change of quantization");
    let restricted = restrict_ak(&qc, &pair)?;
    trace.done("restriction");
    let c = qc.codim();
    let b = pair.blocks();
    let leray = (0..=b.p + b.r).map(|k| leray_graded_ranks(&pair, k)).collect::<Result<Vec<_>>>()?;
    let euler = euler(&data.complex)?;
    trace.done("euler characteristic");
    let term_ranks: Vec<usize> = data.complex.ranks().iter().rev().copied().collect();
    let expected_ranks = di_core::ak::ak_term_ranks(c);
    let positive = data.holds() && change.holds() && restricted.holds() && euler.agrees && term_ranks == expected_ranks;
    Ok(Computed {
        verdict: format!("ak-resolution: {}", data.resolution.holds()),
        positive,
        result: CommandResult::Ak(AkResult {
            pair: pair.summary(),
            codim: c,
            phi: strings(qc.phi()),
            canonical: qc.is_canonical(),
            term_ranks,
            expected_ranks,
            squares_to_zero: data.squares_to_zero,
            equivariant: data.equivariant,
            action_is_module: data.action_is_module,
            resolution: data.resolution.clone(),
            change: ChangeJson {
                is_chain_map: change.is_chain_map,
                inverse_is_identity: change.inverse_is_identity,
                intertwines_actions: change.intertwines_actions,
            },
            restriction: RestrictionJson {
                ranks: restricted.ranks(),
                expected_ranks: restricted.expected_ranks(),
                quotient_ranks: restricted.quotient_ranks.clone(),
                quotient_matches: restricted.quotient_matches,
                differential_matches: restricted.differential_matches,
                leray_graded_ranks: leray,
            },
            euler,
        }),
    })
}

pub fn formality_result(pair: &LinearCyclePair, seed: Option<u64>, trace: &mut Trace) -> Result<FormalityResult> {
    let dr = derived_restriction(pair)?;
    let tors = tor_modules(&dr)?;
    trace.done("tor modules");
    let ses = sequence_for(pair, seed)?;
    let outcome = find_module_splitting(&ses)?;
    trace.done("splitting");
    let splitting = split_json(&ses, &outcome);
    let witness: SplittingWitness = match outcome {
        SplitOutcome::Split(w) => w,
        SplitOutcome::NonSplit { column, remainder } => {
            return Err(di_core::Error::Invariant(format!(
                "excess sequence of a linear pair does not split (column {column}, remainder {remainder})"
            )))
        }
    };
    let pt = psi_theta(&dr, &ses, &witness)?;
    trace.done("theta");
    let atiyah = atiyah_morphism(&dr)?;
    let agrees = atiyah.agrees_with(&dr, &pt.theta)?;
    trace.done("atiyah morphism");
    let ex = extract_splitting_from_formality(&dr, &ses, &pt.theta)?;
    trace.done("extraction");
    let euler = vec![euler(dr.complex())?, euler(&excess_complex(&dr))?];
    trace.done("euler characteristic");
    let extraction = ExtractionJson {
        unit: ex.unit.clone(),
        section: strings(&ex.witness.section),
        retraction: strings(&ex.witness.retraction),
        rho_canonical: strings(&ex.rho_canonical),
        classes_are_cycles: ex.classes_are_cycles,
        boundaries_killed: ex.boundaries_killed,
        square_one: ex.square_one,
        square_two: ex.square_two,
        rho_alpha_is_identity: ex.rho_alpha_is_identity,
        verified: verify_splitting(&ses, &ex.witness),
    };
    let roundtrip = ex.holds() && extraction.verified;
    let formal = pt.verdict() && atiyah.on_homology.is_iso() && agrees;
    Ok(FormalityResult {
        pair: pair.summary(),
        sheared_by: seed,
        tor_ranks: tors.iter().map(|t| t.generic_rank).collect(),
        splitting,
        theta: ThetaJson {
            rho: strings(&pt.rho),
            chain_map: pt.theta_defect.is_none(),
            quasi_iso: pt.theta_report.clone(),
            psi_is_chain_map: pt.psi_is_chain_map,
            q_is_chain_map: pt.q_is_chain_map,
            factorization: pt.factorization,
            filtration: pt.filtration_report.clone(),
            filtration_linear_over_y: pt.filtration_linear_over_y.clone(),
            restriction_holds: pt.restricted.holds(),
        },
        atiyah: AtiyahJson { matrix: strings(&atiyah.matrix), on_homology: atiyah.on_homology.clone(), agrees_with_theta: agrees },
        extraction,
        euler,
        formal,
        roundtrip,
    })
}

fn formality_positive(f: &FormalityResult) -> bool {
    f.formal && f.roundtrip && f.euler.iter().all(|e| e.agrees)
}

pub fn formality(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let pair = load_pair(problem, setup, trace)?;
    let f = formality_result(&pair, setup.seed, trace)?;
    Ok(Computed {
        verdict: format!("formal: {}, roundtrip: {}", f.formal, f.roundtrip),
        positive: formality_positive(&f),
        result: CommandResult::Formality(f),
    })
}

pub fn diag(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let red = reduction_to_diagonal(&problem.inclusion_input(), setup.field, setup.order)?;
    trace.done("doubled pair");
    let t = tor_result(&red.pair, trace)?;
    let f = formality_result(&red.pair, setup.seed, trace)?;
    let excess_rank = red.pair.excess_rank();
    let excess_rank_matches = excess_rank == red.codim;
    let tor_ranks_match = t.tor_ranks == (0..t.tor_ranks.len()).map(|k| binomial(red.codim, k)).collect::<Vec<_>>();
    let positive = excess_rank_matches && tor_ranks_match && tor_positive(&t) && formality_positive(&f);
    Ok(Computed {
        verdict: format!("diagonal: {positive}"),
        positive,
        result: CommandResult::Diag(DiagResult {
            codim: red.codim,
            dim_x: red.dim_x,
            excess_rank,
            excess_rank_matches,
            tor_ranks_match,
            tor: t,
            formality: f,
        }),
    })
}

pub fn graded_split(problem: &ProblemFile, setup: &Setup, trace: &mut Trace) -> Result<Computed> {
    let n = problem.proj_dim.unwrap_or(0);
    if n == 0 {
        return Err(di_core::Error::Degenerate("proj_dim must be positive".into()));
    }
    let vars = problem.variables.clone().unwrap_or_else(|| default_variables(n));
    if vars.len() != n + 1 {
        return Err(di_core::Error::ArityMismatch { left: vars.len(), right: n + 1 });
    }
    let ring = PolyRing::new(&vars, setup.field, setup.order)?;
    let source = LineBundleSum::new(n, problem.source_twists.clone().unwrap_or_default());
    let target = LineBundleSum::new(n, problem.target_twists.clone().unwrap_or_default());
    let rows = problem.matrix.clone().unwrap_or_default();
    if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
        return Err(di_core::Error::Shape(format!(
            "matrix must be {}x{} (target rank by source rank)",
            target.rank(),
            source.rank()
        )));
    }
    let matrix =
        if rows.is_empty() { PolyMatrix::zeros(&ring, 0, source.rank()) } else { PolyMatrix::parse(&ring, &rows)? };
    let pi = GradedBundleMap::new(source.clone(), target.clone(), matrix)?;
    trace.done("graded map");
    let outcome = find_graded_section(&pi)?;
    trace.done("section solve");
    let (outcome, positive) = match outcome {
        SectionOutcome::Section(s) => {
            let verified = pi.matrix.mul(&s.matrix) == PolyMatrix::identity(&ring, target.rank());
            (GradedOutcome::Section { matrix: strings(&s.matrix), verified }, verified)
        }
        SectionOutcome::NonSplit(c) => (GradedOutcome::NonSplit(c), false),
    };
    Ok(Computed {
        verdict: if positive { "section".into() } else { "non-split".into() },
        positive,
        result: CommandResult::GradedSplit(GradedSplitResult {
            proj_dim: n,
            variables: vars,
            hom_dimension: hom_dimension(&target, &source),
            source_twists: source.twists,
            target_twists: target.twists,
            outcome,
        }),
    })
}
