//! The verification stages. Each stage appends its status to a [`Stages`]
//! collector and returns typed results; commands and the witness pipeline
//! compose them.

use num_traits::ToPrimitive;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::report::{claim, Budgets, Claim, Stages, Status};
use crate::coxeter::{
    arithmeticity_report, cartan_from_diagram, cartan_type_witness, classify_subdiagrams, int_matrix_to_strings,
    is_lanner, matrix_to_json, signature, ArithmeticityReport, CartanMatrix, CartanType, CartanTypeReport,
    CoxeterDiagram, PairProduct, SignatureReport, SubdiagramClass,
};
use crate::error::Error;
use crate::geometry::{
    limit_set_sample, negative_type_seed, orbit, properness_witness, render_csv, render_svg, Chart, LimitPoint,
    NegativeTypeSeed, PlotPoint, PropernessOutcome, RenderReport, WordSampler, DEFAULT_MAX_POINTS,
};
use crate::linalg::Matrix;
use crate::numfield::AlgNum;
use crate::subgroups::{
    abelianization, coxeter_presentation, kernel_sample, low_index_search, maps_to_z, orientation_preserving,
    parity_subgroup_generators, reidemeister_schreier, to_indices, todd_coxeter, torsion_report,
    AbelianizationReport, CosetTable, Epimorphism, TorsionReport,
};
use crate::vinberg::{
    evaluate_word, integer_reflection_generators, invariant_bilinear_forms, invariant_forms_integer,
    reflection_generators, verify_relations, IntElement, RelationReport,
};
use crate::zariski::{
    burnside_span_dim, certify_zariski_dense, even_subgroup_generators, CertificateCheck, DensityBudget,
    DensityOutcome,
};

/// Status for a library error raised inside a stage: exhausted budgets are
/// inconclusive, anything else is a failure.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::ResourceLimit { .. } => Status::Inconclusive,
        _ => Status::Fail,
    }
}

// ---------------------------------------------------------------------------
// Diagram analysis

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct DiagramData {
    pub rank: usize,
    pub labels: Vec<Vec<u32>>,
    /// The diagram in the text input format (1-based vertices).
    pub text: String,
}

impl From<&CoxeterDiagram> for DiagramData {
    fn from(d: &CoxeterDiagram) -> Self {
        DiagramData { rank: d.rank(), labels: d.labels().to_vec(), text: d.to_text() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DiagramAnalysis {
    pub diagram: DiagramData,
    /// Symmetric Cartan matrix; integers as numbers, irrational entries as strings.
    #[schemars(with = "Claim<Vec<Vec<Value>>>")]
    pub cartan: Claim<Value>,
    pub signature: Claim<SignatureReport>,
    pub subdiagrams: Claim<Vec<SubdiagramClass>>,
    pub all_proper_elliptic: Claim<bool>,
    /// `None` for disconnected diagrams.
    pub lanner: Claim<Option<bool>>,
    /// `None` for decomposable Cartan matrices.
    pub cartan_type: Claim<Option<CartanTypeReport>>,
    pub arithmeticity: Claim<ArithmeticityReport>,
}

impl DiagramAnalysis {
    /// The premises of the construction: a Lannér diagram whose Galois
    /// conjugates are positive definite.
    pub fn premises_hold(&self) -> bool {
        self.lanner.value == Some(true) && self.arithmeticity.value.all_conjugates_positive_definite
    }
}

pub fn diagram_analysis(d: &CoxeterDiagram, stages: &mut Stages) -> crate::Result<DiagramAnalysis> {
    let a = cartan_from_diagram(d)?;
    let sig = signature(a.entries())?;
    let subs = classify_subdiagrams(d)?;
    let all_elliptic = subs.iter().all(|s| s.elliptic);
    let lanner = match is_lanner(d) {
        Ok(b) => Some(b),
        Err(Error::Disconnected(_)) => None,
        Err(e) => return Err(e),
    };
    let ty = match cartan_type_witness(&a) {
        Ok(w) => Some(w.report(&a)),
        Err(Error::Decomposable(_)) => None,
        Err(e) => return Err(e),
    };
    let arith = arithmeticity_report(d)?;
    let analysis = DiagramAnalysis {
        diagram: d.into(),
        cartan: claim("coxeter::cartan_from_diagram", matrix_to_json(a.entries())),
        signature: claim("coxeter::signature", sig),
        subdiagrams: claim("coxeter::classify_subdiagrams", subs),
        all_proper_elliptic: claim("coxeter::classify_subdiagrams", all_elliptic),
        lanner: claim("coxeter::is_lanner", lanner),
        cartan_type: claim("coxeter::cartan_type", ty),
        arithmeticity: claim("coxeter::arithmeticity_report", arith),
    };
    let ty_text = analysis.cartan_type.value.as_ref().map_or("decomposable".to_string(), |t| format!("{:?}", t.cartan_type).to_lowercase());
    let conj: Vec<String> = analysis
        .arithmeticity
        .value
        .conjugates
        .iter()
        .map(|c| format!("({},{},{})", c.signature.positives, c.signature.zeros, c.signature.negatives))
        .collect();
    stages.push(
        "diagram analysis",
        Status::Pass,
        format!(
            "rank {}; signature ({},{},{}); {} of {} proper subdiagrams elliptic; Lannér: {}; type {}; field {}; conjugate signatures [{}]",
            d.rank(),
            sig.positives,
            sig.zeros,
            sig.negatives,
            analysis.subdiagrams.value.iter().filter(|s| s.elliptic).count(),
            analysis.subdiagrams.value.len(),
            lanner.map_or("disconnected".to_string(), |b| b.to_string()),
            ty_text,
            analysis.arithmeticity.value.field,
            conj.join(", ")
        ),
    );
    Ok(analysis)
}

// ---------------------------------------------------------------------------
// Representation

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RepresentationData {
    #[schemars(with = "Vec<Vec<Value>>")]
    pub cartan: Value,
    /// `ρ(s_i)` as rows of decimal strings.
    pub generators: Claim<Vec<Vec<Vec<String>>>>,
    pub determinants: Claim<Vec<String>>,
    pub involutive: Claim<Vec<bool>>,
}

pub fn representation(a: &CartanMatrix, stages: &mut Stages) -> crate::Result<(Vec<IntElement>, RepresentationData)> {
    let gens = integer_reflection_generators(a)?;
    let dets: Vec<String> = gens.iter().map(|g| g.matrix.det().to_string()).collect();
    let involutive: Vec<bool> = gens.iter().map(|g| (&g.matrix * &g.matrix).is_identity()).collect();
    let ok = involutive.iter().all(|&b| b) && dets.iter().all(|d| d == "-1");
    stages.push(
        "representation build",
        if ok { Status::Pass } else { Status::Fail },
        format!("{} integer generators; involutive {:?}; determinants {:?}", gens.len(), involutive, dets),
    );
    let data = RepresentationData {
        cartan: a.to_json(),
        generators: claim("vinberg::reflection_generators", gens.iter().map(|g| int_matrix_to_strings(&g.matrix)).collect()),
        determinants: claim("linalg::det", dets),
        involutive: claim("vinberg::reflection_generators", involutive),
    };
    Ok((gens, data))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Verification {
    pub relations: Claim<RelationReport>,
    /// `A'_ij · A'_ji` against `4 cos²(π/m_ij)` for every pair.
    pub compatibility: Claim<Vec<PairProduct>>,
}

/// Relation and compatibility checks; a failure names the offending pairs
/// (1-based, as in the diagram file).
pub fn relation_verification(
    gens: &[IntElement],
    a: &CartanMatrix,
    d: &CoxeterDiagram,
    order_cap: u32,
    stages: &mut Stages,
) -> crate::Result<Verification> {
    let relations = verify_relations(gens, d, order_cap)?;
    let compatibility = a.compatibility(d)?;
    let mut problems = Vec::new();
    let mut undecided = Vec::new();
    for p in relations.pairs.iter().filter(|p| !p.pass) {
        let pair = format!("pair ({},{})", p.i + 1, p.j + 1);
        match p.order {
            // The order exceeds a cap below the label: not decided either way.
            None if p.expected > order_cap => undecided.push(format!(
                "{pair}: order of s{}s{} exceeds the cap {order_cap} below the label {}",
                p.i + 1,
                p.j + 1,
                p.expected
            )),
            order => problems.push(format!(
                "{pair}: order of s{}s{} is {} but the diagram label is {}",
                p.i + 1,
                p.j + 1,
                order.map_or(format!("> {order_cap}"), |o| o.to_string()),
                p.expected
            )),
        }
    }
    for p in compatibility.iter().filter(|p| !p.ok) {
        problems.push(format!(
            "pair ({},{}): A'_ij·A'_ji = {} but 4cos²(π/m) = {}",
            p.i + 1,
            p.j + 1,
            p.product,
            p.expected
        ));
    }
    let (status, summary) = if !problems.is_empty() {
        (Status::Fail, problems.join("; "))
    } else if !undecided.is_empty() {
        (Status::Inconclusive, undecided.join("; "))
    } else {
        let orders: Vec<String> =
            relations.pairs.iter().map(|p| p.order.map_or("-".into(), |o| o.to_string())).collect();
        (Status::Pass, format!("all {} pairs pass with orders ({}); compatibility holds", relations.pairs.len(), orders.join(",")))
    };
    stages.push("relation verification", status, summary);
    Ok(Verification {
        relations: claim("vinberg::verify_relations", relations),
        compatibility: claim("coxeter::CartanMatrix::compatibility", compatibility),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IrreducibilityData {
    pub cartan_type: Claim<CartanTypeReport>,
    pub burnside_span: Claim<usize>,
    pub invariant_forms_integer: Claim<usize>,
    /// Invariant forms of the symmetric field representation built from the diagram.
    pub invariant_forms_symmetric: Claim<usize>,
    pub symmetric_form_is_cartan: Claim<bool>,
}

pub fn irreducibility(
    gens: &[IntElement],
    a: &CartanMatrix,
    d: &CoxeterDiagram,
    stages: &mut Stages,
) -> crate::Result<IrreducibilityData> {
    let ty = cartan_type_witness(a)?.report(a);
    let n = a.rank();
    let mats: Vec<_> = gens.iter().map(|g| g.matrix.clone()).collect();
    let span = burnside_span_dim(&mats)?;
    let forms = invariant_forms_integer(gens)?.len();
    let sym = cartan_from_diagram(d)?;
    let sym_gens: Vec<Matrix<AlgNum>> = reflection_generators(&sym)?.into_iter().map(|g| g.matrix).collect();
    let sym_forms = invariant_bilinear_forms::<AlgNum>(n, &sym_gens)?.len();
    let preserves_a = sym_gens.iter().all(|g| &(&g.transpose() * sym.entries()) * g == *sym.entries());
    let cartan_form = sym_forms == 1 && preserves_a;
    let ok = ty.verified && span == n * n && forms == 0 && cartan_form;
    stages.push(
        "irreducibility and invariant forms",
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "type {} (witness verified: {}); Burnside span {span}/{}; invariant forms: integer rep {forms}, symmetric rep {sym_forms} (spanned by A: {cartan_form})",
            format!("{:?}", ty.cartan_type).to_lowercase(),
            ty.verified,
            n * n
        ),
    );
    Ok(IrreducibilityData {
        cartan_type: claim("coxeter::cartan_type", ty),
        burnside_span: claim("zariski::burnside_span_dim", span),
        invariant_forms_integer: claim("vinberg::invariant_bilinear_forms", forms),
        invariant_forms_symmetric: claim("vinberg::invariant_bilinear_forms", sym_forms),
        symmetric_form_is_cartan: claim("vinberg::invariant_bilinear_forms", cartan_form),
    })
}

// ---------------------------------------------------------------------------
// Density

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DensityData {
    /// Which subgroup the generators generate.
    pub subgroup: String,
    pub generator_words: Vec<Vec<usize>>,
    pub budget: DensityBudget,
    pub outcome: Claim<DensityOutcome>,
    pub revalidation: Option<Claim<CertificateCheck>>,
}

pub fn density_budget(b: &Budgets) -> DensityBudget {
    DensityBudget { word_length: b.word_length, prime_bound: b.prime_bound, max_words: b.density_words }
}

pub fn density(
    stage: &str,
    subgroup: &str,
    gens: &[IntElement],
    budget: DensityBudget,
    stages: &mut Stages,
) -> crate::Result<DensityData> {
    let outcome = certify_zariski_dense(gens, budget)?;
    let revalidation = outcome.certificate().map(|c| c.revalidate()).transpose()?;
    let (status, summary) = match (&outcome, &revalidation) {
        (DensityOutcome::Certified(c), Some(check)) if check.valid => (
            Status::Pass,
            format!(
                "certified: span {}, forms {}, witness {:?} (irreducible mod {}, pattern {:?} mod {}), companion {:?}; revalidated",
                c.span_dimension,
                c.invariant_form_dimension,
                c.witness_word,
                c.prime_irreducible,
                c.transposition_pattern,
                c.prime_transposition,
                c.companion_word
            ),
        ),
        (DensityOutcome::Certified(_), _) => (Status::Fail, "certificate failed revalidation".to_string()),
        (DensityOutcome::Inconclusive(s), _) => (
            Status::Inconclusive,
            format!(
                "inconclusive: {} (span {}, forms {}, {} words examined)",
                s.reason, s.span_dimension, s.invariant_form_dimension, s.words_examined
            ),
        ),
    };
    stages.push(stage, status, summary);
    Ok(DensityData {
        subgroup: subgroup.to_string(),
        generator_words: gens.iter().map(|g| g.word.clone()).collect(),
        budget,
        outcome: claim("zariski::certify_zariski_dense", outcome),
        revalidation: revalidation.map(|c| claim("zariski::DensityCertificate::revalidate", c)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EvenSubgroupData {
    /// Index of the subgroup generated by the products `s_i s_j`, by coset enumeration.
    pub index: Option<Claim<usize>>,
    pub density: DensityData,
}

/// Coset-enumeration check that the products `s_i s_j` generate an index-2
/// subgroup, then density certification of their images.
pub fn even_subgroup_density(
    gens: &[IntElement],
    d: &CoxeterDiagram,
    budgets: &Budgets,
    stages: &mut Stages,
) -> crate::Result<EvenSubgroupData> {
    let p = coxeter_presentation(d);
    let index = match todd_coxeter(&p, &parity_subgroup_generators(d.rank()), budgets.max_cosets) {
        Ok(t) => {
            let status = if t.index == 2 { Status::Pass } else { Status::Fail };
            stages.push("even subgroup index", status, format!("products s_i s_j generate a subgroup of index {}", t.index));
            Some(claim("subgroups::todd_coxeter", t.index))
        }
        Err(e) => {
            stages.push("even subgroup index", error_status(&e), e.to_string());
            None
        }
    };
    let even = even_subgroup_generators(gens);
    let density = density("density certification (even subgroup)", "even-length subgroup", &even, density_budget(budgets), stages)?;
    Ok(EvenSubgroupData { index, density })
}

// ---------------------------------------------------------------------------
// Subgroups

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SearchSummary {
    pub max_index: usize,
    pub classes: usize,
    pub nodes: u64,
    pub node_budget: u64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SubgroupFinding {
    pub index: usize,
    pub table: CosetTable,
    pub schreier_generators: Vec<Vec<usize>>,
    pub abelianization: Claim<AbelianizationReport>,
    pub torsion: Option<Claim<TorsionReport>>,
    pub orientation_preserving: Claim<bool>,
    /// Epimorphisms onto Z, as images of the Schreier generators.
    pub maps_to_z: Claim<Vec<Epimorphism>>,
}

impl SubgroupFinding {
    fn torsion_free(&self) -> bool {
        self.torsion.as_ref().is_some_and(|t| t.value.torsion_free)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct KernelData {
    /// Position of the subgroup in `subgroups`.
    pub subgroup: usize,
    pub epimorphism: Epimorphism,
    pub radius: u32,
    /// Element with φ-value 1.
    pub t_word: Vec<usize>,
    pub words: Claim<Vec<Vec<usize>>>,
    pub distinct_elements: usize,
    /// The distinct kernel elements handed to the density certifier.
    pub density: Option<DensityData>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SubgroupsData {
    pub search: Claim<SearchSummary>,
    pub subgroups: Vec<SubgroupFinding>,
    /// Positions in `subgroups` with positive first Betti number.
    pub positive_betti: Vec<usize>,
    /// Positions that are also torsion-free and orientation-preserving.
    pub lambda_candidates: Vec<usize>,
    pub kernel: Option<KernelData>,
}

pub fn subgroups(
    d: &CoxeterDiagram,
    gens: Option<&[IntElement]>,
    budgets: &Budgets,
    kernel_radius: u32,
    stages: &mut Stages,
) -> crate::Result<SubgroupsData> {
    let p = coxeter_presentation(d);
    let search = low_index_search(&p, budgets.max_index, budgets.search_nodes)?;
    let summary = SearchSummary {
        max_index: search.max_index,
        classes: search.subgroups.len(),
        nodes: search.nodes,
        node_budget: search.node_budget,
        complete: search.complete,
    };
    let mut by_index = std::collections::BTreeMap::<usize, usize>::new();
    for t in &search.subgroups {
        *by_index.entry(t.index).or_default() += 1;
    }
    stages.push(
        "low-index search",
        if search.complete { Status::Pass } else { Status::Inconclusive },
        format!(
            "{} conjugacy classes of index <= {} (by index {:?}); {} nodes{}",
            summary.classes,
            summary.max_index,
            by_index,
            summary.nodes,
            if search.complete { String::new() } else { format!("; node budget {} exhausted", summary.node_budget) }
        ),
    );

    let mut findings = Vec::new();
    let mut analysis_status = Status::Pass;
    let mut analysis_notes = Vec::new();
    for t in &search.subgroups {
        let sub = reidemeister_schreier(&p, t)?;
        let ab = abelianization(&sub.presentation)?;
        let torsion = match torsion_report(t, d) {
            Ok(r) => Some(claim("subgroups::is_torsion_free", r)),
            Err(e) => {
                analysis_status = analysis_status.max(error_status(&e));
                analysis_notes.push(format!("index {}: {e}", t.index));
                None
            }
        };
        let orientation = orientation_preserving(t, &p)?;
        let maps = maps_to_z(&sub.presentation)?;
        findings.push(SubgroupFinding {
            index: t.index,
            table: t.clone(),
            schreier_generators: sub.schreier_words.iter().map(|w| to_indices(w)).collect(),
            abelianization: claim("subgroups::abelianization", ab),
            torsion,
            orientation_preserving: claim("subgroups::orientation_preserving", orientation),
            maps_to_z: claim("subgroups::maps_to_z", maps),
        });
    }
    let torsion_free = findings.iter().filter(|f| f.torsion_free()).count();
    let oriented = findings.iter().filter(|f| f.orientation_preserving.value).count();
    let positive_betti: Vec<usize> = (0..findings.len()).filter(|&k| findings[k].abelianization.value.betti > 0).collect();
    let lambda_candidates: Vec<usize> = positive_betti
        .iter()
        .copied()
        .filter(|&k| findings[k].torsion_free() && findings[k].orientation_preserving.value)
        .collect();
    let mut summary_text = format!(
        "{} subgroups: {torsion_free} torsion-free, {oriented} orientation-preserving, {} with positive betti",
        findings.len(),
        positive_betti.len()
    );
    if !analysis_notes.is_empty() {
        summary_text.push_str(&format!("; {}", analysis_notes.join("; ")));
    }
    stages.push("subgroup analysis", analysis_status, summary_text);

    let lambda_status = if lambda_candidates.is_empty() { Status::BestEffort } else { Status::Pass };
    stages.push(
        "torsion-free positive-betti subgroup",
        lambda_status,
        match lambda_candidates.first() {
            Some(&k) => format!("found at index {} (abelianization {})", findings[k].index, findings[k].abelianization.value),
            None => format!(
                "none within index {}; such a subgroup exists but no effective index bound is known",
                budgets.max_index
            ),
        },
    );

    // Prefer a genuine Λ candidate; otherwise any positive-betti subgroup
    // still exercises the kernel stages.
    let chosen = lambda_candidates.first().or(positive_betti.first()).copied();
    let kernel = match chosen {
        None => {
            stages.push("maps to Z", Status::Skipped, "no subgroup with positive betti number within budget");
            stages.push("kernel sampling", Status::Skipped, "no epimorphism onto Z");
            stages.push("density certification (kernel)", Status::Skipped, "no kernel sample");
            None
        }
        Some(k) => {
            let f = &findings[k];
            stages.push(
                "maps to Z",
                Status::Pass,
                format!(
                    "subgroup {k} (index {}, abelianization {}, torsion-free: {}): {} epimorphism(s)",
                    f.index,
                    f.abelianization.value,
                    f.torsion_free(),
                    f.maps_to_z.value.len()
                ),
            );
            let sub = reidemeister_schreier(&p, &search.subgroups[k])?;
            let phi = f.maps_to_z.value[0].clone();
            let sample = kernel_sample(&sub, &phi, kernel_radius)?;
            let words: Vec<Vec<usize>> = sample.words.iter().map(|w| to_indices(w)).collect();
            stages.push(
                "kernel sampling",
                Status::Pass,
                format!(
                    "{} kernel words at radius {kernel_radius}; each verified to fix the base coset and have φ-value 0",
                    words.len()
                ),
            );
            let (distinct, density_data) = match gens {
                Some(gens) => {
                    let mut seen = std::collections::HashSet::new();
                    let mut elements = Vec::new();
                    for w in &words {
                        let e = evaluate_word(gens, w)?;
                        if seen.insert(int_matrix_to_strings(&e.matrix)) {
                            elements.push(e);
                        }
                    }
                    let distinct = elements.len();
                    elements.truncate(budgets.kernel_generators);
                    let data = if elements.is_empty() {
                        stages.push("density certification (kernel)", Status::Inconclusive, "kernel sample is trivial");
                        None
                    } else {
                        Some(density(
                            "density certification (kernel)",
                            "sampled kernel elements",
                            &elements,
                            density_budget(budgets),
                            stages,
                        )?)
                    };
                    (distinct, data)
                }
                None => {
                    stages.push("density certification (kernel)", Status::Skipped, "no representation supplied");
                    (0, None)
                }
            };
            Some(KernelData {
                subgroup: k,
                epimorphism: phi,
                radius: kernel_radius,
                t_word: to_indices(&sample.t_word),
                words: claim("subgroups::kernel_sample", words),
                distinct_elements: distinct,
                density: density_data,
            })
        }
    };
    Ok(SubgroupsData {
        search: claim("subgroups::low_index_subgroups", summary),
        subgroups: findings,
        positive_betti,
        lambda_candidates,
        kernel,
    })
}

// ---------------------------------------------------------------------------
// Geometry

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct OrbitData {
    /// The seed solves `A'ᵀu < 0`: in the column action `ρ(s_i)` moves `u` by
    /// `-(A'ᵀu)_i e_i`, so this seed lies in the interior of the invariant cone.
    pub seed: Claim<NegativeTypeSeed>,
    pub seed_verified: bool,
    pub depth: usize,
    pub points: Claim<usize>,
    pub level_sizes: Vec<usize>,
    pub closure_verified: Claim<bool>,
    pub properness: Claim<PropernessOutcome>,
    pub witness_verified: Option<bool>,
    pub render: Option<RenderReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct LimitSetData {
    pub seed: u64,
    pub count: usize,
    pub word_length: usize,
    pub sampler: WordSampler,
    pub proximal: Claim<usize>,
    /// Where the chart functional came from.
    pub chart_source: String,
    pub points: Vec<LimitPoint>,
    pub render: Option<RenderReport>,
}

/// A rendered figure waiting to be written.
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Chart for figures; `axes` defaults to [`Chart::default_axes`].
fn chart_for(functional: Option<Vec<f64>>, axes: Option<(usize, usize)>, dim: usize) -> crate::Result<Chart> {
    let (i, j) = axes.unwrap_or_else(|| Chart::default_axes(dim, functional.as_deref()));
    Chart::coordinates(dim, i, j, functional)
}

/// Orbit of the negative-type seed, closure check and properness witness.
/// Returns the witness functional (as floats) for use as a chart.
pub fn orbit_stage(
    gens: &[IntElement],
    a: &CartanMatrix,
    depth: usize,
    axes: Option<(usize, usize)>,
    render: bool,
    stages: &mut Stages,
    artifacts: &mut Vec<Artifact>,
) -> crate::Result<(OrbitData, Option<Vec<f64>>)> {
    let at = a.transpose();
    let seed = negative_type_seed(&at)?;
    let seed_verified = seed.verify(&at);
    let cloud = orbit(gens, &seed.u, depth, DEFAULT_MAX_POINTS)?;
    let closure = cloud.verify_closure(gens);
    stages.push(
        "orbit",
        if closure && seed_verified { Status::Pass } else { Status::Fail },
        format!(
            "seed {:?} (A'ᵀu = {:?}); depth {depth}: {} points, levels {:?}; closure verified: {closure}",
            seed.u.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            seed.au.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            cloud.points.len(),
            cloud.level_sizes
        ),
    );
    let outcome = properness_witness(&cloud)?;
    let (status, summary, verified, functional) = match &outcome {
        PropernessOutcome::Found(w) => {
            let ok = w.verify(&cloud);
            (
                if ok { Status::Pass } else { Status::Fail },
                format!(
                    "functional {:?} with margin {} on {} points ({} LP rounds); re-verified: {ok}",
                    w.functional.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    w.margin,
                    w.points_checked,
                    w.lp_rounds
                ),
                Some(ok),
                Some(w.functional.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect::<Vec<f64>>()),
            )
        }
        PropernessOutcome::NoneFound { violating_depth, reason } => (
            Status::Inconclusive,
            format!("no witness at depth {violating_depth}: {reason} (depth-limited, not a disproof)"),
            None,
            None,
        ),
    };
    stages.push("properness witness", status, summary);
    let render_report = if render {
        let chart = chart_for(functional.clone(), axes, a.rank())?;
        let plot: Vec<PlotPoint> = cloud.points.iter().map(PlotPoint::from).collect();
        let (svg, report) = render_svg(&plot, &chart, &format!("orbit depth {depth}"))?;
        artifacts.push(Artifact { name: "orbit.svg".into(), bytes: svg.into_bytes() });
        artifacts.push(Artifact { name: "orbit.csv".into(), bytes: render_csv(&plot, &chart)?.into_bytes() });
        Some(report)
    } else {
        None
    };
    let data = OrbitData {
        seed: claim("geometry::negative_type_seed", seed),
        seed_verified,
        depth,
        points: claim("geometry::orbit", cloud.points.len()),
        level_sizes: cloud.level_sizes.clone(),
        closure_verified: claim("geometry::OrbitCloud::verify_closure", closure),
        properness: claim("geometry::properness_witness", outcome),
        witness_verified: verified,
        render: render_report,
    };
    Ok((data, functional))
}

#[allow(clippy::too_many_arguments)]
pub fn limit_set_stage(
    gens: &[IntElement],
    functional: Option<Vec<f64>>,
    budgets: &Budgets,
    seed: u64,
    axes: Option<(usize, usize)>,
    render: bool,
    stages: &mut Stages,
    artifacts: &mut Vec<Artifact>,
) -> crate::Result<LimitSetData> {
    let chart_source =
        if functional.is_some() { "properness witness functional" } else { "all-ones functional" }.to_string();
    let dim = gens.first().map_or(0, |g| g.dim());
    let chart = chart_for(functional, axes, dim)?;
    let sample = limit_set_sample(gens, budgets.samples, budgets.sample_length, seed, Some(&chart.functional))?;
    stages.push(
        "limit set",
        Status::Pass,
        format!(
            "{} of {} sampled words of length {} are proximal (seed {seed}, {} words); non-proximal samples are flagged, not dropped",
            sample.proximal_count,
            sample.points.len(),
            sample.word_length,
            match sample.sampler {
                WordSampler::CoxeterReduced => "Coxeter-reduced",
                WordSampler::NonBacktracking => "non-backtracking",
            }
        ),
    );
    let render_report = if render {
        let plot: Vec<PlotPoint> = sample.points.iter().map(PlotPoint::from).collect();
        let (svg, report) = render_svg(&plot, &chart, &format!("seed {seed}; word length {}", sample.word_length))?;
        artifacts.push(Artifact { name: "limitset.svg".into(), bytes: svg.into_bytes() });
        artifacts.push(Artifact { name: "limitset.csv".into(), bytes: render_csv(&plot, &chart)?.into_bytes() });
        Some(report)
    } else {
        None
    };
    Ok(LimitSetData {
        seed,
        count: sample.points.len(),
        word_length: sample.word_length,
        sampler: sample.sampler,
        proximal: claim("geometry::limit_set_sample", sample.proximal_count),
        chart_source,
        points: sample.points,
        render: render_report,
    })
}

/// Whether `a` is of negative type (the geometry stages need a seed).
pub fn is_negative_type(a: &CartanMatrix) -> bool {
    cartan_type_witness(a).is_ok_and(|w| w.cartan_type == CartanType::Negative)
}
