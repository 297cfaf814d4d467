//! Command-line front end. Every command produces a [`report::Report`]
//! printed as JSON or text and, with `--out DIR`, written to
//! `DIR/report.json` alongside any figures.

pub mod report;
pub mod stages;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coxeter::{enumerate_lanner_with_stats, integrality_filter, CartanMatrix, CoxeterDiagram, EnumerationStats};
use crate::vinberg::IntElement;
use report::{claim, Budgets, Claim, Input, Report, RunConfig, Stages, Status};
use stages::{
    Artifact, DensityData, DiagramAnalysis, DiagramData, EvenSubgroupData, IrreducibilityData, LimitSetData, OrbitData,
    RepresentationData, SubgroupsData, Verification,
};

const PENTAGON_DIAGRAM: &str = include_str!("../../data/pentagon.diagram");
const PENTAGON_CARTAN: &str = include_str!("../../data/pentagon_cartan.json");

#[derive(Parser, Debug)]
#[command(name = "incoherence", version, about = "Exact verification pipeline for reflection groups of Lannér diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Directory for report.json and figures (created if missing).
    #[arg(long, value_name = "DIR", global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(flatten)]
    pub budgets: BudgetArgs,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Coset limit for coset enumeration.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_max_cosets: u64,
    /// Largest subgroup index in the low-index search.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_max_index: u64,
    /// Search-tree nodes for the low-index search.
    #[arg(long, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_search_nodes: u64,
    /// Longest word examined by the density search.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_word_length: u64,
    /// Largest prime tried when factoring characteristic polynomials.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..), global = true)]
    pub budget_prime_bound: u64,
    /// Words examined by each density search.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_density_words: u64,
    /// Word-length depth of the orbit.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_depth: u64,
    /// Number of sampled limit points.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_samples: u64,
    /// Word length of sampled limit points.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_sample_length: u64,
    /// Cap when computing orders of products s_i s_j.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..), global = true)]
    pub budget_order_cap: u32,
    /// Distinct kernel elements handed to the density certifier.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget_kernel_generators: u64,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        let z = |x: u64| usize::try_from(x).unwrap_or(usize::MAX);
        Budgets {
            max_cosets: z(self.budget_max_cosets),
            max_index: z(self.budget_max_index),
            search_nodes: self.budget_search_nodes,
            word_length: z(self.budget_word_length),
            prime_bound: self.budget_prime_bound,
            density_words: z(self.budget_density_words),
            depth: z(self.budget_depth),
            samples: z(self.budget_samples),
            sample_length: z(self.budget_sample_length),
            order_cap: self.budget_order_cap,
            kernel_generators: z(self.budget_kernel_generators),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coxeter diagram analysis.
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Lannér diagram enumeration.
    #[command(subcommand)]
    Lanner(LannerCommand),
    /// Vinberg representation of a Cartan matrix.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Zariski density certification.
    #[command(subcommand)]
    Density(DensityCommand),
    /// Finite-index subgroups, maps onto Z and kernels.
    #[command(subcommand)]
    Subgroups(SubgroupsCommand),
    /// Orbits, properness witnesses and limit sets.
    #[command(subcommand)]
    Geometry(GeometryCommand),
    /// The end-to-end verification pipeline.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Print the JSON schema of a report.
    Schema {
        #[arg(value_enum)]
        kind: SchemaKind,
    },
}

#[derive(Args, Debug, Clone)]
pub struct DiagramInput {
    /// Diagram file (`rank = n` then `edge i j m` lines, 1-based); defaults to the bundled pentagon.
    #[arg(long, value_name = "FILE")]
    pub diagram: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CartanInput {
    /// Cartan matrix JSON (rows of numbers or strings); defaults to the bundled integral pentagon matrix.
    #[arg(long, value_name = "FILE")]
    pub cartan: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum DiagramCommand {
    /// Signature, subdiagrams, Lannér test, Vinberg type and arithmeticity.
    Analyze {
        /// Diagram file; defaults to the bundled pentagon.
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LannerCommand {
    /// All connected Lannér diagrams of rank 4, 5 or 6, up to isomorphism.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(4..=6))]
        rank: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepCommand {
    /// Build the integer reflection generators.
    Build {
        #[command(flatten)]
        cartan: CartanInput,
    },
    /// Check relations, compatibility, irreducibility and invariant forms.
    Verify {
        #[command(flatten)]
        cartan: CartanInput,
        #[command(flatten)]
        diagram: DiagramInput,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensitySubgroup {
    /// The index-2 subgroup generated by the products s_i s_j.
    Even,
    /// The whole reflection group.
    Full,
}

#[derive(Subcommand, Debug)]
pub enum DensityCommand {
    /// Certify Zariski density in SL or GL.
    Certify {
        #[command(flatten)]
        cartan: CartanInput,
        #[command(flatten)]
        diagram: DiagramInput,
        #[arg(long, value_enum, default_value_t = DensitySubgroup::Even)]
        subgroup: DensitySubgroup,
    },
}

#[derive(Subcommand, Debug)]
pub enum SubgroupsCommand {
    /// Low-index subgroups with torsion, orientation, betti and kernel stages.
    Search {
        #[command(flatten)]
        diagram: DiagramInput,
        #[command(flatten)]
        cartan: CartanInput,
        /// Conjugation radius of the kernel sample.
        #[arg(long, default_value_t = 1)]
        kernel_radius: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ChartArgs {
    /// Coordinate indices (0-based) of the two chart axes. Defaults to the
    /// first two coordinates not pinned constant by the chart functional.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub chart_axes: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum GeometryCommand {
    /// Orbit of the negative-type seed and a properness witness.
    Orbit {
        #[command(flatten)]
        cartan: CartanInput,
        #[command(flatten)]
        chart: ChartArgs,
    },
    /// Attracting fixed points of random long words.
    Limitset {
        #[command(flatten)]
        cartan: CartanInput,
        #[command(flatten)]
        chart: ChartArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// Every stage from diagram analysis to figures.
    Pipeline {
        #[command(flatten)]
        diagram: DiagramInput,
        #[command(flatten)]
        cartan: CartanInput,
        #[arg(long, default_value_t = 1)]
        kernel_radius: u32,
        #[command(flatten)]
        chart: ChartArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemaKind {
    Diagram,
    Lanner,
    RepBuild,
    RepVerify,
    Density,
    Subgroups,
    Orbit,
    Limitset,
    Pipeline,
}

// ---------------------------------------------------------------------------
// Result payloads

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct LannerResult {
    pub rank: usize,
    pub diagrams: Claim<Vec<DiagramData>>,
    /// Diagrams whose labels lie in {2,3,4,6}.
    pub integral: Claim<Vec<DiagramData>>,
    pub stats: EnumerationStats,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct RepVerifyResult {
    pub representation: RepresentationData,
    pub verification: Verification,
    pub irreducibility: Option<IrreducibilityData>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct DensityResult {
    pub even_subgroup: Option<EvenSubgroupData>,
    pub full_group: Option<DensityData>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct GeometryResult {
    pub orbit: Option<OrbitData>,
    pub limit_set: Option<LimitSetData>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct PipelineResult {
    pub diagram: DiagramAnalysis,
    pub representation: Option<RepresentationData>,
    pub verification: Option<Verification>,
    pub irreducibility: Option<IrreducibilityData>,
    pub density: Option<EvenSubgroupData>,
    pub subgroups: Option<SubgroupsData>,
    pub geometry: Option<GeometryResult>,
    /// Figure files written to the output directory.
    pub figures: Vec<String>,
}

// ---------------------------------------------------------------------------
// Running

/// Error that stops a command before a report exists (bad input, I/O).
#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError(e.to_string())
    }
}

/// Exit code for input errors.
pub const EXIT_INPUT_ERROR: i32 = 1;

/// What a finished command hands back: stdout text, exit code, files written.
#[derive(Debug)]
pub struct Execution {
    pub stdout: String,
    pub exit_code: i32,
    pub written: Vec<PathBuf>,
}

struct Ctx {
    budgets: Budgets,
    seed: u64,
    out: Option<PathBuf>,
    inputs: Vec<Input>,
    artifacts: Vec<Artifact>,
}

impl Ctx {
    fn config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            inputs: self.inputs.clone(),
            budgets: self.budgets.clone(),
            seed: self.seed,
            out: self.out.as_ref().map(|p| p.display().to_string()),
        }
    }

    fn render(&self) -> bool {
        self.out.is_some()
    }

    fn diagram(&mut self, path: Option<&Path>) -> Result<CoxeterDiagram, CliError> {
        let (text, source) = match path {
            Some(p) => (read(p)?, p.display().to_string()),
            None => (PENTAGON_DIAGRAM.to_string(), "builtin:pentagon".to_string()),
        };
        self.inputs.push(Input { role: "diagram".into(), source: source.clone() });
        CoxeterDiagram::parse(&text).map_err(|e| CliError(format!("{source}: {e}")))
    }

    fn cartan(&mut self, path: Option<&Path>) -> Result<CartanMatrix, CliError> {
        let (text, source) = match path {
            Some(p) => (read(p)?, p.display().to_string()),
            None => (PENTAGON_CARTAN.to_string(), "builtin:pentagon-cartan".to_string()),
        };
        self.inputs.push(Input { role: "cartan".into(), source: source.clone() });
        CartanMatrix::from_json_str(&text).map_err(|e| CliError(format!("{source}: {e}")))
    }
}

fn read(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError(format!("cannot read {}: {e}", p.display())))
}

fn finish<T: Serialize>(ctx: Ctx, report: Report<T>, format: Format) -> Result<Execution, CliError> {
    let json = report.to_json();
    let mut written = Vec::new();
    if let Some(dir) = &ctx.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError(format!("cannot create {}: {e}", dir.display())))?;
        let mut files = vec![("report.json".to_string(), json.clone().into_bytes())];
        files.extend(ctx.artifacts.into_iter().map(|a| (a.name, a.bytes)));
        for (name, bytes) in files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?;
            written.push(path);
        }
    }
    let stdout = match format {
        Format::Json => json,
        Format::Text => report.to_text(),
    };
    Ok(Execution { stdout, exit_code: report.exit_code, written })
}

fn checked_axes(chart: &ChartArgs, dim: usize) -> Result<Option<(usize, usize)>, CliError> {
    let Some(axes) = &chart.chart_axes else { return Ok(None) };
    let (i, j) = (axes[0], axes[1]);
    if i == j || i >= dim || j >= dim {
        return Err(CliError(format!("--chart-axes {i} {j}: need two distinct indices below {dim}")));
    }
    Ok(Some((i, j)))
}

fn schema_for(kind: SchemaKind) -> Value {
    let schema = match kind {
        SchemaKind::Diagram => schemars::schema_for!(Report<DiagramAnalysis>),
        SchemaKind::Lanner => schemars::schema_for!(Report<LannerResult>),
        SchemaKind::RepBuild => schemars::schema_for!(Report<RepresentationData>),
        SchemaKind::RepVerify => schemars::schema_for!(Report<RepVerifyResult>),
        SchemaKind::Density => schemars::schema_for!(Report<DensityResult>),
        SchemaKind::Subgroups => schemars::schema_for!(Report<SubgroupsData>),
        SchemaKind::Orbit | SchemaKind::Limitset => schemars::schema_for!(Report<GeometryResult>),
        SchemaKind::Pipeline => schemars::schema_for!(Report<PipelineResult>),
    };
    serde_json::to_value(schema).expect("schemas serialize")
}

/// JSON schema of the report a command produces.
pub fn report_schema(kind: SchemaKind) -> Value {
    schema_for(kind)
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Execution, CliError> {
    let format = cli.global.format;
    let mut ctx = Ctx {
        budgets: cli.global.budgets.budgets(),
        seed: cli.global.seed,
        out: cli.global.out.clone(),
        inputs: Vec::new(),
        artifacts: Vec::new(),
    };
    let mut st = Stages::default();
    match cli.command {
        Command::Schema { kind } => {
            let mut s = serde_json::to_string_pretty(&schema_for(kind)).expect("schemas serialize");
            s.push('\n');
            Ok(Execution { stdout: s, exit_code: 0, written: Vec::new() })
        }
        Command::Diagram(DiagramCommand::Analyze { file }) => {
            let d = ctx.diagram(file.as_deref())?;
            let analysis = stages::diagram_analysis(&d, &mut st)?;
            let r = Report::new(ctx.config("diagram analyze"), st, analysis);
            finish(ctx, r, format)
        }
        Command::Lanner(LannerCommand::Enumerate { rank }) => {
            let rank = usize::try_from(rank).map_err(|_| CliError("rank too large".into()))?;
            let (ds, stats) = enumerate_lanner_with_stats(rank)?;
            let integral = integrality_filter(&ds);
            st.push(
                "lanner enumeration",
                Status::Pass,
                format!("{} connected Lannér diagrams of rank {rank}, {} with labels in {{2,3,4,6}}", ds.len(), integral.len()),
            );
            let result = LannerResult {
                rank,
                diagrams: claim("coxeter::enumerate_lanner", ds.iter().map(DiagramData::from).collect()),
                integral: claim("coxeter::integrality_filter", integral.iter().map(DiagramData::from).collect()),
                stats,
            };
            let r = Report::new(ctx.config("lanner enumerate"), st, result);
            finish(ctx, r, format)
        }
        Command::Rep(RepCommand::Build { cartan }) => {
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            let (_, data) = stages::representation(&a, &mut st)?;
            let r = Report::new(ctx.config("rep build"), st, data);
            finish(ctx, r, format)
        }
        Command::Rep(RepCommand::Verify { cartan, diagram }) => {
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            let d = ctx.diagram(diagram.diagram.as_deref())?;
            check_ranks(&a, &d)?;
            let (gens, representation) = stages::representation(&a, &mut st)?;
            let verification = stages::relation_verification(&gens, &a, &d, ctx.budgets.order_cap, &mut st)?;
            let irreducibility = irreducibility_or_fail(&gens, &a, &d, &mut st);
            let r = Report::new(
                ctx.config("rep verify"),
                st,
                RepVerifyResult { representation, verification, irreducibility },
            );
            finish(ctx, r, format)
        }
        Command::Density(DensityCommand::Certify { cartan, diagram, subgroup }) => {
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            let gens = crate::vinberg::integer_reflection_generators(&a)?;
            let result = match subgroup {
                DensitySubgroup::Even => {
                    let d = ctx.diagram(diagram.diagram.as_deref())?;
                    check_ranks(&a, &d)?;
                    DensityResult {
                        even_subgroup: Some(stages::even_subgroup_density(&gens, &d, &ctx.budgets, &mut st)?),
                        full_group: None,
                    }
                }
                DensitySubgroup::Full => DensityResult {
                    even_subgroup: None,
                    full_group: Some(stages::density(
                        "density certification (full group)",
                        "reflection group",
                        &gens,
                        stages::density_budget(&ctx.budgets),
                        &mut st,
                    )?),
                },
            };
            let r = Report::new(ctx.config("density certify"), st, result);
            finish(ctx, r, format)
        }
        Command::Subgroups(SubgroupsCommand::Search { diagram, cartan, kernel_radius }) => {
            let d = ctx.diagram(diagram.diagram.as_deref())?;
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            check_ranks(&a, &d)?;
            let gens = crate::vinberg::integer_reflection_generators(&a)?;
            let data = stages::subgroups(&d, Some(&gens), &ctx.budgets, kernel_radius, &mut st)?;
            let r = Report::new(ctx.config("subgroups search"), st, data);
            finish(ctx, r, format)
        }
        Command::Geometry(GeometryCommand::Orbit { cartan, chart }) => {
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            let axes = checked_axes(&chart, a.rank())?;
            let gens = crate::vinberg::integer_reflection_generators(&a)?;
            let render = ctx.render();
            let orbit = match stages::orbit_stage(&gens, &a, ctx.budgets.depth, axes, render, &mut st, &mut ctx.artifacts) {
                Ok((o, _)) => Some(o),
                Err(e) => {
                    st.push("orbit", stages::error_status(&e), e.to_string());
                    None
                }
            };
            let r = Report::new(ctx.config("geometry orbit"), st, GeometryResult { orbit, limit_set: None });
            finish(ctx, r, format)
        }
        Command::Geometry(GeometryCommand::Limitset { cartan, chart }) => {
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            let axes = checked_axes(&chart, a.rank())?;
            let gens = crate::vinberg::integer_reflection_generators(&a)?;
            let render = ctx.render();
            let (orbit, functional) = geometry_prelude(&gens, &a, &ctx.budgets, axes, &mut st, &mut ctx.artifacts, false);
            let limit_set = limit_or_fail(&gens, functional, &ctx.budgets, ctx.seed, axes, render, &mut st, &mut ctx.artifacts);
            let r = Report::new(ctx.config("geometry limitset"), st, GeometryResult { orbit, limit_set });
            finish(ctx, r, format)
        }
        Command::Witness(WitnessCommand::Pipeline { diagram, cartan, kernel_radius, chart }) => {
            let d = ctx.diagram(diagram.diagram.as_deref())?;
            let a = ctx.cartan(cartan.cartan.as_deref())?;
            check_ranks(&a, &d)?;
            let axes = checked_axes(&chart, a.rank())?;
            let result = pipeline(&mut ctx, &d, &a, kernel_radius, axes, &mut st)?;
            let r = Report::new(ctx.config("witness pipeline"), st, result);
            finish(ctx, r, format)
        }
    }
}

fn check_ranks(a: &CartanMatrix, d: &CoxeterDiagram) -> Result<(), CliError> {
    if a.rank() != d.rank() {
        return Err(CliError(format!("Cartan matrix has rank {} but the diagram has rank {}", a.rank(), d.rank())));
    }
    Ok(())
}

fn irreducibility_or_fail(
    gens: &[IntElement],
    a: &CartanMatrix,
    d: &CoxeterDiagram,
    st: &mut Stages,
) -> Option<IrreducibilityData> {
    match stages::irreducibility(gens, a, d, st) {
        Ok(x) => Some(x),
        Err(e) => {
            st.push("irreducibility and invariant forms", stages::error_status(&e), e.to_string());
            None
        }
    }
}

/// Orbit and properness stage, used for its witness functional as a chart.
fn geometry_prelude(
    gens: &[IntElement],
    a: &CartanMatrix,
    budgets: &Budgets,
    axes: Option<(usize, usize)>,
    st: &mut Stages,
    artifacts: &mut Vec<Artifact>,
    render: bool,
) -> (Option<OrbitData>, Option<Vec<f64>>) {
    if !stages::is_negative_type(a) {
        st.push("orbit", Status::Skipped, "Cartan matrix is not of negative type; no invariant cone seed");
        return (None, None);
    }
    match stages::orbit_stage(gens, a, budgets.depth, axes, render, st, artifacts) {
        Ok((o, f)) => (Some(o), f),
        Err(e) => {
            st.push("orbit", stages::error_status(&e), e.to_string());
            (None, None)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn limit_or_fail(
    gens: &[IntElement],
    functional: Option<Vec<f64>>,
    budgets: &Budgets,
    seed: u64,
    axes: Option<(usize, usize)>,
    render: bool,
    st: &mut Stages,
    artifacts: &mut Vec<Artifact>,
) -> Option<LimitSetData> {
    match stages::limit_set_stage(gens, functional, budgets, seed, axes, render, st, artifacts) {
        Ok(l) => Some(l),
        Err(e) => {
            st.push("limit set", stages::error_status(&e), e.to_string());
            None
        }
    }
}

const AFTER_RELATIONS: [&str; 12] = [
    "irreducibility and invariant forms",
    "even subgroup index",
    "density certification (even subgroup)",
    "low-index search",
    "subgroup analysis",
    "torsion-free positive-betti subgroup",
    "maps to Z",
    "kernel sampling",
    "density certification (kernel)",
    "orbit",
    "properness witness",
    "limit set",
];

fn pipeline(
    ctx: &mut Ctx,
    d: &CoxeterDiagram,
    a: &CartanMatrix,
    kernel_radius: u32,
    axes: Option<(usize, usize)>,
    st: &mut Stages,
) -> Result<PipelineResult, CliError> {
    let diagram = stages::diagram_analysis(d, st)?;
    if !diagram.premises_hold() {
        st.push(
            "construction premises",
            Status::Fail,
            "the diagram must be Lannér with positive definite Galois conjugates",
        );
    }
    let mut result = PipelineResult {
        diagram,
        representation: None,
        verification: None,
        irreducibility: None,
        density: None,
        subgroups: None,
        geometry: None,
        figures: Vec::new(),
    };
    let (gens, representation) = stages::representation(a, st)?;
    result.representation = Some(representation);
    let verification = stages::relation_verification(&gens, a, d, ctx.budgets.order_cap, st)?;
    result.verification = Some(verification);
    if st.0.last().is_some_and(|s| s.status == Status::Fail) {
        for name in AFTER_RELATIONS {
            st.push(name, Status::Skipped, "halted: relation verification failed");
        }
        return Ok(result);
    }
    result.irreducibility = irreducibility_or_fail(&gens, a, d, st);
    result.density = match stages::even_subgroup_density(&gens, d, &ctx.budgets, st) {
        Ok(x) => Some(x),
        Err(e) => {
            st.push("density certification (even subgroup)", stages::error_status(&e), e.to_string());
            None
        }
    };
    result.subgroups = match stages::subgroups(d, Some(&gens), &ctx.budgets, kernel_radius, st) {
        Ok(x) => Some(x),
        Err(e) => {
            st.push("subgroups", stages::error_status(&e), e.to_string());
            None
        }
    };
    let render = ctx.render();
    let (orbit, functional) = geometry_prelude(&gens, a, &ctx.budgets, axes, st, &mut ctx.artifacts, render);
    let limit_set =
        limit_or_fail(&gens, functional, &ctx.budgets, ctx.seed, axes, render, st, &mut ctx.artifacts);
    result.geometry = Some(GeometryResult { orbit, limit_set });
    result.figures = ctx.artifacts.iter().map(|a| a.name.clone()).collect();
    if render {
        st.push("figures", Status::Pass, format!("written: {}", result.figures.join(", ")));
    } else {
        st.push("figures", Status::Skipped, "no --out directory given");
    }
    Ok(result)
}

/// Entry point for the binary: parses arguments, prints, returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(exec) => {
            print!("{}", exec.stdout);
            exec.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}
