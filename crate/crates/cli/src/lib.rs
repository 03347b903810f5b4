//! Command pipelines behind the `stratakit` binary.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::json;

use stratakit_core::harness::{
    check_relations, frontier_cross_check, sample_zero_level, verify_piece_regions, InvariantSet,
};
use stratakit_core::isotropy::isotropy_lattice;
use stratakit_core::momentum::{
    conormal_orbit_types, sample_conormal_classes, sample_fiber_classes,
};
use stratakit_core::reduced::{
    coisotropic_lattice, connectable_pairs, piece_dimensions, refinement_check, secondary_lattice,
    symplectic_lattice,
};
use stratakit_core::{ActionSpec, Error, IsotropyClass, IsotropyLattice, Rational, StratLattice};

pub mod dot;
pub mod report;

use report::{CheckEntry, Report, Status};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;
/// Per-pair sample cap of the region check.
pub const REGION_SAMPLES: usize = 1_000;
/// Per-edge sample cap of the frontier check.
pub const FRONTIER_SAMPLES: usize = 100;
/// Sample cap of the conormal down-set check.
pub const CONORMAL_SAMPLES: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Lattice,
    Reduce,
    Verify,
    ExportDot,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Lattice => "lattice",
            Command::Reduce => "reduce",
            Command::Verify => "verify",
            Command::ExportDot => "export-dot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Which {
    Symplectic,
    Secondary(String),
    Coisotropic,
}

impl FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symplectic" => Ok(Which::Symplectic),
            "coisotropic" => Ok(Which::Coisotropic),
            _ => match s.strip_prefix("secondary:") {
                Some(id) if !id.is_empty() => Ok(Which::Secondary(id.to_string())),
                _ => Err(format!(
                    "expected symplectic, coisotropic or secondary:<class-id>, got {s:?}"
                )),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub spec_path: PathBuf,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub which: Which,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, spec_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            spec_path: spec_path.into(),
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            which: Which::Coisotropic,
            output_path: None,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, message: String },
    Core { path: PathBuf, error: Error },
    Verification(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core { error, .. } => match error {
                Error::Parse { .. }
                | Error::InvalidSpec(_)
                | Error::NonOrthogonalGenerator { .. }
                | Error::InfiniteFiniteGroup { .. }
                | Error::IncompatibleBlocks { .. }
                | Error::UnknownInvariant(_)
                | Error::NonInvariantPolynomial { .. }
                | Error::ClassNotFound(_)
                | Error::InvalidBudget => 1,
                Error::NonProductStabilizer { .. } => 2,
                Error::CoisotropyIdentityViolation { .. } => 4,
                _ => 3,
            },
            CliError::Verification(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Core { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Verification(failed) => {
                write!(f, "verification failed: {}", failed.join("; "))
            }
        }
    }
}

impl std::error::Error for CliError {}

struct Ctx<'a> {
    config: &'a RunConfig,
}

impl Ctx<'_> {
    fn core<T>(&self, r: stratakit_core::Result<T>) -> Result<T, CliError> {
        r.map_err(|error| CliError::Core {
            path: self.config.spec_path.clone(),
            error,
        })
    }
}

fn load(config: &RunConfig) -> Result<ActionSpec, CliError> {
    let text = std::fs::read_to_string(&config.spec_path).map_err(|e| CliError::Io {
        path: config.spec_path.clone(),
        message: e.to_string(),
    })?;
    ActionSpec::load(&text).map_err(|error| CliError::Core {
        path: config.spec_path.clone(),
        error,
    })
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn point(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn ids<'a>(classes: impl IntoIterator<Item = &'a IsotropyClass>) -> Vec<String> {
    classes.into_iter().map(|c| c.id.clone()).collect()
}

fn braces(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn new_report(config: &RunConfig, spec: &ActionSpec, lattice: &IsotropyLattice) -> Report {
    let mut lattices = std::collections::BTreeMap::new();
    lattices.insert("isotropy".to_string(), report::isotropy_entry(lattice));
    Report {
        schema: report::SCHEMA,
        command: config.command.name().to_string(),
        spec: spec.name().map(str::to_string),
        seed: config.seed,
        samples: config.samples,
        classes: report::classes(lattice),
        strata: report::strata(lattice),
        pieces: Vec::new(),
        lattices,
        checks: Vec::new(),
    }
}

fn emit_report(config: &RunConfig, report: &Report) -> Result<(), CliError> {
    if let Some(path) = &config.output_path {
        let mut text = serde_json::to_string_pretty(report).expect("report serializes");
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

fn describe_lattice(out: &mut String, lattice: &IsotropyLattice) {
    out.push_str(&format!("isotropy classes ({}):\n", lattice.len()));
    for s in &lattice.strata {
        out.push_str(&format!(
            "  {:<10} dim {}  |F| {}  stratum {}  quotient {}  witness {}\n",
            s.class.id,
            s.class.dim,
            s.class.finite_order,
            s.dim_stratum,
            s.dim_quotient,
            point(&s.witness)
        ));
    }
    out.push_str("hasse edges:\n");
    for &(a, b) in &lattice.hasse_edges {
        out.push_str(&format!(
            "  ({}) < ({})\n",
            lattice.class(a).id,
            lattice.class(b).id
        ));
    }
    out.push_str(&format!("principal: ({})\n", lattice.principal_class().id));
}

fn describe_strat(out: &mut String, l: &StratLattice) {
    out.push_str(&format!(
        "{} lattice: {} nodes, {} edges\n",
        l.kind,
        l.nodes.len(),
        l.edges.len()
    ));
    for (r, s) in l.edge_labels() {
        out.push_str(&format!("  {r} -> {s}\n"));
    }
}

struct Reduction {
    symplectic: StratLattice,
    coisotropic: StratLattice,
    secondary: Vec<StratLattice>,
}

fn reduce(
    ctx: &Ctx,
    lattice: &IsotropyLattice,
    report: &mut Report,
) -> Result<Reduction, CliError> {
    for pair in connectable_pairs(lattice) {
        report
            .pieces
            .push(report::piece(&ctx.core(piece_dimensions(pair, lattice))?));
    }
    let symplectic = ctx.core(symplectic_lattice(lattice))?;
    let coisotropic = ctx.core(coisotropic_lattice(lattice))?;
    let mut secondary = Vec::new();
    for class in lattice.classes() {
        secondary.push(ctx.core(secondary_lattice(&class.id, lattice))?);
    }
    for l in std::iter::once(&symplectic)
        .chain(&secondary)
        .chain([&coisotropic])
    {
        report
            .lattices
            .insert(l.kind.to_string(), report::lattice_entry(l));
    }
    let refinement = refinement_check(&coisotropic, &symplectic);
    report.checks.push(CheckEntry::new(
        "refinement",
        refinement.refines,
        json!({ "refines": refinement.refines, "strict": refinement.strict }),
    ));
    Ok(Reduction {
        symplectic,
        coisotropic,
        secondary,
    })
}

fn cmd_lattice(ctx: &Ctx, out: &mut String) -> Result<(), CliError> {
    let config = ctx.config;
    let spec = load(config)?;
    let lattice = ctx.core(isotropy_lattice(&spec, config.seed))?;
    describe_lattice(out, &lattice);
    emit_report(config, &new_report(config, &spec, &lattice))
}

fn cmd_reduce(ctx: &Ctx, out: &mut String) -> Result<(), CliError> {
    let config = ctx.config;
    let spec = load(config)?;
    let lattice = ctx.core(isotropy_lattice(&spec, config.seed))?;
    let mut report = new_report(config, &spec, &lattice);
    let red = reduce(ctx, &lattice, &mut report)?;
    describe_lattice(out, &lattice);
    out.push_str("pieces:\n");
    for p in &report.pieces {
        out.push_str(&format!(
            "  {:<16} dim_W {}  dim_V {}  rank {}  {}  over ({})\n",
            p.label, p.dim_w, p.dim_v, p.rank, p.classification, p.projection
        ));
    }
    describe_strat(out, &red.symplectic);
    for l in &red.secondary {
        describe_strat(out, l);
    }
    describe_strat(out, &red.coisotropic);
    let refinement = refinement_check(&red.coisotropic, &red.symplectic);
    out.push_str(&format!(
        "refinement: {}{}\n",
        if refinement.refines {
            "refines"
        } else {
            "does not refine"
        },
        if refinement.strict { " (strict)" } else { "" }
    ));
    emit_report(config, &report)
}

fn push_check(out: &mut String, report: &mut Report, check: CheckEntry, summary: String) {
    let tag = match check.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    };
    out.push_str(&format!("{tag} {} {summary}\n", check.name));
    report.checks.push(check);
}

fn cmd_verify(ctx: &Ctx, out: &mut String) -> Result<(), CliError> {
    let config = ctx.config;
    let spec = load(config)?;
    let lattice = ctx.core(isotropy_lattice(&spec, config.seed))?;
    let mut report = new_report(config, &spec, &lattice);
    let red = reduce(ctx, &lattice, &mut report)?;
    let seed = config.seed;
    let mut failures = Vec::new();

    for (i, s) in lattice.strata.iter().enumerate() {
        let observed = ctx.core(sample_fiber_classes(
            &spec,
            &lattice,
            &s.witness,
            config.samples,
            seed,
        ))?;
        let expected = ids(lattice.down_set(i));
        let got = ids(&observed);
        let below = observed.iter().all(|c| {
            lattice
                .index_of(&c.id)
                .is_ok_and(|j| lattice.order.leq(j, i))
        });
        let pass = got == expected;
        let name = format!("fiber-classes:{}", s.class.id);
        if !pass {
            failures.push(format!(
                "{name} at witness {} (expected {}, observed {})",
                point(&s.witness),
                braces(&expected),
                braces(&got)
            ));
        }
        let detail = json!({
            "witness": report::vector(&s.witness),
            "expected": expected,
            "observed": got,
            "below": below,
        });
        let summary = format!("at {} observed {}", point(&s.witness), braces(&got));
        push_check(
            out,
            &mut report,
            CheckEntry::new(name, pass, detail),
            summary,
        );
    }

    for (i, s) in lattice.strata.iter().enumerate() {
        let budget = config.samples.min(CONORMAL_SAMPLES);
        let observed = ctx.core(sample_conormal_classes(
            &spec, &lattice, &s.class, budget, seed,
        ))?;
        let expected: BTreeSet<IsotropyClass> =
            ctx.core(conormal_orbit_types(&lattice, lattice.class(i)))?;
        let (got, want) = (ids(&observed), ids(&expected));
        let pass = got == want;
        let name = format!("conormal-classes:{}", s.class.id);
        if !pass {
            failures.push(format!(
                "{name} at witness {} (expected {}, observed {})",
                point(&s.witness),
                braces(&want),
                braces(&got)
            ));
        }
        let detail = json!({ "expected": want, "observed": got });
        push_check(
            out,
            &mut report,
            CheckEntry::new(name, pass, detail),
            braces(&got),
        );
    }

    for fw in &spec.fixtures().fiber_witnesses {
        let m: Vec<Rational> = fw.point.iter().map(|r| r.0.clone()).collect();
        let observed = ctx.core(sample_fiber_classes(
            &spec,
            &lattice,
            &m,
            config.samples,
            seed,
        ))?;
        let got = ids(&observed);
        let mut want = fw.classes.clone();
        want.sort();
        let pass = got == want;
        let name = format!("fiber-witness:{}", point(&m));
        if !pass {
            failures.push(format!(
                "class set mismatch at witness {} (expected {}, observed {})",
                point(&m),
                braces(&want),
                braces(&got)
            ));
        }
        let detail = json!({ "witness": report::vector(&m), "expected": want, "observed": got });
        push_check(
            out,
            &mut report,
            CheckEntry::new(name, pass, detail),
            braces(&got),
        );
    }

    let inv = InvariantSet::from_spec(&spec);
    if inv.is_empty() || spec.relations().is_empty() {
        let check = CheckEntry::skipped("relations", "spec declares no invariant relations");
        push_check(out, &mut report, check, String::new());
    } else {
        let samples = ctx.core(sample_zero_level(&spec, config.samples, seed))?;
        let points: Vec<Vec<f64>> = samples.into_iter().map(|(m, p)| [m, p].concat()).collect();
        let rel = check_relations(&inv, &points, config.tol);
        let summary: Vec<String> = rel
            .relations
            .iter()
            .map(|r| format!("{} max {:.3e}", r.name, r.max))
            .collect();
        for r in rel.relations.iter().filter(|r| !r.pass) {
            failures.push(format!(
                "relations: {} residual {:e} above {:e}",
                r.name, r.max, config.tol
            ));
        }
        let detail = serde_json::to_value(&rel).expect("relation report serializes");
        push_check(
            out,
            &mut report,
            CheckEntry::new("relations", rel.pass, detail),
            summary.join(", "),
        );
    }

    let fixtures = spec.fixtures();
    if fixtures.hilbert_cones.is_none() || fixtures.piece_regions.is_empty() {
        for name in ["piece-regions", "frontier"] {
            let check = CheckEntry::skipped(name, "spec carries no Hilbert-cone fixtures");
            push_check(out, &mut report, check, String::new());
        }
    } else {
        let regions = ctx.core(verify_piece_regions(
            &spec,
            &lattice,
            config.samples.min(REGION_SAMPLES),
            seed,
        ))?;
        for p in regions
            .pairs
            .iter()
            .filter(|p| !(p.regions_pass && p.dims_pass))
        {
            failures.push(format!(
                "piece-regions: {} ({} of {} samples in {:?}, local dims {:?})",
                p.pair, p.hits, p.samples, p.expected, p.local_dims
            ));
        }
        let summary = format!("{} pairs", regions.pairs.len());
        let detail = serde_json::to_value(&regions).expect("region report serializes");
        push_check(
            out,
            &mut report,
            CheckEntry::new("piece-regions", regions.pass, detail),
            summary,
        );

        let frontier = ctx.core(frontier_cross_check(
            &spec,
            &lattice,
            &red.coisotropic,
            config.samples.min(FRONTIER_SAMPLES),
            seed,
        ))?;
        for e in frontier.edges.iter().filter(|e| !e.pass) {
            failures.push(format!(
                "frontier: {} -> {} (distance {:e})",
                e.from, e.to, e.max_distance
            ));
        }
        let worst = frontier
            .edges
            .iter()
            .map(|e| e.max_distance)
            .fold(0.0, f64::max);
        let summary = format!("{} edges, max distance {:.3e}", frontier.edges.len(), worst);
        let detail = serde_json::to_value(&frontier).expect("frontier report serializes");
        push_check(
            out,
            &mut report,
            CheckEntry::new("frontier", frontier.pass, detail),
            summary,
        );
    }

    let refinement_failed = report
        .checks
        .iter()
        .any(|c| c.name == "refinement" && c.status == Status::Fail);
    if refinement_failed {
        failures.push("refinement".to_string());
    }

    emit_report(config, &report)?;
    if failures.is_empty() {
        out.push_str("all checks passed\n");
        Ok(())
    } else {
        Err(CliError::Verification(failures))
    }
}

fn cmd_export_dot(ctx: &Ctx, out: &mut String) -> Result<(), CliError> {
    let config = ctx.config;
    let spec = load(config)?;
    let lattice = ctx.core(isotropy_lattice(&spec, config.seed))?;
    let strat = match &config.which {
        Which::Symplectic => ctx.core(symplectic_lattice(&lattice))?,
        Which::Coisotropic => ctx.core(coisotropic_lattice(&lattice))?,
        Which::Secondary(id) => ctx.core(secondary_lattice(id, &lattice))?,
    };
    let text = dot::render(&strat);
    match &config.output_path {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            out.push_str(&text);
            Ok(())
        }
    }
}

/// Runs one command, appending its console output to `out`.
pub fn run(config: &RunConfig, out: &mut String) -> Result<(), CliError> {
    if config.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(CliError::Usage("--tol must be a positive number".into()));
    }
    let ctx = Ctx { config };
    match config.command {
        Command::Lattice => cmd_lattice(&ctx, out),
        Command::Reduce => cmd_reduce(&ctx, out),
        Command::Verify => cmd_verify(&ctx, out),
        Command::ExportDot => cmd_export_dot(&ctx, out),
    }
}
