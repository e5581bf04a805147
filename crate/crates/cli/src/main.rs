use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use coxdisp::buildings::{
    AutomorphismSpec, Building, BuildingAutomorphism, IncidenceGeometry, MgonBuilding, SymplecticBuilding, ThinBuilding,
    TreeBuilding, TreeEdge, Vertex,
};
use coxdisp::displacement::{self, DisplacementReport};
use coxdisp::tits_cone::{self, ConeChart, DEFAULT_TOLERANCE};
use coxdisp::verify;
use coxdisp::witness;
use coxdisp::{CoxeterSystem, Execution};

#[derive(Parser, Debug)]
#[command(name = "coxdisp", version, about = "Coxeter groups, Tits cones and displacement in buildings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Word problem queries on a Coxeter-matrix file.
    #[command(subcommand)]
    Coxeter(CoxeterCmd),
    /// Witness generator for a word.
    Witness {
        system: PathBuf,
        word: String,
    },
    /// Witness search over every element up to a length.
    Sweep {
        system: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        max_len: usize,
    },
    /// Numerical Tits cone chart.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Check the building axioms exhaustively.
    Validate(BuildingArgs),
    /// Displacement of building automorphisms.
    #[command(subcommand)]
    Disp(DispCmd),
    /// Verification reports.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum CoxeterCmd {
    /// Canonical reduced word.
    Reduce { system: PathBuf, word: String },
    /// Whether two words represent the same element.
    Equal { system: PathBuf, first: String, second: String },
    /// Length of the element a word represents.
    Length { system: PathBuf, word: String },
    /// Components, finite types and Gram determinant.
    Info { system: PathBuf },
}

#[derive(Args, Debug)]
struct ConeArgs {
    system: PathBuf,
    #[arg(long, default_value_t = 8, value_parser = positive)]
    max_len: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = positive_f64)]
    tolerance: f64,
}

#[derive(Subcommand, Debug)]
enum ConeCmd {
    /// CSV of cells: face id, coset representative, J, sample point, signs.
    Export(ConeArgs),
    /// Look for sample points whose negatives land in an enumerated chamber.
    Probe {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 10, value_parser = positive)]
        samples: usize,
    },
    /// Compare word-exact and numeric wall predicates.
    CrossCheck(ConeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BuildingKind {
    Fano,
    Quadrangle,
    Symplectic,
    Tree,
    Thin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PhiKind {
    Identity,
    Collineation,
    Duality,
    Elation,
    Polarity,
    Swap,
    Translation,
}

#[derive(Args, Debug)]
struct BuildingArgs {
    #[arg(long, value_enum, default_value_t = BuildingKind::Fano)]
    building: BuildingKind,
    /// Incidence geometry file (`point`, `line`, `flag` lines) used instead
    /// of a built-in polygon.
    #[arg(long)]
    geometry: Option<PathBuf>,
    /// Coxeter-matrix file for the thin building (default D∞).
    #[arg(long)]
    system: Option<PathBuf>,
    /// Branching of the tree: every vertex has q + 1 neighbours.
    #[arg(long, default_value_t = 2, value_parser = positive)]
    q: usize,
    /// Half-dimension of the symplectic space.
    #[arg(long, default_value_t = 2, value_parser = positive)]
    n: usize,
}

#[derive(Args, Debug)]
struct PhiArgs {
    /// Automorphism; defaults to collineation (Fano), duality (quadrangle),
    /// polarity (symplectic), swap (tree) or translation (thin).
    #[arg(long, value_enum)]
    phi: Option<PhiKind>,
    /// Point permutation for a collineation, comma separated point indices.
    #[arg(long)]
    points: Option<String>,
    /// Centre point index of the elation.
    #[arg(long, default_value_t = 0)]
    centre: usize,
    /// Tree vertex below which subtrees are swapped, as a dotted address.
    #[arg(long, default_value = "")]
    vertex: String,
    #[arg(long, default_value_t = 1)]
    first: u8,
    #[arg(long, default_value_t = 2)]
    second: u8,
    /// Translating element for the thin building.
    #[arg(long, default_value = "s t")]
    word: String,
}

#[derive(Subcommand, Debug)]
enum DispCmd {
    /// Displacement of every chamber (finite) or every chamber within a radius.
    Table {
        #[command(flatten)]
        building: BuildingArgs,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long, value_parser = positive)]
        radius: Option<usize>,
    },
    /// Repeated improvement steps from a moved chamber.
    Trace {
        #[command(flatten)]
        building: BuildingArgs,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Start chamber: a dotted tree address, or a chamber index.
        #[arg(long, default_value = "1")]
        start: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolygonCase {
    All,
    FanoCollineation,
    QuadrangleDuality,
    QuadrangleElation,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Rank-2 displacement bounds.
    Corollary3 {
        #[arg(long, value_enum, default_value_t = PolygonCase::All)]
        case: PolygonCase,
    },
    /// Symplectic polarity maps no chamber to an opposite chamber.
    Example1 {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Translation of the thin D∞ building.
    Remark2,
    /// Elation of the symplectic quadrangle fixing a ball.
    Remark5 {
        #[arg(long, default_value_t = 0)]
        centre: usize,
    },
    /// The full check suite, one line per criterion.
    All {
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        criterion: Option<u8>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// A rendered report: JSON value, text lines, optional CSV table, and
/// whether the asserted checks passed.
struct Output {
    value: Value,
    text: String,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
    passed: bool,
}

impl Output {
    fn new(value: impl Serialize, text: String, passed: bool) -> Result<Self> {
        Ok(Self {
            value: serde_json::to_value(value)?,
            text,
            table: None,
            passed,
        })
    }

    fn with_table(mut self, header: Vec<String>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header, rows));
        self
    }

    fn emit(&self, format: Format) -> Result<()> {
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&self.value)?),
            Format::Text => print!("{}", self.text),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(std::io::stdout());
                match &self.table {
                    Some((header, rows)) => {
                        w.write_record(header)?;
                        for r in rows {
                            w.write_record(r)?;
                        }
                    }
                    None => {
                        w.write_record(["key", "value"])?;
                        if let Value::Object(map) = &self.value {
                            for (k, v) in map {
                                let v = match v {
                                    Value::String(s) => s.clone(),
                                    other => other.to_string(),
                                };
                                w.write_record([k.as_str(), v.as_str()])?;
                            }
                        }
                    }
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn load_system(path: &Path) -> Result<CoxeterSystem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    CoxeterSystem::parse(&text).with_context(|| format!("invalid Coxeter matrix in {}", path.display()))
}

fn run(cli: &Cli) -> Result<Output> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Coxeter(cmd) => coxeter(cmd),
        Command::Witness { system, word } => witness_cmd(system, word),
        Command::Sweep { system, max_len } => {
            let sys = load_system(system)?;
            let r = witness::completeness_sweep(&sys, *max_len, exec)?;
            let mut text = format!("certified {}/{} elements up to length {}\n", r.certified, r.checked, r.max_len);
            for f in &r.failures {
                writeln!(text, "failure: {} ({})", f.word, f.error)?;
            }
            Output::new(&r, text, r.passed())
        }
        Command::Cone(cmd) => cone(cmd, cli.seed, exec),
        Command::Validate(args) => validate(args, exec),
        Command::Disp(cmd) => disp(cmd, exec),
        Command::Verify(cmd) => verify_cmd(cmd, exec),
    }
}

fn coxeter(cmd: &CoxeterCmd) -> Result<Output> {
    match cmd {
        CoxeterCmd::Reduce { system, word } => {
            let sys = load_system(system)?;
            let w = sys.reduce(&sys.parse_word(word)?)?;
            let canonical = sys.format_word(w.word());
            Output::new(
                json!({ "input": word, "canonical": canonical, "length": w.len() }),
                format!("{canonical}\n"),
                true,
            )
        }
        CoxeterCmd::Equal { system, first, second } => {
            let sys = load_system(system)?;
            let equal = sys.equal(&sys.parse_word(first)?, &sys.parse_word(second)?)?;
            Output::new(json!({ "first": first, "second": second, "equal": equal }), format!("{equal}\n"), true)
        }
        CoxeterCmd::Length { system, word } => {
            let sys = load_system(system)?;
            let len = sys.length(&sys.parse_word(word)?)?;
            Output::new(json!({ "input": word, "length": len }), format!("{len}\n"), true)
        }
        CoxeterCmd::Info { system } => {
            let sys = load_system(system)?;
            let components: Vec<Value> = sys
                .components()
                .iter()
                .zip(sys.component_classes())
                .map(|(c, class)| {
                    json!({
                        "generators": c.iter().map(|&s| sys.labels()[s].clone()).collect::<Vec<_>>(),
                        "class": class.to_string(),
                    })
                })
                .collect();
            let value = json!({
                "rank": sys.rank(),
                "labels": sys.labels(),
                "components": components,
                "finite": sys.is_finite(),
                "purely_infinite": sys.is_purely_infinite(),
                "gram_determinant": sys.gram_determinant(),
            });
            let mut text = format!("rank {} ({})\n", sys.rank(), sys.labels().join(" "));
            for c in &components {
                writeln!(text, "component {}: {}", c["generators"], c["class"].as_str().unwrap_or(""))?;
            }
            writeln!(
                text,
                "finite: {}, purely infinite: {}, Gram determinant {:.6}",
                sys.is_finite(),
                sys.is_purely_infinite(),
                sys.gram_determinant()
            )?;
            Output::new(value, text, true)
        }
    }
}

fn witness_cmd(system: &Path, word: &str) -> Result<Output> {
    let sys = load_system(system)?;
    let w = sys.reduce(&sys.parse_word(word)?)?;
    let r = witness::find_witness(&sys, &w)?;
    let s = &sys.labels()[r.generator];
    let value = json!({
        "word": sys.format(&w),
        "generator": s,
        "path": r.path,
        "length_w": r.length_w,
        "length_sw": r.length_sw,
        "conjugate": sys.format(&r.conjugate),
        "length_increases": r.length_sw > r.length_w,
        "conjugate_outside_generators": r.conjugate.len() != 1,
    });
    let text = format!(
        "witness {s} via {}\n  l(sw) = {} > l(w) = {}\n  w⁻¹sw = {} (length {})\n",
        r.path,
        r.length_sw,
        r.length_w,
        sys.format(&r.conjugate),
        r.conjugate.len()
    );
    Output::new(value, text, r.certified())
}

fn cone(cmd: &ConeCmd, seed: u64, exec: Execution) -> Result<Output> {
    match cmd {
        ConeCmd::Export(args) => {
            let sys = load_system(&args.system)?;
            let chart = ConeChart::build(&sys).with_tolerance(args.tolerance);
            let cells = tits_cone::enumerate_cells(&sys, &chart, args.max_len)?;
            let labels = sys.labels();
            let mut header = vec!["face_id".to_string(), "w".into(), "J".into()];
            header.extend(labels.iter().map(|l| format!("x_{l}")));
            header.extend(labels.iter().map(|l| format!("side_{l}")));
            let mut rows = Vec::with_capacity(cells.len());
            let mut records = Vec::with_capacity(cells.len());
            for (id, cell) in cells.iter().enumerate() {
                let j: Vec<&str> = cell.face.j.iter().map(|&s| labels[s].as_str()).collect();
                let signs: Vec<String> = chart.signs(&cell.sample).iter().map(|s| s.symbol().to_string()).collect();
                let mut row = vec![id.to_string(), sys.format_word(cell.face.coset_rep.word()), j.join(" ")];
                row.extend(cell.sample.iter().map(|x| format!("{x:.12}")));
                row.extend(signs.iter().cloned());
                records.push(json!({
                    "face_id": id,
                    "w": sys.format(&cell.face.coset_rep),
                    "J": j,
                    "sample": cell.sample.iter().collect::<Vec<_>>(),
                    "signs": signs.concat(),
                    "support": cell.support.iter().map(|r| sys.format(&r.reflection)).collect::<Vec<_>>(),
                }));
                rows.push(row);
            }
            let text = rows.iter().map(|r| r.join("\t") + "\n").collect();
            Ok(Output::new(records, text, true)?.with_table(header, rows))
        }
        ConeCmd::Probe { cone, samples } => {
            let sys = load_system(&cone.system)?;
            let chart = ConeChart::build(&sys).with_tolerance(cone.tolerance);
            let r = tits_cone::vinberg_probe(&sys, &chart, cone.max_len, *samples, seed, exec)?;
            let text = format!(
                "{} points from {} cells against {} chambers: {} violations\n",
                r.points_tested,
                r.cells_sampled,
                r.chambers,
                r.violations.len()
            );
            // Violations are a finding, not a failure: finite systems have them.
            Output::new(&r, text, true)
        }
        ConeCmd::CrossCheck(args) => {
            let sys = load_system(&args.system)?;
            let chart = ConeChart::build(&sys).with_tolerance(args.tolerance);
            let r = tits_cone::cross_check(&sys, &chart, args.max_len, exec)?;
            let mut text = format!("{} pairs, {} disagreements\n", r.pairs_checked, r.disagreements.len());
            for d in &r.disagreements {
                writeln!(text, "  {} at w = {}, s = {}", d.predicate, d.word, d.generator)?;
            }
            Output::new(&r, text, r.passed())
        }
    }
}

fn polygon(args: &BuildingArgs) -> Result<MgonBuilding> {
    let geometry = match (&args.geometry, args.building) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            IncidenceGeometry::parse(&text)?
        }
        (None, BuildingKind::Fano) => IncidenceGeometry::fano(),
        (None, BuildingKind::Quadrangle) => IncidenceGeometry::symplectic_quadrangle_f2(),
        (None, other) => bail!("{other:?} is not a generalized polygon"),
    };
    Ok(MgonBuilding::new(geometry)?)
}

fn polygon_phi(b: &MgonBuilding, args: &PhiArgs, builtin_quadrangle: bool) -> Result<BuildingAutomorphism<usize>> {
    let geom = b.geometry();
    let kind = args.phi.unwrap_or(if geom.num_points() == 7 {
        PhiKind::Collineation
    } else {
        PhiKind::Duality
    });
    let map = match kind {
        PhiKind::Identity => return Ok(b.make_automorphism(&AutomorphismSpec::Identity)?),
        PhiKind::Collineation => {
            let perm: Vec<usize> = match &args.points {
                Some(list) => list
                    .split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|e| anyhow!("bad point index {x:?}: {e}")))
                    .collect::<Result<_>>()?,
                None if geom.num_points() == 7 => (0..7).map(|p| (2 * p) % 7).collect(),
                None => bail!("--points is required for a collineation of this geometry"),
            };
            geom.collineation_from_points(perm)?
        }
        PhiKind::Duality => geom.find_duality().ok_or_else(|| anyhow!("the geometry has no duality"))?,
        PhiKind::Elation if builtin_quadrangle => b.symplectic_elation(args.centre)?,
        PhiKind::Elation => bail!("elations are provided for the built-in quadrangle only"),
        other => bail!("{other:?} does not apply to a generalized polygon"),
    };
    Ok(b.make_automorphism(&AutomorphismSpec::Incidence(map))?)
}

fn tree_phi(t: &TreeBuilding, args: &PhiArgs) -> Result<BuildingAutomorphism<TreeEdge>> {
    let spec = match args.phi.unwrap_or(PhiKind::Swap) {
        PhiKind::Identity => AutomorphismSpec::Identity,
        PhiKind::Swap => AutomorphismSpec::SubtreeSwap {
            vertex: parse_address(&args.vertex)?,
            first: args.first,
            second: args.second,
        },
        other => bail!("{other:?} does not apply to a tree"),
    };
    Ok(t.make_automorphism(&spec)?)
}

fn thin_building(args: &BuildingArgs, radius: usize) -> Result<ThinBuilding> {
    let sys = match &args.system {
        Some(path) => load_system(path)?,
        None => CoxeterSystem::infinite_dihedral(),
    };
    Ok(ThinBuilding::new(sys, radius))
}

fn thin_phi(b: &ThinBuilding, args: &PhiArgs) -> Result<BuildingAutomorphism<coxdisp::Element>> {
    let spec = match args.phi.unwrap_or(PhiKind::Translation) {
        PhiKind::Identity => AutomorphismSpec::Identity,
        PhiKind::Translation => {
            let sys = b.system();
            AutomorphismSpec::LeftTranslation(sys.reduce(&sys.parse_word(&args.word)?)?)
        }
        other => bail!("{other:?} does not apply to a thin building"),
    };
    Ok(b.make_automorphism(&spec)?)
}

fn parse_address(s: &str) -> Result<Vec<u8>> {
    s.split('.')
        .filter(|x| !x.is_empty())
        .map(|x| x.trim().parse::<u8>().map_err(|e| anyhow!("bad address component {x:?}: {e}")))
        .collect()
}

fn validate(args: &BuildingArgs, exec: Execution) -> Result<Output> {
    let report = match args.building {
        BuildingKind::Symplectic => SymplecticBuilding::with_execution(args.n, exec)?.finite().validate(exec),
        BuildingKind::Fano | BuildingKind::Quadrangle => {
            let geometry = match &args.geometry {
                Some(path) => IncidenceGeometry::parse(
                    &std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?,
                )?,
                None => IncidenceGeometry::builtin(if args.building == BuildingKind::Fano { "fano" } else { "quadrangle" })?,
            };
            // Broken geometries are validated rather than rejected.
            let m = geometry.polygon_parameters().girth / 2;
            MgonBuilding::unchecked(geometry, m.max(2))?.finite().validate(exec)
        }
        other => bail!("{other:?} is infinite; validation needs a finite building"),
    };
    let mut text = format!(
        "{} chambers, {} pairs, {} violations\n",
        report.chambers, report.pairs_checked, report.violation_count
    );
    for v in &report.violations {
        writeln!(text, "  {}: {}", v.kind, v.detail)?;
    }
    let passed = report.passed();
    Output::new(&report, text, passed)
}

fn table_output(r: &DisplacementReport, passed: bool) -> Result<Output> {
    let mut text = format!("automorphism {}: disp {}", r.automorphism, r.disp);
    match r.scope {
        displacement::Scope::LowerBound { radius } => write!(text, " (lower bound within radius {radius})")?,
        displacement::Scope::Exhaustive => {
            if let (Some(d), Some(eq)) = (r.diam, r.equals_diam) {
                write!(text, ", diam {d}, disp = diam: {eq}")?;
            }
        }
        displacement::Scope::Trace => {}
    }
    text.push('\n');
    for e in &r.entries {
        writeln!(text, "  {}\t{}\t{}", e.chamber, e.displacement, e.delta)?;
    }
    let rows = r
        .entries
        .iter()
        .map(|e| vec![e.chamber.clone(), e.delta.clone(), e.displacement.to_string()])
        .collect();
    Ok(Output::new(r, text, passed)?.with_table(vec!["chamber".into(), "delta".into(), "displacement".into()], rows))
}

fn disp(cmd: &DispCmd, exec: Execution) -> Result<Output> {
    match cmd {
        DispCmd::Table { building, phi, radius } => {
            let r = match building.building {
                BuildingKind::Fano | BuildingKind::Quadrangle => {
                    let b = polygon(building)?;
                    let p = polygon_phi(&b, phi, building.geometry.is_none() && building.building == BuildingKind::Quadrangle)?;
                    displacement::disp_sup(&b, &p, None, exec)?
                }
                BuildingKind::Symplectic => {
                    let b = SymplecticBuilding::with_execution(building.n, exec)?;
                    let spec = match phi.phi.unwrap_or(PhiKind::Polarity) {
                        PhiKind::Identity => AutomorphismSpec::Identity,
                        PhiKind::Polarity => AutomorphismSpec::SymplecticPolarity,
                        other => bail!("{other:?} does not apply to the symplectic building"),
                    };
                    let p = b.make_automorphism(&spec)?;
                    displacement::disp_sup(&b, &p, None, exec)?
                }
                BuildingKind::Tree => {
                    let r = radius.unwrap_or(6);
                    let t = TreeBuilding::new(building.q, r + 1)?;
                    let p = tree_phi(&t, phi)?;
                    displacement::disp_sup(&t, &p, Some(r), exec)?
                }
                BuildingKind::Thin => {
                    let r = radius.unwrap_or(10);
                    let b = thin_building(building, r + 16)?;
                    let p = thin_phi(&b, phi)?;
                    displacement::disp_sup(&b, &p, Some(r), exec)?
                }
            };
            table_output(&r, true)
        }
        DispCmd::Trace { building, phi, steps, start } => {
            let r = match building.building {
                BuildingKind::Tree => {
                    let t = TreeBuilding::new(building.q, 4)?;
                    let p = tree_phi(&t, phi)?;
                    displacement::displacement_trace(&t, &p, &TreeEdge(parse_address(start)?), *steps)?
                }
                BuildingKind::Thin => {
                    let b = thin_building(building, 64)?;
                    let p = thin_phi(&b, phi)?;
                    let sys = b.system();
                    let c0 = if start == "1" {
                        coxdisp::Element::identity()
                    } else {
                        sys.reduce(&sys.parse_word(start)?)?
                    };
                    displacement::displacement_trace(&b, &p, &c0, *steps)?
                }
                other => bail!("{other:?} is spherical; traces need a building of purely infinite type"),
            };
            let ok = r.strictly_increasing();
            table_output(&r, ok)
        }
    }
}

fn verify_cmd(cmd: &VerifyCmd, exec: Execution) -> Result<Output> {
    match cmd {
        VerifyCmd::Corollary3 { case } => {
            let mut reports = Vec::new();
            let fano = MgonBuilding::new(IncidenceGeometry::fano())?;
            let quad = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2())?;
            let phi = |kind| PhiArgs {
                phi: Some(kind),
                points: None,
                centre: 0,
                vertex: String::new(),
                first: 1,
                second: 2,
                word: String::new(),
            };
            if matches!(case, PolygonCase::All | PolygonCase::FanoCollineation) {
                let p = polygon_phi(&fano, &phi(PhiKind::Collineation), false)?;
                reports.push(("fano", displacement::corollary3_verify(&fano, &p)?));
            }
            if matches!(case, PolygonCase::All | PolygonCase::QuadrangleDuality) {
                let p = polygon_phi(&quad, &phi(PhiKind::Duality), true)?;
                reports.push(("quadrangle", displacement::corollary3_verify(&quad, &p)?));
            }
            if matches!(case, PolygonCase::All | PolygonCase::QuadrangleElation) {
                let p = polygon_phi(&quad, &phi(PhiKind::Elation), true)?;
                reports.push(("quadrangle", displacement::corollary3_verify(&quad, &p)?));
            }
            let mut text = String::new();
            for (name, r) in &reports {
                writeln!(
                    text,
                    "[{}] {name} {}: m = {}, disp = {}, case {:?}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.automorphism,
                    r.m,
                    r.disp,
                    r.parity_case
                )?;
            }
            let passed = reports.iter().all(|(_, r)| r.passed);
            let value: Vec<Value> = reports
                .iter()
                .map(|(name, r)| json!({ "building": name, "report": r }))
                .collect();
            Output::new(value, text, passed)
        }
        VerifyCmd::Example1 { n } => {
            let r = displacement::example1_verify(*n, exec)?;
            let text = format!(
                "[{}] n = {}: {} chambers, {} opposite to their image (δ test), {} (subspace test), U1 ⊆ U1^⊥ for {}, {} criteria disagreements, max displacement {} < diam {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.n,
                r.chambers,
                r.opposite_by_weyl,
                r.opposite_by_subspaces,
                r.containment_holds,
                r.criteria_disagreements,
                r.max_displacement,
                r.diam
            );
            let passed = r.passed;
            Output::new(&r, text, passed)
        }
        VerifyCmd::Remark2 => {
            let r = displacement::remark2_demo()?;
            let text = format!(
                "[{}] translation by {}: {} chambers, constant displacement {:?}, {} thickness errors\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.translation,
                r.examined,
                r.constant,
                r.thickness_errors
            );
            let passed = r.passed;
            Output::new(&r, text, passed)
        }
        VerifyCmd::Remark5 { centre } => {
            let quad = MgonBuilding::new(IncidenceGeometry::symplectic_quadrangle_f2())?;
            let elation = quad.symplectic_elation(*centre)?;
            let p = quad.make_automorphism(&AutomorphismSpec::Incidence(elation))?;
            let r = displacement::remark5_check(&quad, &p, Vertex::Point(*centre))?;
            let text = format!(
                "[{}] centre {}: B(x, {}) of {} vertices fixed, max d(y, φy) = {} ≤ {}, disp = {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.centre,
                r.ball_radius,
                r.ball_size,
                r.max_vertex_displacement,
                r.bound,
                r.disp
            );
            let passed = r.passed;
            Output::new(&r, text, passed)
        }
        VerifyCmd::All { criterion } => {
            let outcomes = match criterion {
                Some(id) => verify::run_criterion(*id, exec).into_iter().collect(),
                None => verify::run_all(exec),
            };
            let text = outcomes.iter().map(|o| o.line() + "\n").collect();
            let passed = outcomes.iter().all(|o| o.passed);
            let rows = outcomes
                .iter()
                .map(|o| {
                    vec![
                        o.id.to_string(),
                        o.name.to_string(),
                        o.passed.to_string(),
                        o.elapsed_ms.to_string(),
                        o.detail.clone(),
                    ]
                })
                .collect();
            Ok(Output::new(&outcomes, text, passed)?.with_table(
                ["criterion", "name", "passed", "elapsed_ms", "detail"].map(String::from).to_vec(),
                rows,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = out.emit(cli.format) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
