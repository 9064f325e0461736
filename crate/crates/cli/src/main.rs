//! `gwlkit`: run geometric WL tests, generate graph families, reproduce the
//! k-chain table and compute geometric properties from the command line.
//!
//! Exit codes: 0 indistinguishable / isomorphic, 10 distinguished / not
//! isomorphic, 2 usage error, 3 input error, 4 oracle cap exceeded.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gwlkit::batch;
use gwlkit::engines::{run_gwl, run_igwl, run_test, TestKind};
use gwlkit::generators::{
    gen_kchain, gen_lfold, gen_onehop_identical_pair, gen_random_cloud, gen_triangles_vs_hexagon, Family, PairParams,
    PairSpec, Relation,
};
use gwlkit::io;
use gwlkit::oracle::geometric_isomorphism_oracle_with_cap;
use gwlkit::numeric::set_tolerance;
use gwlkit::properties::property_report;
use gwlkit::report::{render_table, Format, VerdictReport};
use gwlkit::so2::{planar_points, so2_hash, stabilizer_order, So2Registry};
use gwlkit::{geometric_isomorphism_oracle, GeometricGraph, GroupSpec, GwlError, Num, NumericMode};

const EXIT_DISTINGUISHED: u8 = 10;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;
const LFOLD_ORACLE_CAP: usize = 64 + 1;

#[derive(Parser)]
#[command(name = "gwlkit", version, about = "Geometric Weisfeiler-Leman tests for geometric graphs")]
struct Cli {
    /// Relative float tolerance.
    #[arg(long, global = true, env = "GWLKIT_TOLERANCE", default_value_t = 1e-9)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "O", alias = "o")]
    O,
    #[value(name = "SO", alias = "so")]
    So,
}

impl GroupArg {
    fn spec(self, dim: usize) -> GroupSpec {
        match self {
            GroupArg::O => GroupSpec::orthogonal(dim),
            GroupArg::So => GroupSpec::special(dim),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> NumericMode {
        match m {
            ModeArg::Exact => NumericMode::Exact,
            ModeArg::Float => NumericMode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Md => Format::Md,
            FormatArg::Text => Format::Text,
        }
    }
}

/// One pair file, or two graph files.
#[derive(Args)]
struct PairInput {
    #[arg(required = true, num_args = 1..=2, value_name = "FILE")]
    files: Vec<PathBuf>,

    /// Convert both graphs to this numeric mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a refinement test on two graphs.
    Distinguish {
        #[command(flatten)]
        input: PairInput,
        /// wl, gwl, igwl, igwl-k (with --k), igwl-<k> or so2.
        #[arg(long, default_value = "gwl")]
        test: String,
        #[arg(long, value_enum, default_value = "O")]
        group: GroupArg,
        /// Body order for igwl-k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Generate a graph family.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Directory for the graph files and the pair spec.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Reproduce a verdict table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, value_enum, default_value = "md")]
        format: FormatArg,
    },
    /// Bounding box, centroid distances and dihedral angles of one graph.
    Props {
        file: PathBuf,
        /// Dihedral quadruple `l,j,k,m`; repeatable.
        #[arg(long, value_name = "L,J,K,M")]
        dihedral: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Brute-force geometric isomorphism.
    Iso {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, value_enum, default_value = "O")]
        group: GroupArg,
    },
    /// The fixed-size SO(2) encoding.
    So2 {
        #[command(subcommand)]
        action: So2Action,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    Kchain {
        #[arg(long)]
        k: usize,
    },
    Lfold {
        #[arg(long = "L", alias = "l")]
        l: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Also emit a second copy at this angle, as a pair.
        #[arg(long)]
        alpha2: Option<f64>,
        #[arg(long)]
        arms: Option<usize>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    TriHex,
    Onehop,
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Radial cutoff, e.g. `3/2` or `1.5`.
        #[arg(long)]
        cutoff: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Kchains,
    LfoldInvariance,
}

#[derive(Subcommand)]
enum So2Action {
    /// Orbit code and orientation of a 2D graph's position multiset.
    Hash { file: PathBuf },
    /// Rotational stabiliser of a 2D graph's position multiset.
    Stab { file: PathBuf },
    /// SO(2)-GWL on two 2D graphs.
    Refine {
        #[command(flatten)]
        input: PairInput,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

/// A failure with the exit code it maps to.
struct Failure(u8, String);

impl From<GwlError> for Failure {
    fn from(e: GwlError) -> Failure {
        match e {
            GwlError::OracleCapExceeded { .. } => Failure(EXIT_CAP, e.to_string()),
            GwlError::InvalidParameter(_) | GwlError::InvalidBodyOrder(_) => Failure(EXIT_USAGE, e.to_string()),
            _ => Failure(EXIT_INPUT, e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

/// Prefixes errors with the offending path.
fn at<T>(path: &Path, r: Result<T, GwlError>) -> Result<T, Failure> {
    r.map_err(|e| {
        let Failure(code, msg) = Failure::from(e);
        Failure(code, format!("{}: {msg}", path.display()))
    })
}

fn read_graph(path: &Path) -> Result<GeometricGraph, Failure> {
    at(path, io::read_graph(path))
}

fn load_pair(input: &PairInput) -> Result<(GeometricGraph, GeometricGraph), Failure> {
    let (a, b) = match input.files.as_slice() {
        [pair] => at(pair, io::read_pair(pair))?,
        [a, b] => {
            let (ga, gb) = (read_graph(a)?, read_graph(b)?);
            (ga, gb)
        }
        _ => return Err(usage("expected one pair file or two graph files")),
    };
    Ok(match input.mode {
        Some(m) => (a.in_mode(m.into()), b.in_mode(m.into())),
        None => (a, b),
    })
}

fn parse_test(test: &str, k: Option<usize>) -> Result<TestKind, Failure> {
    if test == "igwl-k" {
        return k
            .map(TestKind::IgwlK)
            .ok_or_else(|| usage("--test igwl-k needs --k"));
    }
    let kind: TestKind = test.parse()?;
    match (kind, k) {
        (TestKind::IgwlK(a), Some(b)) if a != b => Err(usage(format!("--test {test} conflicts with --k {b}"))),
        (TestKind::IgwlK(_), _) | (_, None) => Ok(kind),
        (_, Some(_)) => Err(usage("--k only applies to igwl-k")),
    }
}

fn distinguish(input: &PairInput, test: &str, group: GroupArg, k: Option<usize>, max_iters: Option<usize>, format: FormatArg) -> Outcome {
    let kind = parse_test(test, k)?;
    let (a, b) = load_pair(input)?;
    let group = group.spec(a.dim());
    let (verdict, trace) = run_test(kind, &a, &b, group, max_iters)?;
    let group_label = match kind {
        TestKind::Wl => "none".to_string(),
        TestKind::So2 => "SO(2)".to_string(),
        _ => group.to_string(),
    };
    let report = VerdictReport::new(kind, group_label, verdict, trace);
    print!("{}", with_newline(report.render(format.into())));
    Ok(if verdict.is_distinguished() { EXIT_DISTINGUISHED } else { 0 })
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn emit_pair(out: Option<&Path>, a: &GeometricGraph, b: &GeometricGraph, spec: &PairSpec) -> Outcome {
    match spec.verified {
        Some(ok) => eprintln!("claim {}: {}", spec.claimed, if ok { "verified by oracle" } else { "REFUTED by oracle" }),
        None => eprintln!("claim {}: not checked (beyond oracle cap)", spec.claimed),
    }
    let spec_json = serde_json::to_string_pretty(spec).expect("pair specs serialise");
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(GwlError::from)?;
            io::write_graph(dir.join("graph_1.json"), a)?;
            io::write_graph(dir.join("graph_2.json"), b)?;
            fs::write(dir.join("pair.json"), io::pair_to_json(a, b) + "\n").map_err(GwlError::from)?;
            fs::write(dir.join("spec.json"), spec_json + "\n").map_err(GwlError::from)?;
            eprintln!("wrote {}", dir.display());
        }
        None => println!("{}", io::pair_to_json(a, b)),
    }
    Ok(0)
}

fn emit_graph(out: Option<&Path>, g: &GeometricGraph) -> Outcome {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(GwlError::from)?;
            io::write_graph(dir.join("graph.json"), g)?;
            eprintln!("wrote {}", dir.display());
        }
        None => println!("{}", io::graph_to_json(g)),
    }
    Ok(0)
}

fn generate(family: &GenFamily, out: Option<&Path>) -> Outcome {
    match family {
        GenFamily::Kchain { k } => {
            let (a, b, spec) = gen_kchain(*k)?;
            emit_pair(out, &a, &b, &spec)
        }
        GenFamily::Lfold { l, alpha, alpha2, arms, dim } => {
            let arms = arms.unwrap_or(*l);
            let g = gen_lfold(*l, *alpha, arms, *dim)?;
            let Some(alpha2) = alpha2 else {
                return emit_graph(out, &g);
            };
            let h = gen_lfold(*l, *alpha2, arms, *dim)?;
            let (g, h) = if g.mode() != h.mode() {
                (g.in_mode(NumericMode::Float), h.in_mode(NumericMode::Float))
            } else {
                (g, h)
            };
            let iso = geometric_isomorphism_oracle(&g, &h, GroupSpec::special(*dim))?.0;
            let spec = PairSpec {
                family: Family::Lfold,
                params: PairParams {
                    l: Some(*l),
                    alpha1: Some(*alpha),
                    alpha2: Some(*alpha2),
                    d: Some(*dim),
                    ..Default::default()
                },
                claimed: if iso { Relation::Isomorphic } else { Relation::NonIsomorphic },
                verified: Some(true),
            };
            emit_pair(out, &g, &h, &spec)
        }
        GenFamily::TriHex => {
            let (a, b, spec) = gen_triangles_vs_hexagon()?;
            emit_pair(out, &a, &b, &spec)
        }
        GenFamily::Onehop => {
            let (a, b, spec) = gen_onehop_identical_pair()?;
            emit_pair(out, &a, &b, &spec)
        }
        GenFamily::Random { n, d, seed, mode, cutoff } => {
            let r = cutoff.as_deref().map(str::parse::<Num>).transpose()?;
            let g = gen_random_cloud(*n, *d, *seed, (*mode).into(), r.as_ref())?;
            emit_graph(out, &g)
        }
    }
}

fn verdict_word(distinguished: bool) -> String {
    if distinguished { "distinguished" } else { "indistinguishable" }.to_string()
}

fn table(which: TableKind, from: Option<usize>, to: Option<usize>, format: FormatArg) -> Outcome {
    let format: Format = format.into();
    let (lo, hi) = match which {
        TableKind::Kchains => (from.unwrap_or(2), to.unwrap_or(8)),
        TableKind::LfoldInvariance => (from.unwrap_or(2), to.unwrap_or(10)),
    };
    if lo > hi || (matches!(which, TableKind::Kchains) && lo < 2) || lo == 0 || hi > 64 {
        return Err(usage(format!("bad range {lo}..{hi}")));
    }
    let (headers, rows): (Vec<String>, Vec<Vec<String>>) = match which {
        TableKind::Kchains => {
            let mut headers = vec!["k".to_string(), "test".to_string()];
            headers.extend((0..5).map(|j| if j == 0 { "floor(k/2)".to_string() } else { format!("floor(k/2)+{j}") }));
            // each (k, test, budget) cell owns its registry
            let cells: Vec<(usize, bool, usize)> = (lo..=hi)
                .flat_map(|k| [true, false].into_iter().flat_map(move |geo| (0..5).map(move |j| (k, geo, k / 2 + j))))
                .collect();
            let results = batch::map(&cells, |&(k, geo, budget)| -> Result<bool, GwlError> {
                let (a, b, _) = gen_kchain(k)?;
                let g = GroupSpec::orthogonal(3);
                let run = if geo { run_gwl(&a, &b, g, Some(budget))? } else { run_igwl(&a, &b, g, Some(budget))? };
                Ok(run.0.is_distinguished())
            });
            let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            let rows = cells
                .chunks(5)
                .zip(results.chunks(5))
                .map(|(c, r)| {
                    let mut row = vec![c[0].0.to_string(), if c[0].1 { "GWL" } else { "IGWL" }.to_string()];
                    row.extend(r.iter().map(|&d| verdict_word(d)));
                    row
                })
                .collect();
            (headers, rows)
        }
        TableKind::LfoldInvariance => {
            let headers = ["L", "rotation", "oracle SO(2)", "GWL SO(2)", "IGWL SO(2)"].map(String::from).to_vec();
            let ls: Vec<usize> = (lo..=hi).collect();
            let rows = batch::map(&ls, |&l| -> Result<Vec<String>, GwlError> {
                let g = gen_lfold(l, 0.0, l, 2)?.in_mode(NumericMode::Float);
                let h = gen_lfold(l, PI / l as f64, l, 2)?;
                let so2 = GroupSpec::special(2);
                // symmetric stars prune well, so the default cap is needlessly tight here
                let iso = geometric_isomorphism_oracle_with_cap(&g, &h, so2, LFOLD_ORACLE_CAP)?.0;
                Ok(vec![
                    l.to_string(),
                    format!("pi/{l}"),
                    if iso { "isomorphic" } else { "not isomorphic" }.to_string(),
                    verdict_word(run_gwl(&g, &h, so2, None)?.0.is_distinguished()),
                    verdict_word(run_igwl(&g, &h, so2, None)?.0.is_distinguished()),
                ])
            });
            (headers, rows.into_iter().collect::<Result<Vec<_>, _>>()?)
        }
    };
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    print!("{}", render_table(&headers, &rows, format));
    if matches!(format, Format::Md | Format::Text) {
        println!("\nout of scope: trained models");
    }
    Ok(0)
}

fn props(file: &Path, dihedral: &[String], format: FormatArg) -> Outcome {
    let g = read_graph(file)?;
    let quads = dihedral
        .iter()
        .map(|q| {
            let v: Vec<usize> = q.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(|_| usage(format!("bad quadruple {q:?}")))?;
            <[usize; 4]>::try_from(v).map_err(|_| usage(format!("quadruple {q:?} needs four indices")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = property_report(&g, &quads)?;
    match format {
        FormatArg::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialise")),
        other => {
            let tokens = |v: &[Num]| v.iter().map(Num::to_token).collect::<Vec<_>>().join(" ");
            let mut rows = Vec::new();
            if let Some(b) = &report.bounding_box {
                rows.push(vec!["extents".into(), tokens(&b.extents)]);
                rows.push(vec!["perimeter".into(), b.perimeter.to_token()]);
                rows.push(vec![if g.dim() == 3 { "surface area" } else { "area" }.into(), b.area.to_token()]);
                if let Some(v) = &b.volume {
                    rows.push(vec!["volume".into(), v.to_token()]);
                }
            }
            rows.push(vec!["centroid".into(), tokens(&report.centroid.0)]);
            rows.push(vec!["centroid distances^2".into(), tokens(&report.centroid_distances_sq)]);
            for d in &report.dihedrals {
                let q = d.quadruple;
                rows.push(vec![format!("dihedral {},{},{},{}", q[0], q[1], q[2], q[3]), d.value.to_token()]);
            }
            print!("{}", render_table(&["property", "value"], &rows, other.into()));
        }
    }
    Ok(0)
}

fn iso(input: &PairInput, group: GroupArg) -> Outcome {
    let (a, b) = load_pair(input)?;
    let (found, witness) = geometric_isomorphism_oracle(&a, &b, group.spec(a.dim()))?;
    let out = json!({ "isomorphic": found, "witness": witness });
    println!("{}", serde_json::to_string_pretty(&out).expect("witnesses serialise"));
    Ok(if found { 0 } else { EXIT_DISTINGUISHED })
}

fn so2(action: &So2Action) -> Outcome {
    match action {
        So2Action::Hash { file } => {
            let x = planar_points(&read_graph(file)?)?;
            let h = so2_hash(&x, &mut So2Registry::new());
            let stab = if x.is_empty() { None } else { Some(stabilizer_order(&x)?) };
            println!("{}", serde_json::to_string_pretty(&json!({ "hash": h, "stabilizer": stab })).expect("hashes serialise"));
            Ok(0)
        }
        So2Action::Stab { file } => {
            let x = planar_points(&read_graph(file)?)?;
            let s = stabilizer_order(&x)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "stabilizer": s, "generator_angle": s.generator_angle() })).expect("serialise")
            );
            Ok(0)
        }
        So2Action::Refine { input, max_iters, format } => distinguish(input, "so2", GroupArg::So, None, *max_iters, *format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = set_tolerance(cli.tolerance) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match &cli.command {
        Command::Distinguish { input, test, group, k, max_iters, format } => distinguish(input, test, *group, *k, *max_iters, *format),
        Command::Gen { family, out } => generate(family, out.as_deref()),
        Command::Table { which, from, to, format } => table(*which, *from, *to, *format),
        Command::Props { file, dihedral, format } => props(file, dihedral, *format),
        Command::Iso { input, group } => iso(input, *group),
        Command::So2 { action } => so2(action),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
