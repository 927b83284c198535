use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use wordgeom::cayley::{abelian_ball, eh_displacement, load_or_build, AbelianGraph, CacheStatus, HeisBall};
use wordgeom::heis_norm::{central_norm_table, gamma_of, projected_set, sweep_l_grid, CentralWordBuilder};
use wordgeom::horoboundary::{
    bounded_difference_classes, face_rays, flag_complex, horofunction_window, reduced_boundary, window_points,
    AbelianGroupSpec, FacePoset,
};
use wordgeom::isoperimetric::{format_ratio, gamma_exact};
use wordgeom::{eval_word, Budget, GeneratorSet, HeisElement, HeisPoint, VectorSet};

#[derive(Parser)]
#[command(name = "wordgeom", version, about = "Word-metric geometry of H3(Z) and abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load from cache) a Cayley ball and print its summary.
    Ball(BallArgs),
    /// Word norms of elements, with a geodesic word for each.
    Norm(NormArgs),
    /// Isoperimetric constant of the (abelianized) generating set.
    Gamma(GammaArgs),
    /// Face poset of an abelian generating set.
    Faces(GroupArgs),
    /// Reduced horoboundary: face poset, fibers, flag complex, window functions.
    Horoboundary(HoroArgs),
    /// Norm change under left multiplication by a central element.
    Eh(EhArgs),
    /// Central norm table and the norm estimate on the regime |z| >= L max(x^4, y^4).
    VerifyNorm(VerifyArgs),
    /// Short words for central elements (0,0,z).
    CentralWord(CentralArgs),
    /// gamma, ball, verify-norm and eh in one run.
    Report(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Generator-set JSON; defaults to the standard generators.
    #[arg(long, value_name = "FILE")]
    genset: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct BallOpts {
    #[arg(long, default_value_t = 16)]
    radius: u32,
    /// Maximum number of ball elements; unlimited when omitted.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BallArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    ball: BallOpts,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    ball: BallOpts,
    /// Element as `x,y,z`; repeatable.
    #[arg(long = "element", required = true, allow_hyphen_values = true)]
    elements: Vec<String>,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    common: Common,
    /// Shorthand for the group Z with the symmetric closure of these generators, e.g. `1,10`.
    #[arg(long, conflicts_with = "genset", allow_hyphen_values = true)]
    integers: Option<String>,
}

#[derive(Args)]
struct HoroArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Window radius for horofunction tables.
    #[arg(long)]
    window: Option<i64>,
    /// Consecutive unchanged steps required before a window function counts as stabilized.
    #[arg(long, default_value_t = 3)]
    depth: u64,
    #[arg(long, default_value_t = 1000)]
    max_steps: u64,
}

#[derive(Args)]
struct EhArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    ball: BallOpts,
    /// Central element `0,0,z`.
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    g0: String,
    /// Lower norm cutoff; defaults to the outermost usable shell.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    ball: BallOpts,
    /// Comma-separated list of L values (integers or `p/q`).
    #[arg(long = "L-grid", default_value = "1/1000,1/100,1/10,1")]
    l_grid: String,
}

#[derive(Args)]
struct CentralArgs {
    #[command(flatten)]
    common: Common,
    /// Central coordinates, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprintln!("{}", json!({"error": {"kind": "usage", "message": e.to_string().trim()}}));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": {"kind": error_kind(&e), "message": format!("{e:#}")}}));
            ExitCode::FAILURE
        }
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    use wordgeom::cayley::MetricError;
    use wordgeom::group::GroupError;
    use wordgeom::heis_norm::NormError;
    use wordgeom::horoboundary::HoroError;
    use wordgeom::isoperimetric::IsoError;
    use wordgeom::polygon::PolygonError;
    for cause in e.chain() {
        if cause.is::<GroupError>() {
            return "group";
        } else if cause.is::<MetricError>() {
            return "metric";
        } else if cause.is::<IsoError>() {
            return "isoperimetric";
        } else if cause.is::<PolygonError>() {
            return "polygon";
        } else if cause.is::<NormError>() {
            return "heis_norm";
        } else if cause.is::<HoroError>() {
            return "horoboundary";
        } else if cause.is::<std::io::Error>() {
            return "io";
        } else if cause.is::<serde_json::Error>() {
            return "parse";
        }
    }
    "input"
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ball(a) => cmd_ball(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Gamma(a) => cmd_gamma(a),
        Command::Faces(a) => cmd_faces(a),
        Command::Horoboundary(a) => cmd_horoboundary(a),
        Command::Eh(a) => cmd_eh(a),
        Command::VerifyNorm(a) => cmd_verify(a),
        Command::CentralWord(a) => cmd_central(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, v: &T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn load_genset(path: Option<&Path>) -> Result<GeneratorSet> {
    match path {
        Some(p) => Ok(GeneratorSet::load(p)?),
        None => Ok(GeneratorSet::standard()),
    }
}

fn build_ball(genset: &GeneratorSet, opts: &BallOpts) -> Result<HeisBall> {
    let budget = opts.budget.map_or(Budget::unlimited(), Budget::elements);
    let (ball, status) = load_or_build(genset, opts.radius, budget, opts.cache_dir.as_deref())?;
    let status = match status {
        CacheStatus::Built => "built",
        CacheStatus::Loaded => "loaded",
        CacheStatus::Disabled => "disabled",
    };
    eprintln!("cache: {status}");
    Ok(ball)
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("invalid integer {t:?}")))
        .collect()
}

fn parse_point(s: &str) -> Result<HeisPoint> {
    match parse_ints(s)?.as_slice() {
        &[x, y, z] => Ok(HeisPoint::new(x, y, z)),
        _ => bail!("expected x,y,z, got {s:?}"),
    }
}

fn parse_grid(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|t| t.trim().parse::<BigRational>().map_err(|_| anyhow::anyhow!("invalid L value {t:?}")))
        .collect()
}

fn ball_summary(genset: &GeneratorSet, ball: &HeisBall) -> Value {
    let profile = ball.growth_profile();
    json!({
        "genset": genset.name(),
        "genset_hash": genset.fingerprint(),
        "radius": ball.radius(),
        "size": ball.len(),
        "spheres": profile.spheres,
        "ball_hash": ball.fingerprint(),
    })
}

fn cmd_ball(a: BallArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let ball = build_ball(&genset, &a.ball)?;
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Csv) {
        let mut csv = String::from("norm,sphere,cumulative\n");
        let profile = ball.growth_profile();
        for (k, (s, c)) in profile.spheres.iter().zip(profile.cumulative()).enumerate() {
            writeln!(csv, "{k},{s},{c}")?;
        }
        return emit(out, &csv);
    }
    emit_json(out, &ball_summary(&genset, &ball))
}

fn cmd_norm(a: NormArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let points = a.elements.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>>>()?;
    let ball = build_ball(&genset, &a.ball)?;
    let rows = points
        .iter()
        .map(|p| {
            let norm = ball.norm(p)?;
            let word = ball.geodesic_word(p)?;
            Ok(json!({"element": [p.x, p.y, p.z], "norm": norm, "word": word}))
        })
        .collect::<Result<Vec<Value>>>()?;
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Csv) {
        let mut csv = String::from("x,y,z,norm\n");
        for r in &rows {
            let e = &r["element"];
            writeln!(csv, "{},{},{},{}", e[0], e[1], e[2], r["norm"])?;
        }
        return emit(out, &csv);
    }
    emit_json(out, &rows)
}

/// Planar input (`[x, y]` elements) or a Heisenberg set, abelianized.
fn load_planar(path: Option<&Path>) -> Result<VectorSet> {
    let Some(path) = path else {
        return Ok(projected_set(&GeneratorSet::standard())?);
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    let elements = v["elements"].as_array().context("missing \"elements\" array")?;
    if elements.iter().all(|e| e.as_array().is_some_and(|c| c.len() == 2)) {
        let pairs: Vec<[i64; 2]> = serde_json::from_value(v["elements"].clone())?;
        return Ok(VectorSet::from_pairs(&pairs)?);
    }
    Ok(projected_set(&GeneratorSet::from_json(&text)?)?)
}

fn cmd_gamma(a: GammaArgs) -> Result<()> {
    let vs = load_planar(a.common.genset.as_deref())?;
    let result = gamma_exact(&vs)?;
    emit_json(a.common.out.as_deref(), &result.report())
}

fn load_group(a: &GroupArgs) -> Result<AbelianGroupSpec> {
    if let Some(s) = &a.integers {
        return Ok(AbelianGroupSpec::integers(&parse_ints(s)?)?);
    }
    match &a.common.genset {
        Some(p) => Ok(AbelianGroupSpec::load(p)?),
        None => bail!("an abelian group is required: pass --genset FILE or --integers LIST"),
    }
}

fn poset_json(spec: &AbelianGroupSpec, poset: &FacePoset) -> Value {
    let faces: Vec<Value> = poset
        .faces
        .iter()
        .map(|b| {
            json!({
                "members": b.face.0,
                "generators": b.face.0.iter().map(|&i| &spec.elements[i]).collect::<Vec<_>>(),
                "dimension": b.dimension,
            })
        })
        .collect();
    json!({
        "group": spec.name,
        "faces": faces,
        "order": poset.order,
        "fibers": poset.faces.iter().map(|b| &b.fiber).collect::<Vec<_>>(),
        "total": poset.total.as_ref().map_or("infinite".to_string(), |t| t.to_string()),
    })
}

fn cmd_faces(a: GroupArgs) -> Result<()> {
    let spec = load_group(&a)?;
    let poset = reduced_boundary(&spec)?;
    emit_json(a.common.out.as_deref(), &poset_json(&spec, &poset))
}

fn cmd_horoboundary(a: HoroArgs) -> Result<()> {
    let spec = load_group(&a.group)?;
    let poset = reduced_boundary(&spec)?;
    let mut doc = poset_json(&spec, &poset);
    doc["flag_complex"] = serde_json::to_value(flag_complex(&poset))?;
    let out = a.group.common.out.as_deref();
    let Some(radius) = a.window else {
        return emit_json(out, &doc);
    };
    if radius < 0 {
        bail!("--window must be nonnegative");
    }
    let mut fns = Vec::new();
    let mut face_of = Vec::new();
    for (i, b) in poset.faces.iter().enumerate() {
        // window functions come from the minimal faces
        if poset.order.iter().any(|&(_, j)| j == i) {
            continue;
        }
        for ray in face_rays(&spec, &b.face) {
            fns.push(horofunction_window(&spec, &ray, radius, a.depth, a.max_steps)?);
            face_of.push(i);
        }
    }
    let classes = bounded_difference_classes(&spec, &fns, radius);
    let mut class_of = vec![0; fns.len()];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    if a.group.common.format == Some(Format::Json) {
        doc["window"] = json!({
            "radius": radius,
            "points": window_points(&spec, radius),
            "functions": fns.iter().zip(&face_of).map(|(f, face)| json!({
                "face": face,
                "offset": f.ray.offset,
                "step": f.ray.step,
                "stabilized_at": f.stabilized_at,
                "values": f.values,
            })).collect::<Vec<_>>(),
            "classes": classes,
        });
        return emit_json(out, &doc);
    }
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
    let mut csv = String::from("function,face,class,offset,point,value\n");
    let pts = window_points(&spec, radius);
    for (k, f) in fns.iter().enumerate() {
        for (p, v) in pts.iter().zip(&f.values) {
            writeln!(csv, "{k},{},{},{},{},{v}", face_of[k], class_of[k], join(&f.ray.offset), join(p))?;
        }
    }
    emit(out, &csv)
}

fn displacement(ball: &HeisBall, g0: &HeisPoint, n: Option<u32>) -> Result<wordgeom::cayley::Displacement> {
    let n = match n {
        Some(n) => n,
        None => (ball.radius())
            .checked_sub(ball.norm(g0)? + 1)
            .context("ball too small for the displacement element")?,
    };
    Ok(eh_displacement(ball, g0, n)?)
}

fn cmd_eh(a: EhArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let g0 = parse_point(&a.g0)?;
    let ball = build_ball(&genset, &a.ball)?;
    let d = displacement(&ball, &g0, a.n)?;
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Csv) {
        let mut csv = String::from("shell,max_displacement\n");
        for (k, m) in &d.profile {
            writeln!(csv, "{k},{m}")?;
        }
        return emit(out, &csv);
    }
    emit_json(out, &json!({"radius": ball.radius(), "g0": [g0.x, g0.y, g0.z], "displacement": d}))
}

fn verify_doc(genset: &GeneratorSet, ball: &HeisBall, opts: &BallOpts, grid: &[BigRational]) -> Result<Value> {
    let gamma = gamma_of(genset)?;
    let table = central_norm_table(ball, &gamma)?;
    let planar_graph = AbelianGraph::planar(&genset.abelianized())?;
    let budget = opts.budget.map_or(Budget::unlimited(), Budget::elements);
    let planar = abelian_ball(&planar_graph, ball.radius(), budget)?;
    let regimes: Vec<Value> = grid
        .iter()
        .zip(sweep_l_grid(ball, &planar, &gamma, grid))
        .map(|(l, r)| match r {
            Ok(rep) => serde_json::to_value(rep).unwrap_or(Value::Null),
            Err(e) => json!({"l": format_ratio(l), "error": e.to_string()}),
        })
        .collect();
    Ok(json!({
        "gamma": format_ratio(&gamma),
        "radius": table.radius,
        "c_obs": table.c_obs,
        "lower_bound_ok": table.lower_bound_ok,
        "central": table.rows,
        "regimes": regimes,
    }))
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let grid = parse_grid(&a.l_grid)?;
    let ball = build_ball(&genset, &a.ball)?;
    let doc = verify_doc(&genset, &ball, &a.ball, &grid)?;
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Json) {
        return emit_json(out, &doc);
    }
    let mut csv = String::from("z,norm,estimate,deviation\n");
    for r in doc["central"].as_array().into_iter().flatten() {
        writeln!(csv, "{},{},{},{}", r["z"], r["norm"], r["estimate"], r["deviation"])?;
    }
    for r in doc["regimes"].as_array().into_iter().flatten() {
        eprintln!("regime: {r}");
    }
    emit(out, &csv)
}

fn cmd_central(a: CentralArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let builder = CentralWordBuilder::new(&genset)?;
    let mut plans = Vec::new();
    for z in parse_ints(&a.z)? {
        let plan = builder.build(z)?;
        // a wrong word is a bug, never an output
        if eval_word(&plan.word, &genset)? != HeisElement::central(z) {
            bail!("central word for z = {z} does not evaluate to (0,0,{z})");
        }
        plans.push(plan);
    }
    let out = a.common.out.as_deref();
    if a.common.format == Some(Format::Csv) {
        let mut csv = String::from("z,length,word\n");
        for p in &plans {
            let w = p.word.0.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
            writeln!(csv, "{},{},{w}", p.z, p.length)?;
        }
        return emit(out, &csv);
    }
    emit_json(out, &json!({"c_impl": builder.c_impl(), "words": plans}))
}

fn cmd_report(a: VerifyArgs) -> Result<()> {
    let genset = load_genset(a.common.genset.as_deref())?;
    let grid = parse_grid(&a.l_grid)?;
    let gamma = gamma_exact(&projected_set(&genset)?)?;
    let ball = build_ball(&genset, &a.ball)?;
    let verify = verify_doc(&genset, &ball, &a.ball, &grid)?;
    let eh = displacement(&ball, &HeisPoint::new(0, 0, 1), None).map_or_else(
        |e| json!({"error": format!("{e:#}")}),
        |d| serde_json::to_value(d).unwrap_or(Value::Null),
    );
    emit_json(
        a.common.out.as_deref(),
        &json!({
            "gamma": gamma.report(),
            "ball": ball_summary(&genset, &ball),
            "verify_norm": verify,
            "eh": eh,
        }),
    )
}
