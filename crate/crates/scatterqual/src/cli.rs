use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};
use scatterqual_core::cover::CoverConfig;
use scatterqual_core::distance::{covering_radius_1d_exact, greedy_separated_subset, lgamma_norm_1d_exact, NormMethod};
use scatterqual_core::fooling::{multi_hole_fooling, reference_norms, single_hole_fooling};
use scatterqual_core::geometry::Shape;
use scatterqual_core::quadrature::{IntegrationSpec, Kernel, Nu, QuadratureRule};
use scatterqual_core::{ConvexDomain, GridIndex, PointSet};

use crate::config::{parse_file, Key, Settings, SEED_ENV};
use crate::domain_spec::resolve_domain;
use crate::error::{AppError, Result};
use crate::experiments::{self as ex, ApproxSetup, Family, MeshPolicy, MlsPolicy};
use crate::io::{num, nums, read_points, Preamble, Table};
use crate::manifest::{unix_now, RunManifest, MANIFEST_FILE};
use crate::parallel;

const GLOBAL: &[Key] = &[
    Key::new("seed", "0", "master seed (falls back to SCATTERQUAL_SEED)"),
    Key::new("out", "out", "output directory"),
    Key::new("mesh", "auto", "grid width for distance norms and residuals"),
    Key::new("threads", "0", "worker threads, 0 for all cores"),
    Key::required("points", "CSV file with one point per row"),
    Key::new("header", "false", "the points file has a header row"),
];

const DISTNORM: &[Key] = &[Key::new("domain", "auto", "domain, e.g. box(0,1)^2"), Key::new("gamma", "2", "exponent, inf for the covering radius")];

const SUBSET: &[Key] = &[Key::required("h", "minimum separation")];

const COVER: &[Key] = &[
    Key::new("domain", "auto", "domain"),
    Key::new("c", "0.25", "good-cube constant in (0,1)"),
    Key::new("probes", "16", "probe cells per axis"),
    Key::new("rel-tol", "1e-3", "relative tolerance of good radii"),
];

const APPROX: &[Key] = &[
    Key::new("domain", "auto", "domain (with --points)"),
    Key::new("d", "2", "dimension of the family study"),
    Key::new("family", "grid", "grid, random or hole"),
    Key::new("n", "256,1024,4096", "point counts of the family study"),
    Key::new("function", "trig", "trig, ridge or quadratic"),
    Key::new("degree", "2", "polynomial degree m"),
    Key::new("policy", "global", "support radius policy: global or cover"),
    Key::new("support-factor", "3", "support radius over covering radius"),
    Key::new("c", "0.5", "good-cube constant for the cover policy"),
    Key::new("probes", "16", "probe cells per axis"),
    Key::new("s", "2", "smoothness used for the predictor"),
    Key::new("p", "inf", "integrability used for the predictor"),
    Key::new("q", "inf", "error norm"),
    Key::new("mesh-factor", "0.25", "residual mesh over spacing"),
];

const LOWER: &[Key] = &[
    Key::new("domain", "auto", "domain"),
    Key::new("s", "2", "smoothness s (integer, at most 3)"),
    Key::new("p", "inf", "Sobolev integrability p"),
    Key::new("q", "1", "error norm q"),
    Key::new("c", "0.5", "good-cube constant"),
    Key::new("probes", "16", "probe cells per axis"),
];

const QUAD: &[Key] = &[
    Key::new("domain", "auto", "domain"),
    Key::new("d", "1", "dimension of the rate study"),
    Key::new("s", "1", "Sobolev smoothness; nu = s - d/2"),
    Key::new("length-scale", "1", "Matern length scale"),
    Key::new("samples", "32768", "low-discrepancy nodes for kernel means"),
    Key::new("product-samples", "2048", "nodes per factor for the double integral"),
    Key::new("n", "16,32,64,128,256,512,1024", "point counts of the rate study"),
    Key::new("trials", "16", "random point sets per n"),
];

const RANDOM_RATES: &[Key] = &[
    Key::new("domain", "auto", "domain"),
    Key::new("d", "2", "dimension for the auto domain"),
    Key::new("gamma", "2", "exponent, inf for the covering radius"),
    Key::new("alpha", "2", "power of the norm"),
    Key::new("n", "64,256,1024,4096", "point counts"),
    Key::new("trials", "50", "trials per n"),
    Key::new("mesh-factor", "0.125", "mesh over spacing when --mesh is auto"),
];

const LIMIT_CONST: &[Key] = &[
    Key::new("domain", "auto", "domain"),
    Key::new("d", "2", "dimension for the auto domain"),
    Key::new("gamma", "2", "exponent"),
    Key::new("n", "4096", "point counts"),
    Key::new("trials", "50", "trials per n"),
    Key::new("mesh-factor", "0.125", "mesh over spacing when --mesh is auto"),
];

const HOLE_DEMO: &[Key] = &[
    Key::new("d", "2", "dimension"),
    Key::new("gamma", "2", "exponent"),
    Key::new("n", "1024,4096,16384,65536", "nominal grid sizes"),
    Key::new("hole-exponent", "1/4", "hole radius n^-exponent"),
    Key::new("mesh-factor", "0.25", "mesh over grid spacing"),
];

const EQUIV: &[Key] = &[
    Key::new("families", "grid,random,hole", "point families"),
    Key::new("d", "2", "dimension"),
    Key::new("s", "2", "smoothness s (integer, at most 3)"),
    Key::new("p", "inf", "Sobolev integrability p"),
    Key::new("q", "1", "error norm q"),
    Key::new("n", "256,1024,4096", "point counts"),
    Key::new("degree", "2", "polynomial degree m"),
    Key::new("policy", "cover", "support radius policy: global or cover"),
    Key::new("support-factor", "3", "support radius over covering radius"),
    Key::new("c", "0.5", "good-cube constant"),
    Key::new("probes", "16", "probe cells per axis"),
    Key::new("mesh-factor", "0.25", "mesh over spacing"),
];

struct Subcommand {
    name: &'static str,
    about: &'static str,
    keys: &'static [Key],
    run: fn(&Settings) -> Result<Report>,
}

const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand { name: "distnorm", about: "L_gamma norm of dist(., P) or the covering radius", keys: DISTNORM, run: distnorm },
    Subcommand { name: "subset", about: "greedy h-separated subset", keys: SUBSET, run: subset },
    Subcommand { name: "cover", about: "good-cube cover with empty balls", keys: COVER, run: cover },
    Subcommand { name: "approx", about: "moving least squares error and rates", keys: APPROX, run: approx },
    Subcommand { name: "lower", about: "fooling-function lower bounds", keys: LOWER, run: lower },
    Subcommand { name: "quad", about: "kernel quadrature weights and rates", keys: QUAD, run: quad },
    Subcommand { name: "random-rates", about: "distance norms of random points", keys: RANDOM_RATES, run: random_rates },
    Subcommand { name: "limit-const", about: "limit constant of the mean distance integral", keys: LIMIT_CONST, run: limit_const },
    Subcommand { name: "hole-demo", about: "grid with a shrinking hole", keys: HOLE_DEMO, run: hole_demo },
    Subcommand { name: "equiv", about: "measured error against geometry and lower bounds", keys: EQUIV, run: equiv },
];

/// Tables and summary lines produced by one subcommand.
struct Report {
    files: Vec<(String, Table)>,
    summary: Vec<(String, String)>,
}

impl Report {
    fn single(name: &str, table: Table, summary: Vec<(String, String)>) -> Self {
        Self { files: vec![(format!("{name}.csv"), table)], summary }
    }
}

fn key_arg(k: &Key) -> Arg {
    let mut help = k.help.to_string();
    if let Some(d) = k.default {
        help.push_str(&format!(" [default: {d}]"));
    }
    Arg::new(k.name).long(k.name).value_name("VALUE").help(help)
}

fn command() -> Command {
    let mut root = Command::new("scatterqual")
        .version(crate::VERSION)
        .about("Quality of scattered points on convex domains")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sub in SUBCOMMANDS {
        let mut cmd = Command::new(sub.name).about(sub.about);
        cmd = cmd.arg(Arg::new("config").long("config").value_name("FILE").help("key = value settings file"));
        for k in GLOBAL {
            cmd = if k.name == "header" {
                cmd.arg(Arg::new("header").long("header").action(ArgAction::SetTrue).help(k.help))
            } else {
                cmd.arg(key_arg(k))
            };
        }
        for k in sub.keys {
            cmd = cmd.arg(key_arg(k));
        }
        root = root.subcommand(cmd);
    }
    root.subcommand(
        Command::new("replay")
            .about("rerun a recorded manifest")
            .arg(Arg::new("manifest").long("manifest").value_name("FILE").required(true).help("manifest.json of an earlier run"))
            .arg(Arg::new("out").long("out").value_name("DIR").help("write to another directory")),
    )
}

fn cli_values(m: &ArgMatches, keys: &[Key]) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for k in GLOBAL.iter().chain(keys) {
        if m.value_source(k.name) != Some(ValueSource::CommandLine) {
            continue;
        }
        if k.name == "header" {
            out.insert("header".into(), m.get_flag("header").to_string());
        } else if let Some(v) = m.get_one::<String>(k.name) {
            out.insert(k.name.to_string(), v.clone());
        }
    }
    out
}

fn settings_for(sub: &Subcommand, m: &ArgMatches) -> Result<Settings> {
    let keys: Vec<Key> = GLOBAL.iter().chain(sub.keys).copied().collect();
    let file = match m.get_one::<String>("config") {
        Some(path) => parse_file(Path::new(path), &keys)?,
        None => BTreeMap::new(),
    };
    let env_seed = std::env::var(SEED_ENV).ok().filter(|s| !s.trim().is_empty());
    let settings = Settings::resolve(&keys, file, env_seed, cli_values(m, sub.keys));
    settings.u64("seed")?;
    Ok(settings)
}

/// Parse `args`, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (name, sub_m) = matches.subcommand().expect("subcommand required");
    let (sub, settings) = if name == "replay" {
        match replay_settings(sub_m) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        }
    } else {
        let sub = SUBCOMMANDS.iter().find(|s| s.name == name).expect("known subcommand");
        match settings_for(sub, sub_m) {
            Ok(s) => (sub, s),
            Err(e) => return fail(&e),
        }
    };
    execute(sub, &settings)
}

fn fail(e: &AppError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn replay_settings(m: &ArgMatches) -> Result<(&'static Subcommand, Settings)> {
    let manifest = RunManifest::read(Path::new(m.get_one::<String>("manifest").expect("required")))?;
    let sub = SUBCOMMANDS
        .iter()
        .find(|s| s.name == manifest.command)
        .ok_or_else(|| AppError::Input(format!("manifest names unknown command '{}'", manifest.command)))?;
    let mut settings = Settings::from_map(manifest.config);
    if let Some(out) = m.get_one::<String>("out") {
        settings.set("out", out.clone());
    }
    Ok((sub, settings))
}

fn execute(sub: &Subcommand, settings: &Settings) -> i32 {
    let started = unix_now();
    let out_dir = PathBuf::from(settings.str("out").unwrap_or("out"));
    let seed = settings.u64("seed").unwrap_or(0);
    let outcome = settings.usize("threads").and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| AppError::Input(format!("thread pool: {e}")))?;
        pool.install(|| (sub.run)(settings))
    });
    let mut outputs = Vec::new();
    let mut diagnostics = Vec::new();
    let code = match outcome.and_then(|report| {
        let preamble = Preamble {
            command: sub.name.into(),
            config_hash: settings.hash(),
            seed,
            notes: report.summary.clone(),
        };
        for (file, table) in &report.files {
            let path = out_dir.join(file);
            table.write(&path, &preamble)?;
            outputs.push(file.clone());
        }
        Ok(report)
    }) {
        Ok(report) => {
            for (k, v) in &report.summary {
                println!("{k}: {v}");
            }
            for f in &outputs {
                println!("wrote {}", out_dir.join(f).display());
            }
            0
        }
        Err(e) => {
            diagnostics.push(e.to_string());
            fail(&e)
        }
    };
    let manifest = RunManifest {
        command: sub.name.into(),
        config: settings.map().clone(),
        config_hash: settings.hash(),
        seed,
        version: crate::VERSION.into(),
        started_unix: started,
        finished_unix: unix_now(),
        outputs,
        exit_code: code,
        diagnostics,
    };
    if let Err(e) = manifest.write(&out_dir) {
        eprintln!("error: could not write {}: {e}", out_dir.join(MANIFEST_FILE).display());
        return if code == 0 { 1 } else { code };
    }
    code
}

fn load_points(s: &Settings) -> Result<PointSet> {
    let path = s.str("points").map_err(|_| AppError::Input("this command needs --points <csv>".into()))?;
    read_points(Path::new(path), s.bool("header")?)
}

fn default_mesh(s: &Settings, domain: &ConvexDomain, n: usize, factor: f64) -> Result<f64> {
    Ok(match s.optional_f64("mesh")? {
        Some(m) => m,
        None => MeshPolicy::PerSpacing(factor).mesh(domain.volume().value, n.max(1), domain.dim()),
    })
}

fn points_and_domain(s: &Settings) -> Result<(PointSet, ConvexDomain)> {
    let pts = load_points(s)?;
    let dom = resolve_domain(s.str("domain")?, pts.dim())?;
    Ok((pts, dom))
}

fn interval(domain: &ConvexDomain) -> Option<(f64, f64)> {
    match domain.shape() {
        Shape::Box { lo, hi } if lo.len() == 1 => Some((lo[0], hi[0])),
        _ => None,
    }
}

fn method_name(m: NormMethod) -> &'static str {
    match m {
        NormMethod::GridCertified => "grid-certified",
        NormMethod::MonteCarlo => "monte-carlo",
        NormMethod::Exact1d => "exact-1d",
    }
}

fn distnorm(s: &Settings) -> Result<Report> {
    let (pts, dom) = points_and_domain(s)?;
    let gamma = s.f64("gamma")?;
    if !(gamma > 0.0) {
        return Err(AppError::Input("gamma must be positive".into()));
    }
    let mut t = Table::new(&["gamma", "value", "lower", "upper", "method", "mesh", "witness"]);
    if let Some((a, b)) = interval(&dom) {
        let v = if gamma.is_finite() {
            lgamma_norm_1d_exact(a, b, pts.coords(), gamma)?
        } else {
            covering_radius_1d_exact(a, b, pts.coords())?
        };
        t.push(vec![num(gamma), num(v), num(v), num(v), "exact-1d".into(), String::new(), String::new()]);
    } else {
        let mesh = default_mesh(s, &dom, pts.len(), 0.25)?;
        let idx = GridIndex::new(&pts)?;
        let e = parallel::lgamma_norm(&dom, &idx, gamma, mesh)?;
        let witness = e.witness.as_deref().map(|w| nums(w).join(" ")).unwrap_or_default();
        t.push(vec![num(gamma), num(e.value), num(e.lower), num(e.upper), method_name(e.method).into(), num(mesh), witness]);
    }
    let summary = vec![("points".into(), pts.len().to_string()), ("domain".into(), dom.describe())];
    Ok(Report::single("distnorm", t, summary))
}

fn subset(s: &Settings) -> Result<Report> {
    let pts = load_points(s)?;
    let h = s.f64("h")?;
    let keep = greedy_separated_subset(&pts, h)?;
    let mut cols = vec!["index".to_string()];
    cols.extend((0..pts.dim()).map(|k| format!("x{k}")));
    let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    for &i in &keep {
        let mut row = vec![i.to_string()];
        row.extend(nums(pts.point(i)));
        t.push(row);
    }
    let summary = vec![("points".into(), pts.len().to_string()), ("kept".into(), keep.len().to_string())];
    Ok(Report::single("subset", t, summary))
}

fn cover_config(s: &Settings) -> Result<CoverConfig> {
    let mut cfg = CoverConfig { c: s.f64("c")?, probes_per_axis: s.usize("probes")?, ..CoverConfig::default() };
    if s.has("rel-tol") {
        cfg.rel_tol = s.f64("rel-tol")?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cover(s: &Settings) -> Result<Report> {
    let (pts, dom) = points_and_domain(s)?;
    let cfg = cover_config(s)?;
    let idx = GridIndex::new(&pts)?;
    let mesh = default_mesh(s, &dom, pts.len(), 0.5)?;
    let cover = parallel::build_good_cover(&dom, &idx, &cfg, mesh)?;
    let d = dom.dim();
    let mut cols: Vec<String> = vec!["cube".into()];
    cols.extend((0..d).map(|k| format!("center{k}")));
    cols.push("radius".into());
    cols.extend((0..d).map(|k| format!("ball_center{k}")));
    cols.push("ball_radius".into());
    let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, c) in cover.cubes.iter().enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(nums(&c.center));
        row.push(num(c.radius));
        match &c.ball {
            Some(b) => {
                row.extend(nums(&b.center));
                row.push(num(b.radius));
            }
            None => row.extend(std::iter::repeat(String::new()).take(d + 1)),
        }
        t.push(row);
    }
    let summary = vec![
        ("cubes".into(), cover.cubes.len().to_string()),
        ("multiplicity".into(), cover.multiplicity_observed.to_string()),
        ("half-cubes disjoint".into(), scatterqual_core::cover::half_cubes_disjoint(&cover).to_string()),
        ("candidate mesh".into(), num(mesh)),
    ];
    Ok(Report::single("cover", t, summary))
}

fn approx_setup(s: &Settings) -> Result<ApproxSetup> {
    Ok(ApproxSetup {
        degree: s.usize("degree")?,
        policy: s.str("policy")?.parse::<MlsPolicy>()?,
        support_factor: s.f64("support-factor")?,
        cover: CoverConfig { c: s.f64("c")?, probes_per_axis: s.usize("probes")?, ..CoverConfig::default() },
    })
}

fn approx(s: &Settings) -> Result<Report> {
    let setup = approx_setup(s)?;
    let q = s.f64("q")?;
    if s.has("points") {
        let (pts, dom) = points_and_domain(s)?;
        let f = ex::test_function(s.str("function")?, dom.dim())?;
        let mesh = default_mesh(s, &dom, pts.len(), s.f64("mesh-factor")?)?;
        let r = ex::approximation_error(&dom, &pts, f.as_ref(), &setup, q, mesh)?;
        let idx = GridIndex::new(&pts)?;
        let (pred, _) = ex::predictor(&dom, &idx, s.f64("s")?, s.f64("p")?, q, mesh)?;
        let mut t = Table::new(&["n", "q", "error", "refined", "failures", "covering_radius", "predictor"]);
        t.push(vec![
            pts.len().to_string(),
            num(q),
            num(r.error),
            num(r.refined),
            r.failures.to_string(),
            num(r.covering),
            num(pred),
        ]);
        return Ok(Report::single("approx", t, vec![("function".into(), f.name())]));
    }
    let cfg = ex::ApproxStudy {
        family: s.str("family")?.parse()?,
        dim: s.usize("d")?,
        function: s.str("function")?.into(),
        s: s.f64("s")?,
        p: s.f64("p")?,
        q,
        schedule: s.schedule("n")?,
        seed: s.u64("seed")?,
        setup,
        mesh_factor: s.f64("mesh-factor")?,
    };
    let table = ex::approx_rate_study(&cfg)?;
    Ok(Report::single("approx", table.to_table(), table.summary()))
}

fn lower(s: &Settings) -> Result<Report> {
    let (pts, dom) = points_and_domain(s)?;
    let smooth = s.usize("s")?;
    let (p, q) = (s.f64("p")?, s.f64("q")?);
    let refs = reference_norms(dom.dim(), q, p, smooth as u32, 0.02)?;
    let idx = GridIndex::new(&pts)?;
    let mesh = default_mesh(s, &dom, pts.len(), 0.25)?;
    let covering = parallel::covering_radius(&dom, &idx, mesh)?;
    let single = single_hole_fooling(&dom, &idx, smooth as u32, &covering, &refs)?;
    let cfg = cover_config(s)?;
    let cover = parallel::build_good_cover(&dom, &idx, &cfg, default_mesh(s, &dom, pts.len(), 0.5)?)?;
    let multi = multi_hole_fooling(&cover, smooth as u32, &refs)?;
    let (pred, gamma) = ex::predictor(&dom, &idx, smooth as f64, p, q, mesh)?;
    let mut t = Table::new(&["kind", "lower_bound", "lq_norm", "sobolev_norm", "bumps", "predictor"]);
    for (kind, f) in [("single-hole", &single.fooling), ("multi-hole", &multi)] {
        t.push(vec![
            kind.into(),
            num(f.lower_bound),
            num(f.lq_norm),
            num(f.sobolev_norm),
            f.function.bumps().len().to_string(),
            num(pred),
        ]);
    }
    let summary = vec![
        ("gamma".into(), num(gamma)),
        ("lower bound".into(), num(single.fooling.lower_bound.max(multi.lower_bound))),
        ("reference mesh change".into(), num(refs.mesh_change)),
    ];
    Ok(Report::single("lower", t, summary))
}

fn quad(s: &Settings) -> Result<Report> {
    let spec = IntegrationSpec { samples: s.usize("samples")?, product_samples: s.usize("product-samples")?, ..IntegrationSpec::default() };
    let sm = s.f64("s")?;
    let ls = s.f64("length-scale")?;
    if s.has("points") {
        let (pts, dom) = points_and_domain(s)?;
        let kernel = Kernel::new(Nu::for_sobolev(sm, dom.dim())?, ls)?;
        let rule = QuadratureRule::optimal(&dom, &pts, &kernel, &spec)?;
        let eq = rule.worst_case_error(&rule.equal_weights(dom.volume().value))?;
        let mut cols: Vec<String> = (0..dom.dim()).map(|k| format!("x{k}")).collect();
        cols.push("weight".into());
        let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
        for (i, w) in rule.weights.iter().enumerate() {
            let mut row = nums(rule.points.point(i));
            row.push(num(*w));
            t.push(row);
        }
        let summary = vec![
            ("wce".into(), num(rule.optimal_error().value)),
            ("wce equal weights".into(), num(eq.value)),
            ("initial error".into(), num(rule.initial_error_sq.sqrt())),
            ("jitter".into(), num(rule.jitter)),
            ("duplicates removed".into(), rule.duplicates_removed.to_string()),
            ("embedding discrepancy".into(), num(rule.embedding_discrepancy)),
        ];
        return Ok(Report::single("quad", t, summary));
    }
    let dim = s.usize("d")?;
    let cfg = ex::IntegrationStudy {
        domain: resolve_domain(s.str("domain")?, dim)?,
        s: sm,
        length_scale: ls,
        schedule: s.schedule("n")?,
        trials: s.usize("trials")?,
        seed: s.u64("seed")?,
        spec,
    };
    let table = ex::integration_rate_study(&cfg)?;
    Ok(Report::single("quad", table.to_table(), table.summary()))
}

fn study_mesh(s: &Settings) -> Result<MeshPolicy> {
    Ok(match s.optional_f64("mesh")? {
        Some(m) => MeshPolicy::Fixed(m),
        None => MeshPolicy::PerSpacing(s.f64("mesh-factor")?),
    })
}

fn random_rates(s: &Settings) -> Result<Report> {
    let cfg = ex::RandomRates {
        domain: resolve_domain(s.str("domain")?, s.usize("d")?)?,
        gamma: s.f64("gamma")?,
        alpha: s.f64("alpha")?,
        schedule: s.schedule("n")?,
        trials: s.usize("trials")?,
        seed: s.u64("seed")?,
        mesh: study_mesh(s)?,
    };
    let table = ex::random_rate_study(&cfg)?;
    Ok(Report::single("random-rates", table.to_table(), table.summary()))
}

fn limit_const(s: &Settings) -> Result<Report> {
    let cfg = ex::LimitConstant {
        domain: resolve_domain(s.str("domain")?, s.usize("d")?)?,
        gamma: s.f64("gamma")?,
        schedule: s.schedule("n")?,
        trials: s.usize("trials")?,
        seed: s.u64("seed")?,
        mesh: study_mesh(s)?,
    };
    let table = ex::limit_constant_check(&cfg)?;
    Ok(Report::single("limit-const", table.to_table(), table.summary()))
}

fn hole_demo(s: &Settings) -> Result<Report> {
    let cfg = ex::HoleDemo {
        dim: s.usize("d")?,
        gamma: s.f64("gamma")?,
        schedule: s.schedule("n")?,
        hole_exponent: s.f64("hole-exponent")?,
        mesh_factor: s.f64("mesh-factor")?,
    };
    let table = ex::hole_demo(&cfg)?;
    Ok(Report::single("hole-demo", table.to_table(), table.summary()))
}

fn equiv(s: &Settings) -> Result<Report> {
    let smooth = s.usize("s")?;
    let cfg = ex::Equivalence {
        families: s.list("families")?.iter().map(|f| f.parse::<Family>()).collect::<Result<_>>()?,
        dim: s.usize("d")?,
        s: u32::try_from(smooth).map_err(|_| AppError::Input("s too large".into()))?,
        p: s.f64("p")?,
        q: s.f64("q")?,
        schedule: s.schedule("n")?,
        seed: s.u64("seed")?,
        setup: approx_setup(s)?,
        mesh_factor: s.f64("mesh-factor")?,
    };
    let report = ex::equivalence_study(&cfg)?;
    Ok(Report::single("equiv", report.to_table(), report.summary()))
}
