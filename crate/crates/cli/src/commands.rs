use std::io::Read;

use serde::Serialize;
use serde_json::{json, Value};

use ballbody::body::doc::{parse_body, parse_json};
use ballbody::body::{circumball, hausdorff, point_distance, profile_distance, reconstruct, Support, SupportProfile};
use ballbody::lab::{
    classify_isometry, geodesic_midpoint_check, surjectivity_probe_planar, ClassifyConfig, MapDoc,
    SurjectivityConfig, POINT_TOL,
};
use ballbody::raster::{raster_hausdorff, rasterize, Bounds};
use ballbody::selftest::{self, SelfTestConfig};
use ballbody::{make_sphere_net, BallBodyExpr, Error, Result, SphereNet, SupportEval, Vector};

use crate::{Cli, Command, RunConfig};

/// Raster cell used by `--oracle`.
const ORACLE_CELL: f64 = 0.01;

type Outcome = Result<(Value, u8)>;

pub fn run(cli: &Cli, config: &RunConfig) -> (&'static str, Outcome) {
    match &cli.command {
        Command::Dist { a, b } => ("dist", dist(cli, a, b)),
        Command::Classify { map } => ("classify", classify(cli, map)),
        Command::Selftest { only } => ("selftest", run_selftest(cli, only)),
        Command::Support { body, directions } => ("support", support(cli, body, directions)),
        Command::CdualCheck { body } => ("cdual-check", cdual_check(cli, body)),
        Command::Circ { body } => ("circ", circ(cli, body)),
        Command::Reconstruct { body, spacing, extent } => ("reconstruct", rebuild(cli, body, *spacing, *extent)),
        Command::GeodesicCheck { k0, k1, k2 } => ("geodesic-check", geodesic(cli, [k0, k1, k2])),
        Command::Surjectivity { map, target } => ("surjectivity", surjectivity(cli, config, map, target)),
    }
}

fn read_doc(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
}

fn load_body(cli: &Cli, arg: &str) -> Result<BallBodyExpr> {
    let k = parse_body(&read_doc(arg)?)?;
    if let Some(d) = cli.dim {
        if d != k.dim() {
            return Err(Error::DimensionMismatch { expected: d, got: k.dim() });
        }
    }
    Ok(k)
}

fn load_map(arg: &str) -> Result<MapDoc> {
    parse_json(&read_doc(arg)?)
}

fn net_for(cli: &Cli, n: usize) -> Result<SphereNet> {
    let mesh = cli.mesh.unwrap_or(if n == 2 { 0.02 } else { 0.08 });
    make_sphere_net(n, mesh)
}

fn eval(cli: &Cli, k: &BallBodyExpr) -> Result<SupportEval> {
    SupportEval::new(k.clone(), cli.tol)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn coords(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

fn dist(cli: &Cli, a: &str, b: &str) -> Outcome {
    let (ka, kb) = (load_body(cli, a)?, load_body(cli, b)?);
    if ka.dim() != kb.dim() {
        return Err(Error::DimensionMismatch { expected: ka.dim(), got: kb.dim() });
    }
    let net = net_for(cli, ka.dim())?;
    let d = hausdorff(&eval(cli, &ka)?, &eval(cli, &kb)?, &net)?;
    let mut out = json!({
        "value": d.value,
        "error_bound": d.error_bound,
        "lower": d.lower(),
        "upper": d.upper(),
        "mesh": net.mesh(),
    });
    if cli.oracle && ka.dim() == 2 {
        let bounds = Bounds::around(&[&ka, &kb], 2.0 * ORACLE_CELL);
        let r = raster_hausdorff(&rasterize(&ka, ORACLE_CELL, &bounds)?, &rasterize(&kb, ORACLE_CELL, &bounds)?)?;
        out["oracle_value"] = json!(r);
        out["oracle_cell"] = json!(ORACLE_CELL);
    }
    Ok((out, 0))
}

fn classify(cli: &Cli, map: &str) -> Outcome {
    let m = load_map(map)?.body_map()?;
    let n = cli.dim.unwrap_or(2);
    let config = ClassifyConfig::standard(net_for(cli, n)?, cli.tol, cli.seed)?;
    let c = classify_isometry(&m, &config)?;
    Ok((to_json(&c), 0))
}

fn run_selftest(cli: &Cli, only: &[usize]) -> Outcome {
    let cfg = SelfTestConfig { seed: cli.seed, mesh: cli.mesh.unwrap_or(0.02), tol: cli.tol, cell: ORACLE_CELL };
    let report = if only.is_empty() { selftest::run(&cfg)? } else { selftest::run_selected(&cfg, only)? };
    for c in &report.criteria {
        eprintln!("criterion {:>2} {:<45} {:?}: {}", c.id, c.name, c.status, c.detail);
    }
    let code = if report.passed { 0 } else { 1 };
    Ok((to_json(&report), code))
}

fn support(cli: &Cli, body: &str, flat: &[f64]) -> Outcome {
    let k = load_body(cli, body)?;
    let n = k.dim();
    let e = eval(cli, &k)?;
    let dirs: Vec<Vector> = if flat.is_empty() {
        net_for(cli, n)?.directions().to_vec()
    } else {
        if flat.len() % n != 0 {
            return Err(Error::DimensionMismatch { expected: n, got: flat.len() % n });
        }
        flat.chunks(n).map(Vector::from_column_slice).collect()
    };
    let values: Vec<f64> = dirs.iter().map(|u| e.support(u)).collect::<Result<_>>()?;
    let dirs: Vec<Vec<f64>> = dirs.iter().map(coords).collect();
    Ok((json!({ "directions": dirs, "values": values, "tol": cli.tol }), 0))
}

fn cdual_check(cli: &Cli, body: &str) -> Outcome {
    let k = load_body(cli, body)?;
    let net = net_for(cli, k.dim())?;
    let p = SupportProfile::new(&eval(cli, &k)?, &net)?;
    let pcc = SupportProfile::new(&eval(cli, &k.c_dual()?.c_dual()?)?, &net)?;
    let dual = eval(cli, &k.c_dual()?)?;
    let involution = p.values.iter().zip(&pcc.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut identity: f64 = 0.0;
    for (u, h) in net.directions().iter().zip(&p.values) {
        identity = identity.max((h + dual.support_point_unit(&(-u))?.0 - 1.0).abs());
    }
    let limit = 2.0 * cli.tol;
    let passed = involution <= limit && identity <= limit;
    let out = json!({
        "involution_deviation": involution,
        "support_identity_deviation": identity,
        "limit": limit,
        "directions": net.len(),
        "passed": passed,
    });
    Ok((out, if passed { 0 } else { 1 }))
}

fn circ(cli: &Cli, body: &str) -> Outcome {
    let k = load_body(cli, body)?;
    let net = net_for(cli, k.dim())?;
    let b = circumball(&eval(cli, &k)?, &net)?;
    let mut out = json!({ "center": coords(&b.center), "radius": b.radius, "mesh": net.mesh() });
    if cli.oracle && k.dim() == 2 {
        let r = rasterize(&k, ORACLE_CELL, &Bounds::around(&[&k], 2.0 * ORACLE_CELL))?.circumball()?;
        out["oracle_center"] = json!(coords(&r.center));
        out["oracle_radius"] = json!(r.radius);
    }
    Ok((out, 0))
}

fn grid(n: usize, spacing: f64, extent: f64) -> Vec<Vector> {
    let m = (extent / spacing).floor() as i64;
    let side = (2 * m + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut code| {
            Vector::from_iterator(
                n,
                (0..n).map(|_| {
                    let i = (code % side) as i64 - m;
                    code /= side;
                    i as f64 * spacing
                }),
            )
        })
        .collect()
}

fn rebuild(cli: &Cli, body: &str, spacing: f64, extent: f64) -> Outcome {
    if !(spacing > 0.0) || !(extent >= 0.0) {
        return Err(Error::InvalidArgument("spacing must be > 0 and extent >= 0".into()));
    }
    let k = load_body(cli, body)?;
    let net = net_for(cli, k.dim())?;
    let e = eval(cli, &k)?;
    let probes: Vec<(Vector, f64)> = grid(k.dim(), spacing, extent)
        .into_iter()
        .map(|x| {
            let d = point_distance(&e, &x, &net)?;
            Ok((x, d))
        })
        .collect::<Result<_>>()?;
    let khat = reconstruct(&probes, cli.tol)?;
    let pk = SupportProfile::new(&e, &net)?;
    let ph = SupportProfile::new(&khat, &net)?;
    let d = profile_distance(&pk, &ph, &net);
    let dominance = pk.values.iter().zip(&ph.values).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    let out = json!({
        "probes": khat.probe_count(),
        "active_balls": khat.active_count(),
        "distance": d.value,
        "error_bound": d.error_bound,
        "max_support_excess": dominance,
        "contained": dominance <= cli.tol,
    });
    Ok((out, 0))
}

fn geodesic(cli: &Cli, args: [&String; 3]) -> Outcome {
    let ks: Vec<BallBodyExpr> = args.iter().map(|a| load_body(cli, a)).collect::<Result<_>>()?;
    if ks.iter().any(|k| k.dim() != ks[0].dim()) {
        return Err(Error::DimensionMismatch { expected: ks[0].dim(), got: ks[1].dim().max(ks[2].dim()) });
    }
    let net = net_for(cli, ks[0].dim())?;
    let c = geodesic_midpoint_check(&ks[0], &ks[1], &ks[2], &net, cli.tol, POINT_TOL)?;
    let code = if c.passed { 0 } else { 1 };
    Ok((to_json(&c), code))
}

fn surjectivity(cli: &Cli, _config: &RunConfig, map: &str, target: &[f64]) -> Outcome {
    let f = load_map(map)?.planar_map()?;
    if target.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: target.len() });
    }
    let cfg = SurjectivityConfig { seed: cli.seed, ..SurjectivityConfig::default() };
    let rep = surjectivity_probe_planar(&f, [target[0], target[1]], &cfg)?;
    Ok((to_json(&rep), 0))
}
