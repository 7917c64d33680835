//! Command-line front end over the kernel: predicates, classification,
//! automorphism application, constructors, and verification suites.
//! All input is JSON from files or stdin ("-"); all output is JSON or a
//! bare token on stdout. Exit codes: 0 ok, 1 suite failure, 2 bad input.

use anyhow::{anyhow, bail, Context, Result};
use chrono_kernel::incidence::TripleClass;
use chrono_kernel::json::{
    herm_from_json, herm_to_json, m4event_from_json, mat2_to_json, point_from_json,
    point_to_json, projection_from_json, quadric_to_json, rational_from_json, schemas,
    tabulated_map_from_json, tabulated_map_to_json, verdicts_to_json, word_from_json,
    word_to_json,
};
use chrono_kernel::preservers::{
    classify_interval_map, construct_cone_family, construct_gen_c, construct_line_line,
    interval_grid_points, remark_added_map, ConeKind, GenCParams, JebjoSpecial, RaySpec,
    ScalarFn,
};
use chrono_kernel::verify::{
    generate_points, generate_word, run_all, run_suite, GeneratorConfig, SuiteReport,
};
use chrono_kernel::{Herm2, Point};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "chrono", version, about = "exact chronogeometry kernel")]
struct Cli {
    /// Print the JSON schemas for all interchange types and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coherency predicate on two points.
    Coherent { a: String, b: String },
    /// Cone-distance (0, 1 or 2) between two points.
    Distance { a: String, b: String },
    /// Timelike/spacelike classification of a pairwise distance-2 triple.
    ClassifyTriple { a: String, b: String, c: String },
    /// Apply an automorphism word to a point.
    Apply { word: String, point: String },
    /// Cayley transform of a point into the unitary group.
    Cayley { point: String },
    /// Projective quadric coordinates of a point.
    Quadric { point: String },
    /// Lightlike predicate on two spacetime events {x,y,z,t}.
    Lightlike { r1: String, r2: String },
    /// Classify a tabulated interval map.
    ClassifyMap { map: String },
    /// Build a degenerate-preserver example family as a tabulated map.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long)]
        params: String,
    },
    /// Run one verification suite or all of them.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit reproducible inputs.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        count: u32,
    },
}

/// Print to stdout, exiting quietly if the reader closed the pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn read_input(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {path}"))
}

fn read_point(path: &str) -> Result<Point> {
    Ok(point_from_json(&read_input(path)?)?)
}

fn default_seed() -> u64 {
    std::env::var("CHRONO_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42)
}

fn scalar_fn_from_json(v: &Value) -> Result<ScalarFn> {
    match v {
        Value::String(s) => match s.as_str() {
            "zero" => Ok(ScalarFn::Zero),
            "identity" => Ok(ScalarFn::Identity),
            "infinity" => Ok(ScalarFn::Infinity),
            _ => bail!("unknown scalar function {s}"),
        },
        Value::Object(o) => {
            let c = o.get("constant").ok_or_else(|| anyhow!("expected constant"))?;
            Ok(ScalarFn::Constant(rational_from_json(c)?))
        }
        _ => bail!("expected scalar function, got {v}"),
    }
}

fn field<'a>(o: &'a Value, k: &str) -> Result<&'a Value> {
    o.get(k).ok_or_else(|| anyhow!("missing field {k} in {o}"))
}

fn grid_domain_points() -> Vec<Point> {
    interval_grid_points().into_iter().map(Point::Finite).collect()
}

fn construct_family(family: &str, params: &Value) -> Result<Value> {
    let map = match family {
        "line-line" => {
            let f = scalar_fn_from_json(field(params, "f")?)?;
            construct_line_line(&f, &interval_grid_points())?
        }
        "genC" | "genc" => {
            let mut rays = Vec::new();
            for r in field(params, "rays")?.as_array().unwrap_or(&vec![]) {
                rays.push(RaySpec {
                    dir: projection_from_json(field(r, "dir")?)?,
                    image: projection_from_json(field(r, "image")?)?,
                    radial: scalar_fn_from_json(field(r, "radial")?)?,
                });
            }
            let mut rank2_overrides: Vec<(Herm2, Point)> = Vec::new();
            if let Some(arr) = params.get("rank2_overrides").and_then(Value::as_array) {
                for o in arr {
                    rank2_overrides.push((
                        herm_from_json(field(o, "at")?)?,
                        point_from_json(field(o, "image")?)?,
                    ));
                }
            }
            let p = GenCParams {
                rays,
                default_image: projection_from_json(field(params, "default_image")?)?,
                default_radial: scalar_fn_from_json(field(params, "default_radial")?)?,
                identity_on_rays: params
                    .get("identity_on_rays")
                    .and_then(Value::as_bool)
                    .unwrap_or(false),
                rank2_overrides,
            };
            construct_gen_c(&p, &grid_domain_points())?
        }
        "cone" => {
            let kind = field(params, "kind")?
                .as_str()
                .ok_or_else(|| anyhow!("cone kind must be a string"))?;
            let ck = match kind {
                "varphi1" => ConeKind::Varphi1 {
                    eta: projection_from_json(field(params, "eta")?)?,
                    g: scalar_fn_from_json(field(params, "g")?)?,
                },
                "exoh" => {
                    let mut assign = Vec::new();
                    for a in field(params, "assign")?.as_array().unwrap_or(&vec![]) {
                        assign.push((
                            projection_from_json(field(a, "dir")?)?,
                            projection_from_json(field(a, "image")?)?,
                        ));
                    }
                    ConeKind::Exoh {
                        assign,
                        default: projection_from_json(field(params, "default")?)?,
                    }
                }
                "jebjo" => {
                    let mut q_overrides = Vec::new();
                    if let Some(arr) = params.get("q_overrides").and_then(Value::as_array) {
                        for a in arr {
                            q_overrides.push((
                                projection_from_json(field(a, "dir")?)?,
                                projection_from_json(field(a, "image")?)?,
                            ));
                        }
                    }
                    let special = match params.get("special") {
                        Some(Value::Null) | None => None,
                        Some(sp) => {
                            let mut b = Vec::new();
                            for x in field(sp, "b")?.as_array().unwrap_or(&vec![]) {
                                b.push(herm_from_json(x)?);
                            }
                            Some(JebjoSpecial {
                                r: projection_from_json(field(sp, "r")?)?,
                                c: rational_from_json(field(sp, "c")?)?,
                                b,
                            })
                        }
                    };
                    ConeKind::Jebjo {
                        q_default: projection_from_json(field(params, "q_default")?)?,
                        q_overrides,
                        special,
                    }
                }
                "ohoh" => ConeKind::OhOh {
                    q: projection_from_json(field(params, "q")?)?,
                },
                _ => bail!("unknown cone kind {kind}"),
            };
            construct_cone_family(&ck, &grid_domain_points())?
        }
        "remark-added" => {
            let q = projection_from_json(field(params, "q_circ")?)?;
            remark_added_map(&q)?
        }
        _ => bail!("unknown family {family}"),
    };
    Ok(tabulated_map_to_json(&map))
}

fn run_check(suite: &str, seed: Option<u64>, cases: Option<u32>, out: Option<PathBuf>) -> Result<i32> {
    let cfg = GeneratorConfig {
        seed: seed.unwrap_or_else(default_seed),
        cases: cases.unwrap_or(500),
        ..GeneratorConfig::default()
    };
    let reports: Vec<SuiteReport> = if suite == "all" {
        run_all(&cfg)
    } else {
        vec![run_suite(suite, &cfg)?]
    };
    let all_pass = reports.iter().all(SuiteReport::passed);
    let payload = json!({
        "reports": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
        "passed": all_pass,
    });
    let text = serde_json::to_string_pretty(&payload)?;
    match out {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => emit(&format!("{text}")),
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn run_gen(kind: &str, seed: Option<u64>, count: u32) -> Result<()> {
    let cfg = GeneratorConfig {
        seed: seed.unwrap_or_else(default_seed),
        ..GeneratorConfig::default()
    };
    let out = match kind {
        "grid" => Value::Array(interval_grid_points().iter().map(herm_to_json).collect()),
        "points" => Value::Array(
            generate_points(&cfg, count).iter().map(point_to_json).collect(),
        ),
        "word" => word_to_json(&generate_word(&cfg, 8)),
        _ => bail!("unknown gen kind {kind}"),
    };
    emit(&format!("{}", serde_json::to_string_pretty(&out)?));
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Coherent { a, b } => {
            let (a, b) = (read_point(&a)?, read_point(&b)?);
            emit(&format!("{}", chrono_kernel::spacetime::coherent(&a, &b)));
        }
        Cmd::Distance { a, b } => {
            let (a, b) = (read_point(&a)?, read_point(&b)?);
            emit(&format!("{}", chrono_kernel::spacetime::distance(&a, &b)));
        }
        Cmd::ClassifyTriple { a, b, c } => {
            let (a, b, c) = (read_point(&a)?, read_point(&b)?, read_point(&c)?);
            let cls = chrono_kernel::incidence::classify_triple(&a, &b, &c)?;
            emit(&format!(
                "{}",
                match cls {
                    TripleClass::Timelike => "timelike",
                    TripleClass::Spacelike => "spacelike",
                }
            ));
        }
        Cmd::Apply { word, point } => {
            let w = word_from_json(&read_input(&word)?)?;
            let p = read_point(&point)?;
            let img = chrono_kernel::auto::apply(&w, &p);
            emit(&format!("{}", serde_json::to_string_pretty(&point_to_json(&img))?));
        }
        Cmd::Cayley { point } => {
            let p = read_point(&point)?;
            let u = chrono_kernel::spacetime::cayley(&p);
            emit(&format!("{}", serde_json::to_string_pretty(&mat2_to_json(u.matrix()))?));
        }
        Cmd::Quadric { point } => {
            let p = read_point(&point)?;
            let q = chrono_kernel::spacetime::quadric_embed(&p);
            emit(&format!("{}", serde_json::to_string_pretty(&quadric_to_json(&q))?));
        }
        Cmd::Lightlike { r1, r2 } => {
            let r1 = m4event_from_json(&read_input(&r1)?)?;
            let r2 = m4event_from_json(&read_input(&r2)?)?;
            emit(&format!("{}", chrono_kernel::spacetime::lightlike(&r1, &r2)));
        }
        Cmd::ClassifyMap { map } => {
            let m = tabulated_map_from_json(&read_input(&map)?)?;
            let vs = classify_interval_map(&m)?;
            emit(&format!("{}", serde_json::to_string_pretty(&verdicts_to_json(&vs))?));
        }
        Cmd::Construct { family, params } => {
            let p = read_input(&params)?;
            let out = construct_family(&family, &p)?;
            emit(&format!("{}", serde_json::to_string_pretty(&out)?));
        }
        Cmd::Check { suite, seed, cases, out } => return run_check(&suite, seed, cases, out),
        Cmd::Gen { kind, seed, count } => run_gen(&kind, seed, count)?,
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    if cli.schema {
        emit(&format!(
            "{}",
            serde_json::to_string_pretty(&schemas()).expect("schemas serialize"))
        );
        std::process::exit(0);
    }
    let cmd = match cli.cmd {
        Some(c) => c,
        None => {
            eprintln!("error: a subcommand is required (see --help)");
            std::process::exit(2);
        }
    };
    match dispatch(cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
