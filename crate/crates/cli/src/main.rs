use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use surfflow::circulation::Terminals;
use surfflow::flows::{nowhere_zero_flow_with_boundary, relevant_boundaries};
use surfflow::generators::{bouquet, gen_grid, gen_q13, random_map};
use surfflow::hollow2d::{enumerate_and_verify, VerifyConfig};
use surfflow::lattice::{integer_points_bruteforce, DEFAULT_EDGE_BUDGET};
use surfflow::solver::{
    exhaustive_extension, extend_precoloring_with, Precoloring, SolverOptions, Status,
};
use surfflow::{cohomology_basis, surfmap, CombinatorialMap, FaceProfile};

#[derive(Parser)]
#[command(
    name = "surfflow",
    version,
    about = "Coloring surface-embedded graphs through dual flows"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extend a precoloring to a homomorphism into C_m, or print NONE.
    Solve {
        instance: String,
        #[arg(long, short, default_value_t = 3)]
        modulus: u32,
        /// Lines `<vertex-id> <color>`.
        #[arg(long)]
        precolor: Option<PathBuf>,
        /// Cross-check against exhaustive search (at most 13 vertices).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Counts, genus and face profile.
    Stats {
        instance: String,
        #[arg(long, short, default_value_t = 3)]
        modulus: u32,
    },
    /// Emit the dual map.
    Dual { instance: String },
    /// Integer points of the homology polytope of the first usable dual flow.
    Polytope {
        instance: String,
        #[arg(long, short, default_value_t = 3)]
        modulus: u32,
        /// Extra terminal vertices, comma separated.
        #[arg(long, value_delimiter = ',')]
        terminals: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
        budget: usize,
    },
    /// Check that hollow third-integral polygons in the box are narrow.
    #[command(name = "hollow2d-verify")]
    Hollow2dVerify {
        /// Box width in thirds.
        #[arg(long, default_value_t = 8)]
        width: i64,
        /// Box height in thirds.
        #[arg(long, default_value_t = 13)]
        height: i64,
        #[arg(long, default_value_t = 42)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// The unit square.
        #[arg(long)]
        smoke: bool,
    },
    /// Emit a generated map.
    Gen { instance: String },
}

/// Failure with its exit code.
struct Fail(u8, String);

fn invalid(msg: impl std::fmt::Display) -> Fail {
    Fail(2, msg.to_string())
}

struct Instance {
    map: CombinatorialMap,
    /// Column count for grid naming.
    grid_cols: Option<usize>,
}

fn load(spec: &str) -> Result<Instance, Fail> {
    let plain = |map| {
        Ok(Instance {
            map,
            grid_cols: None,
        })
    };
    match spec {
        "q13" => return plain(gen_q13()),
        "bouquet" => return plain(bouquet()),
        _ => {}
    }
    if let Some(dims) = spec.strip_prefix("grid:") {
        let (a, b) = dims
            .split_once('x')
            .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
            .ok_or_else(|| invalid(format!("bad grid spec `{spec}`, expected grid:AxB")))?;
        let map = gen_grid(a, b).map_err(invalid)?;
        return Ok(Instance {
            map,
            grid_cols: Some(b),
        });
    }
    if let Some(args) = spec.strip_prefix("random:") {
        let nums: Vec<u64> = args
            .split(':')
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| invalid(format!("bad random spec `{spec}`")))?;
        let [v, e, seed] = nums[..] else {
            return Err(invalid("expected random:V:E:SEED"));
        };
        if v == 0 || e + 1 < v {
            return Err(invalid("random map needs V >= 1 and E >= V - 1"));
        }
        let mut rng = StdRng::seed_from_u64(seed);
        return plain(random_map(&mut rng, v as usize, e as usize));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| invalid(format!("{spec}: {e}")))?;
    plain(surfmap::parse(&text).map_err(|e| invalid(format!("{spec}: {e}")))?)
}

fn vertex_name(inst: &Instance, v: usize) -> String {
    match inst.grid_cols {
        Some(b) => format!("v{},{}", v / b, v % b),
        None => format!("v{v}"),
    }
}

fn parse_vertex(inst: &Instance, tok: &str) -> Option<usize> {
    let tok = tok.strip_prefix('v').unwrap_or(tok);
    if let (Some(b), Some((i, j))) = (inst.grid_cols, tok.split_once(',')) {
        let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
        return (j < b).then_some(i * b + j);
    }
    tok.parse().ok()
}

fn read_precoloring(inst: &Instance, path: &PathBuf, m: u32) -> Result<Precoloring, Fail> {
    let text =
        std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let n = inst.map.vertex_count();
    let mut psi = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| invalid(format!("{}:{}: {what}", path.display(), i + 1));
        let [v, c] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(bad("expected `<vertex-id> <color>`"));
        };
        let v = parse_vertex(inst, v)
            .filter(|&v| v < n)
            .ok_or_else(|| bad("unknown vertex"))?;
        let c: u32 = c
            .parse()
            .ok()
            .filter(|&c| c < m)
            .ok_or_else(|| bad("color out of range"))?;
        if psi.insert(v, c).is_some_and(|old| old != c) {
            return Err(bad("vertex colored twice"));
        }
    }
    Precoloring::new(m, psi).map_err(invalid)
}

fn solve(
    spec: &str,
    m: u32,
    precolor: Option<&PathBuf>,
    oracle: bool,
    jobs: usize,
) -> Result<String, Fail> {
    let inst = load(spec)?;
    let pre = match precolor {
        Some(p) => read_precoloring(&inst, p, m)?,
        None => Precoloring::empty(m).map_err(invalid)?,
    };
    let res = extend_precoloring_with(&inst.map, &pre, SolverOptions { jobs: jobs.max(1) })
        .map_err(invalid)?;
    eprintln!(
        "boundaries tried {}, lattice points tested {}",
        res.stats.boundaries_tried, res.stats.lattice_points_tested
    );
    if oracle {
        if inst.map.vertex_count() > 13 {
            eprintln!("oracle skipped: more than 13 vertices");
        } else {
            let brute = exhaustive_extension(&inst.map, &pre).is_some();
            if brute != res.is_extendable() {
                return Err(Fail(
                    1,
                    format!(
                        "oracle disagreement: solver {}, exhaustive {brute}",
                        res.is_extendable()
                    ),
                ));
            }
            eprintln!("oracle agrees");
        }
    }
    match (&res.status, &res.coloring) {
        (Status::Extendable, Some(phi)) => {
            let mut out = String::new();
            for (v, c) in phi.iter().enumerate() {
                writeln!(out, "{} {c}", vertex_name(&inst, v)).unwrap();
            }
            Ok(out)
        }
        (Status::NotExtendable(why), _) => {
            eprintln!("not extendable: {why:?}");
            println!("NONE");
            Err(Fail(1, String::new()))
        }
        _ => unreachable!("extendable results carry a coloring"),
    }
}

fn stats(spec: &str, m: u32) -> Result<String, Fail> {
    let map = load(spec)?.map;
    let prof = FaceProfile::of(&map, m).map_err(invalid)?;
    let hist: Vec<String> = prof
        .length_histogram()
        .iter()
        .map(|(c, l)| format!("{c}x{l}"))
        .collect();
    Ok(format!(
        "vertices {}\nedges {}\ngenus {}\nqstar {}\nbstar {}\nfaces {}\n",
        map.vertex_count(),
        map.edge_count(),
        map.euler_genus(),
        prof.q_star,
        prof.b_star,
        hist.join(" ")
    ))
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn polytope(spec: &str, m: u32, extra: &[usize], budget: usize) -> Result<String, Fail> {
    let h = load(spec)?.map;
    surfflow::map::check_modulus(m).map_err(invalid)?;
    if let Some(v) = extra.iter().find(|&&v| v >= h.vertex_count()) {
        return Err(invalid(format!("unknown terminal vertex {v}")));
    }
    let g = h.dual();
    if g.edge_count() > budget {
        return Err(invalid(format!(
            "{} edges exceed the budget of {budget}",
            g.edge_count()
        )));
    }
    let Some((d, f0)) = relevant_boundaries(&g, m).find_map(|b| {
        nowhere_zero_flow_with_boundary(&g, &b.d)
            .ok()
            .flatten()
            .map(|f| (b.d, f))
    }) else {
        return Err(Fail(
            1,
            "no relevant boundary admits a nowhere-zero flow".into(),
        ));
    };
    let basis = cohomology_basis(&g);
    let x = extra.first().copied().unwrap_or(0);
    let terminals = Terminals::new(&g, x, extra);
    let points = integer_points_bruteforce(&g, &basis, &f0, &terminals, budget).map_err(invalid)?;
    let mut out = String::new();
    writeln!(out, "boundary {}", join(d.coeffs())).unwrap();
    writeln!(
        out,
        "flow {}",
        join(&f0.canonical_iter().map(|(_, v)| v).collect::<Vec<_>>())
    )
    .unwrap();
    writeln!(out, "basis {}", basis.len()).unwrap();
    let names: Vec<String> = terminals.s.iter().map(usize::to_string).collect();
    writeln!(out, "terminals {}", names.join(" ")).unwrap();
    writeln!(out, "points {}", points.len()).unwrap();
    for (a, ap) in &points {
        writeln!(out, "{} | {}", join(a), join(ap)).unwrap();
    }
    Ok(out)
}

fn hollow(cfg: VerifyConfig) -> Result<String, Fail> {
    let started = Instant::now();
    let report = enumerate_and_verify(&cfg).map_err(invalid)?;
    eprintln!("wall time {:.3}s", started.elapsed().as_secs_f64());
    let text = format!("{report}\n");
    if report.unresolved() > 0 {
        print!("{text}");
        return Err(Fail(1, format!("{} unresolved hulls", report.unresolved())));
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<String, Fail> {
    match cli.cmd {
        Cmd::Solve {
            instance,
            modulus,
            precolor,
            oracle,
            jobs,
        } => solve(&instance, modulus, precolor.as_ref(), oracle, jobs),
        Cmd::Stats { instance, modulus } => stats(&instance, modulus),
        Cmd::Dual { instance } => surfmap::emit(&load(&instance)?.map.dual()).map_err(invalid),
        Cmd::Polytope {
            instance,
            modulus,
            terminals,
            budget,
        } => polytope(&instance, modulus, &terminals, budget),
        Cmd::Hollow2dVerify {
            width,
            height,
            bound,
            jobs,
            smoke,
        } => {
            let cfg = if smoke {
                VerifyConfig {
                    width: 3,
                    height: 3,
                    bound,
                    jobs,
                }
            } else {
                VerifyConfig {
                    width,
                    height,
                    bound,
                    jobs,
                }
            };
            hollow(cfg)
        }
        Cmd::Gen { instance } => surfmap::emit(&load(&instance)?.map).map_err(invalid),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Fail(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
