//! Command-line front end: validation, orbits, heights, preperiodic
//! search, finite-field graphs, the plane extension of curve duplication,
//! and the counting experiments, with JSON or CSV output.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use arithdyn_core::counting::{emit_csv, morphism_hash, ratio_table, CountRow, CountTable};
use arithdyn_core::finite::{build_graph, density_in_open, frobenius_twist_solve};
use arithdyn_core::forms::HomogeneousForm;
use arithdyn_core::heights::{canonical_height, enumerate_points, enumeration_size};
use arithdyn_core::lattes::{extend_duplication, genus_feasibility, lattes_map, WeierstrassCurve};
use arithdyn_core::rational::{
    classify_orbit, inverse_limit_tree, preperiodic_points, rational_preimages, LiftNode,
};
use arithdyn_core::{
    Error as CoreError, FiniteField, ProjMorphism, ProjPointQ, ValidityCertificate,
};

#[derive(Parser)]
#[command(name = "arithdyn", version, about = "Arithmetic dynamics of projective self-maps")]
struct Cli {
    /// Tolerance for canonical-height estimates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Largest number of candidate points any single enumeration may visit.
    #[arg(long, global = true, default_value_t = 1u128 << 32)]
    budget: u128,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a forms file defines a morphism and print its certificate.
    Validate { map: PathBuf },
    /// Apply a map to a point once.
    Apply {
        map: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Walk an orbit to its first repeat or past the escape threshold.
    Orbit {
        map: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Canonical height of a point, with a rigorous error bound.
    Canheight {
        map: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// The complete set of rational preperiodic points.
    Preper { map: PathBuf },
    /// All rational preimages of a point on the line.
    Preimages {
        map: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// The tree of iterated rational preimages.
    Invlimit {
        /// One morphism (repeated --depth times) or a JSON array forming
        /// the chain, outermost map first.
        map: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// List every rational point of bounded coordinates.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        bound: u64,
    },
    /// The full functional graph of the reduced map over F_{p^r}.
    Ffgraph {
        map: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Points where the map equals an iterated field power map.
    Twist {
        map: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
    },
    /// Smallest extension carrying a periodic point off a divisor.
    Density {
        map: PathBuf,
        #[arg(long)]
        p: u64,
        /// JSON file with the form cutting out the avoided divisor.
        #[arg(long)]
        avoid: PathBuf,
        #[arg(long, default_value_t = 8)]
        rmax: u32,
    },
    /// The degree-4 self-map of the line induced by curve duplication.
    Lattes {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
    },
    /// Extend curve duplication to a certified self-map of the plane.
    Extend {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// Largest corrector coefficient magnitude to search.
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
    /// Genus of the cyclic cover attached to (dim, deg), and feasibility.
    Genus {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        deg: u32,
    },
    /// Point counts M, N, R with log-ratios at the given cutoffs.
    Counts {
        map: PathBuf,
        #[arg(long = "c", value_name = "C", allow_negative_numbers = true, required = true)]
        c: Vec<f64>,
    },
    /// Count tables for the family x^2 + k, with the per-cutoff family max.
    Ratios {
        /// Inclusive integer range LO..HI of family parameters.
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        #[arg(long = "c", value_name = "C", allow_negative_numbers = true, required = true)]
        c: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            let out = write_report(&cli.out, &report);
            if let Err(e) = out {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Budget and search exhaustion get their own exit code; everything else
/// that goes wrong is an input problem.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::BudgetExceeded { .. }) | Some(CoreError::SearchExhausted { .. }) => 3,
        _ => 2,
    }
}

fn write_report(out: &Option<PathBuf>, report: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, report)
            .with_context(|| format!("writing report to {}", path.display())),
        None => {
            println!("{report}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        return Ok(buf);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Deserialization re-runs validation, so a loaded map is always certified.
fn load_morphism(path: &Path) -> anyhow::Result<ProjMorphism> {
    let text = read_input(path)?;
    let f: ProjMorphism =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(f)
}

fn load_form(path: &Path) -> anyhow::Result<HomogeneousForm> {
    let text = read_input(path)?;
    let form: HomogeneousForm =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(form)
}

/// Accepts "2:1", "(2 : 1)", or bare "2" for an affine point on the line.
fn parse_point(text: &str, dim: usize) -> anyhow::Result<ProjPointQ> {
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    let mut coords: Vec<BigInt> = trimmed
        .split(':')
        .map(|part| BigInt::from_str(part.trim()).map_err(|e| anyhow!("bad coordinate {part:?}: {e}")))
        .collect::<anyhow::Result<_>>()?;
    if coords.len() == 1 && dim == 1 {
        coords.push(BigInt::from(1));
    }
    if coords.len() != dim + 1 {
        bail!("expected {} coordinates, got {}", dim + 1, coords.len());
    }
    Ok(ProjPointQ::from_integers(coords)?)
}

fn certificate_json(cert: &ValidityCertificate) -> serde_json::Value {
    match cert {
        ValidityCertificate::Resultant { value } => json!({
            "kind": "resultant",
            "value": value.to_string(),
        }),
        ValidityCertificate::MacaulayRank(rank) => json!({
            "kind": "macaulay_rank",
            "certificate": rank,
        }),
    }
}

fn point_rows(points: &[ProjPointQ], emit: Emit) -> anyhow::Result<String> {
    Ok(match emit {
        Emit::Json => serde_json::to_string_pretty(points)?,
        Emit::Csv => {
            let mut lines = vec!["point".to_string()];
            lines.extend(points.iter().map(|p| p.to_string()));
            lines.join("\n")
        }
    })
}

fn count_row_json(row: &CountRow) -> serde_json::Value {
    json!({
        "c": row.c,
        "count_m": row.m,
        "count_n": row.n,
        "count_r": row.r,
        "ratio_mn": row.ratio_mn,
        "ratio_rm": row.ratio_rm,
    })
}

fn table_json(table: &CountTable) -> serde_json::Value {
    json!({
        "morphism": table.morphism_hash,
        "tolerance": table.tolerance,
        "timestamp": table.timestamp,
        "rows": table.rows.iter().map(count_row_json).collect::<Vec<_>>(),
    })
}

/// x^2 + k as a self-map of the line, for the family sweep.
fn family_member(k: i64) -> anyhow::Result<ProjMorphism> {
    let f0 = HomogeneousForm::from_terms_i64(2, 2, &[(&[2, 0], 1), (&[0, 2], k)])?;
    let f1 = HomogeneousForm::from_terms_i64(2, 2, &[(&[0, 2], 1)])?;
    Ok(ProjMorphism::new(vec![f0, f1])?)
}

fn parse_family(range: &str) -> anyhow::Result<(i64, i64)> {
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| anyhow!("family range must look like LO..HI, got {range:?}"))?;
    let lo: i64 = lo.trim().parse().context("family lower bound")?;
    let hi: i64 = hi.trim().parse().context("family upper bound")?;
    if lo > hi {
        bail!("empty family range {range:?}");
    }
    Ok((lo, hi))
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    match &cli.command {
        Command::Validate { map } => {
            let f = load_morphism(map)?;
            let body = json!({
                "dim": f.dim(),
                "degree": f.degree(),
                "hash": morphism_hash(&f),
                "certificate": certificate_json(f.certificate()),
            });
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&body)?,
                Emit::Csv => format!(
                    "dim,degree,hash\n{},{},{}",
                    f.dim(),
                    f.degree(),
                    morphism_hash(&f)
                ),
            })
        }
        Command::Apply { map, point } => {
            let f = load_morphism(map)?;
            let x = parse_point(point, f.dim())?;
            let image = f.apply(&x)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&json!({ "image": image }))?,
                Emit::Csv => format!("image\n{image}"),
            })
        }
        Command::Orbit { map, point } => {
            let f = load_morphism(map)?;
            let x = parse_point(point, f.dim())?;
            let record = classify_orbit(&f, &x)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&record)?,
                Emit::Csv => {
                    let class = serde_json::to_string(&record.class)?;
                    let mut lines = vec![format!("# class={class}"), "step,point".into()];
                    lines.extend(
                        record.orbit.iter().enumerate().map(|(i, p)| format!("{i},{p}")),
                    );
                    lines.join("\n")
                }
            })
        }
        Command::Canheight { map, point } => {
            let f = load_morphism(map)?;
            let x = parse_point(point, f.dim())?;
            let est = canonical_height(&f, &x, cli.tol)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&est)?,
                Emit::Csv => format!(
                    "value,error_bound,iterations\n{:.11e},{:.11e},{}",
                    est.value, est.error_bound, est.iterations
                ),
            })
        }
        Command::Preper { map } => {
            let f = load_morphism(map)?;
            let points = preperiodic_points(&f, cli.budget)?;
            point_rows(&points, cli.emit)
        }
        Command::Preimages { map, point } => {
            let f = load_morphism(map)?;
            let y = parse_point(point, f.dim())?;
            let points = rational_preimages(&f, &y)?;
            point_rows(&points, cli.emit)
        }
        Command::Invlimit { map, point, depth } => {
            let text = read_input(map)?;
            let chain: Vec<ProjMorphism> = match serde_json::from_str(&text) {
                Ok(list) => list,
                Err(_) => {
                    let f: ProjMorphism = serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", map.display()))?;
                    vec![f; *depth as usize]
                }
            };
            let first = chain
                .first()
                .ok_or_else(|| anyhow!("the morphism chain is empty"))?;
            let y = parse_point(point, first.dim())?;
            let tree = inverse_limit_tree(&chain, &y)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&tree)?,
                Emit::Csv => {
                    let mut lines = vec!["depth,point".to_string()];
                    fn push(node: &LiftNode, depth: usize, lines: &mut Vec<String>) {
                        lines.push(format!("{depth},{}", node.point));
                        for child in &node.children {
                            push(child, depth + 1, lines);
                        }
                    }
                    push(&tree, 0, &mut lines);
                    lines.join("\n")
                }
            })
        }
        Command::Enumerate { dim, bound } => {
            let required = enumeration_size(*dim, *bound);
            if required > cli.budget {
                return Err(CoreError::BudgetExceeded {
                    required,
                    allowed: cli.budget,
                }
                .into());
            }
            let points = enumerate_points(*dim, *bound);
            point_rows(&points, cli.emit)
        }
        Command::Ffgraph { map, p, r } => {
            let f = load_morphism(map)?;
            let field = FiniteField::new(*p, *r)?;
            let graph = build_graph(&f, &field)?;
            Ok(match cli.emit {
                Emit::Json => {
                    let nodes: Vec<_> = (0..graph.len() as u32)
                        .map(|i| {
                            json!({
                                "point": graph.point(i).to_string(),
                                "successor": graph.successor(i),
                                "tail": graph.tail(i),
                                "period": graph.period(i),
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "p": p,
                        "r": r,
                        "points": nodes,
                        "periodic": graph.periodic_count(),
                        "cycle_structure": graph.cycle_structure(),
                    }))?
                }
                Emit::Csv => {
                    let mut lines = Vec::with_capacity(graph.len() + 2);
                    lines.push(format!(
                        "# p={p},r={r},points={},periodic={}",
                        graph.len(),
                        graph.periodic_count()
                    ));
                    lines.push("point,successor,tail,period".into());
                    for i in 0..graph.len() as u32 {
                        lines.push(format!(
                            "{},{},{},{}",
                            graph.point(i),
                            graph.point(graph.successor(i)),
                            graph.tail(i),
                            graph.period(i)
                        ));
                    }
                    lines.join("\n")
                }
            })
        }
        Command::Twist { map, p, m, rmax } => {
            let f = load_morphism(map)?;
            let mut levels = Vec::new();
            for r in 1..=*rmax {
                let sols = frobenius_twist_solve(&f, *p, *m, r)?;
                levels.push((r, sols));
            }
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(
                    &levels
                        .iter()
                        .map(|(r, sols)| {
                            json!({
                                "r": r,
                                "solutions": sols.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
                            })
                        })
                        .collect::<Vec<_>>(),
                )?,
                Emit::Csv => {
                    let mut lines = vec!["r,point".to_string()];
                    for (r, sols) in &levels {
                        lines.extend(sols.iter().map(|u| format!("{r},{u}")));
                    }
                    lines.join("\n")
                }
            })
        }
        Command::Density { map, p, avoid, rmax } => {
            let f = load_morphism(map)?;
            let form = load_form(avoid)?;
            let witness = density_in_open(&f, *p, &form, *rmax)?;
            Ok(match cli.emit {
                Emit::Json => match &witness {
                    Some(w) => serde_json::to_string_pretty(&json!({
                        "found": true,
                        "r": w.r,
                        "point": w.point.to_string(),
                        "period": w.period,
                    }))?,
                    None => serde_json::to_string_pretty(&json!({
                        "found": false,
                        "rmax": rmax,
                    }))?,
                },
                Emit::Csv => match &witness {
                    Some(w) => format!("found,r,point,period\ntrue,{},{},{}", w.r, w.point, w.period),
                    None => "found,r,point,period\nfalse,,,".to_string(),
                },
            })
        }
        Command::Lattes { a, b } => {
            let curve = WeierstrassCurve::new(*a, *b)?;
            let f = lattes_map(&curve)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&f)?,
                Emit::Csv => format!("map\n{f}"),
            })
        }
        Command::Extend { a, b, radius } => {
            let curve = WeierstrassCurve::new(*a, *b)?;
            let ext = extend_duplication(&curve, *radius)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&json!({
                    "forms": ext.forms,
                    "linear_correctors": ext.linear_correctors,
                    "certificate": certificate_json(&ext.certificate),
                    "morphism": ext.morphism()?,
                }))?,
                Emit::Csv => {
                    let mut lines = vec!["index,form".to_string()];
                    for (i, form) in ext.forms.iter().enumerate() {
                        lines.push(format!("{i},{form}"));
                    }
                    lines.join("\n")
                }
            })
        }
        Command::Genus { dim, deg } => {
            let (genus, feasible) = genus_feasibility(*dim, *deg);
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&json!({
                    "dim": dim,
                    "deg": deg,
                    "genus": genus,
                    "feasible": feasible,
                }))?,
                Emit::Csv => format!("dim,deg,genus,feasible\n{dim},{deg},{genus},{feasible}"),
            })
        }
        Command::Counts { map, c } => {
            let f = load_morphism(map)?;
            let mut cutoffs = c.clone();
            cutoffs.sort_by(|a, b| a.total_cmp(b));
            let table = ratio_table(&f, &cutoffs, cli.tol, cli.budget)?;
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&table_json(&table))?,
                Emit::Csv => emit_csv(&table),
            })
        }
        Command::Ratios { family, c } => {
            let (lo, hi) = parse_family(family)?;
            let mut cutoffs = c.clone();
            cutoffs.sort_by(|a, b| a.total_cmp(b));
            let mut members = Vec::new();
            for k in lo..=hi {
                let f = family_member(k)?;
                members.push((k, ratio_table(&f, &cutoffs, cli.tol, cli.budget)?));
            }
            // Per-cutoff family maximum of the R count: the honest
            // desk-scale probe of the supremum over all maps.
            let family_max: Vec<_> = cutoffs
                .iter()
                .enumerate()
                .map(|(i, &cutoff)| {
                    let best = members
                        .iter()
                        .filter_map(|(k, t)| t.rows[i].r.map(|r| (r, *k)))
                        .max();
                    (cutoff, best)
                })
                .collect();
            Ok(match cli.emit {
                Emit::Json => serde_json::to_string_pretty(&json!({
                    "family": "x^2 + k",
                    "members": members
                        .iter()
                        .map(|(k, t)| json!({ "k": k, "table": table_json(t) }))
                        .collect::<Vec<_>>(),
                    "family_max_r": family_max
                        .iter()
                        .map(|(cutoff, best)| {
                            json!({
                                "c": cutoff,
                                "max_r": best.map(|(r, _)| r),
                                "argmax_k": best.map(|(_, k)| k),
                            })
                        })
                        .collect::<Vec<_>>(),
                }))?,
                Emit::Csv => {
                    let mut lines =
                        vec!["k,c,count_m,count_n,count_r,ratio_mn,ratio_rm".to_string()];
                    for (k, t) in &members {
                        for row in &t.rows {
                            lines.push(format!(
                                "{k},{:.11e},{},{},{},{},{}",
                                row.c,
                                opt_count(row.m),
                                opt_count(row.n),
                                opt_count(row.r),
                                opt_real(row.ratio_mn),
                                opt_real(row.ratio_rm),
                            ));
                        }
                    }
                    lines.push("c,family_max_r,argmax_k".into());
                    for (cutoff, best) in &family_max {
                        match best {
                            Some((r, k)) => lines.push(format!("{cutoff:.11e},{r},{k}")),
                            None => lines.push(format!("{cutoff:.11e},,")),
                        }
                    }
                    lines.join("\n")
                }
            })
        }
    }
}

fn opt_count(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_real(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.11e}")).unwrap_or_default()
}
