// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end. Every verb is a thin adapter over the library;
//! data goes to the output stream (or `--out`), diagnostics to the error
//! stream.
//!
//! Exit status: 0 on success, 1 on a domain error (printed as
//! `error: <Name>: <message>`), 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::entanglement::{
    bipartite_entanglement, strata_entanglement, write_sweep_csv, Convention, CouplingConfig,
    EntanglementReport, LogBase, Partition,
};
use crate::error::Error;
use crate::families::Family;
use crate::format::{round_json, sig};
use crate::graph::{srg_params, Graph};
use crate::graph6::{parse_graph6, write_graph6_lines};
use crate::signature::{
    a12_signature, canonical_signature, distinguish, scan_catalog, A12Signature, Verdict,
    DEFAULT_GROUPING_TOL,
};
use crate::stratification::{
    block_diagonalize, extract_blocks, first_stratum_projection, stratify,
};

/// Environment variable capping the worker count (0 or unset: automatic).
pub const THREADS_ENV: &str = "SRGNET_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "srgnet",
    version,
    about = "Entanglement and spectral signatures of strongly regular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    CompleteBipartite,
    CompleteMultipartite,
    CocktailParty,
    Triangular,
    Lattice,
    LatinSquare,
    Kneser,
    Petersen,
    Shrikhande,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Input {
    /// graph6 file (one graph per line).
    file: PathBuf,
    /// Line of the file to use.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Cut {
    /// Strata bipartition: 1:23, 12:3 or 13:2.
    #[arg(long)]
    partition: Option<Partition>,
    /// Explicit vertex set for side A, e.g. 0,4,7.
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct Physics {
    /// Root vertex for strata partitions.
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long = "log-base", default_value = "nats")]
    log_base: LogBase,
    #[arg(long, default_value = "paper")]
    convention: Convention,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a family instance as graph6.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyName,
        /// Size parameter (m, q or nu depending on the family; part size for
        /// complete-multipartite).
        #[arg(long)]
        nu: Option<usize>,
        /// Number of parts for complete-multipartite.
        #[arg(long)]
        parts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify strong regularity and print the parameters of every graph.
    Check {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Distance partition and block diagonalization from a root.
    Stratify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Entanglement entropy across a cut.
    Entropy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        g: f64,
        #[command(flatten)]
        cut: Cut,
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        output: Output,
    },
    /// Singular-value signature of the stratum coupling block (all roots
    /// unless --root is given).
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        root: Option<usize>,
        /// Relative tolerance for grouping multiplicities.
        #[arg(long = "group-tol", default_value_t = DEFAULT_GROUPING_TOL)]
        group_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the signatures of two graphs.
    Distinguish {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Partition a catalog into signature classes.
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Entropy over a logarithmic grid of couplings.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[arg(long = "g-min")]
        g_min: f64,
        #[arg(long = "g-max")]
        g_max: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[command(flatten)]
        cut: Cut,
        #[command(flatten)]
        physics: Physics,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Rendered {
    text: String,
    path: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the verb.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = thread_pool()
        .and_then(|pool| pool.install(|| execute(cli.command)))
        .and_then(|r| emit(out, r.path.as_deref(), &r.text));
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {}: {}", e.name(), e);
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: Io: {msg}");
            1
        }
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Failure::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Io(e.to_string()))
}

fn read_graphs(path: &Path) -> CliResult<Vec<Graph>> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_graph6(&bytes)?)
}

fn read_one(input: &Input) -> CliResult<Graph> {
    let mut graphs = read_graphs(&input.file)?;
    if input.index >= graphs.len() {
        return Err(Failure::Usage(format!(
            "--index {} out of range: {} has {} graph(s)",
            input.index,
            input.file.display(),
            graphs.len()
        )));
    }
    Ok(graphs.swap_remove(input.index))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("output serializes");
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json renders");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| Failure::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn family_from(name: FamilyName, nu: Option<usize>, parts: Option<usize>) -> CliResult<Family> {
    let need =
        |flag: &str| Failure::Usage(format!("--family {name:?} requires {flag}").to_lowercase());
    let nu_req = || nu.ok_or_else(|| need("--nu"));
    Ok(match name {
        FamilyName::CompleteBipartite => Family::CompleteBipartite(nu_req()?),
        FamilyName::CompleteMultipartite => Family::CompleteMultipartite {
            parts: parts.ok_or_else(|| need("--parts"))?,
            part_size: nu_req()?,
        },
        FamilyName::CocktailParty => Family::CocktailParty(nu_req()?),
        FamilyName::Triangular => Family::Triangular(nu_req()?),
        FamilyName::Lattice => Family::Lattice(nu_req()?),
        FamilyName::LatinSquare => Family::LatinSquareCyclic(nu_req()?),
        FamilyName::Kneser => Family::Kneser62,
        FamilyName::Petersen => Family::Petersen,
        FamilyName::Shrikhande => Family::Shrikhande,
    })
}

fn coupling(g: f64, physics: &Physics) -> CliResult<CouplingConfig> {
    Ok(CouplingConfig::new(g)?
        .with_log_base(physics.log_base)
        .with_convention(physics.convention))
}

fn entangle(
    graph: &Graph,
    cut: &Cut,
    physics: &Physics,
    config: &CouplingConfig,
) -> CliResult<EntanglementReport> {
    Ok(match (&cut.partition, &cut.subset) {
        (Some(p), None) => strata_entanglement(graph, physics.root, *p, config)?,
        (None, Some(s)) => bipartite_entanglement(graph, s, config)?,
        _ => unreachable!("clap enforces exactly one of --partition and --subset"),
    })
}

fn signature_pairs(s: &A12Signature) -> Value {
    Value::Array(s.values.iter().map(|&(v, m)| json!([v, m])).collect())
}

fn execute(command: Command) -> CliResult<Rendered> {
    match command {
        Command::Gen {
            family,
            nu,
            parts,
            out: path,
        } => {
            let graph = family_from(family, nu, parts)?.generate()?;
            let text = write_graph6_lines([&graph])?;
            Ok(Rendered { text, path })
        }
        Command::Check { file, output } => {
            let params = read_graphs(&file)?
                .iter()
                .map(srg_params)
                .collect::<crate::Result<Vec<_>>>()?;
            let text = match output.format {
                Format::Text => params.iter().map(|p| format!("{p}\n")).collect(),
                Format::Json => json_text(&params),
                Format::Csv => csv_text(
                    &["graph", "n", "kappa", "lambda", "mu"],
                    params
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            [i, p.n, p.kappa, p.lambda, p.mu]
                                .iter()
                                .map(|x| x.to_string())
                                .collect()
                        })
                        .collect(),
                )?,
            };
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Stratify {
            input,
            root,
            output,
        } => {
            let graph = read_one(&input)?;
            let strat = stratify(&graph, root)?;
            let blocks = extract_blocks(&graph, &strat)?;
            let first = first_stratum_projection(&graph, &strat)?;
            let bd = block_diagonalize(&blocks)?;
            let text = match output.format {
                Format::Json => json_text(&json!({
                    "params": blocks.params,
                    "root": root,
                    "strata": strat.strata,
                    "first_stratum_block": first.m,
                    "pairs": bd.pairs,
                    "singlets_near": bd.singlets2,
                    "singlets_far": bd.singlets3,
                })),
                Format::Text => {
                    let mut s = format!("{}\nroot {root}\n", blocks.params);
                    let sizes: Vec<String> =
                        strat.valencies().iter().map(|v| v.to_string()).collect();
                    writeln!(s, "strata sizes {}", sizes.join(" ")).unwrap();
                    for row in first.m {
                        let r: Vec<String> = row.iter().map(|&x| sig(x)).collect();
                        writeln!(s, "first {}", r.join(" ")).unwrap();
                    }
                    for p in &bd.pairs {
                        writeln!(
                            s,
                            "pair {} {} {} x{}",
                            sig(p.lambda1),
                            sig(p.lambda2),
                            sig(p.lambda12),
                            p.multiplicity
                        )
                        .unwrap();
                    }
                    for x in &bd.singlets2 {
                        writeln!(s, "singlet near {} x{}", sig(x.value), x.multiplicity).unwrap();
                    }
                    for x in &bd.singlets3 {
                        writeln!(s, "singlet far {} x{}", sig(x.value), x.multiplicity).unwrap();
                    }
                    s
                }
                Format::Csv => {
                    let mut rows = Vec::new();
                    for p in &bd.pairs {
                        rows.push(vec![
                            "pair".into(),
                            sig(p.lambda1),
                            sig(p.lambda2),
                            sig(p.lambda12),
                            p.multiplicity.to_string(),
                        ]);
                    }
                    for (kind, list) in [("near", &bd.singlets2), ("far", &bd.singlets3)] {
                        for x in list {
                            rows.push(vec![
                                kind.into(),
                                sig(x.value),
                                String::new(),
                                String::new(),
                                x.multiplicity.to_string(),
                            ]);
                        }
                    }
                    csv_text(
                        &["kind", "lambda1", "lambda2", "lambda12", "multiplicity"],
                        rows,
                    )?
                }
            };
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Entropy {
            input,
            g,
            cut,
            physics,
            output,
        } => {
            let graph = read_one(&input)?;
            let config = coupling(g, &physics)?;
            let report = entangle(&graph, &cut, &physics, &config)?;
            let text = match output.format {
                Format::Json => json_text(&report),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_sweep_csv(&mut buf, std::slice::from_ref(&report))?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
                Format::Text => {
                    let mut s = format!("total_entropy {}\n", sig(report.total_entropy));
                    for m in &report.modes {
                        writeln!(
                            s,
                            "mode d={} gamma={} entropy={}",
                            sig(m.d),
                            sig(m.gamma),
                            sig(m.entropy)
                        )
                        .unwrap();
                    }
                    s
                }
            };
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Spectrum {
            input,
            root,
            group_tol,
            tol,
            output,
        } => {
            let graph = read_one(&input)?;
            let sigs = match root {
                Some(r) => vec![a12_signature(&graph, r, group_tol)?],
                None => canonical_signature(&graph, tol)?,
            };
            let text = match output.format {
                Format::Text => sigs.iter().map(|s| format!("{s}\n")).collect(),
                Format::Json => {
                    let list: Vec<Value> = sigs
                        .iter()
                        .map(|s| json!({"root": s.root, "signature": signature_pairs(s)}))
                        .collect();
                    let v = match root {
                        Some(_) => {
                            json!({"params": sigs[0].params, "root": sigs[0].root, "signature": signature_pairs(&sigs[0])})
                        }
                        None => json!({"params": sigs[0].params, "signatures": list}),
                    };
                    json_text(&v)
                }
                Format::Csv => csv_text(
                    &["root", "value", "multiplicity"],
                    sigs.iter()
                        .flat_map(|s| {
                            s.values
                                .iter()
                                .map(move |&(v, m)| vec![s.root.to_string(), sig(v), m.to_string()])
                        })
                        .collect(),
                )?,
            };
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Distinguish { a, b, tol, output } => {
            let ga = read_one(&Input { file: a, index: 0 })?;
            let gb = read_one(&Input { file: b, index: 0 })?;
            let verdict = distinguish(&ga, &gb, tol)?;
            let text = render_verdict(&verdict, output.format)?;
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Scan { file, tol, output } => {
            let scan = scan_catalog(&read_graphs(&file)?, tol)?;
            let text = match output.format {
                Format::Json => json_text(&scan.to_json()),
                Format::Csv => {
                    let mut buf = Vec::new();
                    scan.write_csv(&mut buf)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
                Format::Text => {
                    let mut s = format!("{} classes: {}\n", scan.params, scan.classes.len());
                    for (i, c) in scan.classes.iter().enumerate() {
                        let members: Vec<String> =
                            c.members.iter().map(|m| m.to_string()).collect();
                        let sigs: Vec<String> =
                            c.signatures.iter().map(|x| x.to_string()).collect();
                        writeln!(
                            s,
                            "class {i} size {} members {} signature {}",
                            c.members.len(),
                            members.join(","),
                            sigs.join(" | ")
                        )
                        .unwrap();
                    }
                    s
                }
            };
            Ok(Rendered {
                text,
                path: output.out,
            })
        }
        Command::Sweep {
            input,
            g_min,
            g_max,
            points,
            cut,
            physics,
            format,
            out: path,
        } => {
            if !(g_min > 0.0 && g_max >= g_min && g_max.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--g-min/--g-max must satisfy 0 < g-min <= g-max, got {g_min}, {g_max}"
                )));
            }
            if points < 1 || (points == 1 && g_min != g_max) {
                return Err(Failure::Usage(format!(
                    "--points must be >= 2 for a range, got {points}"
                )));
            }
            let graph = read_one(&input)?;
            let grid = log_grid(g_min, g_max, points);
            use rayon::prelude::*;
            let reports = grid
                .par_iter()
                .map(|&g| {
                    let config = coupling(g, &physics)?;
                    entangle(&graph, &cut, &physics, &config)
                })
                .collect::<CliResult<Vec<_>>>()?;
            let text = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_sweep_csv(&mut buf, &reports)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
                Format::Json => json_text(&reports),
                Format::Text => reports
                    .iter()
                    .map(|r| format!("{} {}\n", sig(r.g), sig(r.total_entropy)))
                    .collect(),
            };
            Ok(Rendered { text, path })
        }
    }
}

/// `points` values from `lo` to `hi`, evenly spaced in `ln g`, ascending.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == points - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

fn render_verdict(v: &Verdict, format: Format) -> CliResult<String> {
    let entry = |e: Option<(f64, usize)>| e.map(|(x, m)| json!([x, m])).unwrap_or(Value::Null);
    let witness = v
        .witness
        .as_ref()
        .map(|w| json!({"a": entry(w.a), "b": entry(w.b)}))
        .unwrap_or(Value::Null);
    Ok(match format {
        Format::Json => json_text(&json!({
            "outcome": v.outcome,
            "message": v.outcome.to_string(),
            "params": [v.params.0, v.params.1],
            "witness": witness,
            "signatures": [
                v.signatures.0.iter().map(signature_pairs).collect::<Vec<_>>(),
                v.signatures.1.iter().map(signature_pairs).collect::<Vec<_>>(),
            ],
        })),
        Format::Csv => {
            let cell = |e: Option<(f64, usize)>| {
                e.map(|(x, m)| (sig(x), m.to_string())).unwrap_or_default()
            };
            let (wa, wb) = v
                .witness
                .as_ref()
                .map(|w| (cell(w.a), cell(w.b)))
                .unwrap_or_default();
            csv_text(
                &[
                    "outcome",
                    "witness_a_value",
                    "witness_a_mult",
                    "witness_b_value",
                    "witness_b_mult",
                ],
                vec![vec![format!("{:?}", v.outcome), wa.0, wa.1, wb.0, wb.1]],
            )?
        }
        Format::Text => {
            let mut s = format!("{}\n", v.outcome);
            if v.outcome == crate::signature::Outcome::ParameterMismatch {
                writeln!(s, "a {} b {}", v.params.0, v.params.1).unwrap();
            }
            if let Some(w) = &v.witness {
                let show = |e: Option<(f64, usize)>| {
                    e.map(|(x, m)| format!("{}:{m}", sig(x)))
                        .unwrap_or("-".into())
                };
                writeln!(s, "witness a {} b {}", show(w.a), show(w.b)).unwrap();
            }
            s
        }
    })
}
