//! `admg`: separation queries, interventions, do-calculus premises, Markov
//! checks and structure learning from the command line.
//!
//! Exit codes: 0 success or positive answer, 1 negative answer, 2 usage or
//! input error, 3 a checked invariant failed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use admg_core::docalc::{check_derivation, intervene, parse_script, rule_applicable, Rule};
use admg_core::format::{format_node_set, model_line, parse_graph, parse_node_set, serialize_graph};
use admg_core::learner::{export_asp, learn, parse_constraints, DialectChoice, LearnProblem};
use admg_core::markov::{
    amp_statements, ordered_local_statements, ordered_pairwise_statements, verify_statements, AmpFlavor,
    CiStatement, OrderedContext,
};
use admg_core::sem::{ci_test_sets, global_markov_rows, magnify, random_sem};
use admg_core::separation::{route_reachable, separated, Criterion, SeparationQuery};
use admg_core::{MixedGraph, NodeSet};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "admg", version, about = "Acyclic directed mixed graph toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DialectArg {
    Alt,
    Orig,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Local,
    Pairwise,
    AmpBlock,
    AmpLocal,
    AmpPairwise,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Is x separated from y given z? Exit 0 if separated, 1 if connected.
    Sep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        criterion: u8,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        z: String,
    },
    /// Compares the four separation criteria on every singleton query.
    EquivCheck {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Prints the graph with explicit error nodes.
    Magnify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Prints the graph after intervening on x.
    Intervene {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// Checks the premise of a do-calculus rule. Exit 0 if it holds.
    Rule {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        rule: u8,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
        #[arg(long, default_value = "")]
        z: String,
        #[arg(long, default_value = "")]
        w: String,
    },
    /// Replays a derivation script, one `rule <k> x=.. y=.. z=.. w=..` per line.
    Derive {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Checks the statements of a Markov property against separation and a
    /// random linear Gaussian model. Exit 1 if any statement fails.
    MarkovVerify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        /// Consistent ordering for the ordered properties, e.g. `2,1,3`.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Partial correlations of every separation under a random linear
    /// Gaussian model. Exit 3 if any separation is not an independence.
    SemCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only `all` is supported.
        #[arg(long, default_value = "all")]
        queries: String,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Finds every minimum-penalty graph for a constraint file.
    Learn {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long, value_enum, default_value_t = DialectArg::Alt)]
        dialect: DialectArg,
        #[arg(long, default_value_t = admg_core::learner::DEFAULT_MAX_N)]
        max_n: usize,
        /// Also writes the answer set program to this path.
        #[arg(long)]
        emit_asp: Option<PathBuf>,
    },
    /// Prints the answer set program for a constraint file.
    ExportAsp {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long, value_enum, default_value_t = DialectArg::Alt)]
        dialect: DialectArg,
    },
}

struct Fail {
    code: u8,
    msg: String,
}

fn usage(msg: impl ToString) -> Fail {
    Fail {
        code: 2,
        msg: msg.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MixedGraph, Fail> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn set(g: &MixedGraph, s: &str) -> Result<NodeSet, Fail> {
    parse_node_set(g, s).map_err(usage)
}

fn load_problem(path: &Path, dialect: DialectArg, max_n: usize) -> Result<LearnProblem, Fail> {
    let text = read(path)?;
    let mut p = parse_constraints(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    p.dialects = match dialect {
        DialectArg::Alt => DialectChoice::Alternative,
        DialectArg::Orig => DialectChoice::Original,
        DialectArg::Both => DialectChoice::Both,
    };
    p.max_n = max_n;
    Ok(p)
}

fn statement_text(g: &MixedGraph, s: &CiStatement) -> String {
    format!(
        "{} _||_ {} | {}",
        format_node_set(g, s.x),
        format_node_set(g, s.y),
        format_node_set(g, s.z)
    )
}

fn run(cli: Cli, out: &mut String) -> Result<u8, Fail> {
    let json = cli.format == Format::Json;
    match cli.cmd {
        Cmd::Sep {
            graph,
            criterion,
            x,
            y,
            z,
        } => {
            let g = load_graph(&graph)?;
            let q = SeparationQuery::new(set(&g, &x)?, set(&g, &y)?, set(&g, &z)?).map_err(usage)?;
            let c = Criterion::from_number(criterion).expect("range checked by clap");
            let sep = separated(&g, &q, c).map_err(usage)?;
            if json {
                let v = json!({
                    "criterion": criterion,
                    "x": format_node_set(&g, q.x),
                    "y": format_node_set(&g, q.y),
                    "z": format_node_set(&g, q.z),
                    "separated": sep,
                });
                let _ = writeln!(out, "{v}");
            } else {
                let _ = writeln!(out, "{}", if sep { "separated" } else { "connected" });
            }
            Ok(if sep { 0 } else { 1 })
        }
        Cmd::EquivCheck { graph } => {
            let g = load_graph(&graph)?;
            g.require_alternative().map_err(usage)?;
            let mut checked = 0;
            let mut bad = Vec::new();
            for x in g.nodes() {
                for y in g.nodes().iter().filter(|&y| y > x) {
                    for z in g.nodes().without(x).without(y).subsets() {
                        let q = SeparationQuery::pair(x, y, z).map_err(usage)?;
                        let r = Criterion::ALL.map(|c| separated(&g, &q, c));
                        let r: Vec<bool> = r.into_iter().collect::<Result<_, _>>().map_err(usage)?;
                        checked += 1;
                        if r.iter().any(|&b| b != r[0]) {
                            bad.push((q, r));
                        }
                    }
                }
            }
            if json {
                let rows: Vec<_> = bad
                    .iter()
                    .map(|(q, r)| {
                        json!({
                            "x": format_node_set(&g, q.x),
                            "y": format_node_set(&g, q.y),
                            "z": format_node_set(&g, q.z),
                            "separated": r,
                        })
                    })
                    .collect();
                let _ = writeln!(out, "{}", json!({"queries": checked, "disagreements": rows}));
            } else {
                let _ = writeln!(out, "{checked} queries, {} disagreements", bad.len());
                for (q, r) in &bad {
                    let _ = writeln!(
                        out,
                        "{} {} | {}: {r:?}",
                        format_node_set(&g, q.x),
                        format_node_set(&g, q.y),
                        format_node_set(&g, q.z)
                    );
                }
            }
            Ok(if bad.is_empty() { 0 } else { 3 })
        }
        Cmd::Magnify { graph } => {
            let g = load_graph(&graph)?;
            out.push_str(&serialize_graph(&magnify(&g).map_err(usage)?));
            Ok(0)
        }
        Cmd::Intervene { graph, x } => {
            let g = load_graph(&graph)?;
            let h = intervene(&g, set(&g, &x)?).map_err(usage)?;
            out.push_str(&serialize_graph(&h));
            Ok(0)
        }
        Cmd::Rule {
            graph,
            rule,
            x,
            y,
            z,
            w,
        } => {
            let g = load_graph(&graph)?;
            let r = Rule::from_number(rule).map_err(usage)?;
            let ok = rule_applicable(&g, r, set(&g, &x)?, set(&g, &y)?, set(&g, &z)?, set(&g, &w)?)
                .map_err(usage)?;
            if json {
                let _ = writeln!(out, "{}", json!({"rule": rule, "applicable": ok}));
            } else {
                let _ = writeln!(out, "{}", if ok { "applicable" } else { "not applicable" });
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Derive { graph, script } => {
            let g = load_graph(&graph)?;
            let steps = parse_script(&g, &read(&script)?).map_err(usage)?;
            let report = check_derivation(&g, &steps).map_err(usage)?;
            if json {
                let v = json!({
                    "steps": steps.len(),
                    "outcomes": report.outcomes,
                    "first_failure": report.first_failure.map(|i| i + 1),
                });
                let _ = writeln!(out, "{v}");
            } else {
                for (i, ok) in report.outcomes.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "step {} (rule {}): {}",
                        i + 1,
                        steps[i].rule,
                        if *ok { "ok" } else { "premise fails" }
                    );
                }
                match report.first_failure {
                    None => {
                        let _ = writeln!(out, "derivation valid");
                    }
                    Some(i) => {
                        let _ = writeln!(out, "derivation fails at step {}", i + 1);
                    }
                }
            }
            Ok(if report.success() { 0 } else { 1 })
        }
        Cmd::MarkovVerify {
            graph,
            property,
            order,
            seed,
            tol,
        } => {
            let g = load_graph(&graph)?;
            let stmts = match property {
                Property::Local | Property::Pairwise => {
                    let ctx = match order {
                        None => OrderedContext::with_default_order(g.clone()),
                        Some(o) => {
                            let ids = o
                                .split(',')
                                .map(|t| admg_core::format::resolve_node(&g, t))
                                .collect::<Result<Vec<_>, _>>()
                                .map_err(usage)?;
                            OrderedContext::new(g.clone(), ids)
                        }
                    }
                    .map_err(usage)?;
                    if property == Property::Local {
                        ordered_local_statements(&ctx)
                    } else {
                        ordered_pairwise_statements(&ctx)
                    }
                }
                Property::AmpBlock => amp_statements(&g, AmpFlavor::BlockRecursive),
                Property::AmpLocal => amp_statements(&g, AmpFlavor::Local),
                Property::AmpPairwise => amp_statements(&g, AmpFlavor::Pairwise),
            }
            .map_err(usage)?;
            let sigma = random_sem(&g, seed).map_err(usage)?.implied_covariance();
            let not_sep = verify_statements(&stmts, |s| route_reachable(&g, s.x, s.z).is_disjoint(s.y));
            let mut gauss_err = None;
            let not_indep = verify_statements(&stmts, |s| {
                ci_test_sets(&sigma, s.x, s.y, s.z, tol).unwrap_or_else(|e| {
                    gauss_err.get_or_insert(e);
                    false
                })
            });
            if let Some(e) = gauss_err {
                return Err(Fail {
                    code: 3,
                    msg: e.to_string(),
                });
            }
            if json {
                let v = json!({
                    "statements": stmts.len(),
                    "not_separations": not_sep.iter().map(|s| statement_text(&g, s)).collect::<Vec<_>>(),
                    "not_independences": not_indep.iter().map(|s| statement_text(&g, s)).collect::<Vec<_>>(),
                });
                let _ = writeln!(out, "{v}");
            } else {
                let _ = writeln!(
                    out,
                    "{} statements, {} not separations, {} not Gaussian independences",
                    stmts.len(),
                    not_sep.len(),
                    not_indep.len()
                );
                for s in &not_sep {
                    let _ = writeln!(out, "not separated: {}", statement_text(&g, s));
                }
                for s in &not_indep {
                    let _ = writeln!(out, "not independent: {}", statement_text(&g, s));
                }
            }
            Ok(if not_sep.is_empty() && not_indep.is_empty() { 0 } else { 1 })
        }
        Cmd::SemCheck {
            graph,
            seed,
            queries,
            tol,
        } => {
            if queries != "all" {
                return Err(usage("--queries supports only `all`"));
            }
            let g = load_graph(&graph)?;
            let sem = random_sem(&g, seed).map_err(usage)?;
            let rows = global_markov_rows(&sem, tol).map_err(|e| Fail {
                code: 3,
                msg: e.to_string(),
            })?;
            let failed = rows.iter().filter(|r| !r.holds).count();
            if json {
                let v: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "x": g.label(r.x),
                            "y": g.label(r.y),
                            "z": format_node_set(&g, r.z),
                            "partial_correlation": r.partial_correlation,
                            "pass": r.holds,
                        })
                    })
                    .collect();
                let _ = writeln!(out, "{}", json!({"rows": v, "failures": failed}));
            } else {
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "{} {} | {}\t{:.3e}\t{}",
                        g.label(r.x),
                        g.label(r.y),
                        format_node_set(&g, r.z),
                        r.partial_correlation,
                        if r.holds { "pass" } else { "FAIL" }
                    );
                }
                let _ = writeln!(out, "{} separations, {failed} failures", rows.len());
            }
            Ok(if failed == 0 { 0 } else { 3 })
        }
        Cmd::Learn {
            constraints,
            dialect,
            max_n,
            emit_asp,
        } => {
            let p = load_problem(&constraints, dialect, max_n)?;
            if let Some(path) = emit_asp {
                fs::write(&path, export_asp(&p)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            let r = learn(&p).map_err(|e| match e {
                admg_core::learner::LearnError::NoFeasibleModel => Fail {
                    code: 1,
                    msg: e.to_string(),
                },
                e => usage(e),
            })?;
            let models: Vec<String> = r.models.iter().map(model_line).collect();
            if json {
                let v = json!({"optimal_score": r.optimal_score, "models": models});
                let _ = writeln!(out, "{v}");
            } else {
                let _ = writeln!(out, "optimal score {} ({} models)", r.optimal_score, models.len());
                for m in models {
                    let _ = writeln!(out, "{m}");
                }
            }
            Ok(0)
        }
        Cmd::ExportAsp {
            constraints,
            dialect,
        } => {
            let p = load_problem(&constraints, dialect, usize::MAX)?;
            out.push_str(&export_asp(&p));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(cli, &mut out) {
        Ok(code) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            print!("{out}");
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
