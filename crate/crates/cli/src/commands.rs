use std::path::Path;

use poslab::engine::Route;
use poslab::graphcodes::{
    bruteforce_max_code_with, code_density_bound, enumerate_copies, fourier_coefficient, indicator_spectrum,
    GraphVector, DEFAULT_CODE_NODES,
};
use poslab::indpoly::{certify_nonpositive_odd, default_tolerance, independence_polynomial, levi_nonpositivity, smallest_root_bracket};
use poslab::kernels::{density_with, kernel_of, KernelFile};
use poslab::quasi::{build_hq, hq_pair_intersection_check, q_vanishing, SubsetFamily};
use poslab::rational;
use poslab::sidorenko::{cycle_demo, grid_demo, minimize_density, MinimizeOptions};
use poslab::structures::{detect_stable_involution, named};
use poslab::tournaments::{copy_probability_exact, mc_density};
use poslab::{Error, Hypergraph, Result, StepKernel};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{Cli, Command, Format};

pub fn run(cli: &Cli, cmd: &Command) -> Result<Vec<String>> {
    if cli.format == Format::Csv && !matches!(cmd, Command::McDensity { .. } | Command::CodeSpectrum { .. }) {
        return Err(Error::Precondition("csv output is only available for mc-density and code-spectrum".into()));
    }
    match cmd {
        Command::Density { kernel, target } => {
            let (h, _) = load_graph(cli)?;
            let w = match (kernel, target) {
                (Some(path), _) => StepKernel::from_json(&serde_json::from_str::<KernelFile>(&read(path)?)?)?,
                (None, Some(t)) => kernel_of(&load_spec(t)?)?,
                (None, None) => return Err(Error::Precondition("density needs --kernel or --target".into())),
            };
            let budget = cli.budget.map_or(poslab::engine::DEFAULT_BUDGET, |b| b as f64);
            let t = density_with(&h, &w, Route::Auto, budget)?;
            line(record("density", Some(&h), json!({ "kernel": w, "density": rational::to_string(&t) })))
        }
        Command::Indpoly => {
            let (g, _) = load_graph(cli)?;
            let p = independence_polynomial(&g)?;
            let tol = match &cli.tol {
                Some(s) => rational::parse(s)?,
                None => default_tolerance(),
            };
            let bracket = if g.edge_count() > 0 { Some(smallest_root_bracket(&p, &tol)?) } else { None };
            line(record("indpoly", Some(&g), json!({ "polynomial": p, "bracket": bracket })))
        }
        Command::CertifyOdd => {
            let (g, _) = load_graph(cli)?;
            line(record("certify-odd", Some(&g), to_value(&certify_nonpositive_odd(&g)?)))
        }
        Command::Levi => {
            let (h, _) = load_graph(cli)?;
            line(record("levi", Some(&h), to_value(&levi_nonpositivity(&h)?)))
        }
        Command::Qvanish { family } => {
            let (h, _) = load_graph(cli)?;
            let q = SubsetFamily::from_json(h.uniformity(), family)?;
            let cert = q_vanishing(&h, &q)?;
            line(record("qvanish", Some(&h), json!({ "family": q.sets(), "certificate": cert })))
        }
        Command::BuildHq { r, family } => {
            let q = SubsetFamily::from_json(*r, family)?;
            let hq = build_hq(*r, &q)?;
            let ordered = hq_pair_intersection_check(&hq);
            line(record("build-hq", Some(&hq), json!({ "family": q.sets(), "pair_intersection_order": ordered })))
        }
        Command::CopyProb => {
            let (h, _) = load_graph(cli)?;
            let p = copy_probability_exact(&h)?;
            let mut body = to_value(&p);
            body["numerator"] = json!(p.probability.numer().to_string());
            body["denominator"] = json!(p.probability.denom().to_string());
            line(record("copy-prob", Some(&h), body))
        }
        Command::McDensity { n } => {
            let (h, name) = load_graph(cli)?;
            let seed = require_seed(cli)?;
            let est = mc_density(&h, *n, cli.samples.unwrap_or(100_000), seed)?;
            match cli.format {
                Format::Csv => Ok(vec![
                    "H-name,r,n,samples,estimate,stderr,seed".into(),
                    format!("{name},{},{},{},{},{},{}", est.r, est.n, est.samples, est.estimate, est.stderr, est.seed),
                ]),
                Format::Json => {
                    let mut body = to_value(&est);
                    body["name"] = json!(name);
                    line(record("mc-density", Some(&h), body))
                }
            }
        }
        Command::Minimize { parts, restarts, iterations } => {
            let (h, _) = load_graph(cli)?;
            let opts = MinimizeOptions {
                parts: *parts,
                restarts: *restarts,
                iterations: *iterations,
                seed: require_seed(cli)?,
                ..Default::default()
            };
            line(record("minimize", Some(&h), to_value(&minimize_density(&h, &opts)?)))
        }
        Command::CycleDemo { r, length, n } => {
            let report = cycle_demo(*r, *length, *n, require_seed(cli)?)?;
            eprint!("{}", report.summary());
            let mut body = to_value(&report);
            body["summary"] = json!(report.summary());
            line(record("cycle-demo", None, body))
        }
        Command::GridDemo { r, search } => {
            let opts = if *search {
                Some(MinimizeOptions { seed: require_seed(cli)?, ..Default::default() })
            } else {
                None
            };
            line(record("grid-demo", None, to_value(&grid_demo(*r, opts.as_ref())?)))
        }
        Command::CodeSpectrum { n, at } => {
            let (h, _) = load_graph(cli)?;
            if let Some(hex) = at {
                let x = GraphVector::from_hex(hex)?;
                if x.n() != *n {
                    return Err(Error::Precondition(format!("vector has n = {}, expected {n}", x.n())));
                }
                let copies = enumerate_copies(&h, *n)?;
                let c = fourier_coefficient(&copies, &x);
                return match cli.format {
                    Format::Csv => Ok(vec!["x,coefficient".into(), format!("{hex},{}", rational::to_string(&c))]),
                    Format::Json => line(record(
                        "code-spectrum",
                        Some(&h),
                        json!({ "n": n, "x": hex, "coefficient": rational::to_string(&c) }),
                    )),
                };
            }
            let table = indicator_spectrum(&h, *n)?;
            match cli.format {
                Format::Csv => {
                    let mut out = vec!["x,value".to_string()];
                    out.extend(
                        table
                            .values
                            .iter()
                            .enumerate()
                            .map(|(i, v)| format!("{},{v}", GraphVector::from_index(*n, i as u64).to_hex())),
                    );
                    Ok(out)
                }
                Format::Json => line(record("code-spectrum", Some(&h), json!({ "n": n, "values": table.values }))),
            }
        }
        Command::CodeBound { n } => {
            let (h, _) = load_graph(cli)?;
            line(record("code-bound", Some(&h), to_value(&code_density_bound(&h, *n)?)))
        }
        Command::MaxCode { n } => {
            let (h, _) = load_graph(cli)?;
            let limit = cli.budget.unwrap_or(DEFAULT_CODE_NODES);
            line(record("max-code", Some(&h), to_value(&bruteforce_max_code_with(&h, *n, limit)?)))
        }
        Command::StableInvolution => {
            let (g, _) = load_graph(cli)?;
            let cert = detect_stable_involution(&g)?;
            line(record("stable-involution", Some(&g), json!({ "certificate": cert })))
        }
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data")
}

/// `{"kind": ..., "graph": ..., <fields of body>}`.
fn record(kind: &str, graph: Option<&Hypergraph>, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("kind".into(), json!(kind));
    if let Some(g) = graph {
        map.insert("graph".into(), to_value(g));
    }
    Value::Object(map)
}

fn line(v: Value) -> Result<Vec<String>> {
    Ok(vec![serde_json::to_string(&v)?])
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn require_seed(cli: &Cli) -> Result<u64> {
    cli.seed
        .ok_or_else(|| Error::Precondition("this subcommand is stochastic and needs --seed".into()))
}

/// A hypergraph from a file path if one exists there, else a named construction.
pub fn load_spec(spec: &str) -> Result<Hypergraph> {
    let path = Path::new(spec);
    if path.is_file() {
        Hypergraph::from_text(&read(path)?)
    } else {
        named(spec)
    }
}

fn load_graph(cli: &Cli) -> Result<(Hypergraph, String)> {
    match (&cli.input, &cli.graph) {
        (Some(path), None) => {
            let name = path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
            Ok((Hypergraph::from_text(&read(path)?)?, name))
        }
        (None, Some(spec)) => Ok((named(spec)?, spec.clone())),
        (Some(_), Some(_)) => Err(Error::Precondition("give either --input or --graph, not both".into())),
        (None, None) => Err(Error::Precondition("this subcommand needs --input or --graph".into())),
    }
}
