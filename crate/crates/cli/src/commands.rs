use crate::output::{
    envelope, homology_text, invalid, print_json, read_file, read_triangulation, to_value,
    write_file,
};
use crate::{CensusArgs, CertifyArgs, CheckArgs, CliError, Format, IneqArgs, Mode, WidthArgs};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use widthlab_core::bounds::{genus_bounds, BoundsReport, ManifoldFlags, WidthValue};
use widthlab_core::census::census as enumerate_census;
use widthlab_core::dual::{build_dual, HostTree, LinearLayout, MultiGraph};
use widthlab_core::handles::{
    graph_certificate, linear_certificate, GraphSplittingCertificate, HandleComplex, HandleError,
    LinearCertificate, RootChoice,
};
use widthlab_core::inequalities::{verify_chain, InequalityReport};
use widthlab_core::solvers::{
    heuristic_upper, make_nice, solve_exact, ExactLimits, Param, SolverError, WidthReport, Witness,
};
use widthlab_core::tri::{
    check_orientable, first_homology, serialize_triangulation, skeleton, validate_closed,
};
use widthlab_core::Triangulation;

const OK: u8 = 0;
const INVALID: u8 = 1;
const VIOLATION: u8 = 3;

/// Restarts used when a command falls back to the heuristics on its own.
const FALLBACK_RESTARTS: usize = 8;

fn write_csv<T: Serialize>(rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Invalid(format!("csv output: {e}")))?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn handle_error(path: &Path, e: HandleError) -> CliError {
    match e {
        // the engine only builds surfaces from validated input, so a broken
        // boundary is our fault
        HandleError::SurfaceDefect(_) => CliError::Violation(format!("{}: {e}", path.display())),
        _ => invalid(path, e),
    }
}

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::TooLarge { param, .. } => CliError::Invalid(format!(
            "{e}; use --heuristic --seed N or raise --max-exact-{param}"
        )),
        SolverError::BadWitness(_) => CliError::Violation(e.to_string()),
        _ => CliError::Invalid(e.to_string()),
    }
}

/// Exact when the graph is within the limit, otherwise the heuristic.
fn best_available(
    graph: &MultiGraph,
    param: Param,
    limits: &ExactLimits,
    seed: u64,
) -> Result<WidthReport, CliError> {
    if graph.node_count() <= limits.get(param) {
        solve_exact(graph, param, limits)
    } else {
        heuristic_upper(graph, param, seed, FALLBACK_RESTARTS)
    }
    .map_err(solver_error)
}

#[derive(Serialize)]
struct CheckRow {
    input: String,
    tets: usize,
    valid: bool,
    orientable: bool,
    vertices: usize,
    edges: usize,
    triangles: usize,
    euler: i64,
    h1: Option<String>,
}

pub fn check(args: &CheckArgs) -> Result<u8, CliError> {
    let tri = read_triangulation(&args.path)?;
    let report = validate_closed(&tri);
    let valid = report.is_valid();
    let orientable = valid && check_orientable(&tri);
    let skel = skeleton(&tri);
    let homology = valid.then(|| first_homology(&tri));
    let ok = valid && orientable;
    let input = args.path.display().to_string();

    match args.format {
        Format::Json => print_json(&envelope(
            "check",
            json!({
                "input": input,
                "tet_count": tri.tet_count(),
                "ok": ok,
                "valid": valid,
                "orientable": orientable,
                "skeleton": skel,
                "homology": homology.as_ref().map(|h| json!({
                    "betti": h.betti,
                    "torsion": h.torsion,
                    "text": homology_text(h),
                })),
                "validation": report,
            }),
        )),
        Format::Csv => write_csv(&[CheckRow {
            input,
            tets: tri.tet_count(),
            valid,
            orientable,
            vertices: skel.vertex_count,
            edges: skel.edge_count,
            triangles: skel.triangle_count,
            euler: skel.euler,
            h1: homology.as_ref().map(homology_text),
        }])?,
        Format::Text => {
            println!("{input}: {} tetrahedra", tri.tet_count());
            println!(
                "skeleton: {} vertices, {} edges, {} triangles, euler {}",
                skel.vertex_count, skel.edge_count, skel.triangle_count, skel.euler
            );
            for issue in &report.issues {
                println!("issue: {}", serde_json::to_string(issue).expect("json"));
            }
            println!("valid closed: {}", yes_no(valid));
            println!("orientable: {}", yes_no(orientable));
            if let Some(h) = &homology {
                println!("H1: {}", homology_text(h));
            }
            println!("{}", if ok { "OK" } else { "NOT OK" });
        }
    }
    Ok(if ok { OK } else { INVALID })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct WidthRow {
    param: Param,
    value: usize,
    exact: bool,
    witness_file: Option<String>,
}

pub fn width(args: &WidthArgs) -> Result<u8, CliError> {
    let (graph, tri, path, kind) = match (&args.graph, &args.path) {
        (Some(p), _) => {
            let g = MultiGraph::parse_edge_list(&read_file(p)?).map_err(|e| invalid(p, e))?;
            (g, None, p, "graph")
        }
        (None, Some(p)) => {
            let tri = read_triangulation(p)?;
            (build_dual(&tri), Some(tri), p, "triangulation")
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    if graph.node_count() == 0 {
        return Err(invalid(path, "graph has no nodes"));
    }
    let mut params = Vec::new();
    for &p in &args.param {
        if !params.contains(&p) {
            params.push(p);
        }
    }
    let limits = args.limits.limits();
    let heuristic_seed = args.heuristic.then(|| args.seed.expect("clap requires --seed"));
    let reports = params
        .iter()
        .map(|&p| match heuristic_seed {
            Some(seed) => heuristic_upper(&graph, p, seed, args.restarts as usize),
            None => solve_exact(&graph, p, &limits),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(solver_error)?;
    for r in &reports {
        let recomputed = r.witness_value(&graph).map_err(solver_error)?;
        if recomputed != r.value {
            return Err(CliError::Violation(format!(
                "{} witness evaluates to {recomputed}, reported {}",
                r.param, r.value
            )));
        }
    }

    let witness_files = match &args.witness_dir {
        Some(dir) => write_witnesses(dir, &reports)?,
        None => vec![None; reports.len()],
    };

    let bounds = match &tri {
        Some(tri) => Some(bounds_for(tri, &reports, args)?),
        None => None,
    };

    match args.format {
        Format::Json => print_json(&envelope(
            "width",
            json!({
                "input": { "path": path.display().to_string(), "kind": kind },
                "graph": graph_summary(&graph),
                "method": if heuristic_seed.is_some() { "heuristic" } else { "exact" },
                "seed": heuristic_seed,
                "restarts": heuristic_seed.map(|_| args.restarts),
                "results": reports,
                "witness_files": witness_files,
                "bounds": bounds,
            }),
        )),
        Format::Csv => write_csv(
            &reports
                .iter()
                .zip(&witness_files)
                .map(|(r, f)| WidthRow {
                    param: r.param,
                    value: r.value,
                    exact: r.exact,
                    witness_file: f.clone(),
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            println!(
                "{}: {kind}, {} nodes, {} arcs",
                path.display(),
                graph.node_count(),
                graph.arc_count()
            );
            for (r, f) in reports.iter().zip(&witness_files) {
                let how = if r.exact { "exact" } else { "upper bound" };
                match f {
                    Some(f) => println!("{} = {} ({how}), witness {f}", r.param, r.value),
                    None => println!("{} = {} ({how})", r.param, r.value),
                }
            }
            if let Some(b) = &bounds {
                print!("{}", b.to_text());
            }
        }
    }
    Ok(OK)
}

fn graph_summary(g: &MultiGraph) -> Value {
    json!({
        "nodes": g.node_count(),
        "arcs": g.arc_count(),
        "loops": g.loop_count(),
        "max_degree": g.max_degree(),
    })
}

/// One `<param>.witness` file per report, plus `tw.nice` for treewidth.
fn write_witnesses(dir: &Path, reports: &[WidthReport]) -> Result<Vec<Option<String>>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for r in reports {
        let file = dir.join(format!("{}.witness", r.param));
        write_file(&file, &r.witness.to_text())?;
        if let Witness::Tree(td) = &r.witness {
            write_file(&dir.join("tw.nice"), &make_nice(td).to_text())?;
        }
        out.push(Some(file.display().to_string()));
    }
    Ok(out)
}

fn bounds_for(tri: &Triangulation, reports: &[WidthReport], args: &WidthArgs) -> Result<BoundsReport, CliError> {
    let report = validate_closed(tri);
    let flags = ManifoldFlags {
        closed: report.is_valid(),
        orientable: report.is_valid() && check_orientable(tri),
        irreducible_asserted: args.assert_irreducible,
        non_haken_asserted: args.assert_non_haken,
        single_tetrahedron: tri.tet_count() == 1,
    };
    let widths: Vec<WidthValue> = reports.iter().map(WidthValue::from).collect();
    genus_bounds(&widths, flags).map_err(|e| CliError::Invalid(e.to_string()))
}

#[derive(Serialize)]
struct CertifyRow {
    input: String,
    mode: &'static str,
    k: usize,
    max_genus: usize,
    bound: usize,
    passes: bool,
}

pub fn certify(args: &CertifyArgs) -> Result<u8, CliError> {
    let path = &args.path;
    let tri = read_triangulation(path)?;
    let complex = HandleComplex::new(&tri).map_err(|e| handle_error(path, e))?;
    let graph = build_dual(&tri);
    let limits = args.limits.limits();
    let input = path.display().to_string();

    let (payload, row, full) = match args.mode {
        Mode::Linear => {
            if args.root_arc.is_some() {
                return Err(CliError::Invalid("--root-arc only applies to --mode graph".into()));
            }
            let (ordering, source) = match &args.layout {
                Some(p) => (
                    LinearLayout::parse_ordering(&read_file(p)?).map_err(|e| invalid(p, e))?,
                    "file",
                ),
                None => {
                    let r = best_available(&graph, Param::Cw, &limits, args.seed)?;
                    let Witness::Layout(l) = r.witness else {
                        unreachable!("cutwidth witnesses are layouts")
                    };
                    (l.ordering, if r.exact { "exact" } else { "heuristic" })
                }
            };
            let cert = linear_certificate(&complex, &tri, &ordering).map_err(|e| handle_error(path, e))?;
            if args.format == Format::Text {
                print_linear(&input, source, &cert);
            }
            let row = CertifyRow {
                input: input.clone(),
                mode: "linear",
                k: cert.k,
                max_genus: cert.max_genus_sum,
                bound: cert.bound_3k4,
                passes: cert.passes(),
            };
            let full = to_value(&cert);
            (
                json!({ "mode": "linear", "witness_source": source, "certificate": full }),
                row,
                full,
            )
        }
        Mode::Graph => {
            if args.layout.is_some() {
                return Err(CliError::Invalid("--layout only applies to --mode linear".into()));
            }
            let (host, source) = match &args.host {
                Some(p) => (
                    HostTree::parse(&read_file(p)?).map_err(|e| invalid(p, e))?,
                    "file",
                ),
                None => {
                    let r = best_available(&graph, Param::Cng, &limits, args.seed)?;
                    let Witness::Host(h) = r.witness else {
                        unreachable!("congestion witnesses are host trees")
                    };
                    (h, if r.exact { "exact" } else { "heuristic" })
                }
            };
            let root = args.root_arc.map_or(RootChoice::MinGenus, RootChoice::Arc);
            let cert = graph_certificate(&complex, &tri, &host, root).map_err(|e| handle_error(path, e))?;
            if args.format == Format::Text {
                print_graph(&input, source, &cert);
            }
            let row = CertifyRow {
                input: input.clone(),
                mode: "graph",
                k: cert.k,
                max_genus: cert.max_top_genus,
                bound: cert.bound_6k,
                passes: cert.passes(),
            };
            let full = to_value(&cert);
            (
                json!({ "mode": "graph", "witness_source": source, "certificate": full }),
                row,
                full,
            )
        }
    };

    if let Some(out) = &args.out {
        write_file(out, &(serde_json::to_string_pretty(&full).expect("json") + "\n"))?;
    }
    match args.format {
        Format::Json => {
            let mut v = envelope("certify", payload);
            v["input"] = json!(input);
            v["passes"] = json!(row.passes);
            print_json(&v);
        }
        Format::Csv => write_csv(&[&row])?,
        Format::Text => {}
    }
    Ok(if row.passes { OK } else { VIOLATION })
}

fn print_linear(input: &str, source: &str, c: &LinearCertificate) {
    println!("linear certificate for {input} (layout: {source})");
    println!("layout: {}", join(&c.layout.ordering));
    println!("cut profile: {}", join(&c.layout.cut_profile));
    println!("k = {}", c.k);
    for (i, s) in c.steps.iter().enumerate() {
        println!(
            "step {i}: tet {} +{} handles, genus {} -> max {}",
            s.tet, s.handles_added, s.genus_before, s.max_genus
        );
    }
    println!(
        "max genus along the filtration: {} <= {} (3k+4) {}",
        c.max_genus_sum,
        c.bound_3k4,
        pass_fail(c.holds_3k4)
    );
    println!("per-step handles <= 15 and genus rise <= 4: {}", pass_fail(c.steps_hold));
    println!("induced width: [{}]", join(&c.induced_width));
    println!("linear width upper bound: {} (6k+7)", c.l_upper);
    println!("result: {}", pass_fail(c.passes()));
}

fn print_graph(input: &str, source: &str, c: &GraphSplittingCertificate) {
    println!("graph certificate for {input} (host: {source})");
    println!("k = {}", c.k);
    if c.single_tet_case {
        println!("single tetrahedron: no root arc, bound holds vacuously");
    }
    if let (Some(r), Some(root)) = (c.root_arc, &c.root) {
        println!(
            "root arc {r} ({}, {}), {} routed 1-handles, genus {}",
            root.arc.0, root.arc.1, root.routed_one_handles, root.surface.total_genus
        );
    }
    for l in &c.leaves {
        println!("leaf tet {}: {:?}, genus {}", l.tet, l.class, l.genus);
    }
    for n in &c.nodes {
        println!(
            "node {}: children {:?}, {} bridging 1-handles, genus {}, incidence {} <= {}",
            n.host_node,
            n.children,
            n.bridging_one_handles,
            n.surface.total_genus,
            n.arc_incidence,
            n.incidence_bound
        );
    }
    println!("leaves are balls or solid tori: {}", pass_fail(c.leaves_ok));
    println!("node incidence <= ceil(3k/2): {}", pass_fail(c.incidence_ok));
    println!(
        "max top genus: {} < {} (6k) {}",
        c.max_top_genus,
        c.bound_6k,
        pass_fail(c.holds_6k)
    );
    println!("graph width: [{}]", join(&c.graph_width));
    println!("result: {}", pass_fail(c.passes()));
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct IneqRow {
    file: String,
    nodes: Option<usize>,
    loops_stripped: Option<usize>,
    max_degree: Option<usize>,
    tw: Option<usize>,
    pw: Option<usize>,
    cw: Option<usize>,
    cng: Option<usize>,
    bodlaender_lhs: Option<bool>,
    bodlaender_rhs: Option<bool>,
    bienstock_lhs: Option<bool>,
    bienstock_rhs: Option<bool>,
    all_hold: Option<bool>,
    error: Option<String>,
}

impl IneqRow {
    fn new(file: String, result: &Result<InequalityReport, String>) -> Self {
        let r = result.as_ref().ok();
        IneqRow {
            file,
            nodes: r.map(|r| r.nodes),
            loops_stripped: r.map(|r| r.loops_stripped),
            max_degree: r.map(|r| r.max_degree),
            tw: r.map(|r| r.tw),
            pw: r.map(|r| r.pw),
            cw: r.map(|r| r.cw),
            cng: r.map(|r| r.cng),
            bodlaender_lhs: r.map(|r| r.bodlaender_lhs),
            bodlaender_rhs: r.map(|r| r.bodlaender_rhs),
            bienstock_lhs: r.map(|r| r.bienstock_lhs),
            bienstock_rhs: r.map(|r| r.bienstock_rhs),
            all_hold: r.map(InequalityReport::all_hold),
            error: result.as_ref().err().cloned(),
        }
    }
}

fn check_graph_file(path: &Path, name: &str, limits: &ExactLimits) -> Result<InequalityReport, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("read error: {e}"))?;
    let graph = MultiGraph::parse_edge_list(&text).map_err(|e| format!("parse error: {e}"))?;
    if graph.node_count() == 0 {
        return Err("graph has no nodes".into());
    }
    verify_chain(&graph, name, limits).map_err(|e| e.to_string())
}

pub fn verify_ineq(args: &IneqArgs) -> Result<u8, CliError> {
    let io = |source| CliError::Io {
        path: args.dir.clone(),
        source,
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    files.retain(|p| p.is_file());
    files.sort();
    let limits = args.limits.limits();
    let results: Vec<(String, Result<InequalityReport, String>)> = files
        .par_iter()
        .map(|p| {
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let r = check_graph_file(p, &name, &limits);
            (name, r)
        })
        .collect();

    let errors = results.iter().filter(|(_, r)| r.is_err()).count();
    let violations: Vec<&str> = results
        .iter()
        .filter(|(_, r)| matches!(r, Ok(rep) if !rep.all_hold()))
        .map(|(n, _)| n.as_str())
        .collect();
    for (name, r) in &results {
        if let Err(e) = r {
            eprintln!("widthlab: {name}: {e}");
        }
    }

    match args.format {
        Format::Json => print_json(&envelope(
            "verify-ineq",
            json!({
                "directory": args.dir.display().to_string(),
                "rows": results.iter().map(|(n, r)| json!({
                    "file": n,
                    "report": r.as_ref().ok(),
                    "error": r.as_ref().err(),
                })).collect::<Vec<_>>(),
                "summary": {
                    "files": results.len(),
                    "checked": results.len() - errors,
                    "errors": errors,
                    "violations": violations,
                },
            }),
        )),
        Format::Csv => write_csv(
            &results
                .iter()
                .map(|(n, r)| IneqRow::new(n.clone(), r))
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            for (name, r) in &results {
                match r {
                    Ok(r) => println!(
                        "{name}: n={} max_degree={} tw={} pw={} cw={} cng={} {}",
                        r.nodes,
                        r.max_degree,
                        r.tw,
                        r.pw,
                        r.cw,
                        r.cng,
                        if r.all_hold() { "all hold" } else { "VIOLATED" }
                    ),
                    Err(e) => println!("{name}: skipped ({e})"),
                }
            }
            println!(
                "{} files, {} checked, {} skipped, {} violations",
                results.len(),
                results.len() - errors,
                errors,
                violations.len()
            );
        }
    }
    Ok(if violations.is_empty() { OK } else { VIOLATION })
}

#[derive(Serialize)]
struct CensusRow {
    index: usize,
    tets: usize,
    h1: String,
    dual_loops: usize,
    cw: usize,
    cng: usize,
    linear_max_genus: usize,
    linear_bound: usize,
    linear_passes: bool,
    l_upper: usize,
    graph_max_genus: usize,
    graph_bound: usize,
    graph_passes: bool,
    single_tet: bool,
}

impl CensusRow {
    fn passes(&self) -> bool {
        self.linear_passes && self.graph_passes
    }
}

fn census_row(index: usize, tri: &Triangulation) -> Result<CensusRow, CliError> {
    let name = PathBuf::from(format!("census #{index}"));
    let graph = build_dual(tri);
    let complex = HandleComplex::new(tri).map_err(|e| handle_error(&name, e))?;
    let limits = ExactLimits::default();
    let cw = solve_exact(&graph, Param::Cw, &limits).map_err(solver_error)?;
    let Witness::Layout(layout) = &cw.witness else {
        unreachable!("cutwidth witnesses are layouts")
    };
    let lin = linear_certificate(&complex, tri, &layout.ordering).map_err(|e| handle_error(&name, e))?;
    let cng = solve_exact(&graph, Param::Cng, &limits).map_err(solver_error)?;
    let Witness::Host(host) = &cng.witness else {
        unreachable!("congestion witnesses are host trees")
    };
    let g = graph_certificate(&complex, tri, host, RootChoice::MinGenus).map_err(|e| handle_error(&name, e))?;
    Ok(CensusRow {
        index,
        tets: tri.tet_count(),
        h1: homology_text(&first_homology(tri)),
        dual_loops: graph.loop_count(),
        cw: cw.value,
        cng: cng.value,
        linear_max_genus: lin.max_genus_sum,
        linear_bound: lin.bound_3k4,
        linear_passes: lin.passes(),
        l_upper: lin.l_upper,
        graph_max_genus: g.max_top_genus,
        graph_bound: g.bound_6k,
        graph_passes: g.passes(),
        single_tet: g.single_tet_case,
    })
}

pub fn census(args: &CensusArgs) -> Result<u8, CliError> {
    let max = args.max_tets as usize;
    let tris = enumerate_census(max).map_err(|e| CliError::Invalid(e.to_string()))?;
    let rows: Vec<CensusRow> = tris
        .par_iter()
        .enumerate()
        .map(|(i, t)| census_row(i, t))
        .collect::<Result<_, _>>()?;
    let counts: Vec<usize> = (1..=max)
        .map(|n| rows.iter().filter(|r| r.tets == n).count())
        .collect();
    let failures: Vec<usize> = rows.iter().filter(|r| !r.passes()).map(|r| r.index).collect();

    match args.format {
        Format::Json => print_json(&envelope(
            "census",
            json!({
                "max_tets": max,
                "triangulations": rows.iter().zip(&tris).map(|(r, t)| {
                    let mut v = to_value(r);
                    v["table"] = json!(serialize_triangulation(t));
                    v
                }).collect::<Vec<_>>(),
                "summary": {
                    "total": rows.len(),
                    "count_by_size": counts,
                    "failures": failures,
                },
            }),
        )),
        Format::Csv => write_csv(&rows)?,
        Format::Text => {
            for (r, t) in rows.iter().zip(&tris) {
                println!(
                    "#{} tets={} H1={} cw={} cng={} linear {}<={} graph {} {}",
                    r.index,
                    r.tets,
                    r.h1,
                    r.cw,
                    r.cng,
                    r.linear_max_genus,
                    r.linear_bound,
                    if r.single_tet {
                        "vacuous".to_string()
                    } else {
                        format!("{}<{}", r.graph_max_genus, r.graph_bound)
                    },
                    pass_fail(r.passes())
                );
                for line in serialize_triangulation(t).lines() {
                    println!("    {line}");
                }
            }
            let sizes: Vec<String> = counts
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c} with {} tets", i + 1))
                .collect();
            println!(
                "{} triangulations ({}), {} failures",
                rows.len(),
                sizes.join(", "),
                failures.len()
            );
        }
    }
    Ok(if failures.is_empty() { OK } else { VIOLATION })
}
