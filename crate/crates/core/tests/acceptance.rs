//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

mod common;

use common::{brute_congestion, brute_cutwidth, brute_pathwidth, brute_treewidth};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};
use widthlab_core::bounds::{genus_bounds, ManifoldFlags, Relation, WidthValue};
use widthlab_core::census::census;
use widthlab_core::dual::{
    build_dual, congestion_of, random_connected_multigraph, random_regular_multigraph, HostTree,
    MultiGraph,
};
use widthlab_core::handles::{
    graph_certificate, leaf_handlebody, linear_certificate, HandleComplex, RootChoice,
};
use widthlab_core::solvers::{
    congestion_exact, cutwidth_exact, make_nice, solve_exact, treewidth_exact,
    validate_decomposition, BagKind, ExactLimits, Param, Witness, path_decomposition_from_ordering,
};
use widthlab_core::tri::skeleton;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn petersen_exactness() -> Outcome {
    let start = Instant::now();
    let g = MultiGraph::petersen();
    let limits = ExactLimits::default();
    let want = [(Param::Tw, 4), (Param::Pw, 5), (Param::Cw, 6), (Param::Cng, 5)];
    let mut parts = Vec::new();
    let mut pass = true;
    for (param, value) in want {
        match solve_exact(&g, param, &limits) {
            Ok(r) => {
                let witnessed = r.witness_value(&g).ok() == Some(r.value);
                pass &= r.value == value && witnessed;
                parts.push(format!("{param}={}{}", r.value, if witnessed { "" } else { "(bad witness)" }));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{param}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("{}, witnesses validated, {elapsed:.2?}", parts.join(" ")))
}

fn k5_routing() -> Outcome {
    // the unique unrooted binary tree on five leaves
    let host = HostTree::new(
        8,
        vec![(0, 5), (1, 5), (5, 6), (2, 6), (6, 7), (3, 7), (4, 7)],
        vec![0, 1, 2, 3, 4],
    )
    .expect("valid host");
    let k5 = MultiGraph::complete(5);
    let value = congestion_of(&k5, &host).expect("host matches");
    let loads = host.loads(&k5).expect("host matches");
    let on_spine = loads[2];
    outcome(
        value == 6 && on_spine == 6,
        format!("congestion {value}, six arcs on a spine arc: {}", on_spine == 6),
    )
}

fn inequality_chain() -> Outcome {
    let start = Instant::now();
    let limits = ExactLimits::default();
    let graphs: Vec<MultiGraph> = (0..100u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
            let n = 2 + (i as usize % 9);
            random_regular_multigraph(n, 4, false, &mut rng)
        })
        .collect();
    let violations: usize = graphs
        .par_iter()
        .map(|g| {
            let v = |p| solve_exact(g, p, &limits).expect("within limits").value;
            let (tw, pw, cw, cng) = (v(Param::Tw), v(Param::Pw), v(Param::Cw), v(Param::Cng));
            let ok = pw <= cw
                && cw <= 4 * pw
                && 2 * (tw + 1) <= 3 * cng
                && cng <= 4 * (tw + 1)
                && cng >= 4;
            usize::from(!ok)
        })
        .sum();
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && elapsed < Duration::from_secs(600),
        format!("100 random 4-regular graphs (n = 2..10), {violations} violations, {elapsed:.2?}"),
    )
}

fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            MultiGraph::new(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p),
            )
        })
        .filter(MultiGraph::is_connected)
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut graphs: Vec<MultiGraph> = (1..=6).flat_map(connected_simple_graphs).collect();
    let simple = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..50 {
        graphs.push(random_connected_multigraph(7, 3 + i % 8, true, &mut rng));
    }
    let limits = ExactLimits::default();
    let mismatches: usize = graphs
        .par_iter()
        .map(|g| {
            let want = [
                (Param::Tw, brute_treewidth(g)),
                (Param::Pw, brute_pathwidth(g)),
                (Param::Cw, brute_cutwidth(g)),
                (Param::Cng, brute_congestion(g)),
            ];
            want.iter()
                .filter(|&&(p, value)| {
                    let r = solve_exact(g, p, &limits).expect("within limits");
                    r.value != value || r.witness_value(g).ok() != Some(value)
                })
                .count()
        })
        .sum();
    outcome(
        mismatches == 0,
        format!(
            "{simple} connected graphs with n <= 6 and 50 random multigraphs with n = 7, {mismatches} mismatches, {:.2?}",
            start.elapsed()
        ),
    )
}

struct CensusRun {
    certificates: Outcome,
    surfaces: Outcome,
}

fn census_certificates() -> CensusRun {
    let start = Instant::now();
    let all = census(3).expect("census size is supported");
    let mut failures = Vec::new();
    let mut surface_checks = 0usize;
    let mut surface_failures = 0usize;
    let mut check_euler = |ok: bool| {
        surface_checks += 1;
        surface_failures += usize::from(!ok);
    };
    let mut single = 0;
    for (idx, tri) in all.iter().enumerate() {
        let n = tri.tet_count();
        let g = build_dual(tri);
        let cx = HandleComplex::new(tri).expect("census members are valid");

        check_euler(skeleton(tri).euler == 0);
        let full = cx.boundary_surface(&cx.all()).expect("admissible");
        check_euler(full.euler == 0 && full.components() == 0);

        let cw = cutwidth_exact(&g, 20).expect("small");
        let Witness::Layout(layout) = &cw.witness else { unreachable!() };
        let lin = linear_certificate(&cx, tri, &layout.ordering).expect("certificate");
        for a in lin.steps.iter().flat_map(|s| &s.attachments) {
            let [h0, h1, h2, h3] = a.handle_counts.map(|x| x as i64);
            check_euler(a.surface.euler == 2 * (h0 - h1 + h2 - h3));
        }
        let step_ok = lin
            .steps
            .iter()
            .all(|s| s.handles_added <= 15 && s.max_genus <= s.genus_before + 4);
        let genus_ok = lin.max_genus_sum <= 3 * cw.value + 4 && lin.l_upper == 6 * cw.value + 7;
        if !step_ok {
            failures.push(format!("#{idx} (a)"));
        }
        if !genus_ok {
            failures.push(format!("#{idx} (b)"));
        }

        let cng = congestion_exact(&g, 12).expect("small");
        let Witness::Host(host) = &cng.witness else { unreachable!() };
        let cert = graph_certificate(&cx, tri, host, RootChoice::MinGenus).expect("certificate");
        if n == 1 {
            single += 1;
            if !cert.single_tet_case {
                failures.push(format!("#{idx} (d)"));
            }
            continue;
        }
        let k = cng.value;
        let tops_ok = cert.nodes.iter().all(|r| r.surface.total_genus < 6 * k)
            && cert.root.as_ref().is_some_and(|r| r.surface.total_genus < 6 * k);
        let leaves_ok = cert.leaves.iter().all(|l| l.genus <= 1);
        if cert.single_tet_case || !tops_ok || !leaves_ok || cert.k != k {
            failures.push(format!("#{idx} (c)"));
        }
        for r in &cert.nodes {
            let [h0, h1, h2, h3] = r.handle_counts.map(|x| x as i64);
            check_euler(r.surface.euler == 2 * (h0 - h1 + h2 - h3));
        }
        if let Some(r) = &cert.root {
            let [h0, h1, h2, h3] = r.handle_counts.map(|x| x as i64);
            check_euler(r.surface.euler == 2 * (h0 - h1 + h2 - h3));
        }
        for t in 0..n {
            let h = cx.admissible_closure(&[t]);
            let (_, s) = leaf_handlebody(&cx, tri, t).expect("leaf");
            check_euler(s.euler == h.boundary_euler());
        }
    }
    let elapsed = start.elapsed();
    CensusRun {
        certificates: outcome(
            failures.is_empty() && elapsed < Duration::from_secs(1800),
            format!(
                "{} triangulations ({single} with one tetrahedron), {} failures{}, {elapsed:.2?}",
                all.len(),
                failures.len(),
                if failures.is_empty() { String::new() } else { format!(": {}", failures.join(" ")) }
            ),
        ),
        surfaces: outcome(
            surface_failures == 0,
            format!("{surface_checks} handle sets checked, {surface_failures} failures"),
        ),
    }
}

fn bounds_arithmetic() -> Outcome {
    let flags = ManifoldFlags {
        closed: true,
        orientable: true,
        irreducible_asserted: true,
        non_haken_asserted: true,
        single_tetrahedron: false,
    };
    let mut bad = 0;
    for k in 0..=10 {
        let w = |param| WidthValue {
            param,
            value: k,
            exact: true,
        };
        let r = genus_bounds(&[w(Param::Pw), w(Param::Tw)], flags).expect("widths given");
        let pw = r.lookup("genus_from_pw").expect("pw line");
        let tw = r.lookup("genus_from_tw_strict").expect("tw line");
        if pw.value != 4 * (3 * k + 1) || pw.relation != Relation::AtMost {
            bad += 1;
        }
        if tw.value != 24 * (k + 1) || tw.relation != Relation::Below {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("k = 0..10, {bad} mismatches"))
}

fn nice_decompositions() -> Outcome {
    let g = MultiGraph::petersen();
    let Witness::Tree(td) = treewidth_exact(&g, 16).expect("small").witness else {
        unreachable!()
    };
    let nice = make_nice(&td);
    let valid = validate_decomposition(&g, &nice.to_tree()).is_valid();
    let shape = nice.is_nice();
    let count_ok = nice.nodes.len() <= 8 * g.node_count();
    let width = nice.width();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut joins_in_paths = 0;
    for i in 0..20 {
        let h = random_connected_multigraph(8, i % 6, false, &mut rng);
        let order: Vec<usize> = (0..8).collect();
        let pd = path_decomposition_from_ordering(&h, &order);
        let n = make_nice(&pd.to_tree());
        joins_in_paths += n.nodes.iter().filter(|b| b.kind == BagKind::Join).count();
    }
    let pd = match solve_exact(&g, Param::Pw, &ExactLimits::default()).expect("small").witness {
        Witness::Path(pd) => pd,
        _ => unreachable!(),
    };
    joins_in_paths += make_nice(&pd.to_tree())
        .nodes
        .iter()
        .filter(|b| b.kind == BagKind::Join)
        .count();
    outcome(
        valid && shape && count_ok && width == 4 && joins_in_paths == 0,
        format!(
            "Petersen: width {width}, {} bags (limit {}), valid {valid}, nice {shape}; path inputs: {joins_in_paths} join bags",
            nice.nodes.len(),
            8 * g.node_count()
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "Petersen exactness", petersen_exactness()),
        (2, "K5 routing", k5_routing()),
        (3, "inequality chain", inequality_chain()),
        (4, "oracle equivalence", oracle_equivalence()),
    ];
    let run = census_certificates();
    results.push((5, "census certificates", run.certificates));
    results.push((6, "surface invariants", run.surfaces));
    results.push((7, "bounds arithmetic", bounds_arithmetic()));
    results.push((8, "nice decompositions", nice_decompositions()));

    let mut failed = 0;
    for (id, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} [{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
