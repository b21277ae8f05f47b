//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bmgraph::graph::ThinnessPartition;
use bmgraph::ncolor::pair_lrt;
use bmgraph::two_color::{reachable_set, w_classes};
use bmgraph::*;
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORACLE_RANDOM_TREES: usize = 1000;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
const ROUND_TRIPS: usize = 1000;
const MINIMALITY_INSTANCES: usize = 200;
const TWO_COLOR_ROUTE_INSTANCES: usize = 500;
const N_COLOR_ROUTE_INSTANCES: usize = 200;
const AXIOM_INSTANCES: usize = 1000;
const BUILD_TREES: usize = 500;
const TIMING_SIZES: [usize; 4] = [50, 100, 200, 400];
const TIMING_COLORS: usize = 4;
const TIMING_RUNS: usize = 20;
const TIMING_RATIO_LIMIT: f64 = 10.0;
const TIMING_LARGEST_LIMIT: Duration = Duration::from_secs(30);
const RBMG_INSTANCES: usize = 1000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn sim(n: usize, k: usize, seed: u64) -> (LeafColoredTree, ColoredDigraph) {
    let shape = if seed % 2 == 0 { TreeShape::Binary } else { TreeShape::Multifurcating };
    simulate(&SimulationConfig::new(n, k, seed).with_shape(shape)).unwrap()
}

/// Connected two-colored simulated graphs, skipping disconnected draws.
fn connected_two_colored(count: usize, salt: u64) -> Vec<(LeafColoredTree, ColoredDigraph)> {
    let mut out = Vec::new();
    let mut seed = salt;
    while out.len() < count {
        let n = 2 + (seed % 29) as usize;
        let (t, g) = sim(n, 2, seed);
        if g.is_connected() {
            out.push((t, g));
        }
        seed += 1;
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0usize;
    for n in 1..=6u32 {
        let topologies = all_topologies(n);
        for k in 1..=n.min(3) {
            let l = labels(n as usize, k as usize);
            let canonical = colorings(n as usize, k);
            for coloring in surjective_colorings(n as usize, k) {
                let cluster_check = canonical.contains(&coloring);
                for topo in &topologies {
                    let t = colored(&l, topo, &coloring);
                    let fast = bmg_of_tree(&t);
                    ensure!(fast == bmg_oracle(&t), "fast != oracle on {topo:?} {coloring:?}");
                    if cluster_check {
                        ensure!(arc_ids(&fast) == naive_bmg_arcs(&t), "fast != cluster oracle on {topo:?} {coloring:?}");
                    }
                    exhaustive += 1;
                }
            }
        }
    }
    for seed in 0..ORACLE_RANDOM_TREES as u64 {
        let n = 2 + (seed % 39) as usize;
        let k = (2 + (seed / 39) % 5) as usize;
        let (t, g) = sim(n, k.min(n), seed);
        ensure!(g == bmg_oracle(&t), "random tree seed {seed}: fast != oracle");
        ensure!(arc_ids(&g) == naive_bmg_arcs(&t), "random tree seed {seed}: fast != cluster oracle");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < ORACLE_TIME_LIMIT, "took {elapsed:?}, limit {ORACLE_TIME_LIMIT:?}");
    Ok(format!("{exhaustive} exhaustive + {ORACLE_RANDOM_TREES} random trees agree in {elapsed:.1?}"))
}

fn round_trip() -> Outcome {
    for seed in 0..ROUND_TRIPS as u64 {
        let n = 2 + (seed % 59) as usize;
        let k = (1 + seed % 6) as usize;
        let (t, g) = sim(n, k.min(n), seed);
        let report = recognize_ncbmg(&g, Route::PairwiseLrt);
        ensure!(report.is_accepted(), "seed {seed}: rejected {:?}", report.verdict);
        let lrt = report.lrt.as_ref().unwrap();
        ensure!(bmg_of_tree(lrt) == g, "seed {seed}: LRT explains another graph");
        ensure!(t.displays(lrt).unwrap(), "seed {seed}: LRT not displayed by the generating tree");
        ensure!(naive_displays(&t, lrt), "seed {seed}: cluster check says LRT not displayed");
    }
    Ok(format!("{ROUND_TRIPS} simulated graphs accepted, reproduced and displayed"))
}

fn minimality() -> Outcome {
    let mut edges = 0;
    for seed in 0..MINIMALITY_INSTANCES as u64 {
        let n = 3 + (seed % 38) as usize;
        let k = (2 + seed % 5) as usize;
        let (_, g) = sim(n, k.min(n), 10_000 + seed);
        let report = recognize_ncbmg(&g, Route::PairwiseLrt);
        ensure!(report.is_accepted(), "seed {seed}: rejected");
        let lrt = report.lrt.unwrap();
        for e in lrt.inner_edges() {
            let coarser = lrt.contract_edges(&[e]).unwrap();
            ensure!(bmg_of_tree(&coarser) != g, "seed {seed}: contracting {e:?} keeps the graph");
            edges += 1;
        }
        let redundant = redundant_edges_n(&lrt, &g).unwrap();
        ensure!(redundant.is_empty(), "seed {seed}: redundant edges {redundant:?}");
    }
    Ok(format!("{MINIMALITY_INSTANCES} LRTs, {edges} inner edges all essential"))
}

fn route_agreement() -> Outcome {
    for (k, (_, g)) in connected_two_colored(TWO_COLOR_ROUTE_INSTANCES, 20_000).iter().enumerate() {
        let a = lrt_via_hierarchy(g).map_err(|e| format!("instance {k}: hierarchy route rejected: {e}"))?;
        let b = lrt_via_triples(g).map_err(|e| format!("instance {k}: triple route rejected: {e}"))?;
        ensure!(a == b, "instance {k}: routes disagree");
    }
    for seed in 0..N_COLOR_ROUTE_INSTANCES as u64 {
        let n = 3 + (seed % 45) as usize;
        let k = (2 + seed % 5) as usize;
        let (_, g) = sim(n, k.min(n), 30_000 + seed);
        let a = recognize_ncbmg(&g, Route::PairwiseLrt);
        let b = recognize_ncbmg(&g, Route::InformativeDirect);
        ensure!(a.is_accepted() && b.is_accepted(), "seed {seed}: a route rejected");
        ensure!(a.lrt == b.lrt, "seed {seed}: routes disagree");
    }
    Ok(format!(
        "{TWO_COLOR_ROUTE_INSTANCES} two-colored and {N_COLOR_ROUTE_INSTANCES} n-colored graphs give identical trees"
    ))
}

fn class_of_names(g: &ColoredDigraph, p: &ThinnessPartition, names: &[&str]) -> Option<usize> {
    let want: BTreeSet<String> = names.iter().map(|s| s.to_string()).collect();
    (0..p.len()).find(|&a| p.class(a).iter().map(|&v| g.name(v).to_string()).collect::<BTreeSet<_>>() == want)
}

fn vertex_names(g: &ColoredDigraph, vs: &[usize]) -> BTreeSet<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

fn known_counterexamples() -> Outcome {
    let g = smallest_non_bmg();
    let r = recognize_ncbmg(&g, Route::PairwiseLrt);
    ensure!(!r.is_accepted(), "four-vertex counterexample accepted");
    ensure!(matches!(check_axioms(&g), AxiomVerdict::Fail(_)), "four-vertex counterexample passes axioms");

    let g = consistent_but_not_bmg();
    let l = g.labels();
    let id = |s: &str| l.vertex(s).unwrap();
    let want = TripleSet::new(
        g.ids().to_vec(),
        vec![
            RootedTriple::new(id("a"), id("b"), id("b'")),
            RootedTriple::new(id("a"), id("b"), id("a'")),
            RootedTriple::new(id("a"), id("b'"), id("a'")),
        ],
    )
    .unwrap();
    let got = informative_triples(&g);
    ensure!(got == want, "informative triples {got:?}");
    ensure!(build(&got, g.ids()).is_ok(), "counter-triples set reported inconsistent");
    let rejected = lrt_via_triples(&g);
    ensure!(
        matches!(rejected, Err(TwoColorReject::GraphMismatch(_))),
        "counter-triples graph: expected graph-mismatch, got {rejected:?}"
    );

    let g = symmetric_hexagon();
    let colors = g.color_set();
    for (i, &s) in colors.iter().enumerate() {
        for &t in &colors[i + 1..] {
            let sub = g.induced_subgraph(&[s, t]).unwrap();
            ensure!(pair_lrt(&sub).is_ok(), "hexagon: pair {s}/{t} fails");
            ensure!(
                check_2crbmg_necessary(&sub.symmetric_part()).unwrap() == RbmgVerdict::Pass,
                "hexagon: pair {s}/{t} symmetric part fails"
            );
        }
    }
    for route in [Route::PairwiseLrt, Route::InformativeDirect] {
        let r = recognize_ncbmg(&g, route);
        let stage = r.rejection().map(|x| x.stage());
        ensure!(
            matches!(stage, Some("triples-inconsistent") | Some("graph-mismatch")),
            "hexagon via {route:?}: stage {stage:?}"
        );
    }

    let t = two_sourceless_classes_tree();
    let g = bmg_of_tree(&t);
    let p = g.thinness_partition();
    let alpha = class_of_names(&g, &p, &["9", "10"]).ok_or("class {9,10} missing")?;
    let beta = class_of_names(&g, &p, &["7", "8"]).ok_or("class {7,8} missing")?;
    let r_alpha = vertex_names(&g, &reachable_set(&g, &p, alpha));
    let r_beta = vertex_names(&g, &reachable_set(&g, &p, beta));
    let expect_alpha: BTreeSet<String> = (1..=6).map(|i| i.to_string()).collect();
    let expect_beta: BTreeSet<String> = ["5", "6"].iter().map(|s| s.to_string()).collect();
    ensure!(r_alpha == expect_alpha, "R(alpha) = {r_alpha:?}");
    ensure!(r_beta == expect_beta, "R(beta) = {r_beta:?}");
    ensure!(p.inn(alpha).is_empty() && p.inn(beta).is_empty(), "alpha/beta have in-arcs");
    Ok("four-vertex graph, counter-triples, hexagon and two-source reachable sets reproduced".into())
}

fn axiom_soundness() -> Outcome {
    let mut multi_w = 0;
    for (k, (_, g)) in connected_two_colored(AXIOM_INSTANCES, 40_000).iter().enumerate() {
        let verdict = check_axioms(g);
        ensure!(verdict == AxiomVerdict::Pass, "instance {k}: {verdict:?}");
        let p = g.thinness_partition();
        let w = w_classes(&p);
        let w_colors: BTreeSet<Color> = w.iter().map(|&a| p.color(a)).collect();
        ensure!(w_colors.len() <= 1, "instance {k}: sourceless classes with two colors");
        if w.len() > 1 {
            multi_w += 1;
            let covered: BTreeSet<usize> = w.iter().flat_map(|&a| p.class(a).iter().copied()).collect();
            let rest: Vec<usize> = (0..g.len()).filter(|v| !covered.contains(v)).collect();
            let hits = (0..p.len()).filter(|&a| reachable_set(g, &p, a) == rest).count();
            ensure!(hits == 1, "instance {k}: {hits} classes reach exactly L minus the sourceless classes");
        }
    }
    Ok(format!("{AXIOM_INSTANCES} connected graphs pass N1-N3 ({multi_w} with several sourceless classes)"))
}

fn build_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..BUILD_TREES as u64 {
        let n = 1 + (seed % 30) as usize;
        let n = n.max(2);
        let (t, _) = sim(n, 1, 50_000 + seed);
        let triples = t.triples();
        let naive: BTreeSet<_> = triples.iter().map(|r| (r.x, r.y, r.z)).collect();
        ensure!(naive == naive_tree_triples(&t), "seed {seed}: tree triples differ from cluster definition");
        let topo = build(&triples, &t.leaf_ids()).map_err(|e| format!("seed {seed}: {e}"))?;
        let rebuilt = LeafColoredTree::new(t.labels().clone(), &topo, |v| t.color_of(v)).unwrap();
        ensure!(rebuilt == t, "seed {seed}: BUILD did not reproduce the tree");
        // binary trees must come back binary; checks BUILD on the most resolved case too
        let refined = LeafColoredTree::new(t.labels().clone(), &binary_refinement(&t.topology(), &mut rng), |v| t.color_of(v)).unwrap();
        let again = build(&refined.triples(), &refined.leaf_ids()).unwrap();
        ensure!(LeafColoredTree::new(t.labels().clone(), &again, |v| t.color_of(v)).unwrap() == refined, "seed {seed}: binary refinement");
    }
    let v = [VertexId(0), VertexId(1), VertexId(2)];
    let bad = TripleSet::new(v.to_vec(), vec![RootedTriple::new(v[0], v[1], v[2]), RootedTriple::new(v[0], v[2], v[1])]).unwrap();
    ensure!(matches!(build(&bad, &v), Err(BuildError::Inconsistent { .. })), "contradictory pair accepted");
    Ok(format!("{BUILD_TREES} trees and their binary refinements rebuilt; contradictory pair rejected"))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn complexity_smoke() -> Outcome {
    let opts = RecognizeOptions {
        route: Route::PairwiseLrt,
        execution: Execution::Sequential,
    };
    let mut medians = Vec::new();
    for (i, &n) in TIMING_SIZES.iter().enumerate() {
        let (_, g) = sim(n, TIMING_COLORS, 60_000 + i as u64 * 2);
        let mut runs = Vec::with_capacity(TIMING_RUNS);
        for _ in 0..TIMING_RUNS {
            let start = Instant::now();
            let report = recognize_ncbmg_with(&g, &opts);
            runs.push(start.elapsed());
            ensure!(report.is_accepted(), "|L|={n} rejected");
        }
        medians.push(median(runs));
    }
    let mut ratios = Vec::new();
    for w in medians.windows(2) {
        let r = w[1].as_secs_f64() / w[0].as_secs_f64().max(1e-9);
        ratios.push(r);
        ensure!(r <= TIMING_RATIO_LIMIT, "growth ratio {r:.2} > {TIMING_RATIO_LIMIT} (medians {medians:?})");
    }
    let largest = *medians.last().unwrap();
    ensure!(largest < TIMING_LARGEST_LIMIT, "|L|=400 took {largest:?}");
    let shown: Vec<String> = TIMING_SIZES.iter().zip(&medians).map(|(n, d)| format!("{n}:{d:.2?}")).collect();
    let rs: Vec<String> = ratios.iter().map(|r| format!("{r:.1}")).collect();
    Ok(format!("medians {} ratios {}", shown.join(" "), rs.join("/")))
}

fn rbmg_condition() -> Outcome {
    for seed in 0..RBMG_INSTANCES as u64 {
        let n = 2 + (seed % 49) as usize;
        let (t, _) = sim(n, 2, 70_000 + seed);
        let verdict = check_2crbmg_necessary(&rbmg_of_tree(&t)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(verdict == RbmgVerdict::Pass, "seed {seed}: {verdict:?}");
    }
    let p4 = UndirectedColoredGraph::from_names(
        &[("u", "red"), ("v", "blue"), ("x", "red"), ("w", "blue")],
        &[("u", "v"), ("v", "x"), ("x", "w")],
    )
    .unwrap();
    ensure!(matches!(check_2crbmg_necessary(&p4).unwrap(), RbmgVerdict::Fail(_)), "P4 passes");
    let sym = rbmg_of_tree(&path_symmetric_part_tree());
    let path: Vec<(String, String)> = sym.edges().map(|(a, b)| (sym.name(a).to_string(), sym.name(b).to_string())).collect();
    let want: Vec<(String, String)> = [("u", "v"), ("v", "x"), ("w", "x")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure!(path == want, "symmetric part {path:?}");
    Ok(format!("{RBMG_INSTANCES} simulated symmetric parts pass; P4 fails"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("round trip", round_trip),
        ("LRT minimality", minimality),
        ("route agreement", route_agreement),
        ("worked counterexamples", known_counterexamples),
        ("axiom soundness", axiom_soundness),
        ("BUILD correctness", build_correctness),
        ("complexity smoke test", complexity_smoke),
        ("RBMG necessary condition", rbmg_condition),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {title}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {title}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
