//! Recognition of n-colored best match graphs and their least resolved trees.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::bmg::bmg_of_tree_with;
use crate::graph::{ColoredDigraph, Difference};
use crate::ids::{Color, VertexId};
use crate::par::{self, Execution};
use crate::tree::{Edge, LeafColoredTree, Topology};
use crate::triples::{build, build_from_trees, informative_triples, lrt_via_triples, tree_over, BuildError, TripleSet};
use crate::two_color::{difference_ids, explain_check, lrt_via_hierarchy, RedundancyError, TwoColorReject};

/// How the supertree of a connected component is assembled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Least resolved trees per color pair (hierarchy method), then BUILD on their triples.
    #[default]
    PairwiseLrt,
    /// BUILD on the union of informative triples of all two-colored subgraphs.
    InformativeDirect,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RecognizeOptions {
    pub route: Route,
    pub execution: Execution,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("arc {0} -> {1} joins vertices of the same color")]
    SameColorArc(VertexId, VertexId),
    #[error("component has colors {found:?}, the graph has {expected:?}")]
    ComponentColorMismatch {
        component: Vec<VertexId>,
        found: Vec<Color>,
        expected: Vec<Color>,
    },
    #[error("subgraph on colors {colors:?} is not a two-colored best match graph: {reason}")]
    TwoColorFailure {
        colors: (Color, Color),
        reason: TwoColorReject,
    },
    #[error("triples are inconsistent on {} leaves", .leaves.len())]
    TriplesInconsistent { leaves: Vec<VertexId> },
    #[error("candidate tree explains a different graph ({0:?})")]
    GraphMismatch(Difference),
}

impl Rejection {
    pub fn stage(&self) -> &'static str {
        match self {
            Rejection::SameColorArc(..) => "same-color-arc",
            Rejection::ComponentColorMismatch { .. } => "component-color-mismatch",
            Rejection::TwoColorFailure { .. } => "2cbmg-failure",
            Rejection::TriplesInconsistent { .. } => "triples-inconsistent",
            Rejection::GraphMismatch(_) => "graph-mismatch",
        }
    }

    pub fn witness(&self) -> Vec<VertexId> {
        match self {
            Rejection::SameColorArc(a, b) => vec![*a, *b],
            Rejection::ComponentColorMismatch { component, .. } => component.clone(),
            Rejection::TwoColorFailure { reason, .. } => reason.witness(),
            Rejection::TriplesInconsistent { leaves } => leaves.clone(),
            Rejection::GraphMismatch(d) => difference_ids(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(Rejection),
}

/// Outcome for the subgraph of one component induced by one color pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairResult {
    pub colors: (Color, Color),
    pub outcome: Result<LeafColoredTree, TwoColorReject>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub vertices: Vec<VertexId>,
    pub pairs: Vec<PairResult>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StageTimings {
    pub structure: Duration,
    pub pairs: Duration,
    pub supertree: Duration,
    pub gate: Duration,
}

#[derive(Clone, Debug)]
pub struct RecognitionReport {
    pub verdict: Verdict,
    pub components: Vec<ComponentReport>,
    pub lrt: Option<LeafColoredTree>,
    /// Set when the graph has a single color; it is then accepted iff it has no arcs.
    pub single_color: bool,
    pub timings: StageTimings,
}

impl RecognitionReport {
    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match &self.verdict {
            Verdict::Rejected(r) => Some(r),
            Verdict::Accepted => None,
        }
    }

    fn reject(mut self, r: Rejection) -> Self {
        self.verdict = Verdict::Rejected(r);
        self.lrt = None;
        self
    }
}

/// Least resolved tree of a two-colored graph with possibly several components,
/// each recognized via the hierarchy method and joined under a fresh root.
pub fn pair_lrt(g: &ColoredDigraph) -> Result<LeafColoredTree, TwoColorReject> {
    let comps = g.connected_components();
    if comps.len() == 1 {
        return lrt_via_hierarchy(g);
    }
    let mut trees = Vec::with_capacity(comps.len());
    for comp in comps {
        trees.push(lrt_via_hierarchy(&g.subgraph(&comp).expect("non-empty component"))?);
    }
    Ok(LeafColoredTree::join(&trees).expect("trees share the label table"))
}

fn color_pairs(colors: &[Color]) -> Vec<(Color, Color)> {
    let mut out = Vec::new();
    for (i, &s) in colors.iter().enumerate() {
        for &t in &colors[i + 1..] {
            out.push((s, t));
        }
    }
    out
}

pub fn recognize_ncbmg(g: &ColoredDigraph, route: Route) -> RecognitionReport {
    recognize_ncbmg_with(
        g,
        &RecognizeOptions {
            route,
            ..RecognizeOptions::default()
        },
    )
}

/// Decides whether `g` is a colored best match graph and, if so, returns its least resolved tree.
pub fn recognize_ncbmg_with(g: &ColoredDigraph, opts: &RecognizeOptions) -> RecognitionReport {
    let exec = opts.execution;
    let mut timings = StageTimings::default();
    let clock = Instant::now();
    let mut report = RecognitionReport {
        verdict: Verdict::Accepted,
        components: Vec::new(),
        lrt: None,
        single_color: false,
        timings,
    };

    if let Some((a, b)) = g.same_color_arc() {
        return report.reject(Rejection::SameColorArc(g.id(a), g.id(b)));
    }
    let colors = g.color_set();
    let comps = g.connected_components();
    let subgraphs: Vec<ColoredDigraph> = comps.iter().map(|c| g.subgraph(c).expect("non-empty")).collect();
    report.components = subgraphs
        .iter()
        .map(|s| ComponentReport {
            vertices: s.ids().to_vec(),
            pairs: Vec::new(),
        })
        .collect();

    if colors.len() == 1 {
        report.single_color = true;
        let star = LeafColoredTree::star(g.labels().clone(), &coloring(g)).expect("non-empty graph");
        report.lrt = Some(star);
        timings.structure = clock.elapsed();
        report.timings = timings;
        return report;
    }
    for s in &subgraphs {
        let found = s.color_set();
        if found != colors {
            return report.reject(Rejection::ComponentColorMismatch {
                component: s.ids().to_vec(),
                found,
                expected: colors,
            });
        }
    }
    timings.structure = clock.elapsed();

    let pairs = color_pairs(&colors);
    let clock = Instant::now();
    let per_component: Vec<Vec<(PairResult, ColoredDigraph)>> = par::map(exec, &subgraphs, |comp| {
        par::map(exec, &pairs, |&(s, t)| {
            let sub = comp.induced_subgraph(&[s, t]).expect("component carries every color");
            let outcome = match opts.route {
                Route::PairwiseLrt => pair_lrt(&sub),
                Route::InformativeDirect => lrt_via_triples(&sub),
            };
            (PairResult { colors: (s, t), outcome }, sub)
        })
    });
    timings.pairs = clock.elapsed();
    for (k, results) in per_component.iter().enumerate() {
        report.components[k].pairs = results.iter().map(|r| r.0.clone()).collect();
    }
    for results in &per_component {
        for (pr, _) in results {
            if let Err(reason) = &pr.outcome {
                report.timings = timings;
                return report.reject(Rejection::TwoColorFailure {
                    colors: pr.colors,
                    reason: reason.clone(),
                });
            }
        }
    }

    let clock = Instant::now();
    let parts: Vec<Result<Topology, BuildError>> = par::map_range(exec, subgraphs.len(), |k| {
        let comp = &subgraphs[k];
        match opts.route {
            Route::PairwiseLrt => {
                let trees: Vec<LeafColoredTree> = per_component[k]
                    .iter()
                    .map(|(pr, _)| pr.outcome.clone().expect("checked above"))
                    .collect();
                build_from_trees(&trees, comp.ids())
            }
            Route::InformativeDirect => {
                let sets: Vec<TripleSet> = per_component[k].iter().map(|(_, sub)| informative_triples(sub)).collect();
                build(&TripleSet::union(&sets), comp.ids())
            }
        }
    });
    let mut topologies = Vec::with_capacity(parts.len());
    for part in parts {
        match part {
            Ok(t) => topologies.push(t),
            Err(BuildError::Inconsistent { leaves }) => {
                report.timings = timings;
                return report.reject(Rejection::TriplesInconsistent { leaves });
            }
            Err(BuildError::EmptyLeafSet) => unreachable!("components are non-empty"),
        }
    }
    let topo = if topologies.len() == 1 {
        topologies.pop().unwrap()
    } else {
        Topology::Inner(topologies)
    };
    let tree = tree_over(g, &topo);
    timings.supertree = clock.elapsed();

    let clock = Instant::now();
    let explained = bmg_of_tree_with(&tree, exec);
    let diff = explained.first_difference(g);
    timings.gate = clock.elapsed();
    report.timings = timings;
    match diff {
        None => {
            report.lrt = Some(tree);
            report
        }
        Some(d) => report.reject(Rejection::GraphMismatch(d)),
    }
}

/// Recognizes every graph in `graphs`; the batch itself is spread over the pool.
pub fn recognize_batch(graphs: &[ColoredDigraph], opts: &RecognizeOptions) -> Vec<RecognitionReport> {
    let inner = RecognizeOptions {
        execution: Execution::Sequential,
        ..*opts
    };
    par::map(opts.execution, graphs, |g| recognize_ncbmg_with(g, &inner))
}

fn coloring(g: &ColoredDigraph) -> Vec<(VertexId, Color)> {
    (0..g.len()).map(|i| (g.id(i), g.color(i))).collect()
}

/// Inner edges `uv` such that `v` is not the color-`s` root of any class for any color `s`
/// occurring below `u` but outside the subtree of `v`.
pub fn redundant_edges_n(tree: &LeafColoredTree, g: &ColoredDigraph) -> Result<Vec<Edge>, RedundancyError> {
    explain_check(tree, g)?;
    let palette = g.color_set();
    let k = palette.len();
    let slot = |c: Color| palette.binary_search(&c).unwrap();
    let p = g.thinness_partition();
    let leaf = |i: usize| tree.leaves()[i].1;
    let nodes = tree.node_count();

    let mut root_colors = vec![FixedBitSet::with_capacity(k); nodes];
    for a in 0..p.len() {
        for &s in &palette {
            if s == p.color(a) {
                continue;
            }
            let targets: Vec<usize> = p
                .out(a)
                .iter()
                .filter(|&&b| p.color(b) == s)
                .flat_map(|&b| p.class(b).iter().copied())
                .collect();
            if targets.is_empty() {
                continue;
            }
            let mut top = leaf(p.class(a)[0]);
            for &x in p.class(a).iter().chain(&targets) {
                top = tree.lca_of(top, leaf(x));
            }
            debug_assert!({
                let mut below: Vec<usize> = tree
                    .leaves_below(top)
                    .into_iter()
                    .map(|v| g.index_of(v).unwrap())
                    .filter(|&i| g.color(i) == s)
                    .collect();
                below.sort_unstable();
                let mut want = targets.clone();
                want.sort_unstable();
                below == want
            });
            root_colors[top.index()].insert(slot(s));
        }
    }

    let mut below = vec![FixedBitSet::with_capacity(k); nodes];
    for u in (0..nodes).rev() {
        let node = crate::tree::NodeId(u as u32);
        if let Some(v) = tree.leaf_vertex(node) {
            below[u].insert(slot(tree.color_of(v).unwrap()));
        } else {
            for &c in tree.children(node) {
                let child = below[c.index()].clone();
                below[u].union_with(&child);
            }
        }
    }

    Ok(tree
        .inner_edges()
        .into_iter()
        .filter(|e| {
            let mut outside = FixedBitSet::with_capacity(k);
            for &c in tree.children(e.parent) {
                if c != e.child {
                    outside.union_with(&below[c.index()]);
                }
            }
            outside.is_disjoint(&root_colors[e.child.index()])
        })
        .collect())
}
