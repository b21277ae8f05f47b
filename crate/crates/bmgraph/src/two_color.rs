//! Two-colored best match graphs: axioms, reachable sets and least resolved trees.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::bmg::bmg_of_tree;
use crate::graph::{ColoredDigraph, Difference, ThinnessPartition};
use crate::hierarchy::{canonical_order, laminar_violation, Hierarchy, HierarchyError};
use crate::ids::VertexId;
use crate::tree::{Edge, LeafColoredTree, Topology};
use crate::triples::tree_over;

/// Per-class neighborhoods on the class quotient, as bitsets over class indices.
#[derive(Clone, Debug)]
pub struct ClassNeighborhoodTables {
    n: Vec<FixedBitSet>,
    nn: Vec<FixedBitSet>,
    nnn: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
    y: Vec<FixedBitSet>,
}

fn expand(sets: &[FixedBitSet], from: &FixedBitSet, k: usize) -> FixedBitSet {
    let mut acc = FixedBitSet::with_capacity(k);
    for g in from.ones() {
        acc.union_with(&sets[g]);
    }
    acc
}

fn bits(k: usize, xs: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(k);
    for &x in xs {
        s.insert(x);
    }
    s
}

impl ClassNeighborhoodTables {
    pub fn new(p: &ThinnessPartition) -> Self {
        let k = p.len();
        let n: Vec<FixedBitSet> = (0..k).map(|a| bits(k, p.out(a))).collect();
        let inn = (0..k).map(|a| bits(k, p.inn(a))).collect();
        let nn: Vec<FixedBitSet> = n.iter().map(|s| expand(&n, s, k)).collect();
        let nnn = nn.iter().map(|s| expand(&n, s, k)).collect();
        let y = (0..k)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(k);
                for (b, reach) in nn.iter().enumerate() {
                    if !n[a].is_disjoint(reach) {
                        row.insert(b);
                    }
                }
                row
            })
            .collect();
        ClassNeighborhoodTables { n, nn, nnn, inn, y }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// `alpha ⊆ N(beta)`.
    pub fn x(&self, alpha: usize, beta: usize) -> bool {
        self.n[beta].contains(alpha)
    }

    /// `alpha ⊆ N(N(beta))`.
    pub fn q2(&self, alpha: usize, beta: usize) -> bool {
        self.nn[beta].contains(alpha)
    }

    /// `N(alpha) ∩ N(N(beta)) ≠ ∅`.
    pub fn y(&self, alpha: usize, beta: usize) -> bool {
        self.y[alpha].contains(beta)
    }

    pub fn n(&self, alpha: usize) -> &FixedBitSet {
        &self.n[alpha]
    }

    pub fn nn(&self, alpha: usize) -> &FixedBitSet {
        &self.nn[alpha]
    }

    pub fn nnn(&self, alpha: usize) -> &FixedBitSet {
        &self.nnn[alpha]
    }

    pub fn inn(&self, alpha: usize) -> &FixedBitSet {
        &self.inn[alpha]
    }
}

/// Reasons a graph fails the two-color axioms, including precondition failures.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    #[error("expected exactly two colors, found {0}")]
    WrongColorCount(usize),
    #[error("arc {0} -> {1} joins vertices of the same color")]
    SameColorArc(VertexId, VertexId),
    #[error("graph is not connected")]
    Disconnected { component: Vec<VertexId> },
    #[error("vertex {0} has no out-neighbor")]
    Sink(VertexId),
    #[error("N1 fails for classes {alpha:?} and {beta:?}")]
    N1 { alpha: Vec<VertexId>, beta: Vec<VertexId> },
    #[error("N2 fails for class {alpha:?}")]
    N2 { alpha: Vec<VertexId> },
    #[error("N3 fails for classes {alpha:?} and {beta:?}")]
    N3 { alpha: Vec<VertexId>, beta: Vec<VertexId> },
}

impl AxiomFailure {
    pub fn name(&self) -> &'static str {
        match self {
            AxiomFailure::WrongColorCount(_) => "wrong-color-count",
            AxiomFailure::SameColorArc(..) => "same-color-arc",
            AxiomFailure::Disconnected { .. } => "disconnected",
            AxiomFailure::Sink(_) => "sink",
            AxiomFailure::N1 { .. } => "N1",
            AxiomFailure::N2 { .. } => "N2",
            AxiomFailure::N3 { .. } => "N3",
        }
    }

    pub fn witness(&self) -> Vec<VertexId> {
        match self {
            AxiomFailure::WrongColorCount(_) => Vec::new(),
            AxiomFailure::SameColorArc(a, b) => vec![*a, *b],
            AxiomFailure::Disconnected { component } => component.clone(),
            AxiomFailure::Sink(v) => vec![*v],
            AxiomFailure::N2 { alpha } => alpha.clone(),
            AxiomFailure::N1 { alpha, beta } | AxiomFailure::N3 { alpha, beta } => {
                alpha.iter().chain(beta).copied().collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass,
    Fail(AxiomFailure),
}

fn preconditions(g: &ColoredDigraph) -> Result<(), AxiomFailure> {
    let colors = g.color_set();
    if colors.len() != 2 {
        return Err(AxiomFailure::WrongColorCount(colors.len()));
    }
    if let Some((a, b)) = g.same_color_arc() {
        return Err(AxiomFailure::SameColorArc(g.id(a), g.id(b)));
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        return Err(AxiomFailure::Disconnected {
            component: comps[0].iter().map(|&i| g.id(i)).collect(),
        });
    }
    if let Some(v) = (0..g.len()).find(|&v| g.out_neighbors(v).is_empty()) {
        return Err(AxiomFailure::Sink(g.id(v)));
    }
    Ok(())
}

fn axioms(g: &ColoredDigraph, p: &ThinnessPartition, t: &ClassNeighborhoodTables) -> Result<(), AxiomFailure> {
    let k = p.len();
    let members = |a: usize| p.member_ids(g, a);
    for a in 0..k {
        if !t.nnn(a).is_subset(t.n(a)) {
            return Err(AxiomFailure::N2 { alpha: members(a) });
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            let premise = !t.q2(a, b) && !t.q2(b, a) && !t.n(a).is_disjoint(t.n(b));
            if premise {
                let nested = t.n(a).is_subset(t.n(b)) || t.n(b).is_subset(t.n(a));
                if t.inn(a) != t.inn(b) || !nested {
                    return Err(AxiomFailure::N3 {
                        alpha: members(a),
                        beta: members(b),
                    });
                }
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            if !t.x(a, b) && !t.x(b, a) && (t.y(a, b) || t.y(b, a)) {
                return Err(AxiomFailure::N1 {
                    alpha: members(a),
                    beta: members(b),
                });
            }
        }
    }
    Ok(())
}

/// Checks the structural preconditions, then N2, N3 and N1 on the class quotient.
pub fn check_axioms(g: &ColoredDigraph) -> AxiomVerdict {
    let run = || {
        preconditions(g)?;
        let p = g.thinness_partition();
        let t = ClassNeighborhoodTables::new(&p);
        axioms(g, &p, &t)
    };
    match run() {
        Ok(()) => AxiomVerdict::Pass,
        Err(f) => AxiomVerdict::Fail(f),
    }
}

/// Vertices reachable from class `alpha` along arcs (breadth-first), sorted.
pub fn reachable_set(g: &ColoredDigraph, p: &ThinnessPartition, alpha: usize) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &x in p.class(alpha) {
        for &y in g.out_neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.out_neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..g.len()).filter(|&v| seen[v]).collect()
}

/// Classes with the in-neighborhood of `alpha` and an out-neighborhood inside that of `alpha`.
pub fn q_classes(p: &ThinnessPartition, alpha: usize) -> Vec<usize> {
    let n_alpha = p.out(alpha);
    (0..p.len())
        .filter(|&b| p.inn(b) == p.inn(alpha) && p.out(b).iter().all(|c| n_alpha.binary_search(c).is_ok()))
        .collect()
}

/// `R(alpha) ∪ Q(alpha)` as sorted local indices.
pub fn extended_reachable_set(g: &ColoredDigraph, p: &ThinnessPartition, alpha: usize) -> Vec<usize> {
    let mut set = reachable_set(g, p, alpha);
    for b in q_classes(p, alpha) {
        set.extend_from_slice(p.class(b));
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Classes without in-neighbors.
pub fn w_classes(p: &ThinnessPartition) -> Vec<usize> {
    (0..p.len()).filter(|&a| p.inn(a).is_empty()).collect()
}

/// Why a two-colored graph has no least resolved tree.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TwoColorReject {
    #[error("expected exactly two colors, found {0}")]
    WrongColorCount(usize),
    #[error("axioms: {0}")]
    Axioms(AxiomFailure),
    #[error("reachable sets are not laminar")]
    Laminarity(Vec<VertexId>, Vec<VertexId>),
    #[error("Hasse diagram of the reachable sets is not a tree")]
    HasseNotTree(Vec<VertexId>),
    #[error("sibling reachable sets overlap")]
    SiblingOverlap(Vec<VertexId>, Vec<VertexId>),
    #[error("informative triples are inconsistent")]
    TriplesInconsistent(Vec<VertexId>),
    #[error("candidate tree explains a different graph ({0:?})")]
    GraphMismatch(Difference),
}

impl TwoColorReject {
    pub fn stage(&self) -> &'static str {
        match self {
            TwoColorReject::WrongColorCount(_) => "wrong-color-count",
            TwoColorReject::Axioms(_) => "axioms",
            TwoColorReject::Laminarity(..) => "laminarity",
            TwoColorReject::HasseNotTree(_) => "hasse-not-tree",
            TwoColorReject::SiblingOverlap(..) => "sibling-overlap",
            TwoColorReject::TriplesInconsistent(_) => "triples-inconsistent",
            TwoColorReject::GraphMismatch(_) => "graph-mismatch",
        }
    }

    /// Stage with the failing axiom appended, e.g. `axioms:N1`.
    pub fn detail(&self) -> String {
        match self {
            TwoColorReject::Axioms(f) => format!("axioms:{}", f.name()),
            other => other.stage().to_string(),
        }
    }

    pub fn witness(&self) -> Vec<VertexId> {
        match self {
            TwoColorReject::WrongColorCount(_) => Vec::new(),
            TwoColorReject::Axioms(f) => f.witness(),
            TwoColorReject::Laminarity(a, b) | TwoColorReject::SiblingOverlap(a, b) => {
                let mut w: Vec<VertexId> = a.iter().chain(b).copied().collect();
                w.sort_unstable();
                w.dedup();
                w
            }
            TwoColorReject::HasseNotTree(a) | TwoColorReject::TriplesInconsistent(a) => a.clone(),
            TwoColorReject::GraphMismatch(d) => difference_ids(d),
        }
    }
}

pub(crate) fn difference_ids(d: &Difference) -> Vec<VertexId> {
    match *d {
        Difference::Vertex(v) | Difference::Color(v) => vec![v],
        Difference::Arc(a, b) => vec![a, b],
    }
}

fn class_set_ids(g: &ColoredDigraph, p: &ThinnessPartition, set: &FixedBitSet) -> Vec<VertexId> {
    let mut ids: Vec<VertexId> = set.ones().flat_map(|a| p.member_ids(g, a)).collect();
    ids.sort_unstable();
    ids
}

/// Extended reachable sets `R'(alpha)` over class indices, assuming N2 (so `R = N ∪ NN`).
fn extended_class_sets(p: &ThinnessPartition, t: &ClassNeighborhoodTables) -> Vec<FixedBitSet> {
    (0..p.len())
        .map(|a| {
            let mut s = t.n(a).clone();
            s.union_with(t.nn(a));
            for b in q_classes(p, a) {
                s.insert(b);
            }
            s
        })
        .collect()
}

/// Least resolved tree of a connected two-colored graph via the hierarchy of extended
/// reachable sets; the result is verified to explain `g`.
pub fn lrt_via_hierarchy(g: &ColoredDigraph) -> Result<LeafColoredTree, TwoColorReject> {
    preconditions(g).map_err(TwoColorReject::Axioms)?;
    let p = g.thinness_partition();
    let t = ClassNeighborhoodTables::new(&p);
    axioms(g, &p, &t).map_err(TwoColorReject::Axioms)?;

    let sets = extended_class_sets(&p, &t);
    if let Some((a, b)) = laminar_violation(&sets) {
        return Err(TwoColorReject::Laminarity(
            class_set_ids(g, &p, &a),
            class_set_ids(g, &p, &b),
        ));
    }
    let h = Hierarchy::from_sets(p.len(), &sets).map_err(|e| match e {
        HierarchyError::SiblingOverlap(x, y) => {
            let ordered = canonical_order(&sets);
            TwoColorReject::SiblingOverlap(class_set_ids(g, &p, &ordered[x]), class_set_ids(g, &p, &ordered[y]))
        }
        _ => TwoColorReject::HasseNotTree(g.ids().to_vec()),
    })?;

    let mut leaves_at: Vec<Vec<VertexId>> = vec![Vec::new(); h.len()];
    for (a, s) in sets.iter().enumerate() {
        let node = h.position(s).expect("member of the hierarchy");
        leaves_at[node].extend(p.member_ids(g, a));
    }
    let mut built: Vec<Option<Topology>> = (0..h.len()).map(|_| None).collect();
    // sets are ordered by decreasing size, so children come after parents
    for v in (0..h.len()).rev() {
        let mut parts: Vec<Topology> = leaves_at[v].iter().map(|&x| Topology::Leaf(x)).collect();
        parts.extend(h.children(v).iter().map(|&c| built[c].take().unwrap()));
        built[v] = Some(Topology::Inner(parts));
    }
    let tree = tree_over(g, &built[0].take().unwrap());
    match bmg_of_tree(&tree).first_difference(g) {
        None => Ok(tree),
        Some(d) => Err(TwoColorReject::GraphMismatch(d)),
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RedundancyError {
    #[error("tree does not explain the graph (first difference {0:?})")]
    DoesNotExplain(Difference),
    #[error("expected exactly two colors, found {0}")]
    WrongColorCount(usize),
}

pub(crate) fn explain_check(tree: &LeafColoredTree, g: &ColoredDigraph) -> Result<(), RedundancyError> {
    match bmg_of_tree(tree).first_difference(g) {
        None => Ok(()),
        Some(d) => Err(RedundancyError::DoesNotExplain(d)),
    }
}

/// Inner edges `uv` of `tree` where `v` is not the root of any thinness class of `g`.
pub fn redundant_edges_2(tree: &LeafColoredTree, g: &ColoredDigraph) -> Result<Vec<Edge>, RedundancyError> {
    explain_check(tree, g)?;
    let colors = g.color_set();
    if colors.len() != 2 {
        return Err(RedundancyError::WrongColorCount(colors.len()));
    }
    let p = g.thinness_partition();
    let leaf = |i: usize| tree.leaves()[i].1;
    let mut is_root = vec![false; tree.node_count()];
    for a in 0..p.len() {
        let members = p.class(a);
        let mut top = leaf(members[0]);
        for &x in members {
            top = tree.lca_of(top, leaf(x));
        }
        for &b in p.out(a) {
            for &y in p.class(b) {
                top = tree.lca_of(top, leaf(y));
            }
        }
        is_root[top.index()] = true;
    }
    Ok(tree
        .inner_edges()
        .into_iter()
        .filter(|e| !is_root[e.child.index()])
        .collect())
}
