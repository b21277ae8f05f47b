//! Rooted triples, informative triples of two-colored graphs, and BUILD.

use thiserror::Error;

use crate::bmg::bmg_of_tree;
use crate::dsu::DisjointSets;
use crate::graph::ColoredDigraph;
use crate::ids::VertexId;
use crate::tree::{LeafColoredTree, NodeId, Topology};
use crate::two_color::TwoColorReject;

/// Triple `xy|z`; the pair is stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTriple {
    pub x: VertexId,
    pub y: VertexId,
    pub z: VertexId,
}

impl RootedTriple {
    pub fn new(a: VertexId, b: VertexId, z: VertexId) -> Self {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        RootedTriple { x, y, z }
    }

    fn distinct(&self) -> bool {
        self.x != self.y && self.x != self.z && self.y != self.z
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("triple {0:?} repeats a leaf")]
    Degenerate(RootedTriple),
    #[error("leaf {0} is outside the universe")]
    OutsideUniverse(VertexId),
}

/// Deduplicated, sorted triple collection over a leaf universe.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleSet {
    universe: Vec<VertexId>,
    triples: Vec<RootedTriple>,
}

impl TripleSet {
    pub fn new(mut universe: Vec<VertexId>, mut triples: Vec<RootedTriple>) -> Result<Self, TripleError> {
        universe.sort_unstable();
        universe.dedup();
        for t in &triples {
            if !t.distinct() {
                return Err(TripleError::Degenerate(*t));
            }
            for v in [t.x, t.y, t.z] {
                if universe.binary_search(&v).is_err() {
                    return Err(TripleError::OutsideUniverse(v));
                }
            }
        }
        triples.sort_unstable();
        triples.dedup();
        Ok(TripleSet { universe, triples })
    }

    /// Union of several sets; the universe is the union of universes.
    pub fn union<'a, I>(sets: I) -> Self
    where
        I: IntoIterator<Item = &'a TripleSet>,
    {
        let mut universe = Vec::new();
        let mut triples = Vec::new();
        for s in sets {
            universe.extend_from_slice(&s.universe);
            triples.extend_from_slice(&s.triples);
        }
        TripleSet::new(universe, triples).expect("members of valid sets")
    }

    pub fn universe(&self) -> &[VertexId] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &RootedTriple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootedTriple> {
        self.triples.iter()
    }

    pub fn is_subset(&self, other: &TripleSet) -> bool {
        self.triples.iter().all(|t| other.contains(t))
    }

    /// Triples with all three leaves in `leaves`.
    pub fn restricted_to(&self, leaves: &[VertexId]) -> TripleSet {
        let mut keep = leaves.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let inside = |v: &VertexId| keep.binary_search(v).is_ok();
        TripleSet {
            triples: self
                .triples
                .iter()
                .filter(|t| inside(&t.x) && inside(&t.y) && inside(&t.z))
                .copied()
                .collect(),
            universe: keep,
        }
    }
}

/// Triples forced by three-vertex induced subgraphs of a two-colored digraph.
///
/// For an arc `a -> b` and a third vertex `c`, `ab|c` is emitted when
/// - `a <-> b` and `c` has no arcs to or from `a`, `b`;
/// - `a <-> b`, `a` and `b` have no arcs to `c`, and `c` points only to the one of `a`, `b`
///   whose color differs from its own;
/// - `a -> b` is not reciprocated, `c` has the color of `b`, there are no arcs between `b`
///   and `c`, and between `a` and `c` there is either nothing or only `c -> a`.
pub fn informative_triples(g: &ColoredDigraph) -> TripleSet {
    let n = g.len();
    let mut out = Vec::new();
    for a in 0..n {
        for &b in g.out_neighbors(a) {
            if g.color(a) == g.color(b) {
                continue;
            }
            let mutual = g.has_arc(b, a);
            if mutual && a > b {
                continue;
            }
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                let (ac, bc) = (g.has_arc(a, c), g.has_arc(b, c));
                let (ca, cb) = (g.has_arc(c, a), g.has_arc(c, b));
                let hit = if mutual {
                    if ac || bc {
                        false
                    } else if !ca && !cb {
                        true
                    } else if ca != cb {
                        let target = if ca { a } else { b };
                        g.color(c) != g.color(target)
                    } else {
                        false
                    }
                } else {
                    g.color(c) == g.color(b) && !bc && !cb && !ac
                };
                if hit {
                    out.push(RootedTriple::new(g.id(a), g.id(b), g.id(c)));
                }
            }
        }
    }
    TripleSet::new(g.ids().to_vec(), out).expect("ids of the graph")
}

/// Aho graph `[R, L']`: edge `xy` for every `xy|z` in `R` with `x, y, z` in `L'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhoGraph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl AhoGraph {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Connected components, sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut sets = DisjointSets::new(self.vertices.len());
        let pos = |v: &VertexId| self.vertices.binary_search(v).unwrap();
        for (x, y) in &self.edges {
            sets.union(pos(x), pos(y));
        }
        sets.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|i| self.vertices[i]).collect())
            .collect()
    }
}

pub fn aho_graph(triples: &TripleSet, leaves: &[VertexId]) -> Result<AhoGraph, TripleError> {
    for v in leaves {
        if triples.universe.binary_search(v).is_err() {
            return Err(TripleError::OutsideUniverse(*v));
        }
    }
    let inner = triples.restricted_to(leaves);
    let mut edges: Vec<(VertexId, VertexId)> = inner.iter().map(|t| (t.x, t.y)).collect();
    edges.dedup();
    Ok(AhoGraph {
        vertices: inner.universe,
        edges,
    })
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("no leaves to build a tree on")]
    EmptyLeafSet,
    #[error("triples are inconsistent: the Aho graph on {} leaves is connected", .leaves.len())]
    Inconsistent { leaves: Vec<VertexId> },
}

/// Top-down BUILD recursion; `split` returns the Aho-graph components of a leaf set together
/// with the state each component recurses on.
fn aho_recursion<S, F>(leaves: Vec<VertexId>, state: S, mut split: F) -> Result<Topology, BuildError>
where
    F: FnMut(&[VertexId], S) -> Vec<(Vec<VertexId>, S)>,
{
    if leaves.is_empty() {
        return Err(BuildError::EmptyLeafSet);
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut leaf: Vec<Option<VertexId>> = vec![None];
    let mut stack = vec![(0usize, leaves, state)];
    while let Some((id, set, st)) = stack.pop() {
        if set.len() == 1 {
            leaf[id] = Some(set[0]);
            continue;
        }
        let parts = split(&set, st);
        if parts.len() < 2 {
            return Err(BuildError::Inconsistent { leaves: set });
        }
        let first = children.len();
        for _ in 0..parts.len() {
            children.push(Vec::new());
            leaf.push(None);
        }
        children[id] = (first..first + parts.len()).collect();
        for (k, (p, s)) in parts.into_iter().enumerate().rev() {
            stack.push((first + k, p, s));
        }
    }
    let mut built: Vec<Option<Topology>> = (0..children.len()).map(|_| None).collect();
    for v in (0..children.len()).rev() {
        built[v] = Some(match leaf[v] {
            Some(x) => Topology::Leaf(x),
            None => Topology::Inner(children[v].iter().map(|&c| built[c].take().unwrap()).collect()),
        });
    }
    Ok(built[0].take().unwrap())
}

/// BUILD on `triples` over `leaves`; triples not contained in `leaves` are ignored.
pub fn build(triples: &TripleSet, leaves: &[VertexId]) -> Result<Topology, BuildError> {
    let mut set = leaves.to_vec();
    set.sort_unstable();
    set.dedup();
    let inner: Vec<RootedTriple> = triples.restricted_to(&set).triples;
    let size = set.last().map_or(0, |v| v.index() + 1);
    let mut pos = vec![0usize; size];
    aho_recursion(set, inner, |ls, trs| {
        for (k, v) in ls.iter().enumerate() {
            pos[v.index()] = k;
        }
        let mut sets = DisjointSets::new(ls.len());
        for t in &trs {
            sets.union(pos[t.x.index()], pos[t.y.index()]);
        }
        let groups = sets.groups();
        let mut group_of = vec![0; ls.len()];
        for (g, members) in groups.iter().enumerate() {
            for &m in members {
                group_of[m] = g;
            }
        }
        let mut parts: Vec<(Vec<VertexId>, Vec<RootedTriple>)> = groups
            .iter()
            .map(|m| (m.iter().map(|&i| ls[i]).collect(), Vec::new()))
            .collect();
        for t in trs {
            let g = group_of[pos[t.x.index()]];
            if group_of[pos[t.z.index()]] == g {
                parts[g].1.push(t);
            }
        }
        parts
    })
}

/// BUILD on the union of the triple sets of `trees`, without materializing the triples.
///
/// For a leaf set `L'`, the triples of a tree inside `L'` connect exactly the leaves that
/// share a child of the root of the tree restricted to `L'`.
pub fn build_from_trees(trees: &[LeafColoredTree], leaves: &[VertexId]) -> Result<Topology, BuildError> {
    let mut set = leaves.to_vec();
    set.sort_unstable();
    set.dedup();
    let size = set.last().map_or(0, |v| v.index() + 1);
    let mut pos = vec![0usize; size];
    aho_recursion(set, (), |ls, ()| {
        for (k, v) in ls.iter().enumerate() {
            pos[v.index()] = k;
        }
        let mut sets = DisjointSets::new(ls.len());
        for t in trees {
            let present: Vec<(usize, NodeId)> = ls
                .iter()
                .enumerate()
                .filter_map(|(k, &v)| t.leaf_node(v).map(|n| (k, n)))
                .collect();
            if present.len() < 3 {
                continue;
            }
            let top = present[1..].iter().fold(present[0].1, |w, p| t.lca_of(w, p.1));
            let kids = t.children(top);
            let mut first_in: Vec<Option<usize>> = vec![None; kids.len()];
            for &(k, n) in &present {
                let c = kids.partition_point(|&c| c <= n) - 1;
                match first_in[c] {
                    Some(r) => {
                        sets.union(r, k);
                    }
                    None => first_in[c] = Some(k),
                }
            }
        }
        sets.groups()
            .into_iter()
            .map(|m| (m.into_iter().map(|i| ls[i]).collect(), ()))
            .collect()
    })
}

/// Least resolved tree of a two-colored graph via BUILD on its informative triples.
///
/// Components are built separately and joined under a fresh root.
pub fn lrt_via_triples(g: &ColoredDigraph) -> Result<LeafColoredTree, TwoColorReject> {
    let colors = g.color_set();
    if colors.len() != 2 {
        return Err(TwoColorReject::WrongColorCount(colors.len()));
    }
    let mut parts = Vec::new();
    for comp in g.connected_components() {
        let sub = g.subgraph(&comp).expect("components are non-empty");
        let triples = informative_triples(&sub);
        let topo = build(&triples, sub.ids()).map_err(|e| match e {
            BuildError::Inconsistent { leaves } => TwoColorReject::TriplesInconsistent(leaves),
            BuildError::EmptyLeafSet => unreachable!(),
        })?;
        parts.push(topo);
    }
    let topo = if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Topology::Inner(parts)
    };
    let tree = tree_over(g, &topo);
    let explained = bmg_of_tree(&tree);
    match explained.first_difference(g) {
        None => Ok(tree),
        Some(d) => Err(TwoColorReject::GraphMismatch(d)),
    }
}

/// Colors a topology over the vertices of `g` with the colors of `g`.
pub(crate) fn tree_over(g: &ColoredDigraph, topo: &Topology) -> LeafColoredTree {
    LeafColoredTree::new(g.labels().clone(), topo, |v| g.index_of(v).map(|i| g.color(i)))
        .expect("topology over graph vertices")
}
