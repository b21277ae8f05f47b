//! Rooted leaf-colored phylogenetic trees.

mod lca;

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::ids::{Color, Labels, VertexId};
use crate::triples::{RootedTriple, TripleSet};
use lca::LcaIndex;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no leaves")]
    Empty,
    #[error("inner node without children")]
    EmptyInnerNode,
    #[error("leaf `{0}` occurs more than once")]
    DuplicateLeaf(String),
    #[error("leaf `{0}` has no color")]
    MissingColor(String),
    #[error("node {0} is not part of the tree")]
    UnknownNode(u32),
    #[error("leaf `{0}` is not part of the tree")]
    UnknownLeaf(String),
    #[error("edge {0} -> {1} is not an inner edge of the tree")]
    NotInnerEdge(u32, u32),
    #[error("leaf `{leaf}` is colored `{left}` in one tree and `{right}` in the other")]
    ColorMismatch {
        leaf: String,
        left: String,
        right: String,
    },
    #[error("trees use different label tables")]
    LabelMismatch,
}

/// Node handle, valid for the tree that produced it. Nodes are numbered in preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Tree edge from `parent` to `child`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub parent: NodeId,
    pub child: NodeId,
}

/// Uncolored nested tree shape used to assemble trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Leaf(VertexId),
    Inner(Vec<Topology>),
}

impl Topology {
    pub fn leaves(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Topology::Leaf(v) => out.push(*v),
                Topology::Inner(ch) => stack.extend(ch.iter()),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    leaf: Option<(VertexId, Color)>,
    depth: u32,
    end: u32,
}

/// Phylogenetic tree whose leaves carry vertex ids and colors.
///
/// Stored canonically: no single-child nodes, children ordered by smallest descendant
/// leaf id, nodes numbered in preorder. Structural equality is therefore tree equality.
#[derive(Clone, Debug)]
pub struct LeafColoredTree {
    labels: Arc<Labels>,
    nodes: Vec<Node>,
    leaves: Vec<(VertexId, NodeId)>,
    lca: LcaIndex,
}

struct RawNode {
    children: Vec<usize>,
    leaf: Option<VertexId>,
    dissolve: bool,
}

enum State {
    Dropped,
    Node(usize),
    Spliced(Vec<usize>),
}

impl LeafColoredTree {
    /// Builds a canonical tree from a topology; `color` must be defined on every leaf.
    pub fn new<F>(labels: Arc<Labels>, topology: &Topology, color: F) -> Result<Self, TreeError>
    where
        F: Fn(VertexId) -> Option<Color>,
    {
        let mut raw: Vec<RawNode> = Vec::new();
        let mut stack: Vec<(&Topology, usize)> = vec![(topology, usize::MAX)];
        while let Some((t, parent)) = stack.pop() {
            let id = raw.len();
            if parent != usize::MAX {
                raw[parent].children.push(id);
            }
            match t {
                Topology::Leaf(v) => raw.push(RawNode {
                    children: Vec::new(),
                    leaf: Some(*v),
                    dissolve: false,
                }),
                Topology::Inner(ch) => {
                    raw.push(RawNode {
                        children: Vec::new(),
                        leaf: None,
                        dissolve: false,
                    });
                    for c in ch.iter().rev() {
                        stack.push((c, id));
                    }
                }
            }
        }
        Self::assemble(labels, raw, &color, false)
    }

    /// Star tree on the given colored leaves.
    pub fn star(labels: Arc<Labels>, leaves: &[(VertexId, Color)]) -> Result<Self, TreeError> {
        let topo = match leaves {
            [] => return Err(TreeError::Empty),
            [(v, _)] => Topology::Leaf(*v),
            _ => Topology::Inner(leaves.iter().map(|(v, _)| Topology::Leaf(*v)).collect()),
        };
        let mut sorted = leaves.to_vec();
        sorted.sort();
        Self::new(labels, &topo, |v| {
            sorted.binary_search_by_key(&v, |p| p.0).ok().map(|k| sorted[k].1)
        })
    }

    /// Joins trees over the same label table under a fresh root.
    pub fn join(trees: &[LeafColoredTree]) -> Result<Self, TreeError> {
        let first = trees.first().ok_or(TreeError::Empty)?;
        if trees.len() == 1 {
            return Ok(first.clone());
        }
        let mut colors: Vec<(VertexId, Color)> = Vec::new();
        for t in trees {
            if !same_labels(&t.labels, &first.labels) {
                return Err(TreeError::LabelMismatch);
            }
            colors.extend(t.leaves.iter().map(|&(v, n)| (v, t.nodes[n.index()].leaf.unwrap().1)));
        }
        colors.sort();
        let topo = Topology::Inner(trees.iter().map(|t| t.topology()).collect());
        Self::new(first.labels.clone(), &topo, |v| {
            colors.binary_search_by_key(&v, |p| p.0).ok().map(|k| colors[k].1)
        })
    }

    /// Raw nodes must list parents before children; node 0 is the root.
    fn assemble(
        labels: Arc<Labels>,
        mut raw: Vec<RawNode>,
        color: &dyn Fn(VertexId) -> Option<Color>,
        prune_empty: bool,
    ) -> Result<Self, TreeError> {
        let n = raw.len();
        let mut state: Vec<State> = (0..n).map(|_| State::Dropped).collect();
        let mut min_leaf = vec![VertexId(u32::MAX); n];
        for v in (0..n).rev() {
            if let Some(x) = raw[v].leaf {
                min_leaf[v] = x;
                state[v] = State::Node(v);
                continue;
            }
            let mut kids = Vec::with_capacity(raw[v].children.len());
            for &c in &raw[v].children {
                match std::mem::replace(&mut state[c], State::Dropped) {
                    State::Dropped => {}
                    State::Node(r) => kids.push(r),
                    State::Spliced(list) => kids.extend(list),
                }
            }
            state[v] = if raw[v].dissolve {
                State::Spliced(kids)
            } else {
                match kids.len() {
                    0 if prune_empty => State::Dropped,
                    0 => return Err(TreeError::EmptyInnerNode),
                    1 => State::Node(kids[0]),
                    _ => {
                        kids.sort_by_key(|&k| min_leaf[k]);
                        min_leaf[v] = min_leaf[kids[0]];
                        raw[v].children = kids;
                        State::Node(v)
                    }
                }
            };
        }
        let root = match std::mem::replace(&mut state[0], State::Dropped) {
            State::Node(r) => r,
            State::Dropped => return Err(TreeError::Empty),
            State::Spliced(_) => unreachable!("root cannot be dissolved"),
        };

        let mut nodes: Vec<Node> = Vec::new();
        let mut leaves = Vec::new();
        let mut stack: Vec<(usize, Option<NodeId>, u32)> = vec![(root, None, 0)];
        while let Some((r, parent, depth)) = stack.pop() {
            let id = NodeId(nodes.len() as u32);
            if let Some(p) = parent {
                nodes[p.index()].children.push(id);
            }
            let leaf = match raw[r].leaf {
                Some(x) => {
                    let c = color(x)
                        .ok_or_else(|| TreeError::MissingColor(labels.vertex_name(x).to_string()))?;
                    leaves.push((x, id));
                    Some((x, c))
                }
                None => None,
            };
            nodes.push(Node {
                parent,
                children: Vec::new(),
                leaf,
                depth,
                end: 0,
            });
            for &c in raw[r].children.iter().rev() {
                stack.push((c, Some(id), depth + 1));
            }
        }
        for v in (0..nodes.len()).rev() {
            let end = match nodes[v].children.last() {
                Some(&c) => nodes[c.index()].end,
                None => v as u32 + 1,
            };
            nodes[v].end = end;
        }
        leaves.sort();
        if let Some(w) = leaves.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(TreeError::DuplicateLeaf(labels.vertex_name(w[0].0).to_string()));
        }
        let children: Vec<Vec<usize>> = nodes
            .iter()
            .map(|nd| nd.children.iter().map(|c| c.index()).collect())
            .collect();
        let lca = LcaIndex::new(&children, nodes.iter().map(|nd| nd.depth).collect(), 0);
        Ok(LeafColoredTree {
            labels,
            nodes,
            leaves,
            lca,
        })
    }

    fn to_raw(&self) -> Vec<RawNode> {
        self.nodes
            .iter()
            .map(|nd| RawNode {
                children: nd.children.iter().map(|c| c.index()).collect(),
                leaf: nd.leaf.map(|p| p.0),
                dissolve: false,
            })
            .collect()
    }

    fn color_lookup(&self) -> impl Fn(VertexId) -> Option<Color> + '_ {
        move |v| self.color_of(v)
    }

    pub fn labels(&self) -> &Arc<Labels> {
        &self.labels
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf ids in increasing order.
    pub fn leaf_ids(&self) -> Vec<VertexId> {
        self.leaves.iter().map(|p| p.0).collect()
    }

    /// `(leaf id, node)` pairs sorted by leaf id.
    pub fn leaves(&self) -> &[(VertexId, NodeId)] {
        &self.leaves
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.nodes.len()
    }

    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.nodes[u.index()].leaf.is_some()
    }

    pub fn leaf_vertex(&self, u: NodeId) -> Option<VertexId> {
        self.nodes[u.index()].leaf.map(|p| p.0)
    }

    pub fn leaf_node(&self, v: VertexId) -> Option<NodeId> {
        self.leaves
            .binary_search_by_key(&v, |p| p.0)
            .ok()
            .map(|k| self.leaves[k].1)
    }

    pub fn color_of(&self, v: VertexId) -> Option<Color> {
        self.leaf_node(v).map(|n| self.nodes[n.index()].leaf.unwrap().1)
    }

    /// Leaf `(id, color)` pairs sorted by id.
    pub fn coloring(&self) -> Vec<(VertexId, Color)> {
        self.leaves
            .iter()
            .map(|&(v, n)| (v, self.nodes[n.index()].leaf.unwrap().1))
            .collect()
    }

    /// Sorted set of leaf colors.
    pub fn color_set(&self) -> Vec<Color> {
        let mut cs: Vec<Color> = self.coloring().into_iter().map(|p| p.1).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.nodes[u.index()].parent
    }

    pub fn children(&self, u: NodeId) -> &[NodeId] {
        &self.nodes[u.index()].children
    }

    pub fn depth(&self, u: NodeId) -> u32 {
        self.nodes[u.index()].depth
    }

    /// True iff `v` lies in the subtree of `u` (`v ⪯ u`).
    pub fn is_ancestor_or_self(&self, u: NodeId, v: NodeId) -> bool {
        u <= v && v.0 < self.nodes[u.index()].end
    }

    /// Nodes of the subtree below `u`, in preorder.
    pub fn subtree(&self, u: NodeId) -> impl Iterator<Item = NodeId> {
        (u.0..self.nodes[u.index()].end).map(NodeId)
    }

    /// Leaf ids below `u`, in preorder.
    pub fn leaves_below(&self, u: NodeId) -> Vec<VertexId> {
        self.subtree(u).filter_map(|n| self.leaf_vertex(n)).collect()
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> Result<NodeId, TreeError> {
        for w in [u, v] {
            if !self.contains(w) {
                return Err(TreeError::UnknownNode(w.0));
            }
        }
        Ok(self.lca_of(u, v))
    }

    pub(crate) fn lca_of(&self, u: NodeId, v: NodeId) -> NodeId {
        NodeId(self.lca.query(u.index(), v.index()) as u32)
    }

    /// Edges `parent -> v` where `v` is neither a leaf nor the root, in preorder of `v`.
    pub fn inner_edges(&self) -> Vec<Edge> {
        self.nodes()
            .filter(|&v| v.0 != 0 && !self.is_leaf(v))
            .map(|v| Edge {
                parent: self.parent(v).unwrap(),
                child: v,
            })
            .collect()
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|nd| nd.leaf.is_some() || nd.children.len() == 2)
    }

    /// Nested shape of this tree.
    pub fn topology(&self) -> Topology {
        let mut built: Vec<Option<Topology>> = (0..self.nodes.len()).map(|_| None).collect();
        for v in (0..self.nodes.len()).rev() {
            let t = match self.nodes[v].leaf {
                Some((x, _)) => Topology::Leaf(x),
                None => Topology::Inner(
                    self.nodes[v]
                        .children
                        .iter()
                        .map(|c| built[c.index()].take().unwrap())
                        .collect(),
                ),
            };
            built[v] = Some(t);
        }
        built[0].take().unwrap()
    }

    /// Leaf sets of all nodes in preorder, each sorted.
    pub fn clusters(&self) -> Vec<Vec<VertexId>> {
        self.nodes()
            .map(|u| {
                let mut c = self.leaves_below(u);
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Tree spanned by `keep`, with degree-two nodes suppressed.
    pub fn restrict(&self, keep: &[VertexId]) -> Result<Self, TreeError> {
        if keep.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut raw = self.to_raw();
        let mut marked = vec![false; self.nodes.len()];
        for &v in keep {
            let n = self
                .leaf_node(v)
                .ok_or_else(|| TreeError::UnknownLeaf(self.labels.vertex_name(v).to_string()))?;
            marked[n.index()] = true;
        }
        for (v, r) in raw.iter_mut().enumerate() {
            if r.leaf.is_some() && !marked[v] {
                r.leaf = None;
            }
        }
        Self::assemble(self.labels.clone(), raw, &self.color_lookup(), true)
    }

    /// Contracts every edge in `edges`; each must be an inner edge of this tree.
    pub fn contract_edges(&self, edges: &[Edge]) -> Result<Self, TreeError> {
        let mut raw = self.to_raw();
        for e in edges {
            let ok = self.contains(e.child)
                && e.child.0 != 0
                && !self.is_leaf(e.child)
                && self.parent(e.child) == Some(e.parent);
            if !ok {
                return Err(TreeError::NotInnerEdge(e.parent.0, e.child.0));
            }
            raw[e.child.index()].dissolve = true;
        }
        Self::assemble(self.labels.clone(), raw, &self.color_lookup(), false)
    }

    /// True iff `other` is obtained from the restriction of `self` to its leaves by contractions.
    pub fn displays(&self, other: &LeafColoredTree) -> Result<bool, TreeError> {
        if !same_labels(&self.labels, &other.labels) {
            return Err(TreeError::LabelMismatch);
        }
        for (v, c) in other.coloring() {
            match self.color_of(v) {
                None => return Err(TreeError::UnknownLeaf(self.labels.vertex_name(v).to_string())),
                Some(d) if d != c => {
                    return Err(TreeError::ColorMismatch {
                        leaf: self.labels.vertex_name(v).to_string(),
                        left: self.labels.color_name(d).to_string(),
                        right: self.labels.color_name(c).to_string(),
                    })
                }
                _ => {}
            }
        }
        let restricted = self.restrict(&other.leaf_ids())?;
        let known: HashSet<Vec<VertexId>> = restricted.clusters().into_iter().collect();
        Ok(other.clusters().iter().all(|c| known.contains(c)))
    }

    /// All triples `xy|z` with `lca(x,y)` strictly below `lca(x,y,z)`.
    pub fn triples(&self) -> TripleSet {
        let mut out = Vec::new();
        let n = self.leaves.len();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.lca_of(self.leaves[i].1, self.leaves[j].1);
                for k in 0..n {
                    if k != i && k != j && !self.is_ancestor_or_self(w, self.leaves[k].1) {
                        out.push(RootedTriple::new(self.leaves[i].0, self.leaves[j].0, self.leaves[k].0));
                    }
                }
            }
        }
        TripleSet::new(self.leaf_ids(), out).expect("triples lie in the leaf set")
    }
}

impl PartialEq for LeafColoredTree {
    fn eq(&self, other: &Self) -> bool {
        same_labels(&self.labels, &other.labels) && self.nodes == other.nodes
    }
}

impl Eq for LeafColoredTree {}

pub(crate) fn same_labels(a: &Arc<Labels>, b: &Arc<Labels>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
