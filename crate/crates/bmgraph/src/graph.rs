//! Vertex-colored digraphs, thinness classes and symmetric parts.

use std::sync::Arc;

use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::ids::{Color, Labels, VertexId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("vertex `{0}` is not declared")]
    UnknownVertex(String),
    #[error("color `{0}` does not occur in the graph")]
    UnknownColor(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("arc `{0}` -> `{1}` declared twice")]
    DuplicateArc(String, String),
    #[error("edge `{0}` -- `{1}` joins two vertices of the same color")]
    SameColorEdge(String, String),
}

/// Loop-free digraph whose vertices carry colors.
///
/// Vertices are stored in increasing [`VertexId`] order; algorithms address them by
/// position ("local index"). Subgraphs keep the shared label table and original ids.
#[derive(Clone, Debug)]
pub struct ColoredDigraph {
    labels: Arc<Labels>,
    ids: Vec<VertexId>,
    colors: Vec<Color>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arc_count: usize,
}

/// First observed difference between two graphs over the same label table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Difference {
    Vertex(VertexId),
    Color(VertexId),
    Arc(VertexId, VertexId),
}

impl ColoredDigraph {
    /// Builds a graph from vertex/color pairs and arcs given by id.
    pub fn new<A>(
        labels: Arc<Labels>,
        mut vertices: Vec<(VertexId, Color)>,
        arcs: A,
    ) -> Result<Self, GraphError>
    where
        A: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateVertex(labels.vertex_name(w[0].0).to_string()));
            }
        }
        let ids: Vec<VertexId> = vertices.iter().map(|p| p.0).collect();
        let colors = vertices.iter().map(|p| p.1).collect();
        let n = ids.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let find = |v: VertexId| {
            ids.binary_search(&v)
                .map_err(|_| GraphError::UnknownVertex(labels.vertex_name(v).to_string()))
        };
        for (a, b) in arcs {
            let (i, j) = (find(a)?, find(b)?);
            if i == j {
                return Err(GraphError::SelfLoop(labels.vertex_name(a).to_string()));
            }
            out[i].push(j);
            inn[j].push(i);
        }
        let mut arc_count = 0;
        for (i, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateArc(
                    labels.vertex_name(ids[i]).to_string(),
                    labels.vertex_name(ids[w[0]]).to_string(),
                ));
            }
            arc_count += list.len();
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        Ok(ColoredDigraph {
            labels,
            ids,
            colors,
            out,
            inn,
            arc_count,
        })
    }

    /// Convenience constructor from names, e.g. for tests and small examples.
    pub fn from_names(vertices: &[(&str, &str)], arcs: &[(&str, &str)]) -> Result<Self, GraphError> {
        let labels = Arc::new(Labels::new(
            vertices.iter().map(|v| v.0),
            vertices.iter().map(|v| v.1),
        ));
        let vs = vertices
            .iter()
            .map(|(v, c)| (labels.vertex(v).unwrap(), labels.color(c).unwrap()))
            .collect();
        let mut resolved = Vec::with_capacity(arcs.len());
        for (a, b) in arcs {
            let ia = labels.vertex(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = labels.vertex(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            resolved.push((ia, ib));
        }
        Self::new(labels, vs, resolved)
    }

    pub(crate) fn from_parts(
        labels: Arc<Labels>,
        ids: Vec<VertexId>,
        colors: Vec<Color>,
        out: Vec<Vec<usize>>,
    ) -> Self {
        let n = ids.len();
        let mut inn = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (i, list) in out.iter().enumerate() {
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
            arc_count += list.len();
            for &j in list {
                inn[j].push(i);
            }
        }
        ColoredDigraph {
            labels,
            ids,
            colors,
            out,
            inn,
            arc_count,
        }
    }

    pub fn labels(&self) -> &Arc<Labels> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Always false: graphs are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn name(&self, i: usize) -> &str {
        self.labels.vertex_name(self.ids[i])
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn color(&self, i: usize) -> Color {
        self.colors[i]
    }

    pub fn vertex_colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.inn[i]
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.out[i].binary_search(&j).is_ok()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Arcs as local index pairs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&j| (i, j)))
    }

    /// Sorted set of colors that occur on some vertex.
    pub fn color_set(&self) -> Vec<Color> {
        let mut cs = self.colors.clone();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn vertices_of_color(&self, c: Color) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.colors[i] == c).collect()
    }

    /// First arc whose endpoints share a color.
    pub fn same_color_arc(&self) -> Option<(usize, usize)> {
        self.arcs().find(|&(i, j)| self.colors[i] == self.colors[j])
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.len());
        for (i, j) in self.arcs() {
            sets.union(i, j);
        }
        sets.groups()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Subgraph induced by the given local indices.
    pub fn subgraph(&self, vertices: &[usize]) -> Result<ColoredDigraph, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let out = keep
            .iter()
            .map(|&i| {
                self.out[i]
                    .iter()
                    .filter_map(|&j| (pos[j] != usize::MAX).then_some(pos[j]))
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(
            self.labels.clone(),
            keep.iter().map(|&i| self.ids[i]).collect(),
            keep.iter().map(|&i| self.colors[i]).collect(),
            out,
        ))
    }

    /// Subgraph induced by all vertices whose color is in `colors`.
    pub fn induced_subgraph(&self, colors: &[Color]) -> Result<ColoredDigraph, GraphError> {
        let present = self.color_set();
        for c in colors {
            if present.binary_search(c).is_err() {
                let name = if c.index() < self.labels.color_count() {
                    self.labels.color_name(*c).to_string()
                } else {
                    c.to_string()
                };
                return Err(GraphError::UnknownColor(name));
            }
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| colors.contains(&self.colors[i])).collect();
        self.subgraph(&keep)
    }

    /// Partition into classes of vertices with equal out- and in-neighborhoods.
    pub fn thinness_partition(&self) -> ThinnessPartition {
        ThinnessPartition::new(self)
    }

    /// Undirected graph of reciprocal arc pairs.
    pub fn symmetric_part(&self) -> UndirectedColoredGraph {
        let adj = (0..self.len())
            .map(|i| {
                self.out[i]
                    .iter()
                    .copied()
                    .filter(|&j| self.has_arc(j, i))
                    .collect()
            })
            .collect();
        UndirectedColoredGraph::from_parts(self.labels.clone(), self.ids.clone(), self.colors.clone(), adj)
    }

    /// First difference with `other`, scanning vertices then arcs in id order.
    pub fn first_difference(&self, other: &ColoredDigraph) -> Option<Difference> {
        let (mut a, mut b) = (0, 0);
        while a < self.len() || b < other.len() {
            match (self.ids.get(a), other.ids.get(b)) {
                (Some(x), Some(y)) if x == y => {
                    if self.colors[a] != other.colors[b] {
                        return Some(Difference::Color(*x));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) => return Some(Difference::Vertex(*x.min(y))),
                (Some(x), None) | (None, Some(x)) => return Some(Difference::Vertex(*x)),
                (None, None) => unreachable!(),
            }
        }
        for i in 0..self.len() {
            let (p, q) = (&self.out[i], &other.out[i]);
            if p != q {
                let k = p.iter().zip(q).position(|(x, y)| x != y).unwrap_or(p.len().min(q.len()));
                let j = match (p.get(k), q.get(k)) {
                    (Some(&x), Some(&y)) => x.min(y),
                    (Some(&x), None) | (None, Some(&x)) => x,
                    (None, None) => unreachable!(),
                };
                return Some(Difference::Arc(self.ids[i], self.ids[j]));
            }
        }
        None
    }
}

impl PartialEq for ColoredDigraph {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels)
            && self.ids == other.ids
            && self.colors == other.colors
            && self.out == other.out
    }
}

impl Eq for ColoredDigraph {}

/// Thinness classes with their class-level neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinnessPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    colors: Vec<Color>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl ThinnessPartition {
    fn new(g: &ColoredDigraph) -> Self {
        let n = g.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (&g.out[a], &g.inn[a], a).cmp(&(&g.out[b], &g.inn[b], b))
        });
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in order.iter().enumerate() {
            let same = k > 0 && {
                let u = order[k - 1];
                g.out[u] == g.out[v] && g.inn[u] == g.inn[v]
            };
            if same {
                classes.last_mut().unwrap().push(v);
            } else {
                classes.push(vec![v]);
            }
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (a, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = a;
            }
        }
        let lift = |list: &[usize]| {
            let mut cs: Vec<usize> = list.iter().map(|&v| class_of[v]).collect();
            cs.sort_unstable();
            cs.dedup();
            cs
        };
        let out = classes.iter().map(|c| lift(&g.out[c[0]])).collect();
        let inn = classes.iter().map(|c| lift(&g.inn[c[0]])).collect();
        let colors = classes.iter().map(|c| g.colors[c[0]]).collect();
        ThinnessPartition {
            classes,
            class_of,
            colors,
            out,
            inn,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Members (local indices) of class `a`.
    pub fn class(&self, a: usize) -> &[usize] {
        &self.classes[a]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Color of the first member.
    pub fn color(&self, a: usize) -> Color {
        self.colors[a]
    }

    /// Out-neighborhood of class `a` as sorted class indices.
    pub fn out(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    /// In-neighborhood of class `a` as sorted class indices.
    pub fn inn(&self, a: usize) -> &[usize] {
        &self.inn[a]
    }

    pub fn member_ids(&self, g: &ColoredDigraph, a: usize) -> Vec<VertexId> {
        self.classes[a].iter().map(|&v| g.id(v)).collect()
    }

    /// Class quotient: one vertex per class (its first member), arc a->b iff b lies in N(a).
    pub fn quotient(&self, g: &ColoredDigraph) -> ColoredDigraph {
        ColoredDigraph::from_parts(
            g.labels.clone(),
            self.classes.iter().map(|c| g.id(c[0])).collect(),
            self.colors.clone(),
            self.out.clone(),
        )
    }
}

/// Undirected vertex-colored graph, used for reciprocal best matches.
#[derive(Clone, Debug)]
pub struct UndirectedColoredGraph {
    labels: Arc<Labels>,
    ids: Vec<VertexId>,
    colors: Vec<Color>,
    adj: Vec<Vec<usize>>,
}

impl UndirectedColoredGraph {
    pub fn new<E>(labels: Arc<Labels>, mut vertices: Vec<(VertexId, Color)>, edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        vertices.sort();
        vertices.dedup();
        let ids: Vec<VertexId> = vertices.iter().map(|p| p.0).collect();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(labels.vertex_name(w[0]).to_string()));
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in edges {
            let find = |v: VertexId| {
                ids.binary_search(&v)
                    .map_err(|_| GraphError::UnknownVertex(labels.vertex_name(v).to_string()))
            };
            let (i, j) = (find(a)?, find(b)?);
            if i == j {
                return Err(GraphError::SelfLoop(labels.vertex_name(a).to_string()));
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_parts(labels, ids, vertices.iter().map(|p| p.1).collect(), adj))
    }

    /// Convenience constructor from names.
    pub fn from_names(vertices: &[(&str, &str)], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let labels = Arc::new(Labels::new(
            vertices.iter().map(|v| v.0),
            vertices.iter().map(|v| v.1),
        ));
        let vs = vertices
            .iter()
            .map(|(v, c)| (labels.vertex(v).unwrap(), labels.color(c).unwrap()))
            .collect();
        let mut resolved = Vec::new();
        for (a, b) in edges {
            let ia = labels.vertex(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = labels.vertex(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            resolved.push((ia, ib));
        }
        Self::new(labels, vs, resolved)
    }

    fn from_parts(labels: Arc<Labels>, ids: Vec<VertexId>, colors: Vec<Color>, adj: Vec<Vec<usize>>) -> Self {
        UndirectedColoredGraph {
            labels,
            ids,
            colors,
            adj,
        }
    }

    pub fn labels(&self) -> &Arc<Labels> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn name(&self, i: usize) -> &str {
        self.labels.vertex_name(self.ids[i])
    }

    pub fn color(&self, i: usize) -> Color {
        self.colors[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn color_set(&self) -> Vec<Color> {
        let mut cs = self.colors.clone();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.len());
        for (i, j) in self.edges() {
            sets.union(i, j);
        }
        sets.groups()
    }

    /// Subgraph induced by all vertices whose color is in `colors`.
    pub fn induced_subgraph(&self, colors: &[Color]) -> Result<Self, GraphError> {
        let present = self.color_set();
        if let Some(c) = colors.iter().find(|c| present.binary_search(c).is_err()) {
            return Err(GraphError::UnknownColor(c.to_string()));
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| colors.contains(&self.colors[i])).collect();
        if keep.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let adj = keep
            .iter()
            .map(|&i| {
                self.adj[i]
                    .iter()
                    .filter_map(|&j| (pos[j] != usize::MAX).then_some(pos[j]))
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(
            self.labels.clone(),
            keep.iter().map(|&i| self.ids[i]).collect(),
            keep.iter().map(|&i| self.colors[i]).collect(),
            adj,
        ))
    }
}

impl PartialEq for UndirectedColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels)
            && self.ids == other.ids
            && self.colors == other.colors
            && self.adj == other.adj
    }
}

impl Eq for UndirectedColoredGraph {}
