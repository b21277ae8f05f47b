use std::collections::HashMap;
use std::fmt;

/// Dense vertex (leaf) identifier. Order follows the order of names in [`Labels`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Dense color identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Interning table for vertex and color names.
///
/// Names are sorted on construction, so id order matches lexicographic name order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    vertices: Vec<String>,
    colors: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    color_index: HashMap<String, Color>,
}

impl Labels {
    /// Builds a table from arbitrary names; duplicates are merged.
    pub fn new<V, C>(vertices: V, colors: C) -> Self
    where
        V: IntoIterator,
        V::Item: Into<String>,
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let mut vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        vertices.sort();
        vertices.dedup();
        let mut colors: Vec<String> = colors.into_iter().map(Into::into).collect();
        colors.sort();
        colors.dedup();
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), VertexId(i as u32)))
            .collect();
        let color_index = colors
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Color(i as u32)))
            .collect();
        Labels {
            vertices,
            colors,
            vertex_index,
            color_index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn color_name(&self, c: Color) -> &str {
        &self.colors[c.index()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn color(&self, name: &str) -> Option<Color> {
        self.color_index.get(name).copied()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.colors.len() as u32).map(Color)
    }
}
