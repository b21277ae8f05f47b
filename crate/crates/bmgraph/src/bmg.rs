//! Best match graphs of leaf-colored trees, a brute-force oracle and a random simulator.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{ColoredDigraph, UndirectedColoredGraph};
use crate::ids::{Color, Labels, VertexId};
use crate::par::{self, Execution};
use crate::tree::{LeafColoredTree, NodeId, Topology};

/// Below this many leaves the rows are computed inline; pool dispatch costs more than the work.
const PARALLEL_MIN_LEAVES: usize = 64;

/// Best match graph of `tree`, computed in O(|L|²).
pub fn bmg_of_tree(tree: &LeafColoredTree) -> ColoredDigraph {
    bmg_of_tree_with(tree, Execution::default())
}

pub fn bmg_of_tree_with(tree: &LeafColoredTree, exec: Execution) -> ColoredDigraph {
    let coloring = tree.coloring();
    let leaves = tree.leaves();
    let n = leaves.len();
    let exec = if n < PARALLEL_MIN_LEAVES { Execution::Sequential } else { exec };
    let colors: Vec<Color> = coloring.iter().map(|p| p.1).collect();
    let palette = tree.color_set();
    let slot: Vec<usize> = colors
        .iter()
        .map(|c| palette.binary_search(c).unwrap())
        .collect();
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); palette.len()];
    for (i, &s) in slot.iter().enumerate() {
        by_color[s].push(i);
    }
    let out = par::map_range(exec, n, |x| {
        let mut row = Vec::new();
        for (s, group) in by_color.iter().enumerate() {
            if s == slot[x] {
                continue;
            }
            // lcas with a fixed leaf lie on its root path, so the deepest one is the minimum
            let depths: Vec<u32> = group
                .iter()
                .map(|&y| tree.depth(tree.lca_of(leaves[x].1, leaves[y].1)))
                .collect();
            let best = depths.iter().copied().max().unwrap_or(0);
            row.extend(group.iter().zip(&depths).filter(|p| *p.1 == best).map(|p| *p.0));
        }
        row.sort_unstable();
        row
    });
    ColoredDigraph::from_parts(
        tree.labels().clone(),
        leaves.iter().map(|p| p.0).collect(),
        colors,
        out,
    )
}

/// Definition-level best match graph: checks every `(x, y, y')` with naive root-path walks.
pub fn bmg_oracle(tree: &LeafColoredTree) -> ColoredDigraph {
    let coloring = tree.coloring();
    let nodes: Vec<NodeId> = tree.leaves().iter().map(|p| p.1).collect();
    let n = nodes.len();
    let path = |u: NodeId| {
        let mut p = vec![u];
        let mut cur = u;
        while let Some(q) = tree.parent(cur) {
            p.push(q);
            cur = q;
        }
        p
    };
    let all_paths: Vec<Vec<NodeId>> = tree.nodes().map(path).collect();
    let paths: Vec<&Vec<NodeId>> = nodes.iter().map(|u| &all_paths[u.index()]).collect();
    let naive_lca = |i: usize, j: usize| -> NodeId {
        *paths[i].iter().find(|a| paths[j].contains(a)).unwrap()
    };
    let below_or_equal = |u: NodeId, v: NodeId| all_paths[u.index()].contains(&v);
    let mut out = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if coloring[x].1 == coloring[y].1 {
                continue;
            }
            let lxy = naive_lca(x, y);
            let best = (0..n)
                .filter(|&z| coloring[z].1 == coloring[y].1)
                .all(|z| below_or_equal(lxy, naive_lca(x, z)));
            if best {
                out[x].push(y);
            }
        }
    }
    ColoredDigraph::from_parts(
        tree.labels().clone(),
        coloring.iter().map(|p| p.0).collect(),
        coloring.iter().map(|p| p.1).collect(),
        out,
    )
}

/// Reciprocal best match graph of `tree`.
pub fn rbmg_of_tree(tree: &LeafColoredTree) -> UndirectedColoredGraph {
    bmg_of_tree(tree).symmetric_part()
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SimulationError {
    #[error("leaf count must be at least 2, got {0}")]
    TooFewLeaves(usize),
    #[error("color count must be at least 1")]
    NoColors,
    #[error("color count {colors} exceeds leaf count {leaves}")]
    TooManyColors { colors: usize, leaves: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeShape {
    /// Random binary tree grown by splitting uniformly chosen leaves.
    #[default]
    Binary,
    /// Binary growth followed by contracting each inner edge with probability 0.2.
    Multifurcating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimulationConfig {
    pub leaf_count: usize,
    pub color_count: usize,
    pub seed: u64,
    pub shape: TreeShape,
}

impl SimulationConfig {
    pub fn new(leaf_count: usize, color_count: usize, seed: u64) -> Self {
        SimulationConfig {
            leaf_count,
            color_count,
            seed,
            shape: TreeShape::Binary,
        }
    }

    pub fn with_shape(mut self, shape: TreeShape) -> Self {
        self.shape = shape;
        self
    }

    fn validate(&self) -> Result<(), SimulationError> {
        if self.leaf_count < 2 {
            return Err(SimulationError::TooFewLeaves(self.leaf_count));
        }
        if self.color_count == 0 {
            return Err(SimulationError::NoColors);
        }
        if self.color_count > self.leaf_count {
            return Err(SimulationError::TooManyColors {
                colors: self.color_count,
                leaves: self.leaf_count,
            });
        }
        Ok(())
    }
}

const CONTRACT_PROBABILITY: f64 = 0.2;
const RESAMPLE_LIMIT: usize = 256;

fn padded(prefix: char, i: usize, count: usize) -> String {
    let width = (count.max(2) - 1).to_string().len();
    format!("{prefix}{i:0width$}")
}

/// Random leaf-colored tree (seeded) and its best match graph.
pub fn simulate(cfg: &SimulationConfig) -> Result<(LeafColoredTree, ColoredDigraph), SimulationError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.leaf_count;

    // arena: children are always created after their parent
    let mut children: Vec<Vec<usize>> = vec![vec![1, 2], vec![], vec![]];
    let mut leaves = vec![1, 2];
    while leaves.len() < n {
        let k = rng.gen_range(0..leaves.len());
        let split = leaves[k];
        let (a, b) = (children.len(), children.len() + 1);
        children.push(Vec::new());
        children.push(Vec::new());
        children[split] = vec![a, b];
        leaves[k] = a;
        leaves.push(b);
    }
    let mut dissolve = vec![false; children.len()];
    if cfg.shape == TreeShape::Multifurcating {
        for v in 1..children.len() {
            if !children[v].is_empty() && rng.gen_bool(CONTRACT_PROBABILITY) {
                dissolve[v] = true;
            }
        }
    }
    let mut ids: Vec<u32> = (0..n as u32).collect();
    ids.shuffle(&mut rng);
    let mut leaf_id = vec![u32::MAX; children.len()];
    for (k, &v) in leaves.iter().enumerate() {
        leaf_id[v] = ids[k];
    }

    let k = cfg.color_count;
    let mut coloring: Vec<u32> = Vec::new();
    for _ in 0..RESAMPLE_LIMIT {
        coloring = (0..n).map(|_| rng.gen_range(0..k as u32)).collect();
        if surjective(&coloring, k) {
            break;
        }
    }
    if !surjective(&coloring, k) {
        // dense colorings are almost never surjective by chance: seed each color once
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for (c, &v) in order.iter().take(k).enumerate() {
            coloring[v] = c as u32;
        }
    }

    let mut built: Vec<Vec<Topology>> = vec![Vec::new(); children.len()];
    for v in (0..children.len()).rev() {
        let t = if children[v].is_empty() {
            vec![Topology::Leaf(VertexId(leaf_id[v]))]
        } else {
            let parts: Vec<Topology> = children[v]
                .iter()
                .flat_map(|&c| std::mem::take(&mut built[c]))
                .collect();
            if dissolve[v] {
                parts
            } else {
                vec![Topology::Inner(parts)]
            }
        };
        built[v] = t;
    }
    let topology = built[0].pop().unwrap();
    let labels = Arc::new(Labels::new(
        (0..n).map(|i| padded('x', i, n)),
        (0..k).map(|j| padded('c', j, k)),
    ));
    let tree = LeafColoredTree::new(labels, &topology, |v| Some(Color(coloring[v.index()])))
        .expect("simulated topology is a valid tree");
    let graph = bmg_of_tree(&tree);
    Ok((tree, graph))
}

/// Runs [`simulate`] for every config.
pub fn simulate_batch(
    cfgs: &[SimulationConfig],
    exec: Execution,
) -> Vec<Result<(LeafColoredTree, ColoredDigraph), SimulationError>> {
    par::map(exec, cfgs, simulate)
}

fn surjective(coloring: &[u32], k: usize) -> bool {
    let mut seen = vec![false; k];
    for &c in coloring {
        seen[c as usize] = true;
    }
    seen.iter().all(|&s| s)
}
