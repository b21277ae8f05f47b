//! Shared fixtures and naive oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use bmgraph::{Color, ColoredDigraph, Labels, LeafColoredTree, Topology, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn leaf(i: u32) -> Topology {
    Topology::Leaf(VertexId(i))
}

pub fn inner(kids: Vec<Topology>) -> Topology {
    Topology::Inner(kids)
}

/// Label table `x00, x01, ..` and `c00, c01, ..`; names sort like their indices.
pub fn labels(n: usize, k: usize) -> Arc<Labels> {
    assert!(n <= 100 && k <= 100);
    Arc::new(Labels::new((0..n).map(|i| format!("x{i:02}")), (0..k).map(|j| format!("c{j:02}"))))
}

pub fn colored(labels: &Arc<Labels>, topo: &Topology, coloring: &[u32]) -> LeafColoredTree {
    LeafColoredTree::new(labels.clone(), topo, |v| Some(Color(coloring[v.index()]))).unwrap()
}

/// Tree from nested names, e.g. `named(&l, "((a,b),c)", &[("a","r"), ...])`.
pub fn named_tree(newick: &str, colors: &[(&str, &str)]) -> LeafColoredTree {
    let sidecar: String = colors.iter().map(|(v, c)| format!("{v}\t{c}\n")).collect();
    bmgraph::formats::read_tree(newick, &sidecar).unwrap()
}

/// All rooted phylogenetic trees on leaves `0..n` (each exactly once), by leaf insertion.
pub fn all_topologies(n: u32) -> Vec<Topology> {
    let mut trees = vec![leaf(0)];
    for k in 1..n {
        trees = trees.iter().flat_map(|t| insertions(t, k)).collect();
    }
    trees
}

fn insertions(t: &Topology, k: u32) -> Vec<Topology> {
    let mut out = vec![inner(vec![t.clone(), leaf(k)])];
    if let Topology::Inner(kids) = t {
        let mut wider = kids.clone();
        wider.push(leaf(k));
        out.push(inner(wider));
        for i in 0..kids.len() {
            for sub in insertions(&kids[i], k) {
                let mut next = kids.clone();
                next[i] = sub;
                out.push(inner(next));
            }
        }
    }
    out
}

/// Colorings of `n` leaves with exactly `k` colors, up to renaming colors (restricted growth strings).
pub fn colorings(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, k: u32, used: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if used == k {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..(used + 1).min(k) {
            cur.push(c);
            rec(n, k, used.max(c + 1), cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// All colorings of `n` leaves using each of the colors `0..k`.
pub fn surjective_colorings(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (k as usize).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let coloring: Vec<u32> = (0..n)
            .map(|_| {
                let d = (c % k as usize) as u32;
                c /= k as usize;
                d
            })
            .collect();
        if (0..k).all(|j| coloring.contains(&j)) {
            out.push(coloring);
        }
    }
    out
}

/// Clusters (leaf sets of all nodes) of a topology.
pub fn topology_clusters(t: &Topology) -> Vec<BTreeSet<VertexId>> {
    let mut out = Vec::new();
    fn rec(t: &Topology, out: &mut Vec<BTreeSet<VertexId>>) -> BTreeSet<VertexId> {
        let s: BTreeSet<VertexId> = match t {
            Topology::Leaf(v) => [*v].into_iter().collect(),
            Topology::Inner(kids) => kids.iter().flat_map(|k| rec(k, out)).collect(),
        };
        out.push(s.clone());
        s
    }
    rec(t, &mut out);
    out
}

/// Best matches straight from the definition, on clusters: `y` is a best match of `x` iff the
/// smallest cluster holding `x, y` lies inside the smallest cluster holding `x, y'` for every
/// `y'` colored like `y`.
pub fn naive_bmg_arcs(tree: &LeafColoredTree) -> BTreeSet<(VertexId, VertexId)> {
    let clusters = topology_clusters(&tree.topology());
    let smallest = |a: VertexId, b: VertexId| {
        clusters
            .iter()
            .filter(|c| c.contains(&a) && c.contains(&b))
            .min_by_key(|c| c.len())
            .unwrap()
            .clone()
    };
    let col = tree.coloring();
    let mut arcs = BTreeSet::new();
    for &(x, cx) in &col {
        for &(y, cy) in &col {
            if cx == cy {
                continue;
            }
            let xy = smallest(x, y);
            if col.iter().filter(|p| p.1 == cy).all(|&(z, _)| xy.is_subset(&smallest(x, z))) {
                arcs.insert((x, y));
            }
        }
    }
    arcs
}

pub fn arc_ids(g: &ColoredDigraph) -> BTreeSet<(VertexId, VertexId)> {
    g.arcs().map(|(i, j)| (g.id(i), g.id(j))).collect()
}

/// `big` displays `small`: every cluster of `small` is a cluster of `big` restricted to `L(small)`,
/// and leaf colors agree.
pub fn naive_displays(big: &LeafColoredTree, small: &LeafColoredTree) -> bool {
    let keep: BTreeSet<VertexId> = small.leaf_ids().into_iter().collect();
    let colors_ok = small.coloring().iter().all(|&(v, c)| big.color_of(v) == Some(c));
    let restricted: BTreeSet<BTreeSet<VertexId>> = topology_clusters(&big.topology())
        .into_iter()
        .map(|c| c.intersection(&keep).copied().collect::<BTreeSet<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    colors_ok && topology_clusters(&small.topology()).iter().all(|c| restricted.contains(c))
}

/// Triples `xy|z` of a tree from the cluster definition.
pub fn naive_tree_triples(tree: &LeafColoredTree) -> BTreeSet<(VertexId, VertexId, VertexId)> {
    let clusters = topology_clusters(&tree.topology());
    let ids = tree.leaf_ids();
    let mut out = BTreeSet::new();
    for &x in &ids {
        for &y in &ids {
            for &z in &ids {
                if x < y && z != x && z != y && clusters.iter().any(|c| c.contains(&x) && c.contains(&y) && !c.contains(&z)) {
                    out.insert((x, y, z));
                }
            }
        }
    }
    out
}

/// Random binary refinement of a topology.
pub fn binary_refinement<R: Rng>(t: &Topology, rng: &mut R) -> Topology {
    match t {
        Topology::Leaf(_) => t.clone(),
        Topology::Inner(kids) => {
            let mut parts: Vec<Topology> = kids.iter().map(|k| binary_refinement(k, rng)).collect();
            while parts.len() > 2 {
                parts.shuffle(rng);
                let a = parts.pop().unwrap();
                let b = parts.pop().unwrap();
                parts.push(inner(vec![a, b]));
            }
            inner(parts)
        }
    }
}

/// Splits one randomly chosen multifurcation by grouping a proper subset (size ≥ 2) of its children.
/// Returns `None` when the tree is binary.
pub fn split_one_multifurcation<R: Rng>(t: &Topology, rng: &mut R) -> Option<Topology> {
    let mut count = 0;
    fn count_wide(t: &Topology, count: &mut usize) {
        if let Topology::Inner(kids) = t {
            if kids.len() > 2 {
                *count += 1;
            }
            kids.iter().for_each(|k| count_wide(k, count));
        }
    }
    count_wide(t, &mut count);
    if count == 0 {
        return None;
    }
    let mut target = rng.gen_range(0..count);
    fn rec<R: Rng>(t: &Topology, target: &mut usize, rng: &mut R) -> Topology {
        match t {
            Topology::Leaf(_) => t.clone(),
            Topology::Inner(kids) => {
                let mut kids: Vec<Topology> = kids.iter().map(|k| rec(k, target, rng)).collect();
                if kids.len() > 2 {
                    if *target == 0 {
                        kids.shuffle(rng);
                        let size = rng.gen_range(2..kids.len());
                        let group: Vec<Topology> = kids.drain(..size).collect();
                        kids.push(inner(group));
                    }
                    *target = target.wrapping_sub(1);
                }
                inner(kids)
            }
        }
    }
    Some(rec(t, &mut target, rng))
}

/// Vertex names of a sorted id list.
pub fn names(labels: &Labels, ids: &[VertexId]) -> Vec<String> {
    ids.iter().map(|&v| labels.vertex_name(v).to_string()).collect()
}

// Worked graphs.

/// Four vertices, two colors, explained by no tree.
pub fn smallest_non_bmg() -> ColoredDigraph {
    ColoredDigraph::from_names(
        &[("x1", "red"), ("x2", "red"), ("y1", "blue"), ("y2", "blue")],
        &[("x1", "y1"), ("x2", "y1"), ("y1", "x1"), ("y2", "x1")],
    )
    .unwrap()
}

/// Consistent informative triples whose BUILD tree explains a different graph.
pub fn consistent_but_not_bmg() -> ColoredDigraph {
    ColoredDigraph::from_names(
        &[("a", "red"), ("a'", "red"), ("b", "blue"), ("b'", "blue")],
        &[("a", "b"), ("b", "a"), ("b'", "a")],
    )
    .unwrap()
}

/// Bidirectional 6-cycle `r1-s1-t1-r2-s2-t2-r1` on three colors.
pub fn symmetric_hexagon() -> ColoredDigraph {
    let cycle = ["r1", "s1", "t1", "r2", "s2", "t2"];
    let mut arcs = Vec::new();
    for k in 0..6 {
        let (a, b) = (cycle[k], cycle[(k + 1) % 6]);
        arcs.push((a, b));
        arcs.push((b, a));
    }
    let vs: Vec<(&str, &str)> = cycle.iter().map(|v| (*v, &v[..1])).collect();
    ColoredDigraph::from_names(&vs, &arcs).unwrap()
}

/// Two-colored tree whose graph has two classes without in-arcs.
pub fn two_sourceless_classes_tree() -> LeafColoredTree {
    let s = ["1", "3", "6", "7", "8", "9", "10"];
    let t = ["2", "4", "5"];
    let colors: Vec<(&str, &str)> = s.iter().map(|v| (*v, "s")).chain(t.iter().map(|v| (*v, "t"))).collect();
    named_tree("(9,10,(((1,2),(3,4)),((5,6),7,8)));", &colors)
}

/// Three-colored tree with thinness classes of sizes 3, 2 and 2.
pub fn three_color_tree() -> LeafColoredTree {
    let leaves = ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4"];
    let colors: Vec<(&str, &str)> = leaves.iter().map(|v| (*v, &v[..1])).collect();
    named_tree("((a1,b1),((a2,a3,a4,b3,b4,c3,c4),b2,c2),c1);", &colors)
}

/// Tree `((u,v),(w,x))` with `u, w` red, `v` cyan and `x` yellow.
pub fn path_symmetric_part_tree() -> LeafColoredTree {
    named_tree("((u,v),(w,x));", &[("u", "red"), ("v", "cyan"), ("w", "red"), ("x", "yellow")])
}

/// Five leaves where plain reachable sets give a hierarchy whose tree does not explain the graph.
pub fn extended_sets_needed_tree() -> LeafColoredTree {
    named_tree(
        "(r4,((b1,r2),b3),b0);",
        &[("b0", "blue"), ("b1", "blue"), ("r2", "red"), ("b3", "blue"), ("r4", "red")],
    )
}

/// Random digraph on `x00, x01, ..` with `k` colors; each admissible ordered pair is an arc
/// with probability `p`. Same-colored pairs are admissible only if `same_color` is set.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, k: usize, p: f64, same_color: bool) -> ColoredDigraph {
    let l = labels(n, k);
    let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k as u32)).collect();
    let vs: Vec<(VertexId, Color)> = (0..n).map(|i| (VertexId(i as u32), Color(colors[i]))).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && (same_color || colors[i] != colors[j]) && rng.gen_bool(p) {
                arcs.push((VertexId(i as u32), VertexId(j as u32)));
            }
        }
    }
    ColoredDigraph::new(l, vs, arcs).unwrap()
}
