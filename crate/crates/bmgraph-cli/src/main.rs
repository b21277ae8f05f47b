use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bmgraph::formats::{self, ParseError, TreeFileError};
use bmgraph::*;
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "bmg", version, about = "Best match graphs: simulation, recognition and least resolved trees")]
struct Cli {
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the best match graph of a leaf-colored tree.
    FromTree {
        /// Newick file.
        tree: PathBuf,
        /// Color sidecar (defaults to `<tree>.colors`).
        #[arg(long)]
        colors: Option<PathBuf>,
        /// Output graph file (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a graph is a best match graph.
    Recognize {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Pairwise)]
        route: RouteArg,
        /// Write the least resolved tree here (colors go to `<path>.colors`).
        #[arg(long)]
        emit_lrt: Option<PathBuf>,
        /// Write a Graphviz render of the input graph here.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Draw a random leaf-colored tree and its best match graph.
    Simulate {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ShapeArg::Binary)]
        shape: ShapeArg,
        /// Newick output (colors go to `<path>.colors`).
        #[arg(long)]
        out_tree: Option<PathBuf>,
        /// Graph output (defaults to stdout).
        #[arg(long)]
        out_graph: Option<PathBuf>,
    },
    /// List the informative triples of every two-colored subgraph.
    Triples { graph: PathBuf },
    /// Print the least resolved tree of a graph, or fail.
    Lrt {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Pairwise)]
        route: RouteArg,
        /// Write the tree here and its colors to `<path>.colors` instead of printing Newick.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the reciprocal part of a graph.
    Rbmg {
        graph: PathBuf,
        /// Check that every component is complete bipartite (two colors only).
        #[arg(long)]
        check: bool,
    },
    /// Check the two-colored axioms for each connected component.
    CheckAxioms { graph: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Pairwise,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Binary,
    Multifurcating,
}

#[derive(Error, Debug)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}", tree_error(path, source))]
    Tree { path: PathBuf, source: TreeFileError },
    #[error("{0}")]
    Simulation(#[from] SimulationError),
    #[error("{0}")]
    Usage(String),
}

fn tree_error(path: &Path, e: &TreeFileError) -> String {
    match e {
        TreeFileError::Tree(p) => format!("{}:{p}", path.display()),
        TreeFileError::Colors(p) => format!("{}:{p}", sidecar(path).display()),
    }
}

/// Result of a command that ran on valid input.
enum Outcome {
    Ok,
    Reject(String),
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".colors");
    PathBuf::from(s)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            let _ = io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<ColoredDigraph, CliError> {
    formats::parse_graph(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn write_tree(path: &Path, tree: &LeafColoredTree) -> Result<(), CliError> {
    write(path, &formats::write_newick(tree))?;
    write(&sidecar(path), &formats::write_color_map(tree))
}

fn joined(labels: &Labels, ids: &[VertexId]) -> String {
    ids.iter().map(|&v| labels.vertex_name(v)).collect::<Vec<_>>().join(" ")
}

fn reject_line(g: &ColoredDigraph, r: &Rejection) -> String {
    let l = g.labels();
    let stage = match r {
        Rejection::TwoColorFailure { colors: (s, t), reason } => {
            format!("2cbmg-failure:{}:{}:{}", l.color_name(*s), l.color_name(*t), reason.detail())
        }
        other => other.stage().to_string(),
    };
    format!("REJECT {stage} {}", joined(l, &r.witness()))
}

fn options(route: RouteArg, sequential: bool) -> RecognizeOptions {
    RecognizeOptions {
        route: match route {
            RouteArg::Pairwise => Route::PairwiseLrt,
            RouteArg::Direct => Route::InformativeDirect,
        },
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
    }
}

fn color_pairs(g: &ColoredDigraph) -> Vec<(Color, Color)> {
    let colors = g.color_set();
    let mut out = Vec::new();
    for (i, &s) in colors.iter().enumerate() {
        for &t in &colors[i + 1..] {
            out.push((s, t));
        }
    }
    out
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let sequential = cli.sequential;
    match cli.command {
        Command::FromTree { tree, colors, out } => {
            let sc = colors.unwrap_or_else(|| sidecar(&tree));
            let t = formats::read_tree(&read(&tree)?, &read(&sc)?).map_err(|source| CliError::Tree { path: tree, source })?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            write_or_print(out.as_deref(), &formats::write_graph(&bmg_of_tree_with(&t, exec)))?;
            Ok(Outcome::Ok)
        }
        Command::Recognize {
            graph,
            route,
            emit_lrt,
            emit_dot,
        } => {
            let g = load_graph(&graph)?;
            let report = recognize_ncbmg_with(&g, &options(route, sequential));
            if let Some(p) = &emit_dot {
                write(p, &formats::write_dot(&g))?;
            }
            match (&report.lrt, report.rejection()) {
                (Some(lrt), _) => {
                    if let Some(p) = &emit_lrt {
                        write_tree(p, lrt)?;
                    }
                    println!(
                        "ACCEPT vertices={} arcs={} components={} lrt-nodes={}",
                        g.len(),
                        g.arc_count(),
                        report.components.len(),
                        lrt.node_count()
                    );
                    Ok(Outcome::Ok)
                }
                (None, Some(r)) => Ok(Outcome::Reject(reject_line(&g, r))),
                (None, None) => unreachable!("accepted reports carry a tree"),
            }
        }
        Command::Simulate {
            leaves,
            colors,
            seed,
            shape,
            out_tree,
            out_graph,
        } => {
            if colors == 1 {
                eprintln!("warning: a single color gives a graph without arcs");
            }
            let shape = match shape {
                ShapeArg::Binary => TreeShape::Binary,
                ShapeArg::Multifurcating => TreeShape::Multifurcating,
            };
            let (t, g) = simulate(&SimulationConfig::new(leaves, colors, seed).with_shape(shape))?;
            if let Some(p) = &out_tree {
                write_tree(p, &t)?;
            }
            write_or_print(out_graph.as_deref(), &formats::write_graph(&g))?;
            Ok(Outcome::Ok)
        }
        Command::Triples { graph } => {
            let g = load_graph(&graph)?;
            if let Some((a, b)) = g.same_color_arc() {
                return Err(CliError::Usage(format!(
                    "arc {} -> {} joins vertices of the same color",
                    g.name(a),
                    g.name(b)
                )));
            }
            let sets: Vec<TripleSet> = color_pairs(&g)
                .into_iter()
                .map(|(s, t)| informative_triples(&g.induced_subgraph(&[s, t]).expect("both colors occur")))
                .collect();
            print!("{}", formats::write_triples(&TripleSet::union(&sets), g.labels()));
            Ok(Outcome::Ok)
        }
        Command::Lrt { graph, route, out } => {
            let g = load_graph(&graph)?;
            let report = recognize_ncbmg_with(&g, &options(route, sequential));
            match (&report.lrt, report.rejection()) {
                (Some(lrt), _) => {
                    match &out {
                        Some(p) => write_tree(p, lrt)?,
                        None => print!("{}", formats::write_newick(lrt)),
                    }
                    Ok(Outcome::Ok)
                }
                (None, Some(r)) => Ok(Outcome::Reject(reject_line(&g, r))),
                (None, None) => unreachable!("accepted reports carry a tree"),
            }
        }
        Command::Rbmg { graph, check } => {
            let g = load_graph(&graph)?;
            let h = g.symmetric_part();
            if check {
                let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
                return match check_2crbmg_necessary_with(&h, exec) {
                    Ok(RbmgVerdict::Pass) => {
                        println!("PASS");
                        Ok(Outcome::Ok)
                    }
                    Ok(RbmgVerdict::Fail(w)) => Ok(Outcome::Reject(format!(
                        "REJECT not-complete-bipartite {}",
                        joined(g.labels(), &w)
                    ))),
                    Err(e) => Err(CliError::Usage(e.to_string())),
                };
            }
            let mut text = String::new();
            for i in 0..g.len() {
                text.push_str(&format!("V {} {}\n", g.name(i), g.labels().color_name(g.color(i))));
            }
            for (i, j) in g.arcs().filter(|&(i, j)| g.has_arc(j, i)) {
                text.push_str(&format!("A {} {}\n", g.name(i), g.name(j)));
            }
            print!("{text}");
            Ok(Outcome::Ok)
        }
        Command::CheckAxioms { graph } => {
            let g = load_graph(&graph)?;
            let colors = g.color_set();
            if colors.len() != 2 {
                return Err(CliError::Usage(format!("expected exactly two colors, found {}", colors.len())));
            }
            let mut first_failure = None;
            for (k, comp) in g.connected_components().iter().enumerate() {
                let sub = g.subgraph(comp).expect("components are non-empty");
                let ids = joined(g.labels(), sub.ids());
                match check_axioms(&sub) {
                    AxiomVerdict::Pass => println!("component {k} PASS {ids}"),
                    AxiomVerdict::Fail(f) => {
                        let w = joined(g.labels(), &f.witness());
                        println!("component {k} FAIL {} {w}", f.name());
                        first_failure.get_or_insert(format!("REJECT {} {w}", f.name()));
                    }
                }
            }
            Ok(first_failure.map_or(Outcome::Ok, Outcome::Reject))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Reject(line)) => {
            eprintln!("{line}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
