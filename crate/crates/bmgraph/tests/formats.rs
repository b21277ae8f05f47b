mod common;

use bmgraph::formats::*;
use bmgraph::*;
use common::*;

fn err_at(e: ParseError) -> (usize, usize, ParseErrorKind) {
    (e.line, e.col, e.kind)
}

#[test]
fn graph_round_trip() {
    for seed in 0..200u64 {
        let k = 1 + (seed % 4) as usize;
        let (_, g) = simulate(&SimulationConfig::new(2 + k + (seed % 17) as usize, k, seed)).unwrap();
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(arc_ids(&back).len(), g.arc_count());
        assert_eq!(write_graph(&back), text);
        assert_eq!(back.first_difference(&g), None);
    }
}

#[test]
fn graph_file_layout() {
    let g = parse_graph("# two leaves\nV b blue\nV a red   # trailing\n\nA a b\nA b a\n").unwrap();
    assert_eq!(write_graph(&g), "V a red\nV b blue\nA a b\nA b a\n");
}

#[test]
fn graph_file_errors() {
    use ParseErrorKind::*;
    let e = |s: &str| err_at(parse_graph(s).unwrap_err());
    assert_eq!(e("V a r\nV a b\n"), (2, 3, DuplicateVertex("a".into())));
    assert_eq!(e("V a r\nA a b\n"), (2, 5, UndeclaredVertex("b".into())));
    assert_eq!(e("V a r\nV b s\nA a b\n A a b\n"), (4, 2, DuplicateArc("a".into(), "b".into())));
    assert_eq!(e("V a r\nA a a\n"), (2, 5, SelfLoop("a".into())));
    assert_eq!(e("X a r\n"), (1, 1, UnknownDirective("X".into())));
    assert_eq!(e("V a r extra\n"), (1, 7, Unexpected("extra".into())));
    assert_eq!(e("V a\n"), (1, 4, Expected("<id> <color>")));
    assert_eq!(e("# nothing\n\n"), (2, 1, Empty));
    assert_eq!(e(""), (1, 1, Empty));
    assert_eq!(parse_graph("V a r\nV a b\n").unwrap_err().to_string(), "2:3: vertex `a` declared twice");
}

#[test]
fn tree_round_trip() {
    for seed in 0..200u64 {
        let k = 1 + (seed % 4) as usize;
        let shape = if seed % 2 == 0 { TreeShape::Binary } else { TreeShape::Multifurcating };
        let (t, _) = simulate(&SimulationConfig::new(2 + k + (seed % 20) as usize, k, seed).with_shape(shape)).unwrap();
        let nwk = write_newick(&t);
        let cols = write_color_map(&t);
        let back = read_tree(&nwk, &cols).unwrap();
        assert_eq!(write_newick(&back), nwk);
        assert_eq!(write_color_map(&back), cols);
        assert_eq!(bmg_of_tree(&back).first_difference(&bmg_of_tree(&t)), None);
    }
}

#[test]
fn newick_reading() {
    let t = named_tree("(((a)),(c,'b x'),d);", &[("a", "r"), ("b x", "g"), ("c", "r"), ("d", "g")]);
    assert_eq!(write_newick(&t), "(a,('b x',c),d);\n");
    assert_eq!(t.node_count(), 6);
    let quoted = named_tree("('it''s',b);", &[("it's", "r"), ("b", "g")]);
    assert_eq!(write_newick(&quoted), "(b,'it''s');\n");
    let t = read_tree("((a,b),c);", "a r\nb\tg\n# note\nc r\n").unwrap();
    assert_eq!(write_color_map(&t), "a\tr\nb\tg\nc\tr\n");
    let root_only = named_tree("((a,b));", &[("a", "r"), ("b", "g")]);
    assert_eq!(write_newick(&root_only), "(a,b);\n");
}

#[test]
fn newick_errors() {
    use ParseErrorKind::*;
    let e = |s: &str| err_at(parse_newick(s).unwrap_err());
    assert_eq!(e("(a:1,b);"), (1, 3, BranchLength));
    assert_eq!(e("(a,b)x;"), (1, 6, Unexpected("x".into())));
    assert_eq!(e("(a,,b);").2, EmptySubtree);
    assert_eq!(e("(a,b)").2, Expected("`;`"));
    assert_eq!(e("(a,b);\n(c,d);").0, 2);
    assert!(matches!(e("(a,\n b;").0, 2));

    let t = |nwk: &str, cols: &str| read_tree(nwk, cols).unwrap_err();
    assert!(matches!(t("(a,a);", "a r\n"), TreeFileError::Tree(ParseError { kind: DuplicateLeaf(_), .. })));
    assert!(matches!(t("(a,b);", "a r\n"), TreeFileError::Tree(ParseError { line: 1, col: 4, kind: MissingColor(_) })));
    assert!(matches!(t("(a,b);", "a r\nb g\nz r\n"), TreeFileError::Colors(ParseError { line: 3, kind: UnknownLeaf(_), .. })));
    assert!(matches!(t("(a,b);", "a r\nb g\na g\n"), TreeFileError::Colors(ParseError { line: 3, kind: DuplicateColor(_), .. })));
    assert!(matches!(t("(a,b);", "a\n"), TreeFileError::Colors(ParseError { line: 1, col: 2, .. })));
    assert!(matches!(t("(a,b);", "a\tr g\n"), TreeFileError::Colors(ParseError { line: 1, col: 5, .. })));
    assert!(matches!(t("(a,b);", "\tr\n"), TreeFileError::Colors(ParseError { line: 1, col: 1, .. })));
}

#[test]
fn dot_render() {
    let t = named_tree("((x,y),z);", &[("x", "r"), ("y", "b"), ("z", "b")]);
    let dot = write_dot(&bmg_of_tree(&t));
    assert!(dot.starts_with("digraph bmg {\n"));
    assert_eq!(dot.matches("[dir=none]").count(), 1);
    assert!(dot.contains("\"x\" -> \"y\" [dir=none];"));
    assert!(dot.contains("\"z\" -> \"x\";"));
    assert_eq!(dot.matches("fillcolor").count(), 3);
}

#[test]
fn triple_text_round_trip() {
    let (_, g) = simulate(&SimulationConfig::new(12, 2, 3)).unwrap();
    let set = informative_triples(&g);
    let text = write_triples(&set, g.labels());
    assert_eq!(text.lines().count(), set.len());
    let back = parse_triples(&text, g.labels()).unwrap();
    assert_eq!(back, set.iter().copied().collect::<Vec<_>>());
    let e = parse_triples("x00 x01 | nope\n", g.labels()).unwrap_err();
    assert_eq!((e.line, e.col), (1, 11));
}
