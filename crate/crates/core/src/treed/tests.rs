use super::*;

fn output(base: u32, fiber: u32, at: usize) -> Edge {
    Edge::marking(EdgeKind::BoundaryMarking(Leaf::Output), at).with_label(MorseLabel::new(base, fiber))
}

fn zero_node(a: usize, b: usize) -> Edge {
    Edge::node(EdgeKind::BoundaryNode(Length::Zero), a, b)
}

fn single_disk(maslov: i64) -> TreedType {
    TreedType::new(vec![Vertex::disk(maslov, 0, false)], vec![output(0, 0, 0)]).unwrap()
}

#[test]
fn index_of_small_types() {
    assert_eq!(index(&single_disk(2)).total, 0);

    let two = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(0, 0, false)],
        vec![output(0, 0, 0), zero_node(0, 1)],
    )
    .unwrap();
    // the extra Maslov-0 component contributes nothing but its node
    assert_eq!(index(&two).total, -1);
    assert_eq!(index(&two).get("zero_length_nodes"), Some(-1));

    let tangent = TreedType::new(
        vec![Vertex::disk(4, 0, false)],
        vec![output(0, 0, 0), Edge::marking(EdgeKind::InteriorMarking { multiplicity: 1 }, 0)],
    )
    .unwrap();
    assert_eq!(index(&tangent).total, 0);
}

#[test]
fn breakdown_sums_to_total() {
    let mut g = TypeGenerator::new(7);
    for k in 0..200 {
        let ty = g.next_type(k).ty;
        let b = index(&ty);
        assert_eq!(b.total, b.contributions.iter().map(|(_, c)| c).sum::<i64>());
    }
}

#[test]
fn malformed_types_are_rejected() {
    let no_output = TreedType::new(vec![Vertex::disk(2, 0, false)], vec![]);
    assert!(matches!(no_output, Err(TreedError::Malformed(_))));
    let boundary_on_sphere = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::sphere(2, 0, false)],
        vec![output(0, 0, 0), zero_node(0, 1)],
    );
    assert!(boundary_on_sphere.is_err());
    let cycle = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 0, false)],
        vec![output(0, 0, 0), zero_node(0, 1), zero_node(1, 0)],
    );
    assert!(cycle.is_err());
    let odd = TreedType::new(vec![Vertex::disk(1, 0, false)], vec![output(0, 0, 0)]);
    assert!(odd.is_err());
    let base_class_on_marked = TreedType::new(vec![Vertex::disk(4, 2, true)], vec![output(0, 0, 0)]);
    assert!(base_class_on_marked.is_err());
    let negative_lift =
        TreedType::new(vec![Vertex::disk(0, -2, false)], vec![output(0, 0, 0)]).unwrap().with_flags(true, false);
    assert!(negative_lift.is_err());
}

#[test]
fn stable_unmarked_type_is_fixed() {
    let ty = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 0, false)],
        vec![output(1, 0, 0), Edge::node(EdgeKind::BoundaryNode(Length::Finite), 0, 1)],
    )
    .unwrap();
    assert_eq!(pi_stabilize(&ty), ty);
}

#[test]
fn vertical_bubble_on_a_zero_node_is_forgotten() {
    let ty = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 2, true)],
        vec![output(0, 2, 0), zero_node(0, 1)],
    )
    .unwrap();
    let s = stabilize_counted(&ty);
    assert_eq!(s.ty, TreedType::new(vec![Vertex::disk(2, 0, false)], vec![output(0, 0, 0)]).unwrap());
    assert_eq!((s.forgotten_nodes, s.forgotten_vertices), (1, 1));

    // Ind(Γ) = 2 + 4 − 2 − 1 = 3, projected: 3 + 1 − 2 − 2 = 0
    let p = projected_index(&ty).unwrap();
    assert_eq!(index(&ty).total, 3);
    assert_eq!(p.total - index(&ty).total, -1 - 2);
    assert_eq!(p.total, index(&s.ty).total);
}

#[test]
fn marked_leaf_is_removed_with_its_edge() {
    let ty = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 0, false), Vertex::disk(4, 4, true)],
        vec![output(0, 0, 0), Edge::node(EdgeKind::BoundaryNode(Length::Finite), 0, 1), zero_node(1, 2)],
    )
    .unwrap();
    let s = pi_stabilize(&ty);
    assert_eq!(s.vertices().len(), 2);
    assert_eq!(s.edges().len(), 2);
    assert!(s.vertices().iter().all(|v| !v.marked));
}

#[test]
fn degree_two_bubble_merges_edges() {
    // 0 -finite- 1(marked) -zero- 2
    let ty = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 2, true), Vertex::disk(2, 0, false)],
        vec![output(0, 0, 0), Edge::node(EdgeKind::BoundaryNode(Length::Finite), 0, 1), zero_node(1, 2)],
    )
    .unwrap();
    let s = stabilize_counted(&ty);
    assert_eq!(s.forgotten_nodes, 1);
    let nodes: Vec<_> = s.ty.edges().iter().filter(|e| e.kind.is_node()).collect();
    assert_eq!(nodes.len(), 1);
    assert_eq!(nodes[0].kind, EdgeKind::BoundaryNode(Length::Finite));
    assert_eq!(projected_index(&ty).unwrap().total, index(&s.ty).total);
}

#[test]
fn broken_length_absorbs() {
    let label = MorseLabel::new(1, 0);
    let ty = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(2, 2, true), Vertex::disk(2, 0, false)],
        vec![
            output(0, 0, 0),
            Edge::node(EdgeKind::BoundaryNode(Length::Infinite), 0, 1).with_label(label),
            zero_node(1, 2),
        ],
    )
    .unwrap();
    let s = pi_stabilize(&ty);
    let node = s.edges().iter().find(|e| e.kind.is_node()).unwrap();
    assert_eq!(node.kind, EdgeKind::BoundaryNode(Length::Infinite));
    assert_eq!(node.label, Some(label));
    assert!(matches!(projected_index(&ty), Err(TreedError::Unsupported(_))));
}

#[test]
fn output_moves_off_a_forgotten_root() {
    let ty = TreedType::new(
        vec![Vertex::disk(2, 2, true), Vertex::disk(2, 0, false)],
        vec![output(2, 1, 0), zero_node(0, 1)],
    )
    .unwrap();
    let s = pi_stabilize(&ty);
    assert_eq!(s.vertices(), &[Vertex::disk(2, 0, false)]);
    assert_eq!(s.output().label, Some(MorseLabel::new(2, 0)));
    assert_eq!(projected_index(&ty).unwrap().total, index(&s).total);
}

#[test]
fn lift_type_projection_drops_fiber_dimension() {
    // a lift with no vertical data: only the output's fiber part is lost
    let ty = TreedType::new(vec![Vertex::disk(2, 0, false)], vec![output(1, 3, 0)]).unwrap();
    let p = projected_index(&ty).unwrap();
    assert_eq!(index(&ty).total - p.total, 3);
}

#[test]
fn lifted_index_adds_fiber_dimension() {
    let base = single_disk(2);
    assert_eq!(lifted_index(&base, 0), 0);
    assert_eq!(lifted_index(&base, 2), 2);
    let base1 = TreedType::new(vec![Vertex::disk(2, 0, false)], vec![output(1, 0, 0)]).unwrap();
    assert_eq!(lifted_index(&base1, 0), 1);
    // the lift itself: same tree, fiber part on the output
    let lift = TreedType::new(vec![Vertex::disk(2, 0, false)], vec![output(1, 2, 0)]).unwrap();
    assert_eq!(index(&lift).total, lifted_index(&base1, 2));
}

#[test]
fn inequality_check() {
    let ty = single_disk(2).with_flags(true, true).unwrap();
    assert_eq!(
        projection_inequality_check(&ty).unwrap(),
        InequalityCheck::Checked { index: 0, projected: 0, upper: true, lower: Some(true) }
    );
    let negative = TreedType::new(vec![Vertex::disk(2, -2, false)], vec![output(0, 0, 0)]).unwrap();
    assert!(matches!(projection_inequality_check(&negative).unwrap(), InequalityCheck::HypothesisViolated(_)));
    let light_bubble = TreedType::new(
        vec![Vertex::disk(2, 0, false), Vertex::disk(0, 0, true)],
        vec![output(0, 0, 0), zero_node(0, 1)],
    )
    .unwrap();
    assert_eq!(projection_inequality_check(&light_bubble).unwrap().holds(), None);
}

#[test]
fn cutting_bookkeeping() {
    let label = MorseLabel::new(2, 1);
    for length in [Length::Zero, Length::Finite, Length::Infinite] {
        let mut node = Edge::node(EdgeKind::BoundaryNode(length), 0, 1);
        if length == Length::Infinite {
            node = node.with_label(label);
        }
        let ty =
            TreedType::new(vec![Vertex::disk(2, 0, false), Vertex::disk(4, 0, false)], vec![output(1, 0, 0), node])
                .unwrap();
        let cut = cut_edge(&ty, 1, Some(label)).unwrap();
        assert_eq!(cut.root_side.inputs().count(), 1);
        assert_eq!(cut.far_side.vertices(), &[Vertex::disk(4, 0, false)]);
        let sum = index(&cut.root_side).total + index(&cut.far_side).total;
        assert_eq!(index(&ty).total - sum, cut.index_defect(), "{length:?}");
    }
}

#[test]
fn generated_types_are_well_formed() {
    let mut g = TypeGenerator::new(11);
    for k in 0..300 {
        let GeneratedType { ty, base } = g.next_type(k);
        ty.validate().unwrap();
        assert!(ty.vertices().len() <= MAX_VERTICES);
        if let Some(b) = base {
            assert!(index(&b).total >= 0);
            assert!(ty.lift && ty.realizable);
        }
    }
}

#[test]
fn small_identity_suite() {
    let s = run_identity_suite(3, 300).unwrap();
    assert!(s.passed(), "{s:#?}");
    assert!(s.identity_checked >= 200);
    assert!(s.lower_checked > 0 && s.hypothesis_violations > 0 && s.unsupported > 0);
}
