//! Projection of a type to the base: `π_*` followed by the stabilization `Υ`.

use super::{index, Edge, EdgeKind, IndexBreakdown, Length, TreedError, TreedType, Vertex};

/// `π_*Γ`: every component keeps only its base Maslov index, labels keep
/// only their base unstable dimension, and marked boundary nodes get length
/// zero.
pub fn pi_pushforward(ty: &TreedType) -> TreedType {
    let vertices = ty
        .vertices()
        .iter()
        .map(|v| Vertex { maslov: v.maslov - v.vertical_maslov, vertical_maslov: 0, ..v.clone() })
        .collect();
    let edges = ty
        .edges()
        .iter()
        .map(|e| {
            let kind = match e.kind {
                EdgeKind::BoundaryNode(_) if e.marked => EdgeKind::BoundaryNode(Length::Zero),
                k => k,
            };
            // a broken node shortened to zero no longer carries a label
            let label =
                if kind == EdgeKind::BoundaryNode(Length::Zero) { None } else { e.label.map(|l| l.projected()) };
            Edge { kind, label, ..e.clone() }
        })
        .collect();
    TreedType::from_parts_unchecked(vertices, edges, ty.lift, ty.realizable)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilization {
    pub ty: TreedType,
    /// Zero-length boundary nodes eliminated while forgetting vertices.
    pub forgotten_nodes: usize,
    pub forgotten_vertices: usize,
}

/// `Υ ∘ π_*` together with the bookkeeping the projected index needs.
///
/// Unstable marked vertices are forgotten one at a time, lowest index
/// first, until none is left. A vertex with two edges is removed by
/// identifying them; a vertex with one edge is removed with its edge. The
/// last remaining vertex is always kept.
pub fn stabilize_counted(ty: &TreedType) -> Stabilization {
    let (mut vertices, mut edges) = pi_pushforward(ty).into_parts();
    let mut forgotten_nodes = 0;
    let mut forgotten_vertices = 0;
    loop {
        let current = TreedType::from_parts_unchecked(vertices.clone(), edges.clone(), ty.lift, ty.realizable);
        let Some(v) = (0..vertices.len()).find(|&v| vertices.len() > 1 && vertices[v].marked && !current.is_stable(v))
        else {
            break;
        };
        let incident: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].touches(v)).collect();
        let zero_node = |e: &Edge| e.kind == EdgeKind::BoundaryNode(Length::Zero);
        match incident[..] {
            [i] => {
                forgotten_nodes += usize::from(zero_node(&edges[i]));
                edges.remove(i);
            }
            [i, j] => {
                let (e, f) = (edges[i].clone(), edges[j].clone());
                let merged = match (e.to.is_some(), f.to.is_some()) {
                    (true, true) => {
                        forgotten_nodes += usize::from(zero_node(&e) || zero_node(&f));
                        merge_nodes(&e, &f, v)
                    }
                    (true, false) => {
                        forgotten_nodes += usize::from(zero_node(&e));
                        Edge { from: e.other_end(v).expect("node"), marked: false, ..f }
                    }
                    (false, true) => {
                        forgotten_nodes += usize::from(zero_node(&f));
                        Edge { from: f.other_end(v).expect("node"), marked: false, ..e }
                    }
                    (false, false) => unreachable!("a vertex without nodes is the only vertex"),
                };
                edges.remove(j);
                edges[i] = merged;
            }
            _ => unreachable!("an unstable component has at most two special points"),
        }
        vertices.remove(v);
        for e in &mut edges {
            e.from -= usize::from(e.from > v);
            if let Some(t) = e.to.as_mut() {
                *t -= usize::from(*t > v);
            }
        }
        forgotten_vertices += 1;
    }
    let ty = TreedType::from_parts_unchecked(vertices, edges, ty.lift, ty.realizable);
    Stabilization { ty, forgotten_nodes, forgotten_vertices }
}

/// Identify two nodes through the vertex `v` between them.
fn merge_nodes(e: &Edge, f: &Edge, v: usize) -> Edge {
    let (a, b) = (e.other_end(v).expect("node"), f.other_end(v).expect("node"));
    let kind = match (e.kind, f.kind) {
        (EdgeKind::BoundaryNode(x), EdgeKind::BoundaryNode(y)) => EdgeKind::BoundaryNode(x.concat(y)),
        (EdgeKind::InteriorNode, EdgeKind::InteriorNode) => EdgeKind::InteriorNode,
        _ => unreachable!("mixed nodes make a disk stable and cannot meet a sphere"),
    };
    let label = match kind {
        EdgeKind::BoundaryNode(Length::Infinite) => e.label.or(f.label),
        _ => None,
    };
    Edge { kind, from: a, to: Some(b), marked: e.marked && f.marked, label }
}

/// `Υ(π_*Γ)`; idempotent.
pub fn pi_stabilize(ty: &TreedType) -> TreedType {
    stabilize_counted(ty).ty
}

/// The index of `Υ(π_*Γ)` predicted from `Γ`:
///
/// `Ind(Γ) + [#forgotten nodes − Σ I_F(u_v)] − dim W⁺_{X_g}(x₀)`,
///
/// the tangency orders being unchanged by projection. The prediction is
/// only valid for unbroken, aspherical types without inputs whose marked
/// nodes already have length zero; anything else is `Unsupported`.
pub fn projected_index(ty: &TreedType) -> Result<IndexBreakdown, TreedError> {
    let unsupported = |s: &str| Err(TreedError::Unsupported(s.to_string()));
    if ty.is_broken() {
        return unsupported("broken type");
    }
    if ty.is_spherical() {
        return unsupported("type with sphere components");
    }
    if ty.inputs().next().is_some() {
        return unsupported("type with inputs");
    }
    if ty.edges().iter().any(|e| e.marked && e.kind == EdgeKind::BoundaryNode(Length::Finite)) {
        return unsupported("marked node of nonzero length");
    }
    let s = stabilize_counted(ty);
    Ok(IndexBreakdown::from_contributions(vec![
        ("index", index(ty).total),
        ("forgotten_nodes", s.forgotten_nodes as i64),
        ("vertical_maslov", -ty.vertices().iter().map(|v| v.vertical_maslov).sum::<i64>()),
        ("tangency_change", 0),
        ("output_fiber_dim_w", -ty.output().label.map_or(0, |l| i64::from(l.fiber))),
    ]))
}

/// Index of the vertically constant lift of a base type through a fiber
/// critical point with `dim W⁺_{X_g} = fiber_dim_w`.
pub fn lifted_index(base: &TreedType, fiber_dim_w: u32) -> i64 {
    index(base).total + i64::from(fiber_dim_w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InequalityCheck {
    Checked {
        index: i64,
        projected: i64,
        /// `Ind(Υπ_*Γ) ≤ Ind(Γ)`.
        upper: bool,
        /// `0 ≤ Ind(Υπ_*Γ)`, tested only for types declared realizable.
        lower: Option<bool>,
    },
    HypothesisViolated(String),
}

impl InequalityCheck {
    /// Whether the inequalities hold; `None` when the hypotheses fail.
    pub fn holds(&self) -> Option<bool> {
        match self {
            InequalityCheck::Checked { upper, lower, .. } => Some(*upper && lower.unwrap_or(true)),
            InequalityCheck::HypothesisViolated(_) => None,
        }
    }
}

/// `0 ≤ Ind(Υπ_*Γ) ≤ Ind(Γ)` under the combinatorial hypotheses: vertical
/// Maslov indices are nonnegative, π-trivial components have `I_F ≥ 2`,
/// and so at most `Σ I_F` nodes are forgotten.
pub fn projection_inequality_check(ty: &TreedType) -> Result<InequalityCheck, TreedError> {
    if let Some((i, _)) = ty.vertices().iter().enumerate().find(|(_, v)| v.vertical_maslov < 0) {
        return Ok(InequalityCheck::HypothesisViolated(format!("negative vertical Maslov index at vertex {i}")));
    }
    if let Some((i, _)) = ty.vertices().iter().enumerate().find(|(_, v)| v.marked && v.vertical_maslov < 2) {
        return Ok(InequalityCheck::HypothesisViolated(format!("vertical component {i} has Maslov index below 2")));
    }
    let projected = projected_index(ty)?;
    let forgotten = projected.get("forgotten_nodes").unwrap_or(0);
    let vertical: i64 = ty.vertices().iter().map(|v| v.vertical_maslov).sum();
    if forgotten > vertical {
        return Ok(InequalityCheck::HypothesisViolated(format!(
            "{forgotten} forgotten nodes exceed the vertical Maslov index {vertical}"
        )));
    }
    let original = index(ty).total;
    Ok(InequalityCheck::Checked {
        index: original,
        projected: projected.total,
        upper: projected.total <= original,
        lower: ty.realizable.then_some(projected.total >= 0),
    })
}
