use super::{Edge, EdgeKind, Leaf, Length, MorseLabel, TreedError, TreedType};

/// The two types obtained by cutting a boundary node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPieces {
    /// Contains the output; the cut becomes a new input.
    pub root_side: TreedType,
    /// The cut becomes this piece's output.
    pub far_side: TreedType,
    pub length: Length,
}

impl CutPieces {
    /// `Ind(Γ) − Ind(Γ₁) − Ind(Γ₂)`. Together the pieces gain a leaf and a
    /// second `−2`, a net loss of one, and stop paying the node's deduction,
    /// which is one unless the node has finite length.
    pub fn index_defect(&self) -> i64 {
        match self.length {
            Length::Finite => 1,
            Length::Zero | Length::Infinite => 0,
        }
    }
}

/// Cut boundary node `edge`, labelling both new leaves with `label` (or the
/// node's own label when it is broken).
pub fn cut_edge(ty: &TreedType, edge: usize, label: Option<MorseLabel>) -> Result<CutPieces, TreedError> {
    let e = ty.edges().get(edge).ok_or_else(|| TreedError::Malformed(format!("no edge {edge}")))?;
    let EdgeKind::BoundaryNode(length) = e.kind else {
        return Err(TreedError::Unsupported("only boundary nodes can be cut".into()));
    };
    let label =
        label.or(e.label).ok_or_else(|| TreedError::Malformed("cutting needs a label for the new leaves".into()))?;
    let to = e.to.expect("node");

    // vertices reachable from the root without crossing the cut edge
    let n = ty.vertices().len();
    let mut root_side = vec![false; n];
    let mut stack = vec![ty.root()];
    root_side[ty.root()] = true;
    while let Some(v) = stack.pop() {
        for (i, f) in ty.edges().iter().enumerate() {
            if i == edge {
                continue;
            }
            if let Some(w) = f.other_end(v) {
                if !root_side[w] {
                    root_side[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let (near, far) = if root_side[e.from] { (e.from, to) } else { (to, e.from) };

    let piece = |side: bool, leaf: Leaf, at: usize| -> Result<TreedType, TreedError> {
        let keep: Vec<usize> = (0..n).filter(|&v| root_side[v] == side).collect();
        let new_index = |v: usize| keep.iter().position(|&k| k == v).expect("kept vertex");
        let vertices = keep.iter().map(|&v| ty.vertices()[v].clone()).collect();
        let mut edges: Vec<Edge> = ty
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, f)| i != edge && root_side[f.from] == side)
            .map(|(_, f)| Edge { from: new_index(f.from), to: f.to.map(new_index), ..f.clone() })
            .collect();
        edges.push(Edge::marking(EdgeKind::BoundaryMarking(leaf), new_index(at)).with_label(label));
        TreedType::new(vertices, edges)?.with_flags(ty.lift, false)
    };
    Ok(CutPieces { root_side: piece(true, Leaf::Input, near)?, far_side: piece(false, Leaf::Output, far)?, length })
}
