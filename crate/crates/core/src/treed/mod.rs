//! Combinatorial types of treed disks and their expected-dimension index.
//!
//! Homology classes are reduced to the two integers the index formula
//! consumes: the total Maslov index `I` of a component and its vertical part
//! `I_F`. Morse labels likewise keep only the unstable-manifold dimensions
//! of the base and fiber pseudo-gradients.

mod cut;
mod generate;
mod stabilize;

pub use cut::{cut_edge, CutPieces};
pub use generate::{
    run_identity_suite, GeneratedType, IdentitySuite, TypeGenerator, MAX_DIM, MAX_MULTIPLICITY, MAX_VERTICES,
};
pub use stabilize::{
    lifted_index, pi_pushforward, pi_stabilize, projected_index, projection_inequality_check, stabilize_counted,
    InequalityCheck, Stabilization,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreedError {
    #[error("malformed treed type: {0}")]
    Malformed(String),
    #[error("unsupported type: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Disk,
    Sphere,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Maslov index `I(u_v)`; twice the Chern number for spheres.
    pub maslov: i64,
    /// Vertical part `I_F(u_v)`.
    pub vertical_maslov: i64,
    /// Binary marking: the component projects to a constant in the base.
    pub marked: bool,
}

impl Vertex {
    pub fn disk(maslov: i64, vertical_maslov: i64, marked: bool) -> Self {
        Self { kind: VertexKind::Disk, maslov, vertical_maslov, marked }
    }

    pub fn sphere(maslov: i64, vertical_maslov: i64, marked: bool) -> Self {
        Self { kind: VertexKind::Sphere, maslov, vertical_maslov, marked }
    }
}

/// Length class of a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Zero,
    Finite,
    Infinite,
}

impl Length {
    /// Length of two edges identified end to end; `∞` absorbs.
    pub fn concat(self, other: Length) -> Length {
        self.max(other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leaf {
    Output,
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    BoundaryNode(Length),
    InteriorNode,
    BoundaryMarking(Leaf),
    InteriorMarking { multiplicity: u32 },
}

impl EdgeKind {
    pub fn is_node(self) -> bool {
        matches!(self, EdgeKind::BoundaryNode(_) | EdgeKind::InteriorNode)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, EdgeKind::BoundaryNode(_) | EdgeKind::BoundaryMarking(_))
    }
}

/// Unstable-manifold dimensions of a critical point for the split
/// pseudo-gradient: base part `dim W⁺_{X_b}` and fiber part `dim W⁺_{X_g}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MorseLabel {
    pub base: u32,
    pub fiber: u32,
}

impl MorseLabel {
    pub fn new(base: u32, fiber: u32) -> Self {
        Self { base, fiber }
    }

    pub fn dim(self) -> i64 {
        i64::from(self.base) + i64::from(self.fiber)
    }

    pub fn projected(self) -> Self {
        Self { base: self.base, fiber: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: usize,
    /// The other endpoint of a node; `None` for markings.
    pub to: Option<usize>,
    /// Edge between π-trivial components.
    pub marked: bool,
    /// Critical point labelling a boundary marking or a broken node.
    pub label: Option<MorseLabel>,
}

impl Edge {
    pub fn node(kind: EdgeKind, from: usize, to: usize) -> Self {
        Self { kind, from, to: Some(to), marked: false, label: None }
    }

    pub fn marking(kind: EdgeKind, at: usize) -> Self {
        Self { kind, from: at, to: None, marked: false, label: None }
    }

    pub fn with_label(mut self, label: MorseLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_marked(mut self, marked: bool) -> Self {
        self.marked = marked;
        self
    }

    pub fn touches(&self, v: usize) -> bool {
        self.from == v || self.to == Some(v)
    }

    pub fn other_end(&self, v: usize) -> Option<usize> {
        match self.to {
            Some(t) if self.from == v => Some(t),
            Some(_) if self.to == Some(v) => Some(self.from),
            _ => None,
        }
    }
}

/// A labelled combinatorial type, rooted at its output marking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreedType {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// The type is declared a lift, so vertical Maslov indices are `≥ 0`.
    pub lift: bool,
    /// The projected type is declared to have nonempty moduli.
    pub realizable: bool,
}

impl TreedType {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, TreedError> {
        let t = Self { vertices, edges, lift: false, realizable: false };
        t.validate()?;
        Ok(t)
    }

    pub fn with_flags(mut self, lift: bool, realizable: bool) -> Result<Self, TreedError> {
        self.lift = lift;
        self.realizable = realizable;
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<Vertex>, edges: Vec<Edge>, lift: bool, realizable: bool) -> Self {
        Self { vertices, edges, lift, realizable }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub(crate) fn into_parts(self) -> (Vec<Vertex>, Vec<Edge>) {
        (self.vertices, self.edges)
    }

    pub fn output(&self) -> &Edge {
        self.edges
            .iter()
            .find(|e| e.kind == EdgeKind::BoundaryMarking(Leaf::Output))
            .expect("validated type has an output")
    }

    pub fn root(&self) -> usize {
        self.output().from
    }

    pub fn inputs(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::BoundaryMarking(Leaf::Input))
    }

    pub fn is_broken(&self) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::BoundaryNode(Length::Infinite))
    }

    pub fn is_spherical(&self) -> bool {
        self.vertices.iter().any(|v| v.kind == VertexKind::Sphere)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Stability of a component: `2·#interior + #boundary ≥ 3` special
    /// points on a disk, three special points on a sphere.
    pub fn is_stable(&self, v: usize) -> bool {
        let (mut interior, mut boundary) = (0, 0);
        for e in self.edges.iter().filter(|e| e.touches(v)) {
            if e.kind.is_boundary() {
                boundary += 1;
            } else {
                interior += 1;
            }
        }
        match self.vertices[v].kind {
            VertexKind::Disk => 2 * interior + boundary >= 3,
            VertexKind::Sphere => interior >= 3,
        }
    }

    pub fn validate(&self) -> Result<(), TreedError> {
        let bad = |s: String| Err(TreedError::Malformed(s));
        let nv = self.vertices.len();
        if nv == 0 {
            return bad("no vertices".into());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.maslov % 2 != 0 || v.vertical_maslov % 2 != 0 {
                return bad(format!("vertex {i} has an odd Maslov index"));
            }
            if v.marked && v.maslov != v.vertical_maslov {
                return bad(format!("marked vertex {i} has nonzero base Maslov index"));
            }
            if self.lift && v.vertical_maslov < 0 {
                return bad(format!("lift type has negative vertical Maslov index at vertex {i}"));
            }
        }
        let outputs = self.edges.iter().filter(|e| e.kind == EdgeKind::BoundaryMarking(Leaf::Output)).count();
        if outputs != 1 {
            return bad(format!("{outputs} outputs, expected one"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= nv || e.to.is_some_and(|t| t >= nv) {
                return bad(format!("edge {i} has an endpoint out of range"));
            }
            if e.kind.is_node() != e.to.is_some() {
                return bad(format!("edge {i}: nodes join two vertices, markings sit on one"));
            }
            if e.to == Some(e.from) {
                return bad(format!("edge {i} is a loop"));
            }
            let ends = std::iter::once(e.from).chain(e.to);
            if e.kind.is_boundary() && ends.clone().any(|v| self.vertices[v].kind == VertexKind::Sphere) {
                return bad(format!("boundary edge {i} meets a sphere"));
            }
            if e.kind == EdgeKind::InteriorNode && ends.clone().all(|v| self.vertices[v].kind == VertexKind::Disk) {
                return bad(format!("interior node {i} joins two disks"));
            }
            if e.marked && ends.clone().any(|v| !self.vertices[v].marked) {
                return bad(format!("marked edge {i} meets an unmarked vertex"));
            }
            let needs_label = matches!(e.kind, EdgeKind::BoundaryMarking(_) | EdgeKind::BoundaryNode(Length::Infinite));
            if needs_label != e.label.is_some() {
                return bad(format!("edge {i}: exactly the boundary markings and broken nodes carry labels"));
            }
        }
        let nodes: Vec<&Edge> = self.edges.iter().filter(|e| e.kind.is_node()).collect();
        if nodes.len() + 1 != nv {
            return bad(format!("{} nodes on {nv} vertices is not a tree", nodes.len()));
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in nodes.iter().filter_map(|e| e.other_end(v)) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("nodes do not connect all vertices".into());
        }
        Ok(())
    }
}

/// A total together with its named, signed summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBreakdown {
    pub total: i64,
    pub contributions: Vec<(&'static str, i64)>,
}

impl IndexBreakdown {
    fn from_contributions(contributions: Vec<(&'static str, i64)>) -> Self {
        Self { total: contributions.iter().map(|(_, c)| c).sum(), contributions }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.contributions.iter().find(|(n, _)| *n == name).map(|(_, c)| *c)
    }
}

/// Expected dimension of the moduli space of the type:
///
/// `dim W⁺(x₀) − Σ dim W⁺(x_i) + Σ I(u_v) + n − 2 − |Edge°,0| − |Edge°,∞|
///  − 2|Edge•| − 2 Σ m(e)`
///
/// with `n` the number of inputs, `Edge°` boundary nodes by length class,
/// `Edge•` interior nodes and `m(e)` the tangency orders of interior markings.
pub fn index(ty: &TreedType) -> IndexBreakdown {
    let count = |k: EdgeKind| ty.edges.iter().filter(|e| e.kind == k).count() as i64;
    let inputs: Vec<&Edge> = ty.inputs().collect();
    let mult: i64 = ty
        .edges
        .iter()
        .filter_map(|e| match e.kind {
            EdgeKind::InteriorMarking { multiplicity } => Some(i64::from(multiplicity)),
            _ => None,
        })
        .sum();
    IndexBreakdown::from_contributions(vec![
        ("output_dim_w", ty.output().label.map_or(0, MorseLabel::dim)),
        ("input_dim_w", -inputs.iter().filter_map(|e| e.label).map(MorseLabel::dim).sum::<i64>()),
        ("maslov", ty.vertices.iter().map(|v| v.maslov).sum()),
        ("inputs_minus_two", inputs.len() as i64 - 2),
        ("zero_length_nodes", -count(EdgeKind::BoundaryNode(Length::Zero))),
        ("broken_nodes", -count(EdgeKind::BoundaryNode(Length::Infinite))),
        ("interior_nodes", -2 * count(EdgeKind::InteriorNode)),
        ("tangency", -2 * mult),
    ])
}

#[cfg(test)]
mod tests;
