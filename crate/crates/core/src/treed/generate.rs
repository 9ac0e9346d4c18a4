//! Seeded random treed types and the identity suite run over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    cut_edge, index, pi_stabilize, projected_index, projection_inequality_check, Edge, EdgeKind, InequalityCheck, Leaf,
    Length, MorseLabel, TreedError, TreedType, Vertex, VertexKind,
};

pub const MAX_VERTICES: usize = 8;
pub const MAX_MULTIPLICITY: u32 = 3;
/// Bound on the unstable dimension of a label.
pub const MAX_DIM: u32 = 6;

const MAX_BASE_VERTICES: usize = 5;
const MAX_BUBBLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedType {
    pub ty: TreedType,
    /// For lift types, the base type the decoration started from.
    pub base: Option<TreedType>,
}

pub struct TypeGenerator {
    rng: ChaCha8Rng,
}

impl TypeGenerator {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn even(&mut self, lo: i64, hi: i64) -> i64 {
        2 * self.rng.gen_range(lo / 2..=hi / 2)
    }

    fn label(&mut self) -> MorseLabel {
        let base = self.rng.gen_range(0..=MAX_DIM);
        MorseLabel::new(base, self.rng.gen_range(0..=MAX_DIM - base))
    }

    fn interior_markings(&mut self, vertices: usize, edges: &mut Vec<Edge>, marked: impl Fn(usize) -> bool) {
        for v in 0..vertices {
            if self.rng.gen_bool(0.3) {
                let multiplicity = self.rng.gen_range(0..=MAX_MULTIPLICITY);
                edges.push(Edge::marking(EdgeKind::InteriorMarking { multiplicity }, v).with_marked(marked(v)));
            }
        }
    }

    fn zero_or_finite(&mut self) -> Length {
        if self.rng.gen_bool(0.5) {
            Length::Zero
        } else {
            Length::Finite
        }
    }

    /// A base type of nonnegative index decorated as a lift: vertical
    /// Maslov indices on its components, a fiber part on the output label,
    /// and π-trivial disk bubbles of Maslov index at least two attached by
    /// zero-length nodes. Projecting recovers the base type, so the type
    /// is declared realizable.
    pub fn lift_type(&mut self) -> GeneratedType {
        let nb = self.rng.gen_range(1..=MAX_BASE_VERTICES);
        let mut vertices: Vec<Vertex> = (0..nb).map(|_| Vertex::disk(self.even(0, 4), 0, false)).collect();
        let mut edges = Vec::new();
        for i in 1..nb {
            let p = self.pick(i);
            edges.push(Edge::node(EdgeKind::BoundaryNode(self.zero_or_finite()), p, i));
        }
        self.interior_markings(nb, &mut edges, |_| false);
        let w_b = self.rng.gen_range(0..=MAX_DIM);
        edges.push(Edge::marking(EdgeKind::BoundaryMarking(Leaf::Output), 0).with_label(MorseLabel::new(w_b, 0)));
        let mut base = TreedType::new(vertices.clone(), edges.clone()).expect("generated base type");
        while index(&base).total < 0 {
            let v = self.pick(nb);
            vertices[v].maslov += 2;
            base = TreedType::new(vertices.clone(), edges.clone()).expect("generated base type");
        }
        let base = base.with_flags(true, true).expect("generated base type");

        for v in &mut vertices {
            v.vertical_maslov = self.even(0, 2);
            v.maslov += v.vertical_maslov;
        }
        let w_g = self.rng.gen_range(0..=MAX_DIM - w_b);
        edges.last_mut().expect("output").label = Some(MorseLabel::new(w_b, w_g));
        let bubbles = self.rng.gen_range(0..=MAX_BUBBLES.min(MAX_VERTICES - nb));
        for _ in 0..bubbles {
            let b = vertices.len();
            let i_f = self.even(2, 4);
            vertices.push(Vertex::disk(i_f, i_f, true));
            let nodes: Vec<usize> =
                (0..edges.len()).filter(|&i| matches!(edges[i].kind, EdgeKind::BoundaryNode(_))).collect();
            if nodes.is_empty() || self.rng.gen_bool(0.5) {
                let p = self.pick(b);
                let marked = vertices[p].marked;
                edges.push(Edge::node(EdgeKind::BoundaryNode(Length::Zero), p, b).with_marked(marked));
            } else {
                // subdivide, keeping the old length next to an unmarked end
                let i = nodes[self.pick(nodes.len())];
                let (x, y) = (edges[i].from, edges[i].to.expect("node"));
                let (keep, other) = if vertices[x].marked { (y, x) } else { (x, y) };
                let kind = edges[i].kind;
                edges[i] = Edge::node(kind, keep, b)
                    .with_marked(vertices[keep].marked && kind == EdgeKind::BoundaryNode(Length::Zero));
                let marked = vertices[other].marked;
                edges.push(Edge::node(EdgeKind::BoundaryNode(Length::Zero), b, other).with_marked(marked));
            }
        }
        let ty = TreedType::new(vertices, edges).and_then(|t| t.with_flags(true, true)).expect("generated lift type");
        GeneratedType { ty, base: Some(base) }
    }

    /// An unbroken, aspherical type without inputs whose marked nodes have
    /// length zero: the setting of the projected index formula. Vertical
    /// Maslov indices occasionally break the inequality hypotheses.
    pub fn admissible_type(&mut self) -> GeneratedType {
        let nv = self.rng.gen_range(1..=MAX_VERTICES);
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            if self.rng.gen_bool(0.4) {
                let i_f = if self.rng.gen_bool(0.1) { 0 } else { self.even(2, 4) };
                vertices.push(Vertex::disk(i_f, i_f, true));
            } else {
                let i_f = if self.rng.gen_bool(0.1) { -2 } else { self.even(0, 4) };
                vertices.push(Vertex::disk(self.even(0, 4) + i_f, i_f, false));
            }
        }
        let mut edges = Vec::new();
        for i in 1..nv {
            let p = self.pick(i);
            let both = vertices[p].marked && vertices[i].marked;
            let length = if both { Length::Zero } else { self.zero_or_finite() };
            edges.push(Edge::node(EdgeKind::BoundaryNode(length), p, i).with_marked(both));
        }
        let marked: Vec<bool> = vertices.iter().map(|v| v.marked).collect();
        self.interior_markings(nv, &mut edges, |v| marked[v]);
        let label = self.label();
        edges.push(Edge::marking(EdgeKind::BoundaryMarking(Leaf::Output), 0).with_label(label));
        let lift = vertices.iter().all(|v| v.vertical_maslov >= 0);
        let ty = TreedType::new(vertices, edges).and_then(|t| t.with_flags(lift, false)).expect("generated type");
        GeneratedType { ty, base: None }
    }

    /// Any well-formed type: spheres, inputs, broken nodes and marked nodes
    /// of every length included.
    pub fn any_type(&mut self) -> GeneratedType {
        let nv = self.rng.gen_range(1..=MAX_VERTICES);
        let mut vertices = vec![self.vertex(VertexKind::Disk)];
        let mut edges = Vec::new();
        for i in 1..nv {
            let p = self.pick(i);
            let sphere = vertices[p].kind == VertexKind::Sphere || self.rng.gen_bool(0.25);
            let v = self.vertex(if sphere { VertexKind::Sphere } else { VertexKind::Disk });
            let marked = vertices[p].marked && v.marked && self.rng.gen_bool(0.8);
            let edge = if sphere {
                Edge::node(EdgeKind::InteriorNode, p, i)
            } else {
                let length = match self.pick(3) {
                    0 => Length::Zero,
                    1 => Length::Finite,
                    _ => Length::Infinite,
                };
                let e = Edge::node(EdgeKind::BoundaryNode(length), p, i);
                if length == Length::Infinite {
                    e.with_label(self.label())
                } else {
                    e
                }
            };
            vertices.push(v);
            edges.push(edge.with_marked(marked));
        }
        let marked: Vec<bool> = vertices.iter().map(|v| v.marked).collect();
        self.interior_markings(nv, &mut edges, |v| marked[v]);
        for v in 0..nv {
            if vertices[v].kind == VertexKind::Disk && self.rng.gen_bool(0.2) {
                let label = self.label();
                edges.push(Edge::marking(EdgeKind::BoundaryMarking(Leaf::Input), v).with_label(label));
            }
        }
        let label = self.label();
        edges.push(Edge::marking(EdgeKind::BoundaryMarking(Leaf::Output), 0).with_label(label));
        let ty = TreedType::new(vertices, edges).expect("generated type");
        GeneratedType { ty, base: None }
    }

    fn vertex(&mut self, kind: VertexKind) -> Vertex {
        let marked = self.rng.gen_bool(0.4);
        let i_f = self.even(-2, 4);
        let maslov = if marked { i_f } else { self.even(-2, 4) + i_f };
        Vertex { kind, maslov, vertical_maslov: i_f, marked }
    }

    /// Lift, admissible and arbitrary types in rotation.
    pub fn next_type(&mut self, k: usize) -> GeneratedType {
        match k % 3 {
            0 => self.lift_type(),
            1 => self.admissible_type(),
            _ => self.any_type(),
        }
    }
}

/// Tallies of the identity suite.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentitySuite {
    pub seed: u64,
    pub types: usize,
    /// Types where the projected index formula applies.
    pub identity_checked: usize,
    pub identity_failures: usize,
    pub unsupported: usize,
    pub idempotence_failures: usize,
    pub inequality_checked: usize,
    pub lower_checked: usize,
    pub inequality_failures: usize,
    pub hypothesis_violations: usize,
    /// Lift types whose projection has the base type's index.
    pub lift_checked: usize,
    pub lift_failures: usize,
    pub cut_checked: usize,
    pub cut_failures: usize,
    /// Descriptions of the first few failures.
    pub failures: Vec<String>,
}

impl IdentitySuite {
    pub fn passed(&self) -> bool {
        self.identity_failures
            + self.idempotence_failures
            + self.inequality_failures
            + self.lift_failures
            + self.cut_failures
            == 0
    }
}

/// Check, over `count` generated types: `projected_index(Γ) =
/// index(pi_stabilize(Γ))`, idempotence of `pi_stabilize`, the projection
/// inequalities, recovery of the base index from lift types, and index
/// bookkeeping under cutting a random boundary node.
pub fn run_identity_suite(seed: u64, count: usize) -> Result<IdentitySuite, TreedError> {
    const KEPT_FAILURES: usize = 10;
    let mut g = TypeGenerator::new(seed);
    let mut s = IdentitySuite { seed, ..Default::default() };
    let fail = |s: &mut IdentitySuite, msg: String| {
        if s.failures.len() < KEPT_FAILURES {
            s.failures.push(msg);
        }
    };
    for k in 0..count {
        let GeneratedType { ty, base } = g.next_type(k);
        s.types += 1;

        let once = pi_stabilize(&ty);
        if pi_stabilize(&once) != once || once.validate().is_err() {
            s.idempotence_failures += 1;
            fail(&mut s, format!("type {k}: stabilization not idempotent: {ty:?}"));
        }

        match projected_index(&ty) {
            Ok(p) => {
                s.identity_checked += 1;
                let direct = index(&once).total;
                if p.total != direct {
                    s.identity_failures += 1;
                    fail(&mut s, format!("type {k}: predicted {} but stabilized index {direct}: {ty:?}", p.total));
                }
            }
            Err(TreedError::Unsupported(_)) => s.unsupported += 1,
            Err(e) => return Err(e),
        }

        match projection_inequality_check(&ty) {
            Ok(c @ InequalityCheck::Checked { lower, .. }) => {
                s.inequality_checked += 1;
                s.lower_checked += usize::from(lower.is_some());
                if c.holds() != Some(true) {
                    s.inequality_failures += 1;
                    fail(&mut s, format!("type {k}: {c:?}: {ty:?}"));
                }
            }
            Ok(InequalityCheck::HypothesisViolated(_)) => s.hypothesis_violations += 1,
            Err(TreedError::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }

        if let Some(base) = base {
            s.lift_checked += 1;
            if index(&once).total != index(&base).total {
                s.lift_failures += 1;
                fail(&mut s, format!("type {k}: projection of lift differs from base {base:?}: {ty:?}"));
            }
        }

        let nodes: Vec<usize> =
            (0..ty.edges().len()).filter(|&i| matches!(ty.edges()[i].kind, EdgeKind::BoundaryNode(_))).collect();
        if !nodes.is_empty() {
            let i = nodes[g.pick(nodes.len())];
            let label = g.label();
            let cut = cut_edge(&ty, i, Some(label))?;
            s.cut_checked += 1;
            let defect = index(&ty).total - index(&cut.root_side).total - index(&cut.far_side).total;
            if defect != cut.index_defect() {
                s.cut_failures += 1;
                fail(&mut s, format!("type {k}: cutting edge {i} has defect {defect}: {ty:?}"));
            }
        }
    }
    Ok(s)
}
