//! Ordered locally finite complexes and their finite windows.
//!
//! A factor complex is 1-dimensional: a graph whose edges carry an orientation
//! `lesser < greater` such that two vertices are comparable exactly when they
//! share an edge. Trees and the line are rooted and oriented child < parent,
//! so descending paths run away from the root and truncation happens only at
//! the window frontier. Vertices are addressed canonically by their root path.

use std::collections::HashMap;
use std::fmt;

use serde::Deserialize;

use crate::error::ComplexError;

/// Canonical vertex address: the sequence of child indices from the root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexRef(pub Vec<u8>);

impl VertexRef {
    pub fn root() -> Self {
        VertexRef(Vec::new())
    }

    pub fn child(&self, i: u8) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        VertexRef(p)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(VertexRef(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn parse(s: &str) -> Result<Self, ComplexError> {
        if s.is_empty() {
            return Ok(VertexRef::root());
        }
        let mut path = Vec::new();
        for part in s.split('.') {
            let i: u8 = part
                .parse()
                .map_err(|_| ComplexError::BadDescriptor(format!("vertex path '{s}'")))?;
            path.push(i);
        }
        Ok(VertexRef(path))
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(root)");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite explicit 1-dimensional ordered complex, loaded from JSON:
/// `{"vertices": n, "edges": [[lesser, greater], ...]}` with vertex indices in
/// `0..n` and vertex 0 acting as the root for window enumeration.
#[derive(Clone, Debug, Deserialize)]
pub struct FiniteComplex {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl FiniteComplex {
    pub fn validate(&self) -> Result<(), ComplexError> {
        let bad = |m: String| Err(ComplexError::BadFinite(m));
        if self.vertices == 0 {
            return bad("no vertices".into());
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            if u >= self.vertices || v >= self.vertices {
                return bad(format!("edge ({u},{v}) out of range"));
            }
            if u == v {
                return bad(format!("self-loop at {u}"));
            }
            // Antisymmetry: at most one orientation per pair.
            if !seen.insert((u.min(v), u.max(v))) {
                return bad(format!("duplicate or doubly oriented edge ({u},{v})"));
            }
        }
        Ok(())
    }
}

/// Generator kind of an ordered complex.
#[derive(Clone, Debug)]
pub enum ComplexKind {
    /// Rooted q-regular tree: the root has q children, everyone else q-1.
    RegularTree { q: u32 },
    /// The bi-infinite line, rooted at 0 with one child per side.
    Line,
    /// Explicit finite oriented graph.
    Finite(FiniteComplex),
}

/// An ordered locally finite complex: a generator plus its degree bound.
///
/// Edge orientation is child < parent for trees and the line; explicit for
/// finite complexes. Windows materialize balls around the root.
#[derive(Clone, Debug)]
pub struct OrderedComplex {
    pub kind: ComplexKind,
    degree_bound: u32,
}

impl OrderedComplex {
    pub fn regular_tree(q: u32) -> Result<Self, ComplexError> {
        if q < 3 {
            return Err(ComplexError::DegreeTooSmall(q));
        }
        Ok(OrderedComplex { kind: ComplexKind::RegularTree { q }, degree_bound: q })
    }

    pub fn line() -> Self {
        OrderedComplex { kind: ComplexKind::Line, degree_bound: 2 }
    }

    pub fn finite(fc: FiniteComplex) -> Result<Self, ComplexError> {
        fc.validate()?;
        let mut deg = vec![0u32; fc.vertices];
        for &(u, v) in &fc.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let degree_bound = deg.into_iter().max().unwrap_or(0);
        Ok(OrderedComplex { kind: ComplexKind::Finite(fc), degree_bound })
    }

    /// Parses a descriptor string: `tree:q`, `line` or `finite:<path>`.
    pub fn parse(descriptor: &str) -> Result<Self, ComplexError> {
        if descriptor == "line" {
            return Ok(OrderedComplex::line());
        }
        if let Some(q) = descriptor.strip_prefix("tree:") {
            let q: u32 = q
                .parse()
                .map_err(|_| ComplexError::BadDescriptor(descriptor.into()))?;
            return OrderedComplex::regular_tree(q);
        }
        if let Some(path) = descriptor.strip_prefix("finite:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ComplexError::FiniteIo(format!("{path}: {e}")))?;
            let fc: FiniteComplex = serde_json::from_str(&text)
                .map_err(|e| ComplexError::FiniteIo(format!("{path}: {e}")))?;
            return OrderedComplex::finite(fc);
        }
        Err(ComplexError::BadDescriptor(descriptor.into()))
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_tree(&self) -> bool {
        matches!(self.kind, ComplexKind::RegularTree { .. })
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ComplexKind::RegularTree { q } => format!("tree:{q}"),
            ComplexKind::Line => "line".into(),
            ComplexKind::Finite(fc) => format!("finite({}v)", fc.vertices),
        }
    }

    /// Materializes the ball of the given radius around the root.
    pub fn ball(&self, radius: u32) -> Ball {
        Ball::build(self.clone(), radius)
    }
}

/// Finite truncation parameters: a ball of `radius` whose trusted interior is
/// the ball of `radius - margin` (empty when the margin eats the radius).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub radius: u32,
    pub margin: u32,
}

impl Window {
    pub fn new(radius: u32, margin: u32) -> Self {
        Window { radius, margin }
    }

    /// Interior radius; negative means the interior is empty.
    pub fn interior_radius(&self) -> i64 {
        self.radius as i64 - self.margin as i64
    }
}

pub type VertexId = u32;

#[derive(Clone, Debug)]
pub struct VertexInfo {
    pub path: VertexRef,
    pub parent: Option<VertexId>,
    pub depth: u32,
    /// Adjacent lesser vertices (children, for rooted kinds), in child order.
    pub below: Vec<VertexId>,
    /// Adjacent greater vertices.
    pub above: Vec<VertexId>,
}

/// A materialized ball of an ordered complex.
///
/// Vertices are enumerated breadth-first from the root, so ids are stable when
/// the radius grows and enumeration is deterministic across runs.
#[derive(Clone, Debug)]
pub struct Ball {
    pub complex: OrderedComplex,
    pub radius: u32,
    verts: Vec<VertexInfo>,
    index: HashMap<VertexRef, VertexId>,
}

impl Ball {
    fn build(complex: OrderedComplex, radius: u32) -> Ball {
        match &complex.kind {
            ComplexKind::RegularTree { q } => Self::build_tree_like(complex.clone(), radius, {
                let q = *q;
                move |path: &VertexRef| if path.depth() == 0 { q } else { q - 1 }
            }),
            ComplexKind::Line => Self::build_tree_like(complex.clone(), radius, |path| {
                if path.depth() == 0 {
                    2
                } else {
                    1
                }
            }),
            ComplexKind::Finite(fc) => Self::build_finite(complex.clone(), radius, fc.clone()),
        }
    }

    fn build_tree_like(
        complex: OrderedComplex,
        radius: u32,
        children_of: impl Fn(&VertexRef) -> u32,
    ) -> Ball {
        let mut verts: Vec<VertexInfo> = vec![VertexInfo {
            path: VertexRef::root(),
            parent: None,
            depth: 0,
            below: Vec::new(),
            above: Vec::new(),
        }];
        let mut index = HashMap::new();
        index.insert(VertexRef::root(), 0u32);
        let mut frontier: Vec<VertexId> = vec![0];
        for depth in 1..=radius {
            let mut next = Vec::new();
            for &pid in &frontier {
                let n = children_of(&verts[pid as usize].path);
                for i in 0..n {
                    let path = verts[pid as usize].path.child(i as u8);
                    let id = verts.len() as VertexId;
                    verts.push(VertexInfo {
                        path: path.clone(),
                        parent: Some(pid),
                        depth,
                        below: Vec::new(),
                        above: vec![pid],
                    });
                    verts[pid as usize].below.push(id);
                    index.insert(path, id);
                    next.push(id);
                }
            }
            frontier = next;
        }
        Ball { complex, radius, verts, index }
    }

    fn build_finite(complex: OrderedComplex, radius: u32, fc: FiniteComplex) -> Ball {
        // BFS from vertex 0; paths are assigned along the BFS tree, orientation
        // comes from the explicit edge list.
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); fc.vertices];
        for &(u, v) in &fc.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut id_of: Vec<Option<VertexId>> = vec![None; fc.vertices];
        let mut orig_of: Vec<usize> = Vec::new();
        let mut verts: Vec<VertexInfo> = Vec::new();
        let mut index = HashMap::new();
        id_of[0] = Some(0);
        orig_of.push(0);
        verts.push(VertexInfo {
            path: VertexRef::root(),
            parent: None,
            depth: 0,
            below: Vec::new(),
            above: Vec::new(),
        });
        index.insert(VertexRef::root(), 0u32);
        let mut frontier = vec![0usize];
        for depth in 1..=radius {
            let mut next = Vec::new();
            for &u in &frontier {
                let pid = id_of[u].unwrap();
                let mut child_ix = 0u8;
                for &v in &adj[u] {
                    if id_of[v].is_some() {
                        continue;
                    }
                    let path = verts[pid as usize].path.child(child_ix);
                    child_ix += 1;
                    let id = verts.len() as VertexId;
                    id_of[v] = Some(id);
                    orig_of.push(v);
                    verts.push(VertexInfo {
                        path: path.clone(),
                        parent: Some(pid),
                        depth,
                        below: Vec::new(),
                        above: Vec::new(),
                    });
                    index.insert(path, id);
                    next.push(v);
                }
            }
            frontier = next;
        }
        // Orientation from the edge list, restricted to discovered vertices.
        for &(lo, hi) in &fc.edges {
            if let (Some(a), Some(b)) = (id_of[lo], id_of[hi]) {
                verts[b as usize].below.push(a);
                verts[a as usize].above.push(b);
            }
        }
        for v in &mut verts {
            v.below.sort_unstable();
            v.above.sort_unstable();
        }
        Ball { complex, radius, verts, index }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Vertex ids in deterministic (breadth-first) enumeration order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        0..self.verts.len() as VertexId
    }

    pub fn info(&self, v: VertexId) -> &VertexInfo {
        &self.verts[v as usize]
    }

    pub fn path(&self, v: VertexId) -> &VertexRef {
        &self.verts[v as usize].path
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.verts[v as usize].depth
    }

    pub fn resolve(&self, path: &VertexRef) -> Result<VertexId, ComplexError> {
        self.index
            .get(path)
            .copied()
            .ok_or_else(|| ComplexError::OutOfWindow(path.to_string()))
    }

    /// Adjacent greater vertices A_v (within the window).
    pub fn above(&self, v: VertexId) -> &[VertexId] {
        &self.verts[v as usize].above
    }

    /// Adjacent lesser vertices B_v (within the window); child order for trees.
    pub fn below(&self, v: VertexId) -> &[VertexId] {
        &self.verts[v as usize].below
    }

    /// True when `a < b` (adjacent and oriented a -> b).
    pub fn less(&self, a: VertexId, b: VertexId) -> bool {
        self.verts[b as usize].below.contains(&a)
    }

    /// Edges as (lesser, greater) pairs, in canonical enumeration order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for hi in self.vertex_ids() {
            for &lo in self.below(hi) {
                out.push((lo, hi));
            }
        }
        out
    }

    /// Edges whose deeper endpoint stays within `cap`.
    pub fn edges_within(&self, cap: i64) -> Vec<(VertexId, VertexId)> {
        self.edges()
            .into_iter()
            .filter(|&(lo, hi)| self.depth(lo) as i64 <= cap && self.depth(hi) as i64 <= cap)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent ball-size oracle: plain breadth-first count over the
    /// abstract generator, no Ball machinery.
    fn bfs_count_tree(q: u64, r: u32) -> u64 {
        let mut total = 1u64;
        let mut level = q;
        for _ in 1..=r {
            total += level;
            level *= q - 1;
        }
        if r == 0 {
            1
        } else {
            total
        }
    }

    #[test]
    fn tree_ball_sizes_match_closed_form() {
        // 3-regular: |B_r| = 3 * 2^r - 2.
        for r in 0..=10u32 {
            let ball = OrderedComplex::regular_tree(3).unwrap().ball(r);
            assert_eq!(ball.len() as u64, 3 * 2u64.pow(r) - 2);
            assert_eq!(ball.len() as u64, bfs_count_tree(3, r));
        }
        let ball = OrderedComplex::regular_tree(3).unwrap().ball(2);
        assert_eq!(ball.len(), 10);
        for q in [4u64, 5] {
            for r in 0..=6u32 {
                let ball = OrderedComplex::regular_tree(q as u32).unwrap().ball(r);
                assert_eq!(ball.len() as u64, bfs_count_tree(q, r));
            }
        }
    }

    #[test]
    fn tree_degree_too_small_rejected() {
        let err = OrderedComplex::regular_tree(2).unwrap_err();
        assert!(err.to_string().contains("degree at least 3"));
    }

    #[test]
    fn line_ball_sizes() {
        for r in 0..=20u32 {
            let ball = OrderedComplex::line().ball(r);
            assert_eq!(ball.len() as u32, 2 * r + 1);
        }
        assert_eq!(OrderedComplex::line().ball(3).len(), 7);
        assert_eq!(OrderedComplex::line().ball(4).len(), 9);
    }

    #[test]
    fn orientation_antisymmetric_and_comparability_is_adjacency() {
        for ball in [
            OrderedComplex::regular_tree(3).unwrap().ball(5),
            OrderedComplex::line().ball(20),
        ] {
            for (lo, hi) in ball.edges() {
                assert!(ball.less(lo, hi));
                assert!(!ball.less(hi, lo));
            }
            // A_v and B_v partition the neighbor set.
            for v in ball.vertex_ids() {
                let a: std::collections::HashSet<_> = ball.above(v).iter().copied().collect();
                let b: std::collections::HashSet<_> = ball.below(v).iter().copied().collect();
                assert!(a.is_disjoint(&b));
                let deg = a.len() + b.len();
                assert!(deg as u32 <= ball.complex.degree_bound());
            }
        }
    }

    #[test]
    fn neighbors_of_root_and_interior_vertices() {
        let ball = OrderedComplex::regular_tree(3).unwrap().ball(5);
        let root = ball.resolve(&VertexRef::root()).unwrap();
        assert!(ball.above(root).is_empty());
        assert_eq!(ball.below(root).len(), 3);
        for v in ball.vertex_ids() {
            if v != root && ball.depth(v) < 5 {
                assert_eq!(ball.above(v).len(), 1, "non-root has exactly the parent above");
                assert_eq!(ball.below(v).len(), 2, "non-root has q-1 = 2 children");
            }
        }
        let line = OrderedComplex::line().ball(6);
        let lroot = line.resolve(&VertexRef::root()).unwrap();
        assert_eq!(line.above(lroot).len() + line.below(lroot).len(), 2);
    }

    #[test]
    fn enumeration_is_deterministic_and_prefix_stable() {
        let t = OrderedComplex::regular_tree(3).unwrap();
        let b1 = t.ball(6);
        let b2 = t.ball(6);
        let paths1: Vec<_> = b1.vertex_ids().map(|v| b1.path(v).clone()).collect();
        let paths2: Vec<_> = b2.vertex_ids().map(|v| b2.path(v).clone()).collect();
        assert_eq!(paths1, paths2);
        // Growing the radius extends the enumeration without renumbering.
        let big = t.ball(8);
        for v in b1.vertex_ids() {
            assert_eq!(b1.path(v), big.path(v));
        }
        // No duplicates.
        let set: std::collections::HashSet<_> = paths1.iter().collect();
        assert_eq!(set.len(), paths1.len());
    }

    #[test]
    fn vertex_ref_parse_display_roundtrip() {
        for s in ["", "0", "0.1.0", "2.2"] {
            let v = VertexRef::parse(s).unwrap();
            let shown = v.to_string();
            let back = if s.is_empty() { VertexRef::root() } else { VertexRef::parse(&shown).unwrap() };
            assert_eq!(v, back);
        }
        assert!(VertexRef::parse("0.x").is_err());
    }

    #[test]
    fn finite_complex_validation() {
        let fc = FiniteComplex { vertices: 3, edges: vec![(0, 1), (1, 2)] };
        let c = OrderedComplex::finite(fc).unwrap();
        let ball = c.ball(4);
        assert_eq!(ball.len(), 3);
        let dup = FiniteComplex { vertices: 2, edges: vec![(0, 1), (1, 0)] };
        assert!(OrderedComplex::finite(dup).is_err());
        let loopy = FiniteComplex { vertices: 1, edges: vec![(0, 0)] };
        assert!(OrderedComplex::finite(loopy).is_err());
    }

    #[test]
    fn window_interior_radius_can_be_empty() {
        assert_eq!(Window::new(8, 6).interior_radius(), 2);
        assert_eq!(Window::new(5, 8).interior_radius(), -3);
    }
}
