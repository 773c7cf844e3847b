//! Triangulated Cartesian products of ordered complexes.
//!
//! Vertices of the product are coordinate tuples; a tuple of product vertices
//! is a simplex exactly when it is strictly increasing in the coordinatewise
//! order, which for 1-dimensional factors means every coordinate changes at
//! most once across the tuple. Each simplex therefore spans a unique cube (one
//! oriented edge per moving factor), and enumeration walks cubes and the
//! ordered partitions of their moving factors.

use std::fmt::Write as _;

use arrayvec::ArrayVec;

use crate::chain::Chain;
use crate::coeff;
use crate::complex::{Ball, VertexId, Window};
use crate::error::{ChainError, ReduceError};

/// A product vertex: one factor vertex id per coordinate (unused slots 0).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PVertex(pub [VertexId; 3]);

impl PVertex {
    pub fn coord(&self, i: usize) -> VertexId {
        self.0[i]
    }

    pub fn with_coord(mut self, i: usize, v: VertexId) -> PVertex {
        self.0[i] = v;
        self
    }
}

/// A non-degenerate simplex, stored as its increasing vertex tuple.
/// Identity is tuple identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Simplex {
    verts: ArrayVec<PVertex, 4>,
}

impl Simplex {
    pub fn from_verts(pc: &ProductComplex, verts: Vec<PVertex>) -> Result<Simplex, ChainError> {
        if verts.is_empty() || verts.len() > 4 {
            return Err(ChainError::NotASimplex);
        }
        let s = Simplex { verts: verts.into_iter().collect() };
        if s.is_valid(pc) {
            Ok(s)
        } else {
            Err(ChainError::NotASimplex)
        }
    }

    pub(crate) fn from_verts_unchecked(verts: &[PVertex]) -> Simplex {
        Simplex { verts: verts.iter().copied().collect() }
    }

    fn is_valid(&self, pc: &ProductComplex) -> bool {
        for w in self.verts.windows(2) {
            if w[0] == w[1] || !pc.le(w[0], w[1]) {
                return false;
            }
        }
        // Each coordinate traverses at most one factor edge.
        for f in 0..pc.arity() {
            let mut distinct = 1;
            for w in self.verts.windows(2) {
                if w[0].coord(f) != w[1].coord(f) {
                    distinct += 1;
                }
            }
            if distinct > 2 {
                return false;
            }
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn vertices(&self) -> &[PVertex] {
        &self.verts
    }

    /// Face with vertex `i` removed.
    pub fn face(&self, i: usize) -> Simplex {
        let mut verts = self.verts.clone();
        verts.remove(i);
        Simplex { verts }
    }

    /// Bitmask of factors whose coordinate is not constant on the simplex.
    pub fn moved_mask(&self, arity: usize) -> u8 {
        let mut mask = 0u8;
        let v0 = self.verts[0];
        for v in &self.verts[1..] {
            for f in 0..arity {
                if v.coord(f) != v0.coord(f) {
                    mask |= 1 << f;
                }
            }
        }
        mask
    }

    /// The unique smallest cube containing the simplex.
    pub fn spanning_cube(&self, arity: usize) -> Cube {
        let mut comps = ArrayVec::new();
        let first = self.verts[0];
        let last = self.verts[self.verts.len() - 1];
        for f in 0..arity {
            if first.coord(f) == last.coord(f) {
                comps.push(CubeComp::Vert(first.coord(f)));
            } else {
                comps.push(CubeComp::Edge(first.coord(f), last.coord(f)));
            }
        }
        Cube { comps }
    }
}

/// Classification of product edges in a 2-fold product.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum EdgeClass {
    /// X-edge times Y-vertex.
    Horizontal,
    /// X-vertex times Y-edge.
    Vertical,
    Diagonal,
}

/// Classification of 2-simplices in a 3-fold product: named by the factor
/// whose coordinate stays constant; diagonal simplices lie on no cube boundary.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TriSimplexClass {
    X,
    Y,
    Z,
    Diagonal,
}

/// A k-cube: per factor either a frozen vertex or an oriented edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CubeComp {
    Vert(VertexId),
    Edge(VertexId, VertexId),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cube {
    pub comps: ArrayVec<CubeComp, 3>,
}

impl Cube {
    /// Number of edge factors.
    pub fn dim(&self) -> usize {
        self.comps
            .iter()
            .filter(|c| matches!(c, CubeComp::Edge(_, _)))
            .count()
    }

    /// Corner selected by one bit per edge factor (bit set = greater endpoint).
    pub fn corner(&self, select: u32) -> PVertex {
        let mut coords = [0u32; 3];
        let mut bit = 0;
        for (f, comp) in self.comps.iter().enumerate() {
            coords[f] = match comp {
                CubeComp::Vert(v) => *v,
                CubeComp::Edge(lo, hi) => {
                    let c = if select >> bit & 1 == 1 { *hi } else { *lo };
                    bit += 1;
                    c
                }
            };
        }
        PVertex(coords)
    }

    pub fn corners(&self) -> Vec<PVertex> {
        (0..1u32 << self.dim()).map(|s| self.corner(s)).collect()
    }

    /// Indices of the edge factors, in factor order.
    pub fn edge_factors(&self) -> Vec<usize> {
        self.comps
            .iter()
            .enumerate()
            .filter_map(|(f, c)| matches!(c, CubeComp::Edge(_, _)).then_some(f))
            .collect()
    }

    /// The simplex obtained by flipping the given blocks of edge factors in
    /// order. `blocks` are bitmasks over the cube's edge factors.
    fn simplex_from_blocks(&self, blocks: &[u32]) -> Simplex {
        let mut verts = ArrayVec::new();
        let mut select = 0u32;
        verts.push(self.corner(select));
        for &b in blocks {
            select |= b;
            verts.push(self.corner(select));
        }
        Simplex { verts }
    }

    /// Top-dimensional simplices of the triangulation with shuffle signs:
    /// one simplex per order in which the edge factors step up, signed by the
    /// permutation parity.
    pub fn fundamental_chain(&self) -> Vec<(Simplex, i8)> {
        let k = self.dim();
        let mut out = Vec::new();
        let mut perm: Vec<u32> = (0..k as u32).collect();
        permutations(&mut perm, 0, &mut |p| {
            let sign = if inversions(p) % 2 == 0 { 1 } else { -1 };
            let blocks: Vec<u32> = p.iter().map(|&i| 1 << i).collect();
            out.push((self.simplex_from_blocks(&blocks), sign));
        });
        out
    }
}

fn permutations(items: &mut [u32], at: usize, f: &mut impl FnMut(&[u32])) {
    if at == items.len() {
        f(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permutations(items, at + 1, f);
        items.swap(at, i);
    }
}

fn inversions(p: &[u32]) -> usize {
    let mut n = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                n += 1;
            }
        }
    }
    n
}

/// Per-factor depth caps; a simplex lies in the region when every coordinate
/// of every vertex is within its factor's cap. Negative caps mean empty.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Region {
    pub caps: [i64; 3],
}

impl Region {
    pub fn uniform(cap: i64) -> Region {
        Region { caps: [cap; 3] }
    }

    pub fn interior_of(w: Window) -> Region {
        Region::uniform(w.interior_radius())
    }

    pub fn shrink_all(mut self, by: i64) -> Region {
        for c in &mut self.caps {
            *c -= by;
        }
        self
    }

    pub fn shrink_factor(mut self, f: usize, by: i64) -> Region {
        self.caps[f] -= by;
        self
    }

    pub fn contains_vertex(&self, pc: &ProductComplex, v: PVertex) -> bool {
        (0..pc.arity()).all(|f| (pc.factor(f).depth(v.coord(f)) as i64) <= self.caps[f])
    }

    pub fn contains_simplex(&self, pc: &ProductComplex, s: &Simplex) -> bool {
        s.vertices().iter().all(|&v| self.contains_vertex(pc, v))
    }

    pub fn describe(&self, arity: usize) -> String {
        let mut s = String::from("caps(");
        for f in 0..arity {
            if f > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", self.caps[f]);
        }
        s.push(')');
        s
    }
}

/// The triangulated Cartesian product of 1..=3 ordered complex windows.
///
/// The public constructor accepts 2 or 3 factors; single-factor products are
/// used internally so factor chains (tails, fundamental classes) share the
/// chain machinery.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    factors: Vec<Ball>,
}

impl ProductComplex {
    pub fn product(factors: Vec<Ball>) -> Result<ProductComplex, ReduceError> {
        if factors.len() < 2 || factors.len() > 3 {
            return Err(ReduceError::WrongArity { want: 2, got: factors.len() });
        }
        debug_assert!(factors.windows(2).all(|w| w[0].radius == w[1].radius));
        Ok(ProductComplex { factors })
    }

    pub fn single(factor: Ball) -> ProductComplex {
        ProductComplex { factors: vec![factor] }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &Ball {
        &self.factors[i]
    }

    pub fn radius(&self) -> u32 {
        self.factors[0].radius
    }

    pub fn vertex_count(&self) -> usize {
        self.factors.iter().map(|b| b.len()).product()
    }

    /// Coordinatewise order: equal or one factor-edge up in every coordinate.
    pub fn le(&self, a: PVertex, b: PVertex) -> bool {
        (0..self.arity()).all(|f| {
            let (x, y) = (a.coord(f), b.coord(f));
            x == y || self.factor(f).less(x, y)
        })
    }

    /// Deepest coordinate depth of a product vertex.
    pub fn max_depth(&self, v: PVertex) -> u32 {
        (0..self.arity())
            .map(|f| self.factor(f).depth(v.coord(f)))
            .max()
            .unwrap_or(0)
    }

    pub fn display_vertex(&self, v: PVertex) -> String {
        let mut s = String::from("(");
        for f in 0..self.arity() {
            if f > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", self.factor(f).path(v.coord(f)));
        }
        s.push(')');
        s
    }

    pub fn display_simplex(&self, sx: &Simplex) -> String {
        let mut s = String::from("[");
        for (i, &v) in sx.vertices().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&self.display_vertex(v));
        }
        s.push(']');
        s
    }

    /// Product vertices with every coordinate within the region caps,
    /// in deterministic factor-major order.
    pub fn vertices_in(&self, region: Region) -> Vec<PVertex> {
        let per_factor: Vec<Vec<VertexId>> = (0..self.arity())
            .map(|f| {
                self.factor(f)
                    .vertex_ids()
                    .filter(|&v| (self.factor(f).depth(v) as i64) <= region.caps[f])
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut coords = [0u32; 3];
        cartesian(&per_factor, 0, &mut coords, &mut out);
        out
    }

    /// All k-cubes whose corners lie in the region, in deterministic order:
    /// edge-factor subsets by ascending bitmask, then factor-major components.
    pub fn cubes_in(&self, k: usize, region: Region) -> Vec<Cube> {
        let arity = self.arity();
        let mut out = Vec::new();
        if k == 0 || k > arity {
            return out;
        }
        for mask in 1u8..1 << arity {
            if (mask.count_ones() as usize) != k {
                continue;
            }
            let choices: Vec<Vec<CubeComp>> = (0..arity)
                .map(|f| {
                    let ball = self.factor(f);
                    if mask >> f & 1 == 1 {
                        ball.edges_within(region.caps[f])
                            .into_iter()
                            .map(|(lo, hi)| CubeComp::Edge(lo, hi))
                            .collect()
                    } else {
                        ball.vertex_ids()
                            .filter(|&v| (ball.depth(v) as i64) <= region.caps[f])
                            .map(CubeComp::Vert)
                            .collect()
                    }
                })
                .collect();
            let mut comps: ArrayVec<CubeComp, 3> = ArrayVec::new();
            cube_cartesian(&choices, 0, &mut comps, &mut out);
        }
        out
    }

    /// All non-degenerate n-simplices with vertices in the region, each once,
    /// in deterministic order. Degrees above the arity yield nothing.
    pub fn simplices_in(&self, n: usize, region: Region) -> Vec<Simplex> {
        let mut out = Vec::new();
        if n == 0 {
            for v in self.vertices_in(region) {
                out.push(Simplex::from_verts_unchecked(&[v]));
            }
            return out;
        }
        if n > self.arity() {
            return out;
        }
        for k in n..=self.arity() {
            let parts = ordered_partitions(k, n);
            for cube in self.cubes_in(k, region) {
                for blocks in &parts {
                    out.push(cube.simplex_from_blocks(blocks));
                }
            }
        }
        out
    }
}

fn cartesian(per_factor: &[Vec<VertexId>], f: usize, coords: &mut [u32; 3], out: &mut Vec<PVertex>) {
    if f == per_factor.len() {
        out.push(PVertex(*coords));
        return;
    }
    for &v in &per_factor[f] {
        coords[f] = v;
        cartesian(per_factor, f + 1, coords, out);
    }
}

fn cube_cartesian(
    choices: &[Vec<CubeComp>],
    f: usize,
    comps: &mut ArrayVec<CubeComp, 3>,
    out: &mut Vec<Cube>,
) {
    if f == choices.len() {
        out.push(Cube { comps: comps.clone() });
        return;
    }
    for c in &choices[f] {
        comps.push(c.clone());
        cube_cartesian(choices, f + 1, comps, out);
        comps.pop();
    }
}

/// Ordered partitions of k moving factors into n nonempty blocks, as block
/// bitmasks, in deterministic order (first block ascending, recursing).
pub fn ordered_partitions(k: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let full = (1u32 << k) - 1;
    let mut acc = Vec::new();
    partitions_rec(full, n, &mut acc, &mut out);
    out
}

fn partitions_rec(remaining: u32, blocks_left: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if blocks_left == 0 {
        if remaining == 0 {
            out.push(acc.clone());
        }
        return;
    }
    // Nonempty submasks of `remaining`, ascending.
    let mut sub = remaining;
    let mut subs = Vec::new();
    while sub > 0 {
        subs.push(sub);
        sub = (sub - 1) & remaining;
    }
    subs.reverse();
    for s in subs {
        acc.push(s);
        partitions_rec(remaining & !s, blocks_left - 1, acc, out);
        acc.pop();
    }
}

/// Classifies a degree-1 simplex of a 2-fold product.
pub fn classify_edge(pc: &ProductComplex, s: &Simplex) -> Result<EdgeClass, ChainError> {
    if pc.arity() != 2 || s.degree() != 1 {
        return Err(ChainError::DegreeMismatch(s.degree(), 1));
    }
    Ok(match s.moved_mask(2) {
        0b01 => EdgeClass::Horizontal,
        0b10 => EdgeClass::Vertical,
        _ => EdgeClass::Diagonal,
    })
}

/// Classifies a degree-2 simplex of a 3-fold product.
pub fn classify_tri(pc: &ProductComplex, s: &Simplex) -> Result<TriSimplexClass, ChainError> {
    if pc.arity() != 3 || s.degree() != 2 {
        return Err(ChainError::DegreeMismatch(s.degree(), 2));
    }
    Ok(match s.moved_mask(3) {
        0b110 => TriSimplexClass::X,
        0b101 => TriSimplexClass::Y,
        0b011 => TriSimplexClass::Z,
        _ => TriSimplexClass::Diagonal,
    })
}

/// The signed triangulated chain of one cube (corner weights +-1 by shuffle
/// parity), as a [`Chain`] in the cube's top degree.
pub fn cube_chain(cube: &Cube, weight: coeff::Coeff) -> Chain {
    let k = cube.dim();
    let mut chain = Chain::zero(k);
    for (s, sign) in cube.fundamental_chain() {
        chain.add_term(s, weight * coeff::int(sign as i128));
    }
    chain
}
