//! Tail schemes: per-vertex descending paths with bounded edge multiplicity,
//! their truncation to windows, and their lifting into products.
//!
//! A tail anchored at v is a strictly descending edge path v = x0 > x-1 > ...
//! whose boundary telescopes to the anchor minus the truncation endpoint. On
//! trees the routing rule is: own unit to the first child, through-traffic to
//! the second child, which pins the multiplicity T(sigma) at 1 on every edge.
//! The prism construction here also produces the panels (over edges) and
//! beams (over 2-simplices) used by the reduction pipelines.

use std::collections::BTreeMap;

use crate::cert::{ReductionCertificate, StageRecord};
use crate::chain::Chain;
use crate::coeff::int;
use crate::complex::{Ball, ComplexKind, VertexId, Window};
use crate::error::SchemeError;
use crate::product::{ProductComplex, PVertex, Region, Simplex};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TailKind {
    /// First step to child 0, then repeatedly to child 1.
    TreeFirstSecond,
    /// Always step to the (unique) continuation; unbounded multiplicity.
    LineFixed,
}

/// A routing rule assigning every vertex of a factor window its tail.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TailScheme {
    pub kind: TailKind,
}

/// The bounded tree scheme. Every vertex of a regular tree has at least two
/// children, so the first-child/second-child routing is always available.
pub fn tree_tail_scheme(ball: &Ball) -> Result<TailScheme, SchemeError> {
    match &ball.complex.kind {
        ComplexKind::RegularTree { .. } => Ok(TailScheme { kind: TailKind::TreeFirstSecond }),
        ComplexKind::Line => {
            // Any non-root vertex has a single child.
            let vertex = if ball.len() > 1 {
                ball.path(1).to_string()
            } else {
                ball.path(0).to_string()
            };
            Err(SchemeError::BoundedSchemeUnavailable { vertex, children: 1 })
        }
        ComplexKind::Finite(_) => Err(SchemeError::NotATree(ball.complex.describe())),
    }
}

/// The deliberately unbounded control scheme on the line: every tail runs in
/// the fixed descending direction.
pub fn naive_line_tails(ball: &Ball) -> Result<TailScheme, SchemeError> {
    match &ball.complex.kind {
        ComplexKind::Line => Ok(TailScheme { kind: TailKind::LineFixed }),
        _ => Err(SchemeError::NotATree(format!(
            "naive line tails need the line, got {}",
            ball.complex.describe()
        ))),
    }
}

impl TailScheme {
    /// The truncated tail anchored at `anchor`: `[x0, x-1, ...]`, each vertex
    /// a child of the previous one, stopping at the window frontier.
    pub fn tail_of(&self, ball: &Ball, anchor: VertexId) -> Vec<VertexId> {
        let mut out = vec![anchor];
        let mut cur = anchor;
        let mut first = true;
        loop {
            let below = ball.below(cur);
            let next = match self.kind {
                TailKind::TreeFirstSecond => {
                    if first {
                        below.first()
                    } else {
                        below.get(1)
                    }
                }
                TailKind::LineFixed => below.first(),
            };
            match next {
                Some(&n) => {
                    out.push(n);
                    cur = n;
                    first = false;
                }
                None => return out,
            }
        }
    }

    /// Edge multiplicity table T(sigma): how many anchors' tails pass each
    /// edge, keyed (lesser, greater); plus the maximum.
    pub fn multiplicity(&self, ball: &Ball) -> (u64, BTreeMap<(VertexId, VertexId), u64>) {
        let mut table = BTreeMap::new();
        for anchor in ball.vertex_ids() {
            let tail = self.tail_of(ball, anchor);
            for w in tail.windows(2) {
                *table.entry((w[1], w[0])).or_insert(0u64) += 1;
            }
        }
        let max = table.values().copied().max().unwrap_or(0);
        (max, table)
    }

    /// Multiplicity table as a JSON object {"child|parent": count}.
    pub fn multiplicity_json(&self, ball: &Ball) -> serde_json::Value {
        let (_, table) = self.multiplicity(ball);
        let map: serde_json::Map<String, serde_json::Value> = table
            .into_iter()
            .map(|((lo, hi), n)| {
                (format!("{}|{}", ball.path(lo), ball.path(hi)), serde_json::Value::from(n))
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// The prism over `sigma` along a descending tail in factor `f`.
///
/// `sigma` must be constant in factor `f` with coordinate `tail[0]`. For a
/// 0-simplex this is the lifted tail, for an edge a panel, for a 2-simplex a
/// beam. The boundary telescopes to
///
///   d(prism) = sigma - sigma@deepest - prism(d sigma)
///
/// which specializes to the panel and beam boundary identities.
pub fn prism_chain(sigma: &Simplex, f: usize, tail: &[VertexId]) -> Chain {
    let deg = sigma.degree();
    debug_assert!(sigma.vertices().iter().all(|v| v.coord(f) == tail[0]));
    let mut out = Chain::zero(deg + 1);
    let verts = sigma.vertices();
    for step in tail.windows(2) {
        let (hi, lo) = (step[0], step[1]);
        let mut sign = int(1);
        for j in 0..=deg {
            let mut tuple = Vec::with_capacity(deg + 2);
            for v in verts.iter().take(j + 1) {
                tuple.push(v.with_coord(f, lo));
            }
            for v in verts.iter().skip(j) {
                tuple.push(v.with_coord(f, hi));
            }
            out.add_term(Simplex::from_verts_unchecked(&tuple), sign);
            sign = -sign;
        }
    }
    out
}

/// `sigma` shifted to factor-f coordinate `level`.
pub fn shift_to_level(sigma: &Simplex, f: usize, level: VertexId) -> Simplex {
    let verts: Vec<PVertex> = sigma.vertices().iter().map(|v| v.with_coord(f, level)).collect();
    Simplex::from_verts_unchecked(&verts)
}

/// The factor tail of `base`'s f-th coordinate embedded with all other
/// coordinates frozen, truncated at the window frontier.
pub fn lift_tail(scheme: &TailScheme, pc: &ProductComplex, f: usize, base: PVertex) -> Chain {
    let tail = scheme.tail_of(pc.factor(f), base.coord(f));
    let anchor = Simplex::from_verts_unchecked(&[base]);
    prism_chain(&anchor, f, &tail)
}

/// The fundamental 0-chain: coefficient 1 on every window vertex.
pub fn fundamental_zero_chain(pc: &ProductComplex, region: Region) -> Chain {
    let mut out = Chain::zero(0);
    for v in pc.vertices_in(region) {
        out.add_term(Simplex::from_verts_unchecked(&[v]), int(1));
    }
    out
}

/// Certificate that the boundary of the truncated tail sum agrees with the
/// fundamental 0-chain on the window interior: the constructive degree-0
/// vanishing witness. Failures are verdicts, not errors.
pub fn fundamental_class_certificate(
    ball: &Ball,
    scheme: &TailScheme,
    window: Window,
) -> ReductionCertificate {
    let pc = ProductComplex::single(ball.clone());
    let region_all = Region::uniform(window.radius as i64);
    let interior = Region::interior_of(window);
    let input = fundamental_zero_chain(&pc, region_all);

    let mut constructed = Chain::zero(1);
    for anchor in ball.vertex_ids() {
        let tail = scheme.tail_of(ball, anchor);
        let anchor_s = Simplex::from_verts_unchecked(&[PVertex([anchor, 0, 0])]);
        constructed.add_scaled(&prism_chain(&anchor_s, 0, &tail), int(1)).unwrap();
    }

    let residual = input.sub(&constructed.boundary().unwrap()).unwrap();

    let mut warnings = Vec::new();
    let mut failures = Vec::new();
    let (max_mult, _) = scheme.multiplicity(ball);
    if scheme.kind == TailKind::LineFixed {
        warnings.push(format!(
            "non-uniform tail scheme: max multiplicity {max_mult} grows with the radius"
        ));
    }
    if window.margin == 0 {
        warnings.push("margin 0: frontier residual may touch the interior".into());
    }
    // The residual must sit in the frontier shell.
    let shell_violation = residual.restrict(|s| {
        s.vertices().iter().all(|&v| (pc.max_depth(v) as i64) < window.radius as i64)
    });
    if !shell_violation.is_zero() {
        failures.push(format!(
            "residual escapes the frontier shell ({} terms)",
            shell_violation.len()
        ));
    }
    let stage = StageRecord {
        name: "tails".into(),
        constructed,
        residual_after: residual,
        region: interior,
        warnings,
        failures,
        max_tail_multiplicity: Some(max_mult),
    };
    let stages = vec![stage];
    let verdict = crate::cert::settle_verdict(&pc, &input, &stages, interior, &[]);
    ReductionCertificate {
        pipeline: "fundclass".into(),
        window,
        input,
        stages,
        interior,
        failures: Vec::new(),
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Verdict;
    use crate::coeff::format_coeff;
    use crate::complex::OrderedComplex;

    fn tree(q: u32, r: u32) -> Ball {
        OrderedComplex::regular_tree(q).unwrap().ball(r)
    }

    #[test]
    fn tree_scheme_multiplicity_is_one() {
        for (q, r) in [(3u32, 8u32), (4, 6), (5, 5)] {
            let ball = tree(q, r);
            let scheme = tree_tail_scheme(&ball).unwrap();
            let (max, table) = scheme.multiplicity(&ball);
            assert_eq!(max, 1, "tree:{q} radius {r}");
            assert!(table.values().all(|&n| n == 1));
        }
    }

    #[test]
    fn tree_tail_route_first_then_second_child() {
        let ball = tree(3, 8);
        let scheme = tree_tail_scheme(&ball).unwrap();
        let root = 0;
        let tail = scheme.tail_of(&ball, root);
        assert_eq!(tail.len(), 9); // root at depth 0 down to depth 8
        assert_eq!(tail[1], ball.below(root)[0]);
        for i in 1..tail.len() - 1 {
            assert_eq!(tail[i + 1], ball.below(tail[i])[1]);
        }
    }

    #[test]
    fn line_has_no_bounded_scheme() {
        let ball = OrderedComplex::line().ball(6);
        let err = tree_tail_scheme(&ball).unwrap_err();
        match err {
            SchemeError::BoundedSchemeUnavailable { children, .. } => assert_eq!(children, 1),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn naive_line_multiplicity_equals_radius() {
        for r in [5u32, 10] {
            let ball = OrderedComplex::line().ball(r);
            let scheme = naive_line_tails(&ball).unwrap();
            let (max, _) = scheme.multiplicity(&ball);
            assert_eq!(max, r as u64);
        }
        // Linear growth, slope 1 over radii 4..12.
        let maxima: Vec<u64> = (4..=12u32)
            .map(|r| {
                let ball = OrderedComplex::line().ball(r);
                naive_line_tails(&ball).unwrap().multiplicity(&ball).0
            })
            .collect();
        for w in maxima.windows(2) {
            assert_eq!(w[1] - w[0], 1);
        }
    }

    #[test]
    fn truncated_tail_telescopes() {
        let ball = tree(3, 6);
        let scheme = tree_tail_scheme(&ball).unwrap();
        let pc = ProductComplex::single(ball.clone());
        for anchor in ball.vertex_ids().step_by(7) {
            let t = lift_tail(&scheme, &pc, 0, PVertex([anchor, 0, 0]));
            if ball.depth(anchor) == ball.radius {
                assert!(t.is_zero());
                continue;
            }
            let b = t.boundary().unwrap();
            assert_eq!(b.len(), 2, "exactly two 0-simplices in the boundary");
            let anchor_s = Simplex::from_verts_unchecked(&[PVertex([anchor, 0, 0])]);
            assert_eq!(b.coeff(&anchor_s), int(1));
            let frontier: Vec<_> = b.support().filter(|s| **s != anchor_s).collect();
            assert_eq!(ball.depth(frontier[0].vertices()[0].coord(0)), ball.radius);
        }
    }

    #[test]
    fn lifted_tails_frozen_coordinates_disjoint() {
        let t = OrderedComplex::regular_tree(3).unwrap();
        let pc = ProductComplex::product(vec![t.ball(5), t.ball(5)]).unwrap();
        let scheme = tree_tail_scheme(pc.factor(1)).unwrap();
        let (x1, x2, y) = (1u32, 2u32, 0u32);
        let t1 = lift_tail(&scheme, &pc, 1, PVertex([x1, y, 0]));
        let t2 = lift_tail(&scheme, &pc, 1, PVertex([x2, y, 0]));
        // Vertical edges only.
        for s in t1.support() {
            assert_eq!(s.moved_mask(2), 0b10);
        }
        let sup1: std::collections::HashSet<_> = t1.support().cloned().collect();
        assert!(t2.support().all(|s| !sup1.contains(s)));
    }

    #[test]
    fn fundamental_class_certificates() {
        let ball = tree(3, 8);
        let scheme = tree_tail_scheme(&ball).unwrap();
        let cert = fundamental_class_certificate(&ball, &scheme, Window::new(8, 2));
        assert_eq!(cert.verdict, Verdict::Ok);
        assert_eq!(cert.stages[0].constructed.sup_norm(), int(1));
        assert_eq!(cert.stages[0].max_tail_multiplicity, Some(1));
        let pc = ProductComplex::single(ball);
        cert.verify(&pc).unwrap();

        let ball4 = tree(4, 6);
        let scheme4 = tree_tail_scheme(&ball4).unwrap();
        let cert4 = fundamental_class_certificate(&ball4, &scheme4, Window::new(6, 2));
        assert_eq!(cert4.verdict, Verdict::Ok);
    }

    #[test]
    fn line_certificate_ok_but_norm_grows() {
        let mut norms = Vec::new();
        for r in [5u32, 8, 11] {
            let ball = OrderedComplex::line().ball(r);
            let scheme = naive_line_tails(&ball).unwrap();
            let cert = fundamental_class_certificate(&ball, &scheme, Window::new(r, 2));
            assert_eq!(cert.verdict, Verdict::Ok);
            assert!(!cert.all_warnings().is_empty(), "flagged non-uniform");
            norms.push(cert.stages[0].constructed.sup_norm());
        }
        assert!(norms[0] < norms[1] && norms[1] < norms[2]);
        assert_eq!(format_coeff(&norms[0]), "5");
    }

    #[test]
    fn multiplicity_json_shape() {
        let ball = tree(3, 2);
        let scheme = tree_tail_scheme(&ball).unwrap();
        let v = scheme.multiplicity_json(&ball);
        let obj = v.as_object().unwrap();
        assert!(!obj.is_empty());
        assert!(obj.values().all(|n| n.as_u64() == Some(1)));
    }
}
