//! Degree-1 vanishing pipeline on 2-fold products.
//!
//! Stage D trades every diagonal edge for the two sides of its square, stage H
//! kills horizontal edges by attaching panels along the Y-factor tails, and
//! stage V attaches X-factor panels to the remaining vertical cycle; the tail
//! terms of stage V cancel because the per-vertex cycle condition holds at
//! every vertex where the input boundary vanishes. Each stage is trusted on a
//! window shrunk by margin 2; truncation residue stays within two steps of the
//! frontier.

use crate::cert::{settle_verdict, ReductionCertificate, StageRecord};
use crate::chain::Chain;
use crate::coeff::{format_coeff, int};
use crate::complex::Window;
use crate::error::{ReduceError, SchemeError};
use crate::product::{ProductComplex, Region, Simplex};
use crate::tails::{prism_chain, tree_tail_scheme, TailScheme};

/// Total stage margin the pipeline needs: 2 per stage for D, H, V.
pub const MIN_MARGIN: u32 = 6;

fn check_input(pc: &ProductComplex, c: &Chain, w: Window) -> Result<(), ReduceError> {
    if pc.arity() != 2 {
        return Err(ReduceError::WrongArity { want: 2, got: pc.arity() });
    }
    if c.degree() != 1 {
        return Err(ReduceError::WrongDegree { want: 1, got: c.degree() });
    }
    let interior = Region::interior_of(w);
    let leak = c.boundary().expect("degree 1").restrict_region(pc, interior);
    if !leak.is_zero() {
        let witness = leak.support().next().unwrap();
        return Err(ReduceError::NotACycle(pc.display_simplex(witness)));
    }
    Ok(())
}

/// Stage D: for every diagonal edge [(x,y),(x',y')] with coefficient t, add
/// t times the triangle [(x,y),(x,y'),(x',y')]. Returns (phi, b) with
/// b = c + d(phi); b has no diagonal edges wherever c was window-supported.
pub fn kill_diagonals(
    pc: &ProductComplex,
    c: &Chain,
    w: Window,
) -> Result<(Chain, Chain), ReduceError> {
    check_input(pc, c, w)?;
    let mut phi = Chain::zero(2);
    for (s, t) in c.iter() {
        if s.moved_mask(2) != 0b11 {
            continue;
        }
        let v0 = s.vertices()[0];
        let v1 = s.vertices()[1];
        let mid = v0.with_coord(1, v1.coord(1));
        phi.add_term(Simplex::from_verts_unchecked(&[v0, mid, v1]), *t);
    }
    let b = c.add(&phi.boundary().expect("degree 2"))?;
    Ok((phi, b))
}

/// Stage H: attach a Y-tail panel to every horizontal edge, weighted by its
/// coefficient. Both lifts of the panel use the single factor tail of the
/// shared Y-coordinate. Returns (phi, b) with b = c - d(phi).
pub fn kill_horizontals(
    pc: &ProductComplex,
    c: &Chain,
    scheme_y: &TailScheme,
    w: Window,
) -> Result<(Chain, Chain), ReduceError> {
    check_input(pc, c, w)?;
    let ball_y = pc.factor(1);
    let mut phi = Chain::zero(2);
    for (s, t) in c.iter() {
        if s.moved_mask(2) != 0b01 {
            continue;
        }
        let tail = scheme_y.tail_of(ball_y, s.vertices()[0].coord(1));
        phi.add_scaled(&prism_chain(s, 1, &tail), *t)?;
    }
    let b = c.sub(&phi.boundary().expect("degree 2"))?;
    Ok((phi, b))
}

/// Per-vertex cycle-condition defects of the vertical part of a chain: the
/// boundary coefficients of the vertical restriction, split into (inside
/// region, outside region) vertex lists.
fn coeffzero_defects(
    pc: &ProductComplex,
    c: &Chain,
    region: Region,
) -> (Vec<String>, usize) {
    let b = c
        .restrict(|s| s.moved_mask(2) == 0b10)
        .boundary()
        .expect("degree 1");
    let mut inside = Vec::new();
    let mut outside = 0usize;
    for (s, t) in b.iter() {
        if region.contains_simplex(pc, s) {
            inside.push(format!(
                "cycle condition fails at vertex {} (defect {})",
                pc.display_simplex(s),
                format_coeff(t)
            ));
        } else {
            outside += 1;
        }
    }
    (inside, outside)
}

/// Stage V: attach an X-tail panel to every vertical edge. Returns phi with
/// restrict(c - d(phi), interior) = 0 whenever the cycle condition holds.
pub fn bound_verticals(
    pc: &ProductComplex,
    c: &Chain,
    scheme_x: &TailScheme,
    w: Window,
) -> Result<Chain, ReduceError> {
    check_input(pc, c, w)?;
    let ball_x = pc.factor(0);
    let mut phi = Chain::zero(2);
    for (s, t) in c.iter() {
        if s.moved_mask(2) != 0b10 {
            continue;
        }
        let tail = scheme_x.tail_of(ball_x, s.vertices()[0].coord(0));
        phi.add_scaled(&prism_chain(s, 0, &tail), *t)?;
    }
    Ok(phi)
}

/// Builds the per-factor tail schemes for the pipeline, surfacing the
/// bounded-scheme-unavailable case.
pub fn schemes_for(pc: &ProductComplex) -> Result<Vec<TailScheme>, SchemeError> {
    (0..pc.arity()).map(|f| tree_tail_scheme(pc.factor(f))).collect()
}

/// The full degree-1 pipeline D -> H -> V with a reduction certificate.
/// Scheme unavailability and postcondition violations become verdicts.
pub fn reduce_h1(pc: &ProductComplex, c: &Chain, w: Window) -> Result<ReductionCertificate, ReduceError> {
    if w.margin < MIN_MARGIN {
        return Err(ReduceError::MarginTooSmall { margin: w.margin, need: MIN_MARGIN });
    }
    check_input(pc, c, w)?;
    let r = w.radius as i64;
    let region_d = Region::uniform(r - 2);
    let region_h = Region::uniform(r - 4);
    let region_v = Region::uniform(r - 6);

    let schemes = match schemes_for(pc) {
        Ok(s) => s,
        Err(e) => {
            return Ok(ReductionCertificate::failed(
                "reduce1",
                w,
                c.clone(),
                region_v,
                e.to_string(),
            ))
        }
    };

    let mut stages = Vec::new();

    // Stage D: b1 = c + d(phi), recorded as constructed -phi so that
    // residual_before - d(constructed) = residual_after holds.
    let (phi_d, b1) = kill_diagonals(pc, c, w)?;
    let mut failures_d = Vec::new();
    let dirty = b1.restrict(|s| s.moved_mask(2) == 0b11 && region_d.contains_simplex(pc, s));
    if !dirty.is_zero() {
        failures_d.push(format!("{} diagonal edges survive stage D", dirty.len()));
    }
    stages.push(StageRecord {
        name: "D".into(),
        constructed: phi_d.scale(int(-1)),
        residual_after: b1.clone(),
        region: region_d,
        warnings: Vec::new(),
        failures: failures_d,
        max_tail_multiplicity: None,
    });

    // Stage H.
    let (phi_h, b2) = kill_horizontals(pc, &b1, &schemes[1], w)?;
    let mut failures_h = Vec::new();
    let dirty = b2.restrict(|s| s.moved_mask(2) != 0b10 && region_h.contains_simplex(pc, s));
    if !dirty.is_zero() {
        failures_h.push(format!("{} non-vertical edges survive stage H", dirty.len()));
    }
    let (mult_y, _) = schemes[1].multiplicity(pc.factor(1));
    stages.push(StageRecord {
        name: "H".into(),
        constructed: phi_h,
        residual_after: b2.clone(),
        region: region_h,
        warnings: Vec::new(),
        failures: failures_h,
        max_tail_multiplicity: Some(mult_y),
    });

    // Stage V.
    let phi_v = bound_verticals(pc, &b2, &schemes[0], w)?;
    let residual = b2.sub(&phi_v.boundary().expect("degree 2"))?;
    let (mut failures_v, frontier_defects) = coeffzero_defects(pc, &b2, region_h);
    let mut warnings = Vec::new();
    if frontier_defects > 0 {
        warnings.push(format!(
            "cycle condition broken at {frontier_defects} frontier vertices (truncation)"
        ));
    }
    let dirty = residual.restrict_region(pc, region_v);
    if !dirty.is_zero() {
        failures_v.push(format!("{} edges survive stage V on the interior", dirty.len()));
    }
    let (mult_x, _) = schemes[0].multiplicity(pc.factor(0));
    stages.push(StageRecord {
        name: "V".into(),
        constructed: phi_v,
        residual_after: residual,
        region: region_v,
        warnings,
        failures: failures_v,
        max_tail_multiplicity: Some(mult_x),
    });

    let verdict = settle_verdict(pc, c, &stages, region_v, &[]);
    Ok(ReductionCertificate {
        pipeline: "reduce1".into(),
        window: w,
        input: c.clone(),
        stages,
        interior: region_v,
        failures: Vec::new(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Verdict;
    use crate::coeff;
    use crate::complex::OrderedComplex;
    use crate::generate;
    use crate::product::PVertex;

    fn pc2(radius: u32) -> ProductComplex {
        let t = OrderedComplex::regular_tree(3).unwrap();
        ProductComplex::product(vec![t.ball(radius), t.ball(radius)]).unwrap()
    }

    /// Diagonal loop around one square: the diagonal closed up by the two
    /// sides through the corner the repair triangle does not use. Stage D
    /// must leave exactly the 4 square sides.
    #[test]
    fn diagonal_loop_becomes_square_sides() {
        let pc = pc2(4);
        let w = Window::new(4, 1);
        // Children are lesser than parents, so (1,1) is the low corner of the
        // square spanned with the roots (0,0).
        let low = PVertex([1, 1, 0]);
        let high = PVertex([0, 0, 0]);
        let corner_xy = PVertex([0, 1, 0]); // x moved first
        let diag = Simplex::from_verts(&pc, vec![low, high]).unwrap();
        let h_edge = Simplex::from_verts(&pc, vec![low, corner_xy]).unwrap();
        let v_edge = Simplex::from_verts(&pc, vec![corner_xy, high]).unwrap();
        // Closed triangle loop: d(c) = 0.
        let mut c = Chain::zero(1);
        c.add_term(diag.clone(), int(1));
        c.add_term(h_edge, int(-1));
        c.add_term(v_edge, int(-1));
        assert!(c.boundary().unwrap().is_zero());
        let (phi, b) = kill_diagonals(&pc, &c, w).unwrap();
        assert_eq!(phi.len(), 1);
        assert_eq!(b.coeff(&diag), int(0));
        assert_eq!(b.len(), 4);
        for s in b.support() {
            assert_eq!(s.moved_mask(2).count_ones(), 1);
        }
        assert!(phi.sup_norm() <= c.sup_norm());
        assert!(b.boundary().unwrap().is_zero());
    }

    #[test]
    fn no_diagonal_support_is_identity() {
        let pc = pc2(4);
        let w = Window::new(4, 1);
        // A square loop of axis edges: boundary of one triangulated square.
        let cube = pc.cubes_in(2, Region::uniform(1))[0].clone();
        let q = crate::product::cube_chain(&cube, int(1));
        let c = q.boundary().unwrap();
        assert!(c.support().all(|s| s.moved_mask(2).count_ones() == 1), "axis loop");
        let (phi, b) = kill_diagonals(&pc, &c, w).unwrap();
        assert!(phi.is_zero());
        assert_eq!(b, c);
        let scheme = tree_tail_scheme(pc.factor(1)).unwrap();
        let (phi_h, b2) = kill_horizontals(&pc, &c, &scheme, w).unwrap();
        assert!(!phi_h.is_zero());
        assert!(b2
            .restrict(|s| s.moved_mask(2) == 0b01 && Region::uniform(2).contains_simplex(&pc, s))
            .is_zero());
    }

    /// A purely vertical interior cycle (a lifted Y-geodesic path between two
    /// frontier vertices) passes stage H untouched and stage V bounds it.
    #[test]
    fn purely_vertical_passthrough_and_bounding() {
        let pc = pc2(4);
        let w = Window::new(4, 2);
        let ball_y = pc.factor(1);
        let x = 0u32;
        let mut c = Chain::zero(1);
        let mut down_a = 0u32;
        for _ in 0..4 {
            let next = ball_y.below(down_a)[0];
            let lo = PVertex([x, next, 0]);
            let hi = PVertex([x, down_a, 0]);
            c.add_term(Simplex::from_verts(&pc, vec![lo, hi]).unwrap(), int(1));
            down_a = next;
        }
        let mut down_b = 0u32;
        for _ in 0..4 {
            let next = ball_y.below(down_b)[1];
            let lo = PVertex([x, next, 0]);
            let hi = PVertex([x, down_b, 0]);
            c.add_term(Simplex::from_verts(&pc, vec![lo, hi]).unwrap(), int(-1));
            down_b = next;
        }
        assert!(c.is_cycle_on(&pc, Region::interior_of(w)));
        let scheme = tree_tail_scheme(ball_y).unwrap();
        let (phi_h, b) = kill_horizontals(&pc, &c, &scheme, w).unwrap();
        assert!(phi_h.is_zero());
        assert_eq!(b, c);
        let scheme_x = tree_tail_scheme(pc.factor(0)).unwrap();
        let phi_v = bound_verticals(&pc, &c, &scheme_x, w).unwrap();
        let residual = c.sub(&phi_v.boundary().unwrap()).unwrap();
        assert!(residual.restrict_region(&pc, Region::uniform(2)).is_zero());
    }

    #[test]
    fn truncated_panel_boundary_identity() {
        // d(panel) = sigma_h + lift(x tail) - lift(x' tail) - frontier edge.
        let pc = pc2(6);
        let scheme = tree_tail_scheme(pc.factor(1)).unwrap();
        let edges = pc.simplices_in(1, Region::uniform(4));
        let mut tested = 0;
        for s in edges.iter().filter(|s| s.moved_mask(2) == 0b01).take(100) {
            let (v0, v1) = (s.vertices()[0], s.vertices()[1]);
            let tail = scheme.tail_of(pc.factor(1), v0.coord(1));
            let panel = prism_chain(s, 1, &tail);
            let mut expect = Chain::zero(1);
            expect.add_term(s.clone(), int(1));
            expect.add_scaled(&crate::tails::lift_tail(&scheme, &pc, 1, v0), int(1)).unwrap();
            expect.add_scaled(&crate::tails::lift_tail(&scheme, &pc, 1, v1), int(-1)).unwrap();
            let deepest = *tail.last().unwrap();
            let frontier = Simplex::from_verts_unchecked(&[
                v0.with_coord(1, deepest),
                v1.with_coord(1, deepest),
            ]);
            expect.add_term(frontier.clone(), int(-1));
            assert_eq!(panel.boundary().unwrap(), expect);
            assert_eq!(pc.factor(1).depth(deepest), 6, "frontier edge at the rim");
            tested += 1;
        }
        assert_eq!(tested, 100);
    }

    #[test]
    fn pipeline_on_random_boundaries() {
        let pc = pc2(6);
        let w = Window::new(6, 6);
        for seed in 0..4 {
            let (_, c) = generate::random_boundary(&pc, 2, Region::uniform(4), 3, seed);
            let cert = reduce_h1(&pc, &c, w).unwrap();
            assert_eq!(cert.verdict, Verdict::Ok, "seed {seed}");
            cert.verify(&pc).unwrap();
            // Stagewise class postconditions.
            let b1 = &cert.stages[0].residual_after;
            assert!(b1.restrict(|s| s.moved_mask(2) == 0b11).is_zero(), "no diagonals anywhere");
            let b2 = &cert.stages[1].residual_after;
            assert!(b2
                .restrict(|s| s.moved_mask(2) == 0b01 && Region::uniform(4).contains_simplex(&pc, s))
                .is_zero());
            // Norm control.
            assert!(cert.stages[0].constructed.sup_norm() <= c.sup_norm());
            let bound = c.sup_norm() * int(3);
            assert!(cert.stages[1].constructed.sup_norm() <= bound);
            assert!(cert.stages[2].constructed.sup_norm() <= bound);
        }
    }

    #[test]
    fn zero_input_gives_ok_with_empty_stages() {
        let pc = pc2(6);
        let cert = reduce_h1(&pc, &Chain::zero(1), Window::new(6, 6)).unwrap();
        assert_eq!(cert.verdict, Verdict::Ok);
        assert!(cert.stages.iter().all(|s| s.constructed.is_zero()));
    }

    #[test]
    fn line_factor_surfaces_scheme_error_as_verdict() {
        let t = OrderedComplex::regular_tree(3).unwrap();
        let l = OrderedComplex::line();
        let pc = ProductComplex::product(vec![l.ball(6), t.ball(6)]).unwrap();
        let cert = reduce_h1(&pc, &Chain::zero(1), Window::new(6, 6)).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!(cert.failures[0].contains("bounded tail scheme unavailable"));
    }

    #[test]
    fn margin_validation() {
        let pc = pc2(6);
        let err = reduce_h1(&pc, &Chain::zero(1), Window::new(6, 4)).unwrap_err();
        assert!(matches!(err, ReduceError::MarginTooSmall { .. }));
    }

    #[test]
    fn non_cycle_rejected() {
        let pc = pc2(4);
        let e = pc.simplices_in(1, Region::uniform(1))[0].clone();
        let mut c = Chain::zero(1);
        c.add_term(e, int(1));
        assert!(matches!(
            kill_diagonals(&pc, &c, Window::new(4, 2)),
            Err(ReduceError::NotACycle(_))
        ));
    }

    #[test]
    fn coeffzero_holds_on_stage_h_output() {
        let pc = pc2(6);
        let (_, c) = generate::random_boundary(&pc, 2, Region::uniform(4), 3, 9);
        let cert = reduce_h1(&pc, &c, Window::new(6, 6)).unwrap();
        let b2 = &cert.stages[1].residual_after;
        // Interior vertices: boundary of the vertical part vanishes.
        let vertical = b2.restrict(|s| s.moved_mask(2) == 0b10);
        let defects = vertical.boundary().unwrap();
        for (s, t) in defects.iter() {
            assert!(
                !Region::uniform(4).contains_simplex(&pc, s),
                "interior coeffzero defect {} at {}",
                coeff::format_coeff(t),
                pc.display_simplex(s)
            );
        }
    }
}
