//! Geometric measurements and lemma-level predicates: signed areas,
//! intersection detection, axis crossings, extrema counts, closeness
//! reports, hull statistics, turning numbers and curvature bounds.

use alloc::vec::Vec;

use crate::curve::{
    graph_from_curve, point_segment_distance, resample_uniform, shoelace, FlowTrajectory, Point,
    PolyCurve, SampledGraph, Snapshot,
};
use crate::error::{Error, Result};
use crate::exact::{grim_scaled, GrimSpec};
use crate::gluing::{DerivedLadder, LadderConfig};
use crate::math;
use crate::param_flow;

/// Tolerance for merging intersection hits and detecting grazing touches.
pub const HIT_TOL: f64 = 1e-9;
/// Plateau tolerance for axis crossings and extrema counting.
pub const FLAT_TOL: f64 = 1e-9;
/// One-sided ordering tolerance used by comparison predicates.
pub const ORDERING_TOL: f64 = 1e-6;

/// Signed area `int (f2 - f1)` over `f2`'s domain, with `f1` extended by
/// zero outside its own domain. `f1`'s domain must be contained in
/// `f2`'s.
pub fn signed_area_between(f1: &SampledGraph, f2: &SampledGraph) -> Result<f64> {
    let slack = 1e-9;
    if f1.y_lo() < f2.y_lo() - slack || f1.y_hi() > f2.y_hi() + slack {
        return Err(Error::DomainMismatch);
    }
    let n = f2.len();
    let dy = f2.dy();
    let f1_ext = |y: f64| -> f64 {
        if y < f1.y_lo() || y > f1.y_hi() {
            0.0
        } else {
            f1.eval(y)
        }
    };
    let mut acc = 0.0;
    for i in 0..n {
        let y = f2.grid_y(i);
        let v = f2.values()[i] - f1_ext(y);
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * v;
    }
    Ok(acc * dy)
}

/// Shoelace area of a closed curve, counterclockwise positive.
pub fn enclosed_area(curve: &PolyCurve) -> Result<f64> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    Ok(shoelace(curve.vertices()))
}

/// A self-intersection: where it is, which segments produced it, and
/// whether it was only a tangential near-touch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionHit {
    pub point: Point,
    pub seg_a: usize,
    pub seg_b: usize,
    pub grazing: bool,
}

/// All transversal intersections between non-adjacent segments, found by
/// an interval sweep in x. Tangential near-touches within [`HIT_TOL`]
/// come back flagged `grazing`; duplicate hits within [`HIT_TOL`] are
/// merged (transversal wins).
pub fn self_intersections(curve: &PolyCurve) -> Vec<IntersectionHit> {
    let nseg = curve.segment_count();
    let nv = curve.len();
    let mut segs: Vec<(usize, Point, Point, f64, f64)> = (0..nseg)
        .map(|i| {
            let (a, b) = curve.segment(i);
            (i, a, b, a.x.min(b.x), a.x.max(b.x))
        })
        .collect();
    segs.sort_unstable_by(|p, q| p.3.total_cmp(&q.3));

    let adjacent = |i: usize, j: usize| -> bool {
        let d = if i > j { i - j } else { j - i };
        d == 1 || (curve.is_closed() && d == nv - 1)
    };

    let mut hits: Vec<IntersectionHit> = Vec::new();
    let mut active: Vec<usize> = Vec::new(); // indices into segs
    for k in 0..segs.len() {
        let (i, a1, a2, min_x, _) = segs[k];
        active.retain(|&m| segs[m].4 >= min_x - HIT_TOL);
        for &m in &active {
            let (j, b1, b2, _, _) = segs[m];
            if adjacent(i, j) {
                continue;
            }
            // y-interval prefilter.
            if a1.y.max(a2.y) < b1.y.min(b2.y) - HIT_TOL
                || b1.y.max(b2.y) < a1.y.min(a2.y) - HIT_TOL
            {
                continue;
            }
            if let Some((point, grazing)) = segment_hit(a1, a2, b1, b2) {
                merge_hit(
                    &mut hits,
                    IntersectionHit {
                        point,
                        seg_a: i.min(j),
                        seg_b: i.max(j),
                        grazing,
                    },
                );
            }
        }
        active.push(k);
    }
    hits
}

/// Number of merged transversal self-intersections.
pub fn crossing_count(curve: &PolyCurve) -> usize {
    self_intersections(curve)
        .iter()
        .filter(|h| !h.grazing)
        .count()
}

fn segment_hit(a1: Point, a2: Point, b1: Point, b2: Point) -> Option<(Point, bool)> {
    let d1 = (b2 - b1).cross(a1 - b1);
    let d2 = (b2 - b1).cross(a2 - b1);
    let d3 = (a2 - a1).cross(b1 - a1);
    let d4 = (a2 - a1).cross(b2 - a1);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let denom = (a2 - a1).cross(b2 - b1);
        let s = (b1 - a1).cross(b2 - b1) / denom;
        return Some((a1 + (a2 - a1) * s, false));
    }
    // Shared exact vertex between non-adjacent segments: a revisited
    // point of the curve, reported as a crossing.
    for &p in &[a1, a2] {
        for &q in &[b1, b2] {
            if p.dist(q) <= 1e-12 {
                return Some((p, false));
            }
        }
    }
    // Tangential near-touches.
    let mut best: Option<(Point, f64)> = None;
    for &(p, q1, q2) in &[
        (a1, b1, b2),
        (a2, b1, b2),
        (b1, a1, a2),
        (b2, a1, a2),
    ] {
        let d = point_segment_distance(p, q1, q2);
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((p, d));
        }
    }
    match best {
        Some((p, d)) if d <= HIT_TOL => Some((p, true)),
        _ => None,
    }
}

fn merge_hit(hits: &mut Vec<IntersectionHit>, new: IntersectionHit) {
    for h in hits.iter_mut() {
        if h.point.dist(new.point) <= HIT_TOL {
            if h.grazing && !new.grazing {
                *h = new;
            }
            return;
        }
    }
    hits.push(new);
}

/// Ordinates where the linear interpolant of the graph crosses zero;
/// nodes with `|u| <= FLAT_TOL` count (plateaus once), endpoints
/// included.
pub fn axis_crossings(g: &SampledGraph) -> Vec<f64> {
    let v = g.values();
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < n {
        if math::fabs(v[i]) <= FLAT_TOL {
            let start = i;
            while i + 1 < n && math::fabs(v[i + 1]) <= FLAT_TOL {
                i += 1;
            }
            let mid = (start + i) / 2;
            out.push(g.grid_y(mid));
        } else if i + 1 < n && math::fabs(v[i + 1]) > FLAT_TOL && v[i] * v[i + 1] < 0.0 {
            let frac = v[i] / (v[i] - v[i + 1]);
            out.push(g.grid_y(i) + frac * g.dy());
        }
        i += 1;
    }
    out
}

/// Strict interior extrema after collapsing plateaus (runs equal within
/// [`FLAT_TOL`]); boundary runs excluded. Returns `(n_max, n_min)`.
pub fn count_extrema(g: &SampledGraph) -> (usize, usize) {
    let v = g.values();
    let mut runs: Vec<f64> = Vec::new();
    for &x in v {
        match runs.last() {
            Some(&last) if math::fabs(x - last) <= FLAT_TOL => {}
            _ => runs.push(x),
        }
    }
    let mut n_max = 0;
    let mut n_min = 0;
    for k in 1..runs.len().saturating_sub(1) {
        if runs[k] > runs[k - 1] && runs[k] > runs[k + 1] {
            n_max += 1;
        } else if runs[k] < runs[k - 1] && runs[k] < runs[k + 1] {
            n_min += 1;
        }
    }
    (n_max, n_min)
}

/// Minimum of `upper - lower` over the shared part of their domains,
/// trimmed by `trim` grid cells at each end. `None` when the domains do
/// not overlap after trimming.
pub fn min_gap_on_common_grid(
    upper: &SampledGraph,
    lower: &SampledGraph,
    trim: usize,
) -> Option<f64> {
    let pad = trim as f64 * lower.dy().max(upper.dy());
    let lo = (upper.y_lo().max(lower.y_lo())) + pad;
    let hi = (upper.y_hi().min(lower.y_hi())) - pad;
    if !(lo < hi) {
        return None;
    }
    let n = upper.len().max(lower.len());
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        min_gap = min_gap.min(upper.eval(y) - lower.eval(y));
    }
    Some(min_gap)
}

/// The five closeness flags plus the measured quantities behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessReport {
    /// (1) the curve is graphical on the positive side.
    pub graphical: bool,
    /// (2) endpoint window `2 pi h_n + pi / a_{n+1} > y+ > y- > -pi`.
    pub endpoint_window: bool,
    /// (3) one-sided ordering above the reference and area below bound.
    pub ordered_with_area: bool,
    /// (4) dominated by every rung's reaper barrier.
    pub barrier_dominated: bool,
    /// (5) exactly `n + 1` maxima and `n` minima.
    pub extrema_counts: bool,
    pub y_lo: f64,
    pub y_hi: f64,
    pub window_hi: f64,
    pub min_gap: f64,
    pub area_to_reference: f64,
    pub area_bound: f64,
    pub n_max: usize,
    pub n_min: usize,
    /// Per-rung maxima of `g - barrier` (negative means dominated).
    pub barrier_margins: Vec<f64>,
}

impl ClosenessReport {
    /// Conjunction of the five flags.
    pub fn verdict(&self) -> bool {
        self.graphical
            && self.endpoint_window
            && self.ordered_with_area
            && self.barrier_dominated
            && self.extrema_counts
    }
}

/// Evaluate the five closeness conditions of a reflected curve against
/// the evolved reference graph at time `t < -C_n - 1`.
pub fn closeness_check(
    curve: &PolyCurve,
    ref_graph: &SampledGraph,
    cfg: &LadderConfig,
    dl: &DerivedLadder,
    n: usize,
    t: f64,
) -> Result<ClosenessReport> {
    let latest = dl.latest_time(n.min(cfg.n()));
    if !(t < latest) {
        return Err(Error::TimeTooLate { t, latest });
    }
    let scale_next = cfg
        .scales
        .get(n)
        .copied()
        .unwrap_or_else(|| cfg.scales.last().copied().unwrap_or(0.0) + 1.0);
    let window_hi = 2.0 * math::PI * dl.h[n] + math::PI / scale_next;
    let tail_start = n.max(1);
    let area_bound = cfg.area_budget * cfg.tail_inv_sq_sum(tail_start);

    let samples = ref_graph.len().max(257);
    let extracted = match graph_from_curve(curve, 1, samples) {
        Ok(g) => Some(g),
        Err(Error::NotGraphical) => None,
        Err(e) => return Err(e),
    };
    let mut report = ClosenessReport {
        graphical: extracted.is_some(),
        endpoint_window: false,
        ordered_with_area: false,
        barrier_dominated: false,
        extrema_counts: false,
        y_lo: f64::NAN,
        y_hi: f64::NAN,
        window_hi,
        min_gap: f64::NAN,
        area_to_reference: f64::NAN,
        area_bound,
        n_max: 0,
        n_min: 0,
        barrier_margins: Vec::new(),
    };
    let g = match extracted {
        Some(g) => g,
        None => return Ok(report),
    };
    report.y_lo = g.y_lo();
    report.y_hi = g.y_hi();
    report.endpoint_window = window_hi > g.y_hi() - ORDERING_TOL
        && g.y_hi() > g.y_lo()
        && g.y_lo() > -math::PI - ORDERING_TOL;

    // (3): ordering plus area. The reference domain may poke out of the
    // extracted one by discretization slop; clip it by up to two cells.
    report.min_gap = min_gap_on_common_grid(&g, ref_graph, 2).unwrap_or(f64::NEG_INFINITY);
    let overhang_lo = g.y_lo() - ref_graph.y_lo();
    let overhang_hi = ref_graph.y_hi() - g.y_hi();
    let slack = 2.0 * ref_graph.dy();
    let area = if overhang_lo <= slack && overhang_hi <= slack {
        let lo = ref_graph.y_lo().max(g.y_lo());
        let hi = ref_graph.y_hi().min(g.y_hi());
        let clipped = SampledGraph::from_fn(lo, hi, ref_graph.len(), |y| ref_graph.eval(y))?;
        signed_area_between(&clipped, &g)?
    } else {
        f64::NAN
    };
    report.area_to_reference = area;
    report.ordered_with_area =
        report.min_gap >= -ORDERING_TOL && area.is_finite() && area < area_bound;

    // (4): domination by each rung's reaper barrier on its slab.
    let mut dominated = true;
    for m in 1..=n.min(cfg.n()) {
        let a = cfg.scales[m - 1];
        let spec = GrimSpec::new(a, 2.0 * math::PI * dl.h[m - 1], -1, dl.c[m])?;
        let (slab_lo, slab_hi) = spec.slab();
        // Probe at the extracted graph's own grid nodes so no linear
        // interpolation across high-curvature clip corners leaks in.
        let mut margin = f64::NEG_INFINITY;
        for i in 0..g.len() {
            let y = g.grid_y(i);
            if y <= slab_lo || y >= slab_hi {
                continue;
            }
            let barrier = grim_scaled(&spec, t, y)?;
            margin = margin.max(g.values()[i] - barrier);
        }
        if !(margin < ORDERING_TOL) {
            dominated = false;
        }
        report.barrier_margins.push(margin);
    }
    report.barrier_dominated = dominated;

    let (n_max, n_min) = count_extrema(&g);
    report.n_max = n_max;
    report.n_min = n_min;
    report.extrema_counts = n_max == n + 1 && n_min == n;
    Ok(report)
}

/// The C0-estimate constants `K = 2 (A + 5 pi) / l`, `E = 20 pi K / l`,
/// `M_lower = C_univ E^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Constants {
    pub area_bound: f64,
    pub gap: f64,
    pub k: f64,
    pub e: f64,
    pub m_lower: f64,
    pub c_univ: f64,
}

pub fn c0_constants(area_bound: f64, gap: f64, c_univ: f64) -> Result<C0Constants> {
    if !(area_bound > 0.0 && gap > 0.0 && c_univ > 0.0) {
        return Err(Error::InvalidInput {
            reason: "c0 constants need positive arguments",
        });
    }
    let k = 2.0 * (area_bound + 5.0 * math::PI) / gap;
    let e = 20.0 * math::PI * k / gap;
    Ok(C0Constants {
        area_bound,
        gap,
        k,
        e,
        m_lower: c_univ * e * e * e * e,
        c_univ,
    })
}

/// Convex hull by monotone chain, returned counterclockwise.
pub fn convex_hull(points: &[Point]) -> Result<PolyCurve> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_unstable_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= 1e-12);
    if pts.len() < 3 {
        return Err(Error::CollinearInput);
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::CollinearInput);
    }
    PolyCurve::closed(lower)
}

/// Containment test against a counterclockwise convex polygon.
pub fn point_in_convex(hull: &PolyCurve, p: Point, tol: f64) -> bool {
    let verts = hull.vertices();
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        if (b - a).cross(p - a) < -tol {
            return false;
        }
    }
    true
}

/// Test rectangle `[-x_half, x_half] x [y_lo, y_hi]` for hull-union
/// coverage reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverRect {
    pub x_half: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

/// Per-frame hull extents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameHull {
    pub t: f64,
    pub min_y: f64,
    pub max_y: f64,
    pub max_abs_x: f64,
}

/// Hull statistics of a trajectory plus coverage of test rectangles by
/// the running union of hulls.
#[derive(Debug, Clone, PartialEq)]
pub struct HullUnionStats {
    pub frames: Vec<FrameHull>,
    /// Fraction of each rectangle's sample grid covered by some hull.
    pub coverage: Vec<f64>,
    pub union_min_y: f64,
    pub union_max_y: f64,
    pub union_max_abs_x: f64,
}

pub fn hull_union_stats(traj: &FlowTrajectory, rects: &[CoverRect]) -> Result<HullUnionStats> {
    let mut hulls = Vec::new();
    let mut frames = Vec::new();
    let mut union_min_y = f64::INFINITY;
    let mut union_max_y = f64::NEG_INFINITY;
    let mut union_max_abs_x = 0.0f64;
    for (idx, snap) in traj.snapshots().iter().enumerate() {
        let pts: Vec<Point> = match snap {
            Snapshot::Curve(c) => c.vertices().to_vec(),
            Snapshot::Graph(g) => (0..g.len())
                .map(|i| Point::new(g.values()[i], g.grid_y(i)))
                .collect(),
        };
        let hull = convex_hull(&pts)?;
        let (lo, hi) = hull.bbox();
        frames.push(FrameHull {
            t: traj.times()[idx],
            min_y: lo.y,
            max_y: hi.y,
            max_abs_x: lo.x.abs().max(hi.x.abs()),
        });
        union_min_y = union_min_y.min(lo.y);
        union_max_y = union_max_y.max(hi.y);
        union_max_abs_x = union_max_abs_x.max(lo.x.abs().max(hi.x.abs()));
        hulls.push(hull);
    }
    let grid = 48;
    let coverage = rects
        .iter()
        .map(|r| {
            let mut inside = 0usize;
            for i in 0..grid {
                for j in 0..grid {
                    let x = -r.x_half + 2.0 * r.x_half * (i as f64 + 0.5) / grid as f64;
                    let y = r.y_lo + (r.y_hi - r.y_lo) * (j as f64 + 0.5) / grid as f64;
                    let p = Point::new(x, y);
                    if hulls.iter().any(|h| point_in_convex(h, p, 1e-12)) {
                        inside += 1;
                    }
                }
            }
            inside as f64 / (grid * grid) as f64
        })
        .collect();
    Ok(HullUnionStats {
        frames,
        coverage,
        union_min_y,
        union_max_y,
        union_max_abs_x,
    })
}

/// Turning number: total exterior angle divided by 2 pi, rounded.
pub fn turning_number(curve: &PolyCurve) -> Result<i32> {
    if !curve.is_closed() {
        return Err(Error::NotClosed);
    }
    let verts = curve.vertices();
    let n = verts.len();
    let mut total = 0.0;
    for i in 0..n {
        let prev = verts[(i + n - 1) % n];
        let here = verts[i];
        let next = verts[(i + 1) % n];
        let e0 = here - prev;
        let e1 = next - here;
        if e0.norm() <= 1e-12 || e1.norm() <= 1e-12 {
            return Err(Error::DegenerateCurve {
                reason: "zero-length edge in turning number",
            });
        }
        total += math::atan2(e0.cross(e1), e0.dot(e1));
    }
    Ok(math::round(total / (2.0 * math::PI)) as i32)
}

/// Maximum |curvature| of a polyline.
pub fn max_curvature(curve: &PolyCurve) -> Result<f64> {
    param_flow::max_abs_curvature(curve)
}

/// Symmetric Hausdorff distance between two polylines, measured on a
/// densified vertex set.
pub fn hausdorff_distance(a: &PolyCurve, b: &PolyCurve) -> f64 {
    let n = (2 * a.len().max(b.len())).max(64);
    let da = resample_uniform(a, n).unwrap_or_else(|_| a.clone());
    let db = resample_uniform(b, n).unwrap_or_else(|_| b.clone());
    let one_way = |from: &PolyCurve, to: &PolyCurve| -> f64 {
        from.vertices()
            .iter()
            .map(|p| to.distance_to_point(*p))
            .fold(0.0, f64::max)
    };
    one_way(&da, &db).max(one_way(&db, &da))
}
